use thiserror::Error;

/// Why a parametric Hensel lift stopped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ObstructionKind {
    /// The discriminant is not of the form `x^M * unit`, so the family is not ZE.
    NotEquisingular,
    /// The discriminant looks fine; more precision is needed.
    PrecisionInsufficient,
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("incompatible domains: {0}")]
    IncompatibleDomains(String),
    #[error("minimal polynomial is not monic")]
    NotMonic,
    #[error("inadmissible specialization: denominator {0} vanishes")]
    InadmissibleSpecialization(String),
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("series is not a unit (zero constant term)")]
    NotAUnit,
    #[error("series is not regular in {var}{}", level.map(|l| format!(" at level {l}; try a frame change")).unwrap_or_default())]
    NotRegular { var: String, level: Option<usize> },
    #[error("series vanishes to the working precision")]
    ZeroToPrecision,
    #[error("input is not reduced (discriminant vanishes identically)")]
    NotReduced,
    #[error("not a family germ: f(0, t) does not vanish identically")]
    NotAFamilyGerm,
    #[error("divisibility check failed: {0}")]
    DivisibilityFailure(String),
    #[error("exact division failed: {0}")]
    NotDivisible(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("attempt budget exhausted after {attempts} frames: {diagnostics:?}")]
    BudgetExhausted { attempts: usize, diagnostics: Vec<String> },
    #[error("projection is not finite on the hypersurface")]
    ProjectionNotFinite,
    #[error("Hensel lift obstructed ({kind:?}) at parameter degree {degree}")]
    LiftObstruction { kind: ObstructionKind, degree: usize },
    #[error("branch difference {i}-{j} has a non-unit cofactor")]
    NonUnitCofactor { i: usize, j: usize },
    #[error("wedge classification ambiguous: F'_Y vanishes only to precision")]
    ClassificationAmbiguous,
    #[error("order did not stabilize within precision")]
    OrderNotStabilized,
    #[error("identity `{identity}` violated on wedges {wedges:?}")]
    IdentityViolation { identity: String, wedges: Vec<usize> },
    #[error("contraction iteration stalled")]
    ContractionStall,
    #[error("contact mismatch between branches {i} and {j}: expected {expected}, found {found}")]
    ContactMismatch { i: usize, j: usize, expected: u32, found: u32 },
    #[error("variable mismatch: {0}")]
    VariableMismatch(String),
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("undeclared identifier `{0}`")]
    UndeclaredIdentifier(String),
    #[error("input is not singular at the origin")]
    NotSingular,
}

pub type Result<T> = std::result::Result<T, Error>;
