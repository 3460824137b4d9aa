//! Inputs shared by the kernel benchmarks.

use zeqsing::parse::parse_rational;
use zeqsing::series::vars;
use zeqsing::{Rational, Series};

pub const CONE: &str = "z^2 - x^2 - (1+t)*y^2";

pub fn family(s: &str) -> Series<Rational> {
    parse_rational(s, &vars(&["x", "y", "z", "t"])).expect("benchmark input parses")
}

pub fn curve(s: &str) -> Series<Rational> {
    parse_rational(s, &vars(&["x", "y", "t"])).expect("benchmark input parses")
}
