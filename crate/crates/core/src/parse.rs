//! Input grammar.
//!
//! ```text
//! vars: x y z
//! params: t
//! tau: a
//! precision: 16
//! z^2 - x^2 - (1+t)*y^2
//! ```
//!
//! Expressions use `+ - * / ^`, parentheses and integer literals; `/` is only
//! allowed by coefficient expressions (no ring variables).

use std::sync::Arc;

use crate::coeffs::{Coeff, Rational, UniRational};
use crate::error::{Error, Result};
use crate::series::{Series, Vars};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Declarations {
    pub vars: Vec<String>,
    pub params: Vec<String>,
    pub tau: Vec<String>,
    pub precision: Option<u32>,
}

impl Declarations {
    /// Ring variables: the declared variables followed by the parameter block.
    pub fn ring(&self) -> Vars {
        Arc::new(self.vars.iter().chain(&self.params).cloned().collect())
    }
}

#[derive(Debug, Clone)]
pub struct Parsed {
    pub decls: Declarations,
    pub exprs: Vec<Series<UniRational>>,
}

/// Parse a header plus one expression per non-header line.
pub fn parse_input(text: &str) -> Result<Parsed> {
    let mut decls = Declarations::default();
    let mut lines = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        if let Some((key, rest)) = line.split_once(':') {
            let names: Vec<String> = rest.split_whitespace().map(String::from).collect();
            match key.trim() {
                "vars" => decls.vars = names,
                "params" => decls.params = names,
                "tau" => decls.tau = names,
                "precision" => {
                    let n = rest.trim().parse::<u32>().map_err(|e| Error::Syntax {
                        line: ln + 1,
                        col: key.len() + 2,
                        msg: format!("bad precision: {e}"),
                    })?;
                    decls.precision = Some(n);
                }
                k => {
                    return Err(Error::Syntax { line: ln + 1, col: 1, msg: format!("unknown header `{k}`") });
                }
            }
            continue;
        }
        lines.push((ln + 1, line.to_string()));
    }
    for n in decls.vars.iter().chain(&decls.params).chain(&decls.tau) {
        let count = decls.vars.iter().chain(&decls.params).chain(&decls.tau).filter(|m| *m == n).count();
        if count > 1 || !is_ident(n) {
            return Err(Error::Syntax { line: 1, col: 1, msg: format!("bad or duplicate name `{n}`") });
        }
    }
    let ring = decls.ring();
    let mut exprs = Vec::new();
    for (ln, l) in lines {
        exprs.push(parse_expr_at(&l, &ring, &decls.tau, ln)?);
    }
    Ok(Parsed { decls, exprs })
}

fn is_ident(s: &str) -> bool {
    let mut cs = s.chars();
    cs.next().is_some_and(|c| c.is_alphabetic() || c == '_') && cs.all(|c| c.is_alphanumeric() || c == '_')
}

/// Parse one expression over the ring `vars` with coefficient indeterminates `tau`.
pub fn parse_expr(text: &str, vars: &Vars, tau: &[String]) -> Result<Series<UniRational>> {
    parse_expr_at(text, vars, tau, 1)
}

/// Parse an expression without tau and return it over the rationals.
pub fn parse_rational(text: &str, vars: &Vars) -> Result<Series<Rational>> {
    let s = parse_expr(text, vars, &[])?;
    Ok(to_rational(&s).expect("tau-free"))
}

/// Drop to rational coefficients if no tau occurs.
pub fn to_rational(s: &Series<UniRational>) -> Option<Series<Rational>> {
    let bad = s.terms().any(|(_, c)| c.specialize(&[]).is_err() || c.numerator().nvars() > 0 || c.base().nvars() > 0);
    if bad {
        return None;
    }
    Some(s.map_coeffs(|c| c.specialize(&[]).unwrap()))
}

pub fn from_rational(s: &Series<Rational>) -> Series<UniRational> {
    s.map_coeffs(UniRational::from_rational)
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Op(char),
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
    vars: &'a Vars,
    tau: &'a [String],
    names: Arc<Vec<String>>,
}

fn tokenize(s: &str, line: usize) -> Result<Vec<(Tok, usize)>> {
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    let mut out = Vec::new();
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            out.push((Tok::Num(cs[st..i].iter().collect()), st + 1));
        } else if c.is_alphabetic() || c == '_' {
            let st = i;
            while i < cs.len() && (cs[i].is_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(cs[st..i].iter().collect()), st + 1));
        } else if "+-*/^()".contains(c) {
            out.push((Tok::Op(c), i + 1));
            i += 1;
        } else if c == '−' {
            out.push((Tok::Op('-'), i + 1));
            i += 1;
        } else {
            return Err(Error::Syntax { line, col: i + 1, msg: format!("unexpected character `{c}`") });
        }
    }
    Ok(out)
}

fn parse_expr_at(text: &str, vars: &Vars, tau: &[String], line: usize) -> Result<Series<UniRational>> {
    let toks = tokenize(text, line)?;
    let mut p = Parser { toks, pos: 0, line, vars, tau, names: Arc::new(tau.to_vec()) };
    let e = p.expr()?;
    if p.pos < p.toks.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

impl Parser<'_> {
    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or_else(|| self.toks.last().map_or(1, |t| t.1 + 1), |t| t.1)
    }

    fn err(&self, msg: &str) -> Error {
        Error::Syntax { line: self.line, col: self.col(), msg: msg.into() }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn expr(&mut self) -> Result<Series<UniRational>> {
        let mut acc = self.term()?;
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let t = self.term()?;
            acc = if c == '+' { acc.add(&t) } else { acc.sub(&t) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Series<UniRational>> {
        let mut acc = self.unary()?;
        while let Some(Tok::Op(c @ ('*' | '/'))) = self.peek().cloned() {
            self.pos += 1;
            let col = self.col();
            let t = self.unary()?;
            if c == '*' {
                acc = acc.mul(&t);
            } else {
                let only_const = t.terms().all(|(e, _)| e.iter().all(|k| *k == 0));
                if !only_const {
                    return Err(Error::Syntax { line: self.line, col, msg: "division by a non-constant".into() });
                }
                let c = t.constant_term();
                let inv = c.try_inv().ok_or(Error::DivisionByZero)?;
                acc = acc.scale(&inv);
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Series<UniRational>> {
        match self.peek() {
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some(Tok::Op('+')) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Series<UniRational>> {
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.pos += 1;
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let e: u32 = n.parse().map_err(|_| self.err("exponent too large"))?;
                    return Ok(base.pow(e));
                }
                _ => return Err(self.err("expected a non-negative integer exponent")),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Series<UniRational>> {
        let Some(tok) = self.peek().cloned() else {
            return Err(self.err("unexpected end of input"));
        };
        self.pos += 1;
        match tok {
            Tok::Num(n) => {
                let r: Rational = n.parse().map_err(|e: String| self.err(&e))?;
                Ok(Series::constant(self.vars, UniRational::from_rational(&r)))
            }
            Tok::Ident(name) => {
                if let Some(i) = self.vars.iter().position(|v| *v == name) {
                    Ok(Series::var(self.vars, i))
                } else if let Some(i) = self.tau.iter().position(|v| *v == name) {
                    Ok(Series::constant(self.vars, UniRational::tau(i).with_names(self.names.clone())))
                } else {
                    Err(Error::UndeclaredIdentifier(name))
                }
            }
            Tok::Op('(') => {
                let e = self.expr()?;
                match self.peek() {
                    Some(Tok::Op(')')) => {
                        self.pos += 1;
                        Ok(e)
                    }
                    _ => Err(self.err("expected `)`")),
                }
            }
            Tok::Op(c) => {
                self.pos -= 1;
                Err(self.err(&format!("unexpected `{c}`")))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::vars;

    #[test]
    fn cone_family() {
        let p = parse_input("vars: x y z\nparams: t\nz^2 - x^2 - (1+t)*y^2").unwrap();
        assert_eq!(p.decls.ring().as_ref(), &["x", "y", "z", "t"]);
        let f = to_rational(&p.exprs[0]).unwrap();
        assert_eq!(f.len(), 4);
        assert_eq!(f.coeff(&[0, 2, 0, 1]), Rational::from(-1));
    }

    #[test]
    fn undeclared() {
        let v = vars(&["x", "y", "z"]);
        assert_eq!(parse_expr("z^2 - w", &v, &[]).unwrap_err(), Error::UndeclaredIdentifier("w".into()));
    }

    #[test]
    fn syntax_position() {
        let err = parse_input("vars: x y\ny^2 - * x").unwrap_err();
        assert_eq!(err, Error::Syntax { line: 2, col: 7, msg: "unexpected `*`".into() });
    }

    #[test]
    fn tau_division() {
        let v = vars(&["x", "z"]);
        let f = parse_expr("z^2 - x/(1-a)", &v, &["a".to_string()]).unwrap();
        assert!(to_rational(&f).is_none());
        let c = f.coeff(&[1, 0]);
        assert_eq!(c.specialize(&[Rational::from(3)]).unwrap(), Rational::new(1, 2));
        assert!(c.specialize(&[Rational::from(1)]).is_err());
        assert!(parse_expr("z/x", &v, &[]).is_err());
    }
}
