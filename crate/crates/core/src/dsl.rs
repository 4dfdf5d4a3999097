//! The `.lps` system-definition language.
//!
//! ```text
//! # plane stress
//! system stress
//! n = 2
//! param a = 1/2        # optional default value
//! unknowns s11, s12, s22
//! eq d1*s11 + d2*s12 = 0
//! eq d1*s12 + d2*s22 = 0
//! ```
//!
//! A term is a product of an optional rational, named parameters,
//! derivative symbols `dI` / `dI^K` and exactly one unknown. Diagnostics
//! carry a stable code and a 1-based line/column.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::diffop::{default_names, OperatorError, OperatorMatrix, ParamPolynomial, ParametricOperator};
use crate::exact_poly::{Monomial, Polynomial, Rational, MAX_VARS};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCode {
    /// Malformed line or expression.
    Syntax,
    /// Identifier that is neither an unknown nor a parameter.
    UnknownIdentifier,
    /// Product of two unknowns.
    Nonlinear,
    /// `dI` with `I` outside `1..=n`.
    DerivativeIndex,
    DuplicateUnknown,
    UnboundParameter,
    /// Term that does not mention an unknown.
    MissingUnknown,
}

impl ErrorCode {
    pub fn as_str(&self) -> &'static str {
        match self {
            ErrorCode::Syntax => "E001",
            ErrorCode::UnknownIdentifier => "E002",
            ErrorCode::Nonlinear => "E003",
            ErrorCode::DerivativeIndex => "E004",
            ErrorCode::DuplicateUnknown => "E005",
            ErrorCode::UnboundParameter => "E006",
            ErrorCode::MissingUnknown => "E007",
        }
    }
}

impl fmt::Display for ErrorCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{code} at {line}:{column}: {message}")]
pub struct DslError {
    pub code: ErrorCode,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl DslError {
    fn new(code: ErrorCode, line: usize, column: usize, message: impl Into<String>) -> Self {
        DslError {
            code,
            line,
            column,
            message: message.into(),
        }
    }
}

/// One parsed term `coeff · params · mono · unknown`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceTerm {
    pub coeff: Rational,
    pub params: Vec<(String, u32)>,
    pub mono: Monomial,
    pub unknown: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceEquation {
    pub line: usize,
    pub terms: Vec<SourceTerm>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemSource {
    pub name: String,
    pub nvars: usize,
    pub unknowns: Vec<String>,
    /// Declared parameters with their optional default values.
    pub params: BTreeMap<String, Option<Rational>>,
    pub equations: Vec<SourceEquation>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Eq,
    Comma,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// Tokens of one line with their 1-based columns.
fn lex(line: &str, lineno: usize) -> Result<Vec<(Tok, usize)>, DslError> {
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let s = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[s..i].iter().collect();
            out.push((Tok::Int(text.parse().expect("digits")), col));
            continue;
        }
        if is_ident_start(c) {
            let s = i;
            while i < chars.len() && is_ident_char(chars[i]) {
                i += 1;
            }
            out.push((Tok::Ident(chars[s..i].iter().collect()), col));
            continue;
        }
        let t = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '=' => Tok::Eq,
            ',' => Tok::Comma,
            _ => {
                return Err(DslError::new(
                    ErrorCode::Syntax,
                    lineno,
                    col,
                    format!("unexpected character `{c}`"),
                ))
            }
        };
        out.push((t, col));
        i += 1;
    }
    Ok(out)
}

/// `dI` → `Some(I)`.
fn derivative_index(name: &str) -> Option<usize> {
    let rest = name.strip_prefix('d')?;
    if rest.is_empty() || !rest.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    rest.parse().ok()
}

struct Cursor<'a> {
    toks: &'a [(Tok, usize)],
    pos: usize,
    line: usize,
    end_col: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.1).unwrap_or(self.end_col)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.0.clone());
        self.pos += 1;
        t
    }

    fn syntax(&self, msg: impl Into<String>) -> DslError {
        DslError::new(ErrorCode::Syntax, self.line, self.col(), msg)
    }

    fn expect_int(&mut self) -> Result<BigInt, DslError> {
        match self.peek() {
            Some(Tok::Int(v)) => {
                let v = v.clone();
                self.pos += 1;
                Ok(v)
            }
            _ => Err(self.syntax("expected an integer")),
        }
    }

    fn expect_ident(&mut self) -> Result<(String, usize), DslError> {
        let col = self.col();
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok((s, col))
            }
            _ => Err(self.syntax("expected an identifier")),
        }
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), DslError> {
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.syntax(format!("expected {what}")))
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn expect_end(&self) -> Result<(), DslError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.syntax("unexpected trailing input"))
        }
    }
}

/// `[+|-] INT [/ INT]`.
fn parse_signed_rational(c: &mut Cursor) -> Result<Rational, DslError> {
    let neg = match c.peek() {
        Some(Tok::Minus) => {
            c.pos += 1;
            true
        }
        Some(Tok::Plus) => {
            c.pos += 1;
            false
        }
        _ => false,
    };
    let num = c.expect_int()?;
    let mut r = Rational::from_integer(num);
    if c.peek() == Some(&Tok::Slash) {
        c.pos += 1;
        let col = c.col();
        let den = c.expect_int()?;
        if den.is_zero() {
            return Err(DslError::new(ErrorCode::Syntax, c.line, col, "zero denominator"));
        }
        r /= Rational::from_integer(den);
    }
    Ok(if neg { -r } else { r })
}

struct Context<'a> {
    nvars: usize,
    unknowns: &'a [String],
    params: &'a BTreeMap<String, Option<Rational>>,
}

fn parse_term(c: &mut Cursor, ctx: &Context, sign: bool, term_col: usize) -> Result<SourceTerm, DslError> {
    let mut coeff = if sign { -Rational::one() } else { Rational::one() };
    let mut params: BTreeMap<String, u32> = BTreeMap::new();
    let mut exps = vec![0u32; ctx.nvars];
    let mut unknown: Option<usize> = None;
    loop {
        let col = c.col();
        match c.next() {
            Some(Tok::Int(v)) => {
                let mut r = Rational::from_integer(v);
                if c.peek() == Some(&Tok::Slash) {
                    c.pos += 1;
                    let dcol = c.col();
                    let den = c.expect_int()?;
                    if den.is_zero() {
                        return Err(DslError::new(ErrorCode::Syntax, c.line, dcol, "zero denominator"));
                    }
                    r /= Rational::from_integer(den);
                }
                coeff *= r;
            }
            Some(Tok::Ident(name)) => {
                let mut power = 1u32;
                if c.peek() == Some(&Tok::Caret) {
                    c.pos += 1;
                    let pcol = c.col();
                    let p = c.expect_int()?;
                    power = u32::try_from(&p)
                        .ok()
                        .filter(|&p| p <= u16::MAX as u32)
                        .ok_or_else(|| DslError::new(ErrorCode::Syntax, c.line, pcol, "exponent too large"))?;
                }
                if let Some(k) = ctx.unknowns.iter().position(|u| *u == name) {
                    if unknown.is_some() {
                        return Err(DslError::new(
                            ErrorCode::Nonlinear,
                            c.line,
                            col,
                            format!("term multiplies two unknowns (second: `{name}`)"),
                        ));
                    }
                    if power != 1 {
                        return Err(DslError::new(
                            ErrorCode::Nonlinear,
                            c.line,
                            col,
                            format!("power of unknown `{name}`"),
                        ));
                    }
                    unknown = Some(k);
                } else if ctx.params.contains_key(&name) {
                    *params.entry(name).or_insert(0) += power;
                } else if let Some(i) = derivative_index(&name) {
                    if i == 0 || i > ctx.nvars {
                        return Err(DslError::new(
                            ErrorCode::DerivativeIndex,
                            c.line,
                            col,
                            format!("derivative `{name}` out of range for n = {}", ctx.nvars),
                        ));
                    }
                    exps[i - 1] += power;
                } else {
                    return Err(DslError::new(
                        ErrorCode::UnknownIdentifier,
                        c.line,
                        col,
                        format!("unknown identifier `{name}`"),
                    ));
                }
            }
            _ => {
                return Err(DslError::new(ErrorCode::Syntax, c.line, col, "expected a factor"));
            }
        }
        match c.peek() {
            Some(Tok::Star) => c.pos += 1,
            Some(Tok::Ident(_)) | Some(Tok::Int(_)) => return Err(c.syntax("expected `*` between factors")),
            _ => break,
        }
    }
    let unknown = unknown.ok_or_else(|| {
        DslError::new(ErrorCode::MissingUnknown, c.line, term_col, "term does not contain an unknown")
    })?;
    let mono = Monomial::from_exponents(&exps)
        .map_err(|e| DslError::new(ErrorCode::Syntax, c.line, term_col, e.to_string()))?;
    Ok(SourceTerm {
        coeff,
        params: params.into_iter().collect(),
        mono,
        unknown,
    })
}

fn parse_equation(c: &mut Cursor, ctx: &Context) -> Result<Vec<SourceTerm>, DslError> {
    let mut terms = Vec::new();
    let mut first = true;
    loop {
        let sign = match c.peek() {
            Some(Tok::Plus) => {
                c.pos += 1;
                false
            }
            Some(Tok::Minus) => {
                c.pos += 1;
                true
            }
            _ if first => false,
            _ => return Err(c.syntax("expected `+`, `-` or `= 0`")),
        };
        let col = c.col();
        terms.push(parse_term(c, ctx, sign, col)?);
        first = false;
        if c.peek() == Some(&Tok::Eq) {
            break;
        }
        if c.at_end() {
            return Err(c.syntax("expected `= 0`"));
        }
    }
    c.expect(Tok::Eq, "`=`")?;
    match c.next() {
        Some(Tok::Int(v)) if v.is_zero() => {}
        _ => {
            c.pos -= 1;
            return Err(c.syntax("right-hand side must be 0"));
        }
    }
    c.expect_end()?;
    Ok(terms)
}

/// Parses `.lps` text.
pub fn parse_system(text: &str) -> Result<SystemSource, DslError> {
    let mut name: Option<String> = None;
    let mut nvars: Option<usize> = None;
    let mut unknowns: Option<Vec<String>> = None;
    let mut params: BTreeMap<String, Option<Rational>> = BTreeMap::new();
    let mut equations = Vec::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        last_line = lineno;
        let toks = lex(raw, lineno)?;
        if toks.is_empty() {
            continue;
        }
        let end_col = raw.split('#').next().unwrap_or("").trim_end().chars().count() + 1;
        let mut c = Cursor {
            toks: &toks,
            pos: 0,
            line: lineno,
            end_col,
        };
        let (kw, kcol) = c.expect_ident()?;
        match kw.as_str() {
            "system" => {
                let (id, _) = c.expect_ident()?;
                c.expect_end()?;
                name = Some(id);
            }
            "n" => {
                c.expect(Tok::Eq, "`=`")?;
                let col = c.col();
                let v = c.expect_int()?;
                c.expect_end()?;
                let n = usize::try_from(&v)
                    .ok()
                    .filter(|&n| (1..=MAX_VARS).contains(&n))
                    .ok_or_else(|| {
                        DslError::new(ErrorCode::Syntax, lineno, col, format!("n must be in 1..={MAX_VARS}"))
                    })?;
                nvars = Some(n);
            }
            "param" => {
                let (id, icol) = c.expect_ident()?;
                if derivative_index(&id).is_some() {
                    return Err(DslError::new(ErrorCode::Syntax, lineno, icol, format!("`{id}` is reserved")));
                }
                let value = if c.peek() == Some(&Tok::Eq) {
                    c.pos += 1;
                    Some(parse_signed_rational(&mut c)?)
                } else {
                    None
                };
                c.expect_end()?;
                params.insert(id, value);
            }
            "unknowns" => {
                let mut list: Vec<String> = Vec::new();
                loop {
                    let (id, icol) = c.expect_ident()?;
                    if derivative_index(&id).is_some() {
                        return Err(DslError::new(ErrorCode::Syntax, lineno, icol, format!("`{id}` is reserved")));
                    }
                    if list.contains(&id) || params.contains_key(&id) {
                        return Err(DslError::new(
                            ErrorCode::DuplicateUnknown,
                            lineno,
                            icol,
                            format!("duplicate name `{id}`"),
                        ));
                    }
                    list.push(id);
                    if c.peek() == Some(&Tok::Comma) {
                        c.pos += 1;
                    } else {
                        break;
                    }
                }
                c.expect_end()?;
                unknowns = Some(list);
            }
            "eq" => {
                let n = nvars.ok_or_else(|| DslError::new(ErrorCode::Syntax, lineno, kcol, "`n = ...` must precede equations"))?;
                let empty = Vec::new();
                let ctx = Context {
                    nvars: n,
                    unknowns: unknowns.as_ref().unwrap_or(&empty),
                    params: &params,
                };
                let terms = parse_equation(&mut c, &ctx)?;
                equations.push(SourceEquation { line: lineno, terms });
            }
            other => {
                return Err(DslError::new(
                    ErrorCode::Syntax,
                    lineno,
                    kcol,
                    format!("unknown directive `{other}`"),
                ))
            }
        }
    }
    let missing = |what: &str| DslError::new(ErrorCode::Syntax, last_line.max(1), 1, format!("missing `{what}` line"));
    Ok(SystemSource {
        name: name.ok_or_else(|| missing("system"))?,
        nvars: nvars.ok_or_else(|| missing("n ="))?,
        unknowns: unknowns.ok_or_else(|| missing("unknowns"))?,
        params,
        equations,
    })
}

impl SystemSource {
    /// Operator template with parameters left symbolic.
    pub fn template(&self) -> ParametricOperator {
        let n = self.nvars;
        let m = self.unknowns.len();
        let entries = self
            .equations
            .iter()
            .map(|eq| {
                let mut row = vec![ParamPolynomial::zero(n); m];
                for t in &eq.terms {
                    row[t.unknown].add_term(t.params.clone(), t.mono, t.coeff.clone());
                }
                row
            })
            .collect();
        ParametricOperator {
            nvars: n,
            entries,
            unknown_names: self.unknowns.clone(),
            equation_names: default_names("e", self.equations.len()),
        }
    }
}

/// Substitutes parameters (explicit bindings override file defaults).
pub fn lower_to_operator(src: &SystemSource, bindings: &BTreeMap<String, Rational>) -> Result<OperatorMatrix, DslError> {
    let mut values: BTreeMap<String, Rational> = BTreeMap::new();
    for (k, v) in &src.params {
        if let Some(v) = v {
            values.insert(k.clone(), v.clone());
        }
    }
    for (k, v) in bindings {
        values.insert(k.clone(), v.clone());
    }
    let template = src.template();
    template.substitute_params(&values).map_err(|e| match e {
        OperatorError::UnboundParameter(p) => {
            let line = src
                .equations
                .iter()
                .find(|eq| eq.terms.iter().any(|t| t.params.iter().any(|(n, _)| *n == p)))
                .map(|eq| eq.line)
                .unwrap_or(1);
            DslError::new(ErrorCode::UnboundParameter, line, 1, format!("parameter `{p}` has no value"))
        }
        other => DslError::new(ErrorCode::Syntax, 1, 1, other.to_string()),
    })
}

/// Renders an operator as `.lps` text that parses back to the same matrix.
pub fn render_system(a: &OperatorMatrix, name: &str) -> String {
    let ord = crate::exact_poly::MonomialOrder::default();
    let mut s = format!("system {name}\nn = {}\nunknowns {}\n", a.nvars(), a.unknown_names().join(", "));
    for i in 0..a.nrows() {
        let row = &a.entries()[i];
        let body = if row.iter().all(Polynomial::is_zero) {
            format!("0*{}", a.unknown_names().first().map(String::as_str).unwrap_or("y"))
        } else {
            a.render_equation(i, &ord)
        };
        s.push_str(&format!("eq {body} = 0\n"));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_poly::int;

    const STRESS: &str = "system stress\nn = 2\nunknowns s11, s12, s22\neq d1*s11 + d2*s12 = 0\neq d1*s12 + d2*s22 = 0";
    const KALMAN: &str = "system kalman\nn = 1\nparam a\nunknowns y1, y2, y3\neq d1*y1 - a*y2 - d1*y3 = 0\neq y1 - d1*y2 + d1*y3 = 0";

    #[test]
    fn stress_source() {
        let src = parse_system(STRESS).unwrap();
        let a = lower_to_operator(&src, &BTreeMap::new()).unwrap();
        let (d1, d2) = (Polynomial::var(2, 0), Polynomial::var(2, 1));
        let z = Polynomial::zero(2);
        assert_eq!(a.entries(), &[vec![d1.clone(), d2.clone(), z.clone()], vec![z, d1, d2]]);
        assert_eq!(a.unknown_names(), &["s11", "s12", "s22"]);
    }

    #[test]
    fn kalman_parameter() {
        let src = parse_system(KALMAN).unwrap();
        assert_eq!(src.params.get("a"), Some(&None));
        let err = lower_to_operator(&src, &BTreeMap::new()).unwrap_err();
        assert_eq!(err.code, ErrorCode::UnboundParameter);
        assert_eq!(err.line, 5);
        let mut b = BTreeMap::new();
        b.insert("a".to_string(), int(0));
        let a = lower_to_operator(&src, &b).unwrap();
        assert!(a.entry(0, 1).is_zero());
        assert_eq!(a.entry(1, 0), &Polynomial::one(1));
    }

    #[test]
    fn defaults_and_overrides() {
        let text = "system k\nn = 1\nparam a = -3/2\nunknowns y\neq a^2*d1*y + a*y = 0";
        let src = parse_system(text).unwrap();
        let a = lower_to_operator(&src, &BTreeMap::new()).unwrap();
        let expect = &Polynomial::var(1, 0).scale(&crate::exact_poly::rat(9, 4)) + &Polynomial::constant(1, crate::exact_poly::rat(-3, 2));
        assert_eq!(a.entry(0, 0), &expect);
        let mut b = BTreeMap::new();
        b.insert("a".to_string(), int(1));
        let a = lower_to_operator(&src, &b).unwrap();
        assert_eq!(a.entry(0, 0), &(&Polynomial::var(1, 0) + &Polynomial::one(1)));
    }

    fn code_of(text: &str) -> (ErrorCode, usize, usize) {
        let e = parse_system(text).unwrap_err();
        (e.code, e.line, e.column)
    }

    #[test]
    fn diagnostics() {
        let head = "system s\nn = 2\nunknowns s11, s12\n";
        assert_eq!(code_of(&format!("{head}eq s11*s12 = 0")), (ErrorCode::Nonlinear, 4, 8));
        assert_eq!(code_of(&format!("{head}eq d1*s11 + q*s12 = 0")).0, ErrorCode::UnknownIdentifier);
        assert_eq!(code_of(&format!("{head}eq d3*s11 = 0")), (ErrorCode::DerivativeIndex, 4, 4));
        assert_eq!(code_of("system s\nn = 2\nunknowns u, v, u\n").0, ErrorCode::DuplicateUnknown);
        assert_eq!(code_of(&format!("{head}eq d1*d2 + s11 = 0")), (ErrorCode::MissingUnknown, 4, 4));
        assert_eq!(code_of(&format!("{head}eq d1*s11 = 1")).0, ErrorCode::Syntax);
        assert_eq!(code_of(&format!("{head}eq d1*s11 +")).0, ErrorCode::Syntax);
        assert_eq!(code_of(&format!("{head}eq d1 s11 = 0")).0, ErrorCode::Syntax);
        assert_eq!(code_of(&format!("{head}frobnicate")).0, ErrorCode::Syntax);
        assert_eq!(code_of("n = 2\nunknowns u\n").0, ErrorCode::Syntax);
        let e = parse_system(&format!("{head}eq s11*s12 = 0")).unwrap_err();
        assert_eq!(e.to_string(), "E003 at 4:8: term multiplies two unknowns (second: `s12`)");
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# header\n\nsystem s   # name\nn = 1\nunknowns y\n\neq d1^2*y = 0 # ode\n";
        let src = parse_system(text).unwrap();
        assert_eq!(src.equations.len(), 1);
        assert_eq!(src.equations[0].line, 7);
    }

    #[test]
    fn empty_equation_list() {
        let src = parse_system("system e\nn = 2\nunknowns u, v").unwrap();
        let a = lower_to_operator(&src, &BTreeMap::new()).unwrap();
        assert_eq!((a.nrows(), a.ncols()), (0, 2));
    }

    #[test]
    fn render_round_trip() {
        let src = parse_system(KALMAN).unwrap();
        let mut b = BTreeMap::new();
        b.insert("a".to_string(), crate::exact_poly::rat(-7, 3));
        let a = lower_to_operator(&src, &b).unwrap();
        let text = render_system(&a, "kalman");
        let back = lower_to_operator(&parse_system(&text).unwrap(), &BTreeMap::new()).unwrap();
        assert!(back.same_entries(&a));
        let z = OperatorMatrix::zero(2, 1, 2);
        let back = lower_to_operator(&parse_system(&render_system(&z, "z")).unwrap(), &BTreeMap::new()).unwrap();
        assert!(back.same_entries(&z));
    }
}
