//! Exact rationals and multivariate polynomials in the operator symbols.
//!
//! A polynomial in `d1..dn` stands for a constant-coefficient differential
//! operator: the symbol `di` is the derivation along the i-th coordinate.
//! Coefficients are arbitrary-precision rationals; there is no floating
//! point anywhere in this crate.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Ground field element. Always stored in lowest terms with a positive
/// denominator (guaranteed by `num_rational`).
pub type Rational = BigRational;

/// Largest supported number of operator symbols.
pub const MAX_VARS: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("dimension mismatch: {left} vs {right} variables")]
    DimensionMismatch { left: usize, right: usize },
    #[error("at most {MAX_VARS} variables are supported, got {0}")]
    TooManyVariables(usize),
    #[error("exponent {0} does not fit in a monomial")]
    ExponentOverflow(u32),
    #[error("invalid rational literal `{0}`")]
    BadRational(String),
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `7`, `-3/2`, `+4` into a rational.
pub fn parse_rational(s: &str) -> Result<Rational, PolyError> {
    let t = s.trim();
    let t = t.strip_prefix('+').unwrap_or(t);
    let bad = || PolyError::BadRational(s.to_string());
    match t.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(t.parse().map_err(|_| bad())?)),
    }
}

/// A multi-index `μ`, i.e. the monomial `d1^μ1 ... dn^μn`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    nvars: u8,
    exps: [u16; MAX_VARS],
}

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        assert!(nvars <= MAX_VARS, "at most {MAX_VARS} variables");
        Monomial {
            nvars: nvars as u8,
            exps: [0; MAX_VARS],
        }
    }

    /// The symbol `d(i+1)` (zero-based index).
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = Self::one(nvars);
        assert!(i < nvars, "variable index out of range");
        m.exps[i] = 1;
        m
    }

    pub fn from_exponents(exps: &[u32]) -> Result<Self, PolyError> {
        if exps.len() > MAX_VARS {
            return Err(PolyError::TooManyVariables(exps.len()));
        }
        let mut m = Self::one(exps.len());
        for (slot, &e) in m.exps.iter_mut().zip(exps) {
            *slot = u16::try_from(e).map_err(|_| PolyError::ExponentOverflow(e))?;
        }
        Ok(m)
    }

    pub fn nvars(&self) -> usize {
        self.nvars as usize
    }

    pub fn exponents(&self) -> &[u16] {
        &self.exps[..self.nvars as usize]
    }

    pub fn exponent(&self, i: usize) -> u32 {
        self.exps[i] as u32
    }

    pub fn degree(&self) -> u32 {
        self.exponents().iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    /// Class of the multi-index: the one-based index of the first nonzero
    /// exponent, `None` for the constant monomial.
    pub fn class(&self) -> Option<usize> {
        self.exponents().iter().position(|&e| e != 0).map(|i| i + 1)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = *self;
        for (a, b) in out.exps.iter_mut().zip(other.exps.iter()) {
            *a += *b;
        }
        out
    }

    /// Multiplies by `d(i+1)`.
    pub fn bump(&self, i: usize) -> Monomial {
        let mut out = *self;
        out.exps[i] += 1;
        out
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(other.exps.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self` when `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        let mut out = *other;
        for (a, b) in out.exps.iter_mut().zip(self.exps.iter()) {
            *a -= *b;
        }
        Some(out)
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let mut out = *self;
        for (a, b) in out.exps.iter_mut().zip(other.exps.iter()) {
            *a = (*a).max(*b);
        }
        out
    }

    /// Renders as `d1^2*d3`, or `1` for the constant monomial.
    pub fn render(&self) -> String {
        let parts: Vec<String> = self
            .exponents()
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                if e == 1 {
                    format!("d{}", i + 1)
                } else {
                    format!("d{}^{}", i + 1, e)
                }
            })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }

    /// All monomials in `nvars` variables of total degree exactly `deg`.
    pub fn all_of_degree(nvars: usize, deg: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; nvars];
        fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if i + 1 == cur.len() {
                cur[i] = left;
                out.push(Monomial::from_exponents(cur).expect("bounded"));
                return;
            }
            for e in (0..=left).rev() {
                cur[i] = e;
                rec(i + 1, left - e, cur, out);
            }
            cur[i] = 0;
        }
        if nvars == 0 {
            if deg == 0 {
                out.push(Monomial::one(0));
            }
            return out;
        }
        rec(0, deg, &mut cur, &mut out);
        out
    }

    /// All monomials of total degree at most `deg`, by increasing degree.
    pub fn all_up_to_degree(nvars: usize, deg: u32) -> Vec<Monomial> {
        (0..=deg)
            .flat_map(|d| Self::all_of_degree(nvars, d))
            .collect()
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrderKind {
    #[default]
    Degrevlex,
    Deglex,
    Lex,
}

impl std::str::FromStr for OrderKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "degrevlex" => Ok(OrderKind::Degrevlex),
            "deglex" => Ok(OrderKind::Deglex),
            "lex" => Ok(OrderKind::Lex),
            other => Err(format!("unknown monomial order `{other}`")),
        }
    }
}

impl fmt::Display for OrderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OrderKind::Degrevlex => "degrevlex",
            OrderKind::Deglex => "deglex",
            OrderKind::Lex => "lex",
        })
    }
}

/// How monomial orders extend to free modules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ModuleExtension {
    #[default]
    PositionOverTerm,
    TermOverPosition,
}

/// Position ties are always broken with the lower component index ranking
/// higher; the enum exists so the choice is explicit in the order value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum TiePosition {
    #[default]
    LowerIndexFirst,
}

/// A total, multiplicative well-order on monomials (with `d1 > d2 > ...`)
/// together with its extension to module terms `(position, monomial)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct MonomialOrder {
    pub kind: OrderKind,
    pub extension: ModuleExtension,
    pub tie: TiePosition,
}

impl MonomialOrder {
    pub fn new(kind: OrderKind) -> Self {
        MonomialOrder {
            kind,
            ..Default::default()
        }
    }

    pub fn with_extension(mut self, extension: ModuleExtension) -> Self {
        self.extension = extension;
        self
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        debug_assert_eq!(a.nvars, b.nvars);
        let n = a.nvars();
        let lex = || {
            for i in 0..n {
                match a.exps[i].cmp(&b.exps[i]) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
            Ordering::Equal
        };
        match self.kind {
            OrderKind::Lex => lex(),
            OrderKind::Deglex => a.degree().cmp(&b.degree()).then_with(lex),
            OrderKind::Degrevlex => a.degree().cmp(&b.degree()).then_with(|| {
                for i in (0..n).rev() {
                    match a.exps[i].cmp(&b.exps[i]) {
                        Ordering::Equal => continue,
                        o => return o.reverse(),
                    }
                }
                Ordering::Equal
            }),
        }
    }

    /// Compares module terms `(position, monomial)`.
    pub fn cmp_terms(&self, a: (usize, &Monomial), b: (usize, &Monomial)) -> Ordering {
        let pos = b.0.cmp(&a.0);
        match self.extension {
            ModuleExtension::PositionOverTerm => pos.then_with(|| self.cmp(a.1, b.1)),
            ModuleExtension::TermOverPosition => self.cmp(a.1, b.1).then(pos),
        }
    }
}

/// Free function form of [`MonomialOrder::cmp`].
pub fn monomial_cmp(u: &Monomial, v: &Monomial, ord: &MonomialOrder) -> Ordering {
    ord.cmp(u, v)
}

/// Multivariate polynomial with rational coefficients in `nvars` symbols.
/// Zero coefficients are never stored, so structural equality is
/// mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        assert!(nvars <= MAX_VARS, "at most {MAX_VARS} variables");
        Polynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::term(Monomial::one(nvars), c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    /// The symbol `d(i+1)`.
    pub fn var(nvars: usize, i: usize) -> Self {
        Self::term(Monomial::var(nvars, i), Rational::one())
    }

    pub fn term(mono: Monomial, c: Rational) -> Self {
        let mut p = Self::zero(mono.nvars());
        if !c.is_zero() {
            p.terms.insert(mono, c);
        }
        p
    }

    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Constant coefficient if the polynomial has degree 0.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Total degree; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        assert_eq!(m.nvars(), self.nvars, "monomial arity mismatch");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check(&self, other: &Polynomial) -> Result<(), PolyError> {
        if self.nvars != other.nvars {
            Err(PolyError::DimensionMismatch {
                left: self.nvars,
                right: other.nvars,
            })
        } else {
            Ok(())
        }
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check(other)?;
        let mut out = Polynomial::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, t: &Monomial) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (m.mul(t), a.clone())).collect(),
        }
    }

    /// The sign twist of the formal adjoint: `di -> -di`, so every term is
    /// multiplied by `(-1)^|μ|`. An involutive ring automorphism.
    pub fn negate_vars(&self) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    if m.degree() % 2 == 1 {
                        (*m, -c.clone())
                    } else {
                        (*m, c.clone())
                    }
                })
                .collect(),
        }
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.nvars, "evaluation point arity");
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                for _ in 0..e {
                    t *= &point[i];
                }
            }
            acc += t;
        }
        acc
    }

    /// Terms sorted by `ord`, largest first.
    pub fn sorted_terms(&self, ord: &MonomialOrder) -> Vec<(Monomial, Rational)> {
        let mut v: Vec<(Monomial, Rational)> =
            self.terms.iter().map(|(m, c)| (*m, c.clone())).collect();
        v.sort_by(|a, b| ord.cmp(&b.0, &a.0));
        v
    }

    pub fn leading_term(&self, ord: &MonomialOrder) -> Option<(Monomial, Rational)> {
        self.terms
            .iter()
            .max_by(|a, b| ord.cmp(a.0, b.0))
            .map(|(m, c)| (*m, c.clone()))
    }

    /// Substitutes `di -> Σj change[i][j]·dj`.
    pub fn linear_substitute(&self, change: &[Vec<Rational>]) -> Polynomial {
        let n = self.nvars;
        assert_eq!(change.len(), n, "coordinate change arity");
        let images: Vec<Polynomial> = change
            .iter()
            .map(|row| {
                Polynomial::from_terms(
                    n,
                    row.iter()
                        .enumerate()
                        .map(|(j, c)| (Monomial::var(n, j), c.clone())),
                )
            })
            .collect();
        let mut out = Polynomial::zero(n);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(n, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                for _ in 0..e {
                    t = &t * &images[i];
                }
            }
            out = &out + &t;
        }
        out
    }

    /// Renames variable `i` to `perm[i]`.
    pub fn permute_vars(&self, perm: &[usize]) -> Polynomial {
        assert_eq!(perm.len(), self.nvars);
        let mut out = Polynomial::zero(self.nvars);
        for (m, c) in &self.terms {
            let mut e = vec![0u32; self.nvars];
            for (i, &x) in m.exponents().iter().enumerate() {
                e[perm[i]] = x as u32;
            }
            out.add_term(Monomial::from_exponents(&e).expect("same arity"), c.clone());
        }
        out
    }

    /// Exact quotient `self / divisor`, or `None` when the division leaves
    /// a remainder. Uses multivariate division under degrevlex.
    pub fn div_exact(&self, divisor: &Polynomial) -> Option<Polynomial> {
        assert_eq!(self.nvars, divisor.nvars);
        let ord = MonomialOrder::default();
        let (lm, lc) = divisor.leading_term(&ord)?;
        let mut rem = self.clone();
        let mut quot = Polynomial::zero(self.nvars);
        while let Some((m, c)) = rem.leading_term(&ord) {
            let t = lm.quotient_of(&m)?;
            let q = c / &lc;
            let step = Polynomial::term(t, q.clone());
            rem = &rem - &(&step * divisor);
            quot.add_term(t, q);
        }
        Some(quot)
    }

    /// Rendering with terms in descending `ord` order, e.g. `3/2*d1^2*d2 - d2`.
    pub fn render(&self, ord: &MonomialOrder) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (k, (m, c)) in self.sorted_terms(ord).iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            if m.is_one() {
                s.push_str(&a.to_string());
            } else if a.is_one() {
                s.push_str(&m.render());
            } else {
                s.push_str(&format!("{}*{}", a, m.render()));
            }
        }
        s
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&MonomialOrder::default()))
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({})", self)
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.checked_add(rhs).expect("polynomial addition")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.checked_sub(rhs).expect("polynomial subtraction")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.checked_mul(rhs).expect("polynomial multiplication")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-Rational::one())
    }
}

pub fn poly_add(p: &Polynomial, q: &Polynomial) -> Result<Polynomial, PolyError> {
    p.checked_add(q)
}

pub fn poly_mul(p: &Polynomial, q: &Polynomial) -> Result<Polynomial, PolyError> {
    p.checked_mul(q)
}

pub fn poly_negate_vars(p: &Polynomial) -> Polynomial {
    p.negate_vars()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(n: usize, i: usize) -> Polynomial {
        Polynomial::var(n, i)
    }

    fn c(n: usize, v: i64) -> Polynomial {
        Polynomial::constant(n, int(v))
    }

    #[test]
    fn addition_examples() {
        let s = &(&x(2, 0) + &x(2, 1)) + &(&x(2, 0) - &x(2, 1));
        assert_eq!(s, x(2, 0).scale(&int(2)));
        let p = &x(2, 0) * &x(2, 1);
        assert_eq!(&p + &Polynomial::zero(2), p);
        let q = &(&x(2, 1) * &x(2, 1)) + &(-&p);
        assert_eq!(q.render(&MonomialOrder::default()), "-d1*d2 + d2^2");
        assert_eq!(q.eval(&[int(3), int(5)]), int(25 - 15));
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let err = x(2, 0).checked_add(&x(3, 0)).unwrap_err();
        assert_eq!(err, PolyError::DimensionMismatch { left: 2, right: 3 });
        assert!(x(1, 0).checked_mul(&x(2, 0)).is_err());
    }

    #[test]
    fn multiplication_examples() {
        let d1 = x(2, 0);
        let d2 = x(2, 1);
        assert_eq!((&d1 * &d2).render(&MonomialOrder::default()), "d1*d2");
        let dos = &(&d1 + &d2) * &(&d1 - &d2);
        assert_eq!(dos, &(&d1 * &d1) - &(&d2 * &d2));
        // Kalman parametrization entries at a = 2.
        let d = x(1, 0);
        let y1 = &d * &(&d + &c(1, 2));
        assert_eq!(y1.degree(), 2);
        assert_eq!(y1.render(&MonomialOrder::default()), "d1^2 + 2*d1");
    }

    #[test]
    fn negate_vars_examples() {
        assert_eq!(x(2, 0).negate_vars(), -&x(2, 0));
        let p = &x(2, 0) * &x(2, 1);
        assert_eq!(p.negate_vars(), p);
        let d = x(1, 0);
        let a = c(1, 3);
        let p = &d * &(&d + &a);
        assert_eq!(p.negate_vars(), &d * &(&d - &a));
    }

    #[test]
    fn order_examples() {
        let ord = MonomialOrder::new(OrderKind::Degrevlex);
        let a = Monomial::from_exponents(&[2, 0]).unwrap();
        let b = Monomial::from_exponents(&[1, 1]).unwrap();
        assert_eq!(ord.cmp(&a, &b), Ordering::Greater);
        for kind in [OrderKind::Degrevlex, OrderKind::Deglex, OrderKind::Lex] {
            let ord = MonomialOrder::new(kind);
            assert_eq!(
                ord.cmp(&Monomial::one(2), &Monomial::var(2, 0)),
                Ordering::Less
            );
        }
        let lex = MonomialOrder::new(OrderKind::Lex);
        let y3 = Monomial::from_exponents(&[0, 3]).unwrap();
        assert_eq!(lex.cmp(&y3, &Monomial::var(2, 0)), Ordering::Less);
        // degrevlex and deglex differ in three variables.
        let u = Monomial::from_exponents(&[1, 0, 1]).unwrap();
        let v = Monomial::from_exponents(&[0, 2, 0]).unwrap();
        assert_eq!(ord.cmp(&u, &v), Ordering::Less);
        assert_eq!(MonomialOrder::new(OrderKind::Deglex).cmp(&u, &v), Ordering::Greater);
    }

    #[test]
    fn render_and_parse_rationals() {
        let n = 2;
        let p = Polynomial::from_terms(
            n,
            [
                (Monomial::from_exponents(&[2, 1]).unwrap(), rat(3, 2)),
                (Monomial::var(n, 1), int(-1)),
            ],
        );
        assert_eq!(p.to_string(), "3/2*d1^2*d2 - d2");
        assert_eq!(parse_rational("-6/4").unwrap(), rat(-3, 2));
        assert_eq!(parse_rational("+7").unwrap(), int(7));
        assert!(parse_rational("1/0").is_err());
        assert_eq!(Polynomial::constant(1, rat(-1, 3)).to_string(), "-1/3");
    }

    #[test]
    fn cancellation_gives_empty_term_map() {
        let p = &(&x(3, 0) * &x(3, 2)) + &c(3, 7);
        let z = &p - &p;
        assert!(z.is_zero());
        assert_eq!(z.terms().count(), 0);
    }

    #[test]
    fn exact_division() {
        let d1 = x(2, 0);
        let d2 = x(2, 1);
        let f = &(&d1 + &d2) * &(&d1 - &c(2, 3));
        assert_eq!(f.div_exact(&(&d1 + &d2)).unwrap(), &d1 - &c(2, 3));
        assert!(f.div_exact(&d2).is_none());
    }

    #[test]
    fn class_of_multi_index() {
        assert_eq!(Monomial::from_exponents(&[0, 1, 1]).unwrap().class(), Some(2));
        assert_eq!(Monomial::one(3).class(), None);
        assert_eq!(Monomial::all_of_degree(3, 2).len(), 6);
        assert_eq!(Monomial::all_up_to_degree(2, 2).len(), 6);
    }

    #[test]
    fn linear_substitution_and_permutation() {
        let p = &x(2, 0) * &x(2, 0);
        let swapped = p.permute_vars(&[1, 0]);
        assert_eq!(swapped, &x(2, 1) * &x(2, 1));
        let change = vec![vec![int(1), int(1)], vec![int(0), int(1)]];
        let q = p.linear_substitute(&change);
        let s = &x(2, 0) + &x(2, 1);
        assert_eq!(q, &s * &s);
    }
}
