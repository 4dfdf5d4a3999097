//! Constant-coefficient differential operators as polynomial matrices.
//!
//! Row `i` of an `r × m` [`OperatorMatrix`] is the equation
//! `Σ_k entries[i][k](d) y^k = 0`. Operators act on columns of unknowns;
//! compatibility conditions are left multipliers.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exact_poly::{Monomial, MonomialOrder, PolyError, Polynomial, Rational};
use crate::groebner::{GroebnerBasis, GroebnerError, ModuleVector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OperatorError {
    #[error("shape mismatch: cannot compose {left_rows}x{left_cols} with {right_rows}x{right_cols}")]
    ShapeMismatch {
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },
    #[error("malformed operator: {0}")]
    Malformed(String),
    #[error("unbound parameter `{0}`")]
    UnboundParameter(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
}

/// Maximum total degree among the entries of an operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct MaxOrder(pub u32);

impl fmt::Display for MaxOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// `r × m` matrix over `Q[d1..dn]` with equation and unknown labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperatorMatrix {
    nvars: usize,
    ncols: usize,
    entries: Vec<Vec<Polynomial>>,
    unknown_names: Vec<String>,
    equation_names: Vec<String>,
}

pub fn default_names(prefix: &str, count: usize) -> Vec<String> {
    (1..=count).map(|i| format!("{prefix}{i}")).collect()
}

impl OperatorMatrix {
    /// Builds an operator from rows of entries. Every row must have `ncols`
    /// entries over `nvars` symbols.
    pub fn new(
        nvars: usize,
        ncols: usize,
        entries: Vec<Vec<Polynomial>>,
        unknown_names: Vec<String>,
        equation_names: Vec<String>,
    ) -> Result<Self, OperatorError> {
        if unknown_names.len() != ncols {
            return Err(OperatorError::Malformed(format!(
                "{} unknown labels for {} columns",
                unknown_names.len(),
                ncols
            )));
        }
        if equation_names.len() != entries.len() {
            return Err(OperatorError::Malformed(format!(
                "{} equation labels for {} rows",
                equation_names.len(),
                entries.len()
            )));
        }
        for row in &entries {
            if row.len() != ncols {
                return Err(OperatorError::Malformed(format!(
                    "row of length {} in an operator with {} columns",
                    row.len(),
                    ncols
                )));
            }
            for p in row {
                if p.nvars() != nvars {
                    return Err(PolyError::DimensionMismatch {
                        left: nvars,
                        right: p.nvars(),
                    }
                    .into());
                }
            }
        }
        Ok(OperatorMatrix {
            nvars,
            ncols,
            entries,
            unknown_names,
            equation_names,
        })
    }

    /// Operator with default labels `y1..ym` and `e1..er`.
    pub fn from_entries(nvars: usize, ncols: usize, entries: Vec<Vec<Polynomial>>) -> Result<Self, OperatorError> {
        let r = entries.len();
        Self::new(nvars, ncols, entries, default_names("y", ncols), default_names("e", r))
    }

    /// Operator whose rows are the given module vectors.
    pub fn from_rows(nvars: usize, ncols: usize, rows: &[ModuleVector]) -> Result<Self, OperatorError> {
        let entries = rows.iter().map(|v| v.components().to_vec()).collect();
        Self::from_entries(nvars, ncols, entries)
    }

    pub fn zero(nvars: usize, nrows: usize, ncols: usize) -> Self {
        OperatorMatrix {
            nvars,
            ncols,
            entries: vec![vec![Polynomial::zero(nvars); ncols]; nrows],
            unknown_names: default_names("y", ncols),
            equation_names: default_names("e", nrows),
        }
    }

    pub fn identity(nvars: usize, m: usize) -> Self {
        let mut a = Self::zero(nvars, m, m);
        for i in 0..m {
            a.entries[i][i] = Polynomial::one(nvars);
        }
        a
    }

    pub fn with_unknown_names(mut self, names: Vec<String>) -> Result<Self, OperatorError> {
        if names.len() != self.ncols {
            return Err(OperatorError::Malformed("unknown label count".into()));
        }
        self.unknown_names = names;
        Ok(self)
    }

    pub fn with_equation_names(mut self, names: Vec<String>) -> Result<Self, OperatorError> {
        if names.len() != self.entries.len() {
            return Err(OperatorError::Malformed("equation label count".into()));
        }
        self.equation_names = names;
        Ok(self)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn nrows(&self) -> usize {
        self.entries.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn entry(&self, i: usize, k: usize) -> &Polynomial {
        &self.entries[i][k]
    }

    pub fn entries(&self) -> &[Vec<Polynomial>] {
        &self.entries
    }

    pub fn unknown_names(&self) -> &[String] {
        &self.unknown_names
    }

    pub fn equation_names(&self) -> &[String] {
        &self.equation_names
    }

    pub fn row(&self, i: usize) -> ModuleVector {
        ModuleVector::new(self.nvars, self.entries[i].clone())
    }

    pub fn rows(&self) -> Vec<ModuleVector> {
        (0..self.nrows()).map(|i| self.row(i)).collect()
    }

    pub fn column(&self, k: usize) -> ModuleVector {
        ModuleVector::new(self.nvars, self.entries.iter().map(|r| r[k].clone()).collect())
    }

    pub fn columns(&self) -> Vec<ModuleVector> {
        (0..self.ncols).map(|k| self.column(k)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(Polynomial::is_zero)
    }

    pub fn max_order(&self) -> MaxOrder {
        MaxOrder(self.entries.iter().flatten().map(Polynomial::degree).max().unwrap_or(0))
    }

    /// Plain transpose; labels swap roles.
    pub fn transpose(&self) -> OperatorMatrix {
        let entries = (0..self.ncols)
            .map(|k| self.entries.iter().map(|r| r[k].clone()).collect())
            .collect();
        OperatorMatrix {
            nvars: self.nvars,
            ncols: self.nrows(),
            entries,
            unknown_names: self.equation_names.clone(),
            equation_names: self.unknown_names.clone(),
        }
    }

    /// Formal adjoint: transpose with `di ↦ −di` in every entry. The
    /// unknowns of the adjoint are the multipliers of the original
    /// equations and carry their labels.
    pub fn adjoint(&self) -> OperatorMatrix {
        let mut t = self.transpose();
        for row in &mut t.entries {
            for p in row.iter_mut() {
                *p = p.negate_vars();
            }
        }
        t
    }

    /// Matrix product `self · other`.
    pub fn compose(&self, other: &OperatorMatrix) -> Result<OperatorMatrix, OperatorError> {
        if self.ncols != other.nrows() || self.nvars != other.nvars {
            return Err(OperatorError::ShapeMismatch {
                left_rows: self.nrows(),
                left_cols: self.ncols,
                right_rows: other.nrows(),
                right_cols: other.ncols,
            });
        }
        let mut entries = Vec::with_capacity(self.nrows());
        for row in &self.entries {
            let mut out = vec![Polynomial::zero(self.nvars); other.ncols];
            for (k, a) in row.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (j, b) in other.entries[k].iter().enumerate() {
                    if !b.is_zero() {
                        out[j] = &out[j] + &(a * b);
                    }
                }
            }
            entries.push(out);
        }
        Ok(OperatorMatrix {
            nvars: self.nvars,
            ncols: other.ncols,
            entries,
            unknown_names: other.unknown_names.clone(),
            equation_names: self.equation_names.clone(),
        })
    }

    /// Stacks the rows of `other` below those of `self`.
    pub fn stack(&self, other: &OperatorMatrix) -> Result<OperatorMatrix, OperatorError> {
        if self.ncols != other.ncols || self.nvars != other.nvars {
            return Err(OperatorError::ShapeMismatch {
                left_rows: self.nrows(),
                left_cols: self.ncols,
                right_rows: other.nrows(),
                right_cols: other.ncols,
            });
        }
        let mut a = self.clone();
        a.entries.extend(other.entries.iter().cloned());
        a.equation_names.extend(other.equation_names.iter().cloned());
        Ok(a)
    }

    /// Same matrix with the rows permuted: row `i` of the result is row
    /// `perm[i]` of `self`.
    pub fn permute_rows(&self, perm: &[usize]) -> OperatorMatrix {
        let mut a = self.clone();
        a.entries = perm.iter().map(|&i| self.entries[i].clone()).collect();
        a.equation_names = perm.iter().map(|&i| self.equation_names[i].clone()).collect();
        a
    }

    /// Entries equal, labels ignored.
    pub fn same_entries(&self, other: &OperatorMatrix) -> bool {
        self.nvars == other.nvars && self.ncols == other.ncols && self.entries == other.entries
    }

    /// Renders equation `i` as `d1*s11 + d2*s12`.
    pub fn render_equation(&self, i: usize, ord: &MonomialOrder) -> String {
        render_combination(&self.entries[i], &self.unknown_names, ord)
    }

    pub fn render(&self, ord: &MonomialOrder) -> Vec<String> {
        (0..self.nrows())
            .map(|i| format!("{}: {} = 0", self.equation_names[i], self.render_equation(i, ord)))
            .collect()
    }
}

impl fmt::Display for OperatorMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in self.render(&MonomialOrder::default()) {
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

/// Renders `Σ comps[k]·names[k]` as a linear expression, e.g.
/// `3/2*d1^2*y1 - d2*y1 + y2`. The zero combination renders as `0`.
pub fn render_combination(comps: &[Polynomial], names: &[String], ord: &MonomialOrder) -> String {
    let mut out = String::new();
    for (p, name) in comps.iter().zip(names) {
        for (m, c) in p.sorted_terms(ord) {
            let neg = c.is_negative();
            let a = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if !a.is_one() {
                out.push_str(&a.to_string());
                out.push('*');
            }
            if !m.is_one() {
                out.push_str(&m.render());
                out.push('*');
            }
            out.push_str(name);
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Checks `ad(A·B) = ad(B)·ad(A)` entrywise.
pub fn adjoint_contravariance_check(a: &OperatorMatrix, b: &OperatorMatrix) -> Result<bool, OperatorError> {
    let lhs = a.compose(b)?.adjoint();
    let rhs = b.adjoint().compose(&a.adjoint())?;
    Ok(lhs.same_entries(&rhs))
}

/// The differential module presented by the rows of an operator:
/// `M = R^m / (row module)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemPresentation {
    pub operator: OperatorMatrix,
}

impl SystemPresentation {
    pub fn new(operator: OperatorMatrix) -> Self {
        SystemPresentation { operator }
    }

    pub fn row_basis(&self, ord: &MonomialOrder) -> Result<GroebnerBasis, OperatorError> {
        let a = &self.operator;
        Ok(GroebnerBasis::compute(a.nvars(), a.ncols(), &a.rows(), ord)?)
    }

    /// Two presentations over the same unknowns present the same quotient
    /// iff their row modules coincide.
    pub fn same_module(&self, other: &SystemPresentation, ord: &MonomialOrder) -> Result<bool, OperatorError> {
        if self.operator.ncols() != other.operator.ncols() {
            return Ok(false);
        }
        Ok(self.row_basis(ord)?.generators() == other.row_basis(ord)?.generators())
    }
}

/// Product of named parameters with exponents, sorted by name.
pub type ParamMonomial = Vec<(String, u32)>;

/// Polynomial in the operator symbols whose coefficients are polynomials
/// in named rational parameters.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ParamPolynomial {
    nvars: usize,
    terms: BTreeMap<(ParamMonomial, Monomial), Rational>,
}

impl ParamPolynomial {
    pub fn zero(nvars: usize) -> Self {
        ParamPolynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_polynomial(p: &Polynomial) -> Self {
        let mut q = Self::zero(p.nvars());
        for (m, c) in p.terms() {
            q.add_term(Vec::new(), *m, c.clone());
        }
        q
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `c · params · mono`; the parameter list is normalized.
    pub fn add_term(&mut self, params: ParamMonomial, mono: Monomial, c: Rational) {
        let mut merged: BTreeMap<String, u32> = BTreeMap::new();
        for (name, e) in params {
            *merged.entry(name).or_insert(0) += e;
        }
        let key: ParamMonomial = merged.into_iter().filter(|(_, e)| *e > 0).collect();
        let slot = self.terms.entry((key.clone(), mono)).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&(key, mono));
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ParamMonomial, &Monomial, &Rational)> {
        self.terms.iter().map(|((p, m), c)| (p, m, c))
    }

    pub fn params(&self) -> BTreeSet<String> {
        self.terms.keys().flat_map(|(p, _)| p.iter().map(|(n, _)| n.clone())).collect()
    }

    pub fn substitute(&self, bindings: &BTreeMap<String, Rational>) -> Result<Polynomial, OperatorError> {
        let mut out = Polynomial::zero(self.nvars);
        for ((params, mono), c) in &self.terms {
            let mut coeff = c.clone();
            for (name, e) in params {
                let v = bindings
                    .get(name)
                    .ok_or_else(|| OperatorError::UnboundParameter(name.clone()))?;
                for _ in 0..*e {
                    coeff *= v;
                }
            }
            out.add_term(*mono, coeff);
        }
        Ok(out)
    }
}

/// Operator template whose entries may mention named parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParametricOperator {
    pub nvars: usize,
    pub entries: Vec<Vec<ParamPolynomial>>,
    pub unknown_names: Vec<String>,
    pub equation_names: Vec<String>,
}

impl ParametricOperator {
    pub fn from_operator(a: &OperatorMatrix) -> Self {
        ParametricOperator {
            nvars: a.nvars(),
            entries: a
                .entries()
                .iter()
                .map(|r| r.iter().map(ParamPolynomial::from_polynomial).collect())
                .collect(),
            unknown_names: a.unknown_names().to_vec(),
            equation_names: a.equation_names().to_vec(),
        }
    }

    pub fn params(&self) -> BTreeSet<String> {
        self.entries.iter().flatten().flat_map(|p| p.params()).collect()
    }

    /// Replaces every parameter by its bound value.
    pub fn substitute_params(&self, bindings: &BTreeMap<String, Rational>) -> Result<OperatorMatrix, OperatorError> {
        let mut entries = Vec::with_capacity(self.entries.len());
        for row in &self.entries {
            let mut out = Vec::with_capacity(row.len());
            for p in row {
                out.push(p.substitute(bindings)?);
            }
            entries.push(out);
        }
        OperatorMatrix::new(
            self.nvars,
            self.unknown_names.len(),
            entries,
            self.unknown_names.clone(),
            self.equation_names.clone(),
        )
    }
}

/// Free-function form of [`ParametricOperator::substitute_params`].
pub fn substitute_params(a: &ParametricOperator, bindings: &BTreeMap<String, Rational>) -> Result<OperatorMatrix, OperatorError> {
    a.substitute_params(bindings)
}

pub fn adjoint(a: &OperatorMatrix) -> OperatorMatrix {
    a.adjoint()
}

pub fn compose(a: &OperatorMatrix, b: &OperatorMatrix) -> Result<OperatorMatrix, OperatorError> {
    a.compose(b)
}
