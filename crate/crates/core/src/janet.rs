//! Involutive machinery: classes, multiplicative variables, the
//! involution test, completion, the full-torsion criterion and reduction
//! to a first-order (Spencer) form.
//!
//! Everything here works at the level of jets: a row of an operator matrix
//! is a finite linear combination of jets `y^k_μ` with rational
//! coefficients, and prolongation by `d_i` shifts every multi-index.
//! Since coefficients are constant, all questions reduce to linear algebra
//! over `Q` in finitely many jets.
//!
//! Jets are ranked by order first; at equal order a jet of higher class
//! ranks higher (fewer `d1`, then fewer `d2`, ...), and at equal
//! multi-index the lower unknown index ranks higher. The leading jet of a
//! row is its highest-ranked jet.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use num_traits::{One, Zero};

use crate::diffop::{default_names, OperatorError, OperatorMatrix};
use crate::exact_poly::{int, Monomial, Polynomial, Rational};
use crate::groebner::ModuleVector;

/// Default maximal order reached during completion.
pub const DEFAULT_DEGREE_CAP: u32 = 10;
const MAX_ROUNDS: usize = 200;
const RANDOM_TRIALS: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JanetError {
    #[error("completion exceeded the degree cap {cap}")]
    DegreeCapExceeded { cap: u32 },
    #[error("completion did not stabilize after {0} rounds")]
    RoundLimit(usize),
    #[error("system is not involutive")]
    NotInvolutive,
    #[error(transparent)]
    Operator(#[from] OperatorError),
}

/// The jet `y^unknown_mono`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Jet {
    pub unknown: usize,
    pub mono: Monomial,
}

impl Jet {
    pub fn order(&self) -> u32 {
        self.mono.degree()
    }
}

impl Ord for Jet {
    fn cmp(&self, other: &Self) -> Ordering {
        let o = self.mono.degree().cmp(&other.mono.degree());
        if o != Ordering::Equal {
            return o;
        }
        for (a, b) in self.mono.exponents().iter().zip(other.mono.exponents()) {
            match b.cmp(a) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        other.unknown.cmp(&self.unknown)
    }
}

impl PartialOrd for Jet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

type JetRow = BTreeMap<Jet, Rational>;

fn to_jets(v: &ModuleVector) -> JetRow {
    let mut row = JetRow::new();
    for (k, p) in v.components().iter().enumerate() {
        for (m, c) in p.terms() {
            row.insert(Jet { unknown: k, mono: *m }, c.clone());
        }
    }
    row
}

fn from_jets(nvars: usize, m: usize, row: &JetRow) -> ModuleVector {
    let mut comps = vec![Polynomial::zero(nvars); m];
    for (j, c) in row {
        comps[j.unknown].add_term(j.mono, c.clone());
    }
    ModuleVector::new(nvars, comps)
}

fn lead(row: &JetRow) -> Jet {
    *row.keys().next_back().expect("nonzero row")
}

fn prolong(row: &JetRow, i: usize) -> JetRow {
    row.iter()
        .map(|(j, c)| {
            (
                Jet {
                    unknown: j.unknown,
                    mono: j.mono.bump(i),
                },
                c.clone(),
            )
        })
        .collect()
}

fn prolong_by(row: &JetRow, t: &Monomial) -> JetRow {
    row.iter()
        .map(|(j, c)| {
            (
                Jet {
                    unknown: j.unknown,
                    mono: j.mono.mul(t),
                },
                c.clone(),
            )
        })
        .collect()
}

fn monic(mut row: JetRow) -> JetRow {
    let lc = row.values().next_back().expect("nonzero").clone();
    if !lc.is_one() {
        for c in row.values_mut() {
            *c = &*c / &lc;
        }
    }
    row
}

/// Row echelon form over `Q` indexed by pivot jets.
#[derive(Debug, Default, Clone)]
struct Echelon {
    pivots: BTreeMap<Jet, JetRow>,
}

impl Echelon {
    fn reduce(&self, mut v: JetRow) -> JetRow {
        let mut out = JetRow::new();
        while let Some((j, c)) = v.pop_last() {
            match self.pivots.get(&j) {
                Some(row) => {
                    for (k, rc) in row.iter().rev().skip(1) {
                        let e = v.entry(*k).or_insert_with(Rational::zero);
                        *e -= &c * rc;
                        if e.is_zero() {
                            v.remove(k);
                        }
                    }
                }
                None => {
                    out.insert(j, c);
                }
            }
        }
        out
    }

    /// Inserts `v`; returns its monic residual when it was independent.
    fn insert(&mut self, v: JetRow) -> Option<JetRow> {
        let r = self.reduce(v);
        if r.is_empty() {
            return None;
        }
        let r = monic(r);
        self.pivots.insert(lead(&r), r.clone());
        Some(r)
    }

    fn is_pivot(&self, j: &Jet) -> bool {
        self.pivots.contains_key(j)
    }
}

/// Fully reduced echelon form, rows sorted by decreasing leading jet.
fn autoreduce(rows: &[JetRow]) -> Vec<JetRow> {
    let mut e = Echelon::default();
    for r in rows {
        e.insert(r.clone());
    }
    let keys: Vec<Jet> = e.pivots.keys().copied().collect();
    for p in &keys {
        let mut row = e.pivots[p].clone();
        row.remove(p);
        let mut tail = e.reduce(row);
        tail.insert(*p, Rational::one());
        e.pivots.insert(*p, tail);
    }
    e.pivots.into_values().rev().collect()
}

fn max_order(rows: &[JetRow]) -> u32 {
    rows.iter().map(|r| lead(r).order()).max().unwrap_or(0)
}

fn class_of(j: &Jet) -> usize {
    j.mono.class().unwrap_or(0)
}

/// Multiplicative variables (1-based) of a row in a system of order `q`.
fn multiplicative_for(row: &JetRow, q: u32) -> Vec<usize> {
    let l = lead(row);
    if l.order() == q && q > 0 {
        (1..=class_of(&l)).collect()
    } else {
        Vec::new()
    }
}

/// Multiplicative variables for a list of leading monomials: `{1..i}` for
/// a monomial of class `i` and top degree, none for lower degrees.
pub fn janet_multiplicative(leading_monomials: &[Monomial]) -> Vec<Vec<usize>> {
    let q = leading_monomials.iter().map(Monomial::degree).max().unwrap_or(0);
    leading_monomials
        .iter()
        .map(|m| {
            if m.degree() == q && q > 0 {
                (1..=m.class().unwrap_or(0)).collect()
            } else {
                Vec::new()
            }
        })
        .collect()
}

/// A nonmultiplicative prolongation that is not a combination of the
/// multiplicative ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvolutionWitness {
    /// Index of the prolonged equation in the input.
    pub equation: usize,
    /// The nonmultiplicative variable (1-based).
    pub variable: usize,
    pub prolongation: ModuleVector,
    /// Monic remainder after reduction by the multiplicative prolongations.
    pub residual: ModuleVector,
}

fn first_failure(rows: &[JetRow]) -> Option<(usize, usize, JetRow, JetRow)> {
    let q = max_order(rows);
    let n = rows.first().map(|r| lead(r).mono.nvars()).unwrap_or(0);
    let mut e = Echelon::default();
    for r in rows {
        e.insert(r.clone());
        for i in multiplicative_for(r, q) {
            e.insert(prolong(r, i - 1));
        }
    }
    for (idx, r) in rows.iter().enumerate() {
        let mult = multiplicative_for(r, q);
        for j in (1..=n).rev() {
            if mult.contains(&j) {
                continue;
            }
            let p = prolong(r, j - 1);
            let res = e.reduce(p.clone());
            if !res.is_empty() {
                return Some((idx, j, p, monic(res)));
            }
        }
    }
    None
}

/// Literal involution check: every nonmultiplicative prolongation must be
/// a linear combination of the equations and their multiplicative
/// prolongations. Returns the first offending prolongation otherwise
/// (equations in input order, variables from `dn` down).
pub fn is_involutive(rows: &[ModuleVector]) -> Result<(), InvolutionWitness> {
    let nonzero: Vec<(usize, JetRow)> = rows
        .iter()
        .enumerate()
        .filter(|(_, v)| !v.is_zero())
        .map(|(i, v)| (i, to_jets(v)))
        .collect();
    let Some(first) = rows.first() else { return Ok(()) };
    let (n, m) = (first.nvars(), first.rank());
    let jets: Vec<JetRow> = nonzero.iter().map(|(_, r)| r.clone()).collect();
    match first_failure(&jets) {
        None => Ok(()),
        Some((idx, j, p, res)) => Err(InvolutionWitness {
            equation: nonzero[idx].0,
            variable: j,
            prolongation: from_jets(n, m, &p),
            residual: from_jets(n, m, &res),
        }),
    }
}

/// Completion in fixed coordinates: add the residuals of failing
/// nonmultiplicative prolongations until none remain.
fn complete_rows(rows: &[JetRow], cap: u32) -> Result<Vec<JetRow>, JanetError> {
    let mut sys = autoreduce(rows);
    for _ in 0..MAX_ROUNDS {
        let q = max_order(&sys);
        if q > cap {
            return Err(JanetError::DegreeCapExceeded { cap });
        }
        let n = match sys.first() {
            Some(r) => lead(r).mono.nvars(),
            None => return Ok(sys),
        };
        let mut e = Echelon::default();
        for r in &sys {
            e.insert(r.clone());
            for i in multiplicative_for(r, q) {
                e.insert(prolong(r, i - 1));
            }
        }
        let mut added = Vec::new();
        for r in &sys {
            let mult = multiplicative_for(r, q);
            for j in (1..=n).rev() {
                if mult.contains(&j) {
                    continue;
                }
                if let Some(res) = e.insert(prolong(r, j - 1)) {
                    added.push(res);
                }
            }
        }
        // Only the lowest-order residuals are added; higher ones are
        // usually consequences of them and would raise the order early.
        let Some(low) = added.iter().map(|r| lead(r).order()).min() else {
            return Ok(sys);
        };
        sys.extend(added.into_iter().filter(|r| lead(r).order() == low));
        sys = autoreduce(&sys);
    }
    Err(JanetError::RoundLimit(MAX_ROUNDS))
}

/// An equation of an involutive system with its class data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassifiedEquation {
    pub row: ModuleVector,
    pub order: u32,
    /// Class of the leading multi-index (0 for order-zero equations).
    pub klass: usize,
    /// Multiplicative variables, 1-based.
    pub multiplicative: Vec<usize>,
    pub leading: Jet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvolutiveSystem {
    pub equations: Vec<ClassifiedEquation>,
    pub nvars: usize,
    pub unknowns: usize,
    pub unknown_names: Vec<String>,
    pub involutive: bool,
    /// `di ↦ Σj coordinate_change[i][j]·dj` was applied to the input.
    pub coordinate_change: Vec<Vec<Rational>>,
    /// Set when the change is a permutation: variable `i` became `permutation[i]`.
    pub permutation: Option<Vec<usize>>,
}

impl InvolutiveSystem {
    fn from_rows(
        rows: Vec<JetRow>,
        nvars: usize,
        unknowns: usize,
        unknown_names: Vec<String>,
        change: Vec<Vec<Rational>>,
        permutation: Option<Vec<usize>>,
    ) -> Self {
        let q = max_order(&rows);
        let involutive = first_failure(&rows).is_none();
        let equations = rows
            .iter()
            .map(|r| {
                let l = lead(r);
                ClassifiedEquation {
                    row: from_jets(nvars, unknowns, r),
                    order: l.order(),
                    klass: class_of(&l),
                    multiplicative: multiplicative_for(r, q),
                    leading: l,
                }
            })
            .collect();
        InvolutiveSystem {
            equations,
            nvars,
            unknowns,
            unknown_names,
            involutive,
            coordinate_change: change,
            permutation,
        }
    }

    pub fn order(&self) -> u32 {
        self.equations.iter().map(|e| e.order).max().unwrap_or(0)
    }

    /// Classes of the equations, in order.
    pub fn classes(&self) -> Vec<usize> {
        self.equations.iter().map(|e| e.klass).collect()
    }

    /// Number of top-order equations of each class `n, n−1, …, 1`.
    pub fn class_profile(&self) -> Vec<usize> {
        let q = self.order();
        (1..=self.nvars)
            .rev()
            .map(|c| self.equations.iter().filter(|e| e.order == q && e.klass == c).count())
            .collect()
    }

    pub fn rows(&self) -> Vec<ModuleVector> {
        self.equations.iter().map(|e| e.row.clone()).collect()
    }

    pub fn to_operator(&self) -> Result<OperatorMatrix, JanetError> {
        let op = OperatorMatrix::from_rows(self.nvars, self.unknowns, &self.rows())?
            .with_unknown_names(self.unknown_names.clone())?;
        Ok(op)
    }

    fn jet_rows(&self) -> Vec<JetRow> {
        self.equations.iter().map(|e| to_jets(&e.row)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompletionOptions {
    pub degree_cap: u32,
    pub seed: u64,
}

impl Default for CompletionOptions {
    fn default() -> Self {
        CompletionOptions {
            degree_cap: degree_cap_from_env().unwrap_or(DEFAULT_DEGREE_CAP),
            seed: 0,
        }
    }
}

/// Reads `PARAMETRIX_DEGREE_CAP`, if set to a valid integer.
pub fn degree_cap_from_env() -> Option<u32> {
    std::env::var("PARAMETRIX_DEGREE_CAP").ok()?.trim().parse().ok()
}

fn identity_change(n: usize) -> Vec<Vec<Rational>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { int(1) } else { int(0) }).collect())
        .collect()
}

fn transform(rows: &[ModuleVector], change: &[Vec<Rational>]) -> Vec<JetRow> {
    rows.iter()
        .map(|v| {
            let comps = v.components().iter().map(|p| p.linear_substitute(change)).collect();
            to_jets(&ModuleVector::new(v.nvars(), comps))
        })
        .filter(|r| !r.is_empty())
        .collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

fn rational_det(m: &[Vec<Rational>]) -> Rational {
    let mut a: Vec<Vec<Rational>> = m.to_vec();
    let n = a.len();
    let mut det = int(1);
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return int(0);
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= &a[c][c];
        let (top, rest) = a.split_at_mut(c + 1);
        let pivot = &top[c];
        for row in rest.iter_mut() {
            let f = &row[c] / &pivot[c];
            for (x, p) in row[c..].iter_mut().zip(&pivot[c..]) {
                *x -= &f * p;
            }
        }
    }
    det
}

/// Completes a system to involution. The input coordinates are kept when
/// the system is already involutive; otherwise every permutation of the
/// variables is tried and the best completed system kept (lowest order,
/// then most equations of high class, then fewest equations, then fewest
/// variables moved, then first permutation found). When all permutations fail, random unimodular
/// changes with entries in `−2..=2` are tried.
pub fn involutive_completion(a: &OperatorMatrix, opts: &CompletionOptions) -> Result<InvolutiveSystem, JanetError> {
    let n = a.nvars();
    let m = a.ncols();
    let names = a.unknown_names().to_vec();
    let rows: Vec<ModuleVector> = a.rows().into_iter().filter(|r| !r.is_zero()).collect();
    let base = autoreduce(&rows.iter().map(to_jets).collect::<Vec<_>>());
    if first_failure(&base).is_none() {
        return Ok(InvolutiveSystem::from_rows(
            base,
            n,
            m,
            names,
            identity_change(n),
            Some((0..n).collect()),
        ));
    }
    type Key = (u32, Vec<std::cmp::Reverse<usize>>, usize, usize);
    let mut best: Option<(InvolutiveSystem, Key)> = None;
    let mut last_err = JanetError::DegreeCapExceeded { cap: opts.degree_cap };
    for perm in permutations(n) {
        let change: Vec<Vec<Rational>> = (0..n)
            .map(|i| (0..n).map(|j| if perm[i] == j { int(1) } else { int(0) }).collect())
            .collect();
        match complete_rows(&transform(&rows, &change), opts.degree_cap) {
            Ok(done) => {
                let sys = InvolutiveSystem::from_rows(done, n, m, names.clone(), change, Some(perm.clone()));
                let moved = perm.iter().enumerate().filter(|(i, p)| *i != **p).count();
                let key = (
                    sys.order(),
                    sys.class_profile().into_iter().map(std::cmp::Reverse).collect(),
                    sys.equations.len(),
                    moved,
                );
                if best.as_ref().map(|(_, k)| key < *k).unwrap_or(true) {
                    best = Some((sys, key));
                }
            }
            Err(e) => last_err = e,
        }
    }
    if let Some((sys, _)) = best {
        return Ok(sys);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..RANDOM_TRIALS {
        let change: Vec<Vec<Rational>> = loop {
            let c: Vec<Vec<Rational>> = (0..n)
                .map(|_| (0..n).map(|_| int(rng.gen_range(-2i64..=2))).collect())
                .collect();
            let d = rational_det(&c);
            if d == int(1) || d == int(-1) {
                break c;
            }
        };
        match complete_rows(&transform(&rows, &change), opts.degree_cap) {
            Ok(done) => return Ok(InvolutiveSystem::from_rows(done, n, m, names, change, None)),
            Err(e) => last_err = e,
        }
    }
    Err(last_err)
}

/// All-torsion criterion for an involutive system: the module is torsion
/// exactly when the number of top-order equations of class `n` equals the
/// number of unknowns.
pub fn full_torsion_check(sys: &InvolutiveSystem) -> Result<bool, JanetError> {
    if !sys.involutive {
        return Err(JanetError::NotInvolutive);
    }
    if sys.order() == 0 {
        // Purely algebraic: the module is torsion iff it vanishes.
        return Ok(sys.equations.len() == sys.unknowns);
    }
    let q = sys.order();
    let count = sys
        .equations
        .iter()
        .filter(|e| e.order == q && e.klass == sys.nvars)
        .count();
    Ok(count == sys.unknowns)
}

/// First-order presentation of an involutive system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpencerForm {
    pub operator: OperatorMatrix,
    /// Labels of the promoted jets, e.g. `y`, `y_1`, `xi2_12`.
    pub new_unknowns: Vec<String>,
}

fn jet_label(names: &[String], j: &Jet) -> String {
    if j.mono.is_one() {
        return names[j.unknown].clone();
    }
    let mut s = format!("{}_", names[j.unknown]);
    for (i, &e) in j.mono.exponents().iter().enumerate() {
        for _ in 0..e {
            s.push_str(&(i + 1).to_string());
        }
    }
    s
}

/// Spencer form: promote the parametric jets of order `< q` to unknowns,
/// prolong once, and substitute. Order-`q` parametric jets are written as
/// `d_c` of an order-`(q−1)` unknown, `c` being their class. Systems of
/// order at most one without order-zero equations are returned unchanged.
pub fn spencer_form(sys: &InvolutiveSystem) -> Result<SpencerForm, JanetError> {
    if !sys.involutive {
        return Err(JanetError::NotInvolutive);
    }
    let n = sys.nvars;
    let m = sys.unknowns;
    let q = sys.order();
    let has_zero_order = sys.equations.iter().any(|e| e.order == 0);
    if q <= 1 && !has_zero_order {
        return Ok(SpencerForm {
            operator: sys.to_operator()?,
            new_unknowns: sys.unknown_names.clone(),
        });
    }
    let q = q.max(1);
    let rows = sys.jet_rows();
    // V_q: every prolongation up to order q.
    let mut v = Echelon::default();
    for r in &rows {
        let o = lead(r).order();
        for t in Monomial::all_up_to_degree(n, q.saturating_sub(o)) {
            v.insert(prolong_by(r, &t));
        }
    }
    let mut params: Vec<Jet> = Vec::new();
    for d in 0..q {
        for k in 0..m {
            let mut monos = Monomial::all_of_degree(n, d);
            monos.sort_by(|a, b| {
                Jet { unknown: k, mono: *b }.cmp(&Jet { unknown: k, mono: *a })
            });
            for mono in monos {
                let j = Jet { unknown: k, mono };
                if !v.is_pivot(&j) {
                    params.push(j);
                }
            }
        }
    }
    let index: BTreeMap<Jet, usize> = params.iter().enumerate().map(|(i, j)| (*j, i)).collect();
    let s = params.len();
    let mut out_rows: Vec<Vec<Polynomial>> = Vec::new();
    for u in &params {
        for i in 0..n {
            let mut comps = vec![Polynomial::zero(n); s];
            comps[index[u]] = Polynomial::var(n, i);
            let target = Jet {
                unknown: u.unknown,
                mono: u.mono.bump(i),
            };
            let nf = v.reduce(JetRow::from([(target, int(1))]));
            for (p, c) in nf {
                if p.order() < q {
                    let k = index[&p];
                    comps[k] = &comps[k] - &Polynomial::constant(n, c);
                } else {
                    let cl = p.mono.class().expect("positive order") - 1;
                    let base = Jet {
                        unknown: p.unknown,
                        mono: p.mono.quotient_of(&Monomial::var(n, cl)).expect("class variable divides"),
                    };
                    let k = *index.get(&base).expect("lower jet of a parametric jet is parametric");
                    comps[k] = &comps[k] - &Polynomial::var(n, cl).scale(&c);
                }
            }
            if comps.iter().any(|p| !p.is_zero()) {
                out_rows.push(comps);
            }
        }
    }
    let new_unknowns: Vec<String> = params.iter().map(|j| jet_label(&sys.unknown_names, j)).collect();
    let r = out_rows.len();
    let operator = OperatorMatrix::new(n, s, out_rows, new_unknowns.clone(), default_names("sp", r))?;
    Ok(SpencerForm {
        operator,
        new_unknowns,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn jet_row(n: usize, m: usize, terms: &[(usize, &[u32], i64)]) -> ModuleVector {
        let mut comps = vec![Polynomial::zero(n); m];
        for (k, e, c) in terms {
            comps[*k].add_term(Monomial::from_exponents(e).unwrap(), int(*c));
        }
        ModuleVector::new(n, comps)
    }

    #[test]
    fn multiplicative_sets() {
        let m = |e: &[u32]| Monomial::from_exponents(e).unwrap();
        assert_eq!(janet_multiplicative(&[m(&[0, 0, 2])]), vec![vec![1, 2, 3]]);
        assert_eq!(janet_multiplicative(&[m(&[0, 1, 1])]), vec![vec![1, 2]]);
        assert_eq!(janet_multiplicative(&[m(&[3])]), vec![vec![1]]);
        assert_eq!(janet_multiplicative(&[m(&[2, 0]), m(&[1, 0])]), vec![vec![1], vec![]]);
    }

    #[test]
    fn ranking_prefers_order_then_class() {
        let j = |e: &[u32], k| Jet {
            unknown: k,
            mono: Monomial::from_exponents(e).unwrap(),
        };
        assert!(j(&[0, 0, 2], 0) > j(&[0, 1, 1], 0));
        assert!(j(&[0, 1, 1], 0) > j(&[0, 2, 0], 0));
        assert!(j(&[0, 2, 0], 0) > j(&[1, 0, 1], 0));
        assert!(j(&[1, 0, 0], 0) > j(&[0, 0, 0], 0));
        assert!(j(&[1, 0], 0) > j(&[1, 0], 1));
    }

    #[test]
    fn permuted_example_needs_y23() {
        // y33 = 0, y13 - y2 = 0
        let rows = vec![
            jet_row(3, 1, &[(0, &[0, 0, 2], 1)]),
            jet_row(3, 1, &[(0, &[1, 0, 1], 1), (0, &[0, 1, 0], -1)]),
        ];
        let w = is_involutive(&rows).unwrap_err();
        assert_eq!(w.equation, 1);
        assert_eq!(w.variable, 3);
        assert_eq!(w.residual, jet_row(3, 1, &[(0, &[0, 1, 1], 1)]));
    }

    #[test]
    fn ode_spencer_form() {
        let a = OperatorMatrix::from_entries(1, 1, vec![vec![Polynomial::var(1, 0).mul_monomial(&Monomial::var(1, 0))]])
            .unwrap();
        let sys = involutive_completion(&a, &CompletionOptions::default()).unwrap();
        assert!(sys.involutive);
        assert!(full_torsion_check(&sys).unwrap());
        let sp = spencer_form(&sys).unwrap();
        let d = Polynomial::var(1, 0);
        let one = Polynomial::one(1);
        let z = Polynomial::zero(1);
        assert_eq!(sp.operator.entries(), &[vec![d.clone(), -&one], vec![z, d]]);
        assert_eq!(sp.new_unknowns, vec!["y1".to_string(), "y1_1".to_string()]);
    }

    #[test]
    fn not_involutive_rejected() {
        let a = OperatorMatrix::from_entries(1, 1, vec![vec![Polynomial::var(1, 0)]]).unwrap();
        let mut sys = involutive_completion(&a, &CompletionOptions::default()).unwrap();
        sys.involutive = false;
        assert_eq!(full_torsion_check(&sys), Err(JanetError::NotInvolutive));
        assert_eq!(spencer_form(&sys).unwrap_err(), JanetError::NotInvolutive);
    }
}
