//! Compatibility conditions, the adjoint-based torsion-free test,
//! parametrizations and torsion certificates.
//!
//! For an operator `D` (`r × m`) the test runs
//!
//! 1. `D`,
//! 2. `ad(D)` (`m × r`),
//! 3. `ad(D₋₁) = CC(ad(D))` (`s × m`),
//! 4. `D₋₁ = ad(ad(D₋₁))` (`m × s`), the candidate parametrization,
//! 5. `D′ = CC(D₋₁)`.
//!
//! `D ∘ D₋₁ = 0` always holds, so the rows of `D` lie in the row module of
//! `D′`. The module presented by `D` is torsion-free exactly when the two
//! row modules coincide; any row of `D′` outside the row module of `D` is
//! a torsion element.

use std::time::{Duration, Instant};

use thiserror::Error;

use crate::diffop::{default_names, MaxOrder, OperatorError, OperatorMatrix};
use crate::exact_poly::{Monomial, MonomialOrder, Polynomial, Rational};
use crate::groebner::{syzygies, GroebnerBasis, GroebnerError, ModuleVector};

use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error("unsupported corank {corank}: localization needs a one-dimensional generic kernel")]
    UnsupportedCorank { corank: usize },
    #[error("torsion suspected, annihilator search exhausted")]
    AnnihilatorNotFound,
}

/// How an annihilator was found.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AnnihilatorSource {
    /// A monomial multiple within the degree bound.
    MonomialSearch,
    /// Lowest-degree element of the ideal quotient `(rows : element)`.
    IdealQuotient,
}

/// A residue that is annihilated by a nonzero operator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorsionCertificate {
    /// A row of `D′` outside the row module of `D`, read as a combination
    /// of the unknowns and their derivatives.
    pub element: ModuleVector,
    /// Nonzero `p` with `p·element` in the row module of `D`.
    pub annihilator: Polynomial,
    pub source: AnnihilatorSource,
}

/// Output of the pipeline's step 4.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parametrization {
    pub operator: OperatorMatrix,
    pub potential_names: Vec<String>,
    pub order: MaxOrder,
}

impl Parametrization {
    fn from_operator(operator: OperatorMatrix) -> Self {
        Parametrization {
            potential_names: operator.unknown_names().to_vec(),
            order: operator.max_order(),
            operator,
        }
    }

    pub fn potential_count(&self) -> usize {
        self.operator.ncols()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Orders {
    pub input: MaxOrder,
    pub adjoint_of_input: MaxOrder,
    pub cc_of_adjoint: MaxOrder,
    pub candidate_parametrization: MaxOrder,
    pub cc_of_candidate: MaxOrder,
}

/// Full trace of the five-step test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TestReport {
    pub input: OperatorMatrix,
    pub adjoint_of_input: OperatorMatrix,
    pub cc_of_adjoint: OperatorMatrix,
    pub candidate_parametrization: OperatorMatrix,
    pub cc_of_candidate: OperatorMatrix,
    pub torsion_free: bool,
    pub torsion: Vec<TorsionCertificate>,
    pub orders: Orders,
}

impl TestReport {
    pub fn parametrization(&self) -> Parametrization {
        Parametrization::from_operator(self.candidate_parametrization.clone())
    }
}

/// Wall-clock time spent in each step of the test.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StepTimings {
    pub steps: Vec<(&'static str, Duration)>,
}

impl StepTimings {
    fn record<T>(&mut self, name: &'static str, f: impl FnOnce() -> T) -> T {
        let t0 = Instant::now();
        let out = f();
        self.steps.push((name, t0.elapsed()));
        out
    }

    pub fn total(&self) -> Duration {
        self.steps.iter().map(|(_, d)| *d).sum()
    }
}

fn row_basis(a: &OperatorMatrix, ord: &MonomialOrder) -> Result<GroebnerBasis, AnalysisError> {
    Ok(GroebnerBasis::compute(a.nvars(), a.ncols(), &a.rows(), ord)?)
}

/// Drops generators that lie in the module of the others. Candidates are
/// visited by increasing degree; a backward pass removes elements made
/// redundant by later ones.
fn prune_generators(
    nvars: usize,
    rank: usize,
    gens: Vec<ModuleVector>,
    ord: &MonomialOrder,
) -> Result<Vec<ModuleVector>, AnalysisError> {
    let mut idx: Vec<usize> = (0..gens.len()).filter(|&i| !gens[i].is_zero()).collect();
    idx.sort_by_key(|&i| (gens[i].degree(), i));
    let mut kept: Vec<ModuleVector> = Vec::new();
    let mut gb = GroebnerBasis::compute(nvars, rank, &[], ord)?;
    for i in idx {
        if !gb.contains(&gens[i])? {
            gb = gb.extend(std::slice::from_ref(&gens[i]))?;
            kept.push(gens[i].clone());
        }
    }
    let mut k = kept.len();
    while k > 0 {
        k -= 1;
        if kept.len() < 2 {
            break;
        }
        let others: Vec<ModuleVector> = kept
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != k)
            .map(|(_, v)| v.clone())
            .collect();
        if GroebnerBasis::compute(nvars, rank, &others, ord)?.contains(&kept[k])? {
            kept.remove(k);
        }
    }
    Ok(kept)
}

/// Generating compatibility conditions of `a`: left multipliers `C` with
/// `C·a = 0`, as an `s × r` operator whose unknowns are the equations of
/// `a`. Redundant generators are removed.
pub fn compatibility_conditions(a: &OperatorMatrix, ord: &MonomialOrder) -> Result<OperatorMatrix, AnalysisError> {
    let n = a.nvars();
    let r = a.nrows();
    let syz = syzygies(n, a.ncols(), &a.rows(), ord)?;
    let rows = prune_generators(n, r, syz.rows, ord)?;
    let cc = OperatorMatrix::from_rows(n, r, &rows)?
        .with_unknown_names(a.equation_names().to_vec())?
        .with_equation_names(default_names("c", rows.len()))?;
    debug_assert!(cc.compose(a).map(|p| p.is_zero()).unwrap_or(false));
    Ok(cc)
}

/// Runs the five-step test, recording per-step timings.
pub fn torsion_free_test_timed(a: &OperatorMatrix, ord: &MonomialOrder) -> Result<(TestReport, StepTimings), AnalysisError> {
    let mut t = StepTimings::default();
    let adj = t.record("adjoint", || a.adjoint());
    let cc_adj = t.record("cc_of_adjoint", || compatibility_conditions(&adj, ord))?;
    let param = t.record("parametrization", || -> Result<_, AnalysisError> {
        let p = cc_adj.adjoint();
        let s = p.ncols();
        Ok(p.with_unknown_names(default_names("phi", s))?)
    })?;
    let d_prime = t.record("cc_of_candidate", || -> Result<_, AnalysisError> {
        let c = compatibility_conditions(&param, ord)?;
        let k = c.nrows();
        Ok(c.with_equation_names(default_names("e'", k))?)
    })?;
    let (torsion_free, torsion) = t.record("verdict", || -> Result<_, AnalysisError> {
        let gb_d = row_basis(a, ord)?;
        let gb_dp = row_basis(&d_prime, ord)?;
        let equal = gb_d.generators() == gb_dp.generators();
        let certs = if equal {
            Vec::new()
        } else {
            certificates(a, &gb_d, &d_prime, ord)?
        };
        Ok((equal, certs))
    })?;
    let orders = Orders {
        input: a.max_order(),
        adjoint_of_input: adj.max_order(),
        cc_of_adjoint: cc_adj.max_order(),
        candidate_parametrization: param.max_order(),
        cc_of_candidate: d_prime.max_order(),
    };
    let report = TestReport {
        input: a.clone(),
        adjoint_of_input: adj,
        cc_of_adjoint: cc_adj,
        candidate_parametrization: param,
        cc_of_candidate: d_prime,
        torsion_free,
        torsion,
        orders,
    };
    Ok((report, t))
}

pub fn torsion_free_test(a: &OperatorMatrix, ord: &MonomialOrder) -> Result<TestReport, AnalysisError> {
    Ok(torsion_free_test_timed(a, ord)?.0)
}

/// Candidate parametrization `D₋₁`. It parametrizes the solutions of `a`
/// itself only when the test reports torsion-freeness; otherwise it
/// parametrizes the torsion-free quotient.
pub fn parametrize(a: &OperatorMatrix, ord: &MonomialOrder) -> Result<Parametrization, AnalysisError> {
    let adj = a.adjoint();
    let cc_adj = compatibility_conditions(&adj, ord)?;
    let p = cc_adj.adjoint();
    let s = p.ncols();
    Ok(Parametrization::from_operator(p.with_unknown_names(default_names("phi", s))?))
}

pub fn extract_torsion(a: &OperatorMatrix, ord: &MonomialOrder) -> Result<Vec<TorsionCertificate>, AnalysisError> {
    Ok(torsion_free_test(a, ord)?.torsion)
}

/// Both presentations torsion-free, or both with torsion.
pub fn presentation_independence_check(a1: &OperatorMatrix, a2: &OperatorMatrix, ord: &MonomialOrder) -> Result<bool, AnalysisError> {
    let t1 = extract_torsion(a1, ord)?;
    let t2 = extract_torsion(a2, ord)?;
    Ok(t1.is_empty() == t2.is_empty())
}

fn certificates(
    a: &OperatorMatrix,
    gb_d: &GroebnerBasis,
    d_prime: &OperatorMatrix,
    ord: &MonomialOrder,
) -> Result<Vec<TorsionCertificate>, AnalysisError> {
    let bound = a.max_order().0.max(d_prime.max_order().0) + 3;
    let mut acc = gb_d.clone();
    let mut out = Vec::new();
    for row in d_prime.rows() {
        if acc.contains(&row)? {
            continue;
        }
        acc = acc.extend(std::slice::from_ref(&row))?;
        let (annihilator, source) = annihilator(a, gb_d, &row, bound, ord)?;
        out.push(TorsionCertificate {
            element: row,
            annihilator,
            source,
        });
    }
    Ok(out)
}

fn annihilator(
    a: &OperatorMatrix,
    gb_d: &GroebnerBasis,
    e: &ModuleVector,
    bound: u32,
    ord: &MonomialOrder,
) -> Result<(Polynomial, AnnihilatorSource), AnalysisError> {
    let n = a.nvars();
    let mut monos = Monomial::all_up_to_degree(n, bound);
    monos.sort_by(|x, y| x.degree().cmp(&y.degree()).then_with(|| ord.cmp(x, y)));
    for m in monos {
        let p = Polynomial::term(m, Rational::one());
        if gb_d.contains(&e.mul_poly(&p))? {
            return Ok((p, AnnihilatorSource::MonomialSearch));
        }
    }
    // Ideal quotient: first components of the syzygies of [e; rows of D].
    let mut gens = vec![e.clone()];
    gens.extend(a.rows());
    let syz = syzygies(n, a.ncols(), &gens, ord)?;
    let best = syz
        .rows
        .iter()
        .map(|s| s.component(0).clone())
        .filter(|p| !p.is_zero())
        .min_by(|p, q| {
            p.degree().cmp(&q.degree()).then_with(|| {
                let lp = p.leading_term(ord).map(|t| t.0);
                let lq = q.leading_term(ord).map(|t| t.0);
                match (lp, lq) {
                    (Some(x), Some(y)) => ord.cmp(&x, &y),
                    _ => std::cmp::Ordering::Equal,
                }
            })
        });
    match best {
        Some(p) => {
            let lc = p.leading_term(ord).map(|t| t.1).unwrap_or_else(Rational::one);
            Ok((p.scale(&(Rational::one() / lc)), AnnihilatorSource::IdealQuotient))
        }
        None => Err(AnalysisError::AnnihilatorNotFound),
    }
}

/// Fraction-free (Bareiss) elimination. Returns the rank and the echelon
/// rows, the last pivot being the determinant of the selected minor.
fn bareiss(mut m: Vec<Vec<Polynomial>>, ncols: usize) -> (usize, Vec<Vec<Polynomial>>, Vec<usize>) {
    let nrows = m.len();
    let nvars = m.first().and_then(|r| r.first()).map(|p| p.nvars()).unwrap_or(0);
    let mut prev = Polynomial::one(nvars);
    let mut rank = 0;
    let mut pivots = Vec::new();
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        // Prefer the sparsest nonzero pivot to limit growth.
        let pivot = (rank..nrows)
            .filter(|&i| !m[i][col].is_zero())
            .min_by_key(|&i| (m[i][col].len(), m[i][col].degree(), i));
        let Some(p) = pivot else { continue };
        m.swap(rank, p);
        for i in rank + 1..nrows {
            for j in col + 1..ncols {
                let num = &(&m[rank][col] * &m[i][j]) - &(&m[i][col] * &m[rank][j]);
                m[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
            m[i][col] = Polynomial::zero(nvars);
        }
        prev = m[rank][col].clone();
        pivots.push(col);
        rank += 1;
    }
    (rank, m, pivots)
}

/// Rank over the field of rational functions in `d1..dn`.
pub fn generic_rank(a: &OperatorMatrix) -> usize {
    bareiss(a.entries().to_vec(), a.ncols()).0
}

/// Greatest common divisor (monic under degrevlex) via the rank-one
/// syzygy of `(f, g)`: it is `(g/h, −f/h)` up to a scalar.
pub fn poly_gcd(f: &Polynomial, g: &Polynomial) -> Polynomial {
    let ord = MonomialOrder::default();
    let n = f.nvars();
    let monic = |p: &Polynomial| {
        let lc = p.leading_term(&ord).map(|t| t.1).unwrap_or_else(Rational::one);
        p.scale(&(Rational::one() / lc))
    };
    if f.is_zero() {
        return if g.is_zero() { Polynomial::zero(n) } else { monic(g) };
    }
    if g.is_zero() {
        return monic(f);
    }
    let gens = vec![
        ModuleVector::new(n, vec![f.clone()]),
        ModuleVector::new(n, vec![g.clone()]),
    ];
    let syz = syzygies(n, 1, &gens, &ord).expect("rank one");
    let s = &syz.rows[0];
    // s.0 = c·g/h  ⇒  h/c = g / s.0
    let h = g.div_exact(s.component(0)).expect("syzygy of two polynomials");
    monic(&h)
}

/// One-potential parametrization by solving over the fraction field:
/// signed maximal minors of a set of independent rows, divided by their
/// common factor.
pub fn localize_corank1(a: &OperatorMatrix) -> Result<Parametrization, AnalysisError> {
    let n = a.nvars();
    let m = a.ncols();
    let rank = generic_rank(a);
    let corank = m - rank;
    if corank != 1 {
        return Err(AnalysisError::UnsupportedCorank { corank });
    }
    // Greedy choice of independent rows.
    let mut chosen: Vec<Vec<Polynomial>> = Vec::new();
    for row in a.entries() {
        let mut trial = chosen.clone();
        trial.push(row.clone());
        if bareiss(trial.clone(), m).0 == trial.len() {
            chosen = trial;
        }
        if chosen.len() == rank {
            break;
        }
    }
    let mut col: Vec<Polynomial> = Vec::with_capacity(m);
    for k in 0..m {
        let minor: Vec<Vec<Polynomial>> = chosen
            .iter()
            .map(|r| r.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, p)| p.clone()).collect())
            .collect();
        let det = signed_determinant(minor, n);
        col.push(if k % 2 == 0 { det } else { -&det });
    }
    let mut g = Polynomial::zero(n);
    for p in &col {
        g = poly_gcd(&g, p);
    }
    if !g.is_zero() && g.degree() > 0 {
        col = col.iter().map(|p| p.div_exact(&g).expect("gcd divides")).collect();
    }
    let col = normalize_column(col);
    let op = OperatorMatrix::new(n, 1, col.into_iter().map(|p| vec![p]).collect(), vec!["phi1".into()], a.unknown_names().to_vec())?;
    debug_assert!(a.compose(&op).map(|p| p.is_zero()).unwrap_or(false));
    Ok(Parametrization::from_operator(op))
}

/// Exact determinant by Laplace expansion for small sizes, Bareiss with
/// sign tracking otherwise.
fn signed_determinant(m: Vec<Vec<Polynomial>>, nvars: usize) -> Polynomial {
    let k = m.len();
    if k == 0 {
        return Polynomial::one(nvars);
    }
    if k <= 3 {
        if k == 1 {
            return m[0][0].clone();
        }
        let mut acc = Polynomial::zero(nvars);
        for j in 0..k {
            if m[0][j].is_zero() {
                continue;
            }
            let sub: Vec<Vec<Polynomial>> = m[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, p)| p.clone()).collect())
                .collect();
            let t = &m[0][j] * &signed_determinant(sub, nvars);
            acc = if j % 2 == 0 { &acc + &t } else { &acc - &t };
        }
        return acc;
    }
    // Track row swaps explicitly.
    let mut m = m;
    let mut sign = false;
    let mut prev = Polynomial::one(nvars);
    for c in 0..k {
        let Some(p) = (c..k).find(|&i| !m[i][c].is_zero()) else {
            return Polynomial::zero(nvars);
        };
        if p != c {
            m.swap(p, c);
            sign = !sign;
        }
        for i in c + 1..k {
            for j in c + 1..k {
                let num = &(&m[c][c] * &m[i][j]) - &(&m[i][c] * &m[c][j]);
                m[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
        }
        prev = m[c][c].clone();
    }
    let d = m[k - 1][k - 1].clone();
    if sign {
        -&d
    } else {
        d
    }
}

/// Clears denominators, removes integer content, and makes the leading
/// coefficient of the first nonzero entry positive.
fn normalize_column(col: Vec<Polynomial>) -> Vec<Polynomial> {
    use num_integer::Integer;
    let ord = MonomialOrder::default();
    let mut den = num_bigint::BigInt::one();
    let mut num = num_bigint::BigInt::zero();
    for p in &col {
        for (_, c) in p.terms() {
            den = den.lcm(c.denom());
        }
    }
    for p in &col {
        for (_, c) in p.terms() {
            num = num.gcd(&(c * Rational::from_integer(den.clone())).to_integer());
        }
    }
    if num.is_zero() {
        return col;
    }
    let mut f = Rational::new(den, num);
    if let Some(first) = col.iter().find(|p| !p.is_zero()) {
        if first.leading_term(&ord).map(|t| t.1.is_negative()).unwrap_or(false) {
            f = -f;
        }
    }
    col.iter().map(|p| p.scale(&f)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_poly::int;

    fn d(n: usize, i: usize) -> Polynomial {
        Polynomial::var(n, i)
    }

    fn c(n: usize, v: i64) -> Polynomial {
        Polynomial::constant(n, int(v))
    }

    fn stress2() -> OperatorMatrix {
        OperatorMatrix::from_entries(2, 3, vec![vec![d(2, 0), d(2, 1), c(2, 0)], vec![c(2, 0), d(2, 0), d(2, 1)]]).unwrap()
    }

    fn kalman(a: i64) -> OperatorMatrix {
        let x = d(1, 0);
        OperatorMatrix::from_entries(1, 3, vec![vec![x.clone(), c(1, -a), -&x], vec![c(1, 1), -&x, x.clone()]]).unwrap()
    }

    fn airy_rows() -> Vec<ModuleVector> {
        let (x1, x2) = (d(2, 0), d(2, 1));
        vec![ModuleVector::new(2, vec![&x2 * &x2, -&(&x1 * &x2), &x1 * &x1])]
    }

    #[test]
    fn stress_is_torsion_free_with_airy_potential() {
        let ord = MonomialOrder::default();
        let rep = torsion_free_test(&stress2(), &ord).unwrap();
        assert!(rep.torsion_free);
        assert!(rep.torsion.is_empty());
        let p = &rep.candidate_parametrization;
        assert_eq!(p.ncols(), 1);
        assert_eq!(rep.orders.candidate_parametrization, MaxOrder(2));
        assert!(crate::groebner::module_equal(2, 3, &p.columns(), &airy_rows(), &ord).unwrap());
        assert!(stress2().compose(p).unwrap().is_zero());
        assert_eq!(p.equation_names(), stress2().unknown_names());
    }

    #[test]
    fn kalman_dichotomy() {
        let ord = MonomialOrder::default();
        assert!(torsion_free_test(&kalman(2), &ord).unwrap().torsion_free);
        let rep = torsion_free_test(&kalman(0), &ord).unwrap();
        assert!(!rep.torsion_free);
        assert_eq!(rep.torsion.len(), 1);
        let cert = &rep.torsion[0];
        assert_eq!(cert.element, ModuleVector::new(1, vec![c(1, 1), c(1, 0), c(1, -1)]));
        assert_eq!(cert.annihilator, d(1, 0));
        let rep1 = torsion_free_test(&kalman(1), &ord).unwrap();
        assert!(!rep1.torsion_free);
        for cert in &rep1.torsion {
            assert!(cert.annihilator.degree() <= 2 && !cert.annihilator.is_zero());
        }
    }

    #[test]
    fn zero_operator_is_free() {
        let ord = MonomialOrder::default();
        let z = OperatorMatrix::zero(2, 1, 2);
        let rep = torsion_free_test(&z, &ord).unwrap();
        assert!(rep.torsion_free);
        assert!(rep.candidate_parametrization.same_entries(&OperatorMatrix::identity(2, 2)));
        let empty = OperatorMatrix::zero(1, 0, 2);
        assert!(torsion_free_test(&empty, &ord).unwrap().torsion_free);
    }

    #[test]
    fn killing_cc() {
        let ord = MonomialOrder::default();
        let (x1, x2) = (d(2, 0), d(2, 1));
        let k = OperatorMatrix::from_entries(
            2,
            2,
            vec![vec![x1.scale(&int(2)), c(2, 0)], vec![x2.clone(), x1.clone()], vec![c(2, 0), x2.scale(&int(2))]],
        )
        .unwrap();
        let cc = compatibility_conditions(&k, &ord).unwrap();
        assert_eq!(cc.nrows(), 1);
        assert!(cc.compose(&k).unwrap().is_zero());
        assert_eq!(cc.max_order(), MaxOrder(2));
        assert!(matches!(localize_corank1(&k), Err(AnalysisError::UnsupportedCorank { corank: 0 })));
    }

    #[test]
    fn ranks_and_localization() {
        assert_eq!(generic_rank(&stress2()), 2);
        assert_eq!(generic_rank(&kalman(0)), 2);
        assert_eq!(generic_rank(&OperatorMatrix::zero(2, 3, 3)), 0);
        let p = localize_corank1(&stress2()).unwrap();
        assert_eq!(p.operator.column(0), airy_rows()[0]);
        let k = localize_corank1(&kalman(2)).unwrap();
        let x = d(1, 0);
        let expect = ModuleVector::new(
            1,
            vec![&x * &(&x + &c(1, 2)), &x * &(&x + &c(1, 1)), &(&x * &x) - &c(1, 2)],
        );
        assert_eq!(k.operator.column(0), expect);
    }

    #[test]
    fn gcd_via_syzygy() {
        let (x1, x2) = (d(2, 0), d(2, 1));
        let f = &(&x1 + &x2) * &x1;
        let g = &(&x1 + &x2) * &x2;
        assert_eq!(poly_gcd(&f, &g), &x1 + &x2);
        assert_eq!(poly_gcd(&x1, &x2), c(2, 1));
    }
}
