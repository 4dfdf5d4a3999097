//! Built-in systems from continuum mechanics, control and field theory.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::diffop::{OperatorError, OperatorMatrix, ParamPolynomial, ParametricOperator};
use crate::exact_poly::{int, Monomial, Polynomial, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GalleryError {
    #[error("unknown gallery entry `{0}`")]
    UnknownName(String),
    #[error("gallery entry `{name}` does not support n = {n} (supported: {supported})")]
    UnsupportedN { name: String, n: usize, supported: String },
    #[error("gallery entry `{name}` needs parameter `{param}`")]
    MissingParameter { name: String, param: String },
    #[error("formula review needed for `{name}`: {reason}")]
    FormulaReview { name: String, reason: String },
    #[error(transparent)]
    Operator(#[from] OperatorError),
}

/// Expected outcome of the analysis for a built entry.
#[derive(Debug, Clone, PartialEq, Eq, Default, serde::Serialize)]
pub struct Expected {
    pub torsion_free: Option<bool>,
    pub parametrization_order: Option<u32>,
    pub potentials: Option<usize>,
    /// Rows of `CC(D)`.
    pub cc_rows: Option<usize>,
    /// Rows of `D′ = CC(D₋₁)`.
    pub cc_of_candidate_rows: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GalleryEntry {
    pub name: String,
    pub n: usize,
    pub operator: OperatorMatrix,
    /// Parameterized template when the entry has named parameters.
    pub template: Option<ParametricOperator>,
    pub expected: Option<Expected>,
}

/// Static description of a gallery entry, for listings.
#[derive(Debug, Clone, serde::Serialize)]
pub struct GalleryInfo {
    pub name: &'static str,
    pub n_min: usize,
    pub n_max: usize,
    pub default_n: usize,
    pub params: &'static [&'static str],
    pub description: &'static str,
}

/// One line of the expected-results table.
#[derive(Debug, Clone, serde::Serialize)]
pub struct ExpectationRow {
    pub name: &'static str,
    pub condition: &'static str,
    pub verdict: Option<&'static str>,
    pub note: &'static str,
}

pub const ENTRIES: &[GalleryInfo] = &[
    GalleryInfo {
        name: "stress",
        n_min: 2,
        n_max: 4,
        default_n: 2,
        params: &[],
        description: "divergence of a symmetric stress tensor (n equations, n(n+1)/2 unknowns)",
    },
    GalleryInfo {
        name: "killing",
        n_min: 2,
        n_max: 4,
        default_n: 2,
        params: &[],
        description: "Killing operator of the euclidean metric (deformation tensor of a vector field)",
    },
    GalleryInfo {
        name: "cosserat-d1",
        n_min: 2,
        n_max: 2,
        default_n: 2,
        params: &[],
        description: "first-order Spencer operator of the planar rigid motions",
    },
    GalleryInfo {
        name: "cosserat-adjoint",
        n_min: 2,
        n_max: 2,
        default_n: 2,
        params: &[],
        description: "planar Cosserat stress and couple-stress equilibrium",
    },
    GalleryInfo {
        name: "kalman",
        n_min: 1,
        n_max: 1,
        default_n: 1,
        params: &["a"],
        description: "two first-order ODEs in three unknowns with a constant parameter a",
    },
    GalleryInfo {
        name: "maxwell-first",
        n_min: 3,
        n_max: 4,
        default_n: 4,
        params: &[],
        description: "first set of Maxwell equations dF = 0 on a skew 2-form",
    },
    GalleryInfo {
        name: "einstein",
        n_min: 3,
        n_max: 4,
        default_n: 4,
        params: &[],
        description: "linearized Einstein operator around the Minkowski metric",
    },
];

pub const EXPECTATIONS: &[ExpectationRow] = &[
    ExpectationRow {
        name: "stress",
        condition: "n = 2",
        verdict: Some("torsion-free"),
        note: "Airy stress function: order 2, 1 potential",
    },
    ExpectationRow {
        name: "stress",
        condition: "n = 3",
        verdict: Some("torsion-free"),
        note: "order 2, n^2(n^2-1)/12 = 6 potentials",
    },
    ExpectationRow {
        name: "killing",
        condition: "n >= 2",
        verdict: None,
        note: "n^2(n^2-1)/12 second-order compatibility conditions",
    },
    ExpectationRow {
        name: "cosserat-d1",
        condition: "n = 2",
        verdict: None,
        note: "n^2(n^2-1)/4 = 3 first-order compatibility conditions",
    },
    ExpectationRow {
        name: "cosserat-adjoint",
        condition: "n = 2",
        verdict: Some("torsion-free"),
        note: "first-order parametrization by 3 potentials",
    },
    ExpectationRow {
        name: "kalman",
        condition: "a not in {0, 1}",
        verdict: Some("torsion-free"),
        note: "one second-order potential",
    },
    ExpectationRow {
        name: "kalman",
        condition: "a in {0, 1}",
        verdict: Some("torsion"),
        note: "a first integral exists (a = 0: y1 - y3 is constant)",
    },
    ExpectationRow {
        name: "maxwell-first",
        condition: "n = 4",
        verdict: Some("torsion-free"),
        note: "first-order parametrization by the 4-potential",
    },
    ExpectationRow {
        name: "einstein",
        condition: "n >= 4",
        verdict: Some("torsion"),
        note: "no parametrization; D' is the linearized Riemann operator with n^2(n^2-1)/12 rows",
    },
    ExpectationRow {
        name: "einstein",
        condition: "n = 3",
        verdict: None,
        note: "not predicted; computed",
    },
];

pub fn info(name: &str) -> Option<&'static GalleryInfo> {
    ENTRIES.iter().find(|e| e.name == name)
}

fn x(n: usize, i: usize) -> Polynomial {
    Polynomial::var(n, i)
}

fn k(n: usize, v: i64) -> Polynomial {
    Polynomial::constant(n, int(v))
}

fn zero(n: usize) -> Polynomial {
    Polynomial::zero(n)
}

fn pairs_upper(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect()
}

fn pairs_strict(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

fn label(prefix: &str, idx: &[usize]) -> String {
    let mut s = prefix.to_string();
    for i in idx {
        s.push_str(&(i + 1).to_string());
    }
    s
}

fn build_op(
    n: usize,
    unknowns: Vec<String>,
    equations: Vec<String>,
    entries: Vec<Vec<Polynomial>>,
) -> Result<OperatorMatrix, GalleryError> {
    Ok(OperatorMatrix::new(n, unknowns.len(), entries, unknowns, equations)?)
}

/// `div σ` on the upper triangle of a symmetric tensor.
pub fn stress(n: usize) -> Result<OperatorMatrix, GalleryError> {
    let pairs = pairs_upper(n);
    let idx = |a: usize, b: usize| pairs.iter().position(|&p| p == (a.min(b), a.max(b))).expect("pair");
    let mut rows = Vec::new();
    for i in 0..n {
        let mut row = vec![zero(n); pairs.len()];
        for j in 0..n {
            let c = idx(i, j);
            row[c] = &row[c] + &x(n, j);
        }
        rows.push(row);
    }
    build_op(
        n,
        pairs.iter().map(|&(a, b)| label("s", &[a, b])).collect(),
        (0..n).map(|i| label("f", &[i])).collect(),
        rows,
    )
}

/// `Ω_ij = ∂_i ξ_j + ∂_j ξ_i` for `i ≤ j` (euclidean metric, no factor ½).
pub fn killing(n: usize) -> Result<OperatorMatrix, GalleryError> {
    let pairs = pairs_upper(n);
    let mut rows = Vec::new();
    for &(i, j) in &pairs {
        let mut row = vec![zero(n); n];
        row[j] = &row[j] + &x(n, i);
        row[i] = &row[i] + &x(n, j);
        rows.push(row);
    }
    build_op(
        n,
        (0..n).map(|i| label("xi", &[i])).collect(),
        pairs.iter().map(|&(a, b)| label("Omega", &[a, b])).collect(),
        rows,
    )
}

/// Spencer operator on `(ξ1, ξ2, ξ1,2)` with `ξ2,1 = −ξ1,2`.
pub fn cosserat_d1() -> Result<OperatorMatrix, GalleryError> {
    let n = 2;
    let (d1, d2) = (x(n, 0), x(n, 1));
    let rows = vec![
        vec![d1.clone(), zero(n), zero(n)],
        vec![zero(n), d1.clone(), k(n, -1)],
        vec![d2.clone(), zero(n), k(n, 1)],
        vec![zero(n), d2.clone(), zero(n)],
        vec![zero(n), zero(n), d1.clone()],
        vec![zero(n), zero(n), d2.clone()],
    ];
    build_op(
        n,
        vec!["xi1".into(), "xi2".into(), "xi12".into()],
        ["A11", "A12", "A21", "A22", "B1", "B2"].iter().map(|s| s.to_string()).collect(),
        rows,
    )
}

/// Stress / couple-stress equilibrium on `(σ11, σ12, σ21, σ22, μ1, μ2)`.
pub fn cosserat_adjoint() -> Result<OperatorMatrix, GalleryError> {
    let n = 2;
    let (d1, d2) = (x(n, 0), x(n, 1));
    let rows = vec![
        vec![d1.clone(), zero(n), d2.clone(), zero(n), zero(n), zero(n)],
        vec![zero(n), d1.clone(), zero(n), d2.clone(), zero(n), zero(n)],
        vec![zero(n), k(n, 1), k(n, -1), zero(n), d1.clone(), d2.clone()],
    ];
    build_op(
        n,
        ["s11", "s12", "s21", "s22", "mu1", "mu2"].iter().map(|s| s.to_string()).collect(),
        vec!["f1".into(), "f2".into(), "m12".into()],
        rows,
    )
}

/// `ẏ1 − a y2 − ẏ3 = 0`, `y1 − ẏ2 + ẏ3 = 0` with `a` left symbolic.
pub fn kalman_template() -> ParametricOperator {
    let n = 1;
    let d = x(n, 0);
    let p = ParamPolynomial::from_polynomial;
    let mut a_term = ParamPolynomial::zero(n);
    a_term.add_term(vec![("a".to_string(), 1)], Monomial::one(n), int(-1));
    ParametricOperator {
        nvars: n,
        entries: vec![
            vec![p(&d), a_term, p(&-&d)],
            vec![p(&k(n, 1)), p(&-&d), p(&d)],
        ],
        unknown_names: vec!["y1".into(), "y2".into(), "y3".into()],
        equation_names: vec!["Phi1".into(), "Phi2".into()],
    }
}

pub fn kalman(a: &Rational) -> Result<OperatorMatrix, GalleryError> {
    let mut b = BTreeMap::new();
    b.insert("a".to_string(), a.clone());
    Ok(kalman_template().substitute_params(&b)?)
}

/// `∂_i F_jk + ∂_j F_ki + ∂_k F_ij = 0` for `i < j < k`, unknowns `F_ij`, `i < j`.
pub fn maxwell_first(n: usize) -> Result<OperatorMatrix, GalleryError> {
    let pairs = pairs_strict(n);
    let idx = |a: usize, b: usize| pairs.iter().position(|&p| p == (a, b)).expect("pair");
    let mut rows = Vec::new();
    let mut names = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for l in j + 1..n {
                let mut row = vec![zero(n); pairs.len()];
                row[idx(j, l)] = x(n, i);
                row[idx(i, l)] = -&x(n, j);
                row[idx(i, j)] = x(n, l);
                rows.push(row);
                names.push(label("M", &[i, j, l]));
            }
        }
    }
    build_op(n, pairs.iter().map(|&(a, b)| label("F", &[a, b])).collect(), names, rows)
}

/// Linearized Einstein operator on the upper triangle of a symmetric
/// perturbation `h` of `η = diag(−1, 1, …, 1)`. Row `(i,j)` is
/// `2·w_ij·G^{ij}(h)` with `w = 1` on the diagonal and `2` off it, which
/// makes the matrix symmetric (the operator is self-adjoint).
pub fn einstein(n: usize) -> Result<OperatorMatrix, GalleryError> {
    let pairs = pairs_upper(n);
    let eta = |i: usize| if i == 0 { -1i64 } else { 1 };
    let chi = |i: usize| x(n, i);
    let box_op = (0..n).fold(zero(n), |acc, i| &acc + &(&chi(i) * &chi(i)).scale(&int(eta(i))));
    let mut entries = vec![vec![zero(n); pairs.len()]; pairs.len()];
    for (col, &(a, b)) in pairs.iter().enumerate() {
        // h = E_ab + E_ba (or E_aa) as a constant matrix.
        let h = |p: usize, q: usize| -> i64 {
            if (p, q) == (a, b) || (q, p) == (a, b) {
                1
            } else {
                0
            }
        };
        let trace: i64 = (0..n).map(|p| eta(p) * h(p, p)).sum();
        // Doubled linearized Ricci tensor 2R_ij and doubled scalar 2R.
        let ricci2 = |i: usize, j: usize| -> Polynomial {
            let mut acc = zero(n);
            for p in 0..n {
                let c1 = eta(p) * h(p, j);
                if c1 != 0 {
                    acc = &acc + &(&chi(p) * &chi(i)).scale(&int(c1));
                }
                let c2 = eta(p) * h(p, i);
                if c2 != 0 {
                    acc = &acc + &(&chi(p) * &chi(j)).scale(&int(c2));
                }
            }
            acc = &acc - &box_op.scale(&int(h(i, j)));
            &acc - &(&chi(i) * &chi(j)).scale(&int(trace))
        };
        let mut scalar2 = zero(n);
        for p in 0..n {
            for q in 0..n {
                let c = eta(p) * eta(q) * h(p, q);
                if c != 0 {
                    scalar2 = &scalar2 + &(&chi(p) * &chi(q)).scale(&int(2 * c));
                }
            }
        }
        scalar2 = &scalar2 - &box_op.scale(&int(2 * trace));
        for (row, &(i, j)) in pairs.iter().enumerate() {
            // 2G_ij = 2R_ij − η_ij·R, raised with η, weighted.
            let mut g = ricci2(i, j);
            if i == j {
                g = &g - &scalar2.scale(&Rational::new(eta(i).into(), 2.into()));
            }
            let w = if i == j { 1 } else { 2 };
            entries[row][col] = g.scale(&int(eta(i) * eta(j) * w));
        }
    }
    let op = build_op(
        n,
        pairs.iter().map(|&(a, b)| label("h", &[a, b])).collect(),
        pairs.iter().map(|&(a, b)| label("G", &[a, b])).collect(),
        entries,
    )?;
    einstein_gates(&op, n)?;
    Ok(op)
}

/// Construction-time checks: self-adjointness and annihilation by the
/// divergence conditions.
fn einstein_gates(op: &OperatorMatrix, n: usize) -> Result<(), GalleryError> {
    let review = |reason: &str| GalleryError::FormulaReview {
        name: "einstein".into(),
        reason: reason.into(),
    };
    if !op.adjoint().same_entries(op) {
        return Err(review("operator is not self-adjoint"));
    }
    let pairs = pairs_upper(n);
    let mut div = Vec::new();
    for j in 0..n {
        let mut row = vec![zero(n); pairs.len()];
        for (c, &(a, b)) in pairs.iter().enumerate() {
            if a == j && b == j {
                row[c] = x(n, j);
            } else if a == j {
                row[c] = x(n, b).scale(&Rational::new(1.into(), 2.into()));
            } else if b == j {
                row[c] = x(n, a).scale(&Rational::new(1.into(), 2.into()));
            }
        }
        div.push(row);
    }
    let div = OperatorMatrix::from_entries(n, pairs.len(), div)?;
    if !div.compose(op)?.is_zero() {
        return Err(review("divergence identities fail"));
    }
    if op.is_zero() {
        return Err(review("operator vanishes"));
    }
    Ok(())
}

fn expected_for(name: &str, n: usize, a: Option<&Rational>) -> Option<Expected> {
    let riemann = n * n * (n * n - 1) / 12;
    match name {
        "stress" if n <= 3 => Some(Expected {
            torsion_free: Some(true),
            parametrization_order: Some(2),
            potentials: Some(riemann),
            cc_rows: Some(0),
            ..Default::default()
        }),
        "killing" => Some(Expected {
            cc_rows: Some(riemann),
            ..Default::default()
        }),
        "cosserat-d1" => Some(Expected {
            cc_rows: Some(3),
            ..Default::default()
        }),
        "cosserat-adjoint" => Some(Expected {
            torsion_free: Some(true),
            parametrization_order: Some(1),
            potentials: Some(3),
            ..Default::default()
        }),
        "kalman" => {
            let a = a?;
            let degenerate = *a == int(0) || *a == int(1);
            Some(if degenerate {
                Expected {
                    torsion_free: Some(false),
                    ..Default::default()
                }
            } else {
                Expected {
                    torsion_free: Some(true),
                    parametrization_order: Some(2),
                    potentials: Some(1),
                    ..Default::default()
                }
            })
        }
        "maxwell-first" if n == 4 => Some(Expected {
            torsion_free: Some(true),
            parametrization_order: Some(1),
            potentials: Some(4),
            ..Default::default()
        }),
        "einstein" if n >= 4 => Some(Expected {
            torsion_free: Some(false),
            cc_of_candidate_rows: Some(riemann),
            ..Default::default()
        }),
        _ => None,
    }
}

/// Builds a gallery entry. `n = None` selects the entry's default.
pub fn gallery_build(name: &str, n: Option<usize>, params: &BTreeMap<String, Rational>) -> Result<GalleryEntry, GalleryError> {
    let info = info(name).ok_or_else(|| GalleryError::UnknownName(name.to_string()))?;
    let n = n.unwrap_or(info.default_n);
    if n < info.n_min || n > info.n_max {
        return Err(GalleryError::UnsupportedN {
            name: name.to_string(),
            n,
            supported: if info.n_min == info.n_max {
                info.n_min.to_string()
            } else {
                format!("{}..={}", info.n_min, info.n_max)
            },
        });
    }
    let mut template = None;
    let operator = match name {
        "stress" => stress(n)?,
        "killing" => killing(n)?,
        "cosserat-d1" => cosserat_d1()?,
        "cosserat-adjoint" => cosserat_adjoint()?,
        "kalman" => {
            let a = params.get("a").ok_or_else(|| GalleryError::MissingParameter {
                name: name.to_string(),
                param: "a".to_string(),
            })?;
            template = Some(kalman_template());
            kalman(a)?
        }
        "maxwell-first" => maxwell_first(n)?,
        "einstein" => einstein(n)?,
        _ => unreachable!("checked by info()"),
    };
    Ok(GalleryEntry {
        name: name.to_string(),
        n,
        operator,
        template,
        expected: expected_for(name, n, params.get("a")),
    })
}
