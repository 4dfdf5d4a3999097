//! Shared helpers for the integration tests.
#![allow(dead_code)]

pub mod oracle;

use std::collections::BTreeMap;
use std::path::PathBuf;

use parametrix::diffop::OperatorMatrix;
use parametrix::exact_poly::{int, Monomial, MonomialOrder, Polynomial, Rational};
use parametrix::gallery::{self, GalleryEntry};
use parametrix::groebner::{GroebnerBasis, ModuleVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn ord() -> MonomialOrder {
    MonomialOrder::default()
}

pub fn d(n: usize, i: usize) -> Polynomial {
    Polynomial::var(n, i)
}

pub fn c(n: usize, v: i64) -> Polynomial {
    Polynomial::constant(n, int(v))
}

pub fn no_params() -> BTreeMap<String, Rational> {
    BTreeMap::new()
}

pub fn build(name: &str, n: Option<usize>) -> GalleryEntry {
    gallery::gallery_build(name, n, &no_params()).unwrap()
}

pub fn kalman(a: i64) -> OperatorMatrix {
    gallery::kalman(&int(a)).unwrap()
}

/// Every supported gallery entry, with the Kalman system at a = 0, 1, 2.
pub fn all_gallery_operators() -> Vec<(String, OperatorMatrix)> {
    let mut out = Vec::new();
    for info in gallery::ENTRIES {
        for n in info.n_min..=info.n_max {
            if info.params.is_empty() {
                out.push((format!("{}({n})", info.name), build(info.name, Some(n)).operator));
            } else {
                for a in 0..=2 {
                    out.push((format!("{}(a={a})", info.name), kalman(a)));
                }
            }
        }
    }
    out
}

/// Module generated by the columns of `p`, i.e. the image of `p` read as
/// the set of right multiples `p·q`.
pub fn column_module(p: &OperatorMatrix) -> GroebnerBasis {
    GroebnerBasis::compute(p.nvars(), p.nrows(), &p.columns(), &ord()).unwrap()
}

pub fn row_module(p: &OperatorMatrix) -> GroebnerBasis {
    GroebnerBasis::compute(p.nvars(), p.ncols(), &p.rows(), &ord()).unwrap()
}

pub fn same_module(a: &GroebnerBasis, gens: &[ModuleVector]) -> bool {
    let b = GroebnerBasis::compute(a.nvars(), a.rank(), gens, a.order()).unwrap();
    a.generators() == b.generators()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_poly(r: &mut ChaCha8Rng, n: usize, max_deg: u32, max_terms: usize) -> Polynomial {
    let mut p = Polynomial::zero(n);
    let monos = Monomial::all_up_to_degree(n, max_deg);
    for _ in 0..r.gen_range(0..=max_terms) {
        let m = monos[r.gen_range(0..monos.len())];
        let mut v: i64 = r.gen_range(-3..=3);
        if v == 0 {
            v = 1;
        }
        p.add_term(m, int(v));
    }
    p
}

/// Random operator with `n ≤ 3`, order `≤ 2`, at most three terms per
/// entry and at most 3 × 3 entries.
pub fn random_operator(r: &mut ChaCha8Rng) -> OperatorMatrix {
    let n = r.gen_range(1..=3);
    let rows = r.gen_range(1..=3);
    let cols = r.gen_range(1..=3);
    let entries = (0..rows)
        .map(|_| (0..cols).map(|_| random_poly(r, n, 2, 3)).collect())
        .collect();
    OperatorMatrix::from_entries(n, cols, entries).unwrap()
}

pub fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn systems_dir() -> PathBuf {
    crate_dir().join("../../systems")
}

pub fn schema(name: &str) -> serde_json::Value {
    let text = std::fs::read_to_string(crate_dir().join("schema").join(name)).unwrap();
    serde_json::from_str(&text).unwrap()
}

/// Validation errors of `instance` against a shipped schema, as strings.
pub fn schema_errors(schema_file: &str, instance: &serde_json::Value) -> Vec<String> {
    let validator = jsonschema::validator_for(&schema(schema_file)).unwrap();
    validator.iter_errors(instance).map(|e| e.to_string()).collect()
}
