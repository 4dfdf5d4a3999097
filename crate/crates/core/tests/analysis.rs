//! Torsion-free test, parametrizations and certificates on the gallery.

mod common;

use common::*;
use parametrix::analysis::{
    compatibility_conditions, extract_torsion, generic_rank, localize_corank1, parametrize,
    presentation_independence_check, torsion_free_test, AnalysisError,
};
use parametrix::diffop::{MaxOrder, OperatorMatrix};
use parametrix::exact_poly::rat;
use parametrix::gallery;
use parametrix::groebner::ModuleVector;

#[test]
fn double_adjoint_gives_the_same_report() {
    for (name, a) in all_gallery_operators() {
        let direct = torsion_free_test(&a, &ord()).unwrap();
        let twice = torsion_free_test(&a.adjoint().adjoint(), &ord()).unwrap();
        assert_eq!(direct, twice, "{name}");
    }
}

#[test]
fn certificates_are_genuine_torsion() {
    for (name, a) in all_gallery_operators() {
        let rep = torsion_free_test(&a, &ord()).unwrap();
        assert_eq!(rep.torsion_free, rep.torsion.is_empty(), "{name}");
        let gb = row_module(&a);
        let dp = row_module(&rep.cc_of_candidate);
        for cert in &rep.torsion {
            assert!(!gb.contains(&cert.element).unwrap(), "{name}");
            assert!(dp.contains(&cert.element).unwrap(), "{name}");
            assert!(!cert.annihilator.is_zero());
            assert!(gb.contains(&cert.element.mul_poly(&cert.annihilator)).unwrap(), "{name}");
        }
    }
}

#[test]
fn gallery_expectations_hold() {
    for info in gallery::ENTRIES {
        for n in info.n_min..=info.n_max {
            let entry = if info.params.is_empty() {
                build(info.name, Some(n))
            } else {
                continue;
            };
            let Some(exp) = entry.expected.clone() else { continue };
            let rep = torsion_free_test(&entry.operator, &ord()).unwrap();
            let ctx = format!("{}({n})", info.name);
            if let Some(tf) = exp.torsion_free {
                assert_eq!(rep.torsion_free, tf, "{ctx}");
            }
            if let Some(q) = exp.parametrization_order {
                assert_eq!(rep.orders.candidate_parametrization, MaxOrder(q), "{ctx}");
            }
            if let Some(p) = exp.potentials {
                assert_eq!(rep.candidate_parametrization.ncols(), p, "{ctx}");
            }
            if let Some(k) = exp.cc_rows {
                assert_eq!(compatibility_conditions(&entry.operator, &ord()).unwrap().nrows(), k, "{ctx}");
            }
            if let Some(k) = exp.cc_of_candidate_rows {
                assert_eq!(rep.cc_of_candidate.nrows(), k, "{ctx}");
            }
        }
    }
}

#[test]
fn kalman_is_torsion_free_away_from_zero_and_one() {
    for a in [rat(2, 1), rat(-1, 1), rat(1, 2), rat(3, 1), rat(-7, 3)] {
        let op = gallery::kalman(&a).unwrap();
        assert!(torsion_free_test(&op, &ord()).unwrap().torsion_free, "a = {a}");
    }
    for a in [0, 1] {
        assert!(!extract_torsion(&kalman(a), &ord()).unwrap().is_empty());
    }
}

#[test]
fn einstein_small_dimension_and_self_adjointness() {
    for n in [3, 4] {
        let a = build("einstein", Some(n)).operator;
        assert!(a.adjoint().same_entries(&a), "n = {n}");
    }
    let rep = torsion_free_test(&build("einstein", Some(3)).operator, &ord()).unwrap();
    assert!(rep.torsion_free);
    assert_eq!(rep.cc_of_candidate.nrows(), 6);
}

#[test]
fn stress_higher_dimensions() {
    let a = build("stress", Some(3)).operator;
    let rep = torsion_free_test(&a, &ord()).unwrap();
    assert!(rep.torsion_free);
    assert_eq!(rep.candidate_parametrization.ncols(), 6);
    assert_eq!(rep.orders.candidate_parametrization, MaxOrder(2));
    // D′ recovers the input module exactly.
    assert!(same_module(&row_module(&a), &rep.cc_of_candidate.rows()));
}

#[test]
fn prolongation_does_not_change_the_verdict() {
    // Killing(2) next to its first prolongation: both present the same
    // module, so both verdicts agree.
    let k = build("killing", Some(2)).operator;
    let mut rows = k.rows();
    for v in k.rows() {
        for i in 0..2 {
            rows.push(v.mul_poly(&d(2, i)));
        }
    }
    let prolonged = OperatorMatrix::from_rows(2, 2, &rows).unwrap();
    assert!(presentation_independence_check(&k, &prolonged, &ord()).unwrap());
    let t1 = torsion_free_test(&k, &ord()).unwrap().torsion_free;
    let t2 = torsion_free_test(&prolonged, &ord()).unwrap().torsion_free;
    assert_eq!(t1, t2);
    // A finite-dimensional solution space: every residue is torsion.
    assert!(!t1);
}

#[test]
fn localization_matches_the_five_step_result() {
    for (a, name) in [(build("stress", Some(2)).operator, "stress"), (kalman(2), "kalman")] {
        let loc = localize_corank1(&a).unwrap();
        let p = parametrize(&a, &ord()).unwrap();
        assert!(a.compose(&loc.operator).unwrap().is_zero(), "{name}");
        assert!(same_module(&column_module(&p.operator), &loc.operator.columns()), "{name}");
    }
    let k = build("killing", Some(2)).operator;
    assert_eq!(generic_rank(&k), 2);
    assert!(matches!(localize_corank1(&k), Err(AnalysisError::UnsupportedCorank { corank: 0 })));
    let s3 = build("stress", Some(3)).operator;
    assert!(matches!(localize_corank1(&s3), Err(AnalysisError::UnsupportedCorank { corank: 3 })));
}

#[test]
fn degenerate_operators() {
    // No equations: free module, the identity parametrizes.
    let empty = OperatorMatrix::zero(2, 0, 2);
    let rep = torsion_free_test(&empty, &ord()).unwrap();
    assert!(rep.torsion_free);
    assert_eq!(rep.candidate_parametrization.ncols(), 2);
    // Square invertible-symbol operator: zero parametrization.
    let ode = OperatorMatrix::from_entries(1, 1, vec![vec![d(1, 0)]]).unwrap();
    let rep = torsion_free_test(&ode, &ord()).unwrap();
    assert_eq!(rep.candidate_parametrization.ncols(), 0);
    assert!(!rep.torsion_free);
    assert_eq!(rep.torsion.len(), 1);
    assert_eq!(rep.torsion[0].element, ModuleVector::new(1, vec![c(1, 1)]));
}

#[test]
fn monomial_order_does_not_change_verdicts() {
    use parametrix::exact_poly::{MonomialOrder, OrderKind};
    for kind in [OrderKind::Lex, OrderKind::Deglex] {
        let o = MonomialOrder::new(kind);
        for (name, a) in all_gallery_operators() {
            let base = torsion_free_test(&a, &ord()).unwrap();
            let other = torsion_free_test(&a, &o).unwrap();
            assert_eq!(base.torsion_free, other.torsion_free, "{name} {kind}");
            assert_eq!(base.cc_of_adjoint.nrows(), other.cc_of_adjoint.nrows(), "{name} {kind}");
        }
    }
}
