//! Involution checks, completion and Spencer forms.

mod common;

use common::*;
use parametrix::diffop::OperatorMatrix;
use parametrix::groebner::ModuleVector;
use parametrix::janet::{
    full_torsion_check, involutive_completion, is_involutive, janet_multiplicative, spencer_form,
    CompletionOptions, JanetError,
};
use parametrix::exact_poly::Monomial;

fn opts() -> CompletionOptions {
    CompletionOptions { degree_cap: 10, seed: 0 }
}

fn ex210() -> OperatorMatrix {
    let (x1, x2, x3) = (d(3, 0), d(3, 1), d(3, 2));
    OperatorMatrix::from_entries(3, 1, vec![vec![&x1 * &x1], vec![&(&x1 * &x3) - &x2]]).unwrap()
}

#[test]
fn witness_for_the_unpermuted_system() {
    let w = is_involutive(&ex210().rows()).unwrap_err();
    assert_eq!((w.equation, w.variable), (0, 3));
    assert_eq!(w.residual, ModuleVector::new(3, vec![&d(3, 0) * &d(3, 1)]));
}

#[test]
fn completion_is_involutive_and_equivalent() {
    for (name, a) in [
        ("ex210", ex210()),
        ("killing(2)", build("killing", Some(2)).operator),
        ("killing(3)", build("killing", Some(3)).operator),
        ("stress(2)", build("stress", Some(2)).operator),
        ("maxwell(3)", build("maxwell-first", Some(3)).operator),
    ] {
        let sys = involutive_completion(&a, &opts()).unwrap();
        assert!(sys.involutive, "{name}");
        assert!(is_involutive(&sys.rows()).is_ok(), "{name}");
        // Completion only adds consequences: the transformed input and the
        // completed system generate the same module.
        let moved: Vec<ModuleVector> = a
            .rows()
            .iter()
            .map(|v| ModuleVector::new(a.nvars(), v.components().iter().map(|p| p.linear_substitute(&sys.coordinate_change)).collect()))
            .collect();
        assert!(same_module(&row_module(&sys.to_operator().unwrap()), &moved), "{name}");
    }
}

#[test]
fn involutive_input_keeps_coordinates() {
    let ode = OperatorMatrix::from_entries(1, 1, vec![vec![&d(1, 0) * &d(1, 0)]]).unwrap();
    let sys = involutive_completion(&ode, &opts()).unwrap();
    assert_eq!(sys.permutation, Some(vec![0]));
    let stress = build("stress", Some(2)).operator;
    let sys = involutive_completion(&stress, &opts()).unwrap();
    assert_eq!(sys.permutation, Some(vec![0, 1]));
    assert_eq!(sys.equations.len(), 2);
    assert!(!full_torsion_check(&sys).unwrap());
}

#[test]
fn degree_cap_is_enforced() {
    let k = build("killing", Some(2)).operator;
    let err = involutive_completion(&k, &CompletionOptions { degree_cap: 1, seed: 0 }).unwrap_err();
    assert_eq!(err, JanetError::DegreeCapExceeded { cap: 1 });
}

#[test]
fn completion_is_deterministic() {
    let a = build("killing", Some(3)).operator;
    let s1 = involutive_completion(&a, &opts()).unwrap();
    let s2 = involutive_completion(&a, &opts()).unwrap();
    assert_eq!(s1, s2);
}

#[test]
fn killing_spencer_form_is_the_cosserat_operator() {
    let k = build("killing", Some(2)).operator;
    let sys = involutive_completion(&k, &opts()).unwrap();
    let sp = spencer_form(&sys).unwrap();
    assert_eq!(sp.operator.max_order().0, 1);
    assert_eq!(sp.operator.ncols(), 3);
    let cosserat = build("cosserat-d1", None).operator;
    assert!(same_module(&row_module(&sp.operator), &cosserat.rows()));
}

#[test]
fn spencer_form_needs_involution() {
    let a = ex210();
    let mut sys = involutive_completion(&a, &opts()).unwrap();
    sys.involutive = false;
    assert_eq!(spencer_form(&sys).unwrap_err(), JanetError::NotInvolutive);
}

#[test]
fn multiplicative_variables() {
    let m = |e: &[u32]| Monomial::from_exponents(e).unwrap();
    // y33, y23, y22, y13: Janet multiplicative sets {1,2,3}, {1,2}, {1,2}, {1}
    let mult = janet_multiplicative(&[m(&[0, 0, 2]), m(&[0, 1, 1]), m(&[0, 2, 0]), m(&[1, 0, 1])]);
    assert_eq!(mult[0], vec![1, 2, 3]);
    assert_eq!(mult[3], vec![1]);
}
