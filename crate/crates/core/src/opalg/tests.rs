use super::builtin::{permutations, substitute};
use super::*;
use crate::exactla::{q_int, ExactMatrix, GradedFreeModule, Ring};
use std::collections::BTreeMap;

#[test]
fn com_and_ass_validate() {
    let c = com(Ring::Int, 4).unwrap();
    assert_eq!(c.seq().dims(), vec![1, 1, 1, 1]);
    let a = ass(Ring::Int, 4).unwrap();
    assert_eq!(a.seq().dims(), vec![1, 2, 6, 24]);
}

#[test]
fn ass_composition_is_substitution() {
    let a = ass(Ring::Int, 3).unwrap();
    let words2 = permutations(2);
    let words3 = permutations(3);
    // x = 21, y = 21, substituted at letter 1
    let x = words2.iter().position(|w| w == &vec![1, 0]).unwrap();
    let out = a.compose_basis(2, 1, 2, x, x);
    // oracle: 2 1 with 1 → (2 1) gives 3 2 1
    let expect = words3.iter().position(|w| w == &vec![2, 1, 0]).unwrap();
    assert_eq!(out, vec![(expect, q_int(1))]);
    assert_eq!(substitute(&[1, 0], 0, &[1, 0]), vec![2, 1, 0]);
    assert_eq!(substitute(&[0, 1], 0, &[1, 0]), vec![1, 0, 2]);
}

#[test]
fn duals_are_involutive() {
    let a = ass(Ring::Int, 3).unwrap();
    let d = a.dual();
    assert_eq!(d.seq().dims(), vec![1, 2, 6]);
    let back = d.dual();
    assert_eq!(back.compositions(), a.compositions());
    assert_eq!(back.seq().modules(), a.seq().modules());
    let c = com(Ring::Int, 3).unwrap().dual();
    assert!(c.seq().modules().iter().all(|m| m.ranks() == BTreeMap::from([(0, 1)])));
    Cooperad::new(d.seq().clone(), d.cocompositions().clone()).unwrap();
}

#[test]
fn corrupted_composition_cites_axiom_one() {
    let c = com(Ring::Int, 4).unwrap();
    let mut comps = c.compositions().clone();
    comps.insert((2, 1, 2), ExactMatrix::from_triplets(Ring::Int, 1, 1, vec![(0, 0, q_int(2))]).unwrap());
    let err = Operad::new(c.seq().clone(), comps).unwrap_err();
    assert_eq!(err.axiom_name(), Some("(1) sequential associativity"));
}

#[test]
fn sphere_structures() {
    let s = sphere_comodule(2, Ring::Int, 3).unwrap();
    assert_eq!(s.side(), Side::LeftComodule);
    assert_eq!(s.seq().degrees(3), vec![2]);
    let m = sphere_module(1, Ring::Int, 4).unwrap();
    assert_eq!(m.dual().side(), Side::LeftComodule);
    SidedModule::unit(Side::RightModule, com(Ring::Int, 3).unwrap().seq());
}

#[test]
fn torus_and_projective_plane_comodules() {
    // CP²: e2, e4 with Δ e4 = e2 ⊗ e2
    let c = GradedFreeModule::from_parts(BTreeMap::from([(2, vec!["e2".into()]), (4, vec!["e4".into()])])).unwrap();
    let delta = ExactMatrix::from_triplets(Ring::Int, 4, 2, vec![(0, 1, q_int(1))]).unwrap();
    coalgebra_comodule("cp2", &c, &delta, 4).unwrap();
    // T²: a, b in degree 1, c in degree 2, Δc = a⊗b − b⊗a
    let t = GradedFreeModule::from_parts(BTreeMap::from([(1, vec!["a".into(), "b".into()]), (2, vec!["c".into()])])).unwrap();
    let delta = ExactMatrix::from_triplets(Ring::Int, 9, 3, vec![(1, 2, q_int(1)), (3, 2, q_int(-1))]).unwrap();
    coalgebra_comodule("torus", &t, &delta, 4).unwrap();
    // a⊗b + b⊗a is not graded cocommutative
    let bad = ExactMatrix::from_triplets(Ring::Int, 9, 3, vec![(1, 2, q_int(1)), (3, 2, q_int(1))]).unwrap();
    let err = coalgebra_comodule("bad", &t, &bad, 3).unwrap_err();
    assert_eq!(err.axiom_name(), Some("cocommutativity"));
}

#[test]
fn compose_product_ranks() {
    let c = com(Ring::Int, 4).unwrap();
    let cc = compose_product(c.seq(), c.seq(), 3).unwrap();
    assert_eq!(cc.ranks(), BTreeMap::from([(0, 5)]));
    let unit = SymSeq::unit(Ring::Int, 4);
    let a = ass(Ring::Int, 4).unwrap();
    for n in 1..=4 {
        assert_eq!(compose_product(&unit, a.seq(), n).unwrap().ranks(), a.seq().module(n).ranks());
        assert_eq!(compose_product(a.seq(), &unit, n).unwrap().ranks(), a.seq().module(n).ranks());
    }
    assert!(compose_product(c.seq(), c.seq(), 5).is_err());
}

#[test]
fn compose_product_action_is_a_representation() {
    let a = ass(Ring::Int, 3).unwrap();
    let s = sphere_module(1, Ring::Int, 3).unwrap();
    let p = compose_product(a.seq(), s.seq(), 3).unwrap();
    let ts = p.transpositions.clone();
    let seq = SymSeq::new(
        "check",
        Ring::Int,
        vec![GradedFreeModule::new(), GradedFreeModule::new(), p.module.clone()],
        vec![vec![], vec![ExactMatrix::zeros(Ring::Int, 0, 0)], ts],
    );
    assert!(seq.is_ok(), "{seq:?}");
}

#[test]
fn text_round_trip() {
    for s in [
        Structure::Operad(com(Ring::Int, 3).unwrap()),
        Structure::Operad(ass(Ring::Rat, 3).unwrap()),
        Structure::Cooperad(ass(Ring::Int, 3).unwrap().dual()),
    ] {
        let text = save_string(&s);
        assert_eq!(load_str(&text).unwrap(), s);
    }
    let m = sphere_comodule(2, Ring::Int, 3).unwrap();
    let s = Structure::Module { module: m, over: Box::new(Structure::Cooperad(com(Ring::Int, 3).unwrap().dual())) };
    assert_eq!(load_str(&save_string(&s)).unwrap(), s);
}

#[test]
fn parse_errors_have_lines() {
    let err = load_str("structure operad\nname x\nring W\n").unwrap_err();
    assert!(matches!(err, OpalgError::Parse { line: 3, .. }), "{err}");
}
