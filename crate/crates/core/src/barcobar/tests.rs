use super::*;
use crate::exactla::{homology, Ring};
use crate::opalg::{ass, com};
use std::collections::BTreeMap;

#[test]
fn bar_of_com_and_ass_small() {
    let c = com(Ring::Int, 4).unwrap();
    let b = reduced_bar(&c, 4).unwrap();
    assert_eq!(homology(b.complex()).unwrap().ranks(), BTreeMap::from([(3, 6)]));
    let a = ass(Ring::Int, 3).unwrap();
    let b = reduced_bar(&a, 2).unwrap();
    assert_eq!(homology(b.complex()).unwrap().ranks(), BTreeMap::from([(1, 2)]));
    let b = reduced_bar(&a, 3).unwrap();
    assert_eq!(homology(b.complex()).unwrap().ranks(), BTreeMap::from([(2, 6)]));
}

#[test]
fn cobar_of_cocom() {
    let q = com(Ring::Int, 4).unwrap().dual();
    for n in 1..=4 {
        let o = reduced_cobar(&q, n).unwrap();
        let h = homology(o.complex()).unwrap();
        let f: usize = (1..n).product();
        assert_eq!(h.ranks(), BTreeMap::from([(1 - n as i64, f)]), "arity {n}");
    }
}

fn check_equivariant(b: &BarComplex) {
    use crate::exactla::ChainMap;
    let n = b.arity();
    for t in 0..n.saturating_sub(1) {
        let mut sigma: Vec<u32> = (1..=n as u32).collect();
        sigma.swap(t, t + 1);
        let g = b.relabel_action(&sigma).unwrap();
        ChainMap::new(b.complex_arc(), b.complex_arc(), g.clone()).unwrap();
        for (d, m) in &g {
            assert_eq!(m.mul(m).unwrap(), crate::exactla::ExactMatrix::identity(b.ring(), b.complex().rank(*d)));
        }
    }
}

#[test]
fn odd_coefficients_and_equivariance() {
    use crate::opalg::{coalgebra_comodule, sphere_comodule, sphere_module};
    let c = com(Ring::Int, 4).unwrap();
    for r in [1, 2] {
        let l = sphere_module(r, Ring::Int, 4).unwrap();
        for n in 1..=4 {
            let b = bar_complex(&SidedModule::unit(crate::opalg::Side::RightModule, c.seq()), &c, &l, n).unwrap();
            check_equivariant(&b);
        }
        let l = sphere_comodule(r, Ring::Int, 4).unwrap();
        for n in 1..=4 {
            let q = c.dual();
            let o = cobar_complex(&SidedModule::unit(crate::opalg::Side::RightComodule, q.seq()), &q, &l, n).unwrap();
            check_equivariant(&o);
        }
    }
    let t = crate::exactla::GradedFreeModule::from_parts(BTreeMap::from([(1, vec!["a".into(), "b".into()]), (2, vec!["c".into()])])).unwrap();
    let delta = crate::exactla::ExactMatrix::from_triplets(Ring::Int, 9, 3, vec![(1, 2, crate::exactla::q_int(1)), (3, 2, crate::exactla::q_int(-1))]).unwrap();
    let l = coalgebra_comodule("torus", &t, &delta, 4).unwrap();
    let q = c.dual();
    for n in 1..=4 {
        let o = cobar_complex(&SidedModule::unit(crate::opalg::Side::RightComodule, q.seq()), &q, &l, n).unwrap();
        check_equivariant(&o);
    }
    let a = ass(Ring::Int, 4).unwrap();
    for n in 1..=4 {
        check_equivariant(&reduced_bar(&a, n).unwrap());
        check_equivariant(&reduced_cobar(&a.dual(), n).unwrap());
    }
}

#[test]
fn cobar_of_dual_is_transpose_of_bar() {
    let a = ass(Ring::Int, 4).unwrap();
    let b = reduced_bar(&a, 4).unwrap();
    let o = reduced_cobar(&a.dual(), 4).unwrap();
    let hb = homology(b.complex()).unwrap();
    let ho = homology(o.complex()).unwrap();
    assert_eq!(hb.ranks(), BTreeMap::from([(3, 24)]));
    assert_eq!(ho.ranks(), BTreeMap::from([(-3, 24)]));
    for d in b.complex().degrees() {
        assert_eq!(b.complex().rank(d), o.complex().rank(-d));
    }
}

#[test]
fn structure_maps_are_chain_maps() {
    use crate::opalg::{partial_keys, sphere_comodule};
    let a = ass(Ring::Int, 4).unwrap();
    let bs: Vec<_> = (1..=4).map(|n| reduced_bar(&a, n).unwrap()).collect();
    let q = a.dual();
    let os: Vec<_> = (1..=4).map(|n| reduced_cobar(&q, n).unwrap()).collect();
    for (m, at, n) in partial_keys(4) {
        let (sa, sb) = canonical_sets(m, at, n);
        bar_cocomposition(&bs[m + n - 2], &bs[m - 1], &bs[n - 1], &sa, &sb, at as u32).unwrap();
        cobar_composition(&os[m - 1], &os[n - 1], &os[m + n - 2], &sa, &sb, at as u32).unwrap();
    }
    // a non-canonical cut
    bar_cocomposition(&bs[3], &bs[1], &bs[2], &[2, 3], &[1, 3, 4], 3).unwrap();
    let c = com(Ring::Int, 4).unwrap().dual();
    let l = sphere_comodule(1, Ring::Int, 4).unwrap();
    let lo: Vec<_> = (1..=4).map(|n| cobar_complex(&SidedModule::unit(crate::opalg::Side::RightComodule, c.seq()), &c, &l, n).unwrap()).collect();
    let co: Vec<_> = (1..=4).map(|n| reduced_cobar(&c, n).unwrap()).collect();
    for key in SidedModule::partitions(4) {
        let parts: Vec<&BarComplex> = key.iter().map(|b| &lo[b.len() - 1]).collect();
        module_structure_map(&lo[3], &co[key.len() - 1], &parts, &key).unwrap();
    }
}

#[test]
fn koszul_of_com_and_its_double_dual() {
    let c = com(Ring::Int, 5).unwrap();
    let k = koszul(&c, 5).unwrap();
    assert!(k.is_koszul());
    assert_eq!(k.dims(), vec![1, 1, 2, 6, 24]);
    let lie_dual = k.cooperad().unwrap().dual();
    let kk = koszul(&lie_dual, 5).unwrap();
    assert!(kk.is_koszul());
    assert_eq!(kk.dims(), vec![1; 5]);
}

#[test]
fn derivatives_and_jacobi() {
    let d = derivatives_homology(4).unwrap();
    assert!(d.ranks_match);
    let j = d.jacobi.clone().unwrap();
    assert!(j.holds, "{j:?}");
    assert_eq!(j.translates_rank, 2);
}

#[test]
fn module_mx_of_sphere() {
    let l = crate::opalg::sphere_comodule(2, Ring::Int, 4).unwrap();
    let r = module_mx_homology(&l, 4).unwrap();
    assert!(r.matches_compose());
    let top = &r.ranks()[3];
    assert_eq!(top.values().copied().collect::<Vec<_>>(), vec![1, 7, 12, 6]);
}

#[test]
fn simplicial_bar_agrees_with_trees() {
    use crate::opalg::{sphere_module, Side};
    let c = com(Ring::Int, 4).unwrap();
    let a = ass(Ring::Int, 4).unwrap();
    let unit_r = |p: &crate::opalg::Operad| SidedModule::unit(Side::RightModule, p.seq());
    let unit_l = |p: &crate::opalg::Operad| SidedModule::unit(Side::LeftModule, p.seq());
    for n in 1..=4 {
        for p in [&c, &a] {
            let s = simplicial_bar_complex(&unit_r(p), p, &unit_l(p), n).unwrap();
            let t = reduced_bar(p, n).unwrap();
            assert_eq!(homology(&s.complex).unwrap(), homology(t.complex()).unwrap(), "{} arity {n}", p.name());
        }
        for r in [1, 2] {
            let l = sphere_module(r, Ring::Int, 4).unwrap();
            let s = simplicial_bar_complex(&unit_r(&c), &c, &l, n).unwrap();
            let t = bar_complex(&unit_r(&c), &c, &l, n).unwrap();
            assert_eq!(homology(&s.complex).unwrap(), homology(t.complex()).unwrap(), "sphere {r} arity {n}");
        }
    }
}

#[test]
fn chain_level_structures_satisfy_axioms() {
    use crate::opalg::{sphere_comodule, Side};
    let a = ass(Ring::Int, 4).unwrap();
    let bars = family(Construction::Bar, &std::sync::Arc::new(Coefficients::reduced_bar(&a)), 4, Ring::Int).unwrap();
    chain_cooperad(&bars).unwrap();
    let cobars = family(Construction::Cobar, &std::sync::Arc::new(Coefficients::reduced_cobar(&a.dual())), 4, Ring::Int).unwrap();
    chain_operad(&cobars).unwrap();
    let q = com(Ring::Int, 4).unwrap().dual();
    let ops = family(Construction::Cobar, &std::sync::Arc::new(Coefficients::reduced_cobar(&q)), 4, Ring::Int).unwrap();
    let op = chain_operad(&ops).unwrap();
    for r in [1, 2] {
        let l = sphere_comodule(r, Ring::Int, 4).unwrap();
        let coeffs = Coefficients::cobar(SidedModule::unit(Side::RightComodule, q.seq()), q.clone(), l).unwrap();
        let mods = family(Construction::Cobar, &std::sync::Arc::new(coeffs), 4, Ring::Int).unwrap();
        chain_left_module(&mods, &ops, &op).unwrap();
    }
}

#[test]
fn corrupted_chain_cocomposition_is_rejected() {
    let a = ass(Ring::Int, 4).unwrap();
    let bars = family(Construction::Bar, &std::sync::Arc::new(Coefficients::reduced_bar(&a)), 4, Ring::Int).unwrap();
    let good = chain_cooperad(&bars).unwrap();
    let mut maps = good.cocompositions().clone();
    let m = maps[&(2, 1, 3)].scaled(&crate::exactla::q_int(-1));
    maps.insert((2, 1, 3), m);
    assert!(crate::opalg::Cooperad::new(good.seq().clone(), maps).is_err());
}
