use super::*;
use crate::exactla::homology;

/// f({x}) = 1, f(S) = Σ over partitions of S into ≥ 2 blocks of Π f(block).
fn recurrence(n: usize) -> u64 {
    let mut f = vec![0u64; n + 1];
    f[1] = 1;
    for m in 2..=n {
        let items: Vec<usize> = (0..m).collect();
        f[m] = set_partitions(&items)
            .iter()
            .filter(|p| p.len() >= 2)
            .map(|p| p.iter().map(|b| f[b.len()]).product::<u64>())
            .sum();
    }
    f[n]
}

#[test]
fn counts_match_recurrence() {
    for n in 1..=6 {
        assert_eq!(enumerate_trees(n, Species::Standard).unwrap().len() as u64, recurrence(n), "n = {n}");
    }
    assert_eq!(enumerate_trees(2, Species::Generalized).unwrap().len(), 3);
    assert_eq!(enumerate_trees(3, Species::Root).unwrap().len(), 8);
    assert!(enumerate_trees(0, Species::Standard).is_err());
    assert!(enumerate_trees(9, Species::Standard).is_err());
}

#[test]
fn enumeration_sorted_and_canonical() {
    let ts = enumerate_trees(4, Species::Generalized).unwrap();
    assert!(ts.windows(2).all(|w| w[0] < w[1]));
    for t in &ts {
        let again = Tree::parse(t.serialize()).unwrap();
        assert_eq!(&again, t);
        assert_eq!(Tree::from_root_children(t.root_children().to_vec()), *t);
    }
}

#[test]
fn serialization_examples() {
    assert_eq!(Tree::corolla(2).serialize(), "{([1],[2])}");
    assert_eq!(Tree::parse("{([3],[2],[1])}").unwrap(), Tree::corolla(3));
    assert!(Tree::parse("{([1])}").is_err());
    assert!(Tree::parse("{[1],[1]}").is_err());
}

#[test]
fn covers_of_small_trees() {
    let c = covers(&Tree::corolla(2));
    assert_eq!(c.len(), 2);
    assert!(c.iter().all(|(t, _)| t.vertex_count() == 0));
    let binary = Tree::parse("{(([1],[2]),[3])}").unwrap();
    let kinds: Vec<CollapseKind> = covers(&binary).iter().map(|(_, m)| m.kind).collect();
    assert_eq!(kinds.len(), 3);
    assert!(kinds.contains(&CollapseKind::InternalEdge));
    assert!(kinds.contains(&CollapseKind::RootEdge));
    assert!(kinds.contains(&CollapseKind::Bud));
    assert!(covers(&Tree::parse("{[1,2,3]}").unwrap()).is_empty());
}

#[test]
fn collapse_order() {
    let star = Tree::parse("{[1,2,3]}").unwrap();
    let a = Tree::parse("{(([1],[2]),[3])}").unwrap();
    let b = Tree::parse("{([1],([2],[3]))}").unwrap();
    assert!(leq(&a, &a));
    assert!(leq(&star, &a));
    assert!(!leq(&a, &b));
    assert!(!leq(&b, &a));
    for t in enumerate_trees(3, Species::Generalized).unwrap() {
        for (u, _) in covers(&t) {
            assert!(leq(&u, &t));
        }
    }
}

#[test]
fn signs_certified_up_to_four_labels() {
    for n in 1..=4 {
        for t in enumerate_trees(n, Species::Generalized).unwrap() {
            let c = w_cell_complex(&t).unwrap();
            let h = homology(&c).unwrap();
            assert_eq!(h.ranks(), [(0, 1)].into_iter().collect(), "tree {t}");
            assert!(h.is_torsion_free());
        }
    }
}

#[test]
fn bud_and_edge_faces_carry_opposite_signs() {
    // the corolla on two inputs is a segment: one lower face, one upper face
    let c = covers(&Tree::corolla(2));
    let root = c.iter().find(|(_, m)| m.kind == CollapseKind::RootEdge).unwrap().1;
    let bud = c.iter().find(|(_, m)| m.kind == CollapseKind::Bud).unwrap().1;
    assert_eq!(root.sign, 1);
    assert_eq!(bud.sign, -1);
}

#[test]
fn graft_and_ungraft() {
    let t = Tree::parse("{([3],[9])}").unwrap();
    let u = Tree::corolla(2);
    let v = graft(&t, 9, &u).unwrap();
    assert_eq!(v.serialize(), "{(([1],[2]),[3])}");
    assert_eq!(ungraft(&v, &[9, 3], &[1, 2], 9), Some((t.clone(), u.clone())));
    assert_eq!(graft(&t, 9, &Tree::unit(4)).unwrap().serialize(), "{([3],[4])}");
    assert_eq!(ungraft(&Tree::corolla(3), &[3, 9], &[1, 2], 9), None);
    let single = Tree::unit(1);
    assert_eq!(ungraft(&single, &[9], &[1], 9), Some((Tree::unit(9), Tree::unit(1))));
    assert_eq!(graft(&t, 5, &u), Err(TreeError::LeafNotFound(5)));
    assert_eq!(graft(&t, 9, &Tree::parse("{[1],[2]}").unwrap()), Err(TreeError::NotSingleRootEdge));
}

#[test]
fn graft_ungraft_round_trip() {
    for t in enumerate_trees(3, Species::Root).unwrap() {
        for u in enumerate_on(&[4, 5], Species::Root) {
            for a in 1..=3u32 {
                if !t.layout().leaves.contains(&vec![a]) {
                    assert!(graft(&t, a, &u).is_err());
                    continue;
                }
                let v = graft(&t, a, &u).unwrap();
                let a_labels: Vec<u32> = (1..=3).collect();
                assert_eq!(ungraft(&v, &a_labels, &[4, 5], a), Some((t.clone(), u.clone())));
            }
        }
    }
}

#[test]
fn partition_ungrafting() {
    let v = Tree::parse("{(([1],[2]),[3])}").unwrap();
    let (t, us) = ungraft_partition(&v, &[vec![1, 2], vec![3]]).unwrap();
    assert_eq!(t, Tree::corolla(2));
    assert_eq!(us, vec![Tree::corolla(2), Tree::unit(3)]);
    let (t, us) = ungraft_partition(&v, &[vec![1, 2, 3]]).unwrap();
    assert_eq!(t, Tree::unit(1));
    assert_eq!(us, vec![v.clone()]);
    let (t, us) = ungraft_partition(&v, &[vec![1], vec![2], vec![3]]).unwrap();
    assert_eq!(t, v);
    assert_eq!(us, vec![Tree::unit(1), Tree::unit(2), Tree::unit(3)]);
    assert!(ungraft_partition(&v, &[vec![1, 3], vec![2]]).is_none());
}

#[test]
fn relabelling_signs() {
    let t = Tree::parse("{(([1],[2]),[3])}").unwrap();
    assert_eq!(t.relabel(&[1, 2, 3]).unwrap(), (t.clone(), 1));
    // two vertices at the same depth swap their order
    let t = Tree::parse("{(([1],[3]),([2],[4]))}").unwrap();
    let (s, sign) = t.relabel(&[2, 1, 3, 4]).unwrap();
    assert_eq!(s.serialize(), "{(([1],[4]),([2],[3]))}");
    assert_eq!(sign, -1);
    let t = Tree::parse("{((([1],[2]),[3]),([4],[5]))}").unwrap();
    let sigma = [4, 5, 3, 1, 2];
    let (s, sign) = t.relabel(&sigma).unwrap();
    assert_eq!(s.serialize(), "{(([1],[2]),([3],([4],[5])))}");
    // vertex order (A, B, D, C) becomes (A, C, B, D): a 3-cycle
    assert_eq!(sign, 1);
    let inv = [4, 5, 3, 1, 2].iter().enumerate().fold(vec![0u32; 5], |mut acc, (i, x)| {
        acc[*x as usize - 1] = i as u32 + 1;
        acc
    });
    let (back, sign2) = s.relabel(&inv).unwrap();
    assert_eq!(back, t);
    assert_eq!(sign * sign2, 1);
}
