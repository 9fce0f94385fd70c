use opbar::barcobar::{reduced_bar, reduced_cobar};
use opbar::exactla::{homology, rank_over_q, smith_normal_form, ExactMatrix, Ring, Q};
use opbar::opalg::{ass, com};
use opbar::trees::{enumerate_trees, Species, Tree};
use proptest::prelude::*;

fn matrix(rows: usize, cols: usize, entries: &[i64]) -> ExactMatrix {
    let t = entries.iter().enumerate().filter(|(_, v)| **v != 0).map(|(k, v)| (k / cols, k % cols, Q::from_integer((*v).into())));
    ExactMatrix::from_triplets(Ring::Int, rows, cols, t).unwrap()
}

fn small_matrix() -> impl Strategy<Value = (usize, usize, Vec<i64>)> {
    (1usize..5, 1usize..5).prop_flat_map(|(r, c)| (Just(r), Just(c), prop::collection::vec(-4i64..=4, r * c)))
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<u32>> {
    Just((1..=n as u32).collect::<Vec<_>>()).prop_shuffle()
}

fn compose(sigma: &[u32], tau: &[u32]) -> Vec<u32> {
    tau.iter().map(|t| sigma[*t as usize - 1]).collect()
}

fn inverse(sigma: &[u32]) -> Vec<u32> {
    let mut inv = vec![0; sigma.len()];
    for (i, s) in sigma.iter().enumerate() {
        inv[*s as usize - 1] = i as u32 + 1;
    }
    inv
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn smith_form_is_invariant_under_row_operations((r, c, e) in small_matrix(), i in 0usize..4, j in 0usize..4, k in -3i64..=3) {
        let m = matrix(r, c, &e);
        let snf = smith_normal_form(&m).unwrap();
        prop_assert_eq!(snf.len(), rank_over_q(&m));
        prop_assert!(snf.windows(2).all(|w| (&w[1] % &w[0]) == 0.into()));
        let (i, j) = (i % r, j % r);
        if i != j {
            // add k times row j to row i
            let mut e2 = e.clone();
            for col in 0..c {
                e2[i * c + col] += k * e[j * c + col];
            }
            prop_assert_eq!(smith_normal_form(&matrix(r, c, &e2)).unwrap(), snf);
        }
    }

    #[test]
    fn trees_serialize_canonically(n in 1usize..=4, pick in any::<prop::sample::Index>(), sigma in permutation(4)) {
        let trees = enumerate_trees(n, Species::Generalized).unwrap();
        let t = pick.get(&trees);
        prop_assert_eq!(&Tree::parse(t.serialize()).unwrap(), t);
        let s: Vec<u32> = sigma.iter().copied().filter(|x| *x as usize <= n).collect();
        let (u, a) = t.relabel(&s).unwrap();
        let (back, b) = u.relabel(&inverse(&s)).unwrap();
        prop_assert_eq!(&back, t);
        prop_assert_eq!(a * b, 1);
    }

    #[test]
    fn relabelling_is_a_representation(sigma in permutation(4), tau in permutation(4), use_ass in any::<bool>()) {
        let p = if use_ass { ass(Ring::Int, 4).unwrap() } else { com(Ring::Int, 4).unwrap() };
        for b in [reduced_bar(&p, 4).unwrap(), reduced_cobar(&p.dual(), 4).unwrap()] {
            let gs = b.relabel_action(&sigma).unwrap();
            let gt = b.relabel_action(&tau).unwrap();
            let gst = b.relabel_action(&compose(&sigma, &tau)).unwrap();
            for (d, m) in &gst {
                prop_assert_eq!(m, &gs[d].mul(&gt[d]).unwrap());
            }
        }
    }

    #[test]
    fn euler_characteristic_of_bar_matches_homology(n in 1usize..=4, use_ass in any::<bool>()) {
        let p = if use_ass { ass(Ring::Int, 4).unwrap() } else { com(Ring::Int, 4).unwrap() };
        let b = reduced_bar(&p, n).unwrap();
        prop_assert_eq!(b.complex().euler_characteristic(), homology(b.complex()).unwrap().euler_characteristic());
    }
}
