use num_bigint::BigInt;
use opbar::exactla::homology;
use opbar::partition::{
    compare_with_bar, count_flags, cycle_types, partition_character, partition_complex, representative, Partition,
    PartitionError,
};
use proptest::prelude::*;
use std::collections::BTreeMap;

#[test]
fn five_points() {
    let pc = partition_complex(5).unwrap();
    let h = homology(&pc.complex).unwrap();
    assert_eq!(h.ranks(), BTreeMap::from([(4, 24)]));
    assert!(h.is_torsion_free());
    let cmp = compare_with_bar(5).unwrap();
    assert!(cmp.agree(), "{cmp}");
    assert_eq!(cmp.tree_bar.ranks(), BTreeMap::from([(4, 24)]));
}

#[test]
fn six_points_concentrated() {
    let pc = partition_complex(6).unwrap();
    let h = homology(&pc.complex).unwrap();
    assert_eq!(h.ranks(), BTreeMap::from([(5, 120)]));
    assert!(h.is_torsion_free());
    let counts: BTreeMap<i64, u64> = pc.flags.iter().map(|(d, f)| (*d, f.len() as u64)).collect();
    assert_eq!(counts, count_flags(6));
}

#[test]
fn bounds() {
    assert!(matches!(partition_complex(0), Err(PartitionError::Bounds { .. })));
    assert!(matches!(partition_complex(9), Err(PartitionError::Bounds { .. })));
    assert!(matches!(compare_with_bar(6), Err(PartitionError::Bounds { .. })));
}

#[test]
fn partitions_validate() {
    assert!(Partition::new(3, vec![vec![3, 1], vec![2]]).is_ok());
    assert!(Partition::new(3, vec![vec![1, 2], vec![2, 3]]).is_err());
    assert!(Partition::new(3, vec![vec![1, 2]]).is_err());
    let p = Partition::new(4, vec![vec![4, 2], vec![3, 1]]).unwrap();
    assert_eq!(p.to_string(), "1,3|2,4");
    assert!(Partition::discrete(4).finer_than(&p));
    assert!(p.finer_than(&Partition::indiscrete(4)));
    assert!(!p.finer_than(&Partition::discrete(4)));
}

#[test]
fn character_of_four_points() {
    let chars = partition_character(4).unwrap();
    let got: BTreeMap<Vec<usize>, BigInt> = chars.into_iter().map(|c| (c.cycle_type, c.value)).collect();
    // sign twist of the Lie representation: (6, 0, −2, 0, 0) on 1⁴, 2 1², 2², 3 1, 4
    assert_eq!(got[&vec![1, 1, 1, 1]], BigInt::from(6));
    assert_eq!(got[&vec![2, 1, 1]], BigInt::from(0));
    assert_eq!(got[&vec![2, 2]], BigInt::from(-2));
    assert_eq!(got[&vec![3, 1]], BigInt::from(0));
    assert_eq!(got[&vec![4]], BigInt::from(0));
}

fn cycle_type_of(sigma: &[u32]) -> Vec<usize> {
    let n = sigma.len();
    let mut seen = vec![false; n];
    let mut ct = Vec::new();
    for i in 0..n {
        let mut len = 0;
        let mut j = i;
        while !seen[j] {
            seen[j] = true;
            j = sigma[j] as usize - 1;
            len += 1;
        }
        if len > 0 {
            ct.push(len);
        }
    }
    ct.sort_unstable_by(|a, b| b.cmp(a));
    ct
}

fn permutation(max: usize) -> impl Strategy<Value = Vec<u32>> {
    (2..=max).prop_flat_map(|n| Just((1..=n as u32).collect::<Vec<_>>()).prop_shuffle())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn lefschetz_is_a_class_function(sigma in permutation(5)) {
        let n = sigma.len();
        let pc = partition_complex(n).unwrap();
        let ct = cycle_type_of(&sigma);
        prop_assert!(cycle_types(n).contains(&ct));
        prop_assert_eq!(pc.lefschetz(&sigma).unwrap(), pc.lefschetz(&representative(&ct)).unwrap());
    }

    #[test]
    fn action_permutes_flags(sigma in permutation(4)) {
        let pc = partition_complex(sigma.len()).unwrap();
        for (d, m) in pc.action(&sigma).unwrap() {
            prop_assert_eq!(m.nnz(), pc.flags[&d].len());
        }
    }
}
