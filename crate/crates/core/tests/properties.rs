//! Cross-module properties over randomly chosen small inputs.

use proptest::prelude::*;
use wpvol::intersection::{check_generalized_relations, compositions_up_to, correlator, extract_psi_kappa};
use wpvol::kdv::{build_table, check_virasoro, counts_of};
use wpvol::recursion::{is_stable, level};
use wpvol::{compute_volume, VolumeCache};

fn small_type() -> impl Strategy<Value = (u32, usize)> {
    prop_oneof![
        (Just(0u32), 3usize..=6),
        (Just(1u32), 1usize..=4),
        (Just(2u32), 1usize..=2),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn volumes_are_symmetric_under_swaps((g, n) in small_type(), i in 0usize..6, j in 0usize..6) {
        let cache = VolumeCache::new();
        let v = compute_volume(g, n, &cache).unwrap();
        let (i, j) = (i % n, j % n);
        let mut target: Vec<usize> = (0..n).collect();
        target.swap(i, j);
        prop_assert_eq!(v.relabel(&target, n).unwrap(), (*v).clone());
        prop_assert!(v.is_homogeneous(level(g, n) as u32));
        prop_assert!(v.all_nonnegative());
    }

    #[test]
    fn correlators_are_permutation_invariant((g, n) in small_type(), seed in any::<u64>()) {
        let cache = VolumeCache::new();
        let dim = level(g, n) as u32;
        let tuples: Vec<Vec<u32>> = compositions_up_to(dim, n).into_iter().filter(|a| a.iter().sum::<u32>() == dim).collect();
        let alpha = &tuples[(seed % tuples.len() as u64) as usize];
        let mut rev = alpha.clone();
        rev.reverse();
        prop_assert_eq!(correlator(g, alpha, &cache).unwrap(), correlator(g, &rev, &cache).unwrap());
        let v = compute_volume(g, n, &cache).unwrap();
        prop_assert_eq!(extract_psi_kappa(&v, alpha).unwrap().value, correlator(g, alpha, &cache).unwrap());
    }

    #[test]
    fn generalized_relations_hold((g, n) in small_type(), seed in any::<u64>()) {
        prop_assume!(is_stable(g, n) && level(g, n + 1) <= 5);
        let cache = VolumeCache::new();
        let dim = level(g, n) as u32;
        let tuples = compositions_up_to(dim + 1, n);
        let alpha = &tuples[(seed % tuples.len() as u64) as usize];
        let total: u32 = alpha.iter().sum();
        let m = (dim + 1).saturating_sub(total);
        let r = check_generalized_relations(g, alpha, m, &cache).unwrap();
        prop_assert!(r.all_passed());
    }

    #[test]
    fn virasoro_never_fails(n in -1i64..=3, e in proptest::collection::vec(0u32..3, 0..4)) {
        let table = build_table(4, &VolumeCache::new()).unwrap();
        let c = check_virasoro(n, &e, &table).unwrap();
        prop_assert!(!c.is_fail(), "{}", c);
    }
}

#[test]
fn counts_round_trip() {
    assert_eq!(counts_of(&[3, 0, 3]), vec![1, 0, 0, 2]);
}
