use proptest::prelude::*;

use ortho_spin::partitions::enumerate_partitions;
use ortho_spin::tableaux::{cell_branching, dim_sn, lr_coefficient};
use ortho_spin::Partition;

fn partition(max_len: usize, max_part: usize) -> impl Strategy<Value = Partition> {
    prop::collection::vec(0..=max_part, 0..=max_len).prop_map(Partition::from_unsorted)
}

/// p(n) from Euler's pentagonal recurrence.
fn partition_counts(up_to: usize) -> Vec<i64> {
    let mut p = vec![0i64; up_to + 1];
    p[0] = 1;
    for n in 1..=up_to {
        let mut k = 1i64;
        loop {
            let g1 = (k * (3 * k - 1) / 2) as usize;
            if g1 > n {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            p[n] += sign * p[n - g1];
            let g2 = (k * (3 * k + 1) / 2) as usize;
            if g2 <= n {
                p[n] += sign * p[n - g2];
            }
            k += 1;
        }
    }
    p
}

#[test]
fn partition_counts_match_pentagonal_recurrence() {
    let p = partition_counts(20);
    for n in 0..=20 {
        assert_eq!(enumerate_partitions(n, n).len() as i64, p[n], "n = {n}");
    }
}

#[test]
fn enumeration_is_reverse_lexicographic() {
    let ps = enumerate_partitions(7, 7);
    assert!(ps.windows(2).all(|w| w[0].parts() > w[1].parts()));
    assert_eq!(ps[0], Partition::row(7));
}

#[test]
fn sum_of_squared_dimensions_is_factorial() {
    let mut fact = 1u128;
    for n in 1..=10usize {
        fact *= n as u128;
        let s: u128 = enumerate_partitions(n, n).iter().map(|r| dim_sn(r).unwrap().pow(2)).sum();
        assert_eq!(s, fact, "n = {n}");
    }
}

#[test]
fn lr_pieri_examples() {
    // (1)·(1) = (2) + (1,1); (2,1)·(1) hits (3,1), (2,2), (2,1,1) once each.
    let one = Partition::row(1);
    assert_eq!(lr_coefficient(&one, &one, &Partition::row(2)), 1);
    assert_eq!(lr_coefficient(&one, &one, &Partition::column(2)), 1);
    let l = Partition::new(vec![2, 1]).unwrap();
    for r in [vec![3, 1], vec![2, 2], vec![2, 1, 1]] {
        assert_eq!(lr_coefficient(&l, &one, &Partition::new(r).unwrap()), 1);
    }
    assert_eq!(lr_coefficient(&Partition::new(vec![2, 1]).unwrap(), &Partition::new(vec![2, 1]).unwrap(), &Partition::new(vec![3, 2, 1]).unwrap()), 2);
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn transpose_is_an_involution(p in partition(8, 8)) {
        prop_assert_eq!(p.transpose().transpose(), p);
    }

    #[test]
    fn content_sum_flips_under_transpose(p in partition(8, 8)) {
        prop_assert_eq!(p.content_sum(), -p.transpose().content_sum());
    }

    #[test]
    fn column_flip_is_an_involution(p in partition(5, 6), theta in 2usize..8) {
        prop_assume!(p.is_o_admissible(theta));
        let f = p.column_flip(theta).unwrap();
        prop_assert!(f.is_o_admissible(theta));
        prop_assert_eq!(f.column_flip(theta).unwrap(), p);
    }

    #[test]
    fn lr_is_commutative(l in partition(3, 3), m in partition(3, 3)) {
        let size = l.size() + m.size();
        prop_assume!(size <= 8);
        for rho in enumerate_partitions(size, 6) {
            prop_assert_eq!(lr_coefficient(&l, &m, &rho), lr_coefficient(&m, &l, &rho));
        }
    }

    #[test]
    fn cell_branching_depends_on_skew_shape(l in partition(3, 3), add in prop::collection::vec(0usize..3, 1..4)) {
        // ρ = λ grown by `add`; then prepend a full first column to both.
        let len = l.len().max(add.len());
        let mut r: Vec<usize> = (0..len).map(|i| l.part(i) + add.get(i).copied().unwrap_or(0)).collect();
        r.sort_unstable_by(|a, b| b.cmp(a));
        let rho = Partition::from_unsorted(r);
        prop_assume!(l.contained_in(&rho) && (rho.size() - l.size()) % 2 == 0);
        let h = rho.len();
        let shift = |p: &Partition| Partition::from_unsorted((0..h).map(|i| p.part(i) + 1).collect());
        prop_assert_eq!(cell_branching(&l, &rho).unwrap(), cell_branching(&shift(&l), &shift(&rho)).unwrap());
    }
}

#[test]
fn cell_branching_vanishes_without_containment() {
    for r_size in 0..=8 {
        for l_size in (r_size % 2..=r_size).step_by(2) {
            for rho in enumerate_partitions(r_size, r_size) {
                for lambda in enumerate_partitions(l_size, l_size) {
                    if !lambda.contained_in(&rho) {
                        assert_eq!(cell_branching(&lambda, &rho).unwrap(), 0, "{lambda} {rho}");
                    }
                }
            }
        }
    }
}
