//! Permutation groups, F2 matrices and the unitriangular group.

use bouc_core::gf2::{enumerate_rank2_squarezero, reference_nilpotents, BitMatrix, U4Element};
use bouc_core::perm::{parse_generators, schreier_sims, write_generators, GeneratorFormat, GroupHandle, Permutation};
use proptest::prelude::*;

fn arb_perm(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n).collect::<Vec<usize>>()).prop_shuffle().prop_map(|v| Permutation::from_images(&v).unwrap())
}

fn arb_matrix(rows: usize, cols: usize) -> impl Strategy<Value = BitMatrix> {
    prop::collection::vec(any::<bool>(), rows * cols)
        .prop_map(move |v| BitMatrix::from_fn(rows, cols, |i, j| v[i * cols + j]))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn group_order_does_not_depend_on_seed(gens in prop::collection::vec(arb_perm(7), 1..3), s1 in any::<u64>(), s2 in any::<u64>()) {
        let a = schreier_sims(&gens, s1).unwrap();
        let b = schreier_sims(&gens, s2).unwrap();
        prop_assert_eq!(a.order(), b.order());
        prop_assert_eq!(5040 % a.order(), 0);
        for g in &gens {
            prop_assert!(a.contains(g));
        }
    }

    #[test]
    fn generator_formats_round_trip(gens in prop::collection::vec(arb_perm(12), 1..4)) {
        for format in [GeneratorFormat::Cycles, GeneratorFormat::Images] {
            let back = parse_generators(&write_generators(&gens, format)).unwrap();
            prop_assert_eq!(&back, &gens);
        }
    }

    #[test]
    fn rank_nullity(m in arb_matrix(5, 7)) {
        let r = m.rank();
        prop_assert!(r <= 5);
        prop_assert_eq!(r + m.nullspace().len(), 7);
        prop_assert_eq!(m.transpose().rank(), r);
        for v in m.nullspace() {
            prop_assert!(m.apply(&v).iter().all(|&x| !x));
        }
    }

    #[test]
    fn u4_is_a_group(a in 0u8..64, b in 0u8..64, c in 0u8..64) {
        let (x, y, z) = (U4Element::from_bits(a), U4Element::from_bits(b), U4Element::from_bits(c));
        prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
        prop_assert_eq!(x.mul(&U4Element::identity()), x.clone());
        prop_assert_eq!(U4Element::from_bits(x.bits()), x);
    }
}

#[test]
fn u4_has_order_64() {
    assert_eq!(U4Element::all().len(), 64);
}

#[test]
fn listed_matrices_are_square_zero_of_rank_two() {
    let found = enumerate_rank2_squarezero();
    for n in reference_nilpotents() {
        assert_eq!(n.rank(), 2);
        assert!(n.mul(&n).unwrap().is_zero());
        assert!(found.contains(&n));
    }
    assert_eq!(found.len(), 10);
}

#[test]
fn symmetric_group_orders() {
    let cyc = |n: usize| Permutation::from_cycles(n, &[(0..n).collect()]).unwrap();
    let swap = |n: usize| Permutation::from_cycles(n, &[vec![0, 1]]).unwrap();
    let mut fact = 1u128;
    for n in 2..=9usize {
        fact *= n as u128;
        let g = GroupHandle::new(vec![swap(n), cyc(n)], 3).unwrap();
        assert_eq!(g.order(), fact);
    }
}
