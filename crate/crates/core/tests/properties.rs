use std::sync::Arc;

use num_integer::Integer;
use num_traits::Signed;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use relk_core::catalog::{random_presentation, random_subcomplex, with_random_3_cells, Presentation};
use relk_core::exactlinalg::{kernel_basis, smith_normal_form, solve_integer_system};
use relk_core::format::{complex_to_json, read_complex};
use relk_core::groupring::{FiniteGroup, GroupRingElement, GroupRingMatrix};
use relk_core::{Int, IntMatrix};

fn matrix(max: usize, entry: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max, 1..=max).prop_flat_map(move |(r, c)| {
        prop::collection::vec(-entry..=entry, r * c)
            .prop_map(move |v| IntMatrix::new(r, c, v.into_iter().map(Int::from).collect()).unwrap())
    })
}

fn groups() -> Vec<Arc<FiniteGroup>> {
    let c2 = FiniteGroup::cyclic(2);
    let mut gs: Vec<FiniteGroup> = (1..=8).map(FiniteGroup::cyclic).collect();
    gs.push(FiniteGroup::symmetric3());
    gs.push(FiniteGroup::product(&c2, &c2));
    gs.push(FiniteGroup::product(&c2, &FiniteGroup::cyclic(4)));
    gs.push(FiniteGroup::product(&FiniteGroup::product(&c2, &c2), &c2));
    gs.into_iter().map(Arc::new).collect()
}

fn group_matrix(group: &Arc<FiniteGroup>, rows: usize, cols: usize, coeffs: &[i64]) -> GroupRingMatrix {
    let n = group.order();
    let entries = (0..rows * cols)
        .map(|k| (0..n).map(|g| Int::from(coeffs[(k * n + g) % coeffs.len()])).collect())
        .collect();
    GroupRingMatrix::from_entries(group.clone(), rows, cols, entries).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn smith_form_is_a_unimodular_diagonalization(m in matrix(6, 20)) {
        let snf = smith_normal_form(&m);
        prop_assert_eq!(&(&snf.u * &m) * &snf.v, snf.s.clone());
        let factors = snf.invariant_factors();
        prop_assert_eq!(factors.len(), snf.rank);
        for w in factors.windows(2) {
            prop_assert!(w[1].is_multiple_of(&w[0]));
        }
        for f in &factors {
            prop_assert!(f.is_positive());
        }
    }

    #[test]
    fn consistent_systems_are_solved(m in matrix(5, 9), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x0: Vec<Int> = (0..m.cols()).map(|_| Int::from(rand::Rng::gen_range(&mut rng, -5..=5))).collect();
        let b = &m * &IntMatrix::column_vector(&x0);
        let x = solve_integer_system(&m, &b).unwrap();
        prop_assert!(x.is_some());
        prop_assert_eq!(&m * &x.unwrap(), b);
    }

    #[test]
    fn kernel_has_complementary_rank(m in matrix(6, 6)) {
        let k = kernel_basis(&m);
        prop_assert!((&m * &k).is_zero());
        prop_assert_eq!(k.cols() + smith_normal_form(&m).rank, m.cols());
        if k.cols() > 0 {
            prop_assert_eq!(smith_normal_form(&k).invariant_factors().iter().filter(|f| **f != Int::from(1)).count(), 0);
        }
    }

    #[test]
    fn flattening_is_multiplicative(
        which in 0usize..12,
        dims in (1usize..=3, 1usize..=3, 1usize..=3),
        a in prop::collection::vec(-3i64..=3, 1..40),
        b in prop::collection::vec(-3i64..=3, 1..40),
    ) {
        let g = &groups()[which];
        let (r, s, t) = dims;
        let ma = group_matrix(g, r, s, &a);
        let mb = group_matrix(g, s, t, &b);
        let product = ma.compose(&mb).unwrap();
        prop_assert_eq!(product.flatten(), &ma.flatten() * &mb.flatten());
        prop_assert_eq!(product.augmented(), &ma.augmented() * &mb.augmented());
    }

    #[test]
    fn group_ring_multiplication_is_associative(
        which in 0usize..12,
        a in prop::collection::vec(-4i64..=4, 8),
        b in prop::collection::vec(-4i64..=4, 8),
        c in prop::collection::vec(-4i64..=4, 8),
    ) {
        let g = &groups()[which];
        let n = g.order();
        let el = |v: &[i64]| GroupRingElement::from_i64(g.clone(), &v[..n]).unwrap();
        let (x, y, z) = (el(&a), el(&b), el(&c));
        let left = x.checked_mul(&y).unwrap().checked_mul(&z).unwrap();
        let right = x.checked_mul(&y.checked_mul(&z).unwrap()).unwrap();
        prop_assert_eq!(left.augmentation(), x.augmentation() * y.augmentation() * z.augmentation());
        prop_assert_eq!(left, right);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn complexes_survive_the_json_round_trip(seed in any::<u64>(), base in 0usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let base = [Presentation::cyclic(3), Presentation::klein_four(), Presentation::symmetric3()][base].clone();
        let p = random_presentation(&mut rng, &base, 1, true);
        let k = with_random_3_cells(&mut rng, &p.complex().unwrap(), 1).unwrap();
        let sub = random_subcomplex(&mut rng, k.complex());
        let back = read_complex(&complex_to_json(&k, Some(&sub))).unwrap();
        prop_assert_eq!(back.complex, k);
        prop_assert_eq!(back.sub, Some(sub));
    }
}

#[test]
fn zero_matrix_has_full_kernel() {
    let m = IntMatrix::zeros(2, 3);
    assert_eq!(kernel_basis(&m).cols(), 3);
    assert!(smith_normal_form(&m).invariant_factors().is_empty());
}
