mod common;

use forest_kernel::data::DataMatrix;
use forest_kernel::independence::{
    dcorr_statistic, double_center, hsic_statistic, normalized_hsic_statistic, permutation_test,
    PairedStatistic,
};
use forest_kernel::kernel::{euclidean_metric, KernelMatrix};
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

fn kernel(m: DMatrix<f64>) -> KernelMatrix {
    KernelMatrix::from_matrix(m).unwrap()
}

fn permuted(m: &DMatrix<f64>, perm: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(perm[i], perm[j])])
}

#[test]
fn hsic_matches_quadruple_sum() {
    let mut rng = common::rng(4);
    for _ in 0..20 {
        let k = common::random_psd(&mut rng, 8);
        let l = common::random_psd(&mut rng, 8);
        let oracle = common::hsic_quadruple_sum(&k, &l);
        let got = hsic_statistic(&kernel(k), &kernel(l)).unwrap();
        assert!((got - oracle).abs() <= 1e-10, "{got} vs {oracle}");
    }
}

#[test]
fn hsic_small_cases() {
    let i2 = kernel(DMatrix::identity(2, 2));
    assert!((hsic_statistic(&i2, &i2).unwrap() - 0.25).abs() < 1e-15);
    let mut rng = common::rng(5);
    let k = kernel(common::random_psd(&mut rng, 6));
    let ones = kernel(DMatrix::from_element(6, 6, 1.0));
    assert!(hsic_statistic(&k, &ones).unwrap().abs() < 1e-12);
}

#[test]
fn double_center_matches_four_term_formula() {
    let mut rng = common::rng(6);
    let a = DMatrix::from_fn(4, 4, |_, _| rng.random_range(-2.0..2.0));
    let sym = &a + a.transpose();
    let got = double_center(&sym);
    let oracle = common::double_center_four_term(&sym);
    assert!((got - oracle).amax() < 1e-12);
    assert!(double_center(&DMatrix::from_element(5, 5, 1.0)).amax() < 1e-15);
}

#[test]
fn dcorr_matches_textbook_formula() {
    let mut rng = common::rng(7);
    for _ in 0..10 {
        let x: Vec<Vec<f64>> = (0..8)
            .map(|_| (0..2).map(|_| rng.random_range(-1.0..1.0)).collect())
            .collect();
        let y: Vec<Vec<f64>> = x
            .iter()
            .map(|r| vec![r[0] * r[1] + 0.3 * rng.random_range(-1.0..1.0)])
            .collect();
        let oracle = common::dcorr_textbook(&x, &y);
        let dx = euclidean_metric(&DataMatrix::from_rows(&x).unwrap());
        let dy = euclidean_metric(&DataMatrix::from_rows(&y).unwrap());
        let got = dcorr_statistic(&dx, &dy).unwrap();
        assert!(!got.degenerate);
        assert!((got.value - oracle).abs() <= 1e-10);
    }
}

#[test]
fn permutation_test_is_seeded() {
    let mut rng = common::rng(9);
    let k = kernel(common::random_psd(&mut rng, 12));
    let l = kernel(common::random_psd(&mut rng, 12));
    let a = permutation_test(&k, &l, 99, 3).unwrap();
    let b = permutation_test(&k, &l, 99, 3).unwrap();
    assert_eq!(a, b);
    let c = permutation_test(&k, &k, 99, 3).unwrap();
    assert!(c.p_value >= 0.01);
    assert_eq!(c.num_permutations, 99);
}

#[test]
fn normalized_hsic_of_a_kernel_with_itself_is_one() {
    let mut rng = common::rng(12);
    let k = kernel(common::random_psd(&mut rng, 10));
    let s = normalized_hsic_statistic(&k, &k).unwrap();
    assert!((s.value - 1.0).abs() < 1e-12);
    let flat = normalized_hsic_statistic(&k, &kernel(DMatrix::from_element(10, 10, 2.0))).unwrap();
    assert!(flat.degenerate);
    assert_eq!(flat.value, 0.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hsic_is_affine_in_the_first_kernel(seed in any::<u64>(), n in 2usize..12, a in 0.01f64..10.0, b in -5.0f64..5.0) {
        let mut rng = common::rng(seed);
        let k = common::random_psd(&mut rng, n);
        let l = kernel(common::random_psd(&mut rng, n));
        let shifted = kernel(k.map(|v| a * v + b));
        let base = hsic_statistic(&kernel(k), &l).unwrap();
        let got = hsic_statistic(&shifted, &l).unwrap();
        prop_assert!((got - a * base).abs() <= 1e-9 * (1.0 + a * base.abs()));
    }

    #[test]
    fn hsic_is_invariant_to_joint_relabelling(seed in any::<u64>(), n in 2usize..12) {
        let mut rng = common::rng(seed);
        let k = common::random_psd(&mut rng, n);
        let l = common::random_psd(&mut rng, n);
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rng);
        let base = hsic_statistic(&kernel(k.clone()), &kernel(l.clone())).unwrap();
        let moved = hsic_statistic(&kernel(permuted(&k, &perm)), &kernel(permuted(&l, &perm))).unwrap();
        prop_assert!((base - moved).abs() <= 1e-12 * (1.0 + base.abs()));
        prop_assert!(base >= -1e-12);
    }

    #[test]
    fn centering_is_idempotent(seed in any::<u64>(), n in 1usize..10) {
        let mut rng = common::rng(seed);
        let m = common::random_psd(&mut rng, n);
        let once = double_center(&m);
        let twice = double_center(&once);
        prop_assert!((&once - &twice).amax() <= 1e-12 * (1.0 + m.amax()));
        for i in 0..n {
            prop_assert!(once.row(i).sum().abs() <= 1e-12 * (1.0 + m.amax()) * n as f64);
        }
    }

    #[test]
    fn permuted_statistic_matches_relabelled_matrix(seed in any::<u64>(), n in 2usize..10) {
        let mut rng = common::rng(seed);
        let k = common::random_psd(&mut rng, n);
        let l = common::random_psd(&mut rng, n);
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rng);
        let paired = PairedStatistic::hsic(&kernel(k.clone()), &kernel(l.clone())).unwrap();
        let direct = hsic_statistic(&kernel(k), &kernel(permuted(&l, &perm))).unwrap();
        prop_assert!((paired.under(&perm) - direct).abs() <= 1e-12 * (1.0 + direct.abs()));
        let identity: Vec<usize> = (0..n).collect();
        prop_assert_eq!(paired.under(&identity), paired.observed());
    }

    #[test]
    fn normalized_hsic_rescales_raw_hsic(seed in any::<u64>(), n in 3usize..12) {
        let mut rng = common::rng(seed);
        let k = kernel(common::random_psd(&mut rng, n));
        let l = kernel(common::random_psd(&mut rng, n));
        let raw = hsic_statistic(&k, &l).unwrap();
        let oracle = raw / (hsic_statistic(&k, &k).unwrap() * hsic_statistic(&l, &l).unwrap()).sqrt();
        let got = normalized_hsic_statistic(&k, &l).unwrap().value;
        prop_assert!((got - oracle).abs() <= 1e-12);
        prop_assert!((-1.0 - 1e-12..=1.0 + 1e-12).contains(&got));
        let a = PairedStatistic::hsic(&k, &l).unwrap().permutation_test(49, seed, "hsic").unwrap();
        let b = PairedStatistic::normalized_hsic(&k, &l).unwrap().permutation_test(49, seed, "hsic").unwrap();
        prop_assert!((a.p_value - b.p_value).abs() <= 2.0 / 50.0);
    }
}
