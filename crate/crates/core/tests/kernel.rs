mod common;

use forest_kernel::data::DataMatrix;
use forest_kernel::forest::{build_supervised_forest, build_unsupervised_forest, ForestConfig};
use forest_kernel::kernel::{
    characteristic_transform, check_negative_type, check_psd, euclidean_metric,
    forest_characteristic_kernel, inject_identity_partitions, kernel_to_metric, metric_to_kernel,
    negative_type_min_eigenvalue, proximity_kernel, read_matrix_csv, write_matrix_csv,
    KernelMatrix, MetricMatrix, MixtureConfig,
};
use nalgebra::DMatrix;
use proptest::prelude::*;

fn forest_for(
    x: &DataMatrix,
    supervised: bool,
    seed: u64,
    trees: usize,
) -> forest_kernel::forest::Forest {
    if supervised {
        let y: Vec<f64> = x.rows().map(|r| r.iter().map(|v| v.sin()).sum()).collect();
        build_supervised_forest(
            x,
            &y,
            &ForestConfig::supervised()
                .with_trees(trees)
                .with_seed(seed)
                .with_min_leaf(2),
        )
        .unwrap()
    } else {
        build_unsupervised_forest(
            x,
            &ForestConfig::unsupervised()
                .with_trees(trees)
                .with_seed(seed)
                .with_min_leaf(2),
        )
        .unwrap()
    }
}

/// Largest value of aᵀDa over unit zero-sum a at n = 3, by sweeping the
/// circle a = cos θ u + sin θ v in the plane orthogonal to the ones vector.
fn zero_sum_form_max(d: &DMatrix<f64>) -> f64 {
    let u = [1.0 / 2f64.sqrt(), -1.0 / 2f64.sqrt(), 0.0];
    let v = [1.0 / 6f64.sqrt(), 1.0 / 6f64.sqrt(), -2.0 / 6f64.sqrt()];
    let steps = 200_000;
    (0..steps)
        .map(|s| {
            let t = std::f64::consts::PI * s as f64 / steps as f64;
            let a: Vec<f64> = (0..3).map(|i| t.cos() * u[i] + t.sin() * v[i]).collect();
            let mut q = 0.0;
            for i in 0..3 {
                for j in 0..3 {
                    q += a[i] * d[(i, j)] * a[j];
                }
            }
            q
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

fn three_point(d12: f64, scale: f64) -> MetricMatrix {
    let d = DMatrix::from_row_slice(3, 3, &[0.0, d12, 1.0, d12, 0.0, 1.0, 1.0, 1.0, 0.0]) * scale;
    MetricMatrix::new(d).unwrap()
}

#[test]
fn negative_type_matches_the_quadratic_form_oracle() {
    for (d12, scale) in [
        (3.0, 1.0),
        (3.0, 1e3),
        (3.9, 1.0),
        (4.1, 1.0),
        (5.0, 1.0),
        (5.0, 1e-3),
        (0.5, 7.0),
    ] {
        let d = three_point(d12, scale);
        let oracle = zero_sum_form_max(d.values());
        let eig = negative_type_min_eigenvalue(&d);
        // -HDH is -D on the zero-sum plane and zero along the ones vector
        let expected = (-oracle).min(0.0);
        assert!(
            (eig - expected).abs() <= 1e-6 * scale.max(1.0),
            "d12={d12}: {eig} vs {expected}"
        );
        assert_eq!(
            check_negative_type(&d, 1e-8),
            oracle <= 1e-8,
            "d12={d12} scale={scale}"
        );
    }
    assert!(check_negative_type(&three_point(3.0, 1.0), 1e-8));
    assert!(!check_negative_type(&three_point(5.0, 1.0), 1e-8));
}

#[test]
fn squared_euclidean_is_negative_type() {
    let mut rng = common::rng(8);
    for _ in 0..20 {
        let x = common::random_data(&mut rng, 12, 3);
        let d = euclidean_metric(&x).powf(2.0);
        assert!(check_negative_type(&d, 1e-8));
    }
}

#[test]
fn psd_examples() {
    let i3 = DMatrix::<f64>::identity(3, 3);
    assert!(check_psd(&i3, 1e-8).unwrap().is_psd);
    let bad = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]);
    let check = check_psd(&bad, 1e-8).unwrap();
    assert!(!check.is_psd);
    assert!((check.min_eigenvalue + 1.0).abs() < 1e-12);
    let asym = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.4, 1.0]);
    assert!(check_psd(&asym, 1e-8).is_err());
}

#[test]
fn kernel_csv_round_trip() {
    let mut rng = common::rng(21);
    let x = common::random_data(&mut rng, 9, 2);
    let k =
        forest_characteristic_kernel(&forest_for(&x, false, 1, 7), &x, &MixtureConfig::default())
            .unwrap();
    let mut buf = Vec::new();
    write_matrix_csv(&mut buf, k.values(), &["note".into()]).unwrap();
    let back = read_matrix_csv(buf.as_slice()).unwrap();
    assert_eq!(&back, k.values());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn proximity_is_psd_with_integral_counts(seed in any::<u64>(), n in 2usize..40, p in 1usize..6, supervised in any::<bool>(), trees in 1usize..30) {
        let mut rng = common::rng(seed);
        let x = common::random_data(&mut rng, n, p);
        let forest = forest_for(&x, supervised, seed, trees);
        let k = proximity_kernel(&forest).unwrap();
        prop_assert!(check_psd(k.values(), 1e-8).unwrap().is_psd);
        for v in k.values().iter() {
            let scaled = v * trees as f64;
            prop_assert!((scaled - scaled.round()).abs() < 1e-9);
            prop_assert!((0.0..=1.0).contains(v));
        }
    }

    #[test]
    fn mixture_is_nondegenerate(seed in any::<u64>(), n in 2usize..40, p in 1usize..5, pi in 0.001f64..0.5) {
        let mut rng = common::rng(seed);
        let x = common::random_data(&mut rng, n, p);
        let mixed = inject_identity_partitions(&forest_for(&x, false, seed, 20), &x, pi).unwrap();
        let achieved = mixed.identity_fraction();
        prop_assert!(achieved >= pi - 1e-12);
        let k = proximity_kernel(&mixed).unwrap();
        for (i, j) in common::distinct_pairs(&x) {
            prop_assert!(k.values()[(i, j)] <= 1.0 - achieved + 1e-12);
        }
        prop_assert!(k.separates_distinct_rows(&x));
    }

    #[test]
    fn transform_paths_agree(seed in any::<u64>(), n in 2usize..30, r in 0.01f64..0.99) {
        let mut rng = common::rng(seed);
        let x = common::random_data(&mut rng, n, 2);
        let k = proximity_kernel(&inject_identity_partitions(&forest_for(&x, true, seed, 15), &x, 0.05).unwrap()).unwrap();
        let direct = characteristic_transform(&k, r).unwrap();
        let d = kernel_to_metric(&k).unwrap().powf(r);
        for i in 0..n {
            for j in 0..n {
                let composed = 1.0 - d.values()[(i, j)];
                prop_assert!((direct.values()[(i, j)] - composed).abs() <= 1e-12);
            }
        }
        prop_assert!(check_psd(direct.values(), 1e-8).unwrap().is_psd);
    }

    #[test]
    fn transform_grows_with_r(seed in any::<u64>(), r1 in 0.01f64..0.98, gap in 0.001f64..0.5) {
        let r2 = (r1 + gap).min(0.99);
        let mut rng = common::rng(seed);
        let x = common::random_data(&mut rng, 15, 3);
        let k = proximity_kernel(&forest_for(&x, false, seed, 10)).unwrap();
        let a = characteristic_transform(&k, r1).unwrap();
        let b = characteristic_transform(&k, r2).unwrap();
        for (u, v) in a.values().iter().zip(b.values().iter()) {
            prop_assert!(u <= v);
        }
    }

    #[test]
    fn induced_metric_is_negative_type(seed in any::<u64>(), n in 2usize..30, supervised in any::<bool>()) {
        let mut rng = common::rng(seed);
        let x = common::random_data(&mut rng, n, 3);
        let k = proximity_kernel(&forest_for(&x, supervised, seed, 12)).unwrap();
        prop_assert!(check_negative_type(&kernel_to_metric(&k).unwrap(), 1e-8));
    }

    #[test]
    fn metric_round_trip_when_max_is_one(seed in any::<u64>(), n in 3usize..20) {
        let mut rng = common::rng(seed);
        let x = common::random_data(&mut rng, n, 2);
        // any pair split by every tree has proximity 0 and metric 1
        let k = proximity_kernel(&inject_identity_partitions(&forest_for(&x, false, seed, 5), &x, 0.5).unwrap()).unwrap();
        let d = kernel_to_metric(&k).unwrap();
        prop_assume!(d.max() == 1.0);
        let back = metric_to_kernel(&d);
        for (a, b) in back.values().iter().zip(k.values().iter()) {
            prop_assert!((a - b).abs() <= 1e-15);
        }
    }
}

#[test]
fn transform_spot_value() {
    let k =
        KernelMatrix::from_matrix(DMatrix::from_row_slice(2, 2, &[1.0, 0.75, 0.75, 1.0])).unwrap();
    let t = characteristic_transform(&k, 0.5).unwrap();
    assert_eq!(t.values()[(0, 1)], 0.5);
    assert_eq!(t.values()[(0, 0)], 1.0);
}
