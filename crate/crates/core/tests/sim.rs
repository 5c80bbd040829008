mod common;

use forest_kernel::data::DataMatrix;
use forest_kernel::sim::{
    estimate_power, generate, run_method, Method, MethodConfig, Setting, SimSetting,
};

fn mean_var(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let m = v.iter().sum::<f64>() / n;
    (
        m,
        v.iter().map(|a| (a - m) * (a - m)).sum::<f64>() / (n - 1.0),
    )
}

#[test]
fn null_arm_keeps_both_marginals() {
    let n = 4000;
    for setting in Setting::ALL {
        let sim = SimSetting::new(setting, 2).unwrap();
        let (xd, yd) = generate(&sim, n, true, 1).unwrap();
        let (xn, yn) = generate(&sim, n, false, 2).unwrap();
        let pairs = [
            (xd.column_values(0), xn.column_values(0)),
            (yd.column_values(0), yn.column_values(0)),
        ];
        for (a, b) in pairs {
            let (ma, va) = mean_var(&a);
            let (mb, vb) = mean_var(&b);
            // five standard errors on the mean, 25% on the variance
            let se = ((va + vb) / n as f64).sqrt();
            assert!(
                (ma - mb).abs() <= 5.0 * se + 1e-12,
                "{setting}: means {ma} vs {mb}"
            );
            assert!(
                (va - vb).abs() <= 0.25 * va.max(vb) + 1e-12,
                "{setting}: variances {va} vs {vb}"
            );
        }
    }
}

#[test]
fn methods_are_deterministic_and_degenerate_on_constants() {
    let sim = SimSetting::new(Setting::Quadratic, 3).unwrap();
    let (x, y) = generate(&sim, 40, true, 5).unwrap();
    let cfg = MethodConfig::desk().with_trees(20).with_seed(9);
    for method in [
        Method::Srf,
        Method::Urf,
        Method::Dcorr,
        Method::HsicGaussian,
    ] {
        let a = run_method(method, &x, &y, &cfg).unwrap();
        let b = run_method(method, &x, &y, &cfg).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits(), "{}", method.name());
        assert!(!a.degenerate);
    }
    let flat = DataMatrix::column(vec![3.0; 40]).unwrap();
    let srf = run_method(Method::Srf, &x, &flat, &cfg).unwrap();
    let urf = run_method(Method::Urf, &x, &flat, &cfg).unwrap();
    assert!(srf.degenerate && urf.degenerate);
    assert!((srf.value - urf.value).abs() <= 1e-6);
}

#[test]
fn dcorr_of_a_sample_with_itself_is_one() {
    let x = DataMatrix::column((0..10).map(|i| (i as f64).powi(2)).collect()).unwrap();
    let s = run_method(Method::Dcorr, &x, &x, &MethodConfig::desk()).unwrap();
    assert!((s.value - 1.0).abs() < 1e-12);
}

#[test]
fn power_falls_as_noise_grows() {
    let cfg = MethodConfig::desk();
    let powers: Vec<f64> = [0.5, 1.0, 2.0, 4.0]
        .iter()
        .map(|&noise| {
            let sim = SimSetting::with_noise(Setting::Linear, 1, noise).unwrap();
            estimate_power(&sim, Method::Dcorr, 50, 200, 0.05, &cfg, 17)
                .unwrap()
                .power
        })
        .collect();
    for w in powers.windows(2) {
        // Monte Carlo slack of about two binomial standard errors
        assert!(w[1] <= w[0] + 0.07, "{powers:?}");
    }
    assert!(powers[0] > powers[3]);
}

#[test]
fn power_reports_are_reproducible() {
    let sim = SimSetting::new(Setting::Step, 2).unwrap();
    let cfg = MethodConfig::desk().with_trees(20);
    let a = estimate_power(&sim, Method::Urf, 40, 20, 0.05, &cfg, 3).unwrap();
    let b = estimate_power(&sim, Method::Urf, 40, 20, 0.05, &cfg, 3).unwrap();
    assert_eq!(a, b);
    assert!(estimate_power(&sim, Method::Urf, 40, 19, 0.05, &cfg, 3).is_err());
    assert!(estimate_power(&sim, Method::Urf, 40, 20, 1.0, &cfg, 3).is_err());
}
