//! Estimate testing power by the empirical null / alternative protocol, for
//! one cell and then for a small sweep written to disk.
//!
//! ```text
//! cargo run --release --example power_study -- /tmp/power
//! ```

use std::path::PathBuf;

use forest_kernel::sim::{
    estimate_power, run_sweep_with_progress, Method, MethodConfig, Setting, SimSetting, SweepConfig,
};

fn main() -> forest_kernel::Result<()> {
    let out = std::env::args_os()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("forest-kernel-power"));

    let sim = SimSetting::new(Setting::Quadratic, 5)?;
    let cfg = MethodConfig::desk();
    for method in Method::ALL {
        let report = estimate_power(&sim, method, 100, 50, 0.05, &cfg, 1)?;
        println!(
            "quadratic p=5 {:<14} power {:.2}",
            method.name(),
            report.power
        );
    }

    let mut sweep = SweepConfig::desk(1);
    sweep.settings = vec![Setting::Linear, Setting::FourthRoot];
    sweep.dims = vec![1, 10];
    sweep.replicates = 50;
    let outcome = run_sweep_with_progress(&sweep, &out, |r| {
        eprintln!(
            "{} p={} {}: {:.2}",
            r.setting.setting, r.setting.p, r.method, r.power
        );
    })?;
    for method in &sweep.methods {
        println!(
            "{:<14} mean power {:.3}",
            method.name(),
            outcome.grand_average(*method).unwrap_or(0.0)
        );
    }
    println!("results in {}", out.display());
    Ok(())
}
