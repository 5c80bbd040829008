//! Test independence with each of the four statistics on one dependent and
//! one independent sample.
//!
//! ```text
//! cargo run --release --example independence_test
//! ```

use forest_kernel::cli::refit_permutation_test;
use forest_kernel::independence::{permutation_test, TestResult};
use forest_kernel::kernel::gaussian_kernel_median;
use forest_kernel::sim::{generate, prepare, Method, MethodConfig, Setting, SimSetting};

fn main() -> forest_kernel::Result<()> {
    let sim = SimSetting::new(Setting::WShape, 2)?;
    let cfg = MethodConfig::default().with_trees(100).with_seed(11);
    println!(
        "{}",
        TestResult::CSV_HEADER.replacen("method", "sample,method", 1)
    );
    for (label, dependent) in [("dependent", true), ("independent", false)] {
        let (x, y) = generate(&sim, 80, dependent, 2)?;
        for method in Method::ALL {
            let result = if method == Method::Srf {
                // the forest is fitted to y, so y is permuted and the forest refit
                refit_permutation_test(method, &x, &y, &cfg, 199, 7)?
            } else {
                prepare(method, &x, &y, &cfg)?.permutation_test(199, 7, method.name())?
            };
            println!("{label},{}", result.to_csv_row());
        }
    }

    let (x, y) = generate(&sim, 80, true, 2)?;
    let direct = permutation_test(
        &gaussian_kernel_median(&x),
        &gaussian_kernel_median(&y),
        199,
        7,
    )?;
    println!("\nkernel-level call: {}", direct.to_json());
    Ok(())
}
