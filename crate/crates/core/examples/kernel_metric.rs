//! Move between kernels and semimetrics, and validate both.
//!
//! ```text
//! cargo run --example kernel_metric
//! ```

use forest_kernel::forest::{build_unsupervised_forest, ForestConfig};
use forest_kernel::kernel::{
    check_negative_type, check_psd, euclidean_metric, kernel_to_metric, metric_to_kernel,
    negative_type_min_eigenvalue, proximity_kernel, write_matrix_csv, MetricMatrix,
};
use forest_kernel::sim::{generate, Setting, SimSetting};
use nalgebra::DMatrix;

fn main() -> forest_kernel::Result<()> {
    let (x, _) = generate(&SimSetting::new(Setting::Circle, 2)?, 8, true, 5)?;
    let k = proximity_kernel(&build_unsupervised_forest(
        &x,
        &ForestConfig::unsupervised()
            .with_trees(100)
            .with_min_leaf(2),
    )?)?;
    let d = kernel_to_metric(&k)?;
    println!(
        "forest metric is negative type: {}",
        check_negative_type(&d, 1e-8)
    );
    let back = metric_to_kernel(&d);
    println!(
        "kernel induced back from it is PSD: {}",
        check_psd(back.values(), 1e-8)?.is_psd
    );

    let e = euclidean_metric(&x);
    println!("Euclidean: negative type {}", check_negative_type(&e, 1e-8));
    println!(
        "squared Euclidean: negative type {}",
        check_negative_type(&e.powf(2.0), 1e-8)
    );
    println!(
        "fourth power: min eigenvalue of -HDH {:.3e}",
        negative_type_min_eigenvalue(&e.powf(4.0))
    );

    // sqrt of d(0,1) = 5 exceeds sqrt(1) + sqrt(1)
    let bad = MetricMatrix::new(DMatrix::from_row_slice(
        3,
        3,
        &[0.0, 5.0, 1.0, 5.0, 0.0, 1.0, 1.0, 1.0, 0.0],
    ))?;
    println!(
        "three-point counterexample: negative type {}",
        check_negative_type(&bad, 1e-8)
    );

    println!();
    write_matrix_csv(
        &mut std::io::stdout(),
        d.values(),
        &["forest semimetric, 8 points".into()],
    )?;
    Ok(())
}
