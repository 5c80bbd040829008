//! Build the characteristic kernel of a supervised forest step by step and
//! check each stage.
//!
//! ```text
//! cargo run --release --example characteristic_kernel
//! ```

use forest_kernel::forest::{build_supervised_forest, ForestConfig};
use forest_kernel::kernel::{
    characteristic_transform, check_psd, forest_characteristic_kernel, inject_identity_partitions,
    proximity_kernel, KernelMatrix, MixtureConfig,
};
use forest_kernel::sim::{generate, Setting, SimSetting};

fn main() -> forest_kernel::Result<()> {
    let sim = SimSetting::new(Setting::Quadratic, 3)?;
    let (x, y) = generate(&sim, 60, true, 3)?;
    let forest = build_supervised_forest(
        &x,
        &y.column_values(0),
        &ForestConfig::supervised().with_trees(200),
    )?;

    let off_max = |k: &KernelMatrix| {
        (0..k.size())
            .flat_map(|i| (0..k.size()).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|ij| k.values()[ij])
            .fold(0.0, f64::max)
    };
    let k = proximity_kernel(&forest)?;
    println!("proximity: largest off-diagonal entry {:.3}", off_max(&k));
    println!(
        "proximity: min eigenvalue {:.2e}",
        check_psd(k.values(), 1e-8)?.min_eigenvalue
    );

    let mix = MixtureConfig::default();
    let mixed = inject_identity_partitions(&forest, &x, mix.pi)?;
    println!(
        "mixture: {} identity partitions, share {:.4}",
        mixed.identity_count(),
        mixed.identity_fraction()
    );
    let km = proximity_kernel(&mixed)?;
    println!(
        "mixture: separates every distinct pair: {}",
        km.separates_distinct_rows(&x)
    );

    for r in [0.25, 0.5, 0.75] {
        let ks = characteristic_transform(&km, r)?;
        println!(
            "r = {r}: largest off-diagonal entry {:.4}, min eigenvalue {:.2e}",
            off_max(&ks),
            check_psd(ks.values(), 1e-8)?.min_eigenvalue
        );
    }

    let direct = forest_characteristic_kernel(&forest, &x, &mix)?;
    println!(
        "one call: provenance {}, size {}",
        direct.provenance().as_str(),
        direct.size()
    );
    Ok(())
}
