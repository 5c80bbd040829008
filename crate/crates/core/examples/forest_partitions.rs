//! Grow supervised and unsupervised trees and look at the partitions they
//! induce on the sample.
//!
//! ```text
//! cargo run --example forest_partitions
//! ```

use forest_kernel::data::DataMatrix;
use forest_kernel::forest::{
    build_supervised_forest, build_unsupervised_forest, identity_forest, supervised_tree,
    ForestConfig, TreeNode,
};

fn main() -> forest_kernel::Result<()> {
    let x = DataMatrix::column((0..12).map(|i| i as f64).collect())?;
    let y: Vec<f64> = x
        .rows()
        .map(|r| if r[0] < 6.0 { 0.0 } else { 1.0 })
        .collect();

    let cfg = ForestConfig::supervised()
        .with_trees(3)
        .with_min_leaf(2)
        .with_seed(1);
    let tree = supervised_tree(&x, &y, &cfg.clone().with_bootstrap(false), 0)?;
    if let TreeNode::Split {
        feature, threshold, ..
    } = tree.nodes()[0]
    {
        println!("root split: x[{feature}] <= {threshold}");
    }
    println!("leaves {}, depth {}", tree.num_leaves(), tree.depth());

    let supervised = build_supervised_forest(&x, &y, &cfg)?;
    for (t, part) in supervised.partitions().iter().enumerate() {
        println!("supervised tree {t}: {:?}", part.cell_of());
    }

    let unsupervised =
        build_unsupervised_forest(&x, &ForestConfig::unsupervised().with_trees(3).with_seed(1))?;
    for (t, part) in unsupervised.partitions().iter().enumerate() {
        println!("random tree {t}:     {:?}", part.cell_of());
    }

    let dup = DataMatrix::from_rows(&[vec![0.0, 1.0], vec![0.0, 1.0], vec![2.0, 1.0]])?;
    println!(
        "identity partition:  {:?}",
        identity_forest(&dup, 1)?.partitions()[0].cell_of()
    );
    Ok(())
}
