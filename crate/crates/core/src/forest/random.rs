//! Completely random trees: random feature, uniform random threshold.

use rand::seq::index;
use rand::Rng;

use crate::data::DataMatrix;

use super::tree::{Tree, TreeBuilder};

pub(crate) struct RandomParams {
    pub mtry: usize,
    pub min_leaf: usize,
    pub max_depth: Option<usize>,
}

pub(crate) fn grow<R: Rng>(
    x: &DataMatrix,
    sample: Vec<usize>,
    params: &RandomParams,
    rng: &mut R,
) -> Tree {
    let mut builder = TreeBuilder::default();
    let root = builder.reserve();
    let mut stack = vec![(root, sample, 0usize)];
    let mut ranges = Vec::with_capacity(params.mtry);

    while let Some((slot, members, depth)) = stack.pop() {
        let at_depth_cap = params.max_depth.is_some_and(|d| depth >= d);
        if members.len() < 2 * params.min_leaf || members.len() < 2 || at_depth_cap {
            builder.set_leaf(slot);
            continue;
        }

        let mut candidates = index::sample(rng, x.ncols(), params.mtry).into_vec();
        candidates.sort_unstable();
        ranges.clear();
        for &f in &candidates {
            let (lo, hi) =
                members
                    .iter()
                    .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &i| {
                        let v = x.get(i, f);
                        (lo.min(v), hi.max(v))
                    });
            if lo < hi {
                ranges.push((f, lo, hi));
            }
        }
        if ranges.is_empty() {
            builder.set_leaf(slot);
            continue;
        }

        let (feature, lo, hi) = ranges[rng.random_range(0..ranges.len())];
        let threshold = open_uniform(rng, lo, hi);
        let (left, right): (Vec<usize>, Vec<usize>) = members
            .iter()
            .partition(|&&i| x.get(i, feature) <= threshold);
        let (lslot, rslot) = builder.set_split(slot, feature, threshold);
        stack.push((rslot, right, depth + 1));
        stack.push((lslot, left, depth + 1));
    }
    builder.finish()
}

/// Uniform draw from the open interval `(lo, hi)`.
fn open_uniform<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    let mid = lo + (hi - lo) / 2.0;
    if !(lo < mid && mid < hi) {
        // adjacent floats: no interior point exists, and `lo` still
        // separates the two under `<=` routing
        return lo;
    }
    loop {
        let t = lo + rng.random::<f64>() * (hi - lo);
        if lo < t && t < hi {
            return t;
        }
    }
}
