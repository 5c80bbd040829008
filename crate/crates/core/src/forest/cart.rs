//! Regression trees grown by variance reduction (CART).

use rand::seq::index;
use rand::Rng;

use crate::data::DataMatrix;

use super::tree::{midpoint, Tree, TreeBuilder};

pub(crate) struct CartParams {
    pub mtry: usize,
    pub min_leaf: usize,
    pub max_depth: Option<usize>,
}

#[derive(Clone, Copy)]
struct Candidate {
    sse: f64,
    feature: usize,
    threshold: f64,
}

/// Grow one regression tree on the rows listed in `sample` (which may contain
/// repeats when bootstrapping).
pub(crate) fn grow<R: Rng>(
    x: &DataMatrix,
    y: &[f64],
    sample: Vec<usize>,
    params: &CartParams,
    rng: &mut R,
) -> Tree {
    let mut builder = TreeBuilder::default();
    let root = builder.reserve();
    let mut stack = vec![(root, sample, 0usize)];
    let mut scratch: Vec<(f64, f64)> = Vec::with_capacity(x.nrows());

    while let Some((slot, members, depth)) = stack.pop() {
        let at_depth_cap = params.max_depth.is_some_and(|d| depth >= d);
        if members.len() < 2 * params.min_leaf || at_depth_cap || is_constant(y, &members) {
            builder.set_leaf(slot);
            continue;
        }
        let best = best_split(x, y, &members, params, rng, &mut scratch);
        let Some(best) = best else {
            builder.set_leaf(slot);
            continue;
        };
        let (left, right): (Vec<usize>, Vec<usize>) = members
            .iter()
            .partition(|&&i| x.get(i, best.feature) <= best.threshold);
        let (lslot, rslot) = builder.set_split(slot, best.feature, best.threshold);
        // right pushed first so the left subtree is finished first
        stack.push((rslot, right, depth + 1));
        stack.push((lslot, left, depth + 1));
    }
    builder.finish()
}

fn is_constant(y: &[f64], members: &[usize]) -> bool {
    let first = y[members[0]];
    members.iter().all(|&i| y[i] == first)
}

/// Minimum weighted child SSE over `mtry` random features. Ties keep the
/// lowest feature index, then the lowest threshold. Returns `None` when no
/// admissible split reduces the node SSE.
fn best_split<R: Rng>(
    x: &DataMatrix,
    y: &[f64],
    members: &[usize],
    params: &CartParams,
    rng: &mut R,
    scratch: &mut Vec<(f64, f64)>,
) -> Option<Candidate> {
    let k = members.len();
    let mean = members.iter().map(|&i| y[i]).sum::<f64>() / k as f64;
    let parent_sse: f64 = members.iter().map(|&i| (y[i] - mean).powi(2)).sum();

    let mut features = index::sample(rng, x.ncols(), params.mtry).into_vec();
    features.sort_unstable();

    let mut best: Option<Candidate> = None;
    for &feature in &features {
        scratch.clear();
        scratch.extend(members.iter().map(|&i| (x.get(i, feature), y[i] - mean)));
        scratch.sort_by(|a, b| a.0.total_cmp(&b.0));

        let total: f64 = scratch.iter().map(|s| s.1).sum();
        let total_sq: f64 = scratch.iter().map(|s| s.1 * s.1).sum();
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for pos in 1..k {
            let (v_prev, r_prev) = scratch[pos - 1];
            sum += r_prev;
            sum_sq += r_prev * r_prev;
            let v = scratch[pos].0;
            if v_prev == v || pos < params.min_leaf || k - pos < params.min_leaf {
                continue;
            }
            let nl = pos as f64;
            let nr = (k - pos) as f64;
            let right_sum = total - sum;
            let sse =
                (sum_sq - sum * sum / nl) + ((total_sq - sum_sq) - right_sum * right_sum / nr);
            if best.is_none_or(|b| sse < b.sse) {
                best = Some(Candidate {
                    sse,
                    feature,
                    threshold: midpoint(v_prev, v),
                });
            }
        }
    }
    best.filter(|b| b.sse < parent_sse)
}
