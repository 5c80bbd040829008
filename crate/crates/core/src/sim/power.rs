//! Power by the empirical alternative / empirical null protocol.
//!
//! For each replicate a fresh dataset is drawn (dependent for the
//! alternative arm, independent for the null arm) and every forest is refit.
//! Power is the fraction of alternative statistics strictly above the
//! empirical `1 - alpha` quantile of the null statistics.

use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::rng::derive_seed;

use super::methods::{run_method, Method, MethodConfig};
use super::settings::{generate, SimSetting};

#[derive(Debug, Clone, PartialEq)]
pub struct PowerReport {
    pub setting: SimSetting,
    pub method: Method,
    pub n: usize,
    pub replicates: usize,
    pub alpha: f64,
    /// Alternative statistics above the null quantile.
    pub hits: usize,
    pub power: f64,
    pub seed: u64,
}

/// Which arm the "alternative" statistics come from. `NullVsNull` measures
/// the size of the procedure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arms {
    DependentVsNull,
    NullVsNull,
}

/// Seed of the dataset for replicate `rep` of `arm` (0 = alternative,
/// 1 = null). Methods share datasets so their powers are paired.
pub fn dataset_seed(seed: u64, sim: &SimSetting, arm: u64, rep: usize) -> u64 {
    derive_seed(
        seed,
        &[sim.setting.index() as u64, sim.p as u64, arm, rep as u64],
    )
}

/// Seed of the forests fitted by `method` on that dataset.
pub fn method_seed(seed: u64, sim: &SimSetting, method: Method, arm: u64, rep: usize) -> u64 {
    derive_seed(
        seed,
        &[
            sim.setting.index() as u64,
            sim.p as u64,
            arm,
            rep as u64,
            16 + method.index() as u64,
        ],
    )
}

/// Order-statistic threshold: the `ceil((1 - alpha) r)`-th smallest null value.
pub fn null_quantile(null: &[f64], alpha: f64) -> f64 {
    let mut sorted = null.to_vec();
    sorted.sort_by(f64::total_cmp);
    let r = sorted.len();
    let rank = (((1.0 - alpha) * r as f64) * (1.0 - 1e-12)).ceil() as usize;
    sorted[rank.clamp(1, r) - 1]
}

/// Count of alternative statistics strictly above the null quantile.
pub fn count_rejections(null: &[f64], alternative: &[f64], alpha: f64) -> usize {
    let threshold = null_quantile(null, alpha);
    alternative.iter().filter(|&&s| s > threshold).count()
}

/// Statistics of `method` over `reps` replicates of one arm.
#[allow(clippy::too_many_arguments)]
pub fn arm_statistics(
    sim: &SimSetting,
    method: Method,
    n: usize,
    reps: usize,
    dependent: bool,
    arm: u64,
    cfg: &MethodConfig,
    seed: u64,
) -> Result<Vec<f64>> {
    (0..reps)
        .into_par_iter()
        .map(|rep| {
            let (x, y) = generate(sim, n, dependent, dataset_seed(seed, sim, arm, rep))?;
            let cfg = cfg
                .clone()
                .with_seed(method_seed(seed, sim, method, arm, rep));
            Ok(run_method(method, &x, &y, &cfg)?.value)
        })
        .collect()
}

pub fn estimate_power(
    sim: &SimSetting,
    method: Method,
    n: usize,
    reps: usize,
    alpha: f64,
    cfg: &MethodConfig,
    seed: u64,
) -> Result<PowerReport> {
    estimate_with_arms(
        sim,
        method,
        n,
        reps,
        alpha,
        cfg,
        seed,
        Arms::DependentVsNull,
    )
}

/// [`estimate_power`] with a choice of arms; `Arms::NullVsNull` draws the
/// "alternative" from a second independent null arm.
#[allow(clippy::too_many_arguments)]
pub fn estimate_with_arms(
    sim: &SimSetting,
    method: Method,
    n: usize,
    reps: usize,
    alpha: f64,
    cfg: &MethodConfig,
    seed: u64,
    arms: Arms,
) -> Result<PowerReport> {
    if reps < 20 {
        return Err(invalid("replicates", format!("{reps} < 20")));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(invalid("alpha", format!("{alpha} not in (0, 1)")));
    }
    let null = arm_statistics(sim, method, n, reps, false, 1, cfg, seed)?;
    let alternative = match arms {
        Arms::DependentVsNull => arm_statistics(sim, method, n, reps, true, 0, cfg, seed)?,
        Arms::NullVsNull => arm_statistics(sim, method, n, reps, false, 2, cfg, seed)?,
    };
    let hits = count_rejections(&null, &alternative, alpha);
    Ok(PowerReport {
        setting: *sim,
        method,
        n,
        replicates: reps,
        alpha,
        hits,
        power: hits as f64 / reps as f64,
        seed,
    })
}
