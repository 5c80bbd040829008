//! The four dependence statistics compared by the power harness.
//!
//! Every kernel method reports normalized HSIC, so all four statistics are
//! correlations on the same `[-1, 1]` scale and differ only in the kernel or
//! metric. Raw HSIC varies with the spread of each replicate's kernels, which
//! adds noise when statistics from different datasets are compared.

use std::fmt;
use std::str::FromStr;

use crate::data::DataMatrix;
use crate::error::{invalid, Error, Result};
use crate::forest::{build_supervised_forest, build_unsupervised_forest, ForestConfig};
use crate::independence::{PairedStatistic, Statistic};
use crate::kernel::{
    euclidean_metric, forest_characteristic_kernel, gaussian_kernel_median, metric_to_kernel,
    KernelMatrix, MixtureConfig,
};
use crate::rng::derive_seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    /// Supervised forest kernel on `x` (grown against `y`) versus the
    /// metric-induced kernel of `y`.
    Srf,
    /// Unsupervised forest kernels on `x` and on `y`.
    Urf,
    /// Distance correlation on Euclidean distances.
    Dcorr,
    /// HSIC with median-bandwidth Gaussian kernels.
    HsicGaussian,
}

impl Method {
    pub const ALL: [Method; 4] = [
        Method::Srf,
        Method::Urf,
        Method::Dcorr,
        Method::HsicGaussian,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Srf => "srf",
            Method::Urf => "urf",
            Method::Dcorr => "dcorr",
            Method::HsicGaussian => "hsic-gaussian",
        }
    }

    pub fn index(self) -> usize {
        Method::ALL.iter().position(|&m| m == self).unwrap()
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Unknown {
                kind: "method",
                name: s.to_string(),
            })
    }
}

/// Forest and kernel settings shared by the forest-based methods.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodConfig {
    pub supervised: ForestConfig,
    pub unsupervised: ForestConfig,
    pub mix: MixtureConfig,
}

impl Default for MethodConfig {
    /// Library defaults: 500 trees per forest.
    fn default() -> Self {
        Self {
            supervised: ForestConfig::supervised(),
            unsupervised: ForestConfig::unsupervised(),
            mix: MixtureConfig::default(),
        }
    }
}

impl MethodConfig {
    /// Desk-scale defaults used by the power harness: 100 trees per forest.
    pub fn desk() -> Self {
        Self::default().with_trees(100)
    }

    pub fn with_trees(mut self, trees: usize) -> Self {
        self.supervised.num_trees = trees;
        self.unsupervised.num_trees = trees;
        self
    }

    /// Copy with every forest seed set to `seed`.
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.supervised.seed = seed;
        self.unsupervised.seed = seed;
        self
    }
}

fn paired_hsic(k: &KernelMatrix, l: &KernelMatrix) -> Result<PairedStatistic> {
    let stat = PairedStatistic::normalized_hsic(k, l)?;
    Ok(if k.is_degenerate() || l.is_degenerate() {
        stat.into_degenerate()
    } else {
        stat
    })
}

/// The characteristic kernel of `y` induced by its Euclidean distances.
pub fn response_kernel(y: &DataMatrix) -> KernelMatrix {
    metric_to_kernel(&euclidean_metric(y))
}

/// Build the centered matrices `method` compares, ready for evaluation or
/// permutation.
pub fn prepare(
    method: Method,
    x: &DataMatrix,
    y: &DataMatrix,
    cfg: &MethodConfig,
) -> Result<PairedStatistic> {
    if x.nrows() != y.nrows() {
        return Err(Error::LengthMismatch {
            what: "y rows",
            got: y.nrows(),
            expected: x.nrows(),
        });
    }
    match method {
        Method::Srf => {
            if y.ncols() != 1 {
                return Err(invalid(
                    "y",
                    format!("srf needs a single response column, got {}", y.ncols()),
                ));
            }
            let forest = build_supervised_forest(x, &y.column_values(0), &cfg.supervised)?;
            let k = forest_characteristic_kernel(&forest, x, &cfg.mix)?;
            paired_hsic(&k, &response_kernel(y))
        }
        Method::Urf => {
            let fx = build_unsupervised_forest(x, &cfg.unsupervised)?;
            let ycfg = ForestConfig {
                seed: derive_seed(cfg.unsupervised.seed, &[1]),
                ..cfg.unsupervised.clone()
            };
            let fy = build_unsupervised_forest(y, &ycfg)?;
            let kx = forest_characteristic_kernel(&fx, x, &cfg.mix)?;
            let ky = forest_characteristic_kernel(&fy, y, &cfg.mix)?;
            paired_hsic(&kx, &ky)
        }
        Method::Dcorr => PairedStatistic::dcorr(&euclidean_metric(x), &euclidean_metric(y)),
        Method::HsicGaussian => paired_hsic(&gaussian_kernel_median(x), &gaussian_kernel_median(y)),
    }
}

/// Statistic of `method` on one sample; zero and flagged when a kernel or
/// metric has no spread.
pub fn run_method(
    method: Method,
    x: &DataMatrix,
    y: &DataMatrix,
    cfg: &MethodConfig,
) -> Result<Statistic> {
    Ok(prepare(method, x, y, cfg)?.statistic())
}
