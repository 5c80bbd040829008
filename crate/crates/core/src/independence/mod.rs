//! HSIC and distance correlation from precomputed Gram / distance matrices,
//! with permutation p-values.
//!
//! Both statistics are biased V-statistics of the form
//! `c * sum_ij A(i,j) B(i,j)` where `A` and `B` are double-centered. Because
//! centering commutes with a simultaneous row/column permutation, the
//! permutation null only re-indexes `B`; nothing is recomputed.

mod result;

use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::kernel::{KernelMatrix, MetricMatrix};
use crate::rng::stream;

pub use result::TestResult;

/// `H M H` with `H = I - 11'/n`: subtract row and column means, add back the
/// grand mean.
pub fn double_center(m: &DMatrix<f64>) -> DMatrix<f64> {
    let n = m.nrows();
    let nf = n as f64;
    let row_means: Vec<f64> = (0..n).map(|i| m.row(i).sum() / nf).collect();
    let col_means: Vec<f64> = (0..n).map(|j| m.column(j).sum() / nf).collect();
    let grand = row_means.iter().sum::<f64>() / nf;
    DMatrix::from_fn(n, n, |i, j| m[(i, j)] - row_means[i] - col_means[j] + grand)
}

/// A statistic value, flagged when it was forced to zero because one of the
/// samples has no spread.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Statistic {
    pub value: f64,
    pub degenerate: bool,
}

impl Statistic {
    pub fn new(value: f64) -> Self {
        Self {
            value,
            degenerate: false,
        }
    }

    pub fn degenerate() -> Self {
        Self {
            value: 0.0,
            degenerate: true,
        }
    }
}

/// A statistic `scale * sum_ij A(i,j) B(sigma(i), sigma(j))` over centered
/// matrices, evaluable under any permutation `sigma` of the second sample.
#[derive(Debug, Clone)]
pub struct PairedStatistic {
    first: DMatrix<f64>,
    second: DMatrix<f64>,
    scale: f64,
    degenerate: bool,
}

fn check_sizes(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::LengthMismatch {
            what: "second matrix",
            got: b,
            expected: a,
        });
    }
    if a < 2 {
        return Err(Error::TooFewRows { min: 2, got: a });
    }
    Ok(())
}

fn inner(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

impl PairedStatistic {
    /// Biased HSIC, `(1/n^2) tr(K H L H)`.
    pub fn hsic(k: &KernelMatrix, l: &KernelMatrix) -> Result<Self> {
        let n = k.size();
        check_sizes(n, l.size())?;
        Ok(Self {
            first: double_center(k.values()),
            second: double_center(l.values()),
            scale: 1.0 / (n * n) as f64,
            degenerate: false,
        })
    }

    /// HSIC scaled by `sqrt(HSIC(K, K) HSIC(L, L))`, the kernel analogue of
    /// distance correlation. Permutation p-values match [`Self::hsic`] since
    /// both normalizers are invariant under relabelling one sample.
    pub fn normalized_hsic(k: &KernelMatrix, l: &KernelMatrix) -> Result<Self> {
        check_sizes(k.size(), l.size())?;
        Ok(Self::correlation(
            double_center(k.values()),
            double_center(l.values()),
        ))
    }

    /// Distance correlation `dcov^2 / sqrt(dvar_x dvar_y)`, all three as
    /// biased double-centered V-statistics.
    pub fn dcorr(dx: &MetricMatrix, dy: &MetricMatrix) -> Result<Self> {
        check_sizes(dx.size(), dy.size())?;
        Ok(Self::correlation(
            double_center(dx.values()),
            double_center(dy.values()),
        ))
    }

    fn correlation(a: DMatrix<f64>, b: DMatrix<f64>) -> Self {
        let var_x = inner(&a, &a);
        let var_y = inner(&b, &b);
        let degenerate = !(var_x > 0.0 && var_y > 0.0);
        let scale = if degenerate {
            0.0
        } else {
            1.0 / (var_x * var_y).sqrt()
        };
        Self {
            first: a,
            second: b,
            scale,
            degenerate,
        }
    }

    /// Force the statistic to a flagged zero.
    pub fn into_degenerate(mut self) -> Self {
        self.degenerate = true;
        self.scale = 0.0;
        self
    }

    pub fn size(&self) -> usize {
        self.first.nrows()
    }

    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    /// Value with the second sample re-indexed by `perm`.
    pub fn under(&self, perm: &[usize]) -> f64 {
        let n = self.size();
        debug_assert_eq!(perm.len(), n);
        let mut total = 0.0;
        for (j, &pj) in perm.iter().enumerate() {
            for (i, &pi) in perm.iter().enumerate() {
                total += self.first[(i, j)] * self.second[(pi, pj)];
            }
        }
        self.scale * total
    }

    pub fn observed(&self) -> f64 {
        let identity: Vec<usize> = (0..self.size()).collect();
        self.under(&identity)
    }

    pub fn statistic(&self) -> Statistic {
        if self.degenerate {
            Statistic::degenerate()
        } else {
            Statistic::new(self.observed())
        }
    }

    /// Number of `b` random permutations whose statistic is at least the
    /// observed one. Permutation `k` is drawn from stream `(seed, k)`.
    pub fn count_exceedances(&self, b: usize, seed: u64) -> usize {
        let observed = self.observed();
        let n = self.size();
        (0..b)
            .into_par_iter()
            .filter(|&k| {
                let mut perm: Vec<usize> = (0..n).collect();
                perm.shuffle(&mut stream(seed, &[k as u64]));
                self.under(&perm) >= observed
            })
            .count()
    }

    /// Add-one permutation test.
    pub fn permutation_test(&self, b: usize, seed: u64, method: &str) -> Result<TestResult> {
        if b == 0 {
            return Err(invalid("permutations", "must be at least 1"));
        }
        let stat = self.statistic();
        let exceed = if stat.degenerate {
            b
        } else {
            self.count_exceedances(b, seed)
        };
        Ok(TestResult::new(
            method,
            self.size(),
            stat.value,
            exceed,
            b,
            seed,
        ))
    }
}

/// Biased HSIC V-statistic of two kernels of the same size.
pub fn hsic_statistic(k: &KernelMatrix, l: &KernelMatrix) -> Result<f64> {
    Ok(PairedStatistic::hsic(k, l)?.observed())
}

/// HSIC normalized to `[-1, 1]`; flagged zero when either kernel is constant
/// after centering.
pub fn normalized_hsic_statistic(k: &KernelMatrix, l: &KernelMatrix) -> Result<Statistic> {
    Ok(PairedStatistic::normalized_hsic(k, l)?.statistic())
}

/// Distance correlation of two samples given their distance matrices.
/// Flagged zero when either sample has zero distance variance.
pub fn dcorr_statistic(dx: &MetricMatrix, dy: &MetricMatrix) -> Result<Statistic> {
    Ok(PairedStatistic::dcorr(dx, dy)?.statistic())
}

/// HSIC permutation test with `b` permutations of `l`.
pub fn permutation_test(
    k: &KernelMatrix,
    l: &KernelMatrix,
    b: usize,
    seed: u64,
) -> Result<TestResult> {
    PairedStatistic::hsic(k, l)?.permutation_test(b, seed, "hsic")
}
