//! Forest proximity kernels and their characteristic transform.
//!
//! The proximity kernel of a forest is the fraction of trees in which two
//! observations share a leaf. It is an average of block-indicator matrices
//! and therefore positive semidefinite. Two further steps make it
//! characteristic:
//!
//! 1. mix in identity partitions (every distinct observation alone in its
//!    cell), which pushes every distinct off-diagonal entry strictly below
//!    one and makes the kernel nondegenerate;
//! 2. map to the induced semimetric `d = 1 - K / max K`, raise it to a power
//!    `r` in `(0, 1)`, and map back: `K* = 1 - d^r`.
//!
//! [`forest_characteristic_kernel`] composes both.

// negated comparisons below are deliberate so that NaN fails them
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod io;
mod validate;

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::data::DataMatrix;
use crate::error::{invalid, Error, Result};
use crate::forest::Forest;

pub use io::{read_matrix_csv, write_matrix_csv};
pub use validate::{check_negative_type, check_psd, negative_type_min_eigenvalue, PsdCheck};

/// Where a kernel matrix came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    /// Plain forest proximity.
    Proximity,
    /// Proximity of a forest that includes identity partitions.
    Mixed,
    /// Output of [`characteristic_transform`].
    Characteristic,
    /// Output of [`metric_to_kernel`].
    MetricInduced,
    /// Gaussian kernel on Euclidean distances.
    Gaussian,
    /// Supplied directly by the caller.
    External,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Proximity => "proximity",
            Self::Mixed => "mixed",
            Self::Characteristic => "characteristic",
            Self::MetricInduced => "metric-induced",
            Self::Gaussian => "gaussian",
            Self::External => "external",
        }
    }
}

/// A symmetric `n x n` Gram matrix.
///
/// `degenerate` is raised when the kernel is constant because every pair of
/// observations coincides under it.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelMatrix {
    values: DMatrix<f64>,
    provenance: Provenance,
    degenerate: bool,
}

impl KernelMatrix {
    /// Wrap a caller-supplied matrix; it must be square and exactly symmetric.
    pub fn from_matrix(values: DMatrix<f64>) -> Result<Self> {
        ensure_symmetric(&values, 0.0)?;
        Ok(Self {
            values,
            provenance: Provenance::External,
            degenerate: false,
        })
    }

    pub(crate) fn with_provenance(values: DMatrix<f64>, provenance: Provenance) -> Self {
        Self {
            values,
            provenance,
            degenerate: false,
        }
    }

    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    pub fn into_values(self) -> DMatrix<f64> {
        self.values
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    pub fn size(&self) -> usize {
        self.values.nrows()
    }

    pub fn max(&self) -> f64 {
        self.values.max()
    }

    /// Nondegeneracy in the sufficient form used by the mixture argument:
    /// every off-diagonal entry between distinct rows of `x` lies strictly
    /// below the diagonal maximum.
    pub fn separates_distinct_rows(&self, x: &DataMatrix) -> bool {
        let max = self.max();
        let n = self.size();
        (0..n).all(|i| (i + 1..n).all(|j| x.row(i) == x.row(j) || self.values[(i, j)] < max))
    }
}

/// A symmetric `n x n` dissimilarity matrix with zero diagonal and
/// nonnegative entries.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricMatrix {
    values: DMatrix<f64>,
}

impl MetricMatrix {
    pub fn new(values: DMatrix<f64>) -> Result<Self> {
        ensure_symmetric(&values, 0.0)?;
        for i in 0..values.nrows() {
            if values[(i, i)] != 0.0 {
                return Err(invalid(
                    "metric",
                    format!("d({i},{i}) = {} != 0", values[(i, i)]),
                ));
            }
        }
        if let Some(v) = values.iter().find(|v| !(**v >= 0.0)) {
            return Err(invalid("metric", format!("entry {v} is negative or NaN")));
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    pub fn size(&self) -> usize {
        self.values.nrows()
    }

    pub fn max(&self) -> f64 {
        self.values.max()
    }

    /// Entrywise power `d^r`, still a semimetric for `r > 0`.
    pub fn powf(&self, r: f64) -> Self {
        Self {
            values: self.values.map(|d| d.powf(r)),
        }
    }
}

/// Mixture fraction and metric exponent for the characteristic transform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixtureConfig {
    /// Requested fraction of identity partitions, in `(0, 1)`.
    pub pi: f64,
    /// Exponent applied to the induced semimetric, in `(0, 1)`.
    pub r: f64,
}

impl Default for MixtureConfig {
    fn default() -> Self {
        Self { pi: 0.01, r: 0.5 }
    }
}

impl MixtureConfig {
    pub fn validate(&self) -> Result<()> {
        check_open_unit("pi", self.pi)?;
        check_open_unit("r", self.r)
    }
}

fn check_open_unit(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(invalid(name, format!("{v} is not in (0, 1)")))
    }
}

pub(crate) fn ensure_symmetric(m: &DMatrix<f64>, tol: f64) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    let n = m.nrows();
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (m[(i, j)], m[(j, i)]);
            if !((a - b).abs() <= tol) {
                return Err(Error::NotSymmetric { row: i, col: j });
            }
        }
    }
    Ok(())
}

/// Fraction of the forest's partitions in which each pair shares a cell.
///
/// Co-occurrences are counted as integers and divided once, so the result
/// does not depend on how the partitions are split across threads.
pub fn proximity_kernel(forest: &Forest) -> Result<KernelMatrix> {
    if forest.is_empty() {
        return Err(Error::EmptyForest);
    }
    let n = forest.num_observations();
    let counts = forest
        .partitions()
        .par_iter()
        .fold(
            || vec![0u32; n * n],
            |mut acc, part| {
                for cell in part.cells() {
                    for (a, &i) in cell.iter().enumerate() {
                        for &j in &cell[a + 1..] {
                            acc[i * n + j] += 1;
                        }
                    }
                }
                acc
            },
        )
        .reduce(
            || vec![0u32; n * n],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    let m = forest.len() as f64;
    let values = DMatrix::from_fn(n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => 1.0,
        std::cmp::Ordering::Less => f64::from(counts[i * n + j]) / m,
        std::cmp::Ordering::Greater => f64::from(counts[j * n + i]) / m,
    });
    let provenance = if forest.identity_count() > 0 && forest.identity_count() < forest.len() {
        Provenance::Mixed
    } else {
        Provenance::Proximity
    };
    Ok(KernelMatrix::with_provenance(values, provenance))
}

/// Number of identity partitions to append to `base_count` partitions so
/// that their share is at least `pi`: `ceil(pi * m / (1 - pi))`, at least one.
pub fn identity_partition_count(base_count: usize, pi: f64) -> Result<usize> {
    check_open_unit("pi", pi)?;
    let raw = pi * base_count as f64 / (1.0 - pi);
    // absorb representation error such as 0.01 * 99 / 0.99 = 1.0000000000000002
    let count = (raw * (1.0 - 1e-12)).ceil() as usize;
    Ok(count.max(1))
}

/// Append identity partitions of `x` so they make up at least `pi` of the
/// forest. The proximity of the result is `(1 - pi') K_base + pi' K_identity`
/// where `pi'` is [`Forest::identity_fraction`].
pub fn inject_identity_partitions(base: &Forest, x: &DataMatrix, pi: f64) -> Result<Forest> {
    let count = identity_partition_count(base.len(), pi)?;
    let mut mixed = base.clone();
    mixed.push_identity(x, count)?;
    Ok(mixed)
}

/// Induced semimetric `d(i,j) = 1 - K(i,j) / max K`.
///
/// The maximum is the sample maximum over all entries. The diagonal must
/// attain it so that the result has a zero diagonal.
pub fn kernel_to_metric(k: &KernelMatrix) -> Result<MetricMatrix> {
    let max = k.max();
    if !(max > 0.0) {
        return Err(Error::NonPositiveMax(max));
    }
    let n = k.size();
    if let Some(i) = (0..n).find(|&i| k.values[(i, i)] != max) {
        return Err(invalid(
            "kernel",
            format!(
                "diagonal entry {i} is {} but the maximum is {max}",
                k.values[(i, i)]
            ),
        ));
    }
    Ok(MetricMatrix {
        values: k.values.map(|v| 1.0 - v / max),
    })
}

/// Induced kernel `k(i,j) = 1 - D(i,j) / max D`.
///
/// An identically zero `D` yields the all-ones kernel flagged degenerate.
pub fn metric_to_kernel(d: &MetricMatrix) -> KernelMatrix {
    let max = d.max();
    let n = d.size();
    if max == 0.0 {
        return KernelMatrix {
            values: DMatrix::from_element(n, n, 1.0),
            provenance: Provenance::MetricInduced,
            degenerate: true,
        };
    }
    KernelMatrix::with_provenance(d.values.map(|v| 1.0 - v / max), Provenance::MetricInduced)
}

/// `K*(i,j) = 1 - (1 - K(i,j) / max K)^r` for `r` in `(0, 1)`.
///
/// Entries stay in `[0, 1]` and are nondecreasing in `K`. The result is
/// flagged degenerate when every entry equals the maximum.
pub fn characteristic_transform(k: &KernelMatrix, r: f64) -> Result<KernelMatrix> {
    check_open_unit("r", r)?;
    let max = k.max();
    if !(max > 0.0) {
        return Err(Error::NonPositiveMax(max));
    }
    let degenerate = k.values.iter().all(|&v| v == max);
    let values = k.values.map(|v| 1.0 - (1.0 - v / max).max(0.0).powf(r));
    Ok(KernelMatrix {
        values,
        provenance: Provenance::Characteristic,
        degenerate,
    })
}

/// Mix identity partitions into `forest` and apply the characteristic
/// transform to its proximity kernel.
pub fn forest_characteristic_kernel(
    forest: &Forest,
    x: &DataMatrix,
    mix: &MixtureConfig,
) -> Result<KernelMatrix> {
    mix.validate()?;
    let mixed = inject_identity_partitions(forest, x, mix.pi)?;
    characteristic_transform(&proximity_kernel(&mixed)?, mix.r)
}

/// Pairwise Euclidean distances between the rows of `x`.
pub fn euclidean_metric(x: &DataMatrix) -> MetricMatrix {
    let n = x.nrows();
    let mut values = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let d = x.distance(i, j);
            values[(i, j)] = d;
            values[(j, i)] = d;
        }
    }
    MetricMatrix { values }
}

/// Gaussian kernel `exp(-d^2 / (2 s^2))` with `s` the median nonzero pairwise
/// Euclidean distance. All-identical rows give the all-ones kernel flagged
/// degenerate.
pub fn gaussian_kernel_median(x: &DataMatrix) -> KernelMatrix {
    let d = euclidean_metric(x);
    let n = d.size();
    let mut off: Vec<f64> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .map(|(i, j)| d.values[(i, j)])
        .filter(|&v| v > 0.0)
        .collect();
    if off.is_empty() {
        return KernelMatrix {
            values: DMatrix::from_element(n, n, 1.0),
            provenance: Provenance::Gaussian,
            degenerate: true,
        };
    }
    off.sort_by(f64::total_cmp);
    let mid = off.len() / 2;
    let median = if off.len() % 2 == 1 {
        off[mid]
    } else {
        0.5 * (off[mid - 1] + off[mid])
    };
    let scale = 2.0 * median * median;
    KernelMatrix::with_provenance(
        d.values.map(|v| (-v * v / scale).exp()),
        Provenance::Gaussian,
    )
}
