//! Decision forests reduced to what the kernels consume: for every tree, the
//! leaf cell of each training observation.
//!
//! Three kinds are provided:
//!
//! * supervised regression forests (CART, variance reduction, bootstrap),
//! * unsupervised completely random forests (random feature, uniform random
//!   threshold),
//! * identity forests, where every distinct observation is its own cell.
//!
//! Trees are grown in parallel. Tree `t` draws from its own stream keyed by
//! `(seed, t)`, so a forest is a pure function of its inputs and seed.

mod cart;
mod random;
mod tree;

use std::collections::HashMap;

use rand::Rng;
use rayon::prelude::*;

use crate::data::DataMatrix;
use crate::error::{invalid, Error, Result};
use crate::rng::stream;

pub use tree::{Tree, TreeNode};

/// Leaf-cell assignment of the `n` training observations for one tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    cell_of: Vec<usize>,
    num_cells: usize,
}

impl Partition {
    /// Validate an explicit assignment: ids must cover `0..num_cells` with
    /// every cell nonempty.
    pub fn new(cell_of: Vec<usize>) -> Result<Self> {
        let num_cells = cell_of.iter().max().map_or(0, |&m| m + 1);
        let mut seen = vec![false; num_cells];
        for &c in &cell_of {
            seen[c] = true;
        }
        if let Some(empty) = seen.iter().position(|&s| !s) {
            return Err(invalid("cell_of", format!("cell {empty} is empty")));
        }
        Ok(Self { cell_of, num_cells })
    }

    /// Compact arbitrary labels into contiguous ids in first-seen order.
    pub(crate) fn relabel(labels: &[usize]) -> Self {
        let mut map = HashMap::new();
        let cell_of = labels
            .iter()
            .map(|&l| {
                let next = map.len();
                *map.entry(l).or_insert(next)
            })
            .collect();
        Self {
            cell_of,
            num_cells: map.len(),
        }
    }

    /// All observations in a single cell.
    pub fn single_cell(n: usize) -> Self {
        Self {
            cell_of: vec![0; n],
            num_cells: 1,
        }
    }

    /// Every bitwise-distinct row of `x` in its own cell. Duplicated rows share.
    pub fn identity(x: &DataMatrix) -> Self {
        let mut map: HashMap<Vec<u64>, usize> = HashMap::new();
        let cell_of = x
            .rows()
            .map(|row| {
                let key: Vec<u64> = row.iter().map(|v| v.to_bits()).collect();
                let next = map.len();
                *map.entry(key).or_insert(next)
            })
            .collect();
        Self {
            cell_of,
            num_cells: map.len(),
        }
    }

    pub fn cell_of(&self) -> &[usize] {
        &self.cell_of
    }

    pub fn num_cells(&self) -> usize {
        self.num_cells
    }

    pub fn len(&self) -> usize {
        self.cell_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cell_of.is_empty()
    }

    /// Observation indices grouped by cell.
    pub fn cells(&self) -> Vec<Vec<usize>> {
        let mut cells = vec![Vec::new(); self.num_cells];
        for (i, &c) in self.cell_of.iter().enumerate() {
            cells[c].push(i);
        }
        cells
    }

    #[inline]
    pub fn same_cell(&self, i: usize, j: usize) -> bool {
        self.cell_of[i] == self.cell_of[j]
    }
}

/// Number of candidate features drawn at each split, as a rule of `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mtry {
    /// `max(1, p / 3)`, the R `randomForest` regression default.
    Third,
    /// `max(1, floor(sqrt(p)))`.
    Sqrt,
    /// All `p` features.
    All,
    /// A fixed count, which must not exceed `p`.
    Count(usize),
}

impl Mtry {
    pub fn resolve(self, p: usize) -> Result<usize> {
        let m = match self {
            Mtry::Third => (p / 3).max(1),
            Mtry::Sqrt => ((p as f64).sqrt() as usize).max(1),
            Mtry::All => p,
            Mtry::Count(k) => k,
        };
        if m == 0 || m > p {
            return Err(invalid("mtry", format!("{m} not in 1..={p}")));
        }
        Ok(m)
    }
}

impl std::fmt::Display for Mtry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Mtry::Third => f.write_str("third"),
            Mtry::Sqrt => f.write_str("sqrt"),
            Mtry::All => f.write_str("all"),
            Mtry::Count(k) => write!(f, "{k}"),
        }
    }
}

impl std::str::FromStr for Mtry {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "third" => Ok(Mtry::Third),
            "sqrt" => Ok(Mtry::Sqrt),
            "all" => Ok(Mtry::All),
            _ => s
                .parse()
                .map(Mtry::Count)
                .map_err(|_| invalid("mtry", format!("`{s}` is not third, sqrt, all or a count"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ForestKind {
    Supervised,
    Unsupervised,
    Identity,
}

/// Growth parameters shared by both tree kinds.
#[derive(Debug, Clone, PartialEq)]
pub struct ForestConfig {
    pub num_trees: usize,
    pub mtry: Mtry,
    pub min_leaf: usize,
    pub max_depth: Option<usize>,
    pub bootstrap: bool,
    pub seed: u64,
}

impl ForestConfig {
    /// 500 trees, `mtry = p/3`, five observations per leaf, bootstrap on.
    pub fn supervised() -> Self {
        Self {
            num_trees: 500,
            mtry: Mtry::Third,
            min_leaf: 5,
            max_depth: None,
            bootstrap: true,
            seed: 0,
        }
    }

    /// 500 completely random trees over all features, no bootstrap.
    pub fn unsupervised() -> Self {
        Self {
            num_trees: 500,
            mtry: Mtry::All,
            min_leaf: 5,
            max_depth: None,
            bootstrap: false,
            seed: 0,
        }
    }

    pub fn with_trees(mut self, num_trees: usize) -> Self {
        self.num_trees = num_trees;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_min_leaf(mut self, min_leaf: usize) -> Self {
        self.min_leaf = min_leaf;
        self
    }

    pub fn with_mtry(mut self, mtry: Mtry) -> Self {
        self.mtry = mtry;
        self
    }

    pub fn with_bootstrap(mut self, bootstrap: bool) -> Self {
        self.bootstrap = bootstrap;
        self
    }

    pub fn with_max_depth(mut self, depth: usize) -> Self {
        self.max_depth = Some(depth);
        self
    }

    fn validate(&self) -> Result<()> {
        if self.num_trees == 0 {
            return Err(invalid("num_trees", "must be at least 1"));
        }
        if self.min_leaf == 0 {
            return Err(invalid("min_leaf", "must be at least 1"));
        }
        Ok(())
    }
}

/// An ordered collection of partitions of the same `n` observations.
#[derive(Debug, Clone, PartialEq)]
pub struct Forest {
    partitions: Vec<Partition>,
    kind: ForestKind,
    identity_count: usize,
}

impl Forest {
    pub fn from_partitions(kind: ForestKind, partitions: Vec<Partition>) -> Result<Self> {
        if let Some(first) = partitions.first() {
            if let Some(bad) = partitions.iter().find(|p| p.len() != first.len()) {
                return Err(Error::LengthMismatch {
                    what: "partition",
                    got: bad.len(),
                    expected: first.len(),
                });
            }
        }
        let identity_count = if kind == ForestKind::Identity {
            partitions.len()
        } else {
            0
        };
        Ok(Self {
            partitions,
            kind,
            identity_count,
        })
    }

    pub fn partitions(&self) -> &[Partition] {
        &self.partitions
    }

    /// Kind of the base (non-identity) trees.
    pub fn kind(&self) -> ForestKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.partitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.partitions.is_empty()
    }

    /// Number of observations, or 0 for an empty forest.
    pub fn num_observations(&self) -> usize {
        self.partitions.first().map_or(0, Partition::len)
    }

    pub fn identity_count(&self) -> usize {
        self.identity_count
    }

    /// Fraction of partitions that are identity partitions.
    pub fn identity_fraction(&self) -> f64 {
        if self.partitions.is_empty() {
            0.0
        } else {
            self.identity_count as f64 / self.partitions.len() as f64
        }
    }

    /// Append identity partitions of `x`.
    pub(crate) fn push_identity(&mut self, x: &DataMatrix, count: usize) -> Result<()> {
        if !self.partitions.is_empty() && x.nrows() != self.num_observations() {
            return Err(Error::LengthMismatch {
                what: "data rows",
                got: x.nrows(),
                expected: self.num_observations(),
            });
        }
        let identity = Partition::identity(x);
        self.partitions.extend(std::iter::repeat_n(identity, count));
        self.identity_count += count;
        Ok(())
    }
}

fn draw_sample<R: Rng>(n: usize, bootstrap: bool, rng: &mut R) -> Vec<usize> {
    if bootstrap {
        (0..n).map(|_| rng.random_range(0..n)).collect()
    } else {
        (0..n).collect()
    }
}

/// Grow a regression forest of `x` against target `y`, then route every
/// original observation (including out-of-bag rows) through each tree.
pub fn build_supervised_forest(x: &DataMatrix, y: &[f64], cfg: &ForestConfig) -> Result<Forest> {
    cfg.validate()?;
    if y.len() != x.nrows() {
        return Err(Error::LengthMismatch {
            what: "y",
            got: y.len(),
            expected: x.nrows(),
        });
    }
    if let Some(row) = y.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite { row, col: 0 });
    }
    let params = cart::CartParams {
        mtry: cfg.mtry.resolve(x.ncols())?,
        min_leaf: cfg.min_leaf,
        max_depth: cfg.max_depth,
    };
    let partitions = (0..cfg.num_trees)
        .into_par_iter()
        .map(|t| {
            let mut rng = stream(cfg.seed, &[t as u64]);
            let sample = draw_sample(x.nrows(), cfg.bootstrap, &mut rng);
            cart::grow(x, y, sample, &params, &mut rng).partition(x)
        })
        .collect();
    Forest::from_partitions(ForestKind::Supervised, partitions)
}

/// Grow a forest of completely random trees on `x`.
pub fn build_unsupervised_forest(x: &DataMatrix, cfg: &ForestConfig) -> Result<Forest> {
    cfg.validate()?;
    let params = random::RandomParams {
        mtry: cfg.mtry.resolve(x.ncols())?,
        min_leaf: cfg.min_leaf,
        max_depth: cfg.max_depth,
    };
    let partitions = (0..cfg.num_trees)
        .into_par_iter()
        .map(|t| {
            let mut rng = stream(cfg.seed, &[t as u64]);
            let sample = draw_sample(x.nrows(), cfg.bootstrap, &mut rng);
            random::grow(x, sample, &params, &mut rng).partition(x)
        })
        .collect();
    Forest::from_partitions(ForestKind::Unsupervised, partitions)
}

/// `count` copies of the identity partition of `x`.
pub fn identity_forest(x: &DataMatrix, count: usize) -> Result<Forest> {
    if count == 0 {
        return Err(invalid("count", "must be at least 1"));
    }
    Forest::from_partitions(ForestKind::Identity, vec![Partition::identity(x); count])
}

/// Grow the `t`-th tree of a supervised forest as an inspectable [`Tree`].
pub fn supervised_tree(x: &DataMatrix, y: &[f64], cfg: &ForestConfig, t: usize) -> Result<Tree> {
    cfg.validate()?;
    let params = cart::CartParams {
        mtry: cfg.mtry.resolve(x.ncols())?,
        min_leaf: cfg.min_leaf,
        max_depth: cfg.max_depth,
    };
    let mut rng = stream(cfg.seed, &[t as u64]);
    let sample = draw_sample(x.nrows(), cfg.bootstrap, &mut rng);
    Ok(cart::grow(x, y, sample, &params, &mut rng))
}

/// Grow the `t`-th tree of an unsupervised forest as an inspectable [`Tree`].
pub fn unsupervised_tree(x: &DataMatrix, cfg: &ForestConfig, t: usize) -> Result<Tree> {
    cfg.validate()?;
    let params = random::RandomParams {
        mtry: cfg.mtry.resolve(x.ncols())?,
        min_leaf: cfg.min_leaf,
        max_depth: cfg.max_depth,
    };
    let mut rng = stream(cfg.seed, &[t as u64]);
    let sample = draw_sample(x.nrows(), cfg.bootstrap, &mut rng);
    Ok(random::grow(x, sample, &params, &mut rng))
}
