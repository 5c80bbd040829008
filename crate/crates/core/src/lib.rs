//! # forest-kernel
//!
//! Decision-forest proximity kernels made characteristic, and their use in
//! kernel independence testing.
//!
//! A forest partitions the sample once per tree. The fraction of trees in
//! which two observations share a leaf is a positive semidefinite kernel,
//! but not in general a characteristic one: a supervised forest can keep two
//! distinct points together in every tree. Mixing in a small share of
//! identity partitions fixes that, and raising the induced semimetric
//! `1 - K / max K` to a power in `(0, 1)` before mapping back yields a
//! characteristic kernel, so HSIC with it gives a consistent test.
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`forest`] | supervised CART forests, completely random forests, identity partitions |
//! | [`kernel`] | proximity kernel, identity mixture, characteristic transform, kernel/metric maps, PSD and negative-type checks |
//! | [`independence`] | double centering, HSIC, distance correlation, permutation tests |
//! | [`sim`] | twelve dependence settings, power estimation, sweeps |
//! | [`cli`] | the `rfkernel` command line |
//!
//! ```
//! use forest_kernel::data::DataMatrix;
//! use forest_kernel::forest::{build_unsupervised_forest, ForestConfig};
//! use forest_kernel::kernel::{check_psd, forest_characteristic_kernel, MixtureConfig};
//!
//! let x = DataMatrix::column((0..20).map(|i| (i as f64 * 0.7).sin()).collect())?;
//! let forest = build_unsupervised_forest(&x, &ForestConfig::unsupervised().with_trees(50))?;
//! let k = forest_characteristic_kernel(&forest, &x, &MixtureConfig::default())?;
//! assert!(check_psd(k.values(), 1e-8)?.is_psd);
//! # Ok::<(), forest_kernel::Error>(())
//! ```

pub mod cli;
pub mod data;
mod error;
pub mod forest;
pub mod independence;
pub mod kernel;
pub mod rng;
pub mod sim;

pub use error::{Error, Result};
