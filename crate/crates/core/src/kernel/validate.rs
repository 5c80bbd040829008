//! Matrix-level checks for positive semidefiniteness and negative type.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::Result;
use crate::independence::double_center;

use super::{ensure_symmetric, MetricMatrix};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsdCheck {
    pub is_psd: bool,
    pub min_eigenvalue: f64,
}

fn min_eigenvalue(m: DMatrix<f64>) -> f64 {
    SymmetricEigen::new(m).eigenvalues.min()
}

/// PSD iff the smallest eigenvalue is at least `-tol`. Non-symmetric input is
/// rejected.
pub fn check_psd(m: &DMatrix<f64>, tol: f64) -> Result<PsdCheck> {
    let scale = m.amax().max(1.0);
    ensure_symmetric(m, 1e-12 * scale)?;
    let min_eigenvalue = min_eigenvalue(m.clone());
    Ok(PsdCheck {
        is_psd: min_eigenvalue >= -tol,
        min_eigenvalue,
    })
}

/// Smallest eigenvalue of `-H D H`. The quadratic form of `D` over zero-sum
/// coefficient vectors is nonpositive exactly when this is nonnegative.
pub fn negative_type_min_eigenvalue(d: &MetricMatrix) -> f64 {
    let centered = double_center(d.values());
    min_eigenvalue(-centered)
}

pub fn check_negative_type(d: &MetricMatrix, tol: f64) -> bool {
    negative_type_min_eigenvalue(d) >= -tol
}
