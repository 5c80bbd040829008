#![allow(dead_code)]

use forest_kernel::data::DataMatrix;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform data on [-1, 1]^p. Values are rounded to a coarse grid a third of
/// the time so ties and duplicate rows show up.
pub fn random_data(rng: &mut ChaCha8Rng, n: usize, p: usize) -> DataMatrix {
    let coarse = rng.random_bool(1.0 / 3.0);
    let values = (0..n * p)
        .map(|_| {
            let v: f64 = rng.random_range(-1.0..1.0);
            if coarse {
                (v * 2.0).round() / 2.0
            } else {
                v
            }
        })
        .collect();
    DataMatrix::new(n, p, values).unwrap()
}

pub fn random_psd(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    let a = DMatrix::from_fn(n, n + 2, |_, _| rng.random_range(-1.0..1.0));
    &a * a.transpose()
}

/// Biased HSIC straight from its expectation form,
/// (1/n²)Σ k_ij l_ij + (1/n⁴)Σ k_ij l_qr − (2/n³)Σ k_ij l_iq, with every sum
/// written out as a nested loop.
pub fn hsic_quadruple_sum(k: &DMatrix<f64>, l: &DMatrix<f64>) -> f64 {
    let n = k.nrows();
    let nf = n as f64;
    let mut a = 0.0;
    let mut b = 0.0;
    let mut c = 0.0;
    for i in 0..n {
        for j in 0..n {
            a += k[(i, j)] * l[(i, j)];
            for q in 0..n {
                c += k[(i, j)] * l[(i, q)];
                for r in 0..n {
                    b += k[(i, j)] * l[(q, r)];
                }
            }
        }
    }
    a / nf.powi(2) + b / nf.powi(4) - 2.0 * c / nf.powi(3)
}

/// M(i,j) − row mean − column mean + grand mean.
pub fn double_center_four_term(m: &DMatrix<f64>) -> DMatrix<f64> {
    let n = m.nrows();
    let nf = n as f64;
    let row: Vec<f64> = (0..n)
        .map(|i| (0..n).map(|j| m[(i, j)]).sum::<f64>() / nf)
        .collect();
    let col: Vec<f64> = (0..n)
        .map(|j| (0..n).map(|i| m[(i, j)]).sum::<f64>() / nf)
        .collect();
    let grand = row.iter().sum::<f64>() / nf;
    DMatrix::from_fn(n, n, |i, j| m[(i, j)] - row[i] - col[j] + grand)
}

/// Distance correlation from the textbook definition: double-centered
/// distance matrices, averaged products, normalized.
pub fn dcorr_textbook(x: &[Vec<f64>], y: &[Vec<f64>]) -> f64 {
    let dist = |pts: &[Vec<f64>]| {
        DMatrix::from_fn(pts.len(), pts.len(), |i, j| {
            pts[i]
                .iter()
                .zip(&pts[j])
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt()
        })
    };
    let a = double_center_four_term(&dist(x));
    let b = double_center_four_term(&dist(y));
    let mean = |u: &DMatrix<f64>, v: &DMatrix<f64>| u.component_mul(v).sum() / (u.len() as f64);
    mean(&a, &b) / (mean(&a, &a) * mean(&b, &b)).sqrt()
}

/// Pairs of distinct rows.
pub fn distinct_pairs(x: &DataMatrix) -> Vec<(usize, usize)> {
    let n = x.nrows();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && x.row(i) != x.row(j) {
                out.push((i, j));
            }
        }
    }
    out
}
