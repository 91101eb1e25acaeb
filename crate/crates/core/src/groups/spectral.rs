//! Floating-point spectral data. Used only for flags, search windows and
//! guesses; no exact decision depends on these numbers.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::linalg::IntMatrix;

pub const EXPANDING_MARGIN: f64 = 1e-9;
const REAL_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spectral {
    pub lambda_max: f64,
    pub lambda_min: f64,
    pub expanding: bool,
    pub r_split: bool,
}

/// Common real eigenbasis of a family of commuting matrices.
#[derive(Clone, Debug)]
pub struct EigenBasis {
    /// Columns are eigenvectors.
    pub vectors: DMatrix<f64>,
    pub inverse: DMatrix<f64>,
    /// `values[i][j]`: eigenvalue of matrix `i` on eigenvector `j`.
    pub values: Vec<Vec<f64>>,
}

impl EigenBasis {
    /// Coordinates of `x` in the eigenbasis.
    pub fn coordinates(&self, x: &[f64]) -> Vec<f64> {
        let v = nalgebra::DVector::from_column_slice(x);
        (&self.inverse * v).iter().copied().collect()
    }

    /// `||V||_1 * ||V^{-1}||_1`, the distortion between eigen-coordinates and
    /// standard coordinates in the ℓ¹ operator norm.
    pub fn condition_l1(&self) -> f64 {
        l1_operator_norm(&self.vectors) * l1_operator_norm(&self.inverse)
    }
}

pub fn to_dmatrix(m: &IntMatrix) -> DMatrix<f64> {
    DMatrix::from_row_slice(m.rows(), m.cols(), &m.to_f64())
}

fn l1_operator_norm(m: &DMatrix<f64>) -> f64 {
    (0..m.ncols()).map(|j| m.column(j).iter().map(|x| x.abs()).sum::<f64>()).fold(0.0, f64::max)
}

/// Eigenvalue moduli of an integer matrix, with a flag telling whether all
/// eigenvalues are real.
pub fn eigen_moduli(m: &IntMatrix) -> (Vec<f64>, bool) {
    let a = to_dmatrix(m);
    let ev = a.complex_eigenvalues();
    let scale = ev.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let real = ev.iter().all(|z| z.im.abs() <= REAL_TOL * scale);
    (ev.iter().map(|z| z.norm()).collect(), real)
}

pub fn spectral_of_matrix(m: &IntMatrix) -> Spectral {
    let (moduli, _) = eigen_moduli(m);
    let lambda_max = moduli.iter().copied().fold(0.0, f64::max);
    let lambda_min = moduli.iter().copied().fold(f64::INFINITY, f64::min);
    Spectral {
        lambda_max,
        lambda_min,
        expanding: moduli.iter().all(|&x| x > 1.0 + EXPANDING_MARGIN),
        r_split: common_eigenbasis(std::slice::from_ref(m)).is_some(),
    }
}

/// Spectral summary for the generators of a `Z^k` action: `lambda_max` is
/// the largest eigenvalue modulus over all generators and their inverses.
pub fn spectral_of_action(gens: &[IntMatrix], dim: usize) -> Spectral {
    let mut lambda_max: f64 = 1.0;
    let mut lambda_min: f64 = 1.0;
    for g in gens {
        let (moduli, _) = eigen_moduli(g);
        for x in moduli {
            if x > 0.0 {
                lambda_max = lambda_max.max(x).max(1.0 / x);
                lambda_min = lambda_min.min(x).min(1.0 / x);
            }
        }
    }
    let r_split = gens.is_empty() || common_eigenbasis(gens).is_some();
    let _ = dim;
    Spectral { lambda_max, lambda_min, expanding: false, r_split }
}

/// Simultaneous real eigenbasis of commuting matrices, if one exists with
/// simple spectrum for a generic linear combination.
pub fn common_eigenbasis(mats: &[IntMatrix]) -> Option<EigenBasis> {
    let first = mats.first()?;
    let d = first.rows();
    let fm: Vec<DMatrix<f64>> = mats.iter().map(to_dmatrix).collect();
    let mut combo = DMatrix::<f64>::zeros(d, d);
    for (i, m) in fm.iter().enumerate() {
        // irrational-ish weights so that distinct joint eigenvalues separate
        let w = 1.0 + (i as f64) * 0.618_033_988_749_895 + (i * i) as f64 * 0.141_421_356;
        combo += m * w;
    }
    let ev = combo.clone().complex_eigenvalues();
    let scale = ev.iter().map(|z| z.norm()).fold(1.0, f64::max);
    if ev.iter().any(|z| z.im.abs() > REAL_TOL * scale) {
        return None;
    }
    let mut reals: Vec<f64> = ev.iter().map(|z| z.re).collect();
    reals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    if reals.windows(2).any(|w| (w[1] - w[0]).abs() <= 1e-7 * scale) {
        return None;
    }
    let mut vectors = DMatrix::<f64>::zeros(d, d);
    for (j, &lam) in reals.iter().enumerate() {
        let shifted = &combo - DMatrix::<f64>::identity(d, d) * lam;
        let svd = shifted.svd(false, true);
        let vt = svd.v_t?;
        let (idx, _) = svd
            .singular_values
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())?;
        let mut v: Vec<f64> = vt.row(idx).iter().copied().collect();
        let norm: f64 = v.iter().map(|x| x.abs()).sum();
        // deterministic orientation: first significant entry positive
        let lead = v.iter().copied().find(|x| x.abs() > 1e-12).unwrap_or(1.0);
        let sign = if lead < 0.0 { -1.0 } else { 1.0 };
        for x in v.iter_mut() {
            *x *= sign / norm;
        }
        vectors.set_column(j, &nalgebra::DVector::from_vec(v));
    }
    let inverse = vectors.clone().try_inverse()?;
    let mut values = Vec::with_capacity(fm.len());
    for m in &fm {
        let mut row = Vec::with_capacity(d);
        for j in 0..d {
            let v = vectors.column(j);
            let mv = m * v;
            let lam = mv.dot(&v) / v.dot(&v);
            let resid = (&mv - v * lam).norm();
            if resid > 1e-6 * (1.0 + lam.abs()) {
                return None;
            }
            row.push(lam);
        }
        values.push(row);
    }
    Some(EigenBasis { vectors, inverse, values })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cat_map_spectrum() {
        let m = IntMatrix::from_i64(&[&[2, 1], &[1, 1]]);
        let s = spectral_of_matrix(&m);
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((s.lambda_max - phi * phi).abs() < 1e-9);
        assert!((s.lambda_min - 1.0 / (phi * phi)).abs() < 1e-9);
        assert!(!s.expanding);
        assert!(s.r_split);
    }

    #[test]
    fn expanding_scalar() {
        let s = spectral_of_matrix(&IntMatrix::from_i64(&[&[2]]));
        assert!(s.expanding && s.r_split);
        assert!(!spectral_of_matrix(&IntMatrix::from_i64(&[&[1]])).expanding);
    }

    #[test]
    fn rotation_is_not_split() {
        let s = spectral_of_matrix(&IntMatrix::from_i64(&[&[0, -1], &[1, 0]]));
        assert!(!s.r_split);
    }

    #[test]
    fn eigenbasis_diagonalizes() {
        let m = IntMatrix::from_i64(&[&[2, 1], &[1, 1]]);
        let eb = common_eigenbasis(std::slice::from_ref(&m)).unwrap();
        let a = to_dmatrix(&m);
        let d = &eb.inverse * a * &eb.vectors;
        assert!(d[(0, 1)].abs() < 1e-9 && d[(1, 0)].abs() < 1e-9);
        let prod: f64 = eb.values[0].iter().product();
        assert!((prod - 1.0).abs() < 1e-9);
    }
}
