use nalgebra::{DMatrix, DVector};
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::groups::GroupConfig;
use crate::linalg::{Rat, RatVector};

/// A point `(a, t)` of `G_M = R^d ⋊ R`, with rational coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct HorocyclicPoint {
    pub vector: RatVector,
    pub t: Rat,
}

/// `M^{-t}` for real `t`, through the real eigendecomposition of `M`.
struct FractionalPowers {
    vectors: DMatrix<f64>,
    inverse: DMatrix<f64>,
    log_eigenvalues: Vec<f64>,
}

impl FractionalPowers {
    fn new(cfg: &GroupConfig) -> Result<Self> {
        if !cfg.spectral().expanding {
            return Err(Error::HypothesisViolated("d_L requires an expanding matrix M".into()));
        }
        let eb = cfg
            .eigenbasis()
            .ok_or_else(|| Error::HypothesisViolated("d_L requires M diagonalizable over R".into()))?;
        let values = &eb.values[0];
        if values.iter().any(|&v| v <= 0.0) {
            return Err(Error::HypothesisViolated("d_L requires positive eigenvalues; pass to M^2".into()));
        }
        Ok(FractionalPowers {
            vectors: eb.vectors.clone(),
            inverse: eb.inverse.clone(),
            log_eigenvalues: values.iter().map(|v| v.ln()).collect(),
        })
    }

    /// `||M^{-t} x||_1`.
    fn norm_at(&self, t: f64, x: &DVector<f64>) -> f64 {
        let mut c = &self.inverse * x;
        for (ci, l) in c.iter_mut().zip(&self.log_eigenvalues) {
            *ci *= (-t * l).exp();
        }
        (&self.vectors * c).iter().map(|v| v.abs()).sum()
    }
}

fn rat_to_f64(r: &Rat) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}

/// Smallest `t` with `||M^{-t} x||_1 <= 1`, located by bisection; `None` for
/// `x = 0`, where every height qualifies.
fn separation_height(fp: &FractionalPowers, x: &DVector<f64>) -> Option<f64> {
    if x.iter().all(|v| *v == 0.0) {
        return None;
    }
    let mut hi = 1.0f64;
    while fp.norm_at(hi, x) > 1.0 {
        hi *= 2.0;
    }
    let mut lo = -1.0f64;
    while fp.norm_at(lo, x) <= 1.0 {
        lo *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if fp.norm_at(mid, x) <= 1.0 {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo < 1e-13 * (1.0 + hi.abs()) {
            break;
        }
    }
    Some(hi)
}

/// The horocyclic estimate `d_L` of the distance between two points.
///
/// With `t_0` the lowest height at which the horizontal separation is at most
/// one: if `t_0` is above both points the path climbs to `t_0`, crosses, and
/// descends; otherwise it crosses at the higher of the two points.
pub fn dl_distance(cfg: &GroupConfig, g: &HorocyclicPoint, h: &HorocyclicPoint) -> Result<f64> {
    let fp = FractionalPowers::new(cfg)?;
    assert_eq!(g.vector.len(), cfg.dim());
    assert_eq!(h.vector.len(), cfg.dim());
    let diff: Vec<f64> = g.vector.iter().zip(&h.vector).map(|(a, b)| rat_to_f64(&(b - a))).collect();
    let x = DVector::from_vec(diff);
    let (ta, tb) = (rat_to_f64(&g.t), rat_to_f64(&h.t));
    let top = ta.max(tb);
    match separation_height(&fp, &x) {
        Some(t0) if t0 >= top => Ok((ta - t0).abs() + (t0 - tb).abs() + 1.0),
        _ => Ok((ta - tb).abs() + fp.norm_at(top, &x)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn point(v: &[i64], t: i64) -> HorocyclicPoint {
        HorocyclicPoint {
            vector: v.iter().map(|&x| Rat::from_integer(BigInt::from(x))).collect(),
            t: Rat::from_integer(BigInt::from(t)),
        }
    }

    #[test]
    fn worked_values() {
        let cfg = GroupConfig::bs(2).unwrap();
        assert_eq!(dl_distance(&cfg, &point(&[0], 0), &point(&[0], 0)).unwrap(), 0.0);
        assert!((dl_distance(&cfg, &point(&[0], 0), &point(&[0], 3)).unwrap() - 3.0).abs() < 1e-9);
        assert!((dl_distance(&cfg, &point(&[0], 0), &point(&[8], 0)).unwrap() - 7.0).abs() < 1e-9);
    }

    #[test]
    fn symmetric() {
        let cfg = GroupConfig::gamma_m(&[vec![3, 1], vec![1, 2]]).unwrap();
        let g = point(&[5, -2], 1);
        let h = point(&[-7, 11], -2);
        let a = dl_distance(&cfg, &g, &h).unwrap();
        let b = dl_distance(&cfg, &h, &g).unwrap();
        assert!((a - b).abs() < 1e-9);
    }

    #[test]
    fn refuses_non_expanding() {
        let cfg = GroupConfig::gamma_m(&[vec![2, 1], vec![1, 1]]).unwrap();
        let r = dl_distance(&cfg, &point(&[0, 0], 0), &point(&[1, 0], 0));
        assert!(matches!(r, Err(Error::HypothesisViolated(_))));
    }
}
