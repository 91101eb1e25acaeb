use nalgebra::DMatrix;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::{for_each_l1_sphere, SolverCaps};
use crate::error::{Error, Result};
use crate::groups::{EigenBasis, GroupConfig};
use crate::linalg::{is_zero_vec, Int};

const NEGLIGIBLE: f64 = 1e-9;

/// Real guess for `y` in `φ(y) w = u`, from logarithms of eigen-coordinates.
///
/// In a common eigenbasis the equation reads `c_j(u) = Π_i λ_{j,i}^{y_i}
/// c_j(w)`, which is linear in `y` after taking `log |·|`. A `k×k` minor with
/// the largest determinant is solved by Cramer's rule.
pub fn log_eigen_guess(eb: &EigenBasis, u: &[Int], w: &[Int]) -> Option<Vec<f64>> {
    let k = eb.values.len();
    let uf: Vec<f64> = u.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect();
    let wf: Vec<f64> = w.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect();
    if uf.iter().chain(&wf).any(|x| !x.is_finite()) {
        return None;
    }
    let cu = eb.coordinates(&uf);
    let cw = eb.coordinates(&wf);
    let scale_u = cu.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let scale_w = cw.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let usable: Vec<usize> = (0..cu.len())
        .filter(|&j| cu[j].abs() > NEGLIGIBLE * scale_u && cw[j].abs() > NEGLIGIBLE * scale_w)
        .collect();
    if usable.len() < k {
        return None;
    }
    let log_row = |j: usize| -> Vec<f64> { (0..k).map(|i| eb.values[i][j].abs().ln()).collect() };
    let mut best: Option<(f64, Vec<usize>)> = None;
    for_each_subset(&usable, k, &mut |rows| {
        let m = DMatrix::from_fn(k, k, |r, c| log_row(rows[r])[c]);
        let det = m.determinant().abs();
        if best.as_ref().is_none_or(|(d, _)| det > *d) {
            best = Some((det, rows.to_vec()));
        }
    });
    let (det, rows) = best?;
    if det < NEGLIGIBLE {
        return None;
    }
    let m = DMatrix::from_fn(k, k, |r, c| log_row(rows[r])[c]);
    let rhs = nalgebra::DVector::from_iterator(k, rows.iter().map(|&j| cu[j].abs().ln() - cw[j].abs().ln()));
    let sol = m.lu().solve(&rhs)?;
    Some(sol.iter().copied().collect())
}

fn for_each_subset(items: &[usize], k: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            rec(items, k, i + 1, cur, f);
            cur.pop();
        }
    }
    rec(items, k, 0, &mut Vec::with_capacity(k), f);
}

fn content(v: &[Int]) -> Int {
    v.iter().fold(Int::zero(), |g, x| g.gcd(x))
}

/// Finds `y ∈ Z^k` with `φ(y) w = u`.
///
/// `Ok(None)` is a certified negative: either an exact invariant separates
/// `u` and `w`, or the ℓ¹ box searched has radius at least twice the norm of
/// the real log-eigen solution (plus two). Without usable spectral data the
/// box is bounded by the caps and an unsuccessful search returns
/// `SearchExhausted`.
pub fn restricted_conj_semidirect(cfg: &GroupConfig, u: &[Int], w: &[Int], caps: &SolverCaps) -> Result<Option<Vec<i64>>> {
    assert!(cfg.is_semidirect(), "restricted conjugacy here is for semidirect products");
    let k = cfg.acting_rank();
    if u == w {
        return Ok(Some(vec![0; k]));
    }
    if is_zero_vec(u) || is_zero_vec(w) || k == 0 {
        return Ok(None);
    }
    // φ(y) is unimodular, so it preserves the gcd of the coordinates.
    if content(u) != content(w) {
        return Ok(None);
    }
    let guess = cfg.eigenbasis().and_then(|eb| log_eigen_guess(eb, u, w));
    if let Some(g) = &guess {
        let rounded: Vec<i64> = g.iter().map(|x| x.round() as i64).collect();
        if cfg.phi_apply(&rounded, w) == u {
            return Ok(Some(rounded));
        }
    }
    let (mut radius, mut certified) = match &guess {
        Some(g) => ((2.0 * g.iter().map(|x| x.abs()).sum::<f64>()).ceil() as u64 + 2, true),
        None => (caps.max_search_radius, false),
    };
    if radius > caps.max_search_radius {
        radius = caps.max_search_radius;
        certified = false;
    }
    let mut found = None;
    let mut visited = 0u64;
    for r in 0..=radius {
        let stopped = for_each_l1_sphere(k, r, &mut |y| {
            visited += 1;
            if visited > caps.max_candidates {
                return true;
            }
            if cfg.phi_apply(y, w) == u {
                found = Some(y.to_vec());
                return true;
            }
            false
        });
        if stopped {
            break;
        }
    }
    match found {
        Some(y) => Ok(Some(y)),
        None if certified && visited <= caps.max_candidates => Ok(None),
        None => Err(Error::SearchExhausted),
    }
}
