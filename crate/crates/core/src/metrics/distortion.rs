use std::io::Write;

use num_traits::{ToPrimitive, Zero};

use super::ball::{bfs_ball, Ball};
use crate::error::{Error, Result};
use crate::groups::{Element, GroupConfig};
use crate::linalg::{l1_norm, Int};

/// Which subgroup `F` and which metric on it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubgroupSelector {
    /// `F = ⟨a_1, ..., a_d⟩ ≅ Z^d` with its own word metric (ℓ¹ norm).
    KernelIntrinsic,
    /// `F = ⟨a_1, ..., a_d⟩` with the ambient word metric restricted to it.
    KernelAmbient,
    /// `F = G`.
    Whole,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistortionRow {
    pub n: usize,
    pub delta: Option<u64>,
    pub ldist: Option<u64>,
    pub invdist: Option<u64>,
}

impl DistortionRow {
    pub fn certified(&self) -> bool {
        self.delta.is_some() && self.ldist.is_some() && self.invdist.is_some()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistortionTable {
    pub selector: SubgroupSelector,
    pub rows: Vec<DistortionRow>,
}

/// Integer coordinates of `g` if it lies in `⟨a_1, ..., a_d⟩`.
pub fn kernel_coordinates(g: &Element) -> Option<&[Int]> {
    match g {
        Element::Gm(e) if e.p() == 0 && e.s() == 0 => Some(e.w()),
        Element::Sd(e) if e.y.iter().all(|&v| v == 0) => Some(&e.x),
        _ => None,
    }
}

fn subgroup_norm(selector: SubgroupSelector, g: &Element, ambient: usize) -> Option<u64> {
    match selector {
        SubgroupSelector::Whole => Some(ambient as u64),
        SubgroupSelector::KernelAmbient => kernel_coordinates(g).map(|_| ambient as u64),
        SubgroupSelector::KernelIntrinsic => {
            kernel_coordinates(g).map(|w| l1_norm(w).to_u64().expect("subgroup norm fits in u64"))
        }
    }
}

/// Calls `f` on every vector of `Z^d` with ℓ¹ norm at most `r`.
fn for_each_l1_vector(d: usize, r: u64, f: &mut dyn FnMut(&[i64]) -> bool) -> bool {
    fn rec(v: &mut Vec<i64>, d: usize, budget: i64, f: &mut dyn FnMut(&[i64]) -> bool) -> bool {
        if v.len() == d {
            return f(v);
        }
        for c in -budget..=budget {
            v.push(c);
            let ok = rec(v, d, budget - c.abs(), f);
            v.pop();
            if !ok {
                return false;
            }
        }
        true
    }
    rec(&mut Vec::with_capacity(d), d, r as i64, f)
}

/// Distortion functions of `F` in `G`, from an exhaustive ball of radius
/// `n_max`.
///
/// `delta` is exact for every `n <= n_max`. `ldist(n)` is reported when the
/// smallest candidate found in the ball is provably minimal: every `f ∈ F`
/// of smaller `F`-norm lies inside the ball. `invdist(n)` is reported when it
/// is determined by reported `ldist` values.
pub fn distortion_table(cfg: &GroupConfig, selector: SubgroupSelector, n_max: usize, cap: usize) -> Result<DistortionTable> {
    let ball = bfs_ball(cfg, n_max, cap)?;
    Ok(distortion_from_ball(cfg, &ball, selector))
}

pub fn distortion_from_ball(cfg: &GroupConfig, ball: &Ball, selector: SubgroupSelector) -> DistortionTable {
    let n_max = ball.radius();
    // per ambient length: (max F-norm, min F-norm) among members of F
    let mut max_at = vec![None::<u64>; n_max + 1];
    let mut min_at = vec![None::<u64>; n_max + 1];
    for (g, len) in ball.iter() {
        if let Some(fnorm) = subgroup_norm(selector, g, len) {
            max_at[len] = Some(max_at[len].map_or(fnorm, |m: u64| m.max(fnorm)));
            min_at[len] = Some(min_at[len].map_or(fnorm, |m: u64| m.min(fnorm)));
        }
    }

    let mut delta = Vec::with_capacity(n_max + 1);
    let mut running = 0u64;
    for m in &max_at {
        running = running.max(m.unwrap_or(0));
        delta.push(running);
    }

    let mut ldist = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let candidate = min_at[n..].iter().flatten().min().copied();
        ldist.push(candidate.filter(|&c| ldist_certified(cfg, ball, selector, c)));
    }

    let mut invdist = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max as u64 {
        let mut value = None;
        for (k, l) in ldist.iter().enumerate() {
            match l {
                Some(l) if *l >= n => {
                    value = Some(k as u64);
                    break;
                }
                Some(_) => {}
                None => break,
            }
        }
        invdist.push(value);
    }

    let rows = (0..=n_max)
        .map(|n| DistortionRow { n, delta: Some(delta[n]), ldist: ldist[n], invdist: invdist[n] })
        .collect();
    DistortionTable { selector, rows }
}

/// The candidate is minimal once every `f ∈ F` with `|f|_F < candidate` is
/// known to lie in the ball: such an `f` of length `>= n` would have been a
/// smaller candidate.
fn ldist_certified(cfg: &GroupConfig, ball: &Ball, selector: SubgroupSelector, candidate: u64) -> bool {
    match selector {
        // |f|_F = |f|: anything of smaller norm and length >= n would itself
        // be a smaller candidate inside the ball.
        SubgroupSelector::Whole | SubgroupSelector::KernelAmbient => true,
        SubgroupSelector::KernelIntrinsic => {
            if candidate == 0 {
                return true;
            }
            let d = cfg.dim();
            for_each_l1_vector(d, candidate - 1, &mut |v| {
                let g = cfg.kernel_element(0, v.iter().map(|&c| Int::from(c)).collect());
                ball.contains(&g)
            })
        }
    }
}

impl DistortionTable {
    /// CSV with columns `n,delta,ldist,invdist,certified`; uncertified
    /// entries are left empty.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["n", "delta", "ldist", "invdist", "certified"])?;
        let opt = |v: Option<u64>| v.map(|x| x.to_string()).unwrap_or_default();
        for r in &self.rows {
            w.write_record([
                r.n.to_string(),
                opt(r.delta),
                opt(r.ldist),
                opt(r.invdist),
                (r.certified() as u8).to_string(),
            ])?;
        }
        w.flush().map_err(Error::from)
    }
}

/// `max{|f|_F : f ∈ F ∩ ball}` over a precomputed ball; used by tests to
/// cross-check `delta` by direct filtering.
pub fn max_subgroup_norm(ball: &Ball, selector: SubgroupSelector, n: usize) -> u64 {
    ball.iter()
        .filter(|(_, len)| *len <= n)
        .filter_map(|(g, len)| subgroup_norm(selector, g, len))
        .max()
        .unwrap_or_else(Zero::zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::ball::DEFAULT_CAP;

    #[test]
    fn whole_group_is_undistorted() {
        let cfg = GroupConfig::bs(2).unwrap();
        let t = distortion_table(&cfg, SubgroupSelector::Whole, 5, DEFAULT_CAP).unwrap();
        for r in &t.rows {
            assert_eq!(r.delta, Some(r.n as u64));
            assert_eq!(r.ldist, Some(r.n as u64));
            assert_eq!(r.invdist, Some(r.n as u64));
        }
    }

    #[test]
    fn bs_cyclic_subgroup_exponentially_distorted() {
        let cfg = GroupConfig::bs(2).unwrap();
        let t = distortion_table(&cfg, SubgroupSelector::KernelIntrinsic, 9, DEFAULT_CAP).unwrap();
        for n in 0..=4usize {
            assert!(t.rows[2 * n + 1].delta.unwrap() >= 1 << n);
        }
        for w in t.rows.windows(2) {
            assert!(w[0].delta <= w[1].delta);
        }
        for r in &t.rows {
            if let Some(l) = r.ldist {
                assert!(r.delta.unwrap() >= l);
            }
        }
    }

    #[test]
    fn l1_vector_enumeration_counts() {
        let mut count = 0;
        for_each_l1_vector(2, 3, &mut |_| {
            count += 1;
            true
        });
        assert_eq!(count, 25);
    }
}
