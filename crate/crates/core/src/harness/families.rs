use std::collections::HashMap;

use num_traits::{Signed, ToPrimitive};

use super::table::{fold_rows, Extremal};
use super::{ClfTable, TableKind};
use crate::error::{Error, Result};
use crate::groups::{Element, GroupConfig};
use crate::linalg::{int_vec, l1_norm, Int, IntMatrix, IntVector};
use crate::metrics::{bfs_ball, Ball};
use crate::solvers::{min_conjugators, twisted_conj_abelian};

fn fmt_vec(v: &[Int]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

/// All vectors of `Z^d` with ℓ¹ norm at most `r`, by norm then
/// lexicographically.
pub fn l1_ball(d: usize, r: u64) -> Vec<IntVector> {
    let mut out = Vec::new();
    for k in 0..=r {
        crate::solvers::for_each_l1_sphere(d, k, &mut |v| {
            out.push(int_vec(v));
            false
        });
    }
    out
}

/// Twisted conjugacy length in `Z^d`: row `n` is the largest, over twisted
/// conjugate `u, v` with `‖u‖ + ‖v‖ ≤ n`, of the least `‖γ‖` solving
/// `u + φ(γ) = γ + v`.
///
/// When `Id - φ` is singular the solutions form a coset of its kernel, which
/// is searched over coefficient offsets in `[-n_max, n_max]`; such rows are
/// certified only when the minimum found is zero. `cap` bounds the number of
/// coset points examined per pair.
pub fn empirical_tclf(d: usize, phi: &IntMatrix, n_max: usize, cap: usize) -> Result<ClfTable> {
    if phi.rows() != d || !phi.is_square() {
        return Err(Error::DomainError(format!("twisting matrix must be {d}x{d}")));
    }
    let points = l1_ball(d, n_max as u64);
    let norms: Vec<usize> = points.iter().map(|p| l1_norm(p).to_usize().expect("small norm")).collect();
    let mut per_sum = vec![Extremal::new(); n_max + 1];
    let sweep = n_max as i64;
    for (i, u) in points.iter().enumerate() {
        for (j, v) in points.iter().enumerate().skip(i) {
            let sum = norms[i] + norms[j];
            if sum > n_max {
                continue;
            }
            let Some(witness) = twisted_conj_abelian(u, v, phi) else { continue };
            let rank = witness.kernel_basis.len() as u32;
            if rank > 0 && (2 * sweep + 1).checked_pow(rank).is_none_or(|c| c as usize > cap) {
                return Err(Error::CapExceeded { cap });
            }
            let gamma = witness.minimize_l1(sweep);
            let value = l1_norm(&gamma).to_u64().expect("small norm");
            if rank > 0 && value > 0 {
                per_sum[sum].certified = false;
            }
            // orient so the first vector string is the smaller; swapping u and v negates γ
            let (su, sv) = (fmt_vec(u), fmt_vec(v));
            let (first, second, g) = if su <= sv { (su, sv, gamma) } else { (sv, su, gamma.iter().map(|x| -x).collect()) };
            per_sum[sum].offer(value, first, second, fmt_vec(&g));
        }
    }
    Ok(fold_rows(&per_sum, TableKind::Tclf))
}

/// Restricted conjugacy length of `⟨a⟩` in BS(1,m).
#[derive(Clone, Debug)]
pub struct RclfTable {
    pub table: ClfTable,
    /// Shortest word length of a power `a^r` with `|r| > r_max`; rows stop
    /// there, since larger sizes would involve powers outside the sample.
    pub horizon: usize,
}

/// Row `n` is the largest shortest-conjugator length over conjugate pairs
/// `(a^r, a^s)`, `0 < |r|, |s| ≤ r_max`, with `|a^r| + |a^s| ≤ n`, conjugators
/// ranging over the whole group. Word lengths and conjugators come from
/// breadth-first balls.
pub fn empirical_rclf_bs(m: i64, r_max: u64, cap: usize) -> Result<RclfTable> {
    if m < 2 {
        return Err(Error::DomainError("m must be at least 2".into()));
    }
    let cfg = GroupConfig::bs(m)?;
    let r_max = r_max as i64;
    let power = |r: i64| cfg.kernel_element(0, vec![Int::from(r)]);
    let mut ball = bfs_ball(&cfg, 1, cap)?;
    // grow until every sampled power and one power beyond the sample appear
    let horizon = loop {
        let all_in = (1..=r_max).all(|r| ball.contains(&power(r)) && ball.contains(&power(-r)));
        let beyond = ball
            .iter()
            .filter(|(g, _)| outside_power(g, r_max))
            .map(|(_, n)| n)
            .min();
        if let (true, Some(h)) = (all_in, beyond) {
            break h;
        }
        let next = ball.radius() + 1;
        ball.extend(&cfg, next, cap)?;
    };
    let mut per_sum = vec![Extremal::new(); horizon + 1];
    let lengths: HashMap<i64, usize> = (-r_max..=r_max).map(|r| (r, ball.length(&power(r)).expect("power inside the ball"))).collect();
    let len = |r: i64| lengths[&r];
    let word = |ball: &Ball, g: &Element| cfg.format_word(&ball.geodesic(&cfg, g).expect("inside the ball"));

    let exps: Vec<i64> = (-r_max..=r_max).filter(|&r| r != 0).collect();
    for &r in &exps {
        let u = power(r);
        let targets: Vec<i64> = exps.iter().copied().filter(|&s| related(r, s, m) && len(r) + len(s) <= horizon).collect();
        if targets.is_empty() {
            continue;
        }
        let elems: Vec<Element> = targets.iter().map(|&s| power(s)).collect();
        let max_needed = targets.iter().map(|&s| len(r) + len(s)).max().unwrap_or(0);
        let mut found = min_conjugators(&cfg, &u, &elems, &ball);
        let mut radius = ball.radius();
        while found.iter().any(Option::is_none) && radius < 4 * max_needed + 4 {
            radius += 1;
            ball.extend(&cfg, radius, cap)?;
            found = min_conjugators(&cfg, &u, &elems, &ball);
        }
        for (&s, hit) in targets.iter().zip(found) {
            let sum = len(r) + len(s);
            let Some((g, n)) = hit else {
                per_sum[sum].certified = false;
                continue;
            };
            assert_eq!(cfg.conj(&g, &u), power(s), "conjugator failed verification");
            per_sum[sum].offer(n as u64, word(&ball, &u), word(&ball, &power(s)), word(&ball, &g));
        }
    }
    Ok(RclfTable { table: fold_rows(&per_sum, TableKind::Rclf), horizon })
}

fn outside_power(g: &Element, r_max: i64) -> bool {
    let e = g.as_gm();
    e.s() == 0 && e.p() == 0 && e.w()[0].abs() > Int::from(r_max)
}

/// `s = r·m^j` for some integer `j`.
fn related(r: i64, s: i64, m: i64) -> bool {
    let (small, large) = if r.abs() <= s.abs() { (r, s) } else { (s, r) };
    if large % small != 0 {
        return false;
    }
    let mut q = large / small;
    while q % m == 0 {
        q /= m;
    }
    q == 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::DEFAULT_CAP;

    #[test]
    fn one_dimensional_doubling() {
        // φ = (2): γ = v - u exactly
        let phi = IntMatrix::from_i64(&[&[2]]);
        let t = empirical_tclf(1, &phi, 6, 1_000).unwrap();
        for r in &t.rows {
            assert!(r.clf as usize <= r.n);
            assert!(r.certified);
        }
        assert_eq!(t.rows[6].clf, 6);
    }

    #[test]
    fn equal_vectors_contribute_zero() {
        let phi = IntMatrix::identity(2);
        let t = empirical_tclf(2, &phi, 4, 1_000).unwrap();
        assert!(t.rows.iter().all(|r| r.clf == 0 && r.certified));
    }

    #[test]
    fn relation_between_powers() {
        assert!(related(3, 12, 2) && related(12, 3, 2) && related(-5, -5, 2));
        assert!(!related(3, 9, 2) && !related(3, -6, 2));
    }

    #[test]
    fn small_rclf_sandwich() {
        let rt = empirical_rclf_bs(2, 16, DEFAULT_CAP).unwrap();
        assert!(rt.table.is_monotone());
        for r in &rt.table.rows {
            assert!(r.certified);
            let (n, v) = (r.n as f64, r.clf as f64);
            assert!((n - 2.0) / 2.0 <= v && v <= 2.0 * n, "row {r:?}");
        }
        let cfg = GroupConfig::bs(2).unwrap();
        let ball = bfs_ball(&cfg, 6, DEFAULT_CAP).unwrap();
        let a = cfg.eval_str("a").unwrap();
        let a8 = cfg.eval_str("a^8").unwrap();
        let hit = min_conjugators(&cfg, &a, &[a8], &ball);
        assert_eq!(hit[0].as_ref().map(|x| x.1), Some(3));
    }

    #[test]
    fn kernel_coset_cap() {
        let phi = IntMatrix::identity(3);
        assert!(matches!(empirical_tclf(3, &phi, 6, 100), Err(Error::CapExceeded { cap: 100 })));
    }
}
