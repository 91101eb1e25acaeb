use std::collections::{BTreeMap, HashMap};

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use serde::Serialize;

use super::table::{fold_rows, Extremal};
use super::{ClfTable, TableKind};
use crate::error::{Error, Result};
use crate::groups::{Element, GroupConfig, Word};
use crate::metrics::{bfs_ball, Ball, DEFAULT_CAP};
use crate::linalg::{is_zero_vec, Int};
use crate::solvers::{conjugate, MeetInMiddle, SolverCaps};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ClfOptions {
    pub n_max: usize,
    /// Radius of the ball the pairs are drawn from; at least `n_max`.
    pub ball_radius: usize,
    /// Largest conjugator length searched before a pair is left uncertified.
    pub conjugator_radius: usize,
    /// Element cap for every ball built.
    pub cap: usize,
    pub caps: SolverCaps,
}

impl ClfOptions {
    pub fn new(n_max: usize) -> Self {
        ClfOptions { n_max, ball_radius: n_max, conjugator_radius: 2 * n_max, cap: DEFAULT_CAP, caps: SolverCaps::default() }
    }
}

/// Conjugacy classes of the elements of length `≤ n_max`, as lists of ball
/// indices in breadth-first order.
#[derive(Clone, Debug)]
pub struct Partition {
    pub classes: Vec<Vec<usize>>,
    /// Smallest pair size `|x| + |y|` whose conjugacy the solver could not
    /// settle, if any.
    pub first_unsettled: Option<usize>,
}

/// An exact conjugacy invariant of kernel elements, empty elsewhere.
///
/// In Γ_M with `|det M| ≥ 2` the class of `v ∈ A` is `{M^b v}`, which meets
/// `Z^d` in `{M^b w0 : b ≥ 0}` for a unique `w0 ∉ M Z^d`; `w0` is returned
/// and is a complete invariant. Otherwise the gcd of the coordinates, which
/// any automorphism of `Z^d` preserves.
pub fn kernel_invariant(cfg: &GroupConfig, g: &Element) -> Vec<Int> {
    if !g.in_kernel() {
        return Vec::new();
    }
    match g {
        Element::Gm(e) if cfg.m_det().abs() > Int::one() => {
            let mut w = e.w().to_vec();
            if e.p() == 0 && !is_zero_vec(&w) {
                while let Some(q) = cfg.m_divide(&w) {
                    w = q;
                }
            }
            w
        }
        Element::Gm(e) => vec![content(e.w())],
        Element::Sd(e) => vec![content(&e.x)],
    }
}

fn content(v: &[Int]) -> Int {
    v.iter().fold(Int::zero(), |g, x| g.gcd(x))
}

/// Splits the ball prefix into conjugacy classes. Elements are first grouped
/// by their image in the quotient and, in the kernel, by an exact invariant;
/// each element is then compared with one representative per class already
/// found in its group.
pub fn conjugacy_partition(cfg: &GroupConfig, ball: &Ball, n_max: usize, caps: &SolverCaps) -> Result<Partition> {
    let mut buckets: BTreeMap<(Vec<i64>, Vec<Int>), Vec<usize>> = BTreeMap::new();
    for i in ball.prefix(n_max) {
        let (g, _) = ball.get_index(i).expect("prefix index");
        buckets.entry((g.quotient_image(), kernel_invariant(cfg, g))).or_default().push(i);
    }
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut first_unsettled: Option<usize> = None;
    for members in buckets.values() {
        let shortest = ball.get_index(members[0]).expect("member").1;
        let start = classes.len();
        for &i in members {
            let (x, len) = ball.get_index(i).expect("member");
            let mut home = None;
            for (c, class) in classes[start..].iter().enumerate() {
                let rep = ball.get_index(class[0]).expect("representative").0;
                let report = conjugate(cfg, rep, x, caps)?;
                if report.conjugate {
                    home = Some(start + c);
                    break;
                }
                if report.search_exhausted {
                    let size = len + shortest;
                    first_unsettled = Some(first_unsettled.map_or(size, |f| f.min(size)));
                }
            }
            match home {
                Some(c) => classes[c].push(i),
                None => classes.push(vec![i]),
            }
        }
    }
    Ok(Partition { classes, first_unsettled })
}

/// Empirical conjugacy length function of a group on its ball of radius
/// `n_max`: row `n` is the largest shortest-conjugator length over conjugate
/// pairs with `|u| + |v| ≤ n`.
///
/// Each unordered pair is examined once, searching from its shorter element
/// by meeting in the middle over a ball of radius `⌈conjugator_radius / 2⌉`.
/// Rows are certified only when every pair up to that size had its class
/// decided and a shortest conjugator found within that reach.
pub fn empirical_clf(cfg: &GroupConfig, opts: &ClfOptions) -> Result<ClfTable> {
    if opts.ball_radius < opts.n_max {
        return Err(Error::DomainError("ball radius must be at least n_max".into()));
    }
    let n_max = opts.n_max;
    let ball = bfs_ball(cfg, opts.ball_radius, opts.cap)?;
    let partition = conjugacy_partition(cfg, &ball, n_max, &opts.caps)?;
    let conj_ball = bfs_ball(cfg, opts.conjugator_radius.div_ceil(2), opts.cap)?;

    let mut per_sum = vec![Extremal::new(); n_max + 1];
    if let Some(s) = partition.first_unsettled {
        for e in per_sum.iter_mut().skip(s) {
            e.certified = false;
        }
    }
    let mut words: HashMap<usize, String> = HashMap::new();
    let mut word_of = |i: usize| -> String {
        words
            .entry(i)
            .or_insert_with(|| {
                let g = ball.get_index(i).expect("ball index").0;
                cfg.format_word(&ball.geodesic(cfg, g).expect("element of the ball"))
            })
            .clone()
    };

    for class in &partition.classes {
        for (pos, &vi) in class.iter().enumerate() {
            let (v, v_len) = ball.get_index(vi).expect("class member");
            if 2 * v_len > n_max {
                break;
            }
            // the pair (v, v) itself, with the identity
            let self_sum = 2 * v_len;
            let vw = word_of(vi);
            if per_sum[self_sum].beats(0, &vw, &vw) {
                per_sum[self_sum].offer(0, vw.clone(), vw.clone(), cfg.format_word(&Word::new()));
            }
            let others: Vec<usize> = class[pos + 1..]
                .iter()
                .copied()
                .filter(|&ui| ball.get_index(ui).expect("member").1 + v_len <= n_max)
                .collect();
            if others.is_empty() {
                continue;
            }
            let mut search = MeetInMiddle::new(cfg, v, &conj_ball);
            for &ui in &others {
                let (u, u_len) = ball.get_index(ui).expect("member");
                let sum = u_len + v_len;
                let Some((g, g_word)) = search.shortest(u) else {
                    per_sum[sum].certified = false;
                    continue;
                };
                assert_eq!(&cfg.conj(&g, v), u, "conjugator failed verification");
                let len = g_word.len() as u64;
                if len < per_sum[sum].value {
                    continue;
                }
                let uw = word_of(ui);
                let vw = word_of(vi);
                // orient the pair so the first word is the smaller
                let (first, second, conj_word) = if vw <= uw { (vw, uw, g_word) } else { (uw, vw, g_word.inverse()) };
                if per_sum[sum].beats(len, &first, &second) {
                    let gw = cfg.format_word(&conj_word);
                    per_sum[sum].offer(len, first, second, gw);
                }
            }
        }
    }
    Ok(fold_rows(&per_sum, TableKind::Clf))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radius_zero_is_single_zero_row() {
        let cfg = GroupConfig::bs(2).unwrap();
        let t = empirical_clf(&cfg, &ClfOptions::new(0)).unwrap();
        assert_eq!(t.rows.len(), 1);
        assert_eq!((t.rows[0].n, t.rows[0].clf), (0, 0));
        assert!(t.rows[0].certified);
        assert_eq!(t.rows[0].u_word, "e");
    }

    #[test]
    fn abelian_group_has_zero_clf() {
        let cfg = GroupConfig::free_abelian(2).unwrap();
        let t = empirical_clf(&cfg, &ClfOptions::new(5)).unwrap();
        assert!(t.rows.iter().all(|r| r.clf == 0 && r.certified));
    }

    #[test]
    fn bs_small_table() {
        let cfg = GroupConfig::bs(2).unwrap();
        let t = empirical_clf(&cfg, &ClfOptions::new(6)).unwrap();
        assert!(t.is_monotone() && t.all_certified());
        // (a, a^4) has total size 1 + |a^4| and shortest conjugator b^2
        let a4 = cfg.eval_str("a^4").unwrap();
        let ball = bfs_ball(&cfg, 6, DEFAULT_CAP).unwrap();
        let n = 1 + ball.word_length(&a4).unwrap();
        assert!(t.rows[n].clf >= 2);
        for r in &t.rows[1..] {
            if r.clf > 0 {
                let (u, v, g) = (cfg.eval_str(&r.u_word).unwrap(), cfg.eval_str(&r.v_word).unwrap(), cfg.eval_str(&r.conjugator_word).unwrap());
                assert_eq!(cfg.conj(&g, &u), v);
            }
        }
    }

    #[test]
    fn partition_is_consistent_with_brute_force() {
        let cfg = GroupConfig::bs(2).unwrap();
        let ball = bfs_ball(&cfg, 3, DEFAULT_CAP).unwrap();
        let big = bfs_ball(&cfg, 8, DEFAULT_CAP).unwrap();
        let part = conjugacy_partition(&cfg, &ball, 3, &SolverCaps::default()).unwrap();
        assert_eq!(part.first_unsettled, None);
        let mut class_of = HashMap::new();
        for (c, class) in part.classes.iter().enumerate() {
            for &i in class {
                class_of.insert(i, c);
            }
        }
        for i in ball.prefix(3) {
            for j in ball.prefix(3) {
                let (x, y) = (ball.get_index(i).unwrap().0, ball.get_index(j).unwrap().0);
                if crate::solvers::min_conjugator(&cfg, x, y, &big).is_some() {
                    assert_eq!(class_of[&i], class_of[&j]);
                }
            }
        }
    }
}
