use std::collections::HashMap;

use crate::groups::{Element, GroupConfig, Word};
use crate::metrics::Ball;

/// A shortest `g` in the ball with `g^{-1} u g = v`, with its length.
///
/// The ball is scanned in breadth-first order, so the first hit is a
/// geodesic conjugator; ties are broken by traversal order.
pub fn min_conjugator(cfg: &GroupConfig, u: &Element, v: &Element, ball: &Ball) -> Option<(Element, usize)> {
    ball.iter().find(|(g, _)| cfg.mul(u, g) == cfg.mul(g, v)).map(|(g, n)| (g.clone(), n))
}

/// Shortest conjugators from `u` to each of `targets` in one pass over the
/// ball. Stops as soon as every target has been reached.
pub fn min_conjugators(cfg: &GroupConfig, u: &Element, targets: &[Element], ball: &Ball) -> Vec<Option<(Element, usize)>> {
    let mut pending: HashMap<&Element, Vec<usize>> = HashMap::new();
    for (i, t) in targets.iter().enumerate() {
        pending.entry(t).or_default().push(i);
    }
    let mut out = vec![None; targets.len()];
    for (g, n) in ball.iter() {
        if pending.is_empty() {
            break;
        }
        let image = cfg.conj(g, u);
        if let Some(slots) = pending.remove(&image) {
            for i in slots {
                out[i] = Some((g.clone(), n));
            }
        }
    }
    out
}

/// Shortest conjugators from a fixed `u` by meeting in the middle.
///
/// If `g = h k` is a geodesic conjugator then `h^{-1} u h = k v k^{-1}`. The
/// images `h^{-1} u h` are tabulated for `h` out to some depth `D`; a target
/// `v` then walks `k` outward. A geodesic of length `L` splits with
/// `|h| ≤ D` and `|k| = max(0, L - D)`, so once a conjugator of length `T`
/// is known the walk can stop at `|k| = T - D - 1`. The table deepens only as
/// far as the targets require, up to the ball radius `R`. Every conjugator of
/// length at most `2R` is found, so answers are exact and `None` certifies
/// that all conjugators are longer than `2R`.
pub struct MeetInMiddle<'a> {
    cfg: &'a GroupConfig,
    ball: &'a Ball,
    u: Element,
    images: HashMap<Element, usize>,
    depth: usize,
}

/// Radius of the cheap first walk before the table is deepened.
const SHORT_WALK: usize = 2;

impl<'a> MeetInMiddle<'a> {
    pub fn new(cfg: &'a GroupConfig, u: &Element, ball: &'a Ball) -> Self {
        let mut s = MeetInMiddle { cfg, ball, u: u.clone(), images: HashMap::new(), depth: 0 };
        s.images.insert(u.clone(), 0);
        s
    }

    /// Longest conjugator length this search certifies.
    pub fn reach(&self) -> usize {
        2 * self.ball.radius()
    }

    fn deepen(&mut self) {
        self.depth += 1;
        let level = self.ball.prefix(self.depth - 1).end..self.ball.prefix(self.depth).end;
        for i in level {
            let h = self.ball.get_index(i).expect("level index").0;
            self.images.entry(self.cfg.conj(h, &self.u)).or_insert(i);
        }
    }

    /// Walks `k` out to `walk`; returns the best split and whether it is
    /// known to be optimal.
    fn walk(&self, v: &Element, walk: usize) -> (Option<(usize, usize, usize)>, bool) {
        let mut best: Option<(usize, usize, usize)> = None;
        for ki in self.ball.prefix(walk) {
            let (k, k_len) = self.ball.get_index(ki).expect("walk index");
            if best.is_some_and(|(total, _, _)| k_len + self.depth >= total) {
                return (best, true);
            }
            let z = self.cfg.conj(&self.cfg.inv(k), v);
            if let Some(&hi) = self.images.get(&z) {
                let total = self.ball.get_index(hi).expect("image index").1 + k_len;
                if best.is_none_or(|(t, _, _)| total < t) {
                    best = Some((total, hi, ki));
                }
            }
        }
        let settled = match best {
            Some((total, _, _)) => total <= self.depth + walk + 1,
            None => false,
        };
        (best, settled)
    }

    /// A shortest conjugator `g` with `g^{-1} u g = v` and a geodesic word for
    /// it.
    pub fn shortest(&mut self, v: &Element) -> Option<(Element, Word)> {
        let radius = self.ball.radius();
        let (_, hi, ki) = loop {
            let full = self.depth >= radius;
            let walk = if full { radius } else { SHORT_WALK.min(radius) };
            match self.walk(v, walk) {
                (Some(best), true) => break best,
                (best, _) if full => break best?,
                _ => self.deepen(),
            }
        };
        let h = self.ball.get_index(hi).expect("index").0;
        let k = self.ball.get_index(ki).expect("index").0;
        let mut word = self.ball.geodesic(self.cfg, h).expect("ball element");
        word.letters.extend(self.ball.geodesic(self.cfg, k).expect("ball element").letters);
        Some((self.cfg.mul(h, k), word))
    }
}
