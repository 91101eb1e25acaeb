use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::{Int, IntMatrix};

/// Smith normal form certificate: `u_left * A * v_right = diag`.
///
/// `u_left` and `v_right` are unimodular; `diag` carries the invariant
/// factors `d_1 | d_2 | ...` on its main diagonal, nonnegative, zeros last.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfDecomposition {
    pub u_left: IntMatrix,
    pub diag: IntMatrix,
    pub v_right: IntMatrix,
}

impl SnfDecomposition {
    /// Diagonal entries `d_1, ..., d_min(rows, cols)`.
    pub fn invariant_factors(&self) -> Vec<Int> {
        let n = self.diag.rows().min(self.diag.cols());
        (0..n).map(|i| self.diag.get(i, i).clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().iter().take_while(|d| !d.is_zero()).count()
    }
}

/// Smith normal form with minimal-absolute-value pivoting.
pub fn snf(a: &IntMatrix) -> SnfDecomposition {
    let (m, n) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);

    for t in 0..m.min(n) {
        loop {
            let Some((pi, pj)) = min_abs_pivot(&d, t) else {
                return SnfDecomposition { u_left: u, diag: d, v_right: v };
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..m {
                if d.get(i, t).is_zero() {
                    continue;
                }
                let q = d.get(i, t).div_floor(d.get(t, t));
                add_row_multiple(&mut d, i, t, &-&q);
                add_row_multiple(&mut u, i, t, &-&q);
                clean &= d.get(i, t).is_zero();
            }
            for j in t + 1..n {
                if d.get(t, j).is_zero() {
                    continue;
                }
                let q = d.get(t, j).div_floor(d.get(t, t));
                add_col_multiple(&mut d, j, t, &-&q);
                add_col_multiple(&mut v, j, t, &-&q);
                clean &= d.get(t, j).is_zero();
            }
            if !clean {
                continue;
            }

            // pivot must divide the whole trailing block
            let p = d.get(t, t).clone();
            let offender = (t + 1..m).find(|&i| (t + 1..n).any(|j| !d.get(i, j).is_multiple_of(&p)));
            match offender {
                Some(i) => {
                    add_row_multiple(&mut d, t, i, &Int::from(1));
                    add_row_multiple(&mut u, t, i, &Int::from(1));
                }
                None => break,
            }
        }
        if d.get(t, t).is_negative() {
            negate_row(&mut d, t);
            negate_row(&mut u, t);
        }
    }
    SnfDecomposition { u_left: u, diag: d, v_right: v }
}

fn min_abs_pivot(d: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..d.rows() {
        for j in t..d.cols() {
            let x = d.get(i, j);
            if x.is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if d.get(bi, bj).abs() <= x.abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

/// row[target] += factor * row[source]
pub(crate) fn add_row_multiple(m: &mut IntMatrix, target: usize, source: usize, factor: &Int) {
    if factor.is_zero() {
        return;
    }
    for j in 0..m.cols() {
        let s = m.get(source, j);
        if s.is_zero() {
            continue;
        }
        let delta = factor * s;
        *m.get_mut(target, j) += delta;
    }
}

/// col[target] += factor * col[source]
fn add_col_multiple(m: &mut IntMatrix, target: usize, source: usize, factor: &Int) {
    if factor.is_zero() {
        return;
    }
    for i in 0..m.rows() {
        let s = m.get(i, source);
        if s.is_zero() {
            continue;
        }
        let delta = factor * s;
        *m.get_mut(i, target) += delta;
    }
}

pub(crate) fn negate_row(m: &mut IntMatrix, i: usize) {
    for j in 0..m.cols() {
        let x = -m.get(i, j).clone();
        *m.get_mut(i, j) = x;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(a: &IntMatrix) -> SnfDecomposition {
        let s = snf(a);
        assert_eq!(s.u_left.matmul(a).matmul(&s.v_right), s.diag);
        assert!(s.u_left.is_unimodular());
        assert!(s.v_right.is_unimodular());
        assert!(s.diag.is_diagonal());
        let f = s.invariant_factors();
        for w in f.windows(2) {
            assert!(!w[0].is_negative());
            if w[0].is_zero() {
                assert!(w[1].is_zero(), "zeros must come last");
            } else {
                assert!(w[1].is_multiple_of(&w[0]));
            }
        }
        s
    }

    #[test]
    fn identity_is_fixed() {
        let s = check(&IntMatrix::identity(2));
        assert!(s.diag.is_identity());
        assert!(s.u_left.is_identity());
        assert!(s.v_right.is_identity());
    }

    #[test]
    fn two_by_two_example() {
        let s = check(&IntMatrix::from_i64(&[&[2, 4], &[6, 8]]));
        assert_eq!(s.diag, IntMatrix::from_i64(&[&[2, 0], &[0, 4]]));
    }

    #[test]
    fn zero_matrix() {
        let s = check(&IntMatrix::zeros(2, 2));
        assert!(s.diag.is_zero());
    }

    #[test]
    fn rectangular_and_rank_deficient() {
        let s = check(&IntMatrix::from_i64(&[&[1, 1]]));
        assert_eq!(s.invariant_factors(), vec![Int::from(1)]);
        let s = check(&IntMatrix::from_i64(&[&[2, 4, 6], &[4, 8, 12]]));
        assert_eq!(s.rank(), 1);
        assert_eq!(s.invariant_factors()[0], Int::from(2));
        let s = check(&IntMatrix::from_i64(&[&[6, 0], &[0, 4], &[0, 0]]));
        assert_eq!(s.invariant_factors(), vec![Int::from(2), Int::from(12)]);
    }

    #[test]
    fn divisibility_fix_up() {
        // diag(2, 3) is not in Smith form; the result must be diag(1, 6)
        let s = check(&IntMatrix::from_i64(&[&[2, 0], &[0, 3]]));
        assert_eq!(s.invariant_factors(), vec![Int::from(1), Int::from(6)]);
    }
}
