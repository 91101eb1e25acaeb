use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::snf::{add_row_multiple, negate_row};
use super::IntMatrix;

/// Row-style Hermite normal form of the lattice spanned by the rows of `gens`.
///
/// The result is in echelon form with positive pivots, entries above each
/// pivot reduced into `[0, pivot)`, and zero rows removed.
pub fn hermite_rows(gens: &IntMatrix) -> IntMatrix {
    let mut h = gens.clone();
    let (m, n) = (h.rows(), h.cols());
    let mut cur = 0;
    for col in 0..n {
        if cur == m {
            break;
        }
        // gcd-reduce the column onto row `cur`
        loop {
            let pivot = (cur..m)
                .filter(|&i| !h.get(i, col).is_zero())
                .min_by(|&a, &b| h.get(a, col).abs().cmp(&h.get(b, col).abs()));
            let Some(p) = pivot else { break };
            h.swap_rows(cur, p);
            let mut done = true;
            for i in cur + 1..m {
                if h.get(i, col).is_zero() {
                    continue;
                }
                let q = h.get(i, col).div_floor(h.get(cur, col));
                add_row_multiple(&mut h, i, cur, &-q);
                done &= h.get(i, col).is_zero();
            }
            if done {
                break;
            }
        }
        if h.get(cur, col).is_zero() {
            continue;
        }
        if h.get(cur, col).is_negative() {
            negate_row(&mut h, cur);
        }
        let p = h.get(cur, col).clone();
        for i in 0..cur {
            let q = h.get(i, col).div_floor(&p);
            add_row_multiple(&mut h, i, cur, &-q);
        }
        cur += 1;
    }
    let rows: Vec<_> = (0..cur).map(|i| h.row(i).to_vec()).collect();
    if rows.is_empty() {
        IntMatrix::zeros(0, n)
    } else {
        IntMatrix::from_rows(&rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Int;

    #[test]
    fn reduces_to_echelon() {
        let h = hermite_rows(&IntMatrix::from_i64(&[&[2, 0], &[0, 3], &[4, 6]]));
        assert_eq!(h, IntMatrix::from_i64(&[&[2, 0], &[0, 3]]));
        let h = hermite_rows(&IntMatrix::from_i64(&[&[3], &[5]]));
        assert_eq!(h, IntMatrix::from_i64(&[&[1]]));
        let h = hermite_rows(&IntMatrix::from_i64(&[&[1, 1], &[0, 2]]));
        assert_eq!(h, IntMatrix::from_i64(&[&[1, 1], &[0, 2]]));
        let h = hermite_rows(&IntMatrix::from_i64(&[&[-1, 3], &[0, 2]]));
        assert_eq!(h, IntMatrix::from_i64(&[&[1, 1], &[0, 2]]));
    }

    #[test]
    fn zero_generators() {
        let h = hermite_rows(&IntMatrix::zeros(2, 3));
        assert_eq!(h.rows(), 0);
        assert_eq!(h.cols(), 3);
        let _ = Int::zero();
    }
}
