use num_integer::Integer;
use num_traits::Zero;

use super::snf::snf;
use super::{Int, IntMatrix, IntVector};

/// One integer solution of `A x = b` together with a basis of `ker A` over Z.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerSolution {
    pub particular: IntVector,
    pub kernel_basis: Vec<IntVector>,
}

/// Solves `a * x = b` over the integers via the Smith normal form.
///
/// With `U A V = D`, the system becomes `D z = U b`, `x = V z`; it is solvable
/// iff each `d_i` divides `(U b)_i` and the rows beyond the rank vanish.
pub fn solve_integer(a: &IntMatrix, b: &[Int]) -> Option<IntegerSolution> {
    assert_eq!(a.rows(), b.len(), "dimension mismatch in solve_integer");
    let s = snf(a);
    let c = s.u_left.mul_vec(b);
    let rank = s.rank();
    let n = a.cols();

    let mut z = vec![Int::zero(); n];
    for i in 0..rank {
        let d = s.diag.get(i, i);
        let (q, r) = c[i].div_rem(d);
        if !r.is_zero() {
            return None;
        }
        z[i] = q;
    }
    if c[rank..].iter().any(|x| !x.is_zero()) {
        return None;
    }
    let particular = s.v_right.mul_vec(&z);
    let kernel_basis = (rank..n).map(|j| s.v_right.column(j)).collect();
    Some(IntegerSolution { particular, kernel_basis })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int_vec;

    #[test]
    fn identity_system() {
        let sol = solve_integer(&IntMatrix::identity(2), &int_vec(&[3, -1])).unwrap();
        assert_eq!(sol.particular, int_vec(&[3, -1]));
        assert!(sol.kernel_basis.is_empty());
    }

    #[test]
    fn parity_obstruction() {
        assert!(solve_integer(&IntMatrix::from_i64(&[&[2]]), &int_vec(&[3])).is_none());
    }

    #[test]
    fn underdetermined_row() {
        let a = IntMatrix::from_i64(&[&[1, 1]]);
        let sol = solve_integer(&a, &int_vec(&[2])).unwrap();
        assert_eq!(a.mul_vec(&sol.particular), int_vec(&[2]));
        assert_eq!(sol.kernel_basis.len(), 1);
        let k = &sol.kernel_basis[0];
        assert!(*k == int_vec(&[1, -1]) || *k == int_vec(&[-1, 1]));
        // particular (2, 0) lies in the solution coset
        let diff: Vec<Int> = sol.particular.iter().zip(int_vec(&[2, 0])).map(|(x, y)| x - y).collect();
        assert!(diff == int_vec(&[0, 0]) || diff[0] == -diff[1].clone());
    }

    #[test]
    fn inconsistent_overdetermined() {
        let a = IntMatrix::from_i64(&[&[1], &[1]]);
        assert!(solve_integer(&a, &int_vec(&[1, 2])).is_none());
        assert_eq!(solve_integer(&a, &int_vec(&[4, 4])).unwrap().particular, int_vec(&[4]));
    }

    #[test]
    fn zero_matrix_kernel_is_everything() {
        let sol = solve_integer(&IntMatrix::zeros(1, 3), &int_vec(&[0])).unwrap();
        assert_eq!(sol.kernel_basis.len(), 3);
        assert!(solve_integer(&IntMatrix::zeros(1, 3), &int_vec(&[1])).is_none());
    }
}
