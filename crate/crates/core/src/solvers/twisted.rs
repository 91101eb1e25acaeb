use num_traits::{Signed, Zero};

use crate::linalg::{l1_norm, solve_integer, vec_add, vec_sub, Int, IntMatrix, IntVector};

/// A solution `gamma` of `u + φ(γ) = γ + v`, with the kernel of `Id - φ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedWitness {
    pub gamma: IntVector,
    pub kernel_basis: Vec<IntVector>,
}

/// Decides twisted conjugacy `u ~_φ v` in `Z^d` by solving
/// `(Id - φ) γ = u - v` over the integers.
pub fn twisted_conj_abelian(u: &[Int], v: &[Int], phi: &IntMatrix) -> Option<TwistedWitness> {
    let d = phi.rows();
    assert!(phi.is_square() && u.len() == d && v.len() == d, "dimension mismatch");
    let lhs = IntMatrix::identity(d).sub_mat(phi);
    let sol = solve_integer(&lhs, &vec_sub(u, v))?;
    Some(TwistedWitness { gamma: sol.particular, kernel_basis: sol.kernel_basis })
}

impl TwistedWitness {
    /// An element of smallest ℓ¹ norm in `gamma + span_Z(kernel_basis)`.
    ///
    /// Greedy descent along the kernel generators, then an exhaustive sweep
    /// of coefficient offsets in `[-sweep, sweep]`. Exact when the kernel is
    /// trivial; otherwise minimal within the swept neighbourhood.
    pub fn minimize_l1(&self, sweep: i64) -> IntVector {
        if self.kernel_basis.is_empty() {
            return self.gamma.clone();
        }
        let mut best = self.gamma.clone();
        let mut best_norm = l1_norm(&best);
        loop {
            let mut improved = false;
            for k in &self.kernel_basis {
                for sign in [1i64, -1] {
                    loop {
                        let step: IntVector = k.iter().map(|x| x * sign).collect();
                        let cand = vec_add(&best, &step);
                        let n = l1_norm(&cand);
                        if n < best_norm {
                            best = cand;
                            best_norm = n;
                            improved = true;
                        } else {
                            break;
                        }
                    }
                }
            }
            if !improved {
                break;
            }
        }
        let r = self.kernel_basis.len();
        let mut coeffs = vec![-sweep; r];
        let base = best.clone();
        loop {
            let mut cand = base.clone();
            for (c, k) in coeffs.iter().zip(&self.kernel_basis) {
                if *c != 0 {
                    let scaled: IntVector = k.iter().map(|x| x * *c).collect();
                    cand = vec_add(&cand, &scaled);
                }
            }
            let n = l1_norm(&cand);
            if n < best_norm || (n == best_norm && cand < best) {
                best = cand;
                best_norm = n;
            }
            let mut i = 0;
            while i < r {
                coeffs[i] += 1;
                if coeffs[i] <= sweep {
                    break;
                }
                coeffs[i] = -sweep;
                i += 1;
            }
            if i == r {
                break;
            }
        }
        best
    }
}

/// Whether `1` is an eigenvalue of `φ`, i.e. `det(Id - φ) = 0`.
pub fn has_unit_eigenvalue(phi: &IntMatrix) -> bool {
    IntMatrix::identity(phi.rows()).sub_mat(phi).det().is_zero()
}

/// Whether `gamma` solves `u + φ(γ) = γ + v`.
pub fn verify_twisted(u: &[Int], v: &[Int], phi: &IntMatrix, gamma: &[Int]) -> bool {
    vec_add(u, &phi.mul_vec(gamma)) == vec_add(gamma, v)
}

/// `|det(Id - φ)|`: the index of `(Id - φ) Z^d`, or 0 when it is infinite.
pub fn twisted_index(phi: &IntMatrix) -> Int {
    IntMatrix::identity(phi.rows()).sub_mat(phi).det().abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int_vec;

    #[test]
    fn equal_vectors_admit_zero() {
        let phi = IntMatrix::from_i64(&[&[2, 1], &[1, 1]]);
        let w = twisted_conj_abelian(&int_vec(&[3, 4]), &int_vec(&[3, 4]), &phi).unwrap();
        assert_eq!(w.gamma, int_vec(&[0, 0]));
    }

    #[test]
    fn scalar_example() {
        let phi = IntMatrix::from_i64(&[&[2]]);
        let w = twisted_conj_abelian(&int_vec(&[5]), &int_vec(&[2]), &phi).unwrap();
        assert_eq!(w.gamma, int_vec(&[-3]));
        assert!(verify_twisted(&int_vec(&[5]), &int_vec(&[2]), &phi, &w.gamma));
    }

    #[test]
    fn cat_map_example() {
        let phi = IntMatrix::from_i64(&[&[2, 1], &[1, 1]]);
        let w = twisted_conj_abelian(&int_vec(&[1, 0]), &int_vec(&[0, 0]), &phi).unwrap();
        assert_eq!(w.gamma, int_vec(&[0, -1]));
    }

    #[test]
    fn identity_twist_is_plain_equality() {
        let phi = IntMatrix::identity(2);
        assert!(twisted_conj_abelian(&int_vec(&[1, 0]), &int_vec(&[0, 0]), &phi).is_none());
        let w = twisted_conj_abelian(&int_vec(&[1, 2]), &int_vec(&[1, 2]), &phi).unwrap();
        assert_eq!(w.kernel_basis.len(), 2);
        assert_eq!(w.minimize_l1(2), int_vec(&[0, 0]));
        assert!(has_unit_eigenvalue(&phi));
    }

    #[test]
    fn minimization_over_kernel() {
        // φ = [[1,1],[0,1]]: (Id - φ) γ = (-γ2, 0), kernel spanned by e1.
        let phi = IntMatrix::from_i64(&[&[1, 1], &[0, 1]]);
        let u = int_vec(&[3, 5]);
        let v = int_vec(&[0, 5]);
        let w = twisted_conj_abelian(&u, &v, &phi).unwrap();
        let best = w.minimize_l1(3);
        assert!(verify_twisted(&u, &v, &phi, &best));
        assert_eq!(best, int_vec(&[0, -3]));
    }
}
