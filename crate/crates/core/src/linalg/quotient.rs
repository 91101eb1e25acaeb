use num_integer::Integer;
use num_traits::{One, Zero};

use super::snf::snf;
use super::{Int, IntMatrix, IntVector};
use crate::error::{Error, Result};

/// A residue class of `Z^d / L` in invariant-factor coordinates, each
/// component reduced into `[0, d_i)`.
pub type Residue = Vec<Int>;

/// The finite quotient `Z^d / L` for a full-rank lattice `L`.
///
/// `L` is the column span of the basis matrix. Canonical coordinates come
/// from the Smith form `U B V = D`: `x` maps to `U x mod (d_1, ..., d_d)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinQuotient {
    pub invariant_factors: Vec<Int>,
    pub to_canonical: IntMatrix,
    from_canonical: IntMatrix,
    lattice_basis: IntMatrix,
}

pub fn quotient(lattice_basis: &IntMatrix) -> Result<FinQuotient> {
    let dim = lattice_basis.rows();
    let s = snf(lattice_basis);
    if s.rank() < dim {
        return Err(Error::SingularMatrix);
    }
    let invariant_factors = s.invariant_factors();
    let from_canonical = s.u_left.inverse_unimodular()?;
    Ok(FinQuotient {
        invariant_factors,
        to_canonical: s.u_left,
        from_canonical,
        lattice_basis: lattice_basis.clone(),
    })
}

impl FinQuotient {
    pub fn dim(&self) -> usize {
        self.invariant_factors.len()
    }

    /// Group order, the product of the invariant factors.
    pub fn order(&self) -> Int {
        self.invariant_factors.iter().product()
    }

    pub fn lattice_basis(&self) -> &IntMatrix {
        &self.lattice_basis
    }

    pub fn project(&self, x: &[Int]) -> Residue {
        self.reduce(self.to_canonical.mul_vec(x))
    }

    pub fn zero(&self) -> Residue {
        vec![Int::zero(); self.dim()]
    }

    /// A representative in `Z^d` of the residue.
    pub fn lift(&self, r: &[Int]) -> IntVector {
        self.from_canonical.mul_vec(r)
    }

    pub fn contains(&self, x: &[Int]) -> bool {
        self.project(x).iter().all(Zero::is_zero)
    }

    pub fn add(&self, a: &[Int], b: &[Int]) -> Residue {
        self.reduce(a.iter().zip(b).map(|(x, y)| x + y).collect())
    }

    fn reduce(&self, mut y: Vec<Int>) -> Residue {
        for (yi, d) in y.iter_mut().zip(&self.invariant_factors) {
            *yi = yi.mod_floor(d);
        }
        y
    }

    /// Matrix of the endomorphism induced by `t` on canonical coordinates.
    ///
    /// Fails with `LatticeNotInvariant` unless `t L ⊆ L`.
    pub fn induced_action(&self, t: &IntMatrix) -> Result<IntMatrix> {
        assert!(t.is_square() && t.rows() == self.dim(), "action dimension mismatch");
        for j in 0..self.lattice_basis.cols() {
            if !self.contains(&t.mul_vec(&self.lattice_basis.column(j))) {
                return Err(Error::LatticeNotInvariant);
            }
        }
        Ok(self.to_canonical.matmul(t).matmul(&self.from_canonical))
    }

    /// Whether `t` (assumed to preserve `L`) permutes `Z^d / L`.
    ///
    /// On a finite set, surjectivity suffices: `t Z^d + L = Z^d`.
    pub fn acts_bijectively(&self, t: &IntMatrix) -> bool {
        let s = snf(&t.hconcat(&self.lattice_basis));
        s.invariant_factors().iter().all(One::is_one)
    }

    pub fn apply(&self, action: &IntMatrix, r: &[Int]) -> Residue {
        self.reduce(action.mul_vec(r))
    }
}

/// Smallest `m >= 1` with `t^m x̄ = x̄` in the quotient.
pub fn orbit_order(t: &IntMatrix, q: &FinQuotient, x_bar: &[Int]) -> Result<u64> {
    let action = q.induced_action(t)?;
    if !q.acts_bijectively(t) {
        return Err(Error::NonInvertibleAction);
    }
    let start = q.reduce(x_bar.to_vec());
    let mut cur = q.apply(&action, &start);
    let mut m = 1u64;
    while cur != start {
        cur = q.apply(&action, &cur);
        m += 1;
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int_vec;

    #[test]
    fn scalar_two_lattice() {
        let q = quotient(&IntMatrix::from_i64(&[&[2, 0], &[0, 2]])).unwrap();
        assert_eq!(q.invariant_factors, int_vec(&[2, 2]));
        assert_eq!(q.order(), Int::from(4));
    }

    #[test]
    fn order_five_quotient() {
        // (Id - M^2) for M = [[2,1],[1,1]]
        let q = quotient(&IntMatrix::from_i64(&[&[-4, -3], &[-3, -1]])).unwrap();
        assert_eq!(q.order(), Int::from(5));
        for col in [int_vec(&[-4, -3]), int_vec(&[-3, -1]), int_vec(&[-7, -4])] {
            assert!(q.project(&col).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn rank_deficient_basis() {
        let res = quotient(&IntMatrix::from_i64(&[&[1, 2], &[2, 4]]));
        assert!(matches!(res, Err(Error::SingularMatrix)));
    }

    #[test]
    fn orbit_trivial_cases() {
        let m = IntMatrix::from_i64(&[&[2, 1], &[1, 1]]);
        let q = quotient(&IntMatrix::from_i64(&[&[-4, -3], &[-3, -1]])).unwrap();
        assert_eq!(orbit_order(&m, &q, &q.zero()).unwrap(), 1);
        let trivial = quotient(&IntMatrix::identity(2)).unwrap();
        let x = trivial.project(&int_vec(&[5, -7]));
        assert_eq!(orbit_order(&m, &trivial, &x).unwrap(), 1);
    }

    #[test]
    fn orbit_in_order_five_quotient() {
        // Oracle: M^j e1 - e1 ∈ L  <=>  (Id - M^2)^{-1} (M^j e1 - e1) integral.
        let m = IntMatrix::from_i64(&[&[2, 1], &[1, 1]]);
        let basis = IntMatrix::from_i64(&[&[-4, -3], &[-3, -1]]);
        let inv = basis.inverse_rat().unwrap();
        let e1 = int_vec(&[1, 0]);
        let mut expected = 0;
        for j in 1..=5u64 {
            let mj = m.pow_nonneg(j);
            let diff: Vec<Int> = mj.mul_vec(&e1).iter().zip(&e1).map(|(a, b)| a - b).collect();
            let sol = inv.mul_vec(&crate::linalg::rat_vec(&diff));
            if sol.iter().all(|x| x.is_integer()) {
                expected = j;
                break;
            }
        }
        assert_eq!(expected, 2);
        let q = quotient(&basis).unwrap();
        assert_eq!(orbit_order(&m, &q, &q.project(&e1)).unwrap(), expected);
    }

    #[test]
    fn non_invariant_lattice_rejected() {
        let q = quotient(&IntMatrix::from_i64(&[&[2, 0], &[0, 1]])).unwrap();
        let swap = IntMatrix::from_i64(&[&[0, 1], &[1, 0]]);
        let x = q.project(&int_vec(&[1, 0]));
        assert!(matches!(orbit_order(&swap, &q, &x), Err(Error::LatticeNotInvariant)));
    }

    #[test]
    fn non_invertible_action_rejected() {
        let q = quotient(&IntMatrix::from_i64(&[&[2]])).unwrap();
        let two = IntMatrix::from_i64(&[&[2]]);
        let x = q.project(&int_vec(&[1]));
        assert!(matches!(orbit_order(&two, &q, &x), Err(Error::NonInvertibleAction)));
    }
}
