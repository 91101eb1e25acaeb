use std::collections::{HashSet, VecDeque};

use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::groups::GroupConfig;
use crate::linalg::{hermite_rows, orbit_order, quotient, solve_integer, Int, IntMatrix, Rat};

/// `Λ = {b ∈ Z^k : φ(b) ū = ū in Z^d / (Id - φ(y)) Z^d}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerLattice {
    /// Rows form a Hermite basis of `Λ`.
    pub basis: IntMatrix,
    /// `[Z^k : Λ]`.
    pub index: Int,
    /// Orbit order of `ū` under each generator; `m_i e_i ∈ Λ`.
    pub orbit_orders: Vec<u64>,
    /// `|det(Id - φ(y))|`, the order of `Z^d / L`.
    pub quotient_order: Int,
}

impl StabilizerLattice {
    pub fn contains(&self, b: &[i64]) -> bool {
        let target: Vec<Int> = b.iter().map(|&x| Int::from(x)).collect();
        solve_integer(&self.basis.transpose(), &target).is_some()
    }

    /// Canonical representative of `b` modulo `Λ`, reduced against the
    /// Hermite rows.
    pub fn reduce(&self, b: &[i64]) -> Vec<Int> {
        let mut v: Vec<Int> = b.iter().map(|&x| Int::from(x)).collect();
        for i in 0..self.basis.rows() {
            let row = self.basis.row(i);
            let Some(pivot) = row.iter().position(|x| !x.is_zero()) else { continue };
            let q = v[pivot].div_floor(&row[pivot]);
            if !q.is_zero() {
                for (vj, rj) in v.iter_mut().zip(row) {
                    *vj -= &q * rj;
                }
            }
        }
        v
    }
}

/// Computes `Λ` by enumerating the box `∏ [0, m_i)`, which contains a full
/// set of representatives of `Z^k` modulo `⊕ m_i Z ⊆ Λ`.
pub fn stabilizer_lattice(cfg: &GroupConfig, u: &[Int], y: &[i64]) -> Result<StabilizerLattice> {
    assert!(cfg.is_semidirect(), "stabilizer lattices are defined for semidirect products");
    let k = cfg.acting_rank();
    let d = cfg.dim();
    let lattice = IntMatrix::identity(d).sub_mat(&cfg.phi_matrix(y));
    let det = lattice.det();
    if det.is_zero() {
        return Err(Error::SingularMatrix);
    }
    let q = quotient(&lattice)?;
    let u_bar = q.project(u);
    let mut orbit_orders = Vec::with_capacity(k);
    for g in cfg.phi_gens() {
        orbit_orders.push(orbit_order(g, &q, &u_bar)?);
    }
    let actions: Vec<IntMatrix> = cfg.phi_gens().iter().map(|g| q.induced_action(g)).collect::<Result<_>>()?;

    let mut basis = IntMatrix::diagonal(&orbit_orders.iter().map(|&m| Int::from(m)).collect::<Vec<_>>());
    if k > 0 {
        let mut b = vec![0u64; k];
        'outer: loop {
            if b.iter().any(|&x| x != 0) {
                let mut r = u_bar.clone();
                for (i, &e) in b.iter().enumerate() {
                    for _ in 0..e {
                        r = q.apply(&actions[i], &r);
                    }
                }
                if r == u_bar {
                    let v: Vec<Int> = b.iter().map(|&x| Int::from(x)).collect();
                    if solve_integer(&basis.transpose(), &v).is_none() {
                        let mut rows = basis.to_rows();
                        rows.push(v);
                        basis = hermite_rows(&IntMatrix::from_rows(&rows));
                    }
                }
            }
            let mut i = 0;
            loop {
                if i == k {
                    break 'outer;
                }
                b[i] += 1;
                if b[i] < orbit_orders[i] {
                    break;
                }
                b[i] = 0;
                i += 1;
            }
        }
    }
    let basis = hermite_rows(&basis);
    let index = if k == 0 { Int::from(1) } else { basis.det().abs() };
    Ok(StabilizerLattice { basis, index, orbit_orders, quotient_order: det.abs() })
}

/// ℓ¹ covering radius of `Λ` in `Z^k`: the largest, over cosets of `Λ`, of the
/// smallest ℓ¹ norm of a coset member. Breadth-first search on the grid,
/// visiting each coset once.
pub fn rho(cfg: &GroupConfig, u: &[Int], y: &[i64]) -> Result<Rat> {
    let lattice = stabilizer_lattice(cfg, u, y)?;
    Ok(Rat::from_integer(Int::from(covering_radius_l1(&lattice))))
}

pub fn covering_radius_l1(lattice: &StabilizerLattice) -> u64 {
    let k = lattice.basis.cols();
    let start = vec![0i64; k];
    let mut seen: HashSet<Vec<Int>> = HashSet::new();
    seen.insert(lattice.reduce(&start));
    let mut queue = VecDeque::from([(start, 0u64)]);
    let mut radius = 0;
    while let Some((v, dist)) = queue.pop_front() {
        radius = radius.max(dist);
        for i in 0..k {
            for step in [1i64, -1] {
                let mut w = v.clone();
                w[i] += step;
                if seen.insert(lattice.reduce(&w)) {
                    queue.push_back((w, dist + 1));
                }
            }
        }
    }
    radius
}
