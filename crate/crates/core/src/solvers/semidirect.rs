use num_traits::Zero;

use super::restricted::restricted_conj_semidirect;
use super::{for_each_l1_sphere, CaseTaken, ConjReport, SolverCaps};
use crate::error::{Error, Result};
use crate::groups::{Element, GroupConfig, SdElement};
use crate::linalg::{orbit_order, quotient, solve_integer, vec_sub, Int, IntMatrix, IntVector};

/// Decides conjugacy in `Z^d ⋊ Z^k`.
///
/// For `g = (a, b)` and `u = (x1, y)`, `g^{-1} u g = (φ(-b)(x1 + (φ(y) - Id) a), y)`,
/// so `(x2, y)` is reached iff `(Id - φ(y)) a = x1 - φ(b) x2`.
pub fn conj_semidirect(cfg: &GroupConfig, u: &SdElement, v: &SdElement, caps: &SolverCaps) -> Result<ConjReport> {
    if u.y != v.y {
        return Ok(ConjReport::no(CaseTaken::QuotientShift));
    }
    let report = if u.y.iter().all(|&c| c == 0) {
        match restricted_conj_semidirect(cfg, &u.x, &v.x, caps) {
            Ok(Some(b)) => ConjReport::yes(CaseTaken::Restricted, cfg.sd_element(vec![Int::zero(); cfg.dim()], b)),
            Ok(None) => ConjReport::no(CaseTaken::Restricted),
            Err(Error::SearchExhausted) => ConjReport::exhausted(CaseTaken::Restricted),
            Err(e) => return Err(e),
        }
    } else {
        same_quotient(cfg, u, v, caps)?
    };
    if let Some(g) = &report.witness {
        let (ue, ve) = (Element::Sd(u.clone()), Element::Sd(v.clone()));
        assert_eq!(cfg.conj(g, &ue), ve, "semidirect witness failed verification");
    }
    Ok(report)
}

fn same_quotient(cfg: &GroupConfig, u: &SdElement, v: &SdElement, caps: &SolverCaps) -> Result<ConjReport> {
    let d = cfg.dim();
    let k = cfg.acting_rank();
    let lattice = IntMatrix::identity(d).sub_mat(&cfg.phi_matrix(&u.y));
    let witness = |a: IntVector, b: &[i64]| cfg.sd_element(a, b.to_vec());

    if lattice.det().is_zero() {
        // No finite quotient: try b by increasing ℓ¹ norm up to the caps.
        let mut found = None;
        let mut visited = 0u64;
        for r in 0..=caps.max_search_radius {
            let stop = for_each_l1_sphere(k, r, &mut |b| {
                visited += 1;
                if visited > caps.max_candidates {
                    return true;
                }
                let rhs = vec_sub(&u.x, &cfg.phi_apply(b, &v.x));
                if let Some(sol) = solve_integer(&lattice, &rhs) {
                    found = Some(witness(sol.particular, b));
                    return true;
                }
                false
            });
            if stop {
                break;
            }
        }
        return Ok(match found {
            Some(g) => ConjReport::yes(CaseTaken::TwistedSameQuotient, g),
            None => ConjReport::exhausted(CaseTaken::TwistedSameQuotient),
        });
    }

    let q = quotient(&lattice)?;
    let target = q.project(&u.x);
    let start = q.project(&v.x);
    let mut orders = Vec::with_capacity(k);
    for g in cfg.phi_gens() {
        orders.push(orbit_order(g, &q, &start)? as i64);
    }
    // Representatives of Z^k modulo ⊕ m_i Z, centred and ordered by ℓ¹ norm
    // then lexicographically.
    let mut reps: Vec<Vec<i64>> = vec![Vec::new()];
    for &m in &orders {
        let lo = -((m - 1) / 2);
        let hi = m / 2;
        reps = reps
            .into_iter()
            .flat_map(|prefix| {
                (lo..=hi).map(move |c| {
                    let mut p = prefix.clone();
                    p.push(c);
                    p
                })
            })
            .collect();
    }
    reps.sort_by_key(|b| (b.iter().map(|c| c.abs()).sum::<i64>(), b.clone()));
    let inverse = lattice.inverse_rat()?;
    for b in reps {
        let moved = cfg.phi_apply(&b, &v.x);
        if q.project(&moved) == target {
            let rhs = vec_sub(&u.x, &moved);
            let a: Vec<_> = inverse
                .mul_vec(&crate::linalg::rat_vec(&rhs))
                .into_iter()
                .map(|x| {
                    assert!(x.is_integer(), "residue test guarantees an integral solution");
                    x.to_integer()
                })
                .collect();
            return Ok(ConjReport::yes(CaseTaken::TwistedSameQuotient, witness(a, &b)));
        }
    }
    Ok(ConjReport::no(CaseTaken::TwistedSameQuotient))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int_vec;

    fn sol() -> GroupConfig {
        GroupConfig::semidirect(&[vec![vec![2, 1], vec![1, 1]]]).unwrap()
    }

    fn sd(x: &[i64], y: &[i64]) -> SdElement {
        SdElement { x: int_vec(x), y: y.to_vec() }
    }

    #[test]
    fn equal_elements() {
        let cfg = sol();
        let u = sd(&[3, -1], &[2]);
        let r = conj_semidirect(&cfg, &u, &u, &SolverCaps::default()).unwrap();
        assert!(r.conjugate);
    }

    #[test]
    fn restricted_example() {
        let cfg = sol();
        let r = conj_semidirect(&cfg, &sd(&[1, 0], &[0]), &sd(&[5, 3], &[0]), &SolverCaps::default()).unwrap();
        assert!(r.conjugate);
        assert_eq!(r.case_taken, CaseTaken::Restricted);
        assert_eq!(r.witness, Some(cfg.sd_element(int_vec(&[0, 0]), vec![-2])));
    }

    #[test]
    fn unequal_quotients() {
        let cfg = sol();
        let r = conj_semidirect(&cfg, &sd(&[1, 0], &[1]), &sd(&[0, 1], &[2]), &SolverCaps::default()).unwrap();
        assert!(!r.conjugate && !r.search_exhausted);
        assert_eq!(r.case_taken, CaseTaken::QuotientShift);
    }

    #[test]
    fn same_quotient_constructed_instances() {
        let cfg = sol();
        let u = Element::Sd(sd(&[2, -3], &[2]));
        for g in [sd(&[1, 1], &[0]), sd(&[0, 0], &[3]), sd(&[-4, 7], &[-5]), sd(&[9, 2], &[1])] {
            let v = cfg.conj(&Element::Sd(g), &u);
            let r = conj_semidirect(&cfg, u.as_sd(), v.as_sd(), &SolverCaps::default()).unwrap();
            assert!(r.conjugate);
            assert_eq!(cfg.conj(r.witness.as_ref().unwrap(), &u), v);
        }
    }

    #[test]
    fn same_quotient_negative() {
        // y = 1 gives a trivial quotient, so everything with y = 1 is
        // conjugate; y = 2 gives order 5 with several classes.
        let cfg = sol();
        let u = sd(&[0, 0], &[2]);
        let v = sd(&[1, 0], &[2]);
        let r = conj_semidirect(&cfg, &u, &v, &SolverCaps::default()).unwrap();
        assert!(!r.conjugate && !r.search_exhausted);
    }

    #[test]
    fn abelian_group_needs_equality() {
        let cfg = GroupConfig::free_abelian(2).unwrap();
        let u = sd(&[1, 2], &[]);
        assert!(conj_semidirect(&cfg, &u, &u, &SolverCaps::default()).unwrap().conjugate);
        let r = conj_semidirect(&cfg, &u, &sd(&[2, 1], &[]), &SolverCaps::default()).unwrap();
        assert!(!r.conjugate && !r.search_exhausted);
    }
}
