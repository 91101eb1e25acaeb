//! Conjugacy decision procedures with explicit witnesses.
//!
//! A witness `g` for the pair `(u, v)` always satisfies `g^{-1} u g = v`, and
//! every witness is re-verified by group multiplication before it is
//! returned.

pub mod gamma;
pub mod minimal;
pub mod restricted;
pub mod semidirect;
pub mod stabilizer;
pub mod twisted;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::groups::{Element, GroupConfig};
use crate::metrics::Ball;

pub use gamma::{a_membership, conj_gamma_m};
pub use minimal::{min_conjugator, min_conjugators, MeetInMiddle};
pub use restricted::restricted_conj_semidirect;
pub use semidirect::conj_semidirect;
pub use stabilizer::{rho, stabilizer_lattice, StabilizerLattice};
pub use twisted::{twisted_conj_abelian, TwistedWitness};

/// Bounds on searches that have no a priori certified window.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolverCaps {
    /// Largest ℓ¹ radius for exponent searches.
    pub max_search_radius: u64,
    /// Largest number of candidates examined by one search.
    pub max_candidates: u64,
    /// Largest number of denominator levels tried in singular cases.
    pub max_levels: u64,
    /// Refuse Γ_M instances whose matrix is not expanding.
    pub require_expanding: bool,
}

impl Default for SolverCaps {
    fn default() -> Self {
        SolverCaps { max_search_radius: 64, max_candidates: 2_000_000, max_levels: 64, require_expanding: false }
    }
}

/// Which branch of the extension argument decided the instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CaseTaken {
    /// Both elements lie in the kernel.
    Restricted,
    /// Equal nonzero images in the quotient.
    TwistedSameQuotient,
    /// Different images in the quotient: never conjugate.
    QuotientShift,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjReport {
    pub conjugate: bool,
    pub witness: Option<Element>,
    /// Word length of the witness, when a ball certifies it.
    pub witness_length: Option<usize>,
    pub case_taken: CaseTaken,
    pub search_exhausted: bool,
}

impl ConjReport {
    pub(crate) fn yes(case_taken: CaseTaken, witness: Element) -> Self {
        ConjReport { conjugate: true, witness: Some(witness), witness_length: None, case_taken, search_exhausted: false }
    }

    pub(crate) fn no(case_taken: CaseTaken) -> Self {
        ConjReport { conjugate: false, witness: None, witness_length: None, case_taken, search_exhausted: false }
    }

    pub(crate) fn exhausted(case_taken: CaseTaken) -> Self {
        ConjReport { conjugate: false, witness: None, witness_length: None, case_taken, search_exhausted: true }
    }

    /// Whether the answer is a definite yes or no.
    pub fn decided(&self) -> bool {
        !self.search_exhausted
    }

    /// Fills `witness_length` from the ball when the witness lies inside it.
    pub fn certify_length(&mut self, ball: &Ball) {
        if let Some(w) = &self.witness {
            self.witness_length = ball.length(w);
        }
    }

    /// Replaces the witness with a shortest conjugator found in the ball.
    pub fn minimize_in(&mut self, cfg: &GroupConfig, u: &Element, v: &Element, ball: &Ball) {
        if !self.conjugate {
            return;
        }
        if let Some((g, len)) = min_conjugator(cfg, u, v, ball) {
            self.witness = Some(g);
            self.witness_length = Some(len);
        } else {
            self.certify_length(ball);
        }
    }

    /// JSON object `{conjugate, witness, witness_length, case_taken,
    /// search_exhausted}` with the witness spelled as a word.
    pub fn to_json(&self, cfg: &GroupConfig, ball: Option<&Ball>) -> serde_json::Value {
        let witness = self.witness.as_ref().map(|g| {
            let word = ball
                .and_then(|b| b.geodesic(cfg, g).ok())
                .unwrap_or_else(|| cfg.normal_form_word(g));
            cfg.format_word(&word)
        });
        serde_json::json!({
            "conjugate": self.conjugate,
            "witness": witness,
            "witness_length": self.witness_length,
            "case_taken": self.case_taken,
            "search_exhausted": self.search_exhausted,
        })
    }
}

/// Decides whether `u` and `v` are conjugate, dispatching on the family.
pub fn conjugate(cfg: &GroupConfig, u: &Element, v: &Element, caps: &SolverCaps) -> Result<ConjReport> {
    if cfg.is_semidirect() {
        conj_semidirect(cfg, u.as_sd(), v.as_sd(), caps)
    } else {
        conj_gamma_m(cfg, u.as_gm(), v.as_gm(), caps)
    }
}

/// Calls `f` on each vector of `Z^k` with ℓ¹ norm exactly `r`, in
/// lexicographic order; stops early and returns `true` once `f` does.
pub fn for_each_l1_sphere(k: usize, r: u64, f: &mut dyn FnMut(&[i64]) -> bool) -> bool {
    fn rec(v: &mut Vec<i64>, k: usize, budget: i64, f: &mut dyn FnMut(&[i64]) -> bool) -> bool {
        if v.len() + 1 == k {
            for c in if budget == 0 { vec![0] } else { vec![-budget, budget] } {
                v.push(c);
                let stop = f(v);
                v.pop();
                if stop {
                    return true;
                }
            }
            return false;
        }
        for c in -budget..=budget {
            v.push(c);
            let stop = rec(v, k, budget - c.abs(), f);
            v.pop();
            if stop {
                return true;
            }
        }
        false
    }
    if k == 0 {
        return r == 0 && f(&[]);
    }
    rec(&mut Vec::with_capacity(k), k, r as i64, f)
}
