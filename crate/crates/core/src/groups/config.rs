use std::borrow::Cow;
use std::path::Path;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::spectral::{common_eigenbasis, spectral_of_action, spectral_of_matrix, EigenBasis, Spectral};
use crate::error::{Error, Result};
use crate::linalg::{Int, IntMatrix, IntVector};

/// Matrix powers up to this exponent are precomputed at load time.
const POWER_TABLE: usize = 48;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Bs,
    GammaM,
    Semidirect,
}

/// The on-disk JSON form of a group configuration.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigDoc {
    pub family: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix_m: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi_gens: Option<Vec<Vec<Vec<i64>>>>,
    /// Rank of the kernel for a semidirect product with no acting generators.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
}

#[derive(Clone, Debug)]
struct PowerTable {
    pos: Vec<IntMatrix>,
    neg: Vec<IntMatrix>,
}

impl PowerTable {
    fn new(base: &IntMatrix, inverse: Option<&IntMatrix>) -> Self {
        let build = |m: &IntMatrix| {
            let mut out = Vec::with_capacity(POWER_TABLE + 1);
            out.push(IntMatrix::identity(m.rows()));
            for i in 0..POWER_TABLE {
                out.push(out[i].matmul(m));
            }
            out
        };
        PowerTable { pos: build(base), neg: inverse.map(build).unwrap_or_default() }
    }
}

/// A validated group: BS(1,m), Γ_M, or `Z^d ⋊ Z^k`.
///
/// Read-only after construction. Holds precomputed matrix powers so the
/// element arithmetic never recomputes small powers.
#[derive(Clone, Debug)]
pub struct GroupConfig {
    family: Family,
    m: Option<Int>,
    matrix_m: Option<IntMatrix>,
    phi_gens: Vec<IntMatrix>,
    generator_names: Vec<String>,
    aliases: Vec<(String, usize)>,
    spectral: Spectral,
    dim: usize,
    doc: ConfigDoc,
    m_det: Int,
    m_adj: Option<IntMatrix>,
    tables: Vec<PowerTable>,
    eigen: Option<EigenBasis>,
}

impl GroupConfig {
    pub fn bs(m: i64) -> Result<Self> {
        Self::from_doc(ConfigDoc { family: "bs".into(), m: Some(m), ..Default::default() })
    }

    pub fn gamma_m(matrix: &[Vec<i64>]) -> Result<Self> {
        Self::from_doc(ConfigDoc { family: "gamma_m".into(), matrix_m: Some(matrix.to_vec()), ..Default::default() })
    }

    pub fn semidirect(phi_gens: &[Vec<Vec<i64>>]) -> Result<Self> {
        Self::from_doc(ConfigDoc { family: "semidirect".into(), phi_gens: Some(phi_gens.to_vec()), ..Default::default() })
    }

    /// `Z^dim` with no acting generators.
    pub fn free_abelian(dim: usize) -> Result<Self> {
        Self::from_doc(ConfigDoc {
            family: "semidirect".into(),
            phi_gens: Some(Vec::new()),
            dim: Some(dim),
            ..Default::default()
        })
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let doc: ConfigDoc = serde_json::from_str(s)?;
        Self::from_doc(doc)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.doc).expect("config document serializes")
    }

    pub fn doc(&self) -> &ConfigDoc {
        &self.doc
    }

    pub fn from_doc(doc: ConfigDoc) -> Result<Self> {
        let invalid = |msg: &str| Error::InvalidConfig(msg.to_string());
        match doc.family.as_str() {
            "bs" => {
                let m = doc.m.ok_or_else(|| invalid("bs requires field m"))?;
                if m < 2 {
                    return Err(invalid("bs requires m >= 2"));
                }
                let matrix = IntMatrix::from_i64(&[&[m]]);
                let mut cfg = Self::abelian_by_cyclic(Family::Bs, matrix, doc.clone())?;
                cfg.m = Some(Int::from(m));
                cfg.generator_names = vec!["a".into(), "b".into()];
                cfg.aliases = vec![("a1".into(), 0), ("t".into(), 1)];
                Ok(cfg)
            }
            "gamma_m" => {
                let rows = doc.matrix_m.as_ref().ok_or_else(|| invalid("gamma_m requires field matrix_m"))?;
                let matrix = square_matrix(rows).ok_or_else(|| invalid("matrix_m must be a non-empty square matrix"))?;
                Self::abelian_by_cyclic(Family::GammaM, matrix, doc.clone())
            }
            "semidirect" => {
                let gens_raw = doc.phi_gens.as_ref().ok_or_else(|| invalid("semidirect requires field phi_gens"))?;
                let mut gens = Vec::with_capacity(gens_raw.len());
                for g in gens_raw {
                    gens.push(square_matrix(g).ok_or_else(|| invalid("each phi generator must be a square matrix"))?);
                }
                let dim = match (gens.first(), doc.dim) {
                    (Some(g), Some(d)) if g.rows() != d => return Err(invalid("dim disagrees with phi_gens")),
                    (Some(g), _) => g.rows(),
                    (None, Some(d)) => d,
                    (None, None) => return Err(invalid("semidirect with no phi_gens requires field dim")),
                };
                if dim == 0 {
                    return Err(invalid("dimension must be positive"));
                }
                for g in &gens {
                    if g.rows() != dim {
                        return Err(invalid("phi generators must share one dimension"));
                    }
                    if !g.is_unimodular() {
                        return Err(invalid("each phi generator must have determinant +1 or -1"));
                    }
                }
                for (i, a) in gens.iter().enumerate() {
                    for b in &gens[i + 1..] {
                        if a.matmul(b) != b.matmul(a) {
                            return Err(invalid("phi generators must commute"));
                        }
                    }
                }
                let mut names: Vec<String> = (1..=dim).map(|i| format!("a{i}")).collect();
                names.extend((1..=gens.len()).map(|j| format!("t{j}")));
                let mut aliases = Vec::new();
                if dim == 1 {
                    aliases.push(("a".into(), 0));
                }
                if gens.len() == 1 {
                    aliases.push(("t".into(), dim));
                }
                let tables = gens
                    .iter()
                    .map(|g| PowerTable::new(g, Some(&g.inverse_unimodular().expect("unimodular"))))
                    .collect();
                Ok(GroupConfig {
                    family: Family::Semidirect,
                    m: None,
                    matrix_m: None,
                    spectral: spectral_of_action(&gens, dim),
                    eigen: common_eigenbasis(&gens),
                    phi_gens: gens,
                    generator_names: names,
                    aliases,
                    dim,
                    doc,
                    m_det: Int::one(),
                    m_adj: None,
                    tables,
                })
            }
            other => Err(Error::InvalidConfig(format!("unknown family {other:?}"))),
        }
    }

    fn abelian_by_cyclic(family: Family, matrix: IntMatrix, doc: ConfigDoc) -> Result<Self> {
        let det = matrix.det();
        if det.is_zero() {
            return Err(Error::InvalidConfig("matrix_m must have nonzero determinant".into()));
        }
        let dim = matrix.rows();
        let mut names: Vec<String> = (1..=dim).map(|i| format!("a{i}")).collect();
        names.push("t".into());
        let aliases = if dim == 1 { vec![("a".to_string(), 0)] } else { Vec::new() };
        let unimodular_inverse = if det.abs().is_one() { Some(matrix.inverse_unimodular()?) } else { None };
        Ok(GroupConfig {
            family,
            m: None,
            spectral: spectral_of_matrix(&matrix),
            eigen: common_eigenbasis(std::slice::from_ref(&matrix)),
            tables: vec![PowerTable::new(&matrix, unimodular_inverse.as_ref())],
            m_adj: Some(matrix.adjugate()),
            m_det: det,
            matrix_m: Some(matrix),
            phi_gens: Vec::new(),
            generator_names: names,
            aliases,
            dim,
            doc,
        })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn is_semidirect(&self) -> bool {
        self.family == Family::Semidirect
    }

    /// The integer `m` of BS(1,m).
    pub fn m(&self) -> Option<&Int> {
        self.m.as_ref()
    }

    /// The matrix `M` of Γ_M (the 1×1 matrix `(m)` for BS(1,m)).
    pub fn matrix_m(&self) -> Option<&IntMatrix> {
        self.matrix_m.as_ref()
    }

    pub fn phi_gens(&self) -> &[IntMatrix] {
        &self.phi_gens
    }

    pub fn generator_names(&self) -> &[String] {
        &self.generator_names
    }

    pub fn spectral(&self) -> &Spectral {
        &self.spectral
    }

    pub fn eigenbasis(&self) -> Option<&EigenBasis> {
        self.eigen.as_ref()
    }

    /// Rank `d` of the free abelian kernel generators.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of acting generators: `k` for semidirect products, 1 otherwise.
    pub fn acting_rank(&self) -> usize {
        match self.family {
            Family::Semidirect => self.phi_gens.len(),
            _ => 1,
        }
    }

    pub fn generator_count(&self) -> usize {
        self.dim + self.acting_rank()
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generator_names
            .iter()
            .position(|n| n == name)
            .or_else(|| self.aliases.iter().find(|(a, _)| a == name).map(|&(_, i)| i))
    }

    /// `M^e` for `e >= 0`.
    pub fn m_power(&self, e: u64) -> Cow<'_, IntMatrix> {
        let table = &self.tables[0];
        match table.pos.get(e as usize) {
            Some(m) => Cow::Borrowed(m),
            None => Cow::Owned(table.pos[POWER_TABLE].pow_nonneg(e / POWER_TABLE as u64).matmul(&table.pos[(e % POWER_TABLE as u64) as usize])),
        }
    }

    pub fn m_apply(&self, e: u64, v: &[Int]) -> IntVector {
        if e == 0 {
            return v.to_vec();
        }
        self.m_power(e).mul_vec(v)
    }

    pub fn m_det(&self) -> &Int {
        &self.m_det
    }

    /// `M^{-1} w` when `w ∈ M Z^d`.
    pub fn m_divide(&self, w: &[Int]) -> Option<IntVector> {
        let adj = self.m_adj.as_ref()?;
        let mut out = adj.mul_vec(w);
        for x in out.iter_mut() {
            let (q, r) = x.div_rem(&self.m_det);
            if !r.is_zero() {
                return None;
            }
            *x = q;
        }
        Some(out)
    }

    /// `φ(e_i)^e` for any integer `e`.
    pub fn phi_power(&self, i: usize, e: i64) -> Cow<'_, IntMatrix> {
        let table = &self.tables[i];
        let side = if e >= 0 { &table.pos } else { &table.neg };
        let n = e.unsigned_abs();
        match side.get(n as usize) {
            Some(m) => Cow::Borrowed(m),
            None => {
                let p = POWER_TABLE as u64;
                Cow::Owned(side[POWER_TABLE].pow_nonneg(n / p).matmul(&side[(n % p) as usize]))
            }
        }
    }

    /// `φ(y) x`.
    pub fn phi_apply(&self, y: &[i64], x: &[Int]) -> IntVector {
        let mut out = x.to_vec();
        for (i, &e) in y.iter().enumerate() {
            if e != 0 {
                out = self.phi_power(i, e).mul_vec(&out);
            }
        }
        out
    }

    /// The matrix `φ(y)`.
    pub fn phi_matrix(&self, y: &[i64]) -> IntMatrix {
        let mut out = IntMatrix::identity(self.dim);
        for (i, &e) in y.iter().enumerate() {
            if e != 0 {
                out = out.matmul(&self.phi_power(i, e));
            }
        }
        out
    }
}

fn square_matrix(rows: &[Vec<i64>]) -> Option<IntMatrix> {
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return None;
    }
    let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
    Some(IntMatrix::from_i64(&refs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int_vec;

    #[test]
    fn parses_each_family() {
        let bs = GroupConfig::from_json_str(r#"{"family":"bs","m":2}"#).unwrap();
        assert_eq!(bs.family(), Family::Bs);
        assert_eq!(bs.generator_names(), &["a", "b"]);
        assert_eq!(bs.generator_index("t"), Some(1));
        assert!(bs.spectral().expanding);

        let gm = GroupConfig::from_json_str(r#"{"family":"gamma_m","matrix_m":[[3,1],[1,2]]}"#).unwrap();
        assert_eq!(gm.generator_names(), &["a1", "a2", "t"]);
        assert!(gm.spectral().expanding);

        let sol = GroupConfig::from_json_str(r#"{"family":"semidirect","phi_gens":[[[2,1],[1,1]]]}"#).unwrap();
        assert_eq!(sol.generator_names(), &["a1", "a2", "t1"]);
        assert_eq!(sol.generator_index("t"), Some(2));
        assert!(sol.spectral().r_split);
    }

    #[test]
    fn rejects_invalid_configs() {
        for bad in [
            r#"{"family":"bs","m":1}"#,
            r#"{"family":"gamma_m","matrix_m":[[1,2],[2,4]]}"#,
            r#"{"family":"semidirect","phi_gens":[[[2,0],[0,1]]]}"#,
            r#"{"family":"semidirect","phi_gens":[[[2,1],[1,1]],[[1,1],[0,1]]]}"#,
            r#"{"family":"semidirect","phi_gens":[]}"#,
            r#"{"family":"free"}"#,
        ] {
            assert!(matches!(GroupConfig::from_json_str(bad), Err(Error::InvalidConfig(_))), "{bad}");
        }
    }

    #[test]
    fn commuting_pair_accepted() {
        let a = vec![vec![2, 1], vec![1, 1]];
        let b = vec![vec![5, 3], vec![3, 2]];
        let cfg = GroupConfig::semidirect(&[a, b]).unwrap();
        assert_eq!(cfg.acting_rank(), 2);
    }

    #[test]
    fn powers_beyond_table() {
        let cfg = GroupConfig::bs(2).unwrap();
        assert_eq!(cfg.m_apply(100, &int_vec(&[1])), vec![Int::one() << 100]);
        let sol = GroupConfig::semidirect(&[vec![vec![2, 1], vec![1, 1]]]).unwrap();
        let x = int_vec(&[3, -7]);
        let there = sol.phi_apply(&[75], &x);
        assert_eq!(sol.phi_apply(&[-75], &there), x);
    }

    #[test]
    fn divisibility_by_m() {
        let cfg = GroupConfig::gamma_m(&[vec![2, 1], vec![1, 1]]).unwrap();
        assert_eq!(cfg.m_divide(&int_vec(&[3, 2])), Some(int_vec(&[1, 1])));
        let bs = GroupConfig::bs(3).unwrap();
        assert_eq!(bs.m_divide(&int_vec(&[6])), Some(int_vec(&[2])));
        assert_eq!(bs.m_divide(&int_vec(&[7])), None);
    }

    #[test]
    fn json_round_trip() {
        let cfg = GroupConfig::gamma_m(&[vec![2]]).unwrap();
        let back = GroupConfig::from_json_str(&cfg.to_json()).unwrap();
        assert_eq!(back.matrix_m(), cfg.matrix_m());
    }
}
