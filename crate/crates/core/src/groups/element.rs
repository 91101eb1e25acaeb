use std::fmt;

use num_traits::Zero;

use super::config::GroupConfig;
use crate::error::{Error, Result};
use crate::linalg::{is_zero_vec, vec_add, vec_neg, Int, IntVector};

/// An element `(x, y)` of `Z^d ⋊ Z^k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SdElement {
    pub x: IntVector,
    pub y: Vec<i64>,
}

/// An element `(M^{-p} w) t^s` of Γ_M in canonical form: `p >= 0`, and
/// `p > 0` forces `w ∉ M Z^d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GmElement {
    p: i64,
    w: IntVector,
    s: i64,
}

impl GmElement {
    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn w(&self) -> &[Int] {
        &self.w
    }

    pub fn s(&self) -> i64 {
        self.s
    }

    pub fn into_parts(self) -> (i64, IntVector, i64) {
        (self.p, self.w, self.s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    Sd(SdElement),
    Gm(GmElement),
}

impl Element {
    pub fn as_sd(&self) -> &SdElement {
        match self {
            Element::Sd(e) => e,
            Element::Gm(_) => panic!("expected a semidirect-product element"),
        }
    }

    pub fn as_gm(&self) -> &GmElement {
        match self {
            Element::Gm(e) => e,
            Element::Sd(_) => panic!("expected a Γ_M element"),
        }
    }

    /// Image in the abelian quotient `Z^k` (the `y`-part, or `s` for Γ_M).
    pub fn quotient_image(&self) -> Vec<i64> {
        match self {
            Element::Sd(e) => e.y.clone(),
            Element::Gm(e) => vec![e.s],
        }
    }

    /// Whether the element lies in the kernel of the quotient map.
    pub fn in_kernel(&self) -> bool {
        match self {
            Element::Sd(e) => e.y.iter().all(|&v| v == 0),
            Element::Gm(e) => e.s == 0,
        }
    }
}

fn fmt_vec<T: fmt::Display>(f: &mut fmt::Formatter<'_>, v: &[T]) -> fmt::Result {
    write!(f, "(")?;
    for (i, x) in v.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{x}")?;
    }
    write!(f, ")")
}

/// Canonical strings: `(p,(w1,...,wd),s)` and `((x1,...,xd),(y1,...,yk))`.
impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Gm(e) => {
                write!(f, "({},", e.p)?;
                fmt_vec(f, &e.w)?;
                write!(f, ",{})", e.s)
            }
            Element::Sd(e) => {
                write!(f, "(")?;
                fmt_vec(f, &e.x)?;
                write!(f, ",")?;
                fmt_vec(f, &e.y)?;
                write!(f, ")")
            }
        }
    }
}

impl GroupConfig {
    /// Canonical form of `(M^{-p} w) t^s` for any integer `p`.
    pub fn gm_normalize(&self, p: i64, w: IntVector, s: i64) -> GmElement {
        assert_eq!(w.len(), self.dim(), "vector length does not match the group");
        let (mut p, mut w) = if p < 0 { (0, self.m_apply(p.unsigned_abs(), &w)) } else { (p, w) };
        if is_zero_vec(&w) {
            return GmElement { p: 0, w, s };
        }
        while p > 0 {
            match self.m_divide(&w) {
                Some(q) => {
                    w = q;
                    p -= 1;
                }
                None => break,
            }
        }
        GmElement { p, w, s }
    }

    pub fn gm_mul(&self, a: &GmElement, b: &GmElement) -> GmElement {
        let p = a.p.max(b.p - a.s).max(0);
        let left = self.m_apply((p - a.p) as u64, &a.w);
        let right = self.m_apply((p - b.p + a.s) as u64, &b.w);
        self.gm_normalize(p, vec_add(&left, &right), a.s + b.s)
    }

    pub fn gm_inv(&self, a: &GmElement) -> GmElement {
        self.gm_normalize(a.p + a.s, vec_neg(&a.w), -a.s)
    }

    pub fn sd_mul(&self, a: &SdElement, b: &SdElement) -> SdElement {
        let moved = self.phi_apply(&a.y, &b.x);
        SdElement { x: vec_add(&a.x, &moved), y: a.y.iter().zip(&b.y).map(|(u, v)| u + v).collect() }
    }

    pub fn sd_inv(&self, a: &SdElement) -> SdElement {
        let neg_y: Vec<i64> = a.y.iter().map(|v| -v).collect();
        SdElement { x: vec_neg(&self.phi_apply(&neg_y, &a.x)), y: neg_y }
    }

    pub fn identity(&self) -> Element {
        let zero = vec![Int::zero(); self.dim()];
        if self.is_semidirect() {
            Element::Sd(SdElement { x: zero, y: vec![0; self.acting_rank()] })
        } else {
            Element::Gm(GmElement { p: 0, w: zero, s: 0 })
        }
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Element {
        match (a, b) {
            (Element::Sd(a), Element::Sd(b)) => Element::Sd(self.sd_mul(a, b)),
            (Element::Gm(a), Element::Gm(b)) => Element::Gm(self.gm_mul(a, b)),
            _ => panic!("mixed element kinds"),
        }
    }

    pub fn inv(&self, a: &Element) -> Element {
        match a {
            Element::Sd(a) => Element::Sd(self.sd_inv(a)),
            Element::Gm(a) => Element::Gm(self.gm_inv(a)),
        }
    }

    /// `g^{-1} u g`.
    pub fn conj(&self, g: &Element, u: &Element) -> Element {
        self.mul(&self.inv(g), &self.mul(u, g))
    }

    pub fn pow(&self, g: &Element, n: i64) -> Element {
        let mut base = if n < 0 { self.inv(g) } else { g.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = self.identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// `g^n` for the `index`-th generator, built directly.
    pub fn generator_power(&self, index: usize, n: i64) -> Element {
        assert!(index < self.generator_count(), "generator index out of range");
        let d = self.dim();
        let mut w = vec![Int::zero(); d];
        if self.is_semidirect() {
            let mut y = vec![0; self.acting_rank()];
            if index < d {
                w[index] = Int::from(n);
            } else {
                y[index - d] = n;
            }
            Element::Sd(SdElement { x: w, y })
        } else if index < d {
            w[index] = Int::from(n);
            Element::Gm(self.gm_normalize(0, w, 0))
        } else {
            Element::Gm(GmElement { p: 0, w, s: n })
        }
    }

    pub fn generator(&self, index: usize) -> Element {
        self.generator_power(index, 1)
    }

    /// Builds a kernel element `M^{-p} w` (Γ_M) or `(x, 0)` (semidirect).
    pub fn kernel_element(&self, p: i64, w: IntVector) -> Element {
        if self.is_semidirect() {
            assert_eq!(p, 0, "semidirect kernel elements have no denominator");
            Element::Sd(SdElement { x: w, y: vec![0; self.acting_rank()] })
        } else {
            Element::Gm(self.gm_normalize(p, w, 0))
        }
    }

    pub fn gm_element(&self, p: i64, w: IntVector, s: i64) -> Element {
        Element::Gm(self.gm_normalize(p, w, s))
    }

    pub fn sd_element(&self, x: IntVector, y: Vec<i64>) -> Element {
        assert_eq!(x.len(), self.dim());
        assert_eq!(y.len(), self.acting_rank());
        Element::Sd(SdElement { x, y })
    }

    /// Parses a canonical string as produced by `Display`.
    pub fn parse_canonical(&self, s: &str) -> Result<Element> {
        let err = |msg: &str| Error::Parse { position: 0, message: format!("{msg} in {s:?}") };
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = compact
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| err("missing outer parentheses"))?;
        let parse_list = |body: &str| -> Result<Vec<Int>> {
            if body.is_empty() {
                return Ok(Vec::new());
            }
            body.split(',').map(|t| t.parse::<Int>().map_err(|_| err("bad integer"))).collect()
        };
        if self.is_semidirect() {
            let split = inner.find("),(").ok_or_else(|| err("expected two tuples"))?;
            let x = parse_list(inner[..split].strip_prefix('(').ok_or_else(|| err("expected tuple"))?)?;
            let y_body = inner[split + 2..]
                .strip_prefix('(')
                .and_then(|r| r.strip_suffix(')'))
                .ok_or_else(|| err("expected tuple"))?;
            let y: Vec<i64> = y_body
                .split(',')
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<i64>().map_err(|_| err("bad exponent")))
                .collect::<Result<_>>()?;
            if x.len() != self.dim() || y.len() != self.acting_rank() {
                return Err(err("wrong tuple length"));
            }
            Ok(Element::Sd(SdElement { x, y }))
        } else {
            let open = inner.find('(').ok_or_else(|| err("expected vector"))?;
            let close = inner.rfind(')').ok_or_else(|| err("expected vector"))?;
            let p: i64 = inner[..open].trim_end_matches(',').parse().map_err(|_| err("bad p"))?;
            let w = parse_list(&inner[open + 1..close])?;
            let s_val: i64 = inner[close + 1..].trim_start_matches(',').parse().map_err(|_| err("bad s"))?;
            if w.len() != self.dim() || p < 0 {
                return Err(err("invalid Γ_M triple"));
            }
            let e = self.gm_normalize(p, w.clone(), s_val);
            if e.p != p || e.w != w {
                return Err(err("triple is not in canonical form"));
            }
            Ok(Element::Gm(e))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int_vec;

    fn gm(cfg: &GroupConfig, p: i64, w: &[i64], s: i64) -> GmElement {
        cfg.gm_normalize(p, int_vec(w), s)
    }

    #[test]
    fn bs_defining_relation() {
        let cfg = GroupConfig::bs(2).unwrap();
        let t = gm(&cfg, 0, &[0], 1);
        let a = gm(&cfg, 0, &[1], 0);
        let t_inv = gm(&cfg, 0, &[0], -1);
        assert_eq!(cfg.gm_mul(&cfg.gm_mul(&t, &a), &t_inv), gm(&cfg, 0, &[2], 0));
        assert_eq!(cfg.gm_mul(&cfg.gm_mul(&t_inv, &a), &t), GmElement { p: 1, w: int_vec(&[1]), s: 0 });
    }

    #[test]
    fn normalize_strips_factors() {
        let cfg = GroupConfig::bs(2).unwrap();
        assert_eq!(gm(&cfg, 1, &[2], 0), GmElement { p: 0, w: int_vec(&[1]), s: 0 });
        assert_eq!(gm(&cfg, 3, &[0], 5), GmElement { p: 0, w: int_vec(&[0]), s: 5 });
        assert_eq!(gm(&cfg, -2, &[3], 0), GmElement { p: 0, w: int_vec(&[12]), s: 0 });
    }

    #[test]
    fn conj_convention() {
        let cfg = GroupConfig::bs(2).unwrap();
        let a = cfg.generator(0);
        let b_inv2 = cfg.generator_power(1, -2);
        assert_eq!(cfg.conj(&b_inv2, &a), cfg.generator_power(0, 4));
        assert_eq!(cfg.conj(&cfg.identity(), &a), a);
    }

    #[test]
    fn sol_multiplication() {
        let cfg = GroupConfig::semidirect(&[vec![vec![2, 1], vec![1, 1]]]).unwrap();
        let t = cfg.sd_element(int_vec(&[0, 0]), vec![1]);
        let e1 = cfg.sd_element(int_vec(&[1, 0]), vec![0]);
        assert_eq!(cfg.mul(&t, &e1), cfg.sd_element(int_vec(&[2, 1]), vec![1]));
        let g = cfg.sd_element(int_vec(&[3, -4]), vec![2]);
        assert_eq!(cfg.mul(&g, &cfg.inv(&g)), cfg.identity());
        // conj((0,-e_j), (e_i,0)) = (φ(e_j) e_i, 0)
        let t_inv = cfg.generator_power(2, -1);
        assert_eq!(cfg.conj(&t_inv, &e1), cfg.sd_element(int_vec(&[2, 1]), vec![0]));
    }

    #[test]
    fn canonical_strings_round_trip() {
        let cfg = GroupConfig::gamma_m(&[vec![2, 1], vec![1, 1]]).unwrap();
        let e = cfg.gm_element(0, int_vec(&[-3, 7]), -2);
        assert_eq!(e.to_string(), "(0,(-3,7),-2)");
        assert_eq!(cfg.parse_canonical(&e.to_string()).unwrap(), e);
        let bs = GroupConfig::bs(2).unwrap();
        let f = bs.gm_element(3, int_vec(&[5]), 1);
        assert_eq!(f.to_string(), "(3,(5),1)");
        assert_eq!(bs.parse_canonical("(3,(5),1)").unwrap(), f);
        assert!(bs.parse_canonical("(1,(2),0)").is_err());
        let sol = GroupConfig::semidirect(&[vec![vec![2, 1], vec![1, 1]]]).unwrap();
        let g = sol.sd_element(int_vec(&[1, -1]), vec![-4]);
        assert_eq!(g.to_string(), "((1,-1),(-4))");
        assert_eq!(sol.parse_canonical(&g.to_string()).unwrap(), g);
    }

    #[test]
    fn pow_matches_repeated_product() {
        let cfg = GroupConfig::bs(3).unwrap();
        let g = cfg.gm_element(1, int_vec(&[2]), 1);
        let mut acc = cfg.identity();
        for _ in 0..5 {
            acc = cfg.mul(&acc, &g);
        }
        assert_eq!(cfg.pow(&g, 5), acc);
        assert_eq!(cfg.pow(&g, -5), cfg.inv(&acc));
    }
}
