//! Skew polynomials in `R[x; σ, δ]` with coefficients written on the left.
//!
//! Multiplication follows `x·a = σ(a)·x + δ(a)`, expanded through
//! `x^n·r = Σ_i f_i^n(r)·x^i`.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::elem::Elem;
use crate::error::{Error, Result};
use crate::maps::QuasiDerivation;
use crate::ring::{split_power, Ring};
use crate::text::{split_top, strip_group};

#[derive(Clone)]
pub struct SkewPoly {
    qd: QuasiDerivation,
    /// `coeffs[k]` is the coefficient of `x^k`; trailing zeros trimmed.
    coeffs: Vec<Elem>,
}

impl fmt::Debug for SkewPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SkewPoly({})", self)
    }
}

impl PartialEq for SkewPoly {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && self.qd == other.qd
    }
}

impl Eq for SkewPoly {}

impl fmt::Display for SkewPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fmt_coeffs(self.ring(), &self.coeffs))
    }
}

/// Multiplier set used by [`bounded_right_ann`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PrincipalKind {
    /// `φ` with `p·r·φ = 0` for every constant `r ∈ R`.
    PR,
    /// `φ` with `p·r·x^k·φ = 0` for every `r ∈ R` and `k ≤ deg_bound`.
    PS,
}

impl SkewPoly {
    pub fn new(qd: &QuasiDerivation, coeffs: Vec<Elem>) -> Self {
        let ring = qd.ring();
        let mut coeffs = coeffs;
        while coeffs.last().is_some_and(|c| ring.is_zero(c)) {
            coeffs.pop();
        }
        SkewPoly { qd: qd.clone(), coeffs }
    }

    pub fn zero(qd: &QuasiDerivation) -> Self {
        SkewPoly::new(qd, vec![])
    }

    pub fn constant(qd: &QuasiDerivation, a: Elem) -> Self {
        SkewPoly::new(qd, vec![a])
    }

    /// `a·x^k`.
    pub fn monomial(qd: &QuasiDerivation, a: Elem, k: usize) -> Self {
        let mut coeffs = vec![qd.ring().zero(); k];
        coeffs.push(a);
        SkewPoly::new(qd, coeffs)
    }

    pub fn x(qd: &QuasiDerivation) -> Self {
        SkewPoly::monomial(qd, qd.ring().one(), 1)
    }

    pub fn qd(&self) -> &QuasiDerivation {
        &self.qd
    }

    pub fn ring(&self) -> &Ring {
        self.qd.ring()
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    /// Coefficient of `x^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> Elem {
        self.coeffs.get(k).cloned().unwrap_or_else(|| self.ring().zero())
    }

    /// `None` stands for the degree −∞ of the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn check_same(&self, other: &SkewPoly) -> Result<()> {
        if self.qd != other.qd {
            return Err(Error::Mismatch(format!(
                "polynomials over different extensions: {:?} vs {:?}",
                self.qd, other.qd
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &SkewPoly) -> Result<SkewPoly> {
        self.check_same(other)?;
        let ring = self.ring();
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len).map(|k| ring.add(&self.coeff(k), &other.coeff(k))).collect();
        Ok(SkewPoly::new(&self.qd, coeffs))
    }

    pub fn neg(&self) -> SkewPoly {
        let ring = self.ring();
        SkewPoly::new(&self.qd, self.coeffs.iter().map(|c| ring.neg(c)).collect())
    }

    pub fn sub(&self, other: &SkewPoly) -> Result<SkewPoly> {
        self.add(&other.neg())
    }

    /// Product in `R[x; σ, δ]`.
    pub fn mul(&self, other: &SkewPoly) -> Result<SkewPoly> {
        self.check_same(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &SkewPoly) -> SkewPoly {
        let (Some(dp), Some(dq)) = (self.degree(), other.degree()) else {
            return SkewPoly::zero(&self.qd);
        };
        let ring = self.ring();
        let mut out = vec![ring.zero(); dp + dq + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if ring.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if ring.is_zero(b) {
                    continue;
                }
                // a x^i b x^j = Σ_k a f_k^i(b) x^{k+j}
                for (k, fb) in self.qd.f_row(i, b).iter().enumerate() {
                    out[k + j] = ring.add(&out[k + j], &ring.mul(a, fb));
                }
            }
        }
        SkewPoly::new(&self.qd, out)
    }

    /// Left multiplication by a constant.
    pub fn scale_left(&self, a: &Elem) -> SkewPoly {
        let ring = self.ring();
        SkewPoly::new(&self.qd, self.coeffs.iter().map(|c| ring.mul(a, c)).collect())
    }

    /// Parses `terms c·x^k` joined by `+`; coefficients use the ring's element
    /// literals and may be wrapped in braces.
    pub fn parse(qd: &QuasiDerivation, text: &str) -> Result<SkewPoly> {
        let ring = qd.ring();
        let s = text.trim();
        if let Some(inner) = strip_group(s, '[', ']').filter(|_| ring.poly_base().is_none()) {
            let coeffs = if inner.trim().is_empty() {
                vec![]
            } else {
                split_top(inner, ',').iter().map(|c| ring.parse_elem(c)).collect::<Result<_>>()?
            };
            return Ok(SkewPoly::new(qd, coeffs));
        }
        let mut coeffs: Vec<Elem> = Vec::new();
        for term in split_top(s, '+') {
            let term = term.trim();
            let grammar = "terms {elem} x^k joined by +";
            if term.is_empty() {
                return Err(Error::parse(s, grammar));
            }
            let (coef_text, k) = split_power(term, "x").ok_or_else(|| Error::parse(s, grammar))?;
            let coef_text = coef_text.trim().trim_end_matches('*').trim();
            let coef = match coef_text {
                "" => ring.one(),
                "-" => ring.neg(&ring.one()),
                t => ring.parse_elem(t)?,
            };
            if coeffs.len() <= k {
                coeffs.resize(k + 1, ring.zero());
            }
            coeffs[k] = ring.add(&coeffs[k], &coef);
        }
        Ok(SkewPoly::new(qd, coeffs))
    }
}

/// Literal for coefficient lists in the `c·x^k` syntax.
pub fn fmt_coeffs(ring: &Ring, coeffs: &[Elem]) -> String {
    let terms: Vec<String> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| !ring.is_zero(c))
        .map(|(k, c)| {
            let lit = ring.fmt_elem(c);
            let plain = lit.starts_with('(') || lit.starts_with('#') || lit.parse::<i64>().is_ok();
            let coef = if plain { lit } else { format!("{{{lit}}}") };
            match k {
                0 => coef,
                _ if *c == ring.one() => if k == 1 { "x".into() } else { format!("x^{k}") },
                1 => format!("{coef}x"),
                _ => format!("{coef}x^{k}"),
            }
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join("+")
    }
}

/// `a·x^i · b·x^j = Σ_k a·f_k^i(b)·x^{k+j}`.
pub fn monomial_product(qd: &QuasiDerivation, a: &Elem, i: usize, b: &Elem, j: usize) -> SkewPoly {
    let ring = qd.ring();
    let mut coeffs = vec![ring.zero(); i + j + 1];
    for (k, fb) in qd.f_row(i, b).iter().enumerate() {
        coeffs[k + j] = ring.mul(a, fb);
    }
    SkewPoly::new(qd, coeffs)
}

/// Number of polynomials of degree at most `deg` over an `n`-element ring.
pub fn poly_count(n: usize, deg: usize) -> u128 {
    (n as u128).checked_pow(deg as u32 + 1).unwrap_or(u128::MAX)
}

/// The `idx`-th polynomial of degree ≤ `deg` in enumeration order
/// (base-`N` digits, constant coefficient varying fastest).
pub fn poly_at(qd: &QuasiDerivation, n: usize, deg: usize, mut idx: u128) -> SkewPoly {
    let mut coeffs = Vec::with_capacity(deg + 1);
    for _ in 0..=deg {
        coeffs.push(Elem::Idx((idx % n as u128) as u32));
        idx /= n as u128;
    }
    SkewPoly::new(qd, coeffs)
}

/// All polynomials of degree ≤ `deg` over an enumerable ring, subject to the scan cap.
pub fn all_polys(qd: &QuasiDerivation, deg: usize, scan_cap: u64) -> Result<Vec<SkewPoly>> {
    let f = qd.ring().require_finite("polynomial enumeration")?;
    let count = poly_count(f.size(), deg);
    if count > scan_cap as u128 {
        return Err(Error::cap(format!("N^(d+1) for d={deg}"), count, scan_cap as u128));
    }
    Ok((0..count).map(|i| poly_at(qd, f.size(), deg, i)).collect())
}

/// Polynomials `φ` of degree ≤ `deg_bound` with `p·w·φ = 0` for every multiplier
/// `w` of the chosen kind, in enumeration order.
pub fn bounded_right_ann(p: &SkewPoly, kind: PrincipalKind, deg_bound: usize) -> Result<Vec<SkewPoly>> {
    bounded_right_ann_capped(p, kind, deg_bound, p.ring().limits().scan_cap)
}

pub fn bounded_right_ann_capped(
    p: &SkewPoly,
    kind: PrincipalKind,
    deg_bound: usize,
    scan_cap: u64,
) -> Result<Vec<SkewPoly>> {
    let qd = p.qd();
    let f = p.ring().require_finite("bounded_right_ann")?;
    let n = f.size();
    let count = poly_count(n, deg_bound);
    if count > scan_cap as u128 {
        return Err(Error::cap(format!("N^(d+1) for d={deg_bound}"), count, scan_cap as u128));
    }
    let max_k = match kind {
        PrincipalKind::PR => 0,
        PrincipalKind::PS => deg_bound,
    };
    let mut left_factors: Vec<SkewPoly> = Vec::new();
    for k in 0..=max_k {
        for r in f.indices() {
            let pw = p.mul_unchecked(&SkewPoly::monomial(qd, Elem::Idx(r), k));
            if !pw.is_zero() && !left_factors.contains(&pw) {
                left_factors.push(pw);
            }
        }
    }
    Ok((0..count)
        .into_par_iter()
        .map(|i| poly_at(qd, n, deg_bound, i))
        .filter(|phi| left_factors.iter().all(|pw| pw.mul_unchecked(phi).is_zero()))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::{DerivSpec, EndoSpec};
    use crate::ring::{build_ring, RingSpec};

    fn qd(spec: RingSpec, sigma: EndoSpec, delta: DerivSpec) -> QuasiDerivation {
        let r = build_ring(&spec).unwrap();
        QuasiDerivation::from_specs(&r, &sigma, &delta).unwrap()
    }

    fn tri4() -> QuasiDerivation {
        qd(RingSpec::tri2(RingSpec::zn(4)), EndoSpec::NegateOffdiag, DerivSpec::Zero)
    }

    #[test]
    fn x_times_t_vanishes_under_eval0() {
        let q = qd(RingSpec::poly(RingSpec::zn(2), "t"), EndoSpec::Eval0, DerivSpec::Zero);
        let x = SkewPoly::parse(&q, "x").unwrap();
        let t = SkewPoly::parse(&q, "{t}").unwrap();
        assert!(x.mul(&t).unwrap().is_zero());
        let tt = SkewPoly::parse(&q, "{[0,1]} x^0").unwrap();
        assert_eq!(tt.mul(&tt).unwrap().to_string(), "{t^2}");
    }

    #[test]
    fn x_times_i_in_gauss() {
        let q = qd(RingSpec::Gauss, EndoSpec::Conj, DerivSpec::ConjDiff);
        let x = SkewPoly::x(&q);
        let i = SkewPoly::parse(&q, "{i}").unwrap();
        assert_eq!(x.mul(&i).unwrap(), SkewPoly::parse(&q, "{2i}+{-i}x").unwrap());
    }

    #[test]
    fn tri4_square_vanishes() {
        let q = tri4();
        let p = SkewPoly::parse(&q, "(2,0)+(2,1)x").unwrap();
        assert!(p.mul(&p).unwrap().is_zero());
        assert_eq!(p.to_string(), "(2,0)+(2,1)x");
    }

    #[test]
    fn monomial_products() {
        let q = tri4();
        let r = q.ring();
        let a = r.parse_elem("(2,1)").unwrap();
        let b = r.parse_elem("(2,0)").unwrap();
        let m = monomial_product(&q, &a, 1, &b, 0);
        assert_eq!(m.to_string(), "(0,2)x");
        assert_eq!(monomial_product(&q, &a, 0, &b, 2), SkewPoly::monomial(&q, r.mul(&a, &b), 2));
    }

    #[test]
    fn degrees() {
        let q = tri4();
        assert_eq!(SkewPoly::zero(&q).degree(), None);
        assert_eq!(SkewPoly::constant(&q, q.ring().one()).degree(), Some(0));
    }

    #[test]
    fn mismatched_extensions_rejected() {
        let a = SkewPoly::x(&tri4());
        let b = SkewPoly::x(&qd(RingSpec::zn(2), EndoSpec::Identity, DerivSpec::Zero));
        assert!(matches!(a.mul(&b), Err(Error::Mismatch(_))));
    }

    #[test]
    fn unit_annihilates_nothing() {
        let q = qd(RingSpec::zn(2), EndoSpec::Identity, DerivSpec::Zero);
        let one = SkewPoly::constant(&q, q.ring().one());
        let ann = bounded_right_ann(&one, PrincipalKind::PS, 3).unwrap();
        assert_eq!(ann, vec![SkewPoly::zero(&q)]);
    }

    #[test]
    fn tri4_constant_annihilator_contains_expected() {
        let q = tri4();
        let p = SkewPoly::parse(&q, "(2,0)").unwrap();
        let ann = bounded_right_ann(&p, PrincipalKind::PS, 1).unwrap();
        assert!(ann.contains(&SkewPoly::parse(&q, "(0,2)+(0,2)x").unwrap()));
    }

    #[test]
    fn scan_cap_enforced() {
        let q = tri4();
        let p = SkewPoly::x(&q);
        assert!(matches!(bounded_right_ann_capped(&p, PrincipalKind::PR, 5, 1000), Err(Error::Cap { .. })));
    }
}
