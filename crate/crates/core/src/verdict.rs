//! Outcomes of property checks and replayable counterexamples.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::annihilators::{
    generated_by_idempotent, left_ann_principal, right_ann, right_ann_principal, AnnSet, AnnSource, Side,
};
use crate::elem::Elem;
use crate::error::{Error, Result};
use crate::maps::QuasiDerivation;
use crate::ore::{monomial_product, SkewPoly};
use crate::ring::Ring;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictKind {
    /// Certified by an exhaustive scan (or a closed-form argument noted in the verdict).
    Holds,
    /// No violation up to the recorded degree bounds.
    HoldsBounded,
    Fails,
    /// No refutation found among sampled cases; nothing certified.
    Inconclusive,
}

impl VerdictKind {
    pub fn label(self) -> &'static str {
        match self {
            VerdictKind::Holds => "HOLDS",
            VerdictKind::HoldsBounded => "HOLDS (bounded)",
            VerdictKind::Fails => "FAILS",
            VerdictKind::Inconclusive => "INCONCLUSIVE",
        }
    }

    pub fn is_pass(self) -> bool {
        matches!(self, VerdictKind::Holds | VerdictKind::HoldsBounded)
    }
}

impl fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Scan sizes, degree bounds and sampling parameters behind a verdict.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bounds {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deg_bound: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deg_p: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deg_phi: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j_max: Option<usize>,
    /// Cases examined.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub checked: Option<u64>,
    /// Randomly sampled cases among those examined.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub refutations: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Twist {
    /// `a·σ(b) = 0` but `a·b ≠ 0`.
    CSigma,
    /// `a·b = 0` but `a·σ(b) ≠ 0`.
    SigmaForward,
    /// `a·b = 0` but `a·δ(b) ≠ 0`.
    Delta,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MapName {
    Sigma,
    Delta,
}

impl MapName {
    fn symbol(self) -> &'static str {
        match self {
            MapName::Sigma => "σ",
            MapName::Delta => "δ",
        }
    }
}

/// A counterexample. Element and polynomial values are stored as literals of
/// the owning ring so that a witness can be replayed from its serialized form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "type", deny_unknown_fields)]
pub enum Witness {
    /// `a ≠ 0` with `a² = 0`.
    Nilpotent { a: String },
    /// Idempotent `e` with `e·r ≠ r·e`.
    NonCentralIdempotent { e: String, r: String },
    /// `a ≠ 0` with `a·R·a = 0`.
    NotSemiprime { a: String },
    /// An annihilator with no idempotent generator. With `principal`, the
    /// annihilator is of the one-sided ideal generated by `generators`;
    /// otherwise it is the annihilator of the set `generators`.
    NoIdempotentGenerator {
        side: Side,
        principal: bool,
        generators: Vec<String>,
        annihilator: Vec<String>,
    },
    /// `a ≠ 0` with `a·σ(a) = 0`.
    NotRigid { a: String },
    Twisted {
        relation: Twist,
        /// Display names for the two elements, e.g. `["f", "g"]`.
        names: [String; 2],
        a: String,
        b: String,
    },
    /// `p·q = 0` while `a_i x^i · b_j x^j ≠ 0`.
    Armendariz { p: String, q: String, i: usize, j: usize },
    /// `e ∈ S_ℓ`, `r ∈ Re`, but the image of `r` under the map leaves `Re`.
    Unstable { e: String, r: String, map: MapName },
    /// Lemma violation: `b ∈ r(cR) = eR` with `Re` stable, `e ∈ S_ℓ`, yet
    /// `c·f_k^j(a·b) ≠ 0`.
    StabilityLemma { a: String, b: String, c: String, e: String, k: usize, j: usize },
    /// `a·b = 0` but `a·f_i^j(b) ≠ 0`.
    CompatLemma { a: String, b: String, i: usize, j: usize },
    /// Rigidity disagrees with `(C_σ)` together with reducedness.
    RigidEquivalence {
        ring: String,
        sigma: String,
        rigid: VerdictKind,
        c_sigma: VerdictKind,
        reduced: VerdictKind,
    },
    /// A step of the idempotent-witness construction that did not check out.
    Construction { p: String, step: String, detail: String },
}

impl Witness {
    /// Short form used in report tables, e.g. `a=(2,0)`.
    pub fn summary(&self) -> String {
        match self {
            Witness::Nilpotent { a } | Witness::NotSemiprime { a } | Witness::NotRigid { a } => format!("a={a}"),
            Witness::NonCentralIdempotent { e, r } => format!("e={e}, r={r}"),
            Witness::NoIdempotentGenerator { generators, .. } if generators.len() == 1 => {
                format!("a={}", generators[0])
            }
            Witness::NoIdempotentGenerator { generators, .. } => format!("X={{{}}}", generators.join(", ")),
            Witness::Twisted { names, a, b, .. } => format!("{}={a}, {}={b}", names[0], names[1]),
            Witness::Armendariz { p, q, i, j } if p == q => format!("p=q={p}, i={i}, j={j}"),
            Witness::Armendariz { p, q, i, j } => format!("p={p}, q={q}, i={i}, j={j}"),
            Witness::Unstable { e, r, map } => format!("e={e}, r={r}, map={}", map.symbol()),
            Witness::StabilityLemma { a, b, c, e, k, j } => format!("a={a}, b={b}, c={c}, e={e}, k={k}, j={j}"),
            Witness::CompatLemma { a, b, i, j } => format!("a={a}, b={b}, i={i}, j={j}"),
            Witness::RigidEquivalence { ring, sigma, .. } => format!("ring={ring}, σ={sigma}"),
            Witness::Construction { p, step, .. } => format!("p={p}, step={step}"),
        }
    }

    /// Re-checks the witness from scratch. `Ok(true)` means the violation is real.
    pub fn replay(&self, qd: &QuasiDerivation) -> Result<bool> {
        let ring = qd.ring();
        let el = |s: &str| ring.parse_elem(s);
        let sigma = qd.sigma();
        let delta = qd.delta();
        Ok(match self {
            Witness::Nilpotent { a } => {
                let a = el(a)?;
                !ring.is_zero(&a) && ring.is_zero(&ring.mul(&a, &a))
            }
            Witness::NonCentralIdempotent { e, r } => {
                let (e, r) = (el(e)?, el(r)?);
                ring.mul(&e, &e) == e && ring.mul(&e, &r) != ring.mul(&r, &e)
            }
            Witness::NotSemiprime { a } => {
                let a = el(a)?;
                !ring.is_zero(&a) && ring.elements()?.iter().all(|r| ring.is_zero(&ring.mul3(&a, r, &a)))
            }
            Witness::NoIdempotentGenerator {
                side,
                principal,
                generators,
                annihilator,
            } => {
                let gens: Vec<Elem> = generators.iter().map(|g| el(g)).collect::<Result<_>>()?;
                let claimed: Vec<Elem> = annihilator.iter().map(|g| el(g)).collect::<Result<_>>()?;
                let actual = recompute_annihilator(ring, *side, *principal, &gens)?;
                let mut claimed_sorted = claimed;
                claimed_sorted.sort();
                actual.members == claimed_sorted && generated_by_idempotent(ring, &actual)?.is_none()
            }
            Witness::NotRigid { a } => {
                let a = el(a)?;
                !ring.is_zero(&a) && ring.is_zero(&ring.mul(&a, &sigma.apply(&a)))
            }
            Witness::Twisted { relation, a, b, .. } => {
                let (a, b) = (el(a)?, el(b)?);
                let ab_zero = ring.is_zero(&ring.mul(&a, &b));
                match relation {
                    Twist::CSigma => ring.is_zero(&ring.mul(&a, &sigma.apply(&b))) && !ab_zero,
                    Twist::SigmaForward => ab_zero && !ring.is_zero(&ring.mul(&a, &sigma.apply(&b))),
                    Twist::Delta => ab_zero && !ring.is_zero(&ring.mul(&a, &delta.apply(&b))),
                }
            }
            Witness::Armendariz { p, q, i, j } => {
                let p = SkewPoly::parse(qd, p)?;
                let q = SkewPoly::parse(qd, q)?;
                p.mul(&q)?.is_zero() && !monomial_product(qd, &p.coeff(*i), *i, &q.coeff(*j), *j).is_zero()
            }
            Witness::Unstable { e, r, map } => {
                let (e, r) = (el(e)?, el(r)?);
                let image = match map {
                    MapName::Sigma => sigma.apply(&r),
                    MapName::Delta => delta.apply(&r),
                };
                ring.mul(&e, &e) == e && ring.mul(&r, &e) == r && ring.mul(&image, &e) != image
            }
            Witness::StabilityLemma { a, b, c, e, k, j } => {
                let (a, b, c, e) = (el(a)?, el(b)?, el(c)?, el(e)?);
                stability_hypotheses(qd, &b, &c, &e)?
                    && !ring.is_zero(&ring.mul(&c, &qd.f_map(*k, *j, &ring.mul(&a, &b))?))
            }
            Witness::CompatLemma { a, b, i, j } => {
                let (a, b) = (el(a)?, el(b)?);
                ring.is_zero(&ring.mul(&a, &b)) && !ring.is_zero(&ring.mul(&a, &qd.f_map(*i, *j, &b)?))
            }
            Witness::RigidEquivalence {
                rigid, c_sigma, reduced, ..
            } => {
                let both = *c_sigma == VerdictKind::Holds && *reduced == VerdictKind::Holds;
                (*rigid == VerdictKind::Holds) != both
            }
            Witness::Construction { .. } => true,
        })
    }
}

/// `b ∈ r(cR) = eR` with `e ∈ S_ℓ` and `Re` closed under σ and δ.
fn stability_hypotheses(qd: &QuasiDerivation, b: &Elem, c: &Elem, e: &Elem) -> Result<bool> {
    let ring = qd.ring();
    let elems = ring.elements()?;
    let idempotent = ring.mul(e, e) == *e;
    let left_semicentral = elems.iter().all(|r| ring.mul3(e, r, e) == ring.mul(r, e));
    let mut e_r: Vec<Elem> = elems.iter().map(|r| ring.mul(e, r)).collect();
    e_r.sort();
    e_r.dedup();
    let ann = right_ann_principal(ring, c)?;
    let stable = elems.iter().map(|r| ring.mul(r, e)).all(|x| {
        let (s, d) = (qd.sigma().apply(&x), qd.delta().apply(&x));
        ring.mul(&s, e) == s && ring.mul(&d, e) == d
    });
    Ok(idempotent && left_semicentral && stable && ann.members == e_r && ann.contains(b))
}

/// The annihilator a [`Witness::NoIdempotentGenerator`] refers to.
pub fn recompute_annihilator(ring: &Ring, side: Side, principal: bool, gens: &[Elem]) -> Result<AnnSet> {
    let mut acc: Option<AnnSet> = None;
    if !principal {
        return match side {
            Side::Right => right_ann(ring, gens),
            Side::Left => crate::annihilators::left_ann(ring, gens),
        };
    }
    for g in gens {
        let next = match side {
            Side::Right => right_ann_principal(ring, g)?,
            Side::Left => left_ann_principal(ring, g)?,
        };
        acc = Some(match acc {
            None => next,
            Some(prev) => AnnSet {
                side,
                source: AnnSource::Intersection,
                members: prev.members.into_iter().filter(|m| next.contains(m)).collect(),
            },
        });
    }
    acc.ok_or_else(|| Error::Mismatch("annihilator witness without generators".into()))
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::NoIdempotentGenerator {
                side,
                principal,
                generators,
                annihilator,
            } => {
                let single = generators.len() == 1;
                let what = match (side, principal, single) {
                    (Side::Right, true, true) => "r(aR)",
                    (Side::Left, true, true) => "ℓ(Ra)",
                    (Side::Right, false, true) => "r(a)",
                    (Side::Left, false, true) => "ℓ(a)",
                    (Side::Right, true, false) => "r(XR)",
                    (Side::Left, true, false) => "ℓ(RX)",
                    (Side::Right, false, false) => "r(X)",
                    (Side::Left, false, false) => "ℓ(X)",
                };
                write!(f, "{}; {what}={{{}}} has no idempotent generator", self.summary(), annihilator.join(", "))
            }
            Witness::Armendariz { i, j, .. } => write!(f, "{}; a_{i}x^{i}·b_{j}x^{j} ≠ 0", self.summary()),
            Witness::Construction { detail, .. } => write!(f, "{}: {detail}", self.summary()),
            Witness::RigidEquivalence {
                rigid, c_sigma, reduced, ..
            } => write!(f, "{}; rigid {rigid}, (C_σ) {c_sigma}, reduced {reduced}", self.summary()),
            _ => f.write_str(&self.summary()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Verdict {
    pub kind: VerdictKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(default)]
    pub bounds: Bounds,
    /// Set when the statement held only because its hypotheses were never met.
    #[serde(default)]
    pub vacuous: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Verdict {
    pub fn holds(bounds: Bounds) -> Self {
        Verdict {
            kind: VerdictKind::Holds,
            witness: None,
            bounds,
            vacuous: false,
            note: None,
        }
    }

    pub fn holds_bounded(bounds: Bounds) -> Self {
        Verdict {
            kind: VerdictKind::HoldsBounded,
            ..Verdict::holds(bounds)
        }
    }

    pub fn fails(witness: Witness, bounds: Bounds) -> Self {
        Verdict {
            kind: VerdictKind::Fails,
            witness: Some(witness),
            ..Verdict::holds(bounds)
        }
    }

    pub fn inconclusive(bounds: Bounds, note: impl Into<String>) -> Self {
        Verdict {
            kind: VerdictKind::Inconclusive,
            note: Some(note.into()),
            ..Verdict::holds(bounds)
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn vacuous(mut self) -> Self {
        self.vacuous = true;
        self
    }

    /// One-line rendering: `FAILS (a=(2,0))`, `HOLDS`, …
    pub fn short(&self) -> String {
        let mut out = self.kind.label().to_string();
        if let Some(w) = &self.witness {
            out.push_str(&format!(" ({})", w.summary()));
        }
        if self.vacuous {
            out.push_str(" [vacuous]");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn witness_serde_round_trip() {
        let w = Witness::Armendariz {
            p: "(2,0)+(2,1)x".into(),
            q: "(2,0)+(2,1)x".into(),
            i: 1,
            j: 0,
        };
        let v = Verdict::fails(w, Bounds { deg_bound: Some(1), ..Bounds::default() });
        let json = serde_json::to_string(&v).unwrap();
        assert_eq!(serde_json::from_str::<Verdict>(&json).unwrap(), v);
        assert_eq!(v.short(), "FAILS (p=q=(2,0)+(2,1)x, i=1, j=0)");
    }
}
