//! Named example rings with their expected check outcomes.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::annihilators::idempotent_profile;
use crate::error::{Error, Result};
use crate::lab::{
    converse_extraction, lemma_compat_f, lemma_rigid_equivalence, lemma_stability, ore_idempotents_bounded,
    ore_pq_baer_bounded, theorem_roundtrip, LabOptions,
};
use crate::maps::{DerivSpec, EndoSpec, QuasiDerivation};
use crate::properties::{CheckOptions, Property};
use crate::ring::{build_ring, Ring, RingSpec};
use crate::verdict::{Verdict, VerdictKind};

/// Something that can be run against an entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    Property(Property),
    /// The exact idempotent set.
    Idempotents,
    /// `S_ℓ ∩ S_r = B`.
    SemicentralMeet,
    StabilityLemma,
    CompatLemma,
    RigidEquivalence,
    OrePqBaer,
    Converse,
    /// Idempotents of the Ore extension found by a bounded search.
    OreIdempotents,
    /// Which implication the hypotheses support, and whether the computed
    /// directions agree with it.
    Roundtrip,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Check::Property(p) => f.write_str(p.label()),
            Check::Idempotents => f.write_str("idempotents"),
            Check::SemicentralMeet => f.write_str("S_ℓ ∩ S_r = B"),
            Check::StabilityLemma => f.write_str("stability lemma"),
            Check::CompatLemma => f.write_str("compatibility lemma"),
            Check::RigidEquivalence => f.write_str("rigid ⇔ (C_σ) + reduced"),
            Check::OrePqBaer => f.write_str("Ore extension right p.q.-Baer"),
            Check::Converse => f.write_str("converse extraction"),
            Check::OreIdempotents => f.write_str("Ore extension idempotents"),
            Check::Roundtrip => f.write_str("hypothesis roundtrip"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutcomeKind {
    Holds,
    HoldsBounded,
    Fails,
    Inconclusive,
    /// A precondition failed before the check ran.
    HypothesisError,
    /// The check computes a value rather than a verdict.
    Value,
}

impl From<VerdictKind> for OutcomeKind {
    fn from(k: VerdictKind) -> Self {
        match k {
            VerdictKind::Holds => OutcomeKind::Holds,
            VerdictKind::HoldsBounded => OutcomeKind::HoldsBounded,
            VerdictKind::Fails => OutcomeKind::Fails,
            VerdictKind::Inconclusive => OutcomeKind::Inconclusive,
        }
    }
}

impl fmt::Display for OutcomeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutcomeKind::Holds => "HOLDS",
            OutcomeKind::HoldsBounded => "HOLDS (bounded)",
            OutcomeKind::Fails => "FAILS",
            OutcomeKind::Inconclusive => "INCONCLUSIVE",
            OutcomeKind::HypothesisError => "HYPOTHESIS ERROR",
            OutcomeKind::Value => "VALUE",
        })
    }
}

/// What a check produced.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Outcome {
    pub kind: OutcomeKind,
    /// Witness summary, computed value, or failed hypothesis.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub checked: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
}

impl Outcome {
    fn from_verdict(v: Verdict) -> Self {
        Outcome {
            kind: v.kind.into(),
            detail: v.witness.as_ref().map(|w| w.summary()),
            checked: v.bounds.checked,
            verdict: Some(v),
        }
    }

    fn value(detail: String) -> Self {
        Outcome {
            kind: OutcomeKind::Value,
            detail: Some(detail),
            checked: None,
            verdict: None,
        }
    }

    fn from_result(r: Result<Verdict>) -> Self {
        match r {
            Ok(v) => Outcome::from_verdict(v),
            Err(Error::Hypothesis { hypothesis, .. }) => Outcome {
                kind: OutcomeKind::HypothesisError,
                detail: Some(hypothesis),
                checked: None,
                verdict: None,
            },
            Err(e) => Outcome {
                kind: OutcomeKind::Inconclusive,
                detail: Some(e.to_string()),
                checked: None,
                verdict: None,
            },
        }
    }

    /// `KIND (detail)` as printed in report rows.
    pub fn short(&self) -> String {
        match &self.detail {
            Some(d) if self.kind == OutcomeKind::Value => d.clone(),
            Some(d) => format!("{} ({d})", self.kind),
            None => self.kind.to_string(),
        }
    }
}

/// One expected result, with a short note on where it comes from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expectation {
    pub check: Check,
    pub kind: OutcomeKind,
    /// Exact witness summary or value, when pinned.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    /// Lower bound on the number of cases examined.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_checked: Option<u64>,
    pub anchor: String,
}

impl Expectation {
    pub fn matches(&self, actual: &Outcome) -> bool {
        self.kind == actual.kind
            && self.detail.as_ref().is_none_or(|d| actual.detail.as_ref() == Some(d))
            && self.min_checked.is_none_or(|m| actual.checked.unwrap_or(0) >= m)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub name: String,
    pub description: String,
    pub ring: RingSpec,
    pub sigma: EndoSpec,
    pub delta: DerivSpec,
    /// Element literals sampled checks try first.
    #[serde(default)]
    pub probes: Vec<String>,
    /// Polynomial literals the skew-Armendariz scan tries first.
    #[serde(default)]
    pub poly_probes: Vec<String>,
    pub expectations: Vec<Expectation>,
}

impl CatalogEntry {
    pub fn quasi_derivation(&self) -> Result<QuasiDerivation> {
        let ring = build_ring(&self.ring)?;
        QuasiDerivation::from_specs(&ring, &self.sigma, &self.delta)
    }

    /// Check options with this entry's probes added.
    pub fn options(&self, base: &CheckOptions) -> CheckOptions {
        let mut o = base.clone();
        o.probes.extend(self.probes.iter().cloned());
        o.poly_probes.extend(self.poly_probes.iter().cloned());
        o
    }

    /// Whether this is one of the small rings swept by the rigidity lemma.
    pub fn in_sweep(&self) -> bool {
        self.name.starts_with("zn")
    }
}

fn expect(check: Check, kind: OutcomeKind, anchor: &str) -> Expectation {
    Expectation {
        check,
        kind,
        detail: None,
        min_checked: None,
        anchor: anchor.into(),
    }
}

fn expect_detail(check: Check, kind: OutcomeKind, detail: &str, anchor: &str) -> Expectation {
    Expectation {
        detail: Some(detail.into()),
        ..expect(check, kind, anchor)
    }
}

fn at_least(mut e: Expectation, n: u64) -> Expectation {
    e.min_checked = Some(n);
    e
}

fn prop(p: Property) -> Check {
    Check::Property(p)
}

use OutcomeKind::{Fails, Holds, HoldsBounded, HypothesisError, Inconclusive, Value};

fn entry(name: &str, description: &str, ring: RingSpec, sigma: EndoSpec, delta: DerivSpec) -> CatalogEntry {
    CatalogEntry {
        name: name.into(),
        description: description.into(),
        ring,
        sigma,
        delta,
        probes: Vec::new(),
        poly_probes: Vec::new(),
        expectations: Vec::new(),
    }
}

fn sweep_entry(name: &str, ring: RingSpec, reduced: Option<&str>, pq_baer: Option<&str>) -> CatalogEntry {
    let mut e = entry(name, "small commutative ring for the rigidity sweep", ring, EndoSpec::Identity, DerivSpec::Zero);
    let outcome = |w: Option<&str>, p: Property, anchor: &str| match w {
        Some(w) => expect_detail(prop(p), Fails, w, anchor),
        None => expect(prop(p), Holds, anchor),
    };
    e.expectations = vec![
        outcome(reduced, Property::Reduced, "nilpotents of a finite commutative ring"),
        outcome(pq_baer, Property::PqBaerRight, "r(aR) versus the idempotents"),
        expect(prop(Property::Abelian), Holds, "commutative"),
        expect(Check::SemicentralMeet, Holds, "S_ℓ ∩ S_r = B in any ring"),
        expect(Check::RigidEquivalence, Holds, "rigid ⇔ (C_σ) + reduced over all endomorphisms"),
    ];
    e
}

/// Every built-in entry, in report order.
pub fn load_catalog() -> Vec<CatalogEntry> {
    let z2t = RingSpec::poly(RingSpec::zn(2), "t");
    let ut2 = RingSpec::ut2(RingSpec::zn(2));

    let mut z2poly = entry(
        "z2poly_eval0",
        "F2[t] with σ(f) = f(0)",
        z2t.clone(),
        EndoSpec::Eval0,
        DerivSpec::Zero,
    );
    z2poly.probes = vec!["1+t".into(), "t".into()];
    z2poly.expectations = vec![
        expect_detail(
            prop(Property::Compatible),
            Fails,
            "f=1+t, g=t",
            "(1+t)·σ(t) = 0 while (1+t)·t ≠ 0",
        ),
        expect_detail(prop(Property::CSigma), Fails, "f=1+t, g=t", "same pair violates (C_σ)"),
        expect_detail(Check::OrePqBaer, HypothesisError, "(C_σ)", "the transfer needs (C_σ), which fails here"),
        expect_detail(Check::OreIdempotents, Value, "{0, 1}", "x·t = 0 leaves only trivial idempotents"),
        expect(Check::CompatLemma, Holds, "vacuous: not compatible"),
    ];

    let mut tri4 = entry(
        "tri4_negate",
        "{(a,b) : a,b in Z4} ≅ [[a,b],[0,a]] with σ(a,b) = (a,-b)",
        RingSpec::tri2(RingSpec::zn(4)),
        EndoSpec::NegateOffdiag,
        DerivSpec::Zero,
    );
    tri4.poly_probes = vec!["(2,0)+(2,1)x".into()];
    tri4.expectations = vec![
        at_least(
            expect(prop(Property::Compatible), Holds, "aσ(b) = 0 ⇔ ab = 0 over all 256 pairs"),
            256,
        ),
        expect_detail(
            prop(Property::SkewArmendariz),
            Fails,
            "p=q=(2,0)+(2,1)x, i=1, j=0",
            "p² = 0 but a₁σ(b₀) = (0,2)",
        ),
        expect_detail(
            prop(Property::PqBaerRight),
            Fails,
            "a=(2,0)",
            "r((2,0)R) = {(c,d) : c,d in {0,2}} has no idempotent generator",
        ),
        expect(prop(Property::Abelian), Holds, "idempotents are (0,0) and (1,0)"),
        expect(prop(Property::Stable), Holds, "only trivial idempotents"),
        expect_detail(Check::Idempotents, Value, "{(0,0), (1,0)}", "(a,b)² = (a,b) forces b = 0"),
        expect(Check::SemicentralMeet, Holds, "S_ℓ ∩ S_r = B in any ring"),
        expect(Check::StabilityLemma, Holds, "cσ(ab) = cδ(ab) = 0 under the stability hypotheses"),
        expect(Check::CompatLemma, Holds, "compatible, so ab = 0 ⇒ a·f_i^j(b) = 0"),
        expect_detail(Check::OrePqBaer, HypothesisError, "right p.q.-Baer", "R itself is not right p.q.-Baer"),
        expect_detail(Check::Roundtrip, Holds, "none", "no branch applies to a non-p.q.-Baer ring"),
    ];

    let mut int_rat = entry(
        "int_rat_tri_halve",
        "{(a,t) : a in Z, t in Q} ≅ [[a,t],[0,a]] with σ(a,t) = (a,t/2)",
        RingSpec::IntRatTri,
        EndoSpec::HalveOffdiag,
        DerivSpec::Zero,
    );
    int_rat.probes = vec!["(0,1)".into()];
    int_rat.expectations = vec![
        expect_detail(prop(Property::Rigid), Fails, "a=(0,1)", "(0,1)·σ(0,1) = (0,0)"),
        at_least(
            expect(prop(Property::CSigma), Inconclusive, "(C_σ) holds; sampling finds no refutation"),
            2000,
        ),
        expect_detail(Check::Idempotents, Value, "{(0,0), (1,0)}", "(a,t)² = (a,t) forces a in {0,1}, t = 0"),
        expect(prop(Property::Stable), Holds, "only trivial idempotents"),
    ];

    let mut t2f2 = entry("t2f2_id", "upper triangular 2x2 over F2, σ = id, δ = 0", ut2.clone(), EndoSpec::Identity, DerivSpec::Zero);
    t2f2.poly_probes = vec!["(1,0,0)+(0,1,0)x".into(), "(0,0,1)+(0,1,0)x".into()];
    t2f2.expectations = vec![
        expect(prop(Property::PqBaerRight), Holds, "T2 over a field is right p.q.-Baer"),
        expect(prop(Property::Stable), Holds, "σ = id, δ = 0 fix every Re"),
        expect(prop(Property::CSigma), Holds, "σ = id"),
        expect_detail(
            prop(Property::SkewArmendariz),
            Fails,
            "p=(1,0,0)+(0,1,0)x, q=(0,0,1)+(0,1,0)x, i=1, j=0",
            "(E11+E12x)(E22+E12x) = 0 but E12·E22 ≠ 0",
        ),
        expect(Check::SemicentralMeet, Holds, "S_ℓ ∩ S_r = B in any ring"),
        expect(Check::StabilityLemma, Holds, "cσ(ab) = cδ(ab) = 0 under the stability hypotheses"),
        expect(Check::CompatLemma, Holds, "σ = id, δ = 0"),
        expect(Check::OrePqBaer, HoldsBounded, "R[x] is right p.q.-Baer when R is"),
        expect(Check::Converse, HoldsBounded, "idempotents agree at ring and Ore level"),
        expect_detail(Check::Roundtrip, Holds, "forward", "stability and (C_σ) give the forward direction"),
    ];

    let mut inner = entry(
        "t2f2_inner",
        "upper triangular 2x2 over F2, σ = id, δ = [E12, -]",
        ut2.clone(),
        EndoSpec::Identity,
        DerivSpec::Inner("(0,1,0)".into()),
    );
    inner.expectations = vec![
        expect(prop(Property::PqBaerRight), Holds, "T2 over a field is right p.q.-Baer"),
        expect_detail(
            prop(Property::Stable),
            Fails,
            "e=(1,0,0), r=(1,0,0), map=δ",
            "δ(E11) = E12 leaves R·E11",
        ),
        expect(Check::StabilityLemma, Holds, "cσ(ab) = cδ(ab) = 0 under the stability hypotheses"),
        expect(Check::SemicentralMeet, Holds, "S_ℓ ∩ S_r = B in any ring"),
    ];

    let mut tsum = entry(
        "tsum_square",
        "T2(F2) ⊕ F2[y] with σ = id ⊕ (y ↦ y²)",
        RingSpec::sum(ut2, RingSpec::poly(RingSpec::zn(2), "y")),
        EndoSpec::Componentwise(Box::new(EndoSpec::Identity), Box::new(EndoSpec::SquareVar)),
        DerivSpec::Zero,
    );
    tsum.expectations = vec![
        at_least(
            expect(prop(Property::CSigma), Inconclusive, "domain component: a(y)b(y²) = 0 ⇒ ab = 0"),
            2000,
        ),
        expect(prop(Property::Stable), Holds, "stable on each summand"),
    ];

    let mut gauss = entry(
        "gauss_conj",
        "Q(i) with σ(z) = conj(z), δ(z) = z - conj(z)",
        RingSpec::Gauss,
        EndoSpec::Conj,
        DerivSpec::ConjDiff,
    );
    gauss.expectations = vec![
        at_least(expect(prop(Property::Rigid), Inconclusive, "a field: zσ(z) = |z|² ≠ 0"), 2000),
        at_least(expect(prop(Property::Reduced), Inconclusive, "a field has no nilpotents"), 2000),
        expect_detail(Check::Idempotents, Value, "{0, 1}", "a field"),
    ];

    vec![
        z2poly,
        tri4,
        int_rat,
        t2f2,
        inner,
        tsum,
        gauss,
        sweep_entry("zn2", RingSpec::zn(2), None, None),
        sweep_entry("zn3", RingSpec::zn(3), None, None),
        sweep_entry("zn4", RingSpec::zn(4), Some("a=2"), Some("a=2")),
        sweep_entry("zn2_sum_zn2", RingSpec::sum(RingSpec::zn(2), RingSpec::zn(2)), None, None),
    ]
}

pub fn find_entry(name: &str) -> Result<CatalogEntry> {
    load_catalog()
        .into_iter()
        .find(|e| e.name == name)
        .ok_or_else(|| {
            let names: Vec<String> = load_catalog().into_iter().map(|e| e.name).collect();
            Error::parse(name, format!("a catalog name ({})", names.join(", ")))
        })
}

/// The rings swept by the rigidity lemma.
pub fn sweep_rings() -> Result<Vec<Ring>> {
    load_catalog()
        .into_iter()
        .filter(CatalogEntry::in_sweep)
        .map(|e| build_ring(&e.ring))
        .collect()
}

fn fmt_set(ring: &Ring, xs: &[crate::elem::Elem]) -> String {
    format!("{{{}}}", xs.iter().map(|x| ring.fmt_elem(x)).collect::<Vec<_>>().join(", "))
}

/// Runs a single check against a quasi-derivation.
pub fn run_check(check: Check, qd: &QuasiDerivation, opts: &LabOptions) -> Outcome {
    let ring = qd.ring();
    match check {
        Check::Property(p) => Outcome::from_result(crate::properties::check(p, qd, &opts.check)),
        Check::Idempotents => match ring.known_idempotents() {
            Some(idem) => Outcome::value(fmt_set(ring, &idem)),
            None => Outcome {
                kind: OutcomeKind::Inconclusive,
                detail: Some("idempotents are not known for this ring".into()),
                checked: None,
                verdict: None,
            },
        },
        Check::SemicentralMeet => Outcome::from_result(semicentral_meet(ring)),
        Check::StabilityLemma => Outcome::from_result(lemma_stability(qd, 6)),
        Check::CompatLemma => Outcome::from_result(lemma_compat_f(qd, 4)),
        Check::RigidEquivalence => Outcome::from_result(lemma_rigid_equivalence(std::slice::from_ref(ring))),
        Check::OrePqBaer => Outcome::from_result(ore_pq_baer_bounded(qd, opts.deg_p, opts.deg_phi, &opts.check)),
        Check::Converse => Outcome::from_result(converse_extraction(qd, opts.converse_deg)),
        Check::OreIdempotents => match ore_idempotents_bounded(qd, 4, 2) {
            Ok(ps) => Outcome::value(format!(
                "{{{}}}",
                ps.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", ")
            )),
            Err(e) => Outcome::from_result(Err(e)),
        },
        Check::Roundtrip => {
            let r = theorem_roundtrip(qd, opts);
            let which = if r.theorem_asserted {
                "theorem"
            } else if r.forward_asserted {
                "forward"
            } else {
                "none"
            };
            Outcome {
                kind: if r.consistent { OutcomeKind::Holds } else { OutcomeKind::Fails },
                detail: Some(which.into()),
                checked: None,
                verdict: None,
            }
        }
    }
}

/// `S_ℓ ∩ S_r = B`.
pub fn semicentral_meet(ring: &Ring) -> Result<Verdict> {
    let p = idempotent_profile(ring)?;
    let meet: Vec<_> = p
        .left_semicentral
        .iter()
        .filter(|e| p.right_semicentral.contains(e))
        .cloned()
        .collect();
    let bounds = crate::verdict::Bounds {
        checked: Some(p.idempotents.len() as u64),
        ..Default::default()
    };
    Ok(if meet == p.central {
        Verdict::holds(bounds)
    } else {
        Verdict::inconclusive(
            bounds,
            format!("S_ℓ ∩ S_r = {} but B = {}", fmt_set(ring, &meet), fmt_set(ring, &p.central)),
        )
    })
}

/// One evaluated expectation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Row {
    pub check: Check,
    pub expected: Expectation,
    pub actual: Outcome,
    /// Replay of the reported witness, when there is one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub replayed: Option<bool>,
    pub matched: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryReport {
    pub name: String,
    pub rows: Vec<Row>,
}

impl EntryReport {
    pub fn mismatches(&self) -> impl Iterator<Item = &Row> {
        self.rows.iter().filter(|r| !r.matched)
    }
}

/// Evaluates every expectation of an entry. Build failures become mismatched rows.
pub fn run_entry(entry: &CatalogEntry, base: &LabOptions) -> EntryReport {
    let opts = LabOptions {
        check: entry.options(&base.check),
        ..base.clone()
    };
    let qd = entry.quasi_derivation();
    let rows = entry
        .expectations
        .par_iter()
        .map(|exp| {
            let actual = match &qd {
                Ok(qd) => run_check(exp.check, qd, &opts),
                Err(e) => Outcome::from_result(Err(e.clone())),
            };
            let replayed = match (&qd, actual.verdict.as_ref().and_then(|v| v.witness.as_ref())) {
                (Ok(qd), Some(w)) => Some(w.replay(qd).unwrap_or(false)),
                _ => None,
            };
            let matched = exp.matches(&actual) && replayed != Some(false);
            Row {
                check: exp.check,
                expected: exp.clone(),
                actual,
                replayed,
                matched,
            }
        })
        .collect();
    EntryReport {
        name: entry.name.clone(),
        rows,
    }
}

/// Runs the whole catalog, in catalog order.
pub fn run_catalog(opts: &LabOptions) -> Vec<EntryReport> {
    load_catalog().par_iter().map(|e| run_entry(e, opts)).collect()
}

impl FromStr for Check {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if let Ok(p) = s.parse::<Property>() {
            return Ok(Check::Property(p));
        }
        Ok(match s {
            "idempotents" => Check::Idempotents,
            "semicentral-meet" => Check::SemicentralMeet,
            "stability-lemma" => Check::StabilityLemma,
            "compat-lemma" => Check::CompatLemma,
            "rigid-equivalence" => Check::RigidEquivalence,
            "ore-pq-baer" => Check::OrePqBaer,
            "converse" => Check::Converse,
            "ore-idempotents" => Check::OreIdempotents,
            "roundtrip" => Check::Roundtrip,
            _ => return Err(Error::parse(s, "a property name or lab check")),
        })
    }
}
