//! Decision procedures for ring properties.
//!
//! On enumerable rings every check is an exhaustive scan and reports the first
//! violation in canonical order. On sampleable rings a check tries the caller's
//! probe elements, then the ring's small canonical elements, then seeded random
//! samples; it can refute but never certify, so a clean run is `Inconclusive`.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::annihilators::{
    ann_lattice_closure, idempotent_generator_ix, left_ann_principal_ix, left_multiples, profile_ix,
    right_ann_principal_ix, LatticeKind, Side,
};
use crate::elem::Elem;
use crate::error::{Error, Result};
use crate::maps::QuasiDerivation;
use crate::ore::{all_polys, monomial_product, poly_count, SkewPoly};
use crate::ring::{FiniteRing, Ring};
use crate::verdict::{Bounds, MapName, Twist, Verdict, VerdictKind, Witness};

/// Parameters shared by all checks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckOptions {
    /// Random cases drawn by sampled checks.
    pub samples: usize,
    pub seed: u64,
    /// Degree bound for skew-Armendariz scans; `None` picks 2 for rings of at
    /// most 8 elements and 1 otherwise.
    pub deg_bound: Option<usize>,
    pub scan_cap: u64,
    /// Element literals tried before anything else.
    #[serde(default)]
    pub probes: Vec<String>,
    /// Polynomial literals tried first by the skew-Armendariz scan.
    #[serde(default)]
    pub poly_probes: Vec<String>,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            samples: 2000,
            seed: 0,
            deg_bound: None,
            scan_cap: 1_000_000,
            probes: Vec::new(),
            poly_probes: Vec::new(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    Reduced,
    Abelian,
    Semiprime,
    Baer,
    QuasiBaer,
    PqBaerRight,
    PqBaerLeft,
    PpRight,
    Rigid,
    CSigma,
    Compatible,
    SkewArmendariz,
    Stable,
}

impl Property {
    pub const ALL: [Property; 13] = [
        Property::Reduced,
        Property::Abelian,
        Property::Semiprime,
        Property::Baer,
        Property::QuasiBaer,
        Property::PqBaerRight,
        Property::PqBaerLeft,
        Property::PpRight,
        Property::Rigid,
        Property::CSigma,
        Property::Compatible,
        Property::SkewArmendariz,
        Property::Stable,
    ];

    /// Command-line name.
    pub fn name(self) -> &'static str {
        match self {
            Property::Reduced => "reduced",
            Property::Abelian => "abelian",
            Property::Semiprime => "semiprime",
            Property::Baer => "baer",
            Property::QuasiBaer => "quasi-baer",
            Property::PqBaerRight => "pq-baer-right",
            Property::PqBaerLeft => "pq-baer-left",
            Property::PpRight => "pp-right",
            Property::Rigid => "rigid",
            Property::CSigma => "c-sigma",
            Property::Compatible => "compatible",
            Property::SkewArmendariz => "skew-armendariz",
            Property::Stable => "stable",
        }
    }

    /// Label used in report tables.
    pub fn label(self) -> &'static str {
        match self {
            Property::Reduced => "reduced",
            Property::Abelian => "abelian",
            Property::Semiprime => "semiprime",
            Property::Baer => "Baer",
            Property::QuasiBaer => "quasi-Baer",
            Property::PqBaerRight => "right p.q.-Baer",
            Property::PqBaerLeft => "left p.q.-Baer",
            Property::PpRight => "right p.p.",
            Property::Rigid => "σ-rigid",
            Property::CSigma => "(C_σ)",
            Property::Compatible => "(σ,δ)-compatible",
            Property::SkewArmendariz => "(σ,δ)-skew Armendariz",
            Property::Stable => "Re (σ,δ)-stable for e in S_ℓ",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Property {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Property::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Property::ALL.iter().map(|p| p.name()).collect();
                Error::parse(s, format!("one of {}", names.join(", ")))
            })
    }
}

/// Runs one property check.
pub fn check(property: Property, qd: &QuasiDerivation, opts: &CheckOptions) -> Result<Verdict> {
    let ring = qd.ring();
    match property {
        Property::Reduced => is_reduced(ring, opts),
        Property::Abelian => is_abelian(ring, opts),
        Property::Semiprime => is_semiprime(ring),
        Property::Baer => is_baer(ring),
        Property::QuasiBaer => is_quasi_baer(ring),
        Property::PqBaerRight => is_right_pq_baer(ring),
        Property::PqBaerLeft => is_left_pq_baer(ring),
        Property::PpRight => is_right_pp(ring),
        Property::Rigid => is_sigma_rigid(qd, opts),
        Property::CSigma => satisfies_c_sigma(qd, opts),
        Property::Compatible => Ok(is_compatible(qd, opts)?.both),
        Property::SkewArmendariz => is_skew_armendariz(qd, opts),
        Property::Stable => is_stable(qd),
    }
}

// ---- candidate generation -----------------------------------------------

fn parse_probes(ring: &Ring, opts: &CheckOptions) -> Result<Vec<Elem>> {
    let mut out: Vec<Elem> = opts.probes.iter().map(|p| ring.parse_elem(p)).collect::<Result<_>>()?;
    for p in ring.probes().into_iter().take(24) {
        if !out.contains(&p) {
            out.push(p);
        }
    }
    Ok(out)
}

fn sampled_bounds(checked: usize, opts: &CheckOptions) -> Bounds {
    Bounds {
        checked: Some(checked as u64),
        samples: Some(opts.samples as u64),
        seed: Some(opts.seed),
        refutations: Some(0),
        ..Bounds::default()
    }
}

fn exhaustive_bounds(checked: usize) -> Bounds {
    Bounds {
        checked: Some(checked as u64),
        ..Bounds::default()
    }
}

/// Scans single elements for a violation.
fn scan_singles<F>(ring: &Ring, opts: &CheckOptions, test: F) -> Result<Verdict>
where
    F: Fn(&Elem) -> Option<Witness> + Sync,
{
    if let Some(f) = ring.finite() {
        let hit = f.indices().into_par_iter().find_map_first(|a| test(&Elem::Idx(a)));
        return Ok(match hit {
            Some(w) => Verdict::fails(w, exhaustive_bounds(f.size())),
            None => Verdict::holds(exhaustive_bounds(f.size())),
        });
    }
    let mut cands = parse_probes(ring, opts)?;
    let fixed = cands.len();
    cands.extend(ring.sample(opts.seed, opts.samples)?);
    Ok(match cands.par_iter().find_map_first(&test) {
        Some(w) => Verdict::fails(
            w,
            Bounds {
                seed: Some(opts.seed),
                ..Bounds::default()
            },
        ),
        None => Verdict::inconclusive(
            sampled_bounds(cands.len(), opts),
            format!(
                "no refutation among {} elements ({fixed} probes, {} samples)",
                cands.len(),
                opts.samples
            ),
        ),
    })
}

/// Scans ordered pairs for a violation.
fn scan_pairs<F>(ring: &Ring, opts: &CheckOptions, test: F) -> Result<Verdict>
where
    F: Fn(&Elem, &Elem) -> Option<Witness> + Sync,
{
    if let Some(f) = ring.finite() {
        let n = f.size() as u64;
        let hit = (0..n * n)
            .into_par_iter()
            .find_map_first(|k| test(&Elem::Idx((k / n) as u32), &Elem::Idx((k % n) as u32)));
        let checked = (n * n) as usize;
        return Ok(match hit {
            Some(w) => Verdict::fails(w, exhaustive_bounds(checked)),
            None => Verdict::holds(exhaustive_bounds(checked)),
        });
    }
    let probes = parse_probes(ring, opts)?;
    let mut pairs: Vec<(Elem, Elem)> = probes
        .iter()
        .flat_map(|a| probes.iter().map(move |b| (a.clone(), b.clone())))
        .collect();
    let fixed = pairs.len();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.samples {
        let a = ring.sample_with(&mut rng);
        let b = ring.sample_with(&mut rng);
        pairs.push((a, b));
    }
    Ok(match pairs.par_iter().find_map_first(|(a, b)| test(a, b)) {
        Some(w) => Verdict::fails(
            w,
            Bounds {
                seed: Some(opts.seed),
                ..Bounds::default()
            },
        ),
        None => Verdict::inconclusive(
            sampled_bounds(pairs.len(), opts),
            format!(
                "no refutation among {} pairs ({fixed} probe pairs, {} samples)",
                pairs.len(),
                opts.samples
            ),
        ),
    })
}

fn pair_names(ring: &Ring) -> [String; 2] {
    if ring.poly_base().is_some() {
        ["f".into(), "g".into()]
    } else {
        ["a".into(), "b".into()]
    }
}

// ---- ring-only properties -------------------------------------------------

/// No nonzero nilpotents. A nonzero nilpotent has a nonzero power squaring to
/// zero, so scanning `a² = 0` suffices.
pub fn is_reduced(ring: &Ring, opts: &CheckOptions) -> Result<Verdict> {
    scan_singles(ring, opts, |a| {
        (!ring.is_zero(a) && ring.is_zero(&ring.mul(a, a))).then(|| Witness::Nilpotent { a: ring.fmt_elem(a) })
    })
}

/// Every idempotent is central.
pub fn is_abelian(ring: &Ring, opts: &CheckOptions) -> Result<Verdict> {
    if let Some(f) = ring.finite() {
        let profile = profile_ix(f);
        for &e in &profile.idempotents {
            if let Some(r) = f.indices().find(|&r| f.mul(e, r) != f.mul(r, e)) {
                return Ok(Verdict::fails(
                    Witness::NonCentralIdempotent {
                        e: ring.fmt_elem(&Elem::Idx(e)),
                        r: ring.fmt_elem(&Elem::Idx(r)),
                    },
                    exhaustive_bounds(f.size()),
                ));
            }
        }
        return Ok(Verdict::holds(exhaustive_bounds(f.size())));
    }
    let Some(idem) = ring.known_idempotents() else {
        return Ok(Verdict::inconclusive(Bounds::default(), "idempotents are not known for this ring"));
    };
    let v = scan_singles(ring, opts, |r| {
        idem.iter().find(|e| ring.mul(e, r) != ring.mul(r, e)).map(|e| Witness::NonCentralIdempotent {
            e: ring.fmt_elem(e),
            r: ring.fmt_elem(r),
        })
    })?;
    Ok(v)
}

/// `a·R·a = 0` forces `a = 0`.
pub fn is_semiprime(ring: &Ring) -> Result<Verdict> {
    let Some(f) = ring.finite() else {
        return Ok(Verdict::inconclusive(
            Bounds::default(),
            "a refutation needs a·r·a = 0 for every r, which sampling cannot establish",
        ));
    };
    let hit = f
        .indices()
        .into_par_iter()
        .find_first(|&a| a != 0 && f.indices().all(|r| f.mul(f.mul(a, r), a) == 0));
    Ok(match hit {
        Some(a) => Verdict::fails(
            Witness::NotSemiprime {
                a: ring.fmt_elem(&Elem::Idx(a)),
            },
            exhaustive_bounds(f.size()),
        ),
        None => Verdict::holds(exhaustive_bounds(f.size())),
    })
}

fn needs_enumerable(what: &str) -> Verdict {
    Verdict::inconclusive(
        Bounds {
            checked: Some(0),
            refutations: Some(0),
            ..Bounds::default()
        },
        format!("{what} needs an enumerable ring; nothing was checked"),
    )
}

fn fmt_ix(ring: &Ring, xs: &[u32]) -> Vec<String> {
    xs.iter().map(|&x| ring.fmt_elem(&Elem::Idx(x))).collect()
}

/// Scans `a` in order; each `a` yields one annihilator that must have an
/// idempotent generator.
fn scan_principal(ring: &Ring, side: Side, principal: bool, ann: impl Fn(&FiniteRing, u32) -> Vec<u32> + Sync) -> Result<Verdict> {
    let Some(f) = ring.finite() else {
        return Ok(needs_enumerable("annihilator computation"));
    };
    let hit = f.indices().into_par_iter().find_map_first(|a| {
        let members = ann(f, a);
        idempotent_generator_ix(f, side, &members).is_none().then_some((a, members))
    });
    Ok(match hit {
        Some((a, members)) => Verdict::fails(
            Witness::NoIdempotentGenerator {
                side,
                principal,
                generators: fmt_ix(ring, &[a]),
                annihilator: fmt_ix(ring, &members),
            },
            exhaustive_bounds(f.size()),
        ),
        None => Verdict::holds(exhaustive_bounds(f.size())),
    })
}

/// `r(aR) = eR` for an idempotent `e`, for every `a`.
pub fn is_right_pq_baer(ring: &Ring) -> Result<Verdict> {
    scan_principal(ring, Side::Right, true, right_ann_principal_ix)
}

/// `ℓ(Ra) = Re` for an idempotent `e`, for every `a`.
pub fn is_left_pq_baer(ring: &Ring) -> Result<Verdict> {
    scan_principal(ring, Side::Left, true, left_ann_principal_ix)
}

/// `r(a) = eR` for an idempotent `e`, for every `a`.
pub fn is_right_pp(ring: &Ring) -> Result<Verdict> {
    scan_principal(ring, Side::Right, false, |f, a| f.indices().filter(|&b| f.mul(a, b) == 0).collect())
}

fn scan_lattice(ring: &Ring, kind: LatticeKind) -> Result<Verdict> {
    let Some(f) = ring.finite() else {
        return Ok(needs_enumerable("annihilator lattice closure"));
    };
    let closure = ann_lattice_closure(ring, kind)?;
    let generator_ann = |a: u32| -> Vec<u32> {
        match kind {
            LatticeKind::Baer => f.indices().filter(|&b| f.mul(a, b) == 0).collect(),
            LatticeKind::QuasiBaer => right_ann_principal_ix(f, a),
        }
    };
    for member in &closure {
        let m: Vec<u32> = member.members.iter().map(|e| e.idx().unwrap()).collect();
        if idempotent_generator_ix(f, Side::Right, &m).is_some() {
            continue;
        }
        // greedy generating set: annihilators containing m whose meet is m
        let mut current: Vec<u32> = f.indices().collect();
        let mut gens = Vec::new();
        for a in f.indices() {
            let ann = generator_ann(a);
            if !m.iter().all(|x| ann.binary_search(x).is_ok()) {
                continue;
            }
            let next: Vec<u32> = current.iter().copied().filter(|x| ann.binary_search(x).is_ok()).collect();
            if next.len() < current.len() {
                gens.push(a);
                current = next;
            }
            if current == m {
                break;
            }
        }
        debug_assert_eq!(current, m);
        return Ok(Verdict::fails(
            Witness::NoIdempotentGenerator {
                side: Side::Right,
                principal: kind == LatticeKind::QuasiBaer,
                generators: fmt_ix(ring, &gens),
                annihilator: fmt_ix(ring, &m),
            },
            exhaustive_bounds(closure.len()),
        ));
    }
    Ok(Verdict::holds(exhaustive_bounds(closure.len())))
}

/// Right annihilators of all nonempty subsets are idempotent-generated.
pub fn is_baer(ring: &Ring) -> Result<Verdict> {
    scan_lattice(ring, LatticeKind::Baer)
}

/// Right annihilators of all right ideals are idempotent-generated.
pub fn is_quasi_baer(ring: &Ring) -> Result<Verdict> {
    scan_lattice(ring, LatticeKind::QuasiBaer)
}

// ---- properties of (σ, δ) -------------------------------------------------

/// `a·σ(a) = 0` forces `a = 0`.
pub fn is_sigma_rigid(qd: &QuasiDerivation, opts: &CheckOptions) -> Result<Verdict> {
    let ring = qd.ring();
    let sigma = qd.sigma();
    scan_singles(ring, opts, |a| {
        (!ring.is_zero(a) && ring.is_zero(&ring.mul(a, &sigma.apply(a)))).then(|| Witness::NotRigid {
            a: ring.fmt_elem(a),
        })
    })
}

fn tautology(note: &str) -> Verdict {
    Verdict::holds(Bounds::default()).with_note(note)
}

/// `(C_σ)`: `a·σ(b) = 0` implies `a·b = 0`.
pub fn satisfies_c_sigma(qd: &QuasiDerivation, opts: &CheckOptions) -> Result<Verdict> {
    let ring = qd.ring();
    let sigma = qd.sigma();
    if sigma.is_identity() {
        return Ok(tautology("σ is the identity, so the condition is a tautology"));
    }
    let names = pair_names(ring);
    scan_pairs(ring, opts, |a, b| {
        (ring.is_zero(&ring.mul(a, &sigma.apply(b))) && !ring.is_zero(&ring.mul(a, b))).then(|| Witness::Twisted {
            relation: Twist::CSigma,
            names: names.clone(),
            a: ring.fmt_elem(a),
            b: ring.fmt_elem(b),
        })
    })
}

/// The two halves of (σ,δ)-compatibility and their conjunction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompatReport {
    /// `a·σ(b) = 0 ⇔ a·b = 0`.
    pub sigma: Verdict,
    /// `a·b = 0 ⇒ a·δ(b) = 0`.
    pub delta: Verdict,
    pub both: Verdict,
}

pub fn is_compatible(qd: &QuasiDerivation, opts: &CheckOptions) -> Result<CompatReport> {
    let ring = qd.ring();
    let sigma = qd.sigma();
    let delta = qd.delta();
    let names = pair_names(ring);
    let sigma_v = if sigma.is_identity() {
        tautology("σ is the identity")
    } else {
        scan_pairs(ring, opts, |a, b| {
            let ab = ring.is_zero(&ring.mul(a, b));
            let asb = ring.is_zero(&ring.mul(a, &sigma.apply(b)));
            let relation = match (ab, asb) {
                (true, false) => Twist::SigmaForward,
                (false, true) => Twist::CSigma,
                _ => return None,
            };
            Some(Witness::Twisted {
                relation,
                names: names.clone(),
                a: ring.fmt_elem(a),
                b: ring.fmt_elem(b),
            })
        })?
    };
    let delta_v = if delta.is_zero() {
        tautology("δ = 0")
    } else {
        scan_pairs(ring, opts, |a, b| {
            (ring.is_zero(&ring.mul(a, b)) && !ring.is_zero(&ring.mul(a, &delta.apply(b)))).then(|| Witness::Twisted {
                relation: Twist::Delta,
                names: names.clone(),
                a: ring.fmt_elem(a),
                b: ring.fmt_elem(b),
            })
        })?
    };
    let both = conjunction(&[&sigma_v, &delta_v]);
    Ok(CompatReport {
        sigma: sigma_v,
        delta: delta_v,
        both,
    })
}

/// Conjunction of verdicts: the first failure wins, otherwise the weakest kind.
pub fn conjunction(parts: &[&Verdict]) -> Verdict {
    if let Some(failed) = parts.iter().find(|v| v.kind == VerdictKind::Fails) {
        return (*failed).clone();
    }
    let weakest = parts
        .iter()
        .map(|v| v.kind)
        .max_by_key(|k| match k {
            VerdictKind::Holds => 0,
            VerdictKind::HoldsBounded => 1,
            _ => 2,
        })
        .unwrap_or(VerdictKind::Holds);
    let checked = parts.iter().filter_map(|v| v.bounds.checked).sum::<u64>();
    let seed = parts.iter().find_map(|v| v.bounds.seed);
    let mut out = Verdict::holds(Bounds {
        checked: Some(checked),
        seed,
        samples: parts.iter().find_map(|v| v.bounds.samples),
        refutations: seed.map(|_| 0),
        ..Bounds::default()
    });
    out.kind = weakest;
    let notes: Vec<&str> = parts.iter().filter_map(|v| v.note.as_deref()).collect();
    if !notes.is_empty() {
        out.note = Some(notes.join("; "));
    }
    out
}

/// Default skew-Armendariz degree bound for an `n`-element ring.
pub fn default_armendariz_bound(n: usize) -> usize {
    if n <= 8 {
        2
    } else {
        1
    }
}

/// The first violating monomial pair for `p·q = 0`, if any, starting from the
/// leading coefficient of `p`.
fn armendariz_violation(p: &SkewPoly, q: &SkewPoly) -> Option<(usize, usize)> {
    let qd = p.qd();
    for (i, a) in p.coeffs().iter().enumerate().rev() {
        for (j, b) in q.coeffs().iter().enumerate() {
            if !monomial_product(qd, a, i, b, j).is_zero() {
                return Some((i, j));
            }
        }
    }
    None
}

/// `(σ,δ)`-skew Armendariz up to a degree bound: `p·q = 0` forces every
/// `a_i x^i · b_j x^j = 0`.
pub fn is_skew_armendariz(qd: &QuasiDerivation, opts: &CheckOptions) -> Result<Verdict> {
    let ring = qd.ring();
    let probes: Vec<SkewPoly> = opts
        .poly_probes
        .iter()
        .map(|s| SkewPoly::parse(qd, s))
        .collect::<Result<_>>()?;
    let witness = |p: &SkewPoly, q: &SkewPoly| -> Option<Witness> {
        if !p.mul(q).ok()?.is_zero() {
            return None;
        }
        armendariz_violation(p, q).map(|(i, j)| Witness::Armendariz {
            p: p.to_string(),
            q: q.to_string(),
            i,
            j,
        })
    };
    let probe_pairs: Vec<(&SkewPoly, &SkewPoly)> =
        probes.iter().flat_map(|p| probes.iter().map(move |q| (p, q))).collect();
    let from_probes = probe_pairs.iter().find_map(|(p, q)| witness(p, q));

    if let Some(f) = ring.finite() {
        let d = opts.deg_bound.unwrap_or_else(|| default_armendariz_bound(f.size()));
        let pairs = poly_count(f.size(), d).saturating_mul(poly_count(f.size(), d));
        let bounds = Bounds {
            deg_bound: Some(d),
            checked: Some(pairs.min(u64::MAX as u128) as u64),
            ..Bounds::default()
        };
        if let Some(w) = from_probes {
            return Ok(Verdict::fails(w, Bounds { checked: Some(probe_pairs.len() as u64), ..bounds }));
        }
        if pairs <= opts.scan_cap as u128 {
            let polys = all_polys(qd, d, u64::MAX)?;
            let m = polys.len() as u64;
            let hit = (0..m * m)
                .into_par_iter()
                .find_map_first(|k| witness(&polys[(k / m) as usize], &polys[(k % m) as usize]));
            return Ok(match hit {
                Some(w) => Verdict::fails(w, bounds),
                None => Verdict::holds_bounded(bounds),
            });
        }
        if opts.deg_bound.is_some() {
            return Err(Error::cap(format!("N^(2(d+1)) for d={d}"), pairs, opts.scan_cap as u128));
        }
    } else if let Some(w) = from_probes {
        return Ok(Verdict::fails(
            w,
            Bounds {
                checked: Some(probe_pairs.len() as u64),
                ..Bounds::default()
            },
        ));
    }
    // sampled fallback: random polynomials rarely multiply to zero, so this
    // mostly records that nothing was found
    let d = opts.deg_bound.unwrap_or(1);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let elems = parse_probes(ring, opts)?;
    let mut polys: Vec<SkewPoly> = Vec::new();
    for a in &elems {
        for b in elems.iter().take(8) {
            polys.push(SkewPoly::new(qd, vec![a.clone(), b.clone()]));
        }
    }
    let fixed = polys.len();
    for _ in 0..opts.samples {
        let coeffs = (0..=d).map(|_| ring.sample_with(&mut rng)).collect();
        polys.push(SkewPoly::new(qd, coeffs));
    }
    let m = polys.len();
    let limit = (m * m).min(opts.samples.max(1) * 50);
    let hit = (0..limit).into_par_iter().find_map_first(|k| witness(&polys[k / m], &polys[k % m]));
    let bounds = Bounds {
        deg_bound: Some(d),
        ..sampled_bounds(limit + probe_pairs.len(), opts)
    };
    Ok(match hit {
        Some(w) => Verdict::fails(w, Bounds { refutations: None, ..bounds }),
        None => Verdict::inconclusive(
            bounds,
            format!("no refutation among {limit} sampled polynomial pairs ({fixed} probe polynomials)"),
        ),
    })
}

/// `σ(Re) ⊆ Re` and `δ(Re) ⊆ Re` for every `e ∈ S_ℓ`.
///
/// On a sampleable ring this is decided only when the idempotents are known in
/// closed form and all lie in `{0, 1}` (`R·0` and `R·1` are always stable), or
/// when the ring is a direct sum on which σ and δ act componentwise, in which
/// case the components are checked separately.
pub fn is_stable(qd: &QuasiDerivation) -> Result<Verdict> {
    let ring = qd.ring();
    if let Some(f) = ring.finite() {
        let profile = profile_ix(f);
        let sigma = qd.sigma().table().expect("finite σ table");
        let delta = qd.delta().table().expect("finite δ table");
        let mut checked = 0u64;
        for &e in &profile.left {
            for r in left_multiples(f, e) {
                checked += 1;
                for (map, image) in [(MapName::Sigma, sigma[r as usize]), (MapName::Delta, delta[r as usize])] {
                    if f.mul(image, e) != image {
                        return Ok(Verdict::fails(
                            Witness::Unstable {
                                e: ring.fmt_elem(&Elem::Idx(e)),
                                r: ring.fmt_elem(&Elem::Idx(r)),
                                map,
                            },
                            exhaustive_bounds(checked as usize),
                        ));
                    }
                }
            }
        }
        return Ok(Verdict::holds(exhaustive_bounds(checked as usize)));
    }
    if let (Some(_), Some(left), Some(right)) = (ring.sum_parts(), qd.component(0), qd.component(1)) {
        let (l, r) = (is_stable(&left)?, is_stable(&right)?);
        let mut v = conjunction(&[&l, &r]);
        v.witness = None;
        if v.kind == VerdictKind::Fails {
            return Ok(Verdict::inconclusive(
                Bounds::default(),
                format!("a component is not stable (left: {}, right: {})", l.short(), r.short()),
            ));
        }
        v.note = Some(format!(
            "S_ℓ and Re split over the summands; left {}, right {}",
            l.short(),
            r.short()
        ));
        return Ok(v);
    }
    match ring.known_idempotents() {
        Some(idem) if idem.iter().all(|e| ring.is_zero(e) || *e == ring.one()) => Ok(Verdict::holds(Bounds {
            checked: Some(idem.len() as u64),
            ..Bounds::default()
        })
        .with_note("the only idempotents are 0 and 1, and R·0, R·1 are always stable")),
        _ => Ok(needs_enumerable("left semicentral idempotents")),
    }
}

/// `S_ℓ = B`.
pub fn left_semicentral_are_central(ring: &Ring) -> Result<bool> {
    let f = ring.require_finite("left_semicentral_are_central")?;
    let p = profile_ix(f);
    Ok(p.left == p.central)
}

/// `σ(Re) ⊆ Re` for every central idempotent `e`.
pub fn sigma_preserves_central(qd: &QuasiDerivation) -> Result<bool> {
    let ring = qd.ring();
    let f = ring.require_finite("sigma_preserves_central")?;
    let sigma = qd.sigma().table().expect("finite σ table");
    let p = profile_ix(f);
    Ok(p.central.iter().all(|&e| {
        left_multiples(f, e).into_iter().all(|r| {
            let s = sigma[r as usize];
            f.mul(s, e) == s
        })
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::{DerivSpec, EndoSpec};
    use crate::ring::{build_ring, RingSpec};

    fn qd(spec: RingSpec, sigma: EndoSpec, delta: DerivSpec) -> QuasiDerivation {
        QuasiDerivation::from_specs(&build_ring(&spec).unwrap(), &sigma, &delta).unwrap()
    }

    fn tri4() -> QuasiDerivation {
        qd(RingSpec::tri2(RingSpec::zn(4)), EndoSpec::NegateOffdiag, DerivSpec::Zero)
    }

    fn opts() -> CheckOptions {
        CheckOptions::default()
    }

    #[test]
    fn property_names_round_trip() {
        for p in Property::ALL {
            assert_eq!(p.name().parse::<Property>().unwrap(), p);
        }
        assert!(matches!("bogus".parse::<Property>(), Err(Error::Parse { .. })));
    }

    #[test]
    fn zn4_not_reduced() {
        let r = build_ring(&RingSpec::zn(4)).unwrap();
        assert_eq!(is_reduced(&r, &opts()).unwrap().short(), "FAILS (a=2)");
    }

    #[test]
    fn tri4_verdicts() {
        let q = tri4();
        let r = q.ring();
        assert_eq!(is_abelian(r, &opts()).unwrap().kind, VerdictKind::Holds);
        let pq = is_right_pq_baer(r).unwrap();
        assert_eq!(pq.short(), "FAILS (a=(2,0))");
        assert!(pq.witness.as_ref().unwrap().replay(&q).unwrap());
        let c = is_compatible(&q, &opts()).unwrap();
        assert_eq!(c.both.kind, VerdictKind::Holds);
        assert_eq!(c.sigma.bounds.checked, Some(256));
    }

    #[test]
    fn gauss_rigid_inconclusive() {
        let q = qd(RingSpec::Gauss, EndoSpec::Conj, DerivSpec::ConjDiff);
        let v = is_sigma_rigid(&q, &opts()).unwrap();
        assert_eq!(v.kind, VerdictKind::Inconclusive);
        assert_eq!(v.bounds.refutations, Some(0));
        assert!(v.bounds.checked.unwrap() >= 2000);
        let red = is_reduced(q.ring(), &opts()).unwrap();
        assert_eq!(red.kind, VerdictKind::Inconclusive);
    }

    #[test]
    fn eval0_c_sigma_with_probes() {
        let q = qd(RingSpec::poly(RingSpec::zn(2), "t"), EndoSpec::Eval0, DerivSpec::Zero);
        let o = CheckOptions {
            probes: vec!["1+t".into(), "t".into()],
            ..opts()
        };
        let v = satisfies_c_sigma(&q, &o).unwrap();
        assert_eq!(v.short(), "FAILS (f=1+t, g=t)");
        assert!(v.witness.unwrap().replay(&q).unwrap());
    }

    #[test]
    fn identity_c_sigma_is_tautology() {
        let q = qd(RingSpec::Gauss, EndoSpec::Identity, DerivSpec::Zero);
        assert_eq!(satisfies_c_sigma(&q, &opts()).unwrap().kind, VerdictKind::Holds);
    }

    #[test]
    fn field_is_baer_and_armendariz() {
        let q = qd(RingSpec::zn(2), EndoSpec::Identity, DerivSpec::Zero);
        assert_eq!(is_baer(q.ring()).unwrap().kind, VerdictKind::Holds);
        let o = CheckOptions {
            deg_bound: Some(4),
            ..opts()
        };
        assert_eq!(is_skew_armendariz(&q, &o).unwrap().kind, VerdictKind::HoldsBounded);
    }

    #[test]
    fn int_rat_tri_idempotents_stable() {
        let q = qd(RingSpec::IntRatTri, EndoSpec::HalveOffdiag, DerivSpec::Zero);
        assert_eq!(is_stable(&q).unwrap().kind, VerdictKind::Holds);
        assert_eq!(is_sigma_rigid(&q, &opts()).unwrap().short(), "FAILS (a=(0,1))");
    }
}
