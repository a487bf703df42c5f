//! Mechanical checks of the structural lemmas and of the idempotent
//! construction that transfers right p.q.-Baer from `R` to `R[x;σ,δ]`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::annihilators::{
    idempotent_generator_ix, left_multiples, profile_ix, right_ann_principal_ix, right_multiples, Side,
};
use crate::elem::Elem;
use crate::error::{Error, Result};
use crate::maps::{enumerate_endos, QuasiDerivation, SigmaDerivation};
use crate::ore::{all_polys, bounded_right_ann_capped, PrincipalKind, SkewPoly};
use crate::properties::{
    conjunction, is_reduced, is_right_pq_baer, is_sigma_rigid, is_compatible, is_skew_armendariz, is_stable,
    satisfies_c_sigma, CheckOptions,
};
use crate::ring::Ring;
use crate::verdict::{Bounds, MapName, Verdict, VerdictKind, Witness};

/// Number of random full polynomials used to cross-check the monomial form of Claim 1.
pub const CLAIM1_RANDOM: usize = 200;

fn fmt(ring: &Ring, x: u32) -> String {
    ring.fmt_elem(&Elem::Idx(x))
}

/// `c·f_k^j(ab) = 0` for every `k ≤ j ≤ j_max` whenever `b ∈ r(cR) = eR`,
/// `e ∈ S_ℓ` and `Re` is closed under σ and δ. `j = 1` covers `cσ(ab)` and `cδ(ab)`.
///
/// Every `f_k^j` value used is evaluated twice, from the memoized tables and by
/// word enumeration, and a disagreement is an error.
pub fn lemma_stability(qd: &QuasiDerivation, j_max: usize) -> Result<Verdict> {
    let ring = qd.ring();
    let f = ring.require_finite("lemma_stability")?;
    let n = f.size();
    // f_vals[j][k][v]
    let mut f_vals: Vec<Vec<Vec<u32>>> = Vec::with_capacity(j_max + 1);
    for j in 0..=j_max {
        let mut row = Vec::with_capacity(j + 1);
        for k in 0..=j {
            let table = qd.f_table(k, j)?;
            let oracle: Vec<u32> = (0..n as u32)
                .into_par_iter()
                .map(|v| qd.f_map_oracle(k, j, &Elem::Idx(v)).map(|x| x.idx().unwrap()))
                .collect::<Result<_>>()?;
            if *table != oracle {
                let v = (0..n).find(|&v| table[v] != oracle[v]).unwrap();
                return Err(Error::Mismatch(format!(
                    "f_{k}^{j}({}): table {} vs words {}",
                    fmt(ring, v as u32),
                    fmt(ring, table[v]),
                    fmt(ring, oracle[v])
                )));
            }
            row.push(oracle);
        }
        f_vals.push(row);
    }

    let profile = profile_ix(f);
    let sigma = qd.sigma().table().expect("finite σ");
    let delta = qd.delta().table().expect("finite δ");
    let stable: Vec<u32> = profile
        .left
        .iter()
        .copied()
        .filter(|&e| {
            left_multiples(f, e).into_iter().all(|r| {
                let (s, d) = (sigma[r as usize], delta[r as usize]);
                f.mul(s, e) == s && f.mul(d, e) == d
            })
        })
        .collect();

    let mut tuples = 0u64;
    let mut nontrivial = 0u64;
    for &e in &stable {
        let e_r = right_multiples(f, e);
        for c in f.indices() {
            if right_ann_principal_ix(f, c) != e_r {
                continue;
            }
            for &b in &e_r {
                let hit = f.indices().into_par_iter().find_map_first(|a| {
                    let ab = f.mul(a, b) as usize;
                    (0..=j_max)
                        .flat_map(|j| (0..=j).map(move |k| (k, j)))
                        .find(|&(k, j)| f.mul(c, f_vals[j][k][ab]) != 0)
                        .map(|(k, j)| (a, k, j))
                });
                if let Some((a, k, j)) = hit {
                    return Ok(Verdict::fails(
                        Witness::StabilityLemma {
                            a: fmt(ring, a),
                            b: fmt(ring, b),
                            c: fmt(ring, c),
                            e: fmt(ring, e),
                            k,
                            j,
                        },
                        Bounds {
                            j_max: Some(j_max),
                            ..Bounds::default()
                        },
                    ));
                }
                tuples += n as u64;
                if b != 0 && c != 0 {
                    nontrivial += f.indices().filter(|&a| f.mul(a, b) != 0).count() as u64;
                }
            }
        }
    }
    let v = Verdict::holds(Bounds {
        j_max: Some(j_max),
        checked: Some(tuples),
        ..Bounds::default()
    })
    .with_note(format!(
        "{} stable semicentral idempotents, {tuples} tuples (a,b,c,e), {nontrivial} with c ≠ 0 and ab ≠ 0",
        stable.len()
    ));
    Ok(if nontrivial == 0 { v.vacuous() } else { v })
}

/// Over every ring in the sweep and every endomorphism of it:
/// σ-rigid ⇔ (C_σ) and reduced.
pub fn lemma_rigid_equivalence(rings: &[Ring]) -> Result<Verdict> {
    let opts = CheckOptions::default();
    let mut checked = 0u64;
    for ring in rings {
        let f = ring.require_finite("lemma_rigid_equivalence")?;
        if f.size() > 8 {
            return Err(Error::cap(format!("sweep ring size of {}", ring.spec()), f.size() as u128, 8));
        }
        let reduced = is_reduced(ring, &opts)?.kind;
        for sigma in enumerate_endos(ring)? {
            let delta = SigmaDerivation::zero(&sigma);
            let qd = QuasiDerivation::new(sigma.clone(), delta)?;
            let rigid = is_sigma_rigid(&qd, &opts)?.kind;
            let c_sigma = satisfies_c_sigma(&qd, &opts)?.kind;
            checked += 1;
            let rhs = c_sigma == VerdictKind::Holds && reduced == VerdictKind::Holds;
            if (rigid == VerdictKind::Holds) != rhs {
                return Ok(Verdict::fails(
                    Witness::RigidEquivalence {
                        ring: ring.spec().to_string(),
                        sigma: sigma.spec().to_string(),
                        rigid,
                        c_sigma,
                        reduced,
                    },
                    Bounds {
                        checked: Some(checked),
                        ..Bounds::default()
                    },
                ));
            }
        }
    }
    Ok(Verdict::holds(Bounds {
        checked: Some(checked),
        ..Bounds::default()
    })
    .with_note(format!("{} rings, {checked} endomorphisms", rings.len())))
}

/// On a (σ,δ)-compatible ring, `ab = 0` forces `a·f_i^j(b) = 0` for all
/// `i ≤ j ≤ j_max`. On other rings the check passes vacuously.
pub fn lemma_compat_f(qd: &QuasiDerivation, j_max: usize) -> Result<Verdict> {
    let ring = qd.ring();
    let compat = is_compatible(qd, &CheckOptions::default())?.both;
    let bounds = Bounds {
        j_max: Some(j_max),
        ..Bounds::default()
    };
    if compat.kind != VerdictKind::Holds {
        return Ok(Verdict::holds(bounds)
            .vacuous()
            .with_note(format!("not (σ,δ)-compatible: {}", compat.short())));
    }
    let f = ring.require_finite("lemma_compat_f")?;
    let tables: Vec<(usize, usize, std::sync::Arc<Vec<u32>>)> = (0..=j_max)
        .flat_map(|j| (0..=j).map(move |i| (i, j)))
        .map(|(i, j)| qd.f_table(i, j).map(|t| (i, j, t)))
        .collect::<Result<_>>()?;
    let n = f.size() as u64;
    let zero_pairs: Vec<(u32, u32)> = (0..n * n)
        .map(|k| ((k / n) as u32, (k % n) as u32))
        .filter(|&(a, b)| f.mul(a, b) == 0)
        .collect();
    let hit = zero_pairs.par_iter().find_map_first(|&(a, b)| {
        tables
            .iter()
            .find(|(_, _, t)| f.mul(a, t[b as usize]) != 0)
            .map(|&(i, j, _)| (a, b, i, j))
    });
    Ok(match hit {
        Some((a, b, i, j)) => Verdict::fails(
            Witness::CompatLemma {
                a: fmt(ring, a),
                b: fmt(ring, b),
                i,
                j,
            },
            bounds,
        ),
        None => Verdict::holds(Bounds {
            checked: Some(zero_pairs.len() as u64),
            ..bounds
        }),
    })
}

/// The idempotent built from the coefficients of `p` and the two claims that
/// `eS` is the right annihilator of `pS`, checked up to a degree bound.
#[derive(Clone, Debug)]
pub struct PqBaerWitness {
    pub p: SkewPoly,
    /// `e_i` with `r(c_i R) = e_i R` for each coefficient `c_i`.
    pub idempotents: Vec<Elem>,
    /// `e_n ⋯ e_0`.
    pub e: Elem,
    pub left_semicentral: bool,
    /// `eR` equals the intersection of the `r(c_i R)`.
    pub meets_annihilators: bool,
    /// `eS ⊆ r(pS)`.
    pub claim1: Verdict,
    /// `r(pR) ⊆ eS`.
    pub claim2: Verdict,
}

impl PqBaerWitness {
    pub fn holds(&self) -> bool {
        self.left_semicentral && self.meets_annihilators && self.claim1.kind.is_pass() && self.claim2.kind.is_pass()
    }
}

fn construction_failure(p: &SkewPoly, step: &str, detail: String, deg: usize) -> Verdict {
    Verdict::fails(
        Witness::Construction {
            p: p.to_string(),
            step: step.into(),
            detail,
        },
        Bounds {
            deg_phi: Some(deg),
            ..Bounds::default()
        },
    )
}

/// Builds `e = e_n ⋯ e_0` for `p` and checks both claims with multipliers and
/// annihilator candidates of degree at most `deg_bound`.
pub fn build_pq_baer_witness(p: &SkewPoly, deg_bound: usize, seed: u64) -> Result<PqBaerWitness> {
    build_witness_capped(p, deg_bound, seed, p.ring().limits().scan_cap)
}

fn build_witness_capped(p: &SkewPoly, deg_bound: usize, seed: u64, scan_cap: u64) -> Result<PqBaerWitness> {
    let qd = p.qd();
    let ring = qd.ring();
    let f = ring.require_finite("build_pq_baer_witness")?;
    let mut idempotents = Vec::new();
    let mut meet: Vec<u32> = f.indices().collect();
    for c in p.coeffs() {
        let c = c.idx().unwrap();
        let ann = right_ann_principal_ix(f, c);
        let e = idempotent_generator_ix(f, Side::Right, &ann).ok_or_else(|| Error::Hypothesis {
            hypothesis: "right p.q.-Baer".into(),
            detail: format!("r(cR) for c={} has no idempotent generator", fmt(ring, c)),
        })?;
        meet.retain(|x| ann.binary_search(x).is_ok());
        idempotents.push(e);
    }
    let e = idempotents.iter().rev().fold(f.one(), |acc, &ei| f.mul(acc, ei));
    let left_semicentral = profile_ix(f).left.contains(&e);
    let meets_annihilators = right_multiples(f, e) == meet;
    let e_elem = Elem::Idx(e);
    let e_poly = SkewPoly::constant(qd, e_elem.clone());

    // Claim 1: p·(r x^k)·e = 0 for all monomials, then for random full φ
    let mut claim1 = None;
    'mono: for k in 0..=deg_bound {
        for r in f.indices() {
            let prod = p.mul(&SkewPoly::monomial(qd, Elem::Idx(r), k))?.mul(&e_poly)?;
            if !prod.is_zero() {
                claim1 = Some(construction_failure(
                    p,
                    "claim1",
                    format!("p·({}x^{k})·e = {prod}", fmt(ring, r)),
                    deg_bound,
                ));
                break 'mono;
            }
        }
    }
    if claim1.is_none() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..CLAIM1_RANDOM {
            let coeffs = (0..=deg_bound).map(|_| Elem::Idx(rng.gen_range(0..f.size() as u32))).collect();
            let phi = SkewPoly::new(qd, coeffs);
            let prod = p.mul(&phi)?.mul(&e_poly)?;
            if !prod.is_zero() {
                claim1 = Some(construction_failure(p, "claim1", format!("p·({phi})·e = {prod}"), deg_bound));
                break;
            }
        }
    }
    let claim1 = claim1.unwrap_or_else(|| {
        Verdict::holds_bounded(Bounds {
            deg_phi: Some(deg_bound),
            checked: Some((f.size() * (deg_bound + 1) + CLAIM1_RANDOM) as u64),
            seed: Some(seed),
            ..Bounds::default()
        })
    });

    // Claim 2: every φ with p·r·φ = 0 for all r has coefficients in eR
    let ann = bounded_right_ann_capped(p, PrincipalKind::PR, deg_bound, scan_cap)?;
    let outside = ann
        .iter()
        .find(|phi| phi.coeffs().iter().any(|c| f.mul(e, c.idx().unwrap()) != c.idx().unwrap()));
    let claim2 = match outside {
        Some(phi) => construction_failure(
            p,
            "claim2",
            format!("φ={phi} annihilates pR but is not in eS for e={}", ring.fmt_elem(&e_elem)),
            deg_bound,
        ),
        None => Verdict::holds_bounded(Bounds {
            deg_phi: Some(deg_bound),
            checked: Some(ann.len() as u64),
            ..Bounds::default()
        }),
    };

    Ok(PqBaerWitness {
        p: p.clone(),
        idempotents: idempotents.into_iter().map(Elem::Idx).collect(),
        e: e_elem,
        left_semicentral,
        meets_annihilators,
        claim1,
        claim2,
    })
}

fn require_pass(name: &str, v: &Verdict) -> Result<()> {
    if v.kind.is_pass() {
        Ok(())
    } else {
        Err(Error::Hypothesis {
            hypothesis: name.into(),
            detail: v.short(),
        })
    }
}

/// Right p.q.-Baer for `R[x;σ,δ]` over every `p` of degree ≤ `deg_p`, with
/// annihilator candidates of degree ≤ `deg_phi`. The hypotheses (C_σ), stability
/// and right p.q.-Baer for `R` are checked first, in that order.
pub fn ore_pq_baer_bounded(qd: &QuasiDerivation, deg_p: usize, deg_phi: usize, opts: &CheckOptions) -> Result<Verdict> {
    require_pass("(C_σ)", &satisfies_c_sigma(qd, opts)?)?;
    let ring = qd.ring();
    ring.require_finite("ore_pq_baer_bounded")?;
    require_pass("Re (σ,δ)-stable for e in S_ℓ", &is_stable(qd)?)?;
    require_pass("right p.q.-Baer", &is_right_pq_baer(ring)?)?;
    let polys = all_polys(qd, deg_p, opts.scan_cap)?;
    let failure = polys.par_iter().enumerate().find_map_first(|(k, p)| {
        match build_witness_capped(p, deg_phi, opts.seed.wrapping_add(k as u64), opts.scan_cap) {
            Err(err) => Some(Err(err)),
            Ok(w) if w.holds() => None,
            Ok(w) => Some(Ok(w)),
        }
    });
    let bounds = Bounds {
        deg_p: Some(deg_p),
        deg_phi: Some(deg_phi),
        checked: Some(polys.len() as u64),
        seed: Some(opts.seed),
        ..Bounds::default()
    };
    Ok(match failure {
        None => Verdict::holds_bounded(bounds),
        Some(Err(err)) => return Err(err),
        Some(Ok(w)) => {
            for claim in [&w.claim1, &w.claim2] {
                if claim.kind == VerdictKind::Fails {
                    let mut v = claim.clone();
                    v.bounds = bounds;
                    return Ok(v);
                }
            }
            construction_failure(
                &w.p,
                "idempotent",
                format!(
                    "e={} left semicentral: {}, eR = ∩ r(c_i R): {}",
                    ring.fmt_elem(&w.e),
                    w.left_semicentral,
                    w.meets_annihilators
                ),
                deg_phi,
            )
        }
    })
}

/// For each `a`, the degree-0 idempotent generating the bounded Ore annihilator
/// of `aS` must generate `r(aR)` in `R`.
pub fn converse_extraction(qd: &QuasiDerivation, deg_bound: usize) -> Result<Verdict> {
    let ring = qd.ring();
    let f = ring.require_finite("converse_extraction")?;
    let idempotents = profile_ix(f).idempotents;
    let mut unresolved = Vec::new();
    for a in f.indices() {
        let frag = bounded_right_ann_capped(
            &SkewPoly::constant(qd, Elem::Idx(a)),
            PrincipalKind::PS,
            deg_bound,
            ring.limits().scan_cap,
        )?;
        // e must lie in the fragment and every fragment coefficient must lie in eR
        let ore_e = idempotents.iter().copied().find(|&e| {
            frag.iter().any(|phi| phi.degree().map_or(e == 0, |d| d == 0) && phi.coeff(0) == Elem::Idx(e))
                && frag.iter().all(|phi| phi.coeffs().iter().all(|c| f.mul(e, c.idx().unwrap()) == c.idx().unwrap()))
        });
        let Some(ore_e) = ore_e else {
            unresolved.push(fmt(ring, a));
            continue;
        };
        let ring_ann = right_ann_principal_ix(f, a);
        if right_multiples(f, ore_e) != ring_ann {
            let ring_e = idempotent_generator_ix(f, Side::Right, &ring_ann)
                .map_or_else(|| "NONE".to_string(), |e| fmt(ring, e));
            return Ok(Verdict::fails(
                Witness::Construction {
                    p: fmt(ring, a),
                    step: "converse".into(),
                    detail: format!(
                        "Ore-level idempotent {} but ring-level generator {ring_e}",
                        fmt(ring, ore_e)
                    ),
                },
                Bounds {
                    deg_bound: Some(deg_bound),
                    ..Bounds::default()
                },
            ));
        }
    }
    let bounds = Bounds {
        deg_bound: Some(deg_bound),
        checked: Some((f.size() - unresolved.len()) as u64),
        ..Bounds::default()
    };
    Ok(if unresolved.is_empty() {
        Verdict::holds_bounded(bounds)
    } else {
        Verdict::inconclusive(
            bounds,
            format!("no degree-0 idempotent generator at this bound for a in {{{}}}", unresolved.join(", ")),
        )
    })
}

/// For `δ = 0`, `p = c_0 + c_1x`, `q = a_0 + a_1x` and `b ∈ R`, the coefficients of
/// `p·b·q` are `c_0ba_0`, `c_0ba_1 + c_1σ(ba_0)` and `c_1σ(ba_1)`.
pub fn cascade_degree_one(qd: &QuasiDerivation, scan_cap: u64) -> Result<Verdict> {
    let ring = qd.ring();
    let f = ring.require_finite("cascade_degree_one")?;
    if !qd.delta().is_zero() {
        return Err(Error::Hypothesis {
            hypothesis: "δ = 0".into(),
            detail: qd.delta().spec().to_string(),
        });
    }
    let n = f.size() as u128;
    let total = n.pow(5);
    if total > scan_cap as u128 {
        return Err(Error::cap("N^5 cascade tuples", total, scan_cap as u128));
    }
    let sigma = qd.sigma().table().expect("finite σ");
    let nn = n as u64;
    let hit = (0..total as u64).into_par_iter().find_map_first(|mut k| {
        let mut d = [0u32; 5];
        for slot in d.iter_mut() {
            *slot = (k % nn) as u32;
            k /= nn;
        }
        let [c0, c1, b, a0, a1] = d;
        let p = SkewPoly::new(qd, vec![Elem::Idx(c0), Elem::Idx(c1)]);
        let q = SkewPoly::new(qd, vec![Elem::Idx(a0), Elem::Idx(a1)]);
        let pbq = p.mul(&SkewPoly::constant(qd, Elem::Idx(b))).and_then(|x| x.mul(&q)).ok()?;
        let eq0 = f.mul(c1, sigma[f.mul(b, a1) as usize]);
        let eq1 = f.add(f.mul(c1, sigma[f.mul(b, a0) as usize]), f.mul(f.mul(c0, b), a1));
        let eq2 = f.mul(f.mul(c0, b), a0);
        let expected = [eq2, eq1, eq0];
        (0..3)
            .find(|&i| pbq.coeff(i) != Elem::Idx(expected[i]))
            .map(|i| (p, q, b, 2 - i))
    });
    Ok(match hit {
        Some((p, q, b, eq)) => Verdict::fails(
            Witness::Construction {
                p: p.to_string(),
                step: format!("equation ({eq})"),
                detail: format!("q={q}, b={}", fmt(ring, b)),
            },
            Bounds::default(),
        ),
        None => Verdict::holds(Bounds {
            checked: Some(total as u64),
            ..Bounds::default()
        }),
    })
}

/// Idempotents of `R[x;σ,δ]` for `R = K[t]` with `K` finite, among polynomials of
/// `x`-degree ≤ `x_deg` whose coefficients have `t`-degree ≤ `t_deg`.
pub fn ore_idempotents_bounded(qd: &QuasiDerivation, x_deg: usize, t_deg: usize) -> Result<Vec<SkewPoly>> {
    let ring = qd.ring();
    let (base, _) = ring.poly_base().ok_or_else(|| Error::Descriptor {
        descriptor: "ore_idempotents_bounded".into(),
        ring: ring.spec().to_string(),
    })?;
    let bf = base.require_finite("ore_idempotents_bounded")?;
    let coeffs: Vec<Elem> = all_digit_strings(bf.size(), t_deg + 1)
        .into_iter()
        .map(|digits| ring.canon(&Elem::Poly(digits.into_iter().map(Elem::Idx).collect())))
        .collect();
    let m = coeffs.len() as u128;
    let total = m.pow(x_deg as u32 + 1);
    let cap = ring.limits().scan_cap as u128;
    if total > cap {
        return Err(Error::cap("bounded Ore idempotent search", total, cap));
    }
    let mut found: Vec<(u64, SkewPoly)> = (0..total as u64)
        .into_par_iter()
        .filter_map(|k| {
            let mut rest = k;
            let cs = (0..=x_deg)
                .map(|_| {
                    let c = coeffs[(rest % m as u64) as usize].clone();
                    rest /= m as u64;
                    c
                })
                .collect();
            let phi = SkewPoly::new(qd, cs);
            (phi.mul(&phi).ok()? == phi).then_some((k, phi))
        })
        .collect();
    found.sort_by_key(|(k, _)| *k);
    Ok(found.into_iter().map(|(_, p)| p).collect())
}

fn all_digit_strings(base: usize, len: usize) -> Vec<Vec<u32>> {
    let total = base.pow(len as u32);
    (0..total)
        .map(|mut k| {
            (0..len)
                .map(|_| {
                    let d = (k % base) as u32;
                    k /= base;
                    d
                })
                .collect()
        })
        .collect()
}

/// Bounds for [`theorem_roundtrip`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LabOptions {
    pub check: CheckOptions,
    pub deg_p: usize,
    pub deg_phi: usize,
    /// Degree bound for the Ore-level annihilators in the converse.
    pub converse_deg: usize,
}

impl Default for LabOptions {
    fn default() -> Self {
        LabOptions {
            check: CheckOptions::default(),
            deg_p: 1,
            deg_phi: 2,
            converse_deg: 2,
        }
    }
}

/// Hypotheses, sufficient-condition branches and both directions of the
/// p.q.-Baer transfer for one ring with a quasi-derivation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub pq_baer: Verdict,
    pub stability: Verdict,
    pub c_sigma: Verdict,
    pub skew_armendariz: Verdict,
    pub rigid: Verdict,
    /// `S_ℓ = B` and `σ(Re) ⊆ Re` for every central idempotent `e`.
    pub central_stable: Verdict,
    /// Skew Armendariz and (C_σ).
    pub branch_i: VerdictKind,
    /// `S_ℓ = B`, `σ(Re) ⊆ Re` for `e ∈ B`, and (C_σ).
    pub branch_ii: VerdictKind,
    /// σ-rigid.
    pub branch_iii: VerdictKind,
    /// Stability of `Re` for `e ∈ S_ℓ` together with (C_σ).
    pub proposition: VerdictKind,
    /// Some sufficient condition holds and `R` is right p.q.-Baer, so
    /// `R[x;σ,δ]` should be right p.q.-Baer.
    pub forward_asserted: bool,
    /// Branch (i) or (iii) holds, so the two p.q.-Baer properties are equivalent.
    pub theorem_asserted: bool,
    /// `R[x;σ,δ]` right p.q.-Baer at the degree bounds.
    pub forward: Verdict,
    /// `R` right p.q.-Baer recovered from the Ore-level annihilators.
    pub backward: Verdict,
    /// Degree-one coefficient equations, when `δ = 0`.
    pub cascade: Option<Verdict>,
    /// Idempotents of `R[x;σ,δ]` found by a bounded search, for `R = K[t]`.
    pub ore_idempotents: Option<Vec<String>>,
    /// The asserted implications agree with the computed directions.
    pub consistent: bool,
}

fn folded(result: Result<Verdict>) -> Verdict {
    match result {
        Ok(v) => v,
        Err(Error::Hypothesis { hypothesis, detail }) => {
            Verdict::inconclusive(Bounds::default(), format!("not applicable: {hypothesis} is {detail}"))
        }
        Err(err) => Verdict::inconclusive(Bounds::default(), err.to_string()),
    }
}

fn central_stable(qd: &QuasiDerivation) -> Verdict {
    let ring = qd.ring();
    if let Some(f) = ring.finite() {
        let profile = profile_ix(f);
        let sigma = qd.sigma().table().expect("finite σ");
        let bounds = Bounds {
            checked: Some(profile.left.len() as u64),
            ..Bounds::default()
        };
        if let Some(&e) = profile.left.iter().find(|e| !profile.central.contains(e)) {
            let r = f.indices().find(|&r| f.mul(e, r) != f.mul(r, e)).expect("non-central");
            return Verdict::fails(
                Witness::NonCentralIdempotent {
                    e: fmt(ring, e),
                    r: fmt(ring, r),
                },
                bounds,
            );
        }
        for &e in &profile.central {
            if let Some(r) = left_multiples(f, e).into_iter().find(|&r| {
                let s = sigma[r as usize];
                f.mul(s, e) != s
            }) {
                return Verdict::fails(
                    Witness::Unstable {
                        e: fmt(ring, e),
                        r: fmt(ring, r),
                        map: MapName::Sigma,
                    },
                    bounds,
                );
            }
        }
        return Verdict::holds(bounds);
    }
    match ring.known_idempotents() {
        Some(idem) if idem.iter().all(|e| ring.is_zero(e) || *e == ring.one()) => {
            Verdict::holds(Bounds::default()).with_note("the only idempotents are 0 and 1")
        }
        _ => Verdict::inconclusive(Bounds::default(), "idempotents are not known for this ring"),
    }
}

/// Full hypothesis table plus the forward and backward directions.
pub fn theorem_roundtrip(qd: &QuasiDerivation, opts: &LabOptions) -> HypothesisReport {
    let ring = qd.ring();
    let co = &opts.check;
    let pq_baer = folded(is_right_pq_baer(ring));
    let stability = folded(is_stable(qd));
    let c_sigma = folded(satisfies_c_sigma(qd, co));
    let skew_armendariz = folded(is_skew_armendariz(qd, co));
    let rigid = folded(is_sigma_rigid(qd, co));
    let central = central_stable(qd);

    let branch_i = conjunction(&[&skew_armendariz, &c_sigma]).kind;
    let branch_ii = conjunction(&[&central, &c_sigma]).kind;
    let branch_iii = rigid.kind;
    let proposition = conjunction(&[&stability, &c_sigma]).kind;
    let any_branch = [branch_i, branch_ii, branch_iii, proposition].iter().any(|k| k.is_pass());
    let forward_asserted = pq_baer.kind.is_pass() && any_branch;
    let theorem_asserted = branch_i.is_pass() || branch_iii.is_pass();

    let forward = folded(ore_pq_baer_bounded(qd, opts.deg_p, opts.deg_phi, co));
    let backward = if ring.is_enumerable() {
        folded(converse_extraction(qd, opts.converse_deg))
    } else {
        Verdict::inconclusive(Bounds::default(), "Ore-level annihilators need an enumerable ring")
    };
    let cascade = (ring.is_enumerable() && qd.delta().is_zero())
        .then(|| cascade_degree_one(qd, co.scan_cap).ok())
        .flatten();
    let ore_idempotents = ring
        .poly_base()
        .filter(|(base, _)| base.is_enumerable())
        .and_then(|_| ore_idempotents_bounded(qd, 4, 2).ok())
        .map(|ps| ps.iter().map(|p| p.to_string()).collect());

    let mut consistent = true;
    if forward_asserted {
        consistent &= forward.kind != VerdictKind::Fails;
    }
    if theorem_asserted && forward.kind != VerdictKind::Inconclusive && pq_baer.kind != VerdictKind::Inconclusive {
        consistent &= forward.kind.is_pass() == pq_baer.kind.is_pass();
    }
    if backward.kind == VerdictKind::Fails {
        consistent = false;
    }

    HypothesisReport {
        pq_baer,
        stability,
        c_sigma,
        skew_armendariz,
        rigid,
        central_stable: central,
        branch_i,
        branch_ii,
        branch_iii,
        proposition,
        forward_asserted,
        theorem_asserted,
        forward,
        backward,
        cascade,
        ore_idempotents,
        consistent,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::{DerivSpec, EndoSpec};
    use crate::ring::{build_ring, RingSpec};

    fn qd(spec: RingSpec, sigma: EndoSpec, delta: DerivSpec) -> QuasiDerivation {
        QuasiDerivation::from_specs(&build_ring(&spec).unwrap(), &sigma, &delta).unwrap()
    }

    fn t2f2() -> QuasiDerivation {
        qd(RingSpec::ut2(RingSpec::zn(2)), EndoSpec::Identity, DerivSpec::Zero)
    }

    fn tri4() -> QuasiDerivation {
        qd(RingSpec::tri2(RingSpec::zn(4)), EndoSpec::NegateOffdiag, DerivSpec::Zero)
    }

    #[test]
    fn stability_lemma_on_tri4() {
        let v = lemma_stability(&tri4(), 6).unwrap();
        assert_eq!(v.kind, VerdictKind::Holds, "{v:?}");
    }

    #[test]
    fn rigid_equivalence_small_rings() {
        let rings: Vec<Ring> = [RingSpec::zn(2), RingSpec::zn(4), RingSpec::sum(RingSpec::zn(2), RingSpec::zn(2))]
            .iter()
            .map(|s| build_ring(s).unwrap())
            .collect();
        let v = lemma_rigid_equivalence(&rings).unwrap();
        assert_eq!(v.kind, VerdictKind::Holds);
        let big = vec![build_ring(&RingSpec::zn(9)).unwrap()];
        assert!(matches!(lemma_rigid_equivalence(&big), Err(Error::Cap { .. })));
    }

    #[test]
    fn compat_lemma_and_vacuous_case() {
        assert_eq!(lemma_compat_f(&tri4(), 4).unwrap().kind, VerdictKind::Holds);
        let z = qd(RingSpec::poly(RingSpec::zn(2), "t"), EndoSpec::Eval0, DerivSpec::Zero);
        let v = lemma_compat_f(&z, 4).unwrap();
        assert!(v.vacuous);
    }

    #[test]
    fn witness_for_zero_polynomial_is_one() {
        let q = t2f2();
        let w = build_pq_baer_witness(&SkewPoly::zero(&q), 2, 0).unwrap();
        assert_eq!(w.e, q.ring().one());
        assert!(w.holds());
    }

    #[test]
    fn witness_needs_pq_baer() {
        let q = tri4();
        let p = SkewPoly::parse(&q, "(2,0)").unwrap();
        assert!(matches!(build_pq_baer_witness(&p, 1, 0), Err(Error::Hypothesis { .. })));
    }

    #[test]
    fn eval0_fails_c_sigma_first() {
        let z = qd(RingSpec::poly(RingSpec::zn(2), "t"), EndoSpec::Eval0, DerivSpec::Zero);
        let opts = CheckOptions {
            probes: vec!["1+t".into(), "t".into()],
            ..CheckOptions::default()
        };
        match ore_pq_baer_bounded(&z, 1, 2, &opts) {
            Err(Error::Hypothesis { hypothesis, detail }) => {
                assert_eq!(hypothesis, "(C_σ)");
                assert_eq!(detail, "FAILS (f=1+t, g=t)");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn eval0_bounded_idempotents_are_trivial() {
        let z = qd(RingSpec::poly(RingSpec::zn(2), "t"), EndoSpec::Eval0, DerivSpec::Zero);
        let found: Vec<String> = ore_idempotents_bounded(&z, 4, 2).unwrap().iter().map(|p| p.to_string()).collect();
        assert_eq!(found, ["0", "1"]);
    }

    #[test]
    fn cascade_matches_products() {
        assert_eq!(cascade_degree_one(&t2f2(), 1_000_000).unwrap().kind, VerdictKind::Holds);
    }
}
