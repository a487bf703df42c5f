//! Acceptance run: one line per criterion, non-zero exit if any fails.

use std::time::{Duration, Instant};

use orelab::annihilators::{idempotent_profile, right_ann_principal};
use orelab::catalog::{find_entry, load_catalog, run_catalog, semicentral_meet, sweep_rings, Check};
use orelab::lab::{
    build_pq_baer_witness, converse_extraction, lemma_compat_f, lemma_rigid_equivalence, lemma_stability,
    ore_pq_baer_bounded, CLAIM1_RANDOM,
};
use orelab::ore::all_polys;
use orelab::properties::is_right_pq_baer;
use orelab::{
    build_report, CatalogReport, CheckOptions, Elem, Format, LabOptions, QuasiDerivation, SkewPoly, VerdictKind,
    Witness,
};

const CATALOG_BUDGET: Duration = Duration::from_secs(60);
const PROPOSITION_BUDGET: Duration = Duration::from_secs(120);
const ALGEBRA_TRIPLES: usize = 500;
const ALGEBRA_DEGREE: usize = 3;
const FMAP_J: usize = 8;
const GAUSS_FMAP_SAMPLES: usize = 100;

type Outcome = Result<String, String>;

fn qd(name: &str) -> QuasiDerivation {
    find_entry(name).unwrap().quasi_derivation().unwrap()
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn row_matched(report: &CatalogReport, entry: &str, check: Check) -> Result<(), String> {
    let e = report.entries.iter().find(|e| e.name == entry).ok_or(format!("no entry {entry}"))?;
    let rows: Vec<_> = e.rows.iter().filter(|r| r.check == check).collect();
    ensure(!rows.is_empty(), format!("{entry}: no {check} row"))?;
    for r in rows {
        ensure(r.matched, format!("{entry}: {check} got {}", r.actual.short()))?;
    }
    Ok(())
}

fn c1_catalog() -> Outcome {
    let start = Instant::now();
    let report = CatalogReport::new(run_catalog(&LabOptions::default()));
    let elapsed = start.elapsed();
    ensure(report.mismatches == 0, format!("{} mismatches", report.mismatches))?;
    use orelab::Property::*;
    for (entry, check) in [
        ("z2poly_eval0", Check::Property(Compatible)),
        ("z2poly_eval0", Check::Property(CSigma)),
        ("z2poly_eval0", Check::OrePqBaer),
        ("tri4_negate", Check::Property(Compatible)),
        ("tri4_negate", Check::Property(SkewArmendariz)),
        ("int_rat_tri_halve", Check::Property(Rigid)),
        ("int_rat_tri_halve", Check::Property(CSigma)),
        ("int_rat_tri_halve", Check::Idempotents),
        ("gauss_conj", Check::Property(Rigid)),
    ] {
        row_matched(&report, entry, check)?;
    }
    // a₁σ(b₀) for the tri4 witness
    let q = qd("tri4_negate");
    let p = SkewPoly::parse(&q, "(2,0)+(2,1)x").unwrap();
    let ring = q.ring();
    let a1_sb0 = ring.mul(&p.coeff(1), &q.sigma().apply(&p.coeff(0)));
    ensure(ring.fmt_elem(&a1_sb0) == "(0,2)", format!("a1σ(b0) = {}", ring.fmt_elem(&a1_sb0)))?;
    // gauss rigidity: zero refutations among at least 2000 samples
    let g = report.entries.iter().find(|e| e.name == "gauss_conj").unwrap();
    let rigid = g.rows.iter().find(|r| r.check == Check::Property(Rigid)).unwrap();
    let b = &rigid.actual.verdict.as_ref().unwrap().bounds;
    ensure(b.refutations == Some(0) && b.samples.unwrap_or(0) >= 2000, "gauss rigidity sampling")?;
    ensure(elapsed <= CATALOG_BUDGET, format!("took {elapsed:?}"))?;
    let rows: usize = report.entries.iter().map(|e| e.rows.len()).sum();
    Ok(format!("{rows} expectations, 0 mismatches, {:.2}s", elapsed.as_secs_f64()))
}

fn c2_fmap_oracle() -> Outcome {
    let mut compared = 0usize;
    for name in ["tri4_negate", "t2f2_id", "t2f2_inner"] {
        let q = qd(name);
        for r in q.ring().elements().unwrap() {
            for j in 0..=FMAP_J {
                for i in 0..=j {
                    let (fast, slow) = (q.f_map(i, j, &r).unwrap(), q.f_map_oracle(i, j, &r).unwrap());
                    ensure(fast == slow, format!("{name}: f_{i}^{j}({})", q.ring().fmt_elem(&r)))?;
                    compared += 1;
                }
            }
        }
    }
    let q = qd("gauss_conj");
    for r in q.ring().sample(7, GAUSS_FMAP_SAMPLES).unwrap() {
        for j in 0..=FMAP_J {
            for i in 0..=j {
                ensure(
                    q.f_map(i, j, &r).unwrap() == q.f_map_oracle(i, j, &r).unwrap(),
                    format!("gauss: f_{i}^{j}({})", q.ring().fmt_elem(&r)),
                )?;
                compared += 1;
            }
        }
    }
    Ok(format!("{compared} values equal"))
}

fn random_poly(q: &QuasiDerivation, rng: &mut rand_chacha::ChaCha8Rng) -> SkewPoly {
    use rand::Rng;
    let deg = rng.gen_range(0..=ALGEBRA_DEGREE);
    SkewPoly::new(q, (0..=deg).map(|_| q.ring().sample_with(rng)).collect())
}

fn c3_algebra() -> Outcome {
    use rand::SeedableRng;
    let mut triples = 0;
    for entry in load_catalog() {
        let q = entry.quasi_derivation().unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..ALGEBRA_TRIPLES {
            let (a, b, c) = (random_poly(&q, &mut rng), random_poly(&q, &mut rng), random_poly(&q, &mut rng));
            let ab_c = a.mul(&b).unwrap().mul(&c).unwrap();
            let a_bc = a.mul(&b.mul(&c).unwrap()).unwrap();
            ensure(ab_c == a_bc, format!("{}: associativity for {a}, {b}, {c}", entry.name))?;
            let left = a.mul(&b.add(&c).unwrap()).unwrap();
            let left2 = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
            ensure(left == left2, format!("{}: left distributivity", entry.name))?;
            let right = a.add(&b).unwrap().mul(&c).unwrap();
            let right2 = a.mul(&c).unwrap().add(&b.mul(&c).unwrap()).unwrap();
            ensure(right == right2, format!("{}: right distributivity", entry.name))?;
            triples += 1;
        }
    }
    // convolution over F2[t] with σ = id, δ = 0
    let ring = orelab::build_ring(&orelab::RingSpec::poly(orelab::RingSpec::zn(2), "t")).unwrap();
    let q = QuasiDerivation::trivial(&ring);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
    let mut pairs = 0;
    for _ in 0..ALGEBRA_TRIPLES {
        let (p, r) = (random_poly(&q, &mut rng), random_poly(&q, &mut rng));
        let mut conv = vec![ring.zero(); p.coeffs().len() + r.coeffs().len()];
        for (i, a) in p.coeffs().iter().enumerate() {
            for (j, b) in r.coeffs().iter().enumerate() {
                conv[i + j] = ring.add(&conv[i + j], &ring.mul(a, b));
            }
        }
        ensure(p.mul(&r).unwrap() == SkewPoly::new(&q, conv), format!("convolution for {p}, {r}"))?;
        pairs += 1;
    }
    Ok(format!("{triples} triples, {pairs} convolution pairs"))
}

fn c4_lemmas() -> Outcome {
    for name in ["tri4_negate", "t2f2_id", "t2f2_inner"] {
        let v = lemma_stability(&qd(name), 6).map_err(|e| e.to_string())?;
        ensure(v.kind == VerdictKind::Holds, format!("stability lemma on {name}: {}", v.short()))?;
    }
    let sweep = sweep_rings().unwrap();
    let v = lemma_rigid_equivalence(&sweep).map_err(|e| e.to_string())?;
    ensure(v.kind == VerdictKind::Holds, format!("rigid equivalence: {}", v.short()))?;
    let endos = v.bounds.checked.unwrap_or(0);
    let mut compat = 0;
    for entry in load_catalog() {
        let q = entry.quasi_derivation().unwrap();
        if !q.ring().is_enumerable() {
            continue;
        }
        let v = lemma_compat_f(&q, 4).map_err(|e| e.to_string())?;
        ensure(v.kind == VerdictKind::Holds, format!("compat lemma on {}: {}", entry.name, v.short()))?;
        if !v.vacuous {
            compat += 1;
        }
    }
    Ok(format!(
        "stability on 3 entries, rigid equivalence over {} rings / {endos} endomorphisms, compat lemma on {compat} compatible entries",
        sweep.len()
    ))
}

fn c5_proposition() -> Outcome {
    let start = Instant::now();
    let q = qd("t2f2_id");
    let v = ore_pq_baer_bounded(&q, 1, 2, &CheckOptions::default()).map_err(|e| e.to_string())?;
    ensure(v.kind == VerdictKind::HoldsBounded, format!("got {}", v.short()))?;
    let f = q.ring().finite().unwrap();
    let polys = all_polys(&q, 1, u64::MAX).unwrap();
    for (k, p) in polys.iter().enumerate() {
        let w = build_pq_baer_witness(p, 2, k as u64).map_err(|e| e.to_string())?;
        ensure(w.left_semicentral, format!("e not in S_ℓ for {p}"))?;
        ensure(w.meets_annihilators, format!("eR ≠ ∩ r(c_i R) for {p}"))?;
        ensure(w.claim1.kind == VerdictKind::HoldsBounded, format!("claim 1 for {p}"))?;
        ensure(
            w.claim1.bounds.checked == Some((f.size() * 3 + CLAIM1_RANDOM) as u64),
            "claim 1 monomial and random counts",
        )?;
        ensure(w.claim2.kind == VerdictKind::HoldsBounded, format!("claim 2 for {p}"))?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed <= PROPOSITION_BUDGET, format!("took {elapsed:?}"))?;
    Ok(format!("{} polynomials, {:.2}s", polys.len(), elapsed.as_secs_f64()))
}

fn c6_converse() -> Outcome {
    let q = qd("t2f2_id");
    let v = converse_extraction(&q, 2).map_err(|e| e.to_string())?;
    ensure(v.kind == VerdictKind::HoldsBounded, format!("got {}", v.short()))?;
    ensure(v.bounds.checked == Some(8), format!("agreed on {:?} elements", v.bounds.checked))?;
    Ok("8 of 8 elements agree".into())
}

fn c7_negative_controls() -> Outcome {
    let q = qd("tri4_negate");
    let ring = q.ring();
    let v = is_right_pq_baer(ring).unwrap();
    ensure(v.short() == "FAILS (a=(2,0))", v.short())?;
    let Some(Witness::NoIdempotentGenerator { annihilator, .. }) = &v.witness else {
        return Err("wrong witness kind".into());
    };
    let mut expected: Vec<String> = Vec::new();
    for d in [0, 2] {
        for c in [0, 2] {
            expected.push(format!("({c},{d})"));
        }
    }
    let mut got = annihilator.clone();
    got.sort();
    expected.sort();
    ensure(got == expected, format!("annihilator {got:?}"))?;
    let a = ring.parse_elem("(2,0)").unwrap();
    let ann = right_ann_principal(ring, &a).unwrap();
    ensure(orelab::generated_by_idempotent(ring, &ann).unwrap().is_none(), "found a generator")?;
    let mut rings = 0;
    for entry in load_catalog() {
        let q = entry.quasi_derivation().unwrap();
        if !q.ring().is_enumerable() {
            continue;
        }
        let v = semicentral_meet(q.ring()).unwrap();
        ensure(v.kind == VerdictKind::Holds, format!("{}: {:?}", entry.name, v.note))?;
        let p = idempotent_profile(q.ring()).unwrap();
        ensure(p.central.iter().all(|e: &Elem| p.idempotents.contains(e)), "B ⊆ idempotents")?;
        rings += 1;
    }
    Ok(format!("tri4 annihilator of 4 elements without generator; S_ℓ ∩ S_r = B on {rings} rings"))
}

fn full_machine_run(seed: u64) -> String {
    let opts = LabOptions {
        check: CheckOptions {
            seed,
            ..CheckOptions::default()
        },
        ..LabOptions::default()
    };
    let mut out = CatalogReport::new(run_catalog(&opts)).render(Format::Machine);
    for entry in load_catalog() {
        let q = entry.quasi_derivation().unwrap();
        out.push_str(&build_report(&q, &entry.options(&opts.check)).unwrap().render(Format::Machine));
    }
    out
}

fn c8_determinism() -> Outcome {
    let (a, b) = (full_machine_run(42), full_machine_run(42));
    ensure(a == b, "machine-readable reports differ between runs")?;
    Ok(format!("{} bytes identical", a.len()))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        ("catalog regression", c1_catalog),
        ("f_i^j oracle equivalence", c2_fmap_oracle),
        ("skew-polynomial algebra", c3_algebra),
        ("lemma suite", c4_lemmas),
        ("bounded p.q.-Baer transfer", c5_proposition),
        ("converse extraction", c6_converse),
        ("negative controls", c7_negative_controls),
        ("determinism", c8_determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let result = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        match result {
            Ok(detail) => println!("criterion {} {name}: PASS ({detail})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({why})", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
