use proptest::prelude::*;

use orelab::annihilators::{generated_by_idempotent, is_ideal, right_ann_principal};
use orelab::catalog::{find_entry, load_catalog};
use orelab::ore::bounded_right_ann;
use orelab::{check, CheckOptions, PrincipalKind, Property, QuasiDerivation, SkewPoly, Verdict};

const ENTRIES: [&str; 7] = [
    "z2poly_eval0",
    "tri4_negate",
    "int_rat_tri_halve",
    "t2f2_id",
    "t2f2_inner",
    "tsum_square",
    "gauss_conj",
];

fn qd(name: &str) -> QuasiDerivation {
    find_entry(name).unwrap().quasi_derivation().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sampled_ring_and_map_laws(entry in 0..ENTRIES.len(), seed in any::<u64>()) {
        let q = qd(ENTRIES[entry]);
        let r = q.ring();
        let xs = match r.sample(seed, 3) {
            Ok(xs) => xs,
            Err(_) => r.elements().unwrap().into_iter().cycle().skip((seed % 64) as usize).step_by(5).take(3).collect(),
        };
        let (a, b, c) = (&xs[0], &xs[1], &xs[2]);
        prop_assert_eq!(r.mul(&r.mul(a, b), c), r.mul(a, &r.mul(b, c)));
        prop_assert_eq!(r.mul(a, &r.add(b, c)), r.add(&r.mul(a, b), &r.mul(a, c)));
        let (s, d) = (q.sigma(), q.delta());
        prop_assert_eq!(s.apply(&r.mul(a, b)), r.mul(&s.apply(a), &s.apply(b)));
        prop_assert_eq!(s.apply(&r.add(a, b)), r.add(&s.apply(a), &s.apply(b)));
        // δ(ab) = σ(a)δ(b) + δ(a)b
        prop_assert_eq!(d.apply(&r.mul(a, b)), r.add(&r.mul(&s.apply(a), &d.apply(b)), &r.mul(&d.apply(a), b)));
    }

    #[test]
    fn x_power_times_r_expands_by_f_maps(entry in 0..ENTRIES.len(), seed in any::<u64>(), n in 0usize..5) {
        let q = qd(ENTRIES[entry]);
        let ring = q.ring();
        let r = match ring.sample(seed, 1) {
            Ok(mut v) => v.remove(0),
            Err(_) => ring.elements().unwrap()[(seed as usize) % ring.size().unwrap()].clone(),
        };
        let lhs = SkewPoly::monomial(&q, ring.one(), n).mul(&SkewPoly::constant(&q, r.clone())).unwrap();
        let coeffs: Vec<_> = (0..=n).map(|i| q.f_map(i, n, &r).unwrap()).collect();
        prop_assert_eq!(lhs, SkewPoly::new(&q, coeffs));
    }

    #[test]
    fn principal_annihilators_are_ideals(entry in 0..3usize, a in 0u32..16) {
        let q = qd(["tri4_negate", "t2f2_id", "t2f2_inner"][entry]);
        let ring = q.ring();
        let a = orelab::Elem::Idx(a % ring.size().unwrap() as u32);
        let ann = right_ann_principal(ring, &a).unwrap();
        prop_assert!(is_ideal(ring, &ann).unwrap());
        if let Some(e) = generated_by_idempotent(ring, &ann).unwrap() {
            prop_assert_eq!(ring.mul(&e, &e), e.clone());
            let mut e_r: Vec<_> = ring.elements().unwrap().iter().map(|r| ring.mul(&e, r)).collect();
            e_r.sort();
            e_r.dedup();
            prop_assert_eq!(e_r, ann.members.clone());
        }
    }

    #[test]
    fn bounded_annihilator_members_annihilate(k in 0u128..256) {
        let q = qd("t2f2_id");
        let p = orelab::ore::poly_at(&q, 8, 1, k % 64);
        for phi in bounded_right_ann(&p, PrincipalKind::PR, 1).unwrap() {
            for r in q.ring().elements().unwrap() {
                let prod = p.mul(&SkewPoly::constant(&q, r)).unwrap().mul(&phi).unwrap();
                prop_assert!(prod.is_zero());
            }
        }
    }

    #[test]
    fn failures_replay_and_verdicts_round_trip(entry in 0..ENTRIES.len(), prop in 0..Property::ALL.len(), seed in 0u64..4) {
        let e = find_entry(ENTRIES[entry]).unwrap();
        let q = e.quasi_derivation().unwrap();
        let opts = e.options(&CheckOptions { samples: 200, seed, ..CheckOptions::default() });
        let v = check(Property::ALL[prop], &q, &opts).unwrap();
        if let Some(w) = &v.witness {
            prop_assert!(w.replay(&q).unwrap(), "{:?}", w);
        }
        let text = serde_json::to_string(&v).unwrap();
        prop_assert_eq!(serde_json::from_str::<Verdict>(&text).unwrap(), v);
    }
}

#[test]
fn catalog_names_are_unique() {
    let mut names: Vec<String> = load_catalog().into_iter().map(|e| e.name).collect();
    let n = names.len();
    names.sort();
    names.dedup();
    assert_eq!(names.len(), n);
}
