//! Annihilators, idempotents and semicentral classification on enumerable rings.

use std::collections::{BTreeSet, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::elem::Elem;
use crate::error::{Error, Result};
use crate::ring::{FiniteRing, Ring};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Right,
    Left,
}

impl Side {
    fn name(self) -> &'static str {
        match self {
            Side::Right => "right",
            Side::Left => "left",
        }
    }
}

/// What an annihilator was computed from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnnSource {
    /// A single element `a`.
    Element(Elem),
    /// An arbitrary subset.
    Set(Vec<Elem>),
    /// The principal one-sided ideal `aR` (for right annihilators) or `Ra`.
    Principal(Elem),
    /// An intersection produced by the lattice closure.
    Intersection,
}

/// An exact annihilator: `members` is sorted in element order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnSet {
    pub side: Side,
    pub source: AnnSource,
    pub members: Vec<Elem>,
}

impl AnnSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, x: &Elem) -> bool {
        self.members.binary_search(x).is_ok()
    }

    pub fn display(&self, ring: &Ring) -> String {
        let items: Vec<String> = self.members.iter().map(|m| ring.fmt_elem(m)).collect();
        format!("{{{}}}", items.join(", "))
    }

    fn indices(&self) -> Vec<u32> {
        self.members.iter().map(|m| m.idx().expect("enumerable element")).collect()
    }
}

fn as_indices(ring: &Ring, xs: &[Elem]) -> Result<Vec<u32>> {
    let f = ring.require_finite("annihilator")?;
    xs.iter()
        .map(|x| match x {
            Elem::Idx(i) if (*i as usize) < f.size() => Ok(*i),
            other => Err(Error::Mismatch(format!("{other:?} is not an element of {}", ring.name()))),
        })
        .collect()
}

fn to_elems(ix: impl IntoIterator<Item = u32>) -> Vec<Elem> {
    ix.into_iter().map(Elem::Idx).collect()
}

/// `r(X) = {a : X·a = 0}`.
pub fn right_ann(ring: &Ring, xs: &[Elem]) -> Result<AnnSet> {
    let f = ring.require_finite("right_ann")?;
    let xi = as_indices(ring, xs)?;
    Ok(AnnSet {
        side: Side::Right,
        source: source_for(xs),
        members: to_elems(f.indices().filter(|&a| xi.iter().all(|&x| f.mul(x, a) == 0))),
    })
}

/// `ℓ(X) = {a : a·X = 0}`.
pub fn left_ann(ring: &Ring, xs: &[Elem]) -> Result<AnnSet> {
    let f = ring.require_finite("left_ann")?;
    let xi = as_indices(ring, xs)?;
    Ok(AnnSet {
        side: Side::Left,
        source: source_for(xs),
        members: to_elems(f.indices().filter(|&a| xi.iter().all(|&x| f.mul(a, x) == 0))),
    })
}

fn source_for(xs: &[Elem]) -> AnnSource {
    match xs {
        [a] => AnnSource::Element(a.clone()),
        _ => AnnSource::Set(xs.to_vec()),
    }
}

pub(crate) fn right_ann_principal_ix(f: &FiniteRing, a: u32) -> Vec<u32> {
    let ar: Vec<u32> = f.indices().map(|r| f.mul(a, r)).collect::<BTreeSet<_>>().into_iter().collect();
    f.indices().filter(|&b| ar.iter().all(|&x| f.mul(x, b) == 0)).collect()
}

pub(crate) fn left_ann_principal_ix(f: &FiniteRing, a: u32) -> Vec<u32> {
    let ra: Vec<u32> = f.indices().map(|r| f.mul(r, a)).collect::<BTreeSet<_>>().into_iter().collect();
    f.indices().filter(|&b| ra.iter().all(|&x| f.mul(b, x) == 0)).collect()
}

/// `r(aR) = {b : a·r·b = 0 for all r}`.
pub fn right_ann_principal(ring: &Ring, a: &Elem) -> Result<AnnSet> {
    let f = ring.require_finite("right_ann_principal")?;
    let ai = as_indices(ring, std::slice::from_ref(a))?[0];
    let members = right_ann_principal_ix(f, ai);
    debug_assert!(is_two_sided(f, &members), "r(aR) must be a two-sided ideal");
    Ok(AnnSet {
        side: Side::Right,
        source: AnnSource::Principal(a.clone()),
        members: to_elems(members),
    })
}

/// `ℓ(Ra) = {b : b·r·a = 0 for all r}`.
pub fn left_ann_principal(ring: &Ring, a: &Elem) -> Result<AnnSet> {
    let f = ring.require_finite("left_ann_principal")?;
    let ai = as_indices(ring, std::slice::from_ref(a))?[0];
    let members = left_ann_principal_ix(f, ai);
    debug_assert!(is_two_sided(f, &members), "ℓ(Ra) must be a two-sided ideal");
    Ok(AnnSet {
        side: Side::Left,
        source: AnnSource::Principal(a.clone()),
        members: to_elems(members),
    })
}

fn closed_under(f: &FiniteRing, set: &[u32], mut op: impl FnMut(u32, u32) -> u32, with_ring: bool) -> bool {
    let lookup: HashSet<u32> = set.iter().copied().collect();
    set.iter().all(|&m| {
        if with_ring {
            f.indices().all(|r| lookup.contains(&op(m, r)))
        } else {
            set.iter().all(|&n| lookup.contains(&op(m, n)))
        }
    })
}

fn is_additive_subgroup(f: &FiniteRing, set: &[u32]) -> bool {
    set.contains(&0) && closed_under(f, set, |a, b| f.sub(a, b), false)
}

fn is_right_ideal(f: &FiniteRing, set: &[u32]) -> bool {
    is_additive_subgroup(f, set) && closed_under(f, set, |m, r| f.mul(m, r), true)
}

fn is_left_ideal(f: &FiniteRing, set: &[u32]) -> bool {
    is_additive_subgroup(f, set) && closed_under(f, set, |m, r| f.mul(r, m), true)
}

pub(crate) fn is_two_sided(f: &FiniteRing, set: &[u32]) -> bool {
    is_right_ideal(f, set) && is_left_ideal(f, set)
}

/// Whether the members form a two-sided ideal.
pub fn is_ideal(ring: &Ring, set: &AnnSet) -> Result<bool> {
    let f = ring.require_finite("is_ideal")?;
    Ok(is_two_sided(f, &set.indices()))
}

/// Idempotents and their semicentral classes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdempotentProfile {
    pub idempotents: Vec<Elem>,
    /// `S_ℓ`: `e·r·e = r·e` for all `r`.
    pub left_semicentral: Vec<Elem>,
    /// `S_r`: `e·r·e = e·r` for all `r`.
    pub right_semicentral: Vec<Elem>,
    /// `B`: central idempotents.
    pub central: Vec<Elem>,
}

pub(crate) struct ProfileIx {
    pub idempotents: Vec<u32>,
    pub left: Vec<u32>,
    pub right: Vec<u32>,
    pub central: Vec<u32>,
}

pub(crate) fn profile_ix(f: &FiniteRing) -> ProfileIx {
    let idempotents: Vec<u32> = f.indices().filter(|&e| f.mul(e, e) == e).collect();
    let left: Vec<u32> = idempotents
        .iter()
        .copied()
        .filter(|&e| f.indices().all(|r| f.mul(f.mul(e, r), e) == f.mul(r, e)))
        .collect();
    let right: Vec<u32> = idempotents
        .iter()
        .copied()
        .filter(|&e| f.indices().all(|r| f.mul(f.mul(e, r), e) == f.mul(e, r)))
        .collect();
    let central: Vec<u32> = idempotents
        .iter()
        .copied()
        .filter(|&e| f.indices().all(|r| f.mul(e, r) == f.mul(r, e)))
        .collect();
    ProfileIx {
        idempotents,
        left,
        right,
        central,
    }
}

pub fn idempotent_profile(ring: &Ring) -> Result<IdempotentProfile> {
    let f = ring.require_finite("idempotent_profile")?;
    let p = profile_ix(f);
    Ok(IdempotentProfile {
        idempotents: to_elems(p.idempotents),
        left_semicentral: to_elems(p.left),
        right_semicentral: to_elems(p.right),
        central: to_elems(p.central),
    })
}

/// `eR` as a sorted index list.
pub(crate) fn right_multiples(f: &FiniteRing, e: u32) -> Vec<u32> {
    f.indices().map(|r| f.mul(e, r)).collect::<BTreeSet<_>>().into_iter().collect()
}

/// `Re` as a sorted index list.
pub(crate) fn left_multiples(f: &FiniteRing, e: u32) -> Vec<u32> {
    f.indices().map(|r| f.mul(r, e)).collect::<BTreeSet<_>>().into_iter().collect()
}

/// First idempotent `e` with `eR = T` (right annihilators) or `Re = T`
/// (left annihilators), if any.
pub fn generated_by_idempotent(ring: &Ring, t: &AnnSet) -> Result<Option<Elem>> {
    let f = ring.require_finite("generated_by_idempotent")?;
    let members = t.indices();
    let ideal = match t.side {
        Side::Right => is_right_ideal(f, &members),
        Side::Left => is_left_ideal(f, &members),
    };
    if !ideal {
        return Err(Error::NotIdeal {
            side: t.side.name(),
            detail: format!("{} elements: {}", members.len(), t.display(ring)),
        });
    }
    let found = idempotent_generator_ix(f, t.side, &members);
    if let (Some(e), Side::Right, AnnSource::Principal(_) | AnnSource::Intersection) = (found, t.side, &t.source) {
        debug_assert!(
            f.indices().all(|r| f.mul(f.mul(e, r), e) == f.mul(r, e)),
            "idempotent generator of a right annihilator of a right ideal is left semicentral"
        );
    }
    Ok(found.map(Elem::Idx))
}

pub(crate) fn idempotent_generator_ix(f: &FiniteRing, side: Side, members: &[u32]) -> Option<u32> {
    members.iter().copied().find(|&e| {
        f.mul(e, e) == e
            && match side {
                Side::Right => right_multiples(f, e) == members,
                Side::Left => left_multiples(f, e) == members,
            }
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LatticeKind {
    /// Generated by the element annihilators `r(a)`.
    Baer,
    /// Generated by the principal annihilators `r(aR)`.
    QuasiBaer,
}

/// Closure of the generating annihilators under intersection, in discovery order.
/// Every right annihilator of a nonempty subset (Baer) or of a right ideal
/// (quasi-Baer) is a member.
pub fn ann_lattice_closure(ring: &Ring, kind: LatticeKind) -> Result<Vec<AnnSet>> {
    let f = ring.require_finite("ann_lattice_closure")?;
    let cap = ring.limits().lattice_cap;
    let gens: Vec<(u32, Vec<u32>)> = f
        .indices()
        .into_par_iter()
        .map(|a| {
            let members = match kind {
                LatticeKind::Baer => f.indices().filter(|&b| f.mul(a, b) == 0).collect(),
                LatticeKind::QuasiBaer => right_ann_principal_ix(f, a),
            };
            (a, members)
        })
        .collect();
    let mut out: Vec<AnnSet> = Vec::new();
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    for (a, members) in gens {
        if seen.insert(members.clone()) {
            let a = Elem::Idx(a);
            out.push(AnnSet {
                side: Side::Right,
                source: match kind {
                    LatticeKind::Baer => AnnSource::Element(a),
                    LatticeKind::QuasiBaer => AnnSource::Principal(a),
                },
                members: to_elems(members),
            });
        }
    }
    let mut frontier_start = 0;
    loop {
        let len = out.len();
        let mut fresh = Vec::new();
        for i in 0..len {
            for j in (frontier_start.max(i + 1))..len {
                let a = out[i].indices();
                let b: HashSet<u32> = out[j].indices().into_iter().collect();
                let meet: Vec<u32> = a.into_iter().filter(|x| b.contains(x)).collect();
                if seen.insert(meet.clone()) {
                    fresh.push(meet);
                }
            }
        }
        if fresh.is_empty() {
            break;
        }
        if len + fresh.len() > cap {
            return Err(Error::cap("annihilator lattice size", (len + fresh.len()) as u128, cap as u128));
        }
        frontier_start = len;
        out.extend(fresh.into_iter().map(|m| AnnSet {
            side: Side::Right,
            source: AnnSource::Intersection,
            members: to_elems(m),
        }));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{build_ring, RingSpec};

    fn tri4() -> Ring {
        build_ring(&RingSpec::tri2(RingSpec::zn(4))).unwrap()
    }

    fn shown(ring: &Ring, xs: &[Elem]) -> Vec<String> {
        xs.iter().map(|x| ring.fmt_elem(x)).collect()
    }

    #[test]
    fn trivial_annihilators() {
        let r = tri4();
        assert_eq!(right_ann(&r, &[r.zero()]).unwrap().len(), 16);
        assert_eq!(right_ann(&r, &[r.one()]).unwrap().members, vec![r.zero()]);
        assert_eq!(right_ann_principal(&r, &r.zero()).unwrap().len(), 16);
    }

    #[test]
    fn tri4_annihilator_of_2_0() {
        let r = tri4();
        let a = r.parse_elem("(2,0)").unwrap();
        let expect = ["(0,0)", "(2,0)", "(0,2)", "(2,2)"];
        let elem = right_ann(&r, std::slice::from_ref(&a)).unwrap();
        let principal = right_ann_principal(&r, &a).unwrap();
        assert_eq!(shown(&r, &elem.members), expect);
        assert_eq!(principal.members, elem.members);
        assert_eq!(generated_by_idempotent(&r, &principal).unwrap(), None);
    }

    #[test]
    fn t2f2_profile() {
        let r = build_ring(&RingSpec::ut2(RingSpec::zn(2))).unwrap();
        let p = idempotent_profile(&r).unwrap();
        let e11 = r.parse_elem("(1,0,0)").unwrap();
        let e22 = r.parse_elem("(0,0,1)").unwrap();
        assert!(p.left_semicentral.contains(&e11));
        assert!(p.right_semicentral.contains(&e22));
        assert_eq!(p.central, vec![r.zero(), r.one()]);
        assert_eq!(p.idempotents.len(), 6);
    }

    #[test]
    fn t2f2_principal_annihilator_of_e11() {
        let r = build_ring(&RingSpec::ut2(RingSpec::zn(2))).unwrap();
        let e11 = r.parse_elem("(1,0,0)").unwrap();
        let ann = right_ann_principal(&r, &e11).unwrap();
        // E11·R spans the whole first row, so only 0 kills it from the right
        // within the constant-coefficient ring.
        assert_eq!(shown(&r, &ann.members), ["(0,0,0)"]);
        assert_eq!(generated_by_idempotent(&r, &ann).unwrap(), Some(r.zero()));
        let elem = right_ann(&r, &[e11]).unwrap();
        assert_eq!(shown(&r, &elem.members), ["(0,0,0)", "(0,0,1)"]);
    }

    #[test]
    fn whole_ring_generated_by_one() {
        let r = tri4();
        let all = right_ann(&r, &[r.zero()]).unwrap();
        assert_eq!(generated_by_idempotent(&r, &all).unwrap(), Some(r.one()));
        let zero = right_ann(&r, &[r.one()]).unwrap();
        assert_eq!(generated_by_idempotent(&r, &zero).unwrap(), Some(r.zero()));
    }

    #[test]
    fn non_ideal_rejected() {
        let r = tri4();
        let bogus = AnnSet {
            side: Side::Right,
            source: AnnSource::Intersection,
            members: vec![r.zero(), r.parse_elem("(1,0)").unwrap()],
        };
        assert!(matches!(generated_by_idempotent(&r, &bogus), Err(Error::NotIdeal { side: "right", .. })));
    }

    #[test]
    fn lattices() {
        let f2 = build_ring(&RingSpec::zn(2)).unwrap();
        assert_eq!(ann_lattice_closure(&f2, LatticeKind::Baer).unwrap().len(), 2);
        let z4 = build_ring(&RingSpec::zn(4)).unwrap();
        let mut sets: Vec<Vec<Elem>> = ann_lattice_closure(&z4, LatticeKind::Baer)
            .unwrap()
            .into_iter()
            .map(|s| s.members)
            .collect();
        sets.sort_by_key(Vec::len);
        assert_eq!(
            sets,
            vec![vec![Elem::Idx(0)], vec![Elem::Idx(0), Elem::Idx(2)], (0..4).map(Elem::Idx).collect()]
        );
        let r = tri4();
        let closure = ann_lattice_closure(&r, LatticeKind::QuasiBaer).unwrap();
        assert!(closure.iter().any(|s| s.len() == 4));
    }

    #[test]
    fn gauss_refuses() {
        let g = build_ring(&RingSpec::Gauss).unwrap();
        assert!(matches!(idempotent_profile(&g), Err(Error::Backend(_))));
    }
}
