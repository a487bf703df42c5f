//! Endomorphisms, σ-derivations and the word-sum maps `f_i^j`.
//!
//! `f_i^j` is the sum of all words in σ and δ with `i` letters σ and `j - i`
//! letters δ. A word acts as a composition of functions, so its rightmost
//! letter is applied first. [`QuasiDerivation::f_map`] uses the recurrence
//! `f_i^j = σ∘f_{i-1}^{j-1} + δ∘f_i^{j-1}`; [`QuasiDerivation::f_map_oracle`]
//! enumerates the words literally.

use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::elem::Elem;
use crate::error::{Error, Result};
use crate::ring::{FiniteRing, Ring, RingSpec};

const MAP_VALIDATION_SEED: u64 = 0x0e0d_15ea;

/// Descriptor of an endomorphism.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum EndoSpec {
    Identity,
    /// Images of the element indices `0..N` of an enumerable ring.
    Table(Vec<u32>),
    /// `f(t) ↦ f(0)` on a polynomial ring.
    Eval0,
    /// Negates the off-diagonal entry of a triangular matrix.
    NegateOffdiag,
    /// `(a, t) ↦ (a, t/2)` on `int_rat_tri`.
    HalveOffdiag,
    /// Complex conjugation on the Gaussian rationals.
    Conj,
    /// `f(y) ↦ f(y^2)` on a polynomial ring.
    SquareVar,
    /// Independent maps on the two components of a direct sum.
    Componentwise(Box<EndoSpec>, Box<EndoSpec>),
}

/// Descriptor of a σ-derivation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum DerivSpec {
    Zero,
    /// `δ(r) = d·r − σ(r)·d` for the element literal `d`.
    Inner(String),
    /// `δ(z) = z − σ(z)`.
    ConjDiff,
    Componentwise(Box<DerivSpec>, Box<DerivSpec>),
}

impl fmt::Display for EndoSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EndoSpec::Identity => write!(f, "identity"),
            EndoSpec::Table(t) => {
                let body: Vec<_> = t.iter().map(u32::to_string).collect();
                write!(f, "table([{}])", body.join(","))
            }
            EndoSpec::Eval0 => write!(f, "eval0"),
            EndoSpec::NegateOffdiag => write!(f, "negate_offdiag"),
            EndoSpec::HalveOffdiag => write!(f, "halve_offdiag"),
            EndoSpec::Conj => write!(f, "conj"),
            EndoSpec::SquareVar => write!(f, "square_var"),
            EndoSpec::Componentwise(l, r) => write!(f, "componentwise({l},{r})"),
        }
    }
}

impl fmt::Display for DerivSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DerivSpec::Zero => write!(f, "zero"),
            DerivSpec::Inner(d) => write!(f, "inner({d})"),
            DerivSpec::ConjDiff => write!(f, "conj_diff"),
            DerivSpec::Componentwise(l, r) => write!(f, "componentwise({l},{r})"),
        }
    }
}

#[derive(Clone)]
enum EndoImpl {
    Identity,
    Coord,
    Parts(Endo, Endo),
}

struct EndoData {
    ring: Ring,
    spec: EndoSpec,
    imp: EndoImpl,
    table: Option<Vec<u32>>,
}

/// A validated unital ring endomorphism.
#[derive(Clone)]
pub struct Endo(Arc<EndoData>);

impl fmt::Debug for Endo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Endo({} on {})", self.0.spec, self.0.ring.name())
    }
}

/// Builds and validates an endomorphism of `ring`.
pub fn make_endo(ring: &Ring, spec: &EndoSpec) -> Result<Endo> {
    let endo = construct_endo(ring, spec)?;
    endo.validate()?;
    Ok(endo)
}

fn descriptor_error(descriptor: impl fmt::Display, ring: &Ring) -> Error {
    Error::Descriptor {
        descriptor: descriptor.to_string(),
        ring: ring.name(),
    }
}

fn construct_endo(ring: &Ring, spec: &EndoSpec) -> Result<Endo> {
    let applies = match spec {
        EndoSpec::Identity => true,
        EndoSpec::Table(t) => match ring.size() {
            Some(n) => {
                if t.len() != n || t.iter().any(|&v| v as usize >= n) {
                    return Err(Error::Validation {
                        law: "endomorphism table shape".into(),
                        witness: format!("{} images for {} elements", t.len(), n),
                    });
                }
                true
            }
            None => false,
        },
        EndoSpec::Eval0 | EndoSpec::SquareVar => ring.poly_base().is_some(),
        EndoSpec::NegateOffdiag => ring.matrix_base().is_some() || *ring.spec() == RingSpec::IntRatTri,
        EndoSpec::HalveOffdiag => *ring.spec() == RingSpec::IntRatTri,
        EndoSpec::Conj => *ring.spec() == RingSpec::Gauss,
        EndoSpec::Componentwise(..) => ring.sum_parts().is_some(),
    };
    if !applies {
        return Err(descriptor_error(spec, ring));
    }
    let imp = match spec {
        EndoSpec::Identity => EndoImpl::Identity,
        EndoSpec::Componentwise(l, r) => {
            let (lr, rr) = ring.sum_parts().unwrap();
            EndoImpl::Parts(make_endo(lr, l)?, make_endo(rr, r)?)
        }
        _ => EndoImpl::Coord,
    };
    let mut data = EndoData {
        ring: ring.clone(),
        spec: spec.clone(),
        imp,
        table: None,
    };
    if let Some(f) = ring.finite() {
        data.table = Some(match spec {
            EndoSpec::Table(t) => t.clone(),
            _ => {
                let probe = Endo(Arc::new(EndoData {
                    ring: ring.clone(),
                    spec: spec.clone(),
                    imp: data.imp.clone(),
                    table: None,
                }));
                let mut t = Vec::with_capacity(f.size());
                for i in f.indices() {
                    match probe.apply(&Elem::Idx(i)) {
                        Elem::Idx(v) => t.push(v),
                        other => return Err(descriptor_error(format!("{spec} (image {other:?})"), ring)),
                    }
                }
                t
            }
        });
    }
    Ok(Endo(Arc::new(data)))
}

fn half(r: &BigRational) -> BigRational {
    r / BigRational::from_integer(BigInt::from(2))
}

impl Endo {
    pub fn ring(&self) -> &Ring {
        &self.0.ring
    }

    pub fn spec(&self) -> &EndoSpec {
        &self.0.spec
    }

    pub fn table(&self) -> Option<&[u32]> {
        self.0.table.as_deref()
    }

    pub fn identity(ring: &Ring) -> Endo {
        construct_endo(ring, &EndoSpec::Identity).expect("identity applies to every ring")
    }

    /// True when the map is the identity on every element.
    pub fn is_identity(&self) -> bool {
        match (&self.0.imp, self.table()) {
            (EndoImpl::Identity, _) => true,
            (_, Some(t)) => t.iter().enumerate().all(|(i, &v)| i as u32 == v),
            (EndoImpl::Parts(l, r), None) => l.is_identity() && r.is_identity(),
            _ => false,
        }
    }

    /// Restriction to one component of a direct sum.
    pub fn component(&self, k: usize) -> Option<Endo> {
        let (l, r) = self.0.ring.sum_parts()?;
        match &self.0.imp {
            EndoImpl::Parts(a, b) => Some(if k == 0 { a.clone() } else { b.clone() }),
            EndoImpl::Identity => Some(Endo::identity(if k == 0 { l } else { r })),
            EndoImpl::Coord => None,
        }
    }

    pub fn apply(&self, x: &Elem) -> Elem {
        if let (Some(t), Elem::Idx(i)) = (self.table(), x) {
            return Elem::Idx(t[*i as usize]);
        }
        let ring = &self.0.ring;
        match &self.0.imp {
            EndoImpl::Identity => x.clone(),
            EndoImpl::Parts(l, r) => {
                let c = ring.coords(x);
                let v = c.tuple_parts();
                let image = Elem::Tuple(vec![l.apply(&v[0]), r.apply(&v[1])]);
                ring.from_coords(&image).expect("componentwise image lies in the sum")
            }
            EndoImpl::Coord => {
                let c = ring.coords(x);
                let image = self.apply_coords(&c);
                ring.from_coords(&image)
                    .unwrap_or_else(|| panic!("{} produced a non-element {image:?}", self.0.spec))
            }
        }
    }

    fn apply_coords(&self, c: &Elem) -> Elem {
        let ring = &self.0.ring;
        match &self.0.spec {
            EndoSpec::Eval0 => {
                let (base, _) = ring.poly_base().unwrap();
                match c.poly_coeffs().first() {
                    Some(c0) if !base.is_zero(c0) => Elem::Poly(vec![c0.clone()]),
                    _ => Elem::Poly(vec![]),
                }
            }
            EndoSpec::SquareVar => {
                let (base, _) = ring.poly_base().unwrap();
                let coeffs = c.poly_coeffs();
                let mut out = vec![base.zero(); coeffs.len().saturating_mul(2).saturating_sub(1)];
                for (k, a) in coeffs.iter().enumerate() {
                    out[2 * k] = a.clone();
                }
                Elem::Poly(out)
            }
            EndoSpec::NegateOffdiag => {
                let mut v = c.tuple_parts().to_vec();
                v[1] = match ring.matrix_base() {
                    Some(b) => b.neg(&v[1]),
                    None => Elem::Rat(-v[1].as_rat()),
                };
                Elem::Tuple(v)
            }
            EndoSpec::HalveOffdiag => {
                let v = c.tuple_parts();
                Elem::Tuple(vec![v[0].clone(), Elem::Rat(half(v[1].as_rat()))])
            }
            EndoSpec::Conj => {
                let v = c.tuple_parts();
                Elem::Tuple(vec![v[0].clone(), Elem::Rat(-v[1].as_rat())])
            }
            EndoSpec::Identity | EndoSpec::Table(_) | EndoSpec::Componentwise(..) => {
                unreachable!("handled without coordinates")
            }
        }
    }

    pub fn pow_apply(&self, k: usize, x: &Elem) -> Elem {
        (0..k).fold(x.clone(), |acc, _| self.apply(&acc))
    }

    fn validate(&self) -> Result<()> {
        let ring = &self.0.ring;
        let one = ring.one();
        if self.apply(&one) != one {
            return Err(Error::Validation {
                law: "unital (σ(1) = 1)".into(),
                witness: format!("σ(1) = {}", ring.fmt_elem(&self.apply(&one))),
            });
        }
        for (a, b) in validation_pairs(ring) {
            let fail = |law: &str| Error::Validation {
                law: law.to_string(),
                witness: format!("({}, {})", ring.fmt_elem(&a), ring.fmt_elem(&b)),
            };
            if self.apply(&ring.add(&a, &b)) != ring.add(&self.apply(&a), &self.apply(&b)) {
                return Err(fail("additive (σ(a+b) = σ(a)+σ(b))"));
            }
            if self.apply(&ring.mul(&a, &b)) != ring.mul(&self.apply(&a), &self.apply(&b)) {
                return Err(fail("multiplicative (σ(ab) = σ(a)σ(b))"));
            }
        }
        Ok(())
    }
}

/// Pairs on which maps are validated: all pairs when that is at most 2^20,
/// otherwise probe pairs plus seeded random pairs.
fn validation_pairs(ring: &Ring) -> Vec<(Elem, Elem)> {
    if let Some(f) = ring.finite() {
        if f.size() * f.size() <= 1 << 20 {
            let elems: Vec<Elem> = f.indices().map(Elem::Idx).collect();
            return elems
                .iter()
                .flat_map(|a| elems.iter().map(move |b| (a.clone(), b.clone())))
                .collect();
        }
    }
    let probes: Vec<Elem> = ring.probes().into_iter().take(12).collect();
    let mut pairs: Vec<(Elem, Elem)> = probes
        .iter()
        .flat_map(|a| probes.iter().map(move |b| (a.clone(), b.clone())))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(MAP_VALIDATION_SEED);
    for _ in 0..ring.limits().validation_samples {
        pairs.push((ring.sample_with(&mut rng), ring.sample_with(&mut rng)));
    }
    pairs
}

#[derive(Clone)]
enum DerivImpl {
    Zero,
    Inner(Elem),
    ConjDiff,
    Parts(SigmaDerivation, SigmaDerivation),
}

struct DerivData {
    sigma: Endo,
    spec: DerivSpec,
    imp: DerivImpl,
    table: Option<Vec<u32>>,
}

/// A validated σ-derivation: additive with `δ(ab) = σ(a)δ(b) + δ(a)b`.
#[derive(Clone)]
pub struct SigmaDerivation(Arc<DerivData>);

impl fmt::Debug for SigmaDerivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SigmaDerivation({} over {})", self.0.spec, self.0.sigma.spec())
    }
}

/// Builds and validates a σ-derivation of `sigma.ring()`.
pub fn make_derivation(sigma: &Endo, spec: &DerivSpec) -> Result<SigmaDerivation> {
    let ring = sigma.ring();
    let imp = match spec {
        DerivSpec::Zero => DerivImpl::Zero,
        DerivSpec::Inner(d) => DerivImpl::Inner(ring.parse_elem(d)?),
        DerivSpec::ConjDiff => DerivImpl::ConjDiff,
        DerivSpec::Componentwise(l, r) => {
            let (Some(sl), Some(sr)) = (sigma.component(0), sigma.component(1)) else {
                return Err(descriptor_error(
                    format!("{spec} (σ = {} is not componentwise)", sigma.spec()),
                    ring,
                ));
            };
            DerivImpl::Parts(make_derivation(&sl, l)?, make_derivation(&sr, r)?)
        }
    };
    let mut data = DerivData {
        sigma: sigma.clone(),
        spec: spec.clone(),
        imp,
        table: None,
    };
    if let Some(f) = ring.finite() {
        let probe = SigmaDerivation(Arc::new(DerivData {
            sigma: sigma.clone(),
            spec: spec.clone(),
            imp: data.imp.clone(),
            table: None,
        }));
        data.table = Some(
            f.indices()
                .map(|i| probe.apply(&Elem::Idx(i)).idx().expect("finite image"))
                .collect(),
        );
    }
    let delta = SigmaDerivation(Arc::new(data));
    delta.validate()?;
    Ok(delta)
}

impl SigmaDerivation {
    pub fn zero(sigma: &Endo) -> SigmaDerivation {
        make_derivation(sigma, &DerivSpec::Zero).expect("zero derivation is always valid")
    }

    pub fn sigma(&self) -> &Endo {
        &self.0.sigma
    }

    pub fn ring(&self) -> &Ring {
        self.0.sigma.ring()
    }

    pub fn spec(&self) -> &DerivSpec {
        &self.0.spec
    }

    pub fn table(&self) -> Option<&[u32]> {
        self.0.table.as_deref()
    }

    /// Restriction to one component of a direct sum.
    pub fn component(&self, k: usize) -> Option<SigmaDerivation> {
        let sigma = self.0.sigma.component(k)?;
        match &self.0.imp {
            DerivImpl::Parts(a, b) => Some(if k == 0 { a.clone() } else { b.clone() }),
            DerivImpl::Zero => Some(SigmaDerivation::zero(&sigma)),
            _ => None,
        }
    }

    /// True when δ vanishes on every element.
    pub fn is_zero(&self) -> bool {
        match (&self.0.imp, self.table()) {
            (DerivImpl::Zero, _) => true,
            (_, Some(t)) => t.iter().all(|&v| v == 0),
            (DerivImpl::Parts(l, r), None) => l.is_zero() && r.is_zero(),
            _ => false,
        }
    }

    pub fn apply(&self, x: &Elem) -> Elem {
        if let (Some(t), Elem::Idx(i)) = (self.table(), x) {
            return Elem::Idx(t[*i as usize]);
        }
        let ring = self.ring();
        match &self.0.imp {
            DerivImpl::Zero => ring.zero(),
            DerivImpl::Inner(d) => ring.sub(&ring.mul(d, x), &ring.mul(&self.0.sigma.apply(x), d)),
            DerivImpl::ConjDiff => ring.sub(x, &self.0.sigma.apply(x)),
            DerivImpl::Parts(l, r) => {
                let c = ring.coords(x);
                let v = c.tuple_parts();
                let image = Elem::Tuple(vec![l.apply(&v[0]), r.apply(&v[1])]);
                ring.from_coords(&image).expect("componentwise image lies in the sum")
            }
        }
    }

    fn validate(&self) -> Result<()> {
        let ring = self.ring();
        let sigma = &self.0.sigma;
        for (a, b) in validation_pairs(ring) {
            let fail = |law: &str| Error::Validation {
                law: law.to_string(),
                witness: format!("({}, {})", ring.fmt_elem(&a), ring.fmt_elem(&b)),
            };
            if self.apply(&ring.add(&a, &b)) != ring.add(&self.apply(&a), &self.apply(&b)) {
                return Err(fail("additive (δ(a+b) = δ(a)+δ(b))"));
            }
            let lhs = self.apply(&ring.mul(&a, &b));
            let rhs = ring.add(&ring.mul(&sigma.apply(&a), &self.apply(&b)), &ring.mul(&self.apply(&a), &b));
            if lhs != rhs {
                return Err(fail("twisted Leibniz (δ(ab) = σ(a)δ(b)+δ(a)b)"));
            }
        }
        Ok(())
    }
}

/// A pair (σ, δ) on one ring with memoized `f_i^j` tables for enumerable rings.
#[derive(Clone)]
pub struct QuasiDerivation(Arc<QdData>);

struct QdData {
    sigma: Endo,
    delta: SigmaDerivation,
    /// `rows[j][i]` is the table of `f_i^j`; grown on demand.
    rows: Mutex<Vec<Vec<Arc<Vec<u32>>>>>,
}

impl fmt::Debug for QuasiDerivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "QuasiDerivation(σ={}, δ={} on {})",
            self.0.sigma.spec(),
            self.0.delta.spec(),
            self.ring().name()
        )
    }
}

impl PartialEq for QuasiDerivation {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.ring() == other.ring()
                && self.sigma().spec() == other.sigma().spec()
                && self.delta().spec() == other.delta().spec())
    }
}

impl QuasiDerivation {
    pub fn new(sigma: Endo, delta: SigmaDerivation) -> Result<Self> {
        if sigma.ring() != delta.ring() || sigma.spec() != delta.sigma().spec() {
            return Err(Error::Mismatch(format!(
                "δ is a {}-derivation but σ is {}",
                delta.sigma().spec(),
                sigma.spec()
            )));
        }
        Ok(QuasiDerivation(Arc::new(QdData {
            sigma,
            delta,
            rows: Mutex::new(Vec::new()),
        })))
    }

    /// Builds σ and δ from descriptors.
    pub fn from_specs(ring: &Ring, sigma: &EndoSpec, delta: &DerivSpec) -> Result<Self> {
        let s = make_endo(ring, sigma)?;
        let d = make_derivation(&s, delta)?;
        QuasiDerivation::new(s, d)
    }

    /// σ = id, δ = 0.
    pub fn trivial(ring: &Ring) -> Self {
        let s = Endo::identity(ring);
        let d = SigmaDerivation::zero(&s);
        QuasiDerivation::new(s, d).expect("identity pair")
    }

    pub fn ring(&self) -> &Ring {
        self.0.sigma.ring()
    }

    pub fn sigma(&self) -> &Endo {
        &self.0.sigma
    }

    pub fn delta(&self) -> &SigmaDerivation {
        &self.0.delta
    }

    /// The pair restricted to one component of a direct sum, when both maps
    /// act componentwise.
    pub fn component(&self, k: usize) -> Option<QuasiDerivation> {
        let s = self.0.sigma.component(k)?;
        let d = self.0.delta.component(k)?;
        QuasiDerivation::new(s, d).ok()
    }

    /// Table of `f_i^j` on an enumerable ring.
    pub fn f_table(&self, i: usize, j: usize) -> Result<Arc<Vec<u32>>> {
        if i > j {
            return Err(Error::Index { i, j });
        }
        let f = self.ring().require_finite("f_table")?;
        let sigma = self.0.sigma.table().expect("finite ring has σ table");
        let delta = self.0.delta.table().expect("finite ring has δ table");
        let mut rows = self.0.rows.lock().expect("f-table memo poisoned");
        if rows.is_empty() {
            rows.push(vec![Arc::new(f.indices().collect())]);
        }
        while rows.len() <= j {
            let prev = rows.last().unwrap();
            let len = prev.len() + 1;
            let mut next = Vec::with_capacity(len);
            for k in 0..len {
                let t: Vec<u32> = f
                    .indices()
                    .map(|r| {
                        let via_sigma = if k > 0 { sigma[prev[k - 1][r as usize] as usize] } else { 0 };
                        let via_delta = if k < prev.len() { delta[prev[k][r as usize] as usize] } else { 0 };
                        f.add(via_sigma, via_delta)
                    })
                    .collect();
                next.push(Arc::new(t));
            }
            rows.push(next);
        }
        Ok(rows[j][i].clone())
    }

    /// `[f_0^j(r), …, f_j^j(r)]`, the coefficients of `x^j·r`.
    pub fn f_row(&self, j: usize, r: &Elem) -> Vec<Elem> {
        if let (Some(_), Elem::Idx(x)) = (self.ring().finite(), r) {
            return (0..=j)
                .map(|i| Elem::Idx(self.f_table(i, j).expect("i <= j")[*x as usize]))
                .collect();
        }
        let ring = self.ring();
        let mut row = vec![r.clone()];
        for _ in 0..j {
            let mut next = Vec::with_capacity(row.len() + 1);
            for k in 0..=row.len() {
                let via_sigma = if k > 0 { self.0.sigma.apply(&row[k - 1]) } else { ring.zero() };
                let via_delta = if k < row.len() { self.0.delta.apply(&row[k]) } else { ring.zero() };
                next.push(ring.add(&via_sigma, &via_delta));
            }
            row = next;
        }
        row
    }

    /// `f_i^j(r)` by the recurrence.
    pub fn f_map(&self, i: usize, j: usize, r: &Elem) -> Result<Elem> {
        if i > j {
            return Err(Error::Index { i, j });
        }
        if let (Some(_), Elem::Idx(x)) = (self.ring().finite(), r) {
            return Ok(Elem::Idx(self.f_table(i, j)?[*x as usize]));
        }
        Ok(self.f_row(j, r).swap_remove(i))
    }

    /// `f_i^j(r)` as the literal sum over all words with `i` σ's and `j - i` δ's.
    pub fn f_map_oracle(&self, i: usize, j: usize, r: &Elem) -> Result<Elem> {
        if i > j {
            return Err(Error::Index { i, j });
        }
        let cap = self.ring().limits().oracle_cap;
        if j > cap {
            return Err(Error::cap("oracle word length j", j as u128, cap as u128));
        }
        let ring = self.ring();
        let mut total = ring.zero();
        // bit k of `word` set means letter k (counted from the right) is σ
        for word in 0u32..(1u32 << j) {
            if word.count_ones() as usize != i {
                continue;
            }
            let mut v = r.clone();
            for k in 0..j {
                v = if word >> k & 1 == 1 {
                    self.0.sigma.apply(&v)
                } else {
                    self.0.delta.apply(&v)
                };
            }
            total = ring.add(&total, &v);
        }
        Ok(total)
    }
}

/// Every unital endomorphism of a small enumerable ring, in lexicographic
/// order of image tables.
pub fn enumerate_endos(ring: &Ring) -> Result<Vec<Endo>> {
    let f = ring.require_finite("enumerate_endos")?;
    let cap = ring.limits().endo_cap;
    if f.size() > cap {
        return Err(Error::cap("ring size for endomorphism enumeration", f.size() as u128, cap as u128));
    }
    let n = f.size();
    let mut found = Vec::new();
    let mut images: Vec<Option<u32>> = vec![None; n];
    images[0] = Some(0);
    images[f.one() as usize] = Some(f.one());

    /// Checks the laws on every pair involving `k` whose images are all assigned.
    fn consistent(f: &FiniteRing, images: &[Option<u32>], k: u32) -> bool {
        let sk = images[k as usize].unwrap();
        f.indices().all(|a| {
            let Some(sa) = images[a as usize] else { return true };
            [(a, k, sa, sk), (k, a, sk, sa)].iter().all(|&(x, y, sx, sy)| {
                images[f.add(x, y) as usize].is_none_or(|s| s == f.add(sx, sy))
                    && images[f.mul(x, y) as usize].is_none_or(|s| s == f.mul(sx, sy))
            })
        })
    }

    fn search(
        f: &FiniteRing,
        images: &mut Vec<Option<u32>>,
        pos: usize,
        out: &mut Vec<Vec<u32>>,
    ) {
        if pos == images.len() {
            let table: Vec<u32> = images.iter().map(|v| v.unwrap()).collect();
            out.push(table);
            return;
        }
        if images[pos].is_some() {
            if consistent(f, images, pos as u32) {
                search(f, images, pos + 1, out);
            }
            return;
        }
        for v in f.indices() {
            images[pos] = Some(v);
            if consistent(f, images, pos as u32) {
                search(f, images, pos + 1, out);
            }
        }
        images[pos] = None;
    }

    let mut tables = Vec::new();
    search(f, &mut images, 0, &mut tables);
    for t in tables {
        // pairs whose sum or product was assigned later are only covered here
        if let Ok(e) = make_endo(ring, &EndoSpec::Table(t)) {
            found.push(e);
        }
    }
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::build_ring;

    fn gauss_qd() -> QuasiDerivation {
        let g = build_ring(&RingSpec::Gauss).unwrap();
        QuasiDerivation::from_specs(&g, &EndoSpec::Conj, &DerivSpec::ConjDiff).unwrap()
    }

    #[test]
    fn eval0_sends_one_plus_t_to_one() {
        let p = build_ring(&RingSpec::poly(RingSpec::zn(2), "t")).unwrap();
        let s = make_endo(&p, &EndoSpec::Eval0).unwrap();
        assert_eq!(p.fmt_elem(&s.apply(&p.parse_elem("1+t").unwrap())), "1");
        assert!(p.is_zero(&s.apply(&p.parse_elem("t").unwrap())));
    }

    #[test]
    fn negate_offdiag_on_tri4() {
        let r = build_ring(&RingSpec::tri2(RingSpec::zn(4))).unwrap();
        let s = make_endo(&r, &EndoSpec::NegateOffdiag).unwrap();
        assert_eq!(r.fmt_elem(&s.apply(&r.parse_elem("(2,1)").unwrap())), "(2,3)");
    }

    #[test]
    fn non_unital_table_rejected() {
        let r = build_ring(&RingSpec::zn(4)).unwrap();
        match make_endo(&r, &EndoSpec::Table(vec![0, 2, 0, 2])) {
            Err(Error::Validation { law, .. }) => assert!(law.starts_with("unital"), "{law}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn descriptor_must_fit_ring() {
        let r = build_ring(&RingSpec::zn(4)).unwrap();
        assert!(matches!(make_endo(&r, &EndoSpec::Conj), Err(Error::Descriptor { .. })));
    }

    #[test]
    fn conj_diff_on_i() {
        let qd = gauss_qd();
        let g = qd.ring();
        let i = g.parse_elem("i").unwrap();
        assert_eq!(g.fmt_elem(&qd.delta().apply(&i)), "2i");
    }

    #[test]
    fn inner_derivation_on_t2f2() {
        let r = build_ring(&RingSpec::ut2(RingSpec::zn(2))).unwrap();
        let qd = QuasiDerivation::from_specs(&r, &EndoSpec::Identity, &DerivSpec::Inner("(0,1,0)".into())).unwrap();
        let e11 = r.parse_elem("(1,0,0)").unwrap();
        // E12·E11 − E11·E12 = −E12 = E12 over F2
        assert_eq!(r.fmt_elem(&qd.delta().apply(&e11)), "(0,1,0)");
    }

    #[test]
    fn f_small_cases() {
        let qd = gauss_qd();
        let g = qd.ring();
        let i = g.parse_elem("i").unwrap();
        assert_eq!(qd.f_map(0, 0, &i).unwrap(), i);
        assert_eq!(g.fmt_elem(&qd.f_map(1, 2, &i).unwrap()), "-4i");
        assert_eq!(qd.f_map(1, 2, &i).unwrap(), qd.f_map_oracle(1, 2, &i).unwrap());
        assert!(matches!(qd.f_map(3, 2, &i), Err(Error::Index { i: 3, j: 2 })));
        assert!(matches!(qd.f_map_oracle(0, 13, &i), Err(Error::Cap { .. })));
    }

    #[test]
    fn zero_delta_collapses_words() {
        let r = build_ring(&RingSpec::tri2(RingSpec::zn(4))).unwrap();
        let qd = QuasiDerivation::from_specs(&r, &EndoSpec::NegateOffdiag, &DerivSpec::Zero).unwrap();
        for x in r.elements().unwrap() {
            for j in 0..5 {
                for i in 0..j {
                    assert!(r.is_zero(&qd.f_map(i, j, &x).unwrap()));
                }
                assert_eq!(qd.f_map(j, j, &x).unwrap(), qd.sigma().pow_apply(j, &x));
            }
        }
    }

    #[test]
    fn endo_enumeration() {
        let z4 = build_ring(&RingSpec::zn(4)).unwrap();
        let e = enumerate_endos(&z4).unwrap();
        assert_eq!(e.len(), 1);
        assert!(e[0].is_identity());
        let v = build_ring(&RingSpec::sum(RingSpec::zn(2), RingSpec::zn(2))).unwrap();
        let tables: Vec<Vec<u32>> = enumerate_endos(&v).unwrap().iter().map(|e| e.table().unwrap().to_vec()).collect();
        assert!(tables.contains(&vec![0, 1, 2, 3]));
        assert!(tables.contains(&vec![0, 2, 1, 3]));
        let tri4 = build_ring(&RingSpec::tri2(RingSpec::zn(4))).unwrap();
        assert!(matches!(enumerate_endos(&tri4), Err(Error::Cap { .. })));
    }

    #[test]
    fn componentwise_on_mixed_sum() {
        let s = build_ring(&RingSpec::sum(RingSpec::ut2(RingSpec::zn(2)), RingSpec::poly(RingSpec::zn(2), "y"))).unwrap();
        let qd = QuasiDerivation::from_specs(
            &s,
            &EndoSpec::Componentwise(Box::new(EndoSpec::Identity), Box::new(EndoSpec::SquareVar)),
            &DerivSpec::Zero,
        )
        .unwrap();
        let x = s.parse_elem("((1,1,0),1+y)").unwrap();
        assert_eq!(s.fmt_elem(&qd.sigma().apply(&x)), "((1,1,0),1+y^2)");
    }
}
