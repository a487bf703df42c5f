//! Ring carriers.
//!
//! A [`Ring`] is either *enumerable* (finite, backed by addition and
//! multiplication tables over indices `0..N`) or *sampleable* (infinite, with
//! exact structured elements and a seeded sampler). Every ring is validated
//! against the unital ring axioms when it is built: exhaustively for small
//! enumerable rings, on sampled triples otherwise.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::elem::Elem;
use crate::error::{Error, Result};
use crate::text::{split_top, strip_group};

/// Resource limits shared by construction, sampling and scans.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    /// Largest enumerable ring that may be built.
    pub size_cap: usize,
    /// Bound on numerators, denominators and degrees of sampled values.
    pub height: u32,
    /// Largest ring for which all endomorphisms are enumerated.
    pub endo_cap: usize,
    /// Largest number of candidate polynomials an exhaustive scan may visit.
    pub scan_cap: u64,
    /// Largest `j` for the word-enumeration oracle of `f_i^j`.
    pub oracle_cap: usize,
    /// Largest annihilator lattice closure.
    pub lattice_cap: usize,
    /// Sampled triples/pairs used to validate infinite rings and maps.
    pub validation_samples: usize,
    /// Enumerable rings up to this size get exhaustive triple validation.
    pub exhaustive_validation: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            size_cap: 4096,
            height: 8,
            endo_cap: 8,
            scan_cap: 1_000_000,
            oracle_cap: 12,
            lattice_cap: 4096,
            validation_samples: 500,
            exhaustive_validation: 256,
        }
    }
}

const VALIDATION_SEED: u64 = 0x0005_eed0_f0e1;

/// Constructor descriptor for a ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum RingSpec {
    /// Integers modulo `n`.
    Zn(u64),
    /// Explicit tables; index 0 must be the additive identity.
    Tables { add: Vec<Vec<u32>>, mul: Vec<Vec<u32>> },
    /// Constant-diagonal upper triangular matrices `[[a, b], [0, a]]`.
    Tri2(Box<RingSpec>),
    /// Upper triangular matrices `[[a, b], [0, c]]`.
    Ut2(Box<RingSpec>),
    Sum(Box<RingSpec>, Box<RingSpec>),
    Poly { base: Box<RingSpec>, var: String },
    /// Gaussian rationals `Q(i)`.
    Gauss,
    /// Matrices `[[a, t], [0, a]]` with `a` an integer and `t` rational.
    IntRatTri,
}

impl RingSpec {
    pub fn zn(n: u64) -> Self {
        RingSpec::Zn(n)
    }
    pub fn tri2(base: RingSpec) -> Self {
        RingSpec::Tri2(Box::new(base))
    }
    pub fn ut2(base: RingSpec) -> Self {
        RingSpec::Ut2(Box::new(base))
    }
    pub fn sum(left: RingSpec, right: RingSpec) -> Self {
        RingSpec::Sum(Box::new(left), Box::new(right))
    }
    pub fn poly(base: RingSpec, var: &str) -> Self {
        RingSpec::Poly {
            base: Box::new(base),
            var: var.to_string(),
        }
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::Zn(n) => write!(f, "zn({n})"),
            RingSpec::Tables { add, .. } => write!(f, "tables({})", add.len()),
            RingSpec::Tri2(b) => write!(f, "tri2({b})"),
            RingSpec::Ut2(b) => write!(f, "ut2({b})"),
            RingSpec::Sum(l, r) => write!(f, "sum({l},{r})"),
            RingSpec::Poly { base, var } => write!(f, "poly({base},{var})"),
            RingSpec::Gauss => write!(f, "gauss"),
            RingSpec::IntRatTri => write!(f, "int_rat_tri"),
        }
    }
}

/// Backend of a ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Backend {
    Enumerable,
    Sampleable,
}

/// Table-backed finite ring over indices `0..n`.
pub struct FiniteRing {
    n: usize,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    one: u32,
    /// Constructor coordinates of each index (the index itself for raw tables).
    labels: Vec<Elem>,
    index: HashMap<Elem, u32>,
}

impl FiniteRing {
    #[inline]
    pub fn size(&self) -> usize {
        self.n
    }
    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        self.add[a as usize * self.n + b as usize]
    }
    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[a as usize * self.n + b as usize]
    }
    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        self.neg[a as usize]
    }
    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }
    #[inline]
    pub fn zero(&self) -> u32 {
        0
    }
    #[inline]
    pub fn one(&self) -> u32 {
        self.one
    }
    pub fn indices(&self) -> std::ops::Range<u32> {
        0..self.n as u32
    }
    pub fn label(&self, i: u32) -> &Elem {
        &self.labels[i as usize]
    }
    pub fn lookup(&self, label: &Elem) -> Option<u32> {
        self.index.get(label).copied()
    }
}

enum Kind {
    Zn(u32),
    Tables,
    Tri2(Ring),
    Ut2(Ring),
    Sum(Ring, Ring),
    Poly { base: Ring, var: String },
    Gauss,
    IntRatTri,
}

struct RingData {
    spec: RingSpec,
    kind: Kind,
    finite: Option<FiniteRing>,
    limits: Limits,
}

/// A validated unital ring. Cheap to clone; immutable after construction.
#[derive(Clone)]
pub struct Ring(Arc<RingData>);

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ring({})", self.0.spec)
    }
}

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.spec == other.0.spec
    }
}

/// Builds and validates a ring with default [`Limits`].
pub fn build_ring(spec: &RingSpec) -> Result<Ring> {
    build_ring_with(spec, &Limits::default())
}

pub fn build_ring_with(spec: &RingSpec, limits: &Limits) -> Result<Ring> {
    let ring = construct(spec, limits)?;
    ring.validate()?;
    Ok(ring)
}

fn construct(spec: &RingSpec, limits: &Limits) -> Result<Ring> {
    let kind = match spec {
        RingSpec::Zn(n) => {
            if *n < 2 {
                return Err(Error::Validation {
                    law: "zn(n) needs n >= 2".into(),
                    witness: format!("n={n}"),
                });
            }
            if *n as u128 > limits.size_cap as u128 {
                return Err(Error::Size {
                    size: *n as usize,
                    cap: limits.size_cap,
                });
            }
            Kind::Zn(*n as u32)
        }
        RingSpec::Tables { add, mul } => {
            let finite = finite_from_tables(add, mul, limits)?;
            return Ok(Ring(Arc::new(RingData {
                spec: spec.clone(),
                kind: Kind::Tables,
                finite: Some(finite),
                limits: limits.clone(),
            })));
        }
        RingSpec::Tri2(b) => Kind::Tri2(build_ring_with(b, limits)?),
        RingSpec::Ut2(b) => Kind::Ut2(build_ring_with(b, limits)?),
        RingSpec::Sum(l, r) => Kind::Sum(build_ring_with(l, limits)?, build_ring_with(r, limits)?),
        RingSpec::Poly { base, var } => {
            if var.is_empty() || var == "x" || var == "i" || !var.chars().all(char::is_alphabetic) {
                return Err(Error::Validation {
                    law: "polynomial variable must be alphabetic and differ from x and i".into(),
                    witness: var.clone(),
                });
            }
            Kind::Poly {
                base: build_ring_with(base, limits)?,
                var: var.clone(),
            }
        }
        RingSpec::Gauss => Kind::Gauss,
        RingSpec::IntRatTri => Kind::IntRatTri,
    };
    let mut data = RingData {
        spec: spec.clone(),
        kind,
        finite: None,
        limits: limits.clone(),
    };
    if let Some(labels) = enumerate_labels(&data.kind, limits)? {
        data.finite = Some(tabulate(&data.kind, labels));
    }
    Ok(Ring(Arc::new(data)))
}

/// Constructor coordinates of every element, first coordinate varying fastest.
/// `None` for infinite kinds.
fn enumerate_labels(kind: &Kind, limits: &Limits) -> Result<Option<Vec<Elem>>> {
    let check = |size: u128| -> Result<()> {
        if size > limits.size_cap as u128 {
            Err(Error::Size {
                size: size.min(usize::MAX as u128) as usize,
                cap: limits.size_cap,
            })
        } else {
            Ok(())
        }
    };
    let labels = match kind {
        Kind::Zn(n) => (0..*n).map(Elem::Idx).collect(),
        Kind::Tables | Kind::Gauss | Kind::IntRatTri | Kind::Poly { .. } => return Ok(None),
        Kind::Tri2(b) => {
            let Some(n) = b.size() else { return Ok(None) };
            check((n as u128).pow(2))?;
            let mut out = Vec::with_capacity(n * n);
            for y in 0..n as u32 {
                for x in 0..n as u32 {
                    out.push(Elem::Tuple(vec![Elem::Idx(x), Elem::Idx(y)]));
                }
            }
            out
        }
        Kind::Ut2(b) => {
            let Some(n) = b.size() else { return Ok(None) };
            check((n as u128).pow(3))?;
            let mut out = Vec::with_capacity(n * n * n);
            for z in 0..n as u32 {
                for y in 0..n as u32 {
                    for x in 0..n as u32 {
                        out.push(Elem::Tuple(vec![Elem::Idx(x), Elem::Idx(y), Elem::Idx(z)]));
                    }
                }
            }
            out
        }
        Kind::Sum(l, r) => {
            let (Some(nl), Some(nr)) = (l.size(), r.size()) else {
                return Ok(None);
            };
            check(nl as u128 * nr as u128)?;
            let mut out = Vec::with_capacity(nl * nr);
            for y in 0..nr as u32 {
                for x in 0..nl as u32 {
                    out.push(Elem::Tuple(vec![Elem::Idx(x), Elem::Idx(y)]));
                }
            }
            out
        }
    };
    Ok(Some(labels))
}

fn tabulate(kind: &Kind, labels: Vec<Elem>) -> FiniteRing {
    let n = labels.len();
    let index: HashMap<Elem, u32> = labels
        .iter()
        .enumerate()
        .map(|(i, l)| (l.clone(), i as u32))
        .collect();
    let find = |l: &Elem| -> u32 { index[l] };
    let mut add = Vec::with_capacity(n * n);
    let mut mul = Vec::with_capacity(n * n);
    for a in &labels {
        for b in &labels {
            add.push(find(&kind.coord_add(a, b)));
            mul.push(find(&kind.coord_mul(a, b)));
        }
    }
    let neg = labels.iter().map(|a| find(&kind.coord_neg(a))).collect();
    let one = find(&kind.coord_one());
    debug_assert_eq!(find(&kind.coord_zero()), 0);
    FiniteRing {
        n,
        add,
        mul,
        neg,
        one,
        labels,
        index,
    }
}

#[allow(clippy::needless_range_loop)]
fn finite_from_tables(add: &[Vec<u32>], mul: &[Vec<u32>], limits: &Limits) -> Result<FiniteRing> {
    let n = add.len();
    let malformed = |what: &str| Error::Validation {
        law: "table shape".into(),
        witness: what.to_string(),
    };
    if n < 2 {
        return Err(Error::Validation {
            law: "ring must have 1 != 0".into(),
            witness: format!("{n} element(s)"),
        });
    }
    if n > limits.size_cap {
        return Err(Error::Size {
            size: n,
            cap: limits.size_cap,
        });
    }
    if mul.len() != n {
        return Err(malformed("add and mul tables differ in size"));
    }
    for row in add.iter().chain(mul) {
        if row.len() != n {
            return Err(malformed("tables must be square"));
        }
        if row.iter().any(|&v| v as usize >= n) {
            return Err(malformed("table entry out of range"));
        }
    }
    let add_flat: Vec<u32> = add.iter().flatten().copied().collect();
    let mul_flat: Vec<u32> = mul.iter().flatten().copied().collect();
    for x in 0..n {
        if add[0][x] as usize != x || add[x][0] as usize != x {
            return Err(Error::Validation {
                law: "additive identity at index 0".into(),
                witness: format!("(#0, #{x})"),
            });
        }
    }
    let mut neg = Vec::with_capacity(n);
    for x in 0..n {
        match (0..n).find(|&y| add[x][y] == 0) {
            Some(y) => neg.push(y as u32),
            None => {
                return Err(Error::Validation {
                    law: "additive inverse".into(),
                    witness: format!("(#{x})"),
                })
            }
        }
    }
    let one = (0..n)
        .find(|&u| (0..n).all(|x| mul[u][x] as usize == x && mul[x][u] as usize == x))
        .ok_or_else(|| Error::Validation {
            law: "multiplicative identity".into(),
            witness: "no two-sided unit in mul table".into(),
        })?;
    let labels: Vec<Elem> = (0..n as u32).map(Elem::Idx).collect();
    let index = labels.iter().map(|l| (l.clone(), l.idx().unwrap())).collect();
    Ok(FiniteRing {
        n,
        add: add_flat,
        mul: mul_flat,
        neg,
        one: one as u32,
        labels,
        index,
    })
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn rat_elem(v: BigRational) -> Elem {
    Elem::Rat(v)
}

impl Kind {
    fn coord_zero(&self) -> Elem {
        match self {
            Kind::Zn(_) | Kind::Tables => Elem::Idx(0),
            Kind::Tri2(b) => Elem::Tuple(vec![b.zero(), b.zero()]),
            Kind::Ut2(b) => Elem::Tuple(vec![b.zero(), b.zero(), b.zero()]),
            Kind::Sum(l, r) => Elem::Tuple(vec![l.zero(), r.zero()]),
            Kind::Poly { .. } => Elem::Poly(vec![]),
            Kind::Gauss => Elem::Tuple(vec![rat_elem(BigRational::zero()), rat_elem(BigRational::zero())]),
            Kind::IntRatTri => Elem::Tuple(vec![Elem::Int(BigInt::zero()), rat_elem(BigRational::zero())]),
        }
    }

    fn coord_one(&self) -> Elem {
        match self {
            Kind::Zn(_) => Elem::Idx(1),
            Kind::Tables => unreachable!("raw tables carry their own unit"),
            Kind::Tri2(b) => Elem::Tuple(vec![b.one(), b.zero()]),
            Kind::Ut2(b) => Elem::Tuple(vec![b.one(), b.zero(), b.one()]),
            Kind::Sum(l, r) => Elem::Tuple(vec![l.one(), r.one()]),
            Kind::Poly { base, .. } => Elem::Poly(vec![base.one()]),
            Kind::Gauss => Elem::Tuple(vec![rat_elem(BigRational::one()), rat_elem(BigRational::zero())]),
            Kind::IntRatTri => Elem::Tuple(vec![Elem::Int(BigInt::one()), rat_elem(BigRational::zero())]),
        }
    }

    fn coord_add(&self, x: &Elem, y: &Elem) -> Elem {
        match self {
            Kind::Zn(n) => Elem::Idx((x.idx().unwrap() + y.idx().unwrap()) % n),
            Kind::Tables => unreachable!(),
            Kind::Tri2(b) | Kind::Ut2(b) => Elem::Tuple(
                x.tuple_parts()
                    .iter()
                    .zip(y.tuple_parts())
                    .map(|(u, v)| b.add(u, v))
                    .collect(),
            ),
            Kind::Sum(l, r) => {
                let (x, y) = (x.tuple_parts(), y.tuple_parts());
                Elem::Tuple(vec![l.add(&x[0], &y[0]), r.add(&x[1], &y[1])])
            }
            Kind::Poly { base, .. } => {
                let (p, q) = (x.poly_coeffs(), y.poly_coeffs());
                let len = p.len().max(q.len());
                let zero = base.zero();
                let coeffs = (0..len)
                    .map(|k| base.add(p.get(k).unwrap_or(&zero), q.get(k).unwrap_or(&zero)))
                    .collect();
                Elem::Poly(trim(base, coeffs))
            }
            Kind::Gauss => {
                let (x, y) = (x.tuple_parts(), y.tuple_parts());
                Elem::Tuple(vec![
                    rat_elem(x[0].as_rat() + y[0].as_rat()),
                    rat_elem(x[1].as_rat() + y[1].as_rat()),
                ])
            }
            Kind::IntRatTri => {
                let (x, y) = (x.tuple_parts(), y.tuple_parts());
                Elem::Tuple(vec![
                    Elem::Int(x[0].as_int() + y[0].as_int()),
                    rat_elem(x[1].as_rat() + y[1].as_rat()),
                ])
            }
        }
    }

    fn coord_neg(&self, x: &Elem) -> Elem {
        match self {
            Kind::Zn(n) => Elem::Idx((n - x.idx().unwrap()) % n),
            Kind::Tables => unreachable!(),
            Kind::Tri2(b) | Kind::Ut2(b) => Elem::Tuple(x.tuple_parts().iter().map(|u| b.neg(u)).collect()),
            Kind::Sum(l, r) => {
                let x = x.tuple_parts();
                Elem::Tuple(vec![l.neg(&x[0]), r.neg(&x[1])])
            }
            Kind::Poly { base, .. } => Elem::Poly(x.poly_coeffs().iter().map(|c| base.neg(c)).collect()),
            Kind::Gauss => {
                let x = x.tuple_parts();
                Elem::Tuple(vec![rat_elem(-x[0].as_rat()), rat_elem(-x[1].as_rat())])
            }
            Kind::IntRatTri => {
                let x = x.tuple_parts();
                Elem::Tuple(vec![Elem::Int(-x[0].as_int()), rat_elem(-x[1].as_rat())])
            }
        }
    }

    fn coord_mul(&self, x: &Elem, y: &Elem) -> Elem {
        match self {
            Kind::Zn(n) => Elem::Idx(((x.idx().unwrap() as u64 * y.idx().unwrap() as u64) % *n as u64) as u32),
            Kind::Tables => unreachable!(),
            Kind::Tri2(b) => {
                let (x, y) = (x.tuple_parts(), y.tuple_parts());
                Elem::Tuple(vec![
                    b.mul(&x[0], &y[0]),
                    b.add(&b.mul(&x[0], &y[1]), &b.mul(&x[1], &y[0])),
                ])
            }
            Kind::Ut2(b) => {
                let (x, y) = (x.tuple_parts(), y.tuple_parts());
                Elem::Tuple(vec![
                    b.mul(&x[0], &y[0]),
                    b.add(&b.mul(&x[0], &y[1]), &b.mul(&x[1], &y[2])),
                    b.mul(&x[2], &y[2]),
                ])
            }
            Kind::Sum(l, r) => {
                let (x, y) = (x.tuple_parts(), y.tuple_parts());
                Elem::Tuple(vec![l.mul(&x[0], &y[0]), r.mul(&x[1], &y[1])])
            }
            Kind::Poly { base, .. } => {
                let (p, q) = (x.poly_coeffs(), y.poly_coeffs());
                if p.is_empty() || q.is_empty() {
                    return Elem::Poly(vec![]);
                }
                let mut out = vec![base.zero(); p.len() + q.len() - 1];
                for (i, a) in p.iter().enumerate() {
                    if base.is_zero(a) {
                        continue;
                    }
                    for (j, b) in q.iter().enumerate() {
                        out[i + j] = base.add(&out[i + j], &base.mul(a, b));
                    }
                }
                Elem::Poly(trim(base, out))
            }
            Kind::Gauss => {
                let (x, y) = (x.tuple_parts(), y.tuple_parts());
                let (a, b, c, d) = (x[0].as_rat(), x[1].as_rat(), y[0].as_rat(), y[1].as_rat());
                Elem::Tuple(vec![rat_elem(a * c - b * d), rat_elem(a * d + b * c)])
            }
            Kind::IntRatTri => {
                let (x, y) = (x.tuple_parts(), y.tuple_parts());
                let (a, t, b, s) = (x[0].as_int(), x[1].as_rat(), y[0].as_int(), y[1].as_rat());
                let a_q = BigRational::from_integer(a.clone());
                let b_q = BigRational::from_integer(b.clone());
                Elem::Tuple(vec![Elem::Int(a * b), rat_elem(a_q * s + t * b_q)])
            }
        }
    }
}

fn trim(base: &Ring, mut coeffs: Vec<Elem>) -> Vec<Elem> {
    while coeffs.last().is_some_and(|c| base.is_zero(c)) {
        coeffs.pop();
    }
    coeffs
}

impl Ring {
    pub fn spec(&self) -> &RingSpec {
        &self.0.spec
    }

    pub fn name(&self) -> String {
        self.0.spec.to_string()
    }

    pub fn limits(&self) -> &Limits {
        &self.0.limits
    }

    pub fn backend(&self) -> Backend {
        if self.0.finite.is_some() {
            Backend::Enumerable
        } else {
            Backend::Sampleable
        }
    }

    pub fn is_enumerable(&self) -> bool {
        self.0.finite.is_some()
    }

    pub fn finite(&self) -> Option<&FiniteRing> {
        self.0.finite.as_ref()
    }

    pub fn require_finite(&self, op: &str) -> Result<&FiniteRing> {
        self.finite().ok_or_else(|| Error::backend_infinite(op))
    }

    pub fn size(&self) -> Option<usize> {
        self.finite().map(FiniteRing::size)
    }

    /// Component rings of a direct sum.
    pub fn sum_parts(&self) -> Option<(&Ring, &Ring)> {
        match &self.0.kind {
            Kind::Sum(l, r) => Some((l, r)),
            _ => None,
        }
    }

    /// Coefficient ring and variable name of a polynomial ring.
    pub fn poly_base(&self) -> Option<(&Ring, &str)> {
        match &self.0.kind {
            Kind::Poly { base, var } => Some((base, var)),
            _ => None,
        }
    }

    /// Base ring of `tri2` / `ut2`.
    pub fn matrix_base(&self) -> Option<&Ring> {
        match &self.0.kind {
            Kind::Tri2(b) | Kind::Ut2(b) => Some(b),
            _ => None,
        }
    }

    pub fn zero(&self) -> Elem {
        match self.finite() {
            Some(_) => Elem::Idx(0),
            None => self.0.kind.coord_zero(),
        }
    }

    pub fn one(&self) -> Elem {
        match self.finite() {
            Some(f) => Elem::Idx(f.one),
            None => self.0.kind.coord_one(),
        }
    }

    pub fn is_zero(&self, x: &Elem) -> bool {
        match (self.finite(), x) {
            (Some(_), Elem::Idx(i)) => *i == 0,
            _ => *x == self.zero(),
        }
    }

    pub fn add(&self, x: &Elem, y: &Elem) -> Elem {
        match (self.finite(), x, y) {
            (Some(f), Elem::Idx(a), Elem::Idx(b)) => Elem::Idx(f.add(*a, *b)),
            _ => self.0.kind.coord_add(x, y),
        }
    }

    pub fn mul(&self, x: &Elem, y: &Elem) -> Elem {
        match (self.finite(), x, y) {
            (Some(f), Elem::Idx(a), Elem::Idx(b)) => Elem::Idx(f.mul(*a, *b)),
            _ => self.0.kind.coord_mul(x, y),
        }
    }

    pub fn neg(&self, x: &Elem) -> Elem {
        match (self.finite(), x) {
            (Some(f), Elem::Idx(a)) => Elem::Idx(f.neg(*a)),
            _ => self.0.kind.coord_neg(x),
        }
    }

    pub fn sub(&self, x: &Elem, y: &Elem) -> Elem {
        self.add(x, &self.neg(y))
    }

    pub fn mul3(&self, x: &Elem, y: &Elem, z: &Elem) -> Elem {
        self.mul(&self.mul(x, y), z)
    }

    pub fn sum<'a>(&self, items: impl IntoIterator<Item = &'a Elem>) -> Elem {
        items.into_iter().fold(self.zero(), |acc, x| self.add(&acc, x))
    }

    /// Constructor coordinates of `x` (identity for infinite rings).
    pub fn coords(&self, x: &Elem) -> Elem {
        match (self.finite(), x) {
            (Some(f), Elem::Idx(i)) => f.label(*i).clone(),
            _ => x.clone(),
        }
    }

    /// Element with the given constructor coordinates.
    pub fn from_coords(&self, coords: &Elem) -> Option<Elem> {
        match self.finite() {
            Some(f) => f.lookup(coords).map(Elem::Idx),
            None => self.contains(coords).then(|| coords.clone()),
        }
    }

    /// Whether `x` is a well-formed element of this ring.
    pub fn contains(&self, x: &Elem) -> bool {
        if let Some(f) = self.finite() {
            return matches!(x, Elem::Idx(i) if (*i as usize) < f.size());
        }
        match (&self.0.kind, x) {
            (Kind::Gauss, Elem::Tuple(v)) => v.len() == 2 && v.iter().all(|c| matches!(c, Elem::Rat(_))),
            (Kind::IntRatTri, Elem::Tuple(v)) => {
                v.len() == 2 && matches!(v[0], Elem::Int(_)) && matches!(v[1], Elem::Rat(_))
            }
            (Kind::Tri2(b), Elem::Tuple(v)) => v.len() == 2 && v.iter().all(|c| b.contains(c)),
            (Kind::Ut2(b), Elem::Tuple(v)) => v.len() == 3 && v.iter().all(|c| b.contains(c)),
            (Kind::Sum(l, r), Elem::Tuple(v)) => v.len() == 2 && l.contains(&v[0]) && r.contains(&v[1]),
            (Kind::Poly { base, .. }, Elem::Poly(cs)) => {
                cs.iter().all(|c| base.contains(c)) && cs.last().is_none_or(|c| !base.is_zero(c))
            }
            _ => false,
        }
    }

    /// Canonical form: reduced rationals and trimmed polynomial coefficients.
    pub fn canon(&self, x: &Elem) -> Elem {
        if self.is_enumerable() {
            return x.clone();
        }
        let canon_rat = |r: &Elem| rat_elem(BigRational::new(r.as_rat().numer().clone(), r.as_rat().denom().clone()));
        match (&self.0.kind, x) {
            (Kind::Gauss, Elem::Tuple(v)) => Elem::Tuple(v.iter().map(canon_rat).collect()),
            (Kind::IntRatTri, Elem::Tuple(v)) => Elem::Tuple(vec![v[0].clone(), canon_rat(&v[1])]),
            (Kind::Tri2(b) | Kind::Ut2(b), Elem::Tuple(v)) => Elem::Tuple(v.iter().map(|c| b.canon(c)).collect()),
            (Kind::Sum(l, r), Elem::Tuple(v)) => Elem::Tuple(vec![l.canon(&v[0]), r.canon(&v[1])]),
            (Kind::Poly { base, .. }, Elem::Poly(cs)) => {
                Elem::Poly(trim(base, cs.iter().map(|c| base.canon(c)).collect()))
            }
            _ => x.clone(),
        }
    }

    /// All elements in canonical order; zero first.
    pub fn elements(&self) -> Result<Vec<Elem>> {
        let f = self.require_finite("elements")?;
        Ok(f.indices().map(Elem::Idx).collect())
    }

    /// Deterministic pseudo-random elements of an infinite ring.
    pub fn sample(&self, seed: u64, count: usize) -> Result<Vec<Elem>> {
        if self.is_enumerable() {
            return Err(Error::Backend(format!(
                "{} is enumerable; use elements() instead of sample()",
                self.name()
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Ok((0..count).map(|_| self.sample_with(&mut rng)).collect())
    }

    /// One sampled element; enumerable constituents are drawn uniformly.
    pub fn sample_with<R: Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        if let Some(f) = self.finite() {
            return Elem::Idx(rng.gen_range(0..f.size() as u32));
        }
        let h = self.0.limits.height as i64;
        let sample_rat = |rng: &mut R| rat(rng.gen_range(-h..=h), rng.gen_range(1..=h.max(1)));
        match &self.0.kind {
            Kind::Gauss => Elem::Tuple(vec![rat_elem(sample_rat(rng)), rat_elem(sample_rat(rng))]),
            Kind::IntRatTri => Elem::Tuple(vec![
                Elem::Int(BigInt::from(rng.gen_range(-h..=h))),
                rat_elem(sample_rat(rng)),
            ]),
            Kind::Poly { base, .. } => {
                let deg = rng.gen_range(0..=h as usize);
                let coeffs = (0..=deg).map(|_| base.sample_with(rng)).collect();
                Elem::Poly(trim(base, coeffs))
            }
            Kind::Tri2(b) => Elem::Tuple(vec![b.sample_with(rng), b.sample_with(rng)]),
            Kind::Ut2(b) => Elem::Tuple(vec![b.sample_with(rng), b.sample_with(rng), b.sample_with(rng)]),
            Kind::Sum(l, r) => Elem::Tuple(vec![l.sample_with(rng), r.sample_with(rng)]),
            Kind::Zn(_) | Kind::Tables => unreachable!("finite kinds are tabulated"),
        }
    }

    /// Small canonical elements tried before random samples in sampled checks.
    /// For enumerable rings this is every element.
    pub fn probes(&self) -> Vec<Elem> {
        if let Some(f) = self.finite() {
            return f.indices().map(Elem::Idx).collect();
        }
        let mut out: Vec<Elem> = match &self.0.kind {
            Kind::Gauss => [(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (1, -1), (2, 0), (0, 2)]
                .iter()
                .map(|&(a, b)| Elem::Tuple(vec![rat_elem(rat(a, 1)), rat_elem(rat(b, 1))]))
                .chain([Elem::Tuple(vec![rat_elem(rat(1, 2)), rat_elem(rat(0, 1))])])
                .collect(),
            Kind::IntRatTri => [(0, 0, 1), (1, 0, 1), (0, 1, 1), (-1, 0, 1), (0, -1, 1), (1, 1, 1), (2, 0, 1), (0, 1, 2), (0, 2, 1), (2, 1, 1)]
                .iter()
                .map(|&(a, n, d)| Elem::Tuple(vec![Elem::Int(BigInt::from(a)), rat_elem(rat(n, d))]))
                .collect(),
            Kind::Poly { base, .. } => {
                let pool = small_pool(base, 4);
                let mut polys = Vec::new();
                for c2 in &pool {
                    for c1 in &pool {
                        for c0 in &pool {
                            polys.push(Elem::Poly(trim(base, vec![c0.clone(), c1.clone(), c2.clone()])));
                        }
                    }
                }
                polys
            }
            Kind::Tri2(b) => {
                let pool = small_pool(b, 4);
                pool.iter()
                    .flat_map(|y| pool.iter().map(move |x| Elem::Tuple(vec![x.clone(), y.clone()])))
                    .collect()
            }
            Kind::Ut2(b) => {
                let pool = small_pool(b, 3);
                let mut v = Vec::new();
                for z in &pool {
                    for y in &pool {
                        for x in &pool {
                            v.push(Elem::Tuple(vec![x.clone(), y.clone(), z.clone()]));
                        }
                    }
                }
                v
            }
            Kind::Sum(l, r) => {
                let (lp, rp) = (small_pool(l, 16), small_pool(r, 8));
                rp.iter()
                    .flat_map(|y| lp.iter().map(move |x| Elem::Tuple(vec![x.clone(), y.clone()])))
                    .collect()
            }
            Kind::Zn(_) | Kind::Tables => unreachable!(),
        };
        let mut seen = std::collections::HashSet::new();
        out.retain(|e| seen.insert(e.clone()));
        out.truncate(128);
        out
    }

    /// Idempotents when they are known exactly: by scan for enumerable rings,
    /// in closed form for the infinite kinds that admit one.
    pub fn known_idempotents(&self) -> Option<Vec<Elem>> {
        if let Some(f) = self.finite() {
            return Some(
                f.indices()
                    .filter(|&e| f.mul(e, e) == e)
                    .map(Elem::Idx)
                    .collect(),
            );
        }
        match &self.0.kind {
            // a field
            Kind::Gauss => Some(vec![self.zero(), self.one()]),
            // (a,t)^2 = (a^2, 2at) = (a,t) forces a in {0,1} and then t = 0
            Kind::IntRatTri => Some(vec![self.zero(), self.one()]),
            // over a reduced base every idempotent of the polynomial ring is constant
            Kind::Poly { base, .. } if base.is_known_reduced() => Some(
                base.known_idempotents()?
                    .into_iter()
                    .map(|e| Elem::Poly(trim(base, vec![e])))
                    .collect(),
            ),
            Kind::Sum(l, r) => {
                let (li, ri) = (l.known_idempotents()?, r.known_idempotents()?);
                Some(
                    ri.iter()
                        .flat_map(|y| li.iter().map(move |x| Elem::Tuple(vec![x.clone(), y.clone()])))
                        .collect(),
                )
            }
            _ => None,
        }
    }

    /// Reducedness that is certain: exhaustive for enumerable rings, `Q(i)` by
    /// being a field.
    fn is_known_reduced(&self) -> bool {
        match self.finite() {
            Some(f) => f.indices().all(|a| a == 0 || f.mul(a, a) != 0),
            None => matches!(self.0.kind, Kind::Gauss),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.one() == self.zero() {
            return Err(Error::Validation {
                law: "ring must have 1 != 0".into(),
                witness: self.name(),
            });
        }
        match self.finite() {
            Some(f) if f.size() <= self.0.limits.exhaustive_validation => self.validate_exhaustive(f),
            Some(f) => {
                let mut rng = ChaCha8Rng::seed_from_u64(VALIDATION_SEED);
                let n = f.size() as u32;
                let triples: Vec<_> = (0..self.0.limits.validation_samples * 100)
                    .map(|_| {
                        (
                            Elem::Idx(rng.gen_range(0..n)),
                            Elem::Idx(rng.gen_range(0..n)),
                            Elem::Idx(rng.gen_range(0..n)),
                        )
                    })
                    .collect();
                self.validate_triples(triples.iter().map(|(a, b, c)| (a, b, c)))
            }
            None => {
                let mut rng = ChaCha8Rng::seed_from_u64(VALIDATION_SEED);
                let probes = self.probes();
                let mut triples = Vec::new();
                for a in probes.iter().take(6) {
                    for b in probes.iter().take(6) {
                        for c in probes.iter().take(6) {
                            triples.push((a.clone(), b.clone(), c.clone()));
                        }
                    }
                }
                for _ in 0..self.0.limits.validation_samples {
                    triples.push((self.sample_with(&mut rng), self.sample_with(&mut rng), self.sample_with(&mut rng)));
                }
                self.validate_triples(triples.iter().map(|(a, b, c)| (a, b, c)))
            }
        }
    }

    fn validate_exhaustive(&self, f: &FiniteRing) -> Result<()> {
        let fail = |law: &str, xs: &[u32]| Error::Validation {
            law: law.to_string(),
            witness: format!(
                "({})",
                xs.iter().map(|&x| self.fmt_elem(&Elem::Idx(x))).collect::<Vec<_>>().join(", ")
            ),
        };
        let one = f.one();
        for a in f.indices() {
            if f.add(a, f.neg(a)) != 0 {
                return Err(fail("additive inverse", &[a]));
            }
            if f.mul(one, a) != a || f.mul(a, one) != a {
                return Err(fail("unity", &[a]));
            }
            for b in f.indices() {
                if f.add(a, b) != f.add(b, a) {
                    return Err(fail("commutativity of addition", &[a, b]));
                }
                let ab = f.mul(a, b);
                let sab = f.add(a, b);
                for c in f.indices() {
                    if f.add(sab, c) != f.add(a, f.add(b, c)) {
                        return Err(fail("associativity of addition", &[a, b, c]));
                    }
                    if f.mul(ab, c) != f.mul(a, f.mul(b, c)) {
                        return Err(fail("associativity of multiplication", &[a, b, c]));
                    }
                    if f.mul(a, f.add(b, c)) != f.add(ab, f.mul(a, c)) {
                        return Err(fail("left distributivity", &[a, b, c]));
                    }
                    if f.mul(sab, c) != f.add(f.mul(a, c), f.mul(b, c)) {
                        return Err(fail("right distributivity", &[a, b, c]));
                    }
                }
            }
        }
        Ok(())
    }

    fn validate_triples<'a>(&self, triples: impl Iterator<Item = (&'a Elem, &'a Elem, &'a Elem)>) -> Result<()> {
        let zero = self.zero();
        let one = self.one();
        for (a, b, c) in triples {
            let fail = |law: &str| Error::Validation {
                law: law.to_string(),
                witness: format!("({}, {}, {})", self.fmt_elem(a), self.fmt_elem(b), self.fmt_elem(c)),
            };
            let checks: [(&str, bool); 7] = [
                ("additive inverse", self.add(a, &self.neg(a)) == zero),
                ("unity", self.mul(&one, a) == *a && self.mul(a, &one) == *a),
                ("commutativity of addition", self.add(a, b) == self.add(b, a)),
                (
                    "associativity of addition",
                    self.add(&self.add(a, b), c) == self.add(a, &self.add(b, c)),
                ),
                (
                    "associativity of multiplication",
                    self.mul(&self.mul(a, b), c) == self.mul(a, &self.mul(b, c)),
                ),
                (
                    "left distributivity",
                    self.mul(a, &self.add(b, c)) == self.add(&self.mul(a, b), &self.mul(a, c)),
                ),
                (
                    "right distributivity",
                    self.mul(&self.add(a, b), c) == self.add(&self.mul(a, c), &self.mul(b, c)),
                ),
            ];
            if let Some((law, _)) = checks.iter().find(|(_, ok)| !ok) {
                return Err(fail(law));
            }
        }
        Ok(())
    }

    // ---- literals -------------------------------------------------------

    /// Human-readable canonical literal of an element.
    pub fn fmt_elem(&self, x: &Elem) -> String {
        match &self.0.kind {
            Kind::Tables => format!("#{}", x.idx().unwrap_or(u32::MAX)),
            Kind::Zn(_) => x.idx().map_or_else(|| format!("{x:?}"), |i| i.to_string()),
            Kind::Tri2(b) | Kind::Ut2(b) => {
                let c = self.coords(x);
                format!("({})", c.tuple_parts().iter().map(|p| b.fmt_elem(p)).collect::<Vec<_>>().join(","))
            }
            Kind::Sum(l, r) => {
                let c = self.coords(x);
                let v = c.tuple_parts();
                format!("({},{})", l.fmt_elem(&v[0]), r.fmt_elem(&v[1]))
            }
            Kind::IntRatTri => {
                let v = x.tuple_parts();
                format!("({},{})", v[0].as_int(), v[1].as_rat())
            }
            Kind::Gauss => {
                let v = x.tuple_parts();
                fmt_gauss(v[0].as_rat(), v[1].as_rat())
            }
            Kind::Poly { base, var } => fmt_poly_in(base, var, x.poly_coeffs()),
        }
    }

    /// Parses an element literal. `#k` (an index) is accepted by every
    /// enumerable ring; structured literals are kind-specific.
    pub fn parse_elem(&self, text: &str) -> Result<Elem> {
        let s = text.trim();
        if let Some(inner) = strip_group(s, '{', '}') {
            return self.parse_elem(inner);
        }
        if let (Some(f), Some(rest)) = (self.finite(), s.strip_prefix('#')) {
            let k: u32 = rest
                .trim()
                .parse()
                .map_err(|_| Error::parse(s, "#k with k an element index"))?;
            if (k as usize) < f.size() {
                return Ok(Elem::Idx(k));
            }
            return Err(Error::parse(s, format!("#k with k < {}", f.size())));
        }
        let value = match &self.0.kind {
            Kind::Zn(n) => {
                let v: i64 = s.parse().map_err(|_| Error::parse(s, "an integer (reduced mod n)"))?;
                Elem::Idx(v.rem_euclid(*n as i64) as u32)
            }
            Kind::Tables => {
                let k: u32 = s.parse().map_err(|_| Error::parse(s, "#k or k, an element index"))?;
                if k as usize >= self.size().unwrap() {
                    return Err(Error::parse(s, "index below the table size"));
                }
                Elem::Idx(k)
            }
            Kind::Tri2(b) => Elem::Tuple(parse_tuple(s, &[b, b], "(a,b)")?),
            Kind::Ut2(b) => Elem::Tuple(parse_tuple(s, &[b, b, b], "(a,b,c) for [[a,b],[0,c]]")?),
            Kind::Sum(l, r) => Elem::Tuple(parse_tuple(s, &[l, r], "(left,right)")?),
            Kind::IntRatTri => {
                let inner = strip_group(s, '(', ')').ok_or_else(|| Error::parse(s, "(a,t) with a integer, t rational"))?;
                let parts = split_top(inner, ',');
                if parts.len() != 2 {
                    return Err(Error::parse(s, "(a,t) with a integer, t rational"));
                }
                let a: BigInt = parts[0].trim().parse().map_err(|_| Error::parse(s, "(a,t) with a integer"))?;
                let t = parse_rat(parts[1].trim()).ok_or_else(|| Error::parse(s, "(a,t) with t rational p/q"))?;
                Elem::Tuple(vec![Elem::Int(a), rat_elem(t)])
            }
            Kind::Gauss => {
                let (re, im) = parse_gauss(s).ok_or_else(|| Error::parse(s, "Gaussian rational p/q+r/s i"))?;
                Elem::Tuple(vec![rat_elem(re), rat_elem(im)])
            }
            Kind::Poly { base, var } => Elem::Poly(trim(base, parse_poly_in(base, var, s)?)),
        };
        self.from_coords(&value)
            .ok_or_else(|| Error::parse(s, format!("an element of {}", self.name())))
    }
}

fn small_pool(r: &Ring, cap: usize) -> Vec<Elem> {
    let mut v = r.probes();
    v.truncate(cap);
    v
}

fn parse_tuple(s: &str, rings: &[&Ring], grammar: &str) -> Result<Vec<Elem>> {
    let inner = strip_group(s, '(', ')').ok_or_else(|| Error::parse(s, grammar))?;
    let parts = split_top(inner, ',');
    if parts.len() != rings.len() {
        return Err(Error::parse(s, grammar));
    }
    parts.iter().zip(rings).map(|(p, r)| r.parse_elem(p)).collect()
}

pub(crate) fn parse_rat(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

fn parse_gauss(s: &str) -> Option<(BigRational, BigRational)> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let s = s.replace('*', "");
    if s.is_empty() {
        return None;
    }
    let Some(body) = s.strip_suffix('i') else {
        return Some((parse_rat(&s)?, BigRational::zero()));
    };
    // split before the last sign that is not the leading one
    let split = body
        .char_indices()
        .filter(|&(p, c)| p > 0 && (c == '+' || c == '-'))
        .map(|(p, _)| p)
        .next_back();
    let (re_text, im_text) = match split {
        Some(p) => (&body[..p], &body[p..]),
        None => ("", body),
    };
    let re = if re_text.is_empty() { BigRational::zero() } else { parse_rat(re_text)? };
    let im = match im_text {
        "" | "+" => BigRational::one(),
        "-" => -BigRational::one(),
        t => parse_rat(t.strip_prefix('+').unwrap_or(t))?,
    };
    Some((re, im))
}

fn fmt_gauss(re: &BigRational, im: &BigRational) -> String {
    let im_part = |lead: bool| -> String {
        let sign = if im.is_negative() { "-" } else if lead { "" } else { "+" };
        let mag = im.abs();
        if mag.is_one() {
            format!("{sign}i")
        } else if mag.is_integer() {
            format!("{sign}{mag}i")
        } else {
            format!("{sign}{mag} i")
        }
    };
    match (re.is_zero(), im.is_zero()) {
        (_, true) => re.to_string(),
        (true, false) => im_part(true),
        (false, false) => format!("{re}{}", im_part(false)),
    }
}

fn fmt_poly_in(base: &Ring, var: &str, coeffs: &[Elem]) -> String {
    if coeffs.is_empty() {
        return "0".into();
    }
    let one = base.one();
    let mut terms = Vec::new();
    for (k, c) in coeffs.iter().enumerate() {
        if base.is_zero(c) {
            continue;
        }
        let mono = match k {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{k}"),
        };
        let lit = base.fmt_elem(c);
        let simple = lit.chars().all(|ch| ch.is_ascii_digit() || ch == '-') || lit.starts_with('#');
        terms.push(if k == 0 {
            if simple { lit } else { format!("{{{lit}}}") }
        } else if *c == one {
            mono
        } else if simple {
            format!("{lit}{mono}")
        } else {
            format!("{{{lit}}}{mono}")
        });
    }
    terms.join("+")
}

fn parse_poly_in(base: &Ring, var: &str, s: &str) -> Result<Vec<Elem>> {
    let grammar = format!("[c0,c1,...] or a sum of terms c{var}^k");
    if let Some(inner) = strip_group(s, '[', ']') {
        if inner.trim().is_empty() {
            return Ok(vec![]);
        }
        return split_top(inner, ',').iter().map(|c| base.parse_elem(c)).collect();
    }
    let mut coeffs: Vec<Elem> = Vec::new();
    for term in split_top(s, '+') {
        let term = term.trim();
        if term.is_empty() {
            return Err(Error::parse(s, grammar));
        }
        let (coef_text, power) = split_power(term, var).ok_or_else(|| Error::parse(s, grammar.clone()))?;
        let coef = match coef_text.trim() {
            "" => base.one(),
            "-" => base.neg(&base.one()),
            t => base.parse_elem(t.trim_end_matches('*'))?,
        };
        if coeffs.len() <= power {
            coeffs.resize(power + 1, base.zero());
        }
        coeffs[power] = base.add(&coeffs[power], &coef);
    }
    Ok(coeffs)
}

/// Splits a monomial `c var^k` into `(c, k)`; a term without `var` is a constant.
pub(crate) fn split_power<'a>(term: &'a str, var: &str) -> Option<(&'a str, usize)> {
    let t = term.trim();
    if let Some((head, exp)) = t.rsplit_once('^') {
        if let Some(coef) = head.trim_end().strip_suffix(var) {
            if crate::text::balanced(coef) {
                return Some((coef, exp.trim().parse().ok()?));
            }
        }
        return None;
    }
    if let Some(coef) = t.strip_suffix(var) {
        if crate::text::balanced(coef) {
            return Some((coef, 1));
        }
    }
    Some((t, 0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tri4() -> Ring {
        build_ring(&RingSpec::tri2(RingSpec::zn(4))).unwrap()
    }

    #[test]
    fn zn4_basics() {
        let r = build_ring(&RingSpec::zn(4)).unwrap();
        assert_eq!(r.size(), Some(4));
        assert_eq!(r.one(), Elem::Idx(1));
        assert_eq!(r.elements().unwrap(), (0..4).map(Elem::Idx).collect::<Vec<_>>());
    }

    #[test]
    fn zn2_elements() {
        let r = build_ring(&RingSpec::zn(2)).unwrap();
        assert_eq!(r.elements().unwrap(), vec![Elem::Idx(0), Elem::Idx(1)]);
    }

    #[test]
    fn zn_rejects_trivial_modulus() {
        assert!(matches!(build_ring(&RingSpec::zn(1)), Err(Error::Validation { .. })));
    }

    #[test]
    fn tri4_multiplication_rule() {
        let r = tri4();
        assert_eq!(r.size(), Some(16));
        let elems = r.elements().unwrap();
        assert_eq!(r.fmt_elem(&elems[0]), "(0,0)");
        // (a,b)(a',b') = (aa', ab' + ba')
        for x in &elems {
            for y in &elems {
                let (cx, cy) = (r.coords(x), r.coords(y));
                let (a, b) = (cx.tuple_parts()[0].idx().unwrap(), cx.tuple_parts()[1].idx().unwrap());
                let (c, d) = (cy.tuple_parts()[0].idx().unwrap(), cy.tuple_parts()[1].idx().unwrap());
                let expect = Elem::Tuple(vec![Elem::Idx(a * c % 4), Elem::Idx((a * d + b * c) % 4)]);
                assert_eq!(r.coords(&r.mul(x, y)), expect);
            }
        }
    }

    #[test]
    fn tri4_nilpotents() {
        let r = tri4();
        let e20 = r.parse_elem("(2,0)").unwrap();
        let e01 = r.parse_elem("(0,1)").unwrap();
        assert!(r.is_zero(&r.mul(&e20, &e20)));
        assert!(r.is_zero(&r.mul(&e01, &e01)));
    }

    #[test]
    fn tables_reject_non_associative_mul() {
        // Z2 addition with a commutative but non-associative "multiplication"
        // on three elements would be caught; use Z3 add with a broken mul.
        let add = vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]];
        let mul = vec![vec![0, 0, 0], vec![0, 1, 2], vec![0, 2, 2]];
        match build_ring(&RingSpec::Tables { add, mul }) {
            Err(Error::Validation { law, witness }) => {
                assert!(law.contains("associativity") || law.contains("distributivity"), "{law}");
                assert!(witness.starts_with('('));
            }
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn size_cap_enforced() {
        let limits = Limits {
            size_cap: 10,
            ..Limits::default()
        };
        assert!(matches!(
            build_ring_with(&RingSpec::tri2(RingSpec::zn(4)), &limits),
            Err(Error::Size { size: 16, cap: 10 })
        ));
    }

    #[test]
    fn infinite_rings_refuse_enumeration() {
        let g = build_ring(&RingSpec::Gauss).unwrap();
        assert!(matches!(g.elements(), Err(Error::Backend(_))));
        let z4 = build_ring(&RingSpec::zn(4)).unwrap();
        assert!(matches!(z4.sample(1, 1), Err(Error::Backend(_))));
    }

    #[test]
    fn gauss_sampling_is_reproducible() {
        let g = build_ring(&RingSpec::Gauss).unwrap();
        let a = g.sample(7, 3).unwrap();
        assert_eq!(a, g.sample(7, 3).unwrap());
        assert_eq!(a.len(), 3);
        assert!(a.iter().all(|x| g.contains(x)));
    }

    #[test]
    fn poly_samples_respect_height() {
        let p = build_ring(&RingSpec::poly(RingSpec::zn(2), "t")).unwrap();
        for f in p.sample(1, 2).unwrap() {
            assert!(f.poly_coeffs().len() <= 9);
            assert!(p.contains(&f));
        }
    }

    #[test]
    fn literals_round_trip() {
        let g = build_ring(&RingSpec::Gauss).unwrap();
        for s in ["0", "1", "i", "-i", "2i", "1/2+3/4 i", "1-i", "-3/5"] {
            let x = g.parse_elem(s).unwrap();
            assert_eq!(g.parse_elem(&g.fmt_elem(&x)).unwrap(), x, "{s}");
        }
        assert_eq!(g.fmt_elem(&g.parse_elem("1/2+3/4 i").unwrap()), "1/2+3/4 i");
        let p = build_ring(&RingSpec::poly(RingSpec::zn(2), "t")).unwrap();
        let f = p.parse_elem("1+t").unwrap();
        assert_eq!(f, p.parse_elem("[1,1]").unwrap());
        assert_eq!(p.fmt_elem(&f), "1+t");
        assert_eq!(p.fmt_elem(&p.parse_elem("t^3+t").unwrap()), "t+t^3");
        let irt = build_ring(&RingSpec::IntRatTri).unwrap();
        assert_eq!(irt.fmt_elem(&irt.parse_elem("(2, 3/6)").unwrap()), "(2,1/2)");
        let s = build_ring(&RingSpec::sum(RingSpec::ut2(RingSpec::zn(2)), RingSpec::poly(RingSpec::zn(2), "y"))).unwrap();
        let x = s.parse_elem("((1,1,0),1+y^2)").unwrap();
        assert_eq!(s.fmt_elem(&x), "((1,1,0),1+y^2)");
    }

    #[test]
    fn parse_errors_name_grammar() {
        let r = tri4();
        match r.parse_elem("2,0") {
            Err(Error::Parse { expected, .. }) => assert_eq!(expected, "(a,b)"),
            other => panic!("{other:?}"),
        }
        assert!(r.parse_elem("#16").is_err());
        assert_eq!(r.parse_elem("#4").unwrap(), Elem::Idx(4));
    }

    #[test]
    fn closed_form_idempotents() {
        let irt = build_ring(&RingSpec::IntRatTri).unwrap();
        let idem = irt.known_idempotents().unwrap();
        let shown: Vec<_> = idem.iter().map(|e| irt.fmt_elem(e)).collect();
        assert_eq!(shown, vec!["(0,0)", "(1,0)"]);
        let ut = build_ring(&RingSpec::ut2(RingSpec::Gauss)).unwrap();
        assert!(ut.known_idempotents().is_none());
    }
}
