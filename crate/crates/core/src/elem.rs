//! Exact ring element values.
//!
//! Elements of an enumerable ring are table indices. Elements of an infinite
//! ring are structured values built from exact integers and rationals; their
//! interpretation belongs to the owning [`Ring`](crate::ring::Ring).

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Elem {
    /// Index into the tables of an enumerable ring.
    Idx(u32),
    Int(#[serde(with = "int_text")] BigInt),
    Rat(#[serde(with = "rat_text")] BigRational),
    /// Fixed-arity coordinates, e.g. `(a, b)` for a constant-diagonal
    /// triangular matrix or the two components of a direct sum.
    Tuple(Vec<Elem>),
    /// Dense coefficients `c0, c1, ...`, trailing zeros trimmed.
    Poly(Vec<Elem>),
}

impl Elem {
    pub fn idx(&self) -> Option<u32> {
        match self {
            Elem::Idx(i) => Some(*i),
            _ => None,
        }
    }

    pub(crate) fn tuple_parts(&self) -> &[Elem] {
        match self {
            Elem::Tuple(v) => v,
            _ => panic!("expected tuple element, got {self:?}"),
        }
    }

    pub(crate) fn poly_coeffs(&self) -> &[Elem] {
        match self {
            Elem::Poly(v) => v,
            _ => panic!("expected polynomial element, got {self:?}"),
        }
    }

    pub(crate) fn as_int(&self) -> &BigInt {
        match self {
            Elem::Int(v) => v,
            _ => panic!("expected integer element, got {self:?}"),
        }
    }

    pub(crate) fn as_rat(&self) -> &BigRational {
        match self {
            Elem::Rat(v) => v,
            _ => panic!("expected rational element, got {self:?}"),
        }
    }
}

impl From<u32> for Elem {
    fn from(i: u32) -> Self {
        Elem::Idx(i)
    }
}

mod int_text {
    use num_bigint::BigInt;
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(D::Error::custom)
    }
}

mod rat_text {
    use num_rational::BigRational;
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn serde_uses_text_for_big_numbers() {
        let e = Elem::Tuple(vec![
            Elem::Int(BigInt::from(-3)),
            Elem::Rat(BigRational::new(2.into(), 6.into())),
            Elem::Idx(4),
        ]);
        let json = serde_json::to_string(&e).unwrap();
        assert_eq!(json, r#"{"tuple":[{"int":"-3"},{"rat":"1/3"},{"idx":4}]}"#);
        let back: Elem = serde_json::from_str(&json).unwrap();
        assert_eq!(back, e);
    }
}
