//! JSON ring definition files.
//!
//! ```json
//! { "ring": {"tri2": {"zn": 4}}, "sigma": "negate_offdiag", "delta": "zero" }
//! ```
//!
//! `sigma` defaults to the identity and `delta` to zero. Other keys are rejected.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::maps::{DerivSpec, EndoSpec, QuasiDerivation};
use crate::ring::{build_ring, RingSpec};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingFile {
    pub ring: RingSpec,
    #[serde(default = "identity")]
    pub sigma: EndoSpec,
    #[serde(default = "zero")]
    pub delta: DerivSpec,
}

fn identity() -> EndoSpec {
    EndoSpec::Identity
}

fn zero() -> DerivSpec {
    DerivSpec::Zero
}

impl RingFile {
    pub fn parse(text: &str) -> Result<RingFile> {
        serde_json::from_str(text).map_err(|e| Error::parse(&e.to_string(), "a ring file {ring, sigma, delta}"))
    }

    pub fn read(path: &Path) -> Result<RingFile> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::parse(&path.display().to_string(), e.to_string()))?;
        RingFile::parse(&text)
    }

    pub fn render(&self) -> String {
        serde_json::to_string_pretty(self).expect("ring file serializes")
    }

    /// Builds and validates the ring and both maps.
    pub fn build(&self) -> Result<QuasiDerivation> {
        let ring = build_ring(&self.ring)?;
        QuasiDerivation::from_specs(&ring, &self.sigma, &self.delta)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_round_trip() {
        let f = RingFile::parse(r#"{"ring": {"tri2": {"zn": 4}}, "sigma": "negate_offdiag"}"#).unwrap();
        assert_eq!(f.delta, DerivSpec::Zero);
        assert_eq!(RingFile::parse(&f.render()).unwrap(), f);
        assert!(f.build().is_ok());
    }

    #[test]
    fn rejects_unknown_keys() {
        let e = RingFile::parse(r#"{"ring": {"zn": 4}, "tau": "identity"}"#).unwrap_err();
        assert!(matches!(e, Error::Parse { .. }));
    }

    #[test]
    fn bad_tables_fail_validation() {
        // addition table of Z2 with a non-distributive multiplication
        let f = RingFile::parse(r#"{"ring": {"tables": {"add": [[0,1],[1,0]], "mul": [[1,0],[0,1]]}}}"#).unwrap();
        assert!(matches!(f.build(), Err(Error::Validation { .. })));
    }
}
