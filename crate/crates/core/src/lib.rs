//! Ore extensions `R[x; σ, δ]` over finite and exact rings, with decision
//! procedures for annihilator and idempotent properties.

pub mod annihilators;
pub mod catalog;
pub mod elem;
pub mod error;
pub mod lab;
pub mod maps;
pub mod ore;
pub mod properties;
pub mod report;
pub mod ringfile;
pub mod ring;
mod text;
pub mod verdict;

pub use elem::Elem;
pub use error::{Error, Result};
pub use ring::{build_ring, build_ring_with, Backend, FiniteRing, Limits, Ring, RingSpec};
pub use maps::{enumerate_endos, make_derivation, make_endo, DerivSpec, Endo, EndoSpec, QuasiDerivation, SigmaDerivation};
pub use ore::{bounded_right_ann, monomial_product, PrincipalKind, SkewPoly};
pub use annihilators::{
    ann_lattice_closure, generated_by_idempotent, idempotent_profile, left_ann, left_ann_principal, right_ann,
    right_ann_principal, AnnSet, AnnSource, IdempotentProfile, LatticeKind, Side,
};
pub use properties::{check, CheckOptions, CompatReport, Property};
pub use verdict::{Bounds, Verdict, VerdictKind, Witness};
pub use lab::{theorem_roundtrip, HypothesisReport, LabOptions, PqBaerWitness};
pub use catalog::{load_catalog, run_entry, CatalogEntry, Check, EntryReport};
pub use report::{build_report, Format, CatalogReport, Report};
pub use ringfile::RingFile;
