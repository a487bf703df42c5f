//! Property reports in machine (JSON) and text form.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::annihilators::idempotent_profile;
use crate::catalog::EntryReport;
use crate::error::{Error, Result};
use crate::maps::QuasiDerivation;
use crate::properties::{check, CheckOptions, Property};
use crate::verdict::{Bounds, Verdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Text,
    Machine,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(Format::Text),
            "machine" => Ok(Format::Machine),
            _ => Err(Error::parse(s, "text or machine")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PropertyRow {
    pub property: Property,
    pub verdict: Verdict,
}

/// Idempotents and semicentral classes as element literals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileText {
    pub idempotents: Vec<String>,
    pub left_semicentral: Vec<String>,
    pub right_semicentral: Vec<String>,
    pub central: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub ring: String,
    pub sigma: String,
    pub delta: String,
    pub options: CheckOptions,
    pub properties: Vec<PropertyRow>,
    /// Present for enumerable rings.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<ProfileText>,
    /// Closed-form idempotents of a sampleable ring.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub known_idempotents: Option<Vec<String>>,
}

/// Runs every property check.
pub fn build_report(qd: &QuasiDerivation, opts: &CheckOptions) -> Result<Report> {
    let ring = qd.ring();
    let properties = Property::ALL
        .iter()
        .map(|&p| {
            check(p, qd, opts).map(|verdict| PropertyRow { property: p, verdict })
        })
        .collect::<Result<_>>()?;
    let strs = |xs: &[crate::elem::Elem]| xs.iter().map(|x| ring.fmt_elem(x)).collect::<Vec<_>>();
    let profile = if ring.is_enumerable() {
        let p = idempotent_profile(ring)?;
        Some(ProfileText {
            idempotents: strs(&p.idempotents),
            left_semicentral: strs(&p.left_semicentral),
            right_semicentral: strs(&p.right_semicentral),
            central: strs(&p.central),
        })
    } else {
        None
    };
    let known_idempotents = if profile.is_none() {
        ring.known_idempotents().map(|xs| strs(&xs))
    } else {
        None
    };
    Ok(Report {
        ring: ring.spec().to_string(),
        sigma: qd.sigma().spec().to_string(),
        delta: qd.delta().spec().to_string(),
        options: opts.clone(),
        properties,
        profile,
        known_idempotents,
    })
}

/// Bracketed bounds suffix, empty when there is nothing to show.
pub fn fmt_bounds(b: &Bounds) -> String {
    let mut parts = Vec::new();
    let fields = [
        ("deg_bound", b.deg_bound.map(|x| x as u64)),
        ("deg_p", b.deg_p.map(|x| x as u64)),
        ("deg_phi", b.deg_phi.map(|x| x as u64)),
        ("j_max", b.j_max.map(|x| x as u64)),
        ("checked", b.checked),
        ("samples", b.samples),
        ("seed", b.seed),
        ("refutations", b.refutations),
    ];
    for (name, v) in fields {
        if let Some(v) = v {
            parts.push(format!("{name}={v}"));
        }
    }
    if parts.is_empty() {
        String::new()
    } else {
        format!(" [{}]", parts.join(", "))
    }
}

/// `label: KIND (witness) [bounds]`.
pub fn verdict_line(label: &str, v: &Verdict) -> String {
    format!("{label}: {}{}", v.short(), fmt_bounds(&v.bounds))
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Machine => serde_json::to_string_pretty(self).expect("report serializes") + "\n",
            Format::Text => self.render_text(),
        }
    }

    pub fn parse_machine(text: &str) -> Result<Report> {
        serde_json::from_str(text).map_err(|e| Error::parse(&e.to_string(), "a machine-readable report"))
    }

    fn render_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "ring:  {}", self.ring).unwrap();
        writeln!(out, "sigma: {}", self.sigma).unwrap();
        writeln!(out, "delta: {}", self.delta).unwrap();
        writeln!(out).unwrap();
        for row in &self.properties {
            writeln!(out, "{}", verdict_line(row.property.label(), &row.verdict)).unwrap();
            if let Some(w) = &row.verdict.witness {
                writeln!(out, "    witness: {w}").unwrap();
            }
            if let Some(note) = &row.verdict.note {
                writeln!(out, "    note: {note}").unwrap();
            }
        }
        let set = |xs: &[String]| format!("{{{}}}", xs.join(", "));
        if let Some(p) = &self.profile {
            writeln!(out).unwrap();
            writeln!(out, "idempotents: {}", set(&p.idempotents)).unwrap();
            writeln!(out, "S_ℓ: {}", set(&p.left_semicentral)).unwrap();
            writeln!(out, "S_r: {}", set(&p.right_semicentral)).unwrap();
            writeln!(out, "B: {}", set(&p.central)).unwrap();
        }
        if let Some(k) = &self.known_idempotents {
            writeln!(out).unwrap();
            writeln!(out, "idempotents (closed form): {}", set(k)).unwrap();
        }
        out
    }
}

/// Catalog regression results.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogReport {
    pub entries: Vec<EntryReport>,
    pub mismatches: usize,
}

impl CatalogReport {
    pub fn new(entries: Vec<EntryReport>) -> Self {
        let mismatches = entries.iter().map(|e| e.mismatches().count()).sum();
        CatalogReport { entries, mismatches }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Machine => serde_json::to_string_pretty(self).expect("report serializes") + "\n",
            Format::Text => {
                let mut out = String::new();
                for e in &self.entries {
                    writeln!(out, "{}", e.name).unwrap();
                    for row in &e.rows {
                        let mark = if row.matched { "ok" } else { "MISMATCH" };
                        write!(out, "  {mark:8} {}: {}", row.check, row.actual.short()).unwrap();
                        if !row.matched {
                            let exp = match &row.expected.detail {
                                Some(d) => format!("{} ({d})", row.expected.kind),
                                None => row.expected.kind.to_string(),
                            };
                            write!(out, "; expected {exp}").unwrap();
                            if row.replayed == Some(false) {
                                write!(out, "; witness did not replay").unwrap();
                            }
                        }
                        writeln!(out, "  # {}", row.expected.anchor).unwrap();
                    }
                }
                let total: usize = self.entries.iter().map(|e| e.rows.len()).sum();
                writeln!(out, "\n{} expectations, {} mismatches", total, self.mismatches).unwrap();
                out
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::find_entry;

    #[test]
    fn tri4_report_line_and_round_trip() {
        let entry = find_entry("tri4_negate").unwrap();
        let qd = entry.quasi_derivation().unwrap();
        let report = build_report(&qd, &CheckOptions::default()).unwrap();
        let text = report.render(Format::Text);
        assert!(text.contains("right p.q.-Baer: FAILS (a=(2,0))"), "{text}");
        let machine = report.render(Format::Machine);
        assert_eq!(Report::parse_machine(&machine).unwrap(), report);
    }
}
