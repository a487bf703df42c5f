use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use orelab::catalog::{find_entry, run_catalog};
use orelab::lab::build_pq_baer_witness;
use orelab::report::verdict_line;
use orelab::{
    build_report, left_ann, left_ann_principal, right_ann, right_ann_principal, generated_by_idempotent, CatalogReport,
    CheckOptions, Error, Format, LabOptions, Property, QuasiDerivation, RingFile, SkewPoly, Verdict, VerdictKind,
};

const EXIT_FAILS: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INCONCLUSIVE: u8 = 3;

#[derive(Parser)]
#[command(name = "orelab", version, about = "Annihilator and idempotent properties of Ore extensions R[x;σ,δ]")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Built-in catalog entry.
    #[arg(long, global = true, conflicts_with = "file")]
    name: Option<String>,
    /// JSON ring file with keys ring, sigma, delta.
    #[arg(long, global = true)]
    file: Option<PathBuf>,
    #[arg(long, global = true, default_value = "text")]
    format: Format,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 2000)]
    samples: usize,
    /// Degree bound for skew-Armendariz scans and Ore-level annihilators.
    #[arg(long, global = true)]
    deg_bound: Option<usize>,
    #[arg(long, global = true, default_value_t = 1)]
    deg_p: usize,
    #[arg(long, global = true, default_value_t = 2)]
    deg_phi: usize,
    #[arg(long, global = true, default_value_t = 1_000_000)]
    scan_cap: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Every property check plus the idempotent profile.
    Report,
    /// One property; exit 0 holds, 1 fails, 3 inconclusive.
    Check { property: Property },
    /// Product of two skew polynomials.
    Mul {
        #[arg(long)]
        p: String,
        #[arg(long)]
        q: String,
    },
    /// Annihilator of an element and its idempotent generator.
    Ann {
        #[arg(long)]
        elem: String,
        /// Annihilate the principal ideal aR (Ra with --left) instead of a.
        #[arg(long)]
        principal: bool,
        #[arg(long)]
        left: bool,
    },
    /// f_i^j(r).
    Fmap {
        i: usize,
        j: usize,
        #[arg(long)]
        elem: String,
    },
    /// Idempotent e with r(pS) = eS built from the coefficients of p.
    Witness {
        #[arg(long)]
        p: String,
    },
    /// Runs every catalog expectation.
    #[command(alias = "paper")]
    Catalog,
}

struct Ctx {
    qd: QuasiDerivation,
    opts: CheckOptions,
}

fn load(g: &Global) -> Result<Ctx, Error> {
    let mut opts = CheckOptions {
        samples: g.samples,
        seed: g.seed,
        deg_bound: g.deg_bound,
        scan_cap: g.scan_cap,
        ..CheckOptions::default()
    };
    let qd = match (&g.name, &g.file) {
        (Some(name), _) => {
            let entry = find_entry(name)?;
            opts = entry.options(&opts);
            entry.quasi_derivation()?
        }
        (None, Some(path)) => RingFile::read(path)?.build()?,
        (None, None) => return Err(Error::parse("", "--name <entry> or --file <ring file>")),
    };
    Ok(Ctx { qd, opts })
}

fn verdict_exit(v: &Verdict) -> u8 {
    match v.kind {
        VerdictKind::Holds | VerdictKind::HoldsBounded => 0,
        VerdictKind::Fails => EXIT_FAILS,
        VerdictKind::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

fn json_line(v: serde_json::Value) -> String {
    serde_json::to_string_pretty(&v).expect("json") + "\n"
}

fn run(cli: &Cli, out: &mut String) -> Result<u8, Error> {
    let g = &cli.global;
    let machine = g.format == Format::Machine;
    if let Command::Catalog = cli.command {
        let opts = LabOptions {
            check: CheckOptions {
                samples: g.samples,
                seed: g.seed,
                deg_bound: g.deg_bound,
                scan_cap: g.scan_cap,
                ..CheckOptions::default()
            },
            deg_p: g.deg_p,
            deg_phi: g.deg_phi,
            converse_deg: g.deg_bound.unwrap_or(2),
        };
        let report = CatalogReport::new(run_catalog(&opts));
        out.push_str(&report.render(g.format));
        return Ok(if report.mismatches == 0 { 0 } else { EXIT_FAILS });
    }
    let Ctx { qd, opts } = load(g)?;
    let ring = qd.ring();
    match &cli.command {
        Command::Report => {
            out.push_str(&build_report(&qd, &opts)?.render(g.format));
            Ok(0)
        }
        Command::Check { property } => {
            let v = orelab::check(*property, &qd, &opts)?;
            if machine {
                out.push_str(&json_line(json!({ "property": property, "verdict": v })));
            } else {
                out.push_str(&verdict_line(property.label(), &v));
                out.push('\n');
                if let Some(w) = &v.witness {
                    out.push_str(&format!("witness: {w}\n"));
                }
                if let Some(note) = &v.note {
                    out.push_str(&format!("note: {note}\n"));
                }
            }
            Ok(verdict_exit(&v))
        }
        Command::Mul { p, q } => {
            let product = SkewPoly::parse(&qd, p)?.mul(&SkewPoly::parse(&qd, q)?)?;
            if machine {
                out.push_str(&json_line(json!({ "product": product.to_string() })));
            } else {
                out.push_str(&format!("{product}\n"));
            }
            Ok(0)
        }
        Command::Ann { elem, principal, left } => {
            let a = ring.parse_elem(elem)?;
            let set = match (principal, left) {
                (false, false) => right_ann(ring, &[a])?,
                (false, true) => left_ann(ring, &[a])?,
                (true, false) => right_ann_principal(ring, &a)?,
                (true, true) => left_ann_principal(ring, &a)?,
            };
            let generator = generated_by_idempotent(ring, &set)?.map(|e| ring.fmt_elem(&e));
            let members: Vec<String> = set.members.iter().map(|m| ring.fmt_elem(m)).collect();
            if machine {
                out.push_str(&json_line(json!({ "members": members, "generator": generator })));
            } else {
                out.push_str(&format!("{} ({} elements)\n", set.display(ring), members.len()));
                out.push_str(&format!("generator: {}\n", generator.as_deref().unwrap_or("NONE")));
            }
            Ok(0)
        }
        Command::Fmap { i, j, elem } => {
            let r = ring.parse_elem(elem)?;
            let value = ring.fmt_elem(&qd.f_map(*i, *j, &r)?);
            if machine {
                out.push_str(&json_line(json!({ "i": i, "j": j, "r": elem, "value": value })));
            } else {
                out.push_str(&format!("{value}\n"));
            }
            Ok(0)
        }
        Command::Witness { p } => {
            let p = SkewPoly::parse(&qd, p)?;
            let w = match build_pq_baer_witness(&p, g.deg_phi, g.seed) {
                Err(Error::Hypothesis { hypothesis, detail }) => {
                    out.push_str(&format!("hypothesis not met: {hypothesis}: {detail}\n"));
                    return Ok(EXIT_FAILS);
                }
                other => other?,
            };
            let idem: Vec<String> = w.idempotents.iter().map(|e| ring.fmt_elem(e)).collect();
            let e = ring.fmt_elem(&w.e);
            if machine {
                out.push_str(&json_line(json!({
                    "p": p.to_string(),
                    "coefficient_idempotents": idem,
                    "e": e,
                    "left_semicentral": w.left_semicentral,
                    "meets_annihilators": w.meets_annihilators,
                    "claim1": w.claim1,
                    "claim2": w.claim2,
                })));
            } else {
                out.push_str(&format!("p: {p}\n"));
                out.push_str(&format!("e_i: {}\n", idem.join(", ")));
                out.push_str(&format!("e = e_n⋯e_0: {e}\n"));
                out.push_str(&format!("e in S_ℓ: {}\n", w.left_semicentral));
                out.push_str(&format!("eR = ∩ r(c_i R): {}\n", w.meets_annihilators));
                out.push_str(&format!("{}\n", verdict_line("eS ⊆ r(pS)", &w.claim1)));
                out.push_str(&format!("{}\n", verdict_line("r(pR) ⊆ eS", &w.claim2)));
            }
            Ok(if w.holds() { 0 } else { EXIT_FAILS })
        }
        Command::Catalog => unreachable!(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = String::new();
    let code = match run(&cli, &mut out) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            EXIT_USAGE
        }
    };
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(out.as_bytes());
    let _ = stdout.flush();
    ExitCode::from(code)
}
