//! `polyiso`: generate vertex sets, certify faces and run verification
//! scenarios. Exit status 0 = verified, 1 = refuted, 2 = error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use polyiso::faces::{is_face, k_neighborly_scan, CertificateFile, FaceVerdict, ScanOptions};
use polyiso::families::{family_vertices, phi3_display_order, Family, VertexSet};
use polyiso::harness::{generate_guard, run_scenario, Report, Scenario, SCAN_GUARD};

#[derive(Parser)]
#[command(
    name = "polyiso",
    version,
    about = "Exact face and affine-map verification for BQP, QAP and phi polytopes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Order {
    /// Generators in lexicographic order.
    Lex,
    /// phi_3 only: identity, the two 3-cycles, then the transpositions.
    Display,
}

#[derive(Subcommand)]
enum Command {
    /// Write the vertex set of a family to a JSON file.
    Generate {
        #[arg(long)]
        family: Family,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "lex")]
        order: Order,
        #[arg(long)]
        force: bool,
    },
    /// Certify whether a vertex subset is the vertex set of a face.
    Face {
        #[arg(long)]
        vertices: PathBuf,
        /// Comma-separated 0-based vertex indices.
        #[arg(long, value_delimiter = ',', required = true)]
        subset: Vec<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Scan all k-subsets for faces.
    Neighborly {
        #[arg(long)]
        vertices: PathBuf,
        #[arg(long)]
        k: usize,
        /// Only subsets containing the identity vertex (QAP and phi).
        #[arg(long)]
        fix_first: bool,
        #[arg(long)]
        stop_at_first: bool,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        force: bool,
    },
    /// Run a named verification scenario.
    Verify {
        #[arg(value_parser = parse_scenario)]
        scenario: Scenario,
        /// Scenario parameter (k for thm2 and corollary-3n-face).
        #[arg(long, visible_alias = "k")]
        n: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        force: bool,
    },
    /// Re-check a certificate (or every certificate in a report) against a
    /// vertex file.
    Check {
        #[arg(long)]
        vertices: PathBuf,
        #[arg(long)]
        certificate: PathBuf,
    },
}

fn parse_scenario(s: &str) -> Result<Scenario, String> {
    s.parse().map_err(|e: polyiso::harness::HarnessError| {
        let names: Vec<&str> = Scenario::ALL.iter().map(|s| s.name()).collect();
        format!("{e}; expected one of {}", names.join(", "))
    })
}

/// Exit codes: verified, refuted. Errors map to 2 in `main`.
#[derive(Clone, Copy)]
enum Outcome {
    Verified,
    Refuted,
}

/// Writes `json` to `out`, or to stdout when no path is given.
fn emit(json: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, format!("{json}\n"))
            .with_context(|| format!("writing {}", p.display())),
        None => {
            println!("{json}");
            Ok(())
        }
    }
}

/// Human-readable lines go to stdout when JSON goes to a file, else stderr.
fn note(msg: &str, json_to_file: bool) {
    if json_to_file {
        println!("{msg}");
    } else {
        eprintln!("{msg}");
    }
}

fn read_vertices(path: &Path) -> Result<VertexSet> {
    VertexSet::read(path).with_context(|| format!("reading vertex set {}", path.display()))
}

fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Generate {
            family,
            n,
            out,
            order,
            force,
        } => {
            if let Some(w) = generate_guard(family, n, force)? {
                eprintln!("warning: {w}");
            }
            let v = match order {
                Order::Lex => family_vertices(family, n)?,
                Order::Display if family == Family::Phi && n == 3 => phi3_display_order(),
                Order::Display => bail!("--order display is only defined for phi with n = 3"),
            };
            v.write(&out)
                .with_context(|| format!("writing {}", out.display()))?;
            println!(
                "{family}({n}): {} vertices, ambient dimension {} -> {}",
                v.len(),
                v.ambient_dim(),
                out.display()
            );
            Ok(Outcome::Verified)
        }
        Command::Face {
            vertices,
            subset,
            out,
        } => {
            let v = read_vertices(&vertices)?;
            let verdict = is_face(&v, &subset)?;
            let mut sorted = subset.clone();
            sorted.sort_unstable();
            let labels: Vec<&str> = sorted.iter().map(|&i| v.label(i)).collect();
            let outcome = if verdict.is_face() {
                Outcome::Verified
            } else {
                Outcome::Refuted
            };
            let file = CertificateFile::new(&v, &sorted, verdict);
            emit(&serde_json::to_string_pretty(&file)?, out.as_deref())?;
            let what = match outcome {
                Outcome::Verified => "face (supporting hyperplane certificate)",
                Outcome::Refuted => "not a face (affine/convex witness)",
            };
            note(&format!("{{{}}}: {what}", labels.join(", ")), out.is_some());
            Ok(outcome)
        }
        Command::Neighborly {
            vertices,
            k,
            fix_first,
            stop_at_first,
            jobs,
            out,
            force,
        } => {
            let v = read_vertices(&vertices)?;
            let len = v.len() as u64;
            let space = if fix_first {
                binomial(len.saturating_sub(1), k.saturating_sub(1) as u64)
            } else {
                binomial(len, k as u64)
            };
            if space > SCAN_GUARD && !force {
                bail!("{space} subsets exceed the scan guard of {SCAN_GUARD} (pass --force to override)");
            }
            let report = k_neighborly_scan(
                &v,
                k,
                ScanOptions {
                    fix_first,
                    stop_at_first,
                    jobs: jobs.max(1),
                },
            )?;
            emit(&serde_json::to_string_pretty(&report)?, out.as_deref())?;
            let msg = match &report.first_counterexample {
                None => format!(
                    "{k}-neighborly: {} of {} subsets certified faces",
                    report.faces_certified, report.total_subsets
                ),
                Some(c) => format!(
                    "not {k}-neighborly: {{{}}} is not a face ({} subsets scanned)",
                    c.labels.join(", "),
                    report.scanned
                ),
            };
            note(&msg, out.is_some());
            Ok(if report.is_k_neighborly() {
                Outcome::Verified
            } else {
                Outcome::Refuted
            })
        }
        Command::Verify {
            scenario,
            n,
            out,
            jobs,
            force,
        } => {
            let value = n.unwrap_or_else(|| scenario.default_parameter());
            let report = run_scenario(scenario, value, force, jobs.max(1))?;
            emit(&report.to_json(), out.as_deref())?;
            note(report.summary().trim_end(), out.is_some());
            Ok(if report.passed {
                Outcome::Verified
            } else {
                Outcome::Refuted
            })
        }
        Command::Check {
            vertices,
            certificate,
        } => {
            let v = read_vertices(&vertices)?;
            let text = std::fs::read_to_string(&certificate)
                .with_context(|| format!("reading {}", certificate.display()))?;
            let certs: Vec<CertificateFile> = match serde_json::from_str::<CertificateFile>(&text) {
                Ok(c) => vec![c],
                Err(e) => match serde_json::from_str::<Report>(&text) {
                    Ok(r) => r.steps.into_iter().flat_map(|s| s.certificates).collect(),
                    Err(_) => bail!(
                        "{} is neither a certificate nor a report: {e}",
                        certificate.display()
                    ),
                },
            };
            if certs.is_empty() {
                bail!("no certificates in {}", certificate.display());
            }
            let mut all_ok = true;
            for c in &certs {
                if !c.matches(&v) {
                    bail!(
                        "certificate for {}({}) with ambient dimension {} does not match the vertex set",
                        c.family,
                        c.n,
                        c.ambient_dim
                    );
                }
                let ok = c.verify(&v);
                let kind = match c.verdict {
                    FaceVerdict::Face(_) => "face certificate",
                    FaceVerdict::NonFace(_) => "non-face witness",
                };
                println!(
                    "{kind} for {:?}: {}",
                    c.subset,
                    if ok { "valid" } else { "INVALID" }
                );
                all_ok &= ok;
            }
            Ok(if all_ok {
                Outcome::Verified
            } else {
                Outcome::Refuted
            })
        }
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Verified) => ExitCode::from(0),
        Ok(Outcome::Refuted) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
