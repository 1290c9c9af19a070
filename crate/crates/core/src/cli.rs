// SPDX-License-Identifier: Apache-2.0

//! Command-line front end. Exit codes: 0 every check passed, 1 a check
//! failed, 2 bad input.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::arith::make_ext_field;
use crate::curves::{EllipticCurve, HyperellipticCurve};
use crate::enumerative::{theta_degree, verify_finite_degree};
use crate::injectivity::{build_rows_displayed, build_rows_table, diff_systems, verify_injectivity, Source, SweepLimits};
use crate::strata::{count_x, fiber_multiplicity, StrataQuery, DEFAULT_STRATA_BOUND};
use crate::twisted::TwistInput;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "effcone", version, about = "Exact checks for effective-cone computations on moduli of curves")]
pub struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Kernel of the pullback system on M_{g,n}; writes a certificate.
    Injectivity(InjectivityArgs),
    /// Compare the displayed equations with the table transcription.
    Diff(DiffArgs),
    /// Degree g! ∏ m_i^2 of m_1 Θ ⋯ m_g Θ.
    Theta(ThetaArgs),
    /// Rational fiber counts of (q1, q2) ↦ d1[q1-∞] + d2[q2-∞] on a genus-2 Jacobian.
    Fiber(FiberArgs),
    /// Count points of X(d^1..d^m) on an elliptic curve.
    Strata(StrataArgs),
    /// Check a twisted canonical divisor graph.
    Twist(TwistArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SourceArg {
    Displayed,
    Table,
}

#[derive(Debug, Args)]
pub struct Output {
    /// Write the JSON report here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Print the JSON report instead of the summary.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct InjectivityArgs {
    #[arg(long)]
    pub g: u32,
    #[arg(long)]
    pub n: u32,
    #[arg(long, value_enum, default_value = "displayed")]
    pub source: SourceArg,
    /// Also write the coefficient matrix as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct DiffArgs {
    #[arg(long)]
    pub g: u32,
    #[arg(long)]
    pub n: u32,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct ThetaArgs {
    #[arg(long)]
    pub g: u32,
    #[arg(long, num_args = 1.., allow_negative_numbers = true, required = true)]
    pub mult: Vec<i64>,
}

#[derive(Debug, Args)]
pub struct FiberArgs {
    #[arg(long)]
    pub p: u32,
    /// Degree of the base field over F_p.
    #[arg(long, default_value_t = 1)]
    pub ext_degree: u32,
    /// Monic quintic, e.g. "x^5+1".
    #[arg(long)]
    pub f: String,
    #[arg(long, allow_negative_numbers = true)]
    pub d1: i64,
    #[arg(long, allow_negative_numbers = true)]
    pub d2: i64,
    #[arg(long, default_value_t = 6)]
    pub kmax: u32,
    #[arg(long, default_value_t = 20)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct StrataArgs {
    #[arg(long)]
    pub p: u32,
    #[arg(long, default_value_t = 1)]
    pub ext_degree: u32,
    /// Curve y^2 = x^3 + a x + b.
    #[arg(long, allow_negative_numbers = true)]
    pub a: i64,
    #[arg(long, allow_negative_numbers = true)]
    pub b: i64,
    /// JSON list of signatures, e.g. '[[1,1,-2],[1,-2,1]]'.
    #[arg(long)]
    pub signatures: String,
    /// Also measure the fiber multiplicity of the j-th forgetful map.
    #[arg(long)]
    pub multiplicity: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_STRATA_BOUND)]
    pub bound: u64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("input").required(true).args(["file", "graph"])))]
pub struct TwistArgs {
    /// Graph JSON file.
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// Inline graph JSON.
    #[arg(long = "graph")]
    pub graph: Option<String>,
    #[command(flatten)]
    pub output: Output,
}

/// A failure that maps to an exit code.
enum Failure {
    Usage(String),
    Io(String),
}

impl<E: std::error::Error> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Usage(e.to_string())
    }
}

struct Io<'a> {
    out: &'a mut dyn Write,
}

impl Io<'_> {
    fn say(&mut self, s: impl AsRef<str>) -> Result<(), Failure> {
        writeln!(self.out, "{}", s.as_ref()).map_err(|e| Failure::Io(e.to_string()))
    }

    /// Writes `report` to the requested file and either it or `summary` to
    /// stdout.
    fn emit(&mut self, o: &Output, report: &impl Serialize, summary: String) -> Result<(), Failure> {
        let json = serde_json::to_string_pretty(report).expect("reports serialize");
        if let Some(path) = &o.out {
            fs::write(path, format!("{json}\n")).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
        }
        self.say(if o.json { json } else { summary })
    }
}

fn verdict(pass: bool) -> i32 {
    if pass {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    if let Some(j) = cli.jobs {
        // a pool may already exist when embedded; the request is then moot
        let _ = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global();
    }
    match dispatch(&cli.command, &mut Io { out }) {
        Ok(code) => code,
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_USAGE
        }
        Err(Failure::Io(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_USAGE
        }
    }
}

fn dispatch(cmd: &Command, io: &mut Io) -> Result<i32, Failure> {
    match cmd {
        Command::Injectivity(a) => {
            let source = match a.source {
                SourceArg::Displayed => Source::Displayed,
                SourceArg::Table => Source::Table,
            };
            let cert = verify_injectivity(a.g, a.n, source)?;
            if let Some(path) = &a.csv {
                let system = match source {
                    Source::Displayed => build_rows_displayed(a.g, a.n)?,
                    Source::Table => build_rows_table(a.g, a.n, &SweepLimits::default(), &crate::arith::rat(0))?,
                };
                let file = fs::File::create(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
                system.write_csv(file)?;
            }
            let mut summary = format!(
                "g={} n={} source={:?}: {} rows, {} columns, kernel dimension {}",
                a.g,
                a.n,
                source,
                cert.rows,
                cert.columns.len(),
                cert.kernel_dim
            );
            for s in &cert.swept_values {
                summary.push_str(&format!("\n  unknown entry = {:>2}: kernel dimension {}", s.value, s.kernel_dim));
            }
            summary.push_str(if cert.is_injective() { "\ninjective" } else { "\nNOT injective" });
            io.emit(&a.output, &cert, summary)?;
            Ok(verdict(cert.is_injective()))
        }
        Command::Diff(a) => {
            let report = diff_systems(a.g, a.n)?;
            let mut summary = format!("g={} n={}: {} mismatches\n", a.g, a.n, report.mismatches.len());
            summary.push_str(&format!("{:<14} {:<30} {:<12} {:>9} {:>9}  kind\n", "equation", "surface", "column", "displayed", "table"));
            for m in &report.mismatches {
                let col = m.column.map(|c| c.to_string()).unwrap_or_else(|| "-".into());
                summary.push_str(&format!(
                    "{:<14} {:<30} {:<12} {:>9} {:>9}  {:?}\n",
                    m.equation, m.surface, col, m.displayed, m.table, m.kind
                ));
            }
            io.emit(&a.output, &report, summary.trim_end().to_string())?;
            Ok(EXIT_PASS)
        }
        Command::Theta(a) => {
            let d = theta_degree(a.g, &a.mult)?;
            io.say(d.to_string())?;
            Ok(EXIT_PASS)
        }
        Command::Fiber(a) => {
            let k = make_ext_field(a.p, a.ext_degree)?;
            let curve = HyperellipticCurve::parse(&k, &a.f)?;
            let report = verify_finite_degree(&curve, a.d1, a.d2, a.samples, a.kmax, a.seed)?;
            let mut summary = report.table();
            if let Some(c) = &report.contraction {
                summary.push_str(&format!(
                    "identity fiber sizes {:?} vs locus sizes {:?}\n",
                    c.identity_counts, c.locus_sizes
                ));
            }
            summary.push_str(&format!("max fiber {}\n{}", report.observed_max, if report.passes() { "pass" } else { "FAIL" }));
            io.emit(&a.output, &report, summary)?;
            Ok(verdict(report.passes()))
        }
        Command::Strata(a) => {
            let k = make_ext_field(a.p, a.ext_degree)?;
            let curve = EllipticCurve::from_ints(&k, a.a, a.b)?;
            let query = StrataQuery::from_json(&a.signatures)?;
            let count = count_x(&query, &curve, a.bound)?;
            let multiplicity = a.multiplicity.map(|j| fiber_multiplicity(&curve, &query, j, a.bound)).transpose()?;
            let pass = multiplicity.as_ref().is_none_or(|m| m.generic == m.expected);
            #[derive(Serialize)]
            struct StrataReport<'a> {
                curve: String,
                query: &'a StrataQuery,
                count: u64,
                multiplicity: Option<crate::strata::MultiplicityReport>,
            }
            let (ca, cb) = curve.coefficients();
            let report = StrataReport {
                curve: format!("y^2 = x^3 + {} x + {} over F_{}^{}", k.format(ca), k.format(cb), a.p, a.ext_degree),
                query: &query,
                count,
                multiplicity,
            };
            let mut summary = format!(
                "{}\nm={} n={} gcd=1: {} last=1: {}\n#X = {count}",
                report.curve, query.m, query.n, query.coprime, query.unit_last
            );
            if let Some(m) = &report.multiplicity {
                summary.push_str(&format!(
                    "\nfiber over P(d^{}): generic {} expected {} histogram {:?}",
                    m.j, m.generic, m.expected, m.histogram
                ));
            }
            io.emit(&a.output, &report, summary)?;
            Ok(verdict(pass))
        }
        Command::Twist(a) => {
            let text = match (&a.file, &a.graph) {
                (Some(p), _) => fs::read_to_string(p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?,
                (None, Some(s)) => s.clone(),
                (None, None) => unreachable!("clap requires one input"),
            };
            let report = TwistInput::from_json(&text)?.run()?;
            let mut summary = String::new();
            for f in &report.axioms.failures {
                summary.push_str(&format!("axiom failure: {}\n", serde_json::to_string(f).expect("serializes")));
            }
            if let Some(l) = &report.levels {
                summary.push_str(&format!("levels: {}\n", serde_json::to_string(l).expect("serializes")));
            }
            if let Some(g) = &report.grc {
                for f in &g.failures {
                    summary.push_str(&format!("residue failure: {}\n", serde_json::to_string(f).expect("serializes")));
                }
            }
            for n in &report.notes {
                summary.push_str(&format!("note: {n}\n"));
            }
            summary.push_str(if report.passed { "pass" } else { "FAIL" });
            io.emit(&a.output, &report, summary)?;
            Ok(verdict(report.passed))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("effcone").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn theta_prints_degree() {
        assert_eq!(call(&["theta", "--g", "2", "--mult", "2", "2"]), (0, "32\n".into(), String::new()));
        assert_eq!(call(&["theta", "--g", "2", "--mult", "2", "-1"]).1, "8\n");
        assert_eq!(call(&["theta", "--g", "3", "--mult", "1"]).0, 2);
    }

    #[test]
    fn injectivity_exit_codes() {
        assert_eq!(call(&["injectivity", "--g", "3", "--n", "2", "--source", "displayed"]).0, 0);
        let (code, _, err) = call(&["injectivity", "--g", "2", "--n", "1"]);
        assert_eq!(code, 2);
        assert!(err.contains("g≥3"), "{err}");
        assert_eq!(call(&["injectivity", "--g", "3"]).0, 2);
        assert_eq!(call(&["--help"]).0, 0);
    }

    #[test]
    fn twist_inline() {
        let g = r#"{"vertices":[{"genus":2,"markings":[2]}]}"#;
        assert_eq!(call(&["twist", "--graph", g]).0, 0);
        let bad = r#"{"vertices":[{"genus":1,"markings":[2]},{"genus":1,"markings":[2]}],
            "edges":[{"u":0,"v":1,"ord_u":0,"ord_v":-2},{"u":0,"v":1,"ord_u":-2,"ord_v":0}]}"#;
        assert_eq!(call(&["twist", "--graph", bad]).0, 1);
        assert_eq!(call(&["twist", "--graph", "{"]).0, 2);
        assert_eq!(call(&["twist"]).0, 2);
    }

    #[test]
    fn strata_reports_count() {
        let (code, out, _) = call(&["strata", "--p", "5", "--a", "-1", "--b", "0", "--signatures", "[[2,-2]]"]);
        assert_eq!(code, 0);
        assert!(out.contains("#X = 24"), "{out}");
        assert_eq!(call(&["strata", "--p", "5", "--a", "-1", "--b", "0", "--signatures", "[[2,-2],[2,-2]]"]).0, 2);
    }
}
