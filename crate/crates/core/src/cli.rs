//! The `cmforge` command line.
//!
//! Exit codes: `0` when every check passes, `1` when a check fails, `2` on
//! usage, construction or I/O errors. Reports go to stdout (or `--out`),
//! diagnostics to stderr.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::roots::RestrictedRootSystem;
use crate::symspace::{build_space, Family, HermitianPair, ModelDocument};
use crate::verify::{full_suite, roots_for, CheckConfig, CheckId, VerificationReport};

#[derive(Parser, Debug)]
#[command(name = "cmforge", version, about = "Cartan-Muenzner checks for rank-two Hermitian symmetric spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the supported families.
    ListSpaces {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run the check suite and print a report.
    Verify(RunArgs),
    /// Print the restricted root system.
    Roots(RunArgs),
    /// Write the structure constants, involution, `Z` and bases as JSON.
    ExportModel(RunArgs),
    /// Read and validate an exported model.
    ImportModel {
        path: std::path::PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args, Debug)]
struct RunArgs {
    /// BDI, AIII, DIII5 or EIII; `BDI(4)` is also accepted.
    #[arg(long)]
    space: String,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(1..))]
    samples: u64,
    #[arg(long, env = "CMFORGE_SEED", default_value_t = 42)]
    seed: u64,
    /// Tolerance override, `CHECK=VALUE`; repeatable.
    #[arg(long = "tol", value_parser = parse_tol)]
    tol: Vec<(CheckId, f64)>,
    /// Comma-separated check ids, or `all`.
    #[arg(long, value_parser = parse_checks)]
    checks: Option<Checks>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Clone, Debug)]
struct Checks(Option<Vec<CheckId>>);

fn parse_tol(s: &str) -> std::result::Result<(CheckId, f64), String> {
    let (id, value) = s.split_once('=').ok_or_else(|| format!("expected CHECK=VALUE, got {s:?}"))?;
    let id: CheckId = id.parse().map_err(|e: Error| e.to_string())?;
    let value: f64 = value.trim().parse().map_err(|_| format!("bad tolerance {value:?}"))?;
    if !(value >= 0.0) {
        return Err(format!("tolerance must be non-negative, got {value}"));
    }
    Ok((id, value))
}

fn parse_checks(s: &str) -> std::result::Result<Checks, String> {
    if s.trim().eq_ignore_ascii_case("all") {
        return Ok(Checks(None));
    }
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| p.parse::<CheckId>().map_err(|e| e.to_string()))
        .collect::<std::result::Result<Vec<_>, _>>()
        .map(|v| Checks(Some(v)))
}

impl RunArgs {
    fn family(&self) -> Result<Family> {
        Family::from_name(&self.space, self.n)
    }

    fn config(&self) -> CheckConfig {
        CheckConfig {
            samples: self.samples as usize,
            seed: self.seed,
            tolerances: self.tol.iter().copied().collect::<BTreeMap<_, _>>(),
            checks: self.checks.clone().and_then(|c| c.0),
            ..CheckConfig::default()
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match command {
        Command::ListSpaces { format } => {
            let text = match format {
                Format::Json => serde_json::to_string_pretty(&space_table())?,
                Format::Text => space_table_text(),
            };
            writeln!(out, "{text}")?;
            Ok(0)
        }
        Command::Verify(args) => {
            let pair = build_space(args.family()?)?;
            let report = full_suite(&pair, &args.config())?;
            let text = match args.format {
                Format::Json => report.to_json()?,
                Format::Text => report_text(&report),
            };
            emit(&args, out, &text)?;
            let failed: Vec<&str> =
                report.checks.iter().filter(|c| !c.passed()).map(|c| c.check_id.as_str()).collect();
            if failed.is_empty() {
                writeln!(err, "{}: all {} checks passed", report.family, report.checks.len())?;
                Ok(0)
            } else {
                writeln!(err, "{}: failed {}", report.family, failed.join(", "))?;
                Ok(1)
            }
        }
        Command::Roots(args) => {
            let pair = build_space(args.family()?)?;
            let rrs = roots_for(&pair, args.seed)?;
            let summary = RootsSummary::new(&pair, &rrs);
            let text = match args.format {
                Format::Json => serde_json::to_string_pretty(&summary)?,
                Format::Text => summary.text(),
            };
            emit(&args, out, &text)?;
            Ok(0)
        }
        Command::ExportModel(args) => {
            let pair = build_space(args.family()?)?;
            let text = serde_json::to_string(&pair.to_model())?;
            emit(&args, out, &text)?;
            Ok(0)
        }
        Command::ImportModel { path, format } => {
            let text = std::fs::read_to_string(&path)?;
            let doc: ModelDocument = serde_json::from_str(&text)?;
            let pair = HermitianPair::from_model(&doc)?;
            let info = serde_json::json!({
                "family": pair.family().to_string(),
                "dim": pair.algebra().dim(),
                "dim_k": pair.dim_k(),
                "N": pair.N(),
                "exact": pair.algebra().is_exact(),
                "valid": true,
            });
            match format {
                Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&info)?)?,
                Format::Text => writeln!(
                    out,
                    "{}: dim g = {}, dim k = {}, N = {}, valid",
                    pair.family(),
                    pair.algebra().dim(),
                    pair.dim_k(),
                    pair.N()
                )?,
            }
            Ok(0)
        }
    }
}

fn emit(args: &RunArgs, out: &mut dyn Write, text: &str) -> Result<()> {
    match &args.out {
        Some(path) => std::fs::write(path, format!("{text}\n"))?,
        None => writeln!(out, "{text}")?,
    }
    Ok(())
}

#[derive(Serialize)]
struct SpaceRow {
    family: &'static str,
    parameter: &'static str,
    space: &'static str,
    #[serde(rename = "N")]
    n: &'static str,
    root_type: &'static str,
    multiplicities: &'static str,
}

fn space_table() -> Vec<SpaceRow> {
    vec![
        SpaceRow {
            family: "BDI",
            parameter: "n >= 3",
            space: "SO(2+n)/SO(2)xSO(n)",
            n: "2n",
            root_type: "C2",
            multiplicities: "(n-2, 1)",
        },
        SpaceRow {
            family: "AIII",
            parameter: "n >= 2",
            space: "SU(2+n)/S(U(2)xU(n))",
            n: "4n",
            root_type: "BC2 (C2 at n = 2)",
            multiplicities: "(2, 2n-3)",
        },
        SpaceRow {
            family: "DIII5",
            parameter: "-",
            space: "SO(10)/U(5)",
            n: "20",
            root_type: "BC2",
            multiplicities: "(4, 5)",
        },
        SpaceRow {
            family: "EIII",
            parameter: "-",
            space: "E6/U(1)xSpin(10)",
            n: "32",
            root_type: "BC2",
            multiplicities: "(6, 9)",
        },
    ]
}

fn space_table_text() -> String {
    let mut s = format!("{:<6} {:<8} {:<22} {:<4} {:<18} {}\n", "family", "param", "space", "N", "type", "(m1, m2)");
    for r in space_table() {
        s.push_str(&format!(
            "{:<6} {:<8} {:<22} {:<4} {:<18} {}\n",
            r.family, r.parameter, r.space, r.n, r.root_type, r.multiplicities
        ));
    }
    s.trim_end().to_string()
}

fn report_text(report: &VerificationReport) -> String {
    let p = &report.params;
    let mut s = format!(
        "{}  N = {}  (m1, m2) = ({}, {})  a = {}/{}  b = {}/{}\n",
        report.family, p.N, p.m1, p.m2, p.a.num, p.a.den, p.b.num, p.b.den
    );
    s.push_str(&format!(
        "{:<22} {:<6} {:>12} {:>12} {:>10} {:>8} {:>8}\n",
        "check", "status", "max_abs", "max_rel", "tol", "samples", "ms"
    ));
    for c in &report.checks {
        s.push_str(&format!(
            "{:<22} {:<6} {:>12.3e} {:>12.3e} {:>10.1e} {:>8} {:>8}\n",
            c.check_id, c.status, c.max_abs_error, c.max_rel_error, c.tolerance, c.samples, c.millis
        ));
    }
    s.push_str(&format!("overall: {}", report.overall));
    s
}

#[derive(Serialize)]
struct RootRow {
    eps: (i32, i32),
    multiplicity: usize,
    value: [f64; 2],
}

#[derive(Serialize)]
struct RootsSummary {
    family: String,
    #[serde(rename = "N")]
    n: usize,
    root_type: String,
    m1: usize,
    m2: usize,
    dim_k0: usize,
    heps_norm_sq: f64,
    positive_roots: Vec<RootRow>,
}

impl RootsSummary {
    fn new(pair: &HermitianPair, rrs: &RestrictedRootSystem) -> Self {
        Self {
            family: pair.family().to_string(),
            n: pair.N(),
            root_type: rrs.type_tag.to_string(),
            m1: rrs.m1,
            m2: rrs.m2,
            dim_k0: rrs.k0.ncols(),
            heps_norm_sq: rrs.heps_norm_sq(),
            positive_roots: rrs
                .roots
                .iter()
                .map(|r| RootRow { eps: r.eps_coords, multiplicity: r.multiplicity, value: r.alpha })
                .collect(),
        }
    }

    fn text(&self) -> String {
        let mut s = format!(
            "{}  N = {}  type {}  (m1, m2) = ({}, {})  dim k0 = {}\n",
            self.family, self.n, self.root_type, self.m1, self.m2, self.dim_k0
        );
        s.push_str(&format!("{:<12} {:>5}\n", "root", "mult"));
        for r in &self.positive_roots {
            s.push_str(&format!("{:<12} {:>5}\n", eps_label(r.eps), r.multiplicity));
        }
        s.trim_end().to_string()
    }
}

fn eps_label((x, y): (i32, i32)) -> String {
    let term = |c: i32, name: &str| match c {
        0 => String::new(),
        1 => name.to_string(),
        -1 => format!("-{name}"),
        c => format!("{c}{name}"),
    };
    let (a, b) = (term(x, "e1"), term(y, "e2"));
    match (a.is_empty(), b.is_empty()) {
        (true, _) => b,
        (_, true) => a,
        _ if b.starts_with('-') => format!("{a}{b}"),
        _ => format!("{a}+{b}"),
    }
}
