//! Command-line front end: `check`, `construct`, `sweep`, `classify`.
//!
//! Exit codes: 0 solution (or success), 1 not a solution, 2 input error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::constructors::{construct, scalar_window, sweep_window, ConstructError, Family, FamilyDescriptor, RowStatus};
use crate::io::{classification_out, fmt12, write_sweep_csv, ReportFile, ScenarioFile};
use crate::residuals::{Verdict, DEFAULT_TOL};

pub const EXIT_SOLUTION: i32 = 0;
pub const EXIT_NOT_SOLUTION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "het3", version, about = "Residual checker and constructor for 3D heterotic solitons with parallel torsion")]
pub struct Cli {
    /// Verdict tolerance on residual norms (default 1e-9). Overrides HET3_TOL.
    #[arg(long, global = true, env = "HET3_TOL", default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate every residual of a scenario file.
    Check {
        path: PathBuf,
        /// Print the full JSON report instead of a summary.
        #[arg(long)]
        json: bool,
    },
    /// Write an exact scenario for one of the soliton families.
    Construct {
        family: FamilyArg,
        #[arg(long)]
        kappa: f64,
        /// Scalar curvature s_g (heisenberg-generic, hyperbolic).
        #[arg(long, allow_hyphen_values = true)]
        scalar: Option<f64>,
        /// Root choice for heisenberg-generic: 1 or -1.
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        sign: f64,
        /// Output path; stdout when omitted.
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Sample hyperbolic skew-torsion solitons across the scalar window.
    Sweep {
        #[arg(long)]
        kappa: f64,
        #[arg(long, default_value_t = 100)]
        points: usize,
        /// CSV output path; stdout when omitted.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Print the Ricci-profile classification of a scenario's model.
    Classify { path: PathBuf },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    HeisenbergGeneric,
    HeisenbergSkew,
    Hyperbolic,
    Boundary,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::HeisenbergGeneric => Family::GenericReducibleHeisenberg,
            FamilyArg::HeisenbergSkew => Family::SkewHeisenberg,
            FamilyArg::Hyperbolic => Family::SkewHyperbolic,
            FamilyArg::Boundary => Family::BoundaryVanishingTorsion,
        }
    }
}

/// Parse arguments and run; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return if code == 0 { 0 } else { EXIT_INPUT };
        }
    };
    match dispatch(&cli, out, err) {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INPUT
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, String> {
    if !(cli.tol.is_finite() && cli.tol >= 0.0) {
        return Err(format!("tolerance must be a nonnegative number, got {}", cli.tol));
    }
    match &cli.command {
        Command::Check { path, json } => check(path, *json, cli.tol, out),
        Command::Construct { family, kappa, scalar, sign, output } => {
            cmd_construct((*family).into(), *kappa, *scalar, *sign, output.as_ref(), out, err)
        }
        Command::Sweep { kappa, points, csv } => sweep(*kappa, *points, csv.as_ref(), cli.tol, out),
        Command::Classify { path } => {
            let sc = ScenarioFile::read(path).and_then(|f| f.to_scenario()).map_err(|e| e.to_string())?;
            let text = serde_json::to_string_pretty(&classification_out(&sc)).map_err(|e| e.to_string())?;
            writeln!(out, "{text}").map_err(|e| e.to_string())?;
            Ok(EXIT_SOLUTION)
        }
    }
}

fn check(path: &Path, json: bool, tol: f64, out: &mut dyn Write) -> Result<i32, String> {
    let file = ScenarioFile::read(path).map_err(|e| e.to_string())?;
    let (report, raw) = ReportFile::evaluate(file, tol).map_err(|e| e.to_string())?;
    let io = |e: std::io::Error| e.to_string();
    if json {
        out.write_all(report.to_json().as_bytes()).map_err(io)?;
    } else {
        let n = &report.norms;
        writeln!(out, "verdict          {}", report.verdict).map_err(io)?;
        writeln!(out, "tolerance        {}", fmt12(tol)).map_err(io)?;
        for (name, v) in [
            ("einstein", n.einstein),
            ("yang_mills", n.yang_mills),
            ("dilaton", n.dilaton),
            ("maxwell", n.maxwell),
            ("trace_identity", n.trace_identity),
        ] {
            writeln!(out, "{name:<16} {v:e}").map_err(io)?;
        }
        if let Some(v) = n.remark_identity {
            writeln!(out, "{:<16} {v:e}", "remark_identity").map_err(io)?;
        }
        writeln!(out, "classification   {}", report.classification.kind).map_err(io)?;
        writeln!(out, "torsion          {}", report.torsion.kind).map_err(io)?;
    }
    Ok(match raw.verdict {
        Verdict::Solution => EXIT_SOLUTION,
        Verdict::NotSolution => EXIT_NOT_SOLUTION,
    })
}

fn cmd_construct(
    family: Family,
    kappa: f64,
    scalar: Option<f64>,
    sign: f64,
    output: Option<&PathBuf>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, String> {
    let built = construct(&FamilyDescriptor { family, kappa, scalar, sign }).map_err(|e| match e {
        ConstructError::OutOfWindow { .. } if kappa > 0.0 => {
            let (lo, hi) = scalar_window(kappa);
            format!("{e}; admissible s_g for kappa = {kappa}: ({}, {})", fmt12(lo), fmt12(hi))
        }
        ConstructError::NonNegativeScalar(_) => format!("{e}; scalar curvature must lie in (-inf, 0)"),
        _ => e.to_string(),
    })?;
    let p = &built.params;
    let mut summary = format!("family {}\nalpha {}\ngamma {}\n", family.as_str(), fmt12(p.alpha), fmt12(p.gamma));
    if let Some(l) = p.lambda {
        summary += &format!("lambda {}\n", fmt12(l));
    }
    if let Some(a) = p.a {
        summary += &format!("a {}\n", fmt12(a));
    }
    summary += &format!("h {}\ns_g {}\nkappa_s_g {}\n", fmt12(p.h), fmt12(p.scalar), fmt12(kappa * p.scalar));

    let json = ScenarioFile::from_constructed(&built).to_json();
    match output {
        Some(path) => {
            std::fs::write(path, json).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
            out.write_all(summary.as_bytes()).map_err(|e| e.to_string())?;
        }
        None => {
            out.write_all(json.as_bytes()).map_err(|e| e.to_string())?;
            err.write_all(summary.as_bytes()).map_err(|e| e.to_string())?;
        }
    }
    Ok(EXIT_SOLUTION)
}

fn sweep(kappa: f64, points: usize, csv: Option<&PathBuf>, tol: f64, out: &mut dyn Write) -> Result<i32, String> {
    let rows = sweep_window(kappa, points, tol).map_err(|e| e.to_string())?;
    match csv {
        Some(path) => {
            let file = std::fs::File::create(path).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
            let mut w = std::io::BufWriter::new(file);
            write_sweep_csv(&mut w, &rows).and_then(|_| w.flush()).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
            let solved = rows.iter().filter(|r| r.status == RowStatus::Solution).count();
            writeln!(out, "{solved}/{} rows SOLUTION -> {}", rows.len(), path.display()).map_err(|e| e.to_string())?;
        }
        None => write_sweep_csv(&mut *out, &rows).map_err(|e| e.to_string())?,
    }
    Ok(if rows.iter().all(|r| r.status == RowStatus::Solution) { EXIT_SOLUTION } else { EXIT_NOT_SOLUTION })
}
