//! `crlab` — analyze operators, verify the certificate suites, compare
//! orbits, and run convergence batteries from the command line.
//!
//! Exit codes: 0 on success, 1 when a verification produced violations,
//! 2 on usage or input errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand};
use serde::Serialize;

use crlab_core::convergence::{self, ConvergenceThresholds, SequenceKind, SequenceParams};
use crlab_core::io;
use crlab_core::metrics::MetricKind;
use crlab_core::operator;
use crlab_core::orbit;
use crlab_core::report::OrbitRecord;
use crlab_core::suites::{self, ReportFormat, SuiteConfig, ALL_SUITES};
use crlab_core::svd::op_norm;
use crlab_core::{Error, Matrix, ToleranceConfig};

#[derive(Parser)]
#[command(name = "crlab", version, about = "Closed-range operator laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a matrix file: pseudoinverse calculus, signature and polar
    /// decomposition.
    Analyze {
        /// Matrix in the JSON format {"rows": m, "cols": n, "entries": [[re, im], ...]}
        file: PathBuf,
        /// Tolerance overrides, e.g. --tol eq_tol=1e-12 (repeatable)
        #[arg(long = "tol", value_name = "KEY=VALUE")]
        tol: Vec<String>,
    },
    /// Run verification suites over seeded random ensembles.
    Verify {
        /// Comma-separated suite ids (default: all)
        #[arg(long, value_delimiter = ',')]
        suites: Vec<String>,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 500)]
        trials: usize,
        #[arg(long = "max-dim", default_value_t = 8)]
        max_dim: usize,
        /// Tolerance overrides, e.g. --tol eq_tol=1e-12 (repeatable)
        #[arg(long = "tol", value_name = "KEY=VALUE")]
        tol: Vec<String>,
        /// Report output path
        #[arg(long = "out")]
        out: Option<PathBuf>,
        #[arg(long, default_value = "json")]
        format: String,
        /// List the available suite ids and exit
        #[arg(long, default_value_t = false)]
        list: bool,
    },
    /// Decide whether two operators lie in the same orbit; emit an
    /// intertwiner or a distance witness.
    Orbit {
        file_a: PathBuf,
        file_b: PathBuf,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long = "out")]
        out: Option<PathBuf>,
        #[arg(long = "tol", value_name = "KEY=VALUE")]
        tol: Vec<String>,
    },
    /// Generate a perturbation sequence and evaluate the convergence
    /// batteries on it.
    Converge {
        /// rank_preserving | rank_dropping | isometry_flip | pinv_blowup
        #[arg(long, default_value = "rank_preserving")]
        kind: String,
        #[arg(long, default_value_t = 50)]
        length: usize,
        /// Decay scale of the perturbations
        #[arg(long)]
        scale: Option<f64>,
        /// Base operator file (default: a seeded random rank-deficient base)
        #[arg(long)]
        base: Option<PathBuf>,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long = "out")]
        out: Option<PathBuf>,
        #[arg(long = "tol", value_name = "KEY=VALUE")]
        tol: Vec<String>,
    },
}

fn parse_tolerances(overrides: &[String]) -> Result<ToleranceConfig, Error> {
    let mut tol = ToleranceConfig::default();
    for item in overrides {
        let (key, value) = item
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("expected KEY=VALUE, got `{item}`")))?;
        let parsed: f64 = value
            .parse()
            .map_err(|_| Error::Parse(format!("invalid tolerance value `{value}`")))?;
        match key {
            "rank_tol_rel" => tol.rank_tol_rel = parsed,
            "eq_tol" => tol.eq_tol = parsed,
            "angle_one_tol" => tol.angle_one_tol = parsed,
            other => {
                return Err(Error::Parse(format!(
                    "unknown tolerance key `{other}` (rank_tol_rel, eq_tol, angle_one_tol)"
                )))
            }
        }
    }
    tol.validate()?;
    Ok(tol)
}

#[derive(Serialize)]
struct AnalysisSummary {
    rows: usize,
    cols: usize,
    rank: usize,
    orbit: OrbitRecord,
    gamma: Option<f64>,
    op_norm: f64,
    pinv_norm: f64,
    penrose_residuals: [f64; 4],
    polar_defect: f64,
    pinv: serde_json::Value,
    polar_isometry: serde_json::Value,
    abs: serde_json::Value,
    abs_adjoint: serde_json::Value,
}

fn matrix_value(m: &Matrix) -> serde_json::Value {
    serde_json::from_str(&io::matrix_to_json(m)).expect("matrix json is valid")
}

/// Print bulk output without panicking when the consumer closes the pipe
/// early (`crlab analyze ... | head`).
fn emit(text: &str) {
    use std::io::Write;
    if writeln!(std::io::stdout(), "{text}").is_err() {
        std::process::exit(0);
    }
}

fn cmd_analyze(file: &Path, tol: &ToleranceConfig) -> Result<(), Error> {
    let a = io::read_matrix(file)?;
    let an = operator::analyze(&a, tol)?;
    let parts = operator::polar_decompose(&a, tol)?;
    let penrose = {
        let apa = op_norm(&(&(&(&an.a * &an.pinv) * &an.a) - &an.a))?;
        let pap = op_norm(&(&(&(&an.pinv * &an.a) * &an.pinv) - &an.pinv))?;
        let ap = &an.a * &an.pinv;
        let pa = &an.pinv * &an.a;
        [
            apa,
            pap,
            op_norm(&(&ap - &ap.adjoint()))?,
            op_norm(&(&pa - &pa.adjoint()))?,
        ]
    };
    let polar_defect = op_norm(&(&(&parts.v * &parts.abs_a) - &a))?;
    let summary = AnalysisSummary {
        rows: a.rows(),
        cols: a.cols(),
        rank: an.rank,
        orbit: OrbitRecord::from_signature(&an.signature),
        gamma: an.gamma.is_finite().then_some(an.gamma),
        op_norm: an.op_norm,
        pinv_norm: an.pinv_norm,
        penrose_residuals: penrose,
        polar_defect,
        pinv: matrix_value(&an.pinv),
        polar_isometry: matrix_value(&parts.v),
        abs: matrix_value(&parts.abs_a),
        abs_adjoint: matrix_value(&parts.abs_a_star),
    };
    println!(
        "{} x {} operator: rank {}, signature {}, index {}",
        a.rows(),
        a.cols(),
        an.rank,
        an.signature,
        an.signature.index()
    );
    match summary.gamma {
        Some(g) => println!(
            "gamma = {g:.12e}   ||A|| = {:.12e}   ||A^+|| = {:.12e}",
            an.op_norm, an.pinv_norm
        ),
        None => println!("gamma = inf (zero operator)   ||A|| = {:.12e}", an.op_norm),
    }
    emit(&serde_json::to_string_pretty(&summary).expect("summary serializes"));
    Ok(())
}

fn cmd_verify(
    suites: Vec<String>,
    seed: u64,
    trials: usize,
    max_dim: usize,
    tol: ToleranceConfig,
    out: Option<PathBuf>,
    format: &str,
) -> Result<bool, Error> {
    let format = ReportFormat::from_str(format)?;
    let cfg = SuiteConfig {
        seed,
        trials,
        max_dim,
        tolerances: tol,
        suites,
        output_path: out.as_ref().map(|p| p.display().to_string()),
        format,
    };
    let report = suites::run(&cfg)?;
    for line in report.summary_lines() {
        println!("{line}");
    }
    let violations = report.violations();
    println!(
        "total: {} checks, {} violations (seed {seed}, trials {trials}, max_dim {max_dim})",
        report.suites.iter().map(|s| s.total).sum::<usize>(),
        violations,
    );
    if let Some(path) = out {
        let body = match format {
            ReportFormat::Json => report.to_json(),
            ReportFormat::Csv => report.to_csv(),
        };
        std::fs::write(&path, body)?;
        println!("report written to {}", path.display());
    }
    Ok(violations == 0)
}

#[derive(Serialize)]
struct OrbitOutcome {
    same_orbit: bool,
    orbit_a: OrbitRecord,
    orbit_b: OrbitRecord,
    intertwiner: Option<IntertwinerOut>,
    distance_witness: Option<WitnessOut>,
}

#[derive(Serialize)]
struct IntertwinerOut {
    residual: f64,
    g: serde_json::Value,
    h: serde_json::Value,
}

#[derive(Serialize)]
struct WitnessOut {
    lower_bound_is_one: bool,
    witness_dx_range: f64,
    witness_dx_null: f64,
    sampled_gaps: Vec<f64>,
}

fn cmd_orbit(
    file_a: &Path,
    file_b: &Path,
    seed: u64,
    out: Option<PathBuf>,
    tol: &ToleranceConfig,
) -> Result<(), Error> {
    let a = io::read_matrix(file_a)?;
    let b = io::read_matrix(file_b)?;
    let sig_a = orbit::signature(&a, tol)?;
    let sig_b = orbit::signature(&b, tol)?;
    let same = orbit::same_orbit(&a, &b, tol)?;
    let outcome = if same {
        let tw = orbit::build_intertwiner(&a, &b, tol)?;
        println!(
            "same orbit: signature {} — intertwiner residual {:.3e}",
            sig_a, tw.residual
        );
        OrbitOutcome {
            same_orbit: true,
            orbit_a: OrbitRecord::from_signature(&sig_a),
            orbit_b: OrbitRecord::from_signature(&sig_b),
            intertwiner: Some(IntertwinerOut {
                residual: tw.residual,
                g: matrix_value(&tw.g),
                h: matrix_value(&tw.h),
            }),
            distance_witness: None,
        }
    } else {
        let mut rng = crlab_core::random::rng_for(seed, 0xc11, 0);
        let w_range =
            orbit::orbit_distance_witness(&a, &b, MetricKind::Range, 0.01, 5, &mut rng, tol)?;
        let w_null =
            orbit::orbit_distance_witness(&a, &b, MetricKind::Null, 0.01, 5, &mut rng, tol)?;
        println!(
            "different orbits: {} vs {} — projector gap pinned at 1, witness d_R = {:.6}",
            sig_a, sig_b, w_range.witness_dx
        );
        OrbitOutcome {
            same_orbit: false,
            orbit_a: OrbitRecord::from_signature(&sig_a),
            orbit_b: OrbitRecord::from_signature(&sig_b),
            intertwiner: None,
            distance_witness: Some(WitnessOut {
                lower_bound_is_one: w_range.lower_bound_is_one && w_null.lower_bound_is_one,
                witness_dx_range: w_range.witness_dx,
                witness_dx_null: w_null.witness_dx,
                sampled_gaps: w_range.sampled_gaps,
            }),
        }
    };
    let body = serde_json::to_string_pretty(&outcome).expect("outcome serializes");
    match out {
        Some(path) => {
            std::fs::write(&path, body)?;
            println!("record written to {}", path.display());
        }
        None => emit(&body),
    }
    Ok(())
}

fn cmd_converge(
    kind: &str,
    length: usize,
    scale: Option<f64>,
    base: Option<PathBuf>,
    seed: u64,
    out: Option<PathBuf>,
    tol: &ToleranceConfig,
) -> Result<bool, Error> {
    let kind = SequenceKind::from_str(kind)?;
    let base = match base {
        Some(path) => io::read_matrix(&path)?,
        None => {
            // seeded rank-deficient default base so every generator applies
            let mut rng = crlab_core::random::rng_for(seed, 0xba5e, 0);
            crlab_core::random::random_operator(5, 4, 2, 0.4, 2.0, &mut rng)
        }
    };
    let params = SequenceParams {
        length,
        scale: scale.unwrap_or(match kind {
            SequenceKind::RankPreserving => 1e-8,
            _ => 1.0,
        }),
    };
    let seq = convergence::generate_sequence(kind, &base, params, seed, tol)?;
    let thresholds = ConvergenceThresholds::default();
    let report = convergence::convergence_report(&seq, tol, &thresholds)?;
    let classical = convergence::pinv_convergence_report(&seq, tol, &thresholds)?;
    println!(
        "{kind} sequence of length {length}: {} / {} conditions hold, consistent = {}",
        report.verdicts.iter().filter(|v| v.holds).count(),
        report.verdicts.len(),
        report.consistent
    );
    for v in &report.verdicts {
        emit(&format!(
            "  [{}] {:<26} measured {:>13.6e} {} {:>13.6e}",
            if v.holds { "pass" } else { "fail" },
            v.id,
            v.measured,
            v.comparison,
            v.threshold
        ));
    }
    let agree =
        classical.consistent && report.consistent && classical.all_hold() == report.all_hold();
    println!(
        "classical battery: {} / {} hold, agreement with the full battery: {}",
        classical.verdicts.iter().filter(|v| v.holds).count(),
        classical.verdicts.len(),
        agree
    );
    if let Some(path) = out {
        #[derive(Serialize)]
        struct Out<'a> {
            report: &'a convergence::ConvergenceReport,
            classical: &'a convergence::ConvergenceReport,
        }
        std::fs::write(
            &path,
            serde_json::to_string_pretty(&Out {
                report: &report,
                classical: &classical,
            })
            .expect("report serializes"),
        )?;
        println!("report written to {}", path.display());
    }
    Ok(agree)
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        // input/usage problems
        Error::Parse(_)
        | Error::Io(_)
        | Error::InvalidTolerance(_)
        | Error::DimensionMismatch(_)
        | Error::NonFinite => 2,
        // anything else is an evaluation failure
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let run = || -> Result<bool, Error> {
        match cli.command {
            Command::Analyze { ref file, ref tol } => {
                let tol = parse_tolerances(tol)?;
                cmd_analyze(file, &tol)?;
                Ok(true)
            }
            Command::Verify {
                ref suites,
                seed,
                trials,
                max_dim,
                ref tol,
                ref out,
                ref format,
                list,
            } => {
                if list {
                    for id in ALL_SUITES {
                        println!("{id}");
                    }
                    return Ok(true);
                }
                let tol = parse_tolerances(tol)?;
                cmd_verify(
                    suites.clone(),
                    seed,
                    trials,
                    max_dim,
                    tol,
                    out.clone(),
                    format,
                )
            }
            Command::Orbit {
                ref file_a,
                ref file_b,
                seed,
                ref out,
                ref tol,
            } => {
                let tol = parse_tolerances(tol)?;
                cmd_orbit(file_a, file_b, seed, out.clone(), &tol)?;
                Ok(true)
            }
            Command::Converge {
                ref kind,
                length,
                scale,
                ref base,
                seed,
                ref out,
                ref tol,
            } => {
                let tol = parse_tolerances(tol)?;
                cmd_converge(kind, length, scale, base.clone(), seed, out.clone(), &tol)
            }
        }
    };
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
