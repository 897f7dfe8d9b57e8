//! Command-line front end. Results go to stdout as JSON; failures go to
//! stderr as `{"error": …}`.
//!
//! Exit codes: 0 success, 1 check or numerical failure, 2 usage or input error.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::error::Error;
use crate::generators::{random_cp_system, random_pr_system};
use crate::io::{self, matrix_to_rows, system_to_json, SlhJson};
use crate::lqss::{check_physical_realizability, QuadratureModel};
use crate::network::{frequency_response, log_grid, run_example, CavityNetworkSpec, REFERENCE_GAMMA};
use crate::numerics::is_hurwitz;
use crate::reduction::{
    classify_codiagonalizability, gramians, quasi_balance_with_tol, reduce, ReductionTarget, CLASSIFY_TOL,
};
use crate::symplectic::williamson;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Default tolerance for physical-realizability residuals.
pub const PR_TOL: f64 = 1e-8;

#[derive(Debug, Parser)]
#[command(name = "lqss-reduce", version, about = "Model reduction for linear quantum stochastic systems")]
pub struct Cli {
    /// Overrides the command's default tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Physical-realizability residuals of a system or SLH JSON file.
    CheckPr { system: PathBuf },
    /// Controllability and observability Gramians with Hankel values.
    Gramians { system: PathBuf },
    /// Symplectic diagonalization of a positive definite matrix.
    Williamson { matrix: PathBuf },
    /// Quasi-balanced realization.
    QuasiBalance { system: PathBuf },
    /// Truncates the quasi-balanced realization.
    Reduce(ReduceArgs),
    /// Builds, reduces and evaluates the N-cavity low-pass network.
    CavityExample(CavityArgs),
    /// Frequency response of the last input pair.
    FreqResponse(FreqArgs),
    /// Seeded random physically realizable system.
    RandomSystem(RandomArgs),
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("target").required(true).args(["keep", "budget"]))]
pub struct ReduceArgs {
    pub system: PathBuf,
    /// Number of modes to keep.
    #[arg(long)]
    pub keep: Option<usize>,
    /// Largest admissible error bound.
    #[arg(long)]
    pub budget: Option<f64>,
}

#[derive(Debug, Args)]
pub struct CavityArgs {
    #[arg(long, default_value_t = 5)]
    pub n: usize,
    #[arg(long, default_value_t = REFERENCE_GAMMA)]
    pub gamma: f64,
    #[arg(long, default_value_t = 3)]
    pub keep: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct FreqArgs {
    pub system: PathBuf,
    #[arg(long)]
    pub wmin: f64,
    #[arg(long)]
    pub wmax: f64,
    #[arg(long, default_value_t = 400)]
    pub points: usize,
    /// Writes CSV here instead of JSON to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RandomArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub m: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Rejects non-Hurwitz draws.
    #[arg(long)]
    pub stable: bool,
    /// Draws a completely passive system.
    #[arg(long)]
    pub passive: bool,
    /// Emits SLH parameters instead of the quadrature model.
    #[arg(long)]
    pub slh: bool,
}

/// Failure with its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(e: impl std::fmt::Display) -> Self {
        Failure { code: EXIT_USAGE, message: e.to_string() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidInput(_) => EXIT_USAGE,
            _ => EXIT_FAILURE,
        };
        Failure { code, message: e.to_string() }
    }
}

/// Result of a command: JSON to print and whether a check failed.
struct Outcome {
    value: Value,
    passed: bool,
}

impl Outcome {
    fn ok(value: Value) -> Self {
        Outcome { value, passed: true }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return EXIT_OK;
            }
            return report_error(stderr, &Failure::usage(e.render().to_string().trim()));
        }
    };
    match execute(&cli) {
        Ok(out) => {
            let text = serde_json::to_string_pretty(&out.value).unwrap_or_default();
            let _ = writeln!(stdout, "{text}");
            if out.passed {
                EXIT_OK
            } else {
                EXIT_FAILURE
            }
        }
        Err(f) => report_error(stderr, &f),
    }
}

fn report_error(stderr: &mut dyn Write, f: &Failure) -> i32 {
    let _ = writeln!(stderr, "{}", json!({ "error": f.message, "exit_code": f.code }));
    f.code
}

fn read_text(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn load_system(path: &Path) -> Result<QuadratureModel, Failure> {
    io::parse_system(&read_text(path)?).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn execute(cli: &Cli) -> Result<Outcome, Failure> {
    if let Some(t) = cli.tol {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Failure::usage(format!("--tol must be positive, got {t}")));
        }
    }
    match &cli.command {
        Command::CheckPr { system } => {
            let g = load_system(system)?;
            let r = check_physical_realizability(&g, cli.tol.unwrap_or(PR_TOL));
            Ok(Outcome {
                value: json!({
                    "passed": r.passed,
                    "tol": r.tol,
                    "state_residual": r.state,
                    "cross_residual": r.cross,
                    "output_residual": r.output,
                    "hurwitz": is_hurwitz(&g.a, crate::numerics::default_hurwitz_tol(&g.a)),
                }),
                passed: r.passed,
            })
        }
        Command::Gramians { system } => {
            let g = load_system(system)?;
            let gp = gramians(&g)?;
            let class = classify_codiagonalizability(&gp, cli.tol.unwrap_or(CLASSIFY_TOL));
            Ok(Outcome::ok(json!({
                "P": matrix_to_rows(&gp.p),
                "Q": matrix_to_rows(&gp.q),
                "sigma_p": gp.sigma_p,
                "sigma_q": gp.sigma_q,
                "hankel": gp.hankel,
                "codiagonalizability": format!("{class:?}"),
            })))
        }
        Command::Williamson { matrix } => {
            let p = io::parse_matrix(&read_text(matrix)?)
                .map_err(|e| Failure::usage(format!("{}: {e}", matrix.display())))?;
            let w = williamson(&p)?;
            Ok(Outcome::ok(json!({
                "T": matrix_to_rows(&w.transform.matrix),
                "sigma": w.sigma,
                "symplectic_residual": w.transform.residual,
            })))
        }
        Command::QuasiBalance { system } => {
            let g = load_system(system)?;
            let qb = quasi_balance_with_tol(&g, cli.tol.unwrap_or(CLASSIFY_TOL))?;
            let groups: Vec<Value> =
                qb.groups.iter().map(|h| json!({ "value": h.value, "modes": h.modes })).collect();
            Ok(Outcome::ok(json!({
                "model": system_to_json(&qb.model),
                "T": matrix_to_rows(&qb.transform.matrix),
                "sigma_p": qb.sigma_p,
                "sigma_q": qb.sigma_q,
                "sigma_b": qb.sigma_b,
                "groups": groups,
                "boundaries": qb.boundaries(),
                "nu": qb.nu(),
            })))
        }
        Command::Reduce(a) => {
            let g = load_system(&a.system)?;
            let target = match (a.keep, a.budget) {
                (Some(k), _) => ReductionTarget::Keep(k),
                (None, Some(e)) => ReductionTarget::Budget(e),
                (None, None) => return Err(Failure::usage("one of --keep or --budget is required")),
            };
            let r = reduce(&g, target)?;
            Ok(Outcome::ok(io::report_to_json(&r)))
        }
        Command::CavityExample(a) => {
            let spec = CavityNetworkSpec::new(a.n, a.gamma)?;
            let b = run_example(&spec, a.keep, Some(&a.out))?;
            Ok(Outcome::ok(json!({
                "out": a.out.display().to_string(),
                "files": ["report.json", "response_full.csv", "response_reduced.csv"],
                "bound": b.report.bound,
                "exact_error": b.report.exact_error,
                "hankel": b.report.hankel,
            })))
        }
        Command::FreqResponse(a) => {
            if !(a.wmin > 0.0 && a.wmax >= a.wmin && a.points >= 1) {
                return Err(Failure::usage("need 0 < wmin <= wmax and points >= 1"));
            }
            let g = load_system(&a.system)?;
            let resp = frequency_response(&g, &log_grid(a.wmin, a.wmax, a.points))?;
            if let Some(path) = &a.out {
                io::write_response_csv(path, &resp)?;
                return Ok(Outcome::ok(json!({ "out": path.display().to_string(), "points": a.points })));
            }
            Ok(Outcome::ok(json!({
                "omega_rad_s": resp.omegas,
                "magnitude": resp.magnitude,
                "phase_rad": resp.phase,
            })))
        }
        Command::RandomSystem(a) => {
            let (slh, g) = if a.passive {
                random_cp_system(a.n, a.m, a.seed, a.stable)?
            } else {
                random_pr_system(a.n, a.m, a.seed, a.stable)?
            };
            let value = if a.slh {
                serde_json::to_value(SlhJson::from(&slh)).map_err(Failure::usage)?
            } else {
                system_to_json(&g.certify(cli.tol.unwrap_or(PR_TOL)))
            };
            Ok(Outcome::ok(value))
        }
    }
}
