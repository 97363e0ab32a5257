mod output;
mod verify;

use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use extremal_core::analytic::khavinson_witness;
use extremal_core::closed_forms::endpoint_value;
use extremal_core::conformal::{boundary_samples, r_general, ArcMapParams};
use extremal_core::hankel::{estimate_value, lambda_estimate, BoundKind, BoundsReport, DEFAULT_SCHEDULE, DEFAULT_TOL};
use extremal_core::toeplitz::{best_fejer_bound, build_tto, tto_norm, DEFAULT_ALPHA_GRID};
use extremal_core::{ArcSet, Error};

use output::{emit, round, CliError, Format};

/// Largest truncated Toeplitz dimension assembled densely by `lambda`.
const TTO_LIMIT: i64 = 512;

#[derive(Parser)]
#[command(name = "extremal", version, about = "Extremal problems for characteristic functions on the circle")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Bounds and estimates for Λ_n(E)
    Lambda(LambdaArgs),
    /// Run a verification suite
    Verify(verify::VerifyArgs),
    /// Near-extremal witness for n = 0
    Witness(WitnessArgs),
    /// Boundary samples of the arc conformal map
    Conformal(ConformalArgs),
    /// Λ_n of the centered arc (−α, α)
    RGeneral(RGeneralArgs),
}

#[derive(Args, Clone)]
pub struct SetArgs {
    /// Arc list, e.g. `0:1.5,2:3pi/2`
    #[arg(long, allow_hyphen_values = true, conflicts_with = "set_file")]
    pub arcs: Option<String>,
    /// File holding an arc list or a JSON array of [start, end] pairs
    #[arg(long)]
    pub set_file: Option<PathBuf>,
}

impl SetArgs {
    pub fn load(&self) -> Result<Option<ArcSet>, CliError> {
        let text = match (&self.arcs, &self.set_file) {
            (Some(a), _) => a.clone(),
            (None, Some(path)) => std::fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?,
            (None, None) => return Ok(None),
        };
        text.parse::<ArcSet>().map(Some).map_err(CliError::from)
    }

    pub fn require(&self) -> Result<ArcSet, CliError> {
        self.load()?
            .ok_or_else(|| CliError::Usage("one of --arcs or --set-file is required".into()))
    }
}

#[derive(Args, Clone)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write to this file instead of standard output
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
struct LambdaArgs {
    #[command(flatten)]
    set: SetArgs,
    #[arg(long, allow_hyphen_values = true)]
    n: i64,
    /// Increasing section sizes, comma separated
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_SCHEDULE)]
    schedule: Vec<usize>,
    /// Number of Fejér kernel translates
    #[arg(long, default_value_t = DEFAULT_ALPHA_GRID)]
    grid: usize,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct WitnessArgs {
    #[command(flatten)]
    set: SetArgs,
    #[arg(long)]
    eps: f64,
    #[arg(long, default_value_t = 1 << 16)]
    grid: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct ConformalArgs {
    #[arg(long)]
    alpha: f64,
    #[arg(long, default_value_t = 1 << 16)]
    grid: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct RGeneralArgs {
    #[arg(long)]
    alpha: f64,
    #[arg(long, default_value_t = 1)]
    n: i64,
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_SCHEDULE)]
    schedule: Vec<usize>,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[command(flatten)]
    output: OutputArgs,
}

fn check_tol(tol: f64) -> Result<(), CliError> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(CliError::Usage(format!("--tol must be positive, got {tol}")))
    }
}

/// Adds Fejér, truncated Toeplitz and arc-majorization bounds to the Hankel report.
fn cmd_lambda(args: &LambdaArgs) -> Result<BoundsReport, CliError> {
    let set = args.set.require()?;
    check_tol(args.tol)?;
    let n = args.n;
    let mut report = lambda_estimate(&set, n, &args.schedule, args.tol)?;
    if n >= 1 && endpoint_value(set.measure(), n).is_none() {
        let (alpha, value) = best_fejer_bound(&set, n, args.grid)?;
        report.push(value, BoundKind::Lower, format!("fejer kernel at angle {}", round(alpha)));
        if n <= TTO_LIMIT {
            let norm = tto_norm(&build_tto(&set, n)?);
            report.push(norm, BoundKind::Lower, "truncated toeplitz norm");
        }
        if n >= 2 {
            let arc = ArcSet::centered_arc(0.5 * set.measure())?;
            let arc_report = lambda_estimate(&arc, n, &args.schedule, args.tol)?;
            report.push(
                estimate_value(&arc_report),
                BoundKind::Upper,
                "arc majorization (extrapolated centered arc)",
            );
            report.converged &= arc_report.converged;
        }
    }
    Ok(report)
}

#[derive(Serialize)]
struct WitnessReport {
    set: ArcSet,
    eps: f64,
    arc_count: usize,
    grid: usize,
    half_width: f64,
    half_height: f64,
    perimeter: f64,
    modulus: f64,
    complementary_modulus: f64,
    corner_preimages: Vec<f64>,
    l1_norm: f64,
    functional_re: f64,
    functional_im: f64,
}

fn cmd_witness(args: &WitnessArgs) -> Result<String, CliError> {
    let set = args.set.require()?;
    if !(args.eps > 0.0 && args.eps < 0.5) {
        return Err(CliError::Usage(format!("--eps must lie in (0, 1/2), got {}", args.eps)));
    }
    let w = khavinson_witness(&set, args.eps, args.grid)?;
    match args.output.format {
        Format::Csv => output::csv_rows(
            ["t", "re", "im"],
            w.field.samples.iter().enumerate().map(|(j, s)| [w.field.angle(j), s.re, s.im]),
        ),
        Format::Json => output::json(&WitnessReport {
            set,
            eps: w.eps,
            arc_count: w.arc_count,
            grid: w.grid,
            half_width: round(w.half_width),
            half_height: round(w.half_height),
            perimeter: round(w.perimeter),
            modulus: round(w.modulus),
            complementary_modulus: round(w.complementary_modulus),
            corner_preimages: w.corner_preimages.iter().map(|&t| round(t)).collect(),
            l1_norm: round(w.l1_norm),
            functional_re: round(w.functional_value.re),
            functional_im: round(w.functional_value.im),
        }),
    }
}

#[derive(Serialize)]
struct ConformalReport {
    alpha: f64,
    beta: f64,
    r: f64,
    max_abs_defect: f64,
    samples: Vec<[f64; 4]>,
}

fn cmd_conformal(args: &ConformalArgs) -> Result<String, CliError> {
    if !(args.alpha > 0.0 && args.alpha < PI) {
        return Err(CliError::Usage(format!("--alpha must lie in (0, π), got {}", args.alpha)));
    }
    let params = ArcMapParams::new(args.alpha)?;
    let samples = boundary_samples(args.alpha, args.grid)?;
    match args.output.format {
        Format::Csv => output::csv_rows(
            ["t", "re_phi", "im_phi", "defect"],
            samples.iter().map(|s| [s.t, s.phi.re, s.phi.im, s.defect]),
        ),
        Format::Json => output::json(&ConformalReport {
            alpha: round(params.alpha),
            beta: round(params.beta),
            r: round(params.r),
            max_abs_defect: round(samples.iter().map(|s| s.defect.abs()).fold(0.0, f64::max)),
            samples: samples
                .iter()
                .map(|s| [s.t, s.phi.re, s.phi.im, s.defect].map(round))
                .collect(),
        }),
    }
}

fn report_text(report: &BoundsReport, format: Format) -> Result<String, CliError> {
    let rounded = report.rounded(output::DIGITS);
    Ok(match format {
        Format::Json => rounded.to_json()? + "\n",
        Format::Csv => rounded.to_csv()?,
    })
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Lambda(args) => {
            let report = cmd_lambda(&args)?;
            emit(&report_text(&report, args.output.format)?, args.output.out.as_deref())?;
            Ok(if report.converged { ExitCode::SUCCESS } else { ExitCode::from(3) })
        }
        Command::RGeneral(args) => {
            check_tol(args.tol)?;
            let report = r_general(args.alpha, args.n, &args.schedule, args.tol)?;
            emit(&report_text(&report, args.output.format)?, args.output.out.as_deref())?;
            Ok(if report.converged { ExitCode::SUCCESS } else { ExitCode::from(3) })
        }
        Command::Witness(args) => {
            emit(&cmd_witness(&args)?, args.output.out.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Conformal(args) => {
            emit(&cmd_conformal(&args)?, args.output.out.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify(args) => {
            let result = verify::run(&args)?;
            emit(&result.render(args.output.format)?, args.output.out.as_deref())?;
            Ok(if result.passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::NonFiniteAngle
            | Error::EmptyArc { .. }
            | Error::ArcTooLong { .. }
            | Error::Parse(_)
            | Error::InvalidArgument(_) => CliError::Usage(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}
