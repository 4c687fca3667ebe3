//! Command-line front end: state admissibility checks, matrix export,
//! hyperbolicity window queries, current-vortex sheet stability verdicts,
//! grid sweeps over jump strength and field twist, and randomized
//! self-verification of the quasilinear form against the conservative system.
//!
//! Exit codes: 0 success or stable, 1 check failed or unstable, 2 invalid
//! input or inadmissible state, 3 internal numerical failure. Errors are
//! reported as a one-line JSON object on standard error. Set
//! RMHD_LOG={quiet,info,debug} to control diagnostics; all diagnostics go to
//! standard error so payload output stays byte-deterministic.

use std::fs;
use std::io::{self, Read, Write};

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::{debug, info};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use rmhd::conservative::{
    draw_constrained_derivatives, equivalence_residual, quasilinear_jacobians, ResidualReport,
    RESIDUAL_TOL,
};
use rmhd::cvs::{stability_margin, sweep_pair, SheetSide, DEFAULT_DET_EPS};
use rmhd::dump::QuadrupleDump;
use rmhd::error::Error;
use rmhd::sampling::{admissible_state, trial_seed};
use rmhd::state::PrimitiveState;
use rmhd::sym_primary::build_quadruple;
use rmhd::sym_secondary::{build_secondary, window_bound};

#[derive(Parser)]
#[command(name = "rmhd", version, about = "Symmetric formulations of ideal relativistic MHD and planar current-vortex sheet stability", disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a primitive state against the pointwise admissibility
    /// inequalities and print the report.
    CheckState(CheckStateArgs),
    /// Export the symmetric matrix quadruple of a state as JSON or CSV.
    Matrices(MatricesArgs),
    /// Print the hyperbolicity window bound of a state, optionally testing
    /// a family parameter against it.
    Window(WindowArgs),
    /// Evaluate the linear stability of a planar current-vortex sheet given
    /// as a {"plus": .., "minus": ..} state pair.
    Cvs(CvsArgs),
    /// Sweep the stability margin over a grid of tangential velocity jumps
    /// and field twist angles derived from an input pair.
    Sweep(SweepArgs),
    /// Self-verify the quasilinear form against finite-difference Jacobians
    /// of the conservative system on random admissible states.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct IoArgs {
    /// Input path, or - for standard input.
    #[arg(long, default_value = "-")]
    input: String,
    /// Output path, or - for standard output.
    #[arg(long, default_value = "-")]
    output: String,
}

#[derive(Args)]
struct CheckStateArgs {
    #[command(flatten)]
    io: IoArgs,
}

#[derive(Args)]
struct MatricesArgs {
    #[command(flatten)]
    io: IoArgs,
    /// Family parameter of the alternative symmetrizer; omitted selects the
    /// base symmetric form.
    #[arg(long)]
    lambda: Option<f64>,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct WindowArgs {
    #[command(flatten)]
    io: IoArgs,
    /// Family parameter to test against the window bound.
    #[arg(long)]
    lambda: Option<f64>,
}

#[derive(Args)]
struct CvsArgs {
    #[command(flatten)]
    io: IoArgs,
    /// Nondegeneracy threshold on the tangential-field determinant.
    #[arg(long, default_value_t = DEFAULT_DET_EPS)]
    eps: f64,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    io: IoArgs,
    /// Grid specification dv_min:dv_max:n,dphi_min:dphi_max:m.
    #[arg(long)]
    grid: String,
    /// Nondegeneracy threshold on the tangential-field determinant.
    #[arg(long, default_value_t = DEFAULT_DET_EPS)]
    eps: f64,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args)]
struct VerifyArgs {
    /// Output path, or - for standard output.
    #[arg(long, default_value = "-")]
    output: String,
    /// Seed determining every sampled state and derivative draw.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of independent state/derivative trials.
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    /// Family parameter as a fraction of each sampled state's window bound,
    /// in (-1, 1); omitted verifies the base symmetric form.
    #[arg(long)]
    lambda: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

enum Failure {
    Input(String),
    Numerical(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Input(_) => 2,
            Failure::Numerical(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Numerical(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        match err {
            Error::FiniteDifferenceUnstable { .. } => Failure::Numerical(err.to_string()),
            _ => Failure::Input(err.to_string()),
        }
    }
}

fn main() {
    init_logging();
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(failure) => {
            let line = serde_json::json!({"error": failure.message(), "code": failure.code()});
            eprintln!("{line}");
            failure.code()
        }
    };
    std::process::exit(code);
}

fn init_logging() {
    let level = match std::env::var("RMHD_LOG").as_deref() {
        Ok("info") => log::LevelFilter::Info,
        Ok("debug") => log::LevelFilter::Debug,
        _ => log::LevelFilter::Off,
    };
    env_logger::Builder::new().filter_level(level).init();
}

fn run(cli: Cli) -> Result<i32, Failure> {
    match cli.command {
        Command::CheckState(args) => cmd_check_state(args),
        Command::Matrices(args) => cmd_matrices(args),
        Command::Window(args) => cmd_window(args),
        Command::Cvs(args) => cmd_cvs(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Verify(args) => cmd_verify(args),
    }
}

fn read_input(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut buf = String::new();
        io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Failure::Input(format!("cannot read standard input: {e}")))?;
        Ok(buf)
    } else {
        fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {path}: {e}")))
    }
}

fn write_output(path: &str, text: &str) -> Result<(), Failure> {
    if path == "-" {
        let mut out = io::stdout().lock();
        out.write_all(text.as_bytes())
            .and_then(|_| out.flush())
            .map_err(|e| Failure::Input(format!("cannot write standard output: {e}")))
    } else {
        fs::write(path, text).map_err(|e| Failure::Input(format!("cannot write {path}: {e}")))
    }
}

fn parse_state(text: &str) -> Result<PrimitiveState, Failure> {
    serde_json::from_str(text)
        .map_err(|e| Failure::Input(format!("state does not match the expected schema: {e}")))
}

fn to_json_line<T: Serialize>(value: &T) -> Result<String, Failure> {
    let mut text = serde_json::to_string(value)
        .map_err(|e| Failure::Numerical(format!("cannot serialize output: {e}")))?;
    text.push('\n');
    Ok(text)
}

fn cmd_check_state(args: CheckStateArgs) -> Result<i32, Failure> {
    let st = parse_state(&read_input(&args.io.input)?)?;
    let report = st.check_hyperbolic();
    info!(
        "admissible = {}, speed = {}, cs2 = {}",
        report.admissible, report.speed, report.cs2
    );
    write_output(&args.io.output, &to_json_line(&report)?)?;
    Ok(if report.admissible { 0 } else { 1 })
}

fn cmd_matrices(args: MatricesArgs) -> Result<i32, Failure> {
    let st = parse_state(&read_input(&args.io.input)?)?;
    let (quad, lambda) = match args.lambda {
        None => (build_quadruple(&st)?, None),
        Some(lambda) => (build_secondary(&st, lambda)?.quadruple, Some(lambda)),
    };
    debug!("assembled quadruple, lambda = {lambda:?}");
    let dump = QuadrupleDump::new(&quad, lambda);
    let text = match args.format {
        Format::Json => dump.to_json(),
        Format::Csv => dump.to_csv(),
    };
    write_output(&args.io.output, &text)?;
    Ok(0)
}

#[derive(Serialize)]
struct WindowOut {
    window_bound: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    inside: Option<bool>,
}

fn cmd_window(args: WindowArgs) -> Result<i32, Failure> {
    let st = parse_state(&read_input(&args.io.input)?)?;
    let bound = window_bound(&st)?;
    let inside = args.lambda.map(|l| l.abs() < bound);
    info!("window bound m = {bound}");
    let out = WindowOut {
        window_bound: bound,
        lambda: args.lambda,
        inside,
    };
    write_output(&args.io.output, &to_json_line(&out)?)?;
    Ok(if inside == Some(false) { 1 } else { 0 })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PairJson {
    plus: PrimitiveState,
    minus: PrimitiveState,
}

fn read_pair(path: &str) -> Result<(SheetSide, SheetSide), Failure> {
    let pair: PairJson = serde_json::from_str(&read_input(path)?)
        .map_err(|e| Failure::Input(format!("sheet pair does not match the expected schema: {e}")))?;
    Ok((SheetSide::new(pair.plus)?, SheetSide::new(pair.minus)?))
}

fn cmd_cvs(args: CvsArgs) -> Result<i32, Failure> {
    let (plus, minus) = read_pair(&args.io.input)?;
    let report = stability_margin(&plus, &minus, args.eps)?;
    info!("G = {}, stable = {}", report.g, report.stable);
    write_output(&args.io.output, &to_json_line(&report)?)?;
    Ok(if report.stable { 0 } else { 1 })
}

#[derive(Clone, Copy)]
struct GridAxis {
    min: f64,
    max: f64,
    count: usize,
}

impl GridAxis {
    fn value(&self, i: usize) -> f64 {
        if self.count == 1 {
            self.min
        } else {
            self.min + (self.max - self.min) * i as f64 / (self.count - 1) as f64
        }
    }
}

fn parse_axis(part: &str) -> Option<GridAxis> {
    let mut it = part.split(':');
    let min: f64 = it.next()?.trim().parse().ok()?;
    let max: f64 = it.next()?.trim().parse().ok()?;
    let count: usize = it.next()?.trim().parse().ok()?;
    if it.next().is_some() || count == 0 || !min.is_finite() || !max.is_finite() {
        return None;
    }
    Some(GridAxis { min, max, count })
}

fn parse_grid(text: &str) -> Result<(GridAxis, GridAxis), Failure> {
    let err =
        || Failure::Input(format!("grid must look like dv_min:dv_max:n,dphi_min:dphi_max:m, got {text}"));
    let (a, b) = text.split_once(',').ok_or_else(err)?;
    match (parse_axis(a), parse_axis(b)) {
        (Some(dv), Some(dphi)) => Ok((dv, dphi)),
        _ => Err(err()),
    }
}

fn degenerate(err: &Error) -> bool {
    matches!(
        err,
        Error::DegenerateTangentialFields { .. }
            | Error::ZeroTangentialField { .. }
            | Error::SingularMap { .. }
    )
}

#[derive(Serialize)]
struct SweepRow {
    dv: f64,
    dphi: f64,
    #[serde(rename = "G")]
    g: f64,
    stable: bool,
}

fn sweep_cell(
    plus: &SheetSide,
    minus: &SheetSide,
    dv: f64,
    dphi: f64,
    eps: f64,
) -> Result<SweepRow, Failure> {
    let margin =
        sweep_pair(plus, minus, dv, dphi).and_then(|(p, m)| stability_margin(&p, &m, eps));
    match margin {
        Ok(report) => Ok(SweepRow {
            dv,
            dphi,
            g: report.g,
            stable: report.stable,
        }),
        Err(e) if degenerate(&e) => Ok(SweepRow {
            dv,
            dphi,
            g: f64::NAN,
            stable: false,
        }),
        Err(e) => Err(e.into()),
    }
}

fn cmd_sweep(args: SweepArgs) -> Result<i32, Failure> {
    let (dv_axis, dphi_axis) = parse_grid(&args.grid)?;
    let (plus, minus) = read_pair(&args.io.input)?;
    info!(
        "sweeping {} x {} grid points",
        dv_axis.count, dphi_axis.count
    );
    let rows: Vec<Result<Vec<SweepRow>, Failure>> = (0..dv_axis.count)
        .into_par_iter()
        .map(|i| {
            let dv = dv_axis.value(i);
            (0..dphi_axis.count)
                .map(|j| sweep_cell(&plus, &minus, dv, dphi_axis.value(j), args.eps))
                .collect()
        })
        .collect();

    let mut cells = Vec::with_capacity(dv_axis.count * dphi_axis.count);
    for row in rows {
        cells.extend(row?);
    }
    let text = match args.format {
        Format::Csv => {
            let mut out = String::from("dv,dphi,G,stable\n");
            for c in &cells {
                out.push_str(&format!(
                    "{:.16e},{:.16e},{:.16e},{}\n",
                    c.dv, c.dphi, c.g, c.stable
                ));
            }
            out
        }
        Format::Json => to_json_line(&cells)?,
    };
    write_output(&args.io.output, &text)?;
    Ok(0)
}

fn cmd_verify(args: VerifyArgs) -> Result<i32, Failure> {
    let fraction = args.lambda.unwrap_or(0.0);
    if !(fraction > -1.0 && fraction < 1.0) {
        return Err(Failure::Input(format!(
            "lambda fraction {fraction} must lie strictly inside (-1, 1)"
        )));
    }
    let results: Vec<Result<f64, Failure>> = (0..args.trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(args.seed, i as u64));
            let st = admissible_state(&mut rng);
            let quad = if fraction == 0.0 {
                build_quadruple(&st)?
            } else {
                let bound = window_bound(&st)?;
                build_secondary(&st, fraction * bound)?.quadruple
            };
            let jac = quasilinear_jacobians(&st)?;
            let derivs = draw_constrained_derivatives(&mut rng, 0.0);
            Ok(equivalence_residual(&quad, &jac, &derivs)?)
        })
        .collect();

    let mut max_residual = 0.0f64;
    let mut sum = 0.0;
    let mut failures = 0;
    for res in results {
        let r = res?;
        max_residual = max_residual.max(r);
        sum += r;
        if r > RESIDUAL_TOL {
            failures += 1;
        }
    }
    let report = ResidualReport {
        trials: args.trials,
        max_residual,
        mean_residual: if args.trials == 0 { 0.0 } else { sum / args.trials as f64 },
        failures,
    };
    info!(
        "max residual {} over {} trials, {} failures",
        report.max_residual, report.trials, report.failures
    );
    write_output(&args.output, &to_json_line(&report)?)?;
    Ok(if report.failures == 0 { 0 } else { 1 })
}
