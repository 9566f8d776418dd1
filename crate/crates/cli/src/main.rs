//! `qdel` — command-line laboratory for universal quantum deletion
//! machines: single-point evaluation, parameter sweeps, Gram-matrix
//! dumps, λ → 1/2 limit studies, and the acceptance self-test.

mod config;
mod emit;
mod report;
mod sweep;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use qdel_core::analysis::{closed_f3, closed_f4, evaluate};
use qdel_core::engine::Machine;
use qdel_core::machine::{check_feasible, realize_vectors, GramMatrix, MachineParams, MachineVector};
use qdel_core::tensor::{DensityOp, QubitState};
use qdel_core::tol;

use config::Config;
use emit::{fmt12, fmt12_complex, to_json_bytes};
use report::ReportJson;
use sweep::{OutputFormat, Point, SweepSpec, SweptParam};

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

#[derive(Parser)]
#[command(
    name = "qdel",
    about = "Simulate universal quantum deletion machines and verify their fidelity claims",
    version
)]
struct Cli {
    /// Plain `key = value` file supplying defaults for any flag.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate all fidelities at one parameter point.
    Eval(EvalArgs),
    /// Dump the machine-vector Gram matrix and its realization as JSON.
    Gram(GramArgs),
    /// Sweep one parameter and emit a CSV or JSON table.
    Sweep(SweepArgs),
    /// Study the lambda -> 1/2 limit along a decreasing epsilon ladder.
    Limit(LimitArgs),
    /// Run the acceptance suite (exit 1 on any failing check).
    Selftest,
}

/// Machine and input parameters shared by eval, sweep, and limit.
#[derive(Args, Clone, Default)]
struct PointArgs {
    /// Machine norm parameter lambda in [0, 1/2].
    #[arg(long)]
    lambda: Option<f64>,
    /// Initial-machine overlap Y >= 0 (default 0).
    #[arg(long)]
    y: Option<f64>,
    /// Standard-state amplitude m1 (default 1/sqrt2 when m1/m2 are omitted).
    /// The (m1, m2) pair is normalized before use.
    #[arg(long)]
    m1: Option<f64>,
    /// Real part of the standard-state amplitude m2.
    #[arg(long)]
    m2re: Option<f64>,
    /// Imaginary part of the standard-state amplitude m2.
    #[arg(long)]
    m2im: Option<f64>,
    /// Input weight alpha^2 in [0, 1] (default 0.5).
    #[arg(long)]
    alpha2: Option<f64>,
    /// Phase of beta in radians (default 0).
    #[arg(long = "beta-phase")]
    beta_phase: Option<f64>,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    point: PointArgs,
    /// Apply the transformer stage (classification refers to the
    /// selected machine type; both pipelines are always reported).
    #[arg(long)]
    transform: bool,
    /// Emit the fidelity report as JSON instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct GramArgs {
    /// Machine norm parameter lambda in [0, 1/2].
    #[arg(long)]
    lambda: Option<f64>,
    /// Initial-machine overlap Y >= 0 (default 0).
    #[arg(long)]
    y: Option<f64>,
    /// Write the JSON here instead of stdout.
    #[arg(long, value_name = "PATH")]
    dump: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    point: PointArgs,
    /// Parameter to sweep: lambda, alpha2, y, or beta_phase.
    #[arg(long)]
    param: Option<String>,
    #[arg(long)]
    from: Option<f64>,
    #[arg(long)]
    to: Option<f64>,
    /// Number of rows (>= 2), endpoints included.
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    transform: bool,
    /// Output format: csv (default) or json.
    #[arg(long)]
    format: Option<String>,
    /// Write the table here instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct LimitArgs {
    #[command(flatten)]
    point: PointArgs,
    /// Comma-separated decreasing positive epsilon ladder
    /// (default 1e-2,1e-3,1e-4).
    #[arg(long)]
    eps: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = match &cli.config {
        Some(path) => match Config::load(path) {
            Ok(cfg) => cfg,
            Err(err) => return invalid(err),
        },
        None => Config::default(),
    };
    let outcome = match cli.command {
        Command::Eval(args) => cmd_eval(&args, &config),
        Command::Gram(args) => cmd_gram(&args, &config),
        Command::Sweep(args) => cmd_sweep(&args, &config),
        Command::Limit(args) => cmd_limit(&args, &config),
        Command::Selftest => cmd_selftest(),
    };
    match outcome {
        Ok(code) => code,
        Err(err) => invalid(err),
    }
}

fn invalid(err: anyhow::Error) -> ExitCode {
    eprintln!("qdel: {err:#}");
    ExitCode::from(2)
}

/// Resolve the machine/input point from flags, config, and defaults.
fn resolve_point(args: &PointArgs, config: &Config) -> Result<Point> {
    let lambda = config
        .f64("lambda", args.lambda)?
        .ok_or_else(|| anyhow!("missing required parameter --lambda"))?;
    let y = config.f64("y", args.y)?.unwrap_or(0.0);
    let m1 = config.f64("m1", args.m1)?;
    let m2re = config.f64("m2re", args.m2re)?;
    let m2im = config.f64("m2im", args.m2im)?;
    let (m1, m2) = resolve_standard(m1, m2re, m2im)?;
    let alpha2 = config.f64("alpha2", args.alpha2)?.unwrap_or(0.5);
    let beta_phase = config.f64("beta_phase", args.beta_phase)?.unwrap_or(0.0);
    Ok(Point {
        lambda,
        y,
        m1,
        m2,
        alpha2,
        beta_phase,
    })
}

/// Normalize the (m1, m2) amplitudes. Omitting all three picks the
/// balanced standard state; otherwise unspecified members default to 0.
fn resolve_standard(
    m1: Option<f64>,
    m2re: Option<f64>,
    m2im: Option<f64>,
) -> Result<(f64, Complex64)> {
    if m1.is_none() && m2re.is_none() && m2im.is_none() {
        return Ok((FRAC_1_SQRT_2, Complex64::from(FRAC_1_SQRT_2)));
    }
    let m1 = m1.unwrap_or(0.0);
    let m2 = Complex64::new(m2re.unwrap_or(0.0), m2im.unwrap_or(0.0));
    let norm = (m1 * m1 + m2.norm_sqr()).sqrt();
    if !norm.is_finite() || norm < 1e-12 {
        bail!("standard state (m1, m2) must have nonzero norm");
    }
    Ok((m1 / norm, m2 / norm))
}

fn machine_for(point: &Point) -> Result<Machine> {
    let params = MachineParams::new(point.lambda, point.y, point.m1, point.m2)?;
    Ok(Machine::new(params)?)
}

fn cmd_eval(args: &EvalArgs, config: &Config) -> Result<ExitCode> {
    let point = resolve_point(&args.point, config)?;
    let transform = config.flag("transform", args.transform)?;
    let json = config.flag("json", args.json)?;
    let machine = machine_for(&point)?;
    let input = QubitState::from_alpha2(point.alpha2, point.beta_phase)?;
    let report = evaluate(&machine, &input, transform)?;

    if json {
        let bytes = to_json_bytes(&ReportJson::from_report(&report, transform))?;
        print!("{}", String::from_utf8(bytes)?);
        return Ok(ExitCode::SUCCESS);
    }

    println!(
        "parameters: lambda = {}  y = {}  m1 = {}  m2 = {}",
        fmt12(point.lambda),
        fmt12(point.y),
        fmt12(point.m1),
        fmt12_complex(point.m2)
    );
    println!(
        "input:      alpha2 = {}  beta_phase = {}  transform = {}",
        fmt12(point.alpha2),
        fmt12(point.beta_phase),
        transform
    );
    println!("machine dimension: {}", machine.basis().dim());
    println!();
    println!(
        "{:<4} {:<22} {:<22} {}",
        "", "numeric", "closed", "|diff|"
    );
    for (name, v) in report.values() {
        println!(
            "{:<4} {:<22} {:<22} {}",
            name,
            fmt12(v.numeric),
            fmt12(v.closed),
            fmt12(v.diff())
        );
    }
    println!(
        "classification ({}): {} ({})",
        if transform { "modified" } else { "conventional" },
        report.classification.classification,
        report.classification.note
    );

    let plain = machine.run(&input, false)?;
    println!();
    print_density("rho_1 (retained)", &plain.rho_retained);
    print_density("rho_2 (deleted)", &plain.rho_deleted);
    print_density("rho_3 (machine)", &plain.rho_machine);
    if transform {
        let transformed = machine.run(&input, true)?;
        print_density("rho'_1 (retained)", &transformed.rho_retained);
        print_density("rho'_2 (deleted)", &transformed.rho_deleted);
        print_density("rho'_3 (machine)", &transformed.rho_machine);
    }
    Ok(ExitCode::SUCCESS)
}

fn print_density(label: &str, rho: &DensityOp) {
    println!("{label}:");
    let n = rho.total_dim();
    for i in 0..n {
        let mut line = String::from("  ");
        for j in 0..n {
            if j > 0 {
                line.push_str("  ");
            }
            line.push_str(&fmt12_complex(rho.entry(i, j)));
        }
        println!("{line}");
    }
}

fn cmd_gram(args: &GramArgs, config: &Config) -> Result<ExitCode> {
    let lambda = config
        .f64("lambda", args.lambda)?
        .ok_or_else(|| anyhow!("missing required parameter --lambda"))?;
    let y = config.f64("y", args.y)?.unwrap_or(0.0);
    let dump = args
        .dump
        .clone()
        .or_else(|| config.string("dump", None).map(PathBuf::from));

    let gram = GramMatrix::from_lambda_y(lambda, y)?;
    let feasibility = check_feasible(&gram);
    if !feasibility.feasible() {
        bail!(
            "infeasible: 3Y^2 > 1-2*lambda (Gram min eigenvalue {})",
            fmt12(feasibility.min_eigenvalue)
        );
    }
    let basis = realize_vectors(&gram)?;

    #[derive(serde::Serialize)]
    struct GramJson {
        lambda: f64,
        y: f64,
        gram: Vec<f64>,
        vectors: Vectors,
        rank: usize,
    }
    #[derive(serde::Serialize)]
    #[allow(non_snake_case)]
    struct Vectors {
        A: Vec<f64>,
        A0: Vec<f64>,
        A1: Vec<f64>,
        B0: Vec<f64>,
        B1: Vec<f64>,
        C0: Vec<f64>,
        D0: Vec<f64>,
    }

    // Entries and realized vectors are real for real Y.
    let reals = |which: MachineVector| basis.vector(which).iter().map(|z| z.re).collect();
    let body = GramJson {
        lambda,
        y,
        gram: gram.entries().data().iter().map(|z| z.re).collect(),
        vectors: Vectors {
            A: reals(MachineVector::A),
            A0: reals(MachineVector::A0),
            A1: reals(MachineVector::A1),
            B0: reals(MachineVector::B0),
            B1: reals(MachineVector::B1),
            C0: reals(MachineVector::C0),
            D0: reals(MachineVector::D0),
        },
        rank: basis.dim(),
    };
    let bytes = to_json_bytes(&body)?;
    match dump {
        Some(path) => std::fs::write(&path, bytes)
            .with_context(|| format!("cannot write {}", path.display()))?,
        None => print!("{}", String::from_utf8(bytes)?),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_sweep(args: &SweepArgs, config: &Config) -> Result<ExitCode> {
    let param = config
        .string("param", args.param.clone())
        .ok_or_else(|| anyhow!("missing required parameter --param"))?;
    let param = SweptParam::parse(&param)?;
    // When lambda itself is swept, the fixed lambda is irrelevant; give
    // it a placeholder so resolution does not demand the flag.
    let mut point_args = args.point.clone();
    if param == SweptParam::Lambda && point_args.lambda.is_none() {
        point_args.lambda = Some(0.0);
    }
    let fixed = resolve_point(&point_args, config)?;
    let from = config
        .f64("from", args.from)?
        .ok_or_else(|| anyhow!("missing required parameter --from"))?;
    let to = config
        .f64("to", args.to)?
        .ok_or_else(|| anyhow!("missing required parameter --to"))?;
    let steps = config
        .usize("steps", args.steps)?
        .ok_or_else(|| anyhow!("missing required parameter --steps"))?;
    let transform = config.flag("transform", args.transform)?;
    let format = match config.string("format", args.format.clone()) {
        Some(name) => OutputFormat::parse(&name)?,
        None => OutputFormat::Csv,
    };
    let out = args
        .out
        .clone()
        .or_else(|| config.string("out", None).map(PathBuf::from));

    let spec = SweepSpec {
        param,
        from,
        to,
        steps,
        fixed,
        transform,
        format,
    };
    let rows = sweep::run_sweep(&spec)?;
    let bytes = match spec.format {
        OutputFormat::Csv => sweep::to_csv(&spec, &rows).into_bytes(),
        OutputFormat::Json => sweep::to_json(&spec, &rows, transform)?,
    };
    match out {
        Some(path) => std::fs::write(&path, bytes)
            .with_context(|| format!("cannot write {}", path.display()))?,
        None => print!("{}", String::from_utf8(bytes)?),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_limit(args: &LimitArgs, config: &Config) -> Result<ExitCode> {
    let mut point_args = args.point.clone();
    if point_args.lambda.is_none() {
        point_args.lambda = Some(0.5);
    }
    let point = resolve_point(&point_args, config)?;
    let eps_text = config
        .string("eps", args.eps.clone())
        .unwrap_or_else(|| String::from("1e-2,1e-3,1e-4"));
    let ladder: Vec<f64> = eps_text
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .with_context(|| format!("cannot parse epsilon `{s}`"))
        })
        .collect::<Result<_>>()?;
    if ladder.is_empty() {
        bail!("epsilon ladder is empty");
    }
    for window in ladder.windows(2) {
        if window[1] >= window[0] {
            bail!("epsilon ladder must be strictly decreasing");
        }
    }
    if ladder.iter().any(|&e| e <= 0.0 || e > 0.5) {
        bail!("epsilons must lie in (0, 0.5]");
    }

    let input = QubitState::from_alpha2(point.alpha2, point.beta_phase)?;
    let std_state = qdel_core::machine::standard_state(point.m1, point.m2)?;
    let f3_limit = closed_f3(input.alpha(), input.beta());
    let f4_limit = closed_f4(point.alpha2, point.beta_phase, 0.5, &std_state)?;

    println!(
        "limit lambda -> 1/2 at alpha2 = {}, beta_phase = {}, m1 = {}, m2 = {}",
        fmt12(point.alpha2),
        fmt12(point.beta_phase),
        fmt12(point.m1),
        fmt12_complex(point.m2)
    );
    println!(
        "{:<12} {:<22} {:<12} {:<22} {:<12}",
        "eps", "F3", "|F3-limit|", "F4", "|F4-limit|"
    );

    let sample_at = |lambda: f64| -> Result<(f64, f64)> {
        let machine = machine_for(&Point { lambda, ..point })?;
        let s = machine.fidelity_sample(&input)?;
        Ok((s.f3, s.f4))
    };

    let mut monotone = true;
    let mut prev = (f64::INFINITY, f64::INFINITY);
    for &eps in &ladder {
        let (f3, f4) = sample_at(0.5 - eps)?;
        let dev = ((f3 - f3_limit).abs(), (f4 - f4_limit).abs());
        println!(
            "{:<12} {:<22} {:<12} {:<22} {:<12}",
            format!("{eps:.0e}"),
            fmt12(f3),
            format!("{:.2e}", dev.0),
            fmt12(f4),
            format!("{:.2e}", dev.1)
        );
        monotone &= dev.0 <= prev.0 && dev.1 <= prev.1;
        prev = dev;
    }
    let (f3_exact, f4_exact) = sample_at(0.5)?;
    println!(
        "{:<12} {:<22} {:<12} {:<22} {:<12}",
        "exact",
        fmt12(f3_exact),
        format!("{:.2e}", (f3_exact - f3_limit).abs()),
        fmt12(f4_exact),
        format!("{:.2e}", (f4_exact - f4_limit).abs())
    );
    println!(
        "{:<12} {:<22} {:<12} {:<22}",
        "closed", fmt12(f3_limit), "", fmt12(f4_limit)
    );

    let exact_ok =
        (f3_exact - f3_limit).abs() < 1e-10 && (f4_exact - f4_limit).abs() < 1e-10;
    println!(
        "monotone convergence: {}",
        if monotone { "yes" } else { "NO" }
    );
    println!(
        "exact point matches closed limit: {}",
        if exact_ok { "yes" } else { "NO" }
    );
    if monotone && exact_ok {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(1))
    }
}

fn cmd_selftest() -> Result<ExitCode> {
    let quad_nodes = match std::env::var("QDEL_QUAD_NODES") {
        Ok(raw) => raw
            .parse::<usize>()
            .with_context(|| format!("QDEL_QUAD_NODES: cannot parse `{raw}`"))?,
        Err(_) => tol::DEFAULT_QUAD_NODES,
    };
    let report = qdel_core::selftest::run_selftest(quad_nodes)?;
    for c in &report.checks {
        println!(
            "[{}] {:<45} expected {} | observed {} | tol {:.1e}",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            c.expected,
            c.observed,
            c.tolerance
        );
    }
    for note in &report.notes {
        println!("note: {note}");
    }
    if report.all_pass() {
        println!("overall: PASS ({} checks)", report.checks.len());
        Ok(ExitCode::SUCCESS)
    } else {
        println!(
            "overall: FAIL ({} of {} checks failed)",
            report.failures(),
            report.checks.len()
        );
        Ok(ExitCode::from(1))
    }
}
