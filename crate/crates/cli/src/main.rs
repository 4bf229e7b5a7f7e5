//! `angulab`: run uncertainty-relation scenarios and sweeps from the shell.
//!
//! Exit codes: 0 when the run finished (whatever the verdicts), 1 for a bad
//! config or command line, 2 when a computation produced a non-finite value.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use angulab::scenario::{
    emit_schema, parse_range, parse_relations, run_scenario, run_sweep, to_csv, validate_config, OutputFormat,
    ScenarioConfig, ScenarioFamily, SweepAxis, SweepConfig, SweepPlan,
};
use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "angulab", version, about = "Check L_z / azimuthal-angle uncertainty relations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate relations on one state.
    Scenario(ScenarioArgs),
    /// Evaluate relations over a parameter range or a batch of random states.
    Sweep(SweepArgs),
    /// Check a config file and print what is wrong with it.
    Validate {
        path: PathBuf,
    },
    /// Print the JSON schema for configs and reports.
    Schema,
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// scr, qtp, sphere or custom; optional with --config.
    family: Option<String>,
    /// JSON config file; flags given alongside override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Moment of inertia; defaults to 1 for qtp.
    #[arg(long = "J")]
    inertia: Option<f64>,
    /// Angular frequency; defaults to 1 for qtp.
    #[arg(long)]
    omega: Option<f64>,
    #[arg(long)]
    hbar: Option<f64>,
    /// State document with explicit coefficients.
    #[arg(long)]
    coeffs: Option<PathBuf>,
    /// Comma-separated relation names.
    #[arg(long)]
    relations: Option<String>,
    /// Comma-separated observables (default Lz,Phi).
    #[arg(long)]
    observables: Option<String>,
    /// Recompute everything on the quadrature oracle as well.
    #[arg(long)]
    oracle: bool,
    /// json or csv.
    #[arg(long)]
    format: Option<String>,
    /// Points on each one-dimensional oracle grid.
    #[arg(long)]
    resolution: Option<usize>,
}

#[derive(Debug, Args)]
struct ScenarioArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long, allow_negative_numbers = true)]
    m: Option<i32>,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    l: Option<u32>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Value or inclusive range `a..b`.
    #[arg(long, allow_hyphen_values = true)]
    m: Option<String>,
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    l: Option<String>,
    /// Number of random states instead of a parameter range.
    #[arg(long)]
    random: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

fn base_config(common: &CommonArgs) -> Result<ScenarioConfig> {
    let mut cfg = match &common.config {
        Some(path) => ScenarioConfig::load(path).with_context(|| format!("reading {}", path.display()))?,
        None => {
            let family: ScenarioFamily = common.family.as_deref().context("a family or --config is required")?.parse()?;
            let mut cfg = ScenarioConfig::new(family, vec![]);
            if family == ScenarioFamily::Qtp && common.coeffs.is_none() {
                cfg.parameters.inertia = Some(1.0);
                cfg.parameters.omega = Some(1.0);
            }
            cfg
        }
    };
    if common.config.is_some() {
        if let Some(f) = &common.family {
            cfg.family = f.parse()?;
        }
    }
    let p = &mut cfg.parameters;
    p.inertia = common.inertia.or(p.inertia);
    p.omega = common.omega.or(p.omega);
    p.hbar = common.hbar.or(p.hbar);
    if common.coeffs.is_some() {
        p.coeffs = common.coeffs.clone();
    }
    if let Some(r) = &common.relations {
        cfg.relations = parse_relations(r)?;
    }
    if cfg.relations.is_empty() {
        cfg.relations = parse_relations("moments")?;
    }
    if let Some(o) = &common.observables {
        cfg.observables = o.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect();
    }
    cfg.oracle |= common.oracle;
    if let Some(f) = &common.format {
        cfg.format = f.parse()?;
    }
    cfg.resolution = common.resolution.or(cfg.resolution);
    Ok(cfg)
}

fn scenario(args: &ScenarioArgs) -> Result<()> {
    let mut cfg = base_config(&args.common)?;
    cfg.parameters.m = args.m.or(cfg.parameters.m);
    cfg.parameters.n = args.n.or(cfg.parameters.n);
    cfg.parameters.l = args.l.or(cfg.parameters.l);
    let report = run_scenario(&cfg)?;
    match cfg.format {
        OutputFormat::Json => println!("{}", report.to_json()?),
        OutputFormat::Csv => print!("{}", to_csv(std::slice::from_ref(&report))?),
    }
    Ok(())
}

fn sweep(args: &SweepArgs) -> Result<()> {
    let mut cfg = base_config(&args.common)?;
    let mut given = Vec::new();
    for (axis, text) in [(SweepAxis::M, &args.m), (SweepAxis::N, &args.n), (SweepAxis::L, &args.l)] {
        let Some(text) = text else { continue };
        let (start, end) = parse_range(text)?;
        let value = i32::try_from(start).context("parameter out of range")?;
        let unsigned = || u32::try_from(value).context("n and l must be non-negative");
        match axis {
            SweepAxis::M => cfg.parameters.m = Some(value),
            SweepAxis::N => cfg.parameters.n = Some(unsigned()?),
            SweepAxis::L => cfg.parameters.l = Some(unsigned()?),
        }
        given.push((axis, start, end));
    }
    let ranged: Vec<_> = given.iter().copied().filter(|(_, s, e)| s != e).collect();
    let plan = match (args.random, ranged.as_slice(), given.as_slice()) {
        (_, [_, _, ..], _) => bail!("only one parameter can be swept at a time"),
        (Some(_), [_], _) => bail!("--random cannot be combined with a parameter range"),
        (Some(count), [], _) => SweepPlan::Random { count, seed: args.seed },
        (None, [(axis, start, end)], _) | (None, [], [(axis, start, end)]) => {
            SweepPlan::Range { axis: *axis, start: *start, end: *end }
        }
        (None, [], _) => bail!("sweep needs one of --m, --n or --l as a range, or --random"),
    };
    let report = run_sweep(&SweepConfig { base: cfg.clone(), plan, jobs: args.jobs })?;
    match cfg.format {
        OutputFormat::Json => println!("{}", report.to_json()?),
        OutputFormat::Csv => print!("{}", to_csv(&report.entries)?),
    }
    Ok(())
}

fn validate(path: &Path) -> Result<bool> {
    let diagnostics = validate_config(path).with_context(|| format!("reading {}", path.display()))?;
    for d in &diagnostics {
        eprintln!("{}: {d}", path.display());
    }
    if diagnostics.is_empty() {
        println!("{}: ok", path.display());
    }
    Ok(diagnostics.is_empty())
}

fn exit_code(err: &anyhow::Error) -> u8 {
    use angulab::Error;
    match err.downcast_ref::<Error>() {
        Some(
            Error::NonFinite(_)
            | Error::Range(_)
            | Error::Domain(_)
            | Error::NonHermitian(_)
            | Error::LengthMismatch { .. }
            | Error::Precondition(_),
        ) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let outcome = match &cli.command {
        Command::Scenario(args) => scenario(args).map(|_| true),
        Command::Sweep(args) => sweep(args).map(|_| true),
        Command::Validate { path } => validate(path),
        Command::Schema => serde_json::to_string_pretty(&emit_schema())
            .map(|s| println!("{s}"))
            .map(|_| true)
            .map_err(Into::into),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
