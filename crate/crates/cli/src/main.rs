//! comrand: channel capacities, common-randomness sweeps, protocol
//! simulation, and secure identification bounds from the command line.
//!
//! Exit codes: 0 success, 1 numerical failure, 2 validation failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use comrand_core::channel::{
    mimo_capacity, p_star, siso_capacity, waterfill, ChannelSpec, Convention, MimoChannelSpec,
    SisoChannelSpec,
};
use comrand_core::optimizer::{cr_capacity_detailed, OptimizerConfig};
use comrand_core::oracle::{brute_force_cr, bsc_family_bound, GridSpec};
use comrand_core::prob::{binary_source, AuxJoint, BinarySourceSpec, JointPmf};
use comrand_core::secureid::{secure_id_lower_bound, WiretapSpec, SECRECY_ASSUMPTION};
use comrand_core::sim::{run_simulation, scheme_sizes, ChannelMode, SchemeParams};
use comrand_core::CrError;

use comrand_cli::config::FileConfig;
use comrand_cli::grids::{id_powers, DEFAULT_MUS, STUDY_POWERS};
use comrand_cli::matrix::parse_matrix_arg;
use comrand_cli::output::{Cell, Row, Table};

/// Oracle search grid used for cross-check columns. Two refinement rounds
/// from a 0.02 step land within 1e-9 of the default 0.01 grid on the binary
/// family while costing a tenth as much.
const ORACLE_GRID: GridSpec = GridSpec { coarse_step: 0.02, refine_rounds: 2, refine_factor: 10 };

#[derive(Parser)]
#[command(
    name = "comrand",
    version,
    about = "Common randomness over Gaussian channels: capacities, solver sweeps, \
             protocol simulation, secure identification bounds"
)]
struct Cli {
    /// JSON config file; command line flags override its values
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Channel capacities and the saturation power
    #[command(subcommand)]
    Capacity(CapacityCmd),
    /// Common randomness capacity of the correlated binary source
    #[command(subcommand)]
    Crcap(CrcapCmd),
    /// Monte Carlo run of the one-shot agreement protocol
    Simulate(SimulateArgs),
    /// Secure identification lower bound over a wiretap pair
    Secureid(SecureidArgs),
}

#[derive(Subcommand)]
enum CapacityCmd {
    /// Scalar Gaussian link
    Siso(SisoArgs),
    /// MIMO link, waterfilling over eigenmodes
    Mimo(MimoArgs),
    /// Power at which the agreement rate saturates
    Pstar(PstarArgs),
}

#[derive(Subcommand)]
enum CrcapCmd {
    /// One (mu, power) point with an oracle cross-check
    Point(PointArgs),
    /// Grid sweep, one row per (mu, power)
    Sweep(SweepArgs),
}

#[derive(Args)]
struct OutArgs {
    /// Write results to this file instead of stdout
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Output format; files default to csv, stdout to a plain report
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Conv {
    Real,
    Complex,
}

impl Conv {
    fn core(self) -> Convention {
        match self {
            Conv::Real => Convention::Real,
            Conv::Complex => Convention::Complex,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Conv::Real => "real",
            Conv::Complex => "complex",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Ideal,
    Awgn,
}

#[derive(Args)]
struct SisoArgs {
    /// Transmit power budget
    #[arg(long, allow_negative_numbers = true)]
    power: Option<f64>,
    /// Noise variance (default 1)
    #[arg(long, allow_negative_numbers = true)]
    noise: Option<f64>,
    /// Signalling convention (default real)
    #[arg(long, value_enum)]
    convention: Option<Conv>,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct MimoArgs {
    /// Channel matrix: identityN or a matrix file
    #[arg(long, value_name = "MATRIX")]
    h: Option<String>,
    /// Total transmit power budget
    #[arg(long, allow_negative_numbers = true)]
    power: Option<f64>,
    /// Per-antenna noise variance (default 1)
    #[arg(long, allow_negative_numbers = true)]
    noise: Option<f64>,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct PstarArgs {
    /// Crossover probability of the source, in [0, 1]
    #[arg(long, allow_negative_numbers = true)]
    mu: Option<f64>,
    /// Noise variance (default 1)
    #[arg(long, allow_negative_numbers = true)]
    noise: Option<f64>,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct PointArgs {
    /// Crossover probability of the source
    #[arg(long, allow_negative_numbers = true)]
    mu: Option<f64>,
    /// Transmit power budget
    #[arg(long, allow_negative_numbers = true)]
    power: Option<f64>,
    /// Noise variance (default 1)
    #[arg(long, allow_negative_numbers = true)]
    noise: Option<f64>,
    /// Signalling convention for the rate budget (default real)
    #[arg(long, value_enum)]
    convention: Option<Conv>,
    /// Solver iterations per restart
    #[arg(long)]
    iters: Option<usize>,
    /// Independent solver restarts
    #[arg(long)]
    restarts: Option<usize>,
    /// Master seed
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct SweepArgs {
    /// Explicit sweep points: a file with one "mu power" pair per line
    #[arg(long, value_name = "FILE")]
    grid: Option<PathBuf>,
    /// Noise variance (default 1)
    #[arg(long, allow_negative_numbers = true)]
    noise: Option<f64>,
    /// Signalling convention for the rate budget (default real)
    #[arg(long, value_enum)]
    convention: Option<Conv>,
    /// Solver iterations per restart
    #[arg(long)]
    iters: Option<usize>,
    /// Independent solver restarts
    #[arg(long)]
    restarts: Option<usize>,
    /// Master seed
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct SimulateArgs {
    /// Crossover probability of the source (default 0.2)
    #[arg(long, allow_negative_numbers = true)]
    mu: Option<f64>,
    /// Block lengths, comma separated (default 8,12,16)
    #[arg(long = "n", value_delimiter = ',')]
    n: Vec<usize>,
    /// Typicality slack delta (default 0.06)
    #[arg(long, allow_negative_numbers = true)]
    delta: Option<f64>,
    /// Trials per block length (default 10000)
    #[arg(long)]
    trials: Option<usize>,
    /// Transmit power budget (default 10)
    #[arg(long, allow_negative_numbers = true)]
    power: Option<f64>,
    /// Noise variance (default 1)
    #[arg(long, allow_negative_numbers = true)]
    noise: Option<f64>,
    /// Index channel model (default awgn)
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    /// Master seed
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct SecureidArgs {
    /// Crossover probability of the source (default 0.2)
    #[arg(long, allow_negative_numbers = true)]
    mu: Option<f64>,
    /// Single power point; omit to sweep the 301-point default grid
    #[arg(long, allow_negative_numbers = true)]
    power: Option<f64>,
    /// Power grid file, one value per line
    #[arg(long, value_name = "FILE")]
    grid: Option<PathBuf>,
    /// Main link noise variance (default 1)
    #[arg(long, allow_negative_numbers = true)]
    noise: Option<f64>,
    /// Eavesdropper noise variance (default 2)
    #[arg(long, allow_negative_numbers = true)]
    eve_noise: Option<f64>,
    /// Solver iterations per restart
    #[arg(long)]
    iters: Option<usize>,
    /// Independent solver restarts
    #[arg(long)]
    restarts: Option<usize>,
    /// Master seed
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    out: OutArgs,
}

struct Fail {
    code: u8,
    msg: String,
}

impl From<CrError> for Fail {
    fn from(e: CrError) -> Fail {
        let code = if matches!(e, CrError::Numerical(_)) { 1 } else { 2 };
        Fail { code, msg: e.to_string() }
    }
}

fn invalid(msg: impl Into<String>) -> Fail {
    Fail { code: 2, msg: msg.into() }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("comrand: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Result<(), Fail> {
    let file = match &cli.config {
        Some(p) => FileConfig::load(p).map_err(invalid)?,
        None => FileConfig::default(),
    };
    match cli.command {
        Cmd::Capacity(CapacityCmd::Siso(a)) => cmd_siso(a, &file),
        Cmd::Capacity(CapacityCmd::Mimo(a)) => cmd_mimo(a, &file),
        Cmd::Capacity(CapacityCmd::Pstar(a)) => cmd_pstar(a, &file),
        Cmd::Crcap(CrcapCmd::Point(a)) => cmd_point(a, &file),
        Cmd::Crcap(CrcapCmd::Sweep(a)) => cmd_sweep(a, &file),
        Cmd::Simulate(a) => cmd_simulate(a, &file),
        Cmd::Secureid(a) => cmd_secureid(a, &file),
    }
}

// ---------------------------------------------------------------------------
// parameter resolution: flag, then config file, then default
// ---------------------------------------------------------------------------

fn need<T>(name: &str, flag: Option<T>, file: Option<T>) -> Result<T, Fail> {
    flag.or(file)
        .ok_or_else(|| invalid(format!("missing parameter: give --{name} or set \"{name}\" in the config file")))
}

fn resolve_conv(flag: Option<Conv>, file: &Option<String>, default: Conv) -> Result<Conv, Fail> {
    if let Some(c) = flag {
        return Ok(c);
    }
    match file.as_deref() {
        None => Ok(default),
        Some("real") => Ok(Conv::Real),
        Some("complex") => Ok(Conv::Complex),
        Some(other) => Err(invalid(format!("convention '{other}' is neither real nor complex"))),
    }
}

fn resolve_mode(flag: Option<Mode>, file: &Option<String>, default: Mode) -> Result<Mode, Fail> {
    if let Some(m) = flag {
        return Ok(m);
    }
    match file.as_deref() {
        None => Ok(default),
        Some("ideal") => Ok(Mode::Ideal),
        Some("awgn") => Ok(Mode::Awgn),
        Some(other) => Err(invalid(format!("mode '{other}' is neither ideal nor awgn"))),
    }
}

fn resolve_out(mut out: OutArgs, file: &FileConfig) -> Result<OutArgs, Fail> {
    if out.out.is_none() {
        out.out = file.out.as_ref().map(PathBuf::from);
    }
    if out.format.is_none() {
        out.format = match file.format.as_deref() {
            None => None,
            Some("csv") => Some(Format::Csv),
            Some("json") => Some(Format::Json),
            Some(other) => return Err(invalid(format!("format '{other}' is neither csv nor json"))),
        };
    }
    Ok(out)
}

fn resolve_solver(
    iters: Option<usize>,
    restarts: Option<usize>,
    seed: Option<u64>,
    file: &FileConfig,
) -> Result<OptimizerConfig, Fail> {
    let mut cfg = OptimizerConfig::default();
    if let Some(t) = iters.or(file.iters) {
        cfg.iterations = t;
    }
    if let Some(r) = restarts.or(file.restarts) {
        cfg.restarts = r;
    }
    if let Some(s) = seed.or(file.seed) {
        cfg.seed = s;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn solver_config_lines(cfg: &OptimizerConfig) -> Vec<(&'static str, String)> {
    vec![
        ("iters", cfg.iterations.to_string()),
        ("restarts", cfg.restarts.to_string()),
        ("seed", cfg.seed.to_string()),
    ]
}

fn oracle_config_line() -> (&'static str, String) {
    let g = ORACLE_GRID;
    ("oracle_grid", format!("step {} with {} x{} refinements", g.coarse_step, g.refine_rounds, g.refine_factor))
}

fn source_for(mu: f64) -> Result<JointPmf, CrError> {
    Ok(binary_source(BinarySourceSpec::new(mu)?))
}

/// Reads whitespace separated float rows from a grid file, checking the
/// column count. Blank lines and # comments are skipped.
fn parse_float_rows(path: &Path, cols: usize) -> Result<Vec<Vec<f64>>, Fail> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| invalid(format!("cannot read grid file {}: {e}", path.display())))?;
    let mut rows = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let vals: Result<Vec<f64>, _> = line.split_whitespace().map(str::parse::<f64>).collect();
        let vals = vals.map_err(|_| invalid(format!("grid line {}: bad number", idx + 1)))?;
        if vals.len() != cols {
            return Err(invalid(format!(
                "grid line {}: expected {cols} values, got {}",
                idx + 1,
                vals.len()
            )));
        }
        rows.push(vals);
    }
    if rows.is_empty() {
        return Err(invalid(format!("grid file {} has no rows", path.display())));
    }
    Ok(rows)
}

fn list_line(vals: &[f64]) -> String {
    vals.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

// ---------------------------------------------------------------------------
// output
// ---------------------------------------------------------------------------

/// Writes or prints the table. `human` is the plain stdout form; pass None
/// to fall back to CSV on stdout (the right default for multi-row sweeps).
fn emit(table: Table, out: &OutArgs, human: Option<String>) -> Result<(), Fail> {
    match (&out.out, out.format) {
        (Some(path), fmt) => {
            let body = match fmt.unwrap_or(Format::Csv) {
                Format::Csv => table.to_csv(),
                Format::Json => table.to_json(),
            };
            std::fs::write(path, body)
                .map_err(|e| invalid(format!("cannot write {}: {e}", path.display())))
        }
        (None, Some(Format::Csv)) => {
            print!("{}", table.to_csv());
            Ok(())
        }
        (None, Some(Format::Json)) => {
            print!("{}", table.to_json());
            Ok(())
        }
        (None, None) => {
            match human {
                Some(text) => print!("{text}"),
                None => print!("{}", table.to_csv()),
            }
            Ok(())
        }
    }
}

/// name = value lines for a single-row table.
fn key_value_report(table: &Table) -> String {
    let mut s = String::new();
    for (name, cell) in table.columns.iter().zip(&table.rows[0].cells) {
        let v = match cell {
            Cell::F(x) => format!("{x}"),
            Cell::Int(u) => u.to_string(),
            Cell::Flag(b) => b.to_string(),
            Cell::Text(t) => t.clone(),
            Cell::Empty => "none".into(),
        };
        s.push_str(&format!("{name} = {v}\n"));
    }
    s
}

// ---------------------------------------------------------------------------
// capacity
// ---------------------------------------------------------------------------

fn cmd_siso(args: SisoArgs, file: &FileConfig) -> Result<(), Fail> {
    let power = need("power", args.power, file.power)?;
    let noise = args.noise.or(file.noise).unwrap_or(1.0);
    let conv = resolve_conv(args.convention, &file.convention, Conv::Real)?;
    let value = siso_capacity(SisoChannelSpec::new(power, noise)?, conv.core());
    let table = Table {
        command: "capacity siso",
        config: vec![
            ("power", power.to_string()),
            ("noise", noise.to_string()),
            ("convention", conv.name().into()),
        ],
        columns: &["capacity_nats"],
        rows: vec![Row::ok(vec![Cell::F(value)])],
    };
    let human = key_value_report(&table);
    emit(table, &resolve_out(args.out, file)?, Some(human))
}

fn cmd_mimo(args: MimoArgs, file: &FileConfig) -> Result<(), Fail> {
    let h_arg = need("h", args.h, file.h.clone())?;
    let power = need("power", args.power, file.power)?;
    let noise = args.noise.or(file.noise).unwrap_or(1.0);
    let m = parse_matrix_arg(&h_arg).map_err(invalid)?;
    let spec = MimoChannelSpec::new(m.entries, m.rows, m.cols, power, noise)?;
    let value = mimo_capacity(&spec)?;
    let alloc = waterfill(&spec)?;

    let mut rows = Vec::new();
    for (l, (&sv, &p)) in alloc.singular_values.iter().zip(&alloc.powers).enumerate() {
        rows.push(Row::ok(vec![
            Cell::F(value),
            Cell::F(alloc.water_level),
            Cell::Int(l as u64 + 1),
            Cell::F(sv),
            Cell::F(p),
        ]));
    }
    let table = Table {
        command: "capacity mimo",
        config: vec![
            ("h", h_arg.clone()),
            ("power", power.to_string()),
            ("noise", noise.to_string()),
        ],
        columns: &["capacity_nats", "water_level", "mode", "singular_value", "mode_power"],
        rows,
    };
    let mut human = format!("capacity_nats = {value}\nwater_level = {}\n", alloc.water_level);
    for (l, (&sv, &p)) in alloc.singular_values.iter().zip(&alloc.powers).enumerate() {
        human.push_str(&format!("mode {}: singular_value = {sv}, power = {p}\n", l + 1));
    }
    emit(table, &resolve_out(args.out, file)?, Some(human))
}

fn cmd_pstar(args: PstarArgs, file: &FileConfig) -> Result<(), Fail> {
    let mu = need("mu", args.mu, file.mu)?;
    let noise = args.noise.or(file.noise).unwrap_or(1.0);
    let value = p_star(mu, noise)?;
    let table = Table {
        command: "capacity pstar",
        config: vec![("mu", mu.to_string()), ("noise", noise.to_string())],
        columns: &["mu", "noise", "p_star"],
        rows: vec![Row::ok(vec![Cell::F(mu), Cell::F(noise), Cell::F(value)])],
    };
    let human = format!("p_star = {value}\n");
    emit(table, &resolve_out(args.out, file)?, Some(human))
}

// ---------------------------------------------------------------------------
// crcap
// ---------------------------------------------------------------------------

const SWEEP_COLUMNS: &[&str] =
    &["mu", "power", "cr_capacity", "oracle_value", "bsc_bound", "nash_gap", "seed"];

struct SweepValues {
    cr: f64,
    oracle: f64,
    bsc: f64,
    gap: f64,
}

fn sweep_values(
    mu: f64,
    power: f64,
    noise: f64,
    conv: Conv,
    cfg: &OptimizerConfig,
) -> Result<SweepValues, CrError> {
    let source = source_for(mu)?;
    let spec = SisoChannelSpec::new(power, noise)?;
    let report = cr_capacity_detailed(&source, &ChannelSpec::Siso(spec), conv.core(), cfg)?;
    let (oracle, _) = brute_force_cr(&source, report.budget, &ORACLE_GRID)?;
    let bsc = bsc_family_bound(mu, report.budget)?;
    Ok(SweepValues { cr: report.value, oracle, bsc, gap: report.nash_gap })
}

fn sweep_row(mu: f64, power: f64, seed: u64, outcome: Result<SweepValues, CrError>) -> Row {
    match outcome {
        Ok(v) => Row::ok(vec![
            Cell::F(mu),
            Cell::F(power),
            Cell::F(v.cr),
            Cell::F(v.oracle),
            Cell::F(v.bsc),
            Cell::F(v.gap),
            Cell::Int(seed),
        ]),
        Err(e) => Row::flagged(
            vec![
                Cell::F(mu),
                Cell::F(power),
                Cell::F(f64::NAN),
                Cell::F(f64::NAN),
                Cell::F(f64::NAN),
                Cell::F(f64::NAN),
                Cell::Int(seed),
            ],
            format!("row (mu = {mu}, power = {power}) failed: {e}"),
        ),
    }
}

fn cmd_point(args: PointArgs, file: &FileConfig) -> Result<(), Fail> {
    let mu = need("mu", args.mu, file.mu)?;
    let power = need("power", args.power, file.power)?;
    let noise = args.noise.or(file.noise).unwrap_or(1.0);
    let conv = resolve_conv(args.convention, &file.convention, Conv::Real)?;
    let cfg = resolve_solver(args.iters, args.restarts, args.seed, file)?;

    let v = sweep_values(mu, power, noise, conv, &cfg)?;
    let mut config = vec![
        ("mu", mu.to_string()),
        ("power", power.to_string()),
        ("noise", noise.to_string()),
        ("convention", conv.name().to_string()),
    ];
    config.extend(solver_config_lines(&cfg));
    config.push(oracle_config_line());
    let table = Table {
        command: "crcap point",
        config,
        columns: SWEEP_COLUMNS,
        rows: vec![sweep_row(mu, power, cfg.seed, Ok(v))],
    };
    let human = key_value_report(&table);
    emit(table, &resolve_out(args.out, file)?, Some(human))
}

fn cmd_sweep(args: SweepArgs, file: &FileConfig) -> Result<(), Fail> {
    let noise = args.noise.or(file.noise).unwrap_or(1.0);
    let conv = resolve_conv(args.convention, &file.convention, Conv::Real)?;
    let cfg = resolve_solver(args.iters, args.restarts, args.seed, file)?;

    let grid_path = args.grid.or_else(|| file.grid.as_ref().map(PathBuf::from));
    let mut config = vec![("noise", noise.to_string()), ("convention", conv.name().to_string())];
    let points: Vec<(f64, f64)> = match &grid_path {
        Some(path) => {
            config.push(("grid", path.display().to_string()));
            parse_float_rows(path, 2)?.into_iter().map(|r| (r[0], r[1])).collect()
        }
        None => {
            let mus = file.mu_grid.clone().unwrap_or_else(|| DEFAULT_MUS.to_vec());
            let powers = file.power_grid.clone().unwrap_or_else(|| STUDY_POWERS.to_vec());
            config.push(("mu_grid", list_line(&mus)));
            config.push(("power_grid", list_line(&powers)));
            mus.iter().flat_map(|&m| powers.iter().map(move |&p| (m, p))).collect()
        }
    };
    config.extend(solver_config_lines(&cfg));
    config.push(oracle_config_line());

    let rows: Vec<Row> = points
        .par_iter()
        .map(|&(mu, power)| sweep_row(mu, power, cfg.seed, sweep_values(mu, power, noise, conv, &cfg)))
        .collect();
    let table = Table { command: "crcap sweep", config, columns: SWEEP_COLUMNS, rows };
    emit(table, &resolve_out(args.out, file)?, None)
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

fn cmd_simulate(args: SimulateArgs, file: &FileConfig) -> Result<(), Fail> {
    let mu = args.mu.or(file.mu).unwrap_or(0.2);
    let ns: Vec<usize> = if !args.n.is_empty() {
        args.n.clone()
    } else {
        file.n.clone().unwrap_or_else(|| vec![8, 12, 16])
    };
    let delta = args.delta.or(file.delta).unwrap_or(0.06);
    let trials = args.trials.or(file.trials).unwrap_or(10_000);
    let power = args.power.or(file.power).unwrap_or(10.0);
    let noise = args.noise.or(file.noise).unwrap_or(1.0);
    let mode = resolve_mode(args.mode, &file.mode, Mode::Awgn)?;
    let seed = args.seed.or(file.seed).unwrap_or(11);

    let source = source_for(mu)?;
    // the one auxiliary the front end builds: U = X embedded in the 3-letter
    // auxiliary alphabet
    let px = source.marginal_x();
    let aux = AuxJoint::new(
        vec![px.prob(0), 0.0, 0.0, 0.0, px.prob(1), 0.0],
        2,
    )?;
    let channel = SisoChannelSpec::new(power, noise)?;
    let core_mode = |m: Mode| match m {
        Mode::Ideal => ChannelMode::Ideal,
        Mode::Awgn => ChannelMode::AwgnRandomCode,
    };
    let params_for = |n: usize| SchemeParams {
        n,
        delta,
        aux: aux.clone(),
        source: source.clone(),
        channel,
        mode: core_mode(mode),
        trials,
        seed,
    };
    // surface bad block lengths before burning time on the runnable ones
    for &n in &ns {
        scheme_sizes(&params_for(n))?;
    }

    let rows: Vec<Row> = ns
        .par_iter()
        .map(|&n| {
            let rep = match run_simulation(&params_for(n)) {
                Ok(r) => r,
                Err(e) => {
                    return Row::flagged(
                        vec![Cell::Int(n as u64); 14],
                        format!("row (n = {n}) failed: {e}"),
                    );
                }
            };
            Row::ok(vec![
                Cell::Int(n as u64),
                Cell::F(delta),
                Cell::Int(rep.trials as u64),
                Cell::Int(rep.n1 as u64),
                Cell::Int(rep.n2 as u64),
                Cell::F(rep.est_mismatch),
                Cell::F(rep.mismatch_ci.0),
                Cell::F(rep.mismatch_ci.1),
                Cell::F(rep.est_entropy_rate),
                Cell::F(rep.channel_error_rate),
                Cell::F(rep.encoder_fallback_rate),
                Cell::F(rep.decode_ambiguity_rate),
                Cell::F(rep.decode_mismatch_rate),
                Cell::Int(seed),
            ])
        })
        .collect();

    let table = Table {
        command: "simulate",
        config: vec![
            ("mu", mu.to_string()),
            ("aux", "u_equals_x".into()),
            ("n", ns.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(",")),
            ("delta", delta.to_string()),
            ("trials", trials.to_string()),
            ("power", power.to_string()),
            ("noise", noise.to_string()),
            ("mode", if mode == Mode::Ideal { "ideal".into() } else { "awgn".into() }),
            ("seed", seed.to_string()),
        ],
        columns: &[
            "n",
            "delta",
            "trials",
            "n1",
            "n2",
            "est_mismatch",
            "ci_lo",
            "ci_hi",
            "est_entropy_rate",
            "channel_error_rate",
            "encoder_fallback_rate",
            "decode_ambiguity_rate",
            "decode_mismatch_rate",
            "seed",
        ],
        rows,
    };
    emit(table, &resolve_out(args.out, file)?, None)
}

// ---------------------------------------------------------------------------
// secureid
// ---------------------------------------------------------------------------

fn cmd_secureid(args: SecureidArgs, file: &FileConfig) -> Result<(), Fail> {
    if args.power.is_some() && args.grid.is_some() {
        return Err(invalid("give either --power or --grid, not both"));
    }
    let mu = args.mu.or(file.mu).unwrap_or(0.2);
    let noise = args.noise.or(file.noise).unwrap_or(1.0);
    let eve = args.eve_noise.or(file.eve_noise).unwrap_or(2.0);
    let cfg = resolve_solver(args.iters, args.restarts, args.seed, file)?;
    let source = source_for(mu)?;

    let grid_path = args.grid.or_else(|| file.grid.as_ref().map(PathBuf::from));
    let mut config = vec![
        ("mu", mu.to_string()),
        ("noise", noise.to_string()),
        ("eve_noise", eve.to_string()),
    ];
    let powers: Vec<f64> = match (args.power.or(file.power), &grid_path) {
        (Some(p), _) => {
            config.push(("power", p.to_string()));
            vec![p]
        }
        (None, Some(path)) => {
            config.push(("grid", path.display().to_string()));
            parse_float_rows(path, 1)?.into_iter().map(|r| r[0]).collect()
        }
        (None, None) => match &file.power_grid {
            Some(g) => {
                config.push(("power_grid", list_line(g)));
                g.clone()
            }
            None => {
                config.push(("power_grid", "0:0.01:3".into()));
                id_powers()
            }
        },
    };
    config.extend(solver_config_lines(&cfg));
    config.push(("assumption", SECRECY_ASSUMPTION.into()));

    let seed = cfg.seed;
    let rows: Vec<Row> = powers
        .par_iter()
        .map(|&p| {
            let outcome = WiretapSpec::new(p, noise, eve)
                .and_then(|w| secure_id_lower_bound(&source, &w, &cfg).map(|b| (w, b)));
            match outcome {
                Ok((w, b)) => {
                    let baseline = siso_capacity(w.main_link(), Convention::Real);
                    let (bound, gain) = match b.bound {
                        Some(v) => (Cell::F(v), Cell::F((v - baseline).max(0.0))),
                        None => (Cell::Empty, Cell::Empty),
                    };
                    Row::ok(vec![
                        Cell::F(p),
                        bound,
                        Cell::F(baseline),
                        gain,
                        Cell::Flag(b.applicable),
                        Cell::Int(seed),
                    ])
                }
                Err(e) => Row::flagged(
                    vec![
                        Cell::F(p),
                        Cell::Empty,
                        Cell::F(f64::NAN),
                        Cell::Empty,
                        Cell::Flag(false),
                        Cell::Int(seed),
                    ],
                    format!("row (power = {p}) failed: {e}"),
                ),
            }
        })
        .collect();

    let table = Table {
        command: "secureid",
        config,
        columns: &["power", "cr_bound", "randomized_encoding_capacity", "gain", "applicable", "seed"],
        rows,
    };
    let human = if table.rows.len() == 1 { Some(key_value_report(&table)) } else { None };
    emit(table, &resolve_out(args.out, file)?, human)
}
