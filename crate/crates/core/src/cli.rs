//! Command-line front end behind the `swipt` binary.
//!
//! Exit codes: 0 success, 1 validation failure, 2 usage error, 3 resource or
//! budget error.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::analytic::{analytic_curve, fit_diversity_in_window};
use crate::error::Error;
use crate::figures::{self, DEFAULT_GRID};
use crate::model::{Placement, SystemConfig};
use crate::montecarlo::{McConfig, SweepRecord, estimate_outage, sweep};
use crate::schedule::Scheme;
use crate::validation::{self, ValidationOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

pub const CSV_HEADER: [&str; 12] = [
    "scheme",
    "M",
    "m",
    "R_bpcu",
    "eta",
    "snr_db",
    "user_rank",
    "analytic_po",
    "mc_po",
    "mc_stderr",
    "trials",
    "seed",
];

#[derive(Debug, Parser)]
#[command(name = "swipt", version, about = "Outage analysis of user scheduling with an energy-harvesting relay")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Monte Carlo (and closed-form, where available) outage over an SNR grid.
    Sweep(SweepArgs),
    /// Data and a gnuplot script for one of the seven evaluation figures.
    Figure(FigureArgs),
    /// Runs the acceptance checks and reports PASS/FAIL per criterion.
    Validate(ValidateArgs),
    /// Fits diversity orders on outage curves.
    Slope(SlopeArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PlacementKind {
    Iid,
    Disk,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Csv,
}

#[derive(Debug, Args)]
struct NetworkArgs {
    /// Number of user pairs M.
    #[arg(long, default_value_t = 3)]
    pairs: usize,
    /// Number of scheduled pairs m.
    #[arg(long, default_value_t = 1)]
    sched: usize,
    /// Target rate R in bits per channel use.
    #[arg(long, default_value_t = 2.0)]
    rate: f64,
    /// Energy harvesting efficiency.
    #[arg(long, default_value_t = 1.0)]
    eta: f64,
    #[arg(long, value_enum, default_value = "iid")]
    placement: PlacementKind,
    /// Disk radius in meters (disk placement only).
    #[arg(long, default_value_t = 2.0)]
    disk_radius: f64,
    /// Path-loss exponent (disk placement only).
    #[arg(long, default_value_t = 2.0)]
    pathloss_exp: f64,
}

impl NetworkArgs {
    fn config(&self) -> SystemConfig {
        let placement = match self.placement {
            PlacementKind::Iid => Placement::UnitExponential,
            PlacementKind::Disk => Placement::DiskPathLoss {
                radius: self.disk_radius,
                exponent: self.pathloss_exp,
            },
        };
        SystemConfig::new(self.pairs, self.sched, self.rate, self.eta, 1.0).with_placement(placement)
    }
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Monte Carlo trials; scientific notation such as 1e6 is accepted.
    #[arg(long, default_value = "1e6", value_parser = parse_trials)]
    trials: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Work partitions; results do not depend on this value.
    #[arg(long)]
    shards: Option<usize>,
}

impl RunArgs {
    fn mc(&self, scheme: Scheme) -> McConfig {
        let mc = McConfig::new(scheme, self.trials, self.seed);
        match self.shards {
            Some(s) => mc.with_shards(s),
            None => mc.with_shards(mc.shards.min(self.trials as usize)),
        }
    }
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// One or more schemes, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    scheme: Vec<Scheme>,
    #[command(flatten)]
    network: NetworkArgs,
    /// SNR grid `lo:hi:step` or a single value, in dB.
    #[arg(long, value_parser = parse_grid, conflicts_with = "power_db", required_unless_present = "power_db")]
    snr_db: Option<Grid>,
    /// Single transmit SNR in dB.
    #[arg(long)]
    power_db: Option<f64>,
    #[command(flatten)]
    run: RunArgs,
    /// Write the CSV here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Debug, Args)]
struct FigureArgs {
    /// Figure number, 1 to 7.
    id: u8,
    /// SNR grid `lo:hi:step` in dB (default 20:50:2.5).
    #[arg(long, value_parser = parse_grid)]
    snr_db: Option<Grid>,
    #[command(flatten)]
    run: RunArgs,
    /// Write the CSV here; the gnuplot script goes next to it as `.gp`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Explicit path for the gnuplot script.
    #[arg(long)]
    plot: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    /// Use 10^6 Monte Carlo trials instead of 10^7.
    #[arg(long)]
    quick: bool,
    /// Scale every closed-form value by (1 + x) before comparing; a
    /// sensitivity self-test that must make validation fail.
    #[arg(long, default_value_t = 0.0)]
    perturb_analytic: f64,
    #[arg(long, default_value_t = validation::DEFAULT_SEED)]
    seed: u64,
    /// Override the Monte Carlo trial count.
    #[arg(long, value_parser = parse_trials)]
    trials: Option<u64>,
}

#[derive(Debug, Args)]
struct SlopeArgs {
    /// One or more schemes, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    scheme: Vec<Scheme>,
    #[command(flatten)]
    network: NetworkArgs,
    /// Outage window `lo:hi` used for the fit.
    #[arg(long, default_value = "1e-6:1e-3", value_parser = parse_window)]
    window: (f64, f64),
    /// SNR grid `lo:hi:step` in dB.
    #[arg(long, default_value = "0:90:1", value_parser = parse_grid)]
    snr_db: Grid,
    /// Fit Monte Carlo curves instead of closed forms.
    #[arg(long)]
    mc: bool,
    #[command(flatten)]
    run: RunArgs,
}

/// An SNR grid in dB.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid(pub Vec<f64>);

fn parse_trials(s: &str) -> Result<u64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("`{s}` is not a number"))?;
    if !(v >= 1.0) || v.fract() != 0.0 || v > 1e15 {
        return Err(format!("trial count `{s}` must be a positive integer"));
    }
    Ok(v as u64)
}

/// Parses `lo:hi:step` (inclusive of `hi` up to rounding) or a single value.
pub fn parse_grid(s: &str) -> Result<Grid, String> {
    let parts: Vec<f64> = s
        .split(':')
        .map(|p| p.trim().parse::<f64>().map_err(|_| format!("`{p}` is not a number")))
        .collect::<Result<_, _>>()?;
    match parts.as_slice() {
        [x] if x.is_finite() => Ok(Grid(vec![*x])),
        [lo, hi, step] if lo.is_finite() && hi.is_finite() && *step > 0.0 && hi >= lo => {
            let n = ((hi - lo) / step + 1e-9).floor() as usize;
            if n > 100_000 {
                return Err("grid has more than 100000 points".into());
            }
            Ok(Grid((0..=n).map(|k| lo + k as f64 * step).collect()))
        }
        _ => Err(format!("`{s}` is not `lo:hi:step` with step > 0 and hi >= lo")),
    }
}

fn parse_window(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s.split_once(':').ok_or_else(|| format!("`{s}` is not `lo:hi`"))?;
    let lo: f64 = lo.trim().parse().map_err(|_| format!("`{lo}` is not a number"))?;
    let hi: f64 = hi.trim().parse().map_err(|_| format!("`{hi}` is not a number"))?;
    if !(lo > 0.0 && lo < hi && hi < 1.0) {
        return Err(format!("window `{s}` must satisfy 0 < lo < hi < 1"));
    }
    Ok((lo, hi))
}

/// Writes the header and one row per record.
pub fn write_records<W: Write>(w: W, records: &[SweepRecord]) -> csv::Result<()> {
    let mut wtr = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w);
    wtr.write_record(CSV_HEADER)?;
    for r in records {
        wtr.write_record([
            r.scheme.clone(),
            r.num_pairs.to_string(),
            r.num_scheduled.to_string(),
            r.rate.to_string(),
            r.eta.to_string(),
            r.snr_db.to_string(),
            r.user_rank.to_string(),
            r.analytic_po.map(|p| p.to_string()).unwrap_or_default(),
            r.mc_po.to_string(),
            r.mc_stderr.to_string(),
            r.trials.to_string(),
            r.seed.to_string(),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Config(_) | Error::Domain { .. } => EXIT_USAGE,
        Error::EnumerationLimit { .. } | Error::CancellationGuard { .. } | Error::Quadrature { .. } => EXIT_RESOURCE,
        Error::Fit(_) => EXIT_VALIDATION,
    }
}

/// Failure of a command, already mapped to an exit code.
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: exit_code(&e),
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure {
            code: EXIT_RESOURCE,
            message: format!("i/o error: {e}"),
        }
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure {
            code: EXIT_RESOURCE,
            message: format!("csv error: {e}"),
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Sweep(a) => cmd_sweep(a, stdout),
        Command::Figure(a) => cmd_figure(a, stdout, stderr),
        Command::Validate(a) => cmd_validate(a, stdout),
        Command::Slope(a) => cmd_slope(a, stdout),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

/// Entry point for the binary.
pub fn main() -> i32 {
    let stdout = io::stdout();
    let stderr = io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

fn emit(records: &[SweepRecord], out: Option<&Path>, stdout: &mut dyn Write) -> Result<(), Failure> {
    match out {
        Some(path) => write_records(BufWriter::new(File::create(path)?), records)?,
        None => write_records(stdout, records)?,
    }
    Ok(())
}

fn cmd_sweep(a: SweepArgs, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let Format::Csv = a.format;
    let cfg = a.network.config();
    cfg.validate()?;
    let grid = match (a.snr_db, a.power_db) {
        (Some(g), _) => g.0,
        (None, Some(p)) => vec![p],
        (None, None) => unreachable!("clap requires one of the two"),
    };
    let records = sweep(&cfg, &grid, &a.scheme, &a.run.mc(a.scheme[0]))?;
    emit(&records, a.out.as_deref(), stdout)?;
    Ok(EXIT_OK)
}

fn cmd_figure(a: FigureArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, Failure> {
    let spec = figures::figure(a.id)?;
    let Grid(grid) = a.snr_db.unwrap_or_else(|| {
        let (lo, hi, step) = DEFAULT_GRID;
        parse_grid(&format!("{lo}:{hi}:{step}")).expect("default grid parses")
    });
    let records = figures::run_figure(&spec, &grid, &a.run.mc(Scheme::MaxMin))?;
    emit(&records, a.out.as_deref(), stdout)?;
    let plot = a.plot.or_else(|| a.out.as_ref().map(|p| p.with_extension("gp")));
    match plot {
        Some(path) => {
            let csv_name = a
                .out
                .as_ref()
                .and_then(|p| p.file_name())
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_else(|| format!("figure{}.csv", a.id));
            std::fs::write(&path, figures::gnuplot_script(&spec, &records, &csv_name))?;
        }
        None => {
            writeln!(stderr, "note: pass --out or --plot to also write the gnuplot script")?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_validate(a: ValidateArgs, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let mut opts = if a.quick {
        ValidationOptions::quick()
    } else {
        ValidationOptions::full()
    };
    opts.seed = a.seed;
    opts.perturb_analytic = a.perturb_analytic;
    if let Some(t) = a.trials {
        opts.trials = t;
    }
    let mut all = true;
    for result in validation::run_all(&opts) {
        writeln!(stdout, "{result}")?;
        all &= result.passed;
    }
    writeln!(stdout, "{}", if all { "ALL PASS" } else { "VALIDATION FAILED" })?;
    Ok(if all { EXIT_OK } else { EXIT_VALIDATION })
}

fn cmd_slope(a: SlopeArgs, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let cfg = a.network.config();
    cfg.validate()?;
    let (lo, hi) = a.window;
    writeln!(stdout, "scheme,M,m,source,points,diversity")?;
    for &scheme in &a.scheme {
        // the weakest scheduled user sets the diversity for m > 1
        let rank = cfg.num_scheduled;
        let (curve, source) = if a.mc {
            let mut pts = Vec::with_capacity(a.snr_db.0.len());
            for &db in &a.snr_db.0 {
                let c = cfg.with_power_db(db);
                let est = estimate_outage(&c, &a.run.mc(scheme))?;
                pts.push((c.tx_power, est.rank(rank).map_or(est.p_hat, |r| r.0)));
            }
            (pts, "mc")
        } else {
            (analytic_curve(scheme, &cfg, rank, &a.snr_db.0)?, "analytic")
        };
        let points = curve.iter().filter(|&&(_, o)| o >= lo && o <= hi).count();
        let d = fit_diversity_in_window(&curve, lo, hi)?;
        writeln!(stdout, "{scheme},{},{},{source},{points},{d:.4}", cfg.num_pairs, cfg.num_scheduled)?;
    }
    Ok(EXIT_OK)
}
