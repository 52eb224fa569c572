//! Command-line pipeline and report writers: `analyze` sweeps the offset
//! grid, `montecarlo` replicates the assignment draw at one combination,
//! `neighborhood` replicates around it, `synth` writes controlled series,
//! and `summary` produces the full report.
//!
//! Report files are written atomically (temp file + rename in the target
//! directory), use `.` as the decimal separator regardless of locale, and are
//! byte-stable across runs and thread counts for a fixed seed.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::bell_estimator::{BellResult, EstimatorError};
use crate::dichotomizer::{u_matrix, DichotomizerError, TauTriple};
use crate::event_series::{
    base_times, parse_event_file, series_stats, EventSeries, Format, SeriesError, SeriesStats,
};
use crate::resampler::{
    monte_carlo_runs, neighborhood, summarize_runs, sweep_grid, MonteCarloSummary, ResampleError,
    Seed, SweepRow, TauGrid,
};
use crate::stats::{histogram, ks_normality_test, KsResult, StatsError};
use crate::synthgen::{generate, ProcessKind, ProcessSpec, SynthError};
use crate::Ms;

#[derive(Parser)]
#[command(
    name = "tbell",
    version,
    about = "Bell-type inequality tests on event-time series"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep the offset grid and write one estimate per combination to output1.txt
    Analyze(AnalyzeArgs),
    /// Replicate the random pair assignment at one combination; write output2.txt
    Montecarlo(MonteCarloArgs),
    /// Replicate at every valid ±delta shift of a combination
    Neighborhood(NeighborhoodArgs),
    /// Generate a synthetic event series file
    Synth(SynthArgs),
    /// Write the full report (input, sweep, Monte Carlo, normality) to summary.txt
    Summary(SummaryArgs),
}

#[derive(Args)]
struct InputArgs {
    /// Event series file
    #[arg(long)]
    input: PathBuf,
    /// File layout
    #[arg(long, value_enum, default_value_t = FormatArg::Cumulative)]
    format: FormatArg,
    /// Override the mean inter-event interval t_M (ms) instead of measuring it
    #[arg(long)]
    tm: Option<Ms>,
    /// Base-time stride as a multiple of t_M
    #[arg(long, default_value_t = 3)]
    multiplier: i64,
    /// Root seed for the random pair assignments
    #[arg(long, default_value_t = 12345)]
    seed: u64,
    /// Directory for report files
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct GridArgs {
    /// Window offsets (ms) applied to all three axes
    #[arg(long, value_delimiter = ',')]
    grid: Option<Vec<Ms>>,
    /// First-axis offsets (ms), overriding --grid
    #[arg(long, value_delimiter = ',')]
    grid1: Option<Vec<Ms>>,
    /// Second-axis offsets (ms), overriding --grid
    #[arg(long, value_delimiter = ',')]
    grid2: Option<Vec<Ms>>,
    /// Third-axis offsets (ms), overriding --grid
    #[arg(long, value_delimiter = ',')]
    grid3: Option<Vec<Ms>>,
    /// Reuse one assignment draw for every combination instead of one per combination
    #[arg(long)]
    shared_assignment: bool,
}

#[derive(Args)]
struct ComboArgs {
    /// First-axis offset (ms); give all three to skip the sweep argmax
    #[arg(long)]
    off1: Option<Ms>,
    /// Second-axis offset (ms)
    #[arg(long)]
    off2: Option<Ms>,
    /// Third-axis offset (ms)
    #[arg(long)]
    off3: Option<Ms>,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    grid: GridArgs,
}

#[derive(Args)]
struct MonteCarloArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    grid: GridArgs,
    #[command(flatten)]
    combo: ComboArgs,
    /// Number of assignment replicates
    #[arg(long, default_value_t = 10_000)]
    reps: u64,
    /// Histogram bins for the D distribution
    #[arg(long, default_value_t = 30)]
    bins: usize,
}

#[derive(Args)]
struct NeighborhoodArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    grid: GridArgs,
    #[command(flatten)]
    combo: ComboArgs,
    /// Shift (ms) applied as -delta/0/+delta on each axis
    #[arg(long, default_value_t = 20)]
    delta: Ms,
    /// Number of assignment replicates per triple
    #[arg(long, default_value_t = 10_000)]
    reps: u64,
}

#[derive(Args)]
struct SummaryArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    grid: GridArgs,
    /// Number of assignment replicates at the argmax combination
    #[arg(long, default_value_t = 10_000)]
    reps: u64,
}

#[derive(Args)]
struct SynthArgs {
    /// Process to generate
    #[arg(long, value_enum)]
    kind: KindArg,
    /// Record length in ms
    #[arg(long)]
    duration: Ms,
    /// Event rate per ms (poisson)
    #[arg(long)]
    rate: Option<f64>,
    /// Grid period in ms (periodic, jittered-periodic)
    #[arg(long)]
    period: Option<Ms>,
    /// Normal jitter sd in ms (jittered-periodic)
    #[arg(long, default_value_t = 0.0)]
    jitter_sd: f64,
    /// Gamma shape (gamma-renewal); defaults to a heartbeat-like 25
    #[arg(long)]
    shape: Option<f64>,
    /// Gamma scale in ms (gamma-renewal)
    #[arg(long)]
    scale: Option<f64>,
    /// Mean gap in ms (gamma-renewal alternative to --scale; default 829)
    #[arg(long)]
    mean: Option<f64>,
    /// Generator seed
    #[arg(long, default_value_t = 12345)]
    seed: u64,
    /// Directory for the output file
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Output file name
    #[arg(long, default_value = "synthetic.txt")]
    file: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Cumulative,
    Intervals,
    TwoColumn,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Cumulative => Format::Cumulative,
            FormatArg::Intervals => Format::Intervals,
            FormatArg::TwoColumn => Format::TwoColumn,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Poisson,
    Periodic,
    JitteredPeriodic,
    GammaRenewal,
}

/// Errors mapped to process exit codes: usage 2, unusable data 3, internal 4.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Data(_) => 3,
            CliError::Internal(_) => 4,
        }
    }
}

impl From<SeriesError> for CliError {
    fn from(e: SeriesError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<DichotomizerError> for CliError {
    fn from(e: DichotomizerError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<EstimatorError> for CliError {
    fn from(e: EstimatorError) -> Self {
        match e {
            EstimatorError::EmptySubsample(_) => CliError::Data(e.to_string()),
            // reachable only through a bug, never through bad input
            EstimatorError::LengthMismatch { .. } | EstimatorError::DomainError(..) => {
                CliError::Internal(e.to_string())
            }
        }
    }
}

impl From<ResampleError> for CliError {
    fn from(e: ResampleError) -> Self {
        match e {
            ResampleError::EmptyGrid { .. } | ResampleError::InvalidGrid { .. } => {
                CliError::Usage(e.to_string())
            }
            ResampleError::Window(w) => w.into(),
            ResampleError::Estimator(est) => est.into(),
        }
    }
}

impl From<StatsError> for CliError {
    fn from(e: StatsError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<SynthError> for CliError {
    fn from(e: SynthError) -> Self {
        match e {
            SynthError::InvalidSpec(_) => CliError::Usage(e.to_string()),
            SynthError::EmptyResult(_) => CliError::Data(e.to_string()),
        }
    }
}

pub fn run() -> ExitCode {
    match dispatch(Cli::parse().command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Analyze(a) => cmd_analyze(a),
        Command::Montecarlo(a) => cmd_montecarlo(a),
        Command::Neighborhood(a) => cmd_neighborhood(a),
        Command::Synth(a) => cmd_synth(a),
        Command::Summary(a) => cmd_summary(a),
    }
}

struct Loaded {
    series: EventSeries,
    stats: SeriesStats,
    t_m: Ms,
    tm_overridden: bool,
    base: Vec<Ms>,
    seed: Seed,
    multiplier: i64,
    out: PathBuf,
    input_path: PathBuf,
    format: FormatArg,
}

fn load(args: &InputArgs) -> Result<Loaded, CliError> {
    if args.multiplier < 1 {
        return Err(CliError::Usage("--multiplier must be at least 1".into()));
    }
    if let Some(tm) = args.tm {
        if tm <= 0 {
            return Err(CliError::Usage("--tm must be positive".into()));
        }
    }
    let content = fs::read_to_string(&args.input)
        .map_err(|e| CliError::Data(format!("cannot read {}: {e}", args.input.display())))?;
    let series = parse_event_file(&content, args.format.into())?
        .with_source_label(args.input.display().to_string());
    let stats = series_stats(&series)?;
    let t_m = args.tm.unwrap_or(stats.t_m);
    let base = base_times(&series, t_m, args.multiplier)?;
    Ok(Loaded {
        series,
        stats,
        t_m,
        tm_overridden: args.tm.is_some(),
        base,
        seed: Seed(args.seed),
        multiplier: args.multiplier,
        out: args.out.clone(),
        input_path: args.input.clone(),
        format: args.format,
    })
}

fn build_grid(args: &GridArgs) -> TauGrid {
    let all = args.grid.clone().unwrap_or_else(|| TauGrid::default().offsets1);
    TauGrid {
        offsets1: args.grid1.clone().unwrap_or_else(|| all.clone()),
        offsets2: args.grid2.clone().unwrap_or_else(|| all.clone()),
        offsets3: args.grid3.clone().unwrap_or(all),
    }
}

fn run_sweep(
    loaded: &Loaded,
    grid: &TauGrid,
    shared_assignment: bool,
) -> Result<Vec<SweepRow<f64>>, CliError> {
    Ok(sweep_grid(
        |taus| u_matrix(&loaded.series, &loaded.base, taus, loaded.t_m),
        grid,
        loaded.t_m,
        loaded.seed,
        shared_assignment,
    )?)
}

fn argmax_row<F: PartialOrd + Copy>(rows: &[SweepRow<F>]) -> &SweepRow<F> {
    rows.iter()
        .reduce(|best, r| if r.result.d > best.result.d { r } else { best })
        .expect("sweep of a validated grid is non-empty")
}

/// Target combination: all three offsets from flags, or the sweep argmax.
fn pick_combo(
    loaded: &Loaded,
    grid_args: &GridArgs,
    combo: &ComboArgs,
) -> Result<(Ms, Ms, Ms), CliError> {
    match (combo.off1, combo.off2, combo.off3) {
        (Some(o1), Some(o2), Some(o3)) => {
            for off in [o1, o2, o3] {
                if off <= 0 || off > loaded.t_m {
                    return Err(CliError::Usage(format!(
                        "offset {off} outside (0, {}]",
                        loaded.t_m
                    )));
                }
            }
            Ok((o1, o2, o3))
        }
        (None, None, None) => {
            let rows = run_sweep(loaded, &build_grid(grid_args), grid_args.shared_assignment)?;
            let best = argmax_row(&rows);
            Ok((best.off1, best.off2, best.off3))
        }
        _ => Err(CliError::Usage(
            "give all of --off1/--off2/--off3 or none".into(),
        )),
    }
}

// ---------------------------------------------------------------------------
// report files

const SWEEP_HEADER: &str = "# tau1\ttau2-tM\ttau3-2tM\tD\tn12\tn13\tn23";

fn result_line(off: (Ms, Ms, Ms), r: &BellResult<f64>) -> String {
    format!(
        "{}\t{}\t{}\t{:.6}\t{}\t{}\t{}",
        off.0, off.1, off.2, r.d, r.n12, r.n13, r.n23
    )
}

fn fmt_offsets(off: (Ms, Ms, Ms)) -> String {
    format!("({}, {}, {})", off.0, off.1, off.2)
}

fn atomic_write(path: &Path, contents: &str) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    fs::create_dir_all(dir)
        .map_err(|e| CliError::Data(format!("cannot create {}: {e}", dir.display())))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .map_err(|e| CliError::Data(format!("cannot write in {}: {e}", dir.display())))?;
    tmp.write_all(contents.as_bytes())
        .map_err(|e| CliError::Data(format!("cannot write {}: {e}", path.display())))?;
    tmp.persist(path)
        .map_err(|e| CliError::Data(format!("cannot replace {}: {e}", path.display())))?;
    Ok(())
}

/// Appends a block to the report, creating it with the input header first.
fn append_section(path: &Path, header_if_new: &str, block: &str) -> Result<(), CliError> {
    let mut contents = match fs::read_to_string(path) {
        Ok(existing) => existing,
        Err(_) => header_if_new.to_string(),
    };
    contents.push_str(block);
    atomic_write(path, &contents)
}

fn write_output1(path: &Path, rows: &[SweepRow<f64>]) -> Result<(), CliError> {
    let mut out = String::with_capacity(rows.len() * 48 + 64);
    out.push_str(SWEEP_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&result_line((r.off1, r.off2, r.off3), &r.result));
        out.push('\n');
    }
    atomic_write(path, &out)
}

fn write_output2(
    path: &Path,
    off: (Ms, Ms, Ms),
    runs: &[Option<BellResult<f64>>],
) -> Result<(), CliError> {
    let mut out = String::with_capacity(runs.len() * 48 + 64);
    out.push_str(SWEEP_HEADER);
    out.push('\n');
    for r in runs.iter().flatten() {
        out.push_str(&result_line(off, r));
        out.push('\n');
    }
    atomic_write(path, &out)
}

fn write_histogram(path: &Path, h: &crate::stats::Histogram<f64>) -> Result<(), CliError> {
    let mut out = String::from("bin_left,bin_right,count,normal_density\n");
    for k in 0..h.counts.len() {
        out.push_str(&format!(
            "{:.6},{:.6},{},{:.6}\n",
            h.bin_edges[k],
            h.bin_edges[k + 1],
            h.counts[k],
            h.density_overlay[k]
        ));
    }
    atomic_write(path, &out)
}

// ---------------------------------------------------------------------------
// report sections

fn render_input_section(l: &Loaded) -> String {
    let format = match l.format {
        FormatArg::Cumulative => "cumulative",
        FormatArg::Intervals => "intervals",
        FormatArg::TwoColumn => "two-column",
    };
    let mut s = String::from("# event series report\n");
    s.push_str(&format!("input: {} ({format})\n", l.input_path.display()));
    s.push_str(&format!("events: {}\n", l.stats.count));
    s.push_str(&format!("duration: {} ms\n", l.stats.duration));
    s.push_str(&format!(
        "t_M: {} ms ({})\n",
        l.t_m,
        if l.tm_overridden { "override" } else { "measured" }
    ));
    s.push_str(&format!(
        "multiplier: {} (cycle {} ms)\n",
        l.multiplier,
        l.multiplier * l.t_m
    ));
    s.push_str(&format!("base times: {}\n", l.base.len()));
    s.push_str(&format!("seed: {}\n", l.seed.value()));
    s
}

fn render_sweep_section(grid: &TauGrid, rows: &[SweepRow<f64>], shared: bool) -> String {
    let fmt_axis = |offs: &[Ms]| {
        offs.iter()
            .map(|o| o.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };
    let violations = rows.iter().filter(|r| r.result.d > 1.0).count();
    let best = argmax_row(rows);
    let mut s = String::from("\n## offset grid sweep\n");
    s.push_str(&format!("axis 1 offsets (ms): {}\n", fmt_axis(&grid.offsets1)));
    s.push_str(&format!("axis 2 offsets (ms): {}\n", fmt_axis(&grid.offsets2)));
    s.push_str(&format!("axis 3 offsets (ms): {}\n", fmt_axis(&grid.offsets3)));
    s.push_str(&format!("combinations: {}\n", rows.len()));
    s.push_str(&format!(
        "assignment: {}\n",
        if shared {
            "one shared draw"
        } else {
            "one draw per combination"
        }
    ));
    s.push_str(&format!("violations (D > 1): {violations} of {}\n", rows.len()));
    s.push_str(&format!(
        "max D: {:.6} at offsets {} [n12 {}, n13 {}, n23 {}]\n",
        best.result.d,
        fmt_offsets((best.off1, best.off2, best.off3)),
        best.result.n12,
        best.result.n13,
        best.result.n23
    ));
    s
}

fn render_mc_section(
    off: (Ms, Ms, Ms),
    summary: &MonteCarloSummary<f64>,
    ks: &Result<KsResult<f64>, StatsError>,
) -> String {
    let mut s = String::from("\n## monte carlo\n");
    s.push_str(&format!("offsets: {}\n", fmt_offsets(off)));
    s.push_str(&format!(
        "replicates: {} (failed {})\n",
        summary.reps, summary.failures
    ));
    s.push_str(&format!(
        "violations (D > 1): {} of {}\n",
        summary.violations, summary.reps
    ));
    s.push_str(&format!("D min: {:.6}\n", summary.d_min));
    s.push_str(&format!("D max: {:.6}\n", summary.d_max));
    s.push_str(&format!("D mean: {:.6}\n", summary.d_mean));
    s.push_str(&format!("D sd: {:.6}\n", summary.d_sd));
    match ks {
        Ok(r) => s.push_str(&format!(
            "KS normality: statistic {:.6}, p-value {:.6} (n {}, fitted mean {:.6}, fitted sd {:.6})\n",
            r.statistic, r.p_value, r.n, r.fitted_mean, r.fitted_sd
        )),
        Err(e) => s.push_str(&format!("KS normality: not computed ({e})\n")),
    }
    s.push_str(
        "note: the KS p-value treats the fitted mean and sd as given; estimating them \
         from the same sample biases it upward (no Lilliefors-style correction).\n",
    );
    s
}

/// A perturbed combination (as relative offsets) with its replicate summary.
type NeighborEntry = ((Ms, Ms, Ms), MonteCarloSummary<f64>);

fn render_neighborhood_section(
    off: (Ms, Ms, Ms),
    base: &MonteCarloSummary<f64>,
    delta: Ms,
    entries: &[NeighborEntry],
    dropped: usize,
) -> String {
    let mut s = String::from("\n## neighborhood\n");
    s.push_str(&format!("delta: {delta} ms\n"));
    s.push_str(&format!(
        "base offsets {}: max D {:.6}, violations {} of {}\n",
        fmt_offsets(off),
        base.d_max,
        base.violations,
        base.reps
    ));
    s.push_str(&format!(
        "neighbors: {} kept, {} dropped as out of range\n",
        entries.len(),
        dropped
    ));
    if entries.is_empty() {
        s.push_str("no neighbors to evaluate\n");
    }
    for (noff, summary) in entries {
        s.push_str(&format!(
            "{}: max D {:.6}, violations {} of {}\n",
            fmt_offsets(*noff),
            summary.d_max,
            summary.violations,
            summary.reps
        ));
    }
    s
}

// ---------------------------------------------------------------------------
// commands

fn cmd_analyze(a: AnalyzeArgs) -> Result<(), CliError> {
    let l = load(&a.input)?;
    let grid = build_grid(&a.grid);
    let rows = run_sweep(&l, &grid, a.grid.shared_assignment)?;
    let path = l.out.join("output1.txt");
    write_output1(&path, &rows)?;
    let violations = rows.iter().filter(|r| r.result.d > 1.0).count();
    let best = argmax_row(&rows);
    println!("t_M: {} ms", l.t_m);
    println!("base times: {}", l.base.len());
    println!("combinations: {}", rows.len());
    println!("violations (D > 1): {violations} of {}", rows.len());
    println!(
        "max D: {:.6} at offsets {}",
        best.result.d,
        fmt_offsets((best.off1, best.off2, best.off3))
    );
    println!("wrote {}", path.display());
    Ok(())
}

fn cmd_montecarlo(a: MonteCarloArgs) -> Result<(), CliError> {
    if a.reps == 0 {
        return Err(CliError::Usage("--reps must be at least 1".into()));
    }
    if a.bins == 0 {
        return Err(CliError::Usage("--bins must be at least 1".into()));
    }
    let l = load(&a.input)?;
    let off = pick_combo(&l, &a.grid, &a.combo)?;
    let taus = TauTriple::from_relative(off.0, off.1, off.2, l.t_m)?;
    let u = u_matrix(&l.series, &l.base, &taus, l.t_m)?;
    let runs = monte_carlo_runs::<f64>(&u, a.reps, l.seed);
    let summary = summarize_runs(&runs, a.reps, l.seed);
    let out2 = l.out.join("output2.txt");
    write_output2(&out2, off, &runs)?;
    let ks = ks_normality_test(&summary.d_values);
    let block = render_mc_section(off, &summary, &ks);
    append_section(&l.out.join("summary.txt"), &render_input_section(&l), &block)?;
    print!("{block}");
    match histogram(&summary.d_values, a.bins) {
        Ok(h) => {
            let hist_path = l.out.join("histogram.csv");
            write_histogram(&hist_path, &h)?;
            println!("wrote {}", hist_path.display());
        }
        Err(e) => println!("histogram skipped: {e}"),
    }
    println!("wrote {}", out2.display());
    println!("wrote {}", l.out.join("summary.txt").display());
    Ok(())
}

fn cmd_neighborhood(a: NeighborhoodArgs) -> Result<(), CliError> {
    if a.reps == 0 {
        return Err(CliError::Usage("--reps must be at least 1".into()));
    }
    if a.delta < 0 {
        return Err(CliError::Usage("--delta must be non-negative".into()));
    }
    let l = load(&a.input)?;
    let off = pick_combo(&l, &a.grid, &a.combo)?;
    let taus = TauTriple::from_relative(off.0, off.1, off.2, l.t_m)?;
    let u = u_matrix(&l.series, &l.base, &taus, l.t_m)?;
    let base_summary = summarize_runs(&monte_carlo_runs::<f64>(&u, a.reps, l.seed), a.reps, l.seed);
    let nb = neighborhood(&taus, a.delta, l.t_m);
    let mut entries = Vec::with_capacity(nb.triples.len());
    for t in &nb.triples {
        let nu = u_matrix(&l.series, &l.base, t, l.t_m)?;
        let summary = summarize_runs(&monte_carlo_runs::<f64>(&nu, a.reps, l.seed), a.reps, l.seed);
        let [o1, o2, o3] = t.relative_offsets(l.t_m);
        entries.push(((o1, o2, o3), summary));
    }
    let block = render_neighborhood_section(off, &base_summary, a.delta, &entries, nb.dropped);
    append_section(&l.out.join("summary.txt"), &render_input_section(&l), &block)?;
    print!("{block}");
    println!("wrote {}", l.out.join("summary.txt").display());
    Ok(())
}

fn cmd_summary(a: SummaryArgs) -> Result<(), CliError> {
    if a.reps == 0 {
        return Err(CliError::Usage("--reps must be at least 1".into()));
    }
    let l = load(&a.input)?;
    let grid = build_grid(&a.grid);
    let rows = run_sweep(&l, &grid, a.grid.shared_assignment)?;
    let best = argmax_row(&rows);
    let off = (best.off1, best.off2, best.off3);
    let taus = TauTriple::from_relative(off.0, off.1, off.2, l.t_m)?;
    let u = u_matrix(&l.series, &l.base, &taus, l.t_m)?;
    let summary = summarize_runs(&monte_carlo_runs::<f64>(&u, a.reps, l.seed), a.reps, l.seed);
    let ks = ks_normality_test(&summary.d_values);
    let mut report = render_input_section(&l);
    report.push_str(&render_sweep_section(&grid, &rows, a.grid.shared_assignment));
    report.push_str(&render_mc_section(off, &summary, &ks));
    let path = l.out.join("summary.txt");
    atomic_write(&path, &report)?;
    print!("{report}");
    println!("wrote {}", path.display());
    Ok(())
}

fn cmd_synth(a: SynthArgs) -> Result<(), CliError> {
    let kind = match a.kind {
        KindArg::Poisson => ProcessKind::Poisson {
            rate_per_ms: a
                .rate
                .ok_or_else(|| CliError::Usage("poisson needs --rate".into()))?,
        },
        KindArg::Periodic => ProcessKind::Periodic {
            period: a
                .period
                .ok_or_else(|| CliError::Usage("periodic needs --period".into()))?,
        },
        KindArg::JitteredPeriodic => ProcessKind::JitteredPeriodic {
            period: a
                .period
                .ok_or_else(|| CliError::Usage("jittered-periodic needs --period".into()))?,
            jitter_sd: a.jitter_sd,
        },
        KindArg::GammaRenewal => {
            let shape = a.shape.unwrap_or(25.0);
            let scale = match (a.scale, a.mean) {
                (Some(s), None) => s,
                (None, mean) => mean.unwrap_or(829.0) / shape,
                (Some(_), Some(_)) => {
                    return Err(CliError::Usage(
                        "give --scale or --mean, not both".into(),
                    ))
                }
            };
            ProcessKind::GammaRenewal { shape, scale }
        }
    };
    let spec = ProcessSpec {
        kind,
        duration: a.duration,
        seed: Seed(a.seed),
    };
    let series = generate(&spec)?;
    let path = a.out.join(&a.file);
    atomic_write(&path, &series.to_text())?;
    println!("events: {}", series.len());
    if let Ok(stats) = series_stats(&series) {
        println!("duration: {} ms", stats.duration);
        println!("t_M: {} ms", stats.t_m);
    }
    println!("wrote {}", path.display());
    Ok(())
}
