//! `sumdiff`: experiments on sums and differences of random integer sets.
//!
//! Subcommands either print a small key=value report (`classify`,
//! `expect`) or emit one record per (n, p) run in CSV or JSON (`oracle`,
//! `mc`, `sweep`, `hunt`). Data goes to stdout or `--output`; progress
//! notes go to stderr. Runs are reproducible: the master seed defaults
//! to 0, can be pinned with `--seed` or the `SUMDIFF_SEED` environment
//! variable, and the emitted bytes do not depend on `--threads`.
//!
//! Exit codes: 0 success, 2 usage or parameter error, 3 enumeration
//! capacity exceeded, 4 I/O failure.

mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sumdiff::rng::mix64;
use sumdiff::{
    exact_law, expectation_summary, run_trials, sum_dominant_hunt, sweep, DensitySchedule,
    IntSet, ModelParams,
};

use output::{render_hunt, render_records, Format, HuntRecord, Record};

#[derive(Parser)]
#[command(
    name = "sumdiff",
    version,
    about = "Sumset/difference-set statistics of random integer sets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    run: RunConfig,
}

/// Options shared by every subcommand.
#[derive(Args)]
struct RunConfig {
    /// Master seed for randomized commands
    #[arg(long, global = true, env = "SUMDIFF_SEED", default_value_t = 0)]
    seed: u64,
    /// Worker threads (0 = all cores)
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Write data to this file instead of stdout
    #[arg(long, global = true, value_name = "PATH")]
    output: Option<PathBuf>,
    /// Data format for record-emitting commands
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Classify an explicit set given as comma-separated integers
    Classify {
        /// The set, e.g. "0,2,3,4,7,11,12,14"
        set: String,
    },
    /// Expected |A+A| and |A−A| under the (n, p) model
    Expect {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        /// Which expectation forms to print
        #[arg(long, value_enum, default_value_t = Mode::Both)]
        mode: Mode,
    },
    /// Exact law by enumerating all 2^n subsets (n ≤ 24)
    Oracle {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
    },
    /// Monte Carlo trials at one universe size
    Mc {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        density: Density,
        #[arg(long)]
        trials: u64,
    },
    /// Monte Carlo trials across an ascending n-grid
    Sweep {
        /// Comma-separated universe sizes, strictly ascending
        #[arg(long)]
        grid: String,
        #[command(flatten)]
        density: Density,
        #[arg(long)]
        trials: u64,
    },
    /// Search trials for sum-dominant sets; JSON output carries the
    /// witnesses (capped at 100)
    Hunt {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        trials: u64,
    },
}

/// Exactly one density source: a fixed probability or a schedule.
#[derive(Args)]
#[group(required = true, multiple = false)]
struct Density {
    /// Fixed inclusion probability in [0, 1]
    #[arg(long)]
    p: Option<f64>,
    /// Density schedule "c*n^-alpha", e.g. "1*n^-0.6"
    #[arg(long, value_name = "SCHEDULE")]
    p_schedule: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exact,
    Asymptotic,
    Both,
}

enum CliError {
    Usage(String),
    Capacity(String),
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Capacity(_) => 3,
            CliError::Io(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Capacity(m) | CliError::Io(m) => m,
        }
    }
}

impl From<sumdiff::Error> for CliError {
    fn from(e: sumdiff::Error) -> Self {
        if e.is_capacity() {
            CliError::Capacity(e.to_string())
        } else {
            CliError::Usage(e.to_string())
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("sumdiff: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    let run = cli.run;
    with_pool(run.threads, || match cli.command {
        Command::Classify { set } => cmd_classify(&set, &run),
        Command::Expect { n, p, mode } => cmd_expect(n, p, mode, &run),
        Command::Oracle { n, p } => cmd_oracle(n, p, &run),
        Command::Mc { n, density, trials } => cmd_mc(n, &density, trials, &run),
        Command::Sweep {
            grid,
            density,
            trials,
        } => cmd_sweep(&grid, &density, trials, &run),
        Command::Hunt { n, p, trials } => cmd_hunt(n, p, trials, &run),
    })
}

/// Run `f` inside a dedicated rayon pool of the requested size; 0 keeps
/// the default pool (all cores).
fn with_pool<T>(threads: usize, f: impl FnOnce() -> T + Send) -> T
where
    T: Send,
{
    if threads == 0 {
        return f();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool");
    pool.install(f)
}

fn write_data(run: &RunConfig, data: &str) -> Result<(), CliError> {
    match &run.output {
        Some(path) => std::fs::write(path, data)
            .map_err(|e| CliError::Io(format!("writing {}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(data.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Io(format!("writing stdout: {e}")))
        }
    }
}

fn parse_set(literal: &str) -> Result<IntSet, CliError> {
    let elems = literal
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| CliError::Usage(format!("bad set element {:?}", t.trim())))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let universe = elems.iter().max().copied().unwrap_or(0) + 1;
    Ok(IntSet::from_elements(&elems, universe)?)
}

fn parse_schedule(text: &str) -> Result<DensitySchedule, CliError> {
    let parsed = text.split_once("*n^-").and_then(|(c, alpha)| {
        let c: f64 = c.trim().parse().ok()?;
        let alpha: f64 = alpha.trim().parse().ok()?;
        Some((c, alpha))
    });
    let (c, alpha) = parsed.ok_or_else(|| {
        CliError::Usage(format!(
            "schedule must look like \"c*n^-alpha\" (e.g. \"1*n^-0.6\"), got {text:?}"
        ))
    })?;
    Ok(DensitySchedule::new(c, alpha)?)
}

fn parse_grid(text: &str) -> Result<Vec<usize>, CliError> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| CliError::Usage(format!("bad grid entry {:?}", t.trim())))
        })
        .collect()
}

fn density_at(density: &Density, n: usize) -> Result<f64, CliError> {
    match (density.p, &density.p_schedule) {
        (Some(p), None) => Ok(p),
        (None, Some(s)) => Ok(parse_schedule(s)?.p(n)),
        // clap's group guarantees exactly one arm.
        _ => unreachable!("density group"),
    }
}

fn cmd_classify(literal: &str, run: &RunConfig) -> Result<(), CliError> {
    let set = parse_set(literal)?;
    let report = format!(
        "set={set}\ncard={}\nsumset_size={}\ndiffset_size={}\nclass={}\nsidon={}\nadditive_energy={}\n",
        set.len(),
        set.sumset().len(),
        set.diffset().len(),
        set.classify(),
        set.is_sidon(),
        set.additive_energy()
    );
    write_data(run, &report)
}

fn cmd_expect(n: usize, p: f64, mode: Mode, run: &RunConfig) -> Result<(), CliError> {
    let params = ModelParams::new(n, p)?;
    if p == 0.0 && matches!(mode, Mode::Asymptotic | Mode::Both) {
        return Err(CliError::Usage(
            "asymptotic expectations are undefined at p = 0; use --mode exact".into(),
        ));
    }
    let s = expectation_summary(&params);
    let mut report = String::new();
    if matches!(mode, Mode::Exact | Mode::Both) {
        let gap = s.exact_diff - s.exact_sum;
        report.push_str(&format!(
            "mode=exact e_s1={:.16e} e_s2={:.16e} gap={:.16e} gap_scaled={:.16e}\n",
            s.exact_sum,
            s.exact_diff,
            gap,
            gap * p * p
        ));
    }
    if matches!(mode, Mode::Asymptotic | Mode::Both) {
        let gap = s.asymptotic_diff - s.asymptotic_sum;
        report.push_str(&format!(
            "mode=asymptotic e_s1={:.16e} e_s2={:.16e} gap={:.16e} gap_scaled={:.16e}\n",
            s.asymptotic_sum,
            s.asymptotic_diff,
            gap,
            gap * p * p
        ));
    }
    write_data(run, &report)
}

fn cmd_oracle(n: usize, p: f64, run: &RunConfig) -> Result<(), CliError> {
    let params = ModelParams::new(n, p)?;
    eprintln!("enumerating 2^{n} subsets at p={p}");
    let law = exact_law(&params)?;
    let records = vec![Record::from_exact_law(&law, run.seed)];
    write_data(run, &render_records(&records, run.format))
}

fn cmd_mc(n: usize, density: &Density, trials: u64, run: &RunConfig) -> Result<(), CliError> {
    let params = ModelParams::new(n, density_at(density, n)?)?;
    eprintln!("running {trials} trials at n={n}, p={}", params.p());
    let records = if trials == 0 {
        Vec::new()
    } else {
        vec![Record::from_stats(&run_trials(&params, trials, run.seed))]
    };
    write_data(run, &render_records(&records, run.format))
}

fn cmd_sweep(
    grid_text: &str,
    density: &Density,
    trials: u64,
    run: &RunConfig,
) -> Result<(), CliError> {
    let grid = parse_grid(grid_text)?;
    eprintln!("sweeping {} grid points, {trials} trials each", grid.len());
    let rows = match (density.p, &density.p_schedule) {
        (None, Some(s)) => sweep(&parse_schedule(s)?, &grid, trials, run.seed)?,
        (Some(p), None) => {
            // Fixed p across the grid, with the same per-n seed derivation
            // the schedule path uses.
            validate_grid(&grid)?;
            grid.iter()
                .map(|&n| {
                    let params = ModelParams::new(n, p)?;
                    Ok(run_trials(&params, trials, mix64(run.seed, n as u64)))
                })
                .collect::<Result<Vec<_>, sumdiff::Error>>()?
        }
        _ => unreachable!("density group"),
    };
    let records: Vec<Record> = if trials == 0 {
        Vec::new()
    } else {
        rows.iter().map(Record::from_stats).collect()
    };
    write_data(run, &render_records(&records, run.format))
}

fn validate_grid(grid: &[usize]) -> Result<(), CliError> {
    if grid.is_empty() {
        return Err(CliError::Usage("grid must not be empty".into()));
    }
    if !grid.windows(2).all(|w| w[0] < w[1]) {
        return Err(CliError::Usage("grid must be strictly ascending".into()));
    }
    Ok(())
}

fn cmd_hunt(n: usize, p: f64, trials: u64, run: &RunConfig) -> Result<(), CliError> {
    let params = ModelParams::new(n, p)?;
    eprintln!("hunting sum-dominant sets over {trials} trials at n={n}, p={p}");
    if trials == 0 {
        return write_data(run, &render_records(&[], run.format));
    }
    let stats = run_trials(&params, trials, run.seed);
    let hunt = sum_dominant_hunt(&params, trials, run.seed);
    eprintln!(
        "found {} sum-dominant sets ({} kept{})",
        hunt.hits,
        hunt.witnesses.len(),
        if hunt.capped { ", capped" } else { "" }
    );
    let record = HuntRecord::new(&stats, &hunt);
    write_data(run, &render_hunt(&record, run.format))
}
