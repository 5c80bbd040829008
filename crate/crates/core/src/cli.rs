//! The `rfkernel` command line: `kernel`, `test` and `power`.
//!
//! Data files are headerless numeric CSV. Every file written begins with
//! `#` comment lines recording the resolved configuration. Exit codes: 0 on
//! success, 1 on runtime failure, 2 on usage errors.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::seq::SliceRandom;
use rayon::prelude::*;

use crate::data::DataMatrix;
use crate::error::Error;
use crate::forest::{build_supervised_forest, build_unsupervised_forest, ForestConfig, Mtry};
use crate::independence::{PairedStatistic, TestResult};
use crate::kernel::{
    characteristic_transform, check_psd, inject_identity_partitions, proximity_kernel,
    write_matrix_csv, MixtureConfig,
};
use crate::rng::stream;
use crate::sim::{prepare, run_sweep_with_progress, Method, MethodConfig, Setting, SweepConfig};

pub const SEED_ENV: &str = "RFKERNEL_SEED";

#[derive(Debug, Parser)]
#[command(
    name = "rfkernel",
    version,
    about = "Characteristic decision-forest kernels and independence tests"
)]
struct Cli {
    /// Worker threads (defaults to available parallelism). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fit a forest on X and write its characteristic kernel as CSV.
    Kernel(KernelArgs),
    /// Permutation test of independence between X and Y.
    Test(TestArgs),
    /// Power sweep over simulation settings, methods and dimensions.
    Power(PowerArgs),
}

#[derive(Debug, Args)]
struct ForestArgs {
    /// Trees per forest.
    #[arg(long, default_value_t = 500)]
    trees: usize,
    /// Features tried per split: third, sqrt, all or a count (default third
    /// supervised, all unsupervised).
    #[arg(long)]
    mtry: Option<Mtry>,
    /// Minimum observations per leaf.
    #[arg(long, default_value_t = 5)]
    min_leaf: usize,
    /// Maximum tree depth (unlimited if omitted).
    #[arg(long)]
    max_depth: Option<usize>,
    /// Bootstrap rows per tree (default on for supervised, off for unsupervised).
    #[arg(long)]
    bootstrap: Option<bool>,
    /// Requested fraction of identity partitions.
    #[arg(long, default_value_t = 0.01)]
    pi: f64,
    /// Exponent applied to the induced semimetric.
    #[arg(long, default_value_t = 0.5)]
    r: f64,
    /// Base seed for every random choice.
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    seed: u64,
}

impl ForestArgs {
    fn forest_config(&self, base: ForestConfig) -> ForestConfig {
        ForestConfig {
            num_trees: self.trees,
            mtry: self.mtry.unwrap_or(base.mtry),
            min_leaf: self.min_leaf,
            max_depth: self.max_depth,
            bootstrap: self.bootstrap.unwrap_or(base.bootstrap),
            seed: self.seed,
        }
    }

    fn mixture(&self) -> MixtureConfig {
        MixtureConfig {
            pi: self.pi,
            r: self.r,
        }
    }

    fn method_config(&self) -> MethodConfig {
        MethodConfig {
            supervised: self.forest_config(ForestConfig::supervised()),
            unsupervised: self.forest_config(ForestConfig::unsupervised()),
            mix: self.mixture(),
        }
    }
}

#[derive(Debug, Args)]
struct KernelArgs {
    /// Observations, one row per line.
    x: PathBuf,
    /// Single-column response; switches to a supervised forest.
    #[arg(long)]
    y: Option<PathBuf>,
    #[command(flatten)]
    forest: ForestArgs,
    /// Output file (stdout if omitted).
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Srf,
    Urf,
    Dcorr,
    HsicGaussian,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Srf => Method::Srf,
            MethodArg::Urf => Method::Urf,
            MethodArg::Dcorr => Method::Dcorr,
            MethodArg::HsicGaussian => Method::HsicGaussian,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum NullMode {
    /// Permute the precomputed second kernel.
    Fixed,
    /// Permute Y and refit every forest for each permutation.
    Refit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct TestArgs {
    /// First sample, one row per line.
    x: PathBuf,
    /// Second sample with the same number of rows.
    y: PathBuf,
    /// Dependence statistic.
    #[arg(long, value_enum)]
    method: MethodArg,
    /// Number of permutations.
    #[arg(long = "permutations", short = 'B', default_value_t = 1000)]
    permutations: usize,
    /// Permutation scheme (default: refit for srf, fixed otherwise).
    #[arg(long, value_enum)]
    null: Option<NullMode>,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(flatten)]
    forest: ForestArgs,
    /// Output file (stdout if omitted).
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct PowerArgs {
    /// Comma-separated settings (default: all twelve).
    #[arg(long, value_delimiter = ',')]
    settings: Option<Vec<String>>,
    /// Comma-separated methods (default: all four).
    #[arg(long, value_delimiter = ',')]
    methods: Option<Vec<String>>,
    /// Comma-separated dimensions p.
    #[arg(long, value_delimiter = ',', default_value = "1,2,5,10,20,50,100")]
    dims: Vec<usize>,
    /// Sample size per replicate.
    #[arg(long, default_value_t = 100)]
    n: usize,
    /// Replicates per arm.
    #[arg(long, default_value_t = 200)]
    reps: usize,
    /// Test level.
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// Trees per forest.
    #[arg(long, default_value_t = 100)]
    trees: usize,
    /// Requested fraction of identity partitions.
    #[arg(long, default_value_t = 0.01)]
    pi: f64,
    /// Exponent applied to the induced semimetric.
    #[arg(long, default_value_t = 0.5)]
    r: f64,
    /// Base seed for every random choice.
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    seed: u64,
    /// Directory for power.csv, power_by_dimension.csv, power_averages.csv and the journal.
    #[arg(long)]
    out_dir: PathBuf,
}

enum CliError {
    Usage(String),
    Runtime(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter { .. } | Error::Unknown { .. } => {
                CliError::Usage(e.to_string())
            }
            e => CliError::Runtime(e),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.into())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Entry point of the `rfkernel` binary.
pub fn main() -> i32 {
    run(
        std::env::args_os(),
        &mut std::io::stdout(),
        &mut std::io::stderr(),
    )
}

/// Parse `args` (including the program name) and execute, returning the
/// process exit code.
pub fn run<I, T>(args: I, stdout: &mut (dyn Write + Send), stderr: &mut (dyn Write + Send)) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = if code == 0 {
                write!(stdout, "{}", e.render())
            } else {
                write!(stderr, "{}", e.render())
            };
            return code;
        }
    };
    let outcome = with_threads(cli.threads, || match cli.command {
        Command::Kernel(a) => cmd_kernel(&a, stdout, stderr),
        Command::Test(a) => cmd_test(&a, stdout),
        Command::Power(a) => cmd_power(&a, stderr),
    });
    match outcome {
        Ok(()) => 0,
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            2
        }
        Err(CliError::Runtime(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            1
        }
    }
}

fn with_threads<F>(threads: Option<usize>, f: F) -> CliResult<()>
where
    F: FnOnce() -> CliResult<()> + Send,
{
    match threads {
        None => f(),
        Some(0) => Err(CliError::Usage("--threads must be at least 1".into())),
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| CliError::Runtime(Error::Config(e.to_string())))?;
            pool.install(f)
        }
    }
}

fn read_data(path: &PathBuf) -> CliResult<DataMatrix> {
    DataMatrix::from_csv_path(path).map_err(|e| {
        CliError::Runtime(match e {
            Error::Csv { line, col, reason } => Error::Config(format!(
                "{}: line {line}, column {col}: {reason}",
                path.display()
            )),
            e => e,
        })
    })
}

fn output(path: &Option<PathBuf>, stdout: &mut (dyn Write + Send), body: &[u8]) -> CliResult<()> {
    match path {
        Some(p) => {
            let mut f = BufWriter::new(File::create(p)?);
            f.write_all(body)?;
            f.flush()?;
        }
        None => stdout.write_all(body)?,
    }
    Ok(())
}

fn cmd_kernel(
    args: &KernelArgs,
    stdout: &mut (dyn Write + Send),
    stderr: &mut (dyn Write + Send),
) -> CliResult<()> {
    let x = read_data(&args.x)?;
    let mix = args.forest.mixture();
    mix.validate()?;
    let (forest, kind, cfg) = match &args.y {
        Some(path) => {
            let y = read_data(path)?;
            if y.nrows() != x.nrows() || y.ncols() != 1 {
                return Err(CliError::Usage(format!(
                    "y must be a single column with {} rows, got {}x{}",
                    x.nrows(),
                    y.nrows(),
                    y.ncols()
                )));
            }
            let cfg = args.forest.forest_config(ForestConfig::supervised());
            (
                build_supervised_forest(&x, &y.column_values(0), &cfg)?,
                "supervised",
                cfg,
            )
        }
        None => {
            let cfg = args.forest.forest_config(ForestConfig::unsupervised());
            (build_unsupervised_forest(&x, &cfg)?, "unsupervised", cfg)
        }
    };
    let mixed = inject_identity_partitions(&forest, &x, mix.pi)?;
    let kernel = characteristic_transform(&proximity_kernel(&mixed)?, mix.r)?;
    let psd = check_psd(kernel.values(), 1e-8)?;

    let mut header = vec![
        format!(
            "forest={kind} m={} mtry={} min_leaf={} max_depth={:?} bootstrap={}",
            cfg.num_trees, cfg.mtry, cfg.min_leaf, cfg.max_depth, cfg.bootstrap
        ),
        format!(
            "pi={} identity_partitions={} pi_achieved={} r={} seed={}",
            mix.pi,
            mixed.identity_count(),
            mixed.identity_fraction(),
            mix.r,
            cfg.seed
        ),
        format!("n={} min_eigenvalue={:e}", x.nrows(), psd.min_eigenvalue),
    ];
    if kernel.is_degenerate() {
        let warning = "warning: degenerate kernel, all observations coincide".to_string();
        writeln!(stderr, "{warning}")?;
        header.push(warning);
    }
    let mut body = Vec::new();
    write_matrix_csv(&mut body, kernel.values(), &header)?;
    output(&args.out, stdout, &body)
}

/// Permutation test that permutes the rows of `y` and reruns the whole
/// method, refitting forests, for every permutation.
pub fn refit_permutation_test(
    method: Method,
    x: &DataMatrix,
    y: &DataMatrix,
    cfg: &MethodConfig,
    permutations: usize,
    seed: u64,
) -> crate::Result<TestResult> {
    if permutations == 0 {
        return Err(crate::error::invalid("permutations", "must be at least 1"));
    }
    let observed = prepare(method, x, y, cfg)?.statistic();
    let n = x.nrows();
    let exceed = if observed.degenerate {
        permutations
    } else {
        (0..permutations)
            .into_par_iter()
            .map(|k| -> crate::Result<bool> {
                let mut perm: Vec<usize> = (0..n).collect();
                perm.shuffle(&mut stream(seed, &[k as u64]));
                let permuted = prepare(method, x, &y.select_rows(&perm)?, cfg)?.statistic();
                Ok(permuted.value >= observed.value)
            })
            .collect::<crate::Result<Vec<bool>>>()?
            .into_iter()
            .filter(|&b| b)
            .count()
    };
    Ok(TestResult {
        method: method.name().to_string(),
        n,
        statistic: observed.value,
        p_value: (1 + exceed) as f64 / (1 + permutations) as f64,
        num_permutations: permutations,
        seed,
    })
}

fn cmd_test(args: &TestArgs, stdout: &mut (dyn Write + Send)) -> CliResult<()> {
    let x = read_data(&args.x)?;
    let y = read_data(&args.y)?;
    if x.nrows() != y.nrows() {
        return Err(CliError::Usage(format!(
            "row counts differ: x has {}, y has {}",
            x.nrows(),
            y.nrows()
        )));
    }
    let method = Method::from(args.method);
    let cfg = args.forest.method_config();
    cfg.mix.validate()?;
    let null = args.null.unwrap_or(if method == Method::Srf {
        NullMode::Refit
    } else {
        NullMode::Fixed
    });
    let result = match null {
        NullMode::Fixed => {
            let stat: PairedStatistic = prepare(method, &x, &y, &cfg)?;
            stat.permutation_test(args.permutations, args.forest.seed, method.name())?
        }
        NullMode::Refit => {
            refit_permutation_test(method, &x, &y, &cfg, args.permutations, args.forest.seed)?
        }
    };

    let mut body = Vec::new();
    match args.format {
        Format::Json => writeln!(body, "{}", result.to_json())?,
        Format::Csv => {
            writeln!(
                body,
                "# method={} null={:?} trees={} min_leaf={} pi={} r={} permutations={} seed={}",
                method,
                null,
                args.forest.trees,
                args.forest.min_leaf,
                args.forest.pi,
                args.forest.r,
                args.permutations,
                args.forest.seed
            )?;
            writeln!(body, "{}", TestResult::CSV_HEADER)?;
            writeln!(body, "{}", result.to_csv_row())?;
        }
    }
    output(&args.out, stdout, &body)
}

fn parse_list<T>(what: &str, values: &Option<Vec<String>>, all: &[T]) -> CliResult<Vec<T>>
where
    T: std::str::FromStr<Err = Error> + Copy,
{
    match values {
        None => Ok(all.to_vec()),
        Some(v) => {
            let names: Vec<&String> = v.iter().filter(|s| !s.trim().is_empty()).collect();
            if names.is_empty() {
                return Err(CliError::Usage(format!("empty {what} list")));
            }
            names
                .into_iter()
                .map(|s| s.trim().parse().map_err(CliError::from))
                .collect()
        }
    }
}

fn cmd_power(args: &PowerArgs, stderr: &mut (dyn Write + Send)) -> CliResult<()> {
    let mix = MixtureConfig {
        pi: args.pi,
        r: args.r,
    };
    let cfg = SweepConfig {
        settings: parse_list("settings", &args.settings, &Setting::ALL)?,
        methods: parse_list("methods", &args.methods, &Method::ALL)?,
        dims: args.dims.clone(),
        n: args.n,
        replicates: args.reps,
        alpha: args.alpha,
        methods_cfg: MethodConfig {
            mix,
            ..MethodConfig::desk().with_trees(args.trees)
        },
        seed: args.seed,
    };
    cfg.validate()?;
    let outcome = run_sweep_with_progress(&cfg, &args.out_dir, |r| {
        let _ = writeln!(
            stderr,
            "{} p={} {}: power {:.3}",
            r.setting.setting, r.setting.p, r.method, r.power
        );
    })?;
    if outcome.resumed_cells > 0 {
        writeln!(
            stderr,
            "resumed {} completed cells from the journal",
            outcome.resumed_cells
        )?;
    }
    Ok(())
}
