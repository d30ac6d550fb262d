//! Argument handling and subcommands for the `ruqlp` binary.
//!
//! Exit codes: 0 success, 1 computational failure, 2 usage error,
//! 3 when `bounds` finds a violated row.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use ruqlp::analysis::{empirical_errors, verify_run, BoundReport};
use ruqlp::bench::{run_benchmark, write_aggregate_csv, write_trials_csv, BenchConfig, BenchFamily};
use ruqlp::matgen::{load_matrix_market, write_matrix_market, MatrixSpec};
use ruqlp::randfact::{factorize, ru_qlp, LowRankFactors, Method, SketchConfig};
use ruqlp::DenseMatrix;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_VIOLATION: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "ruqlp", version, about = "Randomized QLP decomposition toolkit")]
pub struct Cli {
    /// Print progress and summaries to stderr.
    #[arg(short, long, global = true)]
    pub verbose: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a test matrix and write it as Matrix Market.
    Gen(GenArgs),
    /// Factor a matrix and write the factors plus the L values.
    Decompose(DecomposeArgs),
    /// Principal-angle sines against the true singular subspaces.
    Angles(SketchArgs),
    /// Check every bound for one RU-QLP run.
    Bounds(SketchArgs),
    /// Time the randomized methods.
    Bench(BenchArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyArg {
    #[value(alias = "lowrank")]
    LowrankNoise,
    Polydecay,
    #[value(alias = "dense")]
    GaussianDense,
    #[value(alias = "sparse")]
    GaussianSparse,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub z: Option<f64>,
    #[arg(long)]
    pub mu: Option<f64>,
    #[arg(long)]
    pub density: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug, Clone)]
pub struct SketchArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub p: usize,
    #[arg(long, default_value_t = 1)]
    pub q: usize,
    #[arg(long, default_value_t = 1)]
    pub ortho_interval: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl SketchArgs {
    fn config(&self) -> SketchConfig {
        SketchConfig::new(self.k, self.p, self.q, self.seed).with_ortho_interval(self.ortho_interval)
    }
}

#[derive(Args, Debug)]
pub struct DecomposeArgs {
    #[command(flatten)]
    pub sketch: SketchArgs,
    #[arg(long, default_value = "ruqlp")]
    pub method: Method,
    /// Directory for the factor files; defaults to the current directory.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[arg(long, value_enum, value_delimiter = ',', default_value = "gaussian-dense")]
    pub families: Vec<FamilyArg>,
    #[arg(long, value_delimiter = ',', default_value = "400")]
    pub sizes: Vec<usize>,
    #[arg(long, default_value_t = 0.2)]
    pub d_ratio: f64,
    #[arg(long = "q", value_delimiter = ',', default_value = "0")]
    pub q_values: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "ruqlp,rsvd,cor_utv,rp_tsod")]
    pub methods: Vec<Method>,
    #[arg(long, default_value_t = 5)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Rank parameter for the low-rank families.
    #[arg(long, default_value_t = 16)]
    pub k: usize,
    #[arg(long, default_value_t = 1.0)]
    pub z: f64,
    #[arg(long, default_value_t = 0.01)]
    pub mu: f64,
    #[arg(long, default_value_t = 0.01)]
    pub density: f64,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

/// Failure classes that map onto exit codes.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Compute(String),
}

impl From<ruqlp::Error> for CliError {
    fn from(e: ruqlp::Error) -> Self {
        match e {
            ruqlp::Error::Config(msg) => CliError::Usage(msg),
            other => CliError::Compute(other.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Compute(e.to_string())
    }
}

const USAGE: &str = "usage: ruqlp [-v] <gen|decompose|angles|bounds|bench> [OPTIONS]";

/// Parses `argv` (program name first), runs the subcommand and returns the
/// process exit code.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return EXIT_OK;
            }
            eprintln!("{USAGE}");
            eprint!("{e}");
            return EXIT_USAGE;
        }
    };
    let verbose = cli.verbose;
    let outcome = match cli.command {
        Command::Gen(a) => cmd_gen(&a, verbose).map(|_| EXIT_OK),
        Command::Decompose(a) => cmd_decompose(&a, verbose).map(|_| EXIT_OK),
        Command::Angles(a) => cmd_angles(&a, verbose).map(|_| EXIT_OK),
        Command::Bounds(a) => cmd_bounds(&a, verbose),
        Command::Bench(a) => cmd_bench(&a, verbose).map(|_| EXIT_OK),
    };
    match outcome {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            eprintln!("{USAGE}");
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(CliError::Compute(msg)) => {
            eprintln!("error: {msg}");
            EXIT_FAILURE
        }
    }
}

fn require<T: Copy>(v: Option<T>, flag: &str, family: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("--{flag} is required for family {family}")))
}

fn matrix_spec(a: &GenArgs) -> Result<MatrixSpec, CliError> {
    let (n, seed) = (a.n, a.seed);
    Ok(match a.family {
        FamilyArg::LowrankNoise => MatrixSpec::LowRankNoise {
            n,
            k: require(a.k, "k", "lowrank-noise")?,
            mu: require(a.mu, "mu", "lowrank-noise")?,
            seed,
        },
        FamilyArg::Polydecay => MatrixSpec::PolyDecay {
            n,
            k: require(a.k, "k", "polydecay")?,
            z: require(a.z, "z", "polydecay")?,
            seed,
        },
        FamilyArg::GaussianDense => MatrixSpec::GaussianDense { n, seed },
        FamilyArg::GaussianSparse => MatrixSpec::GaussianSparse {
            n,
            density: require(a.density, "density", "gaussian-sparse")?,
            seed,
        },
    })
}

fn cmd_gen(a: &GenArgs, verbose: bool) -> Result<(), CliError> {
    let spec = matrix_spec(a)?;
    let m = spec.generate().map_err(|e| match e {
        ruqlp::Error::Validation(msg) => CliError::Usage(msg),
        other => other.into(),
    })?;
    write_matrix_market(&a.out, &m)?;
    if verbose {
        eprintln!("wrote {} to {}", spec.descriptor(), a.out.display());
    }
    Ok(())
}

fn load_input(path: &Path) -> Result<DenseMatrix, CliError> {
    if !path.is_file() {
        return Err(CliError::Usage(format!("input file not found: {}", path.display())));
    }
    Ok(load_matrix_market(path)?)
}

/// Opens the CSV sink: a buffered file, or stdout.
fn csv_sink(out: &Option<PathBuf>) -> Result<Box<dyn Write>, CliError> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn cmd_decompose(a: &DecomposeArgs, verbose: bool) -> Result<(), CliError> {
    let m = load_input(&a.sketch.input)?;
    let cfg = a.sketch.config();
    let f = factorize(&m, a.method, &cfg)?;
    let dir = a.out_dir.clone().unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir)?;
    let named: Vec<(&str, &DenseMatrix)> = match &f {
        LowRankFactors::Qlp(f) => vec![("q", &f.q_mat), ("l", &f.l_mat), ("p", &f.p_mat)],
        LowRankFactors::Utv(f) => vec![("u", &f.u), ("t", &f.t), ("v", &f.v)],
        LowRankFactors::Svd(f) => vec![("u", &f.u), ("v", &f.v)],
    };
    for (name, mat) in &named {
        write_matrix_market(dir.join(format!("{name}.mtx")), mat)?;
    }
    let values = match &f {
        LowRankFactors::Qlp(f) => f.l_values(),
        other => other.singular_value_estimates(),
    };
    let mut w = BufWriter::new(File::create(dir.join("l_values.csv"))?);
    writeln!(w, "index,value")?;
    for (i, v) in values.iter().enumerate() {
        writeln!(w, "{},{:e}", i + 1, v)?;
    }
    w.flush()?;
    if verbose {
        let err = f.reconstruct().sub(&m).frobenius_norm() / m.frobenius_norm();
        eprintln!("{}: relative Frobenius error {err:e}", a.method);
    }
    Ok(())
}

fn cmd_angles(a: &SketchArgs, verbose: bool) -> Result<(), CliError> {
    let m = load_input(&a.input)?;
    let f = ru_qlp(&m, &a.config())?;
    let e = empirical_errors(&m, &f, a.k)?;
    let mut w = csv_sink(&a.out)?;
    writeln!(w, "index,sin_theta,sin_phi,sin_q_ui,sin_p_vi")?;
    for i in 0..a.k {
        writeln!(
            w,
            "{},{:e},{:e},{:e},{:e}",
            i + 1,
            e.theta.sines[i],
            e.phi.sines[i],
            e.sin_q_u[i],
            e.sin_p_v[i]
        )?;
    }
    w.flush()?;
    if verbose {
        eprintln!("max sin theta {:e}, max sin phi {:e}", e.theta.max_sine(), e.phi.max_sine());
    }
    Ok(())
}

fn cmd_bounds(a: &SketchArgs, verbose: bool) -> Result<i32, CliError> {
    let m = load_input(&a.input)?;
    let f = ru_qlp(&m, &a.config())?;
    let report = verify_run(&m, &f)?;
    let mut w = csv_sink(&a.out)?;
    report.write_csv(&mut w, true)?;
    w.flush()?;
    let bad = report.violations().count();
    if verbose {
        eprintln!("{} rows, {bad} violated", report.len());
    }
    Ok(if bad == 0 { EXIT_OK } else { EXIT_VIOLATION })
}

fn cmd_bench(a: &BenchArgs, verbose: bool) -> Result<(), CliError> {
    let families = a
        .families
        .iter()
        .map(|f| match f {
            FamilyArg::GaussianDense => BenchFamily::Dense,
            FamilyArg::GaussianSparse => BenchFamily::Sparse { density: a.density },
            FamilyArg::LowrankNoise => BenchFamily::LowRankNoise { k: a.k, mu: a.mu },
            FamilyArg::Polydecay => BenchFamily::PolyDecay { k: a.k, z: a.z },
        })
        .collect();
    let cfg = BenchConfig {
        families,
        sizes: a.sizes.clone(),
        d_ratio: a.d_ratio,
        q_values: a.q_values.clone(),
        methods: a.methods.clone(),
        trials: a.trials,
        seed: a.seed,
    };
    let records = run_benchmark(&cfg)?;
    std::fs::create_dir_all(&a.out_dir)?;
    let mut w = BufWriter::new(File::create(a.out_dir.join("bench_trials.csv"))?);
    write_trials_csv(&mut w, &records)?;
    w.flush()?;
    let mut w = BufWriter::new(File::create(a.out_dir.join("bench_aggregate.csv"))?);
    write_aggregate_csv(&mut w, &records)?;
    w.flush()?;
    for r in &records {
        if let Some(msg) = &r.failure {
            eprintln!("warning: {} on {} n={} q={} failed: {msg}", r.method, r.family, r.n, r.q);
        } else if !r.accuracy_parity {
            eprintln!("warning: {} on {} n={} q={} lost accuracy parity", r.method, r.family, r.n, r.q);
        } else if verbose {
            eprintln!("{} {} n={} q={}: median {:.4} s", r.method, r.family, r.n, r.q, r.median_s);
        }
    }
    Ok(())
}

/// Header of the `bounds` CSV, re-exported for tests.
pub const BOUNDS_HEADER: &str = BoundReport::CSV_HEADER;
