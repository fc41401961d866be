//! Command-line front end. `threshold-lab <subcommand> [flags]`; the flags
//! are shared by all subcommands and ignored where they do not apply.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::experiments::{self, ExperimentReport, FamilySource, HittingKind, Trials};
use crate::oracles::Oracle;
use crate::random::DEFAULT_SEED;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "threshold-lab", version, about = "Threshold experiments on random graphs and increasing families")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Number of vertices.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Edge probability.
    #[arg(long, global = true)]
    pub p: Option<f64>,
    /// Offset parameter(s), comma separated.
    #[arg(long, global = true, value_delimiter = ',', allow_negative_numbers = true)]
    pub c: Vec<f64>,
    /// Trial count, or `exhaustive` for hitting runs with n <= 4.
    #[arg(long, global = true)]
    pub trials: Option<String>,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Property: connected, no-isolated, mindeg:K, giant:F, contains:NAME|FILE,
    /// perfect-matching, hamiltonian, triangle-factor, vertex-in-triangle.
    #[arg(long, global = true)]
    pub oracle: Option<String>,
    /// Comma-separated list of n values.
    #[arg(long, global = true, value_delimiter = ',')]
    pub grid: Vec<usize>,
    /// Output file (default: stdout).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample G(n,p) and report per-trial statistics.
    Sample,
    /// Estimate p_c (median critical value) for each n.
    Pc,
    /// Exact expectation threshold pE for a containment oracle.
    Pe,
    /// p_c, q, q_f and ell of one increasing family.
    Q {
        /// Family file (`N <size>` header, one minimal element per line).
        #[arg(long)]
        family: Option<PathBuf>,
    },
    /// p_c and pE over an n-grid with fitted exponents.
    Sweep,
    /// Hitting-time experiment along the random graph process.
    Hitting {
        /// pm, hamiltonian or triangle-factor.
        #[arg(long, default_value = "pm")]
        kind: String,
    },
    /// Perfect matchings at p = (ln n + c)/n.
    PmLimit,
    /// Largest component of G(n, c/n).
    Giant,
    /// Triangle-count moments.
    SecondMoment,
    /// Coupon collector draws.
    Coupon,
    /// Check q <= q_f <= p_c over a corpus of families.
    VerifyKk {
        /// Number of random families.
        #[arg(long, default_value_t = 200)]
        families: usize,
        /// Largest ground set of a random family.
        #[arg(long, default_value_t = 10)]
        max_ground: usize,
    },
}

impl Cli {
    fn need_n(&self) -> Result<usize> {
        self.n.ok_or_else(|| Error::Usage("--n is required".into()))
    }

    fn need_p(&self) -> Result<f64> {
        self.p.ok_or_else(|| Error::Usage("--p is required".into()))
    }

    fn need_oracle(&self) -> Result<Oracle> {
        let spec = self
            .oracle
            .as_deref()
            .ok_or_else(|| Error::Usage("--oracle is required".into()))?;
        Oracle::parse(spec)
    }

    fn need_c(&self) -> Result<Vec<f64>> {
        if self.c.is_empty() {
            Err(Error::Usage("--c is required".into()))
        } else {
            Ok(self.c.clone())
        }
    }

    /// `--grid`, or `--n` as a one-point grid.
    fn grid(&self) -> Result<Vec<usize>> {
        match (&self.grid[..], self.n) {
            ([], Some(n)) => Ok(vec![n]),
            ([], None) => Err(Error::Usage("--grid or --n is required".into())),
            (g, _) => Ok(g.to_vec()),
        }
    }

    fn trials(&self, default: u64) -> Result<Trials> {
        match &self.trials {
            None => Ok(Trials::Count(default)),
            Some(s) => Trials::parse(s),
        }
    }

    fn count(&self, default: u64) -> Result<u64> {
        match self.trials(default)? {
            Trials::Count(t) => Ok(t),
            Trials::Exhaustive => Err(Error::Usage(
                "`exhaustive` trials are only available for hitting".into(),
            )),
        }
    }
}

fn execute(cli: &Cli) -> Result<ExperimentReport> {
    let seed = cli.seed;
    let mut report = match &cli.command {
        Command::Sample => {
            let oracle = cli.oracle.as_deref().map(Oracle::parse).transpose()?;
            experiments::sample_experiment(cli.need_n()?, cli.need_p()?, cli.count(10)?, seed, oracle.as_ref())?
        }
        Command::Pc => experiments::pc_experiment(&cli.need_oracle()?, &cli.grid()?, cli.count(1000)?, seed)?,
        Command::Pe => experiments::pe_experiment(&cli.need_oracle()?, &cli.grid()?)?,
        Command::Q { family } => {
            let source = match family {
                Some(path) => FamilySource::File(path.display().to_string()),
                None => FamilySource::Property {
                    oracle: cli.need_oracle()?,
                    n: cli.need_n()?,
                },
            };
            experiments::q_experiment(&source)?
        }
        Command::Sweep => {
            experiments::threshold_sweep(&cli.need_oracle()?, &cli.grid()?, cli.count(1000)?, seed)?
        }
        Command::Hitting { kind } => {
            experiments::hitting_experiment(HittingKind::parse(kind)?, cli.need_n()?, cli.trials(500)?, seed)?
        }
        Command::PmLimit => experiments::pm_limit_experiment(cli.need_n()?, &cli.need_c()?, cli.count(1000)?, seed)?,
        Command::Giant => experiments::giant_component_experiment(cli.need_n()?, &cli.need_c()?, cli.count(100)?, seed)?,
        Command::SecondMoment => {
            experiments::second_moment_experiment(cli.need_n()?, cli.need_p()?, cli.count(1000)?, seed)?
        }
        Command::Coupon => experiments::coupon_experiment(cli.need_n()?, cli.count(2000)?, seed)?,
        Command::VerifyKk { families, max_ground } => experiments::verify_kk(*families, *max_ground, seed)?,
    };
    report.config.out = cli.out.as_ref().map(|p| p.display().to_string());
    Ok(report)
}

fn emit(cli: &Cli, report: &ExperimentReport) -> Result<()> {
    let body = match cli.format {
        Format::Csv => report.to_csv(),
        Format::Json => report.to_json(),
    };
    match &cli.out {
        Some(path) => std::fs::write(path, body)?,
        None => std::io::stdout().write_all(body.as_bytes())?,
    }
    let mut err = std::io::stderr();
    if cli.format == Format::Csv && !report.summary.is_empty() {
        write!(err, "{}", report.summary_csv())?;
    }
    writeln!(err, "wall_time_s,{:.3}", report.wall_time)?;
    Ok(())
}

fn run_parsed(cli: &Cli) -> Result<ExperimentReport> {
    let report = match cli.threads {
        Some(0) => return Err(Error::Usage("--threads must be at least 1".into())),
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::Usage(format!("cannot start {t} threads: {e}")))?
            .install(|| execute(cli))?,
        None => execute(cli)?,
    };
    emit(cli, &report)?;
    Ok(report)
}

/// 0, or 4 when the run recorded failed checks.
pub fn report_exit_code(report: &ExperimentReport) -> i32 {
    if report.failures.is_empty() {
        0
    } else {
        4
    }
}

/// Runs the tool on `args` (including the program name) and returns the
/// process exit code.
pub fn run_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run_parsed(&cli) {
        Ok(report) => {
            for f in &report.failures {
                eprintln!("check failed: {f}");
            }
            report_exit_code(&report)
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn run() -> i32 {
    run_with(std::env::args_os())
}
