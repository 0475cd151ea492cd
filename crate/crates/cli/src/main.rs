//! `markov-id`: identity testing of reversible Markov chains from the
//! command line.
//!
//! Exit codes: 0 on success, 1 when `verify` finds a violation, 2 on usage or
//! validation errors, 3 when a statistical precondition fails (reference or
//! alternative outside the testable class, exclusion region violated).

mod config;
mod output;

use std::collections::hash_map::RandomState;
use std::hash::BuildHasher;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use markov_identity::contrast::contrast;
use markov_identity::embedding::{verify_symmetrization, Symmetrizer, SymmetrizerFile};
use markov_identity::markov::{
    check_vtest_membership, io::read_matrix, rationalize, stationary_distribution,
    MembershipReport, RationalStationary, TransitionMatrix, VtestFailure,
};
use markov_identity::sampling::{embed_trajectory, simulate, RandomSource, Trajectory};
use markov_identity::testing::{
    estimate_risk, sample_complexity_scan, tester_by_id, Diagnostics, InitialLaw,
    ReductionPipeline, TestConfig,
};
use markov_identity::verify::run_oracle_suite;

use config::ExperimentConfig;
use output::Output;

const STREAM_SIMULATE: u64 = 0;
const STREAM_EMBED: u64 = 1;
const STREAM_TESTER: u64 = 2;

#[derive(Parser)]
#[command(
    name = "markov-id",
    version,
    about = "Identity testing of reversible Markov chains from a single trajectory"
)]
struct Cli {
    /// Output format; the default depends on the command.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Stationary law, reversibility, rational form and class membership of a chain.
    Inspect {
        matrix: PathBuf,
        #[command(flatten)]
        rational: RationalArgs,
    },
    /// Contrast K(P, Q) and the Rényi-1/2 rate −2 log(1 − K).
    Contrast {
        #[arg(long)]
        p: PathBuf,
        #[arg(long)]
        q: PathBuf,
    },
    /// Build the symmetrizer of a reference chain.
    Symmetrize {
        #[arg(long = "ref")]
        reference: PathBuf,
        #[command(flatten)]
        rational: RationalArgs,
    },
    /// Draw a trajectory from a chain.
    Simulate {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        n: usize,
        /// Start from this state instead of the stationary law.
        #[arg(long)]
        initial_state: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Push a trajectory through a symmetrizer.
    Embed {
        #[arg(long)]
        sigma: PathBuf,
        #[arg(long)]
        traj: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Test a trajectory against a reference chain.
    Test {
        #[arg(long = "ref")]
        reference: PathBuf,
        #[arg(long)]
        traj: PathBuf,
        /// Reuse a stored symmetrizer instead of rationalizing the reference.
        #[arg(long)]
        sigma: Option<PathBuf>,
        #[arg(long)]
        epsilon: f64,
        #[arg(long, default_value_t = 0.2)]
        delta: f64,
        #[arg(long)]
        tester: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        rational: RationalArgs,
    },
    /// Monte Carlo type-I/type-II frequencies at one length.
    Risk {
        #[command(flatten)]
        experiment: ExperimentArgs,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Risk over a grid of lengths and the smallest length below δ.
    Scan {
        #[command(flatten)]
        experiment: ExperimentArgs,
        /// Comma-separated lengths.
        #[arg(long, value_delimiter = ',')]
        n_grid: Option<Vec<usize>>,
    },
    /// Seeded sweep over every structural identity of the reduction.
    Verify {
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Args)]
struct RationalArgs {
    /// Largest denominator tried when rationalizing a stationary law.
    #[arg(long, default_value_t = 10_000)]
    max_denominator: u64,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    tester: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            let statistical = e
                .chain()
                .filter_map(|c| c.downcast_ref::<markov_identity::Error>())
                .any(markov_identity::Error::is_statistical_precondition);
            ExitCode::from(if statistical { 3 } else { 2 })
        }
    }
}

fn configure_threads() -> anyhow::Result<()> {
    if let Ok(value) = std::env::var("MARKOV_ID_THREADS") {
        let threads: usize = value.parse().with_context(|| {
            format!("MARKOV_ID_THREADS must be a positive integer, got {value:?}")
        })?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()?;
    }
    Ok(())
}

/// The given seed, or a fresh one announced on stderr.
fn resolve_seed(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| {
        let s = RandomState::new().hash_one(std::process::id());
        eprintln!("seed: {s}");
        s
    })
}

fn load_matrix(path: &Path) -> anyhow::Result<TransitionMatrix> {
    read_matrix(path).with_context(|| format!("reading matrix {}", path.display()))
}

fn load_trajectory(path: &Path) -> anyhow::Result<Trajectory> {
    Trajectory::read(path).with_context(|| format!("reading trajectory {}", path.display()))
}

fn load_symmetrizer(path: &Path) -> anyhow::Result<SymmetrizerFile> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading symmetrizer {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing symmetrizer {}", path.display()))
}

fn rational_law(p: &TransitionMatrix, max_denominator: u64) -> anyhow::Result<RationalStationary> {
    let pi = match stationary_distribution(p) {
        Err(markov_identity::Error::NotIrreducible) => {
            return Err(markov_identity::Error::NotInVtest(vec![
                VtestFailure::NotIrreducible,
            ]))
            .context("reference chain");
        }
        other => other?,
    };
    Ok(rationalize(&pi, max_denominator)?)
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    let out = Output::new(cli.out.clone(), cli.format);
    match cli.command {
        Command::Inspect { matrix, rational } => {
            let p = load_matrix(&matrix)?;
            out.write(&inspect(&p, rational.max_denominator), Format::Json)?;
        }
        Command::Contrast { p, q } => {
            let value = contrast(&load_matrix(&p)?, &load_matrix(&q)?)?;
            out.write(&value, Format::Text)?;
        }
        Command::Symmetrize {
            reference,
            rational,
        } => {
            let p = load_matrix(&reference)?;
            let r = rational_law(&p, rational.max_denominator)?;
            let pipeline = ReductionPipeline::new(&p, &r)?;
            out.write_json_only(&pipeline.symmetrizer().to_file())?;
        }
        Command::Simulate {
            matrix,
            n,
            initial_state,
            seed,
        } => {
            let p = load_matrix(&matrix)?;
            let initial = match initial_state {
                Some(s) if s < p.state_count() => {
                    let mut v = vec![0.0; p.state_count()];
                    v[s] = 1.0;
                    v
                }
                Some(s) => bail!("initial state {s} outside 0..{}", p.state_count()),
                None => stationary_distribution(&p)?.probs().to_vec(),
            };
            let src = RandomSource::new(resolve_seed(seed), STREAM_SIMULATE);
            out.trajectory(&simulate(&p, &initial, n, &src)?)?;
        }
        Command::Embed { sigma, traj, seed } => {
            let embedding = load_symmetrizer(&sigma)?.embedding()?;
            let x = load_trajectory(&traj)?;
            let src = RandomSource::new(resolve_seed(seed), STREAM_EMBED);
            out.trajectory(&embed_trajectory(&embedding, &x, &src)?)?;
        }
        Command::Test {
            reference,
            traj,
            sigma,
            epsilon,
            delta,
            tester,
            seed,
            rational,
        } => {
            let p = load_matrix(&reference)?;
            let x = load_trajectory(&traj)?;
            let r = match sigma {
                Some(path) => {
                    let file = load_symmetrizer(&path)?;
                    let s = Symmetrizer::from_file(&file, p.edges())?;
                    verify_symmetrization(&s, &p)?;
                    s.rational().clone()
                }
                None => rational_law(&p, rational.max_denominator)?,
            };
            let seed = resolve_seed(seed);
            let mut cfg = TestConfig::new(epsilon, delta, x.len().max(1), seed)?;
            if let Some(id) = tester {
                cfg.tester = id;
            }
            let tester = tester_by_id(&cfg.tester)
                .ok_or_else(|| anyhow!("unknown tester {:?}", cfg.tester))?;
            let verdict = ReductionPipeline::new(&p, &r)?.test(
                &x,
                &cfg,
                tester.as_ref(),
                &RandomSource::new(seed, STREAM_EMBED),
                &RandomSource::new(seed, STREAM_TESTER),
            )?;
            let report = VerdictReport {
                decision: verdict.decision.to_string(),
                reject: verdict.rejects(),
                n: cfg.n,
                epsilon,
                delta,
                seed,
                delta_states: r.denominator(),
                diagnostics: verdict.diagnostics,
            };
            out.write(&report, Format::Json)?;
        }
        Command::Risk { experiment, n } => {
            let exp = Experiment::load(&experiment)?;
            let n = n
                .or(exp.config.n)
                .ok_or_else(|| anyhow!("risk needs n, from the config or --n"))?;
            let cfg = exp.test_config.with_n(n);
            let tester = exp.tester()?;
            let report = estimate_risk(
                &exp.reference,
                &exp.rational,
                &exp.alternatives,
                &cfg,
                exp.trials,
                tester.as_ref(),
            )?;
            out.risk_rows(std::slice::from_ref(&report), &report)?;
        }
        Command::Scan { experiment, n_grid } => {
            let exp = Experiment::load(&experiment)?;
            let grid = n_grid
                .or_else(|| exp.config.n_grid.clone())
                .ok_or_else(|| anyhow!("scan needs n_grid, from the config or --n-grid"))?;
            if grid.is_empty() {
                bail!("n_grid is empty");
            }
            let tester = exp.tester()?;
            let table = sample_complexity_scan(
                &exp.reference,
                &exp.rational,
                &exp.alternatives,
                &exp.test_config,
                &grid,
                exp.trials,
                tester.as_ref(),
            )?;
            out.risk_rows(&table.rows, &table)?;
        }
        Command::Verify { trials, seed } => {
            let report = run_oracle_suite(trials, resolve_seed(seed))?;
            out.oracle(&report)?;
            if !report.passed() {
                eprintln!("verification failed");
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct VerdictReport {
    decision: String,
    reject: bool,
    n: usize,
    epsilon: f64,
    delta: f64,
    seed: u64,
    delta_states: u64,
    diagnostics: Diagnostics,
}

#[derive(Serialize)]
struct InspectReport {
    states: usize,
    edges: usize,
    irreducible: bool,
    stationary: Option<Vec<f64>>,
    detailed_balance_defect: Option<f64>,
    reversible: bool,
    symmetric: bool,
    rational: Option<RationalStationary>,
    membership: Option<MembershipReport>,
    notes: Vec<String>,
}

fn inspect(p: &TransitionMatrix, max_denominator: u64) -> InspectReport {
    let mut notes = Vec::new();
    let pi = stationary_distribution(p)
        .map_err(|e| notes.push(format!("stationary law: {e}")))
        .ok();
    let defect = pi.as_ref().map(|pi| p.detailed_balance_defect(pi.probs()));
    let rational = pi.as_ref().and_then(|pi| {
        rationalize(pi, max_denominator)
            .map_err(|e| notes.push(format!("rationalization: {e}")))
            .ok()
    });
    let membership = rational
        .as_ref()
        .map(|r| check_vtest_membership(p, r, p.edges()));
    InspectReport {
        states: p.state_count(),
        edges: p.edges().len(),
        irreducible: p.is_irreducible(),
        reversible: pi
            .as_ref()
            .is_some_and(|pi| p.is_reversible(pi, markov_identity::markov::DETAILED_BALANCE_TOL)),
        symmetric: p.max_asymmetry() <= 1e-12,
        stationary: pi.map(|pi| pi.probs().to_vec()),
        detailed_balance_defect: defect,
        rational,
        membership,
        notes,
    }
}

/// A loaded experiment config with flag overrides applied.
struct Experiment {
    config: ExperimentConfig,
    reference: TransitionMatrix,
    alternatives: Vec<TransitionMatrix>,
    rational: RationalStationary,
    test_config: TestConfig,
    trials: u64,
}

impl Experiment {
    fn load(args: &ExperimentArgs) -> anyhow::Result<Self> {
        let config = ExperimentConfig::read(&args.config)?;
        let base = args.config.parent().unwrap_or(Path::new("."));
        let reference = load_matrix(&base.join(&config.reference))?;
        let alternatives = config
            .alternatives
            .iter()
            .map(|a| load_matrix(&base.join(a)))
            .collect::<anyhow::Result<Vec<_>>>()?;
        let rational = rational_law(&reference, config.max_denominator)?;
        let seed = resolve_seed(args.seed.or(config.seed));
        let mut test_config = TestConfig::new(
            args.epsilon.unwrap_or(config.epsilon),
            args.delta.unwrap_or(config.delta),
            1,
            seed,
        )?;
        test_config.initial = match config.initial_state {
            Some(s) => InitialLaw::State(s),
            None => InitialLaw::Stationary,
        };
        if let Some(id) = args.tester.clone().or_else(|| config.tester.clone()) {
            test_config.tester = id;
        }
        let trials = args.trials.unwrap_or(config.trials);
        Ok(Self {
            config,
            reference,
            alternatives,
            rational,
            test_config,
            trials,
        })
    }

    fn tester(
        &self,
    ) -> anyhow::Result<Box<dyn markov_identity::testing::SymmetricTester + Send + Sync>> {
        tester_by_id(&self.test_config.tester)
            .ok_or_else(|| anyhow!("unknown tester {:?}", self.test_config.tester))
    }
}
