use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};

use dobs_core::analyzer::{build_catalog, exact_catalog, SamplingConfig, StatisticsCatalog};
use dobs_core::bench::{load_corpus, run_correlation, run_ratio, write_corpus, write_csv, BenchOptions};
use dobs_core::cost::{JoinStrategy, DEFAULT_BLOCK_SIZE};
use dobs_core::executor::{execute_scoped, MemoScope};
use dobs_core::frontends::{parse_dob, parse_owl_documents, parse_query, render_dob, translate_owl};
use dobs_core::optimizer::{optimize, Plan};
use dobs_core::synth::{generate_corpus, SynthConfig};
use dobs_core::{Error, OntologyBase};

#[derive(Parser)]
#[command(name = "dobs", version, about = "Query optimizer and evaluator for deductive ontology bases")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Translate an OWL abstract-syntax file into DOB facts.
    Translate {
        owl: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Build a statistics catalog for a DOB file.
    Analyze {
        dob: PathBuf,
        #[command(flatten)]
        sampling: SamplingArgs,
        /// Enumerate every partition instead of sampling.
        #[arg(long)]
        exact: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Optimize and run a conjunctive query.
    Query {
        dob: PathBuf,
        /// Catalog from `analyze`; sampled on the fly when absent.
        #[arg(long)]
        catalog: Option<PathBuf>,
        #[arg(short, long = "query")]
        query: String,
        /// Print the plan before the answers.
        #[arg(long)]
        explain: bool,
        #[arg(long, value_enum, default_value_t = StrategyArg::Nlj)]
        strategy: StrategyArg,
        /// Run the body in its written order.
        #[arg(long)]
        no_optimize: bool,
        #[arg(long, default_value_t = DEFAULT_BLOCK_SIZE)]
        block_size: usize,
        #[arg(long, default_value = "probe")]
        memo_scope: MemoScope,
    },
    /// Generate a synthetic corpus from a TOML config.
    Gen {
        config: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Run an experiment over a generated corpus.
    Bench {
        #[arg(value_enum)]
        experiment: Experiment,
        dir: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        sampling: SamplingArgs,
        #[arg(long, value_enum, default_value_t = StrategyArg::Nlj)]
        strategy: StrategyArg,
        #[arg(long, default_value_t = DEFAULT_BLOCK_SIZE)]
        block_size: usize,
        #[arg(long, default_value = "probe")]
        memo_scope: MemoScope,
        /// Add a wall-clock column (nanoseconds) to correlation reports.
        #[arg(long)]
        timing: bool,
    },
}

#[derive(Args)]
struct SamplingArgs {
    /// Relative error.
    #[arg(short = 'd', long, default_value_t = 0.2)]
    error: f64,
    /// Confidence level.
    #[arg(short = 'p', long, default_value_t = 0.7)]
    confidence: f64,
    /// First-stage sample count.
    #[arg(short = 'k', long, default_value_t = 7)]
    first_stage: usize,
    #[arg(long, default_value_t = 2000)]
    m_cap: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Use the normal-quantile stopping factor.
    #[arg(long)]
    clt: bool,
}

impl SamplingArgs {
    fn config(&self) -> SamplingConfig {
        SamplingConfig {
            d: self.error,
            p: self.confidence,
            k: self.first_stage,
            m_cap: self.m_cap,
            seed: self.seed,
            clt: self.clt,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Nlj,
    Bnlj,
    Hash,
    /// All three, cheapest per step.
    Auto,
}

impl StrategyArg {
    fn strategies(self, block_size: usize) -> Vec<JoinStrategy> {
        match self {
            StrategyArg::Nlj => vec![JoinStrategy::NestedLoop],
            StrategyArg::Bnlj => vec![JoinStrategy::BlockNestedLoop { block_size }],
            StrategyArg::Hash => vec![JoinStrategy::HashJoin],
            StrategyArg::Auto => JoinStrategy::all(block_size),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Experiment {
    Correlate,
    Ratio,
}

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| io::Error::new(e.kind(), format!("{}: {e}", path.display())).into())
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), Error> {
    match output {
        Some(p) => fs::write(p, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn load_base(path: &Path) -> Result<OntologyBase, Error> {
    let facts = parse_dob(&read(path)?).map_err(|e| e.with_file(path.display().to_string()))?;
    OntologyBase::from_facts(&facts)
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Translate { owl, output } => {
            let docs = parse_owl_documents(&read(&owl)?).map_err(|e| e.with_file(owl.display().to_string()))?;
            let facts: Vec<_> = docs.iter().flat_map(translate_owl).collect();
            emit(output.as_deref(), &render_dob(&facts))
        }
        Command::Analyze {
            dob,
            sampling,
            exact,
            output,
        } => {
            let base = load_base(&dob)?;
            let mut catalog = if exact {
                exact_catalog(&base)?
            } else {
                build_catalog(&base, &sampling.config())?
            };
            let now = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
            catalog.set_created(now);
            emit(output.as_deref(), &catalog.to_text())
        }
        Command::Query {
            dob,
            catalog,
            query,
            explain,
            strategy,
            no_optimize,
            block_size,
            memo_scope,
        } => {
            let base = load_base(&dob)?;
            let catalog = match catalog {
                Some(p) => StatisticsCatalog::from_text(&read(&p)?)?,
                None => build_catalog(&base, &SamplingConfig::default())?,
            };
            let q = parse_query(&query)?;
            let enabled = strategy.strategies(block_size);
            let plan = if no_optimize {
                Plan::greedy(&q, &catalog, (0..q.body.len()).collect(), &enabled)?
            } else {
                optimize(&q, &catalog, &enabled)?
            };
            let report = execute_scoped(&base, &plan, memo_scope)?;
            let mut out = String::new();
            if explain {
                out.push_str(&plan.explain());
            }
            for a in &report.answers {
                out.push_str(&format!("{a}\n"));
            }
            emit(None, &out)?;
            eprintln!(
                "{} answers, actual cost {} (inferred {}, eob accesses {}), estimated cost {}",
                report.answers.len(),
                report.actual_cost,
                report.counters.inferred,
                report.counters.eob_access,
                plan.estimate.cost
            );
            Ok(())
        }
        Command::Gen { config, output } => {
            let cfg = SynthConfig::from_toml(&read(&config)?)?;
            let corpus = generate_corpus(&cfg)?;
            write_corpus(&output, &cfg, &corpus)?;
            eprintln!("wrote {} bases to {}", corpus.len(), output.display());
            Ok(())
        }
        Command::Bench {
            experiment,
            dir,
            output,
            sampling,
            strategy,
            block_size,
            memo_scope,
            timing,
        } => {
            let corpus = load_corpus(&dir, &sampling.config())?;
            let opts = BenchOptions {
                strategies: strategy.strategies(block_size),
                timing,
                memo_scope,
            };
            let mut buf = Vec::new();
            match experiment {
                Experiment::Correlate => {
                    let r = run_correlation(&corpus, &opts)?;
                    write_csv(&r.rows, &mut buf)?;
                    match r.correlation {
                        Some(c) => eprintln!("{} orderings, pearson r = {c:.4}", r.rows.len()),
                        None => eprintln!("{} orderings, pearson r undefined (zero variance)", r.rows.len()),
                    }
                }
                Experiment::Ratio => {
                    let r = run_ratio(&corpus, &opts)?;
                    write_csv(&r.rows, &mut buf)?;
                    let mean = r.mean_ratio_worst().map_or("undefined".into(), |m| format!("{m:.4}"));
                    eprintln!(
                        "{} queries, mean optimal/worst {mean}, {:.0}% below 0.10",
                        r.rows.len(),
                        r.fraction_below(0.10) * 100.0
                    );
                }
            }
            emit(output.as_deref(), &String::from_utf8(buf).expect("csv is utf-8"))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("dobs: {e}");
            ExitCode::from(2)
        }
    }
}
