use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use synchro_cli::batch::{self, ExperimentConfig, Mode, DEFAULT_ENUMERATION_CAP};
use synchro_cli::report::{self, AnalysisConfig};
use synchro_cli::verify::{self, Level};
use synchro_cli::CliError;
use synchro_core::automaton::cerny;
use synchro_core::packing::{self, PackingInstance, DEFAULT_BUDGET};
use synchro_core::{Automaton, Error};

#[derive(Parser)]
#[command(name = "synchro", version, about = "Algebraic analysis of synchronizing automata")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Sampled,
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelArg {
    Quick,
    Full,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze one automaton given in `.aut` format.
    Analyze {
        file: PathBuf,
        /// Zero tolerance for component images.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        monoid_cap: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        json: bool,
    },
    /// Analyze a census or a random sample and write one row per automaton.
    Batch {
        /// State range `A..B` (inclusive) or a single value.
        #[arg(long)]
        n: String,
        #[arg(long, default_value_t = 2)]
        letters: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Exhaustive)]
        mode: ModeArg,
        #[arg(long, default_value_t = 0)]
        samples: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Packing number D(t, r, n) with its bounds.
    Packing {
        #[arg(long)]
        t: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        n: usize,
        /// Run the exact search (default shows bounds and a greedy design).
        #[arg(long)]
        exact: bool,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Print a generated automaton in `.aut` format.
    Generate {
        #[command(subcommand)]
        family: Family,
    },
    /// Run the acceptance checks.
    Verify {
        #[arg(long, value_enum, default_value_t = LevelArg::Quick)]
        level: LevelArg,
    },
}

#[derive(Subcommand)]
enum Family {
    /// The Černý automaton with N states.
    Cerny { n: usize },
}

fn parse_range(text: &str) -> Result<(usize, usize), CliError> {
    let bad = || CliError::Config(format!("expected A..B or a number, got `{text}`"));
    match text.split_once("..") {
        Some((a, b)) => {
            let b = b.strip_prefix('=').unwrap_or(b);
            Ok((a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?))
        }
        None => {
            let n = text.parse().map_err(|_| bad())?;
            Ok((n, n))
        }
    }
}

fn run(cli: Cli) -> Result<bool, CliError> {
    match cli.command {
        Command::Analyze {
            file,
            tol,
            monoid_cap,
            seed,
            json,
        } => {
            let text = std::fs::read_to_string(&file)?;
            let a = Automaton::parse_aut(&text)?;
            let mut config = AnalysisConfig {
                timings: !json,
                ..AnalysisConfig::default()
            };
            if let Some(t) = tol {
                config.pipeline.tolerances.zero = t;
            }
            if let Some(cap) = monoid_cap {
                config.pipeline.monoid_cap = cap;
            }
            if let Some(s) = seed {
                config.seed = s;
            }
            let r = report::analyze(&a, &config)?;
            if json {
                println!("{}", r.to_json()?);
            } else {
                println!("{}", report::render_text(&r));
            }
            Ok(r.violations.is_empty())
        }
        Command::Batch {
            n,
            letters,
            mode,
            samples,
            seed,
            out,
        } => {
            let (n_min, n_max) = parse_range(&n)?;
            let config = ExperimentConfig {
                n_min,
                n_max,
                letters,
                mode: match mode {
                    ModeArg::Exhaustive => Mode::Exhaustive,
                    ModeArg::Sampled => Mode::Sampled,
                },
                samples,
                seed,
                analysis: AnalysisConfig::default(),
                enumeration_cap: DEFAULT_ENUMERATION_CAP,
                out: out.clone(),
            };
            let output = batch::run_batch(&config)?;
            batch::write_output(&output, &out)?;
            let s = &output.summary;
            eprintln!(
                "{} rows ({} synchronizing, {} semisimple), {} violations, {} errors -> {}",
                s.rows,
                s.synchronizing,
                s.semisimple,
                s.violations,
                s.errors,
                out.display()
            );
            Ok(s.violations == 0 && s.errors == 0)
        }
        Command::Packing {
            t,
            r,
            n,
            exact,
            budget,
        } => {
            let p = PackingInstance::new(t, r, n)?;
            for (name, value) in packing::upper_bounds(&p) {
                println!("upper bound ({name}): {value}");
            }
            let greedy = packing::greedy_packing(&p, 0)?;
            println!("greedy lower bound: {}", greedy.len());
            if exact {
                match packing::exact_packing(&p, budget) {
                    Ok((v, design)) => {
                        println!("D({t},{r},{n}) = {v}");
                        for block in design.block_lists() {
                            println!("  {block:?}");
                        }
                    }
                    Err(Error::BudgetExceeded { lower, upper }) => {
                        println!("budget exhausted: {lower} <= D({t},{r},{n}) <= {upper}");
                    }
                    Err(e) => return Err(e.into()),
                }
            }
            Ok(true)
        }
        Command::Generate {
            family: Family::Cerny { n },
        } => {
            print!("{}", cerny(n)?.to_aut());
            Ok(true)
        }
        Command::Verify { level } => {
            let level = match level {
                LevelArg::Quick => Level::Quick,
                LevelArg::Full => Level::Full,
            };
            let results = verify::run_suite(level, |r| println!("{r}"));
            let passed = verify::all_passed(&results);
            println!(
                "{}/{} criteria passed",
                results.iter().filter(|r| r.passed).count(),
                results.len()
            );
            Ok(passed)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
