//! Batch experiments: exhaustive (isomorph-free) censuses or seeded samples,
//! analyzed in parallel and written as CSV or JSON.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use synchro_core::automaton::random_automaton;
use synchro_core::census::{self, CensusMode};
use synchro_core::Automaton;

use crate::report::{analyze, AnalysisConfig, AnalysisReport, SCHEMA_VERSION};
use crate::CliError;

/// Exhaustive runs may enumerate at most this many raw tables (`m·n^(n·m)`).
pub const DEFAULT_ENUMERATION_CAP: u64 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exhaustive,
    Sampled,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub n_min: usize,
    pub n_max: usize,
    pub letters: usize,
    pub mode: Mode,
    pub samples: usize,
    pub seed: Option<u64>,
    pub analysis: AnalysisConfig,
    pub enumeration_cap: u64,
    pub out: PathBuf,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |msg: String| Err(CliError::Config(msg));
        if self.n_min == 0 || self.n_min > self.n_max || self.letters == 0 {
            return bad(format!(
                "need 1 ≤ A ≤ B and M ≥ 1, got {}..{} with {} letters",
                self.n_min, self.n_max, self.letters
            ));
        }
        match self.mode {
            Mode::Exhaustive => {
                for n in self.n_min..=self.n_max {
                    let work = census::raw_count(n, self.letters)
                        .and_then(|c| c.checked_mul(self.letters as u64));
                    if work.is_none_or(|w| w > self.enumeration_cap) {
                        return bad(format!(
                            "exhaustive enumeration of {n}-state {}-letter automata exceeds the cap",
                            self.letters
                        ));
                    }
                }
            }
            Mode::Sampled => {
                if self.seed.is_none() {
                    return bad("sampled mode requires --seed".into());
                }
                if self.samples == 0 {
                    return bad("sampled mode requires --samples > 0".into());
                }
            }
        }
        Ok(())
    }
}

/// Seed for row `index`, drawn from its own stream of the master generator.
pub fn row_seed(master: u64, index: usize) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(index as u64);
    rng.next_u64()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchRow {
    pub index: usize,
    pub table: String,
    pub report: Option<AnalysisReport>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BatchSummary {
    pub rows: usize,
    pub synchronizing: usize,
    pub semisimple: usize,
    pub skipped_stages: usize,
    pub errors: usize,
    pub violating_rows: usize,
    pub violations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchOutput {
    pub schema: String,
    pub config: ExperimentConfig,
    pub rows: Vec<BatchRow>,
    pub summary: BatchSummary,
}

/// Compact table form: rows separated by `|`, entries by spaces.
pub fn table_string(a: &Automaton) -> String {
    (0..a.states())
        .map(|q| {
            (0..a.letters())
                .map(|l| a.step(q, l).to_string())
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect::<Vec<_>>()
        .join("|")
}

fn inputs(config: &ExperimentConfig) -> Result<Vec<Automaton>, CliError> {
    let mut out = Vec::new();
    for n in config.n_min..=config.n_max {
        match config.mode {
            Mode::Exhaustive => {
                census::for_each_automaton(n, config.letters, CensusMode::IsoReduced, |a| {
                    out.push(a.clone())
                })?;
            }
            Mode::Sampled => {
                let master = config.seed.expect("validated");
                for _ in 0..config.samples {
                    let seed = row_seed(master ^ 0x5eed, out.len());
                    out.push(random_automaton(n, config.letters, seed)?);
                }
            }
        }
    }
    Ok(out)
}

/// Worker pool sized by `SYNCHRO_THREADS` when set.
pub fn thread_pool() -> Result<rayon::ThreadPool, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("SYNCHRO_THREADS") {
        let k: usize = v
            .parse()
            .map_err(|_| CliError::Config(format!("SYNCHRO_THREADS must be a positive integer, got {v}")))?;
        builder = builder.num_threads(k.max(1));
    }
    builder
        .build()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))
}

pub fn run_batch(config: &ExperimentConfig) -> Result<BatchOutput, CliError> {
    config.validate()?;
    let automata = inputs(config)?;
    let master = config.seed.unwrap_or(0);
    let rows: Vec<BatchRow> = thread_pool()?.install(|| {
        automata
            .par_iter()
            .enumerate()
            .map(|(index, a)| {
                let analysis = AnalysisConfig {
                    seed: row_seed(master, index),
                    ..config.analysis
                };
                let (report, error) = match analyze(a, &analysis) {
                    Ok(r) => (Some(r), None),
                    Err(e) => (None, Some(e.to_string())),
                };
                BatchRow {
                    index,
                    table: table_string(a),
                    report,
                    error,
                }
            })
            .collect()
    });
    let summary = summarize(&rows);
    Ok(BatchOutput {
        schema: SCHEMA_VERSION.to_string(),
        config: config.clone(),
        rows,
        summary,
    })
}

pub fn summarize(rows: &[BatchRow]) -> BatchSummary {
    let mut s = BatchSummary {
        rows: rows.len(),
        ..Default::default()
    };
    for row in rows {
        match &row.report {
            Some(r) => {
                s.synchronizing += r.synchronizing as usize;
                s.semisimple += r.is_semisimple() as usize;
                s.skipped_stages += r.skipped.len();
                s.violations += r.violations.len();
                s.violating_rows += !r.violations.is_empty() as usize;
            }
            None => s.errors += 1,
        }
    }
    s
}

/// Column order of the CSV output; the final row has `kind = summary`.
pub const CSV_COLUMNS: [&str; 24] = [
    "kind",
    "index",
    "states",
    "letters",
    "table",
    "digest",
    "synchronizing",
    "reset_len",
    "former_rank",
    "simple",
    "semisimple",
    "monoid_size",
    "dim_r",
    "dim_rad",
    "k",
    "dims",
    "rnk",
    "core",
    "sigma_class_counts",
    "synth_len",
    "bound_2r",
    "bound_cubic",
    "violations",
    "notes",
];

fn cell<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map_or(String::new(), T::to_string)
}

fn list(v: &[usize]) -> String {
    v.iter().map(usize::to_string).collect::<Vec<_>>().join(";")
}

fn csv_record(row: &BatchRow) -> Vec<String> {
    let Some(r) = &row.report else {
        let mut rec = vec![String::new(); CSV_COLUMNS.len()];
        rec[0] = "automaton".into();
        rec[1] = row.index.to_string();
        rec[4] = row.table.clone();
        rec[23] = format!("error: {}", cell(&row.error));
        return rec;
    };
    let notes: Vec<String> = r
        .skipped
        .iter()
        .map(|s| format!("{}: {}", s.stage, s.reason))
        .collect();
    vec![
        "automaton".into(),
        row.index.to_string(),
        r.states.to_string(),
        r.letters.to_string(),
        row.table.clone(),
        r.digest.clone(),
        r.synchronizing.to_string(),
        cell(&r.reset_len),
        cell(&r.former_rank),
        cell(&r.simple),
        cell(&r.semisimple),
        cell(&r.monoid_size),
        cell(&r.dim_r),
        cell(&r.dim_rad),
        cell(&r.k),
        list(&r.dims),
        list(&r.rnk),
        list(&r.core),
        list(&r.sigma_class_counts),
        cell(&r.synth_len),
        cell(&r.bound_2r),
        cell(&r.bound_cubic),
        r.violations.join(";"),
        notes.join("; "),
    ]
}

fn summary_record(s: &BatchSummary) -> Vec<String> {
    let mut rec = vec![String::new(); CSV_COLUMNS.len()];
    rec[0] = "summary".into();
    rec[1] = s.rows.to_string();
    rec[6] = s.synchronizing.to_string();
    rec[10] = s.semisimple.to_string();
    rec[22] = s.violations.to_string();
    rec[23] = format!(
        "violating_rows={} errors={} skipped_stages={}",
        s.violating_rows, s.errors, s.skipped_stages
    );
    rec
}

pub fn write_csv(out: &BatchOutput, w: impl Write) -> Result<(), CliError> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(CSV_COLUMNS)?;
    for row in &out.rows {
        wtr.write_record(csv_record(row))?;
    }
    wtr.write_record(summary_record(&out.summary))?;
    wtr.flush()?;
    Ok(())
}

/// Writes JSON when the path ends in `.json`, CSV otherwise.
pub fn write_output(out: &BatchOutput, path: &Path) -> Result<(), CliError> {
    let mut file = BufWriter::new(File::create(path)?);
    if path.extension().is_some_and(|e| e == "json") {
        for row in &out.rows {
            if let Some(r) = &row.report {
                r.validate()?;
            }
        }
        serde_json::to_writer_pretty(&mut file, out)?;
        file.write_all(b"\n")?;
    } else {
        write_csv(out, &mut file)?;
    }
    file.flush()?;
    Ok(())
}
