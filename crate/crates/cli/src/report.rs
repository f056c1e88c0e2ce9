//! Per-automaton analysis: drives every stage of the pipeline and records the
//! results, the inequality checks and anything that had to be skipped.

use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use synchro_core::algebra::{Residuals, Tolerances};
use synchro_core::automaton::{self, DEFAULT_SUBSET_CAP};
use synchro_core::ideal::{self, IdealAnalysis};
use synchro_core::{congruence, packing, AlgebraicStructure, Automaton, Error, PipelineConfig};

use crate::CliError;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalysisConfig {
    pub pipeline: PipelineConfig,
    /// Seed of the central-element sampler.
    pub seed: u64,
    pub subset_cap: usize,
    /// Wall-clock timings make reports non-reproducible, so they are opt-in.
    pub timings: bool,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self {
            pipeline: PipelineConfig::default(),
            seed: 0,
            subset_cap: DEFAULT_SUBSET_CAP,
            timings: false,
        }
    }
}

/// Outcome of each inequality; `None` when the stage behind it did not run.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Checks {
    /// `|reset| ≤ (n−1)²`.
    pub cerny: Option<bool>,
    /// `|reset| ≤ (n−1)·D(2, Fr, n)`.
    pub reset_within_2r: Option<bool>,
    /// `|reset|·Fr(Fr−1) ≤ n(n−1)²`.
    pub reset_within_cubic: Option<bool>,
    /// Empty support exactly on exact radical elements.
    pub radical_agreement: Option<bool>,
    pub constant_rank: Option<bool>,
    pub fr_le_min_rnk: Option<bool>,
    pub fr_eq_min_rnk: Option<bool>,
    /// `|I_i/∼_i| ≤ D(2, r_i, n) + 1` on the core components.
    pub sigma_within_packing: Option<bool>,
    pub sigma_zero_singleton: Option<bool>,
    pub sigma_right_compatible: Option<bool>,
    /// Synthesized word is reset and within its certificate bounds.
    pub synthesis: Option<bool>,
}

impl Checks {
    /// Names of failed checks that are binding for this automaton. Bounds proven
    /// only for semisimple automata are not binding otherwise.
    pub fn violations(&self, semisimple: bool) -> Vec<String> {
        let always = [
            ("cerny", self.cerny),
            ("radical_agreement", self.radical_agreement),
            ("constant_rank", self.constant_rank),
            ("fr_le_min_rnk", self.fr_le_min_rnk),
        ];
        let semisimple_only = [
            ("reset_within_2r", self.reset_within_2r),
            ("reset_within_cubic", self.reset_within_cubic),
            ("fr_eq_min_rnk", self.fr_eq_min_rnk),
            ("sigma_within_packing", self.sigma_within_packing),
            ("sigma_zero_singleton", self.sigma_zero_singleton),
            ("sigma_right_compatible", self.sigma_right_compatible),
            ("synthesis", self.synthesis),
        ];
        always
            .into_iter()
            .chain(semisimple_only.into_iter().filter(|_| semisimple))
            .filter(|(_, v)| *v == Some(false))
            .map(|(name, _)| name.to_string())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Skipped {
    pub stage: String,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Timings {
    pub reset_ms: f64,
    pub algebra_ms: f64,
    pub wedderburn_ms: f64,
    pub ideal_ms: f64,
    pub total_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisReport {
    pub schema: String,
    /// SHA-256 of the `.aut` serialization.
    pub digest: String,
    pub states: usize,
    pub letters: usize,
    pub synchronizing: bool,
    pub reset_len: Option<usize>,
    pub reset_word: Option<String>,
    pub former_rank: Option<usize>,
    pub simple: Option<bool>,
    pub semisimple: Option<bool>,
    pub monoid_size: Option<usize>,
    pub dim_r: Option<usize>,
    pub dim_rad: Option<usize>,
    pub k: Option<usize>,
    pub dims: Vec<usize>,
    pub residuals: Option<Residuals>,
    pub tolerances: Tolerances,
    pub seed: u64,
    /// `Rnk(I_i)` per component.
    pub rnk: Vec<usize>,
    /// Minimal core, 0-based component indices.
    pub core: Vec<usize>,
    /// Covering minimal sections of the core.
    pub sections: Vec<Vec<usize>>,
    /// σ-class counts of the core components, in core order.
    pub sigma_class_counts: Vec<usize>,
    pub synth_len: Option<usize>,
    pub synth_word: Option<String>,
    /// `(n−1)·D(2, Fr, n)`.
    pub bound_2r: Option<usize>,
    /// `⌊n(n−1)²/(Fr(Fr−1))⌋`.
    pub bound_cubic: Option<usize>,
    pub checks: Checks,
    pub violations: Vec<String>,
    pub skipped: Vec<Skipped>,
    pub timings: Option<Timings>,
}

pub fn digest(a: &Automaton) -> String {
    hex::encode(Sha256::digest(a.to_aut().as_bytes()))
}

fn ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

fn support_list(s: synchro_core::algebra::Support) -> Vec<usize> {
    s.iter().collect()
}

impl AnalysisReport {
    fn empty(a: &Automaton, config: &AnalysisConfig) -> Self {
        Self {
            schema: SCHEMA_VERSION.to_string(),
            digest: digest(a),
            states: a.states(),
            letters: a.letters(),
            synchronizing: false,
            reset_len: None,
            reset_word: None,
            former_rank: None,
            simple: None,
            semisimple: None,
            monoid_size: None,
            dim_r: None,
            dim_rad: None,
            k: None,
            dims: Vec::new(),
            residuals: None,
            tolerances: config.pipeline.tolerances,
            seed: config.seed,
            rnk: Vec::new(),
            core: Vec::new(),
            sections: Vec::new(),
            sigma_class_counts: Vec::new(),
            synth_len: None,
            synth_word: None,
            bound_2r: None,
            bound_cubic: None,
            checks: Checks::default(),
            violations: Vec::new(),
            skipped: Vec::new(),
            timings: None,
        }
    }

    fn skip(&mut self, stage: &str, reason: impl ToString) {
        self.skipped.push(Skipped {
            stage: stage.to_string(),
            reason: reason.to_string(),
        });
    }

    /// Recomputes every check that depends only on recorded fields.
    fn recheck(&self) -> Checks {
        let mut c = self.checks.clone();
        if let (Some(len), n) = (self.reset_len, self.states) {
            c.cerny = Some(len <= (n - 1) * (n - 1));
            if let Some(fr) = self.former_rank {
                c.reset_within_cubic = Some(len * fr * (fr - 1) <= n * (n - 1) * (n - 1));
                if let Some(b) = self.bound_2r {
                    c.reset_within_2r = Some(len <= b);
                }
                if let Some(sl) = self.synth_len {
                    let within = self.bound_2r.is_none_or(|b| sl <= b)
                        && sl * fr * (fr - 1) <= n * (n - 1) * (n - 1);
                    c.synthesis = Some(c.synthesis != Some(false) && within);
                }
                if let Some(&min) = self.rnk.iter().min() {
                    c.fr_le_min_rnk = Some(fr <= min);
                    c.fr_eq_min_rnk = self.semisimple.filter(|&s| s).map(|_| fr == min);
                }
            }
        }
        c
    }

    pub fn is_semisimple(&self) -> bool {
        self.semisimple == Some(true)
    }

    /// Checks recorded inequalities against the fields they summarize.
    pub fn validate(&self) -> Result<(), CliError> {
        if self.schema != SCHEMA_VERSION {
            return Err(CliError::Report(format!("unsupported schema {}", self.schema)));
        }
        let recomputed = self.recheck();
        if recomputed != self.checks {
            return Err(CliError::Report(format!(
                "recorded checks disagree with fields for {}",
                self.digest
            )));
        }
        if self.checks.violations(self.is_semisimple()) != self.violations {
            return Err(CliError::Report(format!(
                "violation list is stale for {}",
                self.digest
            )));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String, CliError> {
        self.validate()?;
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let report: Self = serde_json::from_str(text)?;
        report.validate()?;
        Ok(report)
    }
}

/// Runs the full pipeline on one automaton. Module failures are recorded as skipped
/// stages; only internal invariant faults are returned as errors.
pub fn analyze(a: &Automaton, config: &AnalysisConfig) -> Result<AnalysisReport, CliError> {
    let start = Instant::now();
    let mut timings = Timings::default();
    let mut r = AnalysisReport::empty(a, config);
    let n = a.states();
    r.synchronizing = automaton::is_synchronizing(a);
    if n == 1 {
        r.reset_len = Some(0);
        r.reset_word = Some(String::new());
        r.skip("algebra", "single state");
        return finish(r, config, timings, start);
    }
    if !r.synchronizing {
        r.skip("algebra", "not synchronizing");
        return finish(r, config, timings, start);
    }

    let t = Instant::now();
    match automaton::shortest_reset_word_capped(a, config.subset_cap) {
        Ok(Some(w)) => {
            r.reset_len = Some(w.len());
            r.reset_word = Some(w.to_string());
        }
        Ok(None) => return Err(CliError::Core(Error::NotSynchronizing)),
        Err(e) => r.skip("reset", e),
    }
    match automaton::former_rank(a) {
        Ok(fr) => {
            r.former_rank = Some(fr);
            match packing::packing_number(fr, n) {
                Ok(d) => r.bound_2r = Some((n - 1) * d),
                Err(e) => r.skip("packing", e),
            }
            r.bound_cubic = Some(n * (n - 1) * (n - 1) / (fr * (fr - 1)));
        }
        Err(e) => r.skip("former_rank", e),
    }
    r.simple = Some(congruence::is_simple(a)?);
    timings.reset_ms = ms(t);

    let t = Instant::now();
    let s = match AlgebraicStructure::new(a, &config.pipeline) {
        Ok(s) => s,
        Err(e @ Error::MonoidTooLarge { .. }) => {
            r.skip("algebra", e);
            return finish(r, config, timings, start);
        }
        Err(e) => return Err(e.into()),
    };
    r.monoid_size = Some(s.monoid().len());
    r.dim_r = Some(s.algebra().dim());
    r.dim_rad = Some(s.radical().dim());
    r.semisimple = Some(s.is_semisimple());
    timings.algebra_ms = ms(t);

    let t = Instant::now();
    let wd = match s.wedderburn(&config.pipeline.tolerances, config.seed) {
        Ok(wd) => wd,
        Err(e @ Error::DecompositionFailed(_)) => {
            r.skip("wedderburn", e);
            return finish(r, config, timings, start);
        }
        Err(e) => return Err(e.into()),
    };
    r.k = Some(wd.k);
    r.dims = wd.dims.clone();
    r.residuals = Some(wd.residuals);
    timings.wedderburn_ms = ms(t);

    let t = Instant::now();
    let analysis = match IdealAnalysis::new(&s, &wd) {
        Ok(an) => an,
        Err(e @ Error::ToleranceAmbiguity { .. }) => {
            r.skip("ideal", format!("undetermined: {e}"));
            return finish(r, config, timings, start);
        }
        Err(e) => return Err(e.into()),
    };
    r.checks.radical_agreement = Some(
        (0..s.monoid().len()).all(|e| analysis.supports[e].is_empty() == s.is_radical(e)),
    );
    r.rnk = analysis.rnk();
    r.checks.constant_rank = Some(analysis.ideals.iter().all(|d| d.constant_rank()));
    r.core = support_list(analysis.core.members);
    r.sections = analysis.core.sections.iter().map(|sec| support_list(sec.support)).collect();
    match analysis.core_sigma_classes(s.monoid()) {
        Ok(sigmas) => {
            let mut within = true;
            for sigma in &sigmas {
                let d = packing::packing_number(analysis.ideals[sigma.component].rnk, n)?;
                within &= sigma.count() <= d + 1;
                r.sigma_class_counts.push(sigma.count());
            }
            r.checks.sigma_within_packing = Some(within);
            r.checks.sigma_zero_singleton = Some(sigmas.iter().all(|sg| sg.zero_is_singleton()));
            r.checks.sigma_right_compatible = Some(
                sigmas
                    .iter()
                    .all(|sg| sg.is_right_compatible(&analysis.components[sg.component])),
            );
        }
        Err(e @ Error::RepresentationFailure { .. }) => r.skip("sigma", e),
        Err(e) => return Err(e.into()),
    }
    if s.is_semisimple() {
        match ideal::synthesize_with(&s, &wd, &analysis) {
            Ok((w, _)) => {
                r.synth_len = Some(w.len());
                r.synth_word = Some(w.to_string());
                r.checks.synthesis = Some(true);
            }
            Err(e @ Error::BoundViolation(_)) => {
                r.checks.synthesis = Some(false);
                r.skip("synthesis", e);
            }
            Err(e) => return Err(e.into()),
        }
    }
    timings.ideal_ms = ms(t);
    finish(r, config, timings, start)
}

fn finish(
    mut r: AnalysisReport,
    config: &AnalysisConfig,
    mut timings: Timings,
    start: Instant,
) -> Result<AnalysisReport, CliError> {
    r.checks = r.recheck();
    r.violations = r.checks.violations(r.is_semisimple());
    if config.timings {
        timings.total_ms = ms(start);
        r.timings = Some(timings);
    }
    r.validate()?;
    Ok(r)
}

/// Human-readable summary for the terminal.
pub fn render_text(r: &AnalysisReport) -> String {
    fn opt<T: std::fmt::Display>(v: &Option<T>) -> String {
        v.as_ref().map_or("-".to_string(), T::to_string)
    }
    let mut lines = vec![
        format!("automaton      {} states, {} letters ({})", r.states, r.letters, &r.digest[..12]),
        format!("synchronizing  {}", r.synchronizing),
        format!("reset word     {} (length {})", opt(&r.reset_word), opt(&r.reset_len)),
        format!("former rank    {}", opt(&r.former_rank)),
        format!("simple         {}", opt(&r.simple)),
        format!("semisimple     {}", opt(&r.semisimple)),
        format!(
            "algebra        |M| = {}, dim R = {}, dim Rad = {}",
            opt(&r.monoid_size),
            opt(&r.dim_r),
            opt(&r.dim_rad)
        ),
        format!("components     k = {}, n_i = {:?}", opt(&r.k), r.dims),
        format!("Rnk(I_i)       {:?}", r.rnk),
        format!("core           {:?} covered by {:?}", r.core, r.sections),
        format!("sigma classes  {:?}", r.sigma_class_counts),
        format!("synthesized    {} (length {})", opt(&r.synth_word), opt(&r.synth_len)),
        format!("bounds         2r: {}, cubic: {}", opt(&r.bound_2r), opt(&r.bound_cubic)),
    ];
    if let Some(res) = &r.residuals {
        lines.push(format!(
            "residuals      idempotent {:.1e}, completeness {:.1e}, trace {:.1e}, separation {}",
            res.idempotent,
            res.completeness,
            res.trace,
            res.separation.map_or("-".to_string(), |s| format!("{s:.2e}"))
        ));
    }
    for s in &r.skipped {
        lines.push(format!("skipped        {}: {}", s.stage, s.reason));
    }
    lines.push(if r.violations.is_empty() {
        "violations     none".to_string()
    } else {
        format!("violations     {}", r.violations.join(", "))
    });
    if let Some(t) = &r.timings {
        lines.push(format!("time           {:.1} ms", t.total_ms));
    }
    lines.join("\n")
}
