//! Executable acceptance checks. Each criterion reports pass/fail with the
//! numbers it looked at.

use std::fmt;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use synchro_core::algebra::{Tolerances, WedderburnData};
use synchro_core::automaton::{self, cerny, random_automaton};
use synchro_core::census::{self, CensusMode};
use synchro_core::congruence::{self, Partition};
use synchro_core::ideal::{self, IdealAnalysis};
use synchro_core::packing::{self, PackingInstance, DEFAULT_BUDGET};
use synchro_core::{AlgebraicStructure, Automaton, PipelineConfig, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Quick,
    Full,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub id: usize,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {:>2}. {}: {} ({:.2} s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail,
            self.seconds
        )
    }
}

/// One synchronizing automaton of the census with its decomposed algebra.
pub struct CensusEntry {
    pub automaton: Automaton,
    pub structure: AlgebraicStructure,
    pub wedderburn: WedderburnData,
    pub analysis: IdealAnalysis,
}

impl CensusEntry {
    pub fn new(a: Automaton) -> Result<Self> {
        let structure = AlgebraicStructure::new(&a, &PipelineConfig::default())?;
        let wedderburn = structure.wedderburn(&Tolerances::default(), 0)?;
        let analysis = IdealAnalysis::new(&structure, &wedderburn)?;
        Ok(Self {
            automaton: a,
            structure,
            wedderburn,
            analysis,
        })
    }

    fn n(&self) -> usize {
        self.automaton.states()
    }

    fn semisimple(&self) -> bool {
        self.structure.is_semisimple()
    }
}

/// Synchronizing binary automata with 3 and 4 states, one per isomorphism class.
pub fn census_entries() -> Result<Vec<CensusEntry>> {
    let mut out = Vec::new();
    for n in 3..=4 {
        for a in census::census(n, 2, CensusMode::IsoReduced)? {
            if automaton::is_synchronizing(&a) {
                out.push(CensusEntry::new(a)?);
            }
        }
    }
    Ok(out)
}

/// Tally of checked cases and failures, with the first failure kept for the report.
#[derive(Default)]
struct Tally {
    checked: usize,
    failed: usize,
    first: Option<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
            if self.first.is_none() {
                self.first = Some(what());
            }
        }
    }

    fn passed(&self) -> bool {
        self.failed == 0 && self.checked > 0
    }

    fn detail(&self, what: &str) -> String {
        let mut s = format!("{} {what}, {} violations", self.checked, self.failed);
        if let Some(f) = &self.first {
            s.push_str(&format!("; first: {f}"));
        }
        s
    }
}

fn table(a: &Automaton) -> String {
    a.to_aut().trim_end().replace('\n', "/")
}

fn cerny_lengths() -> Result<(bool, String)> {
    let mut t = Tally::default();
    let mut lengths = Vec::new();
    for n in 3..=8 {
        let len = automaton::shortest_reset_word(&cerny(n)?)?.map_or(0, |w| w.len());
        lengths.push(len);
        t.check(len == (n - 1) * (n - 1), || format!("n={n} gave {len}"));
    }
    Ok((t.passed(), format!("lengths {lengths:?} for n=3..8; {}", t.detail("cases"))))
}

fn cerny_simple_semisimple() -> Result<(bool, String)> {
    let mut t = Tally::default();
    let mut rad = Vec::new();
    for n in 3..=6 {
        let a = cerny(n)?;
        let simple = congruence::is_simple(&a)?;
        let s = AlgebraicStructure::new(&a, &PipelineConfig::default())?;
        rad.push(s.radical().dim());
        t.check(simple && s.radical().dim() == 0, || format!("n={n}"));
    }
    Ok((t.passed(), format!("radical dims {rad:?} for n=3..6, all simple; {}", t.detail("cases"))))
}

fn main_bound(entries: &[CensusEntry]) -> Result<(bool, String)> {
    let mut t = Tally::default();
    for e in entries.iter().filter(|e| e.semisimple()) {
        let n = e.n();
        let len = automaton::shortest_reset_word(&e.automaton)?.expect("synchronizing").len();
        let fr = automaton::former_rank(&e.automaton)?;
        let d = packing::packing_number(fr, n)?;
        t.check(len <= (n - 1) * d && len * fr * (fr - 1) <= n * (n - 1) * (n - 1), || {
            format!("{} has |w|={len}, Fr={fr}", table(&e.automaton))
        });
    }
    Ok((t.passed(), t.detail("semisimple automata")))
}

fn former_rank_equality(entries: &[CensusEntry]) -> Result<(bool, String)> {
    let mut eq = Tally::default();
    let mut le = Tally::default();
    for e in entries {
        let fr = automaton::former_rank(&e.automaton)?;
        let min = *e.analysis.rnk().iter().min().expect("k ≥ 1");
        le.check(fr <= min, || format!("{}: Fr={fr} > {min}", table(&e.automaton)));
        if e.semisimple() {
            eq.check(fr == min, || format!("{}: Fr={fr} ≠ {min}", table(&e.automaton)));
        }
    }
    Ok((
        eq.passed() && le.passed(),
        format!("equality: {}; inequality: {}", eq.detail("semisimple"), le.detail("synchronizing")),
    ))
}

fn sample_structure(rng: &mut ChaCha8Rng, n_max: usize) -> Result<Option<(Automaton, AlgebraicStructure)>> {
    let n = rng.random_range(3..=n_max);
    let a = random_automaton(n, 2, rng.random())?;
    if !automaton::is_synchronizing(&a) {
        return Ok(None);
    }
    let s = AlgebraicStructure::new(&a, &PipelineConfig::default())?;
    Ok(Some((a, s)))
}

fn section_disjointness() -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5ec7);
    let mut t = Tally::default();
    let mut automata = 0;
    while t.checked < 1000 {
        let Some((a, s)) = sample_structure(&mut rng, 5)? else {
            continue;
        };
        let wd = s.wedderburn(&Tolerances::default(), rng.random())?;
        let supports = ideal::element_supports(&s, &wd);
        let mt = s.monoid();
        let live: Vec<usize> = (0..mt.len()).filter(|&e| !supports[e].is_empty()).collect();
        automata += 1;
        for _ in 0..20 {
            let v1 = live[rng.random_range(0..live.len())];
            let v2 = live[rng.random_range(0..live.len())];
            let s1 = ideal::minimal_section_of(mt, &supports, v1, &mt.witness(v1)).expect("live");
            let s2 = ideal::minimal_section_of(mt, &supports, v2, &mt.witness(v2)).expect("live");
            t.check(
                s1.support == s2.support || !s1.support.intersects(s2.support),
                || format!("{} sections {:?} and {:?}", table(&a), s1.support, s2.support),
            );
        }
    }
    Ok((t.passed(), format!("{} over {automata} automata", t.detail("triples"))))
}

fn radical_word_laws() -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7ad);
    let mut power = Tally::default();
    let mut kernels = Tally::default();
    while power.checked < 200 {
        let Some((a, s)) = sample_structure(&mut rng, 5)? else {
            continue;
        };
        if s.is_semisimple() {
            continue;
        }
        let n = a.states();
        let u = s.monoid().witness(s.shortest_radical());
        let rank = automaton::rank(&a, &u.power(n - 1))?;
        power.check(rank == 1, || format!("{}: rank(({u})^{}) = {rank}", table(&a), n - 1));
        let mt = s.monoid();
        for w in (0..mt.len()).filter(|&e| s.is_radical(e) && !mt.is_reset(e)) {
            let sigma = congruence::largest_congruence_below(&a, &Partition::kernel(mt.element(w)))?;
            kernels.check(!sigma.is_identity(), || {
                format!("{}: trivial congruence below Ker({})", table(&a), mt.witness(w))
            });
        }
    }
    Ok((
        power.passed() && kernels.passed(),
        format!(
            "power law: {}; congruence: {}",
            power.detail("non-semisimple automata"),
            kernels.detail("radical non-reset elements")
        ),
    ))
}

fn sigma_packing(entries: &[CensusEntry]) -> Result<(bool, String)> {
    let mut t = Tally::default();
    for e in entries.iter().filter(|e| e.semisimple()) {
        let mt = e.structure.monoid();
        for sec in ideal::all_minimal_sections(mt, &e.analysis.supports) {
            for i in sec.support.iter() {
                let sigma = ideal::sigma_classes(mt, &e.analysis.components[i], &sec)?;
                let d = packing::packing_number(e.analysis.ideals[i].rnk, e.n())?;
                t.check(sigma.count() <= d + 1 && sigma.zero_is_singleton(), || {
                    format!(
                        "{} component {i}: {} classes, D={d}, zero singleton {}",
                        table(&e.automaton),
                        sigma.count(),
                        sigma.zero_is_singleton()
                    )
                });
            }
        }
    }
    Ok((t.passed(), t.detail("(automaton, section, component) cases")))
}

fn packing_numbers() -> Result<(bool, String)> {
    let mut t = Tally::default();
    for n in 2..=8 {
        let p = PackingInstance::new(2, 2, n)?;
        let (v, design) = packing::exact_packing(&p, DEFAULT_BUDGET)?;
        t.check(v == n * (n - 1) / 2 && design.is_packing(2), || format!("D(2,2,{n}) = {v}"));
    }
    let (v, _) = packing::exact_packing(&PackingInstance::new(2, 3, 7)?, DEFAULT_BUDGET)?;
    t.check(v == 7, || format!("D(2,3,7) = {v}"));
    let mut instances = 0;
    for n in 1..=9 {
        for r in 1..=n {
            for tt in 1..=r {
                let p = PackingInstance::new(tt, r, n)?;
                let (v, design) = packing::exact_packing(&p, DEFAULT_BUDGET)?;
                instances += 1;
                for (name, bound) in packing::upper_bounds(&p) {
                    t.check(v as u64 <= bound && design.len() == v, || {
                        format!("D({tt},{r},{n}) = {v} exceeds {name} bound {bound}")
                    });
                }
            }
        }
    }
    Ok((t.passed(), format!("{instances} exact instances; {}", t.detail("checks"))))
}

fn numeric_agreement(entries: &[CensusEntry]) -> Result<(bool, String)> {
    let mut t = Tally::default();
    let mut worst: f64 = 0.0;
    for e in entries {
        let s = &e.structure;
        let wd = &e.wedderburn;
        let agree = (0..s.monoid().len()).all(|x| e.analysis.supports[x].is_empty() == s.is_radical(x));
        let res = wd.residuals;
        worst = worst.max(res.idempotent).max(res.completeness);
        let squares: usize = wd.dims.iter().map(|d| d * d).sum();
        let mut stable = true;
        for seed in 1..10 {
            let other = s.wedderburn(&Tolerances::default(), seed)?;
            stable &= other.dims == wd.dims;
        }
        t.check(
            agree && res.idempotent < 1e-8 && res.completeness < 1e-8 && squares == s.quotient().dim() && stable,
            || format!("{}: agree {agree}, residuals {res:?}, stable {stable}", table(&e.automaton)),
        );
    }
    Ok((t.passed(), format!("{}; worst residual {worst:.1e}", t.detail("automata"))))
}

fn synthesizer(entries: &[CensusEntry]) -> Result<(bool, String)> {
    let mut t = Tally::default();
    let mut longest = 0;
    for e in entries.iter().filter(|e| e.semisimple()) {
        let outcome = ideal::synthesize_with(&e.structure, &e.wedderburn, &e.analysis);
        let ok = match &outcome {
            Ok((w, cert)) => {
                longest = longest.max(w.len());
                automaton::rank(&e.automaton, w)? == 1 && w.len() <= cert.bound_core && cert.holds()
            }
            Err(_) => false,
        };
        t.check(ok, || format!("{}: {:?}", table(&e.automaton), outcome.as_ref().map(|(w, _)| w.to_string())));
    }
    Ok((t.passed(), format!("{}; longest word {longest}", t.detail("semisimple automata"))))
}

const NAMES: [&str; 10] = [
    "Cerny lengths",
    "simple implies semisimple on the Cerny family",
    "main bound on the census",
    "former rank equals min Rnk",
    "minimal sections equal or disjoint",
    "radical word laws",
    "sigma-class packing bound",
    "packing numbers",
    "numerical vs exact agreement",
    "constructive synthesizer",
];

fn record(id: usize, f: impl FnOnce() -> Result<(bool, String)>) -> CriterionResult {
    let start = Instant::now();
    let (passed, detail) = f().unwrap_or_else(|e| (false, format!("error: {e}")));
    CriterionResult {
        id,
        name: NAMES[id - 1].to_string(),
        passed,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    }
}

/// Runs the criteria of the given level, calling `progress` after each one.
pub fn run_suite(level: Level, mut progress: impl FnMut(&CriterionResult)) -> Vec<CriterionResult> {
    let mut results = Vec::new();
    let mut push = |r: CriterionResult| {
        progress(&r);
        results.push(r);
    };
    push(record(1, cerny_lengths));
    push(record(2, cerny_simple_semisimple));
    if level == Level::Full {
        let start = Instant::now();
        match census_entries() {
            Ok(entries) => {
                let setup = start.elapsed().as_secs_f64();
                let mut first = true;
                let mut timed = |id, f: &dyn Fn(&[CensusEntry]) -> Result<(bool, String)>| {
                    let mut r = record(id, || f(&entries));
                    if std::mem::take(&mut first) {
                        r.seconds += setup;
                    }
                    r
                };
                push(timed(3, &main_bound));
                push(timed(4, &former_rank_equality));
                push(record(5, section_disjointness));
                push(record(6, radical_word_laws));
                push(timed(7, &sigma_packing));
                push(record(8, packing_numbers));
                push(timed(9, &numeric_agreement));
                push(timed(10, &synthesizer));
            }
            Err(e) => {
                for id in [3, 4, 7, 9, 10] {
                    push(record(id, || Ok((false, format!("census setup failed: {e}")))));
                }
                push(record(5, section_disjointness));
                push(record(6, radical_word_laws));
                push(record(8, packing_numbers));
            }
        }
    } else {
        push(record(8, packing_numbers));
    }
    results.sort_by_key(|r| r.id);
    results
}

pub fn all_passed(results: &[CriterionResult]) -> bool {
    results.iter().all(|r| r.passed)
}
