//! The semigroup layer on top of the Wedderburn split: factor monoids `M_i`,
//! their 0-minimal ideals, supports, minimal sections, cores, σ-classes and the
//! greedy reset-word synthesizer.
//!
//! Everything is computed on monoid elements. Word-level minima are realized by
//! shortlex witnesses, which is sound because rank and every `θ_i` factor through
//! the transformation a word induces.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::algebra::wedderburn::C64;
use crate::algebra::{AlgebraicStructure, MonoidTable, Support, WedderburnData};
use crate::automaton::{self, StateSet, Word};
use crate::error::{Error, Result};
use crate::packing;

/// Supports of every monoid element, indexed like the monoid.
pub fn element_supports(s: &AlgebraicStructure, wd: &WedderburnData) -> Vec<Support> {
    (0..s.monoid().len())
        .map(|e| wd.support(s.quotient_image(e)))
        .collect()
}

/// `supp(v)` for a word.
pub fn theta_support(s: &AlgebraicStructure, wd: &WedderburnData, v: &Word) -> Result<Support> {
    let e = s.element_of_word(v)?;
    Ok(wd.support(s.quotient_image(e)))
}

/// The factor monoid `M_i = θ_i(M)` as a partition of the transition monoid.
#[derive(Debug, Clone)]
pub struct ComponentMonoid {
    component: usize,
    letters: usize,
    class_of: Vec<usize>,
    representatives: Vec<usize>,
    right: Vec<usize>,
    left: Vec<usize>,
    /// Classes of the unique 0-minimal ideal, excluding zero.
    minimal: Vec<usize>,
}

/// Class id of `0_i`.
pub const ZERO_CLASS: usize = 0;

fn distance(x: &[C64], y: &[C64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt()
}

/// Builds `M_i` by grouping elements with equal `θ_i`-images.
///
/// Two images are equal when closer than `τ_zero/2` and distinct when farther
/// than `2·τ_zero`; anything between is reported rather than guessed.
pub fn component_monoid(
    s: &AlgebraicStructure,
    wd: &WedderburnData,
    i: usize,
) -> Result<ComponentMonoid> {
    let mt = s.monoid();
    let tau = wd.tolerances.zero;
    let zero_image = vec![C64::new(0.0, 0.0); s.quotient().dim()];
    let mut images: Vec<Vec<C64>> = vec![zero_image];
    let mut representatives: Vec<usize> = vec![usize::MAX];
    let mut class_of = Vec::with_capacity(mt.len());
    for e in 0..mt.len() {
        let theta = wd.component_image(i, s.quotient_image(e));
        let mut found = None;
        for (c, img) in images.iter().enumerate() {
            let d = distance(&theta, img);
            if d <= tau / 2.0 {
                found = Some(c);
                break;
            }
            if d < 2.0 * tau {
                return Err(Error::ToleranceAmbiguity {
                    component: i,
                    distance: d,
                });
            }
        }
        let c = found.unwrap_or_else(|| {
            images.push(theta);
            representatives.push(e);
            images.len() - 1
        });
        if c == ZERO_CLASS && representatives[ZERO_CLASS] == usize::MAX {
            representatives[ZERO_CLASS] = e;
        }
        if s.is_radical(e) && c != ZERO_CLASS {
            return Err(Error::InvariantViolated(format!(
                "radical element {e} has a nonzero image in component {i}"
            )));
        }
        class_of.push(c);
    }
    if representatives[ZERO_CLASS] == usize::MAX {
        return Err(Error::NotSynchronizing);
    }
    let classes = representatives.len();
    let m = mt.letters();
    let mut right = vec![usize::MAX; classes * m];
    let mut left = vec![usize::MAX; classes * m];
    for e in 0..mt.len() {
        let c = class_of[e];
        for a in 0..m {
            for (table, next) in [(&mut right, mt.right(e, a)), (&mut left, mt.left(e, a))] {
                let slot = &mut table[c * m + a];
                if *slot == usize::MAX {
                    *slot = class_of[next];
                } else if *slot != class_of[next] {
                    return Err(Error::InvariantViolated(format!(
                        "component {i}: class product is not well defined"
                    )));
                }
            }
        }
    }
    let mut cm = ComponentMonoid {
        component: i,
        letters: m,
        class_of,
        representatives,
        right,
        left,
        minimal: Vec::new(),
    };
    cm.minimal = cm.find_minimal_ideal()?;
    Ok(cm)
}

impl ComponentMonoid {
    pub fn component(&self) -> usize {
        self.component
    }

    /// Number of classes, zero included.
    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }

    pub fn class_of(&self, e: usize) -> usize {
        self.class_of[e]
    }

    /// Shortlex-first monoid element of a class.
    pub fn representative(&self, c: usize) -> usize {
        self.representatives[c]
    }

    pub fn right(&self, c: usize, a: usize) -> usize {
        self.right[c * self.letters + a]
    }

    pub fn left(&self, c: usize, a: usize) -> usize {
        self.left[c * self.letters + a]
    }

    pub fn product(&self, mt: &MonoidTable, c: usize, d: usize) -> usize {
        self.class_of[mt.product(self.representatives[c], self.representatives[d])]
    }

    /// Classes of the two-sided ideal generated by `c`.
    pub fn ideal_of(&self, c: usize) -> BTreeSet<usize> {
        let mut seen = BTreeSet::from([c]);
        let mut queue = VecDeque::from([c]);
        while let Some(x) = queue.pop_front() {
            for a in 0..self.letters {
                for y in [self.right(x, a), self.left(x, a)] {
                    if seen.insert(y) {
                        queue.push_back(y);
                    }
                }
            }
        }
        seen
    }

    /// `I_i ∖ {0}` as class ids.
    pub fn minimal_ideal(&self) -> &[usize] {
        &self.minimal
    }

    pub fn in_minimal_ideal(&self, c: usize) -> bool {
        self.minimal.binary_search(&c).is_ok()
    }

    /// Nonzero J-classes whose generated ideal contains nothing else but zero.
    fn find_minimal_ideal(&self) -> Result<Vec<usize>> {
        let ideals: Vec<BTreeSet<usize>> = (0..self.len()).map(|c| self.ideal_of(c)).collect();
        let mut minimal: Vec<Vec<usize>> = Vec::new();
        for c in 1..self.len() {
            let j_class: Vec<usize> = ideals[c]
                .iter()
                .copied()
                .filter(|&d| d != ZERO_CLASS && ideals[d].contains(&c))
                .collect();
            let is_minimal = ideals[c].iter().all(|&d| d == ZERO_CLASS || j_class.contains(&d));
            if is_minimal && !minimal.contains(&j_class) {
                minimal.push(j_class);
            }
        }
        match minimal.len() {
            1 => Ok(minimal.pop().expect("one class")),
            found => Err(Error::InvariantViolated(format!(
                "component {}: expected one 0-minimal ideal, found {found}",
                self.component
            ))),
        }
    }
}

/// `Rnk(I_i)` together with the per-class minima `Rnk_i(g)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealData {
    pub component: usize,
    pub classes: Vec<usize>,
    pub class_ranks: Vec<usize>,
    pub rnk: usize,
}

impl IdealData {
    pub fn constant_rank(&self) -> bool {
        self.class_ranks.iter().all(|&r| r == self.rnk)
    }
}

pub fn rnk_ideal(cm: &ComponentMonoid, mt: &MonoidTable) -> IdealData {
    let mut best = vec![usize::MAX; cm.len()];
    for e in 0..mt.len() {
        let c = cm.class_of(e);
        best[c] = best[c].min(mt.element(e).rank());
    }
    let class_ranks: Vec<usize> = cm.minimal_ideal().iter().map(|&c| best[c]).collect();
    IdealData {
        component: cm.component(),
        classes: cm.minimal_ideal().to_vec(),
        rnk: *class_ranks.iter().min().expect("0-minimal ideal is nonempty"),
        class_ranks,
    }
}

/// A `v`-minimal section: an inclusion-minimal nonempty support over `M·v·M`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimalSection {
    pub support: Support,
    /// Monoid element of the witness.
    pub element: usize,
    pub witness: Word,
    pub source: Word,
}

/// Minimal section of the element `v`, with `source` as its word.
pub fn minimal_section_of(
    mt: &MonoidTable,
    supports: &[Support],
    v: usize,
    source: &Word,
) -> Option<MinimalSection> {
    let ideal = mt.ideal(v);
    let nonempty: Vec<usize> = ideal
        .members()
        .iter()
        .copied()
        .filter(|&e| !supports[e].is_empty())
        .collect();
    let distinct: BTreeSet<Support> = nonempty.iter().map(|&e| supports[e]).collect();
    let element = nonempty.into_iter().find(|&e| {
        let s = supports[e];
        !distinct.iter().any(|&t| t != s && t.is_subset(s))
    })?;
    Some(MinimalSection {
        support: supports[element],
        element,
        witness: ideal.word_through(element, source).expect("member of the ideal"),
        source: source.clone(),
    })
}

pub fn minimal_section(
    s: &AlgebraicStructure,
    supports: &[Support],
    v: &Word,
) -> Result<Option<MinimalSection>> {
    let e = s.element_of_word(v)?;
    Ok(minimal_section_of(s.monoid(), supports, e, v))
}

/// Every distinct minimal section reachable from some monoid element.
pub fn all_minimal_sections(mt: &MonoidTable, supports: &[Support]) -> Vec<MinimalSection> {
    let mut out: Vec<MinimalSection> = Vec::new();
    for v in 0..mt.len() {
        if supports[v].is_empty() {
            continue;
        }
        if let Some(sec) = minimal_section_of(mt, supports, v, &mt.witness(v)) {
            if !out.iter().any(|o| o.support == sec.support) {
                out.push(sec);
            }
        }
    }
    out
}

/// A core `T`: no element has a nonempty support disjoint from `T`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoreSet {
    pub members: Support,
    pub minimal: bool,
    /// Pairwise disjoint minimal sections whose union contains the core.
    pub sections: Vec<MinimalSection>,
}

pub fn is_core(supports: &[Support], t: Support) -> bool {
    supports.iter().all(|&s| s.is_empty() || s.intersects(t))
}

fn subsets_of_size(k: usize, size: usize) -> Vec<Support> {
    fn rec(start: usize, k: usize, left: usize, acc: u64, out: &mut Vec<Support>) {
        if left == 0 {
            out.push(Support(acc));
            return;
        }
        for i in start..k {
            if k - i >= left {
                rec(i + 1, k, left - 1, acc | 1 << i, out);
            }
        }
    }
    let mut out = Vec::new();
    rec(0, k, size, 0, &mut out);
    out
}

/// Lexicographically first smallest core, with a covering family of minimal sections.
pub fn minimal_core(mt: &MonoidTable, supports: &[Support], k: usize) -> Result<CoreSet> {
    let members = (1..=k)
        .flat_map(|size| subsets_of_size(k, size))
        .find(|&t| is_core(supports, t))
        .unwrap_or(Support::full(k));
    let mut covered = Support::default();
    let mut sections: Vec<MinimalSection> = Vec::new();
    while !members.is_subset(covered) {
        let inside = Support(covered.0 & members.0);
        let outside = Support(members.0 & !covered.0);
        let v = (0..mt.len())
            .find(|&e| !supports[e].intersects(inside) && supports[e].intersects(outside))
            .ok_or_else(|| {
                Error::InvariantViolated("core is not covered by minimal sections".into())
            })?;
        let sec = minimal_section_of(mt, supports, v, &mt.witness(v))
            .expect("a nonempty support yields a section");
        if sec.support.intersects(covered) || !sec.support.intersects(outside) {
            return Err(Error::InvariantViolated(
                "minimal sections overlap inside the core".into(),
            ));
        }
        covered = Support(covered.0 | sec.support.0);
        sections.push(sec);
    }
    Ok(CoreSet {
        members,
        minimal: true,
        sections,
    })
}

/// The σ_i relation on `I_i` for a fixed minimal section, closed transitively.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SigmaClasses {
    pub component: usize,
    /// Nodes: `0_i` first, then the classes of `I_i ∖ {0}` in order.
    pub nodes: Vec<usize>,
    /// Equivalence class id of each node.
    pub class_id: Vec<usize>,
    /// Minimum-rank representatives (monoid elements) of each node.
    pub representatives: Vec<Vec<usize>>,
    /// Rank of the representatives of each node.
    pub ranks: Vec<usize>,
    pub images: Vec<Vec<StateSet>>,
}

impl SigmaClasses {
    pub fn count(&self) -> usize {
        self.class_id.iter().collect::<BTreeSet<_>>().len()
    }

    /// Whether `0_i` is alone in its class.
    pub fn zero_is_singleton(&self) -> bool {
        self.class_id.iter().filter(|&&c| c == self.class_id[0]).count() == 1
    }

    fn node_of(&self, class: usize) -> Option<usize> {
        self.nodes.iter().position(|&c| c == class)
    }

    /// `g ∼ f ⇒ g·a ∼ f·a` for every letter.
    pub fn is_right_compatible(&self, cm: &ComponentMonoid) -> bool {
        for x in 0..self.nodes.len() {
            for y in x + 1..self.nodes.len() {
                if self.class_id[x] != self.class_id[y] {
                    continue;
                }
                for a in 0..cm.letters {
                    let gx = self.node_of(cm.right(self.nodes[x], a));
                    let gy = self.node_of(cm.right(self.nodes[y], a));
                    match (gx, gy) {
                        (Some(p), Some(q)) if self.class_id[p] == self.class_id[q] => {}
                        _ => return false,
                    }
                }
            }
        }
        true
    }
}

pub fn sigma_classes(
    mt: &MonoidTable,
    cm: &ComponentMonoid,
    section: &MinimalSection,
) -> Result<SigmaClasses> {
    let i = cm.component();
    if !section.support.contains(i) {
        return Err(Error::InvalidParameter(format!(
            "section does not contain component {i}"
        )));
    }
    let ideal = mt.ideal(section.element);
    let mut nodes = vec![ZERO_CLASS];
    nodes.extend_from_slice(cm.minimal_ideal());
    let mut representatives: Vec<Vec<usize>> = vec![Vec::new(); nodes.len()];
    for &e in ideal.members() {
        let c = cm.class_of(e);
        if let Some(x) = nodes.iter().position(|&g| g == c) {
            representatives[x].push(e);
        }
    }
    let mut ranks = Vec::with_capacity(nodes.len());
    for (x, reps) in representatives.iter_mut().enumerate() {
        if reps.is_empty() {
            return Err(Error::RepresentationFailure {
                component: i,
                class: nodes[x],
            });
        }
        let r = reps.iter().map(|&e| mt.element(e).rank()).min().expect("nonempty");
        if x != 0 {
            reps.retain(|&e| mt.element(e).rank() == r);
        }
        reps.sort_unstable();
        ranks.push(r);
    }
    let images: Vec<Vec<StateSet>> = representatives
        .iter()
        .map(|reps| reps.iter().map(|&e| mt.element(e).image_set()).collect())
        .collect();
    let mut parent: Vec<usize> = (0..nodes.len()).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        let mut c = x;
        while parent[c] != r {
            let next = parent[c];
            parent[c] = r;
            c = next;
        }
        r
    }
    for x in 0..nodes.len() {
        for y in x + 1..nodes.len() {
            let related = images[x]
                .iter()
                .any(|p| images[y].iter().any(|q| p.intersection(*q).len() >= 2));
            if related {
                let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
                parent[rx.max(ry)] = rx.min(ry);
            }
        }
    }
    let class_id = (0..nodes.len()).map(|x| find(&mut parent, x)).collect();
    Ok(SigmaClasses {
        component: i,
        nodes,
        class_id,
        representatives,
        ranks,
        images,
    })
}

/// Evidence attached to a synthesized reset word.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SynthesisCertificate {
    pub length: usize,
    pub states: usize,
    pub former_rank: usize,
    /// Sections appended, in order (indices into the core's covering family).
    pub appends: Vec<usize>,
    /// Lengths of the section-zeroing words.
    pub zeroing_lengths: Vec<usize>,
    /// `(n−1)·max_{i∈C} D(2, r_i, n)`.
    pub bound_core: usize,
    /// `(n−1)·D(2, Fr, n)`.
    pub bound_2r: usize,
    /// `n(n−1)² / (Fr(Fr−1))`, rounded down.
    pub bound_cubic: usize,
}

impl SynthesisCertificate {
    pub fn holds(&self) -> bool {
        let r = self.former_rank;
        let n = self.states;
        self.length <= self.bound_core
            && self.length <= self.bound_2r
            && self.length * r * (r - 1) <= n * (n - 1) * (n - 1)
    }
}

/// Per-component layer of one semisimple automaton.
#[derive(Debug, Clone)]
pub struct IdealAnalysis {
    pub supports: Vec<Support>,
    pub components: Vec<ComponentMonoid>,
    pub ideals: Vec<IdealData>,
    pub core: CoreSet,
}

impl IdealAnalysis {
    pub fn new(s: &AlgebraicStructure, wd: &WedderburnData) -> Result<Self> {
        let supports = element_supports(s, wd);
        let components = (0..wd.k)
            .map(|i| component_monoid(s, wd, i))
            .collect::<Result<Vec<_>>>()?;
        let ideals = components.iter().map(|cm| rnk_ideal(cm, s.monoid())).collect();
        let core = minimal_core(s.monoid(), &supports, wd.k)?;
        Ok(Self {
            supports,
            components,
            ideals,
            core,
        })
    }

    pub fn rnk(&self) -> Vec<usize> {
        self.ideals.iter().map(|d| d.rnk).collect()
    }

    /// σ-classes of each core component against the covering section containing it.
    pub fn core_sigma_classes(&self, mt: &MonoidTable) -> Result<Vec<SigmaClasses>> {
        self.core
            .members
            .iter()
            .map(|i| {
                let sec = self
                    .core
                    .sections
                    .iter()
                    .find(|s| s.support.contains(i))
                    .expect("sections cover the core");
                sigma_classes(mt, &self.components[i], sec)
            })
            .collect()
    }
}

/// Greedy realization of the semisimple bound: zero one covering section at a time.
pub fn synthesize_reset_word(s: &AlgebraicStructure, wd: &WedderburnData) -> Result<(Word, SynthesisCertificate)> {
    let analysis = IdealAnalysis::new(s, wd)?;
    synthesize_with(s, wd, &analysis)
}

pub fn synthesize_with(
    s: &AlgebraicStructure,
    wd: &WedderburnData,
    analysis: &IdealAnalysis,
) -> Result<(Word, SynthesisCertificate)> {
    if !s.is_semisimple() {
        return Err(Error::NotSemisimple);
    }
    let a = s.automaton();
    let mt = s.monoid();
    let n = a.states();
    if n == 1 {
        return Err(Error::Undefined("synthesis needs at least two states"));
    }
    let supports = &analysis.supports;
    let sections = &analysis.core.sections;
    let d = |r: usize| packing::packing_number(r, n);
    let mut zeroing = Vec::with_capacity(sections.len());
    for sec in sections {
        let w = (0..mt.len())
            .find(|&e| !supports[e].intersects(sec.support))
            .expect("resets vanish everywhere");
        let allowance = sec
            .support
            .iter()
            .map(|i| Ok(wd.dims[i] * d(analysis.ideals[i].rnk)?))
            .collect::<Result<Vec<usize>>>()?
            .into_iter()
            .min()
            .expect("sections are nonempty");
        if mt.witness_len(w) > allowance {
            return Err(Error::BoundViolation(format!(
                "section-zeroing word of length {} exceeds {allowance}",
                mt.witness_len(w)
            )));
        }
        zeroing.push(w);
    }
    let mut p = 0;
    let mut word = Word::empty();
    let mut appends = Vec::new();
    while !supports[p].is_empty() {
        let c = supports[p]
            .iter()
            .find(|&i| analysis.core.members.contains(i))
            .ok_or_else(|| Error::InvariantViolated("support misses the core".into()))?;
        let j = sections
            .iter()
            .position(|sec| sec.support.contains(c))
            .expect("sections cover the core");
        if appends.contains(&j) {
            return Err(Error::InvariantViolated(format!("section {j} appended twice")));
        }
        appends.push(j);
        p = mt.product(p, zeroing[j]);
        word = word.concat(&mt.witness(zeroing[j]));
    }
    if automaton::rank(a, &word)? != 1 {
        return Err(Error::InvariantViolated(format!(
            "synthesized word {word} is not reset"
        )));
    }
    let fr = automaton::former_rank(a)?;
    let max_core = analysis
        .core
        .members
        .iter()
        .map(|i| d(analysis.ideals[i].rnk))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .max()
        .expect("core is nonempty");
    let cert = SynthesisCertificate {
        length: word.len(),
        states: n,
        former_rank: fr,
        zeroing_lengths: appends.iter().map(|&j| mt.witness_len(zeroing[j])).collect(),
        appends,
        bound_core: (n - 1) * max_core,
        bound_2r: (n - 1) * d(fr)?,
        bound_cubic: n * (n - 1) * (n - 1) / (fr * (fr - 1)),
    };
    if !cert.holds() {
        return Err(Error::BoundViolation(format!(
            "|w| = {} against bounds {}, {}, {}",
            cert.length, cert.bound_core, cert.bound_2r, cert.bound_cubic
        )));
    }
    Ok((word, cert))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{PipelineConfig, Tolerances};
    use crate::automaton::{cerny, Automaton};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn setup(a: &Automaton) -> (AlgebraicStructure, WedderburnData) {
        let s = AlgebraicStructure::new(a, &PipelineConfig::default()).unwrap();
        let wd = s.wedderburn(&Tolerances::default(), 7).unwrap();
        (s, wd)
    }

    #[test]
    fn cerny_layers() {
        for n in 3..=5 {
            let a = cerny(n).unwrap();
            let (s, wd) = setup(&a);
            let an = IdealAnalysis::new(&s, &wd).unwrap();
            let fr = automaton::former_rank(&a).unwrap();
            assert!(an.ideals.iter().all(IdealData::constant_rank));
            assert_eq!(*an.rnk().iter().min().unwrap(), fr);
            assert!(is_core(&an.supports, an.core.members));
            for sigma in an.core_sigma_classes(s.monoid()).unwrap() {
                let cm = &an.components[sigma.component];
                let r = an.ideals[sigma.component].rnk;
                assert!(sigma.count() <= packing::packing_number(r, n).unwrap() + 1);
                assert!(sigma.zero_is_singleton());
                assert!(sigma.is_right_compatible(cm));
            }
        }
    }

    #[test]
    fn synthesizer_on_cerny() {
        let a = cerny(4).unwrap();
        let (s, wd) = setup(&a);
        let (w, cert) = synthesize_reset_word(&s, &wd).unwrap();
        assert_eq!(automaton::rank(&a, &w).unwrap(), 1);
        assert!(w.len() <= 18);
        assert!(cert.holds());

        let two = Automaton::from_rows(&[vec![1, 0], vec![1, 1]]).unwrap();
        let (s, wd) = setup(&two);
        let (w, _) = synthesize_reset_word(&s, &wd).unwrap();
        assert_eq!(w.len(), 1);
    }

    #[test]
    fn class_products_ignore_representatives() {
        let a = cerny(4).unwrap();
        let (s, wd) = setup(&a);
        let mt = s.monoid();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for i in 0..wd.k {
            let cm = component_monoid(&s, &wd, i).unwrap();
            for _ in 0..200 {
                let x = rng.random_range(0..mt.len());
                let y = rng.random_range(0..mt.len());
                let expected = cm.product(mt, cm.class_of(x), cm.class_of(y));
                assert_eq!(cm.class_of(mt.product(x, y)), expected);
            }
        }
    }

    #[test]
    fn sections_are_disjoint_and_factor_stable() {
        let a = cerny(5).unwrap();
        let (s, wd) = setup(&a);
        let mt = s.monoid();
        let supports = element_supports(&s, &wd);
        let secs = all_minimal_sections(mt, &supports);
        assert!(!secs.is_empty());
        for x in &secs {
            for y in &secs {
                assert!(x.support == y.support || !x.support.intersects(y.support));
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for sec in &secs {
            assert_eq!(mt.element_of_word(&sec.witness).unwrap(), sec.element);
            for _ in 0..50 {
                let l = rng.random_range(0..mt.len());
                let r = rng.random_range(0..mt.len());
                let sup = supports[mt.product(mt.product(l, sec.element), r)];
                assert!(sup.is_empty() || sup == sec.support);
            }
        }
        let reset = (0..mt.len()).find(|&e| mt.is_reset(e)).unwrap();
        assert!(minimal_section_of(mt, &supports, reset, &mt.witness(reset)).is_none());
    }

    #[test]
    fn supports_of_extremes() {
        let a = cerny(4).unwrap();
        let (s, wd) = setup(&a);
        assert_eq!(theta_support(&s, &wd, &Word::empty()).unwrap(), Support::full(wd.k));
        let w = automaton::shortest_reset_word(&a).unwrap().unwrap();
        assert!(theta_support(&s, &wd, &w).unwrap().is_empty());
        let supports = element_supports(&s, &wd);
        assert!(is_core(&supports, Support::full(wd.k)));
        assert!(!is_core(&supports, Support::default()));
    }

    #[test]
    fn identity_component_is_trivial() {
        let a = Automaton::from_rows(&[vec![1], vec![1]]).unwrap();
        let (s, wd) = setup(&a);
        assert_eq!(wd.k, 1);
        let cm = component_monoid(&s, &wd, 0).unwrap();
        assert_eq!(cm.len(), 2);
        assert_eq!(cm.minimal_ideal(), &[1]);
        let core = minimal_core(s.monoid(), &element_supports(&s, &wd), 1).unwrap();
        assert_eq!(core.members, Support(1));
    }
}
