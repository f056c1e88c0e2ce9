//! Congruences of automata: closures, refinement, quotients and the inductive
//! reset construction for automata with a non-zero radical.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraicStructure, PipelineConfig};
use crate::automaton::{self, Automaton, Transformation, Word};
use crate::error::{Error, Result};

/// Equivalence on states as a block id per state, ids in first-occurrence order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Partition(Vec<usize>);

impl Partition {
    /// Normalizes arbitrary labels into canonical block ids.
    pub fn from_labels<T: Eq + std::hash::Hash + Clone>(labels: &[T]) -> Self {
        let mut ids: HashMap<T, usize> = HashMap::new();
        Partition(
            labels
                .iter()
                .map(|l| {
                    let next = ids.len();
                    *ids.entry(l.clone()).or_insert(next)
                })
                .collect(),
        )
    }

    pub fn identity(n: usize) -> Self {
        Partition((0..n).collect())
    }

    pub fn universal(n: usize) -> Self {
        Partition(vec![0; n])
    }

    /// `Ker(t)`: states with equal images share a block.
    pub fn kernel(t: &Transformation) -> Self {
        Self::from_labels(t.image())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn blocks(&self) -> usize {
        self.0.iter().max().map_or(0, |&b| b + 1)
    }

    pub fn block_of(&self, q: usize) -> usize {
        self.0[q]
    }

    pub fn ids(&self) -> &[usize] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.blocks() == self.len()
    }

    pub fn is_universal(&self) -> bool {
        self.blocks() <= 1
    }

    /// Every block of `self` lies inside a block of `other`.
    pub fn refines(&self, other: &Partition) -> bool {
        let mut image = vec![usize::MAX; self.blocks()];
        self.0.iter().zip(&other.0).all(|(&b, &o)| {
            if image[b] == usize::MAX {
                image[b] = o;
            }
            image[b] == o
        })
    }

    fn check(&self, a: &Automaton) -> Result<()> {
        if self.len() != a.states() {
            return Err(Error::InvalidPartition(format!(
                "partition over {} states, automaton has {}",
                self.len(),
                a.states()
            )));
        }
        Ok(())
    }
}

pub fn is_congruence(a: &Automaton, p: &Partition) -> Result<bool> {
    p.check(a)?;
    let mut rep = vec![usize::MAX; p.blocks()];
    for q in 0..a.states() {
        let b = p.block_of(q);
        if rep[b] == usize::MAX {
            rep[b] = q;
            continue;
        }
        let r = rep[b];
        if (0..a.letters()).any(|l| p.block_of(a.step(q, l)) != p.block_of(a.step(r, l))) {
            return Ok(false);
        }
    }
    Ok(true)
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut c = x;
        while self.0[c] != r {
            let next = self.0[c];
            self.0[c] = r;
            c = next;
        }
        r
    }

    fn union(&mut self, x: usize, y: usize) -> bool {
        let (rx, ry) = (self.find(x), self.find(y));
        if rx == ry {
            return false;
        }
        self.0[rx.max(ry)] = rx.min(ry);
        true
    }
}

/// Least congruence identifying `q1` and `q2`.
pub fn principal_congruence(a: &Automaton, q1: usize, q2: usize) -> Result<Partition> {
    let n = a.states();
    for q in [q1, q2] {
        if q >= n {
            return Err(Error::InvalidState { state: q, n });
        }
    }
    let mut uf = UnionFind::new(n);
    let mut work = Vec::new();
    if uf.union(q1, q2) {
        work.push((q1, q2));
    }
    while let Some((p, q)) = work.pop() {
        for l in 0..a.letters() {
            let (x, y) = (a.step(p, l), a.step(q, l));
            if uf.union(x, y) {
                work.push((x, y));
            }
        }
    }
    let roots: Vec<usize> = (0..n).map(|q| uf.find(q)).collect();
    Ok(Partition::from_labels(&roots))
}

/// Only the identity and universal relations are congruences.
pub fn is_simple(a: &Automaton) -> Result<bool> {
    let n = a.states();
    if n < 2 {
        return Err(Error::Undefined("simplicity needs at least two states"));
    }
    for p in 0..n {
        for q in p + 1..n {
            if !principal_congruence(a, p, q)?.is_universal() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Coarsest congruence contained in `p`, by Moore-style splitting.
pub fn largest_congruence_below(a: &Automaton, p: &Partition) -> Result<Partition> {
    p.check(a)?;
    let mut current = p.clone();
    loop {
        let signatures: Vec<Vec<usize>> = (0..a.states())
            .map(|q| {
                std::iter::once(current.block_of(q))
                    .chain((0..a.letters()).map(|l| current.block_of(a.step(q, l))))
                    .collect()
            })
            .collect();
        let next = Partition::from_labels(&signatures);
        if next.blocks() == current.blocks() {
            return Ok(next);
        }
        current = next;
    }
}

/// `A/σ` together with the projection `state → block`.
pub fn quotient(a: &Automaton, c: &Partition) -> Result<(Automaton, Vec<usize>)> {
    if !is_congruence(a, c)? {
        return Err(Error::NotACongruence);
    }
    let k = c.blocks();
    let mut rows = vec![Vec::new(); k];
    for q in 0..a.states() {
        let b = c.block_of(q);
        if rows[b].is_empty() {
            rows[b] = (0..a.letters()).map(|l| c.block_of(a.step(q, l))).collect();
        }
    }
    Ok((Automaton::from_rows(&rows)?, c.ids().to_vec()))
}

/// Reset word built by descending through quotients.
///
/// A semisimple automaton is reset by its shortest reset word. Otherwise a shortest
/// radical non-reset word `w` yields a non-trivial congruence below `Ker(w)`; a reset
/// word `u` of the quotient then gives the reset word `u·w`.
pub fn inductive_synchronize(a: &Automaton) -> Result<Word> {
    inductive_synchronize_with(a, &PipelineConfig::default())
}

pub fn inductive_synchronize_with(a: &Automaton, config: &PipelineConfig) -> Result<Word> {
    let word = descend(a, config, 0, a.states())?;
    if automaton::rank(a, &word)? != 1 {
        return Err(Error::InvariantViolated(format!(
            "inductive construction produced non-reset word {word}"
        )));
    }
    Ok(word)
}

fn descend(a: &Automaton, config: &PipelineConfig, depth: usize, limit: usize) -> Result<Word> {
    assert!(depth < limit.max(1), "each quotient has fewer states");
    if !automaton::is_synchronizing(a) {
        return Err(Error::NotSynchronizing);
    }
    if a.states() == 1 {
        return Ok(Word::empty());
    }
    let structure = AlgebraicStructure::new(a, config)?;
    let Some(w_elem) = structure.shortest_radical_non_reset() else {
        return automaton::shortest_reset_word(a)?.ok_or(Error::NotSynchronizing);
    };
    let w = structure.monoid().witness(w_elem);
    let kernel = Partition::kernel(structure.monoid().element(w_elem));
    let sigma = largest_congruence_below(a, &kernel)?;
    if sigma.is_identity() {
        return Err(Error::InvariantViolated(format!(
            "no non-trivial congruence below Ker({w})"
        )));
    }
    let (b, _) = quotient(a, &sigma)?;
    debug_assert!(b.states() < a.states());
    let u = descend(&b, config, depth + 1, limit)?;
    Ok(u.concat(&w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::cerny;

    /// States {0,1} and {2,3} are swapped by `a`; `b` cycles inside blocks.
    fn block_automaton() -> Automaton {
        Automaton::from_rows(&[vec![2, 1], vec![3, 0], vec![0, 3], vec![1, 2]]).unwrap()
    }

    #[test]
    fn trivial_relations_are_congruences() {
        let c4 = cerny(4).unwrap();
        assert!(is_congruence(&c4, &Partition::identity(4)).unwrap());
        assert!(is_congruence(&c4, &Partition::universal(4)).unwrap());
        let p = Partition::from_labels(&[0, 0, 1, 2]);
        assert!(!is_congruence(&c4, &p).unwrap());
        assert!(matches!(
            is_congruence(&c4, &Partition::identity(3)),
            Err(Error::InvalidPartition(_))
        ));
    }

    #[test]
    fn principal_congruences() {
        let c4 = cerny(4).unwrap();
        assert!(principal_congruence(&c4, 2, 2).unwrap().is_identity());
        assert!(principal_congruence(&c4, 0, 1).unwrap().is_universal());
        let two = Automaton::from_rows(&[vec![0], vec![0]]).unwrap();
        assert!(principal_congruence(&two, 0, 1).unwrap().is_universal());
        assert!(matches!(
            principal_congruence(&c4, 0, 9),
            Err(Error::InvalidState { .. })
        ));
    }

    #[test]
    fn simplicity() {
        assert!(is_simple(&cerny(4).unwrap()).unwrap());
        assert!(is_simple(&Automaton::from_rows(&[vec![0], vec![0]]).unwrap()).unwrap());
        let b = block_automaton();
        let blocks = Partition::from_labels(&[0, 0, 1, 1]);
        assert!(is_congruence(&b, &blocks).unwrap());
        assert!(!is_simple(&b).unwrap());
        assert!(is_simple(&Automaton::from_rows(&[vec![0]]).unwrap()).is_err());
    }

    #[test]
    fn refinement_below_partitions() {
        let c4 = cerny(4).unwrap();
        let id = Partition::identity(4);
        assert_eq!(largest_congruence_below(&c4, &id).unwrap(), id);
        assert!(largest_congruence_below(&c4, &Partition::universal(4))
            .unwrap()
            .is_universal());
        let b = block_automaton();
        let coarse = Partition::from_labels(&[0, 0, 1, 1]);
        let fine = Partition::from_labels(&[0, 0, 0, 1]);
        assert_eq!(largest_congruence_below(&b, &coarse).unwrap(), coarse);
        let below = largest_congruence_below(&b, &fine).unwrap();
        assert!(below.refines(&fine));
        assert!(is_congruence(&b, &below).unwrap());
    }

    #[test]
    fn quotients_commute_with_actions() {
        let b = block_automaton();
        let blocks = Partition::from_labels(&[0, 0, 1, 1]);
        let (q, proj) = quotient(&b, &blocks).unwrap();
        assert_eq!(q.states(), 2);
        for state in 0..4 {
            for code in 0..16usize {
                let w = Word((0..4).map(|i| code >> i & 1).collect());
                let image = automaton::transformation_of(&b, &w).unwrap().apply(state);
                let projected = automaton::transformation_of(&q, &w).unwrap().apply(proj[state]);
                assert_eq!(proj[image], projected);
            }
        }
        let (one, _) = quotient(&b, &Partition::universal(4)).unwrap();
        assert_eq!(one.states(), 1);
        let (same, _) = quotient(&b, &Partition::identity(4)).unwrap();
        assert_eq!(same, b);
        let bad = Partition::from_labels(&[0, 1, 1, 1]);
        assert!(matches!(quotient(&b, &bad), Err(Error::NotACongruence)));
    }

    #[test]
    fn inductive_synchronization_small() {
        let one = Automaton::from_rows(&[vec![0]]).unwrap();
        assert_eq!(inductive_synchronize(&one).unwrap(), Word::empty());
        let c4 = cerny(4).unwrap();
        let w = inductive_synchronize(&c4).unwrap();
        assert_eq!(w.len(), 9);
        let perm = Automaton::from_rows(&[vec![1], vec![0]]).unwrap();
        assert!(matches!(
            inductive_synchronize(&perm),
            Err(Error::NotSynchronizing)
        ));
    }
}
