//! Transition monoid enumeration with shortlex witnesses and Cayley tables.

use std::collections::{HashMap, VecDeque};

use crate::automaton::{Automaton, Transformation, Word};
use crate::error::{Error, Result};

pub const DEFAULT_MONOID_CAP: usize = 200_000;

const ROOT: usize = usize::MAX;

/// The transition monoid `M(A)`.
///
/// Elements are stored in breadth-first discovery order with letters tried in
/// index order, so element indices follow the shortlex order of their least
/// witnesses. Index 0 is the identity.
#[derive(Debug, Clone)]
pub struct MonoidTable {
    n: usize,
    m: usize,
    elements: Vec<Transformation>,
    index: HashMap<Transformation, usize>,
    right: Vec<usize>,
    left: Vec<usize>,
    parent: Vec<(usize, usize)>,
    depth: Vec<usize>,
}

impl MonoidTable {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn states(&self) -> usize {
        self.n
    }

    pub fn letters(&self) -> usize {
        self.m
    }

    pub fn elements(&self) -> &[Transformation] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Transformation {
        &self.elements[i]
    }

    pub fn index_of(&self, t: &Transformation) -> Option<usize> {
        self.index.get(t).copied()
    }

    /// Index of `e·a`.
    #[inline]
    pub fn right(&self, e: usize, a: usize) -> usize {
        self.right[e * self.m + a]
    }

    /// Index of `a·e`.
    #[inline]
    pub fn left(&self, e: usize, a: usize) -> usize {
        self.left[e * self.m + a]
    }

    /// Index of `x·y` (apply `x`, then `y`).
    pub fn product(&self, x: usize, y: usize) -> usize {
        let t = self.elements[x].then(&self.elements[y]);
        self.index[&t]
    }

    pub fn generator(&self, a: usize) -> usize {
        self.right(0, a)
    }

    pub fn is_reset(&self, e: usize) -> bool {
        self.elements[e].rank() == 1
    }

    pub fn witness_len(&self, e: usize) -> usize {
        self.depth[e]
    }

    /// Shortlex-least word evaluating to element `e`.
    pub fn witness(&self, e: usize) -> Word {
        let mut letters = Vec::with_capacity(self.depth[e]);
        let mut cur = e;
        while self.parent[cur].0 != ROOT {
            let (p, a) = self.parent[cur];
            letters.push(a);
            cur = p;
        }
        letters.reverse();
        Word(letters)
    }

    pub fn element_of_word(&self, u: &Word) -> Result<usize> {
        u.letters().iter().try_fold(0, |e, &a| {
            if a >= self.m {
                Err(Error::InvalidWord {
                    letter: a,
                    alphabet: self.m,
                })
            } else {
                Ok(self.right(e, a))
            }
        })
    }

    /// The two-sided ideal `M·x·M`, explored breadth-first from `x`.
    pub fn ideal(&self, x: usize) -> IdealSearch {
        let mut via = HashMap::new();
        via.insert(x, None);
        let mut members = vec![x];
        let mut queue = VecDeque::from([x]);
        while let Some(e) = queue.pop_front() {
            for a in 0..self.m {
                for (side, next) in [(Side::Left, self.left(e, a)), (Side::Right, self.right(e, a))] {
                    if let std::collections::hash_map::Entry::Vacant(slot) = via.entry(next) {
                        slot.insert(Some((e, side, a)));
                        members.push(next);
                        queue.push_back(next);
                    }
                }
            }
        }
        IdealSearch {
            source: x,
            members,
            via,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    Left,
    Right,
}

/// Result of exploring `M·x·M`; remembers how each member was reached.
#[derive(Debug, Clone)]
pub struct IdealSearch {
    source: usize,
    members: Vec<usize>,
    via: HashMap<usize, Option<(usize, Side, usize)>>,
}

impl IdealSearch {
    pub fn source(&self) -> usize {
        self.source
    }

    /// Members in discovery order (starting with the source).
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn contains(&self, e: usize) -> bool {
        self.via.contains_key(&e)
    }

    /// A word `p·v·s` evaluating to `target`, where `v` is a word for the source.
    pub fn word_through(&self, target: usize, middle: &Word) -> Option<Word> {
        let mut prefix = Vec::new();
        let mut suffix = Vec::new();
        let mut cur = target;
        while let Some(step) = self.via.get(&cur)? {
            let (prev, side, a) = *step;
            match side {
                Side::Left => prefix.push(a),
                Side::Right => suffix.push(a),
            }
            cur = prev;
        }
        suffix.reverse();
        let mut letters = prefix;
        letters.extend_from_slice(middle.letters());
        letters.extend(suffix);
        Some(Word(letters))
    }
}

/// Breadth-first closure of the letter transformations under composition.
pub fn enumerate_monoid(a: &Automaton, cap: usize) -> Result<MonoidTable> {
    let n = a.states();
    let m = a.letters();
    let gens: Vec<Transformation> = (0..m).map(|l| a.letter(l)).collect();
    let id = Transformation::identity(n);
    let mut table = MonoidTable {
        n,
        m,
        elements: vec![id.clone()],
        index: HashMap::from([(id, 0)]),
        right: Vec::new(),
        left: Vec::new(),
        parent: vec![(ROOT, 0)],
        depth: vec![0],
    };
    if cap < 1 {
        return Err(Error::MonoidTooLarge { cap });
    }
    let mut head = 0;
    while head < table.elements.len() {
        for (l, g) in gens.iter().enumerate() {
            let t = table.elements[head].then(g);
            let next = match table.index.get(&t) {
                Some(&i) => i,
                None => {
                    let i = table.elements.len();
                    if i >= cap {
                        return Err(Error::MonoidTooLarge { cap });
                    }
                    table.index.insert(t.clone(), i);
                    table.elements.push(t);
                    table.parent.push((head, l));
                    table.depth.push(table.depth[head] + 1);
                    i
                }
            };
            table.right.push(next);
        }
        head += 1;
    }
    let mut left = Vec::with_capacity(table.elements.len() * m);
    for e in &table.elements {
        for g in &gens {
            left.push(table.index[&g.then(e)]);
        }
    }
    table.left = left;
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::{cerny, transformation_of};
    use std::collections::HashSet;

    /// Naive closure: repeatedly compose everything with everything until stable.
    fn closure_size(a: &Automaton) -> usize {
        let mut set: HashSet<Vec<u8>> = HashSet::new();
        set.insert((0..a.states() as u8).collect());
        for l in 0..a.letters() {
            set.insert(a.letter(l).image().to_vec());
        }
        loop {
            let items: Vec<Vec<u8>> = set.iter().cloned().collect();
            let before = set.len();
            for x in &items {
                for y in &items {
                    set.insert(x.iter().map(|&q| y[q as usize]).collect());
                }
            }
            if set.len() == before {
                return set.len();
            }
        }
    }

    #[test]
    fn identity_letter_monoid() {
        let a = Automaton::from_rows(&[vec![0], vec![1]]).unwrap();
        assert_eq!(enumerate_monoid(&a, 10).unwrap().len(), 1);
    }

    #[test]
    fn matches_naive_closure() {
        for n in 2..=5 {
            let c = cerny(n).unwrap();
            assert_eq!(enumerate_monoid(&c, 100_000).unwrap().len(), closure_size(&c));
        }
        let c3 = cerny(3).unwrap();
        assert!(matches!(
            enumerate_monoid(&c3, 1),
            Err(Error::MonoidTooLarge { cap: 1 })
        ));
    }

    #[test]
    fn witnesses_evaluate_to_elements() {
        let c4 = cerny(4).unwrap();
        let mt = enumerate_monoid(&c4, 100_000).unwrap();
        let mut last_len = 0;
        for e in 0..mt.len() {
            let w = mt.witness(e);
            assert_eq!(&transformation_of(&c4, &w).unwrap(), mt.element(e));
            assert!(w.len() >= last_len);
            last_len = w.len();
            for a in 0..2 {
                assert_eq!(mt.right(e, a), mt.product(e, mt.generator(a)));
                assert_eq!(mt.left(e, a), mt.product(mt.generator(a), e));
            }
        }
        // rank-1 elements form an ideal
        for e in (0..mt.len()).filter(|&e| mt.is_reset(e)) {
            for f in 0..mt.len() {
                assert!(mt.is_reset(mt.product(e, f)) && mt.is_reset(mt.product(f, e)));
            }
        }
    }

    #[test]
    fn ideal_words_pass_through_source() {
        let c4 = cerny(4).unwrap();
        let mt = enumerate_monoid(&c4, 100_000).unwrap();
        let v = mt.element_of_word(&Word(vec![1])).unwrap();
        let ideal = mt.ideal(v);
        for &e in ideal.members() {
            let w = ideal.word_through(e, &Word(vec![1])).unwrap();
            assert_eq!(mt.element_of_word(&w).unwrap(), e);
        }
        assert!(ideal.members().iter().all(|&e| mt.element(e).rank() <= 3));
    }
}
