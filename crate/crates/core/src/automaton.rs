//! Complete deterministic automata, their word actions and subset searches.
//!
//! States and letters are plain indices. Words act on the right: `q·uv = (q·u)·v`.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest state count supported (state sets are 64-bit masks).
pub const MAX_STATES: usize = 64;

/// Default cap on `n` for subset-lattice searches.
pub const DEFAULT_SUBSET_CAP: usize = 24;

/// A complete DFA without initial or final states.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Automaton {
    n: usize,
    m: usize,
    /// Row-major `n × m` table, `delta[q * m + a] = q·a`.
    delta: Vec<u8>,
}

impl Automaton {
    /// Builds an automaton from rows `table[q][a] = q·a`.
    pub fn from_rows(rows: &[Vec<usize>]) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        let mut delta = Vec::with_capacity(n * m);
        for (q, row) in rows.iter().enumerate() {
            if row.len() != m {
                return Err(Error::InvalidParameter(format!(
                    "row {q} has {} entries, expected {m}",
                    row.len()
                )));
            }
            delta.extend(row.iter().map(|&p| p.min(u8::MAX as usize) as u8));
            if let Some(&p) = row.iter().find(|&&p| p >= n) {
                return Err(Error::InvalidState { state: p, n });
            }
        }
        Self::from_table(n, m, delta)
    }

    /// Builds an automaton from a row-major table.
    pub fn from_table(n: usize, m: usize, delta: Vec<u8>) -> Result<Self> {
        if n == 0 || n > MAX_STATES {
            return Err(Error::InvalidParameter(format!(
                "state count {n} outside [1, {MAX_STATES}]"
            )));
        }
        if m == 0 {
            return Err(Error::InvalidParameter("alphabet must be non-empty".into()));
        }
        if delta.len() != n * m {
            return Err(Error::DimensionMismatch {
                expected: n * m,
                found: delta.len(),
            });
        }
        if let Some(&p) = delta.iter().find(|&&p| p as usize >= n) {
            return Err(Error::InvalidState {
                state: p as usize,
                n,
            });
        }
        Ok(Self { n, m, delta })
    }

    pub fn states(&self) -> usize {
        self.n
    }

    pub fn letters(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn step(&self, q: usize, a: usize) -> usize {
        self.delta[q * self.m + a] as usize
    }

    pub fn table(&self) -> &[u8] {
        &self.delta
    }

    /// The transformation induced by a single letter.
    pub fn letter(&self, a: usize) -> Transformation {
        Transformation::from_image((0..self.n).map(|q| self.step(q, a) as u8).collect())
    }

    pub fn check_word(&self, u: &Word) -> Result<()> {
        match u.0.iter().find(|&&a| a >= self.m) {
            Some(&letter) => Err(Error::InvalidWord {
                letter,
                alphabet: self.m,
            }),
            None => Ok(()),
        }
    }

    /// Renders the `.aut` text form: header `n m`, then one row per state.
    pub fn to_aut(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.m);
        for q in 0..self.n {
            let row: Vec<String> = (0..self.m).map(|a| self.step(q, a).to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    /// Parses the `.aut` text form. Blank lines are ignored.
    pub fn parse_aut(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hline, header) = lines.next().ok_or(Error::ParseError {
            line: 1,
            message: "missing header".into(),
        })?;
        let nums = parse_ints(hline, header)?;
        let [n, m] = nums[..] else {
            return Err(Error::ParseError {
                line: hline,
                message: format!("header must be `n m`, found {} fields", nums.len()),
            });
        };
        if n == 0 || n > MAX_STATES || m == 0 {
            return Err(Error::ParseError {
                line: hline,
                message: format!("unsupported dimensions n={n}, m={m}"),
            });
        }
        let mut delta = Vec::with_capacity(n * m);
        for q in 0..n {
            let (line, row) = lines.next().ok_or(Error::ParseError {
                line: hline + q + 1,
                message: format!("missing row for state {q}"),
            })?;
            let entries = parse_ints(line, row)?;
            if entries.len() != m {
                return Err(Error::ParseError {
                    line,
                    message: format!("expected {m} entries, found {}", entries.len()),
                });
            }
            for p in entries {
                if p >= n {
                    return Err(Error::ParseError {
                        line,
                        message: format!("target state {p} out of range [0, {n})"),
                    });
                }
                delta.push(p as u8);
            }
        }
        if let Some((line, _)) = lines.next() {
            return Err(Error::ParseError {
                line,
                message: "trailing content after the last row".into(),
            });
        }
        Self::from_table(n, m, delta)
    }
}

fn parse_ints(line: usize, text: &str) -> Result<Vec<usize>> {
    text.split_whitespace()
        .map(|tok| {
            tok.parse::<usize>().map_err(|_| Error::ParseError {
                line,
                message: format!("`{tok}` is not a non-negative integer"),
            })
        })
        .collect()
}

/// A finite word over letter indices.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(pub Vec<usize>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn power(&self, k: usize) -> Word {
        Word(self.0.repeat(k))
    }

    /// Parses `a`, `b`, ... as letters 0, 1, ...; `ε` or the empty string is the empty word.
    pub fn parse(text: &str) -> Result<Word> {
        text.chars()
            .filter(|c| !c.is_whitespace() && *c != 'ε')
            .map(|c| {
                if c.is_ascii_lowercase() {
                    Ok(c as usize - 'a' as usize)
                } else {
                    Err(Error::InvalidParameter(format!("bad letter `{c}`")))
                }
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }
}

impl From<Vec<usize>> for Word {
    fn from(v: Vec<usize>) -> Self {
        Word(v)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "ε");
        }
        for &a in &self.0 {
            if a < 26 {
                write!(f, "{}", (b'a' + a as u8) as char)?;
            } else {
                write!(f, "<{a}>")?;
            }
        }
        Ok(())
    }
}

/// A map `Q → Q` stored as its image array.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transformation {
    image: Vec<u8>,
    rank: usize,
}

impl Transformation {
    pub fn identity(n: usize) -> Self {
        Self::from_image((0..n as u8).collect())
    }

    pub fn from_image(image: Vec<u8>) -> Self {
        let rank = image
            .iter()
            .fold(0u64, |acc, &q| acc | (1u64 << q))
            .count_ones() as usize;
        Self { image, rank }
    }

    pub fn image(&self) -> &[u8] {
        &self.image
    }

    #[inline]
    pub fn apply(&self, q: usize) -> usize {
        self.image[q] as usize
    }

    pub fn degree(&self) -> usize {
        self.image.len()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Transformation) -> Transformation {
        Self::from_image(self.image.iter().map(|&q| other.image[q as usize]).collect())
    }

    pub fn image_set(&self) -> StateSet {
        StateSet(self.image.iter().fold(0u64, |acc, &q| acc | (1u64 << q)))
    }
}

/// A subset of the state set as a bitmask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StateSet(pub u64);

impl StateSet {
    pub fn full(n: usize) -> Self {
        if n >= 64 {
            StateSet(u64::MAX)
        } else {
            StateSet((1u64 << n) - 1)
        }
    }

    pub fn empty() -> Self {
        StateSet(0)
    }

    pub fn singleton(q: usize) -> Self {
        StateSet(1u64 << q)
    }

    pub fn from_states(states: impl IntoIterator<Item = usize>) -> Self {
        StateSet(states.into_iter().fold(0, |acc, q| acc | (1u64 << q)))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, q: usize) -> bool {
        self.0 >> q & 1 == 1
    }

    pub fn intersection(self, other: StateSet) -> StateSet {
        StateSet(self.0 & other.0)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let q = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(q)
            }
        })
    }

    #[inline]
    fn step(self, a: &Automaton, letter: usize) -> StateSet {
        let mut out = 0u64;
        for q in self.iter() {
            out |= 1u64 << a.step(q, letter);
        }
        StateSet(out)
    }
}

impl fmt::Display for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.iter().map(|q| q.to_string()).collect();
        write!(f, "{{{}}}", items.join(","))
    }
}

/// `{ q·u : q ∈ s }`.
pub fn apply_word(a: &Automaton, s: StateSet, u: &Word) -> Result<StateSet> {
    a.check_word(u)?;
    Ok(u.0.iter().fold(s, |acc, &l| acc.step(a, l)))
}

pub fn transformation_of(a: &Automaton, u: &Word) -> Result<Transformation> {
    a.check_word(u)?;
    let image = (0..a.n)
        .map(|q| u.0.iter().fold(q, |p, &l| a.step(p, l)) as u8)
        .collect();
    Ok(Transformation::from_image(image))
}

/// `rk(u) = |Q·u|`.
pub fn rank(a: &Automaton, u: &Word) -> Result<usize> {
    Ok(apply_word(a, StateSet::full(a.n), u)?.len())
}

/// Pair-merge criterion: synchronizing iff every pair of states can be merged.
pub fn is_synchronizing(a: &Automaton) -> bool {
    let n = a.n;
    if n == 1 {
        return true;
    }
    let idx = |p: usize, q: usize| if p < q { p * n + q } else { q * n + p };
    // reverse edges of the pair graph
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n * n];
    let mut mergeable = vec![false; n * n];
    let mut queue = VecDeque::new();
    for p in 0..n {
        for q in p + 1..n {
            for l in 0..a.m {
                let (x, y) = (a.step(p, l), a.step(q, l));
                if x == y {
                    if !mergeable[idx(p, q)] {
                        mergeable[idx(p, q)] = true;
                        queue.push_back(idx(p, q));
                    }
                } else {
                    preds[idx(x, y)].push(idx(p, q));
                }
            }
        }
    }
    while let Some(pair) = queue.pop_front() {
        for &pre in &preds[pair] {
            if !mergeable[pre] {
                mergeable[pre] = true;
                queue.push_back(pre);
            }
        }
    }
    (0..n).all(|p| (p + 1..n).all(|q| mergeable[idx(p, q)]))
}

/// Breadth-first exploration of the images `Q·u`, letters tried in index order.
///
/// Each reachable set is recorded with the shortlex-least word reaching it; the
/// returned vector is in discovery order, which is shortlex order of those words.
pub struct SubsetSearch<'a> {
    automaton: &'a Automaton,
    order: Vec<StateSet>,
    parent: HashMap<StateSet, (StateSet, usize)>,
}

impl<'a> SubsetSearch<'a> {
    /// Explores all images of `Q`. Stops early once `stop` returns true for a discovered set.
    pub fn explore(
        a: &'a Automaton,
        cap: usize,
        mut stop: impl FnMut(StateSet) -> bool,
    ) -> Result<Self> {
        if a.n > cap {
            return Err(Error::SearchTooLarge { cap });
        }
        let root = StateSet::full(a.n);
        let mut search = SubsetSearch {
            automaton: a,
            order: vec![root],
            parent: HashMap::new(),
        };
        search.parent.insert(root, (root, usize::MAX));
        if stop(root) {
            return Ok(search);
        }
        let mut head = 0;
        while head < search.order.len() {
            let s = search.order[head];
            head += 1;
            for l in 0..a.m {
                let t = s.step(a, l);
                if search.parent.contains_key(&t) {
                    continue;
                }
                search.parent.insert(t, (s, l));
                search.order.push(t);
                if stop(t) {
                    return Ok(search);
                }
            }
        }
        Ok(search)
    }

    pub fn reached(&self) -> &[StateSet] {
        &self.order
    }

    pub fn word_to(&self, target: StateSet) -> Option<Word> {
        let root = StateSet::full(self.automaton.n);
        let mut letters = Vec::new();
        let mut cur = target;
        while cur != root {
            let &(prev, l) = self.parent.get(&cur)?;
            letters.push(l);
            cur = prev;
        }
        letters.reverse();
        Some(Word(letters))
    }
}

/// All reachable images `Q·u` in shortlex discovery order.
pub fn reachable_images(a: &Automaton) -> Result<Vec<StateSet>> {
    Ok(SubsetSearch::explore(a, DEFAULT_SUBSET_CAP, |_| false)?.order)
}

/// Shortlex-least reset word, or `None` for non-synchronizing automata.
pub fn shortest_reset_word(a: &Automaton) -> Result<Option<Word>> {
    shortest_reset_word_capped(a, DEFAULT_SUBSET_CAP)
}

pub fn shortest_reset_word_capped(a: &Automaton, cap: usize) -> Result<Option<Word>> {
    let search = SubsetSearch::explore(a, cap, |s| s.len() == 1)?;
    let last = *search.order.last().expect("root is always present");
    Ok(if last.len() == 1 {
        search.word_to(last)
    } else {
        None
    })
}

/// `Fr(A)`: the least `|Q·u| > 1` over all words. Equals `n` when every letter permutes.
pub fn former_rank(a: &Automaton) -> Result<usize> {
    if a.n < 2 {
        return Err(Error::Undefined("former rank needs at least two states"));
    }
    let search = SubsetSearch::explore(a, DEFAULT_SUBSET_CAP, |_| false)?;
    Ok(search
        .order
        .iter()
        .map(|s| s.len())
        .filter(|&k| k > 1)
        .min()
        .expect("Q itself has at least two states"))
}

/// Černý automaton: `a` rotates `i → i+1 mod n`, `b` sends `0 → 1` and fixes the rest.
pub fn cerny(n: usize) -> Result<Automaton> {
    if !(2..=MAX_STATES).contains(&n) {
        return Err(Error::InvalidParameter(format!(
            "Černý automata need 2 <= n <= {MAX_STATES}, got {n}"
        )));
    }
    let rows: Vec<Vec<usize>> = (0..n)
        .map(|q| vec![(q + 1) % n, if q == 0 { 1 } else { q }])
        .collect();
    Automaton::from_rows(&rows)
}

/// Uniform random automaton; a pure function of `(n, m, seed)`.
pub fn random_automaton(n: usize, m: usize, seed: u64) -> Result<Automaton> {
    if n == 0 || m == 0 {
        return Err(Error::InvalidParameter("n and m must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let delta = (0..n * m).map(|_| rng.random_range(0..n) as u8).collect();
    Automaton::from_table(n, m, delta)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn cerny_convention() {
        let c4 = cerny(4).unwrap();
        let a_row: Vec<usize> = (0..4).map(|q| c4.step(q, 0)).collect();
        assert_eq!(a_row, vec![1, 2, 3, 0]);
        assert_eq!(
            apply_word(&c4, StateSet::singleton(0), &word("a")).unwrap(),
            StateSet::singleton(1)
        );
        let b = transformation_of(&c4, &word("b")).unwrap();
        assert_eq!(b.image(), &[1, 1, 2, 3]);
        assert_eq!(b.rank(), 3);
        assert_eq!(rank(&c4, &word("b")).unwrap(), 3);
        assert!(matches!(cerny(1), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn empty_word_is_identity() {
        let c4 = cerny(4).unwrap();
        let full = StateSet::full(4);
        assert_eq!(apply_word(&c4, full, &Word::empty()).unwrap(), full);
        let id = transformation_of(&c4, &Word::empty()).unwrap();
        assert_eq!(id, Transformation::identity(4));
        assert_eq!(rank(&c4, &Word::empty()).unwrap(), 4);
    }

    #[test]
    fn invalid_letters_are_rejected() {
        let c4 = cerny(4).unwrap();
        let err = apply_word(&c4, StateSet::full(4), &Word(vec![0, 2])).unwrap_err();
        assert_eq!(
            err,
            Error::InvalidWord {
                letter: 2,
                alphabet: 2
            }
        );
        assert!(transformation_of(&c4, &Word(vec![5])).is_err());
    }

    #[test]
    fn synchronization_small_cases() {
        assert!(is_synchronizing(&cerny(4).unwrap()));
        assert!(is_synchronizing(&cerny(3).unwrap()));
        let id2 = Automaton::from_rows(&[vec![0], vec![1]]).unwrap();
        assert!(!is_synchronizing(&id2));
        assert_eq!(shortest_reset_word(&id2).unwrap(), None);
        let one = Automaton::from_rows(&[vec![0]]).unwrap();
        assert!(is_synchronizing(&one));
        assert_eq!(shortest_reset_word(&one).unwrap(), Some(Word::empty()));
        let constant = Automaton::from_rows(&[vec![0], vec![0]]).unwrap();
        assert_eq!(shortest_reset_word(&constant).unwrap().unwrap().len(), 1);
    }

    #[test]
    fn cerny_reset_lengths() {
        for n in 2..=6 {
            let w = shortest_reset_word(&cerny(n).unwrap()).unwrap().unwrap();
            assert_eq!(w.len(), (n - 1) * (n - 1), "n = {n}");
            assert_eq!(rank(&cerny(n).unwrap(), &w).unwrap(), 1);
        }
    }

    #[test]
    fn shortest_reset_is_shortlex_least() {
        // brute force over all words of the optimal length
        let c4 = cerny(4).unwrap();
        let found = shortest_reset_word(&c4).unwrap().unwrap();
        let len = found.len();
        let mut best = None;
        for code in 0..(1usize << len) {
            let w = Word((0..len).rev().map(|i| code >> i & 1).collect());
            if rank(&c4, &w).unwrap() == 1 {
                best = Some(w);
                break;
            }
        }
        assert_eq!(best, Some(found));
    }

    #[test]
    fn former_rank_cases() {
        assert_eq!(former_rank(&cerny(4).unwrap()).unwrap(), 2);
        let constant = Automaton::from_rows(&[vec![0], vec![0]]).unwrap();
        assert_eq!(former_rank(&constant).unwrap(), 2);
        let perms = Automaton::from_rows(&[vec![1, 0], vec![2, 1], vec![0, 2]]).unwrap();
        assert_eq!(former_rank(&perms).unwrap(), 3);
        let one = Automaton::from_rows(&[vec![0]]).unwrap();
        assert!(matches!(former_rank(&one), Err(Error::Undefined(_))));
    }

    #[test]
    fn random_automata_are_deterministic() {
        let x = random_automaton(5, 3, 42).unwrap();
        let y = random_automaton(5, 3, 42).unwrap();
        assert_eq!(x, y);
        let one = random_automaton(1, 1, 7).unwrap();
        assert_eq!(one.table(), &[0]);
    }

    #[test]
    fn random_census_matches_uniform_statistics() {
        // Exhaustive oracle: fraction of synchronizing tables among all 3^6 binary 3-state automata.
        let mut sync = 0usize;
        for code in 0..729usize {
            let delta = (0..6).map(|i| (code / 3usize.pow(i)) % 3).map(|x| x as u8).collect();
            let a = Automaton::from_table(3, 2, delta).unwrap();
            if is_synchronizing(&a) {
                sync += 1;
            }
        }
        let exact = sync as f64 / 729.0;
        let samples = 20_000;
        let hits = (0..samples)
            .filter(|&s| is_synchronizing(&random_automaton(3, 2, s).unwrap()))
            .count();
        let observed = hits as f64 / samples as f64;
        let sigma = (exact * (1.0 - exact) / samples as f64).sqrt();
        assert!((observed - exact).abs() < 5.0 * sigma, "{observed} vs {exact}");
    }

    #[test]
    fn aut_format() {
        let a = Automaton::parse_aut("2 1\n0\n0\n").unwrap();
        assert_eq!(a.states(), 2);
        assert_eq!(a.step(1, 0), 0);
        assert_eq!(a.to_aut(), "2 1\n0\n0\n");
        let messy = "3 2\n  1   2\n\n0 0\n2 1  \n";
        assert_eq!(Automaton::parse_aut(messy).unwrap().to_aut(), "3 2\n1 2\n0 0\n2 1\n");
        assert!(matches!(
            Automaton::parse_aut("2 1\n0\n2\n"),
            Err(Error::ParseError { line: 3, .. })
        ));
        assert!(matches!(
            Automaton::parse_aut("2 2\n0 1\n"),
            Err(Error::ParseError { .. })
        ));
        assert!(matches!(
            Automaton::parse_aut("2 x\n"),
            Err(Error::ParseError { line: 1, .. })
        ));
    }

    #[test]
    fn word_display_round_trip() {
        let w = word("abba");
        assert_eq!(w.to_string(), "abba");
        assert_eq!(Word::empty().to_string(), "ε");
        assert_eq!(Word::parse("ε").unwrap(), Word::empty());
    }
}
