//! Packing numbers `D(t, r, n)`: the largest family of `r`-subsets of an
//! `n`-set in which no `t`-subset is covered twice.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::automaton::{self, Automaton};
use crate::error::{Error, Result};

pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Largest number of candidate blocks the search will materialize.
const MAX_CANDIDATES: u128 = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PackingInstance {
    pub t: usize,
    pub r: usize,
    pub n: usize,
}

impl PackingInstance {
    pub fn new(t: usize, r: usize, n: usize) -> Result<Self> {
        if !(1 <= t && t <= r && r <= n && n <= 64) {
            return Err(Error::InvalidParameter(format!(
                "packing needs 1 <= t <= r <= n <= 64, got t={t}, r={r}, n={n}"
            )));
        }
        Ok(Self { t, r, n })
    }
}

/// A family of blocks (bitmasks over `[0, n)`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PackingDesign {
    pub n: usize,
    pub blocks: Vec<u64>,
}

impl PackingDesign {
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// No `t`-subset lies in two blocks, i.e. pairwise intersections are below `t`.
    pub fn is_packing(&self, t: usize) -> bool {
        self.blocks.iter().enumerate().all(|(i, &a)| {
            self.blocks[i + 1..]
                .iter()
                .all(|&b| ((a & b).count_ones() as usize) < t)
        })
    }

    /// Blocks as sorted 1-based point lists.
    pub fn block_lists(&self) -> Vec<Vec<usize>> {
        self.blocks
            .iter()
            .map(|&b| (0..self.n).filter(|&i| b >> i & 1 == 1).map(|i| i + 1).collect())
            .collect()
    }
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Labelled upper bounds on `D(t, r, n)`; inapplicable bounds are omitted.
pub fn upper_bounds(p: &PackingInstance) -> Vec<(&'static str, u64)> {
    let mut out = vec![(
        "binomial-ratio",
        (binomial(p.n, p.t) / binomial(p.r, p.t)) as u64,
    )];
    if p.t == 2 && p.r * p.r > p.n {
        let (r, n) = (p.r as u64, p.n as u64);
        out.push(("intersection", (r - 1) * n / (r * r - n)));
    }
    out
}

pub fn min_upper_bound(p: &PackingInstance) -> u64 {
    upper_bounds(p).into_iter().map(|(_, v)| v).min().expect("at least one bound")
}

fn subsets(n: usize, r: usize) -> Result<Vec<u64>> {
    if binomial(n, r) > MAX_CANDIDATES {
        return Err(Error::InvalidParameter(format!(
            "C({n},{r}) candidate blocks exceed the search limit"
        )));
    }
    let mut out = Vec::new();
    if r == 0 {
        return Ok(vec![0]);
    }
    // Gosper's hack: r-bit masks in increasing order
    let mut x: u64 = (1u64 << r) - 1;
    let limit = if n == 64 { u64::MAX } else { 1u64 << n };
    while x < limit {
        out.push(x);
        let c = x & x.wrapping_neg();
        let y = x.wrapping_add(c);
        if y == 0 {
            break;
        }
        x = (((x ^ y) >> 2) / c) | y;
    }
    Ok(out)
}

fn greedy_from(order: &[u64], t: usize) -> Vec<u64> {
    let mut chosen: Vec<u64> = Vec::new();
    for &b in order {
        if chosen.iter().all(|&c| ((b & c).count_ones() as usize) < t) {
            chosen.push(b);
        }
    }
    chosen
}

/// A maximal packing built from a seeded random order of all blocks.
pub fn greedy_packing(p: &PackingInstance, seed: u64) -> Result<PackingDesign> {
    let mut blocks = subsets(p.n, p.r)?;
    blocks.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    Ok(PackingDesign {
        n: p.n,
        blocks: greedy_from(&blocks, p.t),
    })
}

/// Branch-and-bound maximum clique with greedy-colouring bounds.
struct CliqueSearch<'a> {
    adj: &'a [Vec<u64>],
    words: usize,
    best: Vec<usize>,
    target: usize,
    nodes: u64,
    budget: u64,
    exhausted: bool,
}

impl CliqueSearch<'_> {
    fn members(&self, set: &[u64]) -> Vec<usize> {
        let mut out = Vec::new();
        for (w, &bits) in set.iter().enumerate() {
            let mut b = bits;
            while b != 0 {
                out.push(w * 64 + b.trailing_zeros() as usize);
                b &= b - 1;
            }
        }
        out
    }

    /// Vertices of `cand` with colour numbers, ascending by colour.
    fn colour(&self, cand: &[u64]) -> Vec<(usize, usize)> {
        let mut uncoloured = cand.to_vec();
        let mut out = Vec::new();
        let mut colour = 0;
        while uncoloured.iter().any(|&w| w != 0) {
            colour += 1;
            let mut q = uncoloured.clone();
            while let Some(v) = self.members(&q).first().copied() {
                out.push((v, colour));
                uncoloured[v / 64] &= !(1 << (v % 64));
                q[v / 64] &= !(1 << (v % 64));
                for (qw, aw) in q.iter_mut().zip(&self.adj[v]) {
                    *qw &= !aw;
                }
            }
        }
        out
    }

    fn expand(&mut self, clique: &mut Vec<usize>, mut cand: Vec<u64>) {
        if self.exhausted || self.best.len() >= self.target {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            self.exhausted = true;
            return;
        }
        let order = self.colour(&cand);
        for &(v, colour) in order.iter().rev() {
            if clique.len() + colour <= self.best.len() || self.best.len() >= self.target {
                return;
            }
            clique.push(v);
            let next: Vec<u64> = cand.iter().zip(&self.adj[v]).map(|(c, a)| c & a).collect();
            if next.iter().all(|&w| w == 0) {
                if clique.len() > self.best.len() {
                    self.best = clique.clone();
                }
            } else {
                self.expand(clique, next);
            }
            clique.pop();
            cand[v / 64] &= !(1 << (v % 64));
            if self.exhausted {
                return;
            }
        }
    }
}

/// Maximum family of pairwise-compatible blocks. `forced` must belong to the result.
/// Returns the best family found and whether the search finished within budget.
fn max_compatible_family(
    blocks: &[u64],
    t: usize,
    forced: Option<usize>,
    initial: Vec<usize>,
    target: usize,
    budget: u64,
) -> (Vec<usize>, bool) {
    let nv = blocks.len();
    let words = nv.div_ceil(64).max(1);
    let adj: Vec<Vec<u64>> = (0..nv)
        .map(|i| {
            let mut row = vec![0u64; words];
            for j in 0..nv {
                if i != j && ((blocks[i] & blocks[j]).count_ones() as usize) < t {
                    row[j / 64] |= 1 << (j % 64);
                }
            }
            row
        })
        .collect();
    let mut search = CliqueSearch {
        adj: &adj,
        words,
        best: initial,
        target,
        nodes: 0,
        budget,
        exhausted: false,
    };
    let mut clique = Vec::new();
    let cand = match forced {
        Some(v) => {
            clique.push(v);
            if search.best.is_empty() {
                search.best = vec![v];
            }
            adj[v].clone()
        }
        None => {
            let mut all = vec![0u64; words];
            for v in 0..nv {
                all[v / 64] |= 1 << (v % 64);
            }
            all
        }
    };
    debug_assert_eq!(cand.len(), search.words);
    if cand.iter().any(|&w| w != 0) {
        search.expand(&mut clique, cand);
    } else if clique.len() > search.best.len() {
        search.best = clique;
    }
    (search.best, !search.exhausted)
}

/// Exact `D(t, r, n)` with a witness design.
///
/// The first block is fixed to `{0, …, r−1}`, which loses nothing since the
/// symmetric group acts transitively on blocks.
pub fn exact_packing(p: &PackingInstance, budget: u64) -> Result<(usize, PackingDesign)> {
    let blocks = subsets(p.n, p.r)?;
    let upper = min_upper_bound(p) as usize;
    let lex = greedy_from(&blocks, p.t);
    let shuffled = greedy_packing(p, 0)?.blocks;
    let start = if shuffled.len() > lex.len() { shuffled } else { lex };
    let index: HashMap<u64, usize> = blocks.iter().enumerate().map(|(i, &b)| (b, i)).collect();
    let initial: Vec<usize> = start.iter().map(|b| index[b]).collect();
    let (best, finished) = if initial.len() >= upper {
        (initial, true)
    } else {
        max_compatible_family(&blocks, p.t, Some(0), initial, upper, budget)
    };
    if !finished {
        return Err(Error::BudgetExceeded {
            lower: best.len(),
            upper,
        });
    }
    let design = PackingDesign {
        n: p.n,
        blocks: best.iter().map(|&i| blocks[i]).collect(),
    };
    debug_assert!(design.is_packing(p.t));
    Ok((design.len(), design))
}

type Memo = Mutex<HashMap<PackingInstance, usize>>;

fn memo() -> &'static Memo {
    static MEMO: OnceLock<Memo> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Memoized exact `D(2, r, n)` (default budget). `r = 1` gives `n`, `r > n` gives 0.
pub fn packing_number(r: usize, n: usize) -> Result<usize> {
    if r > n {
        return Ok(0);
    }
    if r <= 1 {
        return Ok(if r == 1 { n } else { 1 });
    }
    let p = PackingInstance::new(2, r, n)?;
    if let Some(&v) = memo().lock().expect("memo lock").get(&p) {
        return Ok(v);
    }
    let (v, _) = exact_packing(&p, DEFAULT_BUDGET)?;
    memo().lock().expect("memo lock").insert(p, v);
    Ok(v)
}

/// Checks `D(t, r, n) ≥ D(t, r+1, n)` over `r = t..n` using exact values.
pub fn monotonicity_check(t: usize, n: usize, budget: u64) -> Result<bool> {
    let values = (t..=n)
        .map(|r| exact_packing(&PackingInstance::new(t, r, n)?, budget).map(|(v, _)| v))
        .collect::<Result<Vec<_>>>()?;
    Ok(values.windows(2).all(|w| w[0] >= w[1]))
}

/// Reachable images `Q·u` of size `r`, thinned to pairwise intersections of at most one state.
///
/// Up to 20 candidates are searched exactly; beyond that the family is greedy in
/// discovery order.
pub fn observed_packing_family(a: &Automaton, r: usize) -> Result<PackingDesign> {
    let n = a.states();
    if r == 0 || r > n {
        return Ok(PackingDesign { n, blocks: Vec::new() });
    }
    let candidates: Vec<u64> = automaton::reachable_images(a)?
        .into_iter()
        .filter(|s| s.len() == r)
        .map(|s| s.0)
        .collect();
    let blocks = if candidates.len() <= 20 {
        let upper = candidates.len();
        let (best, _) = max_compatible_family(&candidates, 2, None, Vec::new(), upper, u64::MAX);
        let mut chosen: Vec<usize> = best;
        chosen.sort_unstable();
        chosen.into_iter().map(|i| candidates[i]).collect()
    } else {
        greedy_from(&candidates, 2)
    };
    Ok(PackingDesign { n, blocks })
}
