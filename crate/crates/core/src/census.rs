//! Exhaustive enumeration of small automata, optionally up to isomorphism.
//!
//! Two automata are isomorphic when a renaming of states together with a
//! renaming of letters turns one table into the other. The isomorph-free census
//! keeps exactly the tables that are lexicographically least in their orbit.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::automaton::Automaton;
use crate::error::{Error, Result};

/// Raw tables beyond this count are refused.
pub const MAX_RAW_TABLES: u64 = 1 << 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CensusMode {
    /// One automaton per isomorphism class.
    IsoReduced,
    /// Every transition table.
    Raw,
}

pub fn raw_count(n: usize, m: usize) -> Option<u64> {
    (n as u64).checked_pow((n * m) as u32)
}

/// Renamings as `(π⁻¹, π, τ⁻¹)` triples, identity excluded.
struct Relabelings {
    items: Vec<(Vec<u8>, Vec<u8>, Vec<usize>)>,
}

impl Relabelings {
    fn new(n: usize, m: usize) -> Self {
        let mut items = Vec::new();
        for pi in (0..n).permutations(n) {
            for tau in (0..m).permutations(m) {
                let identity = pi.iter().enumerate().all(|(i, &p)| i == p)
                    && tau.iter().enumerate().all(|(i, &t)| i == t);
                if identity {
                    continue;
                }
                let mut pi_inv = vec![0u8; n];
                for (q, &p) in pi.iter().enumerate() {
                    pi_inv[p] = q as u8;
                }
                let mut tau_inv = vec![0usize; m];
                for (a, &t) in tau.iter().enumerate() {
                    tau_inv[t] = a;
                }
                items.push((pi_inv, pi.iter().map(|&p| p as u8).collect(), tau_inv));
            }
        }
        Self { items }
    }

    /// Whether no renaming produces a lexicographically smaller table.
    fn is_least(&self, table: &[u8], m: usize) -> bool {
        self.items.iter().all(|(pi_inv, pi, tau_inv)| {
            for (idx, &orig) in table.iter().enumerate() {
                let (p, b) = (idx / m, idx % m);
                let renamed = pi[table[pi_inv[p] as usize * m + tau_inv[b]] as usize];
                if renamed != orig {
                    return renamed > orig;
                }
            }
            true
        })
    }
}

pub fn is_canonical(a: &Automaton) -> bool {
    Relabelings::new(a.states(), a.letters()).is_least(a.table(), a.letters())
}

/// Calls `f` on every automaton of the census, in increasing table order.
pub fn for_each_automaton(
    n: usize,
    m: usize,
    mode: CensusMode,
    mut f: impl FnMut(&Automaton),
) -> Result<()> {
    if n == 0 || m == 0 {
        return Err(Error::InvalidParameter("census needs n ≥ 1 and m ≥ 1".into()));
    }
    let total = raw_count(n, m)
        .filter(|&t| t <= MAX_RAW_TABLES)
        .ok_or_else(|| Error::InvalidParameter(format!("census of {n}-state {m}-letter automata is too large")))?;
    let relabel = Relabelings::new(n, m);
    let len = n * m;
    let mut table = vec![0u8; len];
    for _ in 0..total {
        if mode == CensusMode::Raw || relabel.is_least(&table, m) {
            f(&Automaton::from_table(n, m, table.clone())?);
        }
        // odometer with the last cell varying fastest
        for cell in table.iter_mut().rev() {
            *cell += 1;
            if (*cell as usize) < n {
                break;
            }
            *cell = 0;
        }
    }
    Ok(())
}

pub fn census(n: usize, m: usize, mode: CensusMode) -> Result<Vec<Automaton>> {
    let mut out = Vec::new();
    for_each_automaton(n, m, mode, |a| out.push(a.clone()))?;
    Ok(out)
}
