//! Explicit budgets and three-valued verdicts shared by every search engine.

use std::time::Instant;

use serde::Serialize;

use crate::word::{Alphabet, Word};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchBudget {
    /// Target / maximum word length.
    pub max_len: usize,
    pub max_nodes: u64,
    pub max_seconds: Option<f64>,
}

impl SearchBudget {
    pub fn length(max_len: usize) -> Self {
        SearchBudget {
            max_len,
            max_nodes: u64::MAX,
            max_seconds: None,
        }
    }

    pub fn with_nodes(mut self, max_nodes: u64) -> Self {
        self.max_nodes = max_nodes;
        self
    }

    pub fn with_seconds(mut self, secs: f64) -> Self {
        self.max_seconds = Some(secs);
        self
    }

    pub fn empty() -> Self {
        SearchBudget {
            max_len: 0,
            max_nodes: 0,
            max_seconds: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    /// The search reached its target; the certificate verifies.
    Found,
    /// The full space within bounds was enumerated without reaching the target.
    Exhausted,
    /// A node or time limit fired first; inconclusive.
    Budget,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub elapsed_seconds: f64,
}

#[derive(Debug, Clone)]
pub struct SearchOutcome<C> {
    pub verdict: Verdict,
    pub certificate: C,
    pub stats: SearchStats,
}

/// Depth-first search for the longest word over `k` letters all of whose
/// prefixes pass `extends_ok` (a suffix-incremental freeness check: it is
/// called once per appended letter with the whole candidate prefix).
///
/// Children are expanded in letter order. With `symmetry_reduce` the first
/// occurrences of letters are forced to appear in increasing order, which
/// cannot change the verdict for letter-permutation-invariant predicates,
/// only the node count.
pub fn longest_word_search(
    k: usize,
    symmetry_reduce: bool,
    budget: &SearchBudget,
    extends_ok: &mut dyn FnMut(&[u8]) -> bool,
) -> SearchOutcome<Word> {
    let start = Instant::now();
    let mut nodes: u64 = 0;
    let mut best: Vec<u8> = Vec::new();
    let mut cur: Vec<u8> = Vec::new();
    let mut over_budget = false;

    fn dfs(
        cur: &mut Vec<u8>,
        best: &mut Vec<u8>,
        k: usize,
        symmetry_reduce: bool,
        budget: &SearchBudget,
        nodes: &mut u64,
        start: &Instant,
        over_budget: &mut bool,
        extends_ok: &mut dyn FnMut(&[u8]) -> bool,
    ) -> bool {
        // returns true when the target length was reached (stop everything)
        if cur.len() >= budget.max_len {
            return true;
        }
        let used = cur.iter().copied().max().map(|m| m as usize + 1).unwrap_or(0);
        let limit = if symmetry_reduce { k.min(used + 1) } else { k };
        for letter in 0..limit as u8 {
            *nodes += 1;
            if *nodes > budget.max_nodes {
                *over_budget = true;
                return false;
            }
            if *nodes % 4096 == 0 {
                if let Some(secs) = budget.max_seconds {
                    if start.elapsed().as_secs_f64() > secs {
                        *over_budget = true;
                        return false;
                    }
                }
            }
            cur.push(letter);
            if extends_ok(cur) {
                if cur.len() > best.len() {
                    *best = cur.clone();
                }
                if dfs(
                    cur,
                    best,
                    k,
                    symmetry_reduce,
                    budget,
                    nodes,
                    start,
                    over_budget,
                    extends_ok,
                ) {
                    cur.pop();
                    return true;
                }
                if *over_budget {
                    cur.pop();
                    return false;
                }
            }
            cur.pop();
        }
        false
    }

    let reached = if budget.max_len == 0 || budget.max_nodes == 0 {
        over_budget = budget.max_nodes == 0 && budget.max_len > 0;
        budget.max_len == 0
    } else {
        dfs(
            &mut cur,
            &mut best,
            k,
            symmetry_reduce,
            budget,
            &mut nodes,
            &start,
            &mut over_budget,
            extends_ok,
        )
    };

    let verdict = if reached {
        Verdict::Found
    } else if over_budget {
        Verdict::Budget
    } else {
        Verdict::Exhausted
    };
    let alphabet = Alphabet::new(k.max(1)).expect("alphabet size checked by caller");
    SearchOutcome {
        verdict,
        certificate: Word::new(alphabet, best).expect("letters < k"),
        stats: SearchStats {
            nodes,
            elapsed_seconds: start.elapsed().as_secs_f64(),
        },
    }
}
