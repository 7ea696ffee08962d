//! Pattern encounters and bounded avoidance searches.
//!
//! Pattern syntax: uppercase letters are variables (in order of first
//! appearance), lowercase letters are constant letters (a = 0, b = 1, ...).
//! Variable images are nonempty unless a search explicitly relaxes that.

use std::collections::BTreeSet;
use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::morphism::Morphism;
use crate::search::{longest_word_search, SearchBudget, SearchOutcome, SearchStats, Verdict};
use crate::word::{Alphabet, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PatternSymbol {
    Var(u8),
    Const(u8),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Pattern {
    symbols: Vec<PatternSymbol>,
    var_count: u8,
    text: String,
}

impl Pattern {
    pub fn parse(text: &str) -> Result<Pattern> {
        let mut symbols = Vec::new();
        let mut vars: Vec<char> = Vec::new();
        for c in text.trim().chars() {
            if c.is_ascii_uppercase() {
                let idx = match vars.iter().position(|&v| v == c) {
                    Some(i) => i,
                    None => {
                        vars.push(c);
                        vars.len() - 1
                    }
                };
                symbols.push(PatternSymbol::Var(idx as u8));
            } else if c.is_ascii_lowercase() {
                symbols.push(PatternSymbol::Const(c as u8 - b'a'));
            } else if c.is_ascii_digit() {
                // digit patterns ("01020312") read as one variable per digit
                let idx = match vars.iter().position(|&v| v == c) {
                    Some(i) => i,
                    None => {
                        vars.push(c);
                        vars.len() - 1
                    }
                };
                symbols.push(PatternSymbol::Var(idx as u8));
            } else {
                return Err(Error::Parse(format!("bad pattern symbol {c:?}")));
            }
        }
        if symbols.is_empty() {
            return Err(Error::Parse("empty pattern".into()));
        }
        Ok(Pattern {
            symbols,
            var_count: vars.len() as u8,
            text: text.trim().to_string(),
        })
    }

    pub fn symbols(&self) -> &[PatternSymbol] {
        &self.symbols
    }

    pub fn var_count(&self) -> usize {
        self.var_count as usize
    }

    pub fn has_constants(&self) -> bool {
        self.symbols.iter().any(|s| matches!(s, PatternSymbol::Const(_)))
    }

    pub fn text(&self) -> &str {
        &self.text
    }
}

impl std::fmt::Display for Pattern {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.text)
    }
}

/// A verified witness that a word encounters a pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncounterWitness {
    /// 1-indexed start of the occurrence in the host word.
    pub position: usize,
    pub length: usize,
    /// One nonempty image per pattern variable.
    pub assignment: Vec<Word>,
}

impl EncounterWitness {
    /// Substitute the assignment into the pattern and check it really is a
    /// factor of `host` at the stated position.
    pub fn verify(&self, host: &Word, p: &Pattern) -> bool {
        let mut image: Vec<u8> = Vec::new();
        for sym in p.symbols() {
            match sym {
                PatternSymbol::Var(v) => {
                    let img = &self.assignment[*v as usize];
                    if img.is_empty() {
                        return false;
                    }
                    image.extend_from_slice(img.letters());
                }
                PatternSymbol::Const(c) => image.push(*c),
            }
        }
        if image.len() != self.length || self.position < 1 {
            return false;
        }
        let s = host.letters();
        let start = self.position - 1;
        start + image.len() <= s.len() && s[start..start + image.len()] == image[..]
    }
}

fn match_from(
    s: &[u8],
    pos: usize,
    p: &[PatternSymbol],
    sym_idx: usize,
    end_cap: usize,
    exact_end: Option<usize>,
    assignment: &mut Vec<Option<(usize, usize)>>, // var -> (start, len) into s
) -> Option<usize> {
    if sym_idx == p.len() {
        return match exact_end {
            Some(e) if pos != e => None,
            _ => Some(pos),
        };
    }
    // at least one letter per remaining symbol
    let remaining_min = p.len() - sym_idx;
    if pos + remaining_min > end_cap {
        return None;
    }
    match p[sym_idx] {
        PatternSymbol::Const(c) => {
            if s[pos] == c {
                match_from(s, pos + 1, p, sym_idx + 1, end_cap, exact_end, assignment)
            } else {
                None
            }
        }
        PatternSymbol::Var(v) => {
            if let Some((st, len)) = assignment[v as usize] {
                if pos + len <= end_cap && s[pos..pos + len] == s[st..st + len] {
                    match_from(s, pos + len, p, sym_idx + 1, end_cap, exact_end, assignment)
                } else {
                    None
                }
            } else {
                let max_len = end_cap - pos - (remaining_min - 1);
                for len in 1..=max_len {
                    assignment[v as usize] = Some((pos, len));
                    if let Some(e) =
                        match_from(s, pos + len, p, sym_idx + 1, end_cap, exact_end, assignment)
                    {
                        return Some(e);
                    }
                    assignment[v as usize] = None;
                }
                None
            }
        }
    }
}

/// First witness that `w` encounters `p`, scanning start positions left to
/// right and trying shorter variable images first.
pub fn encounters(w: &Word, p: &Pattern) -> Option<EncounterWitness> {
    let s = w.letters();
    let n = s.len();
    for start in 0..n {
        let mut assignment: Vec<Option<(usize, usize)>> = vec![None; p.var_count()];
        if let Some(end) = match_from(s, start, p.symbols(), 0, n, None, &mut assignment) {
            let images = assignment
                .into_iter()
                .map(|slot| {
                    let (st, len) = slot.expect("every variable bound in a full match");
                    w.slice_word(st..st + len)
                })
                .collect();
            let witness = EncounterWitness {
                position: start + 1,
                length: end - start,
                assignment: images,
            };
            debug_assert!(witness.verify(w, p));
            return Some(witness);
        }
    }
    None
}

pub fn is_pattern_free(w: &Word, p: &Pattern) -> bool {
    encounters(w, p).is_none()
}

/// True iff no encounter of `p` ends exactly at the last letter of `w` —
/// the incremental check used by all avoidance searches.
pub fn pattern_free_extension(s: &[u8], p: &Pattern) -> bool {
    let n = s.len();
    for start in 0..n {
        let mut assignment: Vec<Option<(usize, usize)>> = vec![None; p.var_count()];
        if match_from(s, start, p.symbols(), 0, n, Some(n), &mut assignment).is_some() {
            return false;
        }
    }
    true
}

/// Depth-first backtracking for the longest p-free word over `k` letters.
pub fn longest_avoiding(p: &Pattern, k: usize, budget: &SearchBudget) -> Result<SearchOutcome<Word>> {
    if k < 1 {
        return Err(Error::Domain("alphabet size must be at least 1".into()));
    }
    // symmetry reduction is only sound for constant-free patterns
    let reduce = !p.has_constants();
    Ok(longest_word_search(k, reduce, budget, &mut |w| {
        pattern_free_extension(w, p)
    }))
}

/// All n ≤ n_max such that a circular p-free word of length n over k letters
/// exists. Circular p-freeness: no factor of the cyclic word of length ≤ n
/// encounters p.
pub fn circular_avoiding_lengths(p: &Pattern, k: usize, n_max: usize) -> Result<BTreeSet<usize>> {
    if n_max < 1 || k < 1 {
        return Err(Error::Domain("k and n_max must be at least 1".into()));
    }
    let mut out = BTreeSet::new();
    for n in 1..=n_max {
        let mut letters = vec![0u8; n];
        if exists_circular_free(&mut letters, 0, k, p, n) {
            out.insert(n);
        }
    }
    Ok(out)
}

fn exists_circular_free(letters: &mut Vec<u8>, depth: usize, k: usize, p: &Pattern, n: usize) -> bool {
    if depth == n {
        return circular_is_free(letters, p);
    }
    // canonical representatives only: first letter fixed to 0 is unsound for
    // constant patterns, so enumerate everything
    for l in 0..k as u8 {
        letters[depth] = l;
        if exists_circular_free(letters, depth + 1, k, p, n) {
            return true;
        }
    }
    false
}

fn circular_is_free(letters: &[u8], p: &Pattern) -> bool {
    let n = letters.len();
    let mut double = letters.to_vec();
    double.extend_from_slice(letters);
    for start in 0..n {
        let mut assignment: Vec<Option<(usize, usize)>> = vec![None; p.var_count()];
        // any encounter inside a cyclic factor of length <= n starts at one
        // of the first n positions of the doubled word and spans at most n
        if match_from(&double, start, p.symbols(), 0, start + n, None, &mut assignment).is_some() {
            return false;
        }
    }
    true
}

/// True iff `w` is p-free but a·w·b encounters p for every pair of letters
/// of w's alphabet.
pub fn is_maximal_pfree(w: &Word, p: &Pattern) -> Result<bool> {
    if !is_pattern_free(w, p) {
        return Err(Error::Domain("word is not p-free".into()));
    }
    let k = w.alphabet().size();
    for a in 0..k as u8 {
        for b in 0..k as u8 {
            let mut letters = vec![a];
            letters.extend_from_slice(w.letters());
            letters.push(b);
            let ext = Word::new(w.alphabet().clone(), letters)?;
            if is_pattern_free(&ext, p) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Serialize)]
pub struct D0lVerdict {
    pub horizon: usize,
    pub free_up_to_horizon: bool,
    pub encounter_position: Option<usize>,
}

/// Evidence (never proof) that the fixed point of `m` at `a` avoids `p` —
/// checks the length-`horizon` prefix. With `outer` set this is the HD0L
/// variant: the outer morphism is applied to the prefix first.
pub fn d0l_avoidance_check(
    m: &Morphism,
    a: u8,
    p: &Pattern,
    horizon: usize,
    outer: Option<&Morphism>,
) -> Result<D0lVerdict> {
    let mut prefix = m.fixed_point_prefix(a, horizon)?;
    if let Some(f) = outer {
        let mapped = f.apply(&prefix)?;
        let cut = horizon.min(mapped.len());
        prefix = mapped.slice_word(0..cut);
    }
    let witness = encounters(&prefix, p);
    Ok(D0lVerdict {
        horizon,
        free_up_to_horizon: witness.is_none(),
        encounter_position: witness.map(|w| w.position),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GrowthTrend {
    Finite,
    Polynomial,
    Exponential,
}

#[derive(Debug, Clone, Serialize)]
pub struct GrowthCensus {
    /// counts[n] = number of predicate-satisfying words of length n.
    pub counts: Vec<u64>,
    /// Advisory regression-based classification, never a correctness claim.
    pub trend: GrowthTrend,
}

/// Per-length counts of words whose every prefix passes the suffix check
/// (prefix-tree traversal; correct for factorial languages such as p-free
/// or α-free words).
pub fn growth_census(
    k: usize,
    n_max: usize,
    extends_ok: &mut dyn FnMut(&[u8]) -> bool,
) -> GrowthCensus {
    let mut counts = vec![0u64; n_max + 1];
    counts[0] = 1;
    let mut cur: Vec<u8> = Vec::new();
    fn walk(
        cur: &mut Vec<u8>,
        k: usize,
        n_max: usize,
        counts: &mut Vec<u64>,
        extends_ok: &mut dyn FnMut(&[u8]) -> bool,
    ) {
        if cur.len() == n_max {
            return;
        }
        for l in 0..k as u8 {
            cur.push(l);
            if extends_ok(cur) {
                counts[cur.len()] += 1;
                walk(cur, k, n_max, counts, extends_ok);
            }
            cur.pop();
        }
    }
    walk(&mut cur, k, n_max, &mut counts, extends_ok);
    GrowthCensus {
        trend: classify_growth(&counts),
        counts,
    }
}

fn classify_growth(counts: &[u64]) -> GrowthTrend {
    if counts.iter().any(|&c| c == 0) {
        return GrowthTrend::Finite;
    }
    let pts: Vec<(f64, f64)> = counts
        .iter()
        .enumerate()
        .skip(1)
        .map(|(n, &c)| (n as f64, (c as f64).ln()))
        .collect();
    if pts.len() < 3 {
        return GrowthTrend::Polynomial;
    }
    // residuals of least-squares fits: log c vs n (exponential) and
    // log c vs log n (polynomial)
    let fit = |xs: &[f64], ys: &[f64]| -> f64 {
        let n = xs.len() as f64;
        let sx: f64 = xs.iter().sum();
        let sy: f64 = ys.iter().sum();
        let sxx: f64 = xs.iter().map(|x| x * x).sum();
        let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| x * y).sum();
        let denom = n * sxx - sx * sx;
        if denom.abs() < 1e-12 {
            return f64::INFINITY;
        }
        let slope = (n * sxy - sx * sy) / denom;
        let intercept = (sy - slope * sx) / n;
        xs.iter()
            .zip(ys)
            .map(|(x, y)| {
                let e = y - (slope * x + intercept);
                e * e
            })
            .sum()
    };
    let xs_lin: Vec<f64> = pts.iter().map(|p| p.0).collect();
    let xs_log: Vec<f64> = pts.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.1).collect();
    if fit(&xs_lin, &ys) < fit(&xs_log, &ys) {
        GrowthTrend::Exponential
    } else {
        GrowthTrend::Polynomial
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SubtreeStats {
    pub depth: usize,
    /// Nodes of the predicate-satisfying subtree rooted at the given word,
    /// root included.
    pub nodes: u64,
    pub leaves: u64,
    /// True when no branch survives to the depth limit: a finite-subtree
    /// certificate. An alive frontier is inconclusive.
    pub frontier_alive: bool,
}

/// Explore the prefix-tree subtree rooted at `root` restricted to words whose
/// extensions pass `extends_ok`, to the given depth.
pub fn subtree_explore(
    root: &Word,
    k: usize,
    depth: usize,
    extends_ok: &mut dyn FnMut(&[u8]) -> bool,
    root_ok: bool,
) -> Result<SubtreeStats> {
    if !root_ok {
        return Err(Error::Domain("root word violates the predicate".into()));
    }
    let mut stats = SubtreeStats {
        depth,
        nodes: 1,
        leaves: 0,
        frontier_alive: false,
    };
    let mut cur = root.letters().to_vec();
    fn walk(
        cur: &mut Vec<u8>,
        k: usize,
        remaining: usize,
        stats: &mut SubtreeStats,
        extends_ok: &mut dyn FnMut(&[u8]) -> bool,
    ) {
        if remaining == 0 {
            stats.frontier_alive = true;
            return;
        }
        let mut any_child = false;
        for l in 0..k as u8 {
            cur.push(l);
            if extends_ok(cur) {
                any_child = true;
                stats.nodes += 1;
                walk(cur, k, remaining - 1, stats, extends_ok);
            }
            cur.pop();
        }
        if !any_child {
            stats.leaves += 1;
        }
    }
    walk(&mut cur, k, depth, &mut stats, extends_ok);
    Ok(stats)
}

/// Backtracking over sequences of nonempty palindromes whose concatenation
/// is p-free. Blocks are expanded shortest-first, in lexicographic order.
pub fn palindrome_concat_avoider(
    p: &Pattern,
    k: usize,
    max_block_len: usize,
    budget: &SearchBudget,
) -> Result<SearchOutcome<Vec<Word>>> {
    if k < 1 {
        return Err(Error::Domain("alphabet size must be at least 1".into()));
    }
    let alphabet = Alphabet::new(k)?;
    let blocks = palindromes_up_to(k, max_block_len.max(1));
    let start = Instant::now();
    let mut nodes: u64 = 0;
    let mut over_budget = false;
    let mut cur_blocks: Vec<usize> = Vec::new();
    let mut cur: Vec<u8> = Vec::new();
    let mut best_blocks: Vec<usize> = Vec::new();
    let mut best_len = 0usize;

    fn dfs(
        blocks: &[Vec<u8>],
        p: &Pattern,
        budget: &SearchBudget,
        start: &Instant,
        nodes: &mut u64,
        over_budget: &mut bool,
        cur_blocks: &mut Vec<usize>,
        cur: &mut Vec<u8>,
        best_blocks: &mut Vec<usize>,
        best_len: &mut usize,
    ) -> bool {
        if cur.len() >= budget.max_len {
            return true;
        }
        for (bi, block) in blocks.iter().enumerate() {
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
            let before = cur.len();
            let mut ok = true;
            for &l in block {
                cur.push(l);
                if !pattern_free_extension(cur, p) {
                    ok = false;
                    break;
                }
            }
            if ok {
                cur_blocks.push(bi);
                if cur.len() > *best_len {
                    *best_len = cur.len();
                    *best_blocks = cur_blocks.clone();
                }
                if dfs(
                    blocks, p, budget, start, nodes, over_budget, cur_blocks, cur, best_blocks,
                    best_len,
                ) {
                    return true;
                }
                cur_blocks.pop();
                if *over_budget {
                    cur.truncate(before);
                    return false;
                }
            }
            cur.truncate(before);
        }
        false
    }

    let reached = if budget.max_len == 0 {
        true
    } else if budget.max_nodes == 0 {
        over_budget = true;
        false
    } else {
        dfs(
            &blocks,
            p,
            budget,
            &start,
            &mut nodes,
            &mut over_budget,
            &mut cur_blocks,
            &mut cur,
            &mut best_blocks,
            &mut best_len,
        )
    };
    let verdict = if reached {
        Verdict::Found
    } else if over_budget {
        Verdict::Budget
    } else {
        Verdict::Exhausted
    };
    let certificate = best_blocks
        .iter()
        .map(|&bi| Word::new(alphabet.clone(), blocks[bi].clone()).expect("letters < k"))
        .collect();
    Ok(SearchOutcome {
        verdict,
        certificate,
        stats: SearchStats {
            nodes,
            elapsed_seconds: start.elapsed().as_secs_f64(),
        },
    })
}

/// All palindromes over k letters of length 1..=max_len, shortest first then
/// lexicographic.
fn palindromes_up_to(k: usize, max_len: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    for len in 1..=max_len {
        let half = (len + 1) / 2;
        let mut buf = vec![0u8; half];
        'enumerate: loop {
            let mut pal = buf.clone();
            pal.extend(buf[..len / 2].iter().rev().copied());
            out.push(pal);
            let mut i = half;
            while i > 0 {
                i -= 1;
                if (buf[i] as usize) + 1 < k {
                    buf[i] += 1;
                    for b in buf[i + 1..].iter_mut() {
                        *b = 0;
                    }
                    continue 'enumerate;
                }
            }
            break;
        }
    }
    out
}

/// The shuffle of u0 and u1 conducted by the binary sequence beta.
pub fn shuffle(u0: &Word, u1: &Word, beta: &[u8]) -> Result<Word> {
    if beta.len() != u0.len() + u1.len() {
        return Err(Error::Domain(format!(
            "conduction sequence length {} != |u0| + |u1| = {}",
            beta.len(),
            u0.len() + u1.len()
        )));
    }
    let zeros = beta.iter().filter(|&&b| b == 0).count();
    if zeros != u0.len() || beta.iter().any(|&b| b > 1) {
        return Err(Error::Domain(
            "conduction sequence must contain |u0| zeros and |u1| ones".into(),
        ));
    }
    let mut out = Vec::with_capacity(beta.len());
    let mut idx = [0usize; 2];
    for &b in beta {
        let src = if b == 0 { u0 } else { u1 };
        out.push(src.letters()[idx[b as usize]]);
        idx[b as usize] += 1;
    }
    let alphabet = if u0.alphabet().size() >= u1.alphabet().size() {
        u0.alphabet().clone()
    } else {
        u1.alphabet().clone()
    };
    Word::new(alphabet, out)
}

fn has_square(s: &[u8]) -> bool {
    let n = s.len();
    for i in 0..n {
        for p in 1..=(n - i) / 2 {
            if s[i..i + p] == s[i + p..i + 2 * p] {
                return true;
            }
        }
    }
    false
}

/// First conduction sequence (lexicographic, 0 < 1) such that u ⧢_β u is
/// square-free, or none.
pub fn self_shuffle_squarefree_search(u: &Word) -> Result<Option<Vec<u8>>> {
    if has_square(u.letters()) {
        return Err(Error::Domain("u must be square-free".into()));
    }
    let mut found = None;
    for_each_balanced_beta(u.len(), &mut |beta| {
        let w = shuffle(u, u, beta).expect("counts correct by construction");
        if !has_square(w.letters()) {
            found = Some(beta.to_vec());
            true
        } else {
            false
        }
    });
    Ok(found)
}

/// Number of conduction sequences producing a square-free self-shuffle.
pub fn self_shuffle_squarefree_count(u: &Word) -> Result<usize> {
    if has_square(u.letters()) {
        return Err(Error::Domain("u must be square-free".into()));
    }
    let mut count = 0usize;
    for_each_balanced_beta(u.len(), &mut |beta| {
        let w = shuffle(u, u, beta).expect("counts correct");
        if !has_square(w.letters()) {
            count += 1;
        }
        false
    });
    Ok(count)
}

/// Decide whether w = u ⧢_β u for some word u and conduction sequence β.
pub fn is_self_shuffle(w: &Word) -> Option<(Word, Vec<u8>)> {
    if w.len() % 2 != 0 {
        return None;
    }
    let half = w.len() / 2;
    let s = w.letters();
    let mut found = None;
    for_each_balanced_beta(half, &mut |beta| {
        let mut u0 = Vec::with_capacity(half);
        let mut u1 = Vec::with_capacity(half);
        for (i, &b) in beta.iter().enumerate() {
            if b == 0 {
                u0.push(s[i]);
            } else {
                u1.push(s[i]);
            }
        }
        if u0 == u1 {
            found = Some((Word::new(w.alphabet().clone(), u0).expect("sub-letters"), beta.to_vec()));
            true
        } else {
            false
        }
    });
    found
}

/// Enumerate all β with n zeros and n ones in lexicographic order; the
/// visitor returns true to stop early.
fn for_each_balanced_beta(n: usize, visit: &mut dyn FnMut(&[u8]) -> bool) {
    let mut beta = vec![0u8; 2 * n];
    fn rec(beta: &mut Vec<u8>, pos: usize, zeros: usize, ones: usize, n: usize, visit: &mut dyn FnMut(&[u8]) -> bool) -> bool {
        if pos == 2 * n {
            return visit(beta);
        }
        if zeros < n {
            beta[pos] = 0;
            if rec(beta, pos + 1, zeros + 1, ones, n, visit) {
                return true;
            }
        }
        if ones < n {
            beta[pos] = 1;
            if rec(beta, pos + 1, zeros, ones + 1, n, visit) {
                return true;
            }
        }
        false
    }
    rec(&mut beta, 0, 0, 0, n, visit);
}
