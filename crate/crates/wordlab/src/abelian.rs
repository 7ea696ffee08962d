//! Abelian, k-abelian, and additive repetition machinery.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::patterns::{Pattern, PatternSymbol};
use crate::search::{longest_word_search, SearchBudget, SearchOutcome, Verdict};
use crate::word::{rational, rational_string, Rational, Word};

/// Parikh vector: letter counts indexed by letter.
pub fn parikh(s: &[u8], k: usize) -> Vec<u64> {
    let mut v = vec![0u64; k];
    for &l in s {
        v[l as usize] += 1;
    }
    v
}

pub fn parikh_word(w: &Word) -> Vec<u64> {
    parikh(w.letters(), w.alphabet().size())
}

pub fn abelian_equiv(u: &[u8], v: &[u8], k: usize) -> bool {
    u.len() == v.len() && parikh(u, k) == parikh(v, k)
}

fn factor_counts(s: &[u8], len: usize) -> HashMap<&[u8], u64> {
    let mut map = HashMap::new();
    if len == 0 || len > s.len() {
        return map;
    }
    for win in s.windows(len) {
        *map.entry(win).or_insert(0) += 1;
    }
    map
}

/// u ~_k v: equal occurrence counts for every word of length at most k.
pub fn kabelian_equiv(u: &[u8], v: &[u8], k: usize) -> Result<bool> {
    if k == 0 {
        return Err(Error::Domain("k must be at least 1".into()));
    }
    if u.len() != v.len() {
        return Ok(false);
    }
    for len in 1..=k.min(u.len()) {
        if factor_counts(u, len) != factor_counts(v, len) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AbelianPowerReport {
    pub block_length: usize,
    pub blocks: usize,
    pub kind: String,
}

/// Report iff |w| is divisible by n and consecutive equal-length blocks are
/// pairwise k-abelian equivalent (k = 1 is the plain abelian power).
pub fn is_kabelian_npower(w: &Word, n: usize, k: usize) -> Result<Option<AbelianPowerReport>> {
    if n == 0 || k == 0 {
        return Err(Error::Domain("n and k must be at least 1".into()));
    }
    let s = w.letters();
    if s.is_empty() || s.len() % n != 0 {
        return Ok(None);
    }
    let b = s.len() / n;
    let first = &s[..b];
    for i in 1..n {
        if !kabelian_equiv(first, &s[i * b..(i + 1) * b], k)? {
            return Ok(None);
        }
    }
    Ok(Some(AbelianPowerReport {
        block_length: b,
        blocks: n,
        kind: if k == 1 {
            "abelian".to_string()
        } else {
            format!("{k}-abelian")
        },
    }))
}

/// True iff some literal nth power x^n of the same length is k-abelian
/// equivalent to w, decided by searching candidate blocks x (pruned by the
/// Parikh constraint n·parikh(x) = parikh(w)).
pub fn is_strongly_kabelian_npower(w: &Word, n: usize, k: usize) -> Result<bool> {
    if n == 0 || k == 0 {
        return Err(Error::Domain("n and k must be at least 1".into()));
    }
    let s = w.letters();
    if s.is_empty() || s.len() % n != 0 {
        return Ok(false);
    }
    let b = s.len() / n;
    let ksz = w.alphabet().size();
    let target = parikh(s, ksz);
    if target.iter().any(|&c| c % n as u64 != 0) {
        return Ok(false);
    }
    let block_parikh: Vec<u64> = target.iter().map(|&c| c / n as u64).collect();
    let mut x = vec![0u8; b];
    strong_search(&mut x, 0, ksz, &block_parikh, &mut |x| {
        let mut power = Vec::with_capacity(b * n);
        for _ in 0..n {
            power.extend_from_slice(x);
        }
        kabelian_equiv(&power, s, k).expect("k >= 1")
    })
}

fn strong_search(
    x: &mut Vec<u8>,
    depth: usize,
    ksz: usize,
    remaining_budget: &[u64],
    check: &mut dyn FnMut(&[u8]) -> bool,
) -> Result<bool> {
    // enumerate blocks whose Parikh vector equals the budget exactly
    fn rec(
        x: &mut Vec<u8>,
        depth: usize,
        ksz: usize,
        left: &mut Vec<u64>,
        check: &mut dyn FnMut(&[u8]) -> bool,
    ) -> bool {
        if depth == x.len() {
            return check(x);
        }
        for l in 0..ksz as u8 {
            if left[l as usize] == 0 {
                continue;
            }
            left[l as usize] -= 1;
            x[depth] = l;
            if rec(x, depth + 1, ksz, left, check) {
                left[l as usize] += 1;
                return true;
            }
            left[l as usize] += 1;
        }
        false
    }
    let mut left = remaining_budget.to_vec();
    Ok(rec(x, depth, ksz, &mut left, check))
}

/// True iff w has a factor f_1…f_m, one nonempty block per pattern symbol,
/// with blocks abelian-equivalent whenever the pattern symbols are equal.
pub fn abelian_encounters(w: &Word, p: &Pattern) -> Result<bool> {
    if p.has_constants() {
        return Err(Error::Unsupported(
            "abelian encounters with constant letters are not supported".into(),
        ));
    }
    let vars: Vec<u8> = p
        .symbols()
        .iter()
        .map(|s| match s {
            PatternSymbol::Var(v) => *v,
            PatternSymbol::Const(_) => unreachable!(),
        })
        .collect();
    Ok(abelian_encounter_witness(w, &vars).is_some())
}

/// Abelian pattern encounter over variable indices (e.g. XYX = [0,1,0]).
/// Returns the 1-indexed start and the block lengths of a witness.
pub fn abelian_encounter_witness(w: &Word, pattern_vars: &[u8]) -> Option<(usize, Vec<usize>)> {
    let s = w.letters();
    let k = w.alphabet().size();
    let nvar = (*pattern_vars.iter().max()? as usize) + 1;
    for start in 0..s.len() {
        let mut lens = vec![1usize; nvar];
        'profiles: loop {
            let total: usize = pattern_vars.iter().map(|&v| lens[v as usize]).sum();
            if start + total <= s.len() {
                let mut ok = true;
                let mut pos = start;
                let mut seen: Vec<Option<Vec<u64>>> = vec![None; nvar];
                for &v in pattern_vars {
                    let l = lens[v as usize];
                    let pv = parikh(&s[pos..pos + l], k);
                    match &seen[v as usize] {
                        None => seen[v as usize] = Some(pv),
                        Some(prev) => {
                            if *prev != pv {
                                ok = false;
                                break;
                            }
                        }
                    }
                    pos += l;
                }
                if ok {
                    return Some((
                        start + 1,
                        pattern_vars.iter().map(|&v| lens[v as usize]).collect(),
                    ));
                }
            }
            // odometer over block lengths, capped by the remaining space
            let cap = s.len() - start;
            for i in 0..nvar {
                lens[i] += 1;
                let total: usize = pattern_vars.iter().map(|&v| lens[v as usize]).sum();
                if total <= cap {
                    continue 'profiles;
                }
                lens[i] = 1;
            }
            break;
        }
    }
    None
}

/// The conjecture's decision surrogate: true iff the Zimin word Z_n does NOT
/// abelian-encounter p.
pub fn zimin_abelian_test(p: &Pattern, n: usize) -> Result<bool> {
    if n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    let z = crate::morphism::classics::zimin(n)?;
    Ok(!abelian_encounters(&z, p)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SquareCountMode {
    Distinct,
    Inequivalent,
}

/// Abelian square factors of w: distinct counts factor shapes, inequivalent
/// counts Parikh vectors (which determine the length).
pub fn count_abelian_squares(w: &Word, mode: SquareCountMode) -> usize {
    let s = w.letters();
    let k = w.alphabet().size();
    let mut shapes: HashSet<&[u8]> = HashSet::new();
    let mut vectors: HashSet<Vec<u64>> = HashSet::new();
    for i in 0..s.len() {
        for b in 1..=(s.len() - i) / 2 {
            if abelian_equiv(&s[i..i + b], &s[i + b..i + 2 * b], k) {
                match mode {
                    SquareCountMode::Distinct => {
                        shapes.insert(&s[i..i + 2 * b]);
                    }
                    SquareCountMode::Inequivalent => {
                        vectors.insert(parikh(&s[i..i + 2 * b], k));
                    }
                }
            }
        }
    }
    match mode {
        SquareCountMode::Distinct => shapes.len(),
        SquareCountMode::Inequivalent => vectors.len(),
    }
}

/// Additive n-power: n equal-length blocks with equal digit sums. Digit
/// values default to the alphabet's own digits (letter indices for plain
/// alphabets); a value map permits alphabets like {0,2,5}.
pub fn is_additive_npower(
    w: &Word,
    n: usize,
    values: Option<&[i64]>,
) -> Result<Option<AbelianPowerReport>> {
    if n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    let s = w.letters();
    if s.is_empty() || s.len() % n != 0 {
        return Ok(None);
    }
    let k = w.alphabet().size();
    let default = w.alphabet().digit_values();
    let values = match values {
        Some(v) => {
            if v.len() != k {
                return Err(Error::Domain(format!(
                    "value map has {} entries for alphabet of size {k}",
                    v.len()
                )));
            }
            v
        }
        None => &default,
    };
    let b = s.len() / n;
    let sum = |blk: &[u8]| -> i64 { blk.iter().map(|&l| values[l as usize]).sum() };
    let first = sum(&s[..b]);
    if (1..n).all(|i| sum(&s[i * b..(i + 1) * b]) == first) {
        Ok(Some(AbelianPowerReport {
            block_length: b,
            blocks: n,
            kind: "additive".to_string(),
        }))
    } else {
        Ok(None)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PowerKind {
    Abelian,
    KAbelian(usize),
    Additive,
}

fn power_suffix_present(s: &[u8], n: usize, min_period: usize, kind: &PowerKind, k: usize, values: &[i64]) -> bool {
    let len = s.len();
    for b in min_period..=len / n {
        let start = len - n * b;
        let hit = match kind {
            PowerKind::Abelian => {
                let first = parikh(&s[start..start + b], k);
                (1..n).all(|i| parikh(&s[start + i * b..start + (i + 1) * b], k) == first)
            }
            PowerKind::KAbelian(kk) => {
                let first = &s[start..start + b];
                (1..n).all(|i| {
                    kabelian_equiv(first, &s[start + i * b..start + (i + 1) * b], *kk)
                        .expect("k >= 1")
                })
            }
            PowerKind::Additive => {
                let sum = |blk: &[u8]| -> i64 { blk.iter().map(|&l| values[l as usize]).sum() };
                let first = sum(&s[start..start + b]);
                (1..n).all(|i| sum(&s[start + i * b..start + (i + 1) * b]) == first)
            }
        };
        if hit {
            return true;
        }
    }
    false
}

/// Backtracking for the longest word over `k_letters` containing no
/// kind-n-power factor whose block length is at least `min_period`.
pub fn avoid_long_powers_search(
    k_letters: usize,
    kind: PowerKind,
    n: usize,
    min_period: usize,
    budget: &SearchBudget,
) -> Result<SearchOutcome<Word>> {
    if n < 2 || k_letters < 1 || min_period < 1 {
        return Err(Error::Domain("need n >= 2, k >= 1, min_period >= 1".into()));
    }
    if let PowerKind::KAbelian(0) = kind {
        return Err(Error::Domain("k-abelian k must be at least 1".into()));
    }
    let values: Vec<i64> = (0..k_letters as i64).collect();
    // digit sums are not invariant under letter permutations, so the
    // additive kind must search without symmetry reduction
    let reduce = !matches!(kind, PowerKind::Additive);
    Ok(longest_word_search(k_letters, reduce, budget, &mut |s| {
        !power_suffix_present(s, n, min_period, &kind, k_letters, &values)
    }))
}

/// Plain abelian n-power avoidance, block length unrestricted.
pub fn avoid_abelian_powers(n: usize, k: usize, budget: &SearchBudget) -> Result<SearchOutcome<Word>> {
    avoid_long_powers_search(k, PowerKind::Abelian, n, 1, budget)
}

#[derive(Debug, Clone, Serialize)]
pub struct GridPoint {
    pub exponent: String,
    pub verdict: Verdict,
    pub best_length: usize,
    pub nodes: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ArtDartReport {
    pub alphabet_size: usize,
    pub points: Vec<GridPoint>,
    /// Greatest grid exponent where the search exhausted (lower evidence).
    pub lower_evidence: Option<String>,
    /// Least grid exponent where the search sustained the budget length
    /// (upper evidence).
    pub upper_evidence: Option<String>,
}

fn abelian_exponent_suffix_bad(s: &[u8], k: usize, alpha: Rational, strict: bool) -> bool {
    let n = s.len();
    for b in 1..n {
        for r in 0..b.min(n) {
            let full_end = n - r;
            if full_end < b {
                continue;
            }
            let base = parikh(&s[full_end - b..full_end], k);
            if r > 0 {
                let part = parikh(&s[n - r..], k);
                if part.iter().zip(&base).any(|(p, b)| p > b) {
                    continue;
                }
            }
            let mut blocks = 1;
            while full_end >= (blocks + 1) * b
                && parikh(&s[full_end - (blocks + 1) * b..full_end - blocks * b], k) == base
            {
                blocks += 1;
            }
            if blocks < 2 && r == 0 {
                continue;
            }
            let len = blocks * b + r;
            let e = rational(len as i64, b as i64);
            let bad = if strict { e > alpha } else { e >= alpha };
            if bad {
                return true;
            }
        }
    }
    false
}

/// Empirical bracket for the abelian repetition threshold over n letters:
/// for each grid exponent s in (1,2], search for long words with no abelian
/// repetition of exponent >= s.
pub fn art_dart_probe(
    n_letters: usize,
    grid: &[Rational],
    budget: &SearchBudget,
) -> Result<ArtDartReport> {
    if grid.is_empty() {
        return Err(Error::Domain("exponent grid must be nonempty".into()));
    }
    if n_letters < 1 {
        return Err(Error::Domain("alphabet size must be at least 1".into()));
    }
    for &s in grid {
        if s <= rational(1, 1) || s > rational(2, 1) {
            return Err(Error::Domain(format!(
                "grid exponent {} outside (1, 2]",
                rational_string(s)
            )));
        }
    }
    let mut points = Vec::new();
    let mut lower: Option<Rational> = None;
    let mut upper: Option<Rational> = None;
    for &alpha in grid {
        let out = longest_word_search(n_letters, true, budget, &mut |s| {
            !abelian_exponent_suffix_bad(s, n_letters, alpha, false)
        });
        if out.verdict == Verdict::Exhausted && lower.map_or(true, |l| alpha > l) {
            lower = Some(alpha);
        }
        if out.verdict == Verdict::Found && upper.map_or(true, |u| alpha < u) {
            upper = Some(alpha);
        }
        points.push(GridPoint {
            exponent: rational_string(alpha),
            verdict: out.verdict,
            best_length: out.certificate.len(),
            nodes: out.stats.nodes,
        });
    }
    Ok(ArtDartReport {
        alphabet_size: n_letters,
        points,
        lower_evidence: lower.map(rational_string),
        upper_evidence: upper.map(rational_string),
    })
}

/// Greatest exponent |span|/b over abelian periods b of any abelian
/// repetition in w, scanning periods up to `max_period`.
pub fn max_abelian_exponent(w: &Word, max_period: usize) -> Option<(Rational, AbelianPowerReport)> {
    let s = w.letters();
    let k = w.alphabet().size();
    let n = s.len();
    let mut best: Option<(Rational, AbelianPowerReport)> = None;
    for b in 1..=max_period.min(n) {
        for i in 0..n.saturating_sub(b) + 1 {
            if i + b > n {
                break;
            }
            let base = parikh(&s[i..i + b], k);
            let mut blocks = 1;
            while i + (blocks + 1) * b <= n
                && parikh(&s[i + blocks * b..i + (blocks + 1) * b], k) == base
            {
                blocks += 1;
            }
            let mut extra = 0;
            let mut partial = vec![0u64; k];
            while i + blocks * b + extra < n && extra < b {
                let l = s[i + blocks * b + extra] as usize;
                partial[l] += 1;
                if partial[l] > base[l] {
                    break;
                }
                extra += 1;
            }
            let len = blocks * b + extra;
            let e = rational(len as i64, b as i64);
            if best.as_ref().map_or(true, |(be, _)| e > *be) {
                best = Some((
                    e,
                    AbelianPowerReport {
                        block_length: b,
                        blocks,
                        kind: "abelian".to_string(),
                    },
                ));
            }
        }
    }
    best
}

#[derive(Debug, Clone, Serialize)]
pub struct StrongPowerCensus {
    pub alphabet_size: usize,
    pub n: usize,
    pub k: usize,
    pub length: usize,
    /// k-abelian equivalence classes of words of this length that contain a
    /// literal nth power.
    pub classes_with_npower: u64,
    pub total_classes: u64,
    /// Words of this length that are strongly k-abelian nth powers.
    pub strong_npowers: u64,
    /// Words of this length none of whose factors is a strongly k-abelian
    /// nth power.
    pub avoiders: u64,
}

fn class_key(s: &[u8], k: usize) -> Vec<(Vec<u8>, u64)> {
    let mut key: BTreeMap<Vec<u8>, u64> = BTreeMap::new();
    for len in 1..=k.min(s.len()) {
        for win in s.windows(len) {
            *key.entry(win.to_vec()).or_insert(0) += 1;
        }
    }
    key.into_iter().collect()
}

fn is_literal_npower(s: &[u8], n: usize) -> bool {
    if s.is_empty() || s.len() % n != 0 {
        return false;
    }
    let b = s.len() / n;
    (1..n).all(|i| s[..b] == s[i * b..(i + 1) * b])
}

/// Exhaustive census over all words of the given length.
pub fn strong_power_census(
    alphabet: usize,
    n: usize,
    k: usize,
    length: usize,
) -> Result<StrongPowerCensus> {
    if alphabet == 0 || n == 0 || k == 0 {
        return Err(Error::Domain("alphabet, n and k must be at least 1".into()));
    }
    let total = (alphabet as u128).checked_pow(length as u32).unwrap_or(u128::MAX);
    if total > 1 << 24 {
        return Err(Error::Budget(format!("{total} words is too many to enumerate")));
    }
    let mut classes: HashMap<Vec<(Vec<u8>, u64)>, bool> = HashMap::new();
    let mut strong = 0u64;
    let mut avoiders = 0u64;
    let mut letters = vec![0u8; length];
    loop {
        let key = class_key(&letters, k);
        let has = classes.entry(key).or_insert(false);
        *has |= is_literal_npower(&letters, n);
        let word = Word::from_letters_sized(&letters, alphabet)?;
        if is_strongly_kabelian_npower(&word, n, k)? {
            strong += 1;
        }
        let mut clean = true;
        'factors: for i in 0..length {
            for j in i + 1..=length {
                let f = Word::from_letters_sized(&letters[i..j], alphabet)?;
                if is_strongly_kabelian_npower(&f, n, k)? {
                    clean = false;
                    break 'factors;
                }
            }
        }
        if clean {
            avoiders += 1;
        }
        if !increment(&mut letters, alphabet) {
            break;
        }
    }
    Ok(StrongPowerCensus {
        alphabet_size: alphabet,
        n,
        k,
        length,
        classes_with_npower: classes.values().filter(|&&b| b).count() as u64,
        total_classes: classes.len() as u64,
        strong_npowers: strong,
        avoiders,
    })
}

fn increment(letters: &mut [u8], k: usize) -> bool {
    let mut i = letters.len();
    while i > 0 {
        i -= 1;
        if (letters[i] as usize) + 1 < k {
            letters[i] += 1;
            for b in letters[i + 1..].iter_mut() {
                *b = 0;
            }
            return true;
        }
    }
    false
}

#[derive(Debug, Clone, Serialize)]
pub struct PowerOccurrence {
    pub position: usize,
    pub period: usize,
    pub exponent: usize,
}

/// All occurrences of abelian n-powers (maximal n per position and period);
/// used to inspect fixed points such as the Mäkelä candidates.
pub fn abelian_power_occurrences(w: &Word, min_n: usize) -> Vec<PowerOccurrence> {
    let s = w.letters();
    let k = w.alphabet().size();
    let mut out = Vec::new();
    for i in 0..s.len() {
        for b in 1..=(s.len() - i) / min_n.max(2) {
            let base = parikh(&s[i..i + b], k);
            let mut blocks = 1;
            while i + (blocks + 1) * b <= s.len()
                && parikh(&s[i + blocks * b..i + (blocks + 1) * b], k) == base
            {
                blocks += 1;
            }
            if blocks >= min_n {
                out.push(PowerOccurrence {
                    position: i + 1,
                    period: b,
                    exponent: blocks,
                });
            }
        }
    }
    out
}

pub fn first_abelian_power(w: &Word, n: usize) -> Option<PowerOccurrence> {
    let mut occ = abelian_power_occurrences(w, n);
    occ.sort_by_key(|o| (o.position + o.period * n, o.position));
    occ.into_iter().next()
}

/// Lengths l <= n_max admitting an abelian-n-power-free word over k letters.
pub fn abelian_free_lengths(n: usize, k: usize, n_max: usize) -> Result<BTreeSet<usize>> {
    if n < 2 || k < 1 {
        return Err(Error::Domain("need n >= 2 and k >= 1".into()));
    }
    let mut out = BTreeSet::new();
    for len in 1..=n_max {
        let o = avoid_abelian_powers(n, k, &SearchBudget::length(len))?;
        if o.verdict == Verdict::Found {
            out.insert(len);
        }
    }
    Ok(out)
}
