//! Periods, fractional powers, distinct-square and runs counting, and the
//! prefix/suffix square duplication and completion operations.
//!
//! The naive quadratic/cubic reference algorithms here are authoritative;
//! anything faster must agree with them on every tested input.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::morphism::PrefixOracle;
use crate::search::{SearchBudget, SearchOutcome, SearchStats, Verdict};
use crate::word::{rational, Rational, Word};

/// Smallest period of a nonempty letter slice.
pub fn least_period_slice(w: &[u8]) -> usize {
    let n = w.len();
    debug_assert!(n > 0);
    'outer: for p in 1..n {
        for i in 0..n - p {
            if w[i] != w[i + p] {
                continue 'outer;
            }
        }
        return p;
    }
    n
}

pub fn least_period(w: &Word) -> Result<usize> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    Ok(least_period_slice(w.letters()))
}

/// Maximum of |f| / least_period(f) over nonempty factors, exactly.
///
/// For each candidate period p, the longest stretch of positions with
/// w[i] = w[i+p] yields the longest factor of period p; taking the maximum of
/// (run + p) / p over p is exact because any factor attains its exponent at
/// its own least period.
pub fn max_exponent(w: &Word) -> Result<Rational> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    let s = w.letters();
    let n = s.len();
    let mut best = rational(1, 1);
    for p in 1..n {
        let mut run = 0usize;
        for i in 0..n - p {
            if s[i] == s[i + p] {
                run += 1;
                let cand = rational((run + p) as i64, p as i64);
                if cand > best {
                    best = cand;
                }
            } else {
                run = 0;
            }
        }
    }
    Ok(best)
}

/// α-free (`strict = false`): no factor of exponent ≥ α.
/// α⁺-free (`strict = true`): no factor of exponent > α.
pub fn is_alpha_free(w: &Word, alpha: Rational, strict: bool) -> Result<bool> {
    if alpha <= rational(1, 1) {
        return Err(Error::Domain("alpha must be greater than 1".into()));
    }
    if w.is_empty() {
        return Ok(true);
    }
    let m = max_exponent(w)?;
    Ok(if strict { m <= alpha } else { m < alpha })
}

/// Incremental variant for backtracking searches: true iff no factor ending
/// at the last letter violates α-freeness.
pub fn alpha_free_suffix_ok(w: &[u8], alpha: Rational, strict: bool) -> bool {
    let n = w.len();
    for p in 1..n {
        // longest suffix with period p: count matching positions backwards
        let mut matched = 0usize;
        let mut i = n;
        while i > p && w[i - 1] == w[i - 1 - p] {
            matched += 1;
            i -= 1;
        }
        if matched == 0 {
            continue;
        }
        let len = matched + p;
        let e = rational(len as i64, p as i64);
        let bad = if strict { e > alpha } else { e >= alpha };
        if bad {
            return false;
        }
    }
    true
}

/// Number of distinct square factors, counted by shape.
pub fn count_distinct_squares(w: &Word) -> usize {
    distinct_squares(w).len()
}

pub fn distinct_squares(w: &Word) -> HashSet<Word> {
    let s = w.letters();
    let n = s.len();
    let mut shapes: HashSet<&[u8]> = HashSet::new();
    for i in 0..n {
        for p in 1..=(n - i) / 2 {
            if s[i..i + p] == s[i + p..i + 2 * p] {
                shapes.insert(&s[i..i + 2 * p]);
            }
        }
    }
    shapes
        .into_iter()
        .map(|sl| Word::new(w.alphabet().clone(), sl.to_vec()).expect("same alphabet"))
        .collect()
}

pub fn square_density(w: &Word) -> Result<Rational> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    Ok(rational(count_distinct_squares(w) as i64, w.len() as i64))
}

/// A maximal periodic occurrence of exponent at least 2.
/// Positions are 1-indexed and inclusive; `period` is the least period of
/// the factor, and extending one letter left or right breaks the period or
/// leaves the word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Run {
    pub start: usize,
    pub end: usize,
    pub period: usize,
}

impl Run {
    pub fn len(&self) -> usize {
        self.end - self.start + 1
    }

    pub fn exponent(&self) -> Rational {
        rational(self.len() as i64, self.period as i64)
    }
}

/// All runs, counted as occurrences (start, end, least period).
pub fn count_runs(w: &Word) -> Vec<Run> {
    let s = w.letters();
    let n = s.len();
    let mut runs = Vec::new();
    for p in 1..=n / 2 {
        let mut i = 0;
        while i + p < n {
            if s[i] != s[i + p] {
                i += 1;
                continue;
            }
            // maximal stretch of matches starting at i
            let mut j = i;
            while j + p < n && s[j] == s[j + p] {
                j += 1;
            }
            // factor [i, j+p-1] (0-indexed inclusive) has period p
            let len = j + p - i;
            if len >= 2 * p && least_period_slice(&s[i..j + p]) == p {
                runs.push(Run {
                    start: i + 1,
                    end: j + p,
                    period: p,
                });
            }
            i = j + 1;
        }
    }
    runs.sort();
    runs
}

/// Distinct factor shapes whose exponent is exactly `alpha`.
pub fn factors_with_exponent(w: &Word, alpha: Rational) -> HashSet<Word> {
    let s = w.letters();
    let n = s.len();
    let mut out: HashSet<&[u8]> = HashSet::new();
    for p in 1..=n {
        // factor length for exponent alpha at period p must be integral
        let num = alpha * rational(p as i64, 1);
        if *num.denom() != 1 {
            continue;
        }
        let len = *num.numer() as usize;
        if len < p || len > n {
            continue;
        }
        for i in 0..=n - len {
            let f = &s[i..i + len];
            if out.contains(f) {
                continue;
            }
            if least_period_slice(f) == p {
                out.insert(f);
            }
        }
    }
    out.into_iter()
        .map(|sl| Word::new(w.alphabet().clone(), sl.to_vec()).expect("same alphabet"))
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct FrtReport {
    pub alpha: String,
    pub horizon: usize,
    pub factor_count: usize,
    pub factors: Vec<String>,
    /// True when no new factor of exponent exactly alpha appeared in the
    /// second half of the horizon. Evidence of finiteness, never a proof.
    pub stabilized: bool,
}

pub fn frt_probe(gen: &PrefixOracle, alpha: Rational, horizon: usize) -> Result<FrtReport> {
    if horizon < 1 {
        return Err(Error::Domain("horizon must be at least 1".into()));
    }
    let full = gen.prefix(horizon);
    let half = gen.prefix(horizon / 2);
    let set_full = factors_with_exponent(&full, alpha);
    let set_half = factors_with_exponent(&half, alpha);
    let mut factors: Vec<String> = set_full.iter().map(|f| f.to_string()).collect();
    factors.sort();
    Ok(FrtReport {
        alpha: crate::word::rational_string(alpha),
        horizon,
        factor_count: set_full.len(),
        stabilized: set_full == set_half,
        factors,
    })
}

/// Truncation of the Sturmian period set Π built from continued-fraction
/// digits: level n contributes { i·q_{n-1} + q_{n-2} : i = 0..d_n } with
/// q_{-1} = q_0 = 1 and q_n = d_n·q_{n-1} + q_{n-2}.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PeriodSet {
    pub horizon: u64,
    pub values: BTreeSet<u64>,
}

impl PeriodSet {
    pub fn contains(&self, p: u64) -> bool {
        self.values.contains(&p)
    }
}

pub fn sturmian_period_set(cf: &[u64], horizon: u64) -> Result<PeriodSet> {
    if cf.is_empty() {
        return Err(Error::Domain("empty continued-fraction expansion".into()));
    }
    if cf.iter().skip(1).any(|&d| d == 0) || cf == [0] {
        return Err(Error::Domain(
            "continued-fraction digits beyond the first must be positive".into(),
        ));
    }
    let mut values = BTreeSet::new();
    let mut q_prev2: u64 = 1; // q_{-1}
    let mut q_prev: u64 = 1; // q_0
    let mut level = 0usize;
    while q_prev2 <= horizon {
        let d = cf[level % cf.len()];
        for i in 0..=d {
            let v = i * q_prev + q_prev2;
            if v <= horizon && v >= 1 {
                values.insert(v);
            }
        }
        let q_new = d * q_prev + q_prev2;
        q_prev2 = q_prev;
        q_prev = q_new;
        level += 1;
        if level > 10_000 {
            break; // d = 0 head digit cannot stall forever, but stay safe
        }
    }
    Ok(PeriodSet { horizon, values })
}

/// { w·x : x a nonempty suffix of w }.
pub fn suffix_square_duplicate(w: &Word) -> Result<HashSet<Word>> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    let n = w.len();
    Ok((1..=n)
        .map(|l| w.concat(&w.slice_word(n - l..n)))
        .collect())
}

/// { x·w : x a nonempty prefix of w }.
pub fn prefix_square_duplicate(w: &Word) -> Result<HashSet<Word>> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    Ok((1..=w.len())
        .map(|l| w.slice_word(0..l).concat(w))
        .collect())
}

/// { w·x : some nonempty y with y·x·y a suffix of w }. By default x must be
/// nonempty; `allow_empty_x` relaxes that.
pub fn suffix_square_complete(w: &Word, allow_empty_x: bool) -> Result<HashSet<Word>> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    let s = w.letters();
    let n = s.len();
    let min_x = if allow_empty_x { 0 } else { 1 };
    let mut out = HashSet::new();
    for suf_len in 2..=n {
        let suf = &s[n - suf_len..];
        for y_len in 1..=(suf_len.saturating_sub(min_x)) / 2 {
            if suf[..y_len] == suf[suf_len - y_len..] {
                let x = &suf[y_len..suf_len - y_len];
                if x.len() >= min_x {
                    let xw = Word::new(w.alphabet().clone(), x.to_vec()).expect("same alphabet");
                    out.insert(w.concat(&xw));
                }
            }
        }
    }
    Ok(out)
}

/// Mirror of [`suffix_square_complete`] on the left: { x·w : y·x·y a prefix }.
pub fn prefix_square_complete(w: &Word, allow_empty_x: bool) -> Result<HashSet<Word>> {
    let rev = w.reversed();
    Ok(suffix_square_complete(&rev, allow_empty_x)?
        .into_iter()
        .map(|v| v.reversed())
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompletionConfig {
    /// Explore completions on both ends (default) or suffix-only.
    pub both_ends: bool,
    /// Also allow plain square duplication steps.
    pub allow_duplication: bool,
    pub allow_empty_x: bool,
}

impl Default for CompletionConfig {
    fn default() -> Self {
        CompletionConfig {
            both_ends: true,
            allow_duplication: false,
            allow_empty_x: false,
        }
    }
}

/// Breadth-first minimum number of completion steps from `u` to `w`.
/// Intermediate words are always factors of `w` (steps only extend at the
/// ends), which bounds the state space.
pub fn completion_distance(
    u: &Word,
    w: &Word,
    config: CompletionConfig,
    budget: &SearchBudget,
) -> Result<SearchOutcome<Option<usize>>> {
    let is_factor = |v: &Word| -> bool {
        let (a, b) = (v.letters(), w.letters());
        a.is_empty() || b.windows(a.len().min(b.len() + 1)).any(|win| win == a)
    };
    if u.is_empty() || !is_factor(u) {
        return Err(Error::Domain("u must be a nonempty factor of w".into()));
    }
    let start = Instant::now();
    let mut nodes: u64 = 0;
    let mut seen: HashSet<Word> = HashSet::new();
    let mut queue: VecDeque<(Word, usize)> = VecDeque::new();
    seen.insert(u.clone());
    queue.push_back((u.clone(), 0));
    let mut verdict = Verdict::Exhausted;
    let mut steps = None;
    while let Some((v, d)) = queue.pop_front() {
        if &v == w {
            steps = Some(d);
            verdict = Verdict::Found;
            break;
        }
        nodes += 1;
        if nodes > budget.max_nodes {
            verdict = Verdict::Budget;
            break;
        }
        let mut nexts: Vec<Word> = suffix_square_complete(&v, config.allow_empty_x)?
            .into_iter()
            .collect();
        if config.both_ends {
            nexts.extend(prefix_square_complete(&v, config.allow_empty_x)?);
        }
        if config.allow_duplication {
            nexts.extend(suffix_square_duplicate(&v)?);
            if config.both_ends {
                nexts.extend(prefix_square_duplicate(&v)?);
            }
        }
        for nx in nexts {
            if nx.len() <= w.len() && is_factor(&nx) && seen.insert(nx.clone()) {
                queue.push_back((nx, d + 1));
            }
        }
    }
    Ok(SearchOutcome {
        verdict,
        certificate: steps,
        stats: SearchStats {
            nodes,
            elapsed_seconds: start.elapsed().as_secs_f64(),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::morphism::classics;
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        Word::parse_guess(s).unwrap()
    }

    #[test]
    fn least_period_examples() {
        assert_eq!(least_period(&w("abaab")).unwrap(), 3);
        assert_eq!(least_period(&w("aaaa")).unwrap(), 1);
        assert_eq!(least_period(&w("abc")).unwrap(), 3);
        assert_eq!(least_period(&Word::empty(w("a").alphabet().clone())), Err(Error::EmptyWord));
    }

    #[test]
    fn max_exponent_examples() {
        assert_eq!(max_exponent(&w("abaab")).unwrap(), rational(2, 1));
        assert_eq!(max_exponent(&w("01101001")).unwrap(), rational(2, 1));
        assert_eq!(max_exponent(&w("aaa")).unwrap(), rational(3, 1));
    }

    #[test]
    fn alpha_free_examples() {
        // "0110" contains the square "11"
        assert!(!is_alpha_free(&w("0110"), rational(2, 1), false).unwrap());
        assert!(is_alpha_free(&w("aba"), rational(2, 1), false).unwrap());
        let tm = classics::thue_morse(64);
        assert!(is_alpha_free(&tm, rational(2, 1), true).unwrap());
        assert!(is_alpha_free(&w("ab"), rational(1, 2), false).is_err());
    }

    #[test]
    fn distinct_squares_examples() {
        assert_eq!(count_distinct_squares(&w("aabb")), 2);
        assert_eq!(count_distinct_squares(&w("abc")), 0);
        assert_eq!(count_distinct_squares(&w("abaababa")), 4);
        let shapes = distinct_squares(&w("abaababa"));
        for s in ["aa", "abab", "baba", "abaaba"] {
            assert!(shapes.contains(&w(s)));
        }
    }

    #[test]
    fn square_density_examples() {
        assert_eq!(square_density(&w("aabb")).unwrap(), rational(1, 2));
        assert_eq!(square_density(&w("abc")).unwrap(), rational(0, 1));
        assert_eq!(square_density(&w("aaaa")).unwrap(), rational(1, 2));
    }

    #[test]
    fn runs_examples() {
        let runs = count_runs(&w("aabaabaa"));
        assert_eq!(runs.len(), 4);
        assert!(runs.contains(&Run { start: 1, end: 8, period: 3 }));
        assert!(runs.contains(&Run { start: 1, end: 2, period: 1 }));
        assert_eq!(count_runs(&w("abc")).len(), 0);
        assert_eq!(count_runs(&w("aaaa")), vec![Run { start: 1, end: 4, period: 1 }]);
    }

    #[test]
    fn run_invariants_hold() {
        let word = w("aabaabaabba");
        for r in count_runs(&word) {
            let f = &word.letters()[r.start - 1..r.end];
            assert!(r.len() >= 2 * r.period);
            assert_eq!(least_period_slice(f), r.period);
            // maximality
            if r.start > 1 {
                assert_ne!(word.letters()[r.start - 2], word.letters()[r.start - 2 + r.period]);
            }
            if r.end < word.len() {
                assert_ne!(word.letters()[r.end], word.letters()[r.end - r.period]);
            }
        }
    }

    #[test]
    fn frt_probe_examples() {
        let tm = PrefixOracle::thue_morse();
        let rep = frt_probe(&tm, rational(2, 1), 256).unwrap();
        assert!(rep.factor_count > 0);
        let sq = PrefixOracle::thue_ternary();
        let rep = frt_probe(&sq, rational(2, 1), 256).unwrap();
        assert_eq!(rep.factor_count, 0);
        assert!(rep.stabilized);
        let fib = PrefixOracle::fibonacci();
        let rep = frt_probe(&fib, rational(2, 1), 256).unwrap();
        assert!(rep.factor_count > 0);
        assert!(!rep.stabilized);
    }

    #[test]
    fn sturmian_period_set_examples() {
        let fib = sturmian_period_set(&[1], 13).unwrap();
        for v in [1u64, 2, 3, 5, 8, 13] {
            assert!(fib.contains(v), "missing {v}");
        }
        let two = sturmian_period_set(&[2], 3).unwrap();
        assert_eq!(two.values, [1u64, 2, 3].into_iter().collect());
        let empty = sturmian_period_set(&[1, 1], 0).unwrap();
        assert!(empty.values.is_empty());
        assert!(sturmian_period_set(&[], 5).is_err());
        assert!(sturmian_period_set(&[1, 0], 5).is_err());
    }

    #[test]
    fn duplication_examples() {
        let d = suffix_square_duplicate(&w("ab")).unwrap();
        assert_eq!(d, ["abb", "abab"].iter().map(|s| w(s)).collect());
        assert_eq!(
            suffix_square_duplicate(&w("a")).unwrap(),
            [w("aa")].into_iter().collect()
        );
        let d = suffix_square_duplicate(&w("aba")).unwrap();
        assert_eq!(d, ["abaa", "ababa", "abaaba"].iter().map(|s| w(s)).collect());
    }

    #[test]
    fn completion_examples() {
        let c = suffix_square_complete(&w("abab"), false).unwrap();
        assert_eq!(c, [w("ababa")].into_iter().collect());
        // exhaustive yxy scan: "aa" has no suffix yxy with nonempty x
        assert!(suffix_square_complete(&w("aa"), false).unwrap().is_empty());
        assert!(suffix_square_complete(&w("ab"), false).unwrap().is_empty());
    }

    #[test]
    fn completion_distance_cases() {
        let budget = SearchBudget::length(0).with_nodes(10_000);
        let out = completion_distance(&w("abab"), &w("abab"), CompletionConfig::default(), &budget)
            .unwrap();
        assert_eq!(out.verdict, Verdict::Found);
        assert_eq!(out.certificate, Some(0));

        let cfg = CompletionConfig {
            allow_duplication: true,
            ..CompletionConfig::default()
        };
        let out = completion_distance(&w("a"), &w("aa"), cfg, &budget).unwrap();
        assert_eq!(out.verdict, Verdict::Found);
        assert_eq!(out.certificate, Some(1));

        // unreachable under default rules (no completion applies to "ab")
        let out = completion_distance(&w("ab"), &w("abc"), CompletionConfig::default(), &budget)
            .unwrap();
        assert_eq!(out.verdict, Verdict::Exhausted);
        assert_eq!(out.certificate, None);

        assert!(completion_distance(&w("zz"), &w("ab"), CompletionConfig::default(), &budget)
            .is_err());
    }

    #[test]
    fn suffix_check_matches_full_check() {
        // alpha_free_suffix_ok agrees with is_alpha_free on all binary words
        let alpha = rational(2, 1);
        for n in 1..=10usize {
            for bits in 0..(1u32 << n) {
                let letters: Vec<u8> = (0..n).map(|i| ((bits >> i) & 1) as u8).collect();
                let word = Word::from_letters(&letters);
                let full = is_alpha_free(&word, alpha, false).unwrap();
                let inc = (1..=n).all(|l| alpha_free_suffix_ok(&letters[..l], alpha, false));
                assert_eq!(full, inc, "word {word}");
            }
        }
    }

    proptest! {
        #[test]
        fn fine_wilf_property(letters in proptest::collection::vec(0u8..2, 1..24)) {
            let word = Word::from_letters(&letters);
            let n = word.len();
            let s = word.letters();
            let periods: Vec<usize> = (1..=n)
                .filter(|&p| (0..n - p).all(|i| s[i] == s[i + p]))
                .collect();
            for &p in &periods {
                for &q in &periods {
                    let g = num_integer::gcd(p, q);
                    if p + q - g <= n {
                        prop_assert!(periods.contains(&g), "Fine-Wilf fails for p={p}, q={q}");
                    }
                }
            }
        }

        #[test]
        fn squares_append_monotone(letters in proptest::collection::vec(0u8..3, 1..20), a in 0u8..3) {
            let word = Word::from_letters(&letters);
            let longer = Word::from_letters(&[letters.clone(), vec![a]].concat());
            prop_assert!(count_distinct_squares(&longer) >= count_distinct_squares(&word));
        }

        #[test]
        fn alpha_free_monotone(letters in proptest::collection::vec(0u8..2, 1..16)) {
            let word = Word::from_letters(&letters);
            let a = rational(3, 2);
            let b = rational(2, 1);
            if is_alpha_free(&word, a, false).unwrap() {
                prop_assert!(is_alpha_free(&word, b, false).unwrap());
            }
        }

        #[test]
        fn max_exponent_vs_least_period(letters in proptest::collection::vec(0u8..3, 1..20)) {
            let word = Word::from_letters(&letters);
            let me = max_exponent(&word).unwrap();
            let lp = least_period(&word).unwrap();
            prop_assert!(me >= rational(word.len() as i64, lp as i64));
        }
    }
}
