//! F-factorizations: splittings of a word with pieces in component regular
//! languages and the index word in a control language.
//!
//! Pieces are nonempty; a component language containing the empty word
//! contributes no zero-length pieces.

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::word::{Alphabet, Word};

use super::dfa::{shortest_rejected, Dfa, Nfa};

#[derive(Debug, Clone, Serialize)]
pub struct FFactorizationSpec {
    /// Control language over the index alphabet {1..k} (letter i-1 = index i).
    pub control: Dfa,
    /// Component languages over the word alphabet, one per index letter.
    pub components: Vec<Dfa>,
}

impl FFactorizationSpec {
    pub fn new(control: Dfa, components: Vec<Dfa>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::Domain("at least one component language".into()));
        }
        if control.alphabet != components.len() {
            return Err(Error::Domain(format!(
                "control alphabet {} does not match {} components",
                control.alphabet,
                components.len()
            )));
        }
        let sigma = components[0].alphabet;
        if components.iter().any(|c| c.alphabet != sigma) {
            return Err(Error::Domain("components must share one alphabet".into()));
        }
        Ok(FFactorizationSpec { control, components })
    }

    pub fn sigma(&self) -> usize {
        self.components[0].alphabet
    }

    /// Letters-only spec: every word splits uniquely into single letters.
    pub fn letters_only(sigma: usize) -> Result<Self> {
        FFactorizationSpec::new(Dfa::universal(1), vec![Dfa::single_letters(sigma)])
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Factorization {
    pub pieces: Vec<Word>,
    /// Index word over {1..k}, same length as `pieces`.
    pub indices: Word,
}

impl Factorization {
    /// Interior cut positions (prefix lengths strictly inside the word).
    pub fn cuts(&self) -> BTreeSet<usize> {
        let mut cuts = BTreeSet::new();
        let mut pos = 0;
        for piece in &self.pieces[..self.pieces.len().saturating_sub(1)] {
            pos += piece.len();
            cuts.insert(pos);
        }
        cuts
    }

    pub fn verify(&self, w: &Word, spec: &FFactorizationSpec) -> bool {
        let mut joined: Vec<u8> = Vec::new();
        for (piece, &idx) in self.pieces.iter().zip(self.indices.letters()) {
            if piece.is_empty() || !spec.components[idx as usize].accepts(piece.letters()) {
                return false;
            }
            joined.extend_from_slice(piece.letters());
        }
        joined == w.letters() && spec.control.accepts(self.indices.letters())
    }
}

/// All splittings w = w_1…w_n with w_j in the component of index i_j and
/// i_1…i_n in the control language.
pub fn f_factorizations(w: &Word, spec: &FFactorizationSpec) -> Result<Vec<Factorization>> {
    if w.alphabet().size() > spec.sigma() {
        return Err(Error::DomainMismatch(format!(
            "word alphabet {} exceeds spec alphabet {}",
            w.alphabet().size(),
            spec.sigma()
        )));
    }
    let s = w.letters();
    let index_alphabet = Alphabet::new(spec.control.alphabet)?;
    let mut out = Vec::new();
    let mut pieces: Vec<(usize, usize, u8)> = Vec::new(); // (start, end, index letter)
    rec(s, 0, spec.control.initial, spec, &mut pieces, &mut |pieces| {
        let factor = Factorization {
            pieces: pieces
                .iter()
                .map(|&(a, b, _)| w.slice_word(a..b))
                .collect(),
            indices: Word::new(
                index_alphabet.clone(),
                pieces.iter().map(|&(_, _, i)| i).collect(),
            )
            .expect("index letters in range"),
        };
        debug_assert!(factor.verify(w, spec));
        out.push(factor);
    });
    Ok(out)
}

fn rec(
    s: &[u8],
    pos: usize,
    control_state: usize,
    spec: &FFactorizationSpec,
    pieces: &mut Vec<(usize, usize, u8)>,
    emit: &mut dyn FnMut(&[(usize, usize, u8)]),
) {
    if pos == s.len() {
        if spec.control.accepting.contains(&control_state) {
            emit(pieces);
        }
        return;
    }
    for (i, comp) in spec.components.iter().enumerate() {
        let mut q = comp.initial;
        for end in pos + 1..=s.len() {
            q = comp.step(q, s[end - 1]);
            if comp.accepting.contains(&q) {
                pieces.push((pos, end, i as u8));
                rec(s, end, spec.control.step(control_state, i as u8), spec, pieces, emit);
                pieces.pop();
            }
        }
    }
}

/// Number of factorizations, saturating at `cap` (memoized DP).
pub fn count_factorizations(s: &[u8], spec: &FFactorizationSpec, cap: u64) -> u64 {
    let mut memo: HashMap<(usize, usize), u64> = HashMap::new();
    fn go(
        s: &[u8],
        pos: usize,
        q: usize,
        spec: &FFactorizationSpec,
        cap: u64,
        memo: &mut HashMap<(usize, usize), u64>,
    ) -> u64 {
        if let Some(&v) = memo.get(&(pos, q)) {
            return v;
        }
        let mut total = 0u64;
        if pos == s.len() {
            total = spec.control.accepting.contains(&q) as u64;
        } else {
            for (i, comp) in spec.components.iter().enumerate() {
                let mut c = comp.initial;
                for end in pos + 1..=s.len() {
                    c = comp.step(c, s[end - 1]);
                    if comp.accepting.contains(&c) {
                        total = total.saturating_add(go(
                            s,
                            end,
                            spec.control.step(q, i as u8),
                            spec,
                            cap,
                            memo,
                        ));
                        if total >= cap {
                            total = cap;
                            break;
                        }
                    }
                }
                if total >= cap {
                    break;
                }
            }
        }
        memo.insert((pos, q), total);
        total
    }
    go(s, 0, spec.control.initial, spec, cap, &mut memo)
}

#[derive(Debug, Clone, Serialize)]
pub struct PropertyVerdict {
    pub holds: bool,
    pub counterexample: Option<Word>,
    /// "bounded(N)" or "exact".
    pub mode: String,
}

pub enum CompletenessMode {
    Bounded(usize),
    Exact,
}

/// Completeness: every word over Σ has at least one factorization.
pub fn check_completeness(spec: &FFactorizationSpec, mode: CompletenessMode) -> Result<PropertyVerdict> {
    match mode {
        CompletenessMode::Bounded(n) => {
            let sigma = spec.sigma();
            let alphabet = Alphabet::new(sigma)?;
            for len in 0..=n {
                let mut letters = vec![0u8; len];
                loop {
                    if count_factorizations(&letters, spec, 1) == 0 {
                        return Ok(PropertyVerdict {
                            holds: false,
                            counterexample: Some(Word::new(alphabet, letters)?),
                            mode: format!("bounded({n})"),
                        });
                    }
                    if !super::increment(&mut letters, sigma) {
                        break;
                    }
                }
            }
            Ok(PropertyVerdict {
                holds: true,
                counterexample: None,
                mode: format!("bounded({n})"),
            })
        }
        CompletenessMode::Exact => {
            let dfa = factorizable_language(spec)?;
            match shortest_rejected(&dfa) {
                None => Ok(PropertyVerdict {
                    holds: true,
                    counterexample: None,
                    mode: "exact".to_string(),
                }),
                Some(letters) => Ok(PropertyVerdict {
                    holds: false,
                    counterexample: Some(Word::new(Alphabet::new(spec.sigma())?, letters)?),
                    mode: "exact".to_string(),
                }),
            }
        }
    }
}

/// DFA over Σ for the set of factorizable words: the control automaton with
/// every index transition replaced by a run of the matching component.
pub fn factorizable_language(spec: &FFactorizationSpec) -> Result<Dfa> {
    let sigma = spec.sigma();
    let k = spec.components.len();
    // NFA states: Base(q) for control states q, In(q, i, s) for runs of
    // component i started at control state q
    let base = |q: usize| q;
    let nbase = spec.control.states;
    let comp_offset: Vec<usize> = {
        let mut off = Vec::with_capacity(k);
        let mut acc = nbase;
        for comp in &spec.components {
            off.push(acc);
            acc += spec.control.states * comp.states;
        }
        off
    };
    let total: usize = nbase
        + spec
            .components
            .iter()
            .map(|c| c.states * spec.control.states)
            .sum::<usize>();
    let inid = |i: usize, q: usize, s: usize, comps: &[Dfa]| comp_offset[i] + q * comps[i].states + s;

    let mut transitions: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new(); sigma]; total];
    for q in 0..spec.control.states {
        for (i, comp) in spec.components.iter().enumerate() {
            for letter in 0..sigma {
                let s1 = comp.step(comp.initial, letter as u8);
                let mut targets = vec![inid(i, q, s1, &spec.components)];
                if comp.accepting.contains(&s1) {
                    targets.push(base(spec.control.step(q, i as u8)));
                }
                transitions[base(q)][letter].extend(targets);
            }
        }
    }
    for q in 0..spec.control.states {
        for (i, comp) in spec.components.iter().enumerate() {
            for s in 0..comp.states {
                for letter in 0..sigma {
                    let s1 = comp.step(s, letter as u8);
                    let from = inid(i, q, s, &spec.components);
                    transitions[from][letter].push(inid(i, q, s1, &spec.components));
                    if comp.accepting.contains(&s1) {
                        transitions[from][letter].push(base(spec.control.step(q, i as u8)));
                    }
                }
            }
        }
    }
    // base-to-base closure on accepting component runs is handled above; a
    // base state is accepting when the control accepts there
    let nfa = Nfa {
        alphabet: sigma,
        states: total,
        initial: vec![base(spec.control.initial)],
        accepting: spec.control.accepting.clone(),
        transitions,
    };
    nfa.determinize(1 << 16)
}

/// Uniqueness: no word over Σ of length at most N has two factorizations.
pub fn check_uniqueness(spec: &FFactorizationSpec, n: usize) -> Result<PropertyVerdict> {
    let sigma = spec.sigma();
    let alphabet = Alphabet::new(sigma)?;
    for len in 0..=n {
        let mut letters = vec![0u8; len];
        loop {
            if count_factorizations(&letters, spec, 2) >= 2 {
                return Ok(PropertyVerdict {
                    holds: false,
                    counterexample: Some(Word::new(alphabet, letters)?),
                    mode: format!("bounded({n})"),
                });
            }
            if !super::increment(&mut letters, sigma) {
                break;
            }
        }
    }
    Ok(PropertyVerdict {
        holds: true,
        counterexample: None,
        mode: format!("bounded({n})"),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SyncReport {
    /// Window parameter that holds up to the bound (given or least found).
    pub window: Option<usize>,
    pub holds: bool,
    pub counterexample: Option<Word>,
    pub bound: usize,
}

/// Synchronization with window d: for any two factorizations of the same
/// word and every position, some shared cut (boundaries included) lies
/// within distance d of the position. With `window` unset, searches for the
/// least d ≤ bound that holds for all words of length ≤ bound.
pub fn check_synchronization(
    spec: &FFactorizationSpec,
    window: Option<usize>,
    bound: usize,
) -> Result<SyncReport> {
    match window {
        Some(d) => {
            let cex = sync_counterexample(spec, d, bound)?;
            Ok(SyncReport {
                window: Some(d),
                holds: cex.is_none(),
                counterexample: cex,
                bound,
            })
        }
        None => {
            for d in 0..=bound {
                if sync_counterexample(spec, d, bound)?.is_none() {
                    return Ok(SyncReport {
                        window: Some(d),
                        holds: true,
                        counterexample: None,
                        bound,
                    });
                }
            }
            Ok(SyncReport {
                window: None,
                holds: false,
                counterexample: sync_counterexample(spec, bound, bound)?,
                bound,
            })
        }
    }
}

fn sync_counterexample(
    spec: &FFactorizationSpec,
    d: usize,
    bound: usize,
) -> Result<Option<Word>> {
    let sigma = spec.sigma();
    let alphabet = Alphabet::new(sigma)?;
    for len in 0..=bound {
        let mut letters = vec![0u8; len];
        loop {
            let word = Word::new(alphabet.clone(), letters.clone())?;
            let facts = f_factorizations(&word, spec)?;
            for a in 0..facts.len() {
                for b in a + 1..facts.len() {
                    let mut shared: BTreeSet<usize> = facts[a]
                        .cuts()
                        .intersection(&facts[b].cuts())
                        .copied()
                        .collect();
                    shared.insert(0);
                    shared.insert(len);
                    let ok = (0..=len).all(|p| {
                        shared
                            .iter()
                            .any(|&c| c.abs_diff(p) <= d)
                    });
                    if !ok {
                        return Ok(Some(word));
                    }
                }
            }
            if !super::increment(&mut letters, sigma) {
                break;
            }
        }
    }
    Ok(None)
}

/// BFS helper reused by tests: all words over sigma letters up to a length.
pub fn words_up_to(sigma: usize, n: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    let mut frontier: VecDeque<Vec<u8>> = VecDeque::from([Vec::new()]);
    while let Some(w) = frontier.pop_front() {
        if w.len() == n {
            continue;
        }
        for l in 0..sigma as u8 {
            let mut next = w.clone();
            next.push(l);
            out.push(next.clone());
            frontier.push_back(next);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse_guess(s).unwrap()
    }

    /// L = (12)*, L_1 = {a}, L_2 = {b}.
    fn alternating_spec() -> FFactorizationSpec {
        let control = Dfa::new(
            2,
            3,
            0,
            [0],
            vec![vec![1, 2], vec![2, 0], vec![2, 2]],
        )
        .unwrap();
        let l1 = Dfa::literal_set(2, &[&[0]]).unwrap();
        let l2 = Dfa::literal_set(2, &[&[1]]).unwrap();
        FFactorizationSpec::new(control, vec![l1, l2]).unwrap()
    }

    /// L = I*, L_1 = {a}, L_2 = {aa}.
    fn a_aa_spec() -> FFactorizationSpec {
        let control = Dfa::universal(2);
        let l1 = Dfa::literal_set(2, &[&[0]]).unwrap();
        let l2 = Dfa::literal_set(2, &[&[0, 0]]).unwrap();
        FFactorizationSpec::new(control, vec![l1, l2]).unwrap()
    }

    #[test]
    fn factorization_examples() {
        let spec = alternating_spec();
        let facts = f_factorizations(&w("abab"), &spec).unwrap();
        assert_eq!(facts.len(), 1);
        assert_eq!(facts[0].pieces.len(), 4);
        assert_eq!(facts[0].indices.letters(), &[0, 1, 0, 1]);
        assert!(facts[0].verify(&w("abab"), &spec));

        assert!(f_factorizations(&w("aa"), &spec).unwrap().is_empty());

        let empty = Word::empty(crate::word::Alphabet::new(2).unwrap());
        let facts = f_factorizations(&empty, &spec).unwrap();
        assert_eq!(facts.len(), 1);
        assert!(facts[0].pieces.is_empty());
    }

    #[test]
    fn completeness_examples() {
        let spec = alternating_spec();
        let v = check_completeness(&spec, CompletenessMode::Bounded(2)).unwrap();
        assert!(!v.holds);
        assert_eq!(
            v.counterexample,
            Some(Word::from_letters_sized(&[0], 2).unwrap())
        );

        let letters = FFactorizationSpec::letters_only(2).unwrap();
        let v = check_completeness(&letters, CompletenessMode::Bounded(4)).unwrap();
        assert!(v.holds);
        let v = check_completeness(&letters, CompletenessMode::Exact).unwrap();
        assert!(v.holds);

        let none = FFactorizationSpec::new(Dfa::empty_language(1), vec![Dfa::single_letters(2)])
            .unwrap();
        let v = check_completeness(&none, CompletenessMode::Bounded(2)).unwrap();
        assert!(!v.holds);
        assert_eq!(v.counterexample.unwrap().len(), 0);
        let v = check_completeness(&none, CompletenessMode::Exact).unwrap();
        assert!(!v.holds);
    }

    #[test]
    fn exact_matches_bounded() {
        for spec in [alternating_spec(), a_aa_spec(), FFactorizationSpec::letters_only(2).unwrap()] {
            let exact = factorizable_language(&spec).unwrap();
            for word in words_up_to(spec.sigma(), 7) {
                let bounded = count_factorizations(&word, &spec, 1) >= 1;
                assert_eq!(exact.accepts(&word), bounded, "word {word:?}");
            }
        }
    }

    #[test]
    fn uniqueness_examples() {
        let v = check_uniqueness(&a_aa_spec(), 4).unwrap();
        assert!(!v.holds);
        assert_eq!(
            v.counterexample,
            Some(Word::from_letters_sized(&[0, 0], 2).unwrap())
        );

        let v = check_uniqueness(&FFactorizationSpec::letters_only(2).unwrap(), 5).unwrap();
        assert!(v.holds);

        let none = FFactorizationSpec::new(Dfa::empty_language(1), vec![Dfa::single_letters(2)])
            .unwrap();
        assert!(check_uniqueness(&none, 4).unwrap().holds);
    }

    #[test]
    fn synchronization_examples() {
        let letters = FFactorizationSpec::letters_only(2).unwrap();
        let r = check_synchronization(&letters, None, 4).unwrap();
        assert!(r.holds);
        assert_eq!(r.window, Some(0));

        let r = check_synchronization(&a_aa_spec(), Some(1), 6).unwrap();
        assert!(!r.holds);
        assert!(r.counterexample.unwrap().len() >= 4);

        let none = FFactorizationSpec::new(Dfa::empty_language(1), vec![Dfa::single_letters(2)])
            .unwrap();
        let r = check_synchronization(&none, Some(0), 4).unwrap();
        assert!(r.holds);
    }

    #[test]
    fn uniqueness_crosschecks_list() {
        let spec = a_aa_spec();
        for word in words_up_to(2, 6) {
            let n = f_factorizations(
                &Word::from_letters_sized(&word, 2).unwrap(),
                &spec,
            )
            .unwrap()
            .len() as u64;
            assert_eq!(n.min(3), count_factorizations(&word, &spec, 3));
        }
    }
}
