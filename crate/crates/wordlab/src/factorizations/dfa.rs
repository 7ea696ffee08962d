//! Deterministic finite automata with a total transition function, plus the
//! subset construction used for exact completeness checks.

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::word::{Alphabet, Word};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dfa {
    /// Alphabet size; letters are 0..alphabet.
    pub alphabet: usize,
    pub states: usize,
    pub initial: usize,
    pub accepting: BTreeSet<usize>,
    /// transitions[state][letter] -> state; must be total.
    pub transitions: Vec<Vec<usize>>,
}

impl Dfa {
    pub fn new(
        alphabet: usize,
        states: usize,
        initial: usize,
        accepting: impl IntoIterator<Item = usize>,
        transitions: Vec<Vec<usize>>,
    ) -> Result<Dfa> {
        let dfa = Dfa {
            alphabet,
            states,
            initial,
            accepting: accepting.into_iter().collect(),
            transitions,
        };
        dfa.validate()?;
        Ok(dfa)
    }

    pub fn validate(&self) -> Result<()> {
        if self.alphabet == 0 || self.states == 0 {
            return Err(Error::Domain("automaton needs states and letters".into()));
        }
        if self.initial >= self.states {
            return Err(Error::Domain("initial state out of range".into()));
        }
        if let Some(&q) = self.accepting.iter().find(|&&q| q >= self.states) {
            return Err(Error::Domain(format!("accepting state {q} out of range")));
        }
        if self.transitions.len() != self.states {
            return Err(Error::Domain("transition table must cover every state".into()));
        }
        for (q, row) in self.transitions.iter().enumerate() {
            if row.len() != self.alphabet {
                return Err(Error::Domain(format!(
                    "state {q} has {} transitions for {} letters",
                    row.len(),
                    self.alphabet
                )));
            }
            if let Some(&t) = row.iter().find(|&&t| t >= self.states) {
                return Err(Error::Domain(format!("transition target {t} out of range")));
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Dfa> {
        let dfa: Dfa = serde_json::from_str(text)
            .map_err(|e| Error::Parse(format!("automaton JSON: {e}")))?;
        dfa.validate()?;
        Ok(dfa)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn step(&self, state: usize, letter: u8) -> usize {
        self.transitions[state][letter as usize]
    }

    pub fn run(&self, s: &[u8]) -> Option<usize> {
        let mut q = self.initial;
        for &l in s {
            if l as usize >= self.alphabet {
                return None;
            }
            q = self.step(q, l);
        }
        Some(q)
    }

    pub fn accepts(&self, s: &[u8]) -> bool {
        self.run(s).is_some_and(|q| self.accepting.contains(&q))
    }

    pub fn accepts_word(&self, w: &Word) -> bool {
        self.accepts(w.letters())
    }

    /// DFA for a finite set of words (trie plus a dead state).
    pub fn literal_set(alphabet: usize, words: &[&[u8]]) -> Result<Dfa> {
        if alphabet == 0 {
            return Err(Error::Domain("alphabet must be nonempty".into()));
        }
        // state 0 = root; last state = dead
        let mut transitions: Vec<Vec<Option<usize>>> = vec![vec![None; alphabet]];
        let mut accepting = BTreeSet::new();
        for w in words {
            let mut q = 0usize;
            for &l in *w {
                if l as usize >= alphabet {
                    return Err(Error::LetterOutOfRange {
                        letter: l as usize,
                        size: alphabet,
                    });
                }
                q = match transitions[q][l as usize] {
                    Some(t) => t,
                    None => {
                        transitions.push(vec![None; alphabet]);
                        let t = transitions.len() - 1;
                        transitions[q][l as usize] = Some(t);
                        t
                    }
                };
            }
            accepting.insert(q);
        }
        let dead = transitions.len();
        let transitions: Vec<Vec<usize>> = transitions
            .into_iter()
            .map(|row| row.into_iter().map(|t| t.unwrap_or(dead)).collect())
            .chain(std::iter::once(vec![dead; alphabet]))
            .collect();
        Dfa::new(alphabet, dead + 1, 0, accepting, transitions)
    }

    /// DFA accepting every word over the alphabet.
    pub fn universal(alphabet: usize) -> Dfa {
        Dfa {
            alphabet,
            states: 1,
            initial: 0,
            accepting: [0].into_iter().collect(),
            transitions: vec![vec![0; alphabet]],
        }
    }

    /// DFA accepting nothing.
    pub fn empty_language(alphabet: usize) -> Dfa {
        Dfa {
            alphabet,
            states: 1,
            initial: 0,
            accepting: BTreeSet::new(),
            transitions: vec![vec![0; alphabet]],
        }
    }

    /// DFA for all single letters (used by letters-only factorization specs).
    pub fn single_letters(alphabet: usize) -> Dfa {
        // 0 = start, 1 = one letter seen, 2 = dead
        Dfa {
            alphabet,
            states: 3,
            initial: 0,
            accepting: [1].into_iter().collect(),
            transitions: vec![vec![1; alphabet], vec![2; alphabet], vec![2; alphabet]],
        }
    }

    pub fn accepts_empty(&self) -> bool {
        self.accepting.contains(&self.initial)
    }
}

/// Nondeterministic automaton used for the substitution construction.
#[derive(Debug, Clone)]
pub struct Nfa {
    pub alphabet: usize,
    pub states: usize,
    pub initial: Vec<usize>,
    pub accepting: BTreeSet<usize>,
    /// transitions[state][letter] -> successor set.
    pub transitions: Vec<Vec<Vec<usize>>>,
}

impl Nfa {
    /// Subset construction; errors out past `max_subsets` reachable subsets.
    pub fn determinize(&self, max_subsets: usize) -> Result<Dfa> {
        let start: BTreeSet<usize> = self.initial.iter().copied().collect();
        let mut ids: HashMap<BTreeSet<usize>, usize> = HashMap::new();
        ids.insert(start.clone(), 0);
        let mut order: Vec<BTreeSet<usize>> = vec![start];
        let mut transitions: Vec<Vec<usize>> = Vec::new();
        let mut queue: VecDeque<usize> = VecDeque::from([0]);
        while let Some(id) = queue.pop_front() {
            let subset = order[id].clone();
            let mut row = Vec::with_capacity(self.alphabet);
            for letter in 0..self.alphabet {
                let mut next: BTreeSet<usize> = BTreeSet::new();
                for &q in &subset {
                    next.extend(self.transitions[q][letter].iter().copied());
                }
                let nid = match ids.get(&next) {
                    Some(&nid) => nid,
                    None => {
                        let nid = order.len();
                        if nid >= max_subsets {
                            return Err(Error::Budget(format!(
                                "subset construction exceeded {max_subsets} states"
                            )));
                        }
                        ids.insert(next.clone(), nid);
                        order.push(next);
                        queue.push_back(nid);
                        nid
                    }
                };
                row.push(nid);
            }
            transitions.push(row);
            debug_assert_eq!(transitions.len(), id + 1);
        }
        let accepting: BTreeSet<usize> = order
            .iter()
            .enumerate()
            .filter(|(_, subset)| subset.iter().any(|q| self.accepting.contains(q)))
            .map(|(i, _)| i)
            .collect();
        Dfa::new(self.alphabet, order.len(), 0, accepting, transitions)
    }
}

/// Shortest word rejected by the DFA, if any (BFS over states).
pub fn shortest_rejected(dfa: &Dfa) -> Option<Vec<u8>> {
    let mut seen = vec![false; dfa.states];
    let mut queue: VecDeque<(usize, Vec<u8>)> = VecDeque::from([(dfa.initial, Vec::new())]);
    seen[dfa.initial] = true;
    while let Some((q, path)) = queue.pop_front() {
        if !dfa.accepting.contains(&q) {
            return Some(path);
        }
        for letter in 0..dfa.alphabet {
            let t = dfa.step(q, letter as u8);
            if !seen[t] {
                seen[t] = true;
                let mut next = path.clone();
                next.push(letter as u8);
                queue.push_back((t, next));
            }
        }
    }
    None
}

/// Convenience: read a word over an abstract alphabet of the DFA's size.
pub fn word_over(alphabet: usize, letters: &[u8]) -> Result<Word> {
    Word::new(Alphabet::new(alphabet)?, letters.to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab_star_ab() -> Dfa {
        // (ab)* over {a,b}: 0 start/accept, 1 after a, 2 dead
        Dfa::new(
            2,
            3,
            0,
            [0],
            vec![vec![1, 2], vec![2, 0], vec![2, 2]],
        )
        .unwrap()
    }

    #[test]
    fn dfa_basics() {
        let d = ab_star_ab();
        assert!(d.accepts(&[]));
        assert!(d.accepts(&[0, 1]));
        assert!(d.accepts(&[0, 1, 0, 1]));
        assert!(!d.accepts(&[0]));
        assert!(!d.accepts(&[1, 0]));
        assert!(Dfa::universal(2).accepts(&[0, 1, 1]));
        assert!(!Dfa::empty_language(2).accepts(&[]));
        let letters = Dfa::single_letters(3);
        assert!(letters.accepts(&[2]));
        assert!(!letters.accepts(&[]));
        assert!(!letters.accepts(&[0, 1]));
    }

    #[test]
    fn literal_sets() {
        let d = Dfa::literal_set(2, &[&[0], &[0, 0]]).unwrap();
        assert!(d.accepts(&[0]));
        assert!(d.accepts(&[0, 0]));
        assert!(!d.accepts(&[0, 0, 0]));
        assert!(!d.accepts(&[1]));
        assert!(!d.accepts(&[]));
        assert!(Dfa::literal_set(2, &[&[2]]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let d = ab_star_ab();
        let back = Dfa::from_json(&d.to_json()).unwrap();
        assert_eq!(d, back);
        assert!(Dfa::from_json("{}").is_err());
        assert!(Dfa::from_json(
            r#"{"alphabet":2,"states":1,"initial":5,"accepting":[],"transitions":[[0,0]]}"#
        )
        .is_err());
    }

    #[test]
    fn determinization_and_rejection() {
        // NFA for words containing letter 1
        let nfa = Nfa {
            alphabet: 2,
            states: 2,
            initial: vec![0],
            accepting: [1].into_iter().collect(),
            transitions: vec![vec![vec![0], vec![0, 1]], vec![vec![1], vec![1]]],
        };
        let dfa = nfa.determinize(64).unwrap();
        assert!(!dfa.accepts(&[0, 0]));
        assert!(dfa.accepts(&[0, 1, 0]));
        let missing = shortest_rejected(&dfa).unwrap();
        assert_eq!(missing, Vec::<u8>::new());
        assert!(shortest_rejected(&Dfa::universal(2)).is_none());
    }
}
