//! Bounded Post correspondence: search for a nonempty index word on which
//! two morphisms agree.

use std::collections::HashSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::morphism::Morphism;
use crate::search::Verdict;
use crate::word::Word;

#[derive(Debug, Clone)]
pub struct PcpInstance {
    pub h: Morphism,
    pub g: Morphism,
}

impl PcpInstance {
    pub fn new(h: Morphism, g: Morphism) -> Result<PcpInstance> {
        if h.domain().size() != g.domain().size() {
            return Err(Error::Domain("morphisms need a common domain".into()));
        }
        Ok(PcpInstance { h, g })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PcpReport {
    pub verdict: Verdict,
    /// Shortest solution found, as a word over the common domain.
    pub solution: Option<Word>,
    pub nodes: u64,
}

/// BFS over configurations (which side is ahead, the remainder). Finds a
/// shortest nonempty u with h(u) = g(u), or exhausts the configuration
/// space, or gives up at the node budget.
pub fn bounded_pcp(instance: &PcpInstance, max_nodes: u64) -> Result<PcpReport> {
    let k = instance.h.domain().size();
    let h: Vec<Vec<u8>> = (0..k as u8)
        .map(|a| Ok(instance.h.image(a)?.letters().to_vec()))
        .collect::<Result<_>>()?;
    let g: Vec<Vec<u8>> = (0..k as u8)
        .map(|a| Ok(instance.g.image(a)?.letters().to_vec()))
        .collect::<Result<_>>()?;

    // configuration: (side, remainder); side = which morphism's output is
    // longer, remainder = its unmatched suffix
    #[derive(Clone, PartialEq, Eq, Hash)]
    struct Config {
        h_ahead: bool,
        remainder: Vec<u8>,
    }
    let mut queue: std::collections::VecDeque<(Config, Vec<u8>)> = std::collections::VecDeque::new();
    let mut seen: HashSet<Config> = HashSet::new();
    let mut nodes = 0u64;

    // seed with single letters
    for a in 0..k as u8 {
        nodes += 1;
        let (hw, gw) = (&h[a as usize], &g[a as usize]);
        if hw == gw {
            return Ok(PcpReport {
                verdict: Verdict::Found,
                solution: Some(Word::new(instance.h.domain().clone(), vec![a])?),
                nodes,
            });
        }
        let config = if hw.len() >= gw.len() {
            hw.starts_with(gw).then(|| Config {
                h_ahead: true,
                remainder: hw[gw.len()..].to_vec(),
            })
        } else {
            gw.starts_with(hw).then(|| Config {
                h_ahead: false,
                remainder: gw[hw.len()..].to_vec(),
            })
        };
        if let Some(c) = config {
            if seen.insert(c.clone()) {
                queue.push_back((c, vec![a]));
            }
        }
    }

    while let Some((config, prefix)) = queue.pop_front() {
        for a in 0..k as u8 {
            nodes += 1;
            if nodes > max_nodes {
                return Ok(PcpReport {
                    verdict: Verdict::Budget,
                    solution: None,
                    nodes,
                });
            }
            // the side that is behind appends its image and must match the
            // remainder plus the ahead side's image
            let (ahead_img, behind_img) = if config.h_ahead {
                (&h[a as usize], &g[a as usize])
            } else {
                (&g[a as usize], &h[a as usize])
            };
            let mut ahead = config.remainder.clone();
            ahead.extend_from_slice(ahead_img);
            let behind = behind_img;
            let next = if ahead.len() >= behind.len() {
                ahead.starts_with(behind).then(|| Config {
                    h_ahead: config.h_ahead,
                    remainder: ahead[behind.len()..].to_vec(),
                })
            } else {
                behind.starts_with(&ahead).then(|| Config {
                    h_ahead: !config.h_ahead,
                    remainder: behind[ahead.len()..].to_vec(),
                })
            };
            if let Some(c) = next {
                let mut word = prefix.clone();
                word.push(a);
                if c.remainder.is_empty() {
                    return Ok(PcpReport {
                        verdict: Verdict::Found,
                        solution: Some(Word::new(instance.h.domain().clone(), word)?),
                        nodes,
                    });
                }
                if seen.insert(c.clone()) {
                    queue.push_back((c, word));
                }
            }
        }
    }
    Ok(PcpReport {
        verdict: Verdict::Exhausted,
        solution: None,
        nodes,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct InstanceProperties {
    /// Both morphisms are marked: images of distinct letters start with
    /// distinct letters.
    pub marked: bool,
    /// No counterexample found to the unique-continuation property: whenever
    /// both one-letter extensions of u keep h and g prefix-comparable,
    /// h(u) = g(u) already. Checked over all index words up to the bound.
    pub unique_equality_continuation: Option<bool>,
    pub continuation_bound: usize,
}

fn prefix_comparable(a: &[u8], b: &[u8]) -> bool {
    let n = a.len().min(b.len());
    a[..n] == b[..n]
}

fn is_marked(m: &Morphism) -> Result<bool> {
    let k = m.domain().size();
    let mut firsts = HashSet::new();
    for a in 0..k as u8 {
        let img = m.image(a)?;
        match img.letters().first() {
            None => return Ok(false),
            Some(&f) => {
                if !firsts.insert(f) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Structural checks for a binary-domain instance; the continuation check
/// enumerates index words of length up to `bound`.
pub fn instance_properties(instance: &PcpInstance, bound: usize) -> Result<InstanceProperties> {
    let marked = is_marked(&instance.h)? && is_marked(&instance.g)?;
    let k = instance.h.domain().size();
    let continuation = if k == 2 {
        let mut holds = true;
        'outer: for len in 0..=bound {
            let mut letters = vec![0u8; len];
            loop {
                let u = Word::new(instance.h.domain().clone(), letters.clone())?;
                let hu = instance.h.apply(&u)?;
                let gu = instance.g.apply(&u)?;
                let both_extend = (0..k as u8).all(|a| {
                    let mut v = letters.clone();
                    v.push(a);
                    let uv = Word::new(instance.h.domain().clone(), v).unwrap();
                    let huv = instance.h.apply(&uv).unwrap();
                    let guv = instance.g.apply(&uv).unwrap();
                    prefix_comparable(huv.letters(), guv.letters())
                });
                if both_extend && hu.letters() != gu.letters() {
                    holds = false;
                    break 'outer;
                }
                if len == 0 || !super::increment(&mut letters, k) {
                    break;
                }
            }
        }
        Some(holds)
    } else {
        None
    };
    Ok(InstanceProperties {
        marked,
        unique_equality_continuation: continuation,
        continuation_bound: bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(h: &str, g: &str) -> PcpInstance {
        PcpInstance::new(Morphism::parse(h).unwrap(), Morphism::parse(g).unwrap()).unwrap()
    }

    #[test]
    fn finds_short_solution() {
        // h(ab) = ab·a? h: a->ab, b->a; g: a->a, b->ba; h(ab)=aba, g(ab)=aba
        let i = inst("a->ab;b->a", "a->a;b->ba");
        let r = bounded_pcp(&i, 10_000).unwrap();
        assert_eq!(r.verdict, Verdict::Found);
        assert_eq!(r.solution.unwrap().to_string(), "ab");
    }

    #[test]
    fn identical_morphisms() {
        let i = inst("a->ab;b->ba", "a->ab;b->ba");
        let r = bounded_pcp(&i, 100).unwrap();
        assert_eq!(r.verdict, Verdict::Found);
        assert_eq!(r.solution.unwrap().to_string(), "a");
    }

    #[test]
    fn exhausts_when_no_config_survives() {
        // images disagree on the first letter already: no viable remainder
        let i = inst("a->ab;b->ab", "a->ba;b->ba");
        let r = bounded_pcp(&i, 100_000).unwrap();
        assert_eq!(r.verdict, Verdict::Exhausted);
        assert!(r.solution.is_none());
    }

    #[test]
    fn budget_verdict() {
        // unbounded remainder growth with no solution
        let i = inst("a->ab;b->bb", "a->aa;b->ba");
        let r = bounded_pcp(&i, 50).unwrap();
        assert!(matches!(r.verdict, Verdict::Budget | Verdict::Exhausted));
    }

    #[test]
    fn properties() {
        let i = inst("a->ab;b->ba", "a->a;b->b");
        let p = instance_properties(&i, 4).unwrap();
        assert!(p.marked);
        let i = inst("a->ab;b->a", "a->a;b->b");
        let p = instance_properties(&i, 4).unwrap();
        assert!(!p.marked); // h's images both start with a
        // identical morphisms: equality everywhere, continuation trivially ok
        let i = inst("a->ab;b->ba", "a->ab;b->ba");
        let p = instance_properties(&i, 3).unwrap();
        assert_eq!(p.unique_equality_continuation, Some(true));
    }

    #[test]
    fn domain_mismatch() {
        let h = Morphism::parse("a->ab;b->ba").unwrap();
        let g = Morphism::parse("a->abc;b->bca;c->cab").unwrap();
        assert!(PcpInstance::new(h, g).is_err());
    }
}
