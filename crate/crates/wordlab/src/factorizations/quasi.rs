//! Quasiperiods: proper factors whose occurrences cover every position.

use serde::Serialize;

use crate::error::Result;
use crate::morphism::Morphism;
use crate::word::Word;

/// All proper factors x of w whose occurrences cover positions 1..|w|.
/// A quasiperiod is necessarily a border, so only bordered prefixes are
/// scanned.
pub fn quasiperiods(w: &Word) -> Vec<Word> {
    let s = w.letters();
    let n = s.len();
    let mut out = Vec::new();
    for len in 1..n {
        let x = &s[..len];
        if &s[n - len..] != x {
            continue;
        }
        if occurrences_cover(s, x) {
            out.push(w.slice_word(0..len));
        }
    }
    out
}

fn occurrences_cover(s: &[u8], x: &[u8]) -> bool {
    let n = s.len();
    let m = x.len();
    let mut covered_to = 0usize; // positions [0, covered_to) covered so far
    for i in 0..=n - m {
        if &s[i..i + m] == x {
            if i > covered_to {
                return false; // gap before this occurrence
            }
            covered_to = covered_to.max(i + m);
        }
    }
    covered_to == n
}

pub fn is_quasiperiodic(w: &Word) -> bool {
    !quasiperiods(w).is_empty()
}

#[derive(Debug, Clone, Serialize)]
pub struct QuasiProbeSample {
    pub word: Word,
    pub image: Word,
    pub image_quasiperiodic: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct QuasiProbeReport {
    /// Samples actually used (non-quasiperiodic inputs only).
    pub samples: Vec<QuasiProbeSample>,
    pub skipped_quasiperiodic_inputs: usize,
    /// All sampled images quasiperiodic (evidence toward strongly
    /// quasiperiodic).
    pub strong_evidence: bool,
    /// Some sampled image quasiperiodic (evidence toward weakly
    /// quasiperiodic).
    pub weak_evidence: bool,
    /// Quasiperiodicity of the fixed-point prefix at the given horizon, when
    /// the morphism is prolongable at its first letter.
    pub fixed_point_prefix_quasiperiodic: Option<bool>,
}

/// Evidence toward strong or weak quasiperiodicity of the morphism: a
/// strongly quasiperiodic morphism maps every non-quasiperiodic word to a
/// quasiperiodic one, a weakly quasiperiodic morphism maps at least one.
pub fn morphism_quasiperiodicity_probe(
    f: &Morphism,
    sample: &[Word],
    horizon: usize,
) -> Result<QuasiProbeReport> {
    let mut samples = Vec::new();
    let mut skipped = 0usize;
    for word in sample {
        if is_quasiperiodic(word) {
            skipped += 1;
            continue;
        }
        let image = f.apply(word)?;
        let q = is_quasiperiodic(&image);
        samples.push(QuasiProbeSample {
            word: word.clone(),
            image,
            image_quasiperiodic: q,
        });
    }
    let strong = !samples.is_empty() && samples.iter().all(|s| s.image_quasiperiodic);
    let weak = samples.iter().any(|s| s.image_quasiperiodic);
    let fixed = (0..f.domain().size() as u8)
        .find(|&a| f.is_prolongable_at(a))
        .map(|a| {
            f.fixed_point_prefix(a, horizon)
                .map(|p| is_quasiperiodic(&p))
        })
        .transpose()?;
    Ok(QuasiProbeReport {
        samples,
        skipped_quasiperiodic_inputs: skipped,
        strong_evidence: strong,
        weak_evidence: weak,
        fixed_point_prefix_quasiperiodic: fixed,
    })
}

/// All non-quasiperiodic words over k letters with length in 1..=n_max.
pub fn non_quasiperiodic_words(k: usize, n_max: usize) -> Result<Vec<Word>> {
    let alphabet = crate::word::Alphabet::new(k)?;
    let mut out = Vec::new();
    for len in 1..=n_max {
        let mut letters = vec![0u8; len];
        loop {
            let w = Word::new(alphabet.clone(), letters.clone())?;
            if !is_quasiperiodic(&w) {
                out.push(w);
            }
            if !super::increment(&mut letters, k) {
                break;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse_guess(s).unwrap()
    }

    #[test]
    fn quasiperiod_examples() {
        assert_eq!(quasiperiods(&w("abaaba")), vec![w("aba")]);
        assert_eq!(quasiperiods(&w("ababa")), vec![w("aba")]);
        assert!(quasiperiods(&w("abc")).is_empty());
        assert!(!is_quasiperiodic(&w("abc")));
        assert!(is_quasiperiodic(&w("aa")));
        // covers need overlap or adjacency, not just border
        assert!(!is_quasiperiodic(&w("abcab")));
        assert_eq!(quasiperiods(&w("aaaa")), vec![w("a"), w("aa"), w("aaa")]);
    }

    #[test]
    fn quasiperiods_are_borders() {
        for len in 1..=10usize {
            let mut letters = vec![0u8; len];
            loop {
                let word = Word::from_letters_sized(&letters, 2).unwrap();
                for q in quasiperiods(&word) {
                    let s = word.letters();
                    assert_eq!(&s[..q.len()], q.letters());
                    assert_eq!(&s[s.len() - q.len()..], q.letters());
                }
                if !super::super::increment(&mut letters, 2) {
                    break;
                }
            }
        }
    }

    #[test]
    fn probe_examples() {
        let identity = Morphism::parse("a->a;b->b").unwrap();
        let sample = non_quasiperiodic_words(2, 4).unwrap();
        let r = morphism_quasiperiodicity_probe(&identity, &sample, 64).unwrap();
        assert!(!r.strong_evidence);
        assert!(!r.weak_evidence);

        let doubler = Morphism::parse("a->abaaba;b->abaaba").unwrap();
        let r = morphism_quasiperiodicity_probe(&doubler, &sample, 64).unwrap();
        assert!(r.strong_evidence);
        assert!(r.weak_evidence);

        let r = morphism_quasiperiodicity_probe(&identity, &[], 64).unwrap();
        assert!(!r.strong_evidence);
        assert!(!r.weak_evidence);
        assert!(r.samples.is_empty());
    }
}
