//! Alphabets, finite and circular words, exact rationals, and text parsing.
//!
//! Letters are small integers `0..k-1`. An alphabet may carry display glyphs
//! (e.g. `0,1,3,4` for a digit alphabet whose letter *indices* are still
//! `0..3`); without glyphs, letters display as `a`, `b`, `c`, ... for small
//! alphabets. Positions are 1-indexed in every report.

use std::collections::HashSet;
use std::fmt;
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};

/// Exact fraction used for exponents, thresholds and densities.
pub type Rational = num_rational::Rational64;

/// Shorthand constructor; panics on zero denominator.
pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(num, den)
}

/// Render a rational as `p/q` (`p` alone when q = 1), the wire form used in
/// all JSON output.
pub fn rational_string(r: Rational) -> String {
    if *r.denom() == 1 {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub const MAX_ALPHABET: usize = 64;

#[derive(Debug, Clone, Eq)]
pub struct Alphabet {
    size: usize,
    glyphs: Option<Vec<char>>,
}

// Alphabets compare by size only; glyphs are presentation.
impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        self.size == other.size
    }
}

impl Hash for Alphabet {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.size.hash(state);
    }
}

impl Alphabet {
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 || size > MAX_ALPHABET {
            return Err(Error::Domain(format!(
                "alphabet size must be in 1..={MAX_ALPHABET}, got {size}"
            )));
        }
        Ok(Alphabet { size, glyphs: None })
    }

    /// One glyph per letter, all distinct.
    pub fn with_glyphs(glyphs: &str) -> Result<Self> {
        let gs: Vec<char> = glyphs.chars().collect();
        let distinct: HashSet<char> = gs.iter().copied().collect();
        if distinct.len() != gs.len() {
            return Err(Error::Domain("alphabet glyphs must be distinct".into()));
        }
        let mut a = Alphabet::new(gs.len())?;
        a.glyphs = Some(gs);
        Ok(a)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn letters(&self) -> impl Iterator<Item = u8> {
        (0..self.size as u8).into_iter()
    }

    pub fn glyph(&self, letter: u8) -> char {
        match &self.glyphs {
            Some(gs) => gs[letter as usize],
            None => {
                if self.size <= 26 {
                    (b'a' + letter) as char
                } else {
                    '?'
                }
            }
        }
    }

    pub fn letter_of(&self, c: char) -> Option<u8> {
        match &self.glyphs {
            Some(gs) => gs.iter().position(|&g| g == c).map(|i| i as u8),
            None => {
                let i = (c as usize).wrapping_sub('a' as usize);
                (c.is_ascii_lowercase() && i < self.size).then(|| i as u8)
            }
        }
    }

    /// Digit values of the letters, for additive-power questions. Defaults to
    /// the letter indices; glyphs that read as digits override them (so the
    /// alphabet `{0,1,3,4}` carries values 0,1,3,4).
    pub fn digit_values(&self) -> Vec<i64> {
        match &self.glyphs {
            Some(gs) if gs.iter().all(|g| g.is_ascii_digit()) => {
                gs.iter().map(|g| (*g as u8 - b'0') as i64).collect()
            }
            _ => (0..self.size as i64).collect(),
        }
    }
}

/// A finite word. Equality and hashing look at the letter sequence only.
#[derive(Debug, Clone, Eq)]
pub struct Word {
    alphabet: Alphabet,
    letters: Vec<u8>,
}

impl PartialEq for Word {
    fn eq(&self, other: &Self) -> bool {
        self.letters == other.letters
    }
}

impl Hash for Word {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.letters.hash(state);
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.letters.cmp(&other.letters)
    }
}

impl Word {
    pub fn new(alphabet: Alphabet, letters: Vec<u8>) -> Result<Self> {
        if let Some(&bad) = letters.iter().find(|&&l| (l as usize) >= alphabet.size()) {
            return Err(Error::LetterOutOfRange {
                letter: bad as usize,
                size: alphabet.size(),
            });
        }
        Ok(Word { alphabet, letters })
    }

    pub fn empty(alphabet: Alphabet) -> Self {
        Word {
            alphabet,
            letters: Vec::new(),
        }
    }

    /// Word over the smallest alphabet containing the given letters.
    pub fn from_letters(letters: &[u8]) -> Self {
        let size = letters.iter().map(|&l| l as usize + 1).max().unwrap_or(1);
        Word {
            alphabet: Alphabet::new(size).expect("letter range checked"),
            letters: letters.to_vec(),
        }
    }

    /// Word over an alphabet of the given size.
    pub fn from_letters_sized(letters: &[u8], size: usize) -> Result<Self> {
        Word::new(Alphabet::new(size)?, letters.to_vec())
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Factor starting at 1-indexed position `start`, of length `len`.
    pub fn factor(&self, start: usize, len: usize) -> Result<Word> {
        if start < 1 || start - 1 + len > self.len() {
            return Err(Error::Domain(format!(
                "factor [{start}, len {len}] out of range for |w| = {}",
                self.len()
            )));
        }
        Ok(Word {
            alphabet: self.alphabet.clone(),
            letters: self.letters[start - 1..start - 1 + len].to_vec(),
        })
    }

    pub fn slice_word(&self, range: std::ops::Range<usize>) -> Word {
        Word {
            alphabet: self.alphabet.clone(),
            letters: self.letters[range].to_vec(),
        }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let alphabet = if self.alphabet.size() >= other.alphabet.size() {
            self.alphabet.clone()
        } else {
            other.alphabet.clone()
        };
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word { alphabet, letters }
    }

    pub fn appended(&self, letter: u8) -> Result<Word> {
        let mut w = self.clone();
        if letter as usize >= w.alphabet.size() {
            return Err(Error::LetterOutOfRange {
                letter: letter as usize,
                size: w.alphabet.size(),
            });
        }
        w.letters.push(letter);
        Ok(w)
    }

    pub fn reversed(&self) -> Word {
        let mut letters = self.letters.clone();
        letters.reverse();
        Word {
            alphabet: self.alphabet.clone(),
            letters,
        }
    }

    pub fn is_palindrome(&self) -> bool {
        let n = self.letters.len();
        (0..n / 2).all(|i| self.letters[i] == self.letters[n - 1 - i])
    }

    /// Distinct factors of length `n`; empty set when `n > |w|`, `{ε}` for
    /// `n = 0`.
    pub fn factor_set(&self, n: usize) -> HashSet<Word> {
        let mut out = HashSet::new();
        if n > self.len() {
            return out;
        }
        for i in 0..=self.len() - n {
            out.insert(self.slice_word(i..i + n));
        }
        out
    }

    /// Parse against a fixed alphabet: compact glyph form or comma-separated
    /// integer indices.
    pub fn parse(text: &str, alphabet: &Alphabet) -> Result<Word> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Word::empty(alphabet.clone()));
        }
        if text.contains(',') {
            let mut letters = Vec::new();
            for tok in text.split(',') {
                let v: usize = tok
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad letter index {tok:?}")))?;
                if v >= alphabet.size() {
                    return Err(Error::LetterOutOfRange {
                        letter: v,
                        size: alphabet.size(),
                    });
                }
                letters.push(v as u8);
            }
            return Word::new(alphabet.clone(), letters);
        }
        let mut letters = Vec::new();
        for c in text.chars() {
            let l = alphabet
                .letter_of(c)
                .ok_or_else(|| Error::Parse(format!("glyph {c:?} not in alphabet")))?;
            letters.push(l);
        }
        Word::new(alphabet.clone(), letters)
    }

    /// Parse with an inferred alphabet: `a..z` map to 0.., digit glyphs map to
    /// their values, `0,1,0` is the integer-index form.
    pub fn parse_guess(text: &str) -> Result<Word> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Word::empty(Alphabet::new(1)?));
        }
        if text.contains(',') {
            let mut letters = Vec::new();
            for tok in text.split(',') {
                let v: usize = tok
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad letter index {tok:?}")))?;
                if v >= MAX_ALPHABET {
                    return Err(Error::LetterOutOfRange {
                        letter: v,
                        size: MAX_ALPHABET,
                    });
                }
                letters.push(v as u8);
            }
            return Ok(Word::from_letters(&letters));
        }
        if text.chars().all(|c| c.is_ascii_digit()) {
            let letters: Vec<u8> = text.chars().map(|c| c as u8 - b'0').collect();
            return Ok(Word::from_letters(&letters));
        }
        let mut letters = Vec::new();
        for c in text.chars() {
            if !c.is_ascii_lowercase() {
                return Err(Error::Parse(format!("glyph {c:?} not a lowercase letter")));
            }
            letters.push(c as u8 - b'a');
        }
        Ok(Word::from_letters(&letters))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.alphabet.size() > 26 && self.alphabet.glyphs.is_none() {
            let parts: Vec<String> = self.letters.iter().map(|l| l.to_string()).collect();
            return write!(f, "{}", parts.join(","));
        }
        for &l in &self.letters {
            write!(f, "{}", self.alphabet.glyph(l))?;
        }
        Ok(())
    }
}

impl serde::Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// One word per line, `#` starts a comment, blank lines skipped.
pub fn parse_word_file(text: &str, alphabet: Option<&Alphabet>) -> Result<Vec<Word>> {
    let mut out = Vec::new();
    for line in text.lines() {
        let line = match line.find('#') {
            Some(i) => &line[..i],
            None => line,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        out.push(match alphabet {
            Some(a) => Word::parse(line, a)?,
            None => Word::parse_guess(line)?,
        });
    }
    Ok(out)
}

/// A nonempty word read cyclically. Rotation-equal circular words compare
/// equal (canonical form: lexicographically least rotation).
#[derive(Debug, Clone, Eq)]
pub struct CircularWord {
    underlying: Word,
}

impl CircularWord {
    pub fn new(underlying: Word) -> Result<Self> {
        if underlying.is_empty() {
            return Err(Error::EmptyWord);
        }
        Ok(CircularWord { underlying })
    }

    pub fn underlying(&self) -> &Word {
        &self.underlying
    }

    pub fn len(&self) -> usize {
        self.underlying.len()
    }

    pub fn rotation(&self, offset: usize) -> Word {
        let n = self.len();
        let letters: Vec<u8> = (0..n)
            .map(|i| self.underlying.letters()[(i + offset) % n])
            .collect();
        Word {
            alphabet: self.underlying.alphabet.clone(),
            letters,
        }
    }

    pub fn canonical(&self) -> Word {
        (0..self.len())
            .map(|o| self.rotation(o))
            .min()
            .expect("nonempty")
    }

    /// Distinct length-`n` factors of the cyclic reading, `n ≤ |w|`.
    pub fn factor_set(&self, n: usize) -> Result<HashSet<Word>> {
        if n > self.len() {
            return Err(Error::Domain(format!(
                "cyclic factor length {n} exceeds circular word length {}",
                self.len()
            )));
        }
        let mut out = HashSet::new();
        let m = self.underlying.len();
        for start in 0..m {
            let letters: Vec<u8> = (0..n)
                .map(|i| self.underlying.letters()[(start + i) % m])
                .collect();
            out.insert(Word {
                alphabet: self.underlying.alphabet.clone(),
                letters,
            });
        }
        Ok(out)
    }
}

impl PartialEq for CircularWord {
    fn eq(&self, other: &Self) -> bool {
        self.len() == other.len() && self.canonical() == other.canonical()
    }
}

impl Hash for CircularWord {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.canonical().hash(state);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse_guess(s).unwrap()
    }

    #[test]
    fn factor_set_basic() {
        let fs = w("abab").factor_set(2);
        assert_eq!(fs.len(), 2);
        assert!(fs.contains(&w("ab")));
        assert!(fs.contains(&w("ba")));
    }

    #[test]
    fn factor_set_empty_factor() {
        let fs = w("abc").factor_set(0);
        assert_eq!(fs.len(), 1);
        assert!(fs.iter().next().unwrap().is_empty());
    }

    #[test]
    fn factor_set_too_long_is_empty() {
        assert!(w("abc").factor_set(4).is_empty());
    }

    #[test]
    fn circular_factor_set() {
        let c = CircularWord::new(w("abcb")).unwrap();
        let fs = c.factor_set(4).unwrap();
        let expect: HashSet<Word> = ["abcb", "bcba", "cbab", "babc"].iter().map(|s| w(s)).collect();
        assert_eq!(fs, expect);
    }

    #[test]
    fn circular_rotation_equality() {
        let a = CircularWord::new(w("abcb")).unwrap();
        let b = CircularWord::new(w("cbab")).unwrap();
        assert_eq!(a, b);
        let c = CircularWord::new(w("abcc")).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn parse_forms_agree() {
        assert_eq!(w("abaab"), Word::parse_guess("0,1,0,0,1").unwrap());
        let digit = Alphabet::with_glyphs("0134").unwrap();
        let v = Word::parse("031", &digit).unwrap();
        assert_eq!(v.letters(), &[0, 2, 1]);
        assert_eq!(v.to_string(), "031");
    }

    #[test]
    fn word_file_comments() {
        let ws = parse_word_file("# header\nabab\n\nba # trailing\n", None).unwrap();
        assert_eq!(ws, vec![w("abab"), w("ba")]);
    }

    #[test]
    fn glyph_alphabet_digit_values() {
        let a = Alphabet::with_glyphs("0134").unwrap();
        assert_eq!(a.digit_values(), vec![0, 1, 3, 4]);
        let b = Alphabet::new(3).unwrap();
        assert_eq!(b.digit_values(), vec![0, 1, 2]);
    }

    #[test]
    fn rational_wire_form() {
        assert_eq!(rational_string(rational(2, 4)), "1/2");
        assert_eq!(rational_string(rational(6, 3)), "2");
    }
}
