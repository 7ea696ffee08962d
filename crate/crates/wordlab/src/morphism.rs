//! Morphisms, fixed-point prefixes, and prefix oracles for infinite words.
//!
//! A `PrefixOracle` is the single representation of an infinite word: a
//! deterministic generator of length-n prefixes, always queried with an
//! explicit horizon.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::word::{Alphabet, Word};

#[derive(Debug, Clone, PartialEq)]
pub struct Morphism {
    domain: Alphabet,
    codomain: Alphabet,
    images: Vec<Word>,
}

impl Morphism {
    pub fn new(domain: Alphabet, codomain: Alphabet, images: Vec<Word>) -> Result<Self> {
        if images.len() != domain.size() {
            return Err(Error::DomainMismatch(format!(
                "expected {} images, got {}",
                domain.size(),
                images.len()
            )));
        }
        for img in &images {
            if let Some(&bad) = img.letters().iter().find(|&&l| (l as usize) >= codomain.size()) {
                return Err(Error::LetterOutOfRange {
                    letter: bad as usize,
                    size: codomain.size(),
                });
            }
        }
        Ok(Morphism {
            domain,
            codomain,
            images,
        })
    }

    /// Parse `a->ab;b->a` (glyph form) or `0->0,1;1->0` (index form).
    /// Domain glyphs are the left-hand sides in the order written; the
    /// codomain is the union of domain glyphs and image glyphs.
    pub fn parse(spec: &str) -> Result<Morphism> {
        let mut lhs: Vec<char> = Vec::new();
        let mut rhs: Vec<String> = Vec::new();
        for rule in spec.split(';') {
            let rule = rule.trim();
            if rule.is_empty() {
                continue;
            }
            let (l, r) = rule
                .split_once("->")
                .ok_or_else(|| Error::Parse(format!("rule {rule:?} missing '->'")))?;
            let l = l.trim();
            let mut lc = l.chars();
            let c = lc
                .next()
                .ok_or_else(|| Error::Parse("empty rule left-hand side".into()))?;
            if lc.next().is_some() {
                return Err(Error::Parse(format!("left-hand side {l:?} must be one glyph")));
            }
            if lhs.contains(&c) {
                return Err(Error::Parse(format!("duplicate rule for {c:?}")));
            }
            lhs.push(c);
            rhs.push(r.trim().to_string());
        }
        if lhs.is_empty() {
            return Err(Error::Parse("empty morphism spec".into()));
        }
        // index form: every lhs is a digit and some rhs contains a comma or
        // the rhs glyphs are all digits
        let mut glyphs: Vec<char> = lhs.clone();
        for r in &rhs {
            for c in r.chars() {
                if c == ',' || c.is_whitespace() {
                    continue;
                }
                if !glyphs.contains(&c) {
                    glyphs.push(c);
                }
            }
        }
        glyphs.sort();
        let codomain = Alphabet::with_glyphs(&glyphs.iter().collect::<String>())?;
        let domain = Alphabet::with_glyphs(&lhs.iter().collect::<String>())?;
        // images are words over the codomain, but the morphism maps
        // domain letter i -> image of lhs[i]; for iteration we want domain
        // and codomain to share letter codes, so re-encode domain letters
        // through the codomain alphabet when the domain is a subset.
        let mut images = Vec::new();
        for r in &rhs {
            images.push(Word::parse(r, &codomain)?);
        }
        // When every codomain glyph is also a domain glyph the two alphabets
        // coincide and we can keep a single letter coding.
        if glyphs.iter().all(|g| lhs.contains(g)) && glyphs.len() == lhs.len() {
            // reorder images so that image[i] corresponds to codomain letter i
            let mut ordered = vec![None; glyphs.len()];
            for (j, &c) in lhs.iter().enumerate() {
                let i = codomain.letter_of(c).expect("glyph present") as usize;
                ordered[i] = Some(images[j].clone());
            }
            let images: Vec<Word> = ordered.into_iter().map(|o| o.expect("total")).collect();
            return Morphism::new(codomain.clone(), codomain, images);
        }
        // heterogeneous alphabets: keep domain coding as written, but the
        // caller must re-encode words accordingly
        let mut ordered = vec![None; lhs.len()];
        for (j, &c) in lhs.iter().enumerate() {
            let i = domain.letter_of(c).expect("glyph present") as usize;
            ordered[i] = Some(images[j].clone());
        }
        let images: Vec<Word> = ordered.into_iter().map(|o| o.expect("total")).collect();
        Morphism::new(domain, codomain, images)
    }

    pub fn domain(&self) -> &Alphabet {
        &self.domain
    }

    pub fn codomain(&self) -> &Alphabet {
        &self.codomain
    }

    pub fn image(&self, letter: u8) -> Result<&Word> {
        self.images
            .get(letter as usize)
            .ok_or(Error::LetterOutOfRange {
                letter: letter as usize,
                size: self.domain.size(),
            })
    }

    pub fn is_non_erasing(&self) -> bool {
        self.images.iter().all(|w| !w.is_empty())
    }

    /// Image of `a` begins with `a` and has length at least 2.
    pub fn is_prolongable_at(&self, a: u8) -> bool {
        self.domain.size() == self.codomain.size()
            && (a as usize) < self.images.len()
            && self.images[a as usize].len() >= 2
            && self.images[a as usize].letters()[0] == a
    }

    /// Letterwise image concatenation.
    pub fn apply(&self, w: &Word) -> Result<Word> {
        let mut letters = Vec::new();
        for &l in w.letters() {
            let img = self.image(l)?;
            letters.extend_from_slice(img.letters());
        }
        Word::new(self.codomain.clone(), letters)
    }

    /// Length-`n` prefix of the fixed point obtained by iterating from `a`.
    pub fn fixed_point_prefix(&self, a: u8, n: usize) -> Result<Word> {
        if !self.is_prolongable_at(a) {
            return Err(Error::NotProlongable);
        }
        let mut w = Word::new(self.codomain.clone(), vec![a])?;
        while w.len() < n {
            let next = self.apply(&w)?;
            if next.len() <= w.len() {
                return Err(Error::NotProlongable);
            }
            w = if next.len() > n {
                next.slice_word(0..n)
            } else {
                next
            };
        }
        Ok(w.slice_word(0..n))
    }
}

/// Deterministic generator of prefixes of an infinite word.
#[derive(Clone)]
pub struct PrefixOracle {
    tag: String,
    gen: Arc<dyn Fn(usize) -> Word + Send + Sync>,
}

impl std::fmt::Debug for PrefixOracle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "PrefixOracle({})", self.tag)
    }
}

impl PrefixOracle {
    pub fn new(
        tag: impl Into<String>,
        gen: impl Fn(usize) -> Word + Send + Sync + 'static,
    ) -> Self {
        PrefixOracle {
            tag: tag.into(),
            gen: Arc::new(gen),
        }
    }

    pub fn tag(&self) -> &str {
        &self.tag
    }

    pub fn prefix(&self, n: usize) -> Word {
        (self.gen)(n)
    }

    /// Fixed point of a prolongable morphism.
    pub fn morphic(m: Morphism, a: u8) -> Result<Self> {
        if !m.is_prolongable_at(a) {
            return Err(Error::NotProlongable);
        }
        let tag = format!("morphic fixed point from letter {a}");
        Ok(PrefixOracle::new(tag, move |n| {
            m.fixed_point_prefix(a, n).expect("prolongable")
        }))
    }

    /// HD0L image: apply an outer morphism to the prefixes of this oracle.
    pub fn mapped(self, outer: Morphism) -> Result<Self> {
        if !outer.is_non_erasing() {
            return Err(Error::Unsupported(
                "outer morphism must be non-erasing".into(),
            ));
        }
        let tag = format!("{} under outer morphism", self.tag);
        Ok(PrefixOracle::new(tag, move |n| {
            // non-erasing: n input letters give at least n output letters
            let w = outer.apply(&self.prefix(n)).expect("codomain checked");
            w.slice_word(0..n.min(w.len()))
        }))
    }

    pub fn thue_morse() -> Self {
        PrefixOracle::new("thue_morse", |n| classics::thue_morse(n))
    }

    pub fn fibonacci() -> Self {
        PrefixOracle::new("fibonacci", |n| classics::fibonacci(n))
    }

    pub fn thue_ternary() -> Self {
        PrefixOracle::new("thue_ternary", |n| classics::thue_ternary(n))
    }

    pub fn constant(alphabet_size: usize, letter: u8) -> Result<Self> {
        let a = Alphabet::new(alphabet_size)?;
        if letter as usize >= alphabet_size {
            return Err(Error::LetterOutOfRange {
                letter: letter as usize,
                size: alphabet_size,
            });
        }
        Ok(PrefixOracle::new("constant", move |n| {
            Word::new(a.clone(), vec![letter; n]).expect("letter checked")
        }))
    }

    pub fn sturmian(cf: Vec<u64>) -> Result<Self> {
        if cf.is_empty() {
            return Err(Error::Domain("empty continued-fraction expansion".into()));
        }
        if cf.iter().skip(1).any(|&d| d == 0) || cf == [0] {
            return Err(Error::Domain(
                "continued-fraction digits beyond the first must be positive".into(),
            ));
        }
        Ok(PrefixOracle::new(
            format!("sturmian{cf:?}"),
            move |n| classics::sturmian(&cf, n),
        ))
    }
}

/// The classic generator zoo used as fixtures everywhere else.
pub mod classics {
    use super::*;

    pub fn thue_morse_morphism() -> Morphism {
        Morphism::parse("0->01;1->10").expect("fixed spec")
    }

    pub fn fibonacci_morphism() -> Morphism {
        Morphism::parse("a->ab;b->a").expect("fixed spec")
    }

    /// Thue's square-free ternary generator a->abc, b->ac, c->b.
    pub fn thue_ternary_morphism() -> Morphism {
        Morphism::parse("a->abc;b->ac;c->b").expect("fixed spec")
    }

    /// h(0)=03, h(1)=43, h(3)=1, h(4)=01 over the digit alphabet {0,1,3,4}.
    pub fn makela_morphism() -> Morphism {
        Morphism::parse("0->03;1->43;3->1;4->01").expect("fixed spec")
    }

    pub fn thue_morse(n: usize) -> Word {
        thue_morse_morphism()
            .fixed_point_prefix(0, n)
            .expect("prolongable")
    }

    pub fn fibonacci(n: usize) -> Word {
        fibonacci_morphism()
            .fixed_point_prefix(0, n)
            .expect("prolongable")
    }

    pub fn thue_ternary(n: usize) -> Word {
        thue_ternary_morphism()
            .fixed_point_prefix(0, n)
            .expect("prolongable")
    }

    pub fn makela(n: usize) -> Word {
        makela_morphism()
            .fixed_point_prefix(0, n)
            .expect("prolongable")
    }

    /// Z_1 = 1, Z_k = Z_{k-1} k Z_{k-1}, over the glyph alphabet 1..k.
    pub fn zimin(k: usize) -> Result<Word> {
        if k < 1 || k > 9 {
            return Err(Error::Domain(format!("zimin index must be in 1..=9, got {k}")));
        }
        let glyphs: String = (1..=k).map(|i| std::char::from_digit(i as u32, 10).unwrap()).collect();
        let alphabet = Alphabet::with_glyphs(&glyphs)?;
        let mut letters: Vec<u8> = vec![0];
        for level in 1..k {
            let mut next = letters.clone();
            next.push(level as u8);
            next.extend_from_slice(&letters);
            letters = next;
        }
        Word::new(alphabet, letters)
    }

    /// Length-`n` prefix of the standard word with continued-fraction digits
    /// `cf`, via s_{-1} = b, s_0 = a, s_k = s_{k-1}^{d_k} s_{k-2}. A finite
    /// digit list is cycled (periodic expansion).
    pub fn sturmian(cf: &[u64], n: usize) -> Word {
        assert!(!cf.is_empty());
        let alphabet = Alphabet::new(2).expect("binary");
        let mut prev: Vec<u8> = vec![1]; // s_{-1}
        let mut cur: Vec<u8> = vec![0]; // s_0
        let mut level = 0usize;
        while cur.len() < n {
            let d = cf[level % cf.len()] as usize;
            let mut next = Vec::with_capacity(cur.len() * d + prev.len());
            for _ in 0..d {
                next.extend_from_slice(&cur);
            }
            next.extend_from_slice(&prev);
            prev = std::mem::replace(&mut cur, next);
            level += 1;
        }
        Word::new(alphabet, cur[..n].to_vec()).expect("binary letters")
    }

    /// Named generator dispatch used by the CLI: `thue_morse`, `fibonacci`,
    /// `thue_ternary`, `makela`, `zimin:k`, `sturmian:d1,d2,...`.
    pub fn classic_word(tag: &str, n: usize) -> Result<Word> {
        let (name, param) = match tag.split_once(':') {
            Some((a, b)) => (a, Some(b)),
            None => (tag, None),
        };
        match name {
            "thue_morse" => Ok(thue_morse(n)),
            "fibonacci" => Ok(fibonacci(n)),
            "thue_ternary" => Ok(thue_ternary(n)),
            "makela" => Ok(makela(n)),
            "zimin" => {
                let k: usize = param
                    .ok_or_else(|| Error::Parse("zimin needs a parameter, e.g. zimin:3".into()))?
                    .parse()
                    .map_err(|_| Error::Parse("bad zimin parameter".into()))?;
                zimin(k)
            }
            "sturmian" => {
                let digits: Vec<u64> = param
                    .ok_or_else(|| Error::Parse("sturmian needs digits, e.g. sturmian:1,1".into()))?
                    .split(',')
                    .map(|t| t.trim().parse().map_err(|_| Error::Parse("bad cf digit".into())))
                    .collect::<Result<_>>()?;
                let oracle = PrefixOracle::sturmian(digits)?;
                Ok(oracle.prefix(n))
            }
            _ => Err(Error::Parse(format!("unknown classic word {name:?}"))),
        }
    }

    pub fn classic_oracle(tag: &str) -> Result<PrefixOracle> {
        let (name, param) = match tag.split_once(':') {
            Some((a, b)) => (a, Some(b)),
            None => (tag, None),
        };
        match name {
            "thue_morse" => Ok(PrefixOracle::thue_morse()),
            "fibonacci" => Ok(PrefixOracle::fibonacci()),
            "thue_ternary" => Ok(PrefixOracle::thue_ternary()),
            "makela" => PrefixOracle::morphic(makela_morphism(), 0),
            "constant" => PrefixOracle::constant(1, 0),
            "sturmian" => {
                let digits: Vec<u64> = param
                    .ok_or_else(|| Error::Parse("sturmian needs digits".into()))?
                    .split(',')
                    .map(|t| t.trim().parse().map_err(|_| Error::Parse("bad cf digit".into())))
                    .collect::<Result<_>>()?;
                PrefixOracle::sturmian(digits)
            }
            _ => Err(Error::Parse(format!("unknown oracle {name:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::classics;
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse_guess(s).unwrap()
    }

    #[test]
    fn apply_single_and_empty() {
        let m = classics::thue_morse_morphism();
        assert_eq!(m.apply(&w("0")).unwrap(), w("01"));
        assert_eq!(m.apply(&w("")).unwrap(), w(""));
    }

    #[test]
    fn apply_makela() {
        let m = classics::makela_morphism();
        let a = m.domain().clone();
        let input = Word::parse("03", &a).unwrap();
        assert_eq!(m.apply(&input).unwrap().to_string(), "031");
    }

    #[test]
    fn apply_rejects_foreign_letter() {
        let m = classics::thue_morse_morphism();
        let v = Word::from_letters(&[0, 2]);
        assert!(m.apply(&v).is_err());
    }

    #[test]
    fn fixed_point_prefixes() {
        let m = classics::thue_morse_morphism();
        assert_eq!(m.fixed_point_prefix(0, 8).unwrap(), w("01101001"));
        let f = classics::fibonacci_morphism();
        assert_eq!(f.fixed_point_prefix(0, 8).unwrap(), w("abaababa"));
        let t = classics::thue_ternary_morphism();
        assert_eq!(t.fixed_point_prefix(0, 6).unwrap(), w("abcacb"));
    }

    #[test]
    fn fixed_point_requires_prolongable() {
        let m = Morphism::parse("a->ba;b->a").unwrap();
        assert_eq!(m.fixed_point_prefix(0, 4), Err(Error::NotProlongable));
        let id = Morphism::parse("a->a").unwrap();
        assert_eq!(id.fixed_point_prefix(0, 4), Err(Error::NotProlongable));
    }

    #[test]
    fn classic_words() {
        assert_eq!(classics::zimin(3).unwrap().to_string(), "1213121");
        assert_eq!(classics::thue_morse(4), w("0110"));
        assert_eq!(classics::fibonacci(5), w("abaab"));
        assert_eq!(classics::classic_word("zimin:3", 0).unwrap().len(), 7);
        assert!(classics::classic_word("zimin:0", 0).is_err());
        assert!(classics::classic_word("nope", 3).is_err());
    }

    #[test]
    fn zimin_length() {
        for k in 1..=6 {
            assert_eq!(classics::zimin(k).unwrap().len(), (1 << k) - 1);
        }
    }

    #[test]
    fn sturmian_all_ones_is_fibonacci() {
        let s = classics::sturmian(&[1], 30);
        let f = classics::fibonacci(30);
        assert_eq!(s.letters(), f.letters());
        assert!(PrefixOracle::sturmian(vec![]).is_err());
        assert!(PrefixOracle::sturmian(vec![1, 0, 1]).is_err());
    }

    #[test]
    fn oracle_prefix_consistency() {
        let o = PrefixOracle::thue_morse();
        for n in 0..40 {
            let a = o.prefix(n);
            let b = o.prefix(n + 1);
            assert_eq!(a.letters(), &b.letters()[..n]);
        }
    }

    #[test]
    fn hd0l_mapped_oracle() {
        let outer = Morphism::parse("0->0;1->1;3->0;4->1").unwrap();
        let o = PrefixOracle::morphic(classics::makela_morphism(), 0)
            .unwrap()
            .mapped(outer)
            .unwrap();
        assert_eq!(o.prefix(4).len(), 4);
    }
}
