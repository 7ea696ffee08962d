//! Word equations over a finite constant alphabet, solved by bounded
//! enumeration of variable assignments.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::word::{Alphabet, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EqSymbol {
    /// Variable, named by its source character.
    Var(char),
    /// Constant letter, already mapped into 0..alphabet.
    Const(u8),
}

/// One equation, both sides sequences of variables and constants.
/// Convention: `x`, `y`, `z`, `u`, `v`, `w` and all uppercase characters are
/// variables; any other lowercase letter is the constant it names
/// (`a` = 0, `b` = 1, ...).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WordEquation {
    pub lhs: Vec<EqSymbol>,
    pub rhs: Vec<EqSymbol>,
    pub text: String,
}

fn classify(c: char) -> Result<EqSymbol> {
    match c {
        'x' | 'y' | 'z' | 'u' | 'v' | 'w' => Ok(EqSymbol::Var(c)),
        'A'..='Z' => Ok(EqSymbol::Var(c)),
        'a'..='t' => Ok(EqSymbol::Const(c as u8 - b'a')),
        _ => Err(Error::Parse(format!("equation symbol {c:?} not recognized"))),
    }
}

impl WordEquation {
    pub fn parse(text: &str) -> Result<WordEquation> {
        let (l, r) = text
            .split_once('=')
            .ok_or_else(|| Error::Parse("equation needs '='".into()))?;
        let side = |s: &str| -> Result<Vec<EqSymbol>> {
            s.trim().chars().map(classify).collect()
        };
        Ok(WordEquation {
            lhs: side(l)?,
            rhs: side(r)?,
            text: text.trim().to_string(),
        })
    }

    pub fn variables(&self) -> Vec<char> {
        let mut vars: Vec<char> = self
            .lhs
            .iter()
            .chain(&self.rhs)
            .filter_map(|s| match s {
                EqSymbol::Var(v) => Some(*v),
                EqSymbol::Const(_) => None,
            })
            .collect();
        vars.sort_unstable();
        vars.dedup();
        vars
    }

    fn max_constant(&self) -> Option<u8> {
        self.lhs
            .iter()
            .chain(&self.rhs)
            .filter_map(|s| match s {
                EqSymbol::Const(c) => Some(*c),
                EqSymbol::Var(_) => None,
            })
            .max()
    }

    fn substitute_side(side: &[EqSymbol], assignment: &BTreeMap<char, Vec<u8>>) -> Vec<u8> {
        let mut out = Vec::new();
        for sym in side {
            match sym {
                EqSymbol::Const(c) => out.push(*c),
                EqSymbol::Var(v) => out.extend_from_slice(&assignment[v]),
            }
        }
        out
    }

    pub fn holds(&self, assignment: &BTreeMap<char, Vec<u8>>) -> bool {
        Self::substitute_side(&self.lhs, assignment) == Self::substitute_side(&self.rhs, assignment)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EquationSolution {
    pub assignment: BTreeMap<char, Word>,
    /// All assigned values are powers of one common word (commuting
    /// solution). Empty values are powers of anything.
    pub periodic: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct EquationReport {
    pub solutions: Vec<EquationSolution>,
    /// False when the solution cap truncated the list.
    pub complete: bool,
    /// Some solution is not a commuting one.
    pub has_non_periodic: bool,
}

/// Two words commute iff they are powers of a common word.
fn commute(a: &[u8], b: &[u8]) -> bool {
    let mut ab = a.to_vec();
    ab.extend_from_slice(b);
    let mut ba = b.to_vec();
    ba.extend_from_slice(a);
    ab == ba
}

fn all_commute(values: &BTreeMap<char, Vec<u8>>) -> bool {
    let nonempty: Vec<&Vec<u8>> = values.values().filter(|v| !v.is_empty()).collect();
    nonempty
        .iter()
        .zip(nonempty.iter().skip(1))
        .all(|(a, b)| commute(a, b))
}

/// All solutions of the system with every variable of length at most
/// `max_len` over `alphabet` letters. Empty assignments are allowed.
/// Enumeration fixes a length profile satisfying the linear length
/// constraints of every equation first, then fills in letters.
pub fn solve_word_equations(
    system: &[WordEquation],
    alphabet: usize,
    max_len: usize,
    max_solutions: usize,
) -> Result<EquationReport> {
    if system.is_empty() {
        return Err(Error::Domain("empty equation system".into()));
    }
    let sigma = Alphabet::new(alphabet)?;
    if let Some(c) = system.iter().filter_map(|e| e.max_constant()).max() {
        if c as usize >= alphabet {
            return Err(Error::LetterOutOfRange {
                letter: c as usize,
                size: alphabet,
            });
        }
    }
    let mut vars: Vec<char> = system.iter().flat_map(|e| e.variables()).collect();
    vars.sort_unstable();
    vars.dedup();

    // per equation: constant surplus and per-variable multiplicity diff
    // (lhs minus rhs); a length profile must zero all of them
    let constraints: Vec<(i64, BTreeMap<char, i64>)> = system
        .iter()
        .map(|eq| {
            let mut constant = 0i64;
            let mut coeff: BTreeMap<char, i64> = BTreeMap::new();
            for (side, sign) in [(&eq.lhs, 1i64), (&eq.rhs, -1i64)] {
                for sym in side.iter() {
                    match sym {
                        EqSymbol::Const(_) => constant += sign,
                        EqSymbol::Var(v) => *coeff.entry(*v).or_insert(0) += sign,
                    }
                }
            }
            (constant, coeff)
        })
        .collect();

    let mut solutions = Vec::new();
    let mut complete = true;
    let mut lengths = vec![0usize; vars.len()];
    'profiles: loop {
        let feasible = constraints.iter().all(|(constant, coeff)| {
            let total: i64 = constant
                + vars
                    .iter()
                    .zip(&lengths)
                    .map(|(v, &l)| coeff.get(v).copied().unwrap_or(0) * l as i64)
                    .sum::<i64>();
            total == 0
        });
        if feasible && !fill_letters(system, &sigma, &vars, &lengths, alphabet, max_solutions, &mut solutions)? {
            complete = false;
            break 'profiles;
        }
        // odometer over length profiles
        let mut i = 0;
        loop {
            if i == lengths.len() {
                break 'profiles;
            }
            if lengths[i] < max_len {
                lengths[i] += 1;
                lengths[..i].fill(0);
                break;
            }
            i += 1;
        }
    }
    // reported order: non-decreasing total length, then lexicographic
    solutions.sort_by_key(|s: &EquationSolution| {
        let total: usize = s.assignment.values().map(|w| w.len()).sum();
        let flat: Vec<u8> = s
            .assignment
            .values()
            .flat_map(|w| w.letters().iter().copied())
            .collect();
        (total, flat)
    });
    let has_non_periodic = solutions.iter().any(|s: &EquationSolution| !s.periodic);
    Ok(EquationReport {
        solutions,
        complete,
        has_non_periodic,
    })
}

/// Enumerate letter contents for a fixed length profile. Returns false when
/// the solution cap was hit.
fn fill_letters(
    system: &[WordEquation],
    sigma: &Alphabet,
    vars: &[char],
    lengths: &[usize],
    alphabet: usize,
    max_solutions: usize,
    solutions: &mut Vec<EquationSolution>,
) -> Result<bool> {
    let total: usize = lengths.iter().sum();
    let mut flat = vec![0u8; total];
    loop {
        let mut assignment: BTreeMap<char, Vec<u8>> = BTreeMap::new();
        let mut off = 0;
        for (v, &l) in vars.iter().zip(lengths) {
            assignment.insert(*v, flat[off..off + l].to_vec());
            off += l;
        }
        if system.iter().all(|eq| eq.holds(&assignment)) {
            if solutions.len() >= max_solutions {
                return Ok(false);
            }
            let periodic = all_commute(&assignment);
            let assignment = assignment
                .into_iter()
                .map(|(v, letters)| Ok((v, Word::new(sigma.clone(), letters)?)))
                .collect::<Result<BTreeMap<char, Word>>>()?;
            solutions.push(EquationSolution {
                assignment,
                periodic,
            });
        }
        if !super::increment(&mut flat, alphabet) {
            return Ok(true);
        }
    }
}

/// Brute-force oracle: same enumeration without the length-profile filter.
/// Kept separate from the solver so the two routes stay independent.
pub fn solve_brute(
    system: &[WordEquation],
    alphabet: usize,
    max_len: usize,
) -> Result<Vec<BTreeMap<char, Word>>> {
    if system.is_empty() {
        return Err(Error::Domain("empty equation system".into()));
    }
    let sigma = Alphabet::new(alphabet)?;
    let mut vars: Vec<char> = system.iter().flat_map(|e| e.variables()).collect();
    vars.sort_unstable();
    vars.dedup();
    let mut out = Vec::new();
    let mut stack: Vec<Vec<u8>> = vec![Vec::new(); vars.len()];
    fn rec(
        system: &[WordEquation],
        sigma: &Alphabet,
        vars: &[char],
        idx: usize,
        alphabet: usize,
        max_len: usize,
        stack: &mut Vec<Vec<u8>>,
        out: &mut Vec<BTreeMap<char, Word>>,
    ) -> Result<()> {
        if idx == vars.len() {
            let assignment: BTreeMap<char, Vec<u8>> = vars
                .iter()
                .zip(stack.iter())
                .map(|(v, w)| (*v, w.clone()))
                .collect();
            if system.iter().all(|eq| eq.holds(&assignment)) {
                out.push(
                    assignment
                        .into_iter()
                        .map(|(v, letters)| Ok((v, Word::new(sigma.clone(), letters)?)))
                        .collect::<Result<BTreeMap<char, Word>>>()?,
                );
            }
            return Ok(());
        }
        for len in 0..=max_len {
            let mut letters = vec![0u8; len];
            loop {
                stack[idx] = letters.clone();
                rec(system, sigma, vars, idx + 1, alphabet, max_len, stack, out)?;
                if !super::increment(&mut letters, alphabet) {
                    break;
                }
            }
        }
        Ok(())
    }
    rec(system, &sigma, &vars, 0, alphabet, max_len, &mut stack, &mut out)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eq(s: &str) -> WordEquation {
        WordEquation::parse(s).unwrap()
    }

    #[test]
    fn parse_and_classify() {
        let e = eq("xy = yx");
        assert_eq!(e.variables(), vec!['x', 'y']);
        let e = eq("xa=bx");
        assert_eq!(e.lhs, vec![EqSymbol::Var('x'), EqSymbol::Const(0)]);
        assert_eq!(e.rhs, vec![EqSymbol::Const(1), EqSymbol::Var('x')]);
        assert!(WordEquation::parse("xy").is_err());
        assert!(WordEquation::parse("x?=y").is_err());
        assert_eq!(eq("Xa=aX").variables(), vec!['X']);
    }

    #[test]
    fn commutation_equation() {
        // xy = yx: exactly the pairs that are powers of a common word
        let r = solve_word_equations(&[eq("xy=yx")], 2, 4, 100_000).unwrap();
        assert!(r.complete);
        assert!(!r.has_non_periodic);
        assert!(r.solutions.iter().all(|s| s.periodic));
        // among them: x=ab, y=abab
        assert!(r.solutions.iter().any(|s| {
            s.assignment[&'x'].letters() == [0, 1] && s.assignment[&'y'].letters() == [0, 1, 0, 1]
        }));
        // and x=ab, y=ba is not a solution
        assert!(!r.solutions.iter().any(|s| {
            s.assignment[&'x'].letters() == [0, 1] && s.assignment[&'y'].letters() == [1, 0]
        }));
    }

    #[test]
    fn tautology_and_unsatisfiable() {
        let r = solve_word_equations(&[eq("x=x")], 2, 2, 100).unwrap();
        assert!(r.complete);
        // 1 + 2 + 4 words of length <= 2
        assert_eq!(r.solutions.len(), 7);

        let r = solve_word_equations(&[eq("xa=bx")], 2, 4, 100).unwrap();
        assert!(r.complete);
        assert!(r.solutions.is_empty());
    }

    #[test]
    fn constants_out_of_range() {
        assert!(solve_word_equations(&[eq("xc=cx")], 2, 2, 10).is_err());
    }

    #[test]
    fn conjugacy_has_non_periodic_solutions() {
        // xz = zy: conjugate words; x=ab, y=ba, z=a works and is non-periodic
        let r = solve_word_equations(&[eq("xz=zy")], 2, 2, 100_000).unwrap();
        assert!(r.has_non_periodic);
        assert!(r.solutions.iter().any(|s| {
            s.assignment[&'x'].letters() == [0, 1]
                && s.assignment[&'y'].letters() == [1, 0]
                && s.assignment[&'z'].letters() == [0]
        }));
    }

    #[test]
    fn solver_matches_brute_oracle() {
        for system in [
            vec![eq("xy=yx")],
            vec![eq("xa=ax")],
            vec![eq("xz=zy")],
            vec![eq("xy=yx"), eq("xa=ax")],
            vec![eq("xx=yyy")],
        ] {
            let fast = solve_word_equations(&system, 2, 2, usize::MAX).unwrap();
            assert!(fast.complete);
            let brute = solve_brute(&system, 2, 2).unwrap();
            let fast_set: Vec<_> = fast.solutions.iter().map(|s| s.assignment.clone()).collect();
            assert_eq!(fast_set.len(), brute.len(), "system {:?}", system[0].text);
            for b in &brute {
                assert!(fast_set.contains(b));
            }
        }
    }

    #[test]
    fn solution_cap() {
        let r = solve_word_equations(&[eq("x=x")], 2, 3, 2).unwrap();
        assert!(!r.complete);
        assert_eq!(r.solutions.len(), 2);
    }
}
