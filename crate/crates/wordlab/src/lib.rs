//! Combinatorics on words: repetitions, pattern avoidance, abelian
//! equivalence, complexity functions, factorizations, and the bounded
//! searches and probes built on top of them.

pub mod abelian;
pub mod complexity;
pub mod error;
pub mod factorizations;
pub mod morphism;
pub mod patterns;
pub mod probes;
pub mod repetitions;
pub mod search;
pub mod word;

pub use error::{Error, Result};
pub use word::{Alphabet, Rational, Word};
