//! Factorizations of words: F-factorizations driven by automata,
//! quasiperiodicity, disjoint X-factorizations and combinatorial rank,
//! word equations, and bounded Post correspondence.

pub mod dfa;
pub mod equations;
pub mod ffact;
pub mod pcp;
pub mod quasi;
pub mod xfact;

pub use dfa::{shortest_rejected, Dfa, Nfa};
pub use equations::{solve_word_equations, EquationReport, WordEquation};
pub use ffact::{
    check_completeness, check_synchronization, check_uniqueness, f_factorizations,
    CompletenessMode, FFactorizationSpec, Factorization, PropertyVerdict, SyncReport,
};
pub use pcp::{bounded_pcp, instance_properties, PcpInstance, PcpReport};
pub use quasi::{is_quasiperiodic, morphism_quasiperiodicity_probe, quasiperiods};
pub use xfact::{
    combinatorial_rank, disjoint_x_factorizations, disjoint_x_factorizations_circular,
    DisjointReport, RankResult,
};

/// Odometer step over words as little-endian digit vectors; false at wrap.
pub(crate) fn increment(letters: &mut [u8], k: usize) -> bool {
    for slot in letters.iter_mut() {
        if (*slot as usize) + 1 < k {
            *slot += 1;
            return true;
        }
        *slot = 0;
    }
    false
}
