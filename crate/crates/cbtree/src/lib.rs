//! Exact Cantor-Bendixson analysis of trees presented as prefix automata.
//!
//! The crate is organized around one idea: a regular tree over a finite
//! alphabet — a prefix-closed language — *is* a deterministic automaton with
//! partial transitions, and every set-topological notion about its branch
//! space (pruning, isolated branches, perfect kernel, derivative rank,
//! branch cardinality) becomes a finite graph computation on that automaton.
//!
//! - [`words`]: finite and ultimately periodic words, canonical forms,
//!   symbol permutations, off-word enumeration.
//! - [`tree`]: the automaton representation and its algebra (quotients,
//!   grafting, root (de)composition, products, language equality).
//! - [`analysis`]: liveness, branch-cardinality classification, derivative,
//!   kernel, ordinal rank, isolated-branch extraction.
//! - [`plugged`]: schematic non-regular trees (a spine with plugged
//!   components, or countably many trees under a root fan-out) with
//!   probe-verified rank patterns.
//! - [`oracle`]: brute-force truncation sets used to cross-examine every
//!   algebraic law the fast paths rely on, plus the seeded random-tree model.
//! - [`dsl`], [`eval`], [`render`], [`cli`]: the `cbtree` surface language.

pub mod analysis;
pub mod cli;
pub mod dsl;
pub mod eval;
pub mod oracle;
pub mod ordinal;
pub mod plugged;
pub mod render;
pub mod tree;
pub mod words;

pub use analysis::{
    classify_branches, derivative_sequence, derive, is_isolated, is_pruned, isolated_branches,
    kernel, prune, rank, state_report, Cardinality, IsolatedBranches, StateReport,
};
pub use ordinal::{ord_max, sup_affine, Ordinal};
pub use tree::{attach, root_construct, root_decompose, TreeAutomaton, TreeError, TreeFamily};
pub use words::{
    concat, mirror_word, off_words, upword_equal, Alphabet, FiniteWord, Sym, SymbolPermutation,
    UPWord, Word, WordError,
};
