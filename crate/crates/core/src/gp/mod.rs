//! Gluing-parallel iposets: terms, decomposition search and the alternation
//! hierarchy.

pub mod decompose;
pub mod level;
pub mod split;
pub mod term;

pub use decompose::{forbidden_filter, gp_decompose, is_gp_poset, witness_pn, DecompCache, Decomposer};
pub use level::{least_level, level_membership, LevelSearch, Tower};
pub use term::GpTerm;
