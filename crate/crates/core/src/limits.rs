use serde::{Deserialize, Serialize};

/// Explicit resource caps. Operations that could blow up consult these and
/// fail with [`crate::Error::ResourceLimit`] rather than truncating.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    /// Maximum number of CNF terms in any intermediate ordinal.
    pub max_terms: usize,
    /// Maximum `d` accepted by [`crate::Ordinal::omega_tower`].
    pub max_tower: usize,
    /// Maximum number of ordinals produced by [`crate::ordinal::enumerate_ordinals`].
    pub max_enumeration: usize,
    /// Maximum bit length of any materialised natural number (E values, codes,
    /// branching budgets).
    pub max_bits: u64,
    /// Maximum nesting depth when walking an ordinal code.
    pub max_code_depth: usize,
    /// Maximum number of components of a single code tuple.
    pub max_code_width: usize,
    /// Maximum ground-set size accepted by the exhaustive homogeneous-set search.
    pub max_search_ground: usize,
    /// Maximum number of search nodes visited by the threshold search.
    pub max_search_nodes: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_terms: 1 << 16,
            max_tower: 64,
            max_enumeration: 5_000_000,
            max_bits: 1 << 24,
            max_code_depth: 256,
            max_code_width: 1 << 16,
            max_search_ground: 40,
            max_search_nodes: 2_000_000_000,
        }
    }
}
