/// Resource limits. Every exponential construction checks one of these and
/// fails with [`crate::Error::SizeCap`] instead of running away.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Largest poset size accepted by isomorphism-class enumeration.
    pub max_points: usize,
    /// Largest universal frame, in points.
    pub max_nodes: usize,
    /// Largest set materialized by subalgebra closure or element listing.
    pub max_elements: usize,
    /// Largest poset handed to the canonical labelling search.
    pub max_canon_points: usize,
    /// Leaves explored by one canonical labelling search.
    pub max_canon_leaves: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_points: 7,
            max_nodes: 20_000,
            max_elements: 1 << 20,
            max_canon_points: 256,
            max_canon_leaves: 1 << 20,
        }
    }
}
