//! Finite co-Heyting algebras as downset lattices, their dimension theory,
//! Kripke duality, free finite quotients and truncated completions.

pub mod algebra;
pub mod caps;
pub mod error;
pub mod fixtures;
pub mod fmp;
pub mod kripke;
pub mod metric;
pub mod pointset;
pub mod poset;
pub mod terms;
pub mod verify;

pub use algebra::{Algebra, Codim, Dim, DlReport, Element, Ideal, Morphism};
pub use caps::Caps;
pub use error::{Error, Result};
pub use kripke::KripkeModel;
pub use metric::{CoherentFamily, Distance, FamilyDistance, Tower};
pub use pointset::PointSet;
pub use poset::{canonical_form, enumerate_posets, enumerate_posets_up_to, CanonicalCode, Poset};
pub use terms::{Signature, Term};
