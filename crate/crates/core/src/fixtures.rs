//! Small named posets and models shared by tests, benches and the CLI.

use crate::poset::text::{parse, PosetFile};
use crate::poset::Poset;

pub const C2: &str = include_str!("../../../fixtures/c2.poset");
pub const A2: &str = include_str!("../../../fixtures/a2.poset");
pub const V3: &str = include_str!("../../../fixtures/v3.poset");
pub const U12: &str = include_str!("../../../fixtures/u12.model");

fn load(text: &str) -> PosetFile {
    parse(text).expect("bundled fixture parses")
}

/// `p0 < p1`.
pub fn c2() -> Poset {
    load(C2).poset
}

/// Two incomparable points `p`, `q`.
pub fn a2() -> Poset {
    load(A2).poset
}

/// `p0 < p1`, `p0 < p2`.
pub fn v3() -> Poset {
    load(V3).poset
}

/// The two-layer universal model on one variable, as a frame.
pub fn u12() -> PosetFile {
    load(U12)
}

/// Looks a fixture up by name (`c2`, `a2`, `v3`, `u12`).
pub fn by_name(name: &str) -> Option<&'static str> {
    match name {
        "c2" => Some(C2),
        "a2" => Some(A2),
        "v3" => Some(V3),
        "u12" => Some(U12),
        _ => None,
    }
}
