//! Example networks shipped with the crate, in `.crn` format.

/// Schmitz's six-box global carbon cycle, 13 reactions.
pub const SCHMITZ: &str = include_str!("../fixtures/schmitz.crn");

/// Reactions r1–r8 of [`SCHMITZ`].
pub const SCHMITZ_SUB: &str = include_str!("../fixtures/schmitz_sub.crn");

/// A non-Eulerian linkage class with a single NF node.
pub const EXAMPLE4: &str = include_str!("../fixtures/example4.crn");

/// Two linkage classes with three NF nodes between them.
pub const EXAMPLE5: &str = include_str!("../fixtures/example5.crn");

pub const ALL: [(&str, &str); 4] = [
    ("schmitz.crn", SCHMITZ),
    ("schmitz_sub.crn", SCHMITZ_SUB),
    ("example4.crn", EXAMPLE4),
    ("example5.crn", EXAMPLE5),
];
