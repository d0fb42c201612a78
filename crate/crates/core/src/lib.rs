//! Reaction network analysis for power-law kinetic systems.
//!
//! The central question is whether a network with non-factorizable
//! kinetics (branching reactions from one reactant with different kinetic
//! orders) can be split into weakly reversible subnetworks that are each
//! complex-factorizable, and what that buys for the positive equilibria.
//!
//! ```
//! use plk_core::fixtures;
//! use plk_core::io::parse_crn;
//! use plk_core::wrcf::{wr_cf_search, SearchLimits, SearchMode};
//!
//! let doc = parse_crn(fixtures::SCHMITZ_SUB).unwrap();
//! let found = wr_cf_search(&doc.network, &doc.kinetics, SearchMode::Exhaustive, SearchLimits::default()).unwrap();
//! let labels = found.decomposition.unwrap().labels(&doc.network);
//! assert_eq!(labels, [["r1", "r2", "r3", "r4"], ["r5", "r6", "r7", "r8"]]);
//! ```

pub mod cycles;
pub mod decomposition;
pub mod digraph;
pub mod equilibria;
pub mod fixtures;
pub mod independence;
pub mod io;
pub mod kinetic;
pub mod kinetics;
pub mod linalg;
pub mod network;
pub mod wrcf;

pub use decomposition::{profile, Decomposition, DecompositionProfile};
pub use io::{parse_crn, render_crn, CrnDocument, CrnError};
pub use kinetics::{KineticOrderMatrix, RateVector};
pub use linalg::{Matrix, Rational, Subspace};
pub use network::Network;

/// Guide chapters, compiled as doctests so the book stays runnable.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub struct Introduction;
    #[doc = include_str!("../../../book/src/networks.md")]
    pub struct Networks;
    #[doc = include_str!("../../../book/src/kinetics.md")]
    pub struct Kinetics;
    #[doc = include_str!("../../../book/src/decompositions.md")]
    pub struct Decompositions;
    #[doc = include_str!("../../../book/src/wr-cf-search.md")]
    pub struct WrCfSearch;
    #[doc = include_str!("../../../book/src/kinetic-complexes.md")]
    pub struct KineticComplexes;
    #[doc = include_str!("../../../book/src/equilibria.md")]
    pub struct Equilibria;
    #[doc = include_str!("../../../book/src/cli.md")]
    pub struct Cli;
}
