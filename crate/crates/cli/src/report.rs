//! Shared output plumbing: outcomes, failures and JSON renderings that
//! use labels and exact rational strings.

use plk_core::decomposition::DecompositionProfile;
use plk_core::linalg::format_rational;
use plk_core::{Network, Subspace};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub struct Outcome {
    pub json: Value,
    pub text: String,
    pub warnings: Vec<String>,
    pub code: u8,
}

impl Outcome {
    pub fn new(json: Value, text: String) -> Self {
        Outcome { json, text, warnings: Vec::new(), code: 0 }
    }

    pub fn with_code(mut self, code: u8) -> Self {
        self.code = code;
        self
    }

    pub fn with_warnings(mut self, warnings: Vec<String>) -> Self {
        self.warnings = warnings;
        self
    }
}

pub enum Fail {
    Input(String),
    Negative(String),
    Limit(String),
}

impl Fail {
    pub fn input(e: impl std::fmt::Display) -> Self {
        Fail::Input(e.to_string())
    }

    pub fn parts(&self) -> (u8, &str) {
        match self {
            Fail::Input(m) => (2, m),
            Fail::Negative(m) => (1, m),
            Fail::Limit(m) => (3, m),
        }
    }
}

pub fn digest(text: &str) -> String {
    Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

pub fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn block_labels(net: &Network, reactions: &[usize]) -> Vec<String> {
    reactions.iter().map(|&q| net.reaction(q).label.clone()).collect()
}

pub fn blocks_json(net: &Network, blocks: &[Vec<usize>]) -> Value {
    blocks.iter().map(|b| block_labels(net, b)).collect()
}

pub fn subspace_json(s: &Subspace) -> Value {
    let basis: Vec<Vec<String>> = s.basis().iter().map(|v| v.iter().map(format_rational).collect()).collect();
    json!({ "dim": s.dim(), "basis": basis })
}

pub fn profile_json(net: &Network, p: &DecompositionProfile) -> Value {
    json!({
        "independent": p.independent,
        "incidence_independent": p.incidence_independent,
        "bi_independent": p.bi_independent,
        "weakly_reversible": p.weakly_reversible,
        "zero_deficiency": p.zero_deficiency,
        "common_complexes": p.common_complexes.iter().map(|&c| net.complex_label(c)).collect::<Vec<_>>(),
        "class": p.class,
        "rank": p.rank,
        "block_ranks": p.block_ranks,
        "deficiency": p.deficiency,
        "block_deficiencies": p.block_deficiencies,
    })
}
