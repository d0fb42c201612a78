//! `plk`: command-line analysis of power-law kinetic reaction networks.
//!
//! Exit codes: 0 success, 1 negative analysis result, 2 input error,
//! 3 resource limit.

mod report;

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use plk_core::decomposition::{decomposition_from_labels, profile, trivial_decomposition, Decomposition};
use plk_core::equilibria::{
    apply_main_theorem, corollary_check, find_equilibrium_numeric, Certification, EquilibriaError,
    EquilibriumParametrization, HypothesisStatus, SolveOptions, TheoremReport,
};
use plk_core::independence::{finest_independent, independent_wr_cf};
use plk_core::io::{parse_blocks, parse_point};
use plk_core::kinetic::{induced_decomposition, kinetic_counts_check, kinetic_network, KineticNetworkError};
use plk_core::kinetics::{classify_nodes, classify_system, sfrf_eval};
use plk_core::wrcf::{wr_cf_search, SearchLimits, SearchMode, SearchStatus};
use plk_core::{parse_crn, CrnDocument, Network, RateVector};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::{json, Value};

use report::{block_labels, blocks_json, digest, profile_json, subspace_json, yes_no, Fail, Outcome};

#[derive(Parser)]
#[command(name = "plk", version, about = "Decompositions and equilibria of power-law kinetic reaction networks")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for numeric samplers.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Greedy,
    Exhaustive,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct DecomposeTarget {
    /// Weakly reversible CF-decomposition.
    #[arg(long)]
    wr_cf: bool,
    /// Finest independent decomposition.
    #[arg(long)]
    independent: bool,
    /// Independent weakly reversible CF-decomposition.
    #[arg(long)]
    independent_wr_cf: bool,
}

#[derive(Args)]
struct Limits {
    #[arg(long, value_enum, default_value_t = Mode::Exhaustive)]
    mode: Mode,
    /// Cap on simple cycles enumerated per root.
    #[arg(long)]
    max_cycles: Option<usize>,
    /// Cap on backtracking nodes of the exhaustive search.
    #[arg(long)]
    max_branches: Option<usize>,
}

impl Limits {
    fn search_limits(&self) -> SearchLimits {
        let mut limits = SearchLimits::default();
        if let Some(c) = self.max_cycles {
            limits.max_cycles = c;
        }
        if let Some(b) = self.max_branches {
            limits.max_branches = b;
        }
        limits
    }

    fn search_mode(&self) -> SearchMode {
        match self.mode {
            Mode::Greedy => SearchMode::Greedy,
            Mode::Exhaustive => SearchMode::Exhaustive,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Network summary, kinetics class and NF nodes.
    Analyze { file: PathBuf },
    /// CF-subsets of every reactant complex.
    Classify { file: PathBuf },
    /// Search for a decomposition.
    Decompose {
        file: PathBuf,
        #[command(flatten)]
        target: DecomposeTarget,
        #[command(flatten)]
        limits: Limits,
    },
    /// The kinetic complex network and, optionally, an induced decomposition.
    KineticComplexes {
        file: PathBuf,
        /// Block file, or `auto` for an exhaustive WR CF search.
        #[arg(long)]
        decomposition: Option<String>,
    },
    /// Certify a log-parametrized positive equilibria set.
    Plp {
        file: PathBuf,
        /// Block file, or `auto`. Defaults to the file's blocks, else the
        /// whole network.
        #[arg(long)]
        decomposition: Option<String>,
        /// Blocks (name or 1-based index) whose PLP property is assumed.
        #[arg(long, num_args = 1..)]
        assume_plp: Vec<String>,
        /// Number of sampled equilibria to report (needs rates).
        #[arg(long, default_value_t = 0)]
        samples: usize,
    },
    /// Evaluate the species formation rate at a point.
    CheckEquilibrium {
        file: PathBuf,
        #[arg(long)]
        point: PathBuf,
        #[arg(long, default_value_t = 1e-8)]
        tolerance: f64,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Analyze { .. } => "analyze",
            Command::Classify { .. } => "classify",
            Command::Decompose { .. } => "decompose",
            Command::KineticComplexes { .. } => "kinetic-complexes",
            Command::Plp { .. } => "plp",
            Command::CheckEquilibrium { .. } => "check-equilibrium",
        }
    }

    fn file(&self) -> &Path {
        match self {
            Command::Analyze { file }
            | Command::Classify { file }
            | Command::Decompose { file, .. }
            | Command::KineticComplexes { file, .. }
            | Command::Plp { file, .. }
            | Command::CheckEquilibrium { file, .. } => file,
        }
    }
}

fn read(path: &Path) -> Result<String, Fail> {
    std::fs::read_to_string(path).map_err(|e| Fail::Input(format!("{}: {e}", path.display())))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = cli.command.name();
    let path = cli.command.file().to_path_buf();
    let result = read(&path).and_then(|text| {
        let doc = parse_crn(&text).map_err(|e| Fail::Input(format!("{}: {e}", path.display())))?;
        let outcome = run(&cli, &doc)?;
        Ok((digest(&text), outcome))
    });
    match result {
        Ok((sha, outcome)) => {
            match cli.format {
                Format::Text => {
                    for w in &outcome.warnings {
                        eprintln!("warning: {w}");
                    }
                    emit(&outcome.text);
                }
                Format::Json => {
                    let report = json!({
                        "command": name,
                        "input": { "file": path.display().to_string(), "sha256": sha },
                        "results": outcome.json,
                        "warnings": outcome.warnings,
                        "exit_code": outcome.code,
                    });
                    emit_json(&report);
                }
            }
            ExitCode::from(outcome.code)
        }
        Err(fail) => {
            let (code, message) = fail.parts();
            match cli.format {
                Format::Text => eprintln!("error: {message}"),
                Format::Json => {
                    let report = json!({ "command": name, "error": message, "exit_code": code });
                    emit_json(&report);
                }
            }
            ExitCode::from(code)
        }
    }
}

/// Writes to stdout, ignoring a closed pipe (`plk ... | head`).
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn emit_json(report: &Value) {
    emit(&(serde_json::to_string_pretty(report).expect("values serialize") + "\n"));
}

fn run(cli: &Cli, doc: &CrnDocument) -> Result<Outcome, Fail> {
    match &cli.command {
        Command::Analyze { .. } => analyze(doc),
        Command::Classify { .. } => classify(doc),
        Command::Decompose { target, limits, .. } => {
            if target.wr_cf {
                decompose_wr_cf(doc, limits)
            } else if target.independent {
                decompose_independent(doc)
            } else {
                decompose_independent_wr_cf(doc, limits)
            }
        }
        Command::KineticComplexes { decomposition, .. } => kinetic_complexes(doc, decomposition.as_deref()),
        Command::Plp { decomposition, assume_plp, samples, .. } => {
            plp(doc, decomposition.as_deref(), assume_plp, *samples, cli.seed)
        }
        Command::CheckEquilibrium { point, tolerance, .. } => check_equilibrium(doc, point, *tolerance),
    }
}

fn cf_subsets_text(net: &Network, subsets: &[Vec<usize>]) -> String {
    subsets.iter().map(|s| format!("{{{}}}", block_labels(net, s).join(", "))).collect::<Vec<_>>().join(" | ")
}

fn analyze(doc: &CrnDocument) -> Result<Outcome, Fail> {
    let net = &doc.network;
    let s = net.summarize();
    let system = classify_system(net, &doc.kinetics).map_err(Fail::input)?;
    let nodes = classify_nodes(net, &doc.kinetics).map_err(Fail::input)?;
    let nf: Vec<_> = nodes.nodes.iter().filter(|n| n.is_nf()).collect();
    let classes = net.linkage_classes();
    let kinetic =
        net.is_cycle_terminal().then(|| kinetic_network(net, &doc.kinetics)).transpose().map_err(Fail::input)?;

    let mut text = String::new();
    writeln!(text, "network: {} species, {} complexes, {} reactions", s.species, s.complexes, s.reactions).unwrap();
    writeln!(
        text,
        "linkage classes: l = {} (strong {}, terminal {})",
        s.linkage_classes, s.strong_linkage_classes, s.terminal_strong_linkage_classes
    )
    .unwrap();
    writeln!(text, "rank s = {}, deficiency δ = {}", s.rank, s.deficiency).unwrap();
    writeln!(text, "weakly reversible: {}", yes_no(s.weakly_reversible)).unwrap();
    for (i, class) in classes.iter().enumerate() {
        writeln!(
            text,
            "  class {}: {} reactions, Eulerian: {}",
            i + 1,
            class.reactions.len(),
            yes_no(net.is_eulerian(class))
        )
        .unwrap();
    }
    writeln!(text, "kinetics: {} (mass action: {})", system.kind, yes_no(system.mass_action)).unwrap();
    if nf.is_empty() {
        writeln!(text, "NF nodes: none").unwrap();
    } else {
        writeln!(text, "NF nodes:").unwrap();
        for n in &nf {
            writeln!(text, "  {}: {}", net.complex_label(n.complex), cf_subsets_text(net, &n.cf_subsets)).unwrap();
        }
    }
    match &kinetic {
        Some(kn) => writeln!(
            text,
            "kinetic complexes: ñ = {}, l̃ = {}, s̃ = {}, δ̃ = {}",
            kn.summary.complexes,
            kn.summary.linkage_classes,
            kn.summary.rank,
            kn.deficiency()
        )
        .unwrap(),
        None => writeln!(text, "kinetic complexes: unavailable (not cycle terminal)").unwrap(),
    }

    let json = json!({
        "summary": s,
        "linkage_classes": classes.iter().map(|c| json!({
            "complexes": c.complexes.iter().map(|&k| net.complex_label(k)).collect::<Vec<_>>(),
            "reactions": block_labels(net, &c.reactions),
            "eulerian": net.is_eulerian(c),
        })).collect::<Vec<_>>(),
        "kinetics": system.kind.to_string(),
        "mass_action": system.mass_action,
        "span_surjective": system.span_surjective,
        "nf_nodes": nf.iter().map(|n| json!({
            "complex": net.complex_label(n.complex),
            "cf_subsets": blocks_json(net, &n.cf_subsets),
        })).collect::<Vec<_>>(),
        "kinetic_complexes": kinetic.as_ref().map(|kn| json!({
            "n": kn.summary.complexes,
            "l": kn.summary.linkage_classes,
            "s": kn.summary.rank,
            "deficiency": kn.deficiency(),
        })),
    });
    Ok(Outcome::new(json, text))
}

fn classify(doc: &CrnDocument) -> Result<Outcome, Fail> {
    let net = &doc.network;
    let system = classify_system(net, &doc.kinetics).map_err(Fail::input)?;
    let nodes = classify_nodes(net, &doc.kinetics).map_err(Fail::input)?;
    let mut text = String::new();
    writeln!(text, "kinetics: {}", system.kind).unwrap();
    for n in &nodes.nodes {
        writeln!(
            text,
            "{} {}: {}",
            if n.is_nf() { "NF" } else { "CF" },
            net.complex_label(n.complex),
            cf_subsets_text(net, &n.cf_subsets)
        )
        .unwrap();
    }
    let json = json!({
        "kinetics": system.kind.to_string(),
        "mass_action": system.mass_action,
        "span_surjective": system.span_surjective,
        "nodes": nodes.nodes.iter().map(|n| json!({
            "complex": net.complex_label(n.complex),
            "nf": n.is_nf(),
            "cf_subsets": blocks_json(net, &n.cf_subsets),
        })).collect::<Vec<_>>(),
    });
    Ok(Outcome::new(json, text))
}

fn status_code(status: SearchStatus) -> u8 {
    match status {
        SearchStatus::Found => 0,
        SearchStatus::NotFoundProven | SearchStatus::NotFoundGreedy => 1,
        SearchStatus::ResourceLimit => 3,
    }
}

fn status_name(status: SearchStatus) -> &'static str {
    match status {
        SearchStatus::Found => "found",
        SearchStatus::NotFoundProven => "not_found_proven",
        SearchStatus::NotFoundGreedy => "not_found_greedy",
        SearchStatus::ResourceLimit => "resource_limit",
    }
}

fn write_blocks(text: &mut String, net: &Network, d: &Decomposition) {
    for (i, b) in d.blocks().iter().enumerate() {
        writeln!(text, "  block {}: {}", i + 1, block_labels(net, b).join(", ")).unwrap();
    }
}

fn write_profile(text: &mut String, net: &Network, d: &Decomposition) -> Result<Value, Fail> {
    let p = profile(net, d).map_err(Fail::input)?;
    let ranks: Vec<String> = p.block_ranks.iter().map(usize::to_string).collect();
    writeln!(
        text,
        "independent: {} (ranks {} = {} vs s = {}), incidence independent: {}, bi-independent: {}",
        yes_no(p.independent),
        ranks.join(" + "),
        p.block_ranks.iter().sum::<usize>(),
        p.rank,
        yes_no(p.incidence_independent),
        yes_no(p.bi_independent)
    )
    .unwrap();
    let common: Vec<String> = p.common_complexes.iter().map(|&c| net.complex_label(c)).collect();
    writeln!(text, "common complexes C_D: {{{}}}", common.join(", ")).unwrap();
    writeln!(text, "zero-deficiency blocks: {}", yes_no(p.zero_deficiency)).unwrap();
    Ok(profile_json(net, &p))
}

fn decompose_wr_cf(doc: &CrnDocument, limits: &Limits) -> Result<Outcome, Fail> {
    let net = &doc.network;
    let found = wr_cf_search(net, &doc.kinetics, limits.search_mode(), limits.search_limits()).map_err(Fail::input)?;
    let mut text = String::new();
    let mode = match found.mode {
        SearchMode::Greedy => "greedy",
        SearchMode::Exhaustive => "exhaustive",
    };
    writeln!(text, "weakly reversible CF-decomposition ({mode}): {}", status_name(found.status)).unwrap();
    if let Some(reason) = &found.reason {
        writeln!(text, "reason: {reason}").unwrap();
    }
    let profile = match &found.decomposition {
        Some(d) => {
            write_blocks(&mut text, net, d);
            Some(write_profile(&mut text, net, d)?)
        }
        None => None,
    };
    let eulerian: Vec<usize> = found.eulerian_nf_classes.iter().map(|c| c + 1).collect();
    if !eulerian.is_empty() {
        writeln!(text, "Eulerian linkage classes with NF nodes: {eulerian:?}").unwrap();
    }
    writeln!(text, "cycles enumerated: {}, branches: {}", found.stats.cycles_enumerated, found.stats.branches).unwrap();
    let json = json!({
        "mode": mode,
        "status": status_name(found.status),
        "reason": found.reason,
        "blocks": found.decomposition.as_ref().map(|d| blocks_json(net, d.blocks())),
        "profile": profile,
        "eulerian_nf_classes": eulerian,
        "stats": found.stats,
    });
    Ok(Outcome::new(json, text).with_code(status_code(found.status)))
}

fn decompose_independent(doc: &CrnDocument) -> Result<Outcome, Fail> {
    let net = &doc.network;
    let fine = finest_independent(net);
    let g = &fine.graph;
    let vertex = |v: usize| net.reaction(g.basis[v]).label.clone();
    let mut text = String::new();
    writeln!(text, "finest independent decomposition: {} block(s)", fine.decomposition.len()).unwrap();
    write_blocks(&mut text, net, &fine.decomposition);
    let basis: Vec<String> = (0..g.vertex_count()).map(vertex).collect();
    writeln!(text, "coordinate graph: basis {{{}}}", basis.join(", ")).unwrap();
    for &(a, b) in &g.edges {
        writeln!(text, "  {} -- {}", vertex(a), vertex(b)).unwrap();
    }
    writeln!(text, "connected: {}", yes_no(g.is_connected())).unwrap();
    let json = json!({
        "blocks": blocks_json(net, fine.decomposition.blocks()),
        "trivial": fine.is_trivial(),
        "coordinate_graph": {
            "basis": basis,
            "edges": g.edges.iter().map(|&(a, b)| [vertex(a), vertex(b)]).collect::<Vec<_>>(),
            "components": g.components.iter().map(|c| c.iter().map(|&v| vertex(v)).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "connected": g.is_connected(),
        },
    });
    Ok(Outcome::new(json, text))
}

fn decompose_independent_wr_cf(doc: &CrnDocument, limits: &Limits) -> Result<Outcome, Fail> {
    let net = &doc.network;
    let mut warnings = Vec::new();
    if matches!(limits.mode, Mode::Greedy) {
        warnings.push("--mode greedy is ignored; the independent search is exhaustive".to_string());
    }
    let found = independent_wr_cf(net, &doc.kinetics, limits.search_limits()).map_err(Fail::input)?;
    let mut text = String::new();
    writeln!(text, "independent weakly reversible CF-decomposition: {}", status_name(found.status)).unwrap();
    if let Some(reason) = &found.reason {
        writeln!(text, "reason: {reason}").unwrap();
    }
    if let (Some(c), Some(ind)) = (&found.canonical, found.canonical_independent) {
        writeln!(text, "coarse WR CF-decomposition ({}independent):", if ind { "" } else { "not " }).unwrap();
        write_blocks(&mut text, net, c);
    }
    let profile = match &found.decomposition {
        Some(d) => {
            writeln!(text, "result:").unwrap();
            write_blocks(&mut text, net, d);
            Some(write_profile(&mut text, net, d)?)
        }
        None => None,
    };
    let json = json!({
        "status": status_name(found.status),
        "reason": found.reason,
        "blocks": found.decomposition.as_ref().map(|d| blocks_json(net, d.blocks())),
        "canonical": found.canonical.as_ref().map(|d| blocks_json(net, d.blocks())),
        "canonical_independent": found.canonical_independent,
        "profile": profile,
        "stats": found.stats,
    });
    Ok(Outcome::new(json, text).with_code(status_code(found.status)).with_warnings(warnings))
}

/// `--decomposition` argument: a block file or `auto`.
fn resolve_decomposition(doc: &CrnDocument, arg: &str) -> Result<Decomposition, Fail> {
    let net = &doc.network;
    if arg == "auto" {
        let found =
            wr_cf_search(net, &doc.kinetics, SearchMode::Exhaustive, SearchLimits::default()).map_err(Fail::input)?;
        return match found.status {
            SearchStatus::Found => Ok(found.decomposition.expect("found")),
            SearchStatus::ResourceLimit => Err(Fail::Limit(found.reason.unwrap_or_default())),
            _ => Err(Fail::Negative(format!(
                "no weakly reversible CF-decomposition: {}",
                found.reason.unwrap_or_default()
            ))),
        };
    }
    let path = Path::new(arg);
    let text = read(path)?;
    let blocks = parse_blocks(&text, net).map_err(|e| Fail::Input(format!("{}: {e}", path.display())))?;
    let labels: Vec<Vec<String>> = blocks.into_iter().map(|(_, b)| b).collect();
    decomposition_from_labels(net, &labels).map_err(|e| Fail::Input(format!("{}: {e}", path.display())))
}

fn kinetic_error(e: KineticNetworkError) -> Fail {
    match e {
        KineticNetworkError::NotCycleTerminal(_) => Fail::Negative(e.to_string()),
        KineticNetworkError::Kinetics(_) => Fail::input(e),
    }
}

fn kinetic_complexes(doc: &CrnDocument, decomposition: Option<&str>) -> Result<Outcome, Fail> {
    let net = &doc.network;
    let kn = kinetic_network(net, &doc.kinetics).map_err(kinetic_error)?;
    let counts = kinetic_counts_check(net, &doc.kinetics).map_err(kinetic_error)?;
    let s = &kn.summary;
    let mut text = String::new();
    writeln!(
        text,
        "kinetic complexes: ñ = {}, r̃ = {}, l̃ = {}, s̃ = {}, δ̃ = {}",
        s.complexes,
        s.reactions,
        s.linkage_classes,
        s.rank,
        kn.deficiency()
    )
    .unwrap();
    for i in 0..kn.complexes.len() {
        let of: Vec<String> = (0..net.complex_count())
            .filter(|&y| kn.complexes_of[y].contains(&i))
            .map(|y| net.complex_label(y))
            .collect();
        writeln!(text, "  [{}] from {}", kn.complex_label(i), of.join(", ")).unwrap();
    }
    writeln!(text, "weakly reversible: {}", yes_no(s.weakly_reversible)).unwrap();
    writeln!(text, "counts: ñ = {} ≤ {}, r̃ = {} ≤ {}", counts.n_tilde, counts.n_bound, counts.r_tilde, counts.r_bound)
        .unwrap();

    let mut induced_json = Value::Null;
    if let Some(arg) = decomposition {
        let d = resolve_decomposition(doc, arg)?;
        let ind = induced_decomposition(net, &doc.kinetics, &d).map_err(kinetic_error)?;
        writeln!(text, "induced decomposition:").unwrap();
        write_blocks(&mut text, net, &d);
        writeln!(
            text,
            "  ñ_D = {}, l̃_D = {}, s̃_D = {}, δ(Ñ_D) = {}",
            ind.n_d(),
            ind.l_d(),
            ind.s_d(),
            ind.deficiency_d()
        )
        .unwrap();
        let opt = |b: Option<bool>| b.map_or("n/a", yes_no);
        writeln!(
            text,
            "  bi-level independent: {}, bi-level weakly reversible: {}, dim S_i = dim S̃_i: {}",
            opt(ind.bi_level_independent),
            opt(ind.bi_level_weakly_reversible),
            yes_no(ind.equal_block_ranks)
        )
        .unwrap();
        induced_json = json!({
            "blocks": blocks_json(net, d.blocks()),
            "n": ind.n_d(),
            "l": ind.l_d(),
            "s": ind.s_d(),
            "deficiency": ind.deficiency_d(),
            "is_decomposition": ind.is_decomposition,
            "bi_level_independent": ind.bi_level_independent,
            "bi_level_weakly_reversible": ind.bi_level_weakly_reversible,
            "bi_level_bi_independent": ind.bi_level_bi_independent,
            "equal_block_ranks": ind.equal_block_ranks,
            "block_summaries": ind.blocks.iter().map(|b| &b.summary).collect::<Vec<_>>(),
            "identities": ind.identities,
        });
    }
    let json = json!({
        "summary": s,
        "complexes": (0..kn.complexes.len()).map(|i| json!({
            "orders": kn.complex_label(i),
            "from": (0..net.complex_count()).filter(|&y| kn.complexes_of[y].contains(&i)).map(|y| net.complex_label(y)).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
        "reactions": kn.reactions.iter().map(|r| json!({
            "source": r.source,
            "target": r.target,
            "from": block_labels(net, &r.provenance),
        })).collect::<Vec<_>>(),
        "degenerate": block_labels(net, &kn.degenerate),
        "flux_space": subspace_json(&kn.flux_space),
        "counts": counts,
        "induced": induced_json,
    });
    Ok(Outcome::new(json, text))
}

fn block_index(doc: &CrnDocument, d: &Decomposition, name: &str) -> Result<usize, Fail> {
    if let Some(i) = doc.blocks.iter().position(|(n, _)| n == name) {
        // File blocks keep file order only when the decomposition came from
        // them; map through the first reaction to be safe.
        let first = doc.network.reaction_index(&doc.blocks[i].1[0]).expect("checked by parser");
        if let Some(j) = d.blocks().iter().position(|b| b.contains(&first)) {
            return Ok(j);
        }
    }
    match name.parse::<usize>() {
        Ok(k) if (1..=d.len()).contains(&k) => Ok(k - 1),
        _ => Err(Fail::Input(format!("--assume-plp: no block `{name}`"))),
    }
}

fn theorem_error(e: EquilibriaError) -> Fail {
    match e {
        EquilibriaError::NoSuchBlock(_) | EquilibriaError::Dimension { .. } | EquilibriaError::NonPositive(_) => {
            Fail::input(e)
        }
        _ => Fail::Negative(e.to_string()),
    }
}

fn hypothesis_mark(s: HypothesisStatus) -> &'static str {
    match s {
        HypothesisStatus::Pass => "pass",
        HypothesisStatus::Fail => "FAIL",
        HypothesisStatus::Assumed => "assumed",
    }
}

fn plp(
    doc: &CrnDocument,
    decomposition: Option<&str>,
    assume: &[String],
    samples: usize,
    seed: u64,
) -> Result<Outcome, Fail> {
    let net = &doc.network;
    let d = match decomposition {
        Some(arg) => resolve_decomposition(doc, arg)?,
        None => match doc.decomposition() {
            Some(d) => d.map_err(Fail::input)?,
            None => trivial_decomposition(net),
        },
    };
    let assumed: Vec<usize> = assume.iter().map(|a| block_index(doc, &d, a)).collect::<Result<_, _>>()?;
    let theorem = apply_main_theorem(net, &doc.kinetics, &d, &assumed).map_err(theorem_error)?;
    let corollary = corollary_check(net, &doc.kinetics, &d, &assumed).map_err(theorem_error)?;
    let chosen: &TheoremReport = if theorem.applicable { &theorem } else { &corollary };
    let mut warnings = Vec::new();

    let mut text = String::new();
    writeln!(text, "decomposition:").unwrap();
    write_blocks(&mut text, net, &d);
    for (label, report) in [("main theorem", &theorem), ("corollary", &corollary)] {
        writeln!(text, "{label}: {}", if report.applicable { "applicable" } else { "not applicable" }).unwrap();
        for h in &report.hypotheses {
            writeln!(text, "  [{}] {}: {}", hypothesis_mark(h.status), h.name, h.detail).unwrap();
        }
    }
    let mut certs = Vec::new();
    for (i, c) in chosen.block_certificates.iter().enumerate() {
        let entry = match c {
            Some(Certification::Certified(cert)) => {
                let kind = serde_json::to_value(cert.kind).expect("serializable");
                writeln!(
                    text,
                    "block {}: {} with dim P_E,i = {}",
                    i + 1,
                    kind.as_str().unwrap_or("?"),
                    cert.subspace.dim()
                )
                .unwrap();
                json!({ "block": i + 1, "certified": true, "kind": cert.kind, "dim": cert.subspace.dim(), "justification": cert.justification })
            }
            Some(Certification::NotCertified { reason }) => {
                writeln!(text, "block {}: not certified ({reason})", i + 1).unwrap();
                json!({ "block": i + 1, "certified": false, "reason": reason })
            }
            None => {
                writeln!(text, "block {}: not examined", i + 1).unwrap();
                json!({ "block": i + 1, "certified": false, "reason": "not examined" })
            }
        };
        certs.push(entry);
    }
    let mut sample_json = Value::Null;
    if let Some(p_e) = &chosen.p_e {
        let perp = chosen.p_e_perp().expect("P_E present");
        writeln!(text, "P_E = Σ S̃_i: dim {} (P_E^⊥: dim {})", p_e.dim(), perp.dim()).unwrap();
        if samples > 0 {
            sample_json = sample_equilibria(doc, p_e.clone(), samples, seed, &mut text, &mut warnings)?;
        }
    }
    let json = json!({
        "blocks": blocks_json(net, d.blocks()),
        "theorem": { "applicable": theorem.applicable, "hypotheses": theorem.hypotheses },
        "corollary": { "applicable": corollary.applicable, "hypotheses": corollary.hypotheses },
        "block_certificates": certs,
        "p_e": chosen.p_e.as_ref().map(subspace_json),
        "p_e_perp": chosen.p_e_perp().as_ref().map(subspace_json),
        "samples": sample_json,
    });
    let code = if chosen.applicable { 0 } else { 1 };
    Ok(Outcome::new(json, text).with_code(code).with_warnings(warnings))
}

fn sample_equilibria(
    doc: &CrnDocument,
    p_e: plk_core::Subspace,
    count: usize,
    seed: u64,
    text: &mut String,
    warnings: &mut Vec<String>,
) -> Result<Value, Fail> {
    let net = &doc.network;
    let Some(rates) = &doc.rates else {
        warnings.push("no rate lines; sampling skipped".into());
        return Ok(Value::Null);
    };
    let mut rng = StdRng::seed_from_u64(seed);
    let m = net.species_count();
    let mut starts = vec![vec![1.0; m]];
    starts.extend((0..8).map(|_| (0..m).map(|_| rng.random_range(0.1..10.0)).collect()));
    let found = find_equilibrium_numeric(net, &doc.kinetics, rates, &starts, None, SolveOptions::default())
        .map_err(theorem_error)?;
    let Some(eq) = found else {
        warnings.push("no positive equilibrium found numerically; sampling skipped".into());
        return Ok(Value::Null);
    };
    let param = EquilibriumParametrization::new(p_e, eq.x.clone()).map_err(theorem_error)?;
    let mut points = Vec::new();
    writeln!(text, "sampled equilibria (seed {seed}):").unwrap();
    for _ in 0..count {
        let x = param.sample(&mut rng, 1.0);
        let residual = max_abs(&sfrf_eval(net, &doc.kinetics, rates, &x).map_err(Fail::input)?);
        let shown: Vec<String> = x.iter().map(|v| format!("{v:.6e}")).collect();
        writeln!(text, "  [{}] residual {residual:.1e}", shown.join(", ")).unwrap();
        points.push(json!({ "x": x, "residual": residual }));
    }
    Ok(json!({ "reference": eq.x, "points": points }))
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn check_equilibrium(doc: &CrnDocument, point: &Path, tolerance: f64) -> Result<Outcome, Fail> {
    let net = &doc.network;
    let text_in = read(point)?;
    let x = parse_point(&text_in, net.species()).map_err(|e| Fail::Input(format!("{}: {e}", point.display())))?;
    if let Some(j) = x.iter().position(|v| v.is_nan() || *v <= 0.0) {
        return Err(Fail::Input(format!("{}: value for `{}` is not positive", point.display(), net.species()[j])));
    }
    let mut warnings = Vec::new();
    let rates = match &doc.rates {
        Some(r) => r.clone(),
        None => {
            warnings.push("no rate lines; using unit rate constants".into());
            RateVector::ones(net.reaction_count())
        }
    };
    let f = sfrf_eval(net, &doc.kinetics, &rates, &x).map_err(Fail::input)?;
    let residual = max_abs(&f);
    let equilibrium = residual < tolerance;
    let mut text = String::new();
    for (s, v) in net.species().iter().zip(&f) {
        writeln!(text, "d{s}/dt = {v:.6e}").unwrap();
    }
    writeln!(text, "max |f(x)| = {residual:.3e}; equilibrium (tol {tolerance:e}): {}", yes_no(equilibrium)).unwrap();
    let mut blocks_json = Value::Null;
    if let Some(d) = doc.decomposition() {
        let d = d.map_err(Fail::input)?;
        let mut per_block = Vec::new();
        for (i, sub) in d.subnetworks().iter().enumerate() {
            let fb = sfrf_eval(
                &sub.network,
                &doc.kinetics.restrict(&sub.reaction_map),
                &rates.restrict(&sub.reaction_map),
                &x,
            )
            .map_err(Fail::input)?;
            let r = max_abs(&fb);
            writeln!(text, "  block {}: max |f_i(x)| = {r:.3e}", i + 1).unwrap();
            per_block.push(json!({ "block": i + 1, "residual": r, "equilibrium": r < tolerance }));
        }
        blocks_json = Value::Array(per_block);
    }
    let json = json!({
        "point": x,
        "rates": rates.values(),
        "species_formation_rate": f,
        "residual": residual,
        "tolerance": tolerance,
        "equilibrium": equilibrium,
        "blocks": blocks_json,
    });
    Ok(Outcome::new(json, text).with_code(if equilibrium { 0 } else { 1 }).with_warnings(warnings))
}
