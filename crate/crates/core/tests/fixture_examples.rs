use plk_core::independence::{finest_independent, independent_wr_cf};
use plk_core::kinetics::classify_nodes;
use plk_core::wrcf::{wr_cf_search, SearchLimits, SearchMode, SearchStatus};
use plk_core::{fixtures, parse_crn};

fn labels(groups: &[&[&str]]) -> Vec<Vec<String>> {
    groups.iter().map(|g| g.iter().map(|s| s.to_string()).collect()).collect()
}

#[test]
fn example5_splits_every_nf_node() {
    let doc = parse_crn(fixtures::EXAMPLE5).unwrap();
    let net = &doc.network;
    let nf: Vec<String> =
        classify_nodes(net, &doc.kinetics).unwrap().nf_nodes().iter().map(|&c| net.complex_label(c)).collect();
    assert_eq!(nf, ["X1", "X3", "X9"]);
    let expected = labels(&[
        &["R1", "R2", "R3"],
        &["R4", "R5", "R6", "R7"],
        &["R8", "R9", "R10", "R11"],
        &["R12", "R13"],
        &["R14", "R15"],
    ]);
    for mode in [SearchMode::Exhaustive, SearchMode::Greedy] {
        let found = wr_cf_search(net, &doc.kinetics, mode, SearchLimits::default()).unwrap();
        assert_eq!(found.decomposition.unwrap().labels(net), expected, "{mode:?}");
    }
}

#[test]
fn schmitz_full_search() {
    let doc = parse_crn(fixtures::SCHMITZ).unwrap();
    let net = &doc.network;
    let found = wr_cf_search(net, &doc.kinetics, SearchMode::Exhaustive, SearchLimits::default()).unwrap();
    assert_eq!(
        found.decomposition.unwrap().labels(net),
        labels(&[&["r1", "r2", "r3", "r4"], &["r5", "r6", "r7", "r8"], &["r9", "r10", "r11", "r12", "r13"]])
    );
    // Ranks 2 + 3 + 3 exceed s = 5. Independent decompositions coarsen
    // land {r1–r4} / ocean {r5–r13}, and the ocean block keeps M1's two
    // CF-subsets together.
    assert_eq!(
        finest_independent(net).decomposition.labels(net),
        labels(&[&["r1", "r2", "r3", "r4"], &["r5", "r6", "r7", "r8", "r9", "r10", "r11", "r12", "r13"]])
    );
    let ind = independent_wr_cf(net, &doc.kinetics, SearchLimits::default()).unwrap();
    assert_eq!(ind.canonical_independent, Some(false));
    assert_eq!(ind.status, SearchStatus::NotFoundProven);
}

#[test]
fn schmitz_sub_is_independent() {
    let doc = parse_crn(fixtures::SCHMITZ_SUB).unwrap();
    let ind = independent_wr_cf(&doc.network, &doc.kinetics, SearchLimits::default()).unwrap();
    assert_eq!(ind.status, SearchStatus::Found);
    assert_eq!(ind.canonical_independent, Some(true));
}
