mod common;

use common::*;
use plk_core::decomposition::{equilibria_relation_check, linkage_class_decomposition};
use plk_core::equilibria::{certify_block_plp, find_equilibrium_numeric, EquilibriumParametrization, SolveOptions};
use plk_core::kinetic::{induced_decomposition, kinetic_counts_check, kinetic_network};
use plk_core::kinetics::{cfr_eval, sfrf_eval};
use plk_core::linalg::{ratio, to_f64, Matrix, Rational};
use plk_core::{KineticOrderMatrix, Network, RateVector};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// Strongly connected monospecies network whose branching reactions get
/// rows from a small shared palette, so that CF-subsets, repeated rows
/// across reactants and coinciding kinetic complexes all occur.
fn palette_system(seed: u64) -> (Network, KineticOrderMatrix) {
    let mut rng = StdRng::seed_from_u64(seed);
    let n = rng.random_range(2..=5usize);
    let vertices: Vec<usize> = (0..n).collect();
    let extra = rng.random_range(0..=n * (n - 2));
    let net = monospecies_network(&strongly_connected(&mut rng, &vertices, extra));
    let m = net.species_count();
    let palette: Vec<Vec<Rational>> =
        (0..4).map(|_| (0..m).map(|_| ratio(rng.random_range(0..=2), 1)).collect()).collect();
    let rows = (0..net.reaction_count()).map(|_| palette[rng.random_range(0..palette.len())].clone()).collect();
    (net, KineticOrderMatrix::new(Matrix::from_rows(m, rows).unwrap()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn kinetic_complex_counts(seed in any::<u64>()) {
        let (net, f) = palette_system(seed);
        let report = kinetic_counts_check(&net, &f).unwrap();
        prop_assert!(report.complexes_match);
        prop_assert!(report.per_reaction_match, "{:?}", report.per_reaction);
        prop_assert!(report.bounds_hold, "{:?}", report);
        // Weakly reversible input: every kinetic reaction lies on a cycle.
        let kn = kinetic_network(&net, &f).unwrap();
        let all: Vec<usize> = (0..kn.reactions.len()).collect();
        prop_assert!(block_weakly_reversible(&kn.arcs(), &all));
    }

    #[test]
    fn sfrf_factors_through_complex_formation_rate(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let (net, f) = random_zero_deficiency_rdk(&mut rng, 4);
        let k = RateVector::new((0..net.reaction_count()).map(|_| rng.random_range(0.1..5.0)).collect()).unwrap();
        let x: Vec<f64> = (0..net.species_count()).map(|_| rng.random_range(0.1..5.0)).collect();
        let species_rate = sfrf_eval(&net, &f, &k, &x).unwrap();
        let g = cfr_eval(&net, &f, &k, &x).unwrap();
        for (i, fi) in species_rate.iter().enumerate() {
            let yg: f64 = (0..net.complex_count()).map(|c| to_f64(net.y().get(i, c)) * g[c]).sum();
            let scale = 1.0 + fi.abs().max(yg.abs());
            prop_assert!((fi - yg).abs() <= 1e-12 * scale, "{} vs {}", fi, yg);
        }
    }

    #[test]
    fn induced_identities_hold_under_their_hypotheses(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let (net, f) = random_zero_deficiency_rdk(&mut rng, 4);
        let d = linkage_class_decomposition(&net);
        let induced = induced_decomposition(&net, &f, &d).unwrap();
        let ids = &induced.identities;
        if ids.hypotheses_hold {
            prop_assert!(ids.n_minus_l_match && ids.rank_match && ids.deficiency_match, "{:?}", ids);
        }
        prop_assert!(induced.is_decomposition);
    }

    /// Equilibria of an independent decomposition: points on the PLP
    /// parametrization equilibrate every block.
    #[test]
    fn equilibria_of_independent_blocks(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let (net, f) = random_zero_deficiency_rdk(&mut rng, 4);
        let Some(cert) = certify_block_plp(&net, &f).unwrap().certificate().cloned() else {
            return Ok(());
        };
        let k = RateVector::new((0..net.reaction_count()).map(|_| rng.random_range(0.5..2.0)).collect()).unwrap();
        let starts = vec![vec![1.0; net.species_count()]];
        let Some(eq) = find_equilibrium_numeric(&net, &f, &k, &starts, None, SolveOptions::default()).unwrap() else {
            return Ok(());
        };
        let param = EquilibriumParametrization::new(cert.subspace, eq.x).unwrap();
        let points: Vec<Vec<f64>> = (0..5).map(|_| param.sample(&mut rng, 0.5)).collect();
        let d = linkage_class_decomposition(&net);
        let report = equilibria_relation_check(&net, &f, &k, &d, &points, 1e-8).unwrap();
        prop_assert!(report.independent);
        prop_assert!(report.inclusion_holds);
        prop_assert_eq!(report.equality_holds, Some(true));
        prop_assert!(report.points.iter().all(|p| p.equilibrium_of_whole));
    }
}
