//! Log-parametrized positive equilibria: per-block certificates, the
//! decomposition theorem that assembles them, and a numeric layer for
//! validating the result.
//!
//! A block is certified PLP when it is weakly reversible with deficiency
//! zero and kinetic-complex deficiency zero: every positive equilibrium is
//! then complex balanced and the complex-balanced set is
//! `{x : log x − log x* ∈ S̃^⊥}`. Failing that test never means the block is
//! not PLP, only that this sufficient condition does not apply.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::decomposition::Decomposition;
use crate::kinetic::{induced_decomposition, kinetic_network, KineticNetworkError};
use crate::kinetics::{classify_nodes, KineticOrderMatrix, KineticsError, RateVector};
use crate::linalg::{orthogonal_complement, subspace_sum, to_f64, Subspace};
use crate::network::Network;
use crate::wrcf::verify_wr_cf;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EquilibriaError {
    #[error(transparent)]
    Kinetics(#[from] KineticsError),
    #[error(transparent)]
    KineticNetwork(#[from] KineticNetworkError),
    #[error("block has NF node {0}; certificates need reactant-determined kinetics")]
    NotReactantDetermined(String),
    #[error("point has {found} coordinates, expected {expected}")]
    Dimension { expected: usize, found: usize },
    #[error("point coordinate {0} is not positive")]
    NonPositive(usize),
    #[error("block index {0} out of range")]
    NoSuchBlock(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CertificateKind {
    #[serde(rename = "PLP")]
    Plp,
    #[serde(rename = "CLP")]
    Clp,
    /// PLP and CLP with the same subspace.
    #[serde(rename = "bi-LP")]
    BiLp,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpCertificate {
    pub kind: CertificateKind,
    /// `P_E` (or `P_Z` for CLP).
    pub subspace: Subspace,
    pub justification: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certification {
    Certified(LpCertificate),
    NotCertified { reason: String },
}

impl Certification {
    pub fn certificate(&self) -> Option<&LpCertificate> {
        match self {
            Certification::Certified(c) => Some(c),
            Certification::NotCertified { .. } => None,
        }
    }
}

fn require_rdk(net: &Network, kinetics: &KineticOrderMatrix) -> Result<(), EquilibriaError> {
    let classes = classify_nodes(net, kinetics)?;
    if let Some(&y) = classes.nf_nodes().first() {
        return Err(EquilibriaError::NotReactantDetermined(net.complex_label(y)));
    }
    Ok(())
}

/// Weakly reversible, `δ = 0` and `δ_Ñ = 0` ⇒ PLP with `P_E = S̃`.
pub fn certify_block_plp(net: &Network, kinetics: &KineticOrderMatrix) -> Result<Certification, EquilibriaError> {
    require_rdk(net, kinetics)?;
    let summary = net.summarize();
    if !summary.weakly_reversible {
        return Ok(Certification::NotCertified { reason: "not weakly reversible".into() });
    }
    if summary.deficiency != 0 {
        return Ok(Certification::NotCertified { reason: format!("deficiency {} > 0", summary.deficiency) });
    }
    let kn = kinetic_network(net, kinetics)?;
    if kn.deficiency() != 0 {
        return Ok(Certification::NotCertified {
            reason: format!("kinetic complex deficiency {} > 0", kn.deficiency()),
        });
    }
    Ok(Certification::Certified(LpCertificate {
        kind: CertificateKind::Plp,
        subspace: kn.flux_space,
        justification: vec![
            "weakly reversible PL-RDK".into(),
            "kinetic complex deficiency 0: complex balanced for all rate constants, Z+ log-parametrized by S̃".into(),
            "deficiency 0: every positive equilibrium is complex balanced, so E+ = Z+".into(),
        ],
    }))
}

/// Weakly reversible and `δ_Ñ = 0` ⇒ CLP with `P_Z = S̃`; with `δ = 0` as
/// well the block is bi-LP.
pub fn certify_block_clp(net: &Network, kinetics: &KineticOrderMatrix) -> Result<Certification, EquilibriaError> {
    require_rdk(net, kinetics)?;
    let summary = net.summarize();
    if !summary.weakly_reversible {
        return Ok(Certification::NotCertified { reason: "not weakly reversible".into() });
    }
    let kn = kinetic_network(net, kinetics)?;
    if kn.deficiency() != 0 {
        return Ok(Certification::NotCertified {
            reason: format!("kinetic complex deficiency {} > 0", kn.deficiency()),
        });
    }
    let kind = if summary.deficiency == 0 { CertificateKind::BiLp } else { CertificateKind::Clp };
    Ok(Certification::Certified(LpCertificate {
        kind,
        subspace: kn.flux_space,
        justification: vec![
            "weakly reversible PL-RDK".into(),
            "kinetic complex deficiency 0: Z+ log-parametrized by S̃".into(),
        ],
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum HypothesisStatus {
    Pass,
    Fail,
    Assumed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Hypothesis {
    pub name: String,
    pub status: HypothesisStatus,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoremReport {
    pub applicable: bool,
    pub hypotheses: Vec<Hypothesis>,
    /// Per-block outcome of [`certify_block_plp`] (`None` for blocks that
    /// could not be examined, e.g. not PL-RDK).
    pub block_certificates: Vec<Option<Certification>>,
    /// `S̃_i` of each block.
    pub block_flux_spaces: Vec<Subspace>,
    /// `P_E = Σ S̃_i`, emitted only when applicable.
    pub p_e: Option<Subspace>,
}

impl TheoremReport {
    pub fn p_e_perp(&self) -> Option<Subspace> {
        self.p_e.as_ref().map(orthogonal_complement)
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Route {
    BiLevel,
    DimensionCount,
}

/// Bi-level independent, weakly reversible PL-RDK decomposition whose
/// blocks are PLP with `P_{E,i} = S̃_i` ⇒ the system is PLP with
/// `P_E = Σ S̃_i`. Blocks listed in `assume_plp` have the last hypothesis
/// taken on trust when it cannot be certified.
pub fn apply_main_theorem(
    net: &Network,
    kinetics: &KineticOrderMatrix,
    d: &Decomposition,
    assume_plp: &[usize],
) -> Result<TheoremReport, EquilibriaError> {
    theorem(net, kinetics, d, assume_plp, Route::BiLevel)
}

/// Same conclusion, with bi-level independence derived from independence
/// of the decomposition and `dim S_i = dim S̃_i` for every block.
pub fn corollary_check(
    net: &Network,
    kinetics: &KineticOrderMatrix,
    d: &Decomposition,
    assume_plp: &[usize],
) -> Result<TheoremReport, EquilibriaError> {
    theorem(net, kinetics, d, assume_plp, Route::DimensionCount)
}

fn pass(ok: bool) -> HypothesisStatus {
    if ok {
        HypothesisStatus::Pass
    } else {
        HypothesisStatus::Fail
    }
}

fn theorem(
    net: &Network,
    kinetics: &KineticOrderMatrix,
    d: &Decomposition,
    assume_plp: &[usize],
    route: Route,
) -> Result<TheoremReport, EquilibriaError> {
    kinetics.check(net)?;
    if let Some(&i) = assume_plp.iter().find(|&&i| i >= d.len()) {
        return Err(EquilibriaError::NoSuchBlock(i));
    }
    let mut hypotheses = Vec::new();
    let check = verify_wr_cf(net, kinetics, d);
    let not_wr: Vec<usize> = check
        .violations
        .iter()
        .filter_map(|v| match v {
            crate::wrcf::WrCfViolation::NotWeaklyReversible { block } => Some(*block),
            _ => None,
        })
        .collect();
    let not_rdk: Vec<usize> = check
        .violations
        .iter()
        .filter_map(|v| match v {
            crate::wrcf::WrCfViolation::NotCf { block, .. } => Some(*block),
            _ => None,
        })
        .collect();
    hypotheses.push(Hypothesis {
        name: "weakly reversible decomposition".into(),
        status: pass(not_wr.is_empty()),
        detail: if not_wr.is_empty() { "every block".into() } else { format!("blocks {not_wr:?} are not") },
    });
    hypotheses.push(Hypothesis {
        name: "PL-RDK blocks".into(),
        status: pass(not_rdk.is_empty()),
        detail: if not_rdk.is_empty() { "every block".into() } else { format!("blocks {not_rdk:?} have NF nodes") },
    });

    // Every block of a weakly reversible decomposition is cycle terminal;
    // otherwise kinetic complexes are unavailable and the remaining
    // hypotheses fail.
    let induced = if not_wr.is_empty() { Some(induced_decomposition(net, kinetics, d)?) } else { None };
    let block_flux_spaces: Vec<Subspace> =
        induced.as_ref().map(|ind| ind.blocks.iter().map(|b| b.flux_space.clone()).collect()).unwrap_or_default();

    match route {
        Route::BiLevel => {
            let ok = induced.as_ref().is_some_and(|ind| ind.bi_level_independent == Some(true));
            hypotheses.push(Hypothesis {
                name: "bi-level independent".into(),
                status: pass(ok),
                detail: match &induced {
                    Some(ind) if ind.is_decomposition => format!(
                        "Σ dim S_i = {} vs dim S = {}; Σ dim S̃_i = {} vs dim S̃_D = {}",
                        d.summaries().iter().map(|s| s.rank).sum::<usize>(),
                        net.rank(),
                        ind.blocks.iter().map(|b| b.summary.rank).sum::<usize>(),
                        ind.s_d()
                    ),
                    Some(_) => "induced covering is not a decomposition".into(),
                    None => "kinetic complexes unavailable".into(),
                },
            });
        }
        Route::DimensionCount => {
            let independent = d.summaries().iter().map(|s| s.rank).sum::<usize>() == net.rank();
            hypotheses.push(Hypothesis {
                name: "independent".into(),
                status: pass(independent),
                detail: format!(
                    "Σ dim S_i = {} vs dim S = {}",
                    d.summaries().iter().map(|s| s.rank).sum::<usize>(),
                    net.rank()
                ),
            });
            let equal = induced.as_ref().is_some_and(|ind| ind.equal_block_ranks);
            hypotheses.push(Hypothesis {
                name: "dim S_i = dim S̃_i".into(),
                status: pass(equal),
                detail: match &induced {
                    Some(ind) => format!(
                        "{:?} vs {:?}",
                        d.summaries().iter().map(|s| s.rank).collect::<Vec<_>>(),
                        ind.blocks.iter().map(|b| b.summary.rank).collect::<Vec<_>>()
                    ),
                    None => "kinetic complexes unavailable".into(),
                },
            });
        }
    }

    let mut block_certificates = Vec::new();
    let mut plp_ok = true;
    let mut plp_assumed = false;
    let mut details = Vec::new();
    for (i, sub) in d.subnetworks().iter().enumerate() {
        let f = kinetics.restrict(&sub.reaction_map);
        let cert = if not_rdk.contains(&i) { None } else { Some(certify_block_plp(&sub.network, &f)?) };
        let certified = cert.as_ref().and_then(Certification::certificate).is_some();
        if !certified {
            if assume_plp.contains(&i) && !not_rdk.contains(&i) {
                plp_assumed = true;
                details.push(format!("block {}: assumed", i + 1));
            } else {
                plp_ok = false;
                let reason = match &cert {
                    Some(Certification::NotCertified { reason }) => reason.clone(),
                    _ => "not PL-RDK".into(),
                };
                details.push(format!("block {}: not certified ({reason})", i + 1));
            }
        } else {
            details.push(format!("block {}: certified, dim {}", i + 1, block_flux_spaces[i].dim()));
        }
        block_certificates.push(cert);
    }
    hypotheses.push(Hypothesis {
        name: "blocks PLP with P_E,i = S̃_i".into(),
        status: if !plp_ok {
            HypothesisStatus::Fail
        } else if plp_assumed {
            HypothesisStatus::Assumed
        } else {
            HypothesisStatus::Pass
        },
        detail: details.join("; "),
    });

    let applicable = hypotheses.iter().all(|h| h.status != HypothesisStatus::Fail);
    let p_e = if applicable {
        let mut total = Subspace::zero(net.species_count());
        for s in &block_flux_spaces {
            total = subspace_sum(&total, s).expect("same ambient space");
        }
        Some(total)
    } else {
        None
    };
    Ok(TheoremReport { applicable, hypotheses, block_certificates, block_flux_spaces, p_e })
}

// --------------------------------------------------------------- numerics

fn check_point(m: usize, x: &[f64]) -> Result<(), EquilibriaError> {
    if x.len() != m {
        return Err(EquilibriaError::Dimension { expected: m, found: x.len() });
    }
    if let Some(i) = x.iter().position(|v| !(*v > 0.0 && v.is_finite())) {
        return Err(EquilibriaError::NonPositive(i));
    }
    Ok(())
}

/// Float matrix whose columns are an orthonormal basis of `s`.
fn orthonormal_basis(s: &Subspace) -> DMatrix<f64> {
    let m = s.ambient_dim();
    let mut cols: Vec<DVector<f64>> = Vec::new();
    for v in s.basis() {
        let mut w = DVector::from_iterator(m, v.iter().map(to_f64));
        for c in &cols {
            let proj = c.dot(&w);
            w -= c * proj;
        }
        let norm = w.norm();
        if norm > 1e-12 {
            cols.push(w / norm);
        }
    }
    if cols.is_empty() {
        DMatrix::zeros(m, 0)
    } else {
        DMatrix::from_columns(&cols)
    }
}

/// `E+ = {x > 0 : log x − log x* ∈ P_E^⊥}` around a reference point.
#[derive(Debug, Clone)]
pub struct EquilibriumParametrization {
    pub p_e: Subspace,
    pub x_star: Vec<f64>,
    p_e_basis: DMatrix<f64>,
    perp_basis: DMatrix<f64>,
}

impl EquilibriumParametrization {
    pub fn new(p_e: Subspace, x_star: Vec<f64>) -> Result<Self, EquilibriaError> {
        check_point(p_e.ambient_dim(), &x_star)?;
        let p_e_basis = orthonormal_basis(&p_e);
        let perp_basis = orthonormal_basis(&orthogonal_complement(&p_e));
        Ok(EquilibriumParametrization { p_e, x_star, p_e_basis, perp_basis })
    }

    /// Norm of the `P_E` component of `log x − log x*`.
    pub fn distance(&self, x: &[f64]) -> Result<f64, EquilibriaError> {
        check_point(self.x_star.len(), x)?;
        let d = DVector::from_iterator(x.len(), x.iter().zip(&self.x_star).map(|(a, b)| a.ln() - b.ln()));
        Ok((self.p_e_basis.transpose() * d).norm())
    }

    pub fn contains(&self, x: &[f64], tolerance: f64) -> Result<bool, EquilibriaError> {
        Ok(self.distance(x)? <= tolerance)
    }

    /// `exp(log x* + v)` for the given `v ∈ P_E^⊥` coordinates in an
    /// orthonormal basis of `P_E^⊥`.
    pub fn point(&self, coordinates: &[f64]) -> Vec<f64> {
        let v = &self.perp_basis * DVector::from_column_slice(coordinates);
        self.x_star.iter().zip(v.iter()).map(|(x, dv)| (x.ln() + dv).exp()).collect()
    }

    pub fn perp_dim(&self) -> usize {
        self.perp_basis.ncols()
    }

    /// A random member with coordinates uniform in `[-scale, scale]`.
    pub fn sample(&self, rng: &mut impl Rng, scale: f64) -> Vec<f64> {
        let c: Vec<f64> = (0..self.perp_dim()).map(|_| rng.random_range(-scale..=scale)).collect();
        self.point(&c)
    }
}

/// Positive points `x` with `x − anchor ∈ subspace`.
#[derive(Debug, Clone)]
pub struct CosetConstraint {
    pub subspace: Subspace,
    pub anchor: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolveOptions {
    pub max_iterations: usize,
    pub tolerance: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { max_iterations: 500, tolerance: 1e-10 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NumericEquilibrium {
    pub x: Vec<f64>,
    /// Max-norm of `f(x)`.
    pub residual: f64,
    pub iterations: usize,
}

/// Levenberg–Marquardt in `u = log x` on `[f(x); Cᵀ(x − anchor)]`, where
/// the columns of `C` span the orthogonal complement of the coset
/// direction. Without a constraint, the stoichiometric compatibility class
/// of each start is used. Returns the first start that converges; never
/// returns a point with residual above the tolerance.
pub fn find_equilibrium_numeric(
    net: &Network,
    kinetics: &KineticOrderMatrix,
    rates: &RateVector,
    starts: &[Vec<f64>],
    constraint: Option<&CosetConstraint>,
    options: SolveOptions,
) -> Result<Option<NumericEquilibrium>, EquilibriaError> {
    kinetics.check(net)?;
    let m = net.species_count();
    for x in starts {
        check_point(m, x)?;
    }
    if let Some(c) = constraint {
        check_point(m, &c.anchor)?;
    }
    let r = net.reaction_count();
    if rates.values().len() != r {
        return Err(KineticsError::RateLength { expected: r, found: rates.values().len() }.into());
    }
    let n_mat = DMatrix::from_fn(m, r, |i, q| to_f64(net.stoichiometric_matrix().get(i, q)));
    let f_mat = DMatrix::from_fn(r, m, |q, j| to_f64(kinetics.matrix().get(q, j)));
    let k = DVector::from_column_slice(rates.values());
    let (direction, fixed_anchor) = match constraint {
        Some(c) => (c.subspace.clone(), Some(c.anchor.clone())),
        None => (net.stoichiometric_subspace(), None),
    };
    let c_mat = orthonormal_basis(&orthogonal_complement(&direction));

    for start in starts {
        let anchor = DVector::from_column_slice(fixed_anchor.as_deref().unwrap_or(start));
        let target = c_mat.transpose() * &anchor;
        let u0 = DVector::from_iterator(m, start.iter().map(|v| v.ln()));
        if let Some(found) = levenberg_marquardt(&n_mat, &f_mat, &k, &c_mat, &target, u0, options) {
            return Ok(Some(found));
        }
    }
    Ok(None)
}

fn residual_at(
    n_mat: &DMatrix<f64>,
    f_mat: &DMatrix<f64>,
    k: &DVector<f64>,
    c_mat: &DMatrix<f64>,
    target: &DVector<f64>,
    u: &DVector<f64>,
) -> (DVector<f64>, DVector<f64>, DVector<f64>) {
    let rates = (f_mat * u).map(f64::exp).component_mul(k);
    let x = u.map(f64::exp);
    let f = n_mat * &rates;
    let g = c_mat.transpose() * &x - target;
    (f, g, rates)
}

fn levenberg_marquardt(
    n_mat: &DMatrix<f64>,
    f_mat: &DMatrix<f64>,
    k: &DVector<f64>,
    c_mat: &DMatrix<f64>,
    target: &DVector<f64>,
    mut u: DVector<f64>,
    options: SolveOptions,
) -> Option<NumericEquilibrium> {
    let m = u.len();
    let stack = |f: &DVector<f64>, g: &DVector<f64>| {
        let mut v = DVector::zeros(f.len() + g.len());
        v.rows_mut(0, f.len()).copy_from(f);
        v.rows_mut(f.len(), g.len()).copy_from(g);
        v
    };
    let (mut f, mut g, mut rates) = residual_at(n_mat, f_mat, k, c_mat, target, &u);
    let mut lambda = 1e-3;
    for iteration in 0..options.max_iterations {
        let res = stack(&f, &g);
        if f.amax() < options.tolerance && g.amax() < options.tolerance {
            return Some(NumericEquilibrium {
                x: u.iter().map(|v| v.exp()).collect(),
                residual: f.amax(),
                iterations: iteration,
            });
        }
        // ∂f/∂u = N · diag(rates) · F ; ∂g/∂u = Cᵀ · diag(x).
        let jf = n_mat * DMatrix::from_diagonal(&rates) * f_mat;
        let jg = c_mat.transpose() * DMatrix::from_diagonal(&u.map(f64::exp));
        let mut j = DMatrix::zeros(jf.nrows() + jg.nrows(), m);
        j.rows_mut(0, jf.nrows()).copy_from(&jf);
        j.rows_mut(jf.nrows(), jg.nrows()).copy_from(&jg);
        let jt = j.transpose();
        let jtj = &jt * &j;
        let grad = &jt * &res;
        let cost = res.norm_squared();
        let mut improved = false;
        for _ in 0..30 {
            let mut a = jtj.clone();
            for i in 0..m {
                a[(i, i)] += lambda * (1.0 + jtj[(i, i)]);
            }
            let Some(step) = a.lu().solve(&(-&grad)) else {
                lambda *= 10.0;
                continue;
            };
            let trial = &u + &step;
            if trial.iter().any(|v| !v.is_finite() || v.abs() > 700.0) {
                lambda *= 10.0;
                continue;
            }
            let (tf, tg, tr) = residual_at(n_mat, f_mat, k, c_mat, target, &trial);
            let trial_cost = stack(&tf, &tg).norm_squared();
            if trial_cost.is_finite() && trial_cost < cost {
                u = trial;
                f = tf;
                g = tg;
                rates = tr;
                lambda = (lambda / 3.0).max(1e-15);
                improved = true;
                break;
            }
            lambda *= 4.0;
        }
        if !improved {
            break;
        }
    }
    (f.amax() < options.tolerance && g.amax() < options.tolerance).then(|| NumericEquilibrium {
        x: u.iter().map(|v| v.exp()).collect(),
        residual: f.amax(),
        iterations: options.max_iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::trivial_decomposition;
    use rand::{rngs::StdRng, SeedableRng};

    fn pair() -> Network {
        Network::builder().simple("r1", &["A"], &["B"]).simple("r2", &["B"], &["A"]).build().unwrap()
    }

    #[test]
    fn reversible_pair_ratio_follows_rates() {
        let net = pair();
        let f = KineticOrderMatrix::mass_action(&net);
        let k = RateVector::new(vec![1.0, 2.0]).unwrap();
        let eq =
            find_equilibrium_numeric(&net, &f, &k, &[vec![1.0, 3.0]], None, SolveOptions::default()).unwrap().unwrap();
        // k1 x_A = k2 x_B on x_A + x_B = 4.
        assert!((eq.x[0] / eq.x[1] - 2.0).abs() < 1e-9);
        assert!((eq.x[0] + eq.x[1] - 4.0).abs() < 1e-9);
    }

    #[test]
    fn pair_is_certified_and_samples_are_equilibria() {
        let net = pair();
        let f = KineticOrderMatrix::mass_action(&net);
        let cert = certify_block_plp(&net, &f).unwrap();
        let cert = cert.certificate().unwrap();
        assert_eq!(cert.subspace.dim(), 1);
        let report = apply_main_theorem(&net, &f, &trivial_decomposition(&net), &[]).unwrap();
        assert!(report.applicable);
        let k = RateVector::ones(2);
        let param = EquilibriumParametrization::new(report.p_e.unwrap(), vec![1.0, 1.0]).unwrap();
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..20 {
            let x = param.sample(&mut rng, 2.0);
            assert!((x[0] - x[1]).abs() < 1e-9 * x[0].max(1.0));
            let res = crate::kinetics::sfrf_eval(&net, &f, &k, &x).unwrap();
            assert!(res.iter().all(|r| r.abs() < 1e-9));
        }
        assert!(param.contains(&[1.0, 1.0], 1e-12).unwrap());
        assert!(!param.contains(&[1.0, 2.0], 1e-6).unwrap());
    }

    #[test]
    fn one_way_reaction_is_not_certified() {
        let net = Network::builder().simple("r1", &["A"], &["B"]).build().unwrap();
        let f = KineticOrderMatrix::mass_action(&net);
        assert!(matches!(certify_block_plp(&net, &f).unwrap(), Certification::NotCertified { .. }));
    }

    #[test]
    fn assumed_blocks_are_marked() {
        // Deficiency one: A ⇌ B, 2A ⇌ 2B is weakly reversible but δ = 1.
        let net = Network::builder()
            .simple("r1", &["A"], &["B"])
            .simple("r2", &["B"], &["A"])
            .simple("r3", &["A", "A"], &["B", "B"])
            .simple("r4", &["B", "B"], &["A", "A"])
            .build()
            .unwrap();
        let f = KineticOrderMatrix::mass_action(&net);
        let d = trivial_decomposition(&net);
        assert!(!apply_main_theorem(&net, &f, &d, &[]).unwrap().applicable);
        let assumed = apply_main_theorem(&net, &f, &d, &[0]).unwrap();
        assert!(assumed.applicable);
        assert_eq!(assumed.hypotheses.last().unwrap().status, HypothesisStatus::Assumed);
    }
}
