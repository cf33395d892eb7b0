//! Thomas-Fermi condensate density and density-averaged excited populations.
//!
//! A condensate of N atoms with Thomas-Fermi radius R centered at x0 has the
//! (transverse-integrated) single-particle density
//! `n(u; x0) = 15 N / (16 R) [1 - ((u - x0) / R)^2]^2`
//! inside |u - x0| <= R and zero outside; it integrates exactly to N. Reading
//! out the excited-state population of the whole cloud measures the
//! density-weighted average of the single-atom excitation probability,
//! `N_exc(x0) = integral p_av(u) n(u; x0) du`,
//! evaluated here by fixed-order Gauss-Legendre panels over the compact
//! support.

use rayon::prelude::*;

use crate::cavity::PhysicsConfig;
use crate::error::{Error, Result};
use crate::observables::{Observable, SpatialProfile};
use crate::quadrature::GaussLegendre;
use crate::series::TruncationPolicy;

/// Thomas-Fermi cloud parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BECConfig {
    /// Total atom number N (> 0). Only rescales populations linearly.
    pub n_atoms: f64,
    /// Thomas-Fermi radius R (> 0).
    pub r_tf: f64,
    /// Cloud center x0.
    pub center: f64,
}

impl BECConfig {
    pub fn new(n_atoms: f64, r_tf: f64, center: f64) -> Result<Self> {
        if !(n_atoms.is_finite() && n_atoms > 0.0) {
            return Err(Error::Config(format!(
                "atom number must be finite and > 0, got {n_atoms}"
            )));
        }
        if !(r_tf.is_finite() && r_tf > 0.0) {
            return Err(Error::Config(format!(
                "Thomas-Fermi radius must be finite and > 0, got {r_tf}"
            )));
        }
        if !center.is_finite() {
            return Err(Error::Config(format!("cloud center must be finite, got {center}")));
        }
        Ok(BECConfig {
            n_atoms,
            r_tf,
            center,
        })
    }

    fn recentered(&self, x0: f64) -> BECConfig {
        BECConfig { center: x0, ..*self }
    }
}

/// Quadrature layout for the support integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadratureSpec {
    /// Gauss-Legendre node count per panel (>= 2).
    pub order: usize,
    /// Number of equal panels over the support (>= 1).
    pub panels: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            order: 64,
            panels: 8,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.order < 2 {
            return Err(Error::Quadrature(format!(
                "order must be >= 2, got {}",
                self.order
            )));
        }
        if self.panels < 1 {
            return Err(Error::Quadrature(format!(
                "panels must be >= 1, got {}",
                self.panels
            )));
        }
        Ok(())
    }
}

/// Thomas-Fermi linear density at position u; zero outside the support and
/// continuous at its edges.
pub fn tf_density(u: f64, bec: &BECConfig) -> f64 {
    let d = (u - bec.center) / bec.r_tf;
    if d.abs() > 1.0 {
        return 0.0;
    }
    let q = 1.0 - d * d;
    15.0 * bec.n_atoms / (16.0 * bec.r_tf) * q * q
}

/// Density-averaged excited population with convergence bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExcitedPopulation {
    /// Expected number of excited atoms.
    pub value: f64,
    /// True when every mode sum under the quadrature nodes converged.
    pub converged: bool,
}

/// Expected excited-atom count for a cloud centered at `x0`.
///
/// The support [x0 - R, x0 + R] must fit inside the cavity (up to float
/// dust); admissible centers therefore run over [R, L - R].
fn check_support(x0: f64, r: f64, cavity: f64) -> Result<()> {
    let slack = 1e-12 * cavity;
    if !x0.is_finite() || x0 - r < -slack || x0 + r > cavity + slack {
        return Err(Error::SupportOverflow {
            lo: x0 - r,
            hi: x0 + r,
            cavity,
        });
    }
    Ok(())
}

pub fn excited_population(
    x0: f64,
    bec: &BECConfig,
    cfg: &PhysicsConfig,
    policy: &TruncationPolicy,
    quad: &QuadratureSpec,
) -> Result<ExcitedPopulation> {
    cfg.validate()?;
    quad.validate()?;
    let r = bec.r_tf;
    check_support(x0, r, cfg.l)?;
    let cloud = bec.recentered(x0);
    let lo = (x0 - r).max(0.0);
    let hi = (x0 + r).min(cfg.l);
    let rule = GaussLegendre::new(quad.order)?;

    let mut converged = true;
    let mut failure: Option<Error> = None;
    let value = rule.integrate_panels(lo, hi, quad.panels, |u| {
        match Observable::AveragedExcitation.evaluate(u, cfg, policy) {
            Ok(res) => {
                converged &= res.converged;
                res.value * tf_density(u, &cloud)
            }
            Err(e) => {
                if failure.is_none() {
                    failure = Some(e.at(u));
                }
                0.0
            }
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(ExcitedPopulation { value, converged })
}

/// Excited populations over a grid of cloud centers; centers are independent
/// and run in parallel with ordered, deterministic assembly.
pub fn population_sweep(
    centers: &[f64],
    bec: &BECConfig,
    cfg: &PhysicsConfig,
    policy: &TruncationPolicy,
    quad: &QuadratureSpec,
) -> Result<SpatialProfile> {
    if centers.is_empty() {
        return Err(Error::Axis("center grid is empty".into()));
    }
    if centers.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Axis("center grid must be strictly ascending".into()));
    }
    // deterministic first-offender reporting, as in observables::sweep
    for &x0 in centers {
        check_support(x0, bec.r_tf, cfg.l).map_err(|e| e.at(x0))?;
    }
    let results: Vec<ExcitedPopulation> = centers
        .par_iter()
        .map(|&x0| excited_population(x0, bec, cfg, policy, quad).map_err(|e| e.at(x0)))
        .collect::<Result<_>>()?;
    Ok(SpatialProfile {
        positions: centers.to_vec(),
        values: results.iter().map(|r| r.value).collect(),
        converged: results.iter().map(|r| r.converged).collect(),
        label: "n_exc".to_string(),
        config: *cfg,
        policy: *policy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::observables::averaged_excitation_probability;

    fn paper_cfg() -> PhysicsConfig {
        PhysicsConfig::new(1.0, 1e-3, 1e-2, 1.0, 2.0, 1e-2).unwrap()
    }

    fn assert_rel(a: f64, b: f64, tol: f64) {
        let scale = a.abs().max(b.abs());
        assert!(
            (a - b).abs() <= tol * scale,
            "a = {a:e}, b = {b:e}, rel = {:e}",
            (a - b).abs() / scale
        );
    }

    #[test]
    fn density_peak_edges_and_outside() {
        // binary-exact center and radius make the support edges exact
        let bec = BECConfig::new(250.0, 0.25, 0.5).unwrap();
        let peak = 15.0 * 250.0 / (16.0 * 0.25);
        assert_eq!(tf_density(0.5, &bec), peak);
        assert_eq!(tf_density(0.25, &bec), 0.0);
        assert_eq!(tf_density(0.75, &bec), 0.0);
        assert_eq!(tf_density(0.1, &bec), 0.0);
        assert_eq!(tf_density(0.9, &bec), 0.0);
        // continuity: approach the edge from inside
        assert!(tf_density(0.25 + 1e-9, &bec) < 1e-10 * peak);

        // decimal parameters leave only float dust at the edges
        let decimal = BECConfig::new(250.0, 0.05, 0.4).unwrap();
        let peak = tf_density(0.4, &decimal);
        assert!(tf_density(0.35, &decimal) <= 1e-25 * peak);
        assert!(tf_density(0.45, &decimal) <= 1e-25 * peak);
    }

    #[test]
    fn density_normalizes_to_atom_number() {
        let rule = GaussLegendre::new(64).unwrap();
        for (n_atoms, r) in [(1.0, 0.05), (2.5e5, 0.01), (42.0, 0.2)] {
            let bec = BECConfig::new(n_atoms, r, 0.5).unwrap();
            let integral =
                rule.integrate_panels(0.5 - r, 0.5 + r, 8, |u| tf_density(u, &bec));
            assert_rel(integral, n_atoms, 1e-10);
        }
    }

    #[test]
    fn config_validation() {
        assert!(BECConfig::new(0.0, 0.05, 0.5).is_err());
        assert!(BECConfig::new(1.0, 0.0, 0.5).is_err());
        assert!(BECConfig::new(1.0, -0.1, 0.5).is_err());
        assert!(BECConfig::new(1.0, 0.05, f64::NAN).is_err());
    }

    #[test]
    fn support_overflow_is_rejected() {
        let cfg = paper_cfg();
        let bec = BECConfig::new(1.0, 0.05, 0.5).unwrap();
        let policy = TruncationPolicy::default();
        let quad = QuadratureSpec::default();
        for x0 in [0.04, 0.96, -0.2, 1.2] {
            assert!(matches!(
                excited_population(x0, &bec, &cfg, &policy, &quad),
                Err(Error::SupportOverflow { .. })
            ));
        }
        // touching the wall is admissible
        assert!(excited_population(0.05, &bec, &cfg, &policy, &quad).is_ok());
        assert!(excited_population(0.95, &bec, &cfg, &policy, &quad).is_ok());
    }

    #[test]
    fn population_symmetric_in_center() {
        let cfg = paper_cfg();
        let bec = BECConfig::new(1.0, 0.05, 0.5).unwrap();
        let policy = TruncationPolicy::default();
        let quad = QuadratureSpec::default();
        for x0 in [0.05, 0.2, 0.35] {
            let a = excited_population(x0, &bec, &cfg, &policy, &quad).unwrap();
            let b = excited_population(cfg.l - x0, &bec, &cfg, &policy, &quad).unwrap();
            assert_rel(a.value, b.value, 1e-10);
        }
    }

    #[test]
    fn shrinking_cloud_recovers_pointwise_probability() {
        let cfg = paper_cfg();
        let policy = TruncationPolicy::default();
        let quad = QuadratureSpec::default();
        let x0 = 0.5;
        let pav = averaged_excitation_probability(x0, &cfg, &policy).unwrap().value;

        let tiny = BECConfig::new(1.0, 1e-4, x0).unwrap();
        let pop = excited_population(x0, &tiny, &cfg, &policy, &quad).unwrap();
        assert_rel(pop.value / tiny.n_atoms, pav, 1e-4);

        let mut prev = f64::INFINITY;
        for r in [0.05, 0.02, 0.01, 0.001] {
            let bec = BECConfig::new(1.0, r, x0).unwrap();
            let pop = excited_population(x0, &bec, &cfg, &policy, &quad).unwrap();
            let dev = (pop.value / bec.n_atoms - pav).abs();
            assert!(dev < prev, "R = {r}: {dev} not below {prev}");
            prev = dev;
        }
    }

    #[test]
    fn panel_quadrature_matches_trapezoid_reference() {
        let cfg = paper_cfg();
        let policy = TruncationPolicy::default();
        let quad = QuadratureSpec::default();
        let bec = BECConfig::new(3.0, 0.05, 0.3).unwrap();
        let x0 = 0.3;
        let fixed = excited_population(x0, &bec, &cfg, &policy, &quad).unwrap().value;

        // 1e5-point composite trapezoid over the support
        let lo = x0 - bec.r_tf;
        let hi = x0 + bec.r_tf;
        let points = 100_001usize;
        let h = (hi - lo) / (points - 1) as f64;
        let mut acc = 0.0;
        for i in 0..points {
            let u = if i + 1 == points { hi } else { lo + i as f64 * h };
            let w = if i == 0 || i + 1 == points { 0.5 } else { 1.0 };
            let p = averaged_excitation_probability(u, &cfg, &policy).unwrap().value;
            acc += w * p * tf_density(u, &bec);
        }
        let reference = acc * h;
        assert_rel(fixed, reference, 1e-8);
    }

    #[test]
    fn quadrature_refinement_is_converged() {
        let cfg = paper_cfg();
        let policy = TruncationPolicy::default();
        let bec = BECConfig::new(1.0, 0.05, 0.5).unwrap();
        let coarse = excited_population(0.5, &bec, &cfg, &policy, &QuadratureSpec::default())
            .unwrap()
            .value;
        let fine = excited_population(
            0.5,
            &bec,
            &cfg,
            &policy,
            &QuadratureSpec {
                order: 128,
                panels: 8,
            },
        )
        .unwrap()
        .value;
        assert_rel(coarse, fine, 1e-8);
    }

    #[test]
    fn sweep_matches_single_evaluations() {
        let cfg = paper_cfg();
        let policy = TruncationPolicy::default();
        let quad = QuadratureSpec::default();
        let bec = BECConfig::new(1.0, 0.05, 0.5).unwrap();
        let centers = [0.05, 0.3, 0.5];
        let profile = population_sweep(&centers, &bec, &cfg, &policy, &quad).unwrap();
        assert!(profile.all_converged());
        for (i, &x0) in centers.iter().enumerate() {
            let single = excited_population(x0, &bec, &cfg, &policy, &quad).unwrap();
            assert_eq!(profile.values[i].to_bits(), single.value.to_bits());
        }
        // per-point errors carry the offending center
        let err = population_sweep(&[0.01, 0.5], &bec, &cfg, &policy, &quad).unwrap_err();
        match err {
            Error::At { x, .. } => assert_eq!(x, 0.01),
            other => panic!("expected positioned error, got {other}"),
        }
    }
}
