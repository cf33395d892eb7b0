//! Physical observables of the detector-cavity system as truncated mode sums.
//!
//! Every quantity here is a series over the cavity modes with the common
//! weight f_n^2 sin^2(k_n x) / (omega_n L):
//!
//! * first-order (state-preserving) energy shift
//!   `E1 = (alpha lambda^2 / Omega L) sum f_n^2 sin^2(k_n x) / omega_n`
//! * second-order (state-flipping) shift, always attractive,
//!   `E2 = -(lambda^2 / L) sum f_n^2 sin^2(k_n x) / (omega_n (omega_n + Omega))`
//! * the full Casimir-Polder potential E1 + E2 combined term-wise into
//!   `E_CP = (lambda^2 / L) sum f_n^2 sin^2(k_n x) / (omega_n (omega_n + Omega))
//!   * [(alpha - 1) + alpha omega_n / Omega]`
//! * excitation probability after a rectangular interaction window sigma,
//!   its long-window time average, the universal low-frequency profile
//!   F(x) = sum p_n(x) with p_n = lambda^2 f_n^2 sin^2(k_n x) / (omega_n L Omega^2),
//!   both first-subleading-order expansions, and the Casimir-Polder force as
//!   the term-wise spatial derivative of E_CP.
//!
//! The proportionality E_CP ~ (Omega (alpha - 1) / 2) p_av connects the
//! potential to the averaged excitation probability and is exposed through
//! `proportionality_constant` / `estimate_cp_from_pav`.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::cavity::{sin_pi, PhysicsConfig};
use crate::error::{Error, Result};
use crate::series::{sum_fixed, sum_series, SeriesResult, TruncationPolicy};

/// Selector for the sweepable observables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Observable {
    FirstOrderEnergy,
    SecondOrderEnergy,
    CasimirPolderEnergy,
    /// Excitation probability after an interaction window of length sigma.
    ExcitationProbability { sigma: f64 },
    /// Long-window time average of the excitation probability.
    AveragedExcitation,
    /// Universal profile shared by potential and excitation probability.
    UniversalFunction,
    /// Force -dE_CP/dx, differentiated term by term.
    CasimirPolderForce,
    /// First-subleading-order expansion of the Casimir-Polder potential.
    LowFreqCasimirPolder,
    /// First-subleading-order expansion of the averaged excitation.
    LowFreqAveragedExcitation,
}

impl Observable {
    /// Column label used in emitted profiles.
    pub fn label(&self) -> &'static str {
        match self {
            Observable::FirstOrderEnergy => "e1",
            Observable::SecondOrderEnergy => "e2",
            Observable::CasimirPolderEnergy => "e_cp",
            Observable::ExcitationProbability { .. } => "p_exc",
            Observable::AveragedExcitation => "p_av",
            Observable::UniversalFunction => "universal",
            Observable::CasimirPolderForce => "force",
            Observable::LowFreqCasimirPolder => "e_cp_lowfreq",
            Observable::LowFreqAveragedExcitation => "p_av_lowfreq",
        }
    }

    /// Force is a derivative and only defined strictly between the walls;
    /// everything else vanishes exactly at the walls and includes them.
    fn open_interval(&self) -> bool {
        matches!(self, Observable::CasimirPolderForce)
    }

    /// Divergence guards for the pointlike limit a0 = 0.
    ///
    /// E1 and the alpha omega_n / Omega piece of E_CP (and of the force)
    /// carry a harmonic tail without smearing, so they refuse a0 = 0 unless
    /// alpha = 0 removes the offending piece; the universal profile and both
    /// low-frequency expansions contain the same tail with no alpha to
    /// cancel it. The excitation probabilities decay as n^-3 and stay finite
    /// for a pointlike detector.
    fn check_params(&self, cfg: &PhysicsConfig) -> Result<()> {
        let pointlike = cfg.a0 == 0.0;
        match self {
            Observable::FirstOrderEnergy
            | Observable::CasimirPolderEnergy
            | Observable::CasimirPolderForce => {
                if pointlike && cfg.alpha != 0.0 {
                    return Err(Error::PointlikeDivergence {
                        quantity: self.label(),
                    });
                }
            }
            Observable::UniversalFunction
            | Observable::LowFreqCasimirPolder
            | Observable::LowFreqAveragedExcitation => {
                if pointlike {
                    return Err(Error::PointlikeDivergence {
                        quantity: self.label(),
                    });
                }
            }
            Observable::ExcitationProbability { sigma } => {
                if sigma.is_nan() || *sigma < 0.0 {
                    return Err(Error::NegativeSigma(*sigma));
                }
            }
            Observable::SecondOrderEnergy | Observable::AveragedExcitation => {}
        }
        Ok(())
    }

    fn check_position(&self, x: f64, cfg: &PhysicsConfig) -> Result<()> {
        let inside = if self.open_interval() {
            x > 0.0 && x < cfg.l
        } else {
            (0.0..=cfg.l).contains(&x)
        };
        if !inside || !x.is_finite() {
            return Err(Error::Domain {
                quantity: self.label(),
                x,
                lo: 0.0,
                hi: cfg.l,
            });
        }
        Ok(())
    }

    /// The n-th series term at position x.
    fn term(&self, cfg: &PhysicsConfig, x: f64, n: usize) -> f64 {
        match self {
            Observable::FirstOrderEnergy => first_order_term(cfg, x, n),
            Observable::SecondOrderEnergy => second_order_term(cfg, x, n),
            Observable::CasimirPolderEnergy => cp_term_with_gap(cfg, x, n, cfg.omega),
            Observable::ExcitationProbability { sigma } => {
                excitation_term(cfg, x, n, *sigma)
            }
            Observable::AveragedExcitation => pav_term_with_gap(cfg, x, n, cfg.omega),
            Observable::UniversalFunction => universal_term(cfg, x, n),
            Observable::CasimirPolderForce => force_term(cfg, x, n),
            Observable::LowFreqCasimirPolder => low_freq_cp_term(cfg, x, n),
            Observable::LowFreqAveragedExcitation => low_freq_pav_term(cfg, x, n),
        }
    }

    /// Adaptive truncated sum under `policy`.
    pub fn evaluate(
        &self,
        x: f64,
        cfg: &PhysicsConfig,
        policy: &TruncationPolicy,
    ) -> Result<SeriesResult> {
        cfg.validate()?;
        self.check_params(cfg)?;
        self.check_position(x, cfg)?;
        sum_series(|n| self.term(cfg, x, n), policy)
    }

    /// Brute-force partial sum of exactly `terms` terms in double-double
    /// accumulation, no early stopping.
    ///
    /// Partial sums are entire in x, so this path accepts the closed
    /// interval [0, L] even for the force.
    pub fn evaluate_fixed(&self, x: f64, cfg: &PhysicsConfig, terms: usize) -> Result<f64> {
        cfg.validate()?;
        self.check_params(cfg)?;
        if !x.is_finite() || !(0.0..=cfg.l).contains(&x) {
            return Err(Error::Domain {
                quantity: self.label(),
                x,
                lo: 0.0,
                hi: cfg.l,
            });
        }
        sum_fixed(|n| self.term(cfg, x, n), terms)
    }
}

#[inline]
fn mode_parts(cfg: &PhysicsConfig, n: usize) -> (f64, f64, f64) {
    let k = n as f64 * PI / cfg.l;
    let omega = (k * k + cfg.m * cfg.m).sqrt();
    let f = 2.0 / ((cfg.a0 * k) * (cfg.a0 * k) + 1.0);
    (k, omega, f * f)
}

#[inline]
fn sine_squared(cfg: &PhysicsConfig, x: f64, n: usize) -> f64 {
    let s = sin_pi(n as f64 * (x / cfg.l));
    s * s
}

fn first_order_term(cfg: &PhysicsConfig, x: f64, n: usize) -> f64 {
    let (_, omega, f2) = mode_parts(cfg, n);
    cfg.alpha * cfg.lambda * cfg.lambda / (cfg.omega * cfg.l) * f2 * sine_squared(cfg, x, n)
        / omega
}

fn second_order_term(cfg: &PhysicsConfig, x: f64, n: usize) -> f64 {
    let (_, omega, f2) = mode_parts(cfg, n);
    -(cfg.lambda * cfg.lambda / cfg.l) * f2 * sine_squared(cfg, x, n)
        / (omega * (omega + cfg.omega))
}

/// Casimir-Polder term with the detector gap overridden; the fidelity maps
/// drive this at gap = omega_{2K+1}.
pub fn cp_term_with_gap(cfg: &PhysicsConfig, x: f64, n: usize, gap: f64) -> f64 {
    let (_, omega, f2) = mode_parts(cfg, n);
    cfg.lambda * cfg.lambda / cfg.l * f2 * sine_squared(cfg, x, n) / (omega * (omega + gap))
        * ((cfg.alpha - 1.0) + cfg.alpha * omega / gap)
}

/// Averaged-excitation term with the detector gap overridden.
pub fn pav_term_with_gap(cfg: &PhysicsConfig, x: f64, n: usize, gap: f64) -> f64 {
    let (_, omega, f2) = mode_parts(cfg, n);
    2.0 * cfg.lambda * cfg.lambda / cfg.l * f2 * sine_squared(cfg, x, n)
        / (omega * (omega + gap) * (omega + gap))
}

fn excitation_term(cfg: &PhysicsConfig, x: f64, n: usize, sigma: f64) -> f64 {
    let (_, omega, f2) = mode_parts(cfg, n);
    let window = (0.5 * sigma * (omega + cfg.omega)).sin();
    4.0 * cfg.lambda * cfg.lambda / cfg.l * f2 * sine_squared(cfg, x, n) / omega * window
        * window
        / ((omega + cfg.omega) * (omega + cfg.omega))
}

fn universal_term(cfg: &PhysicsConfig, x: f64, n: usize) -> f64 {
    let (_, omega, f2) = mode_parts(cfg, n);
    cfg.lambda * cfg.lambda / (cfg.l * cfg.omega * cfg.omega) * f2 * sine_squared(cfg, x, n)
        / omega
}

fn force_term(cfg: &PhysicsConfig, x: f64, n: usize) -> f64 {
    let (k, omega, f2) = mode_parts(cfg, n);
    // d/dx sin^2(k x) = k sin(2 k x)
    let s2x = sin_pi(2.0 * (n as f64 * (x / cfg.l)));
    -(cfg.lambda * cfg.lambda / cfg.l) * f2 * k * s2x / (omega * (omega + cfg.omega))
        * ((cfg.alpha - 1.0) + cfg.alpha * omega / cfg.omega)
}

fn low_freq_cp_term(cfg: &PhysicsConfig, x: f64, n: usize) -> f64 {
    let (_, omega, f2) = mode_parts(cfg, n);
    let p_n = cfg.lambda * cfg.lambda / (cfg.l * cfg.omega * cfg.omega) * f2
        * sine_squared(cfg, x, n)
        / omega;
    cfg.omega * p_n * ((cfg.alpha - 1.0) + omega / cfg.omega)
}

fn low_freq_pav_term(cfg: &PhysicsConfig, x: f64, n: usize) -> f64 {
    let (_, omega, f2) = mode_parts(cfg, n);
    let p_n = cfg.lambda * cfg.lambda / (cfg.l * cfg.omega * cfg.omega) * f2
        * sine_squared(cfg, x, n)
        / omega;
    2.0 * p_n * (1.0 - 2.0 * omega / cfg.omega)
}

/// First-order energy shift E1(x); requires a0 > 0 unless alpha = 0.
pub fn first_order_energy(
    x: f64,
    cfg: &PhysicsConfig,
    policy: &TruncationPolicy,
) -> Result<SeriesResult> {
    Observable::FirstOrderEnergy.evaluate(x, cfg, policy)
}

/// Second-order energy shift E2(x) <= 0.
pub fn second_order_energy(
    x: f64,
    cfg: &PhysicsConfig,
    policy: &TruncationPolicy,
) -> Result<SeriesResult> {
    Observable::SecondOrderEnergy.evaluate(x, cfg, policy)
}

/// Full second-order Casimir-Polder potential; agrees with E1 + E2.
pub fn casimir_polder_energy(
    x: f64,
    cfg: &PhysicsConfig,
    policy: &TruncationPolicy,
) -> Result<SeriesResult> {
    Observable::CasimirPolderEnergy.evaluate(x, cfg, policy)
}

/// Excitation probability after a rectangular window of length sigma >= 0.
pub fn excitation_probability(
    x: f64,
    sigma: f64,
    cfg: &PhysicsConfig,
    policy: &TruncationPolicy,
) -> Result<SeriesResult> {
    Observable::ExcitationProbability { sigma }.evaluate(x, cfg, policy)
}

/// Time-averaged excitation probability (the sin^2 window replaced by 1/2).
pub fn averaged_excitation_probability(
    x: f64,
    cfg: &PhysicsConfig,
    policy: &TruncationPolicy,
) -> Result<SeriesResult> {
    Observable::AveragedExcitation.evaluate(x, cfg, policy)
}

/// Universal profile F(x) = sum p_n(x).
pub fn universal_function(
    x: f64,
    cfg: &PhysicsConfig,
    policy: &TruncationPolicy,
) -> Result<SeriesResult> {
    Observable::UniversalFunction.evaluate(x, cfg, policy)
}

/// Casimir-Polder force -dE_CP/dx on the open interval (0, L).
pub fn cp_force(x: f64, cfg: &PhysicsConfig, policy: &TruncationPolicy) -> Result<SeriesResult> {
    Observable::CasimirPolderForce.evaluate(x, cfg, policy)
}

/// Low-frequency expansion of the Casimir-Polder potential.
pub fn low_freq_cp(
    x: f64,
    cfg: &PhysicsConfig,
    policy: &TruncationPolicy,
) -> Result<SeriesResult> {
    Observable::LowFreqCasimirPolder.evaluate(x, cfg, policy)
}

/// Low-frequency expansion of the averaged excitation probability.
pub fn low_freq_pav(
    x: f64,
    cfg: &PhysicsConfig,
    policy: &TruncationPolicy,
) -> Result<SeriesResult> {
    Observable::LowFreqAveragedExcitation.evaluate(x, cfg, policy)
}

/// Leading-order ratio E_CP / p_av = Omega (alpha - 1) / 2.
pub fn proportionality_constant(cfg: &PhysicsConfig) -> f64 {
    0.5 * cfg.omega * (cfg.alpha - 1.0)
}

/// Reconstruct the Casimir-Polder potential from a measured averaged
/// excitation probability.
pub fn estimate_cp_from_pav(p_av_value: f64, cfg: &PhysicsConfig) -> f64 {
    proportionality_constant(cfg) * p_av_value
}

/// A sampled observable over a position grid, with the configuration and
/// policy it was produced under.
#[derive(Debug, Clone)]
pub struct SpatialProfile {
    pub positions: Vec<f64>,
    pub values: Vec<f64>,
    pub converged: Vec<bool>,
    pub label: String,
    pub config: PhysicsConfig,
    pub policy: TruncationPolicy,
}

impl SpatialProfile {
    pub fn all_converged(&self) -> bool {
        self.converged.iter().all(|&c| c)
    }
}

/// Evaluate `obs` at every grid point. Grid points are independent and run
/// in parallel; assembly is ordered by grid index, so the result is
/// deterministic. A failing point aborts the sweep with its position
/// attached.
pub fn sweep(
    obs: Observable,
    grid: &[f64],
    cfg: &PhysicsConfig,
    policy: &TruncationPolicy,
) -> Result<SpatialProfile> {
    if grid.is_empty() {
        return Err(Error::Axis("sweep grid is empty".into()));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Axis("sweep grid must be strictly ascending".into()));
    }
    // validate sequentially so the first offending position is reported
    // deterministically, then evaluate in parallel
    cfg.validate()?;
    obs.check_params(cfg)?;
    for &x in grid {
        obs.check_position(x, cfg).map_err(|e| e.at(x))?;
    }
    let results: Vec<SeriesResult> = grid
        .par_iter()
        .map(|&x| obs.evaluate(x, cfg, policy).map_err(|e| e.at(x)))
        .collect::<Result<_>>()?;
    Ok(SpatialProfile {
        positions: grid.to_vec(),
        values: results.iter().map(|r| r.value).collect(),
        converged: results.iter().map(|r| r.converged).collect(),
        label: obs.label().to_string(),
        config: *cfg,
        policy: *policy,
    })
}

/// Evenly spaced grid with both endpoints pinned exactly.
pub fn linspace(start: f64, stop: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let step = (stop - start) / (points - 1) as f64;
            (0..points)
                .map(|i| {
                    if i + 1 == points {
                        stop
                    } else {
                        start + i as f64 * step
                    }
                })
                .collect()
        }
    }
}
