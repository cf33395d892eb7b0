//! Cavity field modes and the physical configuration.
//!
//! A massive scalar field confined to [0, L] with Dirichlet walls has the
//! discrete sine modes sin(k_n x) / sqrt(omega_n L) with k_n = n pi / L and
//! omega_n = sqrt(k_n^2 + m^2). A detector of finite size a0 couples to each
//! mode through the smearing factor f_n = 2 / ((a0 k_n)^2 + 1), the Fourier
//! transform of its exponential ground-state profile at momentum k_n. All
//! quantities are dimensionless numbers in natural units (hbar = c = e = 1).

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Hard cap on mode indices for table construction (memory bound).
pub const DEFAULT_MODE_CAP: usize = 10_000_000;

/// Cavity and detector parameters in natural units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicsConfig {
    /// Cavity length L (> 0).
    pub l: f64,
    /// Field mass m (>= 0).
    pub m: f64,
    /// Coupling constant lambda (dimensionless, >= 0).
    pub lambda: f64,
    /// Detector energy gap Omega (> 0); the ground level sits at zero.
    pub omega: f64,
    /// Relative strength alpha of the state-preserving (field-squared)
    /// interaction term against the state-flipping one. Any real value.
    pub alpha: f64,
    /// Detector smearing length a0 (>= 0; 0 is the pointlike limit).
    pub a0: f64,
}

impl PhysicsConfig {
    pub fn new(l: f64, m: f64, lambda: f64, omega: f64, alpha: f64, a0: f64) -> Result<Self> {
        let cfg = PhysicsConfig {
            l,
            m,
            lambda,
            omega,
            alpha,
            a0,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        fn check(ok: bool, msg: String) -> Result<()> {
            if ok {
                Ok(())
            } else {
                Err(Error::Config(msg))
            }
        }
        check(
            self.l.is_finite() && self.l > 0.0,
            format!("cavity length L must be finite and > 0, got {}", self.l),
        )?;
        check(
            self.m.is_finite() && self.m >= 0.0,
            format!("field mass m must be finite and >= 0, got {}", self.m),
        )?;
        check(
            self.lambda.is_finite() && self.lambda >= 0.0,
            format!("coupling lambda must be finite and >= 0, got {}", self.lambda),
        )?;
        check(
            self.omega.is_finite() && self.omega > 0.0,
            format!("energy gap Omega must be finite and > 0, got {}", self.omega),
        )?;
        check(
            self.alpha.is_finite(),
            format!("alpha must be finite, got {}", self.alpha),
        )?;
        check(
            self.a0.is_finite() && self.a0 >= 0.0,
            format!("smearing length a0 must be finite and >= 0, got {}", self.a0),
        )
    }
}

/// One field mode: index, wavenumber, frequency, and smearing factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    pub n: usize,
    pub k: f64,
    pub omega: f64,
    pub f: f64,
}

fn ensure_index(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::ModeIndex)
    } else {
        Ok(())
    }
}

/// Wavenumber k_n = n pi / L of the n-th Dirichlet mode.
pub fn wavenumber(n: usize, cfg: &PhysicsConfig) -> Result<f64> {
    ensure_index(n)?;
    Ok(n as f64 * PI / cfg.l)
}

/// Frequency omega_n = sqrt(k_n^2 + m^2); strictly increasing in n.
pub fn frequency(n: usize, cfg: &PhysicsConfig) -> Result<f64> {
    let k = wavenumber(n, cfg)?;
    Ok((k * k + cfg.m * cfg.m).sqrt())
}

/// Smearing factor f_n = 2 / ((a0 k_n)^2 + 1).
///
/// Equals 2 in the pointlike limit a0 = 0 and decreases monotonically in n
/// otherwise; this decay is what renders the otherwise divergent mode sums
/// finite.
pub fn smearing_factor(n: usize, cfg: &PhysicsConfig) -> Result<f64> {
    let k = wavenumber(n, cfg)?;
    let ak = cfg.a0 * k;
    Ok(2.0 / (ak * ak + 1.0))
}

/// Modes n = 1..=n_max under the default index cap.
pub fn mode_table(cfg: &PhysicsConfig, n_max: usize) -> Result<Vec<Mode>> {
    mode_table_capped(cfg, n_max, DEFAULT_MODE_CAP)
}

/// Modes n = 1..=n_max with an explicit cap on n_max.
pub fn mode_table_capped(cfg: &PhysicsConfig, n_max: usize, cap: usize) -> Result<Vec<Mode>> {
    ensure_index(n_max)?;
    if n_max > cap {
        return Err(Error::ModeCap {
            requested: n_max,
            cap,
        });
    }
    (1..=n_max)
        .map(|n| {
            Ok(Mode {
                n,
                k: wavenumber(n, cfg)?,
                omega: frequency(n, cfg)?,
                f: smearing_factor(n, cfg)?,
            })
        })
        .collect()
}

/// sin(pi t) with exact zeros at integer t.
///
/// Mode phases are rational multiples of pi (k_n x = pi * n x / L), so
/// reducing the argument modulo 2 before calling libm keeps Dirichlet nodes
/// exact: positions x = 0, x = L, and the even modes at x = L/2 all yield
/// exactly 0.0 rather than float dust of order n * eps.
pub(crate) fn sin_pi(t: f64) -> f64 {
    let u = t.rem_euclid(2.0);
    if u <= 0.5 {
        (PI * u).sin()
    } else if u <= 1.5 {
        (PI * (1.0 - u)).sin()
    } else {
        -((PI * (2.0 - u)).sin())
    }
}
