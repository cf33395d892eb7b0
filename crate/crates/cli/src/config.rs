//! JSON run configuration.
//!
//! The schema is strict: unknown keys are rejected, since a silently ignored
//! typo in a physics parameter is the main operator hazard. Keys:
//!
//! `{"L", "m", "lambda", "Omega", "alpha", "a0",
//!   "policy": {"fidelity_tol", "min_terms", "max_terms", "consecutive_hits"},
//!   "grid": {"start", "stop", "points"},
//!   "bec": {"n_atoms", "r_tf"}}`
//!
//! `policy`, `grid` and `bec` are optional; `policy` fields default to the
//! library defaults, `grid` is required by the profile commands and `bec` by
//! the condensate command.

use serde::{Deserialize, Serialize};
use udw_cavity::{linspace, PhysicsConfig, TruncationPolicy};

use crate::failure::{Failure, EXIT_CONFIG};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(rename = "L")]
    pub l: f64,
    pub m: f64,
    pub lambda: f64,
    #[serde(rename = "Omega")]
    pub omega: f64,
    pub alpha: f64,
    pub a0: f64,
    #[serde(default)]
    pub policy: PolicySpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bec: Option<BecSpec>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolicySpec {
    #[serde(default = "defaults::fidelity_tol")]
    pub fidelity_tol: f64,
    #[serde(default = "defaults::min_terms")]
    pub min_terms: usize,
    #[serde(default = "defaults::max_terms")]
    pub max_terms: usize,
    #[serde(default = "defaults::consecutive_hits")]
    pub consecutive_hits: usize,
}

mod defaults {
    use udw_cavity::TruncationPolicy;

    pub fn fidelity_tol() -> f64 {
        TruncationPolicy::default().fidelity_tol
    }
    pub fn min_terms() -> usize {
        TruncationPolicy::default().min_terms
    }
    pub fn max_terms() -> usize {
        TruncationPolicy::default().max_terms
    }
    pub fn consecutive_hits() -> usize {
        TruncationPolicy::default().consecutive_hits
    }
}

impl Default for PolicySpec {
    fn default() -> Self {
        PolicySpec {
            fidelity_tol: defaults::fidelity_tol(),
            min_terms: defaults::min_terms(),
            max_terms: defaults::max_terms(),
            consecutive_hits: defaults::consecutive_hits(),
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BecSpec {
    pub n_atoms: f64,
    pub r_tf: f64,
}

impl RunConfig {
    pub fn physics(&self) -> Result<PhysicsConfig, Failure> {
        PhysicsConfig::new(self.l, self.m, self.lambda, self.omega, self.alpha, self.a0)
            .map_err(Failure::from)
    }

    pub fn policy(&self) -> Result<TruncationPolicy, Failure> {
        let policy = TruncationPolicy {
            fidelity_tol: self.policy.fidelity_tol,
            min_terms: self.policy.min_terms,
            max_terms: self.policy.max_terms,
            consecutive_hits: self.policy.consecutive_hits,
        };
        policy.validate()?;
        Ok(policy)
    }

    pub fn grid(&self) -> Result<Vec<f64>, Failure> {
        let spec = self.grid.ok_or_else(|| {
            Failure::new(EXIT_CONFIG, "config error: this command requires a \"grid\" block")
        })?;
        if !(spec.start.is_finite() && spec.stop.is_finite() && spec.start < spec.stop) {
            return Err(Failure::new(
                EXIT_CONFIG,
                format!(
                    "config error: grid requires start < stop, got [{}, {}]",
                    spec.start, spec.stop
                ),
            ));
        }
        if spec.points < 1 {
            return Err(Failure::new(
                EXIT_CONFIG,
                "config error: grid requires points >= 1",
            ));
        }
        Ok(linspace(spec.start, spec.stop, spec.points))
    }

    pub fn bec(&self) -> Result<BecSpec, Failure> {
        self.bec.ok_or_else(|| {
            Failure::new(EXIT_CONFIG, "config error: this command requires a \"bec\" block")
        })
    }
}

/// Parse a run configuration, rejecting unknown keys.
pub fn parse(text: &str) -> Result<RunConfig, Failure> {
    serde_json::from_str(text)
        .map_err(|e| Failure::new(EXIT_CONFIG, format!("config error: {e}")))
}
