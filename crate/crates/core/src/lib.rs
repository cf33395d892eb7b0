//! Casimir-Polder potentials and detector excitation probabilities for a
//! smeared two-level atom in a one-dimensional Dirichlet cavity.
//!
//! The crate computes, as convergence-controlled mode sums in natural units:
//!
//! * the first- and second-order energy shifts of the atom and their sum,
//!   the Casimir-Polder potential, together with its spatial derivative
//!   (the Casimir-Polder force);
//! * the probability of exciting the atom during a rectangular interaction
//!   window and its time-averaged, window-free form;
//! * the universal low-frequency profile shared by potential and excitation
//!   probability, both first-subleading expansions, and the proportionality
//!   constant Omega (alpha - 1) / 2 that maps measured excitation rates back
//!   onto the potential;
//! * Thomas-Fermi condensate densities and density-averaged excited-state
//!   populations for cloud-based readout;
//! * truncation-fidelity diagnostics (last term over partial sum) and
//!   fidelity maps over partial-sum length and detector-gap index.
//!
//! ```
//! use udw_cavity::{observables, PhysicsConfig, TruncationPolicy};
//!
//! let cfg = PhysicsConfig::new(1.0, 1e-3, 1e-2, 1.0, 2.0, 1e-2).unwrap();
//! let policy = TruncationPolicy::default();
//! let ecp = observables::casimir_polder_energy(0.5, &cfg, &policy).unwrap();
//! assert!(ecp.converged && ecp.value > 0.0);
//! ```

pub mod bec;
pub mod cavity;
pub mod error;
pub mod observables;
pub mod quadrature;
pub mod series;

pub use bec::{BECConfig, ExcitedPopulation, QuadratureSpec};
pub use cavity::{
    frequency, mode_table, mode_table_capped, smearing_factor, wavenumber, Mode, PhysicsConfig,
    DEFAULT_MODE_CAP,
};
pub use error::{Error, Result};
pub use observables::{
    estimate_cp_from_pav, linspace, proportionality_constant, sweep, Observable, SpatialProfile,
};
pub use quadrature::GaussLegendre;
pub use series::{
    fidelity, fidelity_map, sum_fixed, sum_series, FidelityMap, FidelityMode, SeriesResult,
    TruncationPolicy,
};
