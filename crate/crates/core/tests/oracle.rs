//! Golden-value tests against an independent brute-force oracle.
//!
//! The expected values below were minted with an arbitrary-precision
//! evaluation (30 significant digits, 2e5-term sums, tails below 1e-15
//! relative) of the same closed-form series, with every input pinned to its
//! exact f64 value. The oracle re-implemented here sums the series from its
//! printed formula with plain libm sines and Neumaier accumulation; it shares
//! no code with the crate's evaluation path.

// golden constants keep their full minted digits
#![allow(clippy::excessive_precision)]

use std::f64::consts::PI;

use udw_cavity::observables::{
    averaged_excitation_probability, casimir_polder_energy, cp_force, first_order_energy,
    linspace, second_order_energy, universal_function,
};
use udw_cavity::{Observable, PhysicsConfig, TruncationPolicy};

const L: f64 = 1.0;
const M: f64 = 1e-3;
const LAMBDA: f64 = 1e-2;
const GAP: f64 = 1.0;
const A0: f64 = 1e-2;

const ORACLE_TERMS: usize = 1_000_000;

// minted golden values (infinite sums at the parameters above)
const GOLD_E1_HALF_ALPHA2: f64 = 5.386406421530467043485e-4;
const GOLD_E2_HALF: f64 = -3.81503030809070741729e-5;
const GOLD_ECP_HALF_ALPHA2: f64 = 5.004903390721396301756e-4;
const GOLD_PAV_QUARTER: f64 = 1.045591622192226519338e-5;
const GOLD_PAV_HALF: f64 = 1.588591045566265541359e-5;
const GOLD_UNIVERSAL_HALF: f64 = 2.693203210765233521742e-4;
const GOLD_FORCE_03_ALPHA2: f64 = -2.344648939776791577087e-4;

fn cfg(alpha: f64) -> PhysicsConfig {
    PhysicsConfig::new(L, M, LAMBDA, GAP, alpha, A0).unwrap()
}

fn assert_rel(got: f64, want: f64, tol: f64, what: &str) {
    let scale = got.abs().max(want.abs());
    if scale == 0.0 {
        return;
    }
    let rel = (got - want).abs() / scale;
    assert!(rel <= tol, "{what}: got {got:e}, want {want:e}, rel {rel:e}");
}

/// Neumaier-compensated sum of `term(n)` for n = 1..=terms, written without
/// touching the crate's accumulators.
fn brute<F: Fn(usize) -> f64>(term: F, terms: usize) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for n in 1..=terms {
        let t = term(n);
        let s = sum + t;
        if sum.abs() >= t.abs() {
            comp += (sum - s) + t;
        } else {
            comp += (t - s) + sum;
        }
        sum = s;
    }
    sum + comp
}

fn mode(n: usize) -> (f64, f64, f64) {
    let k = n as f64 * PI / L;
    let w = (k * k + M * M).sqrt();
    let f = 2.0 / ((A0 * k).powi(2) + 1.0);
    (k, w, f)
}

fn oracle_e1(x: f64, alpha: f64) -> f64 {
    brute(
        |n| {
            let (k, w, f) = mode(n);
            alpha * LAMBDA.powi(2) / (GAP * L) * f * f * (k * x).sin().powi(2) / w
        },
        ORACLE_TERMS,
    )
}

fn oracle_e2(x: f64) -> f64 {
    brute(
        |n| {
            let (k, w, f) = mode(n);
            -LAMBDA.powi(2) / L * f * f * (k * x).sin().powi(2) / (w * (w + GAP))
        },
        ORACLE_TERMS,
    )
}

fn oracle_ecp(x: f64, alpha: f64) -> f64 {
    brute(
        |n| {
            let (k, w, f) = mode(n);
            LAMBDA.powi(2) / L * f * f * (k * x).sin().powi(2) / (w * (w + GAP))
                * ((alpha - 1.0) + alpha * w / GAP)
        },
        ORACLE_TERMS,
    )
}

fn oracle_pav(x: f64) -> f64 {
    brute(
        |n| {
            let (k, w, f) = mode(n);
            2.0 * LAMBDA.powi(2) / L * f * f * (k * x).sin().powi(2)
                / (w * (w + GAP) * (w + GAP))
        },
        ORACLE_TERMS,
    )
}

fn oracle_universal(x: f64) -> f64 {
    brute(
        |n| {
            let (k, w, f) = mode(n);
            LAMBDA.powi(2) / (L * GAP * GAP) * f * f * (k * x).sin().powi(2) / w
        },
        ORACLE_TERMS,
    )
}

fn oracle_force(x: f64, alpha: f64) -> f64 {
    brute(
        |n| {
            let (k, w, f) = mode(n);
            -LAMBDA.powi(2) / L * f * f * k * (2.0 * k * x).sin() / (w * (w + GAP))
                * ((alpha - 1.0) + alpha * w / GAP)
        },
        ORACLE_TERMS,
    )
}

#[test]
fn golden_first_order_energy() {
    assert_rel(
        oracle_e1(0.5, 2.0),
        GOLD_E1_HALF_ALPHA2,
        5e-13,
        "oracle e1(L/2)",
    );
    let got = first_order_energy(0.5, &cfg(2.0), &TruncationPolicy::default()).unwrap();
    assert!(got.converged);
    assert_rel(got.value, GOLD_E1_HALF_ALPHA2, 1e-8, "adaptive e1(L/2)");
}

#[test]
fn golden_second_order_energy() {
    assert_rel(oracle_e2(0.5), GOLD_E2_HALF, 5e-13, "oracle e2(L/2)");
    let got = second_order_energy(0.5, &cfg(2.0), &TruncationPolicy::default()).unwrap();
    assert!(got.converged);
    assert_rel(got.value, GOLD_E2_HALF, 1e-8, "adaptive e2(L/2)");
}

#[test]
fn golden_casimir_polder_energy() {
    assert_rel(
        oracle_ecp(0.5, 2.0),
        GOLD_ECP_HALF_ALPHA2,
        5e-13,
        "oracle e_cp(L/2)",
    );
    // the two golden routes agree: E_CP = E1 + E2
    assert_rel(
        GOLD_E1_HALF_ALPHA2 + GOLD_E2_HALF,
        GOLD_ECP_HALF_ALPHA2,
        1e-15,
        "golden split identity",
    );
    let got = casimir_polder_energy(0.5, &cfg(2.0), &TruncationPolicy::default()).unwrap();
    assert!(got.converged);
    assert_rel(got.value, GOLD_ECP_HALF_ALPHA2, 1e-8, "adaptive e_cp(L/2)");
}

#[test]
fn golden_averaged_excitation() {
    assert_rel(oracle_pav(0.25), GOLD_PAV_QUARTER, 5e-13, "oracle p_av(L/4)");
    assert_rel(oracle_pav(0.5), GOLD_PAV_HALF, 5e-13, "oracle p_av(L/2)");
    let policy = TruncationPolicy::default();
    let quarter = averaged_excitation_probability(0.25, &cfg(2.0), &policy).unwrap();
    assert!(quarter.converged);
    assert_rel(quarter.value, GOLD_PAV_QUARTER, 1e-8, "adaptive p_av(L/4)");
    // the n^-7 tail leaves the truncated value within 1e-10 of the full sum
    let half = averaged_excitation_probability(0.5, &cfg(2.0), &policy).unwrap();
    assert_rel(half.value, GOLD_PAV_HALF, 1e-10, "adaptive p_av(L/2)");
    // converged well before the term ceiling
    assert!(half.terms_used < policy.max_terms / 100);
}

#[test]
fn golden_universal_function() {
    assert_rel(
        oracle_universal(0.5),
        GOLD_UNIVERSAL_HALF,
        5e-13,
        "oracle F(L/2)",
    );
    let got = universal_function(0.5, &cfg(2.0), &TruncationPolicy::default()).unwrap();
    assert_rel(got.value, GOLD_UNIVERSAL_HALF, 1e-8, "adaptive F(L/2)");
}

#[test]
fn golden_force() {
    assert_rel(
        oracle_force(0.3, 2.0),
        GOLD_FORCE_03_ALPHA2,
        5e-13,
        "oracle force(0.3)",
    );
    let got = cp_force(0.3, &cfg(2.0), &TruncationPolicy::default()).unwrap();
    assert_rel(got.value, GOLD_FORCE_03_ALPHA2, 1e-8, "adaptive force(0.3)");
}

#[test]
fn crate_fixed_path_matches_goldens() {
    // the crate's double-double brute-force path against the minted values
    let c = cfg(2.0);
    let pairs: [(Observable, f64, f64); 5] = [
        (Observable::FirstOrderEnergy, 0.5, GOLD_E1_HALF_ALPHA2),
        (Observable::CasimirPolderEnergy, 0.5, GOLD_ECP_HALF_ALPHA2),
        (Observable::AveragedExcitation, 0.25, GOLD_PAV_QUARTER),
        (Observable::UniversalFunction, 0.5, GOLD_UNIVERSAL_HALF),
        (Observable::CasimirPolderForce, 0.3, GOLD_FORCE_03_ALPHA2),
    ];
    for (obs, x, want) in pairs {
        let got = obs.evaluate_fixed(x, &c, ORACLE_TERMS).unwrap();
        assert_rel(got, want, 5e-13, obs.label());
    }
}

#[test]
fn adaptive_matches_independent_oracle_on_grid() {
    let c = cfg(2.0);
    let policy = TruncationPolicy::default();
    for &x in linspace(0.1, 0.9, 5).iter() {
        let a = casimir_polder_energy(x, &c, &policy).unwrap();
        assert!(a.converged);
        assert_rel(a.value, oracle_ecp(x, 2.0), 1e-8, "e_cp vs oracle");
        let p = averaged_excitation_probability(x, &c, &policy).unwrap();
        assert_rel(p.value, oracle_pav(x), 1e-8, "p_av vs oracle");
        let u = universal_function(x, &c, &policy).unwrap();
        assert_rel(u.value, oracle_universal(x), 1e-8, "universal vs oracle");
    }
}

#[test]
fn fixed_path_self_checks() {
    let c = cfg(2.0);
    let policy = TruncationPolicy::default();
    let adaptive = casimir_polder_energy(0.37, &c, &policy).unwrap();

    // same term count, different accumulator: agreement at roundoff scale
    let fixed = Observable::CasimirPolderEnergy
        .evaluate_fixed(0.37, &c, adaptive.terms_used)
        .unwrap();
    assert_rel(fixed, adaptive.value, 1e-12, "fixed vs adaptive at same N");

    // doubling the term count moves a converged sum below 1e-8 relative
    let doubled = Observable::CasimirPolderEnergy
        .evaluate_fixed(0.37, &c, 2 * adaptive.terms_used)
        .unwrap();
    assert_rel(doubled, fixed, 1e-8, "fixed doubling");

    // wall rows stay exactly zero at any term count
    for terms in [1usize, 100, 10_000] {
        for obs in [
            Observable::CasimirPolderEnergy,
            Observable::AveragedExcitation,
            Observable::CasimirPolderForce,
        ] {
            assert_eq!(obs.evaluate_fixed(0.0, &c, terms).unwrap(), 0.0);
            assert_eq!(obs.evaluate_fixed(c.l, &c, terms).unwrap(), 0.0);
        }
    }
}
