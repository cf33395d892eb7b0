//! Fixed-order Gauss-Legendre panel quadrature.
//!
//! The condensate integrals of this crate have smooth integrands (a mode
//! series times a quartic polynomial) over compact support, so a fixed-order
//! rule applied on a few equal panels converges spectrally and stays fully
//! deterministic; there is no adaptivity.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Gauss-Legendre nodes and weights on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Rule of the given order (node count), order >= 2.
    ///
    /// Roots of the Legendre polynomial P_n are found by Newton iteration
    /// from the Chebyshev-like initial guesses cos(pi (i - 1/4) / (n + 1/2)).
    pub fn new(order: usize) -> Result<Self> {
        if order < 2 {
            return Err(Error::Quadrature(format!(
                "order must be >= 2, got {order}"
            )));
        }
        let n = order as f64;
        let mut nodes = Vec::with_capacity(order);
        let mut weights = Vec::with_capacity(order);
        for i in 1..=order {
            let mut x = (PI * (i as f64 - 0.25) / (n + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(order, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-15 {
                    let (_, d) = legendre_with_derivative(order, x);
                    dp = d;
                    break;
                }
            }
            nodes.push(x);
            weights.push(2.0 / ((1.0 - x * x) * dp * dp));
        }
        Ok(GaussLegendre { nodes, weights })
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Integral of `f` over [a, b] with a single application of the rule.
    pub fn integrate<F>(&self, a: f64, b: f64, mut f: F) -> f64
    where
        F: FnMut(f64) -> f64,
    {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut sum = 0.0;
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            sum += w * f(half * x + mid);
        }
        half * sum
    }

    /// Integral of `f` over [a, b] split into `panels` equal panels.
    pub fn integrate_panels<F>(&self, a: f64, b: f64, panels: usize, mut f: F) -> f64
    where
        F: FnMut(f64) -> f64,
    {
        let panels = panels.max(1);
        let width = (b - a) / panels as f64;
        let mut total = 0.0;
        for p in 0..panels {
            let lo = a + p as f64 * width;
            let hi = if p + 1 == panels { b } else { a + (p + 1) as f64 * width };
            total += self.integrate(lo, hi, &mut f);
        }
        total
    }
}

/// (P_n(x), P_n'(x)) by the three-term recurrence.
fn legendre_with_derivative(order: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = x;
    for k in 2..=order {
        let kf = k as f64;
        let next = ((2.0 * kf - 1.0) * x * p - (kf - 1.0) * p_prev) / kf;
        p_prev = p;
        p = next;
    }
    let d = order as f64 * (x * p - p_prev) / (x * x - 1.0);
    (p, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_small_order() {
        assert!(GaussLegendre::new(0).is_err());
        assert!(GaussLegendre::new(1).is_err());
    }

    #[test]
    fn nodes_symmetric_and_weights_normalized() {
        for order in [2usize, 5, 16, 64, 128] {
            let rule = GaussLegendre::new(order).unwrap();
            let wsum: f64 = rule.weights.iter().sum();
            assert!((wsum - 2.0).abs() < 1e-13, "order {order}: {wsum}");
            for i in 0..order / 2 {
                let a = rule.nodes[i];
                let b = rule.nodes[order - 1 - i];
                assert!((a + b).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn exact_for_polynomials() {
        // order-n rule is exact through degree 2n - 1
        let rule = GaussLegendre::new(5).unwrap();
        let got = rule.integrate(2.0, 5.0, |x| x.powi(9));
        let exact = (5.0f64.powi(10) - 2.0f64.powi(10)) / 10.0;
        assert!((got / exact - 1.0).abs() < 1e-14);

        let rule = GaussLegendre::new(64).unwrap();
        let got = rule.integrate(-1.0, 1.0, |x| x.powi(126));
        let exact = 2.0 / 127.0;
        assert!((got / exact - 1.0).abs() < 1e-12);
    }

    #[test]
    fn panels_match_single_interval_on_smooth_integrand() {
        let rule = GaussLegendre::new(64).unwrap();
        let a = rule.integrate(0.0, PI, f64::sin);
        let b = rule.integrate_panels(0.0, PI, 8, f64::sin);
        assert!((a - 2.0).abs() < 1e-14);
        assert!((b - 2.0).abs() < 1e-14);
    }
}
