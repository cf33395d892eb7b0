//! Convergence-controlled summation of mode series.
//!
//! Every observable in this crate is an infinite mode sum S = sum a_n that is
//! approximated by a partial sum S_N. The quality diagnostic is the fidelity
//! a_N / S_N, the share of the last summed term in the partial sum; the
//! summation stops once the fidelity stays below a threshold for several
//! consecutive terms. Terms are accumulated in strictly ascending order with
//! compensated (Neumaier) arithmetic, so a sum is bit-reproducible for fixed
//! inputs.

use crate::cavity::{frequency, PhysicsConfig, DEFAULT_MODE_CAP};
use crate::error::{Error, Result};

/// Stopping rule for truncated mode sums.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationPolicy {
    /// Stop once |a_n / S_n| falls below this threshold (0 < tol < 1).
    pub fidelity_tol: f64,
    /// Number of successive terms that must satisfy the threshold.
    ///
    /// Guards against accidental zeros: sin^2(k_n x) vanishes identically for
    /// every even n at x = L/2 and on other rational x / L patterns, and a
    /// single vanishing term must not terminate the sum.
    pub consecutive_hits: usize,
    /// Floor on the number of terms summed.
    pub min_terms: usize,
    /// Ceiling on the number of terms summed.
    pub max_terms: usize,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy {
            fidelity_tol: 1e-12,
            consecutive_hits: 3,
            min_terms: 16,
            max_terms: 1_000_000,
        }
    }
}

impl TruncationPolicy {
    pub fn validate(&self) -> Result<()> {
        if !(self.fidelity_tol > 0.0 && self.fidelity_tol < 1.0) {
            return Err(Error::Policy(format!(
                "fidelity_tol must lie in (0, 1), got {}",
                self.fidelity_tol
            )));
        }
        if self.min_terms < 1 || self.min_terms > self.max_terms {
            return Err(Error::Policy(format!(
                "need 1 <= min_terms <= max_terms, got {} and {}",
                self.min_terms, self.max_terms
            )));
        }
        if self.consecutive_hits < 1 {
            return Err(Error::Policy("consecutive_hits must be >= 1".into()));
        }
        Ok(())
    }

    /// Same policy with a different fidelity threshold.
    pub fn with_tol(self, fidelity_tol: f64) -> Self {
        TruncationPolicy {
            fidelity_tol,
            ..self
        }
    }
}

/// Value of a truncated series together with its convergence metadata.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesResult {
    /// The partial sum S_N.
    pub value: f64,
    /// Number of terms N actually summed.
    pub terms_used: usize,
    /// The last summed term a_N.
    pub last_term: f64,
    /// Signed fidelity a_N / S_N at the stopping point (0 for an all-zero sum).
    pub fidelity: f64,
    /// False when max_terms was exhausted before the stopping rule fired.
    pub converged: bool,
}

/// Neumaier variant of compensated summation; exact for the running error of
/// each addition regardless of operand ordering.
#[derive(Clone, Copy, Default)]
struct Compensated {
    sum: f64,
    comp: f64,
}

impl Compensated {
    #[inline]
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Sum `term(1) + term(2) + ...` until the stopping rule of `policy` fires.
///
/// Stops at the first n >= min_terms for which |a_i / S_i| < fidelity_tol
/// held for `consecutive_hits` successive i ending at n; reports
/// `converged = false` when max_terms is reached first. A zero term counts as
/// a hit only against a nonzero partial sum, or when the partial sum is
/// exactly zero as well (all-zero series, e.g. any observable at a Dirichlet
/// node).
pub fn sum_series<F>(term: F, policy: &TruncationPolicy) -> Result<SeriesResult>
where
    F: Fn(usize) -> f64,
{
    policy.validate()?;
    let mut acc = Compensated::default();
    let mut streak = 0usize;
    let mut last = 0.0f64;
    for n in 1..=policy.max_terms {
        let t = term(n);
        if !t.is_finite() {
            return Err(Error::NonFiniteTerm { index: n });
        }
        acc.add(t);
        last = t;
        let s = acc.value();
        let hit = if s == 0.0 {
            t == 0.0
        } else {
            (t / s).abs() < policy.fidelity_tol
        };
        streak = if hit { streak + 1 } else { 0 };
        if n >= policy.min_terms && streak >= policy.consecutive_hits {
            return Ok(SeriesResult {
                value: s,
                terms_used: n,
                last_term: t,
                fidelity: if s == 0.0 { 0.0 } else { t / s },
                converged: true,
            });
        }
    }
    let s = acc.value();
    Ok(SeriesResult {
        value: s,
        terms_used: policy.max_terms,
        last_term: last,
        fidelity: if s == 0.0 { 0.0 } else { last / s },
        converged: false,
    })
}

/// Brute-force partial sum of exactly `terms` terms, no early stopping,
/// accumulated in double-double (two-float) arithmetic. This is the oracle
/// path used to mint golden values and to bound truncation error of the
/// adaptive rule.
pub fn sum_fixed<F>(term: F, terms: usize) -> Result<f64>
where
    F: Fn(usize) -> f64,
{
    if terms == 0 {
        return Err(Error::Policy("term count must be >= 1".into()));
    }
    let mut hi = 0.0f64;
    let mut lo = 0.0f64;
    for n in 1..=terms {
        let t = term(n);
        if !t.is_finite() {
            return Err(Error::NonFiniteTerm { index: n });
        }
        // two_sum(hi, t), error cascaded into lo, then renormalize
        let s = hi + t;
        let b = s - hi;
        let e = (hi - (s - b)) + (t - b);
        let l = lo + e;
        let h = s + l;
        lo = l - (h - s);
        hi = h;
    }
    Ok(hi + lo)
}

/// Signed fidelity a_N / S_N of a truncated series.
pub fn fidelity(partial_sum: f64, last_term: f64) -> Result<f64> {
    if partial_sum == 0.0 {
        return Err(Error::ZeroPartialSum);
    }
    Ok(last_term / partial_sum)
}

/// Sign convention for reported fidelity values.
///
/// `Signed` is the literal diagnostic a_N / S_N; `Absolute` reports
/// |a_N| / |S_N|, which is easier to read on mixed-sign series (the
/// Casimir-Polder terms change sign along n whenever alpha < 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FidelityMode {
    #[default]
    Signed,
    Absolute,
}

/// Fidelity of truncated mode sums over partial-sum lengths N and gap
/// indices K, evaluated for a detector at the cavity center.
///
/// Only odd field modes contribute at x = L/2, so the cell (N, K) sums the
/// first N odd-indexed terms (field modes 1, 3, ..., 2N - 1) of the family
/// with the detector gap set to the frequency of mode 2K + 1, and records the
/// fidelity of that partial sum.
#[derive(Debug, Clone, PartialEq)]
pub struct FidelityMap {
    pub n_axis: Vec<usize>,
    pub k_axis: Vec<usize>,
    /// values[i][j] belongs to (n_axis[i], k_axis[j]).
    pub values: Vec<Vec<f64>>,
}

impl FidelityMap {
    /// Lookup by axis values rather than indices.
    pub fn get(&self, n: usize, k: usize) -> Option<f64> {
        let i = self.n_axis.iter().position(|&v| v == n)?;
        let j = self.k_axis.iter().position(|&v| v == k)?;
        Some(self.values[i][j])
    }
}

fn validate_axis(axis: &[usize], name: &str) -> Result<()> {
    if axis.is_empty() {
        return Err(Error::Axis(format!("{name} axis is empty")));
    }
    if axis[0] == 0 {
        return Err(Error::Axis(format!("{name} axis entries must be >= 1")));
    }
    if axis.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Axis(format!("{name} axis must be strictly ascending")));
    }
    Ok(())
}

/// Build a fidelity map for a term family parameterized by the detector gap.
///
/// `family(gap, n)` must return the n-th mode term of the series with the
/// detector gap replaced by `gap`; the map drives it at gap = omega_{2K+1}
/// for every K on `k_axis` and with the first N odd mode indices for every N
/// on `n_axis`.
pub fn fidelity_map<F>(
    family: F,
    n_axis: &[usize],
    k_axis: &[usize],
    cfg: &PhysicsConfig,
    mode: FidelityMode,
) -> Result<FidelityMap>
where
    F: Fn(f64, usize) -> f64,
{
    validate_axis(n_axis, "N")?;
    validate_axis(k_axis, "K")?;
    let n_top = *n_axis.last().expect("nonempty");
    let k_top = *k_axis.last().expect("nonempty");
    if 2 * n_top - 1 > DEFAULT_MODE_CAP {
        return Err(Error::ModeCap {
            requested: 2 * n_top - 1,
            cap: DEFAULT_MODE_CAP,
        });
    }
    if 2 * k_top + 1 > DEFAULT_MODE_CAP {
        return Err(Error::ModeCap {
            requested: 2 * k_top + 1,
            cap: DEFAULT_MODE_CAP,
        });
    }

    let mut values = vec![vec![0.0f64; k_axis.len()]; n_axis.len()];
    for (j, &kidx) in k_axis.iter().enumerate() {
        let gap = frequency(2 * kidx + 1, cfg)?;
        let mut acc = Compensated::default();
        let mut rows = n_axis.iter().enumerate().peekable();
        for i in 1..=n_top {
            let mode_index = 2 * i - 1;
            let t = family(gap, mode_index);
            if !t.is_finite() {
                return Err(Error::NonFiniteTerm { index: mode_index });
            }
            acc.add(t);
            if let Some(&(row, &n)) = rows.peek() {
                if n == i {
                    let f = fidelity(acc.value(), t)?;
                    values[row][j] = match mode {
                        FidelityMode::Signed => f,
                        FidelityMode::Absolute => f.abs(),
                    };
                    rows.next();
                }
            }
        }
    }
    Ok(FidelityMap {
        n_axis: n_axis.to_vec(),
        k_axis: k_axis.to_vec(),
        values,
    })
}
