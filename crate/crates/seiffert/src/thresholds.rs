//! Closed-form sharp thresholds for the weight t.
//!
//! For each exponent p >= 1/2 the double inequality
//! Q_{t₁,p}(a,b) < T(a,b) < Q_{t₂,p}(a,b) holds for all a != b exactly when
//!
//! ```text
//! t₁ <= 1/2 + sqrt((4/π)^(1/p) - 1) / 2     (largest valid lower weight)
//! t₂ >= 1/2 + sqrt(3p) / (6p)               (smallest valid upper weight)
//! ```
//!
//! Under u = (2t-1)² these correspond to u₀ = (4/π)^(1/p) - 1 (the root of
//! the endpoint function h_p) and 1/(3p) (the x -> 0 limit of g).

use crate::error::{Error, Result};
use crate::kernel;

/// The pair of sharp weights for a fixed exponent, with t_lower < t_upper.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdPair {
    pub t_lower: f64,
    pub t_upper: f64,
    pub p: f64,
}

impl ThresholdPair {
    pub fn for_exponent(p: f64) -> Result<Self> {
        Ok(Self {
            t_lower: t_lower(p)?,
            t_upper: t_upper(p)?,
            p,
        })
    }

    /// Width of the indeterminate band between the two sharp weights.
    pub fn gap(&self) -> f64 {
        self.t_upper - self.t_lower
    }
}

/// Supremum of weights t for which Q_{t,p} < T everywhere:
/// t₁(p) = 1/2 + sqrt((4/π)^(1/p) - 1) / 2.
pub fn t_lower(p: f64) -> Result<f64> {
    // (4/π)^(1/p) - 1 via expm1(log(4/π)/p); same closed form, no
    // cancellation as p grows.
    let u0 = kernel::u_zero_of_h(p)?;
    Ok(0.5 + 0.5 * u0.sqrt())
}

/// Infimum of weights t for which Q_{t,p} > T everywhere:
/// t₂(p) = 1/2 + sqrt(3p)/(6p).
pub fn t_upper(p: f64) -> Result<f64> {
    if !p.is_finite() || p < 0.5 {
        return Err(Error::domain(format!("exponent p must be >= 1/2, got {p}")));
    }
    Ok(0.5 + (3.0 * p).sqrt() / (6.0 * p))
}

/// The kernel parameter u = (2t-1)² of a weight t in [1/2, 1].
pub fn u_from_t(t: f64) -> Result<f64> {
    if !t.is_finite() || !(0.5..=1.0).contains(&t) {
        return Err(Error::domain(format!("weight t must lie in [1/2, 1], got {t}")));
    }
    let s = 2.0 * t - 1.0;
    Ok(s * s)
}

/// The weight t = 1/2 + sqrt(u)/2 of a kernel parameter u in [0, 1]
/// (the branch with t >= 1/2).
pub fn t_from_u(u: f64) -> Result<f64> {
    if !u.is_finite() || !(0.0..=1.0).contains(&u) {
        return Err(Error::domain(format!("kernel parameter u must lie in [0, 1], got {u}")));
    }
    Ok(0.5 + 0.5 * u.sqrt())
}
