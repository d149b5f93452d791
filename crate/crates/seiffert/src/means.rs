//! Bivariate means of a pair of positive reals.
//!
//! Implements the Seiffert mean `T`, the quadratic (root mean square) mean `S`,
//! the contraharmonic mean `C`, the arithmetic mean `A`, and the two-parameter
//! family `Q_{t,p} = C^p(weighted pair) · A^{1-p}`, which interpolates `S`
//! (at `p = 1/2`) and `C` (at `p = 1`) applied to `t`-weighted arguments.
//!
//! All means are symmetric, homogeneous of degree 1, and extended to the
//! diagonal `a = b` by their continuous limit (which is `a` itself). The
//! Seiffert mean is the only one whose closed form degenerates to 0/0 on the
//! diagonal; near it we switch to a truncated series for `arctan(x)/x`.

use crate::error::{Error, Result};

/// Normalized gap below which the Seiffert mean uses the series path.
///
/// For x = |a-b|/(a+b) < 1e-4 the truncated series for arctan(x)/x has error
/// below x^8 < 1e-32, under double rounding, while the closed form has lost
/// half its digits to cancellation.
const SEIFFERT_SERIES_CUTOFF: f64 = 1e-4;

/// An ordered pair of strictly positive, finite reals.
///
/// No ordering between the entries is assumed; every mean in this module is
/// symmetric in them. Validation happens here, once, so the mean evaluations
/// themselves are infallible.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PositivePair {
    a: f64,
    b: f64,
}

impl PositivePair {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        for (name, v) in [("a", a), ("b", b)] {
            if !v.is_finite() {
                return Err(Error::domain(format!("{name} must be finite, got {v}")));
            }
            if v <= 0.0 {
                return Err(Error::domain(format!("{name} must be > 0, got {v}")));
            }
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// The reduced variable x = |a-b|/(a+b) in [0, 1).
    ///
    /// Every comparison between homogeneous symmetric means of (a, b) depends
    /// on the pair only through this quantity.
    pub fn normalized_gap(&self) -> f64 {
        (self.a - self.b).abs() / (self.a + self.b)
    }

    pub fn is_diagonal(&self) -> bool {
        self.a == self.b
    }
}

/// Convex weight t in [1/2, 1] for the pair transform
/// (a, b) -> (t·a + (1-t)·b, t·b + (1-t)·a).
///
/// The interval is closed: t = 1/2 collapses the pair onto its arithmetic
/// mean and t = 1 is the identity, both useful as test anchors even though
/// sharp-bound statements only ever concern the open interior.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightParam {
    t: f64,
}

impl WeightParam {
    pub fn new(t: f64) -> Result<Self> {
        if !t.is_finite() || !(0.5..=1.0).contains(&t) {
            return Err(Error::domain(format!("weight t must lie in [1/2, 1], got {t}")));
        }
        Ok(Self { t })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// The derived kernel parameter u = (2t-1)^2 in [0, 1].
    pub fn u(&self) -> f64 {
        let s = 2.0 * self.t - 1.0;
        s * s
    }
}

/// Exponent p >= 1/2 on the contraharmonic factor of the Q family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentParam {
    p: f64,
}

impl ExponentParam {
    pub fn new(p: f64) -> Result<Self> {
        if !p.is_finite() || p < 0.5 {
            return Err(Error::domain(format!("exponent p must be >= 1/2, got {p}")));
        }
        Ok(Self { p })
    }

    pub fn p(&self) -> f64 {
        self.p
    }
}

/// Arithmetic mean (a + b) / 2.
pub fn arithmetic_mean(pair: PositivePair) -> f64 {
    0.5 * (pair.a + pair.b)
}

/// Seiffert mean (a - b) / (2 arctan((a - b)/(a + b))).
///
/// Equivalently A(a,b) · x / arctan(x) with x the normalized gap; that form
/// is the one actually evaluated, with a series path for arctan(x)/x when x
/// is below the cancellation cutoff (in particular on the diagonal, where the
/// value is the continuous limit A = a).
pub fn seiffert_mean(pair: PositivePair) -> f64 {
    let x = pair.normalized_gap();
    let a = arithmetic_mean(pair);
    if x < SEIFFERT_SERIES_CUTOFF {
        a / atan_ratio_series(x)
    } else {
        a * x / x.atan()
    }
}

/// arctan(x)/x as 1 - x^2/3 + x^4/5 - x^6/7, for |x| below the cutoff.
fn atan_ratio_series(x: f64) -> f64 {
    let x2 = x * x;
    1.0 + x2 * (-1.0 / 3.0 + x2 * (1.0 / 5.0 + x2 * (-1.0 / 7.0)))
}

/// Root mean square sqrt((a^2 + b^2) / 2).
pub fn root_mean_square(pair: PositivePair) -> f64 {
    (0.5 * (pair.a * pair.a + pair.b * pair.b)).sqrt()
}

/// Contraharmonic mean (a^2 + b^2) / (a + b).
pub fn contraharmonic_mean(pair: PositivePair) -> f64 {
    (pair.a * pair.a + pair.b * pair.b) / (pair.a + pair.b)
}

/// The weighted pair (t·a + (1-t)·b, t·b + (1-t)·a).
///
/// A symmetric contraction of (a, b) toward their arithmetic mean: the result
/// has the same arithmetic mean as the input and normalized gap
/// (2t-1) · |a-b|/(a+b).
pub fn weighted_pair(pair: PositivePair, w: WeightParam) -> PositivePair {
    let t = w.t();
    let s = 1.0 - t;
    // Convex combinations of positive reals with t in [1/2, 1]; both entries
    // stay strictly positive.
    PositivePair {
        a: t * pair.a + s * pair.b,
        b: t * pair.b + s * pair.a,
    }
}

/// The two-parameter family Q_{t,p}(a,b) = C^p(weighted pair) · A^{1-p}(a,b).
///
/// Specializes to S(weighted pair) at p = 1/2 and C(weighted pair) at p = 1,
/// and for a != b is strictly increasing in t.
pub fn q_family(pair: PositivePair, w: WeightParam, p: ExponentParam) -> f64 {
    let cw = contraharmonic_mean(weighted_pair(pair, w));
    let a = arithmetic_mean(pair);
    cw.powf(p.p()) * a.powf(1.0 - p.p())
}
