//! Bivariate means with sharp two-parameter bounds, and the numerical
//! machinery to certify them.
//!
//! For positive a != b the Seiffert mean
//! T(a,b) = (a-b)/(2·arctan((a-b)/(a+b))) sits strictly between the
//! quadratic mean S and the contraharmonic mean C. The family
//!
//! ```text
//! Q_{t,p}(a,b) = C^p(t·a+(1-t)·b, t·b+(1-t)·a) · A^{1-p}(a,b)
//! ```
//!
//! interpolates both (S at p = 1/2, C at p = 1, applied to t-weighted
//! arguments) and brackets T sharply: Q_{t₁,p} < T < Q_{t₂,p} holds for all
//! a != b exactly when t₁ <= 1/2 + sqrt((4/π)^(1/p) - 1)/2 and
//! t₂ >= 1/2 + sqrt(3p)/(6p).
//!
//! The crate is organized around that statement:
//!
//! - [`means`]: the five means and the weighted-pair transform.
//! - [`kernel`]: cancellation-safe evaluation of the comparison kernel
//!   f_{u,p} and its derivative factors.
//! - [`thresholds`]: the closed-form sharp weights and the u = (2t-1)²
//!   conversion.
//! - [`verifier`]: grid sign scans, bisection recovery of the thresholds
//!   with no reference to the closed forms, and cross-route consistency
//!   certificates.
//!
//! Everything is plain binary64; all functions are pure and safe for
//! concurrent use.

pub mod error;
pub mod kernel;
pub mod means;
pub mod thresholds;
pub mod verifier;

pub use error::{Error, Result};
pub use kernel::{KernelParams, KernelPoint};
pub use means::{ExponentParam, PositivePair, WeightParam};
pub use thresholds::ThresholdPair;
pub use verifier::{CertificateReport, ScanConfig, Verdict};
