//! Independent numerical certification of the sharp bounds.
//!
//! Nothing in this module consults the closed-form thresholds when producing
//! empirical ones: the evidence comes from sign scans of the kernel f over a
//! two-tier grid on (0, 1), combined with the analytic endpoint value
//! h_p(u) = lim_{x->1} f (which is a direct evaluation, not a solved form),
//! and monotone-predicate bisection in t. Closed forms enter only when a
//! caller compares the two routes.
//!
//! All evaluations are pure; grid points are independent and could be
//! evaluated in any order or in parallel. The reduction below is a
//! deterministic left-to-right fold over the sorted grid, so reports do not
//! depend on evaluation order.

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::{self, KernelParams};
use crate::means::{self, ExponentParam, PositivePair, WeightParam};
use crate::thresholds;

/// Absolute floor below which a grid value never counts as a sign witness.
const WITNESS_ABS_FLOOR: f64 = 1e-13;

/// Quadratic component of the witness band: f vanishes like (pu - 1/3)·x²
/// at 0, so the strict-sign cut must scale with x² or near-threshold scans
/// misclassify.
const WITNESS_QUADRATIC_BAND: f64 = 1e-9;

/// Tolerance for treating the endpoint value h_p(u) as strictly signed.
const ENDPOINT_SIGN_TOL: f64 = 1e-12;

/// Width of the bisection bracket when locating the interior minimum x₀.
const X0_BISECTION_TOL: f64 = 1e-12;

/// Relative step for central finite differences of f.
const FD_RELATIVE_STEP: f64 = 1e-6;

/// Consecutive grid differences smaller than this (scaled) are treated as
/// numerically neutral rather than as monotonicity evidence.
const DIFF_NEUTRAL_FLOOR: f64 = 1e-15;

/// Offset in t for the sharpness probes: far above bisection resolution,
/// small enough to stay inside the adjacent regime for every tested p.
pub const SHARPNESS_DELTA: f64 = 1e-3;

/// Maximum |t_empirical - t_closed| accepted by the full certification.
pub const EMPIRICAL_AGREEMENT_TOL: f64 = 1e-6;

/// Maximum |direct log(Q/T) - kernel f| accepted by the cross-path check.
pub const CROSS_PATH_TOL: f64 = 1e-10;

/// Grid layout and refinement depth for sign scans.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanConfig {
    /// Number of uniform grid points on [x_min, x_max].
    pub grid_size: usize,
    pub x_min: f64,
    pub x_max: f64,
    /// Bisection steps used by the empirical threshold recovery.
    pub refine_iters: u32,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            grid_size: 4096,
            x_min: 1e-6,
            x_max: 1.0 - 1e-9,
            refine_iters: 60,
        }
    }
}

impl ScanConfig {
    fn validate(&self) -> Result<()> {
        if self.grid_size < 16 {
            return Err(Error::domain(format!("grid_size must be >= 16, got {}", self.grid_size)));
        }
        if !(self.x_min > 0.0 && self.x_min < self.x_max && self.x_max < 1.0) {
            return Err(Error::domain(format!(
                "scan bounds must satisfy 0 < x_min < x_max < 1, got [{}, {}]",
                self.x_min, self.x_max
            )));
        }
        if self.refine_iters == 0 {
            return Err(Error::domain("refine_iters must be positive".to_string()));
        }
        Ok(())
    }
}

/// Sign pattern of f over (0, 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    AllNegative,
    AllPositive,
    Mixed,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::AllNegative => "ALL_NEGATIVE",
            Verdict::AllPositive => "ALL_POSITIVE",
            Verdict::Mixed => "MIXED",
        };
        f.write_str(s)
    }
}

/// A strict-sign witness: a point and the kernel value there.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Witness {
    pub x: f64,
    pub f: f64,
}

/// Outcome of a sign scan.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateReport {
    pub verdict: Verdict,
    /// Most negative witnessed value, when one exists.
    pub negative_witness: Option<Witness>,
    /// Most positive witnessed value (x = 1 marks the analytic endpoint).
    pub positive_witness: Option<Witness>,
    /// Interior minimum of f when the scan sees a fall-then-rise shape.
    pub extremum_x0: Option<f64>,
    pub grid_size: usize,
    pub x_min: f64,
    pub x_max: f64,
}

/// Shape classification of f on (0, 1) by the position of u relative to the
/// two limits of g.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "case")]
pub enum CaseLabel {
    /// u >= 1/(3p): f is strictly increasing, hence positive.
    Increasing,
    /// u <= (π-2)/((2p-1)π+2): f is strictly decreasing, hence negative.
    Decreasing,
    /// Between the limits: f falls to one interior minimum, then rises.
    InteriorMinimum { x0: f64 },
}

/// Two-route comparison of Q_{t,p} against T on a concrete pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanComparison {
    /// Sign of log(Q/T): `Greater` means Q > T.
    pub sign: Ordering,
    /// log Q - log T straight from the mean evaluations.
    pub direct_log_ratio: f64,
    /// f_{u,p}(x) at x = |a-b|/(a+b), u = (2t-1)².
    pub kernel_log_ratio: f64,
    pub x: f64,
}

fn witness_band(x: f64) -> f64 {
    WITNESS_ABS_FLOOR + WITNESS_QUADRATIC_BAND * x * x
}

/// The two-tier scan grid: uniform on [x_min, x_max] plus a geometric tail
/// x_max·2⁻ᵏ probing the small-x regime, sorted ascending.
fn build_grid(cfg: &ScanConfig) -> Vec<f64> {
    let n = cfg.grid_size;
    let mut xs = Vec::with_capacity(n + 64);
    let span = cfg.x_max - cfg.x_min;
    for i in 0..n {
        xs.push(cfg.x_min + span * i as f64 / (n - 1) as f64);
    }
    let mut x = 0.5 * cfg.x_max;
    while x > cfg.x_min {
        xs.push(x);
        x *= 0.5;
    }
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    xs.dedup();
    xs
}

fn eval_grid(params: KernelParams, cfg: &ScanConfig) -> (Vec<f64>, Vec<f64>) {
    let xs = build_grid(cfg);
    let fs = xs.iter().map(|&x| kernel::eval_f_raw(params.u(), params.p(), x)).collect();
    (xs, fs)
}

struct Shape {
    down_up: usize,
    up_down: usize,
    has_signed_fall: bool,
    has_signed_rise: bool,
    argmin: usize,
}

/// Classify consecutive differences, skipping numerically neutral ones.
fn analyze_shape(fs: &[f64]) -> Shape {
    let mut shape = Shape {
        down_up: 0,
        up_down: 0,
        has_signed_fall: false,
        has_signed_rise: false,
        argmin: 0,
    };
    let mut last_sign = 0i8;
    let mut min_f = f64::INFINITY;
    for (i, w) in fs.windows(2).enumerate() {
        if fs[i] < min_f {
            min_f = fs[i];
            shape.argmin = i;
        }
        let d = w[1] - w[0];
        let scale = 1.0 + fs[i].abs().max(fs[i + 1].abs());
        if d.abs() <= DIFF_NEUTRAL_FLOOR * scale {
            continue;
        }
        let sign = if d > 0.0 { 1 } else { -1 };
        if sign > 0 {
            shape.has_signed_rise = true;
            if last_sign < 0 {
                shape.down_up += 1;
            }
        } else {
            shape.has_signed_fall = true;
            if last_sign > 0 {
                shape.up_down += 1;
            }
        }
        last_sign = sign;
    }
    if let Some(&last) = fs.last() {
        if last < min_f {
            shape.argmin = fs.len() - 1;
        }
    }
    shape
}

/// Central-difference derivative of f, with a step that keeps both probe
/// points inside (0, 1).
fn fd_derivative(u: f64, p: f64, x: f64) -> f64 {
    let d = FD_RELATIVE_STEP * x * (1.0 - x);
    kernel::eval_f_raw(u, p, x + d) - kernel::eval_f_raw(u, p, x - d)
}

/// Locate the interior minimum of f by sign-change bisection on the
/// finite-difference derivative, to a bracket of width [`X0_BISECTION_TOL`].
fn locate_interior_minimum(params: KernelParams, xs: &[f64], argmin: usize) -> Result<f64> {
    let (u, p) = (params.u(), params.p());
    if argmin == 0 || argmin + 1 >= xs.len() {
        return Err(Error::Inconsistency(format!(
            "interior minimum reported at grid boundary (u={u}, p={p})"
        )));
    }
    let mut lo = xs[argmin - 1];
    let mut hi = xs[argmin + 1];
    // widen once if the dip straddles more cells than expected
    if fd_derivative(u, p, lo) >= 0.0 && argmin >= 2 {
        lo = xs[argmin - 2];
    }
    if fd_derivative(u, p, hi) <= 0.0 && argmin + 2 < xs.len() {
        hi = xs[argmin + 2];
    }
    if !(fd_derivative(u, p, lo) < 0.0 && fd_derivative(u, p, hi) > 0.0) {
        return Err(Error::Inconsistency(format!(
            "could not bracket the derivative sign change near x={} (u={u}, p={p})",
            xs[argmin]
        )));
    }
    let mut steps = 0;
    while hi - lo > X0_BISECTION_TOL && steps < 200 {
        let mid = 0.5 * (lo + hi);
        if fd_derivative(u, p, mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        steps += 1;
    }
    Ok(0.5 * (lo + hi))
}

/// Scan the sign of f_{u,p} over (0, 1) and classify it.
///
/// A grid value only counts as a strict-sign witness when it clears the
/// x²-scaled band; the analytic endpoint value h_p(u) joins the scan as a
/// virtual witness at x = 1. `ALL_NEGATIVE` additionally requires h <= 0
/// (the endpoint limit is part of the claim), and `ALL_POSITIVE` requires
/// every grid value to be strictly positive. Inputs too close to a sharp
/// threshold for the grid to classify come back as
/// [`Error::Indeterminate`].
pub fn scan_sign(params: KernelParams, cfg: &ScanConfig) -> Result<CertificateReport> {
    cfg.validate()?;
    let (xs, fs) = eval_grid(params, cfg);

    let mut min_f = f64::INFINITY;
    let mut max_f = f64::NEG_INFINITY;
    let mut positive: Option<Witness> = None;
    let mut negative: Option<Witness> = None;
    for (&x, &f) in xs.iter().zip(&fs) {
        min_f = min_f.min(f);
        max_f = max_f.max(f);
        let band = witness_band(x);
        if f > band && positive.is_none_or(|w| f > w.f) {
            positive = Some(Witness { x, f });
        }
        if f < -band && negative.is_none_or(|w| f < w.f) {
            negative = Some(Witness { x, f });
        }
    }

    let h = kernel::eval_h_raw(params.p(), params.u());
    if h > ENDPOINT_SIGN_TOL && positive.is_none_or(|w| h > w.f) {
        positive = Some(Witness { x: 1.0, f: h });
    }
    if h < -ENDPOINT_SIGN_TOL && negative.is_none_or(|w| h < w.f) {
        negative = Some(Witness { x: 1.0, f: h });
    }

    let verdict = match (negative, positive) {
        (Some(_), Some(_)) => Verdict::Mixed,
        (None, Some(_)) => {
            if min_f > 0.0 {
                Verdict::AllPositive
            } else {
                return Err(Error::Indeterminate(format!(
                    "positive witnesses but grid minimum {min_f:e} is not strictly positive \
                     (u={}, p={}, grid {})",
                    params.u(),
                    params.p(),
                    cfg.grid_size
                )));
            }
        }
        (Some(_), None) => {
            if h <= 0.0 && max_f < 0.0 {
                Verdict::AllNegative
            } else {
                return Err(Error::Indeterminate(format!(
                    "negative witnesses with endpoint value h={h:e} within tolerance of zero \
                     (u={}, p={}, grid {})",
                    params.u(),
                    params.p(),
                    cfg.grid_size
                )));
            }
        }
        (None, None) => {
            return Err(Error::Indeterminate(format!(
                "no grid value cleared the witness band (u={}, p={}, grid {})",
                params.u(),
                params.p(),
                cfg.grid_size
            )));
        }
    };

    let shape = analyze_shape(&fs);
    let extremum_x0 = if shape.down_up == 1 && shape.up_down == 0 {
        Some(locate_interior_minimum(params, &xs, shape.argmin)?)
    } else {
        None
    };

    Ok(CertificateReport {
        verdict,
        negative_witness: negative,
        positive_witness: positive,
        extremum_x0,
        grid_size: cfg.grid_size,
        x_min: cfg.x_min,
        x_max: cfg.x_max,
    })
}

/// Classify (u, p) against the limits of g and verify the implied shape of f
/// on the grid.
pub fn check_case_structure(params: KernelParams, cfg: &ScanConfig) -> Result<CaseLabel> {
    cfg.validate()?;
    let (u, p) = (params.u(), params.p());
    let lim_zero = kernel::g_limit_at_zero(p)?;
    let lim_one = kernel::g_limit_at_one(p)?;
    let (xs, fs) = eval_grid(params, cfg);
    let shape = analyze_shape(&fs);

    if u >= lim_zero {
        if shape.has_signed_fall {
            return Err(Error::Inconsistency(format!(
                "u={u} >= 1/(3p)={lim_zero} but f is not increasing on the grid (p={p})"
            )));
        }
        Ok(CaseLabel::Increasing)
    } else if u <= lim_one {
        if shape.has_signed_rise {
            return Err(Error::Inconsistency(format!(
                "u={u} <= g(1-)={lim_one} but f is not decreasing on the grid (p={p})"
            )));
        }
        Ok(CaseLabel::Decreasing)
    } else {
        if shape.down_up != 1 || shape.up_down != 0 {
            return Err(Error::Inconsistency(format!(
                "u={u} lies between the g limits ({lim_one}, {lim_zero}) but f shows \
                 {} fall-to-rise and {} rise-to-fall transitions (p={p})",
                shape.down_up, shape.up_down
            )));
        }
        let x0 = locate_interior_minimum(params, &xs, shape.argmin)?;
        Ok(CaseLabel::InteriorMinimum { x0 })
    }
}

fn scan_verdict_at(t: f64, p: f64, cfg: &ScanConfig) -> Result<Option<CertificateReport>> {
    let u = thresholds::u_from_t(t)?;
    let params = KernelParams::new(u, p)?;
    match scan_sign(params, cfg) {
        Ok(report) => Ok(Some(report)),
        // Right at a sharp threshold the grid legitimately cannot decide;
        // the bisection treats that as "predicate does not hold".
        Err(Error::Indeterminate(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

fn bisect_threshold(p: f64, cfg: &ScanConfig, target: Verdict, holds_at_low_t: bool) -> Result<f64> {
    cfg.validate()?;
    let predicate = |t: f64| -> Result<bool> {
        Ok(scan_verdict_at(t, p, cfg)?.map(|r| r.verdict) == Some(target))
    };
    let (mut lo, mut hi) = (0.5, 1.0);
    let at_lo = predicate(lo)?;
    let at_hi = predicate(hi)?;
    if at_lo != holds_at_low_t || at_hi == holds_at_low_t {
        return Err(Error::Inconsistency(format!(
            "{target} predicate is not monotone in t for p={p}: holds(1/2)={at_lo}, holds(1)={at_hi}"
        )));
    }
    for _ in 0..cfg.refine_iters {
        let mid = 0.5 * (lo + hi);
        if predicate(mid)? == at_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Recover the lower sharp weight by bisecting the predicate
/// "f is negative on all of (0, 1)" over t, with no reference to the closed
/// form.
pub fn empirical_t_lower(p: f64, cfg: &ScanConfig) -> Result<f64> {
    bisect_threshold(p, cfg, Verdict::AllNegative, true)
}

/// Recover the upper sharp weight by bisecting "f is positive on (0, 1)".
pub fn empirical_t_upper(p: f64, cfg: &ScanConfig) -> Result<f64> {
    bisect_threshold(p, cfg, Verdict::AllPositive, false)
}

/// Compare Q_{t,p} against T on one pair by two independent routes and
/// certify they agree: (i) log of the mean values, (ii) the kernel f at
/// x = |a-b|/(a+b) with u = (2t-1)².
pub fn certify_mean_inequality(
    pair: PositivePair,
    w: WeightParam,
    p: ExponentParam,
) -> Result<MeanComparison> {
    if pair.is_diagonal() {
        return Err(Error::domain(
            "strict comparison of Q and T requires a != b".to_string(),
        ));
    }
    let direct = means::q_family(pair, w, p).ln() - means::seiffert_mean(pair).ln();
    let x = pair.normalized_gap();
    let kernel_value = kernel::eval_f_raw(w.u(), p.p(), x);

    if (direct - kernel_value).abs() > CROSS_PATH_TOL {
        return Err(Error::Inconsistency(format!(
            "log(Q/T) paths disagree: direct {direct:e} vs kernel {kernel_value:e} \
             at x={x}, t={}, p={}",
            w.t(),
            p.p()
        )));
    }
    // Sign agreement is only meaningful clear of rounding noise; below the
    // floor the kernel path (exact at this scale) decides.
    const SIGN_NOISE_FLOOR: f64 = 1e-12;
    if direct.abs() > SIGN_NOISE_FLOOR
        && kernel_value.abs() > SIGN_NOISE_FLOOR
        && (direct > 0.0) != (kernel_value > 0.0)
    {
        return Err(Error::Inconsistency(format!(
            "log(Q/T) paths agree in value but not in sign: {direct:e} vs {kernel_value:e}"
        )));
    }
    let sign = kernel_value.partial_cmp(&0.0).expect("kernel value is never NaN");
    Ok(MeanComparison {
        sign,
        direct_log_ratio: direct,
        kernel_log_ratio: kernel_value,
        x,
    })
}

/// Aggregate of a seeded cross-path consistency batch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrossCheckSummary {
    pub samples: usize,
    pub max_abs_discrepancy: f64,
}

/// Run [`certify_mean_inequality`] over `samples` seeded random
/// (pair, t, p) draws and report the worst discrepancy between the routes.
pub fn cross_check_batch(seed: u64, samples: usize) -> Result<CrossCheckSummary> {
    let mut max_abs = 0.0f64;
    for (pair, w, p) in sampling::cases(seed, samples) {
        let cmp = certify_mean_inequality(pair, w, p)?;
        max_abs = max_abs.max((cmp.direct_log_ratio - cmp.kernel_log_ratio).abs());
    }
    Ok(CrossCheckSummary {
        samples,
        max_abs_discrepancy: max_abs,
    })
}

/// Full certification for one exponent: empirical thresholds against closed
/// forms, sharpness probes one delta inside each adjacent regime, the band
/// midpoint, and a seeded cross-path batch.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificationSummary {
    pub p: f64,
    pub t_lower_closed: f64,
    pub t_lower_empirical: f64,
    pub t_lower_error: f64,
    pub t_upper_closed: f64,
    pub t_upper_empirical: f64,
    pub t_upper_error: f64,
    /// At t = t_lower + delta a positive witness must exist (t₁ is sharp).
    pub lower_sharpness_witness: bool,
    /// At t = t_upper - delta a negative witness must exist (t₂ is sharp).
    pub upper_sharpness_witness: bool,
    /// Verdict at the midpoint of the band; MIXED confirms the band is
    /// exactly the indeterminate region.
    pub band_midpoint_verdict: Verdict,
    pub cross_check: CrossCheckSummary,
    pub passed: bool,
}

pub fn certify_thresholds(
    p: f64,
    cfg: &ScanConfig,
    seed: u64,
    cross_samples: usize,
) -> Result<CertificationSummary> {
    let closed = thresholds::ThresholdPair::for_exponent(p)?;
    let emp_lower = empirical_t_lower(p, cfg)?;
    let emp_upper = empirical_t_upper(p, cfg)?;

    let above_lower = scan_verdict_at(closed.t_lower + SHARPNESS_DELTA, p, cfg)?;
    let lower_witness = above_lower.as_ref().and_then(|r| r.positive_witness).is_some();
    let below_upper = scan_verdict_at(closed.t_upper - SHARPNESS_DELTA, p, cfg)?;
    let upper_witness = below_upper.as_ref().and_then(|r| r.negative_witness).is_some();

    let midpoint = 0.5 * (closed.t_lower + closed.t_upper);
    let band_verdict = scan_verdict_at(midpoint, p, cfg)?
        .ok_or_else(|| {
            Error::Indeterminate(format!("band midpoint scan failed to classify (p={p}, t={midpoint})"))
        })?
        .verdict;

    let cross_check = cross_check_batch(seed, cross_samples)?;

    let t_lower_error = (emp_lower - closed.t_lower).abs();
    let t_upper_error = (emp_upper - closed.t_upper).abs();
    let passed = t_lower_error < EMPIRICAL_AGREEMENT_TOL
        && t_upper_error < EMPIRICAL_AGREEMENT_TOL
        && lower_witness
        && upper_witness
        && band_verdict == Verdict::Mixed
        && cross_check.max_abs_discrepancy < CROSS_PATH_TOL;

    Ok(CertificationSummary {
        p,
        t_lower_closed: closed.t_lower,
        t_lower_empirical: emp_lower,
        t_lower_error,
        t_upper_closed: closed.t_upper,
        t_upper_empirical: emp_upper,
        t_upper_error,
        lower_sharpness_witness: lower_witness,
        upper_sharpness_witness: upper_witness,
        band_midpoint_verdict: band_verdict,
        cross_check,
        passed,
    })
}

/// Seeded reproducible samplers used by the certification batches and the
/// test suites.
pub mod sampling {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use crate::means::{ExponentParam, PositivePair, WeightParam};

    /// Pairs with log-uniform magnitudes in [1e-3, 1e3].
    pub fn pairs(seed: u64, count: usize) -> Vec<PositivePair> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count).map(|_| pair_from(&mut rng)).collect()
    }

    /// (pair, t, p) draws: pair as in [`pairs`], t uniform on [1/2, 1],
    /// p log-uniform on [1/2, 10].
    pub fn cases(seed: u64, count: usize) -> Vec<(PositivePair, WeightParam, ExponentParam)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| {
                let pair = pair_from(&mut rng);
                let t = WeightParam::new(rng.random_range(0.5..=1.0)).expect("t in range");
                let p = ExponentParam::new(0.5 * 20f64.powf(rng.random_range(0.0..1.0)))
                    .expect("p in range");
                (pair, t, p)
            })
            .collect()
    }

    fn pair_from(rng: &mut ChaCha8Rng) -> PositivePair {
        loop {
            let a = 10f64.powf(rng.random_range(-3.0..=3.0));
            let b = 10f64.powf(rng.random_range(-3.0..=3.0));
            if a != b {
                return PositivePair::new(a, b).expect("sampled magnitudes are positive");
            }
        }
    }
}
