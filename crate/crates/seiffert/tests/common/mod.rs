//! High-precision oracle used by the integration tests.
//!
//! Everything here is exact rational arithmetic over `BigInt`, with series
//! summed until the next term drops below the working grid (~1e-100) and
//! intermediate results rounded back to [`WORK_DIGITS`] decimals to keep
//! denominators bounded. The oracle shares no code with the library paths it
//! checks: arctan, log, exp, and π come from their own series (Machin's
//! formula for π), square roots from Newton iteration on rationals.

#![allow(dead_code)] // each integration test binary uses its own subset

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Decimal digits carried through intermediate results.
const WORK_DIGITS: u32 = 120;

/// Series terms are summed until they fall below 10^-TERM_EPS_DIGITS.
const TERM_EPS_DIGITS: u32 = 100;

const MAX_TERMS: usize = 4000;

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn from_f64(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite input")
}

pub fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().expect("oracle values fit in f64")
}

fn pow10(digits: u32) -> BigInt {
    BigInt::from(10u32).pow(digits)
}

/// Round to the working grid: nearest multiple of 10^-WORK_DIGITS.
fn trunc(x: &BigRational) -> BigRational {
    let scale = pow10(WORK_DIGITS);
    let scaled = x * BigRational::from_integer(scale.clone());
    scaled.round() / BigRational::from_integer(scale)
}

fn term_eps() -> BigRational {
    BigRational::new(BigInt::one(), pow10(TERM_EPS_DIGITS))
}

/// arctan(x) = x - x³/3 + x⁵/5 - …, for |x| <= 0.7 (callers stay well
/// inside; convergence is geometric in x²).
pub fn atan(x: &BigRational) -> BigRational {
    assert!(x.abs() <= rat(7, 10), "oracle atan needs |x| <= 0.7");
    let eps = term_eps();
    let x2 = trunc(&(x * x));
    let mut power = x.clone();
    let mut sum = x.clone();
    let mut sign_negative = true;
    for k in 1..MAX_TERMS {
        power = trunc(&(&power * &x2));
        let contrib = &power / BigRational::from_integer(BigInt::from(2 * k as i64 + 1));
        sum = if sign_negative { sum - &contrib } else { sum + &contrib };
        sign_negative = !sign_negative;
        if contrib.abs() < eps {
            return trunc(&sum);
        }
    }
    panic!("oracle atan did not converge");
}

/// π = 16·arctan(1/5) - 4·arctan(1/239).
pub fn pi() -> BigRational {
    let a = atan(&rat(1, 5));
    let b = atan(&rat(1, 239));
    trunc(&(BigRational::from_integer(BigInt::from(16)) * a
        - BigRational::from_integer(BigInt::from(4)) * b))
}

/// ln(y) = 2·atanh((y-1)/(y+1)), for y in (1/5, 5).
pub fn ln(y: &BigRational) -> BigRational {
    assert!(y > &rat(1, 5) && y < &rat(5, 1), "oracle ln needs y in (1/5, 5)");
    let one = BigRational::one();
    let z = trunc(&((y - &one) / (y + &one)));
    let z2 = trunc(&(&z * &z));
    let eps = term_eps();
    let mut power = z.clone();
    let mut sum = z;
    for k in 1..MAX_TERMS {
        power = trunc(&(&power * &z2));
        let contrib = &power / BigRational::from_integer(BigInt::from(2 * k as i64 + 1));
        sum += &contrib;
        if contrib.abs() < eps {
            return trunc(&(sum * BigRational::from_integer(BigInt::from(2))));
        }
    }
    panic!("oracle ln did not converge");
}

/// exp(y) by Taylor series, for |y| <= 2.
pub fn exp(y: &BigRational) -> BigRational {
    assert!(y.abs() <= rat(2, 1), "oracle exp needs |y| <= 2");
    let eps = term_eps();
    let mut term = BigRational::one();
    let mut sum = BigRational::one();
    for k in 1..MAX_TERMS {
        term = trunc(&(&term * y / BigRational::from_integer(BigInt::from(k as i64))));
        sum += &term;
        if term.abs() < eps {
            return trunc(&sum);
        }
    }
    panic!("oracle exp did not converge");
}

/// Newton iteration for sqrt(v), seeded from the f64 value.
pub fn sqrt(v: &BigRational) -> BigRational {
    assert!(v > &BigRational::zero(), "oracle sqrt needs v > 0");
    let mut s = from_f64(to_f64(v).sqrt());
    let half = rat(1, 2);
    // quadratic convergence: 16 digits to start, doubled each step
    for _ in 0..4 {
        s = trunc(&(&half * (&s + v / &s)));
    }
    s
}

/// The kernel f_{u,p}(x) = p·ln(1 + u·x²) + ln(arctan(x)/x) in exact
/// arithmetic (x <= 0.7, rational p).
pub fn kernel_f(u: &BigRational, p: &BigRational, x: &BigRational) -> BigRational {
    let one = BigRational::one();
    let ratio = trunc(&(atan(x) / x));
    trunc(&(p * ln(&(one + u * x * x)) + ln(&ratio)))
}

/// g(x) = [(1+x²)·arctan(x) - x] / [(2p-1)·x²·(1+x²)·arctan(x) + x³],
/// numerator and denominator evaluated separately in exact arithmetic.
pub fn kernel_g(p: &BigRational, x: &BigRational) -> BigRational {
    let one = BigRational::one();
    let two = BigRational::from_integer(BigInt::from(2));
    let q = &one + x * x;
    let at = atan(x);
    let numerator = &q * &at - x;
    let denominator = (two * p - one) * x * x * &q * &at + x * x * x;
    trunc(&(numerator / denominator))
}

/// h_p(u) = p·ln(1+u) + ln(π/4).
pub fn kernel_h(p: &BigRational, u: &BigRational) -> BigRational {
    let one = BigRational::one();
    let four = BigRational::from_integer(BigInt::from(4));
    trunc(&(p * ln(&(one + u)) + ln(&(pi() / four))))
}

/// Absolute difference between an f64 and an oracle value.
pub fn abs_err(value: f64, oracle: &BigRational) -> f64 {
    to_f64(&(from_f64(value) - oracle).abs())
}

/// Relative difference between an f64 and a nonzero oracle value.
pub fn rel_err(value: f64, oracle: &BigRational) -> f64 {
    to_f64(&((from_f64(value) - oracle) / oracle).abs())
}

#[test]
fn oracle_self_checks() {
    // π against the f64 constant
    assert!(abs_err(std::f64::consts::PI, &pi()) < 1e-15);
    // ln(2) + ln(1/2) = 0
    let sum = ln(&rat(2, 1)) + ln(&rat(1, 2));
    assert!(sum.abs() < rat(1, 1_000_000_000) / rat(10i64.pow(18), 1));
    // exp(ln(3/2)) = 3/2
    let roundtrip = exp(&ln(&rat(3, 2)));
    assert!((roundtrip - rat(3, 2)).abs() < term_eps() * rat(1000, 1));
    // sqrt(2)² = 2
    let s = sqrt(&rat(2, 1));
    assert!((&s * &s - rat(2, 1)).abs() < term_eps() * rat(1000, 1));
    // arctan(1/√3) = π/6
    let x = BigRational::one() / sqrt(&rat(3, 1));
    assert!((atan(&x) - pi() / rat(6, 1)).abs() < term_eps() * rat(1000, 1));
}
