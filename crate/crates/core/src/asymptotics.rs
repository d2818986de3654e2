//! Floating-point evaluation of `M_d(x) = sum mu_d(n) x^n` and its first two
//! derivatives with certified truncation tails, the saddle point of `M_d`,
//! the growth rate `K_d = 1 / M_d(s)` and the resulting asymptotic estimate
//! of `s_d(n)`.
//!
//! Partial sums run over `n < 2^k`. Tail bounds, with `N = 2^k`:
//!
//! * `d >= 2`, `k >= 3`: `2 d^k x^N` on `[0, 1/d]` for `M`, and
//!   `2^(k+1) d^k x^(N-1)` on `[0, 1/(2d)]` for `M'`.
//! * `d = 1`: `|mu| <= 1` gives geometric tails on `[0, 1)`.
//! * `M''`, any `d`: blocks `2^l <= n < 2^(l+1)` have `n(n-1) < 4^(l+1)` and
//!   `|mu_d(n)| <= d^l`, giving
//!   `4^(k+1) d^k x^(N-2) / ((1-x)(1 - 4d x^N))` whenever `4d x^N < 1`.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::number_theory::mobius_d_table;
use crate::{Error, Result};

/// Truncation exponent used unless a caller asks for more.
pub const DEFAULT_TRUNCATION: u32 = 6;
/// Root-finding tolerance on `|M_d'(s)|` used unless a caller asks otherwise.
pub const DEFAULT_TOL: f64 = 1e-12;

const MAX_TRUNCATION: u32 = 12;

/// A partial sum together with a bound on the absolute value of the omitted
/// tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Certified {
    pub value: f64,
    pub tail: f64,
}

/// The saddle point of `M_d` and the quantities derived from it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaddleResult {
    pub d: u32,
    pub s: f64,
    pub m_at_s: f64,
    pub m1_at_s: f64,
    pub m2_at_s: f64,
    pub growth_rate: f64,
    /// Certified half-width of an interval around `growth_rate` containing
    /// `1 / max M_d` on the bracket.
    pub growth_rate_error: f64,
    pub truncation_order: u32,
    pub tail_bound_used: f64,
}

fn check_k(k: u32) -> Result<()> {
    if !(3..=MAX_TRUNCATION).contains(&k) {
        return Err(Error::InvalidArgument(
            "truncation exponent must be in 3..=12",
        ));
    }
    Ok(())
}

fn coefficients(d: u32, k: u32) -> Vec<f64> {
    let n = (1usize << k) - 1;
    mobius_d_table(d, n).into_iter().map(|m| m as f64).collect()
}

fn powi(x: f64, n: u64) -> f64 {
    libm::pow(x, n as f64)
}

/// `sum_{n < 2^k} mu_d(n) x^n` and its certified tail.
pub fn eval_m(d: u32, x: f64, k: u32) -> Result<Certified> {
    check_k(k)?;
    let upper = if d >= 2 { 1.0 / d as f64 } else { 1.0 };
    if !(0.0..=upper).contains(&x) || (d == 1 && x >= 1.0) || d == 0 {
        return Err(Error::OutOfCertifiedRange);
    }
    let mu = coefficients(d, k);
    let mut value = 0.0;
    for &c in mu.iter().skip(1).rev() {
        value = (value + c) * x;
    }
    let big_n = 1u64 << k;
    let tail = if d >= 2 {
        2.0 * powi(d as f64, k as u64) * powi(x, big_n)
    } else {
        powi(x, big_n) / (1.0 - x)
    };
    Ok(Certified { value, tail })
}

/// `sum_{n < 2^k} n mu_d(n) x^(n-1)` and its certified tail.
pub fn eval_m_prime(d: u32, x: f64, k: u32) -> Result<Certified> {
    check_k(k)?;
    let upper = if d >= 2 { 1.0 / (2.0 * d as f64) } else { 1.0 };
    if !(0.0..=upper).contains(&x) || (d == 1 && x >= 1.0) || d == 0 {
        return Err(Error::OutOfCertifiedRange);
    }
    let mu = coefficients(d, k);
    let mut value = 0.0;
    for n in (1..mu.len()).rev() {
        value = value * x + n as f64 * mu[n];
    }
    let big_n = 1u64 << k;
    let tail = if d >= 2 {
        powi(2.0, k as u64 + 1) * powi(d as f64, k as u64) * powi(x, big_n - 1)
    } else {
        // derivative of x^N / (1 - x)
        let nf = big_n as f64;
        powi(x, big_n - 1) * (nf / (1.0 - x) + x / ((1.0 - x) * (1.0 - x)))
    };
    Ok(Certified { value, tail })
}

/// `sum_{n < 2^k} n (n-1) mu_d(n) x^(n-2)` and its certified tail.
pub fn eval_m_second(d: u32, x: f64, k: u32) -> Result<Certified> {
    check_k(k)?;
    if d == 0 || !(0.0..1.0).contains(&x) {
        return Err(Error::OutOfCertifiedRange);
    }
    let big_n = 1u64 << k;
    let mu = coefficients(d, k);
    let mut value = 0.0;
    for n in (2..mu.len()).rev() {
        value = value * x + (n * (n - 1)) as f64 * mu[n];
    }
    let tail = if d >= 2 {
        let ratio = 4.0 * d as f64 * powi(x, big_n);
        if ratio >= 1.0 {
            return Err(Error::OutOfCertifiedRange);
        }
        powi(4.0, k as u64 + 1) * powi(d as f64, k as u64) * powi(x, big_n - 2)
            / ((1.0 - x) * (1.0 - ratio))
    } else {
        // second derivative of x^N / (1 - x)
        let nf = big_n as f64;
        let one = 1.0 - x;
        nf * (nf - 1.0) * powi(x, big_n - 2) / one
            + 2.0 * nf * powi(x, big_n - 1) / (one * one)
            + 2.0 * powi(x, big_n) / (one * one * one)
    };
    Ok(Certified { value, tail })
}

/// The end points of the bracket searched for the root of `M_d'`.
pub fn saddle_bracket(d: u32) -> (f64, f64) {
    if d >= 2 {
        let df = d as f64;
        let k1 = (4.0 * df + 5.0) / ((4.0 * df + 5.0) * (2.0 * df + 1.0) + 1.0);
        let k2 = (df - 1.0) / df * k1 + 1.0 / (df * (2.0 * df + 1.0));
        (k1, k2)
    } else {
        (0.1, 0.45)
    }
}

/// Smallest `k >= DEFAULT_TRUNCATION` whose tails at `x` are below
/// `tol / 10` for `M`, `M'` and `M''`.
fn truncation_for(d: u32, x: f64, tol: f64) -> Result<u32> {
    for k in DEFAULT_TRUNCATION..=MAX_TRUNCATION {
        let t = eval_m(d, x, k)?
            .tail
            .max(eval_m_prime(d, x, k)?.tail)
            .max(eval_m_second(d, x, k)?.tail);
        if t < tol / 10.0 {
            return Ok(k);
        }
    }
    Err(Error::OutOfCertifiedRange)
}

/// Locates the first positive root `s` of `M_d'` by bisection on a bracket
/// whose end point signs are certified, and evaluates `M_d`, `M_d''` and
/// `K_d = 1 / M_d(s)` there.
pub fn find_saddle(d: u32, tol: f64) -> Result<SaddleResult> {
    if d == 0 {
        return Err(Error::InvalidArgument("dimension must be positive"));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument("tolerance must be positive"));
    }
    let (mut lo, mut hi) = saddle_bracket(d);
    let k = truncation_for(d, hi, tol)?;
    let positive = |x: f64| -> Result<bool> {
        let c = eval_m_prime(d, x, k)?;
        Ok(c.value - c.tail > 0.0)
    };
    let negative = |x: f64| -> Result<bool> {
        let c = eval_m_prime(d, x, k)?;
        Ok(c.value + c.tail < 0.0)
    };
    if d == 1 {
        // scan for the first certified sign change inside [0.1, 0.45]
        let steps = 70;
        let width = (hi - lo) / steps as f64;
        let mut found = None;
        let mut prev = lo;
        if !positive(prev)? {
            return Err(Error::BracketNotFound);
        }
        for i in 1..=steps {
            let x = lo + width * i as f64;
            if negative(x)? {
                found = Some((prev, x));
                break;
            }
            if positive(x)? {
                prev = x;
            }
        }
        (lo, hi) = found.ok_or(Error::BracketNotFound)?;
    } else if !(positive(lo)? && negative(hi)?) {
        return Err(Error::BracketNotFound);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if eval_m_prime(d, mid, k)?.value > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let s = 0.5 * (lo + hi);
    let m1 = eval_m_prime(d, s, k)?;
    if libm::fabs(m1.value) > tol {
        return Err(Error::BracketNotFound);
    }
    let m = eval_m(d, s, k)?;
    let m2 = eval_m_second(d, s, k)?;
    let growth_rate = 1.0 / m.value;
    // M is within tail + rounding of the true value, and flat to second order
    // at s; the root is located to within the bracket width.
    let width = hi - lo;
    let slack = m.tail
        + 64.0 * f64::EPSILON * libm::fabs(m.value)
        + 0.5 * (libm::fabs(m2.value) + m2.tail) * width * width
        + (libm::fabs(m1.value) + m1.tail) * width;
    let growth_rate_error = slack / ((m.value - slack) * m.value);
    Ok(SaddleResult {
        d,
        s,
        m_at_s: m.value,
        m1_at_s: m1.value,
        m2_at_s: m2.value,
        growth_rate,
        growth_rate_error,
        truncation_order: k,
        tail_bound_used: m.tail.max(m1.tail).max(m2.tail),
    })
}

/// Natural log of `1/sqrt(-2 pi M''(s)) * n^(-3/2) * M(s)^(1/2 - n)`.
pub fn ln_asymptotic_estimate_at(saddle: &SaddleResult, n: u64) -> f64 {
    let nf = n as f64;
    -0.5 * libm::log(-2.0 * core::f64::consts::PI * saddle.m2_at_s) - 1.5 * libm::log(nf)
        + (0.5 - nf) * libm::log(saddle.m_at_s)
}

/// `1/sqrt(-2 pi M''(s)) * n^(-3/2) * M(s)^(1/2 - n)`; overflows to
/// infinity for large `n`, see [`ln_asymptotic_estimate`].
pub fn asymptotic_estimate(d: u32, n: u64) -> Result<f64> {
    Ok(libm::exp(ln_asymptotic_estimate(d, n)?))
}

pub fn ln_asymptotic_estimate(d: u32, n: u64) -> Result<f64> {
    let saddle = find_saddle(d, DEFAULT_TOL)?;
    Ok(ln_asymptotic_estimate_at(&saddle, n))
}

/// Natural log of a positive big integer.
pub fn big_ln(x: &BigInt) -> f64 {
    if !x.is_positive() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1000 {
        return libm::log(x.to_f64().unwrap_or(f64::INFINITY));
    }
    let shift = bits - 64;
    let top: BigInt = x >> shift;
    libm::log(top.to_f64().unwrap_or(f64::INFINITY)) + shift as f64 * core::f64::consts::LN_2
}

/// `a / b` in floating point for big integers of any size.
pub fn big_ratio(a: &BigInt, b: &BigInt) -> f64 {
    if b.is_zero() {
        return f64::NAN;
    }
    let sign = if a.is_negative() != b.is_negative() {
        -1.0
    } else {
        1.0
    };
    sign * libm::exp(big_ln(&a.abs()) - big_ln(&b.abs()))
}

/// Whether the certified interval around `K_d` lies inside
/// `[4d + 3/2, 4d + 3/2 + 1/(16d)]`. Only defined for `d >= 2`.
pub fn check_growth_bounds(d: u32) -> Result<bool> {
    if d < 2 {
        return Err(Error::InvalidArgument(
            "growth bounds are stated for d >= 2",
        ));
    }
    let r = find_saddle(d, DEFAULT_TOL)?;
    let df = d as f64;
    let lower = 4.0 * df + 1.5;
    let upper = lower + 1.0 / (16.0 * df);
    Ok(
        r.growth_rate - r.growth_rate_error >= lower
            && r.growth_rate + r.growth_rate_error <= upper,
    )
}
