//! Truncated formal power series with exact big-integer coefficients.
//!
//! Every binary operation truncates to the smaller of the two operand
//! orders; nothing beyond `x^order` is ever read or produced.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::number_theory::mobius_d_table;
use crate::{Error, Result};

/// Coefficients of `x^0 .. x^order`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    coeffs: Vec<BigInt>,
}

impl TruncatedSeries {
    /// Builds a series from its coefficients; the order is `coeffs.len() - 1`.
    ///
    /// Panics on an empty coefficient vector.
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "a truncated series has at least one coefficient"
        );
        TruncatedSeries { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero(order: usize) -> Self {
        Self::new(vec![BigInt::zero(); order + 1])
    }

    /// `c * x^k`, truncated at `order`.
    pub fn monomial(c: BigInt, k: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    /// The series `x`.
    pub fn x(order: usize) -> Self {
        Self::monomial(BigInt::one(), 1, order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `x^n`; zero above the order.
    pub fn coeff(&self, n: usize) -> BigInt {
        self.coeffs.get(n).cloned().unwrap_or_default()
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coefficients(self) -> Vec<BigInt> {
        self.coeffs
    }

    pub fn truncate(&self, order: usize) -> Self {
        let keep = order.min(self.order());
        Self::new(self.coeffs[..=keep].to_vec())
    }

    /// Index of the lowest nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Truncated product.
    pub fn mul_trunc(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let mut out = vec![BigInt::zero(); order + 1];
        for (i, a) in self.coeffs[..=order].iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=order - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Self::new(out)
    }

    /// Truncated `k`-th power by repeated squaring.
    pub fn pow(&self, k: u32) -> Self {
        let mut result = Self::monomial(BigInt::one(), 0, self.order());
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul_trunc(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_trunc(&base);
            }
        }
        result
    }

    /// `self(inner(x))` by Horner's rule. `inner` must have zero constant term.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.coeff(0).is_zero() {
            return Err(Error::InvalidArgument(
                "inner series of a composition needs a zero constant term",
            ));
        }
        let order = self.order().min(inner.order());
        let inner = inner.truncate(order);
        let mut acc = Self::monomial(self.coeffs[order].clone(), 0, order);
        for c in self.coeffs[..order].iter().rev() {
            acc = acc.mul_trunc(&inner);
            acc.coeffs[0] += c;
        }
        Ok(acc)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&BigInt, &BigInt) -> BigInt) -> Self {
        let order = self.order().min(other.order());
        Self::new(
            (0..=order)
                .map(|i| f(&self.coeffs[i], &other.coeffs[i]))
                .collect(),
        )
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: Self) -> TruncatedSeries {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: Self) -> TruncatedSeries {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: Self) -> TruncatedSeries {
        self.mul_trunc(rhs)
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        TruncatedSeries::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

/// Truncated `k`-th power of `base`.
pub fn series_power(base: &TruncatedSeries, k: u32) -> TruncatedSeries {
    base.pow(k)
}

/// `M_d(z) = sum_{n >= 1} mu_d(n) z^n` to order `order`.
pub fn mobius_series(d: u32, order: usize) -> TruncatedSeries {
    let mut mu = mobius_d_table(d, order);
    mu[0] = 0;
    TruncatedSeries::from_i64(&mu)
}

/// Solves `y = x + sum_{k >= 2} weights[k] * y^k` coefficient by coefficient.
///
/// `[x^n] y^k` for `k >= 2` only involves `y_1 .. y_{n-1}`, so a table of
/// power coefficients is extended one column at a time: `O(order^3)` big
/// integer products. `weights[0]` and `weights[1]` are ignored; missing
/// weights are zero.
pub fn power_fixed_point(weights: &[BigInt], order: usize) -> TruncatedSeries {
    let mut y = vec![BigInt::zero(); order + 1];
    if order == 0 {
        return TruncatedSeries::new(y);
    }
    // powers[k][m] = [x^m] y^k for 1 <= k <= m <= order
    let mut powers: Vec<Vec<BigInt>> = vec![Vec::new(); order + 1];
    for row in powers.iter_mut().skip(1) {
        *row = vec![BigInt::zero(); order + 1];
    }
    y[1] = BigInt::one();
    powers[1][1] = BigInt::one();
    for n in 2..=order {
        for k in 2..=n {
            // y^k = y * y^{k-1}; y^{k-1} starts at x^{k-1}
            let mut acc = BigInt::zero();
            for j in 1..=n - (k - 1) {
                let left = &y[j];
                if left.is_zero() {
                    continue;
                }
                let right = &powers[k - 1][n - j];
                if !right.is_zero() {
                    acc += left * right;
                }
            }
            powers[k][n] = acc;
        }
        let mut s = BigInt::zero();
        for k in 2..=n {
            if let Some(w) = weights.get(k) {
                if !w.is_zero() {
                    s += w * &powers[k][n];
                }
            }
        }
        powers[1][n] = s.clone();
        y[n] = s;
    }
    TruncatedSeries::new(y)
}

/// `y = sum s_d(n) x^n`, the compositional inverse of `M_d`, to order `order`.
///
/// Uses `s_d(1) = 1` and `s_d(n) = -sum_{k=2}^{n} mu_d(k) [x^n] y^k`.
pub fn decomposition_counts(d: u32, order: usize) -> TruncatedSeries {
    let mu = mobius_d_table(d, order.max(1));
    let weights: Vec<BigInt> = mu.iter().map(|&m| BigInt::from(-m)).collect();
    power_fixed_point(&weights, order)
}

/// `a_d(0..=order)`: the coefficients of `z / M_d(z)`.
pub fn auxiliary_counts(d: u32, order: usize) -> TruncatedSeries {
    let mu = mobius_d_table(d, order + 1);
    let mut a = vec![BigInt::zero(); order + 1];
    a[0] = BigInt::one();
    for n in 1..=order {
        let mut acc = BigInt::zero();
        for k in 2..=n + 1 {
            if mu[k] != 0 {
                acc -= &a[n + 1 - k] * mu[k];
            }
        }
        a[n] = acc;
    }
    TruncatedSeries::new(a)
}

/// Number of decompositions with `n` regions whose gcd is exactly `r`,
/// as `sum_{m >= 1} mu_d(m) y^{m * prod(r)}`.
pub fn refined_counts(d: u32, r: &[u64], order: usize) -> Result<TruncatedSeries> {
    if r.len() != d as usize {
        return Err(Error::DimensionMismatch {
            expected: d as usize,
            found: r.len(),
        });
    }
    if r.contains(&0) {
        return Err(Error::InvalidArgument("gcd entries must be positive"));
    }
    let mut out = TruncatedSeries::zero(order);
    let cells = r
        .iter()
        .try_fold(1u64, |acc, &ri| acc.checked_mul(ri))
        .filter(|&c| c as usize <= order);
    let Some(cells) = cells else {
        return Ok(out);
    };
    let cells = cells as usize;
    let max_m = order / cells;
    let mu = mobius_d_table(d, max_m);
    let y = decomposition_counts(d, order);
    let base = y.pow(cells as u32);
    let mut power = base.clone();
    for (m, &mu_m) in mu.iter().enumerate().skip(1) {
        if m > 1 {
            power = power.mul_trunc(&base);
        }
        if mu_m != 0 {
            out = &out + &power.scale(&BigInt::from(mu_m));
        }
    }
    Ok(out)
}

/// `s_d(n)` by Lagrange inversion, `s_d(n) = [z^{n-1}] phi(z)^n / n` with
/// `phi = z / M_d(z)`. Independent of [`decomposition_counts`].
pub fn decomposition_counts_lagrange(d: u32, order: usize) -> TruncatedSeries {
    let mut y = vec![BigInt::zero(); order + 1];
    if order == 0 {
        return TruncatedSeries::new(y);
    }
    let phi = auxiliary_counts(d, order - 1);
    let mut power = TruncatedSeries::monomial(BigInt::one(), 0, order - 1);
    for n in 1..=order {
        power = power.mul_trunc(&phi);
        let (q, rem) = power.coeff(n - 1).div_rem(&BigInt::from(n));
        debug_assert!(rem.is_zero());
        y[n] = q;
    }
    TruncatedSeries::new(y)
}

/// Indices `n < n_max` with `a_d(n+1) > (d+1) a_d(n)`.
pub fn auxiliary_ratio_excesses(d: u32, n_max: usize) -> Vec<usize> {
    let a = auxiliary_counts(d, n_max);
    let c = a.coefficients();
    (0..n_max).filter(|&n| c[n + 1] > &c[n] * (d + 1)).collect()
}

/// True if every coefficient is non-negative.
pub fn is_nonnegative(s: &TruncatedSeries) -> bool {
    s.coefficients().iter().all(|c| !c.is_negative())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(s: &TruncatedSeries) -> Vec<i64> {
        s.coefficients()
            .iter()
            .map(|c| i64::try_from(c).unwrap())
            .collect()
    }

    #[test]
    fn mobius_series_examples() {
        assert_eq!(ints(&mobius_series(1, 6)), vec![0, 1, -1, -1, 0, -1, 1]);
        assert_eq!(ints(&mobius_series(2, 4)), vec![0, 1, -2, -2, 1]);
        assert_eq!(ints(&mobius_series(5, 1)), vec![0, 1]);
    }

    #[test]
    fn decomposition_count_rows() {
        assert_eq!(
            &ints(&decomposition_counts(1, 10))[1..],
            &[1, 1, 3, 10, 39, 160, 691, 3081, 14095, 65757]
        );
        assert_eq!(
            &ints(&decomposition_counts(2, 5))[1..],
            &[1, 2, 10, 59, 394]
        );
        assert_eq!(
            decomposition_counts(3, 10).coeff(10),
            BigInt::from(256_245_783)
        );
    }

    #[test]
    fn auxiliary_rows() {
        assert_eq!(
            ints(&auxiliary_counts(1, 10)),
            vec![1, 1, 2, 3, 6, 9, 17, 28, 50, 83, 147]
        );
        assert_eq!(ints(&auxiliary_counts(3, 5)), vec![1, 3, 12, 42, 156, 558]);
        assert_eq!(ints(&auxiliary_counts(4, 0)), vec![1]);
    }

    #[test]
    fn power_examples() {
        let x = TruncatedSeries::x(5);
        assert_eq!(series_power(&x, 1), x);
        let s = TruncatedSeries::from_i64(&[0, 1, 1, 0]);
        assert_eq!(
            series_power(&s, 2),
            TruncatedSeries::from_i64(&[0, 0, 1, 2])
        );
        // (x + x^2 + 3x^3 + 10x^4)^2 = x^2 + 2x^3 + (1 + 6)x^4
        let y = decomposition_counts(1, 4);
        assert_eq!(ints(&series_power(&y, 2)), vec![0, 0, 1, 2, 7]);
        assert_eq!(
            series_power(&y, 0),
            TruncatedSeries::from_i64(&[1, 0, 0, 0, 0])
        );
    }

    #[test]
    fn operations_truncate_to_min_order() {
        let a = TruncatedSeries::from_i64(&[1, 2, 3, 4]);
        let b = TruncatedSeries::from_i64(&[5, 6]);
        assert_eq!((&a + &b).order(), 1);
        assert_eq!((&a * &b), TruncatedSeries::from_i64(&[5, 16]));
        assert_eq!((&a - &a), TruncatedSeries::zero(3));
        assert!(a.compose(&b).is_err());
    }

    #[test]
    fn reversion_round_trip() {
        for d in 1..=4 {
            let y = decomposition_counts(d, 60);
            let back = mobius_series(d, 60).compose(&y).unwrap();
            assert_eq!(back, TruncatedSeries::x(60), "d = {d}");
        }
    }

    #[test]
    fn lagrange_route_agrees() {
        for d in 1..=4 {
            assert_eq!(
                decomposition_counts(d, 40),
                decomposition_counts_lagrange(d, 40),
                "d = {d}"
            );
        }
    }

    #[test]
    fn multiplicative_inverse() {
        for d in 1..=5 {
            let prod = mobius_series(d, 50).mul_trunc(&auxiliary_counts(d, 50));
            assert_eq!(prod, TruncatedSeries::x(50));
        }
    }

    #[test]
    fn ratio_bounds_on_auxiliary_counts() {
        for d in 1..=6u32 {
            let a = auxiliary_counts(d, 120);
            let c = a.coefficients();
            assert!(is_nonnegative(&a));
            for n in 0..120 {
                assert!(c[n + 1] >= (&c[n] * d), "lower bound d={d} n={n}");
                if d >= 3 {
                    assert!(c[n + 1] <= (&c[n] * (d + 1)), "upper bound d={d} n={n}");
                }
            }
        }
    }

    #[test]
    fn upper_ratio_bound_observed_for_small_d() {
        // only claimed for d >= 3; reported for d = 1, 2
        for d in 1..=2 {
            let bad = auxiliary_ratio_excesses(d, 200);
            std::println!("d={d}: a_d(n+1) > (d+1) a_d(n) at {bad:?} for n < 200");
        }
        for d in 3..=5 {
            assert!(auxiliary_ratio_excesses(d, 200).is_empty());
        }
    }

    #[test]
    fn closed_forms_in_d() {
        // a_d(3) = d^3 + 3/2 d^2 + 1/2 d, a_d(6) = d^6 + 3d^5 + 21/4 d^4 + 9/2 d^3 + 9/4 d^2 + d
        for d in 1..=10i64 {
            let a = auxiliary_counts(d as u32, 6);
            assert_eq!(a.coeff(3) * 2, BigInt::from(2 * d.pow(3) + 3 * d * d + d));
            let four_a6 =
                4 * d.pow(6) + 12 * d.pow(5) + 21 * d.pow(4) + 18 * d.pow(3) + 9 * d * d + 4 * d;
            assert_eq!(a.coeff(6) * 4, BigInt::from(four_a6));
        }
    }

    #[test]
    fn refined_all_ones_is_x() {
        for d in 1..=3 {
            let ones = vec![1u64; d as usize];
            assert_eq!(
                refined_counts(d, &ones, 12).unwrap(),
                TruncatedSeries::x(12)
            );
        }
    }

    #[test]
    fn refined_d1_gcd_two() {
        // y^2 - y^4 - y^6: at x^4 this is 7 - 1 = 6.
        let s = refined_counts(1, &[2], 6).unwrap();
        assert_eq!(s.coeff(4), BigInt::from(6));
        assert_eq!(s.coeff(2), BigInt::from(1));
        assert!(refined_counts(2, &[2], 6).is_err());
        assert_eq!(
            refined_counts(1, &[7], 6).unwrap(),
            TruncatedSeries::zero(6)
        );
    }

    #[test]
    fn refined_partition_of_s2() {
        let order = 5;
        let y = decomposition_counts(2, order);
        let mut total = TruncatedSeries::zero(order);
        for r1 in 1..=order as u64 {
            for r2 in 1..=order as u64 {
                total = &total + &refined_counts(2, &[r1, r2], order).unwrap();
            }
        }
        assert_eq!(total, y);
        assert_eq!(total.coeff(5), BigInt::from(394));
    }

    #[test]
    fn refinement_sum_identity() {
        // sum over multiples (a1 r1, .., ad rd) of the refined series is y^{prod r}
        let order = 10usize;
        for d in 1..=2u32 {
            let y = decomposition_counts(d, order);
            let mut r_vectors: Vec<Vec<u64>> = vec![vec![]];
            for _ in 0..d {
                r_vectors = r_vectors
                    .into_iter()
                    .flat_map(|v| {
                        (1..=3u64).map(move |x| {
                            let mut w = v.clone();
                            w.push(x);
                            w
                        })
                    })
                    .collect();
            }
            for r in r_vectors {
                let mut total = TruncatedSeries::zero(order);
                let mut stack: Vec<Vec<u64>> = vec![vec![]];
                while let Some(prefix) = stack.pop() {
                    if prefix.len() == d as usize {
                        let q: Vec<u64> = prefix.iter().zip(&r).map(|(a, b)| a * b).collect();
                        total = &total + &refined_counts(d, &q, order).unwrap();
                        continue;
                    }
                    let used: u64 = prefix.iter().zip(&r).map(|(a, b)| a * b).product();
                    let rest: u64 = r[prefix.len() + 1..].iter().product();
                    let ri = r[prefix.len()];
                    let mut a = 1;
                    while used * a * ri * rest <= order as u64 {
                        let mut next = prefix.clone();
                        next.push(a);
                        stack.push(next);
                        a += 1;
                    }
                }
                let prod: u64 = r.iter().product();
                assert_eq!(total, y.pow(prod as u32), "d={d} r={r:?}");
            }
        }
    }
}
