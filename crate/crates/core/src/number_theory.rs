//! Factorization, the Moebius function and its `d`-fold Dirichlet powers.
//!
//! Arithmetic sequences are dense slices indexed from 1: entry `k` holds the
//! value at `n = k` and entry 0 is unused (always written as 0). A sequence
//! "on 1..N" therefore has length `N + 1`.

use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Prime factorization as `(prime, multiplicity)` pairs sorted by prime.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Factorization {
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    /// True for the factorization of 1.
    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Number of prime factors counted with multiplicity.
    pub fn total_multiplicity(&self) -> u32 {
        self.factors.iter().map(|&(_, m)| m).sum()
    }

    /// The factored integer. `None` if it does not fit in a `u64`.
    pub fn value(&self) -> Option<u64> {
        self.factors
            .iter()
            .try_fold(1u64, |acc, &(p, m)| acc.checked_mul(p.checked_pow(m)?))
    }
}

/// Factorizes `n` by trial division.
pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::InvalidArgument("cannot factorize 0"));
    }
    let mut rest = n;
    let mut factors = Vec::new();
    let mut push = |rest: &mut u64, p: u64| {
        let mut m = 0;
        while (*rest).is_multiple_of(p) {
            *rest /= p;
            m += 1;
        }
        if m > 0 {
            factors.push((p, m));
        }
    };
    push(&mut rest, 2);
    let mut p = 3;
    while p <= rest / p {
        push(&mut rest, p);
        p += 2;
    }
    if rest > 1 {
        factors.push((rest, 1));
    }
    Ok(Factorization { factors })
}

/// Smallest-prime-factor table for fast repeated factorization below a bound.
#[derive(Debug, Clone)]
pub struct Sieve {
    spf: Vec<u32>,
}

impl Sieve {
    /// Builds the table for `1..=limit`.
    pub fn new(limit: usize) -> Self {
        let mut spf = vec![0u32; limit + 1];
        for i in 2..=limit {
            if spf[i] == 0 {
                let mut j = i;
                while j <= limit {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                    j += i;
                }
            }
        }
        Sieve { spf }
    }

    pub fn limit(&self) -> usize {
        self.spf.len() - 1
    }

    /// Factorizes `n`, falling back to trial division above the table.
    pub fn factorize(&self, n: u64) -> Result<Factorization> {
        if n == 0 {
            return Err(Error::InvalidArgument("cannot factorize 0"));
        }
        if n as usize > self.limit() {
            return factorize(n);
        }
        let mut rest = n as usize;
        let mut factors: Vec<(u64, u32)> = Vec::new();
        while rest > 1 {
            let p = self.spf[rest] as usize;
            let mut m = 0;
            while rest.is_multiple_of(p) {
                rest /= p;
                m += 1;
            }
            factors.push((p as u64, m));
        }
        Ok(Factorization { factors })
    }

    pub fn is_prime(&self, n: u64) -> bool {
        if n as usize <= self.limit() {
            n >= 2 && self.spf[n as usize] as u64 == n
        } else {
            is_prime(n)
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut p = 2;
    while p <= n / p {
        if n.is_multiple_of(p) {
            return false;
        }
        p += 1;
    }
    true
}

/// Exact binomial coefficient, zero when `k > n`. `None` on `u128` overflow.
pub fn binomial(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) at every step
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

pub fn mobius(n: u64) -> i64 {
    assert!(n >= 1, "mobius is defined on positive integers");
    let f = factorize(n).expect("n >= 1");
    mobius_of(&f)
}

fn mobius_of(f: &Factorization) -> i64 {
    if f.factors.iter().any(|&(_, m)| m > 1) {
        0
    } else if f.factors.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `mu_d(n) = prod (-1)^{m_i} C(d, m_i)` over the factorization of `n`.
///
/// Panics if the value does not fit in an `i64` (only for very large `d`).
pub fn mobius_d(d: u32, n: u64) -> i64 {
    assert!(d >= 1 && n >= 1, "mobius_d needs d >= 1 and n >= 1");
    let f = factorize(n).expect("n >= 1");
    mobius_d_of(d, &f)
}

pub fn mobius_d_of(d: u32, f: &Factorization) -> i64 {
    let mut acc: i128 = 1;
    for &(_, m) in &f.factors {
        let c = binomial(d as u64, m as u64).expect("binomial overflow in mobius_d");
        if c == 0 {
            return 0;
        }
        let c = i128::try_from(c).expect("binomial overflow in mobius_d");
        acc = acc.checked_mul(c).expect("mobius_d overflow");
        if m % 2 == 1 {
            acc = -acc;
        }
    }
    i64::try_from(acc).expect("mobius_d overflow")
}

/// `mu` on `1..=n_max` (index 0 unused).
pub fn mobius_table(n_max: usize) -> Vec<i64> {
    mobius_d_table(1, n_max)
}

/// `mu_d` on `1..=n_max` (index 0 unused), via the closed product formula.
pub fn mobius_d_table(d: u32, n_max: usize) -> Vec<i64> {
    let sieve = Sieve::new(n_max);
    let mut out = vec![0i64; n_max + 1];
    for (n, slot) in out.iter_mut().enumerate().skip(1) {
        *slot = mobius_d_of(d, &sieve.factorize(n as u64).expect("n >= 1"));
    }
    out
}

/// `mu_d` on `1..=n_max` as `d - 1` explicit Dirichlet convolutions of `mu`.
pub fn mobius_d_by_convolution(d: u32, n_max: usize) -> Vec<i64> {
    assert!(d >= 1);
    let mu = mobius_table(n_max);
    let mut acc = mu.clone();
    for _ in 1..d {
        acc = dirichlet_convolve(&acc, &mu).expect("equal lengths");
    }
    acc
}

/// `(a * b)(n) = sum_{i | n} a(i) b(n / i)` on `1..N`.
pub fn dirichlet_convolve(a: &[i64], b: &[i64]) -> Result<Vec<i64>> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let n_max = a.len().saturating_sub(1);
    let mut out = vec![0i64; a.len()];
    for i in 1..=n_max {
        if a[i] == 0 {
            continue;
        }
        let mut j = 1;
        while i * j <= n_max {
            out[i * j] += a[i] * b[j];
            j += 1;
        }
    }
    Ok(out)
}

/// The constant sequence `1` on `1..=n_max`.
pub fn ones(n_max: usize) -> Vec<i64> {
    let mut v = vec![1i64; n_max + 1];
    v[0] = 0;
    v
}

/// The convolution identity `delta` on `1..=n_max`.
pub fn delta(n_max: usize) -> Vec<i64> {
    let mut v = vec![0i64; n_max + 1];
    if n_max >= 1 {
        v[1] = 1;
    }
    v
}

/// All positive divisors of `n`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1;
    while i <= n / i {
        if n.is_multiple_of(i) {
            small.push(i);
            if i != n / i {
                large.push(n / i);
            }
        }
        i += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

#[cfg(test)]
mod tests {
    use super::*;

    const MU1: [i64; 15] = [1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0, -1, 1, 1];
    const MU2: [i64; 15] = [1, -2, -2, 1, -2, 4, -2, 0, 1, 4, -2, -2, -2, 4, 4];
    const MU3: [i64; 15] = [1, -3, -3, 3, -3, 9, -3, -1, 3, 9, -3, -9, -3, 9, 9];

    #[test]
    fn factorize_examples() {
        assert!(factorize(1).unwrap().is_empty());
        assert_eq!(factorize(12).unwrap().factors(), &[(2, 2), (3, 1)]);
        assert_eq!(factorize(40).unwrap().factors(), &[(2, 3), (5, 1)]);
        assert_eq!(
            factorize(0),
            Err(Error::InvalidArgument("cannot factorize 0"))
        );
        assert_eq!(factorize(999_983).unwrap().factors(), &[(999_983, 1)]);
    }

    #[test]
    fn sieve_matches_trial_division() {
        let sieve = Sieve::new(5000);
        for n in 1..=6000u64 {
            assert_eq!(
                sieve.factorize(n).unwrap(),
                factorize(n).unwrap(),
                "n = {n}"
            );
            assert_eq!(sieve.factorize(n).unwrap().value(), Some(n));
        }
    }

    #[test]
    fn mobius_examples() {
        assert_eq!(mobius(1), 1);
        assert_eq!(mobius(6), 1);
        assert_eq!(mobius(12), 0);
        assert_eq!(mobius_d(2, 6), 4);
        assert_eq!(mobius_d(3, 8), -1);
        for d in 1..6 {
            assert_eq!(mobius_d(d, 1), 1);
        }
    }

    #[test]
    fn tables_match_published_rows() {
        for (d, row) in [(1, MU1), (2, MU2), (3, MU3)] {
            assert_eq!(&mobius_d_table(d, 15)[1..], &row[..]);
            assert_eq!(&mobius_d_by_convolution(d, 15)[1..], &row[..]);
        }
    }

    #[test]
    fn convolution_identities() {
        let n = 12;
        assert_eq!(
            dirichlet_convolve(&mobius_table(n), &ones(n)).unwrap(),
            delta(n)
        );
        let a: Vec<i64> = (0..=n as i64).map(|k| k * k - 3).collect();
        let mut expect = a.clone();
        expect[0] = 0;
        assert_eq!(dirichlet_convolve(&delta(n), &a).unwrap(), expect);
        let mu = mobius_table(15);
        assert_eq!(&dirichlet_convolve(&mu, &mu).unwrap()[1..], &MU2[..]);
        assert_eq!(
            dirichlet_convolve(&mu, &ones(3)),
            Err(Error::LengthMismatch { left: 16, right: 4 })
        );
    }

    #[test]
    fn divisor_sum_of_mobius_vanishes() {
        let mu = mobius_table(10_000);
        let mut sums = vec![0i64; 10_001];
        for i in 1..=10_000 {
            let mut j = i;
            while j <= 10_000 {
                sums[j] += mu[i];
                j += i;
            }
        }
        assert_eq!(sums[1], 1);
        assert!(sums[2..].iter().all(|&s| s == 0));
    }

    #[test]
    fn product_formula_agrees_with_convolution_route() {
        for d in 1..=5 {
            assert_eq!(
                mobius_d_table(d, 2000),
                mobius_d_by_convolution(d, 2000),
                "d = {d}"
            );
        }
    }

    #[test]
    fn mobius_d_one_is_mobius() {
        let mu = mobius_table(10_000);
        for n in 1..=10_000u64 {
            assert_eq!(mobius_d(1, n), mu[n as usize]);
        }
    }

    #[test]
    fn multiplicative_on_coprime_pairs() {
        for d in 1..=4 {
            let t = mobius_d_table(d, 1_000_000);
            for a in 1..=1000u64 {
                for b in (1..=1000u64).step_by(7) {
                    if num_integer::gcd(a, b) == 1 {
                        assert_eq!(t[(a * b) as usize], t[a as usize] * t[b as usize]);
                    }
                }
            }
        }
    }

    #[test]
    fn block_magnitude_bound() {
        // n < 2^{k+1} has at most k prime factors, so |mu_d(n)| <= d^k.
        for d in 1..=5u32 {
            let t = mobius_d_table(d, 4096);
            for k in 0..12u32 {
                let lo = 1usize << k;
                let hi = (1usize << (k + 1)).min(4097);
                for n in lo..hi {
                    assert!(t[n].unsigned_abs() <= (d as u64).pow(k), "d={d} n={n}");
                }
            }
        }
    }

    #[test]
    fn binomial_vanishes_above_n() {
        assert_eq!(binomial(3, 4), Some(0));
        assert_eq!(binomial(5, 2), Some(10));
        assert_eq!(binomial(0, 0), Some(1));
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(1), vec![1]);
    }
}
