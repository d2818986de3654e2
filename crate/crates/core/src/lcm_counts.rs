//! Counts of decompositions by grid: `g(r)` counts the decompositions that
//! the `r` grid refines (every region a union of grid cells), `h(r)` those
//! whose lcm is exactly `r`.
//!
//! With `q` ranging over divisor vectors of `r` and `mu(q) = prod mu(q_i)`:
//!
//! * `g(r) = 1 - sum_{q != 1} mu(q) g(r / q)^(prod q)`
//! * `h(r) = sum_q mu(q) g(r / q)`

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Pow};

use crate::number_theory::{divisors, mobius};
use crate::{Error, Result};

/// Memoized evaluator for `g` and `h`.
///
/// Results are cached under the exact key and under its sorted form, since
/// both functions are symmetric in the coordinates.
#[derive(Debug, Default, Clone)]
pub struct LcmCounter {
    exact: BTreeMap<Vec<u64>, BigInt>,
    symmetric: BTreeMap<Vec<u64>, BigInt>,
}

impl LcmCounter {
    pub fn new() -> Self {
        Self::default()
    }

    /// Number of cached `g` values.
    pub fn cached(&self) -> usize {
        self.symmetric.len()
    }

    pub fn g(&mut self, r: &[u64]) -> Result<BigInt> {
        validate(r)?;
        Ok(self.g_rec(r))
    }

    pub fn h(&mut self, r: &[u64]) -> Result<BigInt> {
        validate(r)?;
        let mut total = BigInt::from(0);
        for (q, sign) in squarefree_divisor_vectors(r) {
            let reduced: Vec<u64> = r.iter().zip(&q).map(|(a, b)| a / b).collect();
            let g = self.g_rec(&reduced);
            if sign > 0 {
                total += g;
            } else {
                total -= g;
            }
        }
        Ok(total)
    }

    fn g_rec(&mut self, r: &[u64]) -> BigInt {
        if let Some(v) = self.exact.get(r) {
            return v.clone();
        }
        let mut key = r.to_vec();
        key.sort_unstable();
        if let Some(v) = self.symmetric.get(&key) {
            let v = v.clone();
            self.exact.insert(r.to_vec(), v.clone());
            return v;
        }
        let mut total = BigInt::one();
        for (q, sign) in squarefree_divisor_vectors(r) {
            let cells: u64 = q.iter().product();
            if cells == 1 {
                continue;
            }
            let reduced: Vec<u64> = r.iter().zip(&q).map(|(a, b)| a / b).collect();
            let term = Pow::pow(self.g_rec(&reduced), cells);
            if sign > 0 {
                total -= term;
            } else {
                total += term;
            }
        }
        self.exact.insert(r.to_vec(), total.clone());
        self.symmetric.insert(key, total.clone());
        total
    }
}

fn validate(r: &[u64]) -> Result<()> {
    if r.is_empty() {
        return Err(Error::InvalidArgument("grid vector must be nonempty"));
    }
    if r.contains(&0) {
        return Err(Error::InvalidArgument("grid entries must be positive"));
    }
    Ok(())
}

/// Divisor vectors `q` of `r` with every `q_i` squarefree, paired with
/// `prod mu(q_i)`. Other divisor vectors contribute zero.
fn squarefree_divisor_vectors(r: &[u64]) -> Vec<(Vec<u64>, i64)> {
    let mut out = vec![(Vec::with_capacity(r.len()), 1i64)];
    for &ri in r {
        let options: Vec<(u64, i64)> = divisors(ri)
            .into_iter()
            .map(|q| (q, mobius(q)))
            .filter(|&(_, m)| m != 0)
            .collect();
        let mut next = Vec::with_capacity(out.len() * options.len());
        for (prefix, sign) in &out {
            for &(q, m) in &options {
                let mut v = prefix.clone();
                v.push(q);
                next.push((v, sign * m));
            }
        }
        out = next;
    }
    out
}

/// `g(r)` with a fresh cache.
pub fn g_count(r: &[u64]) -> Result<BigInt> {
    LcmCounter::new().g(r)
}

/// `h(r)` with a fresh cache.
pub fn h_count(r: &[u64]) -> Result<BigInt> {
    LcmCounter::new().h(r)
}
