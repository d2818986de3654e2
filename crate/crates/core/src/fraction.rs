//! Non-negative rationals in lowest terms with 64-bit parts.

use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use num_integer::Integer;

use crate::{Error, Result};

/// A non-negative rational `num / den` kept in lowest terms, so structural
/// equality is value equality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fraction {
    num: u64,
    den: u64,
}

impl Fraction {
    pub const ZERO: Fraction = Fraction { num: 0, den: 1 };
    pub const ONE: Fraction = Fraction { num: 1, den: 1 };

    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidFraction);
        }
        let g = num.gcd(&den);
        Ok(Fraction {
            num: num / g,
            den: den / g,
        })
    }

    fn from_wide(num: u128, den: u128) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidFraction);
        }
        let g = num.gcd(&den);
        let num = u64::try_from(num / g).map_err(|_| Error::Overflow)?;
        let den = u64::try_from(den / g).map_err(|_| Error::Overflow)?;
        Ok(Fraction { num, den })
    }

    pub fn integer(n: u64) -> Self {
        Fraction { num: n, den: 1 }
    }

    pub fn numer(&self) -> u64 {
        self.num
    }

    pub fn denom(&self) -> u64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn checked_add(self, rhs: Self) -> Result<Self> {
        let (a, b, c, d) = self.wide(rhs);
        Self::from_wide(a * d + c * b, b * d)
    }

    /// `self - rhs`; an error if the result would be negative.
    pub fn checked_sub(self, rhs: Self) -> Result<Self> {
        let (a, b, c, d) = self.wide(rhs);
        let (l, r) = (a * d, c * b);
        if l < r {
            return Err(Error::InvalidArgument("negative fraction"));
        }
        Self::from_wide(l - r, b * d)
    }

    pub fn checked_mul(self, rhs: Self) -> Result<Self> {
        let (a, b, c, d) = self.wide(rhs);
        Self::from_wide(a * c, b * d)
    }

    pub fn checked_div(self, rhs: Self) -> Result<Self> {
        if rhs.num == 0 {
            return Err(Error::InvalidArgument("division by zero"));
        }
        let (a, b, c, d) = self.wide(rhs);
        Self::from_wide(a * d, b * c)
    }

    /// `floor(self * k)`.
    pub fn floor_times(self, k: u64) -> u128 {
        self.num as u128 * k as u128 / self.den as u128
    }

    /// True iff `self * k <= bound`.
    pub fn times_at_most(self, k: u64, bound: u128) -> bool {
        self.num as u128 * k as u128 <= bound * self.den as u128
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    fn wide(self, rhs: Self) -> (u128, u128, u128, u128) {
        (
            self.num as u128,
            self.den as u128,
            rhs.num as u128,
            rhs.den as u128,
        )
    }
}

impl Ord for Fraction {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl PartialOrd for Fraction {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Always `num/den`, including `0/1` and `1/1`.
impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Accepts `"a/b"` or a bare integer `"a"`.
impl FromStr for Fraction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parse = |t: &str| t.trim().parse::<u64>().map_err(|_| Error::InvalidFraction);
        match s.split_once('/') {
            Some((n, d)) => Fraction::new(parse(n)?, parse(d)?),
            None => Ok(Fraction::integer(parse(s)?)),
        }
    }
}
