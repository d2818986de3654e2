//! Natural exact covering systems: residue classes built by repeatedly
//! splitting one class into `r` classes, and the map from 1-dimensional
//! decompositions onto them.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_integer::Integer;

use crate::geometry::{grid_cells, Decomposition};
use crate::number_theory::divisors;
use crate::{Error, Fraction, Result};

/// The residue class `a mod n` with `0 <= a < n`.
///
/// Ordered by modulus, then representative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ResidueClass {
    a: u64,
    n: u64,
}

impl ResidueClass {
    pub fn new(a: u64, n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("modulus must be positive"));
        }
        if a >= n {
            return Err(Error::InvalidArgument(
                "representative must be below the modulus",
            ));
        }
        Ok(ResidueClass { a, n })
    }

    /// `0 mod 1`, all of the integers.
    pub fn all() -> Self {
        ResidueClass { a: 0, n: 1 }
    }

    pub fn residue(&self) -> u64 {
        self.a
    }

    pub fn modulus(&self) -> u64 {
        self.n
    }

    /// `E_{i,r}`: the class `(i*n + a) mod r*n`.
    pub fn part(&self, i: u64, r: u64) -> Result<Self> {
        if i >= r {
            return Err(Error::InvalidArgument("part index must be below r"));
        }
        let n = self.n.checked_mul(r).ok_or(Error::Overflow)?;
        let a = i
            .checked_mul(self.n)
            .and_then(|x| x.checked_add(self.a))
            .ok_or(Error::Overflow)?;
        Ok(ResidueClass { a, n })
    }

    /// The image `{r*x + j : x in self}` = `(r*a + j) mod r*n`.
    pub fn interleave(&self, j: u64, r: u64) -> Result<Self> {
        if j >= r {
            return Err(Error::InvalidArgument("offset must be below r"));
        }
        let n = self.n.checked_mul(r).ok_or(Error::Overflow)?;
        let a = self
            .a
            .checked_mul(r)
            .and_then(|x| x.checked_add(j))
            .ok_or(Error::Overflow)?;
        Ok(ResidueClass { a, n })
    }

    /// Classes `a mod n` and `b mod m` meet iff `a = b mod gcd(n, m)`.
    pub fn intersects(&self, other: &ResidueClass) -> bool {
        let g = self.n.gcd(&other.n);
        self.a % g == other.a % g
    }

    pub fn density(&self) -> Fraction {
        Fraction::new(1, self.n).expect("modulus is positive")
    }
}

impl Ord for ResidueClass {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.n, self.a).cmp(&(other.n, other.a))
    }
}

impl PartialOrd for ResidueClass {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ResidueClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.a, self.n)
    }
}

/// `E_{i,r}(c)` for `i = 0..r`; these partition `c`.
pub fn split_class(c: &ResidueClass, r: u64) -> Result<Vec<ResidueClass>> {
    if r < 2 {
        return Err(Error::InvalidArgument("split arity must be at least 2"));
    }
    (0..r).map(|i| c.part(i, r)).collect()
}

/// A set of residue classes kept sorted by (modulus, representative).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Necs {
    classes: Vec<ResidueClass>,
}

impl Necs {
    /// `{0 mod 1}`.
    pub fn trivial() -> Self {
        Necs {
            classes: vec![ResidueClass::all()],
        }
    }

    /// Sorts `classes`; rejects anything that is not a natural exact
    /// covering system.
    pub fn new(classes: Vec<ResidueClass>) -> Result<Self> {
        let c = Self::from_classes_unchecked(classes);
        if !c.is_partition() {
            return Err(Error::InvalidArgument(
                "classes do not partition the integers",
            ));
        }
        if !c.is_natural() {
            return Err(Error::InvalidArgument("covering is not built by splitting"));
        }
        Ok(c)
    }

    pub fn from_classes_unchecked(mut classes: Vec<ResidueClass>) -> Self {
        classes.sort();
        Necs { classes }
    }

    pub fn classes(&self) -> &[ResidueClass] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Densities sum to one and the classes are pairwise disjoint.
    pub fn is_partition(&self) -> bool {
        let total = self
            .classes
            .iter()
            .try_fold(Fraction::ZERO, |acc, c| acc.checked_add(c.density()));
        if total != Ok(Fraction::ONE) {
            return false;
        }
        self.classes
            .iter()
            .enumerate()
            .all(|(i, a)| self.classes[i + 1..].iter().all(|b| !a.intersects(b)))
    }

    /// Whether the system arises from `{0 mod 1}` by splits. Assumes
    /// [`Necs::is_partition`].
    pub fn is_natural(&self) -> bool {
        if self.classes.len() == 1 {
            return self.classes[0] == ResidueClass::all();
        }
        let g = self.gcd();
        divisors(g).into_iter().filter(|&r| r >= 2).any(|r| {
            (0..r).all(|j| {
                let part: Vec<ResidueClass> = self
                    .classes
                    .iter()
                    .filter(|c| c.a % r == j)
                    .map(|c| ResidueClass {
                        a: c.a / r,
                        n: c.n / r,
                    })
                    .collect();
                !part.is_empty() && Necs::from_classes_unchecked(part).is_natural()
            })
        })
    }

    /// Replaces class `index` by its `r` parts.
    pub fn split_at(&self, index: usize, r: u64) -> Result<Self> {
        let target = self
            .classes
            .get(index)
            .ok_or(Error::InvalidArgument("class index out of range"))?;
        let parts = split_class(target, r)?;
        let mut classes = Vec::with_capacity(self.classes.len() + parts.len() - 1);
        classes.extend(self.classes[..index].iter().copied());
        classes.extend(self.classes[index + 1..].iter().copied());
        classes.extend(parts);
        Ok(Self::from_classes_unchecked(classes))
    }

    pub fn gcd(&self) -> u64 {
        self.classes.iter().fold(0, |acc, c| acc.gcd(&c.n))
    }

    pub fn lcm(&self) -> u64 {
        self.classes.iter().fold(1, |acc, c| acc.lcm(&c.n))
    }
}

impl fmt::Display for Necs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, c) in self.classes.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("}")
    }
}

pub fn gcd_necs(c: &Necs) -> u64 {
    c.gcd()
}

pub fn lcm_necs(c: &Necs) -> u64 {
    c.lcm()
}

/// All natural exact covering systems with `1..=n` classes, indexed by class
/// count; each level sorted.
pub fn enumerate_necs_levels(n: usize) -> Vec<Vec<Necs>> {
    let mut levels: Vec<Vec<Necs>> = vec![Vec::new(); n + 1];
    if n == 0 {
        return levels;
    }
    levels[1] = vec![Necs::trivial()];
    for m in 2..=n {
        let mut seen = BTreeSet::new();
        for smaller in 1..m {
            let r = (m - smaller + 1) as u64;
            for c in &levels[smaller] {
                for index in 0..c.len() {
                    seen.insert(c.split_at(index, r).expect("arity is at least 2"));
                }
            }
        }
        levels[m] = seen.into_iter().collect();
    }
    levels
}

/// The natural exact covering systems with exactly `n` classes.
pub fn enumerate_necs(n: usize) -> Vec<Necs> {
    enumerate_necs_levels(n).pop().unwrap_or_default()
}

/// Sends a split-generated decomposition of `(0,1)` to a covering system.
///
/// With `r` the gcd of `s`, block `j` of the `r` grid is rescaled to a
/// decomposition `s_j`, mapped recursively, and every class of the image is
/// sent to `(r*a + j) mod r*n`.
pub fn phi(s: &Decomposition) -> Result<Necs> {
    if s.dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: s.dim(),
        });
    }
    if s.is_trivial() {
        return Ok(Necs::trivial());
    }
    let r = s.gcd()[0];
    if r < 2 {
        return Err(Error::InvalidArgument(
            "decomposition is not split-generated",
        ));
    }
    let mut classes = Vec::with_capacity(s.len());
    for (j, block) in grid_cells(&[r]).iter().enumerate() {
        let inner = phi(&s.restrict_rescale(block)?)?;
        for c in inner.classes() {
            classes.push(c.interleave(j as u64, r)?);
        }
    }
    Ok(Necs::from_classes_unchecked(classes))
}
