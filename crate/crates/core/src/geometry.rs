//! Exact boxes in the unit hypercube and decompositions built by splitting.
//!
//! Axes are 0-based in this API: a `d`-dimensional region has axes
//! `0..d`.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;

use crate::number_theory::divisors;
use crate::{Error, Fraction, Result};

/// Open box `(lo_0, hi_0) x ... x (lo_{d-1}, hi_{d-1})` inside `(0,1)^d`.
///
/// Ordered lexicographically by the per-axis `(lo, hi)` endpoint pairs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Region {
    bounds: Vec<(Fraction, Fraction)>,
}

impl Region {
    pub fn new(bounds: Vec<(Fraction, Fraction)>) -> Result<Self> {
        if bounds.is_empty() {
            return Err(Error::InvalidArgument("a region needs at least one axis"));
        }
        for &(lo, hi) in &bounds {
            if !(lo < hi && hi <= Fraction::ONE) {
                return Err(Error::InvalidFraction);
            }
        }
        Ok(Region { bounds })
    }

    /// `(0,1)^d`.
    pub fn unit(dim: usize) -> Self {
        Region {
            bounds: vec![(Fraction::ZERO, Fraction::ONE); dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.bounds.len()
    }

    pub fn bounds(&self) -> &[(Fraction, Fraction)] {
        &self.bounds
    }

    pub fn interval(&self, axis: usize) -> (Fraction, Fraction) {
        self.bounds[axis]
    }

    /// Componentwise closed containment of `other` in `self`.
    pub fn contains(&self, other: &Region) -> bool {
        self.dim() == other.dim()
            && self
                .bounds
                .iter()
                .zip(&other.bounds)
                .all(|(&(a, b), &(c, e))| a <= c && e <= b)
    }

    /// True if the open boxes do not meet.
    pub fn is_disjoint(&self, other: &Region) -> bool {
        self.bounds
            .iter()
            .zip(&other.bounds)
            .any(|(&(a, b), &(c, e))| b <= c || e <= a)
    }

    pub fn volume(&self) -> Result<Fraction> {
        self.bounds
            .iter()
            .try_fold(Fraction::ONE, |acc, &(lo, hi)| {
                acc.checked_mul(hi.checked_sub(lo)?)
            })
    }
}

/// Cuts `region` into `p` equal slabs orthogonal to `axis`, lowest first.
pub fn split(region: &Region, axis: usize, p: u64) -> Result<Vec<Region>> {
    if p < 2 {
        return Err(Error::InvalidArgument("split arity must be at least 2"));
    }
    if axis >= region.dim() {
        return Err(Error::AxisOutOfRange {
            axis,
            dim: region.dim(),
        });
    }
    let (lo, hi) = region.bounds[axis];
    let width = hi.checked_sub(lo)?;
    let cut =
        |j: u64| -> Result<Fraction> { lo.checked_add(width.checked_mul(Fraction::new(j, p)?)?) };
    let mut out = Vec::with_capacity(p as usize);
    let mut prev = lo;
    for j in 1..=p {
        let next = if j == p { hi } else { cut(j)? };
        let mut bounds = region.bounds.clone();
        bounds[axis] = (prev, next);
        out.push(Region { bounds });
        prev = next;
    }
    Ok(out)
}

/// Image of `inner` under the order-preserving affine map taking `from` onto
/// `to`. `inner` must lie inside `from`.
pub fn scale_map(from: &Region, to: &Region, inner: &Region) -> Result<Region> {
    if from.dim() != to.dim() || from.dim() != inner.dim() {
        return Err(Error::DimensionMismatch {
            expected: from.dim(),
            found: if from.dim() != to.dim() {
                to.dim()
            } else {
                inner.dim()
            },
        });
    }
    if !from.contains(inner) {
        return Err(Error::NotContained);
    }
    let mut bounds = Vec::with_capacity(from.dim());
    for axis in 0..from.dim() {
        let (a, b) = from.bounds[axis];
        let (a2, b2) = to.bounds[axis];
        let (x, y) = inner.bounds[axis];
        let ratio = b2.checked_sub(a2)?.checked_div(b.checked_sub(a)?)?;
        let map = |t: Fraction| -> Result<Fraction> {
            a2.checked_add(ratio.checked_mul(t.checked_sub(a)?)?)
        };
        bounds.push((map(x)?, map(y)?));
    }
    Ok(Region { bounds })
}

/// A finite set of regions partitioning `(0,1)^d`, stored sorted so that
/// equal decompositions are structurally equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Decomposition {
    dim: usize,
    regions: Vec<Region>,
}

impl Decomposition {
    /// `{(0,1)^d}`.
    pub fn trivial(dim: usize) -> Self {
        Decomposition {
            dim,
            regions: vec![Region::unit(dim)],
        }
    }

    /// Wraps a region list without checking that it partitions the cube.
    /// See [`Decomposition::is_partition`] and
    /// [`Decomposition::is_split_generated`].
    pub fn from_regions(dim: usize, mut regions: Vec<Region>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("dimension must be positive"));
        }
        if regions.is_empty() {
            return Err(Error::InvalidArgument(
                "a decomposition has at least one region",
            ));
        }
        if let Some(r) = regions.iter().find(|r| r.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: r.dim(),
            });
        }
        regions.sort();
        Ok(Decomposition { dim, regions })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn regions(&self) -> &[Region] {
        &self.regions
    }

    pub fn len(&self) -> usize {
        self.regions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.regions.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.regions.len() == 1
    }

    /// Replaces region `index` by its `p`-split along `axis`.
    pub fn split_region(&self, index: usize, axis: usize, p: u64) -> Result<Self> {
        let target = self
            .regions
            .get(index)
            .ok_or(Error::InvalidArgument("region index out of range"))?;
        let pieces = split(target, axis, p)?;
        let mut regions = Vec::with_capacity(self.regions.len() + pieces.len() - 1);
        regions.extend(self.regions[..index].iter().cloned());
        regions.extend(self.regions[index + 1..].iter().cloned());
        regions.extend(pieces);
        regions.sort();
        Ok(Decomposition {
            dim: self.dim,
            regions,
        })
    }

    /// Splits the region containing `point_region` (which must be an existing
    /// region of `self`). Convenience for building fixtures by hand.
    pub fn split_matching(&self, region: &Region, axis: usize, p: u64) -> Result<Self> {
        let index = self
            .regions
            .iter()
            .position(|r| r == region)
            .ok_or(Error::InvalidArgument(
                "region not present in decomposition",
            ))?;
        self.split_region(index, axis, p)
    }

    pub fn total_volume(&self) -> Result<Fraction> {
        self.regions
            .iter()
            .try_fold(Fraction::ZERO, |acc, r| acc.checked_add(r.volume()?))
    }

    /// Volumes sum to one and the regions are pairwise disjoint.
    pub fn is_partition(&self) -> bool {
        if self.total_volume() != Ok(Fraction::ONE) {
            return false;
        }
        for (i, a) in self.regions.iter().enumerate() {
            for b in &self.regions[i + 1..] {
                if !a.is_disjoint(b) {
                    return false;
                }
            }
        }
        true
    }

    /// True iff `self` is obtained from the `r` grid by further splits: every
    /// region lies in one grid cell and each cell, rescaled to the unit cube,
    /// holds a split-generated decomposition.
    ///
    /// Containment alone is weaker. Halving `(0,1)`, cutting the left half
    /// in thirds and halving the middle third gives regions that each fit a
    /// quarter, yet the first quarter holds the cut `2/3`.
    pub fn refines_grid(&self, r: &[u64]) -> bool {
        self.fits_grid(r)
            && grid_cells(r).iter().all(|cell| {
                self.restrict_rescale(cell)
                    .map(|sub| sub.split_generated_rec())
                    .unwrap_or(false)
            })
    }

    /// True iff every region sits inside a single cell of the `r` grid.
    pub fn fits_grid(&self, r: &[u64]) -> bool {
        r.len() == self.dim
            && r.iter()
                .enumerate()
                .all(|(axis, &ri)| self.fits_axis(axis, ri))
    }

    fn fits_axis(&self, axis: usize, parts: u64) -> bool {
        parts >= 1
            && self.regions.iter().all(|region| {
                let (lo, hi) = region.bounds[axis];
                let cell = lo.floor_times(parts);
                hi.times_at_most(parts, cell + 1)
            })
    }

    /// Per-axis lcm of the endpoint denominators: the coarsest grid that
    /// refines `self`.
    pub fn lcm(&self) -> Vec<u64> {
        (0..self.dim)
            .map(|axis| {
                self.regions.iter().fold(1u64, |acc, r| {
                    let (lo, hi) = r.bounds[axis];
                    acc.lcm(&lo.denom()).lcm(&hi.denom())
                })
            })
            .collect()
    }

    /// The componentwise-largest `r` with `self.refines_grid(r)`, found one
    /// axis at a time. The answer divides the lcm on each axis because `1/r`
    /// must be a region endpoint.
    pub fn gcd(&self) -> Vec<u64> {
        self.lcm()
            .into_iter()
            .enumerate()
            .map(|(axis, l)| {
                divisors(l)
                    .into_iter()
                    .rev()
                    .find(|&p| self.refines_axis(axis, p))
                    .unwrap_or(1)
            })
            .collect()
    }

    fn refines_axis(&self, axis: usize, p: u64) -> bool {
        let mut r = vec![1; self.dim];
        r[axis] = p;
        self.fits_axis(axis, p) && self.refines_grid(&r)
    }

    /// The regions inside `cell`, rescaled onto `(0,1)^d`. Regions disjoint
    /// from `cell` are dropped; a region crossing its boundary is an error.
    pub fn restrict_rescale(&self, cell: &Region) -> Result<Self> {
        if cell.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: cell.dim(),
            });
        }
        let unit = Region::unit(self.dim);
        let mut regions = Vec::new();
        for r in &self.regions {
            if cell.contains(r) {
                regions.push(scale_map(cell, &unit, r)?);
            } else if !cell.is_disjoint(r) {
                return Err(Error::Straddling);
            }
        }
        if regions.is_empty() {
            return Err(Error::InvalidArgument("cell contains no region"));
        }
        Decomposition::from_regions(self.dim, regions)
    }

    /// The regions of `self` mapped from the unit cube into `cell`.
    pub fn scaled_into(&self, cell: &Region) -> Result<Vec<Region>> {
        let unit = Region::unit(self.dim);
        self.regions
            .iter()
            .map(|r| scale_map(&unit, cell, r))
            .collect()
    }

    /// Whether `self` can be produced from the trivial decomposition by
    /// splits: either it is trivial, or it refines some slab grid with
    /// `p >= 2` slabs along one axis.
    pub fn is_split_generated(&self) -> bool {
        self.is_partition() && self.split_generated_rec()
    }

    fn split_generated_rec(&self) -> bool {
        if self.is_trivial() {
            return true;
        }
        let lcm = self.lcm();
        (0..self.dim).any(|axis| {
            divisors(lcm[axis])
                .into_iter()
                .any(|p| p >= 2 && self.refines_axis(axis, p))
        })
    }

    /// Every decomposition obtained from `self` by one `p`-split.
    pub fn children_with_arity(&self, p: u64) -> impl Iterator<Item = Decomposition> + '_ {
        (0..self.regions.len()).flat_map(move |index| {
            (0..self.dim).map(move |axis| {
                self.split_region(index, axis, p)
                    .expect("index, axis and arity are in range")
            })
        })
    }
}

/// The cells of the uniform `r` grid in lexicographic order of their
/// per-axis cell indices (axis 0 slowest).
pub fn grid_cells(r: &[u64]) -> Vec<Region> {
    let mut cells = vec![Vec::<(Fraction, Fraction)>::new()];
    for &parts in r {
        let mut next = Vec::with_capacity(cells.len() * parts as usize);
        for prefix in &cells {
            for j in 0..parts {
                let mut b = prefix.clone();
                b.push((
                    Fraction::new(j, parts).expect("parts >= 1"),
                    Fraction::new(j + 1, parts).expect("parts >= 1"),
                ));
                next.push(b);
            }
        }
        cells = next;
    }
    cells.into_iter().map(|bounds| Region { bounds }).collect()
}

/// `D_(r_1..r_d)`: the uniform grid with `r_i` slabs along axis `i`.
pub fn grid_decomposition(r: &[u64]) -> Result<Decomposition> {
    if r.is_empty() || r.contains(&0) {
        return Err(Error::InvalidArgument("grid sizes must be positive"));
    }
    Decomposition::from_regions(r.len(), grid_cells(r))
}

pub fn refines_grid(s: &Decomposition, r: &[u64]) -> bool {
    s.refines_grid(r)
}

pub fn gcd_of(s: &Decomposition) -> Vec<u64> {
    s.gcd()
}

pub fn lcm_of(s: &Decomposition) -> Vec<u64> {
    s.lcm()
}

pub fn restrict_rescale(s: &Decomposition, cell: &Region) -> Result<Decomposition> {
    s.restrict_rescale(cell)
}

/// All split-generated decompositions of `(0,1)^d` with `1..=n` regions,
/// indexed by region count (index 0 is empty). Each level is sorted.
///
/// A decomposition with `m` regions arises from one with `m' < m` regions by
/// a single `(m - m' + 1)`-split, so each level is the closure of all lower
/// levels under splits of the matching arity.
pub fn enumerate_levels(d: usize, n: usize) -> Vec<Vec<Decomposition>> {
    assert!(d >= 1, "dimension must be positive");
    let mut levels: Vec<Vec<Decomposition>> = vec![Vec::new(); n + 1];
    if n == 0 {
        return levels;
    }
    levels[1] = vec![Decomposition::trivial(d)];
    for m in 2..=n {
        let mut seen = BTreeSet::new();
        for smaller in 1..m {
            let p = (m - smaller + 1) as u64;
            for s in &levels[smaller] {
                seen.extend(s.children_with_arity(p));
            }
        }
        levels[m] = seen.into_iter().collect();
    }
    levels
}

/// The set of split-generated decompositions with exactly `n` regions.
pub fn enumerate_decompositions(d: usize, n: usize) -> Vec<Decomposition> {
    enumerate_levels(d, n).pop().unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(n: u64, d: u64) -> Fraction {
        Fraction::new(n, d).unwrap()
    }

    fn region(b: &[(u64, u64, u64, u64)]) -> Region {
        Region::new(b.iter().map(|&(a, b, c, d)| (f(a, b), f(c, d))).collect()).unwrap()
    }

    /// Thirds along axis 0, then the middle third in quarters along axis 1,
    /// the right third in halves along axis 1, and its lower half in halves
    /// along axis 0 (eight regions).
    fn eight_region_square() -> Decomposition {
        let s = grid_decomposition(&[3, 1]).unwrap();
        let s = s
            .split_matching(&region(&[(1, 3, 2, 3), (0, 1, 1, 1)]), 1, 4)
            .unwrap();
        let s = s
            .split_matching(&region(&[(2, 3, 1, 1), (0, 1, 1, 1)]), 1, 2)
            .unwrap();
        s.split_matching(&region(&[(2, 3, 1, 1), (0, 1, 1, 2)]), 0, 2)
            .unwrap()
    }

    fn eleven_region_square() -> Decomposition {
        let s = grid_decomposition(&[3, 2]).unwrap();
        let s = s
            .split_matching(&region(&[(1, 3, 2, 3), (0, 1, 1, 2)]), 1, 2)
            .unwrap();
        let s = s
            .split_matching(&region(&[(1, 3, 2, 3), (1, 2, 1, 1)]), 1, 2)
            .unwrap();
        let s = s
            .split_matching(&region(&[(2, 3, 1, 1), (0, 1, 1, 2)]), 0, 2)
            .unwrap();
        s.split_matching(&region(&[(2, 3, 1, 1), (1, 2, 1, 1)]), 1, 3)
            .unwrap()
    }

    #[test]
    fn split_examples() {
        let halves = split(&Region::unit(1), 0, 2).unwrap();
        assert_eq!(
            halves,
            vec![region(&[(0, 1, 1, 2)]), region(&[(1, 2, 1, 1)])]
        );
        let strips = split(&Region::unit(2), 0, 3).unwrap();
        assert_eq!(strips.len(), 3);
        for (j, s) in strips.iter().enumerate() {
            let j = j as u64;
            assert_eq!(s, &region(&[(j, 3, j + 1, 3), (0, 1, 1, 1)]));
        }
        let r = region(&[(1, 2, 1, 1), (0, 1, 1, 2)]);
        assert_eq!(
            split(&r, 0, 2).unwrap(),
            vec![
                region(&[(1, 2, 3, 4), (0, 1, 1, 2)]),
                region(&[(3, 4, 1, 1), (0, 1, 1, 2)])
            ]
        );
        assert!(split(&r, 0, 1).is_err());
        assert_eq!(
            split(&r, 2, 2),
            Err(Error::AxisOutOfRange { axis: 2, dim: 2 })
        );
    }

    #[test]
    fn grid_examples() {
        assert_eq!(
            grid_decomposition(&[1, 1]).unwrap(),
            Decomposition::trivial(2)
        );
        let g = grid_decomposition(&[3, 4]).unwrap();
        assert_eq!(g.len(), 12);
        assert!(g.is_partition());
        let six = grid_decomposition(&[6]).unwrap();
        assert_eq!(six.len(), 6);
        assert!(six.regions().iter().all(|r| r.volume().unwrap() == f(1, 6)));
    }

    #[test]
    fn scale_map_examples() {
        let r = region(&[(1, 4, 1, 2), (0, 1, 1, 3)]);
        let inner = region(&[(1, 3, 1, 2), (0, 1, 1, 4)]);
        assert_eq!(scale_map(&r, &r, &inner).unwrap(), inner);
        assert_eq!(
            scale_map(
                &Region::unit(1),
                &region(&[(0, 1, 1, 2)]),
                &region(&[(1, 2, 1, 1)])
            )
            .unwrap(),
            region(&[(1, 4, 1, 2)])
        );
        assert_eq!(
            scale_map(
                &region(&[(0, 1, 1, 2), (0, 1, 1, 1)]),
                &Region::unit(2),
                &region(&[(0, 1, 1, 4), (0, 1, 1, 2)])
            )
            .unwrap(),
            region(&[(0, 1, 1, 2), (0, 1, 1, 2)])
        );
        assert_eq!(
            scale_map(
                &region(&[(0, 1, 1, 2)]),
                &Region::unit(1),
                &region(&[(1, 4, 3, 4)])
            ),
            Err(Error::NotContained)
        );
    }

    #[test]
    fn refinement_gcd_lcm_on_drawn_examples() {
        let s1 = grid_decomposition(&[3, 2]).unwrap();
        let s2 = eight_region_square();
        let s3 = eleven_region_square();
        assert_eq!(s2.len(), 8);
        assert_eq!(s3.len(), 11);
        for s in [&s1, &s2, &s3] {
            assert!(s.is_partition());
            assert!(s.refines_grid(&[1, 1]));
        }
        assert!(s1.refines_grid(&[3, 2]));
        assert!(!s2.refines_grid(&[3, 2]));
        assert_eq!(s1.gcd(), vec![3, 2]);
        assert_eq!(s2.gcd(), vec![3, 1]);
        assert_eq!(s3.gcd(), vec![3, 2]);
        assert_eq!(s1.lcm(), vec![3, 2]);
        assert_eq!(s2.lcm(), vec![6, 4]);
        assert_eq!(s3.lcm(), vec![6, 12]);
        assert_eq!(Decomposition::trivial(3).gcd(), vec![1, 1, 1]);
        assert_eq!(Decomposition::trivial(3).lcm(), vec![1, 1, 1]);
        let quarters = Decomposition::trivial(1)
            .split_region(0, 0, 2)
            .unwrap()
            .split_matching(&region(&[(1, 2, 1, 1)]), 0, 2)
            .unwrap();
        assert_eq!(quarters.gcd(), vec![2]);
        assert_eq!(quarters.lcm(), vec![4]);
    }

    #[test]
    fn restrict_rescale_examples() {
        let s = eight_region_square();
        assert_eq!(s.restrict_rescale(&Region::unit(2)).unwrap(), s);
        let g = grid_decomposition(&[2, 2]).unwrap();
        let left = region(&[(0, 1, 1, 2), (0, 1, 1, 1)]);
        assert_eq!(
            g.restrict_rescale(&left).unwrap(),
            grid_decomposition(&[1, 2]).unwrap()
        );
        let middle = region(&[(1, 3, 2, 3), (0, 1, 1, 1)]);
        assert_eq!(
            s.restrict_rescale(&middle).unwrap(),
            grid_decomposition(&[1, 4]).unwrap()
        );
        let right = region(&[(2, 3, 1, 1), (0, 1, 1, 1)]);
        let expected = Decomposition::from_regions(
            2,
            vec![
                region(&[(0, 1, 1, 2), (0, 1, 1, 2)]),
                region(&[(1, 2, 1, 1), (0, 1, 1, 2)]),
                region(&[(0, 1, 1, 1), (1, 2, 1, 1)]),
            ],
        )
        .unwrap();
        assert_eq!(s.restrict_rescale(&right).unwrap(), expected);
        let straddle = region(&[(0, 1, 1, 2), (0, 1, 1, 1)]);
        assert_eq!(s.restrict_rescale(&straddle), Err(Error::Straddling));
    }

    #[test]
    fn enumeration_small_counts() {
        assert_eq!(
            enumerate_decompositions(2, 1),
            vec![Decomposition::trivial(2)]
        );
        let counts: Vec<usize> = enumerate_levels(1, 6).iter().map(Vec::len).collect();
        assert_eq!(counts, vec![0, 1, 1, 3, 10, 39, 160]);
        assert_eq!(enumerate_decompositions(2, 4).len(), 59);
    }

    #[test]
    fn duplicate_paths_converge() {
        let direct = Decomposition::trivial(1).split_region(0, 0, 6).unwrap();
        let halves = Decomposition::trivial(1).split_region(0, 0, 2).unwrap();
        let left = halves.split_region(0, 0, 3).unwrap();
        let both = left.split_matching(&region(&[(1, 2, 1, 1)]), 0, 3).unwrap();
        assert_eq!(direct, both);
    }

    #[test]
    fn enumerated_invariants() {
        for (d, n) in [(1, 7), (2, 5), (3, 4)] {
            for level in enumerate_levels(d, n) {
                for s in level {
                    assert_eq!(s.total_volume().unwrap(), Fraction::ONE);
                    assert!(s.is_split_generated());
                    let g = s.gcd();
                    let l = s.lcm();
                    assert!(s.refines_grid(&g));
                    for axis in 0..d {
                        assert_eq!(l[axis] % g[axis], 0);
                        let mut bigger = g.clone();
                        bigger[axis] *= 2;
                        assert!(!s.refines_grid(&bigger));
                        bigger[axis] = g[axis] * 3;
                        assert!(!s.refines_grid(&bigger));
                    }
                }
            }
        }
    }

    #[test]
    fn gcd_needs_split_refinement() {
        let s = Decomposition::trivial(1).split_region(0, 0, 2).unwrap();
        let s = s.split_matching(&region(&[(0, 1, 1, 2)]), 0, 3).unwrap();
        let s = s.split_matching(&region(&[(1, 6, 1, 3)]), 0, 2).unwrap();
        let s = s.split_matching(&region(&[(1, 2, 1, 1)]), 0, 2).unwrap();
        assert_eq!(s.len(), 6);
        assert!(s.fits_grid(&[4]));
        assert!(!s.refines_grid(&[4]));
        assert_eq!(s.gcd(), vec![2]);
        assert_eq!(s.lcm(), vec![12]);
    }

    #[test]
    fn non_split_partitions_are_rejected() {
        let uneven =
            Decomposition::from_regions(1, vec![region(&[(0, 1, 1, 3)]), region(&[(1, 3, 1, 1)])])
                .unwrap();
        assert!(uneven.is_partition());
        assert!(!uneven.is_split_generated());
        let gap = Decomposition::from_regions(1, vec![region(&[(0, 1, 1, 3)])]).unwrap();
        assert!(!gap.is_partition());
    }
}
