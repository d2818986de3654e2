//! Sequences of coloured prime sets: a signed combinatorial model for the
//! auxiliary counts `a_d(n)`, a sign-reversing pairing on it, and the
//! injection behind `a_d(n+1) >= d * a_d(n)`.
//!
//! Colours are 1-based; sequence positions are 0-based.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::number_theory::{factorize, is_prime};
use crate::{Error, Result};

/// A prime with a colour in `1..=d`. Ordered by prime, then colour.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColouredPrime {
    pub prime: u64,
    pub colour: u32,
}

impl ColouredPrime {
    pub fn new(prime: u64, colour: u32) -> Result<Self> {
        if !is_prime(prime) {
            return Err(Error::InvalidArgument("not a prime"));
        }
        if colour == 0 {
            return Err(Error::InvalidArgument("colours start at 1"));
        }
        Ok(ColouredPrime { prime, colour })
    }
}

impl fmt::Display for ColouredPrime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.prime, self.colour)
    }
}

/// A nonempty multiset of coloured primes in which copies of one prime
/// carry distinct colours. Kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColouredPrimeSet {
    elements: Vec<ColouredPrime>,
}

impl ColouredPrimeSet {
    pub fn new(mut elements: Vec<ColouredPrime>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::InvalidArgument("prime sets are nonempty"));
        }
        elements.sort();
        if elements.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidArgument(
                "repeated prime with a repeated colour",
            ));
        }
        Ok(ColouredPrimeSet { elements })
    }

    pub fn singleton(p: ColouredPrime) -> Self {
        ColouredPrimeSet { elements: vec![p] }
    }

    pub fn elements(&self) -> &[ColouredPrime] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn is_even(&self) -> bool {
        self.elements.len().is_multiple_of(2)
    }

    /// Product of the primes.
    pub fn product(&self) -> Result<u64> {
        self.elements.iter().try_fold(1u64, |acc, p| {
            acc.checked_mul(p.prime).ok_or(Error::Overflow)
        })
    }

    /// Product of the primes minus one.
    pub fn weight(&self) -> Result<u64> {
        Ok(self.product()? - 1)
    }

    /// `+1` for odd size, `-1` for even size.
    pub fn sign(&self) -> i64 {
        if self.is_even() {
            -1
        } else {
            1
        }
    }

    pub fn max_colour(&self) -> u32 {
        self.elements.iter().map(|p| p.colour).max().unwrap_or(0)
    }

    fn union(&self, other: &Self) -> Result<Self> {
        let mut elements = self.elements.clone();
        elements.extend_from_slice(&other.elements);
        Self::new(elements)
    }
}

impl fmt::Display for ColouredPrimeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, p) in self.elements.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("}")
    }
}

/// An ordered list of coloured prime sets.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeSequence {
    sets: Vec<ColouredPrimeSet>,
}

impl PrimeSequence {
    pub fn new(sets: Vec<ColouredPrimeSet>) -> Self {
        PrimeSequence { sets }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn sets(&self) -> &[ColouredPrimeSet] {
        &self.sets
    }

    pub fn into_sets(self) -> Vec<ColouredPrimeSet> {
        self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn weight(&self) -> Result<u64> {
        self.sets.iter().try_fold(0u64, |acc, s| {
            acc.checked_add(s.weight()?).ok_or(Error::Overflow)
        })
    }

    pub fn sign(&self) -> i64 {
        self.sets.iter().map(ColouredPrimeSet::sign).product()
    }

    /// Largest colour used, 0 for the empty sequence.
    pub fn max_colour(&self) -> u32 {
        self.sets.iter().map(|s| s.max_colour()).max().unwrap_or(0)
    }

    /// Position of the first even-sized set.
    pub fn first_even(&self) -> Option<usize> {
        self.sets.iter().position(ColouredPrimeSet::is_even)
    }
}

impl fmt::Display for PrimeSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, s) in self.sets.iter().enumerate() {
            if i > 0 {
                f.write_str("|")?;
            }
            write!(f, "{s}")?;
        }
        f.write_str(")")
    }
}

/// All `d`-coloured prime sets of weight `n`, i.e. with prime product
/// `n + 1`, in sorted order.
pub fn enumerate_b(d: u32, n: u64) -> Vec<ColouredPrimeSet> {
    if n == 0 {
        return Vec::new();
    }
    let Some(target) = n.checked_add(1) else {
        return Vec::new();
    };
    let f = factorize(target).expect("n + 1 is positive");
    let mut partial: Vec<Vec<ColouredPrime>> = vec![Vec::new()];
    for &(p, m) in f.factors() {
        if m > d {
            return Vec::new();
        }
        let choices = colour_subsets(d, m as usize);
        let mut next = Vec::with_capacity(partial.len() * choices.len());
        for prefix in &partial {
            for colours in &choices {
                let mut e = prefix.clone();
                e.extend(
                    colours
                        .iter()
                        .map(|&colour| ColouredPrime { prime: p, colour }),
                );
                next.push(e);
            }
        }
        partial = next;
    }
    let mut out: Vec<ColouredPrimeSet> = partial
        .into_iter()
        .map(|e| ColouredPrimeSet::new(e).expect("distinct colours per prime"))
        .collect();
    out.sort();
    out
}

/// Increasing `m`-subsets of `1..=d`.
fn colour_subsets(d: u32, m: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(m);
    fn walk(start: u32, d: u32, m: usize, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if current.len() == m {
            out.push(current.clone());
            return;
        }
        for c in start..=d {
            current.push(c);
            walk(c + 1, d, m, current, out);
            current.pop();
        }
    }
    walk(1, d, m, &mut current, &mut out);
    out
}

/// Calls `visit` on every sequence of `d`-coloured prime sets with total
/// weight `n` (the empty sequence when `n = 0`), in lexicographic order of
/// (first-set weight, first set, rest).
pub fn for_each_a(d: u32, n: u64, mut visit: impl FnMut(&PrimeSequence)) {
    let tables: Vec<Vec<ColouredPrimeSet>> = (0..=n).map(|w| enumerate_b(d, w)).collect();
    let mut current = Vec::new();
    fn walk(
        rest: u64,
        tables: &[Vec<ColouredPrimeSet>],
        current: &mut Vec<ColouredPrimeSet>,
        visit: &mut dyn FnMut(&PrimeSequence),
    ) {
        if rest == 0 {
            let seq = PrimeSequence::new(current.clone());
            visit(&seq);
            return;
        }
        for w in 1..=rest {
            for b in &tables[w as usize] {
                current.push(b.clone());
                walk(rest - w, tables, current, visit);
                current.pop();
            }
        }
    }
    walk(n, &tables, &mut current, &mut visit);
}

/// All sequences of `d`-coloured prime sets with total weight `n`.
pub fn enumerate_a(d: u32, n: u64) -> Vec<PrimeSequence> {
    let mut out = Vec::new();
    for_each_a(d, n, |s| out.push(s.clone()));
    out
}

/// `sum of sign(A)` over all sequences of weight `n`; equals `a_d(n)`.
pub fn signed_sum(d: u32, n: u64) -> i64 {
    let mut total = 0;
    for_each_a(d, n, |s| total += s.sign());
    total
}

/// First position `j` where an odd, ascending, repetitive run starts, with
/// its length parameter `l`: `A_j = {l}` and `A_{j+1} = .. = A_{j+l}` are
/// odd-sized, and every element of `A_{j+1}` exceeds `l`, or equals `l` with
/// a larger colour.
pub fn find_oar(a: &PrimeSequence) -> Option<(usize, u64)> {
    let sets = a.sets();
    (0..sets.len()).find_map(|j| {
        let head = &sets[j];
        if head.len() != 1 {
            return None;
        }
        let lead = head.elements[0];
        let l = lead.prime;
        let end = j.checked_add(usize::try_from(l).ok()?)?;
        if end >= sets.len() {
            return None;
        }
        let first = &sets[j + 1];
        let ascending = first
            .elements
            .iter()
            .all(|e| e.prime > l || (e.prime == l && e.colour > lead.colour));
        let repetitive = sets[j + 1..=end].iter().all(|s| s == first);
        (first.len() % 2 == 1 && ascending && repetitive).then_some((j, l))
    })
}

/// True iff `a` has neither an even-sized set nor an odd, ascending,
/// repetitive run.
pub fn is_reduced(a: &PrimeSequence) -> bool {
    a.first_even().is_none() && find_oar(a).is_none()
}

/// The sign-reversing pairing. If the first even set comes before the first
/// run, it is split into `{p0}` followed by `p0` copies of the remaining
/// set, where `p0` is its least element by (prime, colour). If the first run
/// comes first, it is merged back into `A_j ∪ A_{j+1}`.
///
/// Errors with [`Error::InvolutionUndefined`] on reduced sequences.
pub fn involution_f(a: &PrimeSequence) -> Result<PrimeSequence> {
    let even = a.first_even();
    let run = find_oar(a);
    let sets = a.sets();
    match (even, run) {
        (Some(i), run) if run.is_none_or(|(j, _)| j > i) => {
            let target = &sets[i];
            let p0 = target.elements[0];
            let rest = ColouredPrimeSet {
                elements: target.elements[1..].to_vec(),
            };
            let copies = usize::try_from(p0.prime).map_err(|_| Error::Overflow)?;
            let mut out = Vec::with_capacity(sets.len() + copies);
            out.extend_from_slice(&sets[..i]);
            out.push(ColouredPrimeSet::singleton(p0));
            out.extend(core::iter::repeat_n(rest, copies));
            out.extend_from_slice(&sets[i + 1..]);
            Ok(PrimeSequence::new(out))
        }
        (_, Some((j, l))) => {
            let end = j + l as usize;
            let merged = sets[j].union(&sets[j + 1])?;
            let mut out = Vec::with_capacity(sets.len() - l as usize);
            out.extend_from_slice(&sets[..j]);
            out.push(merged);
            out.extend_from_slice(&sets[end + 1..]);
            Ok(PrimeSequence::new(out))
        }
        _ => Err(Error::InvolutionUndefined),
    }
}

/// The reduced sequences of weight `n`.
pub fn enumerate_a_tilde(d: u32, n: u64) -> Vec<PrimeSequence> {
    let mut out = Vec::new();
    for_each_a(d, n, |s| {
        if is_reduced(s) {
            out.push(s.clone());
        }
    });
    out
}

/// Appends `{2_c}`, except that a tail `{2_c'}, {2_c}` with `c' < c`
/// becomes `{2_c'}, {3_c}`.
pub fn ratio_injection(a: &PrimeSequence, c: u32) -> Result<PrimeSequence> {
    if c == 0 {
        return Err(Error::InvalidArgument("colours start at 1"));
    }
    let two = ColouredPrime {
        prime: 2,
        colour: c,
    };
    let mut sets = a.sets().to_vec();
    let k = sets.len();
    let repair = k >= 2
        && sets[k - 1].elements == [two]
        && matches!(sets[k - 2].elements.as_slice(), [p] if p.prime == 2 && p.colour < c);
    if repair {
        sets[k - 1] = ColouredPrimeSet::singleton(ColouredPrime {
            prime: 3,
            colour: c,
        });
    } else {
        sets.push(ColouredPrimeSet::singleton(two));
    }
    Ok(PrimeSequence::new(sets))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cp(p: u64, c: u32) -> ColouredPrime {
        ColouredPrime::new(p, c).unwrap()
    }

    fn set(ps: &[(u64, u32)]) -> ColouredPrimeSet {
        ColouredPrimeSet::new(ps.iter().map(|&(p, c)| cp(p, c)).collect()).unwrap()
    }

    /// Single-colour sequence from plain primes.
    fn seq(sets: &[&[u64]]) -> PrimeSequence {
        PrimeSequence::new(
            sets.iter()
                .map(|s| set(&s.iter().map(|&p| (p, 1)).collect::<Vec<_>>()))
                .collect(),
        )
    }

    fn cseq(sets: &[&[(u64, u32)]]) -> PrimeSequence {
        PrimeSequence::new(sets.iter().map(|s| set(s)).collect())
    }

    #[test]
    fn coloured_sets() {
        assert!(ColouredPrimeSet::new(vec![cp(2, 1), cp(2, 1)]).is_err());
        assert!(ColouredPrime::new(4, 1).is_err());
        let s = set(&[(3, 1), (2, 2), (2, 1)]);
        assert_eq!(s.weight().unwrap(), 11);
        assert_eq!(s.sign(), 1);
        assert_eq!(s.elements()[0], cp(2, 1));
        assert_eq!(set(&[(2, 1), (3, 1)]).sign(), -1);
    }

    #[test]
    fn b_examples() {
        assert_eq!(
            enumerate_b(2, 11),
            vec![
                set(&[(2, 1), (2, 2), (3, 1)]),
                set(&[(2, 1), (2, 2), (3, 2)])
            ]
        );
        assert!(enumerate_b(2, 26).is_empty());
        assert!(enumerate_b(3, 0).is_empty());
        assert_eq!(enumerate_b(1, 1), vec![set(&[(2, 1)])]);
    }

    #[test]
    fn a_examples() {
        assert_eq!(enumerate_a(1, 0), vec![PrimeSequence::empty()]);
        let five = enumerate_a(1, 5);
        let negative: Vec<_> = five.iter().filter(|s| s.sign() < 0).collect();
        assert_eq!(negative, vec![&seq(&[&[2, 3]])]);
        assert_eq!(five.iter().map(PrimeSequence::sign).sum::<i64>(), 9);
        assert_eq!(signed_sum(1, 6), 17);
        assert_eq!(signed_sum(1, 4), 6);
        assert_eq!(signed_sum(2, 3), 15);
        assert_eq!(signed_sum(3, 0), 1);
    }

    #[test]
    fn oar_examples() {
        let a = seq(&[&[3], &[2], &[2], &[3, 5, 11], &[3, 5, 11], &[2, 3]]);
        assert_eq!(find_oar(&a), Some((2, 2)));
        assert_eq!(find_oar(&seq(&[&[2]])), None);
        let b = cseq(&[&[(2, 1)], &[(2, 2)], &[(2, 2)]]);
        assert_eq!(find_oar(&b), Some((0, 2)));
        let c = cseq(&[&[(2, 2)], &[(2, 1)], &[(2, 1)]]);
        assert_eq!(find_oar(&c), None);
    }

    #[test]
    fn involution_examples() {
        let a = seq(&[&[2], &[3, 11], &[5, 7]]);
        let fa = seq(&[&[2], &[3], &[11], &[11], &[11], &[5, 7]]);
        assert_eq!(involution_f(&a).unwrap(), fa);
        assert_eq!(involution_f(&fa).unwrap(), a);
        assert_eq!(a.weight().unwrap(), 67);
        assert_eq!(fa.weight().unwrap(), 67);
        assert_eq!(
            involution_f(&seq(&[&[2, 3]])).unwrap(),
            seq(&[&[2], &[3], &[3]])
        );
        assert_eq!(
            involution_f(&seq(&[&[2], &[2]])),
            Err(Error::InvolutionUndefined)
        );
    }

    #[test]
    fn reduced_examples() {
        assert_eq!(
            enumerate_a_tilde(1, 2),
            vec![seq(&[&[2], &[2]]), seq(&[&[3]])]
        );
        assert_eq!(enumerate_a_tilde(1, 6).len(), 17);
        assert_eq!(
            enumerate_a_tilde(2, 1),
            vec![cseq(&[&[(2, 1)]]), cseq(&[&[(2, 2)]])]
        );
    }

    #[test]
    fn injection_examples() {
        assert_eq!(
            ratio_injection(&PrimeSequence::empty(), 3).unwrap(),
            cseq(&[&[(2, 3)]])
        );
        let one = cseq(&[&[(2, 1)]]);
        assert_eq!(
            ratio_injection(&one, 2).unwrap(),
            cseq(&[&[(2, 1)], &[(2, 2)]])
        );
        let two = cseq(&[&[(2, 1)], &[(2, 2)]]);
        assert_eq!(
            ratio_injection(&two, 2).unwrap(),
            cseq(&[&[(2, 1)], &[(3, 2)]])
        );
    }
}
