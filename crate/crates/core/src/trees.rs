//! Plane rooted trees whose internal nodes carry a label in `1..=d` and
//! have at least two ordered children, and the map sending such a tree to a
//! decomposition (label `i` splits along axis `i - 1`).
//!
//! Text form: a leaf is `L`, an internal node is `(label child child ..)`,
//! e.g. `(1 L L (2 L L))`.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;

use crate::geometry::{split, Decomposition, Region};
use crate::series::{power_fixed_point, TruncatedSeries};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PlaneTree {
    Leaf,
    Node {
        label: u32,
        children: Vec<PlaneTree>,
    },
}

impl PlaneTree {
    /// An internal node; rejects label 0 and fewer than two children.
    pub fn node(label: u32, children: Vec<PlaneTree>) -> Result<Self> {
        if label == 0 {
            return Err(Error::InvalidArgument("labels start at 1"));
        }
        if children.len() < 2 {
            return Err(Error::InvalidArgument(
                "internal nodes need at least two children",
            ));
        }
        Ok(PlaneTree::Node { label, children })
    }

    pub fn leaves(&self) -> usize {
        match self {
            PlaneTree::Leaf => 1,
            PlaneTree::Node { children, .. } => children.iter().map(PlaneTree::leaves).sum(),
        }
    }

    pub fn max_label(&self) -> u32 {
        match self {
            PlaneTree::Leaf => 0,
            PlaneTree::Node { label, children } => children
                .iter()
                .map(PlaneTree::max_label)
                .fold(*label, u32::max),
        }
    }
}

impl fmt::Display for PlaneTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlaneTree::Leaf => f.write_str("L"),
            PlaneTree::Node { label, children } => {
                write!(f, "({label}")?;
                for c in children {
                    write!(f, " {c}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl FromStr for PlaneTree {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let tokens = tokenize(s);
        let mut pos = 0;
        let tree = parse_tree(&tokens, &mut pos)?;
        if pos != tokens.len() {
            return Err(Error::InvalidArgument("trailing input after tree"));
        }
        Ok(tree)
    }
}

fn tokenize(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut word = String::new();
    for ch in s.chars() {
        if ch == '(' || ch == ')' || ch.is_whitespace() {
            if !word.is_empty() {
                out.push(core::mem::take(&mut word));
            }
            if !ch.is_whitespace() {
                out.push(String::from(ch));
            }
        } else {
            word.push(ch);
        }
    }
    if !word.is_empty() {
        out.push(word);
    }
    out
}

fn parse_tree(tokens: &[String], pos: &mut usize) -> Result<PlaneTree> {
    let malformed = Error::InvalidArgument("malformed tree text");
    let tok = tokens.get(*pos).ok_or(malformed.clone())?;
    *pos += 1;
    match tok.as_str() {
        "L" => Ok(PlaneTree::Leaf),
        "(" => {
            let label = tokens
                .get(*pos)
                .and_then(|t| t.parse::<u32>().ok())
                .ok_or(malformed.clone())?;
            *pos += 1;
            let mut children = Vec::new();
            loop {
                match tokens.get(*pos).map(String::as_str) {
                    Some(")") => {
                        *pos += 1;
                        break;
                    }
                    Some(_) => children.push(parse_tree(tokens, pos)?),
                    None => return Err(malformed),
                }
            }
            PlaneTree::node(label, children)
        }
        _ => Err(malformed),
    }
}

/// Every tree with labels in `1..=d` and exactly `n` leaves, sorted.
pub fn enumerate_trees(d: u32, n: usize) -> Vec<PlaneTree> {
    let mut by_leaves: Vec<Vec<PlaneTree>> = vec![Vec::new(); n + 1];
    if n == 0 {
        return Vec::new();
    }
    by_leaves[1] = vec![PlaneTree::Leaf];
    for m in 2..=n {
        // ordered forests of >= 2 trees with m leaves in total
        let mut forests: Vec<Vec<PlaneTree>> = Vec::new();
        for first in 1..m {
            for head in &by_leaves[first] {
                for tail in forests_with_leaves(&by_leaves, m - first, 1) {
                    let mut f = Vec::with_capacity(tail.len() + 1);
                    f.push(head.clone());
                    f.extend(tail);
                    forests.push(f);
                }
            }
        }
        let mut level = Vec::with_capacity(forests.len() * d as usize);
        for label in 1..=d {
            for f in &forests {
                level.push(PlaneTree::Node {
                    label,
                    children: f.clone(),
                });
            }
        }
        level.sort();
        by_leaves[m] = level;
    }
    by_leaves.swap_remove(n)
}

/// Ordered forests of at least `min_trees` trees with `m` leaves in total.
fn forests_with_leaves(
    by_leaves: &[Vec<PlaneTree>],
    m: usize,
    min_trees: usize,
) -> Vec<Vec<PlaneTree>> {
    let mut out = Vec::new();
    if m == 0 {
        if min_trees == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    for first in 1..=m {
        for head in &by_leaves[first] {
            for tail in forests_with_leaves(by_leaves, m - first, min_trees.saturating_sub(1)) {
                let mut f = Vec::with_capacity(tail.len() + 1);
                f.push(head.clone());
                f.extend(tail);
                out.push(f);
            }
        }
    }
    out
}

/// `t_d(0..=order)` from `T = x + d * sum_{k >= 2} T^k`.
pub fn tree_counts(d: u32, order: usize) -> TruncatedSeries {
    let mut weights = vec![BigInt::from(d); order + 1];
    weights[0] = BigInt::from(0);
    if order >= 1 {
        weights[1] = BigInt::from(0);
    }
    power_fixed_point(&weights, order)
}

/// The decomposition of `(0,1)^d` described by `tree`: a node labelled `i`
/// with `r` children cuts its box into `r` slabs along axis `i - 1`, lowest
/// slab first, and places child `j` in slab `j`.
pub fn psi(tree: &PlaneTree, d: u32) -> Result<Decomposition> {
    if d == 0 {
        return Err(Error::InvalidArgument("dimension must be positive"));
    }
    if tree.max_label() > d {
        return Err(Error::InvalidArgument("tree label exceeds the dimension"));
    }
    let mut regions = Vec::with_capacity(tree.leaves());
    place(tree, Region::unit(d as usize), &mut regions)?;
    Decomposition::from_regions(d as usize, regions)
}

fn place(tree: &PlaneTree, cell: Region, out: &mut Vec<Region>) -> Result<()> {
    match tree {
        PlaneTree::Leaf => out.push(cell),
        PlaneTree::Node { label, children } => {
            let slabs = split(&cell, (*label - 1) as usize, children.len() as u64)?;
            for (child, slab) in children.iter().zip(slabs) {
                place(child, slab, out)?;
            }
        }
    }
    Ok(())
}

/// `2d + 1 + 2 sqrt(d^2 + d)`, the limiting ratio `t_d(n+1) / t_d(n)`.
pub fn tree_growth_rate(d: u32) -> f64 {
    let d = d as f64;
    2.0 * d + 1.0 + 2.0 * libm::sqrt(d * d + d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::grid_decomposition;
    use crate::series::decomposition_counts;

    fn t(s: &str) -> PlaneTree {
        s.parse().unwrap()
    }

    #[test]
    fn text_round_trip() {
        for s in [
            "L",
            "(1 L L)",
            "(1 L L (2 L L))",
            "(2 (1 L L) (1 L L) (1 L L))",
        ] {
            assert_eq!(t(s).to_string(), s);
        }
        assert!("(1 L)".parse::<PlaneTree>().is_err());
        assert!("(0 L L)".parse::<PlaneTree>().is_err());
        assert!("(1 L L".parse::<PlaneTree>().is_err());
        assert!("(1 L L) L".parse::<PlaneTree>().is_err());
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(enumerate_trees(3, 1), vec![PlaneTree::Leaf]);
        assert_eq!(enumerate_trees(1, 4).len(), 11);
        assert_eq!(enumerate_trees(2, 2), vec![t("(1 L L)"), t("(2 L L)")]);
        assert_eq!(enumerate_trees(2, 3).len(), 10);
    }

    #[test]
    fn series_matches_enumeration() {
        let c = tree_counts(1, 6);
        let row: Vec<i64> = c.coefficients()[1..]
            .iter()
            .map(|x| i64::try_from(x).unwrap())
            .collect();
        assert_eq!(row, vec![1, 1, 3, 11, 45, 197]);
        for d in 1..=2 {
            let c = tree_counts(d, 7);
            for n in 1..=7 {
                assert_eq!(
                    c.coeff(n),
                    BigInt::from(enumerate_trees(d, n).len()),
                    "d={d} n={n}"
                );
            }
        }
        assert_eq!(tree_counts(4, 1).coeff(1), BigInt::from(1));
    }

    #[test]
    fn trees_outnumber_decompositions() {
        for d in 1..=3 {
            let tc = tree_counts(d, 30);
            let sc = decomposition_counts(d, 30);
            for n in 1..=30 {
                if n >= 4 {
                    assert!(tc.coeff(n) > sc.coeff(n), "d={d} n={n}");
                } else {
                    assert!(tc.coeff(n) >= sc.coeff(n), "d={d} n={n}");
                }
            }
        }
    }

    #[test]
    fn growth_gap_at_sixty() {
        for d in 1..=3u32 {
            let c = tree_counts(d, 61);
            let ratio = crate::asymptotics::big_ratio(&c.coeff(61), &c.coeff(60));
            let target = tree_growth_rate(d);
            assert!(
                ((ratio - target) / target).abs() < 0.05,
                "d={d} ratio={ratio}"
            );
        }
    }

    #[test]
    fn psi_examples() {
        assert_eq!(psi(&PlaneTree::Leaf, 2).unwrap(), Decomposition::trivial(2));
        let t1 = t("(1 L L L L L L)");
        let t2 = t("(1 (1 L L L) (1 L L L))");
        assert_eq!(psi(&t1, 1).unwrap(), grid_decomposition(&[6]).unwrap());
        assert_eq!(psi(&t1, 1).unwrap(), psi(&t2, 1).unwrap());
        let t3 = t("(1 (2 L L L) (2 L L L))");
        let t4 = t("(2 (1 L L) (1 L L) (1 L L))");
        assert_eq!(psi(&t3, 2).unwrap(), grid_decomposition(&[2, 3]).unwrap());
        assert_eq!(psi(&t3, 2).unwrap(), psi(&t4, 2).unwrap());
        let fig = t("(1 L (2 L L L L) (2 (1 L L) L))");
        let s = psi(&fig, 2).unwrap();
        assert_eq!(s.len(), 8);
        assert_eq!(s.gcd(), vec![3, 1]);
        assert_eq!(s.lcm(), vec![6, 4]);
        assert!(psi(&t3, 1).is_err());
    }
}
