//! JSON interchange forms for the library objects.

use anyhow::{anyhow, bail, Context, Result};
use hypersplit::asymptotics::SaddleResult;
use hypersplit::covering::{Necs, ResidueClass};
use hypersplit::prime_sequences::PrimeSequence;
use hypersplit::trees::PlaneTree;
use hypersplit::{Decomposition, Fraction, Region};
use serde_json::{json, Value};

/// `{"d": 2, "regions": [[["0/1","1/2"], ["0/1","1/1"]], ...]}`
pub fn decomposition_to_json(s: &Decomposition) -> Value {
    let regions: Vec<Value> = s
        .regions()
        .iter()
        .map(|r| {
            r.bounds()
                .iter()
                .map(|(lo, hi)| json!([lo.to_string(), hi.to_string()]))
                .collect()
        })
        .collect();
    json!({ "d": s.dim(), "regions": regions })
}

pub fn decomposition_from_json(v: &Value) -> Result<Decomposition> {
    let d = v["d"]
        .as_u64()
        .context("decomposition needs an integer \"d\"")? as usize;
    let regions = v["regions"]
        .as_array()
        .context("decomposition needs a \"regions\" array")?;
    let mut out = Vec::with_capacity(regions.len());
    for r in regions {
        let axes = r.as_array().context("a region is an array of intervals")?;
        let mut bounds = Vec::with_capacity(axes.len());
        for iv in axes {
            let pair = iv.as_array().filter(|p| p.len() == 2);
            let pair = pair.context("an interval is a pair of fraction strings")?;
            bounds.push((fraction(&pair[0])?, fraction(&pair[1])?));
        }
        out.push(Region::new(bounds)?);
    }
    let s = Decomposition::from_regions(d, out)?;
    if !s.is_partition() {
        bail!("regions do not partition the unit cube");
    }
    if !s.is_split_generated() {
        bail!("decomposition is not reachable by equal splits");
    }
    Ok(s)
}

fn fraction(v: &Value) -> Result<Fraction> {
    match v {
        Value::String(s) => s.parse().map_err(|e| anyhow!("bad fraction {s:?}: {e}")),
        Value::Number(n) => n
            .as_u64()
            .map(Fraction::integer)
            .ok_or_else(|| anyhow!("bad fraction {n}")),
        _ => bail!("fractions are strings like \"1/3\""),
    }
}

/// `{"classes": [{"a": 0, "n": 2}, ...]}`
pub fn necs_to_json(c: &Necs) -> Value {
    let classes: Vec<Value> = c
        .classes()
        .iter()
        .map(|k| json!({ "a": k.residue(), "n": k.modulus() }))
        .collect();
    json!({ "classes": classes })
}

pub fn necs_from_json(v: &Value) -> Result<Necs> {
    let classes = v["classes"]
        .as_array()
        .context("covering needs a \"classes\" array")?;
    let mut out = Vec::with_capacity(classes.len());
    for c in classes {
        let a = c["a"].as_u64().context("class needs an integer \"a\"")?;
        let n = c["n"].as_u64().context("class needs an integer \"n\"")?;
        out.push(ResidueClass::new(a, n)?);
    }
    Ok(Necs::new(out)?)
}

/// A list of sets, each a list of `{"p": prime, "colour": c}`.
pub fn sequence_to_json(a: &PrimeSequence) -> Value {
    a.sets()
        .iter()
        .map(|s| {
            s.elements()
                .iter()
                .map(|e| json!({ "p": e.prime, "colour": e.colour }))
                .collect::<Vec<_>>()
        })
        .collect()
}

/// A leaf is `"L"`, a node is `{"label": i, "children": [...]}`.
pub fn tree_to_json(t: &PlaneTree) -> Value {
    match t {
        PlaneTree::Leaf => json!("L"),
        PlaneTree::Node { label, children } => json!({
            "label": label,
            "children": children.iter().map(tree_to_json).collect::<Vec<_>>(),
        }),
    }
}

pub fn tree_from_json(v: &Value) -> Result<PlaneTree> {
    match v {
        Value::String(s) if s == "L" => Ok(PlaneTree::Leaf),
        Value::Object(_) => {
            let label = v["label"]
                .as_u64()
                .context("node needs an integer \"label\"")?;
            let children = v["children"]
                .as_array()
                .context("node needs \"children\"")?;
            let children = children.iter().map(tree_from_json).collect::<Result<_>>()?;
            Ok(PlaneTree::node(u32::try_from(label)?, children)?)
        }
        _ => bail!("a tree is \"L\" or {{\"label\": .., \"children\": [..]}}"),
    }
}

/// Accepts either the parenthesized text form or the JSON form.
pub fn parse_tree(text: &str) -> Result<PlaneTree> {
    let t = text.trim();
    if t == "L" || t.starts_with('(') {
        return Ok(t.parse()?);
    }
    let v: Value = serde_json::from_str(t).context("tree input is neither text nor JSON")?;
    if let Value::String(s) = &v {
        return Ok(s.parse()?);
    }
    tree_from_json(&v)
}

pub fn saddle_to_json(r: &SaddleResult) -> Value {
    json!({
        "d": r.d,
        "s": r.s,
        "m_at_s": r.m_at_s,
        "m1_at_s": r.m1_at_s,
        "m2_at_s": r.m2_at_s,
        "growth_rate": r.growth_rate,
        "growth_rate_error": r.growth_rate_error,
        "truncation_order": r.truncation_order,
        "tail_bound_used": r.tail_bound_used,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use hypersplit::covering::{enumerate_necs, phi};
    use hypersplit::geometry::enumerate_decompositions;
    use hypersplit::trees::enumerate_trees;

    #[test]
    fn decompositions_round_trip() {
        for s in enumerate_decompositions(2, 4) {
            let v = decomposition_to_json(&s);
            let text = v.to_string();
            let back = decomposition_from_json(&serde_json::from_str(&text).unwrap()).unwrap();
            assert_eq!(back, s);
        }
    }

    #[test]
    fn decomposition_shape() {
        let s = enumerate_decompositions(1, 2).pop().unwrap();
        assert_eq!(
            decomposition_to_json(&s),
            json!({"d": 1, "regions": [[["0/1", "1/2"]], [["1/2", "1/1"]]]})
        );
        let bare = json!({"d": 1, "regions": [[["0", "1/2"]], [["1/2", 1]]]});
        assert_eq!(decomposition_from_json(&bare).unwrap(), s);
    }

    #[test]
    fn bad_decompositions_are_rejected() {
        let overlap = json!({"d": 1, "regions": [[["0", "2/3"]], [["1/2", "1"]]]});
        assert!(decomposition_from_json(&overlap).is_err());
        assert!(decomposition_from_json(&json!({"regions": []})).is_err());
        let bad = json!({"d": 1, "regions": [[["zero", "1"]]]});
        assert!(decomposition_from_json(&bad).is_err());
    }

    #[test]
    fn coverings_round_trip() {
        for c in enumerate_necs(5) {
            assert_eq!(necs_from_json(&necs_to_json(&c)).unwrap(), c);
        }
        let s = enumerate_decompositions(1, 3).pop().unwrap();
        let c = phi(&s).unwrap();
        assert_eq!(necs_to_json(&c)["classes"].as_array().unwrap().len(), 3);
        let gap = json!({"classes": [{"a": 0, "n": 2}, {"a": 1, "n": 4}]});
        assert!(necs_from_json(&gap).is_err());
    }

    #[test]
    fn trees_round_trip() {
        for t in enumerate_trees(2, 4) {
            assert_eq!(tree_from_json(&tree_to_json(&t)).unwrap(), t);
            assert_eq!(parse_tree(&t.to_string()).unwrap(), t);
            assert_eq!(parse_tree(&tree_to_json(&t).to_string()).unwrap(), t);
        }
        assert!(parse_tree("{\"label\": 1, \"children\": [\"L\"]}").is_err());
    }
}
