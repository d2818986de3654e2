use std::fs::{self, File};
use std::io::{BufWriter, Write};

use anyhow::{bail, Context, Result};
use hypersplit::asymptotics::{check_growth_bounds, find_saddle};
use hypersplit::covering::phi;
use hypersplit::lcm_counts::LcmCounter;
use hypersplit::number_theory::mobius_d;
use hypersplit::series::{auxiliary_counts, decomposition_counts, refined_counts};
use hypersplit::trees::{enumerate_trees, psi, tree_counts};
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::formats::{
    decomposition_from_json, decomposition_to_json, necs_to_json, parse_tree, saddle_to_json,
    tree_to_json,
};
use crate::output::{big_strings, OutputRecord, Provenance};
use crate::parallel::{decomposition_levels, necs_levels};
use crate::verify::{self, Suite};
use crate::{Cli, Command, EnumKind, LcmKind, ResourceCap, SeqKind, Status};

const MAX_SERIES_ORDER: usize = 1000;
const MAX_MU_ARGUMENT: u64 = 10_000_000;
const MAX_ENUM_COUNT: u64 = 250_000;
const MAX_ENUM_N: usize = 40;
const MAX_GRID_CELLS: u64 = 10_000;
const MAX_GROWTH_D: u64 = 1000;

struct Limits {
    allow_large: bool,
}

impl Limits {
    fn check(&self, within: bool, what: impl FnOnce() -> String) -> Result<()> {
        if within || self.allow_large {
            Ok(())
        } else {
            Err(ResourceCap(what()).into())
        }
    }
}

pub fn execute(cli: &Cli) -> Result<(OutputRecord, Status)> {
    let limits = Limits {
        allow_large: cli.allow_large,
    };
    let sequential = cli.threads == Some(1);
    let mut status = Status::Ok;
    let record = match &cli.command {
        Command::Mu { d, n } => mu(&limits, *d, n.start, n.end)?,
        Command::Seq { kind, d, max_n } => seq(&limits, *kind, *d, *max_n)?,
        Command::Refined { d, r, max_n } => refined(&limits, *d, r, *max_n)?,
        Command::Enum { kind, d, n, emit } => {
            enumerate(&limits, *kind, *d, *n, emit.as_deref(), sequential)?
        }
        Command::Phi { input } => phi_command(
            &fs::read_to_string(input).with_context(|| format!("reading {}", input.display()))?,
        )?,
        Command::Psi { input, d } => psi_command(
            &fs::read_to_string(input).with_context(|| format!("reading {}", input.display()))?,
            *d,
        )?,
        Command::Growth { d, tol } => growth(&limits, d.start, d.end, *tol)?,
        Command::LcmCount { kind, r } => lcm_count(&limits, *kind, r)?,
        Command::Verify { suite } => {
            let (record, ok) = verify_command(*suite, sequential);
            if !ok {
                status = Status::VerificationFailed;
            }
            record
        }
    };
    Ok((record, status))
}

fn positive_d(d: u32) -> Result<()> {
    if d == 0 {
        bail!("--d must be positive");
    }
    Ok(())
}

fn mu(limits: &Limits, d: u32, start: u64, end: u64) -> Result<OutputRecord> {
    positive_d(d)?;
    if start == 0 {
        bail!("--n starts at 1");
    }
    limits.check(end <= MAX_MU_ARGUMENT, || {
        format!("mu arguments above {MAX_MU_ARGUMENT}")
    })?;
    let values: Vec<i64> = (start..=end).map(|n| mobius_d(d, n)).collect();
    Ok(OutputRecord {
        command: "mu".into(),
        params: json!({ "d": d, "n": [start, end] }),
        results: json!({ "start": start, "values": values }),
        provenance: vec![Provenance::Series],
        rows: vec![values.iter().map(i64::to_string).collect()],
    })
}

fn series_cap(limits: &Limits, order: usize) -> Result<()> {
    limits.check(order <= MAX_SERIES_ORDER, || {
        format!("series order {order} above {MAX_SERIES_ORDER}")
    })
}

fn seq(limits: &Limits, kind: SeqKind, d: u32, max_n: usize) -> Result<OutputRecord> {
    positive_d(d)?;
    series_cap(limits, max_n)?;
    let (name, series, start) = match kind {
        SeqKind::Sd => ("sd", decomposition_counts(d, max_n), 1),
        SeqKind::Ad => ("ad", auxiliary_counts(d, max_n), 0),
        SeqKind::Td => ("td", tree_counts(d, max_n), 1),
    };
    let values = big_strings(series.coefficients().iter().skip(start));
    Ok(OutputRecord {
        command: format!("seq {name}"),
        params: json!({ "d": d, "max_n": max_n }),
        results: json!({ "start": start, "values": values }),
        provenance: vec![Provenance::Series],
        rows: vec![values],
    })
}

fn refined(limits: &Limits, d: u32, r: &[u64], max_n: usize) -> Result<OutputRecord> {
    positive_d(d)?;
    if r.len() != d as usize {
        bail!("--r needs exactly {d} entries, got {}", r.len());
    }
    series_cap(limits, max_n)?;
    let series = refined_counts(d, r, max_n)?;
    let values = big_strings(series.coefficients().iter().skip(1));
    Ok(OutputRecord {
        command: "refined".into(),
        params: json!({ "d": d, "r": r, "max_n": max_n }),
        results: json!({ "start": 1, "values": values }),
        provenance: vec![Provenance::Series],
        rows: vec![values],
    })
}

fn enumerate(
    limits: &Limits,
    kind: EnumKind,
    d: u32,
    n: usize,
    emit: Option<&std::path::Path>,
    sequential: bool,
) -> Result<OutputRecord> {
    positive_d(d)?;
    if n == 0 {
        bail!("--n must be positive");
    }
    if kind == EnumKind::Necs && d != 1 {
        bail!("covering systems are one-dimensional; --d must be 1");
    }
    limits.check(n <= MAX_ENUM_N, || {
        format!("enumeration size {n} above {MAX_ENUM_N}")
    })?;
    let expected = match kind {
        EnumKind::Decomp | EnumKind::Necs => decomposition_counts(d, n).coeff(n),
        EnumKind::Trees => tree_counts(d, n).coeff(n),
    };
    limits.check(expected <= BigInt::from(MAX_ENUM_COUNT), || {
        format!("{expected} objects to enumerate, above {MAX_ENUM_COUNT}")
    })?;

    // (json form, csv text form)
    let objects: Vec<(Value, String)> = match kind {
        EnumKind::Decomp => decomposition_levels(d as usize, n, sequential)
            .swap_remove(n)
            .iter()
            .map(|s| {
                let v = decomposition_to_json(s);
                let text = v["regions"].to_string();
                (v, text)
            })
            .collect(),
        EnumKind::Necs => necs_levels(n, sequential)
            .swap_remove(n)
            .iter()
            .map(|c| (necs_to_json(c), c.to_string()))
            .collect(),
        EnumKind::Trees => enumerate_trees(d, n)
            .iter()
            .map(|t| (tree_to_json(t), t.to_string()))
            .collect(),
    };
    let name = match kind {
        EnumKind::Decomp => "decomp",
        EnumKind::Necs => "necs",
        EnumKind::Trees => "trees",
    };
    let mut results = json!({ "count": objects.len() });
    if let Some(path) = emit {
        let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
        let mut w = BufWriter::new(file);
        for (v, _) in &objects {
            serde_json::to_writer(&mut w, v)?;
            writeln!(w)?;
        }
        w.flush()?;
        results["emitted"] = json!(path.display().to_string());
    } else {
        results["objects"] = Value::Array(objects.iter().map(|o| o.0.clone()).collect());
    }
    let mut rows = vec![vec!["index".to_string(), "object".to_string()]];
    rows.extend(
        objects
            .into_iter()
            .enumerate()
            .map(|(i, (_, text))| vec![i.to_string(), text]),
    );
    Ok(OutputRecord {
        command: format!("enum {name}"),
        params: json!({ "d": d, "n": n }),
        results,
        provenance: vec![Provenance::Enumeration],
        rows,
    })
}

fn phi_command(text: &str) -> Result<OutputRecord> {
    let v: Value = serde_json::from_str(text).context("decomposition input is not JSON")?;
    let s = decomposition_from_json(&v)?;
    let c = phi(&s)?;
    let mut rows = vec![vec!["a".to_string(), "n".to_string()]];
    rows.extend(
        c.classes()
            .iter()
            .map(|k| vec![k.residue().to_string(), k.modulus().to_string()]),
    );
    Ok(OutputRecord {
        command: "phi".into(),
        params: json!({ "input": decomposition_to_json(&s) }),
        results: json!({ "necs": necs_to_json(&c), "gcd": c.gcd(), "lcm": c.lcm() }),
        provenance: vec![Provenance::Recursion],
        rows,
    })
}

fn psi_command(text: &str, d: Option<u32>) -> Result<OutputRecord> {
    let tree = parse_tree(text)?;
    let d = d.unwrap_or(tree.max_label().max(1));
    let s = psi(&tree, d)?;
    let mut header = Vec::new();
    for axis in 0..s.dim() {
        header.push(format!("lo{axis}"));
        header.push(format!("hi{axis}"));
    }
    let mut rows = vec![header];
    rows.extend(s.regions().iter().map(|r| {
        r.bounds()
            .iter()
            .flat_map(|(lo, hi)| [lo.to_string(), hi.to_string()])
            .collect()
    }));
    Ok(OutputRecord {
        command: "psi".into(),
        params: json!({ "tree": tree.to_string(), "d": d }),
        results: json!({
            "decomposition": decomposition_to_json(&s),
            "gcd": s.gcd(),
            "lcm": s.lcm(),
        }),
        provenance: vec![Provenance::Recursion],
        rows,
    })
}

fn growth(limits: &Limits, start: u64, end: u64, tol: f64) -> Result<OutputRecord> {
    if start == 0 {
        bail!("--d starts at 1");
    }
    limits.check(end <= MAX_GROWTH_D, || {
        format!("dimension {end} above {MAX_GROWTH_D}")
    })?;
    let header = [
        "d",
        "s",
        "m_at_s",
        "m1_at_s",
        "m2_at_s",
        "growth_rate",
        "growth_rate_error",
        "excess",
        "truncation_order",
        "tail_bound_used",
        "bounds_hold",
    ];
    let mut rows = vec![header.iter().map(|h| h.to_string()).collect::<Vec<_>>()];
    let mut results = Vec::new();
    for d in start..=end {
        let d = u32::try_from(d)?;
        let r = find_saddle(d, tol).with_context(|| format!("saddle point for d={d}"))?;
        let excess = r.growth_rate - (4.0 * d as f64 + 1.5);
        let bounds = if d >= 2 {
            Some(check_growth_bounds(d)?)
        } else {
            None
        };
        let mut v = saddle_to_json(&r);
        v["excess"] = json!(excess);
        v["bounds_hold"] = json!(bounds);
        results.push(v);
        rows.push(vec![
            d.to_string(),
            float(r.s),
            float(r.m_at_s),
            float(r.m1_at_s),
            float(r.m2_at_s),
            float(r.growth_rate),
            float(r.growth_rate_error),
            float(excess),
            r.truncation_order.to_string(),
            float(r.tail_bound_used),
            bounds.map_or(String::new(), |b| b.to_string()),
        ]);
    }
    Ok(OutputRecord {
        command: "growth".into(),
        params: json!({ "d": [start, end], "tol": tol }),
        results: Value::Array(results),
        provenance: vec![Provenance::Saddle],
        rows,
    })
}

/// Shortest round-trip decimal, in exponent form when very small or large.
fn float(x: f64) -> String {
    format!("{x:?}")
}

fn lcm_count(limits: &Limits, kind: LcmKind, r: &[u64]) -> Result<OutputRecord> {
    let cells = r.iter().try_fold(1u64, |acc, &x| acc.checked_mul(x));
    limits.check(cells.is_some_and(|c| c <= MAX_GRID_CELLS), || {
        format!("grid {r:?} has more than {MAX_GRID_CELLS} cells")
    })?;
    let mut counter = LcmCounter::new();
    let (name, value) = match kind {
        LcmKind::G => ("g", counter.g(r)?),
        LcmKind::H => ("h", counter.h(r)?),
    };
    Ok(OutputRecord {
        command: format!("lcm-count {name}"),
        params: json!({ "r": r }),
        results: json!({ "value": value.to_string() }),
        provenance: vec![Provenance::Recursion],
        rows: vec![vec![value.to_string()]],
    })
}

fn verify_command(suite: Suite, sequential: bool) -> (OutputRecord, bool) {
    let checks = verify::checks(suite);
    let results = verify::run(&checks, sequential);
    let failed = results.iter().filter(|r| !r.passed()).count();
    let mut provenance = Vec::new();
    for r in &results {
        if !provenance.contains(&r.provenance) {
            provenance.push(r.provenance);
        }
    }
    let mut rows = vec![["suite", "check", "status", "provenance", "detail"]
        .map(String::from)
        .to_vec()];
    rows.extend(results.iter().map(|r| {
        vec![
            r.suite.name().to_string(),
            r.name.to_string(),
            if r.passed() { "PASS" } else { "FAIL" }.to_string(),
            r.provenance.as_str().to_string(),
            r.outcome
                .as_ref()
                .err()
                .map_or(String::new(), |f| f.message.clone()),
        ]
    }));
    let record = OutputRecord {
        command: "verify".into(),
        params: json!({ "suite": suite.name() }),
        results: json!({
            "passed": results.len() - failed,
            "failed": failed,
            "checks": results.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
        }),
        provenance,
        rows,
    };
    (record, failed == 0)
}
