//! Verification suites: each check compares two independent routes to the
//! same numbers, or a route against a reference table.

use std::collections::{BTreeMap, BTreeSet};

use clap::ValueEnum;
use hypersplit::asymptotics::{
    big_ln, big_ratio, check_growth_bounds, find_saddle, ln_asymptotic_estimate_at, DEFAULT_TOL,
};
use hypersplit::covering::{enumerate_necs, enumerate_necs_levels, phi, Necs};
use hypersplit::geometry::enumerate_levels;
use hypersplit::lcm_counts::LcmCounter;
use hypersplit::number_theory::{mobius_d_by_convolution, mobius_d_table};
use hypersplit::prime_sequences::{
    for_each_a, involution_f, is_reduced, ratio_injection, signed_sum, PrimeSequence,
};
use hypersplit::series::{auxiliary_counts, decomposition_counts, mobius_series, refined_counts};
use hypersplit::trees::{enumerate_trees, psi, tree_counts};
use hypersplit::{Decomposition, TruncatedSeries};
use num_bigint::BigInt;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::formats::sequence_to_json;
use crate::output::Provenance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Tables,
    Oracles,
    Bijection,
    Asymptotics,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Tables => "tables",
            Suite::Oracles => "oracles",
            Suite::Bijection => "bijection",
            Suite::Asymptotics => "asymptotics",
            Suite::All => "all",
        }
    }
}

pub struct Failure {
    pub message: String,
    pub witness: Option<Value>,
}

impl From<String> for Failure {
    fn from(message: String) -> Self {
        Failure {
            message,
            witness: None,
        }
    }
}

type Outcome = Result<(), Failure>;

pub struct Check {
    pub suite: Suite,
    pub name: &'static str,
    pub provenance: Provenance,
    run: fn() -> Outcome,
}

pub struct CheckResult {
    pub suite: Suite,
    pub name: &'static str,
    pub provenance: Provenance,
    pub outcome: Outcome,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.outcome.is_ok()
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "suite": self.suite.name(),
            "check": self.name,
            "provenance": self.provenance.as_str(),
            "pass": self.passed(),
        });
        if let Err(f) = &self.outcome {
            v["detail"] = json!(f.message);
            if let Some(w) = &f.witness {
                v["witness"] = w.clone();
            }
        }
        v
    }
}

pub fn checks(suite: Suite) -> Vec<Check> {
    use Provenance::*;
    use Suite::*;
    let all = [
        (
            Tables,
            "decomposition counts d=1..3 n<=10",
            Series,
            series_rows as fn() -> Outcome,
        ),
        (
            Tables,
            "generalized Mobius d=1..3 n<=15, closed form and convolution",
            Series,
            mobius_rows,
        ),
        (
            Tables,
            "auxiliary counts d=1..3 n<=10",
            Series,
            auxiliary_rows,
        ),
        (
            Tables,
            "reversion round trip d=1..4 to order 60",
            Series,
            reversion,
        ),
        (Tables, "tree counts d=1 n<=6", Series, tree_rows),
        (Tables, "g and h for n<=16", Recursion, lcm_rows),
        (
            Oracles,
            "decomposition enumeration vs series",
            Enumeration,
            decomposition_oracle,
        ),
        (
            Oracles,
            "covering enumeration vs series n<=7",
            Enumeration,
            covering_oracle,
        ),
        (
            Oracles,
            "refined counts by gcd d=2 n<=5",
            Enumeration,
            refined_oracle,
        ),
        (
            Oracles,
            "tree enumeration vs series d<=2 n<=7",
            Enumeration,
            tree_oracle,
        ),
        (
            Oracles,
            "tree images cover decompositions d=2 n<=5",
            Enumeration,
            tree_images,
        ),
        (Oracles, "signed sums d<=2 n<=12", Enumeration, signed_sums),
        (
            Oracles,
            "reduced sequence counts d<=2 n<=12",
            Enumeration,
            reduced_counts,
        ),
        (
            Oracles,
            "pairing is a sign-reversing involution d<=2 n<=12",
            Enumeration,
            pairing,
        ),
        (Oracles, "ratio injection d<=2 n<12", Enumeration, injection),
        (
            Bijection,
            "decompositions to coverings n<=6",
            Enumeration,
            bijection,
        ),
        (
            Bijection,
            "lcm classes vs h for lcm<=8",
            Enumeration,
            lcm_classes,
        ),
        (Asymptotics, "growth rate d=1", Saddle, growth_one),
        (
            Asymptotics,
            "growth rate excess d=2,3,30",
            Saddle,
            growth_excess,
        ),
        (Asymptotics, "growth bounds d=2..30", Saddle, growth_bounds),
        (
            Asymptotics,
            "exact ratio at n=150 near growth rate",
            Saddle,
            exact_ratio,
        ),
        (
            Asymptotics,
            "estimate error shrinks from n=100 to n=400",
            Saddle,
            estimate_trend,
        ),
    ];
    all.into_iter()
        .filter(|c| suite == All || c.0 == suite)
        .map(|(suite, name, provenance, run)| Check {
            suite,
            name,
            provenance,
            run,
        })
        .collect()
}

/// Runs the checks in order, or spread over the rayon pool; results keep the
/// check order either way.
pub fn run(checks: &[Check], sequential: bool) -> Vec<CheckResult> {
    let one = |c: &Check| CheckResult {
        suite: c.suite,
        name: c.name,
        provenance: c.provenance,
        outcome: std::panic::catch_unwind(c.run)
            .unwrap_or_else(|_| Err(Failure::from("check panicked".to_string()))),
    };
    if sequential {
        checks.iter().map(one).collect()
    } else {
        checks.par_iter().map(one).collect()
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg().into())
    }
}

fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

fn row(s: &TruncatedSeries, from: usize) -> Vec<BigInt> {
    s.coefficients()[from..].to_vec()
}

fn series_rows() -> Outcome {
    let rows: [(u32, [i64; 10]); 3] = [
        (1, [1, 1, 3, 10, 39, 160, 691, 3081, 14095, 65757]),
        (
            2,
            [1, 2, 10, 59, 394, 2810, 20998, 162216, 1285185, 10384986],
        ),
        (
            3,
            [
                1, 3, 21, 177, 1677, 17001, 180525, 1981909, 22314339, 256245783,
            ],
        ),
    ];
    for (d, expected) in rows {
        let got = row(&decomposition_counts(d, 10), 1);
        ensure(got == expected.map(big), || format!("d={d}: {got:?}"))?;
    }
    Ok(())
}

fn mobius_rows() -> Outcome {
    let rows: [(u32, [i64; 15]); 3] = [
        (1, [1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0, -1, 1, 1]),
        (2, [1, -2, -2, 1, -2, 4, -2, 0, 1, 4, -2, -2, -2, 4, 4]),
        (3, [1, -3, -3, 3, -3, 9, -3, -1, 3, 9, -3, -9, -3, 9, 9]),
    ];
    for (d, expected) in rows {
        let closed = mobius_d_table(d, 15);
        let conv = mobius_d_by_convolution(d, 15);
        ensure(closed[1..] == expected, || {
            format!("closed form d={d}: {closed:?}")
        })?;
        ensure(conv[1..] == expected, || {
            format!("convolution d={d}: {conv:?}")
        })?;
    }
    Ok(())
}

fn auxiliary_rows() -> Outcome {
    let rows: [(u32, [i64; 11]); 3] = [
        (1, [1, 1, 2, 3, 6, 9, 17, 28, 50, 83, 147]),
        (2, [1, 2, 6, 15, 42, 108, 291, 766, 2041, 5395, 14328]),
        (
            3,
            [1, 3, 12, 42, 156, 558, 2028, 7318, 26490, 95730, 346218],
        ),
    ];
    for (d, expected) in rows {
        let got = row(&auxiliary_counts(d, 10), 0);
        ensure(got == expected.map(big), || format!("d={d}: {got:?}"))?;
    }
    Ok(())
}

fn reversion() -> Outcome {
    for d in 1..=4 {
        let back = mobius_series(d, 60)
            .compose(&decomposition_counts(d, 60))
            .map_err(|e| e.to_string())?;
        ensure(back == TruncatedSeries::x(60), || format!("d={d}"))?;
    }
    Ok(())
}

fn tree_rows() -> Outcome {
    let got = row(&tree_counts(1, 6), 1);
    ensure(got == [1, 1, 3, 11, 45, 197].map(big), || {
        format!("{got:?}")
    })
}

fn lcm_rows() -> Outcome {
    let g_row = [1, 2, 2, 5, 2, 12, 2, 26, 9, 36, 2, 206, 2, 132, 40, 677];
    let h_row = [1, 1, 1, 3, 1, 9, 1, 21, 7, 33, 1, 191, 1, 129, 37, 651];
    let mut c = LcmCounter::new();
    for n in 1..=16u64 {
        let i = n as usize - 1;
        let g = c.g(&[n]).map_err(|e| e.to_string())?;
        let h = c.h(&[n]).map_err(|e| e.to_string())?;
        ensure(g == big(g_row[i]) && h == big(h_row[i]), || {
            format!("n={n}: g={g} h={h}")
        })?;
    }
    for r in [vec![4u64, 3], vec![8, 9], vec![4, 3, 5]] {
        let p: u64 = r.iter().product();
        let same = c.g(&r).ok() == c.g(&[p]).ok() && c.h(&r).ok() == c.h(&[p]).ok();
        ensure(same, || format!("coprime collapse fails for {r:?}"))?;
    }
    Ok(())
}

fn decomposition_oracle() -> Outcome {
    for (d, n) in [(1usize, 8usize), (2, 6), (3, 5)] {
        let series = decomposition_counts(d as u32, n);
        let levels = enumerate_levels(d, n);
        for m in 1..=n {
            let count = big(levels[m].len() as i64);
            ensure(count == series.coeff(m), || format!("d={d} n={m}: {count}"))?;
        }
    }
    Ok(())
}

fn covering_oracle() -> Outcome {
    let s1 = decomposition_counts(1, 7);
    let systems = enumerate_necs_levels(7);
    for m in 1..=7 {
        let count = big(systems[m].len() as i64);
        ensure(count == s1.coeff(m), || format!("n={m}: {count}"))?;
    }
    Ok(())
}

fn refined_oracle() -> Outcome {
    let n = 5;
    let mut by_gcd: BTreeMap<Vec<u64>, Vec<i64>> = BTreeMap::new();
    for (m, level) in enumerate_levels(2, n).iter().enumerate() {
        for s in level {
            by_gcd.entry(s.gcd()).or_insert_with(|| vec![0; n + 1])[m] += 1;
        }
    }
    for r1 in 1..=n as u64 {
        for r2 in 1..=n as u64 {
            let series = refined_counts(2, &[r1, r2], n).map_err(|e| e.to_string())?;
            let counts = by_gcd
                .remove(&vec![r1, r2])
                .unwrap_or_else(|| vec![0; n + 1]);
            for m in 1..=n {
                ensure(series.coeff(m) == big(counts[m]), || {
                    format!(
                        "gcd ({r1},{r2}) n={m}: {} vs {}",
                        series.coeff(m),
                        counts[m]
                    )
                })?;
            }
        }
    }
    ensure(by_gcd.is_empty(), || {
        format!("gcd vectors outside the grid: {:?}", by_gcd.keys())
    })
}

fn tree_oracle() -> Outcome {
    for d in 1..=2 {
        let t = tree_counts(d, 7);
        for n in 1..=7 {
            let e = big(enumerate_trees(d, n).len() as i64);
            ensure(e == t.coeff(n), || format!("d={d} n={n}: {e}"))?;
        }
    }
    Ok(())
}

fn tree_images() -> Outcome {
    let decomps = enumerate_levels(2, 5);
    for n in 1..=5 {
        let mut image = BTreeSet::new();
        for t in enumerate_trees(2, n) {
            image.insert(psi(&t, 2).map_err(|e| e.to_string())?);
        }
        let target: BTreeSet<Decomposition> = decomps[n].iter().cloned().collect();
        ensure(image == target, || {
            format!("n={n}: image has {} elements", image.len())
        })?;
    }
    Ok(())
}

fn signed_sums() -> Outcome {
    for d in 1..=2 {
        let a = auxiliary_counts(d, 12);
        for n in 0..=12u64 {
            let got = big(signed_sum(d, n));
            ensure(got == a.coeff(n as usize), || format!("d={d} n={n}: {got}"))?;
        }
    }
    Ok(())
}

fn reduced_counts() -> Outcome {
    let mut bad = Vec::new();
    for d in 1..=2 {
        let a = auxiliary_counts(d, 12);
        for n in 0..=12u64 {
            let mut count = 0i64;
            for_each_a(d, n, |s| count += is_reduced(s) as i64);
            if big(count) != a.coeff(n as usize) {
                bad.push(format!("d={d} n={n}: {count} vs {}", a.coeff(n as usize)));
            }
        }
    }
    ensure(bad.is_empty(), || bad.join("; "))
}

fn pairing() -> Outcome {
    for d in 1..=2 {
        for n in 0..=12u64 {
            let mut first_bad: Option<PrimeSequence> = None;
            let mut count = 0usize;
            for_each_a(d, n, |s| {
                if is_reduced(s) {
                    return;
                }
                let ok = involution_f(s).is_ok_and(|f| {
                    f.sign() == -s.sign()
                        && f.weight() == s.weight()
                        && involution_f(&f).ok().as_ref() == Some(s)
                });
                if !ok {
                    count += 1;
                    first_bad.get_or_insert_with(|| s.clone());
                }
            });
            if let Some(s) = first_bad {
                return Err(Failure {
                    message: format!("d={d} n={n}: fails on {count} sequences, first {s}"),
                    witness: Some(sequence_to_json(&s)),
                });
            }
        }
    }
    Ok(())
}

fn injection() -> Outcome {
    for d in 1..=2u32 {
        for n in 0..12u64 {
            let mut reduced = Vec::new();
            for_each_a(d, n, |s| {
                if is_reduced(s) {
                    reduced.push(s.clone());
                }
            });
            let mut images = BTreeSet::new();
            for s in &reduced {
                for c in 1..=d {
                    let t = ratio_injection(s, c).map_err(|e| e.to_string())?;
                    if !is_reduced(&t) || t.weight() != Ok(n + 1) {
                        return Err(Failure {
                            message: format!("{s} -> {t} leaves the reduced set"),
                            witness: Some(sequence_to_json(s)),
                        });
                    }
                    images.insert(t);
                }
            }
            ensure(images.len() == reduced.len() * d as usize, || {
                format!("not injective at d={d} n={n}")
            })?;
        }
    }
    Ok(())
}

fn bijection() -> Outcome {
    let decomps = enumerate_levels(1, 6);
    for n in 1..=6 {
        let mut image = BTreeSet::new();
        for s in &decomps[n] {
            let c = phi(s).map_err(|e| e.to_string())?;
            ensure(vec![c.gcd()] == s.gcd() && vec![c.lcm()] == s.lcm(), || {
                format!("gcd or lcm not preserved at n={n}")
            })?;
            image.insert(c);
        }
        ensure(image.len() == decomps[n].len(), || {
            format!("not injective at n={n}")
        })?;
        let target: BTreeSet<Necs> = enumerate_necs(n).into_iter().collect();
        ensure(image == target, || format!("image differs at n={n}"))?;
    }
    Ok(())
}

fn lcm_classes() -> Outcome {
    let mut c = LcmCounter::new();
    let systems = enumerate_necs_levels(8);
    let decomps = enumerate_levels(1, 8);
    for l in 1..=8u64 {
        let h = c.h(&[l]).map_err(|e| e.to_string())?;
        let necs = systems.iter().flatten().filter(|s| s.lcm() == l).count();
        let dec = decomps
            .iter()
            .flatten()
            .filter(|s| s.lcm() == vec![l])
            .count();
        ensure(big(necs as i64) == h && big(dec as i64) == h, || {
            format!("lcm {l}: coverings {necs}, decompositions {dec}, h {h}")
        })?;
    }
    Ok(())
}

fn growth_one() -> Outcome {
    let k = find_saddle(1, DEFAULT_TOL)
        .map_err(|e| e.to_string())?
        .growth_rate;
    ensure((k - 5.487452).abs() <= 1e-5, || format!("K_1 = {k}"))
}

fn growth_excess() -> Outcome {
    for (d, excess) in [(2u32, 0.004290), (3, 0.007080), (30, 0.001910)] {
        let k = find_saddle(d, DEFAULT_TOL)
            .map_err(|e| e.to_string())?
            .growth_rate;
        let got = k - (4.0 * d as f64 + 1.5);
        ensure((got - excess).abs() <= 1e-5, || format!("d={d}: {got}"))?;
    }
    Ok(())
}

fn growth_bounds() -> Outcome {
    for d in 2..=30 {
        let ok = check_growth_bounds(d).map_err(|e| e.to_string())?;
        ensure(ok, || format!("d={d}"))?;
    }
    Ok(())
}

fn exact_ratio() -> Outcome {
    let k = find_saddle(1, DEFAULT_TOL)
        .map_err(|e| e.to_string())?
        .growth_rate;
    let s = decomposition_counts(1, 151);
    let ratio = big_ratio(&s.coeff(151), &s.coeff(150));
    ensure(((ratio - k) / k).abs() < 0.01, || format!("ratio {ratio}"))
}

fn estimate_trend() -> Outcome {
    for d in 1..=2u32 {
        let saddle = find_saddle(d, DEFAULT_TOL).map_err(|e| e.to_string())?;
        let exact = decomposition_counts(d, 400);
        let rel = |n: u64| {
            let ln = big_ln(&exact.coeff(n as usize)) - ln_asymptotic_estimate_at(&saddle, n);
            (ln.exp() - 1.0).abs()
        };
        let (e100, e400) = (rel(100), rel(400));
        ensure(e400 < e100, || {
            format!("d={d}: {e100} at 100, {e400} at 400")
        })?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_partition_all() {
        let total: usize = [
            Suite::Tables,
            Suite::Oracles,
            Suite::Bijection,
            Suite::Asymptotics,
        ]
        .iter()
        .map(|&s| checks(s).len())
        .sum();
        assert_eq!(total, checks(Suite::All).len());
    }

    #[test]
    fn tables_pass() {
        let results = run(&checks(Suite::Tables), true);
        for r in &results {
            assert!(r.passed(), "{}: {:?}", r.name, r.to_json());
        }
    }
}
