//! Builds every output format up front so nothing is written on failure.

use std::fmt::Write;

use serde_json::{json, Value};
use num_bigint::BigInt;
use num_rational::BigRational;
use zerolab::poly::all_points;
use zerolab::{
    vanishing_count, Budget, Error, FiltrationEstimate, GofReport, Point, PoissonRow, RingSpec, SampleSpace,
    VanishingQuery, ZeroCountDistribution,
};

pub struct Rendered {
    pub json: Value,
    pub csv: String,
    pub table: String,
}

impl Rendered {
    pub fn distribution(d: ZeroCountDistribution) -> Self {
        Rendered {
            json: d.to_json(),
            csv: d.to_csv(),
            table: d.to_table(),
        }
    }
}

fn yes_no(v: Option<bool>) -> String {
    v.map_or("n/a".into(), |b| b.to_string())
}

pub fn space_check(space: &SampleSpace, extends: bool, contains: Option<bool>, coverage: Option<u64>) -> Rendered {
    let total = space.total_function_count();
    let basis: Vec<String> = space.basis().iter().map(|b| b.to_string()).collect();
    let json = json!({
        "ring": space.ring().to_string(),
        "space": space.label(),
        "n": space.nvars(),
        "rank": space.rank(),
        "basis": basis,
        "extends_ring": extends,
        "contains_functions": contains,
        "function_coverage": coverage,
        "total_functions": total.map(|t| t.to_string()),
    });
    let rows = [
        ("ring", space.ring().to_string()),
        ("space", space.label().to_string()),
        ("n", space.nvars().to_string()),
        ("rank", space.rank().to_string()),
        ("extends-R", extends.to_string()),
        ("contains-functions", yes_no(contains)),
        ("function-coverage", coverage.map_or("n/a".into(), |c| c.to_string())),
        ("total-functions", total.map_or("n/a".into(), |t| t.to_string())),
    ];
    let mut csv = String::from("key,value\n");
    let mut table = String::new();
    for (k, v) in rows {
        let _ = writeln!(csv, "{k},{v}");
        let _ = writeln!(table, "{:<19} {v}", format!("{k}:"));
    }
    let _ = writeln!(table, "{:<19} {}", "basis:", basis.join(", "));
    Rendered { json, csv, table }
}

pub fn compare(observed: ZeroCountDistribution, model: ZeroCountDistribution, gof: Option<GofReport>) -> Rendered {
    let tv = observed.total_variation(&model);
    let tv_exact = observed.total_variation_exact(&model);
    let json = json!({
        "observed": observed.to_json(),
        "model": model.to_json(),
        "tv": tv,
        "tv_exact": tv_exact.as_ref().map(|r| json!({"num": r.numer().to_string(), "den": r.denom().to_string()})),
        "gof": gof,
    });
    let len = observed.max_count().max(model.max_count()) + 1;
    let mut csv = String::from("count,observed,model\n");
    let mut table = format!(
        "observed [{}] vs model [{}]\n{:>7}  {:>14}  {:>14}\n",
        observed.provenance, model.provenance, "count", "observed", "model"
    );
    for r in 0..len {
        let (o, m) = (observed.prob(r), model.prob(r));
        let _ = writeln!(csv, "{r},{o},{m}");
        let _ = writeln!(table, "{r:>7}  {o:>14.10}  {m:>14.10}");
    }
    let _ = writeln!(table, "total variation {tv}");
    if let Some(exact) = &tv_exact {
        let _ = writeln!(table, "total variation (exact) {exact}");
    }
    if let Some(g) = &gof {
        let _ = writeln!(table, "chi-square {} on {} dof, p = {}", g.statistic, g.dof, g.p_value);
    }
    Rendered { json, csv, table }
}

pub fn density(ring: &RingSpec, n: usize, t_max: u32, est: FiltrationEstimate) -> Rendered {
    let m = est.per_t.first().map_or(0, |s| s.distribution.params.m);
    let mut json = est.to_json();
    json["params"] = json!({"ring": ring.to_string(), "n": n, "m": m, "t_max": t_max, "filtration": "total"});
    let mut csv = String::from("t,rank,contains_functions,vanishing_probability,tv_from_previous\n");
    let mut table = format!("ring {ring}  n={n} m={m}  total-degree truncations, tol {}\n", est.tol);
    let _ = writeln!(table, "{:>3}  {:>6}  {:>9}  {:>12}  {:>14}  pmf", "t", "rank", "functions", "P(f(p)=0)", "tv");
    for s in &est.per_t {
        let tv = s.tv_from_previous.map_or(String::new(), |x| x.to_string());
        let cf = s.contains_functions.map_or(String::new(), |b| b.to_string());
        let _ = writeln!(csv, "{},{},{cf},{},{tv}", s.t, s.rank, s.vanishing_probability);
        let pmf: Vec<String> = match s.distribution.exact_probs() {
            Some(p) => p.iter().map(|x| x.to_string()).collect(),
            None => s.distribution.probs_f64().iter().map(|x| x.to_string()).collect(),
        };
        let _ = writeln!(
            table,
            "{:>3}  {:>6}  {:>9}  {:>12}  {:>14}  {}",
            s.t,
            s.rank,
            yes_no(s.contains_functions),
            s.vanishing_probability.to_string(),
            s.tv_from_previous.map_or("-".into(), |x| format!("{x:.3e}")),
            pmf.join(" ")
        );
    }
    let _ = writeln!(table, "converged: {}", est.converged);
    Rendered { json, csv, table }
}

pub fn poisson(meta: Value, rows: Vec<PoissonRow>) -> Rendered {
    let mut json = meta;
    json["rows"] = rows
        .iter()
        .map(|r| json!({"q": r.q, "trials": r.trials, "tv": r.tv, "p0": r.p0}))
        .collect();
    let mut csv = String::from("q,trials,tv,p0\n");
    let mut table = format!("{:>6}  {:>10}  {:>22}  {:>12}\n", "q", "trials", "TV(Bin, Poisson(1))", "P(0)");
    for r in &rows {
        let _ = writeln!(csv, "{},{},{},{}", r.q, r.trials, r.tv, r.p0);
        let _ = writeln!(table, "{:>6}  {:>10}  {:>22.12}  {:>12.9}", r.q, r.trials, r.tv, r.p0);
    }
    Rendered { json, csv, table }
}

fn rational_json(r: &BigRational) -> Value {
    json!({"num": r.numer().to_string(), "den": r.denom().to_string()})
}

/// Vanishing counts for every point subset of size `1..=max_points`, in
/// order of size and then of the subset's point indices.
pub fn vanish(space: &SampleSpace, max_points: usize, budget: Budget) -> zerolab::Result<Rendered> {
    let ring = space.ring();
    let npoints = space.num_points().unwrap_or(u128::MAX);
    if npoints > 20 && max_points > 1 {
        return Err(Error::InvalidArgument(format!(
            "subsets of more than one point need at most 20 points, the space has {npoints}"
        )));
    }
    let size = space.size().map(BigInt::from);
    let subsets = (1..=max_points.min(npoints as usize))
        .map(|r| binomial(npoints, r as u128))
        .try_fold(0u128, |acc, c| acc.checked_add(c?));
    budget.check(
        "vanishing counts over point subsets",
        subsets.and_then(|s| s.checked_mul(space.size()?)?.checked_mul(max_points as u128)),
    )?;
    let size = size.expect("size is bounded by the budget check");
    let points: Vec<Point> = all_points(ring, space.nvars()).collect();
    let count = |set: &[Point]| -> zerolab::Result<u64> {
        vanishing_count(&VanishingQuery::new(space.clone(), set.to_vec())?, budget)
    };
    let marginals: Vec<BigRational> = points
        .iter()
        .map(|p| Ok(BigRational::new(count(std::slice::from_ref(p))?.into(), size.clone())))
        .collect::<zerolab::Result<_>>()?;

    let mut sets: Vec<Vec<usize>> = Vec::new();
    for r in 1..=max_points.min(points.len()) {
        let mut idx: Vec<usize> = (0..r).collect();
        loop {
            sets.push(idx.clone());
            // next r-combination in lexicographic order
            let Some(i) = (0..r).rev().find(|&i| idx[i] != i + points.len() - r) else {
                break;
            };
            idx[i] += 1;
            for j in i + 1..r {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }

    let mut rows = Vec::new();
    let mut csv = String::from("points,count,probability,product_of_marginals,factorizes\n");
    let mut table = format!("ring {ring}  space {}  rank {}\n", space.label(), space.rank());
    let _ = writeln!(table, "{:<24} {:>10}  {:>14}  {:>14}  factorizes", "points", "count", "probability", "product");
    for set in sets {
        let chosen: Vec<Point> = set.iter().map(|&i| points[i].clone()).collect();
        let c = count(&chosen)?;
        let p = BigRational::new(c.into(), size.clone());
        let product = set.iter().fold(BigRational::from_integer(1.into()), |acc, &i| acc * &marginals[i]);
        let factorizes = p == product;
        let label: Vec<String> = chosen.iter().map(|pt| pt.to_string()).collect();
        rows.push(json!({
            "points": chosen.iter().map(|pt| pt.indices().to_vec()).collect::<Vec<_>>(),
            "count": c,
            "probability": rational_json(&p),
            "product_of_marginals": rational_json(&product),
            "factorizes": factorizes,
        }));
        let _ = writeln!(csv, "\"{}\",{c},{p},{product},{factorizes}", label.join(" "));
        let _ = writeln!(table, "{:<24} {c:>10}  {:>14}  {:>14}  {factorizes}", label.join(" "), p.to_string(), product.to_string());
    }
    let json = json!({
        "ring": ring.to_string(),
        "space": space.label(),
        "n": space.nvars(),
        "rank": space.rank(),
        "size": size.to_string(),
        "rows": rows,
    });
    Ok(Rendered { json, csv, table })
}

fn binomial(n: u128, r: u128) -> Option<u128> {
    (0..r).try_fold(1u128, |acc, i| Some(acc.checked_mul(n - i)? / (i + 1)))
}
