//! Distributions of the number of common zeros of a random polynomial system.
//!
//! Exhaustive and theoretical distributions carry exact rational
//! probabilities; Monte Carlo distributions carry raw histogram counts.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{checked_pow, Error, Result};
use crate::exec::{shards, RunOptions};
use crate::gof::{self, GofReport};
use crate::ring::prime_power;
use crate::space::{EvalTable, SampleSpace};

/// Polynomials per exhaustive-enumeration shard.
const ENUM_CHUNK: u64 = 1 << 12;

/// Samples per Monte Carlo shard; shard `i` draws from ChaCha stream `i`.
pub const MC_CHUNK: u64 = 1 << 12;

/// Largest number of trials accepted by the binomial model.
const MAX_TRIALS: u128 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistParams {
    pub ring: String,
    pub space: String,
    pub n: usize,
    pub m: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    Exhaustive,
    MonteCarlo { samples: u64, seed: u64 },
    Theoretical { model: String },
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Exhaustive => write!(f, "exhaustive"),
            Provenance::MonteCarlo { samples, seed } => {
                write!(f, "monte_carlo(samples={samples},seed={seed})")
            }
            Provenance::Theoretical { model } => write!(f, "theoretical({model})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Pmf {
    /// `probs[r]` is the exact probability of exactly `r` common zeros.
    Exact(Vec<BigRational>),
    Empirical { counts: Vec<u64>, samples: u64 },
}

/// Expectation, exact when the distribution is.
#[derive(Debug, Clone, PartialEq)]
pub enum Mean {
    Exact(BigRational),
    Float(f64),
}

impl Mean {
    pub fn to_f64(&self) -> f64 {
        match self {
            Mean::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Mean::Float(x) => *x,
        }
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            Mean::Exact(r) => Some(r),
            Mean::Float(_) => None,
        }
    }
}

impl fmt::Display for Mean {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mean::Exact(r) => write!(f, "{r}"),
            Mean::Float(x) => write!(f, "{x}"),
        }
    }
}

/// Pmf of the common-zero count over the support `0..=|R|^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroCountDistribution {
    pub params: DistParams,
    pub provenance: Provenance,
    pub pmf: Pmf,
}

fn rational(num: impl Into<BigInt>, den: impl Into<BigInt>) -> BigRational {
    BigRational::new(num.into(), den.into())
}

impl ZeroCountDistribution {
    /// Largest count in the support, `|R|^n`.
    pub fn max_count(&self) -> usize {
        self.len() - 1
    }

    fn len(&self) -> usize {
        match &self.pmf {
            Pmf::Exact(p) => p.len(),
            Pmf::Empirical { counts, .. } => counts.len(),
        }
    }

    pub fn exact_probs(&self) -> Option<&[BigRational]> {
        match &self.pmf {
            Pmf::Exact(p) => Some(p),
            Pmf::Empirical { .. } => None,
        }
    }

    pub fn prob(&self, r: usize) -> f64 {
        match &self.pmf {
            Pmf::Exact(p) => p.get(r).and_then(|x| x.to_f64()).unwrap_or(0.0),
            Pmf::Empirical { counts, samples } => {
                counts.get(r).map_or(0.0, |&c| c as f64 / *samples as f64)
            }
        }
    }

    pub fn probs_f64(&self) -> Vec<f64> {
        (0..self.len()).map(|r| self.prob(r)).collect()
    }

    /// `sum_r r * P(r)`.
    pub fn expectation(&self) -> Mean {
        match &self.pmf {
            Pmf::Exact(p) => Mean::Exact(
                p.iter()
                    .enumerate()
                    .fold(BigRational::zero(), |acc, (r, x)| acc + x * BigInt::from(r)),
            ),
            Pmf::Empirical { counts, samples } => {
                let s: u128 = counts.iter().enumerate().map(|(r, &c)| r as u128 * c as u128).sum();
                Mean::Float(s as f64 / *samples as f64)
            }
        }
    }

    /// Exact total variation distance when both pmfs are exact.
    pub fn total_variation_exact(&self, other: &ZeroCountDistribution) -> Option<BigRational> {
        let (a, b) = (self.exact_probs()?, other.exact_probs()?);
        let zero = BigRational::zero();
        let len = a.len().max(b.len());
        let sum = (0..len).fold(BigRational::zero(), |acc, i| {
            let d = a.get(i).unwrap_or(&zero) - b.get(i).unwrap_or(&zero);
            acc + d.abs()
        });
        Some(sum / BigInt::from(2))
    }

    /// `(1/2) sum |p_i - q_i|` over the union of supports.
    pub fn total_variation(&self, other: &ZeroCountDistribution) -> f64 {
        if let Some(tv) = self.total_variation_exact(other) {
            return tv.to_f64().unwrap_or(f64::NAN);
        }
        total_variation(&self.probs_f64(), &other.probs_f64())
    }

    /// Whether the probabilities sum to one (exactly, or within `1e-12`).
    pub fn is_normalized(&self) -> bool {
        match &self.pmf {
            Pmf::Exact(p) => p.iter().fold(BigRational::zero(), |a, x| a + x).is_one(),
            Pmf::Empirical { counts, samples } => {
                let s: f64 = counts.iter().map(|&c| c as f64 / *samples as f64).sum();
                (s - 1.0).abs() < 1e-12 && counts.iter().sum::<u64>() == *samples
            }
        }
    }

    pub fn to_json(&self) -> Value {
        let pmf: Vec<Value> = match &self.pmf {
            Pmf::Exact(p) => p
                .iter()
                .enumerate()
                .map(|(r, x)| json!({"count": r, "num": x.numer().to_string(), "den": x.denom().to_string()}))
                .collect(),
            Pmf::Empirical { .. } => (0..self.len())
                .map(|r| json!({"count": r, "p": self.prob(r)}))
                .collect(),
        };
        let mean = match self.expectation() {
            Mean::Exact(r) => json!({"num": r.numer().to_string(), "den": r.denom().to_string()}),
            Mean::Float(x) => json!(x),
        };
        json!({
            "params": {
                "ring": self.params.ring,
                "space": self.params.space,
                "n": self.params.n,
                "m": self.params.m,
            },
            "provenance": self.provenance.to_string(),
            "pmf": pmf,
            "mean": mean,
        })
    }

    /// `count,probability` rows with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("count,probability\n");
        for r in 0..self.len() {
            out.push_str(&format!("{r},{}\n", self.prob(r)));
        }
        out
    }

    pub fn to_table(&self) -> String {
        let mut out = format!(
            "ring {}  space {}  n={} m={}  [{}]\n",
            self.params.ring, self.params.space, self.params.n, self.params.m, self.provenance
        );
        out.push_str(&format!("{:>7}  {:>14}  {}\n", "count", "probability", "exact"));
        for r in 0..self.len() {
            let exact = match &self.pmf {
                Pmf::Exact(p) => p[r].to_string(),
                Pmf::Empirical { counts, .. } => format!("{} draws", counts[r]),
            };
            out.push_str(&format!("{r:>7}  {:>14.10}  {exact}\n", self.prob(r)));
        }
        out.push_str(&format!("mean {}\n", self.expectation()));
        out
    }
}

/// Total variation distance of two pmfs on `0..`, padding the shorter with zeros.
pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    let len = p.len().max(q.len());
    0.5 * (0..len)
        .map(|i| (p.get(i).copied().unwrap_or(0.0) - q.get(i).copied().unwrap_or(0.0)).abs())
        .sum::<f64>()
}

fn params_for(space: &SampleSpace, m: usize) -> DistParams {
    DistParams {
        ring: space.ring().to_string(),
        space: space.label().to_string(),
        n: space.nvars(),
        m,
    }
}

fn check_m(m: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::InvalidArgument("the number of polynomials m must be at least 1".into()));
    }
    Ok(())
}

/// Zero sets as bitsets over the points of `R^n`.
type ZeroMask = Vec<u64>;

fn zero_mask(table: &EvalTable, coeffs: &[u64]) -> ZeroMask {
    let mut mask = vec![0u64; table.npoints.div_ceil(64)];
    for p in 0..table.npoints {
        if table.value(coeffs, p) == 0 {
            mask[p / 64] |= 1 << (p % 64);
        }
    }
    mask
}

fn popcount(mask: &[u64]) -> usize {
    mask.iter().map(|w| w.count_ones() as usize).sum()
}

/// Exact pmf by enumerating every `m`-tuple of polynomials of the space.
///
/// Each polynomial's zero set is computed once; tuples are then aggregated
/// through the multiset of distinct zero sets, intersecting one factor at a time.
pub fn exact_distribution(space: &SampleSpace, m: usize, opts: &RunOptions) -> Result<ZeroCountDistribution> {
    check_m(m)?;
    let tuples = space.size().and_then(|s| s.checked_pow(m as u32));
    let cost = tuples.and_then(|t| t.checked_mul(space.num_points()?));
    opts.budget.check(
        &format!("exhaustive distribution over {}^({}*{m}) tuples", space.ring().order(), space.rank()),
        cost,
    )?;
    let tuples = tuples.unwrap_or(0);
    let npoints = space.num_points().unwrap_or(0) as usize;
    let table = space.evaluation_table(&space.all_point_coords());
    let total = space.size().unwrap_or(0) as u64;

    let hist: Vec<u128> = opts.install(|| {
        let masks: HashMap<ZeroMask, u128> = shards(total, ENUM_CHUNK)
            .into_par_iter()
            .map(|(lo, hi)| {
                let mut local: HashMap<ZeroMask, u128> = HashMap::new();
                for i in lo..hi {
                    *local.entry(zero_mask(&table, &space.coefficients_at(i))).or_default() += 1;
                }
                local
            })
            .reduce(HashMap::new, merge_counts);
        let mut distinct: Vec<(ZeroMask, u128)> = masks.into_iter().collect();
        distinct.sort();

        let mut current: HashMap<ZeroMask, u128> = distinct.iter().cloned().collect();
        for _ in 1..m {
            let entries: Vec<(ZeroMask, u128)> = current.into_iter().collect();
            current = entries
                .par_iter()
                .map(|(a, wa)| {
                    let mut local: HashMap<ZeroMask, u128> = HashMap::new();
                    for (b, cb) in &distinct {
                        let meet: ZeroMask = a.iter().zip(b).map(|(x, y)| x & y).collect();
                        *local.entry(meet).or_default() += wa * cb;
                    }
                    local
                })
                .reduce(HashMap::new, merge_counts);
        }
        let mut hist = vec![0u128; npoints + 1];
        for (mask, w) in current {
            hist[popcount(&mask)] += w;
        }
        hist
    });

    let probs = hist.into_iter().map(|c| rational(c, tuples)).collect();
    Ok(ZeroCountDistribution {
        params: params_for(space, m),
        provenance: Provenance::Exhaustive,
        pmf: Pmf::Exact(probs),
    })
}

fn merge_counts<K: std::hash::Hash + Eq>(mut a: HashMap<K, u128>, b: HashMap<K, u128>) -> HashMap<K, u128> {
    if a.len() < b.len() {
        return merge_counts(b, a);
    }
    for (k, v) in b {
        *a.entry(k).or_default() += v;
    }
    a
}

/// Binomial pmf `Bin(q^n, 1/q^m)` as exact rationals.
pub fn theoretical_distribution(q: u64, n: usize, m: usize) -> Result<ZeroCountDistribution> {
    check_m(m)?;
    if n == 0 {
        return Err(Error::InvalidArgument("the number of variables must be at least 1".into()));
    }
    if prime_power(q).is_none() {
        return Err(Error::InvalidArgument(format!("q = {q} is not a prime power")));
    }
    let trials = checked_pow(q, n as u64)
        .filter(|&t| t <= MAX_TRIALS)
        .ok_or_else(|| Error::InvalidArgument(format!("q^n = {q}^{n} trials is too many")))?;
    let probs = binomial_pmf(trials as u64, q, m);
    Ok(ZeroCountDistribution {
        params: DistParams {
            ring: format!("GF({q})"),
            space: "contains-functions".into(),
            n,
            m,
        },
        provenance: Provenance::Theoretical {
            model: format!("binomial(N={trials},p=1/{q}^{m})"),
        },
        pmf: Pmf::Exact(probs),
    })
}

/// `P(r) = C(N, r) (q^m - 1)^(N - r) / q^(m N)` for `r = 0..=N`.
fn binomial_pmf(trials: u64, q: u64, m: usize) -> Vec<BigRational> {
    let qm = BigInt::from(q).pow(m as u32);
    let fail: BigInt = &qm - 1u32;
    let den = qm.pow(trials as u32);
    let n = BigInt::from(trials);
    (0..=trials)
        .map(|r| {
            let c = binomial(n.clone(), BigInt::from(r));
            BigRational::new(c * fail.pow((trials - r) as u32), den.clone())
        })
        .collect()
}

/// Empirical pmf from `samples` independent uniform `m`-tuples.
///
/// Samples are drawn in fixed shards of [`MC_CHUNK`], shard `i` using ChaCha8
/// stream `i` of `seed`, so the result depends only on `(seed, samples)`.
pub fn monte_carlo_distribution(
    space: &SampleSpace,
    m: usize,
    samples: u64,
    seed: u64,
    opts: &RunOptions,
) -> Result<ZeroCountDistribution> {
    check_m(m)?;
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be at least 1".into()));
    }
    let npoints = space.num_points().unwrap_or(u128::MAX);
    let cost = npoints
        .checked_mul(m as u128)
        .and_then(|c| c.checked_mul(samples as u128));
    opts.budget.check("Monte Carlo sampling", cost)?;
    let npoints = npoints as usize;
    let table = space.evaluation_table(&space.all_point_coords());
    let k = space.rank();

    let counts: Vec<u64> = opts.install(|| {
        shards(samples, MC_CHUNK)
            .into_par_iter()
            .enumerate()
            .map(|(stream, (lo, hi))| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(stream as u64);
                let mut hist = vec![0u64; npoints + 1];
                let mut coeffs = vec![0u64; k * m];
                for _ in lo..hi {
                    for f in 0..m {
                        space.sample_coefficients(&mut rng, &mut coeffs[f * k..(f + 1) * k]);
                    }
                    let zeros = (0..npoints)
                        .filter(|&p| (0..m).all(|f| table.value(&coeffs[f * k..(f + 1) * k], p) == 0))
                        .count();
                    hist[zeros] += 1;
                }
                hist
            })
            .reduce(
                || vec![0u64; npoints + 1],
                |mut a, b| {
                    a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                    a
                },
            )
    });

    Ok(ZeroCountDistribution {
        params: params_for(space, m),
        provenance: Provenance::MonteCarlo { samples, seed },
        pmf: Pmf::Empirical { counts, samples },
    })
}

/// Pearson chi-square test of a Monte Carlo pmf against a model pmf.
pub fn gof_test(empirical: &ZeroCountDistribution, model: &ZeroCountDistribution) -> Result<GofReport> {
    let Pmf::Empirical { counts, .. } = &empirical.pmf else {
        return Err(Error::Precondition(format!(
            "goodness of fit needs a Monte Carlo distribution, got {}",
            empirical.provenance
        )));
    };
    let len = counts.len().max(model.len());
    let mut observed = counts.clone();
    observed.resize(len, 0);
    let mut probs = model.probs_f64();
    probs.resize(len, 0.0);
    gof::pearson(&observed, &probs)
}

/// Poisson(1) mass beyond the truncation stays below this.
pub const POISSON_TAIL: f64 = 1e-12;

pub fn poisson_one_pmf(k: usize) -> f64 {
    let log_fact: f64 = (1..=k).map(|i| (i as f64).ln()).sum();
    (-1.0 - log_fact).exp()
}

/// Smallest `K` with `P(X > K) < tail` for `X ~ Poisson(1)`, using the
/// ratio bound `P(X > K) <= e^-1 / (K+1)! * (K+2)/(K+1)`.
pub fn poisson_truncation(tail: f64) -> usize {
    let mut k = 0usize;
    loop {
        let bound = poisson_one_pmf(k + 1) * (k as f64 + 2.0) / (k as f64 + 1.0);
        if bound < tail {
            return k;
        }
        k += 1;
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PoissonRow {
    pub q: u64,
    /// Number of trials `q^n`.
    pub trials: u64,
    pub tv: f64,
    /// `P(0 zeros)` under the binomial law.
    pub p0: f64,
}

/// TV distance between `Bin(q^n, q^-n)` and Poisson(1) for each `q`.
pub fn poisson_limit_report(n: usize, q_list: &[u64]) -> Result<Vec<PoissonRow>> {
    let cutoff = poisson_truncation(POISSON_TAIL);
    q_list
        .iter()
        .map(|&q| {
            let dist = theoretical_distribution(q, n, n)?;
            let bin = dist.probs_f64();
            let upper = cutoff.max(bin.len() - 1);
            let tv = 0.5
                * (0..=upper)
                    .map(|k| (bin.get(k).copied().unwrap_or(0.0) - poisson_one_pmf(k)).abs())
                    .sum::<f64>();
            Ok(PoissonRow {
                q,
                trials: (bin.len() - 1) as u64,
                tv,
                p0: bin[0],
            })
        })
        .collect()
}
