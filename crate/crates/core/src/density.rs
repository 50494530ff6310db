//! Density estimates along total-degree truncations `M_1, M_2, ..` of an
//! infinitely generated module.

use num_rational::BigRational;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::dist::{exact_distribution, ZeroCountDistribution};
use crate::error::{Error, Result};
use crate::exec::RunOptions;
use crate::poly::Point;
use crate::space::Filtration;
use crate::zeros::vanishing_probability;

#[derive(Debug, Clone)]
pub struct DensityConfig {
    /// Number of polynomials per system.
    pub m: usize,
    /// Stop once successive truncations are closer than this in TV distance.
    pub tol: f64,
    /// When false, every truncation up to `t_max` is computed.
    pub stop_early: bool,
    /// Point for the per-truncation vanishing probability; the origin if `None`.
    pub point: Option<Vec<u64>>,
}

impl DensityConfig {
    pub fn new(m: usize, tol: f64) -> Self {
        DensityConfig {
            m,
            tol,
            stop_early: true,
            point: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct TruncationStats {
    pub t: u32,
    pub rank: usize,
    /// `None` over non-fields.
    pub contains_functions: Option<bool>,
    pub vanishing_probability: BigRational,
    pub distribution: ZeroCountDistribution,
    pub tv_from_previous: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct FiltrationEstimate {
    pub per_t: Vec<TruncationStats>,
    pub converged: bool,
    pub tol: f64,
    /// Set when a truncation could not be computed; `per_t` holds what was.
    pub error: Option<Error>,
}

impl FiltrationEstimate {
    pub fn last(&self) -> Option<&TruncationStats> {
        self.per_t.last()
    }

    pub fn to_json(&self) -> Value {
        let per_t: Vec<Value> = self
            .per_t
            .iter()
            .map(|s| {
                json!({
                    "t": s.t,
                    "rank": s.rank,
                    "contains_functions": s.contains_functions,
                    "vanishing_probability": {
                        "num": s.vanishing_probability.numer().to_string(),
                        "den": s.vanishing_probability.denom().to_string(),
                    },
                    "tv_from_previous": s.tv_from_previous,
                    "distribution": s.distribution.to_json(),
                })
            })
            .collect();
        json!({
            "tol": self.tol,
            "converged": self.converged,
            "error": self.error.as_ref().map(|e| e.to_string()),
            "per_t": per_t,
        })
    }
}

/// Exhaustive zero-count distributions of `M_t` for `t = 1, 2, .., t_max`.
///
/// Two successive truncations count as converged when their TV distance is
/// below `tol` or their exact pmfs coincide.
pub fn density_estimate(filtration: &Filtration, config: &DensityConfig, opts: &RunOptions) -> Result<FiltrationEstimate> {
    if config.m == 0 {
        return Err(Error::InvalidArgument("m must be at least 1".into()));
    }
    if config.tol.is_nan() || config.tol < 0.0 {
        return Err(Error::InvalidArgument(format!("tol must be nonnegative, got {}", config.tol)));
    }
    let ring = filtration.ring();
    let coords = config
        .point
        .clone()
        .unwrap_or_else(|| vec![0; filtration.nvars()]);
    let point = Point::from_indices(ring, coords)?;
    if point.len() != filtration.nvars() {
        return Err(Error::ArityMismatch {
            expected: filtration.nvars(),
            got: point.len(),
        });
    }

    let mut est = FiltrationEstimate {
        per_t: Vec::new(),
        converged: false,
        tol: config.tol,
        error: None,
    };
    for t in 1..=filtration.t_max() {
        let step = (|| -> Result<TruncationStats> {
            let space = filtration.truncation(t)?;
            let distribution = exact_distribution(&space, config.m, opts)?;
            let vanishing = vanishing_probability(&space, &point, opts.budget)?;
            let contains_functions = if ring.is_field() {
                space.contains_functions(opts.budget).ok()
            } else {
                None
            };
            Ok(TruncationStats {
                t,
                rank: space.rank(),
                contains_functions,
                vanishing_probability: vanishing,
                distribution,
                tv_from_previous: None,
            })
        })();
        let mut stats = match step {
            Ok(s) => s,
            Err(e) => {
                est.converged = false;
                est.error = Some(e);
                break;
            }
        };
        if let Some(prev) = est.per_t.last() {
            let exact = stats.distribution.total_variation_exact(&prev.distribution);
            let tv = stats.distribution.total_variation(&prev.distribution);
            stats.tv_from_previous = Some(tv);
            est.converged = tv < config.tol || exact.is_some_and(|d| d.is_zero());
        }
        est.per_t.push(stats);
        if est.converged && config.stop_early {
            break;
        }
    }
    Ok(est)
}
