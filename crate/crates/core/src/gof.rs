//! Pearson chi-square goodness of fit with tail-bin merging.

use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};

/// Reject the model below this p-value.
pub const DEFAULT_SIGNIFICANCE: f64 = 1e-3;

/// Bins are merged until each expects at least this many observations.
pub const MIN_EXPECTED: f64 = 5.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GofBin {
    /// Inclusive range of categories merged into this bin.
    pub lo: usize,
    pub hi: usize,
    pub observed: u64,
    pub expected: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GofReport {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    pub bins: Vec<GofBin>,
}

impl GofReport {
    pub fn rejects(&self, significance: f64) -> bool {
        self.p_value < significance
    }
}

/// Chi-square test of `observed` category counts against `probs`.
///
/// Adjacent categories are merged left to right until every bin expects at
/// least [`MIN_EXPECTED`] observations; a short final bin joins its predecessor.
pub fn pearson(observed: &[u64], probs: &[f64]) -> Result<GofReport> {
    if observed.len() != probs.len() {
        return Err(Error::InvalidArgument(format!(
            "{} observed categories but {} model probabilities",
            observed.len(),
            probs.len()
        )));
    }
    let total: u64 = observed.iter().sum();
    if total == 0 {
        return Err(Error::InvalidArgument("no observations".into()));
    }
    let n = total as f64;

    let mut bins: Vec<GofBin> = Vec::new();
    let mut open: Option<GofBin> = None;
    for (i, (&o, &p)) in observed.iter().zip(probs).enumerate() {
        let bin = open.get_or_insert(GofBin {
            lo: i,
            hi: i,
            observed: 0,
            expected: 0.0,
        });
        bin.hi = i;
        bin.observed += o;
        bin.expected += n * p;
        if bin.expected >= MIN_EXPECTED {
            bins.extend(open.take());
        }
    }
    if let Some(rest) = open {
        match bins.last_mut() {
            Some(last) => {
                last.hi = rest.hi;
                last.observed += rest.observed;
                last.expected += rest.expected;
            }
            None => bins.push(rest),
        }
    }
    if bins.len() < 2 {
        return Err(Error::TooFewBins(bins.len()));
    }

    let statistic: f64 = bins
        .iter()
        .map(|b| {
            let d = b.observed as f64 - b.expected;
            d * d / b.expected
        })
        .sum();
    let dof = bins.len() - 1;
    let chi = ChiSquared::new(dof as f64).expect("dof is positive");
    let p_value = chi.sf(statistic);
    Ok(GofReport {
        statistic,
        dof,
        p_value,
        bins,
    })
}
