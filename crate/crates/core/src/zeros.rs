//! Common-zero counting and vanishing-set cardinalities.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{checked_pow, Budget, Error, Result};
use crate::poly::{point_coords, Point, Polynomial};
use crate::ring::RingSpec;
use crate::space::SampleSpace;

/// An ordered list of `m >= 1` polynomials over one ring; repeats are allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolySystem {
    polys: Vec<Polynomial>,
}

impl PolySystem {
    pub fn new(polys: Vec<Polynomial>) -> Result<Self> {
        let first = polys
            .first()
            .ok_or_else(|| Error::InvalidArgument("a system needs at least one polynomial".into()))?;
        for p in &polys[1..] {
            if p.ring() != first.ring() {
                return Err(Error::MismatchedRing {
                    left: first.ring().to_string(),
                    right: p.ring().to_string(),
                });
            }
            if p.nvars() != first.nvars() {
                return Err(Error::ArityMismatch {
                    expected: first.nvars(),
                    got: p.nvars(),
                });
            }
        }
        Ok(PolySystem { polys })
    }

    pub fn polys(&self) -> &[Polynomial] {
        &self.polys
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn ring(&self) -> &RingSpec {
        self.polys[0].ring()
    }

    pub fn nvars(&self) -> usize {
        self.polys[0].nvars()
    }
}

/// Number of points of `R^n` where every polynomial of the system vanishes.
pub fn count_common_zeros(system: &PolySystem, budget: Budget) -> Result<u64> {
    let ring = system.ring();
    let n = system.nvars();
    let points = checked_pow(ring.order(), n as u64);
    budget.check(
        "counting common zeros",
        points.and_then(|p| p.checked_mul(system.len() as u128)),
    )?;
    let total = points.unwrap_or(0) as u64;
    let count = (0..total)
        .filter(|&i| {
            let coords = point_coords(ring.order(), n, i);
            system.polys.iter().all(|f| f.evaluate_raw(&coords) == 0)
        })
        .count();
    Ok(count as u64)
}

/// A sample space together with `r >= 1` distinct points.
#[derive(Debug, Clone)]
pub struct VanishingQuery {
    space: SampleSpace,
    points: Vec<Point>,
}

impl VanishingQuery {
    pub fn new(space: SampleSpace, points: Vec<Point>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidArgument("a vanishing query needs at least one point".into()));
        }
        let mut seen = HashSet::new();
        for p in &points {
            if p.ring() != space.ring() {
                return Err(Error::MismatchedRing {
                    left: space.ring().to_string(),
                    right: p.ring().to_string(),
                });
            }
            if p.len() != space.nvars() {
                return Err(Error::ArityMismatch {
                    expected: space.nvars(),
                    got: p.len(),
                });
            }
            if !seen.insert(p.indices().to_vec()) {
                return Err(Error::InvalidArgument(format!("point {p} is repeated")));
            }
        }
        Ok(VanishingQuery { space, points })
    }

    pub fn space(&self) -> &SampleSpace {
        &self.space
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }
}

/// Number of polynomials in the space vanishing at every query point.
pub fn vanishing_count(query: &VanishingQuery, budget: Budget) -> Result<u64> {
    let space = &query.space;
    let r = query.points.len();
    budget.check(
        "counting vanishing polynomials",
        space.size().and_then(|s| s.checked_mul(r as u128)),
    )?;
    let coords: Vec<Vec<u64>> = query.points.iter().map(|p| p.indices().to_vec()).collect();
    let table = space.evaluation_table(&coords);
    let total = space.size().unwrap_or(0) as u64;
    let count = (0..total)
        .filter(|&i| {
            let c = space.coefficients_at(i);
            (0..r).all(|p| table.value(&c, p) == 0)
        })
        .count();
    Ok(count as u64)
}

fn ratio(num: u64, den: u128) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// `vanishing_count / |R|^k`, with no precondition on the space.
pub fn vanishing_fraction(query: &VanishingQuery, budget: Budget) -> Result<BigRational> {
    let count = vanishing_count(query, budget)?;
    Ok(ratio(count, query.space.size().unwrap_or(1)))
}

/// Probability that a uniform polynomial of the space vanishes at `point`.
pub fn vanishing_probability(space: &SampleSpace, point: &Point, budget: Budget) -> Result<BigRational> {
    let q = VanishingQuery::new(space.clone(), vec![point.clone()])?;
    vanishing_fraction(&q, budget)
}

/// Probability that a uniform polynomial vanishes at all of `points`.
///
/// Requires a field space that contains functions.
pub fn joint_vanishing_probability(space: &SampleSpace, points: &[Point], budget: Budget) -> Result<BigRational> {
    if !space.ring().is_field() {
        return Err(Error::Precondition(format!(
            "joint vanishing probabilities need a field, {} is not one",
            space.ring()
        )));
    }
    if !space.contains_functions(budget)? {
        return Err(Error::Precondition(format!(
            "space {space} over {} does not contain functions",
            space.ring()
        )));
    }
    let q = VanishingQuery::new(space.clone(), points.to_vec())?;
    vanishing_fraction(&q, budget)
}

/// A point set on which vanishing events fail to factor.
#[derive(Debug, Clone)]
pub struct IndependenceWitness {
    pub points: Vec<Point>,
    pub joint: BigRational,
    pub product_of_marginals: BigRational,
}

/// Searches point subsets by increasing size for one where
/// `P(all vanish) != prod P(vanishes at p)`.
pub fn independence_witness(space: &SampleSpace, budget: Budget) -> Result<Option<IndependenceWitness>> {
    let npoints = space.num_points().unwrap_or(u128::MAX);
    if npoints > 20 {
        return Err(Error::InvalidArgument(format!(
            "witness search supports at most 20 points, space has {npoints}"
        )));
    }
    let npoints = npoints as usize;
    let subsets = 1u128 << npoints;
    budget.check(
        "searching for an independence witness",
        space
            .size()
            .and_then(|s| s.checked_mul(npoints as u128))
            .and_then(|c| c.checked_add(subsets.checked_mul(space.size()?)?)),
    )?;
    let coords = space.all_point_coords();
    let table = space.evaluation_table(&coords);
    let total = space.size().unwrap_or(0) as u64;
    let masks: Vec<u32> = (0..total)
        .map(|i| {
            let c = space.coefficients_at(i);
            (0..npoints).fold(0u32, |m, p| if table.value(&c, p) == 0 { m | (1 << p) } else { m })
        })
        .collect();
    let vanishing = |set: u32| masks.iter().filter(|&&m| m & set == set).count() as u64;
    let size = space.size().unwrap_or(1);
    let marginals: Vec<BigRational> = (0..npoints).map(|p| ratio(vanishing(1 << p), size)).collect();

    let mut sets: Vec<u32> = (1..subsets as u32).filter(|s| s.count_ones() >= 2).collect();
    sets.sort_by_key(|s| (s.count_ones(), *s));
    for set in sets {
        let joint = ratio(vanishing(set), size);
        let product = (0..npoints)
            .filter(|p| set & (1 << p) != 0)
            .fold(BigRational::from_integer(1.into()), |acc, p| acc * &marginals[p]);
        if joint != product {
            let points = (0..npoints)
                .filter(|p| set & (1 << p) != 0)
                .map(|p| Point::from_indices(space.ring(), coords[p].clone()))
                .collect::<Result<Vec<_>>>()?;
            return Ok(Some(IndependenceWitness {
                points,
                joint,
                product_of_marginals: product,
            }));
        }
    }
    Ok(None)
}
