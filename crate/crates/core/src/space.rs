//! Finite free sample spaces of polynomials, given by an ordered basis.
//!
//! A space of rank `k` over `R` holds the `|R|^k` combinations
//! `c_0 b_0 + .. + c_{k-1} b_{k-1}`. Combinations are indexed in mixed radix
//! with `c_0` varying fastest, which fixes the order of [`SampleSpace::enumerate_all`]
//! and lets [`SampleSpace::enumerate_range`] hand out disjoint shards.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::error::{checked_pow, Budget, Error, Result};
use crate::linalg::{self, Matrix};
use crate::poly::{point_coords, Monomial, Point, Polynomial};
use crate::ring::RingSpec;
use crate::text::{parse_polynomial, SpaceSpec};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleSpace {
    ring: RingSpec,
    nvars: usize,
    basis: Vec<Polynomial>,
    label: String,
}

/// All exponent vectors with entries `<= per_var` and sum `<= total`, sorted graded-lex.
fn monomials_bounded(nvars: usize, per_var: u32, total: u64) -> Vec<Monomial> {
    fn rec(i: usize, nvars: usize, per_var: u32, left: u64, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i == nvars {
            out.push(Monomial::new(cur.clone()));
            return;
        }
        let cap = (per_var as u64).min(left);
        for e in 0..=cap {
            cur.push(e as u32);
            rec(i + 1, nvars, per_var, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, nvars, per_var, total, &mut Vec::with_capacity(nvars), &mut out);
    out.sort();
    out
}

fn check_nvars(nvars: usize) -> Result<()> {
    if nvars == 0 {
        return Err(Error::InvalidArgument("the number of variables must be at least 1".into()));
    }
    Ok(())
}

impl SampleSpace {
    fn from_monomials(ring: &RingSpec, nvars: usize, monos: Vec<Monomial>, label: String) -> Self {
        let one = ring.one();
        SampleSpace {
            ring: ring.clone(),
            nvars,
            basis: monos.into_iter().map(|m| Polynomial::monomial(m, &one)).collect(),
            label,
        }
    }

    /// Polynomials of total degree at most `d`; rank `C(n + d, d)`.
    pub fn total_degree(ring: &RingSpec, nvars: usize, d: u32) -> Result<Self> {
        check_nvars(nvars)?;
        let monos = monomials_bounded(nvars, d, d as u64);
        Ok(Self::from_monomials(ring, nvars, monos, format!("total:d={d}")))
    }

    /// Polynomials of degree at most `d` in each variable; rank `(d + 1)^n`.
    pub fn per_variable_degree(ring: &RingSpec, nvars: usize, d: u32) -> Result<Self> {
        check_nvars(nvars)?;
        let monos = monomials_bounded(nvars, d, d as u64 * nvars as u64);
        Ok(Self::from_monomials(ring, nvars, monos, format!("pervar:d={d}")))
    }

    /// A user-supplied basis, kept in the given order.
    ///
    /// Over a field any linearly independent nonzero polynomials are accepted.
    /// Over other rings only distinct monic monomials are, since those are the
    /// bases whose span is guaranteed to be free.
    pub fn custom(ring: &RingSpec, nvars: usize, basis: Vec<Polynomial>) -> Result<Self> {
        check_nvars(nvars)?;
        if basis.is_empty() {
            return Err(Error::InvalidBasis("basis is empty".into()));
        }
        for b in &basis {
            if b.ring() != ring {
                return Err(Error::MismatchedRing {
                    left: ring.to_string(),
                    right: b.ring().to_string(),
                });
            }
            if b.nvars() != nvars {
                return Err(Error::ArityMismatch {
                    expected: nvars,
                    got: b.nvars(),
                });
            }
            if b.is_zero() {
                return Err(Error::InvalidBasis("basis contains the zero polynomial".into()));
            }
        }
        // ring hashing ignores the cached field flag
        #[allow(clippy::mutable_key_type)]
        let mut seen = HashSet::new();
        for b in &basis {
            if !seen.insert(b) {
                return Err(Error::InvalidBasis(format!("duplicate basis element {b}")));
            }
        }
        if ring.is_field() {
            let monos: BTreeSet<&Monomial> = basis.iter().flat_map(|b| b.raw_terms().keys()).collect();
            let rows: Vec<Vec<u64>> = basis
                .iter()
                .map(|b| monos.iter().map(|m| b.coefficient(m).index()).collect())
                .collect();
            let r = linalg::rank(ring, &Matrix::from_rows(rows))?;
            if r != basis.len() {
                return Err(Error::InvalidBasis(format!(
                    "basis of {} polynomials has rank {r}",
                    basis.len()
                )));
            }
        } else if let Some(b) = basis.iter().find(|b| b.as_monomial().is_none()) {
            return Err(Error::InvalidBasis(format!(
                "{b} is not a monic monomial; over the non-field {ring} only monomial bases are accepted"
            )));
        }
        let label = format!(
            "custom:basis={}",
            basis.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(",")
        );
        Ok(SampleSpace {
            ring: ring.clone(),
            nvars,
            basis,
            label,
        })
    }

    /// Parses each basis element with the polynomial grammar.
    pub fn custom_from_strs<S: AsRef<str>>(ring: &RingSpec, nvars: usize, basis: &[S]) -> Result<Self> {
        let polys = basis
            .iter()
            .map(|s| parse_polynomial(s.as_ref(), ring, nvars))
            .collect::<Result<Vec<_>>>()?;
        Self::custom(ring, nvars, polys)
    }

    pub fn from_spec(ring: &RingSpec, nvars: usize, spec: &SpaceSpec) -> Result<Self> {
        match spec {
            SpaceSpec::TotalDegree(d) => Self::total_degree(ring, nvars, *d),
            SpaceSpec::PerVariableDegree(d) => Self::per_variable_degree(ring, nvars, *d),
            SpaceSpec::CustomBasis(list) => Self::custom_from_strs(ring, nvars, list),
            SpaceSpec::CustomFile(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    Error::InvalidArgument(format!("cannot read basis file {}: {e}", path.display()))
                })?;
                let lines: Vec<&str> = text
                    .lines()
                    .map(str::trim)
                    .filter(|l| !l.is_empty() && !l.starts_with('#'))
                    .collect();
                Self::custom_from_strs(ring, nvars, &lines)
            }
        }
    }

    /// Replaces the label used in reports.
    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// The subspace spanned by the first `k` basis elements.
    pub fn prefix(&self, k: usize) -> Result<Self> {
        if k == 0 || k > self.rank() {
            return Err(Error::InvalidArgument(format!(
                "prefix length {k} out of range 1..={}",
                self.rank()
            )));
        }
        Ok(SampleSpace {
            ring: self.ring.clone(),
            nvars: self.nvars,
            basis: self.basis[..k].to_vec(),
            label: format!("{}[..{k}]", self.label),
        })
    }

    pub fn ring(&self) -> &RingSpec {
        &self.ring
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn basis(&self) -> &[Polynomial] {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// `|R|^k`, if it fits in a `u128`.
    pub fn size(&self) -> Option<u128> {
        checked_pow(self.ring.order(), self.rank() as u64)
    }

    /// `|R|^n`.
    pub fn num_points(&self) -> Option<u128> {
        checked_pow(self.ring.order(), self.nvars as u64)
    }

    pub fn is_monomial_basis(&self) -> bool {
        self.basis.iter().all(|b| b.as_monomial().is_some())
    }

    /// Mixed-radix coefficient vector of the `index`-th polynomial.
    pub fn coefficients_at(&self, index: u64) -> Vec<u64> {
        point_coords(self.ring.order(), self.rank(), index)
    }

    /// `sum_j coeffs[j] * basis[j]`.
    pub fn combine(&self, coeffs: &[u64]) -> Result<Polynomial> {
        if coeffs.len() != self.rank() {
            return Err(Error::InvalidArgument(format!(
                "expected {} coefficients, got {}",
                self.rank(),
                coeffs.len()
            )));
        }
        let mut out = Polynomial::zero(&self.ring, self.nvars);
        for (b, &c) in self.basis.iter().zip(coeffs) {
            if c == 0 {
                continue;
            }
            for (m, &a) in b.raw_terms() {
                out.add_term(m.clone(), self.ring.mul_raw(c, a));
            }
        }
        Ok(out)
    }

    /// Every polynomial of the space in mixed-radix order.
    pub fn enumerate_all(&self, budget: Budget) -> Result<impl Iterator<Item = Polynomial> + '_> {
        budget.check("enumerating the sample space", self.size())?;
        let total = self.size().unwrap_or(0) as u64;
        self.enumerate_range(0, total)
    }

    /// The polynomials with mixed-radix index in `lo..hi`.
    pub fn enumerate_range(&self, lo: u64, hi: u64) -> Result<impl Iterator<Item = Polynomial> + '_> {
        let size = self.size().unwrap_or(u128::MAX);
        if lo > hi || hi as u128 > size {
            return Err(Error::InvalidArgument(format!(
                "range {lo}..{hi} outside 0..{size}"
            )));
        }
        Ok((lo..hi).map(move |i| {
            self.combine(&self.coefficients_at(i))
                .expect("coefficient vector has rank length")
        }))
    }

    /// Draws `k` iid uniform coefficients.
    pub fn sample_coefficients<G: Rng + ?Sized>(&self, rng: &mut G, out: &mut [u64]) {
        let q = self.ring.order();
        for c in out.iter_mut() {
            *c = rng.random_range(0..q);
        }
    }

    pub fn sample_uniform<G: Rng + ?Sized>(&self, rng: &mut G) -> Polynomial {
        let mut coeffs = vec![0; self.rank()];
        self.sample_coefficients(rng, &mut coeffs);
        self.combine(&coeffs).expect("coefficient vector has rank length")
    }

    pub(crate) fn evaluation_table(&self, points: &[Vec<u64>]) -> EvalTable {
        let k = self.rank();
        let mut values = Vec::with_capacity(points.len() * k);
        for p in points {
            for b in &self.basis {
                values.push(b.evaluate_raw(p));
            }
        }
        EvalTable {
            ring: self.ring.clone(),
            k,
            npoints: points.len(),
            values,
        }
    }

    pub(crate) fn all_point_coords(&self) -> Vec<Vec<u64>> {
        let q = self.ring.order();
        let total = q.pow(self.nvars as u32);
        (0..total).map(|i| point_coords(q, self.nvars, i)).collect()
    }

    /// The `|R|^n x k` matrix of basis values at every point.
    pub fn evaluation_matrix(&self, budget: Budget) -> Result<Matrix> {
        let cost = self.num_points().and_then(|p| p.checked_mul(self.rank() as u128));
        budget.check("building the evaluation matrix", cost)?;
        let table = self.evaluation_table(&self.all_point_coords());
        Ok(Matrix::new(table.npoints, table.k, table.values))
    }

    /// Whether the constants are a proper subset of the space.
    ///
    /// Membership of `1` in the span is searched exhaustively when `|R|^k` fits
    /// the budget; otherwise monomial bases are read off directly and field
    /// bases use a rank comparison.
    pub fn extends_ring(&self, budget: Budget) -> Result<bool> {
        if self.rank() < 2 {
            return Ok(false);
        }
        let cost = self.size().and_then(|s| s.checked_mul(self.rank() as u128));
        if budget.allows(cost) {
            return Ok(self.one_in_span_exhaustive());
        }
        if self.is_monomial_basis() {
            return Ok(self.basis.iter().any(|b| b.as_monomial().is_some_and(Monomial::is_constant)));
        }
        if self.ring.is_field() {
            let one = Monomial::one(self.nvars);
            let mut monos: BTreeSet<&Monomial> =
                self.basis.iter().flat_map(|b| b.raw_terms().keys()).collect();
            monos.insert(&one);
            let row = |p: &Polynomial| -> Vec<u64> { monos.iter().map(|m| p.coefficient(m).index()).collect() };
            let mut rows: Vec<Vec<u64>> = self.basis.iter().map(row).collect();
            rows.push(row(&Polynomial::constant(&self.ring.one(), self.nvars)));
            let r = linalg::rank(&self.ring, &Matrix::from_rows(rows))?;
            return Ok(r == self.rank());
        }
        Err(Error::BudgetExceeded {
            what: "deciding whether a non-monomial space extends the ring".into(),
            required: cost.unwrap_or(u128::MAX),
            budget: budget.0,
        })
    }

    fn one_in_span_exhaustive(&self) -> bool {
        let target = Polynomial::constant(&self.ring.one(), self.nvars);
        let total = self.size().unwrap_or(0) as u64;
        (0..total).any(|i| {
            self.combine(&self.coefficients_at(i))
                .map(|p| p == target)
                .unwrap_or(false)
        })
    }

    /// Whether every function `F_q^n -> F_q` has a representative in the space,
    /// decided by the rank of the evaluation matrix.
    pub fn contains_functions(&self, budget: Budget) -> Result<bool> {
        if !self.ring.is_field() {
            return Err(Error::NotAField(self.ring.to_string()));
        }
        let m = self.evaluation_matrix(budget)?;
        let r = linalg::rank(&self.ring, &m)?;
        Ok(r == m.shape().0)
    }

    /// Number of distinct functions `R^n -> R` induced by polynomials of the space.
    pub fn function_coverage_count(&self, budget: Budget) -> Result<u64> {
        let cost = self.size().zip(self.num_points()).and_then(|(s, p)| s.checked_mul(p));
        budget.check("counting induced functions", cost)?;
        let table = self.evaluation_table(&self.all_point_coords());
        let total = self.size().unwrap_or(0) as u64;
        let mut seen: HashSet<Vec<u64>> = HashSet::new();
        for i in 0..total {
            let coeffs = self.coefficients_at(i);
            let values: Vec<u64> = (0..table.npoints).map(|p| table.value(&coeffs, p)).collect();
            seen.insert(values);
        }
        Ok(seen.len() as u64)
    }

    /// Total number of functions `R^n -> R`, `|R|^(|R|^n)`.
    pub fn total_function_count(&self) -> Option<u128> {
        let pts = self.num_points()?;
        checked_pow(self.ring.order(), u64::try_from(pts).ok()?)
    }
}

impl fmt::Display for SampleSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label)
    }
}

/// Basis values at a fixed list of points, `values[i * k + j] = basis_j(p_i)`.
pub(crate) struct EvalTable {
    ring: RingSpec,
    pub k: usize,
    pub npoints: usize,
    values: Vec<u64>,
}

impl EvalTable {
    #[inline]
    pub fn value(&self, coeffs: &[u64], point: usize) -> u64 {
        let row = &self.values[point * self.k..(point + 1) * self.k];
        row.iter().zip(coeffs).fold(0, |acc, (&v, &c)| {
            if c == 0 || v == 0 {
                acc
            } else {
                self.ring.add_raw(acc, self.ring.mul_raw(c, v))
            }
        })
    }
}

type MonomialFilter = Arc<dyn Fn(&Monomial) -> bool + Send + Sync>;

/// Truncations `M_t` of an infinite monomial-spanned module by total degree.
#[derive(Clone)]
pub struct Filtration {
    ring: RingSpec,
    nvars: usize,
    t_max: u32,
    name: String,
    keep: Option<MonomialFilter>,
}

impl fmt::Debug for Filtration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Filtration")
            .field("ring", &self.ring)
            .field("nvars", &self.nvars)
            .field("t_max", &self.t_max)
            .field("name", &self.name)
            .finish()
    }
}

impl Filtration {
    /// `R[x_1, .., x_n]` truncated by total degree.
    pub fn full(ring: &RingSpec, nvars: usize, t_max: u32) -> Result<Self> {
        check_nvars(nvars)?;
        Ok(Filtration {
            ring: ring.clone(),
            nvars,
            t_max,
            name: "full".into(),
            keep: None,
        })
    }

    /// The module spanned by the monomials accepted by `keep`.
    pub fn monomial_subset<F>(ring: &RingSpec, nvars: usize, t_max: u32, name: &str, keep: F) -> Result<Self>
    where
        F: Fn(&Monomial) -> bool + Send + Sync + 'static,
    {
        check_nvars(nvars)?;
        Ok(Filtration {
            ring: ring.clone(),
            nvars,
            t_max,
            name: name.to_string(),
            keep: Some(Arc::new(keep)),
        })
    }

    pub fn ring(&self) -> &RingSpec {
        &self.ring
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn t_max(&self) -> u32 {
        self.t_max
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// `M_t`; its basis is a prefix of the basis of `M_{t+1}`.
    pub fn truncation(&self, t: u32) -> Result<SampleSpace> {
        let monos: Vec<Monomial> = monomials_bounded(self.nvars, t, t as u64)
            .into_iter()
            .filter(|m| self.keep.as_ref().is_none_or(|k| k(m)))
            .collect();
        if monos.is_empty() {
            return Err(Error::InvalidBasis(format!(
                "truncation t={t} of filtration {} is empty",
                self.name
            )));
        }
        Ok(SampleSpace::from_monomials(
            &self.ring,
            self.nvars,
            monos,
            format!("{}:t={t}", self.name),
        ))
    }
}

/// Convenience for tests and bindings: the point with the given indices.
pub fn point(ring: &RingSpec, coords: &[u64]) -> Result<Point> {
    Point::from_indices(ring, coords.to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f(q: u64) -> RingSpec {
        RingSpec::galois_of_order(q).unwrap()
    }

    fn z(n: u64) -> RingSpec {
        RingSpec::zmod(n).unwrap()
    }

    fn binom(n: u64, k: u64) -> u64 {
        (1..=k).fold(1, |acc, i| acc * (n + 1 - i) / i)
    }

    #[test]
    fn constructor_examples() {
        let s = SampleSpace::total_degree(&z(4), 2, 1).unwrap();
        let shown: Vec<String> = s.basis().iter().map(|b| b.to_string()).collect();
        assert_eq!(shown, ["1", "x2", "x1"]);
        assert_eq!(s.rank(), 3);

        let s = SampleSpace::per_variable_degree(&f(2), 1, 1).unwrap();
        let shown: Vec<String> = s.basis().iter().map(|b| b.to_string()).collect();
        assert_eq!(shown, ["1", "x1"]);

        for q in [2u64, 3, 4, 5] {
            let s = SampleSpace::per_variable_degree(&f(q), 2, (q - 1) as u32).unwrap();
            assert_eq!(s.rank() as u64, q * q);
        }
        for n in 1..=3 {
            for d in 0..=4u32 {
                let t = SampleSpace::total_degree(&z(3), n, d).unwrap();
                assert_eq!(t.rank() as u64, binom(n as u64 + d as u64, d as u64));
                let p = SampleSpace::per_variable_degree(&z(3), n, d).unwrap();
                assert_eq!(p.rank() as u64, (d as u64 + 1).pow(n as u32));
            }
        }
    }

    #[test]
    fn custom_basis_validation() {
        let z4 = z(4);
        assert!(SampleSpace::custom_from_strs(&z4, 1, &["1", "x"]).is_ok());
        assert!(matches!(
            SampleSpace::custom_from_strs(&z4, 1, &["1", "x + 1"]),
            Err(Error::InvalidBasis(_))
        ));
        assert!(matches!(
            SampleSpace::custom_from_strs(&z4, 1, &["x", "x"]),
            Err(Error::InvalidBasis(_))
        ));
        assert!(matches!(
            SampleSpace::custom_from_strs(&z4, 1, &["0"]),
            Err(Error::InvalidBasis(_))
        ));
        let f3 = f(3);
        assert!(SampleSpace::custom_from_strs(&f3, 1, &["x + 1", "x + 2"]).is_ok());
        assert!(matches!(
            SampleSpace::custom_from_strs(&f3, 1, &["x + 1", "2*x + 2"]),
            Err(Error::InvalidBasis(_))
        ));
    }

    #[test]
    fn extends_ring_examples() {
        let z4 = z(4);
        let s = SampleSpace::total_degree(&z4, 1, 1).unwrap();
        assert!(s.extends_ring(Budget::default()).unwrap());
        let only_x = SampleSpace::custom_from_strs(&z4, 1, &["x"]).unwrap();
        assert!(!only_x.extends_ring(Budget::default()).unwrap());
        let only_1 = SampleSpace::custom_from_strs(&z4, 1, &["1"]).unwrap();
        assert!(!only_1.extends_ring(Budget::default()).unwrap());
        let no_const = SampleSpace::custom_from_strs(&z4, 1, &["x", "x^2"]).unwrap();
        assert!(!no_const.extends_ring(Budget::default()).unwrap());
    }

    #[test]
    fn extends_ring_fallbacks_agree() {
        let tiny = Budget(1);
        let f3 = f(3);
        let shifted = SampleSpace::custom_from_strs(&f3, 1, &["x + 1", "x + 2"]).unwrap();
        assert!(shifted.extends_ring(Budget::default()).unwrap());
        assert!(shifted.extends_ring(tiny).unwrap());
        let no_one = SampleSpace::custom_from_strs(&f3, 1, &["x + 1", "x^2 + 1"]).unwrap();
        assert!(!no_one.extends_ring(Budget::default()).unwrap());
        assert!(!no_one.extends_ring(tiny).unwrap());
        let mono = SampleSpace::total_degree(&z(4), 2, 2).unwrap();
        assert!(mono.extends_ring(tiny).unwrap());
    }

    #[test]
    fn contains_functions_examples() {
        let b = Budget::default();
        assert!(SampleSpace::per_variable_degree(&f(2), 1, 1).unwrap().contains_functions(b).unwrap());
        assert!(!SampleSpace::total_degree(&f(3), 1, 1).unwrap().contains_functions(b).unwrap());
        for q in [2u64, 3, 4] {
            for n in 1..=2usize {
                let d = (n as u64 * (q - 1)) as u32;
                let s = SampleSpace::total_degree(&f(q), n, d).unwrap();
                assert!(s.contains_functions(b).unwrap(), "q={q} n={n}");
                if d > 0 {
                    let s = SampleSpace::total_degree(&f(q), n, d - 1).unwrap();
                    assert!(!s.contains_functions(b).unwrap(), "q={q} n={n} d-1");
                }
            }
        }
        assert!(matches!(
            SampleSpace::total_degree(&z(4), 1, 3).unwrap().contains_functions(b),
            Err(Error::NotAField(_))
        ));
        assert!(matches!(
            SampleSpace::per_variable_degree(&f(3), 2, 2).unwrap().contains_functions(Budget(3)),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn coverage_examples() {
        let b = Budget::default();
        let z4 = SampleSpace::per_variable_degree(&z(4), 1, 3).unwrap();
        let count = z4.function_coverage_count(b).unwrap();
        assert!(count < 256, "{count}");
        let f2 = SampleSpace::per_variable_degree(&f(2), 1, 1).unwrap();
        assert_eq!(f2.function_coverage_count(b).unwrap(), 4);
        for n in [2u64, 3, 4, 5, 6] {
            let consts = SampleSpace::custom_from_strs(&z(n), 1, &["1"]).unwrap();
            assert_eq!(consts.function_coverage_count(b).unwrap(), n);
        }
    }

    #[test]
    fn rank_method_agrees_with_enumeration() {
        let b = Budget::default();
        for q in [2u64, 3, 4] {
            for n in 1..=2usize {
                if q.pow(n as u32) > 16 {
                    continue;
                }
                let full = SampleSpace::per_variable_degree(&f(q), n, (q - 1) as u32).unwrap();
                let total_fns = full.total_function_count().unwrap();
                for k in 1..=full.rank().min(16) {
                    let sub = full.prefix(k).unwrap();
                    if !b.allows(sub.size().map(|s| s * sub.num_points().unwrap())) {
                        continue;
                    }
                    let by_rank = sub.contains_functions(b).unwrap();
                    let by_count = sub.function_coverage_count(b).unwrap() as u128 == total_fns;
                    assert_eq!(by_rank, by_count, "q={q} n={n} k={k}");
                }
            }
        }
    }

    #[test]
    fn minimal_function_spaces_contain_functions() {
        for q in [2u64, 3] {
            for n in 1..=2 {
                let s = SampleSpace::per_variable_degree(&f(q), n, (q - 1) as u32).unwrap();
                assert!(s.contains_functions(Budget::default()).unwrap());
            }
        }
    }

    #[test]
    fn non_fields_never_cover_all_functions() {
        for n in [4u64, 6] {
            for d in 0..=3 {
                let s = SampleSpace::per_variable_degree(&z(n), 1, d).unwrap();
                let count = s.function_coverage_count(Budget::default()).unwrap() as u128;
                assert!(count < s.total_function_count().unwrap(), "Z{n} d={d}");
            }
        }
    }

    #[test]
    fn contains_functions_is_monotone_in_prefix() {
        let b = Budget::default();
        let s = SampleSpace::total_degree(&f(3), 2, 4).unwrap();
        let mut seen = false;
        for k in 1..=s.rank() {
            let holds = s.prefix(k).unwrap().contains_functions(b).unwrap();
            assert!(!seen || holds, "lost contains-functions at k={k}");
            seen |= holds;
        }
        assert!(seen);
    }

    #[test]
    fn enumeration_order() {
        let s = SampleSpace::per_variable_degree(&f(2), 1, 1).unwrap();
        let all: Vec<String> = s.enumerate_all(Budget::default()).unwrap().map(|p| p.to_string()).collect();
        assert_eq!(all, ["0", "1", "x1", "x1 + 1"]);
        let range: Vec<String> = s.enumerate_range(0, 4).unwrap().map(|p| p.to_string()).collect();
        assert_eq!(range, all);
        let mid: Vec<String> = s.enumerate_range(1, 3).unwrap().map(|p| p.to_string()).collect();
        assert_eq!(mid, ["1", "x1"]);
        assert!(s.enumerate_range(0, 5).is_err());
        assert!(s.enumerate_all(Budget(3)).is_err());
        #[allow(clippy::mutable_key_type)]
        let distinct: HashSet<Polynomial> = SampleSpace::total_degree(&z(3), 2, 1)
            .unwrap()
            .enumerate_all(Budget::default())
            .unwrap()
            .collect();
        assert_eq!(distinct.len(), 27);
    }

    #[test]
    fn sampling_is_reproducible() {
        let s = SampleSpace::total_degree(&z(7), 2, 2).unwrap();
        let draw = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..20).map(|_| s.sample_uniform(&mut rng)).collect::<Vec<_>>()
        };
        assert_eq!(draw(5), draw(5));
        assert_ne!(draw(5), draw(6));
    }

    #[test]
    fn sampling_is_uniform() {
        let s = SampleSpace::total_degree(&f(3), 1, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut counts = [0u64; 9];
        let mut coeffs = [0u64; 2];
        for _ in 0..100_000 {
            s.sample_coefficients(&mut rng, &mut coeffs);
            counts[(coeffs[0] + 3 * coeffs[1]) as usize] += 1;
        }
        let report = crate::gof::pearson(&counts, &[1.0 / 9.0; 9]).unwrap();
        assert_eq!(report.dof, 8);
        assert!(report.p_value > 1e-3, "{report:?}");
    }

    #[test]
    fn filtration_prefix_inclusion() {
        let filt = Filtration::full(&z(3), 2, 4).unwrap();
        for t in 0..4 {
            let a = filt.truncation(t).unwrap();
            let b = filt.truncation(t + 1).unwrap();
            assert_eq!(a.basis(), &b.basis()[..a.rank()]);
        }
        let odd = Filtration::monomial_subset(&z(2), 1, 5, "odd", |m| m.total_degree() % 2 == 1).unwrap();
        assert!(odd.truncation(0).is_err());
        assert_eq!(odd.truncation(5).unwrap().rank(), 3);
    }
}
