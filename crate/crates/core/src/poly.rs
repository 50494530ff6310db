//! Sparse multivariate polynomials over a [`RingSpec`].

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::ring::{RingElement, RingSpec};

/// Exponent vector of a monomial, one entry per variable.
///
/// Ordered graded-lexicographically: by total degree first, then by the
/// exponent vector compared from `x1` onwards. So `1 < x2 < x1 < x2^2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    /// The monomial `x_{i+1}` (zero-based `i`).
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn max_exponent(&self) -> u32 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Evaluates the monomial at raw coordinates.
    pub(crate) fn evaluate_raw(&self, ring: &RingSpec, coords: &[u64]) -> u64 {
        let mut acc = ring.one_index();
        for (&c, &e) in coords.iter().zip(&self.0) {
            if e > 0 {
                acc = ring.mul_raw(acc, ring.pow_raw(c, e as u64));
            }
        }
        acc
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "x{}", i + 1)?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// Degree of a polynomial; the zero polynomial has degree `MinusInfinity`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    MinusInfinity,
    Finite(u64),
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::MinusInfinity => write!(f, "-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

/// A point of `R^n`, stored as canonical element indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Point {
    ring: RingSpec,
    coords: Vec<u64>,
}

impl Point {
    pub fn new(coords: &[RingElement]) -> Result<Self> {
        let first = coords
            .first()
            .ok_or_else(|| Error::InvalidArgument("a point needs at least one coordinate".into()))?;
        let ring = first.ring().clone();
        for c in coords {
            if *c.ring() != ring {
                return Err(Error::MismatchedRing {
                    left: ring.to_string(),
                    right: c.ring().to_string(),
                });
            }
        }
        Ok(Point {
            coords: coords.iter().map(|c| c.index()).collect(),
            ring,
        })
    }

    /// Point from canonical element indices.
    pub fn from_indices(ring: &RingSpec, coords: Vec<u64>) -> Result<Self> {
        if let Some(&bad) = coords.iter().find(|&&c| c >= ring.order()) {
            return Err(Error::InvalidArgument(format!(
                "coordinate index {bad} out of range for {ring}"
            )));
        }
        Ok(Point {
            ring: ring.clone(),
            coords,
        })
    }

    /// The `index`-th point of `R^n` in mixed-radix order, first coordinate fastest.
    pub fn nth(ring: &RingSpec, nvars: usize, index: u64) -> Point {
        Point {
            ring: ring.clone(),
            coords: point_coords(ring.order(), nvars, index),
        }
    }

    pub fn ring(&self) -> &RingSpec {
        &self.ring
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn indices(&self) -> &[u64] {
        &self.coords
    }

    pub fn coords(&self) -> Vec<RingElement> {
        self.coords
            .iter()
            .map(|&c| RingElement::new(self.ring.clone(), c))
            .collect()
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, &c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", self.ring.format_index(c))?;
        }
        write!(f, ")")
    }
}

pub(crate) fn point_coords(order: u64, nvars: usize, mut index: u64) -> Vec<u64> {
    let mut out = Vec::with_capacity(nvars);
    for _ in 0..nvars {
        out.push(index % order);
        index /= order;
    }
    out
}

/// All points of `R^n` in mixed-radix order.
pub fn all_points(ring: &RingSpec, nvars: usize) -> impl Iterator<Item = Point> + '_ {
    let total = ring.order().pow(nvars as u32);
    (0..total).map(move |i| Point::nth(ring, nvars, i))
}

/// A polynomial in `nvars` variables; the term map never stores a zero coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    ring: RingSpec,
    nvars: usize,
    terms: BTreeMap<Monomial, u64>,
}

impl Polynomial {
    pub fn zero(ring: &RingSpec, nvars: usize) -> Self {
        Polynomial {
            ring: ring.clone(),
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: &RingElement, nvars: usize) -> Self {
        Self::monomial(Monomial::one(nvars), c)
    }

    /// The single term `c * m`.
    pub fn monomial(m: Monomial, c: &RingElement) -> Self {
        let mut p = Polynomial::zero(c.ring(), m.nvars());
        if !c.is_zero() {
            p.terms.insert(m, c.index());
        }
        p
    }

    /// Sums the given `(monomial, coefficient index)` terms, combining repeats.
    pub fn from_terms<I>(ring: &RingSpec, nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Monomial, u64)>,
    {
        let mut p = Polynomial::zero(ring, nvars);
        for (m, c) in terms {
            if m.nvars() != nvars {
                return Err(Error::ArityMismatch {
                    expected: nvars,
                    got: m.nvars(),
                });
            }
            if c >= ring.order() {
                return Err(Error::InvalidArgument(format!(
                    "coefficient index {c} out of range for {ring}"
                )));
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: u64) {
        if c == 0 {
            return;
        }
        let ring = &self.ring;
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let s = ring.add_raw(*existing, c);
                if s == 0 {
                    self.terms.remove(&m);
                } else {
                    *existing = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn ring(&self) -> &RingSpec {
        &self.ring
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, RingElement)> + '_ {
        self.terms
            .iter()
            .map(|(m, &c)| (m, RingElement::new(self.ring.clone(), c)))
    }

    pub(crate) fn raw_terms(&self) -> &BTreeMap<Monomial, u64> {
        &self.terms
    }

    pub fn coefficient(&self, m: &Monomial) -> RingElement {
        RingElement::new(self.ring.clone(), self.terms.get(m).copied().unwrap_or(0))
    }

    /// A single monomial with coefficient one.
    pub fn as_monomial(&self) -> Option<&Monomial> {
        match self.terms.iter().next() {
            Some((m, &c)) if self.terms.len() == 1 && c == self.ring.one_index() => Some(m),
            _ => None,
        }
    }

    fn compatible(&self, other: &Polynomial) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::MismatchedRing {
                left: self.ring.to_string(),
                right: other.ring.to_string(),
            });
        }
        if self.nvars != other.nvars {
            return Err(Error::ArityMismatch {
                expected: self.nvars,
                got: other.nvars,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.compatible(other)?;
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn neg(&self) -> Polynomial {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = self.ring.neg_raw(*c);
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &RingElement) -> Result<Polynomial> {
        if *c.ring() != self.ring {
            return Err(Error::MismatchedRing {
                left: self.ring.to_string(),
                right: c.ring().to_string(),
            });
        }
        let mut out = Polynomial::zero(&self.ring, self.nvars);
        for (m, &a) in &self.terms {
            out.add_term(m.clone(), self.ring.mul_raw(c.index(), a));
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.compatible(other)?;
        let mut out = Polynomial::zero(&self.ring, self.nvars);
        for (ma, &a) in &self.terms {
            for (mb, &b) in &other.terms {
                out.add_term(ma.mul(mb), self.ring.mul_raw(a, b));
            }
        }
        Ok(out)
    }

    pub fn evaluate(&self, p: &Point) -> Result<RingElement> {
        if *p.ring() != self.ring {
            return Err(Error::MismatchedRing {
                left: self.ring.to_string(),
                right: p.ring().to_string(),
            });
        }
        if p.len() != self.nvars {
            return Err(Error::ArityMismatch {
                expected: self.nvars,
                got: p.len(),
            });
        }
        Ok(RingElement::new(
            self.ring.clone(),
            self.evaluate_raw(p.indices()),
        ))
    }

    /// Evaluation at canonical coordinate indices; no validation.
    pub(crate) fn evaluate_raw(&self, coords: &[u64]) -> u64 {
        let ring = &self.ring;
        self.terms.iter().fold(0, |acc, (m, &c)| {
            ring.add_raw(acc, ring.mul_raw(c, m.evaluate_raw(ring, coords)))
        })
    }

    pub fn total_degree(&self) -> Degree {
        self.terms
            .keys()
            .map(|m| m.total_degree())
            .max()
            .map_or(Degree::MinusInfinity, Degree::Finite)
    }

    /// Degree in the variable `x_{i+1}` (zero-based `i`).
    pub fn per_variable_degree(&self, i: usize) -> Result<Degree> {
        if i >= self.nvars {
            return Err(Error::InvalidArgument(format!(
                "variable index {i} out of range for {} variables",
                self.nvars
            )));
        }
        Ok(self
            .terms
            .keys()
            .map(|m| m.exponents()[i] as u64)
            .max()
            .map_or(Degree::MinusInfinity, Degree::Finite))
    }

    /// Largest exponent of any variable.
    pub fn max_per_variable_degree(&self) -> Degree {
        self.terms
            .keys()
            .map(|m| m.max_exponent() as u64)
            .max()
            .map_or(Degree::MinusInfinity, Degree::Finite)
    }

    /// Reduces modulo `(x_1^q - x_1, .., x_n^q - x_n)` over `F_q`, giving the
    /// unique representative of per-variable degree at most `q - 1`.
    pub fn reduce_per_variable(&self) -> Result<Polynomial> {
        if !self.ring.is_field() {
            return Err(Error::NotAField(self.ring.to_string()));
        }
        let q = self.ring.order();
        let fold = |e: u32| -> u32 {
            let e = e as u64;
            if e < q {
                e as u32
            } else {
                (((e - 1) % (q - 1)) + 1) as u32
            }
        };
        let mut out = Polynomial::zero(&self.ring, self.nvars);
        for (m, &c) in &self.terms {
            let reduced = Monomial(m.exponents().iter().map(|&e| fold(e)).collect());
            out.add_term(reduced, c);
        }
        Ok(out)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let one = self.ring.one_index();
        for (i, (m, &c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let coeff = self.ring.format_index(c);
            if m.is_constant() {
                write!(f, "{coeff}")?;
            } else if c == one {
                write!(f, "{m}")?;
            } else {
                write!(f, "{coeff}*{m}")?;
            }
        }
        Ok(())
    }
}
