//! Finite commutative rings with unity: `Z/nZ`, `GF(p^r)`, and binary products.
//!
//! Every ring has a canonical enumeration `0..order` of its elements and all
//! arithmetic is carried out on those indices. Index 0 is always the zero
//! element. The encodings are:
//!
//! - `Z/nZ`: the least nonnegative residue.
//! - `GF(p^r)`: the coefficient vector `[c0, .., c_{r-1}]` read as base-`p`
//!   digits with `c0` least significant.
//! - `A x B`: the pair `(a, b)` encoded as `a * |B| + b`.
//!
//! Rings of order at most [`TABLE_LIMIT`] precompute full addition and
//! multiplication tables, which keeps the enumeration kernels branch-free.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};

/// Rings up to this order get precomputed operation tables.
pub const TABLE_LIMIT: u64 = 256;

/// Largest supported ring order.
pub const MAX_ORDER: u64 = 1 << 31;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RingKind {
    Zmod { n: u64 },
    /// `modulus` holds the `r + 1` coefficients of a monic irreducible
    /// polynomial over `Z/p`, low degree first.
    Galois { p: u64, r: u32, modulus: Vec<u64> },
    Product(RingSpec, RingSpec),
}

struct Tables {
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
}

struct RingInner {
    kind: RingKind,
    order: u64,
    tables: Option<Tables>,
    field: OnceLock<bool>,
}

/// A finite commutative ring with unity. Cheap to clone.
#[derive(Clone)]
pub struct RingSpec(Arc<RingInner>);

impl PartialEq for RingSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.kind == other.0.kind
    }
}

impl Eq for RingSpec {}

impl Hash for RingSpec {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.kind.hash(state)
    }
}

impl fmt::Debug for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RingSpec({self})")
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.kind {
            RingKind::Zmod { n } => write!(f, "Z{n}"),
            RingKind::Galois { p, r, modulus } => {
                write!(f, "GF({}", self.0.order)?;
                if default_modulus(*p, *r) != *modulus {
                    write!(f, ";mod={}", format_univariate(modulus))?;
                }
                write!(f, ")")
            }
            RingKind::Product(a, b) => {
                write!(f, "{a}x")?;
                if matches!(b.kind(), RingKind::Product(..)) {
                    write!(f, "({b})")
                } else {
                    write!(f, "{b}")
                }
            }
        }
    }
}

impl RingSpec {
    /// `Z/nZ` for `n >= 2`.
    pub fn zmod(n: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidRing(format!("Z{n}: modulus must be at least 2")));
        }
        if n > MAX_ORDER {
            return Err(Error::InvalidRing(format!("Z{n}: order exceeds {MAX_ORDER}")));
        }
        Ok(Self::build(RingKind::Zmod { n }, n))
    }

    /// `GF(p^r)` with the lexicographically smallest monic irreducible modulus.
    pub fn galois(p: u64, r: u32) -> Result<Self> {
        Self::check_galois_params(p, r)?;
        let modulus = default_modulus(p, r);
        Self::galois_with_modulus(p, r, modulus)
    }

    /// `GF(p^r)` with an explicit modulus (coefficients low degree first).
    pub fn galois_with_modulus(p: u64, r: u32, modulus: Vec<u64>) -> Result<Self> {
        let order = Self::check_galois_params(p, r)?;
        let mut modulus = modulus;
        for c in modulus.iter_mut() {
            *c %= p;
        }
        while modulus.len() > 1 && modulus.last() == Some(&0) {
            modulus.pop();
        }
        if modulus.len() != r as usize + 1 {
            return Err(Error::InvalidRing(format!(
                "modulus {} has degree {}, expected {r}",
                format_univariate(&modulus),
                modulus.len().saturating_sub(1)
            )));
        }
        if modulus[r as usize] != 1 {
            return Err(Error::InvalidRing(format!(
                "modulus {} is not monic",
                format_univariate(&modulus)
            )));
        }
        if !is_irreducible(&modulus, p) {
            return Err(Error::InvalidRing(format!(
                "modulus {} is reducible over Z/{p}",
                format_univariate(&modulus)
            )));
        }
        Ok(Self::build(RingKind::Galois { p, r, modulus }, order))
    }

    /// `GF(q)` for a prime power `q`.
    pub fn galois_of_order(q: u64) -> Result<Self> {
        let (p, r) = prime_power(q)
            .ok_or_else(|| Error::InvalidRing(format!("GF({q}): {q} is not a prime power")))?;
        Self::galois(p, r)
    }

    pub fn product(left: RingSpec, right: RingSpec) -> Result<Self> {
        let order = left
            .order()
            .checked_mul(right.order())
            .filter(|&o| o <= MAX_ORDER)
            .ok_or_else(|| Error::InvalidRing(format!("{left}x{right}: order too large")))?;
        Ok(Self::build(RingKind::Product(left, right), order))
    }

    fn check_galois_params(p: u64, r: u32) -> Result<u64> {
        if !is_prime(p) {
            return Err(Error::InvalidRing(format!("GF: characteristic {p} is not prime")));
        }
        if r == 0 {
            return Err(Error::InvalidRing("GF: degree must be at least 1".into()));
        }
        p.checked_pow(r)
            .filter(|&o| o <= MAX_ORDER)
            .ok_or_else(|| Error::InvalidRing(format!("GF({p}^{r}): order too large")))
    }

    fn build(kind: RingKind, order: u64) -> Self {
        let mut inner = RingInner {
            kind,
            order,
            tables: None,
            field: OnceLock::new(),
        };
        if order <= TABLE_LIMIT {
            let o = order as usize;
            let mut add = vec![0u32; o * o];
            let mut mul = vec![0u32; o * o];
            let mut neg = vec![0u32; o];
            for a in 0..order {
                neg[a as usize] = inner.neg_structural(a) as u32;
                for b in 0..order {
                    add[a as usize * o + b as usize] = inner.add_structural(a, b) as u32;
                    mul[a as usize * o + b as usize] = inner.mul_structural(a, b) as u32;
                }
            }
            inner.tables = Some(Tables { add, mul, neg });
        }
        RingSpec(Arc::new(inner))
    }

    pub fn kind(&self) -> &RingKind {
        &self.0.kind
    }

    /// `|R|`.
    pub fn order(&self) -> u64 {
        self.0.order
    }

    /// Characteristic-`p` and degree `r` when this is a Galois field or `Z/p`.
    pub fn field_params(&self) -> Option<(u64, u32)> {
        match &self.0.kind {
            RingKind::Zmod { n } if is_prime(*n) => Some((*n, 1)),
            RingKind::Galois { p, r, .. } => Some((*p, *r)),
            _ => None,
        }
    }

    pub fn zero(&self) -> RingElement {
        RingElement::new(self.clone(), 0)
    }

    pub fn one(&self) -> RingElement {
        RingElement::new(self.clone(), self.one_index())
    }

    /// Element with canonical index `index`.
    pub fn element(&self, index: u64) -> Result<RingElement> {
        if index >= self.order() {
            return Err(Error::InvalidArgument(format!(
                "element index {index} out of range for {self}"
            )));
        }
        Ok(RingElement::new(self.clone(), index))
    }

    /// The image of the integer `k` under `Z -> R`, i.e. `k * 1_R`.
    pub fn from_integer(&self, k: i64) -> RingElement {
        RingElement::new(self.clone(), self.integer_index(k))
    }

    pub fn from_repr(&self, repr: &ElementRepr) -> Result<RingElement> {
        self.index_of_repr(repr).map(|i| RingElement::new(self.clone(), i))
    }

    /// All elements in canonical order, starting with zero.
    pub fn enumerate_elements(&self) -> Vec<RingElement> {
        (0..self.order())
            .map(|i| RingElement::new(self.clone(), i))
            .collect()
    }

    /// Whether every nonzero element is a unit, decided by exhaustive search
    /// (structurally for rings too large to search).
    pub fn is_field(&self) -> bool {
        *self.0.field.get_or_init(|| {
            let order = self.order();
            if order <= 1 << 12 {
                let one = self.one_index();
                (1..order).all(|a| (1..order).any(|b| self.mul_raw(a, b) == one))
            } else {
                match &self.0.kind {
                    RingKind::Zmod { n } => is_prime(*n),
                    RingKind::Galois { .. } => true,
                    RingKind::Product(..) => false,
                }
            }
        })
    }

    // Raw index arithmetic. Callers guarantee indices are in range.

    pub fn one_index(&self) -> u64 {
        self.0.one_structural()
    }

    #[inline]
    pub fn add_raw(&self, a: u64, b: u64) -> u64 {
        match &self.0.tables {
            Some(t) => t.add[(a * self.0.order + b) as usize] as u64,
            None => self.0.add_structural(a, b),
        }
    }

    #[inline]
    pub fn mul_raw(&self, a: u64, b: u64) -> u64 {
        match &self.0.tables {
            Some(t) => t.mul[(a * self.0.order + b) as usize] as u64,
            None => self.0.mul_structural(a, b),
        }
    }

    #[inline]
    pub fn neg_raw(&self, a: u64) -> u64 {
        match &self.0.tables {
            Some(t) => t.neg[a as usize] as u64,
            None => self.0.neg_structural(a),
        }
    }

    #[inline]
    pub fn sub_raw(&self, a: u64, b: u64) -> u64 {
        self.add_raw(a, self.neg_raw(b))
    }

    /// `a^e` by repeated squaring; `a^0 = 1`.
    pub fn pow_raw(&self, a: u64, mut e: u64) -> u64 {
        let mut base = a;
        let mut acc = self.one_index();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_raw(acc, base);
            }
            base = self.mul_raw(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse, if `a` is a unit.
    pub fn inverse_raw(&self, a: u64) -> Option<u64> {
        match &self.0.kind {
            RingKind::Zmod { n } => mod_inverse(a, *n),
            RingKind::Galois { .. } => (a != 0).then(|| self.pow_raw(a, self.order() - 2)),
            RingKind::Product(l, r) => {
                let (x, y) = (a / r.order(), a % r.order());
                Some(l.inverse_raw(x)? * r.order() + r.inverse_raw(y)?)
            }
        }
    }

    fn integer_index(&self, k: i64) -> u64 {
        match &self.0.kind {
            RingKind::Zmod { n } => k.rem_euclid(*n as i64) as u64,
            RingKind::Galois { p, .. } => k.rem_euclid(*p as i64) as u64,
            RingKind::Product(l, r) => l.integer_index(k) * r.order() + r.integer_index(k),
        }
    }

    pub fn repr_of(&self, index: u64) -> ElementRepr {
        match &self.0.kind {
            RingKind::Zmod { .. } => ElementRepr::Residue(index),
            RingKind::Galois { r: 1, .. } => ElementRepr::Residue(index),
            RingKind::Galois { p, r, .. } => ElementRepr::Coeffs(gf_decode(index, *p, *r)),
            RingKind::Product(l, r) => ElementRepr::Pair(
                Box::new(l.repr_of(index / r.order())),
                Box::new(r.repr_of(index % r.order())),
            ),
        }
    }

    pub fn index_of_repr(&self, repr: &ElementRepr) -> Result<u64> {
        let bad = || Error::InvalidArgument(format!("{repr} is not an element of {self}"));
        match (&self.0.kind, repr) {
            (RingKind::Zmod { n }, ElementRepr::Residue(v)) => Ok(v % n),
            (RingKind::Galois { p, .. }, ElementRepr::Residue(v)) => Ok(v % p),
            (RingKind::Galois { p, r, .. }, ElementRepr::Coeffs(c)) => {
                if c.len() > *r as usize {
                    return Err(bad());
                }
                let reduced: Vec<u64> = c.iter().map(|x| x % p).collect();
                Ok(gf_encode(&reduced, *p))
            }
            (RingKind::Product(..), ElementRepr::Residue(v)) => {
                Ok(self.integer_index(i64::try_from(*v).map_err(|_| bad())?))
            }
            (RingKind::Product(l, r), ElementRepr::Pair(a, b)) => {
                Ok(l.index_of_repr(a)? * r.order() + r.index_of_repr(b)?)
            }
            _ => Err(bad()),
        }
    }

    pub(crate) fn format_index(&self, index: u64) -> String {
        self.repr_of(index).to_string()
    }
}

impl RingInner {
    fn one_structural(&self) -> u64 {
        match &self.kind {
            RingKind::Zmod { .. } | RingKind::Galois { .. } => 1,
            RingKind::Product(l, r) => l.one_index() * r.order() + r.one_index(),
        }
    }

    fn add_structural(&self, a: u64, b: u64) -> u64 {
        match &self.kind {
            RingKind::Zmod { n } => {
                let s = a + b;
                if s >= *n {
                    s - n
                } else {
                    s
                }
            }
            RingKind::Galois { p, r, .. } => {
                let (x, y) = (gf_decode(a, *p, *r), gf_decode(b, *p, *r));
                let s: Vec<u64> = x.iter().zip(&y).map(|(u, v)| (u + v) % p).collect();
                gf_encode(&s, *p)
            }
            RingKind::Product(l, r) => {
                let ro = r.order();
                l.add_raw(a / ro, b / ro) * ro + r.add_raw(a % ro, b % ro)
            }
        }
    }

    fn neg_structural(&self, a: u64) -> u64 {
        match &self.kind {
            RingKind::Zmod { n } => (n - a) % n,
            RingKind::Galois { p, r, .. } => {
                let x = gf_decode(a, *p, *r);
                let s: Vec<u64> = x.iter().map(|u| (p - u) % p).collect();
                gf_encode(&s, *p)
            }
            RingKind::Product(l, r) => {
                let ro = r.order();
                l.neg_raw(a / ro) * ro + r.neg_raw(a % ro)
            }
        }
    }

    fn mul_structural(&self, a: u64, b: u64) -> u64 {
        match &self.kind {
            RingKind::Zmod { n } => ((a as u128 * b as u128) % *n as u128) as u64,
            RingKind::Galois { p, r, modulus } => {
                let (x, y) = (gf_decode(a, *p, *r), gf_decode(b, *p, *r));
                let mut prod = poly_mul(&x, &y, *p);
                poly_rem_in_place(&mut prod, modulus, *p);
                prod.resize(*r as usize, 0);
                gf_encode(&prod, *p)
            }
            RingKind::Product(l, r) => {
                let ro = r.order();
                l.mul_raw(a / ro, b / ro) * ro + r.mul_raw(a % ro, b % ro)
            }
        }
    }
}

/// Canonical representation of a ring element.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ElementRepr {
    Residue(u64),
    Coeffs(Vec<u64>),
    Pair(Box<ElementRepr>, Box<ElementRepr>),
}

impl fmt::Display for ElementRepr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElementRepr::Residue(v) => write!(f, "{v}"),
            ElementRepr::Coeffs(c) => {
                write!(f, "[")?;
                for (i, x) in c.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, "]")
            }
            ElementRepr::Pair(a, b) => write!(f, "({a},{b})"),
        }
    }
}

/// An element together with the ring it lives in.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RingElement {
    ring: RingSpec,
    index: u64,
}

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {}", self.repr(), self.ring)
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.repr())
    }
}

impl RingElement {
    pub(crate) fn new(ring: RingSpec, index: u64) -> Self {
        RingElement { ring, index }
    }

    pub fn ring(&self) -> &RingSpec {
        &self.ring
    }

    /// Position in the ring's canonical enumeration.
    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn repr(&self) -> ElementRepr {
        self.ring.repr_of(self.index)
    }

    pub fn is_zero(&self) -> bool {
        self.index == 0
    }

    fn same_ring(&self, other: &RingElement) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::MismatchedRing {
                left: self.ring.to_string(),
                right: other.ring.to_string(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &RingElement) -> Result<RingElement> {
        self.same_ring(other)?;
        Ok(RingElement::new(
            self.ring.clone(),
            self.ring.add_raw(self.index, other.index),
        ))
    }

    pub fn sub(&self, other: &RingElement) -> Result<RingElement> {
        self.same_ring(other)?;
        Ok(RingElement::new(
            self.ring.clone(),
            self.ring.sub_raw(self.index, other.index),
        ))
    }

    pub fn mul(&self, other: &RingElement) -> Result<RingElement> {
        self.same_ring(other)?;
        Ok(RingElement::new(
            self.ring.clone(),
            self.ring.mul_raw(self.index, other.index),
        ))
    }

    pub fn neg(&self) -> RingElement {
        RingElement::new(self.ring.clone(), self.ring.neg_raw(self.index))
    }

    pub fn pow(&self, e: u64) -> RingElement {
        RingElement::new(self.ring.clone(), self.ring.pow_raw(self.index, e))
    }

    pub fn inverse(&self) -> Option<RingElement> {
        self.ring
            .inverse_raw(self.index)
            .map(|i| RingElement::new(self.ring.clone(), i))
    }
}

// Helpers for GF(p^r) and polynomials over Z/p, coefficients low degree first.

fn gf_decode(mut index: u64, p: u64, r: u32) -> Vec<u64> {
    let mut out = Vec::with_capacity(r as usize);
    for _ in 0..r {
        out.push(index % p);
        index /= p;
    }
    out
}

fn gf_encode(coeffs: &[u64], p: u64) -> u64 {
    coeffs.iter().rev().fold(0, |acc, &c| acc * p + c)
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    out
}

/// Reduces `a` modulo the monic polynomial `m`, leaving at most `deg m` coefficients.
fn poly_rem_in_place(a: &mut Vec<u64>, m: &[u64], p: u64) {
    let dm = m.len() - 1;
    while a.len() > dm {
        let lead = a.pop().unwrap_or(0);
        if lead == 0 {
            continue;
        }
        let shift = a.len() - dm;
        for (i, &mc) in m[..dm].iter().enumerate() {
            a[shift + i] = (a[shift + i] + (p - lead) * mc % p) % p;
        }
    }
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
fn is_irreducible(f: &[u64], p: u64) -> bool {
    let deg = f.len() - 1;
    for d in 1..=deg / 2 {
        let count = p.pow(d as u32);
        for low in 0..count {
            let mut divisor = gf_decode(low, p, d as u32);
            divisor.push(1);
            let mut rem = f.to_vec();
            poly_rem_in_place(&mut rem, &divisor, p);
            if rem.iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Smallest monic irreducible of degree `r`, comparing coefficients low degree first.
pub fn default_modulus(p: u64, r: u32) -> Vec<u64> {
    let count = p.pow(r);
    for idx in 0..count {
        // idx enumerates (c0, .., c_{r-1}) lexicographically with c0 most significant.
        let mut low = gf_decode(idx, p, r);
        low.reverse();
        low.push(1);
        if is_irreducible(&low, p) {
            return low;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

pub(crate) fn format_univariate(coeffs: &[u64]) -> String {
    let mut terms = Vec::new();
    for (e, &c) in coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let mono = match e {
            0 => String::new(),
            1 => "x".to_string(),
            _ => format!("x^{e}"),
        };
        terms.push(match (c, e) {
            (_, 0) => c.to_string(),
            (1, _) => mono,
            _ => format!("{c}*{mono}"),
        });
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join("+")
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// `(p, r)` with `q = p^r`, if `q` is a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let (mut rest, mut r) = (q, 0u32);
    while rest % p == 0 {
        rest /= p;
        r += 1;
    }
    (rest == 1).then_some((p, r))
}

fn mod_inverse(a: u64, n: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128, n as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    (old_r == 1).then(|| old_s.rem_euclid(n as i128) as u64)
}
