//! Naive reference arithmetic shared by the integration tests.
//!
//! Nothing here goes through the library's ring tables or evaluation code.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;

/// Rings small enough to do arithmetic by hand: `Z/n` and `GF(4)` with
/// `a^2 = a + 1`, elements of the latter encoded as `c0 + 2*c1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Naive {
    Zmod(u64),
    Gf4,
}

impl Naive {
    pub fn order(self) -> u64 {
        match self {
            Naive::Zmod(n) => n,
            Naive::Gf4 => 4,
        }
    }

    pub fn spec(self) -> String {
        match self {
            Naive::Zmod(n) => format!("Z{n}"),
            Naive::Gf4 => "GF(4)".into(),
        }
    }

    pub fn add(self, a: u64, b: u64) -> u64 {
        match self {
            Naive::Zmod(n) => (a + b) % n,
            Naive::Gf4 => a ^ b,
        }
    }

    pub fn mul(self, a: u64, b: u64) -> u64 {
        match self {
            Naive::Zmod(n) => (a * b) % n,
            Naive::Gf4 => {
                let mut prod = 0u64;
                for i in 0..2 {
                    if b >> i & 1 == 1 {
                        prod ^= a << i;
                    }
                }
                if prod & 4 != 0 {
                    prod ^= 0b111;
                }
                prod
            }
        }
    }

    pub fn pow(self, a: u64, e: u32) -> u64 {
        (0..e).fold(1, |acc, _| self.mul(acc, a))
    }
}

/// `sum c_j * prod x_i^e_ij` evaluated term by term.
pub fn eval(ring: Naive, basis: &[Vec<u32>], coeffs: &[u64], point: &[u64]) -> u64 {
    basis.iter().zip(coeffs).fold(0, |acc, (exps, &c)| {
        let mono = exps
            .iter()
            .zip(point)
            .fold(1, |m, (&e, &x)| ring.mul(m, ring.pow(x, e)));
        ring.add(acc, ring.mul(c, mono))
    })
}

/// All tuples in `{0..base}^len`, first coordinate fastest.
pub fn tuples(base: u64, len: usize) -> Vec<Vec<u64>> {
    let total = base.pow(len as u32);
    (0..total)
        .map(|mut i| {
            (0..len)
                .map(|_| {
                    let d = i % base;
                    i /= base;
                    d
                })
                .collect()
        })
        .collect()
}

pub fn monomial_string(exps: &[u32]) -> String {
    let parts: Vec<String> = exps
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| if e == 1 { format!("x{}", i + 1) } else { format!("x{}^{e}", i + 1) })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

/// Zero-count pmf of `m` uniform polynomials from the span of `basis`, by
/// brute force over every `m`-tuple of coefficient vectors.
pub fn brute_force_pmf(ring: Naive, nvars: usize, basis: &[Vec<u32>], m: usize) -> Vec<BigRational> {
    let q = ring.order();
    let points = tuples(q, nvars);
    let polys = tuples(q, basis.len());
    let values: Vec<Vec<u64>> = polys
        .iter()
        .map(|c| points.iter().map(|p| eval(ring, basis, c, p)).collect())
        .collect();
    let npoly = polys.len();
    let mut counts = vec![0u64; points.len() + 1];
    for sys in tuples(npoly as u64, m) {
        let zeros = (0..points.len())
            .filter(|&p| sys.iter().all(|&f| values[f as usize][p] == 0))
            .count();
        counts[zeros] += 1;
    }
    let total = BigInt::from(npoly).pow(m as u32);
    counts
        .into_iter()
        .map(|c| BigRational::new(BigInt::from(c), total.clone()))
        .collect()
}

/// `C(N, r) (q^m - 1)^(N - r) / q^(mN)`, by direct factorial arithmetic.
pub fn binomial_oracle(q: u64, n: usize, m: usize) -> Vec<BigRational> {
    let trials = q.pow(n as u32);
    let p = BigRational::new(BigInt::from(1), BigInt::from(q).pow(m as u32));
    let one = BigRational::from_integer(BigInt::from(1));
    let fact = |k: u64| (1..=k).fold(BigInt::from(1), |a, i| a * i);
    (0..=trials)
        .map(|r| {
            let c = fact(trials) / (fact(r) * fact(trials - r));
            let mut term = BigRational::from_integer(c);
            for _ in 0..r {
                term *= &p;
            }
            for _ in r..trials {
                term *= &one - &p;
            }
            term
        })
        .collect()
}

/// Monomial exponent vectors with every exponent at most `d`, constant excluded.
pub fn nonconstant_monomials(nvars: usize, d: u32) -> Vec<Vec<u32>> {
    tuples(d as u64 + 1, nvars)
        .into_iter()
        .filter(|e| e.iter().any(|&x| x > 0))
        .map(|e| e.into_iter().map(|x| x as u32).collect())
        .collect()
}
