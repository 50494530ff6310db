//! Text grammars for rings, polynomials, and sample-space specifications.
//!
//! ```text
//! ring   := atom ('x' atom)*
//! atom   := 'Z' int | 'GF(' int (';mod=' upoly)? ')' | '(' ring ')'
//! poly   := '-'? term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := coeff | 'x' int ('^' int)?
//! coeff  := int | '[' int (',' int)* ']' | '(' coeff ',' coeff ')'
//! space  := 'total:d=' int | 'pervar:d=' int | 'custom:file=' path | 'custom:basis=' poly (',' poly)*
//! ```
//!
//! A bare `x` stands for `x1` when there is a single variable.

use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::poly::{Monomial, Polynomial};
use crate::ring::{prime_power, ElementRepr, RingSpec};

struct Cursor<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor {
            src,
            bytes: src.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    /// Peek without skipping whitespace.
    fn peek_raw(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn eat_str(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("'{}'", c as char)))
        }
    }

    fn error(&self, expected: &str) -> Error {
        Error::Parse {
            input: self.src.to_string(),
            position: self.pos,
            expected: expected.to_string(),
        }
    }

    fn int(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("integer"));
        }
        self.src[start..self.pos].parse().map_err(|_| Error::Parse {
            input: self.src.to_string(),
            position: start,
            expected: "integer that fits in 64 bits".into(),
        })
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn finish(&mut self) -> Result<()> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.error("end of input"))
        }
    }
}

impl FromStr for RingSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_ring(s)
    }
}

pub fn parse_ring(s: &str) -> Result<RingSpec> {
    let mut cur = Cursor::new(s);
    let ring = ring_expr(&mut cur)?;
    cur.finish()?;
    Ok(ring)
}

fn ring_expr(cur: &mut Cursor) -> Result<RingSpec> {
    let mut acc = ring_atom(cur)?;
    while cur.eat(b'x') {
        let rhs = ring_atom(cur)?;
        acc = RingSpec::product(acc, rhs).map_err(|e| at(cur, e))?;
    }
    Ok(acc)
}

fn ring_atom(cur: &mut Cursor) -> Result<RingSpec> {
    if cur.eat(b'(') {
        let r = ring_expr(cur)?;
        cur.expect(b')')?;
        return Ok(r);
    }
    if cur.eat_str("GF(") {
        let q = cur.int()?;
        let (p, r) = prime_power(q).ok_or_else(|| cur.error("prime power field order"))?;
        let ring = if cur.eat(b';') {
            if !cur.eat_str("mod=") {
                return Err(cur.error("'mod='"));
            }
            let modulus = univariate(cur)?;
            RingSpec::galois_with_modulus(p, r, modulus).map_err(|e| at(cur, e))?
        } else {
            RingSpec::galois(p, r).map_err(|e| at(cur, e))?
        };
        cur.expect(b')')?;
        return Ok(ring);
    }
    if cur.eat(b'Z') {
        let n = cur.int()?;
        return RingSpec::zmod(n).map_err(|e| at(cur, e));
    }
    if cur.eat(b'F') {
        let q = cur.int()?;
        return RingSpec::galois_of_order(q).map_err(|e| at(cur, e));
    }
    Err(cur.error("'Z', 'GF(', 'F' or '('"))
}

fn at(cur: &Cursor, e: Error) -> Error {
    Error::Parse {
        input: cur.src.to_string(),
        position: cur.pos,
        expected: format!("valid ring ({e})"),
    }
}

/// Integer-coefficient polynomial in `x`, low degree first.
fn univariate(cur: &mut Cursor) -> Result<Vec<u64>> {
    let mut coeffs: Vec<u64> = Vec::new();
    loop {
        let mut c = 1u64;
        let mut e = 0usize;
        let mut saw = false;
        if matches!(cur.peek(), Some(b'0'..=b'9')) {
            c = cur.int()?;
            saw = true;
            if !cur.eat(b'*') {
                add_coeff(&mut coeffs, 0, c);
                if cur.eat(b'+') {
                    continue;
                }
                break;
            }
        }
        if cur.eat(b'x') {
            e = 1;
            if cur.eat(b'^') {
                e = cur.int()? as usize;
            }
            saw = true;
        }
        if !saw {
            return Err(cur.error("modulus term"));
        }
        add_coeff(&mut coeffs, e, c);
        if !cur.eat(b'+') {
            break;
        }
    }
    Ok(coeffs)
}

fn add_coeff(coeffs: &mut Vec<u64>, e: usize, c: u64) {
    if coeffs.len() <= e {
        coeffs.resize(e + 1, 0);
    }
    coeffs[e] += c;
}

pub fn parse_polynomial(s: &str, ring: &RingSpec, nvars: usize) -> Result<Polynomial> {
    let mut cur = Cursor::new(s);
    let mut out = Polynomial::zero(ring, nvars);
    let mut negate = cur.eat(b'-');
    loop {
        let (m, c) = term(&mut cur, ring, nvars)?;
        let c = if negate { ring.neg_raw(c) } else { c };
        out.add_term(m, c);
        if cur.eat(b'+') {
            negate = false;
        } else if cur.eat(b'-') {
            negate = true;
        } else {
            break;
        }
    }
    cur.finish()?;
    Ok(out)
}

fn term(cur: &mut Cursor, ring: &RingSpec, nvars: usize) -> Result<(Monomial, u64)> {
    let mut exps = vec![0u32; nvars];
    let mut coeff = ring.one_index();
    loop {
        match cur.peek() {
            Some(b'x') => {
                cur.pos += 1;
                let var = if matches!(cur.peek_raw(), Some(b'0'..=b'9')) {
                    let i = cur.int()? as usize;
                    if i == 0 || i > nvars {
                        return Err(cur.error(&format!("variable index in 1..={nvars}")));
                    }
                    i - 1
                } else if nvars == 1 {
                    0
                } else {
                    return Err(cur.error("variable index"));
                };
                let e = if cur.eat(b'^') { cur.int()? } else { 1 };
                let e = u32::try_from(e).map_err(|_| cur.error("exponent below 2^32"))?;
                exps[var] += e;
            }
            Some(b'0'..=b'9') | Some(b'[') | Some(b'(') => {
                let start = cur.pos;
                let repr = coeff_repr(cur)?;
                let idx = ring.index_of_repr(&repr).map_err(|_| Error::Parse {
                    input: cur.src.to_string(),
                    position: start,
                    expected: format!("element of {ring}"),
                })?;
                coeff = ring.mul_raw(coeff, idx);
            }
            _ => return Err(cur.error("coefficient or variable")),
        }
        if !cur.eat(b'*') {
            break;
        }
    }
    Ok((Monomial::new(exps), coeff))
}

fn coeff_repr(cur: &mut Cursor) -> Result<ElementRepr> {
    if cur.eat(b'[') {
        let mut v = vec![cur.int()?];
        while cur.eat(b',') {
            v.push(cur.int()?);
        }
        cur.expect(b']')?;
        return Ok(ElementRepr::Coeffs(v));
    }
    if cur.eat(b'(') {
        let a = coeff_repr(cur)?;
        cur.expect(b',')?;
        let b = coeff_repr(cur)?;
        cur.expect(b')')?;
        return Ok(ElementRepr::Pair(Box::new(a), Box::new(b)));
    }
    Ok(ElementRepr::Residue(cur.int()?))
}

/// A parsed sample-space specification; see [`crate::space::SampleSpace::from_spec`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpaceSpec {
    TotalDegree(u32),
    PerVariableDegree(u32),
    CustomFile(PathBuf),
    CustomBasis(Vec<String>),
}

impl FromStr for SpaceSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_space_spec(s)
    }
}

pub fn parse_space_spec(s: &str) -> Result<SpaceSpec> {
    let mut cur = Cursor::new(s);
    let degree = |cur: &mut Cursor| -> Result<u32> {
        if !cur.eat_str("d=") {
            return Err(cur.error("'d='"));
        }
        let d = cur.int()?;
        cur.finish()?;
        u32::try_from(d).map_err(|_| cur.error("degree below 2^32"))
    };
    if cur.eat_str("total:") {
        return degree(&mut cur).map(SpaceSpec::TotalDegree);
    }
    if cur.eat_str("pervar:") {
        return degree(&mut cur).map(SpaceSpec::PerVariableDegree);
    }
    if cur.eat_str("custom:") {
        if cur.eat_str("file=") {
            let path = s[cur.pos..].trim();
            if path.is_empty() {
                return Err(cur.error("file path"));
            }
            return Ok(SpaceSpec::CustomFile(PathBuf::from(path)));
        }
        if cur.eat_str("basis=") {
            return Ok(SpaceSpec::CustomBasis(split_basis(&s[cur.pos..])));
        }
        return Err(cur.error("'file=' or 'basis='"));
    }
    Err(cur.error("'total:', 'pervar:' or 'custom:'"))
}

/// Splits a comma-separated basis list at commas outside brackets.
pub fn split_basis(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in s.chars() {
        match ch {
            '[' | '(' => depth += 1,
            ']' | ')' => depth -= 1,
            _ => {}
        }
        if ch == ',' && depth == 0 {
            out.push(cur.trim().to_string());
            cur.clear();
        } else {
            cur.push(ch);
        }
    }
    if !cur.trim().is_empty() || !out.is_empty() {
        out.push(cur.trim().to_string());
    }
    out
}
