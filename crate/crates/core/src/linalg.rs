//! Gaussian elimination over a finite field given as a [`RingSpec`].

use crate::error::{Error, Result};
use crate::ring::RingSpec;

/// Dense row-major matrix of canonical element indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<u64>) -> Self {
        assert_eq!(rows * cols, data.len());
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<u64>>) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let n = rows.len();
        let data: Vec<u64> = rows.into_iter().flatten().collect();
        Matrix::new(n, cols, data)
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

/// Rank of `m` over the field `ring`.
pub fn rank(ring: &RingSpec, m: &Matrix) -> Result<usize> {
    if !ring.is_field() {
        return Err(Error::NotAField(ring.to_string()));
    }
    let mut a = m.clone();
    let (rows, cols) = a.shape();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot) = (rank..rows).find(|&r| a.get(r, col) != 0) else {
            continue;
        };
        a.swap_rows(rank, pivot);
        let inv = ring
            .inverse_raw(a.get(rank, col))
            .expect("nonzero field element is a unit");
        for r in rank + 1..rows {
            let factor = ring.mul_raw(a.get(r, col), inv);
            if factor == 0 {
                continue;
            }
            for c in col..cols {
                let v = ring.sub_raw(a.get(r, c), ring.mul_raw(factor, a.get(rank, c)));
                a.data[r * cols + c] = v;
            }
        }
        rank += 1;
    }
    Ok(rank)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    /// Independent oracle: |image of v -> A v| = q^rank.
    fn rank_by_image(ring: &RingSpec, m: &Matrix) -> usize {
        let (rows, cols) = m.shape();
        let q = ring.order();
        let mut image = HashSet::new();
        for idx in 0..q.pow(cols as u32) {
            let v = crate::poly::point_coords(q, cols, idx);
            let out: Vec<u64> = (0..rows)
                .map(|r| {
                    (0..cols).fold(0, |acc, c| {
                        ring.add_raw(acc, ring.mul_raw(m.get(r, c), v[c]))
                    })
                })
                .collect();
            image.insert(out);
        }
        let mut size = image.len() as u64;
        let mut r = 0;
        while size > 1 {
            size /= q;
            r += 1;
        }
        r
    }

    #[test]
    fn rank_of_evaluation_matrix_f3_affine() {
        // rows: points 0,1,2; cols: basis {1, x}
        let f3 = RingSpec::zmod(3).unwrap();
        let m = Matrix::from_rows(vec![vec![1, 0], vec![1, 1], vec![1, 2]]);
        assert_eq!(rank(&f3, &m).unwrap(), 2);
        assert_eq!(rank_by_image(&f3, &m), 2);
    }

    #[test]
    fn rank_matches_image_oracle() {
        let fields = [
            RingSpec::zmod(2).unwrap(),
            RingSpec::zmod(3).unwrap(),
            RingSpec::galois(2, 2).unwrap(),
        ];
        let mut seed = 12345u64;
        for ring in &fields {
            let q = ring.order();
            for _ in 0..60 {
                let rows = 1 + (seed % 3) as usize;
                let cols = 1 + (seed / 7 % 3) as usize;
                let data: Vec<u64> = (0..rows * cols)
                    .map(|_| {
                        seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                        (seed >> 33) % q
                    })
                    .collect();
                let m = Matrix::new(rows, cols, data);
                assert_eq!(rank(ring, &m).unwrap(), rank_by_image(ring, &m), "{ring} {m:?}");
            }
        }
    }

    #[test]
    fn rank_rejects_non_fields() {
        let z4 = RingSpec::zmod(4).unwrap();
        assert!(matches!(
            rank(&z4, &Matrix::from_rows(vec![vec![2]])),
            Err(Error::NotAField(_))
        ));
    }
}
