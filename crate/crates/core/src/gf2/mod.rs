//! Bit-packed linear algebra over F2.

mod homology;
mod u4;

pub use homology::{betti_f2, betti_sparse, Betti, SparseColumns};
pub use u4::{enumerate_rank2_squarezero, reference_nilpotents, u4_relations_check, RelationCheck, U4Element, UPPER};

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Gf2Error {
    #[error("shape mismatch: {0}x{1} times {2}x{3}")]
    Shape(usize, usize, usize, usize),
    #[error("boundary maps {0} and {1} do not compose to zero")]
    NotAComplex(usize, usize),
    #[error("not a unitriangular 4x4 matrix")]
    NotUnitriangular,
}

/// Row-major matrix over F2, 64 entries per word.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = cols.div_ceil(64);
        BitMatrix { rows, cols, stride, data: vec![0; rows * stride] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from rows of 0/1 entries.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.as_ref().len(), cols, "ragged rows");
            for (j, &x) in r.as_ref().iter().enumerate() {
                m.set(i, j, x & 1 == 1);
            }
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                if f(i, j) {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.stride + j / 64] >> (j % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        let w = &mut self.data[i * self.stride + j / 64];
        if v {
            *w |= 1 << (j % 64);
        } else {
            *w &= !(1 << (j % 64));
        }
    }

    pub fn toggle(&mut self, i: usize, j: usize) {
        self.data[i * self.stride + j / 64] ^= 1 << (j % 64);
    }

    pub fn row_words(&self, i: usize) -> &[u64] {
        &self.data[i * self.stride..(i + 1) * self.stride]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn add(&self, other: &BitMatrix) -> Result<Self, Gf2Error> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Gf2Error::Shape(self.rows, self.cols, other.rows, other.cols));
        }
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a ^= b;
        }
        Ok(out)
    }

    /// Matrix product; row `i` of the result is the XOR of the rows of
    /// `other` selected by row `i` of `self`.
    pub fn mul(&self, other: &BitMatrix) -> Result<Self, Gf2Error> {
        if self.cols != other.rows {
            return Err(Gf2Error::Shape(self.rows, self.cols, other.rows, other.cols));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.get(i, k) {
                    let (dst, src) = (i * out.stride, k * other.stride);
                    for w in 0..out.stride {
                        out.data[dst + w] ^= other.data[src + w];
                    }
                }
            }
        }
        Ok(out)
    }

    /// Image of a column vector.
    pub fn apply(&self, v: &[bool]) -> Vec<bool> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows).map(|i| (0..self.cols).filter(|&j| v[j] && self.get(i, j)).count() % 2 == 1).collect()
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| self.get(i, c)) else { continue };
            if p != r {
                for w in 0..self.stride {
                    self.data.swap(p * self.stride + w, r * self.stride + w);
                }
            }
            let w0 = c / 64;
            for i in 0..self.rows {
                if i != r && self.get(i, c) {
                    for w in w0..self.stride {
                        let x = self.data[r * self.stride + w];
                        self.data[i * self.stride + w] ^= x;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of `{ v : A v = 0 }`.
    pub fn nullspace(&self) -> Vec<Vec<bool>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![false; self.cols];
                v[f] = true;
                for (r, &p) in pivots.iter().enumerate() {
                    if m.get(r, f) {
                        v[p] = true;
                    }
                }
                v
            })
            .collect()
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let line: String = (0..self.cols).map(|j| if self.get(i, j) { '1' } else { '0' }).collect();
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_basics() {
        assert_eq!(BitMatrix::identity(4).rank(), 4);
        assert_eq!(BitMatrix::zeros(3, 5).rank(), 0);
        let m = BitMatrix::from_rows(&[[1, 1, 0], [0, 1, 1], [1, 0, 1]]);
        assert_eq!(m.rank(), 2);
        assert_eq!(m.transpose().rank(), 2);
    }

    #[test]
    fn nullspace_is_annihilated() {
        let m = BitMatrix::from_rows(&[[1, 1, 0, 1], [0, 1, 1, 0]]);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(m.apply(&v).iter().all(|&x| !x));
        }
    }

    #[test]
    fn wide_matrices_cross_word_boundaries() {
        let m = BitMatrix::from_fn(70, 130, |i, j| (i * 7 + j * 3) % 5 == 0);
        let t = m.transpose();
        assert_eq!(m.rank(), t.rank());
        let p = m.mul(&t).unwrap();
        assert!(p.rank() <= m.rank());
    }
}
