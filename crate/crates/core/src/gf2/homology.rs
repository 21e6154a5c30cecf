//! Betti numbers over F2 from boundary matrices, dense or sparse.

use std::collections::HashMap;

use super::{BitMatrix, Gf2Error};

/// Betti numbers `b_0 .. b_d`; `reduced0` is `b_0 - 1` (or `-1` for the
/// empty complex).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Betti {
    pub betti: Vec<usize>,
    pub reduced0: i64,
}

impl Betti {
    /// Reduced Betti numbers as signed integers.
    pub fn reduced(&self) -> Vec<i64> {
        let mut v: Vec<i64> = self.betti.iter().map(|&b| b as i64).collect();
        if let Some(b0) = v.first_mut() {
            *b0 = self.reduced0;
        }
        v
    }

    /// True when every reduced Betti number vanishes.
    pub fn is_acyclic(&self) -> bool {
        self.reduced0 == 0 && self.betti.iter().skip(1).all(|&b| b == 0)
    }

    /// Equal reduced Betti numbers, ignoring trailing zeros.
    pub fn same_reduced(&self, other: &Betti) -> bool {
        let trim = |b: &Betti| {
            let mut v = b.reduced();
            while v.last() == Some(&0) {
                v.pop();
            }
            v
        };
        trim(self) == trim(other)
    }

    pub fn reduced_euler(&self) -> i64 {
        self.reduced().iter().enumerate().map(|(k, &b)| if k % 2 == 0 { b } else { -b }).sum()
    }

    fn from_ranks(sizes: &[usize], ranks: &[usize]) -> Self {
        // ranks[k] = rank of d_k : C_k -> C_{k-1}, with ranks[0] = 0.
        let betti: Vec<usize> =
            (0..sizes.len()).map(|k| sizes[k] - ranks[k] - ranks.get(k + 1).copied().unwrap_or(0)).collect();
        let reduced0 = if sizes.first().copied().unwrap_or(0) == 0 { -1 } else { betti[0] as i64 - 1 };
        Betti { betti, reduced0 }
    }
}

/// `boundaries[k]` is `d_{k+1} : C_{k+1} -> C_k` with `rows = dim C_k`.
pub fn betti_f2(boundaries: &[BitMatrix]) -> Result<Betti, Gf2Error> {
    for k in 1..boundaries.len() {
        let (a, b) = (&boundaries[k - 1], &boundaries[k]);
        if a.cols() != b.rows() {
            return Err(Gf2Error::Shape(a.rows(), a.cols(), b.rows(), b.cols()));
        }
        if !a.mul(b)?.is_zero() {
            return Err(Gf2Error::NotAComplex(k, k + 1));
        }
    }
    let mut sizes = vec![boundaries.first().map_or(0, |d| d.rows())];
    sizes.extend(boundaries.iter().map(|d| d.cols()));
    let mut ranks = vec![0];
    ranks.extend(boundaries.iter().map(|d| d.rank()));
    Ok(Betti::from_ranks(&sizes, &ranks))
}

/// A boundary map stored column-wise as sorted row indices.
#[derive(Clone, Debug, Default)]
pub struct SparseColumns {
    pub rows: usize,
    pub columns: Vec<Vec<u32>>,
}

impl SparseColumns {
    /// Rank by standard column reduction with a pivot table.
    pub fn rank(&self) -> usize {
        let mut pivot_of: HashMap<u32, Vec<u32>> = HashMap::new();
        let mut rank = 0;
        for col in &self.columns {
            let mut c = col.clone();
            while let Some(&low) = c.last() {
                match pivot_of.get(&low) {
                    Some(p) => c = sym_diff(&c, p),
                    None => break,
                }
            }
            if let Some(&low) = c.last() {
                pivot_of.insert(low, c);
                rank += 1;
            }
        }
        rank
    }

    fn compose_is_zero(&self, next: &SparseColumns) -> bool {
        next.columns.iter().all(|col| {
            let mut acc: Vec<u32> = Vec::new();
            for &j in col {
                acc = sym_diff(&acc, &self.columns[j as usize]);
            }
            acc.is_empty()
        })
    }
}

fn sym_diff(a: &[u32], b: &[u32]) -> Vec<u32> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::with_capacity(a.len() + b.len());
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Sparse counterpart of [`betti_f2`] for complexes too large for dense
/// matrices.
pub fn betti_sparse(boundaries: &[SparseColumns]) -> Result<Betti, Gf2Error> {
    for k in 1..boundaries.len() {
        if boundaries[k - 1].columns.len() != boundaries[k].rows {
            return Err(Gf2Error::Shape(boundaries[k - 1].rows, boundaries[k - 1].columns.len(), boundaries[k].rows, boundaries[k].columns.len()));
        }
        if !boundaries[k - 1].compose_is_zero(&boundaries[k]) {
            return Err(Gf2Error::NotAComplex(k, k + 1));
        }
    }
    let mut sizes = vec![boundaries.first().map_or(0, |d| d.rows)];
    sizes.extend(boundaries.iter().map(|d| d.columns.len()));
    let mut ranks = vec![0];
    ranks.extend(boundaries.iter().map(|d| d.rank()));
    Ok(Betti::from_ranks(&sizes, &ranks))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle_d1() -> BitMatrix {
        // vertices 0,1,2; edges 01, 02, 12
        BitMatrix::from_rows(&[[1, 1, 0], [1, 0, 1], [0, 1, 1]])
    }

    #[test]
    fn hollow_and_solid_triangle() {
        let hollow = betti_f2(&[triangle_d1()]).unwrap();
        assert_eq!(hollow.betti, vec![1, 1]);
        assert_eq!(hollow.reduced0, 0);
        let d2 = BitMatrix::from_rows(&[[1], [1], [1]]);
        let solid = betti_f2(&[triangle_d1(), d2]).unwrap();
        assert_eq!(solid.betti, vec![1, 0, 0]);
        assert!(solid.is_acyclic());
    }

    #[test]
    fn non_complex_is_rejected() {
        let d2 = BitMatrix::from_rows(&[[1], [1], [0]]);
        assert_eq!(betti_f2(&[triangle_d1(), d2]), Err(Gf2Error::NotAComplex(1, 2)));
    }

    #[test]
    fn sparse_agrees_with_dense() {
        let d1 = SparseColumns { rows: 3, columns: vec![vec![0, 1], vec![0, 2], vec![1, 2]] };
        let b = betti_sparse(&[d1]).unwrap();
        assert_eq!(b, betti_f2(&[triangle_d1()]).unwrap());
    }
}
