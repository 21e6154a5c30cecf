//! The group of 4x4 upper unitriangular matrices over F2 and its ten
//! square-zero rank-2 nilpotents.

use super::{BitMatrix, Gf2Error};

/// Strictly upper positions in the order x12, x13, x14, x23, x24, x34.
pub const UPPER: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct U4Element(BitMatrix);

impl U4Element {
    pub fn new(m: BitMatrix) -> Result<Self, Gf2Error> {
        let ok = m.rows() == 4 && m.cols() == 4 && (0..4).all(|i| (0..4).all(|j| if i == j { m.get(i, j) } else if i > j { !m.get(i, j) } else { true }));
        if ok {
            Ok(U4Element(m))
        } else {
            Err(Gf2Error::NotUnitriangular)
        }
    }

    pub fn identity() -> Self {
        U4Element(BitMatrix::identity(4))
    }

    /// Element with the strictly upper entries given by the low six bits,
    /// bit `k` holding position `UPPER[k]`.
    pub fn from_bits(bits: u8) -> Self {
        let mut m = BitMatrix::identity(4);
        for (k, &(i, j)) in UPPER.iter().enumerate() {
            m.set(i, j, bits >> k & 1 == 1);
        }
        U4Element(m)
    }

    pub fn bits(&self) -> u8 {
        UPPER.iter().enumerate().fold(0, |b, (k, &(i, j))| b | (self.0.get(i, j) as u8) << k)
    }

    /// 0-based entry.
    pub fn entry(&self, i: usize, j: usize) -> bool {
        self.0.get(i, j)
    }

    pub fn matrix(&self) -> &BitMatrix {
        &self.0
    }

    pub fn mul(&self, other: &U4Element) -> U4Element {
        U4Element(self.0.mul(&other.0).expect("4x4"))
    }

    /// The nilpotent part `g - I`.
    pub fn nilpotent(&self) -> BitMatrix {
        self.0.add(&BitMatrix::identity(4)).expect("4x4")
    }

    pub fn all() -> Vec<U4Element> {
        (0..64).map(Self::from_bits).collect()
    }
}

/// All strictly upper triangular `N` with `N^2 = 0` and rank 2.
pub fn enumerate_rank2_squarezero() -> Vec<BitMatrix> {
    (0u8..64)
        .map(|b| U4Element::from_bits(b).nilpotent())
        .filter(|n| n.rank() == 2 && n.mul(n).expect("4x4").is_zero())
        .collect()
}

fn nilpotent(entries: &[(usize, usize)]) -> BitMatrix {
    let mut m = BitMatrix::zeros(4, 4);
    for &(i, j) in entries {
        m.set(i - 1, j - 1, true);
    }
    m
}

/// `N_1 .. N_10` in the reference labelling (1-based positions).
pub fn reference_nilpotents() -> [BitMatrix; 10] {
    [
        nilpotent(&[(1, 3), (2, 4)]),
        nilpotent(&[(1, 3), (1, 4), (2, 3)]),
        nilpotent(&[(1, 4), (2, 3), (2, 4)]),
        nilpotent(&[(1, 4), (2, 3)]),
        nilpotent(&[(1, 3), (1, 4), (2, 4)]),
        nilpotent(&[(1, 3), (2, 3), (2, 4)]),
        nilpotent(&[(1, 2), (3, 4)]),
        nilpotent(&[(1, 2), (1, 4), (3, 4)]),
        nilpotent(&[(1, 2), (1, 3), (2, 4), (3, 4)]),
        nilpotent(&[(1, 2), (1, 3), (1, 4), (2, 4), (3, 4)]),
    ]
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationCheck {
    pub name: String,
    pub holds: bool,
}

fn span(vs: &[[bool; 4]]) -> Vec<[bool; 4]> {
    let mut out = vec![[false; 4]];
    for v in vs {
        let extra: Vec<[bool; 4]> = out.iter().map(|w| std::array::from_fn(|i| w[i] ^ v[i])).collect();
        for e in extra {
            if !out.contains(&e) {
                out.push(e);
            }
        }
    }
    out.sort();
    out
}

/// Product relations among `zbar_i = I + N_i` and the fixed lines of the
/// column action, one entry per relation.
pub fn u4_relations_check() -> Vec<RelationCheck> {
    let z: Vec<U4Element> = reference_nilpotents()
        .iter()
        .map(|n| U4Element::new(n.add(&BitMatrix::identity(4)).expect("4x4")).expect("unitriangular"))
        .collect();
    let mut out = Vec::new();
    let mut rel = |name: String, holds: bool| out.push(RelationCheck { name, holds });
    for (c, a, b) in [(3, 1, 2), (6, 4, 5), (9, 1, 8), (9, 5, 7), (10, 1, 7), (10, 5, 8)] {
        rel(format!("z{c} = z{a} z{b}"), z[c - 1] == z[a - 1].mul(&z[b - 1]));
        rel(format!("z{c} = z{b} z{a}"), z[c - 1] == z[b - 1].mul(&z[a - 1]));
    }
    for (i, zi) in z.iter().enumerate() {
        rel(format!("z{}^2 = I", i + 1), zi.mul(zi) == U4Element::identity());
    }
    let e = |k: usize| -> [bool; 4] { std::array::from_fn(|i| i == k) };
    let e23: [bool; 4] = [false, true, true, false];
    for (range, line, name) in [(0..6, [e(0), e(1)], "<e1,e2>"), (6..8, [e(0), e(2)], "<e1,e3>"), (8..10, [e(0), e23], "<e1,e2+e3>")] {
        for i in range {
            let ker: Vec<[bool; 4]> =
                reference_nilpotents()[i].nullspace().iter().map(|v| std::array::from_fn(|k| v[k])).collect();
            rel(format!("fix(z{}) = {name}", i + 1), span(&ker) == span(&line));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ten_nilpotents_match_reference_set() {
        let mut found: Vec<u8> =
            enumerate_rank2_squarezero().iter().map(|n| U4Element::new(n.add(&BitMatrix::identity(4)).unwrap()).unwrap().bits()).collect();
        let mut reference: Vec<u8> =
            reference_nilpotents().iter().map(|n| U4Element::new(n.add(&BitMatrix::identity(4)).unwrap()).unwrap().bits()).collect();
        found.sort();
        reference.sort();
        assert_eq!(found.len(), 10);
        assert_eq!(found, reference);
    }

    #[test]
    fn relations_hold() {
        for r in u4_relations_check() {
            assert!(r.holds, "{}", r.name);
        }
    }

    #[test]
    fn closed_group_of_order_64() {
        let all = U4Element::all();
        for a in &all {
            for b in &all {
                assert!(U4Element::new(a.mul(b).matrix().clone()).is_ok());
            }
        }
        let distinct: std::collections::HashSet<u8> = all.iter().map(|g| g.bits()).collect();
        assert_eq!(distinct.len(), 64);
    }

    #[test]
    fn n1_has_rank_two_and_n7_kernel() {
        let n = reference_nilpotents();
        assert_eq!(n[0].rank(), 2);
        let ker = n[6].nullspace();
        let spanned = span(&ker.iter().map(|v| std::array::from_fn(|k| v[k])).collect::<Vec<_>>());
        assert_eq!(spanned, span(&[[true, false, false, false], [false, false, true, false]]));
    }
}
