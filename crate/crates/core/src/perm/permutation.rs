use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Serialize};

use super::PermError;

/// Largest supported degree; points are stored as `u16`.
pub const MAX_DEGREE: usize = 1 << 16;

/// A permutation of `{0, .., degree-1}` stored as a flat image array.
///
/// Products are read left to right: `x^(p*q) = (x^p)^q`. Conjugation
/// `a^g` means `g^-1 * a * g`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Permutation {
    images: Box<[u16]>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        assert!(degree <= MAX_DEGREE, "degree {degree} exceeds {MAX_DEGREE}");
        Self { images: (0..degree).map(|i| i as u16).collect() }
    }

    /// Builds a permutation from 0-based images, checking bijectivity.
    pub fn from_images(images: &[usize]) -> Result<Self, PermError> {
        let n = images.len();
        if n == 0 || n > MAX_DEGREE {
            return Err(PermError::BadDegree(n));
        }
        let mut seen = vec![false; n];
        for &x in images {
            if x >= n || seen[x] {
                return Err(PermError::NotABijection);
            }
            seen[x] = true;
        }
        Ok(Self { images: images.iter().map(|&x| x as u16).collect() })
    }

    pub(crate) fn from_u16_unchecked(images: Vec<u16>) -> Self {
        Self { images: images.into_boxed_slice() }
    }

    /// Builds a permutation from 0-based disjoint cycles.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self, PermError> {
        let mut images: Vec<usize> = (0..degree).collect();
        let mut touched = vec![false; degree];
        for cycle in cycles {
            for (k, &x) in cycle.iter().enumerate() {
                if x >= degree || touched[x] {
                    return Err(PermError::NotABijection);
                }
                touched[x] = true;
                images[x] = cycle[(k + 1) % cycle.len()];
            }
        }
        Self::from_images(&images)
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn image(&self, x: usize) -> usize {
        self.images[x] as usize
    }

    #[inline]
    pub fn images(&self) -> &[u16] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    /// `self` followed by `other`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        let o = &other.images;
        Permutation { images: self.images.iter().map(|&x| o[x as usize]).collect() }
    }

    /// Writes `self * other` into `out` without allocating.
    #[inline]
    pub fn compose_into(&self, other: &Permutation, out: &mut Permutation) {
        let o = &other.images;
        for (dst, &x) in out.images.iter_mut().zip(self.images.iter()) {
            *dst = o[x as usize];
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u16; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u16;
        }
        Permutation { images: inv.into_boxed_slice() }
    }

    /// `g^-1 * self * g`.
    pub fn conjugate_by(&self, g: &Permutation) -> Permutation {
        let mut out = vec![0u16; self.degree()];
        let gi = &g.images;
        for (x, &ax) in self.images.iter().enumerate() {
            out[gi[x] as usize] = gi[ax as usize];
        }
        Permutation { images: out.into_boxed_slice() }
    }

    #[inline]
    pub fn conjugate_into(&self, g: &Permutation, out: &mut Permutation) {
        let gi = &g.images;
        for (x, &ax) in self.images.iter().enumerate() {
            out.images[gi[x] as usize] = gi[ax as usize];
        }
    }

    /// True when `g^-1 * self * g == self`, with early exit.
    pub fn commutes_with(&self, g: &Permutation) -> bool {
        let (a, b) = (&self.images, &g.images);
        (0..a.len()).all(|x| b[a[x] as usize] == a[b[x] as usize])
    }

    pub fn pow(&self, mut e: u64) -> Permutation {
        let mut base = self.clone();
        let mut acc = Permutation::identity(self.degree());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base);
            }
            base = base.compose(&base);
            e >>= 1;
        }
        acc
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.image(start);
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.image(x);
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    pub fn order(&self) -> u64 {
        self.cycles().iter().fold(1u64, |acc, c| lcm(acc, c.len() as u64))
    }

    pub fn fixed_points(&self) -> usize {
        self.images.iter().enumerate().filter(|&(i, &x)| i == x as usize).count()
    }

    pub fn is_involution(&self) -> bool {
        !self.is_identity() && self.images.iter().enumerate().all(|(i, &x)| self.images[x as usize] as usize == i)
    }

    /// 64-bit fingerprint of the image array.
    #[inline]
    pub fn fingerprint(&self) -> u64 {
        fingerprint_with(&self.images, 0x9e37_79b9_7f4a_7c15)
    }

    /// An independent second hash used to detect fingerprint collisions.
    #[inline]
    pub fn check_hash(&self) -> u64 {
        fingerprint_with(&self.images, 0xc2b2_ae3d_27d4_eb4f)
    }

    /// Smallest point moved, if any.
    pub fn first_moved(&self) -> Option<usize> {
        self.images.iter().enumerate().find(|&(i, &x)| i != x as usize).map(|(i, _)| i)
    }
}

fn fingerprint_with(images: &[u16], seed: u64) -> u64 {
    let mut h = seed ^ (images.len() as u64).wrapping_mul(0xff51_afd7_ed55_8ccd);
    for chunk in images.chunks(4) {
        let mut w = 0u64;
        for (k, &x) in chunk.iter().enumerate() {
            w |= (x as u64) << (16 * k);
        }
        h = (h ^ w).wrapping_mul(0x9fb2_1c65_1e98_df25);
        h ^= h >> 29;
    }
    h ^= h >> 32;
    h = h.wrapping_mul(0xd6e8_feb8_6659_fd93);
    h ^ (h >> 32)
}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

impl Mul for &Permutation {
    type Output = Permutation;
    fn mul(self, rhs: &Permutation) -> Permutation {
        self.compose(rhs)
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Cycle notation with 1-based points, `()` for the identity.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            write!(f, "(")?;
            for (k, x) in c.iter().enumerate() {
                if k > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", x + 1)?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_perm(n: usize) -> impl Strategy<Value = Permutation> {
        Just((0..n).collect::<Vec<usize>>())
            .prop_shuffle()
            .prop_map(|v| Permutation::from_images(&v).unwrap())
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::from_images(&[0, 0]).is_err());
        assert!(Permutation::from_images(&[0, 2]).is_err());
        assert!(Permutation::from_cycles(3, &[vec![0, 1], vec![1, 2]]).is_err());
    }

    #[test]
    fn composition_is_left_to_right() {
        let a = Permutation::from_cycles(3, &[vec![0, 1]]).unwrap();
        let b = Permutation::from_cycles(3, &[vec![1, 2]]).unwrap();
        // 0 -a-> 1 -b-> 2
        assert_eq!(a.compose(&b).image(0), 2);
        assert_eq!((&a * &b).to_string(), "(1,3,2)");
    }

    #[test]
    fn order_and_cycles() {
        let p = Permutation::from_cycles(7, &[vec![0, 1, 2], vec![3, 4]]).unwrap();
        assert_eq!(p.order(), 6);
        assert_eq!(p.fixed_points(), 2);
        assert!(p.pow(3).is_involution());
        assert!(p.pow(6).is_identity());
    }

    proptest! {
        #[test]
        fn inverse_cancels(p in arb_perm(40)) {
            prop_assert!(p.compose(&p.inverse()).is_identity());
            prop_assert!(p.inverse().compose(&p).is_identity());
        }

        #[test]
        fn conjugation_matches_products(a in arb_perm(25), g in arb_perm(25)) {
            let direct = g.inverse().compose(&a).compose(&g);
            prop_assert_eq!(a.conjugate_by(&g), direct);
            prop_assert_eq!(a.commutes_with(&g), a.compose(&g) == g.compose(&a));
        }

        #[test]
        fn fingerprint_is_a_function_of_images(p in arb_perm(30)) {
            let q = Permutation::from_images(&p.images().iter().map(|&x| x as usize).collect::<Vec<_>>()).unwrap();
            prop_assert_eq!(p.fingerprint(), q.fingerprint());
        }
    }
}
