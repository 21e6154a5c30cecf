use std::sync::OnceLock;

use rand::Rng;

use super::chain::{check_degrees, schreier_sims, ChainBuilder};
use super::{PermError, Permutation, StabilizerChain};

/// A permutation group given by generators, with a lazily built chain.
#[derive(Debug)]
pub struct GroupHandle {
    degree: usize,
    generators: Vec<Permutation>,
    seed: u64,
    chain: OnceLock<StabilizerChain>,
}

impl Clone for GroupHandle {
    fn clone(&self) -> Self {
        let chain = OnceLock::new();
        if let Some(c) = self.chain.get() {
            let _ = chain.set(c.clone());
        }
        GroupHandle { degree: self.degree, generators: self.generators.clone(), seed: self.seed, chain }
    }
}

impl GroupHandle {
    /// Generators may be empty only through [`GroupHandle::trivial`].
    pub fn new(generators: Vec<Permutation>, seed: u64) -> Result<Self, PermError> {
        let degree = check_degrees(&generators)?;
        Ok(GroupHandle { degree, generators, seed, chain: OnceLock::new() })
    }

    pub fn trivial(degree: usize) -> Self {
        GroupHandle { degree, generators: Vec::new(), seed: 0, chain: OnceLock::new() }
    }

    /// Wraps an already verified chain.
    pub fn from_chain(generators: Vec<Permutation>, chain: StabilizerChain) -> Self {
        let degree = chain.degree();
        let cell = OnceLock::new();
        let _ = cell.set(chain);
        GroupHandle { degree, generators, seed: 0, chain: cell }
    }

    /// Builds the chain from `generators`, stopping the random phase once
    /// `order` is reached. The result is still verified.
    pub fn with_known_order(generators: Vec<Permutation>, order: u128, seed: u64) -> Result<Self, PermError> {
        let degree = check_degrees(&generators)?;
        let mut b = ChainBuilder::new(degree);
        b.randomize(&generators, seed, 40, Some(order));
        Ok(Self::from_chain(generators, b.complete()))
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn chain(&self) -> &StabilizerChain {
        self.chain.get_or_init(|| {
            if self.generators.is_empty() {
                ChainBuilder::new(self.degree).complete()
            } else {
                schreier_sims(&self.generators, self.seed).expect("degrees checked at construction")
            }
        })
    }

    pub fn order(&self) -> u128 {
        self.chain().order()
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        self.chain().contains(g)
    }

    pub fn random_element<R: Rng>(&self, rng: &mut R) -> Permutation {
        self.chain().random_element(rng)
    }

    pub fn identity(&self) -> Permutation {
        Permutation::identity(self.degree)
    }

    /// True when every generator of `other` lies in `self`.
    pub fn contains_group(&self, other: &GroupHandle) -> bool {
        other.generators.iter().all(|g| self.contains(g))
    }

    /// True when every generator of `self` conjugates `other` into itself.
    pub fn normalizes(&self, other: &GroupHandle) -> bool {
        self.generators.iter().all(|h| other.generators.iter().all(|r| other.contains(&r.conjugate_by(h))))
    }

    /// `self^g`.
    pub fn conjugate_by(&self, g: &Permutation) -> GroupHandle {
        let gens = self.generators.iter().map(|x| x.conjugate_by(g)).collect();
        GroupHandle { degree: self.degree, generators: gens, seed: self.seed, chain: OnceLock::new() }
    }

    /// Orbit of `point` under the generators.
    pub fn orbit(&self, point: usize) -> Vec<usize> {
        let mut seen = vec![false; self.degree];
        seen[point] = true;
        let mut orbit = vec![point];
        let mut k = 0;
        while k < orbit.len() {
            for g in &self.generators {
                let y = g.image(orbit[k]);
                if !seen[y] {
                    seen[y] = true;
                    orbit.push(y);
                }
            }
            k += 1;
        }
        orbit
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lazy_chain_and_queries() {
        let a = Permutation::from_cycles(5, &[vec![0, 1, 2, 3, 4]]).unwrap();
        let b = Permutation::from_cycles(5, &[vec![1, 4], vec![2, 3]]).unwrap();
        let d10 = GroupHandle::new(vec![a.clone(), b], 1).unwrap();
        assert_eq!(d10.order(), 10);
        assert_eq!(d10.orbit(0).len(), 5);
        let c5 = GroupHandle::new(vec![a], 1).unwrap();
        assert!(d10.contains_group(&c5));
        assert!(d10.normalizes(&c5));
        assert!(!c5.contains_group(&d10));
        assert_eq!(GroupHandle::trivial(5).order(), 1);
    }

    #[test]
    fn known_order_shortcut_still_verifies() {
        let a = Permutation::from_cycles(6, &[vec![0, 1]]).unwrap();
        let b = Permutation::from_cycles(6, &[vec![0, 1, 2, 3, 4, 5]]).unwrap();
        let s6 = GroupHandle::with_known_order(vec![a, b], 720, 2).unwrap();
        assert_eq!(s6.order(), 720);
    }
}
