//! Conjugacy-class orbits with a breadth-first Schreier tree.

use std::collections::HashMap;
use std::hash::{BuildHasherDefault, Hasher};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::chain::ChainBuilder;
use super::{CacheDir, GroupHandle, PermError, Permutation};

/// Fingerprints are already mixed, so the map hashes them as-is.
#[derive(Default, Clone, Copy)]
pub(crate) struct PassThrough(u64);

impl Hasher for PassThrough {
    fn finish(&self) -> u64 {
        self.0
    }
    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 = (self.0 << 8) | b as u64;
        }
    }
    fn write_u64(&mut self, x: u64) {
        self.0 = x;
    }
}

pub(crate) type FingerprintMap<V> = HashMap<u64, V, BuildHasherDefault<PassThrough>>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClassStorage {
    /// Every element's image array is kept.
    Full,
    /// Only fingerprints are kept; elements are rebuilt from Schreier words.
    Fingerprint,
}

const ROOT: u32 = u32::MAX;
const CHUNK: usize = 1 << 15;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassIndex {
    representative: Permutation,
    generators: Vec<Permutation>,
    group_order: u128,
    storage: ClassStorage,
    elements: Vec<u16>,
    #[serde(skip)]
    lookup: FingerprintMap<u32>,
    check: Vec<u64>,
    fingerprints: Vec<u64>,
    parent: Vec<u32>,
    via: Vec<u8>,
}

impl ClassIndex {
    /// Enumerates the conjugacy class of `rep` in `group`, failing once more
    /// than `cap` elements have been found.
    pub fn enumerate(group: &GroupHandle, rep: &Permutation, cap: usize, storage: ClassStorage) -> Result<Self, PermError> {
        if !group.contains(rep) {
            return Err(PermError::NotASubgroup);
        }
        let gens = group.generators().to_vec();
        assert!(gens.len() < 256, "at most 255 generators");
        let mut idx = ClassIndex {
            representative: rep.clone(),
            generators: gens,
            group_order: group.order(),
            storage,
            elements: Vec::new(),
            lookup: FingerprintMap::default(),
            check: Vec::new(),
            fingerprints: Vec::new(),
            parent: Vec::new(),
            via: Vec::new(),
        };
        idx.insert(rep, ROOT, 0)?;
        let mut frontier: Vec<(u32, Permutation)> = vec![(0, rep.clone())];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for chunk in frontier.chunks(CHUNK) {
                let gens = &idx.generators;
                let children: Vec<(u32, u8, Permutation, u64, u64)> = chunk
                    .par_iter()
                    .flat_map_iter(|(i, a)| {
                        gens.iter().enumerate().map(move |(gi, s)| {
                            let b = a.conjugate_by(s);
                            let (f, c) = (b.fingerprint(), b.check_hash());
                            (*i, gi as u8, b, f, c)
                        })
                    })
                    .collect();
                for (i, gi, b, f, c) in children {
                    match idx.lookup.get(&f) {
                        Some(&k) => {
                            if idx.check[k as usize] != c {
                                return Err(PermError::FingerprintCollision);
                            }
                        }
                        None => {
                            if idx.len() >= cap {
                                return Err(PermError::ClassCap { reached: idx.len(), cap });
                            }
                            let k = idx.insert_hashed(&b, f, c, i, gi);
                            next.push((k, b));
                        }
                    }
                }
            }
            frontier = next;
        }
        Ok(idx)
    }

    fn insert(&mut self, p: &Permutation, parent: u32, via: u8) -> Result<u32, PermError> {
        Ok(self.insert_hashed(p, p.fingerprint(), p.check_hash(), parent, via))
    }

    fn insert_hashed(&mut self, p: &Permutation, f: u64, c: u64, parent: u32, via: u8) -> u32 {
        let k = self.parent.len() as u32;
        self.lookup.insert(f, k);
        self.fingerprints.push(f);
        self.check.push(c);
        self.parent.push(parent);
        self.via.push(via);
        if self.storage == ClassStorage::Full {
            self.elements.extend_from_slice(p.images());
        }
        k
    }

    fn rebuild_lookup(&mut self) {
        self.lookup = self.fingerprints.iter().enumerate().map(|(k, &f)| (f, k as u32)).collect();
    }

    /// Loads a cached index and rebuilds its lookup table.
    pub fn from_cache(cache: &CacheDir, digest: &str, name: &str) -> Option<Self> {
        let mut idx: ClassIndex = cache.load(digest, name)?;
        idx.rebuild_lookup();
        (idx.lookup.len() == idx.len()).then_some(idx)
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn representative(&self) -> &Permutation {
        &self.representative
    }

    pub fn storage(&self) -> ClassStorage {
        self.storage
    }

    pub fn group_order(&self) -> u128 {
        self.group_order
    }

    /// `|G| / |class|`.
    pub fn centralizer_order(&self) -> u128 {
        self.group_order / self.len() as u128
    }

    pub fn index_of(&self, p: &Permutation) -> Option<usize> {
        let k = *self.lookup.get(&p.fingerprint())? as usize;
        (self.check[k] == p.check_hash()).then_some(k)
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        p.degree() == self.representative.degree() && self.index_of(p).is_some()
    }

    /// Generator indices leading from the representative to element `k`.
    pub fn word(&self, mut k: usize) -> Vec<usize> {
        let mut w = Vec::new();
        while self.parent[k] != ROOT {
            w.push(self.via[k] as usize);
            k = self.parent[k] as usize;
        }
        w.reverse();
        w
    }

    /// `g` with `rep^g` equal to element `k`.
    pub fn transversal_element(&self, k: usize) -> Permutation {
        let mut g = Permutation::identity(self.representative.degree());
        for s in self.word(k) {
            g = g.compose(&self.generators[s]);
        }
        g
    }

    pub fn element(&self, k: usize) -> Permutation {
        match self.storage {
            ClassStorage::Full => {
                let n = self.representative.degree();
                Permutation::from_u16_unchecked(self.elements[k * n..(k + 1) * n].to_vec())
            }
            ClassStorage::Fingerprint => self.representative.conjugate_by(&self.transversal_element(k)),
        }
    }

    /// Image array of element `k`; only available with full storage.
    pub fn element_images(&self, k: usize) -> Option<&[u16]> {
        let n = self.representative.degree();
        (self.storage == ClassStorage::Full).then(|| &self.elements[k * n..(k + 1) * n])
    }

    /// Returns `g` with `rep^g = target`.
    pub fn conjugating_element(&self, target: &Permutation) -> Result<Permutation, PermError> {
        let k = self.index_of(target).ok_or(PermError::NotInOrbit)?;
        Ok(self.transversal_element(k))
    }

    /// A random Schreier generator of the centralizer of the representative.
    fn random_schreier_generator<R: Rng>(&self, rng: &mut R) -> Permutation {
        let k = rng.gen_range(0..self.len());
        let s = rng.gen_range(0..self.generators.len());
        let b = self.element(k).conjugate_by(&self.generators[s]);
        let j = self.index_of(&b).expect("class is closed under conjugation");
        self.transversal_element(k).compose(&self.generators[s]).compose(&self.transversal_element(j).inverse())
    }
}

/// Generators of `C_G(rep)` from random Schreier generators, stopping when
/// the order reaches `|G| / |class|`.
pub fn centralizer_from_class(idx: &ClassIndex, seed: u64) -> Result<GroupHandle, PermError> {
    let target = idx.centralizer_order();
    let n = idx.representative.degree();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut builder = ChainBuilder::new(n);
    let mut gens = Vec::new();
    let mut attempts = 0;
    while builder.order() < target {
        attempts += 1;
        if attempts > 100_000 {
            return Err(PermError::NotASubgroup);
        }
        let g = idx.random_schreier_generator(&mut rng);
        if builder.add(&g) {
            gens.push(g);
        }
    }
    if gens.is_empty() {
        return Ok(GroupHandle::trivial(n));
    }
    let chain = builder.complete();
    debug_assert_eq!(chain.order(), target);
    Ok(GroupHandle::from_chain(gens, chain))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s4() -> GroupHandle {
        let a = Permutation::from_cycles(4, &[vec![0, 1]]).unwrap();
        let b = Permutation::from_cycles(4, &[vec![0, 1, 2, 3]]).unwrap();
        GroupHandle::new(vec![a, b], 1).unwrap()
    }

    #[test]
    fn transposition_class() {
        let g = s4();
        let t = Permutation::from_cycles(4, &[vec![0, 1]]).unwrap();
        for storage in [ClassStorage::Full, ClassStorage::Fingerprint] {
            let idx = ClassIndex::enumerate(&g, &t, 100, storage).unwrap();
            assert_eq!(idx.len(), 6);
            assert_eq!(idx.centralizer_order(), 4);
            for k in 0..idx.len() {
                let b = idx.element(k);
                let h = idx.conjugating_element(&b).unwrap();
                assert_eq!(t.conjugate_by(&h), b);
            }
            assert_eq!(t.conjugate_by(&idx.conjugating_element(&t).unwrap()), t);
            let c = centralizer_from_class(&idx, 9).unwrap();
            assert_eq!(c.order(), 4);
            assert!(c.generators().iter().all(|x| x.commutes_with(&t)));
        }
    }

    #[test]
    fn outside_orbit_and_cap() {
        let g = s4();
        let t = Permutation::from_cycles(4, &[vec![0, 1]]).unwrap();
        let idx = ClassIndex::enumerate(&g, &t, 100, ClassStorage::Full).unwrap();
        let three = Permutation::from_cycles(4, &[vec![0, 1, 2]]).unwrap();
        assert!(matches!(idx.conjugating_element(&three), Err(PermError::NotInOrbit)));
        let err = ClassIndex::enumerate(&g, &t, 3, ClassStorage::Full).unwrap_err();
        assert!(matches!(err, PermError::ClassCap { reached: 3, cap: 3 }));
    }
}
