//! Calibration of the 276-point action: order check, the two involution
//! classes by fixed-point signature, the 2A class orbit and `C_G(z)`.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use super::{Co3Error, CO3_ORDER};
use crate::perm::{
    centralizer_from_class, write_generators, CacheDir, ClassIndex, ClassStorage, GeneratorFormat, GroupHandle,
    Permutation,
};

pub const DEGREE: usize = 276;
pub const CLASS_2A_SIZE: usize = 170_775;
pub const CLASS_2B_SIZE: usize = 2_608_200;
pub const CENTRALIZER_2A: u128 = 2_903_040;
pub const CENTRALIZER_2B: u128 = 190_080;

/// How many random involutions are sampled for class signatures.
const INVOLUTION_SAMPLES: usize = 400;

#[derive(Clone, Debug)]
pub struct Co3Config {
    pub seed: u64,
    pub cache: Option<CacheDir>,
    /// Enumerate the 2B class (2.6M elements, fingerprints only).
    pub enumerate_2b: bool,
}

impl Default for Co3Config {
    fn default() -> Self {
        Co3Config { seed: 1, cache: None, enumerate_2b: false }
    }
}

/// The calibrated group. Immutable once built.
#[derive(Debug)]
pub struct Co3Context {
    pub group: GroupHandle,
    /// SHA-256 of the generators in canonical cycle notation; cache key.
    pub digest: String,
    pub seed: u64,
    pub cache: Option<CacheDir>,
    /// The fixed 2A involution; representative of `class2a`.
    pub z: Permutation,
    pub class2a: ClassIndex,
    pub cz: GroupHandle,
    pub rep2b: Permutation,
    pub class2b: Option<ClassIndex>,
    pub fixed_points_2a: usize,
    pub fixed_points_2b: usize,
    /// Fixed-point count of each sampled involution, with multiplicity.
    pub sampled_signatures: BTreeMap<usize, usize>,
    pub cache_hits: usize,
}

/// Canonical digest of a generator list.
pub fn generator_digest(gens: &[Permutation]) -> String {
    hex::encode(Sha256::digest(write_generators(gens, GeneratorFormat::Cycles).as_bytes()))
}

fn load_or_enumerate(
    cache: Option<&CacheDir>,
    digest: &str,
    name: &str,
    hits: &mut usize,
    make: impl FnOnce() -> Result<ClassIndex, Co3Error>,
) -> Result<ClassIndex, Co3Error> {
    if let Some(idx) = cache.and_then(|c| ClassIndex::from_cache(c, digest, name)) {
        *hits += 1;
        return Ok(idx);
    }
    let idx = make()?;
    if let Some(c) = cache {
        c.store(digest, name, &idx)?;
    }
    Ok(idx)
}

impl Co3Context {
    pub fn calibrate(gens: Vec<Permutation>, config: &Co3Config) -> Result<Self, Co3Error> {
        if gens.is_empty() || gens[0].degree() != DEGREE {
            return Err(Co3Error::WrongDegree(gens.first().map_or(0, |g| g.degree())));
        }
        let digest = generator_digest(&gens);
        let group = GroupHandle::new(gens, config.seed)?;
        if group.order() != CO3_ORDER {
            return Err(Co3Error::WrongOrder(group.order()));
        }

        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let mut sampled: BTreeMap<usize, usize> = BTreeMap::new();
        let mut first: BTreeMap<usize, Permutation> = BTreeMap::new();
        let mut found = 0;
        while found < INVOLUTION_SAMPLES {
            let g = group.random_element(&mut rng);
            let o = g.order();
            if o % 2 == 1 {
                continue;
            }
            let t = g.pow(o / 2);
            let f = t.fixed_points();
            *sampled.entry(f).or_default() += 1;
            first.entry(f).or_insert(t);
            found += 1;
        }
        if sampled.len() != 2 {
            return Err(Co3Error::InvolutionClasses(sampled.keys().copied().collect()));
        }

        // The 2A class is the one whose orbit closes below the 2B size.
        let cache = config.cache.as_ref();
        let mut hits = 0;
        let mut class2a = None;
        for (&f, t) in first.iter().rev() {
            let attempt = load_or_enumerate(cache, &digest, &format!("class2a-{f}"), &mut hits, || {
                Ok(ClassIndex::enumerate(&group, t, 2 * CLASS_2A_SIZE, ClassStorage::Full)?)
            });
            if let Ok(idx) = attempt {
                class2a = Some((f, idx));
                break;
            }
        }
        let (fixed_points_2a, class2a) =
            class2a.ok_or_else(|| Co3Error::Inconsistent("no involution class fits the 2A bound".into()))?;
        if class2a.len() != CLASS_2A_SIZE {
            return Err(Co3Error::Inconsistent(format!("2A class has {} elements", class2a.len())));
        }
        let fixed_points_2b = *sampled.keys().find(|&&f| f != fixed_points_2a).expect("two signatures");
        let rep2b = first[&fixed_points_2b].clone();
        let z = class2a.representative().clone();
        let cz = centralizer_from_class(&class2a, config.seed)?;

        let class2b = if config.enumerate_2b {
            Some(load_or_enumerate(cache, &digest, &format!("class2b-{fixed_points_2b}"), &mut hits, || {
                Ok(ClassIndex::enumerate(&group, &rep2b, CLASS_2B_SIZE + 1, ClassStorage::Fingerprint)?)
            })?)
        } else {
            None
        };

        Ok(Co3Context {
            group,
            digest,
            seed: config.seed,
            cache: config.cache.clone(),
            z,
            class2a,
            cz,
            rep2b,
            class2b,
            fixed_points_2a,
            fixed_points_2b,
            sampled_signatures: sampled,
            cache_hits: hits,
        })
    }

    /// Whether `g` is a 2A involution (exact, by class lookup).
    pub fn is_2a(&self, g: &Permutation) -> bool {
        self.class2a.contains(g)
    }

    /// Involution class by fixed-point signature: `Some(true)` for 2A,
    /// `Some(false)` for 2B, `None` for non-involutions.
    pub fn classify_involution(&self, g: &Permutation) -> Option<bool> {
        if !g.is_involution() {
            return None;
        }
        let f = g.fixed_points();
        (f == self.fixed_points_2a || f == self.fixed_points_2b).then_some(f == self.fixed_points_2a)
    }

    /// Index of a 2A element in `class2a`.
    pub fn point_index(&self, g: &Permutation) -> Option<u32> {
        self.class2a.index_of(g).map(|k| k as u32)
    }

    pub fn point(&self, k: u32) -> Permutation {
        self.class2a.element(k as usize)
    }

    /// Centralizer order of the 2B class: from the enumerated orbit when
    /// available, otherwise `None`.
    pub fn centralizer_2b(&self) -> Option<u128> {
        self.class2b.as_ref().map(|c| c.centralizer_order())
    }
}

/// `a` and `b` commute, as raw image arrays.
#[inline]
pub fn images_commute(a: &[u16], b: &[u16]) -> bool {
    a.iter().zip(b).all(|(&x, &y)| a[y as usize] == b[x as usize])
}
