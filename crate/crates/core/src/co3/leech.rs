//! Co3 on 276 points, built from the Leech lattice.
//!
//! Coordinates are scaled by `sqrt 8`, so minimal vectors have squared
//! length 32. Co3 is the stabilizer in Co0 of `v = (1^23, 5)` (the 5 sits on
//! the coordinate `oo`), and it permutes the 276 pairs `{w, v - w}` of
//! minimal vectors with `w.v = 24`.
//!
//! The coordinates are the projective line over F_23, indices `0..23` for
//! the field and 23 for `oo`. The Golay code is the extended quadratic
//! residue code, preserved by PSL(2,23). Generators are the affine maps
//! `x -> x+1`, `x -> 2x` together with elements `m2^-1 xi m1`, where `xi`
//! is a non-monomial element of Co0 attached to a sextet and `m1`, `m2` are
//! monomial maps sending `v` to vectors `u` and `xi(u)` of the same shape.

use std::collections::{HashMap, HashSet};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::perm::{ChainBuilder, GroupHandle, Permutation};

/// `|Co3|`.
pub const CO3_ORDER: u128 = 495_766_656_000;
pub const OO: usize = 23;
const P: usize = 23;

type Vector = [i32; 24];

#[derive(Debug, Error)]
pub enum LeechError {
    #[error("no quadratic residue code variant has the Golay weight distribution")]
    NoGolayCode,
    #[error("PSL(2,23) generator does not preserve the code")]
    CodeNotInvariant,
    #[error("no sextet element preserves the minimal vectors")]
    NoSextetElement,
    #[error("constructed generators give order {0}, not |Co3|")]
    WrongOrder(u128),
    #[error("internal check failed: {0}")]
    Internal(&'static str),
}

/// The extended binary Golay code as 24-bit masks.
pub struct GolayCode {
    words: Vec<u32>,
    member: Vec<u64>,
}

impl GolayCode {
    pub fn words(&self) -> &[u32] {
        &self.words
    }

    #[inline]
    pub fn contains(&self, w: u32) -> bool {
        (self.member[(w >> 6) as usize] >> (w & 63)) & 1 == 1
    }

    pub fn octads(&self) -> Vec<u32> {
        self.words.iter().copied().filter(|w| w.count_ones() == 8).collect()
    }

    pub fn weight_distribution(&self) -> [usize; 25] {
        let mut d = [0; 25];
        for w in &self.words {
            d[w.count_ones() as usize] += 1;
        }
        d
    }

    fn from_basis(basis: &[u32]) -> Self {
        let mut reduced: Vec<u32> = Vec::new();
        for &b in basis {
            let mut x = b;
            for &r in &reduced {
                x = x.min(x ^ r);
            }
            if x != 0 {
                reduced.push(x);
                reduced.sort_unstable_by(|a, b| b.cmp(a));
            }
        }
        let mut words: Vec<u32> = (0u32..1 << reduced.len())
            .map(|mask| (0..reduced.len()).filter(|k| mask >> k & 1 == 1).fold(0, |w, k| w ^ reduced[k]))
            .collect();
        words.sort_unstable();
        let mut member = vec![0u64; 1 << 18];
        for &w in &words {
            member[(w >> 6) as usize] |= 1 << (w & 63);
        }
        GolayCode { words, member }
    }

    /// The extended quadratic residue code on the projective line over F_23.
    pub fn quadratic_residue() -> Result<Self, LeechError> {
        let squares: HashSet<usize> = (1..P).map(|x| x * x % P).collect();
        let non_squares: HashSet<usize> = (1..P).filter(|x| !squares.contains(x)).collect();
        for set in [&non_squares, &squares] {
            // Translates of {0} + set, extended by a parity bit on oo.
            let base: u32 = std::iter::once(0).chain(set.iter().copied()).fold(0, |m, i| m | 1 << i);
            let basis: Vec<u32> = (0..P)
                .map(|t| {
                    let shifted = (0..P).filter(|i| base >> i & 1 == 1).fold(0u32, |m, i| m | 1 << ((i + t) % P));
                    if shifted.count_ones() % 2 == 1 {
                        shifted | 1 << OO
                    } else {
                        shifted
                    }
                })
                .chain(std::iter::once((1u32 << 24) - 1))
                .collect();
            let code = Self::from_basis(&basis);
            let d = code.weight_distribution();
            if code.words.len() == 4096 && d[8] == 759 && d[12] == 2576 && d[16] == 759 && d[24] == 1 {
                return Ok(code);
            }
        }
        Err(LeechError::NoGolayCode)
    }
}

fn inv_mod(x: usize) -> usize {
    (1..P).find(|y| x * y % P == 1).expect("nonzero residue")
}

/// Maps on the projective line as 24-point image arrays.
pub fn translation() -> Vec<usize> {
    (0..24).map(|x| if x == OO { OO } else { (x + 1) % P }).collect()
}

pub fn doubling() -> Vec<usize> {
    (0..24).map(|x| if x == OO { OO } else { 2 * x % P }).collect()
}

pub fn negated_inversion() -> Vec<usize> {
    (0..24)
        .map(|x| match x {
            OO => 0,
            0 => OO,
            _ => (P - inv_mod(x)) % P,
        })
        .collect()
}

fn compose_maps(first: &[usize], then: &[usize]) -> Vec<usize> {
    first.iter().map(|&x| then[x]).collect()
}

/// All 6072 elements of PSL(2,23) acting on the projective line.
pub fn psl2_23() -> Vec<Vec<usize>> {
    let gens = [translation(), doubling(), negated_inversion()];
    let id: Vec<usize> = (0..24).collect();
    let mut seen: HashSet<Vec<usize>> = HashSet::from([id.clone()]);
    let mut out = vec![id];
    let mut k = 0;
    while k < out.len() {
        for g in &gens {
            let h = compose_maps(&out[k], g);
            if seen.insert(h.clone()) {
                out.push(h);
            }
        }
        k += 1;
    }
    out
}

fn permute_set(map: &[usize], w: u32) -> u32 {
    (0..24).filter(|i| w >> i & 1 == 1).fold(0, |m, i| m | 1 << map[i])
}

fn preserves_code(code: &GolayCode, map: &[usize]) -> bool {
    code.words.iter().all(|&w| code.contains(permute_set(map, w)))
}

/// Coordinate permutation: `y[map[i]] = x[i]`.
fn permute_vector(map: &[usize], x: &Vector) -> Vector {
    let mut y = [0; 24];
    for i in 0..24 {
        y[map[i]] = x[i];
    }
    y
}

fn unpermute_vector(map: &[usize], x: &Vector) -> Vector {
    let mut y = [0; 24];
    for i in 0..24 {
        y[i] = x[map[i]];
    }
    y
}

fn negate_on(set: u32, x: &Vector) -> Vector {
    let mut y = *x;
    for (i, c) in y.iter_mut().enumerate() {
        if set >> i & 1 == 1 {
            *c = -*c;
        }
    }
    y
}

fn dot(a: &Vector, b: &Vector) -> i32 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Membership in the Leech lattice (scaled coordinates).
pub fn in_leech(code: &GolayCode, x: &Vector) -> bool {
    let m = x[0].rem_euclid(2);
    if x.iter().any(|c| c.rem_euclid(2) != m) {
        return false;
    }
    let sum: i32 = x.iter().sum();
    if sum.rem_euclid(8) != (4 * m) % 8 {
        return false;
    }
    (0..4).all(|nu| {
        let set = (0..24).filter(|&i| x[i].rem_euclid(4) == nu).fold(0u32, |s, i| s | 1 << i);
        code.contains(set)
    })
}

/// All 196560 minimal vectors.
pub fn minimal_vectors(code: &GolayCode) -> Vec<Vector> {
    let mut out = Vec::with_capacity(196_560);
    for i in 0..24 {
        for j in i + 1..24 {
            for (si, sj) in [(4, 4), (4, -4), (-4, 4), (-4, -4)] {
                let mut x = [0; 24];
                x[i] = si;
                x[j] = sj;
                out.push(x);
            }
        }
    }
    for octad in code.octads() {
        let pos: Vec<usize> = (0..24).filter(|i| octad >> i & 1 == 1).collect();
        for signs in 0u32..256 {
            if signs.count_ones() % 2 == 1 {
                continue;
            }
            let mut x = [0; 24];
            for (k, &p) in pos.iter().enumerate() {
                x[p] = if signs >> k & 1 == 1 { -2 } else { 2 };
            }
            out.push(x);
        }
    }
    for k in 0..24 {
        let mut base = [1; 24];
        base[k] = -3;
        for &c in code.words() {
            out.push(negate_on(c, &base));
        }
    }
    out
}

/// The sextet containing the tetrad `t`.
pub fn sextet(code: &GolayCode, t: u32) -> Vec<u32> {
    let octads = code.octads();
    let mut tetrads = vec![t];
    let mut covered = t;
    for x in 0..24 {
        if covered >> x & 1 == 1 {
            continue;
        }
        let o = *octads.iter().find(|&&o| o & t == t && o >> x & 1 == 1).expect("five points lie in an octad");
        let other = o & !t;
        tetrads.push(other);
        covered |= other;
    }
    tetrads
}

/// `x -> (s/2) 1 - x` on each tetrad (`s` the tetrad sum), then a sign
/// change on `signs`.
fn sextet_map(tetrads: &[u32], signs: u32, x: &Vector) -> Option<Vector> {
    let mut y = [0; 24];
    for &t in tetrads {
        let idx: Vec<usize> = (0..24).filter(|i| t >> i & 1 == 1).collect();
        let s: i32 = idx.iter().map(|&i| x[i]).sum();
        if s % 2 != 0 {
            return None;
        }
        for &i in &idx {
            y[i] = s / 2 - x[i];
        }
    }
    Some(negate_on(signs, &y))
}

/// A monomial map `x -> negate_on(signs, permute(map, x))`.
#[derive(Clone)]
struct Monomial {
    map: Vec<usize>,
    signs: u32,
}

impl Monomial {
    fn apply(&self, x: &Vector) -> Vector {
        negate_on(self.signs, &permute_vector(&self.map, x))
    }
    fn apply_inverse(&self, x: &Vector) -> Vector {
        unpermute_vector(&self.map, &negate_on(self.signs, x))
    }
}

/// The permutation domain: 276 pairs `{w, v-w}`.
pub struct PairDomain {
    pub v: Vector,
    /// One representative `w` per pair, sorted.
    pub pairs: Vec<Vector>,
    index: HashMap<Vector, usize>,
}

impl PairDomain {
    pub fn new(minimal: &[Vector]) -> Self {
        let mut v = [1; 24];
        v[OO] = 5;
        let mut ws: Vec<Vector> = minimal.iter().filter(|w| dot(w, &v) == 24).copied().collect();
        ws.sort();
        let mut pairs = Vec::new();
        let mut index = HashMap::new();
        for w in &ws {
            if index.contains_key(w) {
                continue;
            }
            let mut partner = [0; 24];
            for i in 0..24 {
                partner[i] = v[i] - w[i];
            }
            let k = pairs.len();
            index.insert(*w, k);
            index.insert(partner, k);
            pairs.push(*w);
        }
        PairDomain { v, pairs, index }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// The induced permutation of a lattice map fixing `v`.
    fn induced<F: Fn(&Vector) -> Vector>(&self, f: F) -> Option<Permutation> {
        if f(&self.v) != self.v {
            return None;
        }
        let images: Option<Vec<usize>> = self.pairs.iter().map(|w| self.index.get(&f(w)).copied()).collect();
        Permutation::from_images(&images?).ok()
    }
}

/// Everything needed to produce Co3 generators.
pub struct LeechModel {
    pub code: GolayCode,
    pub minimal: Vec<Vector>,
    pub domain: PairDomain,
    tetrads: Vec<u32>,
    xi_signs: u32,
    psl: Vec<Vec<usize>>,
}

impl LeechModel {
    pub fn build() -> Result<Self, LeechError> {
        let code = GolayCode::quadratic_residue()?;
        for map in [translation(), doubling(), negated_inversion()] {
            if !preserves_code(&code, &map) {
                return Err(LeechError::CodeNotInvariant);
            }
        }
        let minimal = minimal_vectors(&code);
        if minimal.len() != 196_560 || !minimal.iter().all(|x| in_leech(&code, x)) {
            return Err(LeechError::Internal("minimal vector count"));
        }
        let set: HashSet<Vector> = minimal.iter().copied().collect();
        let first_octad = code.octads()[0];
        let tetrad = (0..24).filter(|i| first_octad >> i & 1 == 1).take(4).fold(0u32, |m, i| m | 1 << i);
        let tetrads = sextet(&code, tetrad);
        if tetrads.len() != 6 {
            return Err(LeechError::Internal("sextet"));
        }
        let xi_signs = std::iter::once(0)
            .chain(tetrads.iter().copied())
            .find(|&signs| minimal.iter().all(|x| sextet_map(&tetrads, signs, x).is_some_and(|y| set.contains(&y))))
            .ok_or(LeechError::NoSextetElement)?;
        let domain = PairDomain::new(&minimal);
        if domain.len() != 276 {
            return Err(LeechError::Internal("pair count"));
        }
        let psl = psl2_23();
        if psl.len() != 6072 {
            return Err(LeechError::Internal("PSL(2,23) order"));
        }
        Ok(LeechModel { code, minimal, domain, tetrads, xi_signs, psl })
    }

    fn xi(&self, x: &Vector) -> Vector {
        sextet_map(&self.tetrads, self.xi_signs, x).expect("lattice vector")
    }

    /// A monomial map `x -> negate_on(C, pi x)` with `pi` in PSL(2,23) and
    /// `C` a Golay word, sending `a` to `b`.
    fn monomial_between(&self, a: &Vector, b: &Vector) -> Option<Monomial> {
        for map in &self.psl {
            if (0..24).any(|i| b[map[i]].abs() != a[i].abs()) {
                continue;
            }
            let moved = permute_vector(map, a);
            let signs = (0..24).filter(|&i| moved[i] != b[i]).fold(0u32, |s, i| s | 1 << i);
            if self.code.contains(signs) {
                return Some(Monomial { map: map.clone(), signs });
            }
        }
        None
    }

    /// Vectors of shape `(+-5, +-1^23)` whose image under `xi` has shape
    /// `(+-3^3, +-1^21)`.
    fn bridging_vectors(&self) -> Vec<Vector> {
        let mut out = Vec::new();
        for k in 0..24 {
            let mut base = [1; 24];
            base[k] = 5;
            for &c in self.code.words() {
                let u = negate_on(c, &base);
                if self.xi(&u).iter().filter(|c| c.abs() == 3).count() == 3 {
                    out.push(u);
                }
            }
        }
        out
    }

    /// Elements `m3^-1 xi m2 xi m1` fixing `v`: `m1` sends `v` to `u`,
    /// `m2` sends `xi(u)` to `xi(c)` and `m3` sends `v` to `c`.
    pub fn non_monomial_elements(&self, count: usize, seed: u64) -> Vec<Permutation> {
        use rand::Rng;
        let bridges = self.bridging_vectors();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::new();
        let v = self.domain.v;
        for _ in 0..count * 20 {
            if out.len() >= count || bridges.is_empty() {
                break;
            }
            let u = bridges[rng.gen_range(0..bridges.len())];
            let c = bridges[rng.gen_range(0..bridges.len())];
            let (Some(m1), Some(m2), Some(m3)) =
                (self.monomial_between(&v, &u), self.monomial_between(&self.xi(&u), &self.xi(&c)), self.monomial_between(&v, &c))
            else {
                continue;
            };
            let f = |x: &Vector| m3.apply_inverse(&self.xi(&m2.apply(&self.xi(&m1.apply(x)))));
            if let Some(p) = self.domain.induced(f) {
                if !p.is_identity() {
                    out.push(p);
                }
            }
        }
        out
    }

    pub fn monomial_generators(&self) -> Vec<Permutation> {
        [translation(), doubling()]
            .iter()
            .filter_map(|map| self.domain.induced(|x| permute_vector(map, x)))
            .collect()
    }
}

/// Builds generators of Co3 on 276 points and reduces them to a pair whose
/// order is verified to be `|Co3|`.
pub fn co3_generators(seed: u64) -> Result<Vec<Permutation>, LeechError> {
    let model = LeechModel::build()?;
    let mut gens = model.monomial_generators();
    gens.extend(model.non_monomial_elements(4, seed));
    let full = GroupHandle::new(gens, seed).map_err(|_| LeechError::Internal("degree"))?;
    if full.order() != CO3_ORDER {
        return Err(LeechError::WrongOrder(full.order()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..200 {
        let a = full.random_element(&mut rng);
        let b = full.random_element(&mut rng);
        let mut builder = ChainBuilder::new(a.degree());
        builder.randomize(&[a.clone(), b.clone()], seed, 60, Some(CO3_ORDER));
        if builder.order() == CO3_ORDER && builder.complete().order() == CO3_ORDER {
            return Ok(vec![a, b]);
        }
    }
    Err(LeechError::Internal("no generating pair found"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golay_code_and_psl_invariance() {
        let code = GolayCode::quadratic_residue().unwrap();
        let d = code.weight_distribution();
        assert_eq!((d[0], d[8], d[12], d[16], d[24]), (1, 759, 2576, 759, 1));
        assert!(preserves_code(&code, &negated_inversion()));
        assert!(preserves_code(&code, &translation()));
    }

    #[test]
    fn sextets_have_six_tetrads() {
        let code = GolayCode::quadratic_residue().unwrap();
        let o = code.octads()[5];
        let t = (0..24).filter(|i| o >> i & 1 == 1).take(4).fold(0u32, |m, i| m | 1 << i);
        let s = sextet(&code, t);
        assert_eq!(s.len(), 6);
        assert_eq!(s.iter().fold(0, |m, x| m | x), (1 << 24) - 1);
        for a in &s {
            for b in &s {
                if a != b {
                    assert!(code.contains(a | b));
                }
            }
        }
    }

    #[test]
    fn leech_membership_by_shape() {
        let code = GolayCode::quadratic_residue().unwrap();
        let mut v = [1; 24];
        v[OO] = 5;
        assert!(in_leech(&code, &v));
        let mut bad = [0; 24];
        bad[0] = 2;
        bad[1] = 2;
        assert!(!in_leech(&code, &bad));
    }
}

