//! Base and strong generating sets.
//!
//! Level `i` stores the strong generators fixing `b_0..b_{i-1}`, the orbit of
//! `b_i` under them, a Schreier vector, and the explicit coset
//! representatives `u` with `b_i^u = beta` together with their inverses.
//! Every group element factors uniquely as `u_{k-1} * .. * u_1 * u_0`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{PermError, Permutation};

/// Largest group order [`StabilizerChain::stream`] accepts by default.
pub const DEFAULT_STREAM_CAP: u128 = 1 << 24;

const NONE: u32 = u32::MAX;

#[derive(Clone, Debug, Serialize, Deserialize)]
struct Level {
    base: u16,
    gens: Vec<Permutation>,
    orbit: Vec<u16>,
    /// `slot[x]` is the index of `x` in `orbit`, or `NONE`.
    slot: Vec<u32>,
    /// Schreier vector: generator index that first reached each orbit point
    /// (`NONE` for the base point), parallel to `orbit`.
    via: Vec<u32>,
    reps: Vec<Permutation>,
    inv_reps: Vec<Permutation>,
}

impl Level {
    fn new(degree: usize, base: usize) -> Self {
        let id = Permutation::identity(degree);
        let mut slot = vec![NONE; degree];
        slot[base] = 0;
        Level {
            base: base as u16,
            gens: Vec::new(),
            orbit: vec![base as u16],
            slot,
            via: vec![NONE],
            reps: vec![id.clone()],
            inv_reps: vec![id],
        }
    }

    /// Closes the orbit under all generators, keeping existing representatives.
    fn close_orbit(&mut self) {
        let mut k = 0;
        // Points already present must also be hit by generators added later,
        // so every orbit point is revisited once per call.
        while k < self.orbit.len() {
            let beta = self.orbit[k] as usize;
            for (gi, g) in self.gens.iter().enumerate() {
                let gamma = g.image(beta);
                if self.slot[gamma] == NONE {
                    let rep = self.reps[k].compose(g);
                    self.slot[gamma] = self.orbit.len() as u32;
                    self.orbit.push(gamma as u16);
                    self.via.push(gi as u32);
                    self.inv_reps.push(rep.inverse());
                    self.reps.push(rep);
                }
            }
            k += 1;
        }
    }

    #[inline]
    fn inv_rep_for(&self, beta: usize) -> Option<&Permutation> {
        match self.slot[beta] {
            NONE => None,
            k => Some(&self.inv_reps[k as usize]),
        }
    }
}

/// A verified stabilizer chain.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StabilizerChain {
    degree: usize,
    levels: Vec<Level>,
}

impl StabilizerChain {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base as usize).collect()
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn orbit_lengths(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn order(&self) -> u128 {
        self.levels.iter().map(|l| l.orbit.len() as u128).product()
    }

    pub fn strong_generators(&self) -> &[Permutation] {
        self.levels.first().map(|l| l.gens.as_slice()).unwrap_or(&[])
    }

    pub fn orbit(&self, level: usize) -> &[u16] {
        &self.levels[level].orbit
    }

    /// Coset representatives of level `level`, parallel to [`Self::orbit`].
    pub fn transversal(&self, level: usize) -> &[Permutation] {
        &self.levels[level].reps
    }

    /// Schreier vector of `level`: generator index that reached each orbit point.
    pub fn schreier_vector(&self, level: usize) -> Vec<Option<usize>> {
        self.levels[level].via.iter().map(|&v| (v != NONE).then_some(v as usize)).collect()
    }

    /// Strips `g` through levels `from..`; returns the residue and the level
    /// where sifting stopped (`len()` when every level was passed).
    pub fn sift_from(&self, g: &Permutation, from: usize) -> (Permutation, usize) {
        let mut h = g.clone();
        let mut tmp = g.clone();
        for (l, level) in self.levels.iter().enumerate().skip(from) {
            let beta = h.image(level.base as usize);
            match level.inv_rep_for(beta) {
                None => return (h, l),
                Some(u) => {
                    h.compose_into(u, &mut tmp);
                    std::mem::swap(&mut h, &mut tmp);
                }
            }
        }
        (h, self.levels.len())
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        if g.degree() != self.degree {
            return false;
        }
        let (h, l) = self.sift_from(g, 0);
        l == self.levels.len() && h.is_identity()
    }

    /// A uniformly distributed element.
    pub fn random_element<R: Rng>(&self, rng: &mut R) -> Permutation {
        let mut g = Permutation::identity(self.degree);
        for level in self.levels.iter().rev() {
            let k = rng.gen_range(0..level.reps.len());
            g = g.compose(&level.reps[k]);
        }
        g
    }

    /// The element with transversal indices `idx` (outermost level first).
    pub fn element_at(&self, idx: &[usize]) -> Permutation {
        let mut g = Permutation::identity(self.degree);
        for (level, &k) in self.levels.iter().zip(idx).rev() {
            g = g.compose(&level.reps[k]);
        }
        g
    }

    /// Sequential enumeration of all elements, refusing groups above `cap`.
    pub fn stream(&self, cap: u128) -> Result<ElementStream<'_>, PermError> {
        let order = self.order();
        if order > cap {
            return Err(PermError::StreamCap { order, cap });
        }
        Ok(ElementStream::new(self, None))
    }

    /// Visits every element once, partitioned across threads by the level-0
    /// representative. `init` creates per-task state, which is reduced with
    /// `merge`.
    pub fn par_fold<S, I, F, M>(&self, cap: u128, init: I, visit: F, merge: M) -> Result<S, PermError>
    where
        S: Send,
        I: Fn() -> S + Sync + Send,
        F: Fn(&mut S, &Permutation) + Sync + Send,
        M: Fn(S, S) -> S + Sync + Send,
    {
        let order = self.order();
        if order > cap {
            return Err(PermError::StreamCap { order, cap });
        }
        if self.levels.is_empty() {
            let mut s = init();
            visit(&mut s, &Permutation::identity(self.degree));
            return Ok(s);
        }
        let top = self.levels[0].reps.len();
        Ok((0..top)
            .into_par_iter()
            .fold(&init, |mut s, k| {
                ElementStream::new(self, Some(k)).for_each_ref(|g| visit(&mut s, g));
                s
            })
            .reduce(&init, &merge))
    }

    /// Some element satisfying `test`, searching the level-0 cosets in
    /// parallel and stopping early once one is found.
    pub fn par_find<F>(&self, cap: u128, test: F) -> Result<Option<Permutation>, PermError>
    where
        F: Fn(&Permutation) -> bool + Sync + Send,
    {
        let order = self.order();
        if order > cap {
            return Err(PermError::StreamCap { order, cap });
        }
        if self.levels.is_empty() {
            let id = Permutation::identity(self.degree);
            return Ok(test(&id).then_some(id));
        }
        let top = self.levels[0].reps.len();
        Ok((0..top).into_par_iter().find_map_any(|k| ElementStream::new(self, Some(k)).find_ref(&test)))
    }
}

/// Depth-first enumeration of `u_{k-1} * .. * u_0`.
pub struct ElementStream<'a> {
    chain: &'a StabilizerChain,
    idx: Vec<usize>,
    /// `partial[l] = u_l * partial[l-1]`, with `partial[-1] = 1`.
    partial: Vec<Permutation>,
    identity: Permutation,
    top_fixed: bool,
    done: bool,
}

impl<'a> ElementStream<'a> {
    fn new(chain: &'a StabilizerChain, top: Option<usize>) -> Self {
        let k = chain.levels.len();
        let mut idx = vec![0; k];
        if let (Some(t), true) = (top, k > 0) {
            idx[0] = t;
        }
        let mut partial = Vec::with_capacity(k);
        let identity = Permutation::identity(chain.degree);
        let mut acc = identity.clone();
        for (l, level) in chain.levels.iter().enumerate() {
            acc = level.reps[idx[l]].compose(&acc);
            partial.push(acc.clone());
        }
        ElementStream { chain, idx, partial, identity, top_fixed: top.is_some(), done: false }
    }

    fn current(&self) -> &Permutation {
        self.partial.last().unwrap_or(&self.identity)
    }

    /// Moves to the next element; false once the enumeration is exhausted.
    fn advance(&mut self) -> bool {
        let floor = usize::from(self.top_fixed);
        let mut l = self.idx.len();
        loop {
            if l <= floor {
                self.done = true;
                return false;
            }
            l -= 1;
            self.idx[l] += 1;
            if self.idx[l] < self.chain.levels[l].reps.len() {
                break;
            }
            self.idx[l] = 0;
        }
        for m in l..self.idx.len() {
            let rep = &self.chain.levels[m].reps[self.idx[m]];
            if m == 0 {
                self.partial[0] = rep.clone();
            } else {
                let (lo, hi) = self.partial.split_at_mut(m);
                rep.compose_into(&lo[m - 1], &mut hi[0]);
            }
        }
        true
    }

    fn find_ref<F: Fn(&Permutation) -> bool>(mut self, test: F) -> Option<Permutation> {
        loop {
            if test(self.current()) {
                return Some(self.current().clone());
            }
            if !self.advance() {
                return None;
            }
        }
    }

    fn for_each_ref<F: FnMut(&Permutation)>(mut self, mut f: F) {
        loop {
            f(self.current());
            if !self.advance() {
                break;
            }
        }
    }
}

impl Iterator for ElementStream<'_> {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        if self.done {
            return None;
        }
        let out = self.current().clone();
        self.advance();
        Some(out)
    }
}

/// Incremental construction: random sifting, then a deterministic check of
/// every Schreier generator.
#[derive(Clone, Debug)]
pub struct ChainBuilder {
    chain: StabilizerChain,
}

impl ChainBuilder {
    pub fn new(degree: usize) -> Self {
        ChainBuilder { chain: StabilizerChain { degree, levels: Vec::new() } }
    }

    pub fn chain(&self) -> &StabilizerChain {
        &self.chain
    }

    /// Lower bound for the order of the group generated so far.
    pub fn order(&self) -> u128 {
        self.chain.order()
    }

    /// Sifts `g` and adds the residue as a strong generator if it is
    /// nontrivial. Returns whether the structure changed.
    pub fn add(&mut self, g: &Permutation) -> bool {
        let (h, level) = self.chain.sift_from(g, 0);
        if level == self.chain.levels.len() && h.is_identity() {
            return false;
        }
        self.insert_residue(h, level);
        true
    }

    fn insert_residue(&mut self, h: Permutation, level: usize) {
        let degree = self.chain.degree;
        if level == self.chain.levels.len() {
            let base = choose_base_point(&h);
            self.chain.levels.push(Level::new(degree, base));
        }
        for l in 0..=level {
            self.chain.levels[l].gens.push(h.clone());
            self.chain.levels[l].close_orbit();
        }
    }

    /// Random phase driven by product replacement on `gens`, stopping after
    /// `patience` consecutive random elements sift to the identity or once
    /// the order reaches `target`.
    pub fn randomize(&mut self, gens: &[Permutation], seed: u64, patience: usize, target: Option<u128>) {
        for g in gens {
            self.add(g);
        }
        if gens.is_empty() {
            return;
        }
        let mut pr = ProductReplacement::new(gens, seed);
        let mut quiet = 0;
        while quiet < patience {
            if target.is_some_and(|t| self.order() >= t) {
                break;
            }
            if self.add(&pr.next_element()) {
                quiet = 0;
            } else {
                quiet += 1;
            }
        }
    }

    /// Verifies all Schreier generators, adding residues until none remain.
    pub fn complete(mut self) -> StabilizerChain {
        let mut i = self.chain.levels.len();
        'levels: while i > 0 {
            let lvl = i - 1;
            let level = &self.chain.levels[lvl];
            let n_orbit = level.orbit.len();
            let n_gens = level.gens.len();
            for k in 0..n_orbit {
                for gi in 0..n_gens {
                    let level = &self.chain.levels[lvl];
                    let s = &level.gens[gi];
                    let beta = level.orbit[k] as usize;
                    let target = s.image(beta);
                    let t = level.slot[target];
                    // Schreier generator u_beta * s * u_{beta^s}^-1
                    let sg = level.reps[k].compose(s).compose(&level.inv_reps[t as usize]);
                    if sg.is_identity() {
                        continue;
                    }
                    let (h, stop) = self.chain.sift_from(&sg, lvl + 1);
                    if stop < self.chain.levels.len() || !h.is_identity() {
                        self.insert_residue(h, stop);
                        i = stop + 1;
                        continue 'levels;
                    }
                }
            }
            i -= 1;
        }
        self.chain
    }
}

/// Greedy base choice: a point in the largest cycle of `h`.
fn choose_base_point(h: &Permutation) -> usize {
    h.cycles()
        .into_iter()
        .max_by_key(|c| (c.len(), std::cmp::Reverse(c[0])))
        .map(|c| c[0])
        .expect("residue is not the identity")
}

/// Product-replacement random elements with a seeded generator.
pub(crate) struct ProductReplacement {
    slots: Vec<Permutation>,
    acc: Permutation,
    rng: ChaCha8Rng,
}

impl ProductReplacement {
    pub(crate) fn new(gens: &[Permutation], seed: u64) -> Self {
        let mut slots: Vec<Permutation> = gens.to_vec();
        while slots.len() < 10 {
            slots.push(gens[slots.len() % gens.len()].clone());
        }
        let acc = Permutation::identity(gens[0].degree());
        let mut pr = ProductReplacement { slots, acc, rng: ChaCha8Rng::seed_from_u64(seed) };
        for _ in 0..50 {
            pr.next_element();
        }
        pr
    }

    pub(crate) fn next_element(&mut self) -> Permutation {
        let n = self.slots.len();
        let i = self.rng.gen_range(0..n);
        let mut j = self.rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let s = if self.rng.gen_bool(0.5) { self.slots[j].clone() } else { self.slots[j].inverse() };
        self.slots[i] = if self.rng.gen_bool(0.5) { self.slots[i].compose(&s) } else { s.compose(&self.slots[i]) };
        self.acc = self.acc.compose(&self.slots[i]);
        self.acc.clone()
    }
}

/// Builds a verified chain for the group generated by `gens`.
pub fn schreier_sims(gens: &[Permutation], seed: u64) -> Result<StabilizerChain, PermError> {
    let degree = check_degrees(gens)?;
    let mut b = ChainBuilder::new(degree);
    b.randomize(gens, seed, 40, None);
    Ok(b.complete())
}

pub(crate) fn check_degrees(gens: &[Permutation]) -> Result<usize, PermError> {
    let first = gens.first().ok_or(PermError::NoGenerators)?;
    let n = first.degree();
    for g in gens {
        if g.degree() != n {
            return Err(PermError::DegreeMismatch(n, g.degree()));
        }
    }
    Ok(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn cyc(n: usize, cycles: &[&[usize]]) -> Permutation {
        Permutation::from_cycles(n, &cycles.iter().map(|c| c.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn symmetric_group_orders() {
        let s4 = schreier_sims(&[cyc(4, &[&[0, 1]]), cyc(4, &[&[0, 1, 2, 3]])], 1).unwrap();
        assert_eq!(s4.order(), 24);
        let c3 = schreier_sims(&[cyc(3, &[&[0, 1, 2]])], 1).unwrap();
        assert_eq!(c3.order(), 3);
        let s9 = schreier_sims(&[cyc(9, &[&[0, 1]]), cyc(9, &[&[0, 1, 2, 3, 4, 5, 6, 7, 8]])], 7).unwrap();
        assert_eq!(s9.order(), 362_880);
    }

    #[test]
    fn degree_mismatch_is_an_error() {
        let err = schreier_sims(&[cyc(3, &[&[0, 1]]), cyc(4, &[&[0, 1]])], 1).unwrap_err();
        assert!(matches!(err, PermError::DegreeMismatch(3, 4)));
    }

    #[test]
    fn stream_visits_each_element_once() {
        let s3 = schreier_sims(&[cyc(3, &[&[0, 1]]), cyc(3, &[&[0, 1, 2]])], 3).unwrap();
        let all: Vec<_> = s3.stream(DEFAULT_STREAM_CAP).unwrap().collect();
        assert_eq!(all.len(), 6);
        assert_eq!(all.iter().collect::<HashSet<_>>().len(), 6);

        let trivial = schreier_sims(&[Permutation::identity(5)], 3).unwrap();
        assert_eq!(trivial.stream(DEFAULT_STREAM_CAP).unwrap().count(), 1);

        let s6 = schreier_sims(&[cyc(6, &[&[0, 1]]), cyc(6, &[&[0, 1, 2, 3, 4, 5]])], 3).unwrap();
        let seq: HashSet<_> = s6.stream(DEFAULT_STREAM_CAP).unwrap().collect();
        assert_eq!(seq.len(), 720);
        let par = s6
            .par_fold(DEFAULT_STREAM_CAP, Vec::new, |v, g| v.push(g.clone()), |mut a, b| {
                a.extend(b);
                a
            })
            .unwrap();
        assert_eq!(par.into_iter().collect::<HashSet<_>>(), seq);
    }

    #[test]
    fn par_find_stops_on_a_match() {
        let s6 = schreier_sims(&[cyc(6, &[&[0, 1]]), cyc(6, &[&[0, 1, 2, 3, 4, 5]])], 3).unwrap();
        let six = s6.par_find(DEFAULT_STREAM_CAP, |g| g.order() == 6).unwrap().unwrap();
        assert_eq!(six.order(), 6);
        assert!(s6.par_find(DEFAULT_STREAM_CAP, |g| g.order() == 7).unwrap().is_none());
    }

    #[test]
    fn stream_cap_is_enforced() {
        let s6 = schreier_sims(&[cyc(6, &[&[0, 1]]), cyc(6, &[&[0, 1, 2, 3, 4, 5]])], 3).unwrap();
        assert!(matches!(s6.stream(100), Err(PermError::StreamCap { order: 720, cap: 100 })));
    }

    #[test]
    fn membership_and_random_words() {
        // M11 would be nicer; PSL(2,7) on 8 points is enough here.
        let a = cyc(8, &[&[0, 1, 2, 3, 4, 5, 6]]);
        let b = cyc(8, &[&[0, 7], &[1, 6], &[2, 3], &[4, 5]]);
        let chain = schreier_sims(&[a.clone(), b.clone()], 11).unwrap();
        assert_eq!(chain.order(), 168);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut w = Permutation::identity(8);
        for _ in 0..1000 {
            w = w.compose(if rng.gen_bool(0.5) { &a } else { &b });
            assert!(chain.contains(&w));
        }
        assert!(!chain.contains(&cyc(8, &[&[0, 1]])));
    }

    #[test]
    fn order_is_independent_of_seed() {
        let gens = [cyc(10, &[&[0, 1, 2, 3, 4]]), cyc(10, &[&[4, 5, 6, 7, 8, 9]]), cyc(10, &[&[0, 9]])];
        let orders: HashSet<u128> = (0..8).map(|s| schreier_sims(&gens, s).unwrap().order()).collect();
        assert_eq!(orders.len(), 1);
    }
}
