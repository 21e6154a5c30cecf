use std::collections::{HashMap, VecDeque};

use crate::perm::{GroupHandle, Permutation};

use super::RadicalError;

/// A set of element indices of a [`FiniteGroup`], packed as bits.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Subgroup {
    bits: Vec<u64>,
    order: usize,
}

impl Subgroup {
    fn empty(n: usize) -> Self {
        Subgroup { bits: vec![0; n.div_ceil(64)], order: 0 }
    }

    /// Set of the given indices (not checked for closure).
    pub fn from_indices(n: usize, elems: impl IntoIterator<Item = u32>) -> Self {
        let mut s = Self::empty(n);
        for e in elems {
            s.insert(e);
        }
        s
    }

    fn insert(&mut self, e: u32) -> bool {
        let (w, b) = (e as usize / 64, e % 64);
        let fresh = self.bits[w] >> b & 1 == 0;
        if fresh {
            self.bits[w] |= 1 << b;
            self.order += 1;
        }
        fresh
    }

    #[inline]
    pub fn contains(&self, e: u32) -> bool {
        self.bits[e as usize / 64] >> (e % 64) & 1 == 1
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.bits.iter().enumerate().flat_map(|(w, &word)| {
            let mut x = word;
            std::iter::from_fn(move || {
                if x == 0 {
                    return None;
                }
                let b = x.trailing_zeros();
                x &= x - 1;
                Some(w as u32 * 64 + b)
            })
        })
    }

    pub fn is_subset(&self, other: &Subgroup) -> bool {
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    pub fn intersect(&self, other: &Subgroup) -> Subgroup {
        let bits: Vec<u64> = self.bits.iter().zip(&other.bits).map(|(a, b)| a & b).collect();
        let order = bits.iter().map(|w| w.count_ones() as usize).sum();
        Subgroup { bits, order }
    }
}

/// An explicitly enumerated permutation group with element indices, a
/// multiplication table for small orders and per-element orders.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    name: String,
    elems: Vec<Permutation>,
    index: HashMap<Permutation, u32>,
    table: Option<Vec<u32>>,
    inv: Vec<u32>,
    orders: Vec<u32>,
    gens: Vec<u32>,
    identity: u32,
}

const TABLE_LIMIT: usize = 4096;

impl FiniteGroup {
    /// Enumerates `group`, refusing orders above `cap`.
    pub fn from_handle(name: &str, group: &GroupHandle, cap: u128) -> Result<Self, RadicalError> {
        let order = group.order();
        if order > cap {
            return Err(RadicalError::Cap { order, cap });
        }
        let elems: Vec<Permutation> = group.chain().stream(cap)?.collect();
        let index: HashMap<Permutation, u32> = elems.iter().enumerate().map(|(i, g)| (g.clone(), i as u32)).collect();
        let n = elems.len();
        let table = (n <= TABLE_LIMIT).then(|| {
            let mut t = vec![0u32; n * n];
            for (a, x) in elems.iter().enumerate() {
                for (b, y) in elems.iter().enumerate() {
                    t[a * n + b] = index[&x.compose(y)];
                }
            }
            t
        });
        let inv = elems.iter().map(|g| index[&g.inverse()]).collect();
        let orders = elems.iter().map(|g| g.order() as u32).collect();
        let gens = group.generators().iter().map(|g| index[g]).collect();
        let identity = index[&Permutation::identity(group.degree())];
        Ok(FiniteGroup { name: name.to_string(), elems, index, table, inv, orders, gens, identity })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn element(&self, i: u32) -> &Permutation {
        &self.elems[i as usize]
    }

    pub fn index_of(&self, g: &Permutation) -> Option<u32> {
        self.index.get(g).copied()
    }

    pub fn identity(&self) -> u32 {
        self.identity
    }

    pub fn generators(&self) -> &[u32] {
        &self.gens
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        match &self.table {
            Some(t) => t[a as usize * self.elems.len() + b as usize],
            None => self.index[&self.elems[a as usize].compose(&self.elems[b as usize])],
        }
    }

    pub fn inv(&self, a: u32) -> u32 {
        self.inv[a as usize]
    }

    /// `g^-1 a g`.
    pub fn conj(&self, a: u32, g: u32) -> u32 {
        self.mul(self.mul(self.inv(g), a), g)
    }

    pub fn elem_order(&self, a: u32) -> u32 {
        self.orders[a as usize]
    }

    pub fn commute(&self, a: u32, b: u32) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup::from_indices(self.len(), 0..self.len() as u32)
    }

    pub fn trivial(&self) -> Subgroup {
        Subgroup::from_indices(self.len(), [self.identity])
    }

    /// Subgroup generated by `gens`.
    pub fn closure(&self, gens: &[u32]) -> Subgroup {
        let mut s = self.trivial();
        let mut list = vec![self.identity];
        let mut k = 0;
        while k < list.len() {
            let x = list[k];
            for &g in gens {
                let y = self.mul(x, g);
                if s.insert(y) {
                    list.push(y);
                }
            }
            k += 1;
        }
        s
    }

    /// `H^g`.
    pub fn conjugate(&self, h: &Subgroup, g: u32) -> Subgroup {
        Subgroup::from_indices(self.len(), h.iter().map(|x| self.conj(x, g)))
    }

    pub fn normalizes(&self, g: u32, h: &Subgroup) -> bool {
        h.iter().all(|x| h.contains(self.conj(x, g)))
    }

    /// `N_W(H)` by testing every element of `W`.
    pub fn normalizer_in(&self, h: &Subgroup, within: &Subgroup) -> Subgroup {
        Subgroup::from_indices(self.len(), within.iter().filter(|&g| self.normalizes(g, h)))
    }

    /// `N_G(H)` as the stabilizer in the conjugation action, generated by
    /// Schreier generators along the orbit of `H`.
    pub fn normalizer_by_generation(&self, h: &Subgroup) -> Subgroup {
        let mut rep: HashMap<Subgroup, u32> = HashMap::from([(h.clone(), self.identity)]);
        let mut queue = VecDeque::from([h.clone()]);
        let mut schreier = Vec::new();
        while let Some(k) = queue.pop_front() {
            let t = rep[&k];
            for &g in &self.gens {
                let img = self.conjugate(&k, g);
                let tg = self.mul(t, g);
                match rep.get(&img) {
                    Some(&u) => schreier.push(self.mul(tg, self.inv(u))),
                    None => {
                        rep.insert(img.clone(), tg);
                        queue.push_back(img);
                    }
                }
            }
        }
        schreier.sort_unstable();
        schreier.dedup();
        self.closure(&schreier)
    }

    pub fn centralizer_in(&self, h: &Subgroup, within: &Subgroup) -> Subgroup {
        Subgroup::from_indices(self.len(), within.iter().filter(|&g| h.iter().all(|x| self.commute(g, x))))
    }

    pub fn center(&self, h: &Subgroup) -> Subgroup {
        self.centralizer_in(h, h)
    }

    pub fn is_abelian(&self, h: &Subgroup) -> bool {
        self.center(h).order() == h.order()
    }

    pub fn is_elementary_abelian(&self, h: &Subgroup, p: u32) -> bool {
        self.is_abelian(h) && h.iter().all(|x| x == self.identity || self.elem_order(x) == p)
    }

    /// Index list generating `h`, chosen greedily.
    pub fn generators_of(&self, h: &Subgroup) -> Vec<u32> {
        let mut gens = Vec::new();
        let mut cur = self.trivial();
        for x in h.iter() {
            if !cur.contains(x) {
                gens.push(x);
                cur = self.closure(&gens);
            }
        }
        gens
    }

    /// A Sylow `p`-subgroup of `within`, grown one cyclic extension at a
    /// time inside successive normalizers.
    pub fn sylow(&self, within: &Subgroup, p: u32) -> Subgroup {
        let target = p_part(within.order() as u128, p);
        let mut pg = self.trivial();
        while (pg.order() as u128) < target {
            let n = self.normalizer_in(&pg, within);
            let x = n
                .iter()
                .find(|&x| !pg.contains(x) && pg.contains(pow(self, x, p)))
                .expect("Cauchy: N/P has an element of order p");
            let mut gens = self.generators_of(&pg);
            gens.push(x);
            pg = self.closure(&gens);
        }
        pg
    }

    /// `O_p(N)` as the intersection of all Sylow `p`-subgroups of `N`.
    pub fn p_core_by_sylows(&self, n: &Subgroup, p: u32) -> Subgroup {
        let s = self.sylow(n, p);
        n.iter().fold(s.clone(), |acc, g| acc.intersect(&self.conjugate(&s, g)))
    }

    /// `O_p(N)` as the set of elements whose normal closure in `N` is a
    /// `p`-group.
    pub fn p_core_by_closure(&self, n: &Subgroup, p: u32) -> Subgroup {
        let mut core = self.trivial();
        for x in n.iter() {
            if core.contains(x) || !is_p_power(self.elem_order(x) as u128, p) {
                continue;
            }
            let mut conj: Vec<u32> = n.iter().map(|g| self.conj(x, g)).collect();
            conj.sort_unstable();
            conj.dedup();
            let cl = self.closure(&conj);
            if is_p_power(cl.order() as u128, p) {
                for y in cl.iter() {
                    core.insert(y);
                }
            }
        }
        core
    }
}

fn pow(g: &FiniteGroup, x: u32, e: u32) -> u32 {
    (0..e).fold(g.identity(), |acc, _| g.mul(acc, x))
}

/// Largest power of `p` dividing `n`.
pub fn p_part(mut n: u128, p: u32) -> u128 {
    let mut out = 1;
    while n > 0 && n.is_multiple_of(p as u128) {
        n /= p as u128;
        out *= p as u128;
    }
    out
}

pub fn is_p_power(n: u128, p: u32) -> bool {
    p_part(n, p) == n
}
