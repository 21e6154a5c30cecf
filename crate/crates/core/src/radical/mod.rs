//! p-subgroups of small groups up to conjugacy, the radical, centric and
//! distinguished tests, and the Quillen, Bouc, distinguished Bouc and
//! Benson collections.

mod collections;
mod group;
mod groups;

pub use collections::{
    benson_closure, bouc_poset, distinguished_poset, homotopy_compare, quillen_poset, BensonClosure, CollectionKind,
    CollectionPoset, HomotopyComparison,
};
pub use group::{is_p_power, p_part, FiniteGroup, Subgroup};
pub use groups::{c2, c2_squared, gl32, small_group, symmetric, SMALL_GROUPS};

use std::collections::{HashMap, HashSet, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::perm::PermError;

#[derive(Debug, Error)]
pub enum RadicalError {
    #[error("group of order {order} exceeds the brute-force cap {cap}")]
    Cap { order: u128, cap: u128 },
    #[error("unknown group {0}")]
    UnknownGroup(String),
    #[error("inconsistent computation: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Perm(#[from] PermError),
}

pub const DEFAULT_BRUTE_CAP: u128 = 1_000_000;

/// One conjugacy class of `p`-subgroups, described by a representative.
#[derive(Clone, Debug, Serialize)]
pub struct SubgroupRecord {
    pub class_id: usize,
    pub order: usize,
    pub class_size: usize,
    pub generators: Vec<String>,
    pub center_order: usize,
    pub normalizer_order: usize,
    pub centralizer_order: usize,
    pub is_radical: bool,
    pub is_centric: bool,
    pub is_distinguished: bool,
    pub is_elementary_abelian: bool,
    #[serde(skip)]
    pub representative: usize,
}

/// Every `p`-subgroup of `G` (trivial one included), with class ids.
#[derive(Clone, Debug)]
pub struct PSubgroups {
    pub p: u32,
    pub sylow: Subgroup,
    pub subgroups: Vec<Subgroup>,
    pub class_of: Vec<usize>,
    pub classes: Vec<SubgroupRecord>,
    lookup: HashMap<Subgroup, usize>,
}

impl PSubgroups {
    /// Position of an actual subgroup in `subgroups`.
    pub fn position(&self, h: &Subgroup) -> Option<usize> {
        self.lookup.get(h).copied()
    }

    pub fn class_id(&self, h: &Subgroup) -> Option<usize> {
        self.position(h).map(|i| self.class_of[i])
    }

    pub fn record_of(&self, i: usize) -> &SubgroupRecord {
        &self.classes[self.class_of[i]]
    }
}

/// Class table in serializable form.
#[derive(Clone, Debug, Serialize)]
pub struct ClassTable {
    pub group: String,
    pub order: usize,
    pub p: u32,
    pub classes: Vec<SubgroupRecord>,
}

impl PSubgroups {
    pub fn table(&self, g: &FiniteGroup) -> ClassTable {
        ClassTable { group: g.name().to_string(), order: g.len(), p: self.p, classes: self.classes.clone() }
    }
}

/// All subgroups of the `p`-group `s`: every subgroup is reached from a
/// maximal subgroup of itself by adjoining one normalizing element.
fn subgroups_of_p_group(g: &FiniteGroup, s: &Subgroup, p: u32) -> Vec<Subgroup> {
    let mut seen: HashSet<Subgroup> = HashSet::from([g.trivial()]);
    let mut queue = VecDeque::from([g.trivial()]);
    let mut out = vec![g.trivial()];
    while let Some(h) = queue.pop_front() {
        let gens = g.generators_of(&h);
        for x in s.iter().filter(|&x| !h.contains(x)) {
            let xp = (0..p).fold(g.identity(), |a, _| g.mul(a, x));
            if !h.contains(xp) || !g.normalizes(x, &h) {
                continue;
            }
            let mut gx = gens.clone();
            gx.push(x);
            let k = g.closure(&gx);
            if seen.insert(k.clone()) {
                out.push(k.clone());
                queue.push_back(k);
            }
        }
    }
    out
}

/// Enumerates the `p`-subgroups of `g` and classifies each class.
pub fn p_subgroups(g: &FiniteGroup, p: u32) -> Result<PSubgroups, RadicalError> {
    let whole = g.whole();
    let sylow = g.sylow(&whole, p);
    let mut local = subgroups_of_p_group(g, &sylow, p);
    local.sort_by_key(|h| h.order());

    let mut subgroups: Vec<Subgroup> = Vec::new();
    let mut class_of: Vec<usize> = Vec::new();
    let mut lookup: HashMap<Subgroup, usize> = HashMap::new();
    let mut reps: Vec<usize> = Vec::new();
    for h in local {
        if lookup.contains_key(&h) {
            continue;
        }
        let class = reps.len();
        reps.push(subgroups.len());
        let mut queue = VecDeque::from([h.clone()]);
        lookup.insert(h.clone(), subgroups.len());
        subgroups.push(h);
        class_of.push(class);
        while let Some(k) = queue.pop_front() {
            for &x in g.generators() {
                let img = g.conjugate(&k, x);
                if !lookup.contains_key(&img) {
                    lookup.insert(img.clone(), subgroups.len());
                    subgroups.push(img.clone());
                    class_of.push(class);
                    queue.push_back(img);
                }
            }
        }
    }

    let zs = g.center(&sylow);
    let mut distinguished_targets: HashSet<u32> = HashSet::new();
    for z in zs.iter().filter(|&z| g.elem_order(z) == p) {
        distinguished_targets.extend(whole.iter().map(|x| g.conj(z, x)));
    }

    let mut classes = Vec::with_capacity(reps.len());
    for (class_id, &r) in reps.iter().enumerate() {
        let h = &subgroups[r];
        let n1 = g.normalizer_in(h, &whole);
        let n2 = g.normalizer_by_generation(h);
        if n1 != n2 {
            return Err(RadicalError::Inconsistent(format!("normalizers of class {class_id} differ")));
        }
        let core1 = g.p_core_by_sylows(&n1, p);
        let core2 = g.p_core_by_closure(&n1, p);
        if core1 != core2 {
            return Err(RadicalError::Inconsistent(format!("p-cores of N(class {class_id}) differ")));
        }
        let z = g.center(h);
        let c = g.centralizer_in(h, &whole);
        let class_size = class_of.iter().filter(|&&c| c == class_id).count();
        if class_size * n1.order() != g.len() {
            return Err(RadicalError::Inconsistent(format!("class {class_id} violates orbit-stabilizer")));
        }
        classes.push(SubgroupRecord {
            class_id,
            order: h.order(),
            class_size,
            generators: g.generators_of(h).iter().map(|&x| g.element(x).to_string()).collect(),
            center_order: z.order(),
            normalizer_order: n1.order(),
            centralizer_order: c.order(),
            is_radical: core1 == *h,
            is_centric: p_part(c.order() as u128, p) == z.order() as u128,
            is_distinguished: z.iter().any(|x| distinguished_targets.contains(&x)),
            is_elementary_abelian: g.is_elementary_abelian(h, p),
            representative: r,
        });
    }
    Ok(PSubgroups { p, sylow, subgroups, class_of, classes, lookup })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn enumerate(name: &str) -> (FiniteGroup, PSubgroups) {
        let g = FiniteGroup::from_handle(name, &small_group(name).unwrap(), DEFAULT_BRUTE_CAP).unwrap();
        let e = p_subgroups(&g, 2).unwrap();
        (g, e)
    }

    #[test]
    fn s4_classes() {
        let (_, e) = enumerate("S4");
        let orders: Vec<usize> = e.classes.iter().map(|c| c.order).collect();
        assert_eq!(orders, vec![1, 2, 2, 4, 4, 4, 8]);
        assert_eq!(e.subgroups.len(), 1 + 6 + 3 + 3 + 1 + 3 + 3);
        let radical: Vec<(usize, usize)> =
            e.classes.iter().filter(|c| c.is_radical).map(|c| (c.order, c.class_size)).collect();
        assert_eq!(radical, vec![(4, 1), (8, 3)]);
    }

    #[test]
    fn c2_has_two_classes() {
        let (_, e) = enumerate("C2");
        assert_eq!(e.classes.len(), 2);
        assert!(e.classes[1].is_radical && e.classes[1].is_centric && e.classes[1].is_distinguished);
    }

    #[test]
    fn gl32_classes() {
        let (_, e) = enumerate("GL32");
        let mut sig: Vec<(usize, usize, bool)> =
            e.classes.iter().map(|c| (c.order, c.class_size, c.is_elementary_abelian)).collect();
        sig.sort();
        assert_eq!(sig, vec![(1, 1, true), (2, 21, true), (4, 7, true), (4, 7, true), (4, 21, false), (8, 21, false)]);
    }
}
