use std::collections::{BTreeSet, HashSet};

use serde::Serialize;

use super::{FiniteGroup, PSubgroups};
use crate::complex::{Poset, TypeRegistry, TypedComplex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CollectionKind {
    /// Nontrivial elementary abelian subgroups.
    Quillen,
    /// Nontrivial radical subgroups.
    Bouc,
    /// Radical subgroups whose center meets a central class of a Sylow.
    DistinguishedBouc,
    /// Elementary abelian subgroups inside the Benson closure.
    Benson,
}

/// A conjugation-closed family of actual subgroups, as indices into
/// [`PSubgroups::subgroups`], ordered by inclusion.
#[derive(Clone, Debug)]
pub struct CollectionPoset {
    pub kind: CollectionKind,
    pub members: Vec<usize>,
}

impl CollectionPoset {
    fn filtered(kind: CollectionKind, en: &PSubgroups, keep: impl Fn(usize) -> bool) -> Self {
        let members =
            (0..en.subgroups.len()).filter(|&i| en.subgroups[i].order() > 1 && keep(i)).collect();
        CollectionPoset { kind, members }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Class ids present, sorted.
    pub fn classes(&self, en: &PSubgroups) -> Vec<usize> {
        let set: BTreeSet<usize> = self.members.iter().map(|&i| en.class_of[i]).collect();
        set.into_iter().collect()
    }

    /// Proper inclusion poset; elements are typed by class id.
    pub fn poset(&self, en: &PSubgroups) -> Poset {
        let classes = self.classes(en);
        let names: Vec<String> = classes.iter().map(|c| format!("class{c}")).collect();
        let tags = self.members.iter().map(|&i| classes.binary_search(&en.class_of[i]).unwrap() as u16).collect();
        let mut p = Poset::new(TypeRegistry::with_names(&names), tags);
        for (a, &i) in self.members.iter().enumerate() {
            for (b, &j) in self.members.iter().enumerate() {
                let (hi, hj) = (&en.subgroups[i], &en.subgroups[j]);
                if hi.order() < hj.order() && hi.is_subset(hj) {
                    p.add_relation(a, b);
                }
            }
        }
        p
    }

    pub fn order_complex(&self, en: &PSubgroups) -> TypedComplex {
        self.poset(en).order_complex()
    }
}

pub fn quillen_poset(en: &PSubgroups) -> CollectionPoset {
    CollectionPoset::filtered(CollectionKind::Quillen, en, |i| en.record_of(i).is_elementary_abelian)
}

pub fn bouc_poset(en: &PSubgroups) -> CollectionPoset {
    CollectionPoset::filtered(CollectionKind::Bouc, en, |i| en.record_of(i).is_radical)
}

pub fn distinguished_poset(en: &PSubgroups) -> CollectionPoset {
    CollectionPoset::filtered(CollectionKind::DistinguishedBouc, en, |i| {
        let r = en.record_of(i);
        r.is_radical && r.is_distinguished
    })
}

/// Smallest set of order-`p` elements containing those of `Z(S)`, closed
/// under conjugation and under products of commuting pairs.
#[derive(Clone, Debug)]
pub struct BensonClosure {
    pub elements: Vec<u32>,
    /// Ranks of the elementary abelian subgroups it generates.
    pub ranks: Vec<u32>,
}

pub fn benson_closure(g: &FiniteGroup, en: &PSubgroups) -> (BensonClosure, CollectionPoset) {
    let p = en.p;
    let mut set: HashSet<u32> = g.center(&en.sylow).iter().filter(|&z| g.elem_order(z) == p).collect();
    loop {
        let before = set.len();
        let conj: Vec<u32> = set.iter().flat_map(|&x| g.generators().iter().map(move |&s| (x, s))).map(|(x, s)| g.conj(x, s)).collect();
        set.extend(conj);
        let list: Vec<u32> = set.iter().copied().collect();
        for (k, &x) in list.iter().enumerate() {
            for &y in &list[k + 1..] {
                let xy = g.mul(x, y);
                if xy != g.identity() && g.commute(x, y) {
                    set.insert(xy);
                }
            }
        }
        if set.len() == before {
            break;
        }
    }
    let poset = CollectionPoset::filtered(CollectionKind::Benson, en, |i| {
        let h = &en.subgroups[i];
        en.record_of(i).is_elementary_abelian && h.iter().all(|x| x == g.identity() || set.contains(&x))
    });
    let ranks: BTreeSet<u32> = poset.members.iter().map(|&i| rank_of(en.subgroups[i].order(), p)).collect();
    let ranks = ranks.into_iter().collect();
    let mut elements: Vec<u32> = set.into_iter().collect();
    elements.sort_unstable();
    (BensonClosure { elements, ranks }, poset)
}

fn rank_of(mut order: usize, p: u32) -> u32 {
    let mut r = 0;
    while order > 1 {
        order /= p as usize;
        r += 1;
    }
    r
}

/// F2 Betti numbers and reduced Euler characteristics of two order
/// complexes. Agreement is evidence, not a proof of homotopy equivalence.
#[derive(Clone, Debug, Serialize)]
pub struct HomotopyComparison {
    pub reduced_betti_a: Vec<i64>,
    pub reduced_betti_b: Vec<i64>,
    pub euler_a: i64,
    pub euler_b: i64,
    pub agree: bool,
}

pub fn homotopy_compare(en: &PSubgroups, a: &CollectionPoset, b: &CollectionPoset) -> HomotopyComparison {
    let (ca, cb) = (a.order_complex(en), b.order_complex(en));
    let (ba, bb) = (ca.betti(), cb.betti());
    HomotopyComparison {
        reduced_betti_a: ba.reduced(),
        reduced_betti_b: bb.reduced(),
        euler_a: ca.euler_reduced(),
        euler_b: cb.euler_reduced(),
        agree: ba.same_reduced(&bb) && ca.euler_reduced() == cb.euler_reduced(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radical::{p_subgroups, small_group, FiniteGroup, DEFAULT_BRUTE_CAP};

    fn setup(name: &str) -> (FiniteGroup, PSubgroups) {
        let g = FiniteGroup::from_handle(name, &small_group(name).unwrap(), DEFAULT_BRUTE_CAP).unwrap();
        let e = p_subgroups(&g, 2).unwrap();
        (g, e)
    }

    #[test]
    fn s4_bouc_is_star() {
        let (_, e) = setup("S4");
        let b = bouc_poset(&e);
        assert_eq!(b.len(), 4);
        let c = b.order_complex(&e);
        assert_eq!(c.f_vector(), vec![4, 3]);
        let apex = c.is_cone().unwrap();
        assert_eq!(e.subgroups[b.members[apex as usize]].order(), 4);
    }

    #[test]
    fn c2_squared_quillen_is_cone() {
        let (_, e) = setup("C2xC2");
        let q = quillen_poset(&e);
        assert_eq!(q.len(), 4);
        assert_eq!(q.order_complex(&e).euler_reduced(), 0);
    }

    #[test]
    fn gl32_quillen_and_bouc() {
        let (_, e) = setup("GL32");
        let q = quillen_poset(&e).order_complex(&e);
        assert_eq!(q.f_vector(), vec![35, 42]);
        assert_eq!(q.euler_reduced(), -8);
        let cmp = homotopy_compare(&e, &quillen_poset(&e), &bouc_poset(&e));
        assert!(cmp.agree);
        assert_eq!(cmp.reduced_betti_b, vec![0, 8]);
    }

    #[test]
    fn s4_benson_closure() {
        let (g, e) = setup("S4");
        let (b, poset) = benson_closure(&g, &e);
        assert_eq!(b.elements.len(), 3);
        assert!(b.elements.iter().all(|&x| g.element(x).fixed_points() == 0));
        assert_eq!(b.ranks, vec![1, 2]);
        assert_eq!(poset.len(), 4);
    }
}
