//! Several pointwise tests evaluated in one pass over a streamed group.
//!
//! Each element is visited once; conjugation tests read images lazily and
//! look candidates up by base images, so a failing test usually costs a
//! handful of array reads instead of a full conjugate and hash.

use std::collections::HashMap;

use super::chain::{schreier_sims, ChainBuilder};
use super::{GroupHandle, PermError, Permutation};

/// Membership in a small group keyed by the images of a base.
#[derive(Clone, Debug)]
pub struct BaseMembership {
    base: Vec<u16>,
    map: HashMap<u64, Vec<u32>>,
    elements: Vec<Permutation>,
}

fn key_of(images: impl Iterator<Item = u16>) -> u64 {
    images.fold(0xcbf2_9ce4_8422_2325u64, |h, x| (h ^ x as u64).wrapping_mul(0x0100_0000_01b3))
}

impl BaseMembership {
    pub fn of_group(group: &GroupHandle, cap: u128) -> Result<Self, PermError> {
        let base: Vec<u16> = group.chain().base().iter().map(|&b| b as u16).collect();
        let elements: Vec<Permutation> = group.chain().stream(cap)?.collect();
        Ok(Self::build(base, elements))
    }

    fn build(base: Vec<u16>, elements: Vec<Permutation>) -> Self {
        let mut map: HashMap<u64, Vec<u32>> = HashMap::new();
        for (k, g) in elements.iter().enumerate() {
            map.entry(key_of(base.iter().map(|&b| g.images()[b as usize]))).or_default().push(k as u32);
        }
        BaseMembership { base, map, elements }
    }

    /// The same membership for the conjugate group `R^h`.
    pub fn conjugated(&self, h: &Permutation) -> Self {
        let base = self.base.iter().map(|&b| h.images()[b as usize]).collect();
        Self::build(base, self.elements.iter().map(|g| g.conjugate_by(h)).collect())
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    /// Whether the permutation with images `f` is a member.
    #[inline]
    pub fn contains_with(&self, f: impl Fn(usize) -> u16) -> bool {
        let Some(cands) = self.map.get(&key_of(self.base.iter().map(|&b| f(b as usize)))) else {
            return false;
        };
        cands.iter().any(|&k| self.elements[k as usize].images().iter().enumerate().all(|(p, &x)| f(p) == x))
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        self.contains_with(|p| g.images()[p])
    }
}

/// A test applied to every element `x` of the swept group.
#[derive(Clone, Debug)]
pub enum SweepTest {
    /// `g^x` lies in `target` for every listed `g`.
    ConjugatesInto { gens: Vec<Permutation>, target: BaseMembership },
    /// `x` commutes with every listed `g`.
    Commutes { gens: Vec<Permutation> },
    /// Every listed test passes.
    All(Vec<SweepTest>),
}

impl SweepTest {
    /// `N(R)` for a group given by its elements' membership structure.
    pub fn normalizes(r: &GroupHandle, cap: u128) -> Result<Self, PermError> {
        Ok(SweepTest::ConjugatesInto { gens: r.generators().to_vec(), target: BaseMembership::of_group(r, cap)? })
    }

    fn needs_inverse(&self) -> bool {
        match self {
            SweepTest::ConjugatesInto { .. } => true,
            SweepTest::Commutes { .. } => false,
            SweepTest::All(tests) => tests.iter().any(|t| t.needs_inverse()),
        }
    }

    #[inline]
    fn passes(&self, x: &[u16], xinv: &[u16]) -> bool {
        match self {
            SweepTest::ConjugatesInto { gens, target } => gens.iter().all(|g| {
                let g = g.images();
                target.contains_with(|p| x[g[xinv[p] as usize] as usize])
            }),
            SweepTest::Commutes { gens } => gens.iter().all(|g| {
                let g = g.images();
                (0..x.len()).all(|p| x[g[p] as usize] == g[x[p] as usize])
            }),
            SweepTest::All(tests) => tests.iter().all(|t| t.passes(x, xinv)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepGoal {
    /// All passing elements, which must form a subgroup.
    Subgroup,
    /// Any one passing element.
    Find,
}

#[derive(Clone, Debug)]
pub struct SweepTask {
    pub test: SweepTest,
    pub goal: SweepGoal,
}

#[derive(Debug)]
pub enum SweepOutcome {
    Subgroup(GroupHandle),
    Found(Option<Permutation>),
}

impl SweepOutcome {
    pub fn subgroup(self) -> Option<GroupHandle> {
        match self {
            SweepOutcome::Subgroup(g) => Some(g),
            SweepOutcome::Found(_) => None,
        }
    }

    pub fn found(self) -> Option<Permutation> {
        match self {
            SweepOutcome::Found(x) => x,
            SweepOutcome::Subgroup(_) => None,
        }
    }
}

struct Slot {
    count: u128,
    builder: ChainBuilder,
    gens: Vec<Permutation>,
    found: Option<Permutation>,
}

/// Streams `ambient` once and evaluates every task on each element.
/// Subgroup results are certified: the group generated by the passing
/// elements must have exactly as many elements as passed.
pub fn sweep(ambient: &GroupHandle, cap: u128, seed: u64, tasks: &[SweepTask]) -> Result<Vec<SweepOutcome>, PermError> {
    let n = ambient.degree();
    let inverse = tasks.iter().any(|t| t.test.needs_inverse());
    let init = || {
        let slots: Vec<Slot> = tasks
            .iter()
            .map(|_| Slot { count: 0, builder: ChainBuilder::new(n), gens: Vec::new(), found: None })
            .collect();
        (slots, vec![0u16; n])
    };
    let (slots, _) = ambient.chain().par_fold(
        cap,
        init,
        |(slots, xinv), x| {
            let xi = x.images();
            if inverse {
                for (p, &y) in xi.iter().enumerate() {
                    xinv[y as usize] = p as u16;
                }
            }
            for (task, slot) in tasks.iter().zip(slots.iter_mut()) {
                if task.goal == SweepGoal::Find && slot.found.is_some() {
                    continue;
                }
                if task.test.passes(xi, xinv) {
                    slot.count += 1;
                    match task.goal {
                        SweepGoal::Find => slot.found = Some(x.clone()),
                        SweepGoal::Subgroup => {
                            if slot.builder.add(x) {
                                slot.gens.push(x.clone());
                            }
                        }
                    }
                }
            }
        },
        |(mut a, buf), (b, _)| {
            for (sa, sb) in a.iter_mut().zip(b) {
                sa.count += sb.count;
                sa.found = sa.found.take().or(sb.found);
                for g in sb.gens {
                    if sa.builder.add(&g) {
                        sa.gens.push(g);
                    }
                }
            }
            (a, buf)
        },
    )?;
    tasks
        .iter()
        .zip(slots)
        .map(|(task, slot)| match task.goal {
            SweepGoal::Find => Ok(SweepOutcome::Found(slot.found)),
            SweepGoal::Subgroup => {
                if slot.gens.is_empty() {
                    return Ok(SweepOutcome::Subgroup(GroupHandle::trivial(n)));
                }
                let chain = schreier_sims(&slot.gens, seed)?;
                if chain.order() != slot.count {
                    return Err(PermError::NotASubgroup);
                }
                Ok(SweepOutcome::Subgroup(GroupHandle::from_chain(slot.gens, chain)))
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::super::DEFAULT_STREAM_CAP;
    use super::*;

    fn perm(n: usize, cycles: &[&[usize]]) -> Permutation {
        Permutation::from_cycles(n, &cycles.iter().map(|c| c.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn s5() -> GroupHandle {
        GroupHandle::new(vec![perm(5, &[&[0, 1]]), perm(5, &[&[0, 1, 2, 3, 4]])], 1).unwrap()
    }

    #[test]
    fn base_membership_matches_group() {
        let g = s5();
        let v4 = GroupHandle::new(vec![perm(5, &[&[0, 1], &[2, 3]]), perm(5, &[&[0, 2], &[1, 3]])], 1).unwrap();
        let m = BaseMembership::of_group(&v4, DEFAULT_STREAM_CAP).unwrap();
        assert_eq!(m.len(), 4);
        let inside = g.chain().stream(DEFAULT_STREAM_CAP).unwrap().filter(|x| m.contains(x)).count();
        assert_eq!(inside, 4);
        let h = perm(5, &[&[0, 4]]);
        let c = m.conjugated(&h);
        assert!(c.contains(&perm(5, &[&[4, 1], &[2, 3]])));
        assert!(!c.contains(&perm(5, &[&[0, 1], &[2, 3]])));
    }

    #[test]
    fn one_pass_normalizer_centralizer_and_find() {
        let g = s5();
        let v4 = GroupHandle::new(vec![perm(5, &[&[0, 1], &[2, 3]]), perm(5, &[&[0, 2], &[1, 3]])], 1).unwrap();
        let t = perm(5, &[&[0, 1]]);
        let target = BaseMembership::of_group(&v4, DEFAULT_STREAM_CAP).unwrap().conjugated(&perm(5, &[&[3, 4]]));
        let tasks = vec![
            SweepTask { test: SweepTest::normalizes(&v4, DEFAULT_STREAM_CAP).unwrap(), goal: SweepGoal::Subgroup },
            SweepTask { test: SweepTest::Commutes { gens: vec![t.clone()] }, goal: SweepGoal::Subgroup },
            SweepTask {
                test: SweepTest::ConjugatesInto { gens: v4.generators().to_vec(), target },
                goal: SweepGoal::Find,
            },
        ];
        let mut out = sweep(&g, DEFAULT_STREAM_CAP, 3, &tasks).unwrap().into_iter();
        assert_eq!(out.next().unwrap().subgroup().unwrap().order(), 24);
        let c = out.next().unwrap().subgroup().unwrap();
        assert_eq!(c.order(), 12);
        assert!(c.generators().iter().all(|x| x.commutes_with(&t)));
        let x = out.next().unwrap().found().unwrap();
        let moved = GroupHandle::new(v4.generators().iter().map(|g| g.conjugate_by(&x)).collect(), 1).unwrap();
        assert!(moved.contains(&perm(5, &[&[0, 1], &[2, 4]])));
    }
}
