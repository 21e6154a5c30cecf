//! Subgroups cut out of a streamable group by a pointwise test.

use super::chain::{schreier_sims, ChainBuilder};
use super::class::FingerprintMap;
use super::sweep::{sweep, SweepGoal, SweepOutcome, SweepTask, SweepTest};
use super::{GroupHandle, PermError, Permutation};

/// Hashed element set of a small group, for O(1) membership.
#[derive(Clone, Debug)]
pub struct ElementSet {
    map: FingerprintMap<u64>,
    degree: usize,
}

impl ElementSet {
    pub fn of_group(group: &GroupHandle, cap: u128) -> Result<Self, PermError> {
        let mut map = FingerprintMap::default();
        for g in group.chain().stream(cap)? {
            map.insert(g.fingerprint(), g.check_hash());
        }
        if map.len() as u128 != group.order() {
            return Err(PermError::FingerprintCollision);
        }
        Ok(ElementSet { map, degree: group.degree() })
    }

    pub fn from_elements<'a, I: IntoIterator<Item = &'a Permutation>>(elements: I) -> Self {
        let mut map = FingerprintMap::default();
        let mut degree = 0;
        for g in elements {
            degree = g.degree();
            map.insert(g.fingerprint(), g.check_hash());
        }
        ElementSet { map, degree }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    #[inline]
    pub fn contains(&self, g: &Permutation) -> bool {
        g.degree() == self.degree && self.map.get(&g.fingerprint()) == Some(&g.check_hash())
    }
}

struct Collector {
    count: u128,
    builder: ChainBuilder,
    gens: Vec<Permutation>,
}

/// Streams `ambient` and returns the subgroup of elements passing `test`,
/// with its order certified against the number of passing elements. The
/// test must describe a subgroup.
pub fn subgroup_by_stream<F>(ambient: &GroupHandle, cap: u128, seed: u64, test: F) -> Result<GroupHandle, PermError>
where
    F: Fn(&Permutation) -> bool + Sync + Send,
{
    let n = ambient.degree();
    let init = || Collector { count: 0, builder: ChainBuilder::new(n), gens: Vec::new() };
    let out = ambient.chain().par_fold(
        cap,
        init,
        |st, h| {
            if test(h) {
                st.count += 1;
                if st.builder.add(h) {
                    st.gens.push(h.clone());
                }
            }
        },
        |mut a, b| {
            a.count += b.count;
            for g in b.gens {
                if a.builder.add(&g) {
                    a.gens.push(g);
                }
            }
            a
        },
    )?;
    if out.gens.is_empty() {
        return Ok(GroupHandle::trivial(n));
    }
    let chain = schreier_sims(&out.gens, seed)?;
    if chain.order() != out.count {
        return Err(PermError::NotASubgroup);
    }
    Ok(GroupHandle::from_chain(out.gens, chain))
}

/// `N_H(R) = { h in H : R^h = R }` by exhaustive streaming of `H`.
pub fn normalizer_by_stream(h: &GroupHandle, r: &GroupHandle, cap: u128) -> Result<GroupHandle, PermError> {
    if !h.contains_group(r) {
        return Err(PermError::NotASubgroup);
    }
    let task = SweepTask { test: SweepTest::normalizes(r, cap)?, goal: SweepGoal::Subgroup };
    let out = sweep(h, cap, 0x5eed, &[task])?;
    Ok(out.into_iter().next().and_then(SweepOutcome::subgroup).expect("one subgroup task"))
}

#[cfg(test)]
mod tests {
    use super::super::DEFAULT_STREAM_CAP;
    use super::*;

    fn perm(n: usize, cycles: &[&[usize]]) -> Permutation {
        Permutation::from_cycles(n, &cycles.iter().map(|c| c.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn s4() -> GroupHandle {
        GroupHandle::new(vec![perm(4, &[&[0, 1]]), perm(4, &[&[0, 1, 2, 3]])], 1).unwrap()
    }

    #[test]
    fn normalizer_of_double_transposition_is_dihedral() {
        let r = GroupHandle::new(vec![perm(4, &[&[0, 1], &[2, 3]])], 1).unwrap();
        let n = normalizer_by_stream(&s4(), &r, DEFAULT_STREAM_CAP).unwrap();
        assert_eq!(n.order(), 8);
        assert!(n.contains_group(&r));
        assert!(n.normalizes(&r));
    }

    #[test]
    fn whole_group_is_self_normalizing() {
        let g = s4();
        assert_eq!(normalizer_by_stream(&g, &g, DEFAULT_STREAM_CAP).unwrap().order(), 24);
    }

    #[test]
    fn outside_subgroup_is_rejected() {
        let g = GroupHandle::new(vec![perm(5, &[&[0, 1]]), perm(5, &[&[0, 1, 2, 3]])], 1).unwrap();
        let r = GroupHandle::new(vec![perm(5, &[&[3, 4]])], 1).unwrap();
        assert!(matches!(normalizer_by_stream(&g, &r, DEFAULT_STREAM_CAP), Err(PermError::NotASubgroup)));
    }

    #[test]
    fn non_subgroup_tests_are_detected() {
        let g = s4();
        let t = perm(4, &[&[0, 1]]);
        let res = subgroup_by_stream(&g, DEFAULT_STREAM_CAP, 1, |x| x.is_identity() || *x == t || x.order() == 3);
        assert!(matches!(res, Err(PermError::NotASubgroup)));
    }
}
