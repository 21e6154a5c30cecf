//! Elementary collapses, cone-residue star removal, schedule replay and
//! greedy contractibility certificates.
//!
//! A pair `(sigma, Sigma)` is free when `Sigma` is maximal and every
//! simplex strictly containing `sigma` is a face of `Sigma`; collapsing
//! removes that whole interval. Maximal means "not a proper face", not
//! "of top dimension".

mod schedule;

pub use schedule::{CollapseCertificate, CollapseStep, Schedule};

use std::collections::BTreeSet;

use thiserror::Error;

use crate::complex::{ComplexError, TypedComplex};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MorseError {
    #[error("step {step}: simplex {simplex:?} is not in the complex")]
    Missing { step: usize, simplex: Vec<u32> },
    #[error("step {step}: {sigma:?} is not a proper face of {upper:?}")]
    NotAFace { step: usize, sigma: Vec<u32>, upper: Vec<u32> },
    #[error("step {step}: {upper:?} is not free over {sigma:?}")]
    NotFree { step: usize, sigma: Vec<u32>, upper: Vec<u32> },
    #[error("step {step}: residue of vertex {vertex} is not a cone")]
    NotCone { step: usize, vertex: u32 },
    #[error("F2 homology changed after step {step}")]
    HomologyChanged { step: usize },
    #[error("terminal hash {actual} differs from certified {expected}")]
    HashMismatch { expected: String, actual: String },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// `sigma` strictly inside `upper`, both as vertex lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CollapsePair {
    pub sigma: Vec<u32>,
    pub upper: Vec<u32>,
}

impl CollapsePair {
    pub fn new(sigma: &[u32], upper: &[u32]) -> Self {
        let mut s = sigma.to_vec();
        let mut u = upper.to_vec();
        s.sort_unstable();
        u.sort_unstable();
        CollapsePair { sigma: s, upper: u }
    }
}

fn is_subset(a: &[u32], b: &[u32]) -> bool {
    a.iter().all(|v| b.binary_search(v).is_ok())
}

fn lookup(c: &TypedComplex, s: &[u32], step: usize) -> Result<u32, MorseError> {
    c.id(s).ok_or_else(|| MorseError::Missing { step, simplex: s.to_vec() })
}

fn check_free(c: &TypedComplex, pair: &CollapsePair, step: usize) -> Result<(u32, u32), MorseError> {
    let s = lookup(c, &pair.sigma, step)?;
    let u = lookup(c, &pair.upper, step)?;
    if pair.sigma.len() >= pair.upper.len() || !is_subset(&pair.sigma, &pair.upper) {
        return Err(MorseError::NotAFace { step, sigma: pair.sigma.clone(), upper: pair.upper.clone() });
    }
    let free = c.is_maximal(u) && c.cofaces(s).all(|t| is_subset(c.simplex(t), &pair.upper));
    if free {
        Ok((s, u))
    } else {
        Err(MorseError::NotFree { step, sigma: pair.sigma.clone(), upper: pair.upper.clone() })
    }
}

/// Whether `upper` is free over `sigma` in the current complex.
pub fn is_free_pair(c: &TypedComplex, upper: &[u32], sigma: &[u32]) -> Result<bool, MorseError> {
    match check_free(c, &CollapsePair::new(sigma, upper), 0) {
        Ok(_) => Ok(true),
        Err(MorseError::NotFree { .. }) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Removes every simplex between `sigma` and `upper`; returns how many.
pub fn apply_collapse(c: &mut TypedComplex, pair: &CollapsePair) -> Result<usize, MorseError> {
    collapse_at(c, pair, 0)
}

fn collapse_at(c: &mut TypedComplex, pair: &CollapsePair, step: usize) -> Result<usize, MorseError> {
    check_free(c, pair, step)?;
    let extra: Vec<u32> = pair.upper.iter().copied().filter(|v| pair.sigma.binary_search(v).is_err()).collect();
    // interval members, largest first so each has no live cofaces when removed
    let mut members: Vec<Vec<u32>> = (0..1u64 << extra.len())
        .map(|mask| {
            let mut t = pair.sigma.clone();
            t.extend(extra.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &v)| v));
            t.sort_unstable();
            t
        })
        .collect();
    members.sort_by_key(|t| std::cmp::Reverse(t.len()));
    for t in &members {
        let id = c.id(t).expect("interval of a live simplex is live");
        c.remove_id(id);
    }
    Ok(members.len())
}

/// Deletes the star of `v` when its residue is a cone; returns the apex.
/// An empty residue is refused.
pub fn remove_star_if_cone(c: &mut TypedComplex, v: u32) -> Result<u32, MorseError> {
    star_at(c, v, 0)
}

fn star_at(c: &mut TypedComplex, v: u32, step: usize) -> Result<u32, MorseError> {
    lookup(c, &[v], step)?;
    let apex = c.residue(v)?.is_cone().ok_or(MorseError::NotCone { step, vertex: v })?;
    c.remove_with_cofaces(&[v])?;
    Ok(apex)
}

/// Greedy elementary collapses, smallest `(dim sigma, vertex ids)` first.
/// The complex is left as the terminal core; the certificate reaches a
/// point exactly when `terminal_size == 1`.
pub fn greedy_collapse(c: &mut TypedComplex) -> CollapseCertificate {
    greedy_inner(c, None).expect("unchecked run cannot fail")
}

/// As [`greedy_collapse`], recomputing F2 Betti numbers every `every`
/// steps and failing if they change.
pub fn greedy_collapse_checked(c: &mut TypedComplex, every: usize) -> Result<CollapseCertificate, MorseError> {
    greedy_inner(c, Some(every.max(1)))
}

fn greedy_inner(c: &mut TypedComplex, every: Option<usize>) -> Result<CollapseCertificate, MorseError> {
    let reference = every.map(|_| c.betti());
    let key = |c: &TypedComplex, id: u32| (c.simplex(id).len(), c.simplex(id).to_vec(), id);
    let mut queue: BTreeSet<(usize, Vec<u32>, u32)> =
        c.ids().filter(|&i| c.live_coface_count(i) == 1).map(|i| key(c, i)).collect();
    let mut steps = Vec::new();
    while let Some((_, sigma, id)) = queue.pop_first() {
        if !c.is_alive(id) || c.live_coface_count(id) != 1 {
            continue;
        }
        let up = c.cofaces(id).next().expect("one live coface");
        let upper = c.simplex(up).to_vec();
        let touched: Vec<u32> = c.faces(up).into_iter().chain(c.faces(id)).collect();
        c.remove_id(up);
        c.remove_id(id);
        for t in touched {
            if c.is_alive(t) && c.live_coface_count(t) == 1 {
                queue.insert(key(c, t));
            }
        }
        steps.push(CollapseStep::Collapse(CollapsePair { sigma, upper }));
        if let (Some(k), Some(b)) = (every, &reference) {
            if steps.len() % k == 0 && !c.betti().same_reduced(b) {
                return Err(MorseError::HomologyChanged { step: steps.len() });
            }
        }
    }
    Ok(CollapseCertificate::new(steps, Vec::new(), c))
}

/// Applies a schedule step by step, stopping at the first invalid one.
pub fn replay_schedule(c: &mut TypedComplex, schedule: &Schedule) -> Result<CollapseCertificate, MorseError> {
    for (k, step) in schedule.steps.iter().enumerate() {
        match step {
            CollapseStep::Collapse(pair) => {
                collapse_at(c, pair, k)?;
            }
            CollapseStep::Star(v) => {
                star_at(c, *v, k)?;
            }
        }
    }
    Ok(CollapseCertificate::new(schedule.steps.clone(), schedule.orbits.clone(), c))
}

/// Replays a certificate on a copy of `initial` and compares the
/// terminal hash.
pub fn verify_certificate(initial: &TypedComplex, cert: &CollapseCertificate) -> Result<TypedComplex, MorseError> {
    let mut c = initial.clone();
    let schedule = Schedule { steps: cert.steps.clone(), orbits: cert.orbits.clone() };
    let got = replay_schedule(&mut c, &schedule)?;
    if got.terminal_hash != cert.terminal_hash {
        return Err(MorseError::HashMismatch { expected: cert.terminal_hash.clone(), actual: got.terminal_hash });
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn solid_triangle() -> TypedComplex {
        TypedComplex::from_simplices(3, &[vec![0, 1, 2]]).unwrap()
    }

    fn hollow_triangle() -> TypedComplex {
        TypedComplex::from_simplices(3, &[vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap()
    }

    #[test]
    fn free_pairs_in_triangles() {
        let s = solid_triangle();
        assert!(is_free_pair(&s, &[0, 1, 2], &[0, 1]).unwrap());
        assert!(!is_free_pair(&s, &[0, 1], &[0]).unwrap());
        let h = hollow_triangle();
        for (e, v) in [([0, 1], 0), ([0, 1], 1), ([1, 2], 2)] {
            assert!(!is_free_pair(&h, &e, &[v]).unwrap());
        }
        assert!(matches!(is_free_pair(&h, &[0, 1, 2], &[0, 1]), Err(MorseError::Missing { .. })));
    }

    #[test]
    fn solid_triangle_in_three_steps() {
        let mut s = solid_triangle();
        let cert = greedy_collapse(&mut s);
        assert_eq!(cert.steps.len(), 3);
        assert_eq!(cert.terminal_size, 1);
        assert_eq!(s.len(), 1);
    }

    #[test]
    fn hollow_triangle_is_stuck() {
        let mut h = hollow_triangle();
        let before = h.content_hash();
        let cert = greedy_collapse(&mut h);
        assert!(cert.steps.is_empty());
        assert_eq!(h.content_hash(), before);
    }

    #[test]
    fn cone_over_points_collapses_to_apex() {
        let mut c = TypedComplex::from_simplices(6, &[vec![5, 0], vec![5, 1], vec![5, 2], vec![5, 3], vec![5, 4]]).unwrap();
        let cert = greedy_collapse(&mut c);
        assert_eq!(cert.terminal_size, 1);
        assert_eq!(c.vertices(), vec![5]);
    }

    #[test]
    fn full_simplex_on_five_vertices() {
        let mut c = TypedComplex::from_simplices(5, &[vec![0, 1, 2, 3, 4]]).unwrap();
        let cert = greedy_collapse_checked(&mut c, 1).unwrap();
        assert_eq!(cert.terminal_size, 1);
        assert_eq!(cert.steps.len(), 15);
    }

    #[test]
    fn collapse_removes_exactly_two() {
        let mut s = solid_triangle();
        let n = s.len();
        assert_eq!(apply_collapse(&mut s, &CollapsePair::new(&[1, 2], &[0, 1, 2])).unwrap(), 2);
        assert_eq!(s.len(), n - 2);
        assert!(apply_collapse(&mut s, &CollapsePair::new(&[1, 2], &[0, 1, 2])).is_err());
    }

    #[test]
    fn star_removal() {
        let mut c = TypedComplex::from_simplices(3, &[vec![0, 1, 2]]).unwrap();
        assert_eq!(remove_star_if_cone(&mut c, 2).unwrap(), 0);
        assert_eq!(c.maximal_simplices(), vec![&[0u32, 1][..]]);
        let mut two = TypedComplex::from_simplices(3, &[vec![0, 1], vec![2]]).unwrap();
        assert!(matches!(remove_star_if_cone(&mut two, 2), Err(MorseError::NotCone { vertex: 2, .. })));
    }

    #[test]
    fn empty_schedule_is_identity() {
        let mut s = solid_triangle();
        let hash = s.content_hash();
        let cert = replay_schedule(&mut s, &Schedule::default()).unwrap();
        assert!(cert.steps.is_empty());
        assert_eq!(cert.terminal_hash, hash);
    }

    #[test]
    fn order_matters() {
        // path 0-1-2 with the triangle 1 2 3 attached: collapsing (3, 13)
        // needs the 2-simplex gone first
        let c = TypedComplex::from_simplices(4, &[vec![0, 1], vec![1, 2, 3]]).unwrap();
        let first = CollapseStep::Collapse(CollapsePair::new(&[2, 3], &[1, 2, 3]));
        let second = CollapseStep::Collapse(CollapsePair::new(&[3], &[1, 3]));
        let good = Schedule { steps: vec![first.clone(), second.clone()], orbits: Vec::new() };
        let bad = Schedule { steps: vec![second, first], orbits: Vec::new() };
        assert!(replay_schedule(&mut c.clone(), &good).is_ok());
        assert!(matches!(replay_schedule(&mut c.clone(), &bad), Err(MorseError::NotFree { step: 0, .. })));
    }

    #[test]
    fn certificates_replay() {
        let c = TypedComplex::from_simplices(5, &[vec![0, 1, 2, 3], vec![3, 4]]).unwrap();
        let mut work = c.clone();
        let cert = greedy_collapse(&mut work);
        let text = cert.to_text();
        let back = CollapseCertificate::parse(&text).unwrap();
        assert_eq!(back, cert);
        let end = verify_certificate(&c, &back).unwrap();
        assert_eq!(end.content_hash(), work.content_hash());
    }
}
