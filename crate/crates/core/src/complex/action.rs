use std::collections::{HashSet, VecDeque};

use super::{ComplexError, TypedComplex};

/// A group acting on a complex through vertex permutations.
#[derive(Clone, Debug)]
pub struct ComplexAction<'a> {
    complex: &'a TypedComplex,
    generators: Vec<Vec<u32>>,
}

fn image(g: &[u32], s: &[u32]) -> Vec<u32> {
    let mut t: Vec<u32> = s.iter().map(|&v| g[v as usize]).collect();
    t.sort_unstable();
    t
}

impl<'a> ComplexAction<'a> {
    /// Checks that each generator is a type-preserving simplicial bijection.
    pub fn new(complex: &'a TypedComplex, generators: Vec<Vec<u32>>) -> Result<Self, ComplexError> {
        let n = complex.vertex_capacity();
        for (k, g) in generators.iter().enumerate() {
            let mut seen = vec![false; n];
            if g.len() != n || g.iter().any(|&x| x as usize >= n || std::mem::replace(&mut seen[x as usize], true)) {
                return Err(ComplexError::BadAction(format!("generator {k} is not a vertex permutation")));
            }
            if let Some(v) = (0..n).find(|&v| complex.vertex_type(v as u32) != complex.vertex_type(g[v])) {
                return Err(ComplexError::BadAction(format!("generator {k} changes the type of vertex {v}")));
            }
            if let Some(s) = complex.iter().find(|s| !complex.contains(&image(g, s))) {
                return Err(ComplexError::BadAction(format!("generator {k} moves {s:?} out of the complex")));
            }
        }
        Ok(ComplexAction { complex, generators })
    }

    pub fn generators(&self) -> &[Vec<u32>] {
        &self.generators
    }

    /// All group elements as vertex maps, or `None` beyond `cap`.
    pub fn elements(&self, cap: usize) -> Option<Vec<Vec<u32>>> {
        let id: Vec<u32> = (0..self.complex.vertex_capacity() as u32).collect();
        let mut seen: HashSet<Vec<u32>> = HashSet::from([id.clone()]);
        let mut queue = VecDeque::from([id.clone()]);
        let mut out = vec![id];
        while let Some(x) = queue.pop_front() {
            for g in &self.generators {
                let y: Vec<u32> = x.iter().map(|&v| g[v as usize]).collect();
                if seen.insert(y.clone()) {
                    if out.len() == cap {
                        return None;
                    }
                    out.push(y.clone());
                    queue.push_back(y);
                }
            }
        }
        Some(out)
    }

    /// Every element fixing a simplex setwise fixes it pointwise.
    pub fn check_admissible(&self, cap: usize) -> Result<(), ComplexError> {
        let elems = self.elements(cap).ok_or_else(|| ComplexError::BadAction(format!("group exceeds {cap} elements")))?;
        for g in &elems {
            fixed_subcomplex(self.complex, g)?;
        }
        Ok(())
    }

    /// Reduced Euler characteristic from simplex orbits, each weighted by
    /// the group order over its stabilizer order.
    pub fn euler_by_orbit_counting(&self, cap: usize) -> Result<i64, ComplexError> {
        let elems = self.elements(cap).ok_or_else(|| ComplexError::BadAction(format!("group exceeds {cap} elements")))?;
        let order = elems.len() as i64;
        let mut done: HashSet<Vec<u32>> = HashSet::new();
        let mut chi = -1i64;
        for s in self.complex.iter() {
            if done.contains(s) {
                continue;
            }
            let orbit: HashSet<Vec<u32>> = elems.iter().map(|g| image(g, s)).collect();
            let stab = elems.iter().filter(|g| image(g, s) == s).count() as i64;
            if order % stab != 0 || order / stab != orbit.len() as i64 {
                return Err(ComplexError::BadAction(format!("orbit of {s:?} violates orbit-stabilizer")));
            }
            let sign = if s.len() % 2 == 1 { 1 } else { -1 };
            chi += sign * (order / stab);
            done.extend(orbit);
        }
        Ok(chi)
    }
}

/// Subcomplex of simplices fixed pointwise by `g`, after checking that
/// no simplex is fixed only setwise.
pub fn fixed_subcomplex(complex: &TypedComplex, g: &[u32]) -> Result<TypedComplex, ComplexError> {
    let mut out = complex.empty_like();
    for s in complex.iter() {
        let pointwise = s.iter().all(|&v| g[v as usize] == v);
        if pointwise {
            out.insert_sorted(s);
        } else if image(g, s) == s {
            return Err(ComplexError::NotAdmissible(s.to_vec()));
        }
    }
    Ok(out)
}

/// `sum_k (-1)^k sum_{orbits of k-simplices} |G| / |G_sigma|`, minus one;
/// each stabilizer order must divide the group order.
pub fn euler_from_orbits(group_order: u128, orbits: &[(usize, u128)]) -> Result<i128, ComplexError> {
    let mut chi = -1i128;
    for &(dim, stab) in orbits {
        if stab == 0 || !group_order.is_multiple_of(stab) {
            return Err(ComplexError::BadAction(format!("stabilizer order {stab} does not divide {group_order}")));
        }
        let size = (group_order / stab) as i128;
        chi += if dim % 2 == 0 { size } else { -size };
    }
    Ok(chi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{Poset, TypeRegistry};

    fn subdivided_triangle() -> TypedComplex {
        // barycentric subdivision of the boundary of a triangle: vertices
        // 0..3 are points (type 0), 3..6 edges (type 1), edge 3+i misses point i
        let reg = TypeRegistry::with_names(&["point", "edge"]);
        let mut p = Poset::new(reg, vec![0, 0, 0, 1, 1, 1]);
        for i in 0..3 {
            for e in 0..3 {
                if i != e {
                    p.add_relation(i, 3 + e);
                }
            }
        }
        p.order_complex()
    }

    #[test]
    fn rotation_has_empty_fixed_set() {
        let c = subdivided_triangle();
        let rot = vec![1, 2, 0, 4, 5, 3];
        let act = ComplexAction::new(&c, vec![rot.clone()]).unwrap();
        act.check_admissible(100).unwrap();
        assert!(fixed_subcomplex(&c, &rot).unwrap().is_empty());
        assert_eq!(act.euler_by_orbit_counting(100).unwrap(), c.euler_reduced());
    }

    #[test]
    fn reflection_fixes_two_points() {
        let c = subdivided_triangle();
        let refl = vec![0, 2, 1, 3, 5, 4];
        let f = fixed_subcomplex(&c, &refl).unwrap();
        assert_eq!(f.vertices(), vec![0, 3]);
        assert_eq!(f.len(), 2);
    }

    #[test]
    fn setwise_fixed_edge_is_rejected() {
        let c = TypedComplex::from_simplices(2, &[vec![0, 1]]).unwrap();
        assert_eq!(fixed_subcomplex(&c, &[1, 0]).unwrap_err(), ComplexError::NotAdmissible(vec![0, 1]));
    }

    #[test]
    fn type_changing_map_is_rejected() {
        let c = subdivided_triangle();
        assert!(ComplexAction::new(&c, vec![vec![3, 4, 5, 0, 1, 2]]).is_err());
    }

    #[test]
    fn orbit_formula() {
        assert_eq!(euler_from_orbits(6, &[(0, 2), (0, 2), (1, 1)]).unwrap(), -1);
        assert!(euler_from_orbits(6, &[(0, 4)]).is_err());
    }
}
