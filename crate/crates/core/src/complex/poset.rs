use super::{ComplexError, TypeRegistry, TypedComplex};

/// A finite poset with typed elements, stored as strict down-sets.
#[derive(Clone, Debug)]
pub struct Poset {
    registry: TypeRegistry,
    tags: Vec<u16>,
    below: Vec<Vec<bool>>,
}

impl Poset {
    pub fn new(registry: TypeRegistry, tags: Vec<u16>) -> Self {
        let n = tags.len();
        Poset { registry, tags, below: vec![vec![false; n]; n] }
    }

    /// Poset on `n` untyped elements with `less(a, b)` meaning `a < b`.
    pub fn from_relation(n: usize, less: impl Fn(usize, usize) -> bool) -> Self {
        let mut p = Poset::new(TypeRegistry::with_names(&["v"]), vec![0; n]);
        for a in 0..n {
            for b in 0..n {
                if a != b && less(a, b) {
                    p.below[b][a] = true;
                }
            }
        }
        p
    }

    pub fn len(&self) -> usize {
        self.tags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tags.is_empty()
    }

    pub fn tag(&self, x: usize) -> u16 {
        self.tags[x]
    }

    /// Records `a < b`; call [`Poset::close`] afterwards if the relations
    /// given are not already transitive.
    pub fn add_relation(&mut self, a: usize, b: usize) {
        self.below[b][a] = true;
    }

    /// Transitive closure.
    pub fn close(&mut self) {
        let n = self.len();
        for k in 0..n {
            for b in 0..n {
                if self.below[b][k] {
                    for a in 0..n {
                        if self.below[k][a] {
                            self.below[b][a] = true;
                        }
                    }
                }
            }
        }
    }

    pub fn less(&self, a: usize, b: usize) -> bool {
        self.below[b][a]
    }

    /// Checks irreflexivity, antisymmetry and transitivity.
    pub fn validate(&self) -> Result<(), ComplexError> {
        let n = self.len();
        let bad = |msg: String| Err(ComplexError::BadAction(msg));
        for a in 0..n {
            if self.less(a, a) {
                return bad(format!("{a} < {a}"));
            }
            for b in 0..n {
                if self.less(a, b) && self.less(b, a) {
                    return bad(format!("{a} and {b} are mutually below"));
                }
                if self.less(a, b) {
                    if let Some(c) = (0..n).find(|&c| self.less(b, c) && !self.less(a, c)) {
                        return bad(format!("{a} < {b} < {c} but not {a} < {c}"));
                    }
                }
            }
        }
        Ok(())
    }

    /// Elements in a linear extension (fewest predecessors first).
    fn linear_extension(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&x| self.below[x].iter().filter(|&&b| b).count());
        order
    }

    /// Simplicial complex of chains, one vertex per element.
    pub fn order_complex(&self) -> TypedComplex {
        let mut c = TypedComplex::new(self.registry.clone(), self.tags.clone());
        let n = self.len();
        let maximal: Vec<usize> = (0..n).filter(|&x| !(0..n).any(|y| self.less(x, y))).collect();
        let mut chain = Vec::new();
        for &top in &maximal {
            self.extend_down(top, &mut chain, &mut c);
        }
        c
    }

    fn extend_down(&self, x: usize, chain: &mut Vec<u32>, c: &mut TypedComplex) {
        chain.push(x as u32);
        let n = self.len();
        let covers: Vec<usize> =
            (0..n).filter(|&y| self.less(y, x) && !(0..n).any(|z| self.less(y, z) && self.less(z, x))).collect();
        if covers.is_empty() {
            c.insert(chain).expect("elements are vertices");
        } else {
            for y in covers {
                self.extend_down(y, chain, c);
            }
        }
        chain.pop();
    }

    /// Reduced Euler characteristic of the order complex from signed
    /// chain counts, without building the complex.
    pub fn reduced_euler_by_chains(&self) -> i64 {
        let mut f = vec![0i64; self.len()];
        for x in self.linear_extension() {
            f[x] = 1 - (0..self.len()).filter(|&y| self.less(y, x)).map(|y| f[y]).sum::<i64>();
        }
        f.iter().sum::<i64>() - 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boolean_lattice_proper_part_is_sphere() {
        // proper nonempty subsets of {0,1,2}: a hexagon
        let sets: Vec<u8> = (1..7).collect();
        let p = Poset::from_relation(6, |a, b| sets[a] != sets[b] && sets[a] & sets[b] == sets[a]);
        p.validate().unwrap();
        let c = p.order_complex();
        assert_eq!(c.f_vector(), vec![6, 6]);
        assert_eq!(c.euler_reduced(), -1);
        assert_eq!(p.reduced_euler_by_chains(), -1);
    }

    #[test]
    fn poset_with_top_is_cone() {
        let p = Poset::from_relation(4, |a, b| b == 3 && a != 3);
        let c = p.order_complex();
        assert_eq!(c.is_cone(), Some(3));
        assert_eq!(p.reduced_euler_by_chains(), 0);
    }

    #[test]
    fn closure_adds_transitive_pairs() {
        let mut p = Poset::from_relation(3, |_, _| false);
        p.add_relation(0, 1);
        p.add_relation(1, 2);
        assert!(p.validate().is_err());
        p.close();
        p.validate().unwrap();
        assert!(p.less(0, 2));
    }
}
