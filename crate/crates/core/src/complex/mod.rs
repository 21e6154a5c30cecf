//! Typed simplicial complexes, posets and their order complexes.

mod action;
mod dump;
mod poset;

pub use action::{euler_from_orbits, fixed_subcomplex, ComplexAction};
pub use dump::parse_dump;
pub use poset::Poset;

use std::collections::HashMap;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::gf2::{betti_f2, betti_sparse, BitMatrix, Betti, SparseColumns};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ComplexError {
    #[error("vertex {0} does not exist")]
    UnknownVertex(u32),
    #[error("simplex {0:?} is not in the complex")]
    MissingSimplex(Vec<u32>),
    #[error("simplex {0:?} has two vertices of one type")]
    RepeatedType(Vec<u32>),
    #[error("simplex {0:?} is fixed setwise but not pointwise")]
    NotAdmissible(Vec<u32>),
    #[error("vertex map does not preserve the complex: {0}")]
    BadAction(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Names for the opaque vertex type tags.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TypeRegistry {
    names: Vec<String>,
}

impl TypeRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_names<S: AsRef<str>>(names: &[S]) -> Self {
        let mut r = Self::new();
        for n in names {
            r.register(n.as_ref());
        }
        r
    }

    /// Tag for `name`, registering it on first use.
    pub fn register(&mut self, name: &str) -> u16 {
        if let Some(t) = self.tag(name) {
            return t;
        }
        self.names.push(name.to_string());
        (self.names.len() - 1) as u16
    }

    pub fn tag(&self, name: &str) -> Option<u16> {
        self.names.iter().position(|n| n == name).map(|t| t as u16)
    }

    pub fn name(&self, tag: u16) -> &str {
        &self.names[tag as usize]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

/// A face-closed set of simplices on typed vertices.
///
/// Simplices are sorted vertex lists with stable ids; removal only marks
/// them dead, so ids stay valid for certificates. Each simplex keeps its
/// immediate cofaces and a count of the live ones, which makes free-face
/// queries O(1).
#[derive(Clone, Debug)]
pub struct TypedComplex {
    registry: TypeRegistry,
    vtypes: Vec<u16>,
    flag_typed: bool,
    simplices: Vec<Box<[u32]>>,
    alive: Vec<bool>,
    index: HashMap<Box<[u32]>, u32>,
    cofaces: Vec<Vec<u32>>,
    live_cofaces: Vec<u32>,
    live: usize,
}

impl TypedComplex {
    /// Empty complex on the given vertex types. Vertices are added as
    /// 0-simplices only once inserted.
    pub fn new(registry: TypeRegistry, vtypes: Vec<u16>) -> Self {
        TypedComplex {
            registry,
            vtypes,
            flag_typed: false,
            simplices: Vec::new(),
            alive: Vec::new(),
            index: HashMap::new(),
            cofaces: Vec::new(),
            live_cofaces: Vec::new(),
            live: 0,
        }
    }

    /// Complex whose simplices must use each vertex type at most once.
    pub fn new_flag(registry: TypeRegistry, vtypes: Vec<u16>) -> Self {
        TypedComplex { flag_typed: true, ..Self::new(registry, vtypes) }
    }

    /// Untyped complex on `n` vertices, all inserted.
    pub fn untyped(n: usize) -> Self {
        let mut c = Self::new(TypeRegistry::with_names(&["v"]), vec![0; n]);
        for v in 0..n as u32 {
            c.insert(&[v]).expect("vertex exists");
        }
        c
    }

    /// Untyped complex generated by the given simplices.
    pub fn from_simplices(n: usize, simplices: &[Vec<u32>]) -> Result<Self, ComplexError> {
        let mut c = Self::new(TypeRegistry::with_names(&["v"]), vec![0; n]);
        for s in simplices {
            c.insert(s)?;
        }
        Ok(c)
    }

    pub fn registry(&self) -> &TypeRegistry {
        &self.registry
    }

    pub fn is_flag_typed(&self) -> bool {
        self.flag_typed
    }

    pub fn vertex_capacity(&self) -> usize {
        self.vtypes.len()
    }

    pub fn vertex_type(&self, v: u32) -> u16 {
        self.vtypes[v as usize]
    }

    pub fn vertex_types(&self) -> &[u16] {
        &self.vtypes
    }

    pub fn add_vertex(&mut self, tag: u16) -> u32 {
        self.vtypes.push(tag);
        (self.vtypes.len() - 1) as u32
    }

    /// Inserts a simplex and all of its faces; returns its id.
    pub fn insert(&mut self, verts: &[u32]) -> Result<u32, ComplexError> {
        let mut s = verts.to_vec();
        s.sort_unstable();
        s.dedup();
        if let Some(&v) = s.iter().find(|&&v| v as usize >= self.vtypes.len()) {
            return Err(ComplexError::UnknownVertex(v));
        }
        if self.flag_typed {
            let mut t: Vec<u16> = s.iter().map(|&v| self.vtypes[v as usize]).collect();
            t.sort_unstable();
            if t.windows(2).any(|w| w[0] == w[1]) {
                return Err(ComplexError::RepeatedType(s));
            }
        }
        Ok(self.insert_sorted(&s))
    }

    fn insert_sorted(&mut self, s: &[u32]) -> u32 {
        if let Some(&id) = self.index.get(s) {
            if self.alive[id as usize] {
                return id;
            }
        }
        let faces: Vec<u32> = if s.len() > 1 {
            (0..s.len())
                .map(|i| {
                    let f: Vec<u32> = s.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &v)| v).collect();
                    self.insert_sorted(&f)
                })
                .collect()
        } else {
            Vec::new()
        };
        let id = match self.index.get(s) {
            Some(&id) => {
                self.alive[id as usize] = true;
                id
            }
            None => {
                let id = self.simplices.len() as u32;
                self.simplices.push(s.into());
                self.alive.push(true);
                self.cofaces.push(Vec::new());
                self.live_cofaces.push(0);
                self.index.insert(s.into(), id);
                for &f in &faces {
                    self.cofaces[f as usize].push(id);
                }
                id
            }
        };
        for &f in &faces {
            self.live_cofaces[f as usize] += 1;
        }
        self.live += 1;
        id
    }

    /// Id of a live simplex, given in any vertex order.
    pub fn id(&self, verts: &[u32]) -> Option<u32> {
        let mut s = verts.to_vec();
        s.sort_unstable();
        s.dedup();
        self.index.get(s.as_slice()).copied().filter(|&i| self.alive[i as usize])
    }

    pub fn contains(&self, verts: &[u32]) -> bool {
        self.id(verts).is_some()
    }

    pub fn simplex(&self, id: u32) -> &[u32] {
        &self.simplices[id as usize]
    }

    pub fn is_alive(&self, id: u32) -> bool {
        self.alive[id as usize]
    }

    /// Number of live simplices.
    pub fn len(&self) -> usize {
        self.live
    }

    pub fn is_empty(&self) -> bool {
        self.live == 0
    }

    /// Live simplex ids.
    pub fn ids(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.simplices.len() as u32).filter(|&i| self.alive[i as usize])
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u32]> + '_ {
        self.ids().map(|i| self.simplex(i))
    }

    /// Live vertices in increasing order.
    pub fn vertices(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.iter().filter(|s| s.len() == 1).map(|s| s[0]).collect();
        v.sort_unstable();
        v
    }

    /// Dimension, or -1 when empty.
    pub fn dim(&self) -> i32 {
        self.iter().map(|s| s.len() as i32 - 1).max().unwrap_or(-1)
    }

    /// Live simplex counts by dimension.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut f = vec![0; (self.dim() + 1).max(0) as usize];
        for s in self.iter() {
            f[s.len() - 1] += 1;
        }
        f
    }

    pub fn live_coface_count(&self, id: u32) -> u32 {
        self.live_cofaces[id as usize]
    }

    /// Live immediate cofaces.
    pub fn cofaces(&self, id: u32) -> impl Iterator<Item = u32> + '_ {
        self.cofaces[id as usize].iter().copied().filter(|&c| self.alive[c as usize])
    }

    /// Ids of the codimension-one faces (all live in a face-closed complex).
    pub fn faces(&self, id: u32) -> Vec<u32> {
        let s = self.simplex(id);
        if s.len() < 2 {
            return Vec::new();
        }
        (0..s.len())
            .map(|i| {
                let f: Vec<u32> = s.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &v)| v).collect();
                self.index[f.as_slice()]
            })
            .collect()
    }

    pub fn is_maximal(&self, id: u32) -> bool {
        self.alive[id as usize] && self.live_cofaces[id as usize] == 0
    }

    pub fn maximal_simplices(&self) -> Vec<&[u32]> {
        self.ids().filter(|&i| self.live_cofaces[i as usize] == 0).map(|i| self.simplex(i)).collect()
    }

    /// Removes a live simplex without live cofaces.
    pub(crate) fn remove_id(&mut self, id: u32) {
        debug_assert!(self.alive[id as usize] && self.live_cofaces[id as usize] == 0);
        self.alive[id as usize] = false;
        self.live -= 1;
        for f in self.faces(id) {
            self.live_cofaces[f as usize] -= 1;
        }
    }

    /// Removes a simplex together with everything containing it.
    pub fn remove_with_cofaces(&mut self, verts: &[u32]) -> Result<usize, ComplexError> {
        let id = self.id(verts).ok_or_else(|| ComplexError::MissingSimplex(verts.to_vec()))?;
        let mut order = Vec::new();
        let mut stack = vec![id];
        let mut seen = std::collections::HashSet::new();
        while let Some(x) = stack.pop() {
            if seen.insert(x) {
                order.push(x);
                stack.extend(self.cofaces(x));
            }
        }
        order.sort_by_key(|&x| std::cmp::Reverse(self.simplex(x).len()));
        for &x in &order {
            self.remove_id(x);
        }
        Ok(order.len())
    }

    /// Sum of `(-1)^dim` over simplices, minus one.
    pub fn euler_reduced(&self) -> i64 {
        self.iter().map(|s| if s.len() % 2 == 1 { 1 } else { -1 }).sum::<i64>() - 1
    }

    fn indexed_by_dim(&self) -> Vec<Vec<u32>> {
        let mut by_dim: Vec<Vec<u32>> = vec![Vec::new(); (self.dim() + 1).max(0) as usize];
        for i in self.ids() {
            by_dim[self.simplex(i).len() - 1].push(i);
        }
        for d in &mut by_dim {
            d.sort_by(|&a, &b| self.simplex(a).cmp(self.simplex(b)));
        }
        by_dim
    }

    /// Dense boundary matrices `d_1 .. d_dim` over F2.
    pub fn boundary_matrices(&self) -> Vec<BitMatrix> {
        let by_dim = self.indexed_by_dim();
        let pos: HashMap<u32, usize> = by_dim.iter().flat_map(|d| d.iter().enumerate().map(|(k, &i)| (i, k))).collect();
        (1..by_dim.len())
            .map(|d| {
                let mut m = BitMatrix::zeros(by_dim[d - 1].len(), by_dim[d].len());
                for (c, &s) in by_dim[d].iter().enumerate() {
                    for f in self.faces(s) {
                        m.set(pos[&f], c, true);
                    }
                }
                m
            })
            .collect()
    }

    fn sparse_boundaries(&self) -> Vec<SparseColumns> {
        let by_dim = self.indexed_by_dim();
        let pos: HashMap<u32, usize> = by_dim.iter().flat_map(|d| d.iter().enumerate().map(|(k, &i)| (i, k))).collect();
        (1..by_dim.len())
            .map(|d| SparseColumns {
                rows: by_dim[d - 1].len(),
                columns: by_dim[d]
                    .iter()
                    .map(|&s| {
                        let mut col: Vec<u32> = self.faces(s).iter().map(|f| pos[f] as u32).collect();
                        col.sort_unstable();
                        col
                    })
                    .collect(),
            })
            .collect()
    }

    /// F2 Betti numbers; dense elimination for small complexes, sparse
    /// column reduction otherwise.
    pub fn betti(&self) -> Betti {
        if self.is_empty() {
            return Betti { betti: Vec::new(), reduced0: -1 };
        }
        let f = self.f_vector();
        let dense_ok = f.windows(2).all(|w| w[0] * w[1] <= 1 << 24);
        let b = if dense_ok && f.len() > 1 {
            betti_f2(&self.boundary_matrices())
        } else if f.len() == 1 {
            return Betti { betti: vec![f[0]], reduced0: f[0] as i64 - 1 };
        } else {
            betti_sparse(&self.sparse_boundaries())
        };
        b.expect("simplicial boundaries compose to zero")
    }

    /// Closure of the simplices containing `v`.
    pub fn star(&self, v: u32) -> Result<TypedComplex, ComplexError> {
        self.id(&[v]).ok_or(ComplexError::UnknownVertex(v))?;
        let mut out = self.empty_like();
        for id in self.containing(v) {
            out.insert_sorted(&self.simplices[id as usize]);
        }
        Ok(out)
    }

    /// The link: simplices of the star with `v` deleted.
    pub fn residue(&self, v: u32) -> Result<TypedComplex, ComplexError> {
        self.id(&[v]).ok_or(ComplexError::UnknownVertex(v))?;
        let mut out = self.empty_like();
        for id in self.containing(v) {
            let s = &self.simplices[id as usize];
            if s.len() > 1 {
                let f: Vec<u32> = s.iter().copied().filter(|&x| x != v).collect();
                out.insert_sorted(&f);
            }
        }
        Ok(out)
    }

    /// Ids of the live simplices containing vertex `v`, found by walking
    /// cofaces up from `{v}`.
    fn containing(&self, v: u32) -> Vec<u32> {
        let Some(start) = self.id(&[v]) else { return Vec::new() };
        let mut seen = std::collections::HashSet::from([start]);
        let mut stack = vec![start];
        let mut out = Vec::new();
        while let Some(x) = stack.pop() {
            out.push(x);
            for c in self.cofaces(x) {
                if seen.insert(c) {
                    stack.push(c);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Same vertex set and types, no simplices.
    pub fn empty_like(&self) -> TypedComplex {
        TypedComplex { flag_typed: self.flag_typed, ..TypedComplex::new(self.registry.clone(), self.vtypes.clone()) }
    }

    /// Least vertex lying in every maximal simplex.
    pub fn is_cone(&self) -> Option<u32> {
        let maximal = self.maximal_simplices();
        let first = maximal.iter().min_by_key(|s| s.len())?;
        first.iter().copied().filter(|v| maximal.iter().all(|s| s.binary_search(v).is_ok())).min()
    }

    /// Fresh complex holding only the live simplices.
    pub fn compact(&self) -> TypedComplex {
        let mut out = self.empty_like();
        for d in self.indexed_by_dim() {
            for i in d {
                out.insert_sorted(&self.simplices[i as usize]);
            }
        }
        out
    }

    /// SHA-256 over the sorted live simplices.
    pub fn content_hash(&self) -> String {
        let mut all: Vec<&[u32]> = self.iter().collect();
        all.sort();
        let mut h = Sha256::new();
        for s in all {
            for v in s {
                h.update(v.to_le_bytes());
            }
            h.update(u32::MAX.to_le_bytes());
        }
        hex::encode(h.finalize())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn hollow_triangle() -> TypedComplex {
        TypedComplex::from_simplices(3, &[vec![0, 1], vec![0, 2], vec![1, 2]]).unwrap()
    }

    #[test]
    fn faces_are_closed() {
        let c = TypedComplex::from_simplices(4, &[vec![0, 1, 2, 3]]).unwrap();
        assert_eq!(c.len(), 15);
        assert_eq!(c.f_vector(), vec![4, 6, 4, 1]);
        assert_eq!(c.euler_reduced(), 0);
        assert_eq!(c.is_cone(), Some(0));
    }

    #[test]
    fn circle() {
        let c = hollow_triangle();
        assert_eq!(c.euler_reduced(), -1);
        assert_eq!(c.is_cone(), None);
        let r = c.residue(0).unwrap();
        assert_eq!(r.vertices(), vec![1, 2]);
        assert_eq!(r.len(), 2);
        assert_eq!(c.betti().betti, vec![1, 1]);
    }

    #[test]
    fn point_and_empty() {
        let p = TypedComplex::untyped(1);
        assert_eq!(p.euler_reduced(), 0);
        assert!(p.betti().is_acyclic());
        let e = TypedComplex::untyped(0);
        assert_eq!(e.euler_reduced(), -1);
        assert_eq!(e.betti().reduced0, -1);
    }

    #[test]
    fn cone_residue_is_base() {
        let c = TypedComplex::from_simplices(4, &[vec![3, 0, 1], vec![3, 1, 2]]).unwrap();
        assert_eq!(c.is_cone(), Some(1));
        let r = c.residue(3).unwrap();
        assert_eq!(r.maximal_simplices(), vec![&[0u32, 1][..], &[1, 2][..]]);
    }

    #[test]
    fn flag_typing_is_enforced() {
        let reg = TypeRegistry::with_names(&["P", "L"]);
        let mut c = TypedComplex::new_flag(reg, vec![0, 0, 1]);
        assert!(c.insert(&[0, 2]).is_ok());
        assert_eq!(c.insert(&[0, 1]), Err(ComplexError::RepeatedType(vec![0, 1])));
    }

    #[test]
    fn removal_keeps_face_closure() {
        let mut c = TypedComplex::from_simplices(3, &[vec![0, 1, 2]]).unwrap();
        let n = c.remove_with_cofaces(&[0]).unwrap();
        assert_eq!(n, 4);
        assert_eq!(c.maximal_simplices(), vec![&[1u32, 2][..]]);
        assert_eq!(c.compact().content_hash(), c.content_hash());
    }
}
