//! The local model of a Sylow 2-subgroup `S = 2^4.U_4`: its central
//! involutions, the normal pure central `2^4`, the map onto `U_4`, the
//! labelled lifts `z_1..z_10`, the line structure and the cone structure.

use std::collections::{BTreeSet, HashMap, HashSet};

use super::{Co3Context, Co3Error};
use crate::gf2::{reference_nilpotents, BitMatrix, U4Element, UPPER};
use crate::perm::{GroupHandle, Permutation};
use crate::radical::{FiniteGroup, Subgroup};

/// Generator pairs spanning, together with `a1`, the fifteen planes of the
/// cone structure in their reference order.
pub const PLANE_PAIRS: [(&str, &str); 15] = [
    ("a2", "a3"),
    ("a2", "z1"),
    ("a2", "z5"),
    ("a3", "z7"),
    ("a3", "z8"),
    ("a2a3", "z9"),
    ("a2a3", "z10"),
    ("z1", "z7"),
    ("z1", "z8"),
    ("z5", "z7"),
    ("z5", "z8"),
    ("a2z1", "a3z7"),
    ("a2z1", "a3z8"),
    ("a2z5", "a3z7"),
    ("a2z5", "a3z8"),
];

/// Lifts whose choice matters for [`PLANE_PAIRS`] (1-based labels).
const SEARCHED_LIFTS: [usize; 4] = [1, 5, 7, 8];

#[derive(Clone, Debug)]
pub struct PureCentral {
    pub group: Subgroup,
    pub rank: u32,
}

#[derive(Clone, Debug)]
pub struct SylowModel {
    pub handle: GroupHandle,
    pub s: FiniteGroup,
    /// Per element of `s`: whether it is a 2A involution of `G`.
    pub central: Vec<bool>,
    pub centrals: Vec<u32>,
    /// Every nontrivial pure central subgroup of `S`.
    pub pure: Vec<PureCentral>,
    /// Rank-4 pure central subgroups normal in `S`.
    pub normal_rank4: Vec<Subgroup>,
    pub m: Subgroup,
    /// `a1..a4`, adapted to the flag of fixed spaces; `a1 = z`.
    pub a: [u32; 4],
    coords: HashMap<u32, u8>,
    /// Upper entries of the image in `U_4`, per element (see [`UPPER`]).
    pub u4: Vec<u8>,
    /// Central involutions outside `M` over each `I + N_i`.
    pub over: Vec<Vec<u32>>,
    /// Chosen `z_1..z_10`.
    pub lifts: [u32; 10],
    /// Whether the lift search matched the listed planes to the intrinsic ones.
    pub lifts_matched: bool,
    /// Lift combinations tried before a match.
    pub lift_attempts: usize,
    pub z: u32,
}

fn bits_of(n: &BitMatrix) -> u8 {
    U4Element::new(n.add(&BitMatrix::identity(4)).expect("4x4")).expect("unitriangular").bits()
}

/// Multiplication of `U_4` on six-bit codes.
pub fn u4_mul(a: u8, b: u8) -> u8 {
    U4Element::from_bits(a).mul(&U4Element::from_bits(b)).bits()
}

impl SylowModel {
    pub fn build(ctx: &Co3Context, handle: GroupHandle) -> Result<Self, Co3Error> {
        let s = FiniteGroup::from_handle("S", &handle, 4096)?;
        if s.len() != 1024 {
            return Err(Co3Error::Inconsistent(format!("Sylow subgroup has order {}", s.len())));
        }
        let central: Vec<bool> = (0..s.len() as u32).map(|i| ctx.is_2a(s.element(i))).collect();
        let centrals: Vec<u32> = (0..s.len() as u32).filter(|&i| central[i as usize]).collect();
        let z = s.index_of(&ctx.z).ok_or_else(|| Co3Error::Inconsistent("z is not in S".into()))?;
        let pure = pure_central_subgroups(&s, &centrals);

        let normal_rank4: Vec<Subgroup> = pure
            .iter()
            .filter(|p| p.rank == 4 && s.generators().iter().all(|&g| s.normalizes(g, &p.group)))
            .map(|p| p.group.clone())
            .collect();
        let m = match normal_rank4.as_slice() {
            [m] => m.clone(),
            other => return Err(Co3Error::Inconsistent(format!("{} normal pure central 2^4", other.len()))),
        };

        let a = flag_basis(&s, &m)?;
        let mut coords = HashMap::new();
        for c in 0u8..16 {
            let x = (0..4).filter(|&i| c >> i & 1 == 1).fold(s.identity(), |acc, i| s.mul(acc, a[i]));
            coords.insert(x, c);
        }
        if coords.len() != 16 || a[0] != z {
            return Err(Co3Error::Inconsistent("basis of M does not start at z".into()));
        }

        let mut model = SylowModel {
            handle,
            s,
            central,
            centrals,
            pure,
            normal_rank4,
            m,
            a,
            coords,
            u4: Vec::new(),
            over: Vec::new(),
            lifts: [0; 10],
            lifts_matched: false,
            lift_attempts: 0,
            z,
        };
        model.u4 = (0..model.s.len() as u32).map(|x| model.u4_bits(x)).collect();
        let reference: Vec<u8> = reference_nilpotents().iter().map(bits_of).collect();
        model.over = reference
            .iter()
            .map(|&b| model.centrals.iter().copied().filter(|&c| !model.m.contains(c) && model.u4[c as usize] == b).collect())
            .collect();
        if model.over.iter().any(|o| o.is_empty()) {
            return Err(Co3Error::Inconsistent("some reference matrix has no central preimage".into()));
        }
        for i in 0..10 {
            model.lifts[i] = model.over[i][0];
        }
        model.search_lifts();
        Ok(model)
    }

    /// Image of `m` under `x m x^-1`, for `m` in `M`.
    fn act(&self, x: u32, m: u32) -> u32 {
        self.s.mul(self.s.mul(x, m), self.s.inv(x))
    }

    fn u4_bits(&self, x: u32) -> u8 {
        let mut bits = 0u8;
        for (k, &(i, j)) in UPPER.iter().enumerate() {
            let col = self.coords[&self.act(x, self.a[j])];
            bits |= (col >> i & 1) << k;
        }
        bits
    }

    /// Column of `x m x^-1` in the basis `a`, checked to be unitriangular.
    pub fn u4_matrix(&self, x: u32) -> U4Element {
        U4Element::from_bits(self.u4[x as usize])
    }

    pub fn coords(&self, m: u32) -> Option<u8> {
        self.coords.get(&m).copied()
    }

    pub fn from_coords(&self, c: u8) -> u32 {
        (0..4).filter(|&i| c >> i & 1 == 1).fold(self.s.identity(), |acc, i| self.s.mul(acc, self.a[i]))
    }

    /// Whether the recorded images are those of the full action (diagonal
    /// entries 1, lower entries 0).
    pub fn action_is_unitriangular(&self) -> bool {
        (0..self.s.len() as u32).all(|x| {
            (0..4).all(|j| {
                let col = self.coords[&self.act(x, self.a[j])];
                col >> j & 1 == 1 && (j + 1..4).all(|i| col >> i & 1 == 0)
            })
        })
    }

    /// Whether `x -> u4[x]` respects products, over all pairs.
    pub fn u4_is_homomorphism(&self) -> bool {
        let mut table = [[0u8; 64]; 64];
        for (a, row) in table.iter_mut().enumerate() {
            for (b, cell) in row.iter_mut().enumerate() {
                *cell = u4_mul(a as u8, b as u8);
            }
        }
        let n = self.s.len() as u32;
        (0..n).all(|x| (0..n).all(|y| self.u4[self.s.mul(x, y) as usize] == table[self.u4[x as usize] as usize][self.u4[y as usize] as usize]))
    }

    pub fn u4_image_size(&self) -> usize {
        self.u4.iter().collect::<HashSet<_>>().len()
    }

    pub fn u4_kernel(&self) -> Subgroup {
        Subgroup::from_indices(self.s.len(), (0..self.s.len() as u32).filter(|&x| self.u4[x as usize] == 0))
    }

    /// Product of named generators, e.g. `"a2z1"`.
    pub fn word(&self, w: &str) -> u32 {
        let mut out = self.s.identity();
        let bytes = w.as_bytes();
        let mut k = 0;
        while k < bytes.len() {
            let letter = bytes[k];
            let mut e = k + 1;
            while e < bytes.len() && bytes[e].is_ascii_digit() {
                e += 1;
            }
            let n: usize = w[k + 1..e].parse().expect("generator index");
            let g = match letter {
                b'a' => self.a[n - 1],
                b'z' => self.lifts[n - 1],
                _ => panic!("unknown generator letter in {w}"),
            };
            out = self.s.mul(out, g);
            k = e;
        }
        out
    }

    pub fn span(&self, words: &[&str]) -> Subgroup {
        let gens: Vec<u32> = words.iter().map(|w| self.word(w)).collect();
        self.s.closure(&gens)
    }

    pub fn points_of(&self, h: &Subgroup) -> Vec<u32> {
        h.iter().filter(|&x| self.central[x as usize]).collect()
    }

    pub fn is_pure_central(&self, h: &Subgroup) -> bool {
        h.iter().all(|x| x == self.s.identity() || self.central[x as usize]) && self.s.is_elementary_abelian(h, 2)
    }

    /// Kernel of `N_i` (1-based) as a subgroup of `M`.
    pub fn fixed_line(&self, i: usize) -> Vec<u32> {
        let n = &reference_nilpotents()[i - 1];
        (0u8..16)
            .filter(|&c| {
                let v: Vec<bool> = (0..4).map(|k| c >> k & 1 == 1).collect();
                n.apply(&v).iter().all(|&b| !b)
            })
            .map(|c| self.from_coords(c))
            .collect()
    }

    /// Whether the centrals over `I + N_i` are one coset of `ker N_i`.
    pub fn over_is_coset_of_fixed_line(&self, i: usize) -> bool {
        let over: BTreeSet<u32> = self.over[i - 1].iter().copied().collect();
        let c = self.over[i - 1][0];
        let coset: BTreeSet<u32> = self.fixed_line(i).iter().map(|&k| self.s.mul(c, k)).collect();
        over == coset
    }

    /// Whether the centrals over `I + N_i` form a coset of `L = <a1, a2>`.
    pub fn over_is_coset_of_l(&self, i: usize) -> bool {
        let over: BTreeSet<u32> = self.over[i - 1].iter().copied().collect();
        let c = self.over[i - 1][0];
        let l = self.span(&["a1", "a2"]);
        let coset: BTreeSet<u32> = l.iter().map(|k| self.s.mul(c, k)).collect();
        over == coset
    }

    pub fn r_p_square(&self) -> Subgroup {
        self.span(&["a1", "a2", "a3", "z1", "z5", "z7"])
    }

    /// Pure central rank-3 subgroups through `a1` inside `R_p□`.
    pub fn intrinsic_planes(&self) -> BTreeSet<Subgroup> {
        let r = self.r_p_square();
        self.pure.iter().filter(|p| p.rank == 3 && p.group.contains(self.z) && p.group.is_subset(&r)).map(|p| p.group.clone()).collect()
    }

    /// The listed planes `<a1, x, y>` for the current lifts.
    pub fn listed_planes(&self) -> Vec<Subgroup> {
        PLANE_PAIRS.iter().map(|(x, y)| self.span(&["a1", x, y])).collect()
    }

    fn listed_match(&self, intrinsic: &BTreeSet<Subgroup>) -> bool {
        let listed = self.listed_planes();
        listed.iter().all(|p| p.order() == 8 && self.is_pure_central(p))
            && listed.iter().cloned().collect::<BTreeSet<_>>() == *intrinsic
    }

    /// Tries every choice of the lifts that the plane list depends on and
    /// keeps the first whose listed planes are the intrinsic ones.
    fn search_lifts(&mut self) {
        let intrinsic = self.intrinsic_planes();
        let sizes: Vec<usize> = SEARCHED_LIFTS.iter().map(|&i| self.over[i - 1].len()).collect();
        let total: usize = sizes.iter().product();
        for combo in 0..total {
            let mut rest = combo;
            for (k, &i) in SEARCHED_LIFTS.iter().enumerate() {
                self.lifts[i - 1] = self.over[i - 1][rest % sizes[k]];
                rest /= sizes[k];
            }
            self.lift_attempts = combo + 1;
            if self.listed_match(&intrinsic) {
                self.lifts_matched = true;
                return;
            }
        }
        for &i in &SEARCHED_LIFTS {
            self.lifts[i - 1] = self.over[i - 1][0];
        }
    }

    /// Rank-4 pure central subgroups of `S`.
    pub fn m_spaces(&self) -> Vec<Subgroup> {
        self.pure.iter().filter(|p| p.rank == 4).map(|p| p.group.clone()).collect()
    }

    /// `M_1 = M`, `M_2 = <a1,a2,z1,z2>`, `M_3 = <a1,a2,z4,z5>`.
    pub fn labelled_m_spaces(&self) -> [Subgroup; 3] {
        [self.m.clone(), self.span(&["a1", "a2", "z1", "z2"]), self.span(&["a1", "a2", "z4", "z5"])]
    }

    /// Pure central subgroups not properly contained in another one.
    pub fn maximal_pure(&self) -> Vec<&PureCentral> {
        self.pure
            .iter()
            .filter(|p| !self.pure.iter().any(|q| q.rank > p.rank && p.group.is_subset(&q.group)))
            .collect()
    }

    pub fn element(&self, x: u32) -> &Permutation {
        self.s.element(x)
    }

    /// Permutation generators of a subgroup of `S`.
    pub fn handle_of(&self, h: &Subgroup) -> GroupHandle {
        let gens: Vec<Permutation> = self.s.generators_of(h).iter().map(|&x| self.s.element(x).clone()).collect();
        if gens.is_empty() {
            return GroupHandle::trivial(self.handle.degree());
        }
        GroupHandle::new(gens, 1).expect("same degree")
    }
}

/// Elementary abelian subgroups all of whose involutions are central, by
/// rank.
fn pure_central_subgroups(s: &FiniteGroup, centrals: &[u32]) -> Vec<PureCentral> {
    let is_central: HashSet<u32> = centrals.iter().copied().collect();
    let mut seen: HashSet<Subgroup> = HashSet::new();
    let mut layer: Vec<(Subgroup, Vec<u32>)> = Vec::new();
    for &c in centrals {
        let h = s.closure(&[c]);
        if seen.insert(h.clone()) {
            layer.push((h, vec![c]));
        }
    }
    let mut out = Vec::new();
    let mut rank = 1;
    while !layer.is_empty() {
        let mut next = Vec::new();
        for (h, gens) in &layer {
            for &c in centrals {
                if h.contains(c) || !gens.iter().all(|&g| s.commute(g, c)) {
                    continue;
                }
                if !h.iter().all(|x| is_central.contains(&s.mul(x, c))) {
                    continue;
                }
                let mut g2 = gens.clone();
                g2.push(c);
                let k = s.closure(&g2);
                if seen.insert(k.clone()) {
                    next.push((k, g2));
                }
            }
        }
        out.extend(layer.into_iter().map(|(group, _)| PureCentral { group, rank }));
        layer = next;
        rank += 1;
    }
    out
}

/// `a1..a4` with `<a1..ak>` the `k`-th term of the fixed-space flag of `S`
/// acting on `M`.
fn flag_basis(s: &FiniteGroup, m: &Subgroup) -> Result<[u32; 4], Co3Error> {
    let act = |x: u32, y: u32| s.mul(s.mul(x, y), s.inv(x));
    let mut layers: Vec<Vec<u32>> = vec![vec![s.identity()]];
    for _ in 0..4 {
        let prev: HashSet<u32> = layers.last().unwrap().iter().copied().collect();
        let next: Vec<u32> = m
            .iter()
            .filter(|&y| s.generators().iter().all(|&g| prev.contains(&s.mul(act(g, y), s.inv(y)))))
            .collect();
        layers.push(next);
    }
    let sizes: Vec<usize> = layers.iter().map(|l| l.len()).collect();
    if sizes != [1, 2, 4, 8, 16] {
        return Err(Co3Error::Inconsistent(format!("fixed-space flag has sizes {sizes:?}")));
    }
    let pick = |k: usize| *layers[k + 1].iter().filter(|y| !layers[k].contains(y)).min().expect("layer grows");
    Ok([pick(0), pick(1), pick(2), pick(3)])
}
