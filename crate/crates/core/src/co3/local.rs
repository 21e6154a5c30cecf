//! The flag complex of retained radical subgroups lying in the fixed
//! Sylow subgroup `S`, the orbit statistics of flags under normalizers of
//! their top group, and the replay of the thirty-five removal steps.

use std::collections::{BTreeSet, HashMap};

use super::{instance, Co3Error, LocalNormalizers, RadicalInstance, RadicalKind, SylowModel, PLANE_PAIRS};
use crate::complex::{Poset, TypeRegistry, TypedComplex};
use crate::morse::{apply_collapse, is_free_pair, CollapsePair, CollapseStep, Schedule};
use crate::perm::Permutation;
use crate::radical::Subgroup;

/// Vertex types in complex order.
pub const LOCAL_TYPES: [RadicalKind; 7] = [
    RadicalKind::P,
    RadicalKind::M,
    RadicalKind::L,
    RadicalKind::PSquare,
    RadicalKind::PMSquare,
    RadicalKind::PLSquare,
    RadicalKind::PMLSquare,
];

#[derive(Clone, Debug)]
pub struct LocalVertex {
    pub kind: RadicalKind,
    pub group: Subgroup,
}

#[derive(Clone, Debug)]
pub struct LocalComplex {
    pub vertices: Vec<LocalVertex>,
    pub complex: TypedComplex,
    index: HashMap<Subgroup, u32>,
}

fn type_index(kind: RadicalKind) -> u16 {
    LOCAL_TYPES.iter().position(|&k| k == kind).expect("retained type") as u16
}

impl LocalComplex {
    /// Vertices: the 55 points, the M-spaces `M_1, M_2, M_3`, and the
    /// instances of the remaining retained types; simplices are inclusion
    /// chains.
    pub fn build(model: &SylowModel, inst: &[RadicalInstance]) -> Self {
        let mut vertices: Vec<LocalVertex> = model
            .centrals
            .iter()
            .map(|&c| LocalVertex { kind: RadicalKind::P, group: model.s.closure(&[c]) })
            .collect();
        vertices.extend(model.labelled_m_spaces().into_iter().map(|group| LocalVertex { kind: RadicalKind::M, group }));
        for &kind in &LOCAL_TYPES[2..] {
            vertices.push(LocalVertex { kind, group: instance(inst, kind).group.clone() });
        }
        let names: Vec<&str> = LOCAL_TYPES.iter().map(|k| k.tag()).collect();
        let tags = vertices.iter().map(|v| type_index(v.kind)).collect();
        let mut poset = Poset::new(TypeRegistry::with_names(&names), tags);
        for (a, va) in vertices.iter().enumerate() {
            for (b, vb) in vertices.iter().enumerate() {
                if va.group.order() < vb.group.order() && va.group.is_subset(&vb.group) {
                    poset.add_relation(a, b);
                }
            }
        }
        let complex = poset.order_complex();
        let index = vertices.iter().enumerate().map(|(i, v)| (v.group.clone(), i as u32)).collect();
        LocalComplex { vertices, complex, index }
    }

    pub fn vertex_of(&self, h: &Subgroup) -> Option<u32> {
        self.index.get(h).copied()
    }

    pub fn of_kind(&self, kind: RadicalKind) -> Vec<u32> {
        (0..self.vertices.len() as u32).filter(|&v| self.vertices[v as usize].kind == kind).collect()
    }

    /// The single vertex of a type with one instance in `S`.
    pub fn unique(&self, kind: RadicalKind) -> u32 {
        let v = self.of_kind(kind);
        assert_eq!(v.len(), 1, "{} has {} vertices", kind.name(), v.len());
        v[0]
    }

    fn kinds_of(&self, simplex: &[u32]) -> Vec<RadicalKind> {
        let mut k: Vec<RadicalKind> = simplex.iter().map(|&v| self.vertices[v as usize].kind).collect();
        k.sort();
        k
    }

    /// Live simplices of the given type pattern in `c`.
    fn chains(&self, c: &TypedComplex, pattern: &[RadicalKind]) -> Vec<Vec<u32>> {
        let mut want = pattern.to_vec();
        want.sort();
        let mut out: Vec<Vec<u32>> = c.iter().filter(|s| self.kinds_of(s) == want).map(|s| s.to_vec()).collect();
        out.sort();
        out
    }

    fn vertex_of_kind(&self, simplex: &[u32], kind: RadicalKind) -> Option<u32> {
        simplex.iter().copied().find(|&v| self.vertices[v as usize].kind == kind)
    }

    /// The point of a type-`p` vertex.
    pub fn point(&self, v: u32, model: &SylowModel) -> u32 {
        let g = &self.vertices[v as usize].group;
        g.iter().find(|&x| x != model.s.identity()).expect("order two")
    }
}

/// Parses a chain of type tags such as `"p M LL pL□ pML□"`.
pub fn pattern(text: &str) -> Vec<RadicalKind> {
    text.split_whitespace().map(|t| RadicalKind::from_tag(t).unwrap_or_else(|| panic!("unknown type {t}"))).collect()
}

/// Named point sets of the model used by the removal steps.
pub struct PointSets {
    named: HashMap<&'static str, BTreeSet<u32>>,
}

impl PointSets {
    pub fn new(model: &SylowModel, inst: &[RadicalInstance]) -> Self {
        let pts = |h: &Subgroup| -> BTreeSet<u32> { model.points_of(h).into_iter().collect() };
        let plane = |k: usize| pts(&model.span(&["a1", PLANE_PAIRS[k].0, PLANE_PAIRS[k].1]));
        let mut named = HashMap::new();
        named.insert("pL□", pts(&instance(inst, RadicalKind::PLSquare).group));
        named.insert("pM□", pts(&instance(inst, RadicalKind::PMSquare).group));
        named.insert("p□", pts(&instance(inst, RadicalKind::PSquare).group));
        named.insert("𝕃", pts(&instance(inst, RadicalKind::L).group));
        named.insert("L", pts(&model.span(&["a1", "a2"])));
        named.insert("M1", pts(&model.m));
        named.insert("□1", plane(0));
        named.insert("□2", plane(1));
        named.insert("□3", plane(2));
        named.insert("p1", BTreeSet::from([model.z]));
        PointSets { named }
    }

    fn name(&self, n: &str) -> &BTreeSet<u32> {
        self.named.get(n.trim()).unwrap_or_else(|| panic!("unknown point set {n}"))
    }

    /// Evaluates `A`, `A∖B` or `(A∪B∪…)∖C`.
    pub fn eval(&self, expr: &str) -> BTreeSet<u32> {
        let (left, right) = match expr.split_once('∖') {
            Some((l, r)) => (l, Some(r)),
            None => (expr, None),
        };
        let left = left.trim().trim_start_matches('(').trim_end_matches(')');
        let mut set: BTreeSet<u32> = left.split('∪').flat_map(|n| self.name(n).iter().copied()).collect();
        if let Some(r) = right {
            for x in self.name(r) {
                set.remove(x);
            }
        }
        set
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MFilter {
    Any,
    First,
    SecondOrThird,
}

pub struct StepRow {
    pub number: usize,
    pub upper: &'static str,
    pub sigma: &'static str,
    pub points: Option<&'static str>,
    pub m: MFilter,
    /// Number of `sigma` instances inside `S`.
    pub expected: usize,
}

const fn row(
    number: usize,
    upper: &'static str,
    sigma: &'static str,
    points: Option<&'static str>,
    m: MFilter,
    expected: usize,
) -> StepRow {
    StepRow { number, upper, sigma, points, m, expected }
}

use MFilter::{Any, First, SecondOrThird};

pub const STEPS: [StepRow; 35] = [
    row(1, "p M LL pL□ pML□", "p M LL pML□", None, Any, 45),
    row(2, "M LL pL□ pML□", "M LL pML□", None, Any, 3),
    row(3, "p LL pL□ pML□", "p LL pML□", None, Any, 39),
    row(4, "LL pL□ pML□", "LL pML□", None, Any, 1),
    row(5, "p M pL□ pML□", "p pL□ pML□", Some("pL□∖p□"), Any, 24),
    row(6, "p p□ pL□ pML□", "p pL□ pML□", Some("p□∖𝕃"), Any, 16),
    row(7, "p p□ pM□ pML□", "p pM□ pML□", Some("p□∖M1"), Any, 24),
    row(8, "p M pM□ pML□", "p pM□ pML□", Some("M1∖p□"), Any, 8),
    row(9, "p M LL pL□", "p LL pL□", Some("𝕃∖L"), Any, 36),
    row(10, "p M pL□", "p pL□", Some("pL□∖p□"), Any, 24),
    row(11, "p p□ pL□", "p pL□", Some("p□∖𝕃"), Any, 16),
    row(12, "p p□ pM□", "p pM□", Some("p□∖M1"), Any, 24),
    row(13, "p M pM□", "p pM□", Some("M1∖p□"), Any, 8),
    row(14, "p p□ pL□ pML□", "p p□ pML□", Some("(□2∪□3)∖L"), Any, 8),
    row(15, "p M pL□ pML□", "p pL□ pML□", Some("(□2∪□3)∖L"), Any, 8),
    row(16, "p p□ pML□", "p pML□", Some("p□∖𝕃"), Any, 16),
    row(17, "p M pML□", "p pML□", Some("𝕃∖p□"), Any, 24),
    row(18, "p M pML□", "p pML□", Some("(□2∪□3)∖L"), Any, 8),
    row(19, "p M pL□ pML□", "p M pML□", Some("L"), SecondOrThird, 6),
    row(20, "p p□ pL□ pML□", "p p□ pL□", Some("(□1∪□2∪□3)∖L"), Any, 12),
    row(21, "p M pL□ pML□", "p pL□ pML□", Some("□1∖L"), Any, 4),
    row(22, "p p□ pM□ pML□", "p p□ pML□", Some("□1∖L"), Any, 4),
    row(23, "p M pM□ pML□", "p pM□ pML□", Some("□1∖L"), Any, 4),
    row(24, "p M pM□ pML□", "p M pM□", Some("□1∖p1"), Any, 6),
    row(25, "p p□ pM□ pML□", "p p□ pM□", Some("□1∖p1"), Any, 6),
    row(26, "p M pL□ pML□", "p M pML□", Some("L∖p1"), First, 2),
    row(27, "p p□ pL□ pML□", "p p□ pML□", Some("L∖p1"), Any, 2),
    row(28, "p M LL pL□", "p M pL□", Some("L∖p1"), Any, 6),
    row(29, "p M pL□", "p pL□", Some("(□1∪□2∪□3)∖L"), Any, 12),
    row(30, "p pM□ pML□", "p pM□", Some("□1∖p1"), Any, 6),
    row(31, "p M pML□", "p pML□", Some("□1∖L"), Any, 4),
    row(32, "p pL□ pML□", "p pML□", Some("L∖p1"), Any, 2),
    row(33, "M pL□ pML□", "M pML□", None, SecondOrThird, 2),
    row(34, "p p□ pL□", "p p□", Some("p□∖p1"), Any, 30),
    row(35, "p LL pL□", "p pL□", Some("L∖p1"), Any, 2),
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepStatus {
    /// Every pair collapsed with full freeness checking (chains topped by `S`).
    Certified,
    /// Some faces are maximal inside `S`; their partners lie over other
    /// Sylow subgroups, so freeness is checked only locally.
    Restricted,
    Failed,
}

#[derive(Clone, Debug)]
pub struct StepOutcome {
    pub number: usize,
    pub point_count: Option<usize>,
    pub sigma_count: usize,
    pub expected: usize,
    pub collapsed: usize,
    pub partner_outside: usize,
    pub failures: Vec<Vec<u32>>,
    pub status: StepStatus,
}

#[derive(Clone, Debug)]
pub struct Replay {
    pub steps: Vec<StepOutcome>,
    /// Pairs `sigma`, `sigma + p1` removed after the numbered steps.
    pub final_pairs: usize,
    /// Simplices with a square-type vertex left at the end.
    pub leftover: usize,
    pub initial_f_vector: Vec<usize>,
    pub final_f_vector: Vec<usize>,
    /// The collapses of steps 1 to 4, replayable on a fresh copy.
    pub first_four: Schedule,
    /// Whether what remains is exactly the flag complex on points,
    /// M-spaces and `R_L`.
    pub ends_on_lower: bool,
}

fn m_allowed(lc: &LocalComplex, simplex: &[u32], filter: MFilter) -> bool {
    let ms = lc.of_kind(RadicalKind::M);
    match (filter, lc.vertex_of_kind(simplex, RadicalKind::M)) {
        (Any, _) => true,
        (_, None) => false,
        (First, Some(m)) => m == ms[0],
        (SecondOrThird, Some(m)) => m == ms[1] || m == ms[2],
    }
}

fn run_step(
    lc: &LocalComplex,
    c: &mut TypedComplex,
    model: &SylowModel,
    sets: &PointSets,
    row: &StepRow,
    schedule: &mut Schedule,
) -> StepOutcome {
    let top = lc.unique(RadicalKind::PMLSquare);
    let upper = pattern(row.upper);
    let mut upper_sorted = upper.clone();
    upper_sorted.sort();
    let allowed = row.points.map(|e| sets.eval(e));
    let sigmas: Vec<Vec<u32>> = lc
        .chains(c, &pattern(row.sigma))
        .into_iter()
        .filter(|s| m_allowed(lc, s, row.m))
        .filter(|s| match (&allowed, lc.vertex_of_kind(s, RadicalKind::P)) {
            (None, _) => true,
            (Some(a), Some(p)) => a.contains(&lc.point(p, model)),
            (Some(_), None) => false,
        })
        .collect();
    let (mut collapsed, mut outside, mut failures) = (0, 0, Vec::new());
    for sigma in &sigmas {
        let id = c.id(sigma).expect("listed from live simplices");
        let candidates: Vec<Vec<u32>> = c
            .cofaces(id)
            .map(|t| c.simplex(t).to_vec())
            .filter(|t| lc.kinds_of(t) == upper_sorted)
            .collect();
        let free = candidates.into_iter().find(|t| is_free_pair(c, t, sigma).unwrap_or(false));
        if let Some(t) = free {
            let pair = CollapsePair::new(sigma, &t);
            apply_collapse(c, &pair).expect("checked free");
            schedule.push(CollapseStep::Collapse(pair));
            collapsed += 1;
        } else if c.live_coface_count(id) == 0 && !sigma.contains(&top) {
            c.remove_with_cofaces(sigma).expect("live");
            outside += 1;
        } else {
            failures.push(sigma.clone());
        }
    }
    let status = if !failures.is_empty() || sigmas.len() != row.expected {
        StepStatus::Failed
    } else if outside == 0 && sigmas.iter().all(|s| s.contains(&top)) {
        StepStatus::Certified
    } else {
        StepStatus::Restricted
    };
    StepOutcome {
        number: row.number,
        point_count: allowed.map(|a| a.len()),
        sigma_count: sigmas.len(),
        expected: row.expected,
        collapsed,
        partner_outside: outside,
        failures,
        status,
    }
}

/// Replays the numbered steps on a copy of the local complex, then pairs
/// every remaining square-type flag without a point with its extension by
/// the cone point.
pub fn replay_steps(lc: &LocalComplex, model: &SylowModel, sets: &PointSets) -> Replay {
    let mut c = lc.complex.clone();
    let initial_f_vector = c.f_vector();
    let mut schedule = Schedule::default();
    let mut steps = Vec::new();
    let mut first_four = Schedule::default();
    for row in &STEPS {
        schedule.begin_orbit(format!("step {}", row.number));
        steps.push(run_step(lc, &mut c, model, sets, row, &mut schedule));
        if row.number == 4 {
            first_four = schedule.clone();
        }
    }

    let p1 = lc.vertex_of(&model.s.closure(&[model.z])).expect("cone point is a vertex");
    let square = |s: &[u32]| s.iter().any(|&v| type_index(lc.vertices[v as usize].kind) >= 3);
    let mut final_pairs = 0;
    loop {
        let mut progress = false;
        let mut pending: Vec<Vec<u32>> = c
            .iter()
            .filter(|s| square(s) && !s.iter().any(|&v| lc.vertices[v as usize].kind == RadicalKind::P))
            .map(|s| s.to_vec())
            .collect();
        pending.sort_by_key(|s| std::cmp::Reverse(s.len()));
        for sigma in pending {
            if c.id(&sigma).is_none() {
                continue;
            }
            let mut upper = sigma.clone();
            upper.push(p1);
            if c.contains(&upper) && is_free_pair(&c, &upper, &sigma).unwrap_or(false) {
                apply_collapse(&mut c, &CollapsePair::new(&sigma, &upper)).expect("checked free");
                final_pairs += 1;
                progress = true;
            }
        }
        if !progress {
            break;
        }
    }
    let leftover = c.iter().filter(|s| square(s)).count();
    let live: BTreeSet<Vec<u32>> = c.iter().map(|s| s.to_vec()).collect();
    let lower: BTreeSet<Vec<u32>> = lc.complex.iter().filter(|s| !square(s)).map(|s| s.to_vec()).collect();
    Replay { steps, final_pairs, leftover, initial_f_vector, final_f_vector: c.f_vector(), first_four, ends_on_lower: live == lower }
}

/// A row of the flag-orbit table: flag type, order of the normalizer of
/// its top group, orbit sizes on the bottom groups.
pub struct OrbitRow {
    pub flag: &'static str,
    pub normalizer: u128,
    pub orbits: &'static [usize],
}

const fn orow(flag: &'static str, normalizer: u128, orbits: &'static [usize]) -> OrbitRow {
    OrbitRow { flag, normalizer, orbits }
}

const N0: u128 = 46_080;
const N1: u128 = 3_072;
const N2: u128 = 1_024;

pub const ORBIT_ROWS: [OrbitRow; 44] = [
    orow("p□", N0, &[1]),
    orow("pM□", N1, &[1]),
    orow("pL□", N1, &[1]),
    orow("pML□", N2, &[1]),
    orow("p p□", N0, &[1, 30]),
    orow("p pM□", N1, &[1, 6, 8, 24]),
    orow("p pL□", N1, &[1, 2, 12, 16, 24]),
    orow("p pML□", N2, &[1, 2, 4, 8, 8, 16, 16]),
    orow("M pM□", N1, &[1]),
    orow("M pL□", N1, &[3]),
    orow("M pML□", N2, &[1, 2]),
    orow("LL pL□", N1, &[1]),
    orow("LL pML□", N2, &[1]),
    orow("p□ pM□", N1, &[1]),
    orow("p□ pL□", N1, &[1]),
    orow("p□ pML□", N2, &[1]),
    orow("pM□ pML□", N2, &[1]),
    orow("pL□ pML□", N2, &[1]),
    orow("p M pM□", N1, &[1, 6, 8]),
    orow("p M pL□", N1, &[1, 2, 12, 24]),
    orow("p M pML□", N2, &[1, 2, 4, 8, 8, 16]),
    orow("p LL pL□", N1, &[1, 2, 12, 24]),
    orow("p LL pML□", N2, &[1, 2, 4, 8, 8, 16]),
    orow("p p□ pL□", N1, &[1, 2, 12, 16]),
    orow("p p□ pM□", N1, &[1, 6, 24]),
    orow("p p□ pML□", N2, &[1, 2, 4, 8, 16]),
    orow("p pM□ pML□", N2, &[1, 2, 4, 8, 8, 16]),
    orow("p pL□ pML□", N2, &[1, 2, 4, 8, 8, 16, 16]),
    orow("M LL pL□", N1, &[3]),
    orow("M LL pML□", N2, &[1, 2]),
    orow("M pM□ pML□", N2, &[1]),
    orow("M pL□ pML□", N2, &[1, 2]),
    orow("LL pL□ pML□", N2, &[1]),
    orow("p□ pL□ pML□", N2, &[1]),
    orow("p□ pM□ pML□", N2, &[1]),
    orow("p M LL pL□", N1, &[1, 2, 12, 24]),
    orow("p M LL pML□", N2, &[1, 2, 4, 8, 8, 16]),
    orow("p M pM□ pML□", N2, &[1, 2, 4, 8]),
    orow("p M pL□ pML□", N2, &[1, 2, 4, 8, 8, 16]),
    orow("p LL pL□ pML□", N2, &[1, 2, 4, 8, 8, 16]),
    orow("p p□ pM□ pML□", N2, &[1, 2, 4, 8, 16]),
    orow("p p□ pL□ pML□", N2, &[1, 2, 4, 8, 16]),
    orow("M LL pL□ pML□", N2, &[1, 2]),
    orow("p M LL pL□ pML□", N2, &[1, 2, 4, 8, 8, 16]),
];

#[derive(Clone, Debug)]
pub struct OrbitOutcome {
    pub flag: &'static str,
    pub expected_normalizer: u128,
    pub normalizer: u128,
    pub expected: Vec<usize>,
    pub orbits: Vec<usize>,
}

impl OrbitOutcome {
    pub fn passes(&self) -> bool {
        self.normalizer == self.expected_normalizer && self.orbits == self.expected
    }
}

/// Conjugation by `g` on the vertices lying in `top`, when it maps them
/// to vertices.
fn vertex_action(lc: &LocalComplex, model: &SylowModel, top: &Subgroup, g: &Permutation) -> Result<HashMap<u32, u32>, Co3Error> {
    let map: HashMap<u32, u32> = top
        .iter()
        .map(|x| {
            let y = model.element(x).conjugate_by(g);
            model.s.index_of(&y).filter(|&j| top.contains(j)).map(|j| (x, j))
        })
        .collect::<Option<_>>()
        .ok_or_else(|| Co3Error::Inconsistent("normalizer element moves the top group".into()))?;
    (0..lc.vertices.len() as u32)
        .filter(|&v| lc.vertices[v as usize].group.is_subset(top))
        .map(|v| {
            let img = Subgroup::from_indices(model.s.len(), lc.vertices[v as usize].group.iter().map(|x| map[&x]));
            let w = lc.vertex_of(&img).ok_or_else(|| {
                Co3Error::Inconsistent(format!("image of a {} vertex is not a vertex", lc.vertices[v as usize].kind.name()))
            })?;
            Ok((v, w))
        })
        .collect()
}

/// Orbit sizes of `N_G(x_n)` on the bottom groups of flags of each row's
/// type with top `x_n` in `S`.
pub fn flag_orbits(
    lc: &LocalComplex,
    model: &SylowModel,
    normalizers: &LocalNormalizers,
) -> Result<Vec<OrbitOutcome>, Co3Error> {
    ORBIT_ROWS
        .iter()
        .map(|row| {
            let kinds = pattern(row.flag);
            let (bottom, top_kind) = (kinds[0], *kinds.last().expect("nonempty"));
            let top_vertex = lc.unique(top_kind);
            let top = &lc.vertices[top_vertex as usize].group;
            let data = normalizers.of(top_kind);
            let actions: Vec<HashMap<u32, u32>> = data
                .normalizer
                .generators()
                .iter()
                .map(|g| vertex_action(lc, model, top, g))
                .collect::<Result<_, _>>()?;
            let objects: BTreeSet<u32> = lc
                .chains(&lc.complex, &kinds)
                .iter()
                .filter(|s| s.contains(&top_vertex))
                .filter_map(|s| lc.vertex_of_kind(s, bottom))
                .collect();
            let mut seen: BTreeSet<u32> = BTreeSet::new();
            let mut orbits = Vec::new();
            for &o in &objects {
                if !seen.insert(o) {
                    continue;
                }
                let mut stack = vec![o];
                let mut size = 0;
                while let Some(v) = stack.pop() {
                    size += 1;
                    for a in &actions {
                        let w = a[&v];
                        if !objects.contains(&w) {
                            return Err(Co3Error::Inconsistent(format!("{}: orbit leaves the flag objects", row.flag)));
                        }
                        if seen.insert(w) {
                            stack.push(w);
                        }
                    }
                }
                orbits.push(size);
            }
            orbits.sort_unstable();
            Ok(OrbitOutcome {
                flag: row.flag,
                expected_normalizer: row.normalizer,
                normalizer: data.normalizer.order(),
                expected: row.orbits.to_vec(),
                orbits,
            })
        })
        .collect()
}
