//! The point residue of `z` in the 2-local geometry, the incidence axioms
//! checked over the whole 2A class, and the complex of simplices fixed by
//! `z`.
//!
//! Points are indices into the 2A class. Lines, planes and M-spaces are
//! sorted arrays of point indices.

use std::collections::{BTreeMap, HashMap, HashSet};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{images_commute, Co3Context, Co3Error};
use crate::complex::{TypeRegistry, TypedComplex};
use crate::gf2::Betti;
use crate::morse::{greedy_collapse, remove_star_if_cone, CollapseCertificate, CollapseStep, Schedule};
use crate::perm::Permutation;

pub type Line = [u32; 3];
pub type MSpace = [u32; 15];

/// Points, lines, planes and M-spaces through the point `z`.
#[derive(Clone, Debug)]
pub struct PointResidue {
    pub z: u32,
    /// Points commuting with `z`, `z` included, sorted.
    pub perp: Vec<u32>,
    pub lines: Vec<Line>,
    pub planes: Vec<[u32; 7]>,
    pub mspaces: Vec<MSpace>,
    /// `q` in `perp` with `zq` outside 2A.
    pub product_failures: usize,
}

fn images(ctx: &Co3Context, k: u32) -> &[u16] {
    ctx.class2a.element_images(k as usize).expect("2A class stored in full")
}

fn commute(ctx: &Co3Context, a: u32, b: u32) -> bool {
    images_commute(images(ctx, a), images(ctx, b))
}

/// Class index of the product of two points, when it is a point.
pub fn product(ctx: &Co3Context, a: u32, b: u32) -> Option<u32> {
    let (x, y) = (images(ctx, a), images(ctx, b));
    let p = Permutation::from_u16_unchecked(x.iter().map(|&i| y[i as usize]).collect());
    ctx.point_index(&p)
}

/// Closure of a set of commuting points when every product is a point.
fn pure_span(ctx: &Co3Context, gens: &[u32]) -> Option<Vec<u32>> {
    let mut pts: Vec<u32> = Vec::new();
    for &g in gens {
        if pts.contains(&g) {
            continue;
        }
        let mut next = pts.clone();
        next.push(g);
        for &x in &pts {
            next.push(product(ctx, x, g)?);
        }
        pts = next;
    }
    pts.sort_unstable();
    pts.dedup();
    Some(pts)
}

fn sorted<const N: usize>(v: Vec<u32>) -> [u32; N] {
    let mut a: [u32; N] = v.try_into().expect("span has the expected size");
    a.sort_unstable();
    a
}

impl PointResidue {
    pub fn build(ctx: &Co3Context) -> Result<Self, Co3Error> {
        let z = ctx.point_index(&ctx.z).ok_or_else(|| Co3Error::Inconsistent("z is not 2A".into()))?;
        let n = ctx.class2a.len() as u32;
        let zi = images(ctx, z);
        let perp: Vec<u32> = (0..n).into_par_iter().filter(|&k| images_commute(zi, images(ctx, k))).collect();

        let mut product_failures = 0;
        let mut lines: HashSet<Line> = HashSet::new();
        for &q in perp.iter().filter(|&&q| q != z) {
            match product(ctx, z, q) {
                Some(r) => {
                    lines.insert(sorted(vec![z, q, r]));
                }
                None => product_failures += 1,
            }
        }
        let mut lines: Vec<Line> = lines.into_iter().collect();
        lines.sort_unstable();

        let planes: HashSet<[u32; 7]> = lines
            .par_iter()
            .flat_map_iter(|l| {
                let q = if l[0] == z { l[1] } else { l[0] };
                perp.iter()
                    .filter(move |&&r| !l.contains(&r) && commute(ctx, q, r))
                    .filter_map(move |&r| pure_span(ctx, &[z, q, r]).map(sorted::<7>))
            })
            .collect();
        let mut planes: Vec<[u32; 7]> = planes.into_iter().collect();
        planes.sort_unstable();

        let mspaces: HashSet<MSpace> = planes
            .par_iter()
            .flat_map_iter(|pl| {
                perp.iter()
                    .filter(move |&&s| !pl.contains(&s) && pl.iter().all(|&x| commute(ctx, x, s)))
                    .filter_map(move |&s| pure_span(ctx, &[pl[0], pl[1], pl[2], pl[3], pl[4], pl[5], pl[6], s]))
                    .filter(|v| v.len() == 15)
                    .map(sorted::<15>)
            })
            .collect();
        let mut mspaces: Vec<MSpace> = mspaces.into_iter().collect();
        mspaces.sort_unstable();

        Ok(PointResidue { z, perp, lines, planes, mspaces, product_failures })
    }

    /// Lines inside an M-space.
    pub fn lines_in(ctx: &Co3Context, m: &[u32]) -> usize {
        let mut count = 0;
        for (i, &a) in m.iter().enumerate() {
            for &b in &m[i + 1..] {
                if let Some(c) = product(ctx, a, b) {
                    if c > b && m.contains(&c) {
                        count += 1;
                    }
                }
            }
        }
        count
    }

    /// Number of M-spaces through `z` containing each plane through `z`.
    pub fn mspaces_per_plane(&self) -> Vec<usize> {
        self.planes.iter().map(|pl| self.mspaces.iter().filter(|m| pl.iter().all(|x| m.contains(x))).count()).collect()
    }

    /// Histogram of `|M ∩ M'|` over pairs of M-spaces through `z`.
    pub fn mspace_meets(&self) -> BTreeMap<usize, usize> {
        let mut hist = BTreeMap::new();
        for (i, a) in self.mspaces.iter().enumerate() {
            for b in &self.mspaces[i + 1..] {
                *hist.entry(a.iter().filter(|x| b.contains(x)).count()).or_insert(0) += 1;
            }
        }
        hist
    }

    /// The unique M-space through `z` containing the given points, if any
    /// and if unique.
    pub fn mspace_over(&self, pts: &[u32]) -> Option<&MSpace> {
        let mut it = self.mspaces.iter().filter(|m| pts.iter().all(|x| m.contains(x)));
        let first = it.next()?;
        it.next().is_none().then_some(first)
    }
}

/// For every point `q` of the class, how many points of `set` commute with
/// `q`; returned as a histogram, together with the points `q` outside
/// `set` whose commuting points do not form a point, line or nothing.
pub fn perp_histogram(ctx: &Co3Context, set: &[u32]) -> (BTreeMap<usize, usize>, usize) {
    let n = ctx.class2a.len() as u32;
    let member: HashSet<u32> = set.iter().copied().collect();
    let (hist, bad) = (0..n)
        .into_par_iter()
        .map(|q| {
            let qi = images(ctx, q);
            let hits: Vec<u32> = set.iter().copied().filter(|&x| images_commute(qi, images(ctx, x))).collect();
            let bad = !member.contains(&q)
                && match hits.len() {
                    0 | 1 => false,
                    3 => product(ctx, hits[0], hits[1]) != Some(hits[2]) && product(ctx, hits[0], hits[2]) != Some(hits[1]),
                    _ => true,
                };
            (hits.len(), bad)
        })
        .fold(
            || (BTreeMap::new(), 0usize),
            |(mut h, b), (k, bad)| {
                *h.entry(k).or_insert(0usize) += 1;
                (h, b + bad as usize)
            },
        )
        .reduce(
            || (BTreeMap::new(), 0),
            |(mut a, x), (b, y)| {
                for (k, v) in b {
                    *a.entry(k).or_insert(0) += v;
                }
                (a, x + y)
            },
        );
    (hist, bad)
}

/// Samples 2B involutions in `C(z)` and counts those `r` with `zr` an
/// involution, and among them those where `zr` is not 2B by signature.
pub fn sample_2b_products(ctx: &Co3Context, samples: usize, seed: u64) -> (usize, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut tested, mut failures, mut tries) = (0, 0, 0);
    while tested < samples && tries < 200 * samples {
        tries += 1;
        let g = ctx.cz.random_element(&mut rng);
        let o = g.order();
        if o % 2 == 1 {
            continue;
        }
        let r = g.pow(o / 2);
        if ctx.classify_involution(&r) != Some(false) {
            continue;
        }
        let zr = ctx.z.compose(&r);
        if !zr.is_involution() {
            continue;
        }
        tested += 1;
        if ctx.classify_involution(&zr) != Some(false) {
            failures += 1;
        }
    }
    (tested, failures)
}

/// The subcomplex of the geometry fixed by `z`, with the vertex data of
/// each simplex type.
#[derive(Clone, Debug)]
pub struct FixedComplex {
    pub complex: TypedComplex,
    /// Vertex id to its point set; points have one element.
    pub objects: Vec<Vec<u32>>,
    /// Vertex id of `z`.
    pub apex: u32,
    /// How many points of each vertex are fixed by `z`.
    pub fixed_counts: Vec<usize>,
    /// Whether the vertex contains `z`.
    pub through_z: Vec<bool>,
}

pub const POINT: u16 = 0;
pub const LINE: u16 = 1;
pub const MSPACE: u16 = 2;

/// Conjugation by `g` restricted to `perp`, as a map of class indices.
fn conjugation_map(ctx: &Co3Context, perp: &[u32], g: &Permutation) -> Result<HashMap<u32, u32>, Co3Error> {
    perp.iter()
        .map(|&k| {
            let img = ctx.point(k).conjugate_by(g);
            let j = ctx.point_index(&img).ok_or_else(|| Co3Error::Inconsistent("conjugate left 2A".into()))?;
            Ok((k, j))
        })
        .collect()
}

impl FixedComplex {
    pub fn build(ctx: &Co3Context, res: &PointResidue) -> Result<Self, Co3Error> {
        let fixed: HashSet<u32> = res.perp.iter().copied().collect();
        let zmap = |k: u32| -> u32 { ctx.point_index(&ctx.point(k).conjugate_by(&ctx.z)).expect("2A is closed") };

        let per_point: Vec<(Vec<Line>, Vec<MSpace>)> = res
            .perp
            .par_iter()
            .map(|&q| -> Result<_, Co3Error> {
                let g = ctx.class2a.transversal_element(q as usize);
                let map = conjugation_map(ctx, &res.perp, &g)?;
                let stable = |pts: &[u32]| pts.iter().all(|&x| pts.contains(&zmap(x)));
                let lines = res
                    .lines
                    .iter()
                    .map(|l| sorted::<3>(l.iter().map(|x| map[x]).collect()))
                    .filter(|l| stable(l))
                    .collect();
                let ms = res
                    .mspaces
                    .iter()
                    .map(|m| sorted::<15>(m.iter().map(|x| map[x]).collect()))
                    .filter(|m| stable(m))
                    .collect();
                Ok((lines, ms))
            })
            .collect::<Result<_, _>>()?;
        let mut lines: Vec<Line> = per_point.iter().flat_map(|(l, _)| l.iter().copied()).collect();
        lines.sort_unstable();
        lines.dedup();
        let mut mspaces: Vec<MSpace> = per_point.iter().flat_map(|(_, m)| m.iter().copied()).collect();
        mspaces.sort_unstable();
        mspaces.dedup();

        let mut objects: Vec<Vec<u32>> = res.perp.iter().map(|&q| vec![q]).collect();
        let mut types = vec![POINT; objects.len()];
        let point_vertex: HashMap<u32, u32> = res.perp.iter().enumerate().map(|(i, &q)| (q, i as u32)).collect();
        let line_base = objects.len() as u32;
        objects.extend(lines.iter().map(|l| l.to_vec()));
        types.extend(std::iter::repeat_n(LINE, lines.len()));
        let m_base = objects.len() as u32;
        objects.extend(mspaces.iter().map(|m| m.to_vec()));
        types.extend(std::iter::repeat_n(MSPACE, mspaces.len()));
        let line_vertex: HashMap<Line, u32> = lines.iter().enumerate().map(|(i, &l)| (l, line_base + i as u32)).collect();

        let mut c = TypedComplex::new_flag(TypeRegistry::with_names(&["point", "line", "M-space"]), types);
        for v in 0..point_vertex.len() as u32 {
            c.insert(&[v])?;
        }
        for (i, l) in lines.iter().enumerate() {
            let lv = line_base + i as u32;
            c.insert(&[lv])?;
            for x in l.iter().filter(|x| fixed.contains(x)) {
                c.insert(&[point_vertex[x], lv])?;
            }
        }
        for (i, m) in mspaces.iter().enumerate() {
            let mv = m_base + i as u32;
            c.insert(&[mv])?;
            let pts: Vec<u32> = m.iter().copied().filter(|x| fixed.contains(x)).collect();
            for x in &pts {
                c.insert(&[point_vertex[x], mv])?;
            }
            for (a, &x) in m.iter().enumerate() {
                for &y in &m[a + 1..] {
                    let Some(w) = product(ctx, x, y) else { continue };
                    if w < y {
                        continue;
                    }
                    if let Some(&lv) = line_vertex.get(&sorted::<3>(vec![x, y, w])) {
                        c.insert(&[lv, mv])?;
                        for p in [x, y, w].iter().filter(|p| fixed.contains(p)) {
                            c.insert(&[point_vertex[p], lv, mv])?;
                        }
                    }
                }
            }
        }
        let fixed_counts = objects.iter().map(|o| o.iter().filter(|x| fixed.contains(x)).count()).collect();
        let through_z = objects.iter().map(|o| o.contains(&res.z)).collect();
        Ok(FixedComplex { complex: c, objects, apex: point_vertex[&res.z], fixed_counts, through_z })
    }

    pub fn count(&self, tag: u16) -> usize {
        self.complex.vertices().iter().filter(|&&v| self.complex.vertex_type(v) == tag).count()
    }

    /// Lines and M-spaces on `z` present as vertices.
    pub fn star_counts(&self) -> (usize, usize) {
        let on = |tag| (0..self.objects.len()).filter(|&v| self.through_z[v] && self.complex.vertex_type(v as u32) == tag).count();
        (on(LINE), on(MSPACE))
    }

    fn stage(&self, keep: impl Fn(u32) -> bool) -> Vec<u32> {
        (0..self.objects.len() as u32).filter(|&v| keep(v)).collect()
    }

    /// The staged star removals: lines off `z` with one fixed point,
    /// M-spaces meeting the fixed part in a line, the remaining lines off
    /// `z`, M-spaces with one fixed point, then the points other than `z`.
    pub fn staged_schedule(&self) -> Vec<(&'static str, Vec<u32>)> {
        let ty = |v: u32| self.complex.vertex_type(v);
        let off = |v: u32| !self.through_z[v as usize];
        let f = |v: u32| self.fixed_counts[v as usize];
        vec![
            ("lines with one fixed point", self.stage(|v| ty(v) == LINE && off(v) && f(v) == 1)),
            ("M-spaces fixed on a line", self.stage(|v| ty(v) == MSPACE && off(v) && f(v) == 3)),
            ("lines with three fixed points", self.stage(|v| ty(v) == LINE && off(v) && f(v) == 3)),
            ("M-spaces with one fixed point", self.stage(|v| ty(v) == MSPACE && off(v) && f(v) == 1)),
            ("points other than z", self.stage(|v| ty(v) == POINT && v != self.apex)),
        ]
    }
}

#[derive(Clone, Debug)]
pub struct FixedCollapse {
    pub f_vector: Vec<usize>,
    pub betti: Betti,
    /// Star removals per stage, then the greedy tail from the staged
    /// remainder.
    pub staged: Result<CollapseCertificate, String>,
    pub stage_sizes: Vec<(&'static str, usize)>,
    /// Greedy collapse from the full complex.
    pub greedy: CollapseCertificate,
}

/// Runs the staged schedule (falling back to reporting the failing stage)
/// and an independent greedy collapse.
pub fn collapse_fixed(fc: &FixedComplex) -> FixedCollapse {
    let betti = fc.complex.betti();
    let f_vector = fc.complex.f_vector();
    let mut c = fc.complex.clone();
    let mut schedule = Schedule::default();
    let mut stage_sizes = Vec::new();
    let mut staged = Ok(());
    for (label, verts) in fc.staged_schedule() {
        schedule.begin_orbit(label);
        stage_sizes.push((label, verts.len()));
        for v in verts {
            if let Err(e) = remove_star_if_cone(&mut c, v) {
                staged = Err(format!("{label}: {e}"));
                break;
            }
            schedule.push(CollapseStep::Star(v));
        }
        if staged.is_err() {
            break;
        }
    }
    let staged = staged.map(|()| {
        let tail = greedy_collapse(&mut c);
        schedule.begin_orbit("greedy tail");
        schedule.steps.extend(tail.steps);
        CollapseCertificate::from_schedule(&schedule, &c)
    });
    let mut g = fc.complex.clone();
    let greedy = greedy_collapse(&mut g);
    FixedCollapse { f_vector, betti, staged, stage_sizes, greedy }
}
