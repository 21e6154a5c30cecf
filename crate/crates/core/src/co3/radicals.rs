//! The eleven distinguished radical classes as concrete subgroups of the
//! fixed Sylow subgroup, and their normalizers and centralizers computed
//! from one pass over `C_G(z)`.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::{Co3Context, Co3Error, SylowModel};
use crate::perm::{sweep, BaseMembership, GroupHandle, Permutation, SweepGoal, SweepOutcome, SweepTask, SweepTest, DEFAULT_STREAM_CAP};
use crate::radical::{p_part, Subgroup};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RadicalKind {
    P,
    M,
    PSquare,
    PM,
    MSquare,
    L,
    PML,
    MLSquare,
    PMSquare,
    PLSquare,
    PMLSquare,
}

pub const ALL_KINDS: [RadicalKind; 11] = [
    RadicalKind::P,
    RadicalKind::M,
    RadicalKind::PSquare,
    RadicalKind::PM,
    RadicalKind::MSquare,
    RadicalKind::L,
    RadicalKind::PML,
    RadicalKind::MLSquare,
    RadicalKind::PMSquare,
    RadicalKind::PLSquare,
    RadicalKind::PMLSquare,
];

/// Table row: name, vertex type, log2 order, central involutions in the
/// center, normalizer order, structure of `R`, structure of `N_G(R)`.
struct Row(&'static str, &'static str, u32, usize, u128, &'static str, &'static str);

const ROWS: [Row; 11] = [
    Row("R_p", "p", 1, 1, 2_903_040, "2", "2^.S_6(2)"),
    Row("R_M", "M", 4, 15, 322_560, "2^4", "2^4 A_8"),
    Row("R_p□", "p□", 6, 1, 46_080, "2^{1+5}", "2^{1+5}S_6"),
    Row("R_pM", "pM", 7, 1, 21_504, "2^{1+6}_+", "2^{1+6}_+ L_3(2)"),
    Row("R_M□", "M□", 7, 7, 21_504, "2^{3+4}", "2^{3+4} L_3(2)"),
    Row("R_L", "LL", 8, 3, 27_648, "2^{2+6}", "2^{2+6}3.(S_3×S_3)"),
    Row("R_pML", "pML", 9, 1, 3_072, "2^4.2^{2+3}", "2^4.2^{2+3}.S_3"),
    Row("R_ML□", "ML□", 9, 1, 3_072, "2^4.2^{2+3}", "2^4.2^{2+3}.S_3"),
    Row("R_pM□", "pM□", 9, 1, 3_072, "2^4.2^{1+4}_+", "2^4.2^{1+4}_+.S_3"),
    Row("R_pL□", "pL□", 9, 1, 3_072, "[2^9]", "[2^9].S_3"),
    Row("R_pML□", "pML□", 10, 1, 1_024, "[2^10]", "[2^10]"),
];

impl RadicalKind {
    fn row(self) -> &'static Row {
        &ROWS[self as usize]
    }

    pub fn name(self) -> &'static str {
        self.row().0
    }

    /// Vertex type label; `LL` stands for the line structure.
    pub fn tag(self) -> &'static str {
        self.row().1
    }

    pub fn expected_order(self) -> usize {
        1 << self.row().2
    }

    /// Central involutions in `Z(R)` as tabulated.
    pub fn expected_center_points(self) -> usize {
        self.row().3
    }

    pub fn expected_normalizer_order(self) -> u128 {
        self.row().4
    }

    pub fn structure(self) -> &'static str {
        self.row().5
    }

    pub fn normalizer_structure(self) -> &'static str {
        self.row().6
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        ALL_KINDS.into_iter().find(|k| k.tag() == tag)
    }

    /// Kept in the complex after the `pM`, `M□`, `pML`, `ML□` cone
    /// retractions.
    pub fn retained(self) -> bool {
        !matches!(self, RadicalKind::PM | RadicalKind::MSquare | RadicalKind::PML | RadicalKind::MLSquare)
    }

    /// Condition on the upper entries (x12, x13, x14, x23, x24, x34) of the
    /// image in `U_4`, for the classes defined as pullbacks.
    fn pullback(self, bits: u8) -> Option<bool> {
        let x = |k: usize| bits >> k & 1;
        let (x12, x13, x23, x24, x34) = (x(0), x(1), x(3), x(4), x(5));
        Some(match self {
            RadicalKind::PM => x23 == 0 && x24 == 0 && x34 == 0,
            RadicalKind::MSquare => x12 == 0 && x13 == 0 && x23 == 0,
            RadicalKind::L => x12 == 0 && x34 == 0,
            RadicalKind::PML => x34 == 0,
            RadicalKind::MLSquare => x12 == 0,
            RadicalKind::PMSquare => x23 == 0,
            RadicalKind::PLSquare => x12 == x34,
            RadicalKind::PMLSquare => true,
            RadicalKind::P | RadicalKind::M | RadicalKind::PSquare => return None,
        })
    }
}

#[derive(Clone, Debug)]
pub struct RadicalInstance {
    pub kind: RadicalKind,
    pub group: Subgroup,
    /// Central involutions of `R`, as indices into the Sylow model.
    pub points: Vec<u32>,
    pub center: Subgroup,
    pub center_2a: usize,
    pub center_2b: usize,
}

impl RadicalInstance {
    /// `A^k` / `A^kB^m` signature of the center's involutions.
    pub fn center_signature(&self) -> String {
        signature(self.center_2a, self.center_2b)
    }
}

pub fn signature(a: usize, b: usize) -> String {
    match (a, b) {
        (a, 0) => format!("A^{a}"),
        (0, b) => format!("B^{b}"),
        (a, b) => format!("A^{a}B^{b}"),
    }
}

fn is_closed(model: &SylowModel, h: &Subgroup) -> bool {
    h.iter().all(|x| h.iter().all(|y| h.contains(model.s.mul(x, y))))
}

/// Builds all eleven instances in table order.
pub fn instantiate(model: &SylowModel) -> Result<Vec<RadicalInstance>, Co3Error> {
    let s = &model.s;
    ALL_KINDS
        .iter()
        .map(|&kind| {
            let group = match kind {
                RadicalKind::P => s.closure(&[model.z]),
                RadicalKind::M => model.m.clone(),
                RadicalKind::PSquare => model.r_p_square(),
                _ => {
                    let h = Subgroup::from_indices(
                        s.len(),
                        (0..s.len() as u32).filter(|&x| kind.pullback(model.u4[x as usize]) == Some(true)),
                    );
                    if !is_closed(model, &h) {
                        return Err(Co3Error::Inconsistent(format!("pullback for {} is not a subgroup", kind.name())));
                    }
                    h
                }
            };
            let points = model.points_of(&group);
            let center = s.center(&group);
            let involutions = center.iter().filter(|&x| s.elem_order(x) == 2);
            let (center_2a, center_2b) =
                involutions.fold((0, 0), |(a, b), x| if model.central[x as usize] { (a + 1, b) } else { (a, b + 1) });
            Ok(RadicalInstance { kind, group, points, center, center_2a, center_2b })
        })
        .collect()
}

pub fn instance(instances: &[RadicalInstance], kind: RadicalKind) -> &RadicalInstance {
    &instances[kind as usize]
}

#[derive(Clone, Debug)]
pub struct NormalizerData {
    pub kind: RadicalKind,
    /// `N_{C(z)}(R)`.
    pub n_cz: GroupHandle,
    /// `|C_G(R)|`, which equals `|C_{C(z)}(R)|` since `z` lies in `R`.
    pub centralizer_order: u128,
    /// Size of the orbit of `z` under `N_G(R)` inside `Z(R)`.
    pub orbit: usize,
    /// `N_{C(z)}(R)` together with one element moving `z` to each point of
    /// its orbit.
    pub normalizer: GroupHandle,
}

impl NormalizerData {
    /// `orbit * |N_{C(z)}(R)|`, the order implied by the orbit count.
    pub fn counted_order(&self) -> u128 {
        self.orbit as u128 * self.n_cz.order()
    }

    /// Whether the generated group reaches the counted order.
    pub fn generated(&self) -> bool {
        self.normalizer.order() == self.counted_order()
    }

    /// `Z(R)` is a Sylow 2-subgroup of `C_G(R)`.
    pub fn centric(&self, instance: &RadicalInstance) -> bool {
        p_part(self.centralizer_order, 2) == instance.center.order() as u128
    }
}

/// Stabilizers of the flags of the point `z`, the line `L = <a1,a2>` and
/// `M`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FlagStabilizers {
    pub g_p: u128,
    pub g_l: u128,
    pub g_m: u128,
    pub g_pl: u128,
    pub g_pm: u128,
    pub g_lm: u128,
    pub g_plm: u128,
}

impl FlagStabilizers {
    /// `(dimension, |G_F|)` for the seven flag types.
    pub fn orbit_data(&self) -> Vec<(usize, u128)> {
        vec![
            (0, self.g_p),
            (0, self.g_l),
            (0, self.g_m),
            (1, self.g_pl),
            (1, self.g_pm),
            (1, self.g_lm),
            (2, self.g_plm),
        ]
    }
}

#[derive(Clone, Debug)]
pub struct LocalNormalizers {
    pub radicals: Vec<NormalizerData>,
    pub flags: FlagStabilizers,
    pub from_cache: bool,
    pub sweep_ms: u128,
}

impl LocalNormalizers {
    pub fn of(&self, kind: RadicalKind) -> &NormalizerData {
        &self.radicals[kind as usize]
    }
}

#[derive(Serialize, Deserialize)]
struct CachedRadical {
    n_cz: Vec<Permutation>,
    centralizer_order: u128,
    movers: Vec<Permutation>,
}

#[derive(Serialize, Deserialize)]
struct CachedNormalizers {
    radicals: Vec<CachedRadical>,
    flags: FlagStabilizers,
}

fn handle(gens: Vec<Permutation>, degree: usize, seed: u64) -> Result<GroupHandle, Co3Error> {
    if gens.is_empty() {
        return Ok(GroupHandle::trivial(degree));
    }
    Ok(GroupHandle::new(gens, seed)?)
}

fn assemble(ctx: &Co3Context, inst: &[RadicalInstance], cached: &CachedNormalizers) -> Result<Vec<NormalizerData>, Co3Error> {
    let n = ctx.group.degree();
    inst.iter()
        .zip(&cached.radicals)
        .map(|(i, c)| {
            let n_cz = handle(c.n_cz.clone(), n, ctx.seed)?;
            let mut all = c.n_cz.clone();
            all.extend(c.movers.iter().cloned());
            Ok(NormalizerData {
                kind: i.kind,
                n_cz,
                centralizer_order: c.centralizer_order,
                orbit: 1 + c.movers.len(),
                normalizer: handle(all, n, ctx.seed)?,
            })
        })
        .collect()
}

/// Whether cached generators still describe normalizers of these instances.
fn cache_fits(ctx: &Co3Context, model: &SylowModel, inst: &[RadicalInstance], cached: &CachedNormalizers) -> bool {
    cached.radicals.len() == inst.len()
        && inst.iter().zip(&cached.radicals).all(|(i, c)| {
            let r = model.handle_of(&i.group);
            let gens = c.n_cz.iter().chain(&c.movers);
            c.n_cz.iter().all(|g| ctx.cz.contains(g))
                && gens.clone().all(|g| ctx.group.contains(g))
                && gens.clone().all(|g| r.generators().iter().all(|x| r.contains(&x.conjugate_by(g))))
        })
}

/// Conjugates of `z` inside `h` other than `z`, with an element of `G`
/// carrying `z` to each.
fn movers_for(ctx: &Co3Context, model: &SylowModel, h: &Subgroup) -> Result<Vec<(Permutation, Permutation)>, Co3Error> {
    model
        .points_of(h)
        .into_iter()
        .filter(|&q| q != model.z)
        .map(|q| {
            let q = model.element(q).clone();
            let g = ctx.class2a.conjugating_element(&q)?;
            Ok((q, g))
        })
        .collect()
}

/// Test that `x` carries each group in `targets` onto its conjugate by
/// `hinv`, i.e. `H^x = H^{h^-1}`.
fn carries(targets: &[(&GroupHandle, &BaseMembership)], hinv: &Permutation) -> SweepTest {
    let tests: Vec<SweepTest> = targets
        .iter()
        .map(|(h, m)| SweepTest::ConjugatesInto { gens: h.generators().to_vec(), target: m.conjugated(hinv) })
        .collect();
    SweepTest::All(tests)
}

/// Sweep task indices for one radical: normalizer, centralizer, and the
/// movers with their tasks.
type TaskLayout = (usize, usize, Vec<(Permutation, usize)>);

/// Normalizers, centralizers and flag stabilizers, from the cache when it
/// still fits, otherwise from a single sweep of `C(z)`.
pub fn local_normalizers(ctx: &Co3Context, model: &SylowModel, inst: &[RadicalInstance]) -> Result<LocalNormalizers, Co3Error> {
    let name = format!("local-normalizers-{}", ctx.seed);
    if let Some(cache) = &ctx.cache {
        if let Some(cached) = cache.load::<CachedNormalizers>(&ctx.digest, &name) {
            if cache_fits(ctx, model, inst, &cached) {
                let radicals = assemble(ctx, inst, &cached)?;
                return Ok(LocalNormalizers { radicals, flags: cached.flags, from_cache: true, sweep_ms: 0 });
            }
        }
    }
    let start = Instant::now();
    let cap = DEFAULT_STREAM_CAP;
    let mut tasks: Vec<SweepTask> = Vec::new();
    let mut layout: Vec<Option<TaskLayout>> = Vec::new();
    for i in inst {
        if i.kind == RadicalKind::P {
            layout.push(None);
            continue;
        }
        let r = model.handle_of(&i.group);
        let member = BaseMembership::of_group(&r, cap)?;
        let nt = tasks.len();
        tasks.push(SweepTask {
            test: SweepTest::ConjugatesInto { gens: r.generators().to_vec(), target: member.clone() },
            goal: SweepGoal::Subgroup,
        });
        tasks.push(SweepTask { test: SweepTest::Commutes { gens: r.generators().to_vec() }, goal: SweepGoal::Subgroup });
        let mut movers = Vec::new();
        for (_, g) in movers_for(ctx, model, &i.center)? {
            movers.push((g.clone(), tasks.len()));
            tasks.push(SweepTask { test: carries(&[(&r, &member)], &g.inverse()), goal: SweepGoal::Find });
        }
        layout.push(Some((nt, nt + 1, movers)));
    }

    let line = model.handle_of(&model.span(&["a1", "a2"]));
    let line_member = BaseMembership::of_group(&line, cap)?;
    let m = model.handle_of(&model.m);
    let m_member = BaseMembership::of_group(&m, cap)?;
    let pl = tasks.len();
    tasks.push(SweepTask { test: carries(&[(&line, &line_member)], &line.identity()), goal: SweepGoal::Subgroup });
    let plm = tasks.len();
    tasks.push(SweepTask {
        test: carries(&[(&line, &line_member), (&m, &m_member)], &line.identity()),
        goal: SweepGoal::Subgroup,
    });
    let line_points = model.span(&["a1", "a2"]);
    let mut l_finds = Vec::new();
    let mut lm_finds = Vec::new();
    for (_, g) in movers_for(ctx, model, &line_points)? {
        let ginv = g.inverse();
        l_finds.push(tasks.len());
        tasks.push(SweepTask { test: carries(&[(&line, &line_member)], &ginv), goal: SweepGoal::Find });
        lm_finds.push(tasks.len());
        tasks.push(SweepTask { test: carries(&[(&line, &line_member), (&m, &m_member)], &ginv), goal: SweepGoal::Find });
    }

    let mut outcomes: Vec<Option<SweepOutcome>> = sweep(&ctx.cz, cap, ctx.seed, &tasks)?.into_iter().map(Some).collect();
    let mut take = |k: usize| outcomes[k].take().expect("each outcome read once");

    let mut cached = CachedNormalizers {
        radicals: Vec::new(),
        flags: FlagStabilizers { g_p: ctx.cz.order(), g_l: 0, g_m: 0, g_pl: 0, g_pm: 0, g_lm: 0, g_plm: 0 },
    };
    for slot in &layout {
        let entry = match slot {
            None => CachedRadical {
                n_cz: ctx.cz.generators().to_vec(),
                centralizer_order: ctx.cz.order(),
                movers: Vec::new(),
            },
            Some((nt, ct, movers)) => {
                let n_cz = take(*nt).subgroup().expect("subgroup task");
                let c = take(*ct).subgroup().expect("subgroup task");
                let movers = movers.iter().filter_map(|(g, k)| take(*k).found().map(|c| c.compose(g))).collect();
                CachedRadical { n_cz: n_cz.generators().to_vec(), centralizer_order: c.order(), movers }
            }
        };
        cached.radicals.push(entry);
    }
    let g_pl = take(pl).subgroup().expect("subgroup task").order();
    let g_plm = take(plm).subgroup().expect("subgroup task").order();
    let l_orbit = 1 + l_finds.iter().filter(|&&k| take(k).found().is_some()).count() as u128;
    let lm_orbit = 1 + lm_finds.iter().filter(|&&k| take(k).found().is_some()).count() as u128;
    let radicals = assemble(ctx, inst, &cached)?;
    let m_data = &radicals[RadicalKind::M as usize];
    cached.flags = FlagStabilizers {
        g_p: ctx.cz.order(),
        g_l: l_orbit * g_pl,
        g_m: m_data.counted_order(),
        g_pl,
        g_pm: m_data.n_cz.order(),
        g_lm: lm_orbit * g_plm,
        g_plm,
    };
    if let Some(cache) = &ctx.cache {
        cache.store(&ctx.digest, &name, &cached)?;
    }
    Ok(LocalNormalizers { radicals, flags: cached.flags, from_cache: false, sweep_ms: start.elapsed().as_millis() })
}
