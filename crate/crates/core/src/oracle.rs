//! Small known cases with hand-checkable answers: the self-test corpus and
//! the small-group suite with its golden files.

use std::path::Path;

use serde_json::{json, Value};

use crate::complex::{euler_from_orbits, Poset, TypedComplex};
use crate::gf2::{enumerate_rank2_squarezero, reference_nilpotents, BitMatrix};
use crate::morse::{greedy_collapse, is_free_pair, replay_schedule, verify_certificate, Schedule};
use crate::perm::{ClassIndex, ClassStorage, GroupHandle, Permutation};
use crate::radical::{
    bouc_poset, distinguished_poset, homotopy_compare, p_subgroups, quillen_poset, small_group, CollectionPoset,
    FiniteGroup, PSubgroups, RadicalError, DEFAULT_BRUTE_CAP,
};
use crate::report::{Entry, Recorder, Status};

/// Groups covered by the small-group suite and their golden files.
pub const GOLDEN_GROUPS: [&str; 3] = ["S4", "S5", "GL32"];

fn simplices(n: usize, facets: &[&[u32]]) -> TypedComplex {
    let list: Vec<Vec<u32>> = facets.iter().map(|f| f.to_vec()).collect();
    TypedComplex::from_simplices(n, &list).expect("valid simplices")
}

fn hollow_triangle() -> TypedComplex {
    simplices(3, &[&[0, 1], &[1, 2], &[0, 2]])
}

fn solid_triangle() -> TypedComplex {
    simplices(3, &[&[0, 1, 2]])
}

/// Cone with apex `n` over `n` isolated points.
fn cone_over_points(n: u32) -> TypedComplex {
    let facets: Vec<Vec<u32>> = (0..n).map(|i| vec![i, n]).collect();
    TypedComplex::from_simplices(n as usize + 1, &facets).expect("valid simplices")
}

fn perm(degree: usize, cycles: &[&[usize]]) -> Permutation {
    let c: Vec<Vec<usize>> = cycles.iter().map(|x| x.to_vec()).collect();
    Permutation::from_cycles(degree, &c).expect("valid cycles")
}

/// Checks whose answers follow from the definitions.
pub fn selftest() -> Vec<Entry> {
    let mut r = Recorder::new();

    let s4 = GroupHandle::new(vec![perm(4, &[&[0, 1]]), perm(4, &[&[0, 1, 2, 3]])], 1).expect("group");
    r.equal("selftest.perm.s4_order", "<(0 1), (0 1 2 3)> is S4", 24, s4.order());
    let c3 = GroupHandle::new(vec![perm(3, &[&[0, 1, 2]])], 1).expect("group");
    r.equal("selftest.perm.cyclic_order", "<(0 1 2)> has order 3", 3, c3.order());
    let t = perm(4, &[&[0, 1]]);
    let class = ClassIndex::enumerate(&s4, &t, 100, ClassStorage::Full);
    r.equal(
        "selftest.perm.transposition_class",
        "transpositions of S4: class of 6, centralizer of order 4",
        Some((6, 4)),
        class.ok().map(|c| (c.len(), c.centralizer_order())),
    );
    r.equal(
        "selftest.perm.conjugation",
        "(0 1) conjugated by (1 2) is (0 2)",
        perm(4, &[&[0, 2]]),
        t.conjugate_by(&perm(4, &[&[1, 2]])),
    );

    r.equal("selftest.gf2.rank_identity", "rank of the 4x4 identity", 4, BitMatrix::identity(4).rank());
    r.equal("selftest.gf2.rank_zero", "rank of the zero matrix", 0, BitMatrix::zeros(4, 4).rank());
    let ranks: Vec<usize> = enumerate_rank2_squarezero().iter().map(BitMatrix::rank).collect();
    r.holds(
        "selftest.gf2.rank_two_only",
        "the enumeration keeps rank-2 matrices only",
        "all rank 2",
        format!("{ranks:?}"),
        ranks.iter().all(|&k| k == 2),
    );
    let n1 = &reference_nilpotents()[0];
    let z1 = n1.add(&BitMatrix::identity(4)).expect("4x4");
    r.equal(
        "selftest.gf2.involution",
        "(I + N)^2 = I for square-zero N",
        BitMatrix::identity(4),
        z1.mul(&z1).expect("4x4"),
    );

    r.equal("selftest.complex.hollow_triangle", "reduced Betti numbers of a circle", vec![0, 1], hollow_triangle().betti().reduced());
    r.holds(
        "selftest.complex.solid_triangle",
        "a 2-simplex is acyclic",
        "acyclic",
        format!("{:?}", solid_triangle().betti().reduced()),
        solid_triangle().betti().is_acyclic(),
    );
    let chain = Poset::from_relation(3, |a, b| a < b).order_complex();
    r.equal("selftest.complex.chain", "order complex of a 3-chain", (vec![3, 3, 1], 0), (chain.f_vector(), chain.euler_reduced()));
    let anti = Poset::from_relation(4, |_, _| false).order_complex();
    r.equal("selftest.complex.antichain", "order complex of a 4-antichain", 3, anti.euler_reduced());
    let cone = cone_over_points(3);
    let base = cone.residue(3).map(|c| c.f_vector());
    r.equal("selftest.complex.cone_residue", "residue of a cone apex is the base", Some(vec![3]), base.ok());
    r.equal("selftest.complex.hollow_not_cone", "a circle is not a cone", None, hollow_triangle().is_cone());
    r.equal("selftest.complex.simplex_cone", "a simplex is a cone on its least vertex", Some(0), solid_triangle().is_cone());
    r.equal(
        "selftest.complex.point_orbit",
        "one orbit of points fixed by the whole group",
        0,
        euler_from_orbits(12, &[(0, 12)]).unwrap_or(i128::MIN),
    );

    r.equal(
        "selftest.morse.free_in_simplex",
        "an edge of a solid triangle is free",
        true,
        is_free_pair(&solid_triangle(), &[0, 1, 2], &[0, 1]).unwrap_or(false),
    );
    r.equal(
        "selftest.morse.not_free_in_circle",
        "a vertex of a circle lies in two edges",
        false,
        is_free_pair(&hollow_triangle(), &[0, 1], &[0]).unwrap_or(true),
    );
    let mut c = solid_triangle();
    r.equal("selftest.morse.triangle_collapses", "a 2-simplex collapses to a vertex", 1, greedy_collapse(&mut c).terminal_size);
    let mut c = cone_over_points(5);
    r.equal("selftest.morse.cone_collapses", "a cone over five points collapses to a vertex", 1, greedy_collapse(&mut c).terminal_size);
    let mut c = simplices(5, &[&[0, 1, 2, 3, 4]]);
    r.equal("selftest.morse.simplex_collapses", "a 4-simplex collapses to a vertex", 1, greedy_collapse(&mut c).terminal_size);
    let mut c = hollow_triangle();
    r.equal("selftest.morse.circle_stuck", "a circle does not collapse", 6, greedy_collapse(&mut c).terminal_size);
    let mut c = hollow_triangle();
    let before = c.content_hash();
    let empty = replay_schedule(&mut c, &Schedule::default());
    r.equal(
        "selftest.morse.empty_schedule",
        "the empty schedule leaves the complex unchanged",
        Some(before),
        empty.ok().map(|cert| cert.terminal_hash),
    );

    match setup("C2") {
        Ok((_, en)) => r.equal("selftest.radical.c2", "2-subgroups of C2", vec![1, 2], class_orders(&en)),
        Err(e) => r.holds("selftest.radical.c2", "2-subgroups of C2", "[1, 2]", e, false),
    }
    match setup("C2xC2") {
        Ok((_, en)) => {
            let q = quillen_poset(&en).order_complex(&en);
            r.equal("selftest.radical.klein_quillen", "Quillen complex of C2 x C2 is a cone", (4, 0), (q.f_vector()[0], q.euler_reduced()));
        }
        Err(e) => r.holds("selftest.radical.klein_quillen", "Quillen complex of C2 x C2", "cone", e, false),
    }
    r.finish()
}

fn setup(name: &str) -> Result<(FiniteGroup, PSubgroups), RadicalError> {
    let g = FiniteGroup::from_handle(name, &small_group(name)?, DEFAULT_BRUTE_CAP)?;
    let en = p_subgroups(&g, 2)?;
    Ok((g, en))
}

fn class_orders(en: &PSubgroups) -> Vec<usize> {
    en.classes.iter().map(|c| c.order).collect()
}

fn complex_summary(en: &PSubgroups, poset: &CollectionPoset) -> Value {
    let c = poset.order_complex(en);
    json!({
        "vertices": poset.len(),
        "f_vector": c.f_vector(),
        "reduced_betti": c.betti().reduced(),
        "reduced_euler": c.euler_reduced(),
    })
}

/// Class table and collection complexes of a small group, as stored in
/// the golden files.
pub fn small_group_summary(name: &str) -> Result<Value, RadicalError> {
    let (g, en) = setup(name)?;
    Ok(json!({
        "table": en.table(&g),
        "quillen": complex_summary(&en, &quillen_poset(&en)),
        "bouc": complex_summary(&en, &bouc_poset(&en)),
        "distinguished": complex_summary(&en, &distinguished_poset(&en)),
    }))
}

/// Number of conjugacy classes of 2-subgroups, trivial one included.
const CLASS_COUNTS: [(&str, usize); 3] = [("S4", 7), ("S5", 7), ("GL32", 6)];

/// The small-group suite. Golden files are compared when `golden` is
/// given; a missing file is reported as skipped.
pub fn small_groups(golden: Option<&Path>) -> Vec<Entry> {
    let mut r = Recorder::new();
    for (name, classes) in CLASS_COUNTS {
        let (_, en) = match setup(name) {
            Ok(x) => x,
            Err(e) => {
                r.holds(format!("small_groups.{name}.setup"), "enumerating 2-subgroups", "ok", e, false);
                continue;
            }
        };
        r.equal(format!("small_groups.{name}.classes"), "conjugacy classes of 2-subgroups", classes, en.classes.len());
        let (q, b) = (quillen_poset(&en), bouc_poset(&en));
        let cmp = homotopy_compare(&en, &q, &b);
        r.holds(
            format!("small_groups.{name}.quillen_vs_bouc"),
            "elementary abelian and radical complexes have the same F2 Betti numbers",
            format!("{:?}", cmp.reduced_betti_a),
            format!("{:?}", cmp.reduced_betti_b),
            cmp.agree,
        );
        if name == "S4" {
            let initial = b.order_complex(&en);
            let mut c = initial.clone();
            let cert = greedy_collapse(&mut c);
            let replayed = verify_certificate(&initial, &cert).is_ok();
            r.holds(
                "small_groups.S4.bouc_collapse",
                "radical complex of S4 collapses to a point, certificate replays",
                "1 vertex, replay ok",
                format!("{} simplices, replay ok: {replayed}", cert.terminal_size),
                cert.reaches_point() && replayed,
            );
        }
        if name == "GL32" {
            let c = b.order_complex(&en);
            let betti = c.betti().reduced();
            r.holds(
                "small_groups.GL32.bouc_homology",
                "radical complex of GL(3,2): reduced Euler characteristic -8, first Betti number 8",
                "chi -8, b1 8",
                format!("chi {}, betti {betti:?}", c.euler_reduced()),
                c.euler_reduced() == -8 && betti.get(1) == Some(&8),
            );
        }
        if let Some(dir) = golden {
            let path = dir.join(format!("{name}.json"));
            let want = std::fs::read_to_string(&path).ok().and_then(|t| serde_json::from_str::<Value>(&t).ok());
            let id = format!("small_groups.{name}.golden");
            match (want, small_group_summary(name)) {
                (None, _) => r.record(id, "golden file", Status::Skipped, path.display(), "missing or unreadable"),
                (Some(w), Ok(got)) => r.holds(id, "golden file", path.display(), if w == got { "match" } else { "differs" }, w == got),
                (Some(_), Err(e)) => r.holds(id, "golden file", path.display(), e, false),
            }
        }
    }
    r.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selftest_passes() {
        let failed: Vec<Entry> = selftest().into_iter().filter(|e| e.status != Status::Pass).collect();
        assert!(failed.is_empty(), "{failed:#?}");
    }
}
