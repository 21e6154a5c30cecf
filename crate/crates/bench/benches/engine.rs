use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use bouc_core::complex::TypedComplex;
use bouc_core::morse::greedy_collapse;
use bouc_core::perm::{schreier_sims, Permutation};
use bouc_core::radical::{bouc_poset, p_subgroups, quillen_poset, small_group, FiniteGroup, DEFAULT_BRUTE_CAP};

fn symmetric_gens(n: usize) -> Vec<Permutation> {
    vec![
        Permutation::from_cycles(n, &[vec![0, 1]]).unwrap(),
        Permutation::from_cycles(n, &[(0..n).collect()]).unwrap(),
    ]
}

fn perm(c: &mut Criterion) {
    let gens = symmetric_gens(276);
    c.bench_function("compose degree 276", |b| b.iter(|| black_box(&gens[0]).compose(black_box(&gens[1]))));
    let s12 = symmetric_gens(12);
    c.bench_function("schreier-sims S12", |b| b.iter(|| schreier_sims(black_box(&s12), 1).unwrap().order()));
}

fn subgroups(c: &mut Criterion) {
    let g = FiniteGroup::from_handle("S5", &small_group("S5").unwrap(), DEFAULT_BRUTE_CAP).unwrap();
    c.bench_function("2-subgroups of S5", |b| b.iter(|| p_subgroups(black_box(&g), 2).unwrap().classes.len()));
}

fn homology(c: &mut Criterion) {
    let g = FiniteGroup::from_handle("GL32", &small_group("GL32").unwrap(), DEFAULT_BRUTE_CAP).unwrap();
    let en = p_subgroups(&g, 2).unwrap();
    let quillen = quillen_poset(&en).order_complex(&en);
    c.bench_function("betti of the GL(3,2) Quillen complex", |b| b.iter(|| quillen.betti().reduced()));
    let g = FiniteGroup::from_handle("S5", &small_group("S5").unwrap(), DEFAULT_BRUTE_CAP).unwrap();
    let en = p_subgroups(&g, 2).unwrap();
    let bouc = bouc_poset(&en).order_complex(&en);
    c.bench_function("greedy collapse of the S5 radical complex", |b| {
        b.iter(|| greedy_collapse(&mut bouc.clone()).terminal_size)
    });
    let facets: Vec<Vec<u32>> = (0..60u32).map(|i| vec![i, i + 1, i + 2, 63]).collect();
    let cone = TypedComplex::from_simplices(64, &facets).unwrap();
    c.bench_function("greedy collapse of a cone on a strip", |b| b.iter(|| greedy_collapse(&mut cone.clone()).terminal_size));
}

criterion_group!(benches, perm, subgroups, homology);
criterion_main!(benches);
