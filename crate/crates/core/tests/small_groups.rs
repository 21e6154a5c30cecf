//! Collections of 2-subgroups of small groups against known answers.

use bouc_core::radical::{
    benson_closure, bouc_poset, distinguished_poset, homotopy_compare, p_subgroups, quillen_poset, small_group,
    FiniteGroup, DEFAULT_BRUTE_CAP,
};

fn group(name: &str) -> FiniteGroup {
    FiniteGroup::from_handle(name, &small_group(name).unwrap(), DEFAULT_BRUTE_CAP).unwrap()
}

#[test]
fn brown_congruence() {
    // The reduced Euler characteristic of the Quillen complex is divisible
    // by the order of a Sylow subgroup.
    for (name, sylow) in [("S4", 8), ("S5", 8), ("GL32", 8), ("C2xC2", 4)] {
        let g = group(name);
        let en = p_subgroups(&g, 2).unwrap();
        assert_eq!(en.sylow.order(), sylow, "{name}");
        let chi = quillen_poset(&en).order_complex(&en).euler_reduced();
        assert_eq!(chi % sylow as i64, 0, "{name}: {chi}");
    }
}

#[test]
fn bouc_agrees_with_quillen_in_homology() {
    for name in ["S4", "S5", "GL32"] {
        let g = group(name);
        let en = p_subgroups(&g, 2).unwrap();
        assert!(homotopy_compare(&en, &quillen_poset(&en), &bouc_poset(&en)).agree, "{name}");
    }
}

#[test]
fn restricted_collections() {
    // In S5 the transpositions are radical but not 2-central, so the
    // distinguished and Benson collections keep only the five Klein groups
    // of double transpositions and the Sylows over them: five stars.
    for (name, distinguished, benson) in
        [("S4", vec![0, 0], vec![0, 0]), ("S5", vec![4, 0], vec![4, 0]), ("GL32", vec![0, 8], vec![0, 8])]
    {
        let g = group(name);
        let en = p_subgroups(&g, 2).unwrap();
        let d = distinguished_poset(&en).order_complex(&en).betti().reduced();
        let b = benson_closure(&g, &en).1.order_complex(&en).betti().reduced();
        assert_eq!((d, b), (distinguished, benson), "{name}");
    }
}

#[test]
fn known_class_data() {
    let g = group("S4");
    let en = p_subgroups(&g, 2).unwrap();
    let sizes: Vec<(usize, usize)> = en.classes.iter().map(|c| (c.order, c.class_size)).collect();
    // 1, two classes of involutions, C4, two Klein groups, D8.
    let mut expected = vec![(1, 1), (2, 6), (2, 3), (4, 3), (4, 1), (4, 3), (8, 3)];
    let mut got = sizes.clone();
    expected.sort_unstable();
    got.sort_unstable();
    assert_eq!(got, expected);
    let radical: Vec<usize> = en.classes.iter().filter(|c| c.is_radical && c.order > 1).map(|c| c.order).collect();
    assert_eq!(radical.len(), 2, "{radical:?}");
}

#[test]
fn gl32_radical_complex() {
    let g = group("GL32");
    let en = p_subgroups(&g, 2).unwrap();
    let b = bouc_poset(&en).order_complex(&en);
    assert_eq!(b.euler_reduced(), -8);
    assert_eq!(b.betti().reduced(), vec![0, 8]);
}
