//! Properties of complexes, homology and collapses on random inputs.

use bouc_core::complex::{parse_dump, Poset, TypedComplex};
use bouc_core::morse::{greedy_collapse, verify_certificate, CollapseCertificate, Schedule};
use proptest::prelude::*;

/// Up to `max_facets` random faces of size 1..=4 on `n` vertices.
fn arb_complex(n: u32, max_facets: usize) -> impl Strategy<Value = TypedComplex> {
    prop::collection::vec(prop::collection::btree_set(0..n, 1..=4), 1..=max_facets).prop_map(move |faces| {
        let faces: Vec<Vec<u32>> = faces.into_iter().map(|f| f.into_iter().collect()).collect();
        TypedComplex::from_simplices(n as usize, &faces).unwrap()
    })
}

fn alternating_sum(f: &[usize]) -> i64 {
    -1 + f.iter().enumerate().map(|(k, &x)| if k % 2 == 0 { x as i64 } else { -(x as i64) }).sum::<i64>()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn euler_characteristic_agrees(c in arb_complex(8, 10)) {
        let b = c.betti();
        prop_assert_eq!(c.euler_reduced(), alternating_sum(&c.f_vector()));
        prop_assert_eq!(b.reduced_euler(), c.euler_reduced());
    }

    #[test]
    fn collapse_keeps_homology(c in arb_complex(8, 10)) {
        let before = c.betti();
        let mut work = c.clone();
        let cert = greedy_collapse(&mut work);
        prop_assert!(work.betti().same_reduced(&before));
        let end = verify_certificate(&c, &cert).unwrap();
        prop_assert_eq!(end.content_hash(), work.content_hash());
    }

    #[test]
    fn certificates_round_trip_as_text(c in arb_complex(7, 8)) {
        let mut work = c.clone();
        let cert = greedy_collapse(&mut work);
        let back = CollapseCertificate::parse(&cert.to_text()).unwrap();
        prop_assert_eq!(&back, &cert);
        let schedule = Schedule { steps: cert.steps.clone(), orbits: cert.orbits.clone() };
        prop_assert_eq!(Schedule::parse(&schedule.to_text()).unwrap(), schedule);
    }

    #[test]
    fn dump_round_trip(c in arb_complex(9, 10)) {
        let back = parse_dump(&c.dump()).unwrap();
        prop_assert_eq!(back.content_hash(), c.content_hash());
        prop_assert_eq!(back.f_vector(), c.f_vector());
    }

    #[test]
    fn cones_are_acyclic(c in arb_complex(7, 8)) {
        let n = c.vertex_capacity() as u32;
        let faces: Vec<Vec<u32>> = c.iter().map(|s| s.iter().copied().chain([n]).collect()).collect();
        let cone = TypedComplex::from_simplices(n as usize + 1, &faces).unwrap();
        prop_assert!(cone.is_cone().is_some());
        prop_assert!(cone.betti().is_acyclic());
        let mut work = cone.clone();
        prop_assert!(greedy_collapse(&mut work).reaches_point());
    }

    #[test]
    fn residue_of_a_cone_apex_is_the_base(c in arb_complex(7, 8)) {
        let n = c.vertex_capacity() as u32;
        let faces: Vec<Vec<u32>> = c.iter().map(|s| s.iter().copied().chain([n]).collect()).collect();
        let cone = TypedComplex::from_simplices(n as usize + 1, &faces).unwrap();
        let res = cone.residue(n).unwrap();
        let mut a: Vec<Vec<u32>> = res.iter().map(<[u32]>::to_vec).collect();
        let mut b: Vec<Vec<u32>> = c.iter().map(<[u32]>::to_vec).collect();
        a.sort();
        b.sort();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn order_complex_of_a_bounded_poset_is_a_cone(n in 2usize..7, bits in any::<u64>()) {
        // A random order on 0..n refined by the natural order, with a top element n-1.
        let less = |a: usize, b: usize| a < b && (b == n - 1 || bits >> (a * 7 + b) & 1 == 1);
        let p = Poset::from_relation(n, less);
        let c = p.order_complex();
        prop_assert!(c.betti().is_acyclic());
    }
}

#[test]
fn circle_and_sphere() {
    let circle = TypedComplex::from_simplices(3, &[vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
    assert_eq!(circle.betti().reduced(), vec![0, 1]);
    let sphere = TypedComplex::from_simplices(4, &[vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]]).unwrap();
    assert_eq!(sphere.betti().reduced(), vec![0, 0, 1]);
    let mut work = sphere.clone();
    assert_eq!(greedy_collapse(&mut work).terminal_size, sphere.len());
}
