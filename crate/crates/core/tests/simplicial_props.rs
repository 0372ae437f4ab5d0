mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use racg_core::fixtures;
use racg_core::simplicial::{LargenessWitness, Sd2Witness, Vertex};
use racg_core::SimplicialComplex;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn largeness_matches_subset_oracle(seed in any::<u64>()) {
        let x = common::random_complex(&mut rng(seed), 10);
        for k in 4..=7 {
            let got = x.is_k_large(k).unwrap();
            prop_assert_eq!(got, common::k_large_oracle(&x, k), "k = {}", k);
            let by_cycles = x.is_flag() && x.enumerate_full_cycles(k - 1).is_empty();
            prop_assert_eq!(got, by_cycles);
        }
    }

    #[test]
    fn largeness_is_monotone(seed in any::<u64>()) {
        let x = common::random_complex(&mut rng(seed), 12);
        let verdicts: Vec<bool> = (4..=8).map(|k| x.is_k_large(k).unwrap()).collect();
        for w in verdicts.windows(2) {
            prop_assert!(w[0] || !w[1]);
        }
    }

    #[test]
    fn witnesses_are_genuine(seed in any::<u64>()) {
        let x = common::random_complex(&mut rng(seed), 10);
        match x.largeness_witness(6).unwrap() {
            None => {}
            Some(LargenessWitness::NonFlagClique(c)) => {
                let vs = x.vertices_by_name(&c).unwrap();
                prop_assert!(!x.is_simplex(&vs));
                for (i, &a) in vs.iter().enumerate() {
                    for &b in &vs[i + 1..] {
                        prop_assert!(x.has_edge(a, b));
                    }
                }
            }
            Some(LargenessWitness::FullCycle(c)) => {
                prop_assert!(c.len() >= 4 && c.len() < 6);
                let span = x.induced_by_names(&c).unwrap();
                prop_assert_eq!(span.num_edges(), c.len());
                prop_assert_eq!(span.dimension(), 1);
            }
        }
    }

    #[test]
    fn sd2_matches_wheel_search(seed in any::<u64>()) {
        let x = common::random_complex(&mut rng(seed), 9);
        for k in 6..=7 {
            prop_assert_eq!(x.satisfies_sd2_star(k).unwrap(), common::sd2_oracle(&x, k), "k = {}", k);
        }
    }

    #[test]
    fn span_is_idempotent(seed in any::<u64>()) {
        let mut r = rng(seed);
        let x = common::random_complex(&mut r, 12);
        let a: Vec<Vertex> = (0..x.num_vertices() as Vertex).filter(|_| r.gen_bool(0.5)).collect();
        let span = x.induced_subcomplex(&a).unwrap();
        let names = span.names().to_vec();
        let again = x.induced_by_names(&names).unwrap();
        prop_assert!(span.same_complex(&again));
        prop_assert!(x.is_full_subcomplex(&span).unwrap());
    }

    #[test]
    fn link_of_link(seed in any::<u64>()) {
        let mut r = rng(seed);
        let x = common::random_complex(&mut r, 10);
        let simplices: Vec<Vec<Vertex>> = x.simplices().into_iter().flatten().collect();
        let sigma = &simplices[r.gen_range(0..simplices.len())];
        let l = x.link(sigma).unwrap();
        let inner: Vec<Vec<Vertex>> = l.simplices().into_iter().flatten().collect();
        if inner.is_empty() {
            return Ok(());
        }
        let tau = &inner[r.gen_range(0..inner.len())];
        let lhs = l.link(tau).unwrap();
        let mut union = x.vertices_by_name(&x.names_of(sigma)).unwrap();
        union.extend(x.vertices_by_name(&l.names_of(tau)).unwrap());
        union.sort_unstable();
        let rhs = x.link(&union).unwrap();
        prop_assert!(lhs.same_complex(&rhs) || (lhs.num_vertices() == 0 && rhs.num_vertices() == 0));
    }

    #[test]
    fn six_large_has_sd2_links(seed in any::<u64>()) {
        let x = common::random_k_large(&mut rng(seed), 6, 10);
        prop_assert!(x.has_sd2_star_links(6).unwrap());
    }
}

#[test]
fn octahedron_equators() {
    let cycles = fixtures::octahedron().enumerate_full_cycles(4);
    assert_eq!(cycles.len(), 3);
    assert!(cycles.iter().all(|c| c.len() == 4));
    assert!(fixtures::tetrahedron().enumerate_full_cycles(6).is_empty());
    assert_eq!(fixtures::pentagon().enumerate_full_cycles(6).len(), 1);
}

#[test]
fn sd2_examples() {
    assert!(fixtures::pentagon().satisfies_sd2_star(6).unwrap());
    let wheel = fixtures::cone_over_cycle(4);
    assert!(matches!(
        wheel.sd2_star_witness(6).unwrap(),
        Some(Sd2Witness::FourWheel { .. })
    ));
    assert!(matches!(
        fixtures::icosahedron().sd2_star_witness(6).unwrap(),
        Some(Sd2Witness::UncoveredPendantWheel { .. })
    ));
    assert!(fixtures::cycle(6).has_sd2_star_links(6).unwrap());
    assert!(!fixtures::octahedron().has_sd2_star_links(6).unwrap());
    assert!(fixtures::cycle(5).sd2_star_witness(5).is_err());
}

#[test]
fn full_subcomplex_examples() {
    let c5 = fixtures::cycle(5);
    let path = SimplicialComplex::from_faces(&[vec!["v0", "v1"], vec!["v1", "v2"]]).unwrap();
    assert!(c5.is_full_subcomplex(&path).unwrap());
    let c4 = fixtures::cycle(4);
    let opposite = SimplicialComplex::from_faces(&[vec!["v0"], vec!["v2"]]).unwrap();
    assert!(c4.is_full_subcomplex(&opposite).unwrap());
    let solid = SimplicialComplex::from_faces(&[vec!["a", "b", "c"]]).unwrap();
    let hollow =
        SimplicialComplex::from_faces(&[vec!["a", "b"], vec!["b", "c"], vec!["a", "c"]]).unwrap();
    assert!(!solid.is_full_subcomplex(&hollow).unwrap());
    assert!(hollow.is_full_subcomplex(&solid).is_err());
}
