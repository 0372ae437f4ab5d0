mod common;

use num_bigint::BigInt;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use racg_core::coxeter::RacgSystem;
use racg_core::fixtures;
use racg_core::homology::chain::check_universal_coefficients;
use racg_core::homology::snf::dense_mul;
use racg_core::homology::{
    cohomology, homology, relative_cohomology, smith_normal_form, vcd_lower_bound,
    vcd_lower_bound_with, ChainComplex, Coefficients, SparseIntMatrix,
};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_matrix(r: &mut ChaCha8Rng) -> SparseIntMatrix {
    let (rows, cols) = (r.gen_range(1..8), r.gen_range(1..8));
    let dense: Vec<Vec<i64>> = (0..rows)
        .map(|_| {
            (0..cols)
                .map(|_| {
                    if r.gen_bool(0.4) {
                        r.gen_range(-6..=6)
                    } else {
                        0
                    }
                })
                .collect()
        })
        .collect();
    SparseIntMatrix::from_dense(&dense)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn boundary_squares_to_zero(seed in any::<u64>(), reduced in any::<bool>()) {
        let x = common::random_complex(&mut rng(seed), 10);
        let c = ChainComplex::new(&x, None, reduced).unwrap();
        for d in c.min_degree() + 1..=c.max_degree() {
            prop_assert!(c.boundary(d - 1).mul(&c.boundary(d)).is_zero());
        }
    }

    #[test]
    fn rational_betti_matches_rank_oracle(seed in any::<u64>()) {
        let x = common::random_complex(&mut rng(seed), 9);
        let all: Vec<usize> = (0..x.num_vertices()).collect();
        let want = common::reduced_betti_on(&x, &all);
        let h = homology(&x, Coefficients::Rationals, true).unwrap();
        let c = cohomology(&x, Coefficients::Rationals, true).unwrap();
        for (i, &b) in want.iter().enumerate() {
            let d = i as i64 - 1;
            prop_assert_eq!(h.group(d).rank, b, "degree {}", d);
            prop_assert_eq!(c.group(d).rank, b, "degree {}", d);
        }
    }

    #[test]
    fn universal_coefficients(seed in any::<u64>()) {
        let x = common::random_complex(&mut rng(seed), 9);
        for p in [2, 3, 5] {
            check_universal_coefficients(&x, p, false).unwrap();
            check_universal_coefficients(&x, p, true).unwrap();
        }
    }

    #[test]
    fn smith_form_ignores_permutations(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = random_matrix(&mut r);
        let mut rp: Vec<usize> = (0..m.rows()).collect();
        let mut cp: Vec<usize> = (0..m.cols()).collect();
        rp.shuffle(&mut r);
        cp.shuffle(&mut r);
        let a = smith_normal_form(&m, false);
        prop_assert_eq!(&a, &smith_normal_form(&m.permuted(&rp, &cp), false));
        prop_assert_eq!(&a.invariants, &smith_normal_form(&m.transpose(), false).invariants);
        for w in a.invariants.windows(2) {
            prop_assert_eq!(&w[1] % &w[0], BigInt::from(0));
        }
    }

    #[test]
    fn smith_transforms_diagonalize(seed in any::<u64>()) {
        let m = random_matrix(&mut rng(seed));
        let s = smith_normal_form(&m, true);
        let (u, v) = s.transforms.clone().unwrap();
        let d = dense_mul(&dense_mul(&u, &m.to_dense()), &v);
        for (i, row) in d.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                let want = if i == j && i < s.rank() { s.invariants[i].clone() } else { BigInt::from(0) };
                prop_assert_eq!(e, &want);
            }
        }
        prop_assert_eq!(s.invariants, smith_normal_form(&m, false).invariants);
    }

    #[test]
    fn chamber_pair_shifts_nerve_cohomology(seed in any::<u64>()) {
        let x = common::random_flag(&mut rng(seed), 7);
        let w = RacgSystem::from_nerve(&x).unwrap();
        let k = w.chamber();
        for coeff in [Coefficients::Integers, Coefficients::Prime(2)] {
            let pair = relative_cohomology(&k, &[], coeff).unwrap();
            let nerve = cohomology(&x, coeff, true).unwrap();
            for d in -1..=x.dimension() as i64 {
                prop_assert_eq!(pair.group(d + 1).rank, nerve.group(d).rank);
                prop_assert_eq!(&pair.group(d + 1).torsion, &nerve.group(d).torsion);
            }
        }
    }

    #[test]
    fn vcd_formulas_agree(seed in any::<u64>()) {
        let x = common::random_flag(&mut rng(seed), 7);
        let w = RacgSystem::from_nerve(&x).unwrap();
        let report = vcd_lower_bound_with(&w, Coefficients::Rationals, true, true).unwrap();
        prop_assert_eq!(report.bound, common::vcd_oracle(&x));
        prop_assert!(report.table.iter().all(|e| e.pair_checked && e.pair_degree == e.nerve_degree));
    }
}

#[test]
fn torsion_examples() {
    let h = homology(&fixtures::rp2(), Coefficients::Integers, false).unwrap();
    assert_eq!(h.group(1).torsion, vec![BigInt::from(2)]);
    let c = cohomology(&fixtures::rp2(), Coefficients::Integers, false).unwrap();
    assert_eq!(c.group(1).rank, 0);
    assert!(c.group(1).torsion.is_empty());
    assert_eq!(c.group(2).torsion, vec![BigInt::from(2)]);
    let f2 = homology(&fixtures::rp2(), Coefficients::Prime(2), false).unwrap();
    assert_eq!(f2.betti(), vec![1, 1, 1]);
    let q = homology(&fixtures::rp2(), Coefficients::Rationals, false).unwrap();
    assert_eq!(q.betti(), vec![1, 0, 0]);
}

#[test]
fn relative_homology_of_an_edge() {
    let edge = fixtures::edge();
    let ends = racg_core::SimplicialComplex::from_faces(&[vec!["s"], vec!["t"]]).unwrap();
    let c = ChainComplex::new(&edge, Some(&ends), false).unwrap();
    let h = c.homology(Coefficients::Integers).unwrap();
    assert_eq!(h.group(1).rank, 1);
    assert!(h.group(0).is_zero());
}

#[test]
fn vcd_fixture_values() {
    let cases = [
        (fixtures::s0(), 1),
        (fixtures::edge(), 0),
        (fixtures::pentagon(), 2),
        (fixtures::hexagon(), 2),
        (fixtures::octahedron(), 3),
        (fixtures::petersen(), 2),
    ];
    for (x, want) in cases {
        assert_eq!(common::vcd_oracle(&x), want, "{:?}", x.names());
        let w = RacgSystem::from_nerve(&x).unwrap();
        let r = vcd_lower_bound(&w).unwrap();
        assert_eq!(r.bound, want);
        assert!(r.complete);
        assert!(r.table.iter().all(|e| e.pair_checked));
    }
}

#[test]
fn coefficient_parsing() {
    assert_eq!(Coefficients::parse("fp:7").unwrap(), Coefficients::Prime(7));
    assert!(Coefficients::parse("fp:8").is_err());
    assert!(Coefficients::parse("r").is_err());
}
