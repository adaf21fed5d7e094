mod common;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use plane_monodromy::dynamics::nongeneric_angles;
use plane_monodromy::graph::direct_and_order;
use plane_monodromy::gyrograph::build_gyrograph;
use plane_monodromy::homology::{assemble, char_poly, determinant, smith_normal_form, IntMatrix, MatrixBundle, Poly};
use plane_monodromy::{examples, DecoratedGraph, Turn};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

/// Above this size the interpolation oracle gets slow in debug builds.
const INTERPOLATION_LIMIT: usize = 40;

fn generic_theta(dg: &DecoratedGraph) -> Turn {
    let candidates = nongeneric_angles(dg);
    (1..)
        .map(|k| Turn::from_fraction(k, 997))
        .find(|t| !candidates.contains(t))
        .expect("finitely many candidates")
}

fn product(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    assert_eq!(a.cols(), b.rows());
    let mut out = IntMatrix::zeros(a.rows(), b.cols());
    for i in 0..a.rows() {
        for j in 0..b.cols() {
            let s: BigInt = (0..a.cols()).map(|k| a.get(i, k) * b.get(k, j)).sum();
            out.set(i, j, s);
        }
    }
    out
}

fn is_unit(x: &BigInt) -> bool {
    x.abs().is_one()
}

fn bundle_for(dg: &DecoratedGraph, theta: Turn) -> MatrixBundle {
    assemble(&build_gyrograph(dg, theta).unwrap()).unwrap()
}

/// `1 + t + ... + t^(m0 - 1)`, the characteristic polynomial of the cyclic
/// permutation on the sum-zero vectors.
fn reduced_cyclic(m0: usize) -> Poly {
    Poly::new(vec![BigInt::one(); m0])
}

fn check_bundle(dg: &DecoratedGraph, b: &MatrixBundle) {
    for c in &b.checks {
        assert!(c.passed, "{}: {}", c.name, c.detail);
    }
    let (m0, n1) = (b.basis.i0.len(), b.basis.i1.len());
    let snf = &b.snf;

    // The repeller complex is connected: H0 = Z, so d1 has rank m0 - 1 and
    // its image is saturated.
    assert_eq!(snf.rank, m0 - 1);
    assert!(snf.invariant_factors.iter().all(|f| f.is_one()));
    assert_eq!(snf.invariant_factors, common::invariant_factors_naive(&b.d1));
    assert_eq!(b.m_h.rows(), n1 - snf.rank);
    let euler: i128 = (0..dg.nv).map(|i| dg.m[i] * (2 - dg.valency(i) as i128)).sum();
    assert_eq!(euler, m0 as i128 - n1 as i128);

    assert_eq!(product(&product(&snf.u, &b.d1), &snf.w), snf.d);
    assert_eq!(product(&snf.u, &snf.u_inv), IntMatrix::identity(m0));
    assert_eq!(product(&snf.w, &snf.w_inv), IntMatrix::identity(n1));
    let cycles = snf.w.block(0, n1, snf.rank, n1);
    assert!(product(&b.d1, &cycles).is_zero(), "trailing columns of W are not cycles");

    assert_eq!(product(&b.d1, &b.b1), product(&b.b0, &b.d1));
    assert_eq!(product(&b.b1, &b.v.transpose()), b.v);
    assert_eq!(product(&b.m_h, &b.var_h.transpose()), b.var_h);
    let expected = {
        let conj = product(&product(&snf.w_inv, &b.b1), &snf.w);
        conj.block(snf.rank, n1, snf.rank, n1)
    };
    assert_eq!(b.m_h, expected);

    let char_m_h = char_poly(&b.m_h);
    let (num, den) = common::zeta_by_hand(&dg.m[..dg.nv], &(0..dg.nv).map(|i| dg.valency(i)).collect::<Vec<_>>());
    let (zeta, rem) = num.div_rem(&den).expect("monic denominator");
    assert!(rem.is_zero());
    assert_eq!(char_m_h, zeta.reversed(b.m_h.rows() + 1));
    // C1 is an extension of the boundaries by the cycles.
    assert_eq!(char_poly(&b.b1), char_m_h.mul(&reduced_cyclic(m0)));
    if b.m_h.rows() <= INTERPOLATION_LIMIT {
        assert_eq!(char_m_h, common::char_poly_by_interpolation(&b.m_h));
        assert_eq!(determinant(&b.var_h), b.var_h.det());
        assert_eq!(determinant(&b.m_h), b.m_h.det());
    }
    assert!(is_unit(&determinant(&b.var_h)));
    assert!(is_unit(&determinant(&b.m_h)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn homology_of_random_graphs(seed in 0u64..100_000) {
        let g = common::random_graph(seed, 7);
        let dg = direct_and_order(&g).unwrap();
        check_bundle(&dg, &bundle_for(&dg, generic_theta(&dg)));
    }

    #[test]
    fn smith_form_matches_the_oracle(seed in 0u64..1_000_000) {
        let a = common::random_matrix(&mut StdRng::seed_from_u64(seed), 9);
        let s = smith_normal_form(&a);
        prop_assert_eq!(product(&product(&s.u, &a), &s.w), s.d.clone());
        prop_assert_eq!(product(&s.u, &s.u_inv), IntMatrix::identity(a.rows()));
        prop_assert_eq!(product(&s.w_inv, &s.w), IntMatrix::identity(a.cols()));
        prop_assert_eq!(&s.invariant_factors, &common::invariant_factors_naive(&a));
        prop_assert_eq!(s.rank, s.invariant_factors.len());
    }

    #[test]
    fn modular_routes_match_elimination(seed in 0u64..1_000_000) {
        let a = common::random_matrix(&mut StdRng::seed_from_u64(seed), 9);
        let n = a.rows().min(a.cols());
        let square = a.block(0, n, 0, n);
        prop_assert_eq!(determinant(&square), square.det());
        prop_assert_eq!(char_poly(&square), common::char_poly_by_interpolation(&square));
    }
}

#[test]
fn homology_is_independent_of_the_angle() {
    // Monodromy matrices at different generic angles are conjugate, so the
    // characteristic polynomial and invariant factors cannot move.
    for g in [examples::cusp(), examples::two_pairs(), examples::two_cusps(), examples::smooth()] {
        let dg = direct_and_order(&g).unwrap();
        let thetas = [Turn::from_fraction(1, 100), Turn::from_fraction(1, 3) + Turn::from_fraction(1, 997), generic_theta(&dg)];
        let bundles: Vec<MatrixBundle> = thetas.iter().map(|&t| bundle_for(&dg, t)).collect();
        for b in &bundles {
            check_bundle(&dg, b);
            assert_eq!(b.char_poly_m_h, bundles[0].char_poly_m_h);
            assert_eq!(b.m_h.rows(), bundles[0].m_h.rows());
        }
    }
}

#[test]
fn smooth_branch_has_no_vanishing_cycles() {
    let dg = direct_and_order(&examples::smooth()).unwrap();
    let b = bundle_for(&dg, Turn::from_fraction(1, 100));
    assert_eq!(b.m_h.rows(), 0);
    assert_eq!(b.char_poly_m_h, Poly::one());
}

#[test]
fn large_entries_survive_the_modular_lift() {
    // Entries near 2^40 push the determinant past a single 62-bit prime.
    let big = 1i64 << 40;
    let a = IntMatrix::from_rows(&[vec![big, 3, 1], vec![7, big, 2], vec![1, 5, -big]], 3);
    assert_eq!(determinant(&a), a.det());
    assert_eq!(char_poly(&a), common::char_poly_by_interpolation(&a));
    assert!(!determinant(&a).is_zero());
}
