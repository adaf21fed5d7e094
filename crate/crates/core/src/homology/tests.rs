use super::*;
use crate::examples;
use crate::graph::direct_and_order;
use crate::gyrograph::build_gyrograph;
use crate::Turn;

fn bundle(g: crate::ResolutionGraph) -> MatrixBundle {
    let dg = direct_and_order(&g).unwrap();
    let gg = build_gyrograph(&dg, Turn::from_fraction(1, 100)).unwrap();
    assemble(&gg).unwrap()
}

fn assert_checks(b: &MatrixBundle) {
    for c in &b.checks {
        assert!(c.passed, "{}: {}", c.name, c.detail);
    }
}

#[test]
fn cusp_has_the_order_six_monodromy() {
    let b = bundle(examples::cusp());
    assert_checks(&b);
    assert_eq!(b.m_h.rows(), 2);
    assert_eq!(b.char_poly_m_h, Poly::from_i64(&[1, -1, 1]));
    assert_eq!(b.m_h.power(6), IntMatrix::identity(2));
}

#[test]
fn homology_ranks_of_the_examples() {
    let a = bundle(examples::two_pairs());
    assert_checks(&a);
    assert_eq!(a.m_h.rows(), 16);
    let b = bundle(examples::two_cusps());
    assert_checks(&b);
    assert_eq!(b.m_h.rows(), 11);
}

#[test]
fn smooth_curve_has_trivial_homology() {
    let b = bundle(examples::smooth());
    assert_checks(&b);
    assert_eq!(b.m_h.rows(), 0);
    assert_eq!(b.zeta.predicted, Poly::one());
}
