mod common;

use std::collections::BTreeSet;

use plane_monodromy::dynamics::{
    defining_congruences, nongeneric_angles, saddle_connection_angles, FlowModel, SingularityKind,
};
use plane_monodromy::graph::direct_and_order;
use plane_monodromy::gyrograph::build_gyrograph;
use plane_monodromy::turn::{q, qi};
use plane_monodromy::{examples, DecoratedGraph, Error, ResolutionGraph, Turn, Q};
use proptest::prelude::*;

fn generic_theta(dg: &DecoratedGraph) -> Turn {
    let candidates = nongeneric_angles(dg);
    (1..)
        .map(|k| Turn::from_fraction(k, 997))
        .find(|t| !candidates.contains(t))
        .expect("finitely many candidates")
}

/// `m_j alpha + m_i beta = theta - M_{ji}/2 (mod 1)` on every hop.
fn check_level_sets(dg: &DecoratedGraph, theta: Turn) {
    let model = FlowModel::new(dg, theta).unwrap();
    for it in model.itineraries().unwrap() {
        for h in &it.hops {
            let lhs = qi(dg.m[h.parent]) * h.alpha + qi(dg.m[h.child]) * h.beta;
            let rhs = theta.value() - q(dg.m_edge[h.child], 2);
            assert!((lhs - rhs).is_integer(), "hop {h:?} of {:?}", it.prong);
        }
    }
}

/// The lifts of the saddle at `(i, a)` step through the sheets by `1/m_i`,
/// one in each interval `[(b-1)/m_i, b/m_i)`.
fn check_sheets(dg: &DecoratedGraph, theta: Turn) {
    let model = FlowModel::new(dg, theta).unwrap();
    for s in model.singularities() {
        if s.kind != SingularityKind::Saddle && s.kind != SingularityKind::Repeller {
            continue;
        }
        let m = qi(dg.m[s.vertex]);
        let lo = q(s.sheet as i128 - 1, dg.m[s.vertex]);
        let alpha = s.alpha.value();
        assert!(lo <= alpha && alpha < lo + qi(1) / m, "{s:?}");
        let first = model
            .singularities()
            .into_iter()
            .find(|t| (t.kind, t.vertex, t.slot, t.sheet) == (s.kind, s.vertex, s.slot, 1))
            .unwrap();
        assert_eq!(alpha - first.alpha.value(), q(s.sheet as i128 - 1, 1) / m);
    }
}

fn check_congruences(dg: &DecoratedGraph) -> BTreeSet<Turn> {
    let congruences = defining_congruences(dg);
    let candidates = nongeneric_angles(dg);
    for t in &candidates {
        assert!(congruences.iter().any(|c| c.holds(*t)), "{t} solves nothing");
    }
    for c in &congruences {
        let Some(spacing) = c.spacing() else { continue };
        for t in candidates.iter().filter(|t| c.holds(**t)) {
            let next = Turn::new(t.value() + spacing);
            assert!(c.holds(next));
            assert!(candidates.contains(&next), "{next} missing after {t}");
        }
    }
    candidates
}

/// Every actual saddle connection is a candidate, and tracing prongs at it
/// reports the angle as non-generic.
fn check_connections(dg: &DecoratedGraph, candidates: &BTreeSet<Turn>) {
    let hits = saddle_connection_angles(dg).unwrap();
    assert!(hits.is_subset(candidates), "{hits:?} not within {candidates:?}");
    for &t in hits.iter().take(6) {
        let traced = FlowModel::unchecked(dg, t).itineraries();
        assert!(matches!(traced, Err(Error::NonGenericAngle { .. })), "{t}: {traced:?}");
    }
}

/// Just off each non-generic angle the pipeline runs and no prong touches a
/// separatrix.
fn check_degeneration(dg: &DecoratedGraph, candidates: &BTreeSet<Turn>) {
    let mut points: Vec<Q> = candidates.iter().map(|t| t.value()).collect();
    points.push(qi(1) + points.first().copied().unwrap_or_default());
    let gap = points.windows(2).map(|w| w[1] - w[0]).min().unwrap_or(qi(1));
    let eps = gap / qi(3);
    for t in candidates.iter().take(6) {
        for shifted in [t.value() - eps, t.value() + eps] {
            let theta = Turn::new(shifted);
            assert!(FlowModel::new(dg, theta).unwrap().itineraries().is_ok(), "{theta}");
            assert!(build_gyrograph(dg, theta).is_ok(), "{theta}");
        }
    }
}

fn check_endpoints_distinct(dg: &DecoratedGraph, theta: Turn) {
    let model = FlowModel::new(dg, theta).unwrap();
    let ends = model.prong_endpoints().unwrap();
    let distinct: BTreeSet<_> = ends.values().collect();
    assert_eq!(distinct.len(), ends.len());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn flow_laws_on_random_graphs(seed in 0u64..100_000) {
        let g = common::random_graph(seed, 7);
        let dg = direct_and_order(&g).unwrap();
        let theta = generic_theta(&dg);
        check_level_sets(&dg, theta);
        check_sheets(&dg, theta);
        check_endpoints_distinct(&dg, theta);
    }

    #[test]
    fn nongeneric_angles_on_random_graphs(seed in 0u64..100_000) {
        let g = common::random_graph(seed, 7);
        let dg = direct_and_order(&g).unwrap();
        let candidates = check_congruences(&dg);
        check_connections(&dg, &candidates);
        check_degeneration(&dg, &candidates);
    }
}

#[test]
fn worked_examples_obey_the_flow_laws() {
    for g in [examples::cusp(), examples::two_pairs(), examples::two_cusps(), examples::smooth()] {
        let dg = direct_and_order(&g).unwrap();
        let theta = Turn::from_fraction(1, 100);
        check_level_sets(&dg, theta);
        check_sheets(&dg, theta);
        check_endpoints_distinct(&dg, theta);
        let candidates = check_congruences(&dg);
        check_connections(&dg, &candidates);
        check_degeneration(&dg, &candidates);
    }
}

#[test]
fn two_pairs_prongs_are_evenly_spaced() {
    let dg = direct_and_order(&examples::two_pairs()).unwrap();
    let gg = build_gyrograph(&dg, Turn::from_fraction(1, 100)).unwrap();
    let weights: BTreeSet<Q> = gg.prongs.iter().map(|&p| gg.weight(p)).collect();
    assert_eq!(weights, BTreeSet::from([q(1, 12), q(5, 52)]));
    // The twelve prongs of the m = 12 multiprong land three to a circle.
    for circle in &gg.circles {
        let blue: Vec<Q> = circle.iter().filter(|(_, p)| p.vertex == 1).map(|(t, _)| t.value()).collect();
        assert_eq!(blue.len(), 3);
        assert!(blue.windows(2).all(|w| w[1] - w[0] == q(1, 3)));
    }
}

#[test]
fn stable_prongs_cross_bamboo_tori_along_the_real_axis() {
    // Root (m = 6) to a rupture vertex (m = 12), then a bamboo 29, 46, 63 to a
    // rupture vertex (m = 80) with a dead end of multiplicity 16. Away from
    // theta = 0 the multiprong prongs cross the bamboo tori at relative
    // angle 0 or 1/2 for some angles, which is not a separatrix there.
    let g = ResolutionGraph::new(
        vec![2, 3, 5, 2, 2, 2, 1],
        &[(0, 1), (1, 3), (2, 6), (3, 4), (4, 5), (5, 6)],
        &[(1, 1), (6, 1)],
        0,
    );
    let dg = direct_and_order(&g).unwrap();
    assert_eq!(dg.m[..7], [6, 12, 16, 29, 46, 63, 80]);
    let candidates = check_congruences(&dg);
    assert_eq!(candidates, BTreeSet::from([Turn::from_fraction(0, 1)]));
    check_connections(&dg, &candidates);
    for theta in [Turn::from_fraction(1, 3), Turn::from_fraction(2, 3)] {
        check_level_sets(&dg, theta);
        check_endpoints_distinct(&dg, theta);
        assert!(build_gyrograph(&dg, theta).is_ok());
    }
}
