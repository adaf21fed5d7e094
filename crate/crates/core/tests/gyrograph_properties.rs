mod common;

use std::collections::{BTreeMap, BTreeSet};

use plane_monodromy::dynamics::{nongeneric_angles, Prong};
use plane_monodromy::graph::direct_and_order;
use plane_monodromy::gyrograph::{build_gyrograph, check_weights, CirclePoint, Gyration, Gyrograph};
use plane_monodromy::turn::{frac, q, qi};
use plane_monodromy::{examples, DecoratedGraph, Turn, Q};
use proptest::prelude::*;

fn generic_theta(dg: &DecoratedGraph) -> Turn {
    let candidates = nongeneric_angles(dg);
    (1..)
        .map(|k| Turn::from_fraction(k, 997))
        .find(|t| !candidates.contains(t))
        .expect("finitely many candidates")
}

fn orbit(p: Prong, step: impl Fn(Prong) -> Prong) -> Vec<Prong> {
    let mut out = vec![p];
    let mut next = step(p);
    while next != p {
        assert!(out.len() < 10_000, "no return to {p:?}");
        out.push(next);
        next = step(next);
    }
    out
}

/// Circles list every prong end once, sorted by angle, and the end map
/// agrees with them.
fn check_circles(gg: &Gyrograph) {
    let mut seen = BTreeMap::new();
    for (r, circle) in gg.circles.iter().enumerate() {
        assert!(circle.windows(2).all(|w| w[0].0 < w[1].0), "circle {} unsorted", r + 1);
        for &(angle, p) in circle {
            assert_eq!(gg.ends[&p], CirclePoint { circle: r + 1, angle });
            assert!(seen.insert(p, r).is_none(), "{p:?} twice");
        }
    }
    let all: BTreeSet<Prong> = gg.prongs.iter().copied().collect();
    assert_eq!(seen.keys().copied().collect::<BTreeSet<_>>(), all);
    assert_eq!(gg.circles.len(), gg.repellers);
}

/// `k_p` cycles the sheets with period `m_i`, and the counterclockwise
/// successor cycles exactly the prongs of one singular point.
fn check_automorphisms(gg: &Gyrograph) {
    let dg = gg.model.dg;
    let all: BTreeSet<Prong> = gg.prongs.iter().copied().collect();
    for &p in &gg.prongs {
        let sheets = orbit(p, |x| gg.k_p(x));
        assert_eq!(sheets.len() as i128, dg.m[p.vertex], "{p:?}");
        assert!(sheets.iter().all(|x| all.contains(x)));
        let around = orbit(p, |x| gg.model.next_ccw(x));
        let same_point: BTreeSet<Prong> =
            gg.prongs.iter().copied().filter(|&x| gg.singular_point(x) == gg.singular_point(p)).collect();
        assert_eq!(around.into_iter().collect::<BTreeSet<_>>(), same_point, "{p:?}");
    }
    let start = CirclePoint { circle: 1, angle: Turn::from_fraction(1, 7) };
    let mut x = gg.k_theta(start);
    for _ in 1..gg.repellers {
        assert_ne!(x, start);
        x = gg.k_theta(x);
    }
    assert_eq!(x, start);
}

/// Replays a gyration against the circles: each logged edge is the next
/// prong end met, the turn decision follows `threshold(edge)`, and the
/// final stretch runs out the remaining length.
fn replay(gg: &Gyrograph, g: &Gyration, mut inclusive: bool, threshold: impl Fn(Prong) -> Q) {
    let mut pos = g.start;
    let mut elapsed = qi(0);
    let met_after = |pos: CirclePoint, inclusive: bool| -> Option<(Q, Prong)> {
        gg.circles[pos.circle - 1]
            .iter()
            .map(|&(a, p)| (frac(a.value() - pos.angle.value()), p))
            .filter(|&(d, _)| inclusive || d != qi(0))
            .min()
    };
    for record in &g.turn_log {
        let (dist, f) = met_after(pos, inclusive).expect("a prong on the circle");
        assert_eq!(f, record.edge);
        elapsed += dist;
        assert_eq!(elapsed, record.time);
        assert!(elapsed < g.length);
        assert_eq!(record.took_turn, elapsed < threshold(f));
        let next = if record.took_turn { gg.model.next_ccw(f) } else { f };
        pos = gg.ends[&next];
        inclusive = false;
    }
    match g.end_edge {
        Some(f) => {
            let (dist, met) = met_after(pos, inclusive).unwrap();
            assert_eq!((met, elapsed + dist), (f, g.length));
            assert_eq!(g.end, gg.ends[&f]);
        }
        None => {
            let rest = g.length - elapsed;
            if let Some((dist, _)) = met_after(pos, inclusive) {
                assert!(dist > rest);
            }
            assert_eq!(g.end, CirclePoint { circle: pos.circle, angle: pos.angle + rest });
        }
    }
}

fn check_gyrations(gg: &Gyrograph) {
    gg.check_absolute_property().unwrap();
    gg.check_relative_property().unwrap();
    for &e in &gg.prongs {
        let g = gg.absolute_gyration(e).unwrap();
        assert_eq!(g.start, gg.ends[&gg.k_p(e)]);
        assert_eq!(g.end, gg.k_theta(gg.ends[&e]));
        replay(gg, &g, false, |f| gg.weight(e) - gg.weight(f));

        let (after, before) = gg.relative_gyration(e).unwrap();
        replay(gg, &after, false, |f| gg.dual_weight(f));
        replay(gg, &before, true, |f| gg.dual_weight(f));
        for g in [&after, &before] {
            let f = g.end_edge.expect("relative gyrations stop on a prong");
            assert_eq!(gg.singular_point(f), gg.singular_point(gg.k_p(e)));
        }
    }
}

/// A monodromy spoor is a path from `k_p(e)` with a detour out and back per
/// turn, a variation spoor a difference of two such paths.
fn check_spoors(gg: &Gyrograph) {
    for &e in &gg.prongs {
        let image = gg.monodromy_spoor(e).unwrap();
        assert_eq!(image.chain().values().sum::<i64>(), 1, "{e:?}");
        let turns = image.gyrations[0].turns(gg).len();
        assert_eq!(image.crossings.len(), 1 + 2 * turns);
        let variation = gg.variation_spoor(e).unwrap();
        assert_eq!(variation.chain().values().sum::<i64>(), 0, "{e:?}");
    }
}

fn check_all(dg: &DecoratedGraph, theta: Turn) {
    check_weights(dg).unwrap();
    let gg = build_gyrograph(dg, theta).unwrap();
    check_circles(&gg);
    check_automorphisms(&gg);
    check_gyrations(&gg);
    check_spoors(&gg);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn gyrographs_of_random_graphs(seed in 0u64..100_000) {
        let g = common::random_graph(seed, 7);
        let dg = direct_and_order(&g).unwrap();
        check_all(&dg, generic_theta(&dg));
    }
}

#[test]
fn worked_examples_have_consistent_gyrographs() {
    for g in [examples::cusp(), examples::two_pairs(), examples::two_cusps(), examples::smooth()] {
        let dg = direct_and_order(&g).unwrap();
        for theta in [Turn::from_fraction(1, 100), Turn::from_fraction(1, 2) + Turn::from_fraction(1, 997)] {
            check_all(&dg, theta);
        }
    }
}

#[test]
fn cusp_gyrograph() {
    let dg = direct_and_order(&examples::cusp()).unwrap();
    let gg = build_gyrograph(&dg, Turn::from_fraction(1, 100)).unwrap();
    // The m = 6 vertex has the m = 3 vertex as dead child: a six-prong
    // multiprong lifting to three singular points, and no saddles.
    assert_eq!(gg.prongs.len(), 6);
    let points: BTreeSet<_> = gg.prongs.iter().map(|&p| gg.singular_point(p)).collect();
    assert_eq!(points.len(), 3);
    assert_eq!(gg.repellers, 2);
    assert!(gg.circles.iter().all(|c| c.len() == 3));
    let weights: BTreeSet<Q> = gg.prongs.iter().map(|&p| gg.weight(p)).collect();
    // Hironaka numbers 2 at the root and 3 at the rupture vertex.
    assert_eq!(weights, BTreeSet::from([q(1, 2) - q(1, 3)]));
}
