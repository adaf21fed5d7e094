use super::*;
use crate::examples;
use crate::graph::direct_and_order;

fn cusp() -> DecoratedGraph {
    direct_and_order(&examples::cusp()).unwrap()
}

fn worked() -> DecoratedGraph {
    direct_and_order(&examples::two_pairs()).unwrap()
}

#[test]
fn cusp_singularities() {
    let dg = cusp();
    let model = FlowModel::new(&dg, Turn::from_fraction(1, 100)).unwrap();
    let sing = model.singularities();
    assert!(!sing.is_empty());
}

#[test]
fn worked_example_runs() {
    let dg = worked();
    let model = FlowModel::new(&dg, Turn::from_fraction(1, 100)).unwrap();
    model.itineraries().unwrap();
}

fn all_examples() -> Vec<(&'static str, DecoratedGraph)> {
    vec![
        ("cusp", cusp()),
        ("two_pairs", worked()),
        ("two_cusps", direct_and_order(&examples::two_cusps()).unwrap()),
    ]
}

#[test]
fn swept_saddle_connections_are_candidates() {
    for (name, dg) in all_examples() {
        let candidates = nongeneric_angles(&dg);
        let exact = saddle_connection_angles(&dg).unwrap();
        assert!(exact.is_subset(&candidates), "{name}: {exact:?} not in {candidates:?}");
    }
}

#[test]
fn connection_angles_of_the_examples() {
    assert!(saddle_connection_angles(&cusp()).unwrap().is_empty());
    for dg in [worked(), direct_and_order(&examples::two_cusps()).unwrap()] {
        let exact = saddle_connection_angles(&dg).unwrap();
        assert_eq!(exact.into_iter().collect::<Vec<_>>(), vec![Turn::zero()]);
    }
}

#[test]
fn every_prong_lands_on_a_repeller() {
    for (name, dg) in all_examples() {
        let model = FlowModel::new(&dg, Turn::from_fraction(1, 100)).unwrap();
        let ends = model.prong_endpoints().unwrap();
        let m0 = dg.m[dg.root()] as usize;
        assert!(ends.values().all(|&(r, _)| (1..=m0).contains(&r)), "{name}");
    }
}

#[test]
fn chain_variation_and_monodromy_stay_in_the_basis() {
    for (name, dg) in all_examples() {
        let model = FlowModel::new(&dg, Turn::from_fraction(1, 100)).unwrap();
        for i in dg.invariant_vertices() {
            for a in 1..=model.saddle_slots(i) {
                for b in 1..=dg.m[i] as usize {
                    let mon = model.chain_monodromy(i, a, b).unwrap();
                    let var = model.chain_variation(i, a, b).unwrap();
                    assert!(!mon.is_empty() && !var.is_empty(), "{name} {:?}", (i, a, b));
                }
            }
        }
    }
}
