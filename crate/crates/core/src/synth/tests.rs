use std::collections::BTreeMap;

use super::*;
use crate::pauli::parse_kernel;
use crate::topology::make_linear;
use crate::verify::{equivalent_up_to_phase_and_permutation, kernel_reference};

fn block(text: &str) -> TetrisBlock {
    parse_kernel(text).unwrap().blocks.remove(0)
}

#[test]
fn score_examples() {
    assert_eq!(score(2, 3.0, true, 8), 19.0);
    assert_eq!(score(4, 3.0, false, 8), 11.0);
    assert_eq!(score(1, 7.5, false, 3), 2.0);
    assert_eq!(score(5, 2.5, true, 2) - score(4, 2.5, true, 2), 2.5);
}

#[test]
fn route_swap_stops_adjacent() {
    let g = make_linear(3).unwrap();
    let mut m = Mapping::bfs_initial(&g, 3).unwrap();
    let mut out = Vec::new();
    assert_eq!(route_swap(&[0, 1, 2], &mut m, &mut out), 1);
    assert_eq!(out, vec![Gate::Swap(0, 1)]);
    assert_eq!(m.phys(0), 1);
    assert_eq!(route_swap(&[1, 2], &mut m, &mut out), 0);
}

#[test]
fn bridge_gate_lists() {
    let g = make_linear(4).unwrap();
    let m = Mapping::new(vec![0, 3], 4).unwrap();
    assert_eq!(bridge_cnot(&g, &m, 0, 1, &[]), Ok(vec![Gate::cnot(0, 1)]));
    assert_eq!(
        bridge_cnot(&g, &m, 0, 3, &[1, 2]).unwrap(),
        vec![
            Gate::cnot(0, 1),
            Gate::cnot(1, 2),
            Gate::cnot(2, 3),
            Gate::cnot(1, 2),
            Gate::cnot(0, 1)
        ]
    );
    assert_eq!(bridge_cnot(&g, &m, 0, 3, &[2]), Err(SynthError::BrokenChain(0, 2)));
    let busy = Mapping::new(vec![0, 1, 3], 4).unwrap();
    assert_eq!(bridge_cnot(&g, &busy, 0, 3, &[1, 2]), Err(SynthError::DirtyAncilla(1)));
}

#[test]
fn xx_on_two_qubit_line_matches_exponential() {
    let g = make_linear(2).unwrap();
    let cfg = SynthConfig::default();
    let kernel = parse_kernel("XX\n").unwrap();
    let mut mapping = Mapping::bfs_initial(&g, 2).unwrap();
    let mut circ = Circuit::with_mapping(2, mapping.positions().to_vec());
    let res = Synthesizer::new(&g, &cfg)
        .synthesize_block(&kernel.blocks[0], &[], &mut mapping, &mut circ)
        .unwrap();
    assert_eq!(res.tree.root(), 0);
    assert_eq!(circ.cnot_count(), 2);
    let b = BTreeMap::from([("theta0".to_string(), 0.7)]);
    let reference = kernel_reference(&kernel, &[0], &b, 1.0).unwrap();
    assert!(equivalent_up_to_phase_and_permutation(&circ, &reference, &b, 1.0, 1e-8).unwrap());
}

#[test]
fn bridge_chosen_when_move_breaks_next_interaction() {
    // q0 @0, free @1, q1 @2, q2 @3; the next string wants q1 next to q2.
    let g = make_linear(4).unwrap();
    let cfg = SynthConfig::default();
    let first = block("ZZI\n");
    let next = PauliString::parse_word("IZZ", "theta1").unwrap();
    let mut mapping = Mapping::new(vec![0, 2, 3], 4).unwrap();
    let mut circ = Circuit::with_mapping(4, mapping.positions().to_vec());
    let res = Synthesizer::new(&g, &cfg)
        .synthesize_block(&first, &[&next], &mut mapping, &mut circ)
        .unwrap();
    assert_eq!(res.bridges, 1);
    assert_eq!(res.swaps, 0);
    assert_eq!(mapping.positions(), &[0, 2, 3]);
    assert_eq!(mapping.liveness(1), Liveness::ReleasedToZero);
}

#[test]
fn bridging_disabled_or_blocked_falls_back_to_swap() {
    let g = make_linear(4).unwrap();
    let first = block("ZZI\n");
    let cfg = SynthConfig {
        bridging: false,
        ..SynthConfig::default()
    };
    let mut mapping = Mapping::new(vec![0, 2, 3], 4).unwrap();
    let mut circ = Circuit::with_mapping(4, mapping.positions().to_vec());
    let res = Synthesizer::new(&g, &cfg)
        .synthesize_block(&first, &[], &mut mapping, &mut circ)
        .unwrap();
    assert_eq!((res.swaps, res.bridges), (1, 0));

    // The only intermediate qubit holds a logical qubit.
    let cfg = SynthConfig::default();
    let mut mapping = Mapping::new(vec![0, 2, 1], 4).unwrap();
    let mut circ = Circuit::with_mapping(4, mapping.positions().to_vec());
    let res = Synthesizer::new(&g, &cfg)
        .synthesize_block(&first, &[], &mut mapping, &mut circ)
        .unwrap();
    assert_eq!((res.swaps, res.bridges), (1, 0));
}

#[test]
fn all_leaf_block_promotes_a_root() {
    let b = block("ZZ\nZZ\n");
    let (roots, leaves) = effective_sets(&b);
    assert_eq!(roots.into_iter().collect::<Vec<_>>(), vec![0]);
    assert_eq!(leaves.into_iter().collect::<Vec<_>>(), vec![1]);
}

#[test]
fn max_cancel_and_chain_trees() {
    let b = block("XYZZZ\nYXZZZ\nXXZZZ\n");
    let t = max_cancel_tree(&b).unwrap();
    let edges: Vec<_> = t.edges().collect();
    assert_eq!(edges, vec![(1, 0), (2, 0), (3, 2), (4, 3)]);
    let t = naive_chain_tree(&PauliString::parse_word("YZIZY", "t").unwrap()).unwrap();
    assert_eq!(t.root(), 4);
    let edges: Vec<_> = t.edges().collect();
    assert_eq!(edges, vec![(0, 1), (1, 3), (3, 4)]);
}

#[test]
fn greedy_router_respects_edges() {
    let g = make_linear(4).unwrap();
    let mut logical = Circuit::new(4);
    logical.push(Gate::cnot(0, 3));
    logical.push(Gate::H(0));
    let routed = route_greedy(&g, &logical, Mapping::bfs_initial(&g, 4).unwrap()).unwrap();
    assert_eq!(routed.swap_count(), 2);
    for gate in &routed.gates {
        if let Gate::Cnot { control, target } = gate {
            assert!(g.is_edge(*control, *target));
        }
    }
    assert_eq!(routed.final_mapping[0], 2);
}
