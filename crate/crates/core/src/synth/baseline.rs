//! Hardware-agnostic reference syntheses and a simple router for them.

use std::collections::BTreeSet;

use super::{effective_sets, emit_string, Occupant, SynthError, SynthesisTree};
use crate::circuit::{Circuit, Gate};
use crate::pauli::{Kernel, PauliString, TetrisBlock};
use crate::topology::{CouplingGraph, Mapping};

/// Roots chained in ascending order below the smallest root, and all
/// leaves in one ascending chain hanging off that same root. Positions are
/// logical indices.
pub fn max_cancel_tree(block: &TetrisBlock) -> Option<SynthesisTree> {
    let (roots, leaves) = effective_sets(block);
    let mut roots = roots.into_iter();
    let r0 = roots.next()?;
    let mut tree = SynthesisTree::new(r0, r0);
    let mut above = r0;
    for r in roots {
        tree.attach(r, Occupant::Logical(r), above);
        above = r;
    }
    let mut above = r0;
    for l in leaves {
        tree.attach(l, Occupant::Logical(l), above);
        above = l;
    }
    Some(tree)
}

/// Chain over the string's support in ascending order; the last qubit is
/// the root.
pub fn naive_chain_tree(ps: &PauliString) -> Option<SynthesisTree> {
    let support: Vec<usize> = ps.support().collect();
    let (&root, rest) = support.split_last()?;
    let mut tree = SynthesisTree::new(root, root);
    let mut above = root;
    for &q in rest.iter().rev() {
        tree.attach(q, Occupant::Logical(q), above);
        above = q;
    }
    Some(tree)
}

/// Logical circuit using [`max_cancel_tree`] for every block in `order`.
pub fn synthesize_max_cancel(kernel: &Kernel, order: &[usize]) -> Circuit {
    let mut circ = Circuit::new(kernel.n_qubits);
    for &b in order {
        let block = &kernel.blocks[b];
        if let Some(tree) = max_cancel_tree(block) {
            for ps in &block.strings {
                emit_string(&tree, ps, &mut circ.gates);
            }
        }
    }
    circ
}

/// Logical circuit with an independent chain per string.
pub fn synthesize_naive_chain(kernel: &Kernel, order: &[usize]) -> Circuit {
    let mut circ = Circuit::new(kernel.n_qubits);
    for &b in order {
        for ps in &kernel.blocks[b].strings {
            if let Some(tree) = naive_chain_tree(ps) {
                emit_string(&tree, ps, &mut circ.gates);
            }
        }
    }
    circ
}

/// Maps a logical circuit onto `graph`. Before each non-adjacent CNOT the
/// control is swapped along a shortest path until it neighbours the target.
pub fn route_greedy(graph: &CouplingGraph, logical: &Circuit, mut mapping: Mapping) -> Result<Circuit, SynthError> {
    let mut out = Circuit::with_mapping(graph.num_qubits(), mapping.positions().to_vec());
    let none = BTreeSet::new();
    for g in &logical.gates {
        let routed = match g {
            Gate::H(q) => Gate::H(mapping.phys(*q)),
            Gate::X(q) => Gate::X(mapping.phys(*q)),
            Gate::Rx(q, a) => Gate::Rx(mapping.phys(*q), *a),
            Gate::Rz(q, a) => Gate::Rz(mapping.phys(*q), a.clone()),
            Gate::Reset(q) => Gate::Reset(mapping.phys(*q)),
            Gate::Cnot { control, target } => {
                loop {
                    let (pc, pt) = (mapping.phys(*control), mapping.phys(*target));
                    if graph.is_edge(pc, pt) {
                        break;
                    }
                    let path = graph.shortest_path(pc, pt, &none)?;
                    out.push(Gate::Swap(path[0], path[1]));
                    mapping.apply_swap(path[0], path[1]);
                }
                Gate::cnot(mapping.phys(*control), mapping.phys(*target))
            }
            Gate::Swap(..) => return Err(SynthError::Unroutable(g.to_string())),
        };
        out.push(routed);
    }
    out.final_mapping = mapping.positions().to_vec();
    Ok(out)
}
