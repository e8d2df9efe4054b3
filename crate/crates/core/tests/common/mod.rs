//! Fixtures shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use vqc_core::compile::{compile, CompileOptions, Compiled, Mode};
use vqc_core::pauli::{block_angle_ref, parse_kernel, Kernel, PauliOp, PauliString, TetrisBlock};
use vqc_core::synth::{LeafTreePolicy, SynthConfig};
use vqc_core::topology::{make_linear, CouplingGraph, Mapping};
use vqc_core::verify::{equivalent_up_to_phase_and_permutation, kernel_reference};

pub struct Instance {
    pub kernel: Kernel,
    pub graph: CouplingGraph,
    pub mapping: Mapping,
}

impl Instance {
    pub fn compile(&self, mode: Mode, synth: SynthConfig) -> Compiled {
        let opts = CompileOptions {
            mode,
            synth,
            initial_mapping: Some(self.mapping.clone()),
            ..CompileOptions::default()
        };
        compile(&self.kernel, &self.graph, &opts).expect("fixture compiles")
    }
}

pub fn no_bridge() -> SynthConfig {
    SynthConfig {
        bridging: false,
        ..SynthConfig::default()
    }
}

pub fn single_tree() -> SynthConfig {
    SynthConfig {
        leaf_trees: LeafTreePolicy::Single,
        bridging: false,
        ..SynthConfig::default()
    }
}

/// Two strings sharing a Z run on qubits 1..=3, on a 5-qubit line.
pub fn shared_z_run() -> Instance {
    let graph = make_linear(5).unwrap();
    Instance {
        kernel: parse_kernel("YZZZY\nXZZZX\n").unwrap(),
        mapping: Mapping::bfs_initial(&graph, 5).unwrap(),
        graph,
    }
}

/// Three strings with roots {0, 1} and a five-qubit Z run, placed on a
/// 7-qubit line as [q3, q2, q0, q1, q4, q5, q6] so the run is split in two
/// around the roots. Root operators change at every string boundary, so
/// only leaf-internal CNOTs can cancel.
pub fn split_leaf_run() -> Instance {
    let graph = make_linear(7).unwrap();
    Instance {
        kernel: parse_kernel("XYZZZZZ\nYZZZZZZ\nZXZZZZZ\n").unwrap(),
        mapping: Mapping::new(vec![2, 3, 1, 0, 4, 5, 6], 7).unwrap(),
        graph,
    }
}

/// Eight strings over roots q0, q1 with Z on leaves q2, q3, on an 8-cycle:
/// q2 @0, q0 @1, q1 @2, q3 @4, everything else free.
pub fn ring_two_leaves() -> Instance {
    let graph = CouplingGraph::new(8, (0..8).map(|i| (i, (i + 1) % 8))).unwrap();
    let text = "XXZZ\nXYZZ\nYXZZ\nYYZZ\nXXZZ\nXYZZ\nYXZZ\nYYZZ\n";
    Instance {
        kernel: parse_kernel(text).unwrap(),
        mapping: Mapping::new(vec![1, 2, 0, 4], 8).unwrap(),
        graph,
    }
}

/// Three strings on five qubits placed on a 7-qubit line with two free
/// qubits between q3 and q4. `roots` selects the partition.
pub fn partition_choice(roots: &[usize]) -> Instance {
    let graph = make_linear(7).unwrap();
    let strings = parse_kernel("XYZZZ\nYXZZZ\nXXZZZ\n").unwrap().blocks.remove(0).strings;
    let roots: BTreeSet<usize> = roots.iter().copied().collect();
    let leaves: BTreeSet<usize> = (0..5).filter(|q| !roots.contains(q)).collect();
    let block = TetrisBlock::with_partition(strings, roots, leaves).unwrap();
    Instance {
        kernel: Kernel {
            n_qubits: 5,
            blocks: vec![block],
        },
        mapping: Mapping::new(vec![1, 0, 2, 3, 6], 7).unwrap(),
        graph,
    }
}

/// Random kernel: 2..=5 qubits, 1..=3 blocks of 1..=4 strings. Blocks share a
/// random Z/X/Y backbone on some qubits so that leaf sets are non-trivial.
pub fn random_kernel(rng: &mut ChaCha8Rng) -> Kernel {
    let n = rng.gen_range(2..=5);
    let n_blocks = rng.gen_range(1..=3);
    let ops = [PauliOp::I, PauliOp::X, PauliOp::Y, PauliOp::Z];
    let blocks = (0..n_blocks)
        .map(|b| {
            let backbone: Vec<Option<PauliOp>> = (0..n)
                .map(|_| rng.gen_bool(0.5).then(|| ops[rng.gen_range(1..4)]))
                .collect();
            let n_strings = rng.gen_range(1..=4);
            let strings = (0..n_strings)
                .map(|_| loop {
                    let word: Vec<PauliOp> = backbone
                        .iter()
                        .map(|fixed| fixed.unwrap_or_else(|| ops[rng.gen_range(0..4)]))
                        .collect();
                    if word.iter().any(|o| !o.is_identity()) {
                        let w = if rng.gen_bool(0.3) {
                            rng.gen_range(-1.0..1.0)
                        } else {
                            1.0
                        };
                        break PauliString::new(word, w, block_angle_ref(b));
                    }
                })
                .collect();
            TetrisBlock::new(strings)
        })
        .collect();
    Kernel { n_qubits: n, blocks }
}

pub fn random_bindings(kernel: &Kernel, rng: &mut ChaCha8Rng) -> BTreeMap<String, f64> {
    (0..kernel.blocks.len())
        .map(|b| (block_angle_ref(b), rng.gen_range(-3.0..3.0)))
        .collect()
}

/// Compiled circuit against the product of exponentials in the order the
/// compiler scheduled the blocks.
pub fn is_equivalent(kernel: &Kernel, out: &Compiled, bindings: &BTreeMap<String, f64>, tol: f64) -> bool {
    let reference = kernel_reference(kernel, &out.block_order, bindings, 1.0).unwrap();
    equivalent_up_to_phase_and_permutation(&out.circuit, &reference, bindings, 1.0, tol).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Every two-qubit gate after SWAP expansion sits on a coupling edge.
pub fn all_on_edges(graph: &CouplingGraph, out: &Compiled) -> bool {
    out.circuit.decompose_swaps().gates.iter().all(|g| match g {
        vqc_core::circuit::Gate::Cnot { control, target } => graph.is_edge(*control, *target),
        _ => true,
    })
}
