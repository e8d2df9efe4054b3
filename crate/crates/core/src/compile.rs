//! End-to-end compilation of a kernel onto a coupling graph.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::circuit::Circuit;
use crate::metrics::{DurationModel, MetricsReport, NoiseParams};
use crate::pauli::{Kernel, PauliString};
use crate::peephole::cancel;
use crate::sched::{schedule, swap_cost_estimate, Scheduler};
use crate::synth::{
    route_greedy, synthesize_max_cancel, synthesize_naive_chain, BlockSynthesis, SynthConfig, SynthError, Synthesizer,
};
use crate::topology::{CouplingGraph, Mapping, TopologyError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Hardware-aware tree synthesis with leaf sharing.
    Tetris,
    /// One leaf chain per block, synthesized without hardware, then routed.
    MaxCancel,
    /// One chain per string, synthesized without hardware, then routed.
    NaiveChain,
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "tetris" => Ok(Mode::Tetris),
            "max_cancel" => Ok(Mode::MaxCancel),
            "naive_chain" => Ok(Mode::NaiveChain),
            _ => Err(format!(
                "unknown mode '{s}' (expected tetris, max_cancel or naive_chain)"
            )),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Tetris => "tetris",
            Mode::MaxCancel => "max_cancel",
            Mode::NaiveChain => "naive_chain",
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CompileError {
    #[error(transparent)]
    Synth(#[from] SynthError),
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error("kernel has {logical} qubits but the mapping covers {mapped}")]
    MappingSize { logical: usize, mapped: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompileOptions {
    pub mode: Mode,
    pub synth: SynthConfig,
    pub lookahead_k: usize,
    /// Defaults to a breadth-first placement from physical qubit 0.
    pub initial_mapping: Option<Mapping>,
    pub noise: NoiseParams,
    pub durations: DurationModel,
}

impl Default for CompileOptions {
    fn default() -> Self {
        Self {
            mode: Mode::Tetris,
            synth: SynthConfig::default(),
            lookahead_k: 10,
            initial_mapping: None,
            noise: NoiseParams::default(),
            durations: DurationModel::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Compiled {
    /// Synthesized circuit before cancellation. For the baselines this is
    /// the unrouted circuit on logical qubits.
    pub logical: Circuit,
    /// Final hardware circuit.
    pub circuit: Circuit,
    pub report: MetricsReport,
    pub block_order: Vec<usize>,
    /// Per-block placement details; empty for the baselines.
    pub blocks: Vec<BlockSynthesis>,
}

pub fn compile(kernel: &Kernel, graph: &CouplingGraph, opts: &CompileOptions) -> Result<Compiled, CompileError> {
    let mapping = match &opts.initial_mapping {
        Some(m) => m.clone(),
        None => Mapping::bfs_initial(graph, kernel.n_qubits)?,
    };
    if mapping.n_logical() != kernel.n_qubits {
        return Err(CompileError::MappingSize {
            logical: kernel.n_qubits,
            mapped: mapping.n_logical(),
        });
    }
    if mapping.n_physical() != graph.num_qubits() {
        return Err(TopologyError::InvalidMapping(format!(
            "mapping is for {} physical qubits, topology has {}",
            mapping.n_physical(),
            graph.num_qubits()
        ))
        .into());
    }
    match opts.mode {
        Mode::Tetris => compile_tetris(kernel, graph, opts, mapping),
        Mode::MaxCancel | Mode::NaiveChain => compile_baseline(kernel, graph, opts, mapping),
    }
}

fn compile_tetris(
    kernel: &Kernel,
    graph: &CouplingGraph,
    opts: &CompileOptions,
    mut mapping: Mapping,
) -> Result<Compiled, CompileError> {
    let mut logical = Circuit::with_mapping(graph.num_qubits(), mapping.positions().to_vec());
    let synth = Synthesizer::new(graph, &opts.synth);
    let mut sched = Scheduler::new(kernel.blocks.len(), opts.lookahead_k);
    let mut order = Vec::with_capacity(kernel.blocks.len());
    let mut blocks = Vec::with_capacity(kernel.blocks.len());
    while let Some(b) = sched.pick(kernel, |blk| swap_cost_estimate(graph, &mapping, blk)) {
        let lookahead: Vec<&PauliString> = sched
            .candidates(kernel)
            .into_iter()
            .flat_map(|c| kernel.blocks[c].strings.iter())
            .collect();
        blocks.push(synth.synthesize_block(&kernel.blocks[b], &lookahead, &mut mapping, &mut logical)?);
        order.push(b);
    }
    logical.final_mapping = mapping.positions().to_vec();
    let (circuit, stats) = cancel(&logical);
    let bridges = blocks.iter().map(|b| b.bridges).sum();
    let report = MetricsReport::measure(&logical, &circuit, stats, bridges, &opts.noise, &opts.durations);
    Ok(Compiled {
        logical,
        circuit,
        report,
        block_order: order,
        blocks,
    })
}

fn compile_baseline(
    kernel: &Kernel,
    graph: &CouplingGraph,
    opts: &CompileOptions,
    mapping: Mapping,
) -> Result<Compiled, CompileError> {
    // Without hardware in the loop only similarity drives the order.
    let order = schedule(kernel, opts.lookahead_k, |_| 0);
    let logical = match opts.mode {
        Mode::MaxCancel => synthesize_max_cancel(kernel, &order),
        _ => synthesize_naive_chain(kernel, &order),
    };
    let (canceled, stats) = cancel(&logical);
    let circuit = route_greedy(graph, &canceled, mapping)?;
    let report = MetricsReport::measure(&logical, &circuit, stats, 0, &opts.noise, &opts.durations);
    Ok(Compiled {
        logical,
        circuit,
        report,
        block_order: order,
        blocks: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::parse_kernel;
    use crate::topology::make_linear;

    #[test]
    fn mode_names_round_trip() {
        for m in [Mode::Tetris, Mode::MaxCancel, Mode::NaiveChain] {
            assert_eq!(m.to_string().parse::<Mode>(), Ok(m));
        }
        assert!("fast".parse::<Mode>().is_err());
    }

    #[test]
    fn rejects_mismatched_mapping() {
        let k = parse_kernel("ZZZ\n").unwrap();
        let g = make_linear(4).unwrap();
        let opts = CompileOptions {
            initial_mapping: Some(Mapping::new(vec![0, 1], 4).unwrap()),
            ..CompileOptions::default()
        };
        assert_eq!(
            compile(&k, &g, &opts),
            Err(CompileError::MappingSize { logical: 3, mapped: 2 })
        );
    }

    #[test]
    fn too_small_topology_is_an_error() {
        let k = parse_kernel("ZZZ\n").unwrap();
        let g = make_linear(2).unwrap();
        assert!(matches!(
            compile(&k, &g, &CompileOptions::default()),
            Err(CompileError::Topology(TopologyError::TooManyQubits { .. }))
        ));
    }

    #[test]
    fn breakdown_identity_holds_in_every_mode() {
        let k = parse_kernel("XZZZY\nYZZZX\n\nZIIIZ\n").unwrap();
        let g = make_linear(6).unwrap();
        for mode in [Mode::Tetris, Mode::MaxCancel, Mode::NaiveChain] {
            let opts = CompileOptions {
                mode,
                ..CompileOptions::default()
            };
            let r = compile(&k, &g, &opts).unwrap().report;
            assert_eq!(r.swap_induced_cnots + r.logical_cnots_after, r.cnot_count, "{mode}");
            assert_eq!(
                r.logical_cnots_before - r.canceled_cnots,
                r.logical_cnots_after,
                "{mode}"
            );
        }
    }
}
