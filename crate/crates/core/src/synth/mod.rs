//! Hardware-aware synthesis of Pauli-string blocks.
//!
//! Root qubits are pulled together around their 1-median, leaf qubits are
//! attached one at a time by lowest [`score`], and every string of the block
//! is emitted over the resulting tree so that consecutive strings share
//! their leaf cascades.

mod baseline;
mod single;
mod tree;

use std::collections::BTreeSet;

use thiserror::Error;

use crate::circuit::{Circuit, Gate};
use crate::pauli::{PauliString, TetrisBlock};
use crate::topology::{find_center, CouplingGraph, Liveness, Mapping, TopologyError};

pub use baseline::{max_cancel_tree, naive_chain_tree, route_greedy, synthesize_max_cancel, synthesize_naive_chain};
pub use tree::{emit_string, Occupant, SynthesisTree};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SynthError {
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error("block has no non-identity support")]
    EmptyBlock,
    #[error("single-tree placement search exceeded {0} states")]
    SearchLimit(usize),
    #[error("bridge qubit {0} is not a free qubit in |0>")]
    DirtyAncilla(usize),
    #[error("bridge chain is not coupled at ({0}, {1})")]
    BrokenChain(usize, usize),
    #[error("gate {0} cannot be routed")]
    Unroutable(String),
}

/// How leaf qubits are grouped into trees.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LeafTreePolicy {
    /// Greedy score-driven attachment; may produce several leaf trees.
    Adaptive,
    /// Route until all leaves form one connected tree hanging off a root.
    Single,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    /// Cost of one SWAP relative to one canceled CNOT pair.
    pub swap_weight: f64,
    pub bridging: bool,
    pub leaf_trees: LeafTreePolicy,
    /// State cap for the exhaustive single-tree placement search.
    pub search_limit: usize,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            swap_weight: 3.0,
            bridging: true,
            leaf_trees: LeafTreePolicy::Adaptive,
            search_limit: 200_000,
        }
    }
}

/// Attachment cost of a leaf at distance `d` from a placed node.
///
/// Each extra hop costs one SWAP (`w`). Hanging off a root node loses the
/// leaf's cancellation in every string (`2 * num_ps`); hanging off a leaf
/// loses only the single edge to its parent (`2`).
pub fn score(d: usize, w: f64, parent_is_root: bool, num_ps: usize) -> f64 {
    let attach = if parent_is_root { 2 * num_ps } else { 2 };
    d.saturating_sub(1) as f64 * w + attach as f64
}

/// How a qubit reached its parent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Movement {
    Adjacent,
    Swapped(usize),
    Bridged(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub leaf: usize,
    pub parent: usize,
    pub distance: usize,
    pub score: f64,
}

/// One leaf attachment: the winning candidate, every candidate that was
/// considered, and how the leaf was moved.
#[derive(Debug, Clone, PartialEq)]
pub struct AttachStep {
    pub chosen: Candidate,
    pub candidates: Vec<Candidate>,
    pub movement: Movement,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlockSynthesis {
    pub tree: SynthesisTree,
    pub trace: Vec<AttachStep>,
    pub swaps: usize,
    pub bridges: usize,
}

/// Root and leaf sets used for synthesis. With no root qubit the smallest
/// leaf is promoted.
pub fn effective_sets(block: &TetrisBlock) -> (BTreeSet<usize>, BTreeSet<usize>) {
    let mut roots = block.root_set.clone();
    let mut leaves = block.leaf_set.clone();
    if roots.is_empty() {
        if let Some(first) = leaves.pop_first() {
            roots.insert(first);
        }
    }
    (roots, leaves)
}

/// Moves the qubit at `path[0]` next to `path.last()` with SWAPs.
/// Returns the number of SWAPs emitted.
pub fn route_swap(path: &[usize], mapping: &mut Mapping, out: &mut Vec<Gate>) -> usize {
    let hops = path.len().saturating_sub(2);
    for w in path.windows(2).take(hops) {
        out.push(Gate::Swap(w[0], w[1]));
        mapping.apply_swap(w[0], w[1]);
    }
    hops
}

/// CNOT from `control` to `target` through a chain of |0> ancillas,
/// leaving every ancilla back in |0>.
pub fn bridge_cnot(
    graph: &CouplingGraph,
    mapping: &Mapping,
    control: usize,
    target: usize,
    ancillas: &[usize],
) -> Result<Vec<Gate>, SynthError> {
    for &a in ancillas {
        if !mapping.is_zero_ancilla(a) {
            return Err(SynthError::DirtyAncilla(a));
        }
    }
    let chain: Vec<usize> = std::iter::once(control)
        .chain(ancillas.iter().copied())
        .chain(std::iter::once(target))
        .collect();
    for w in chain.windows(2) {
        if !graph.is_edge(w[0], w[1]) {
            return Err(SynthError::BrokenChain(w[0], w[1]));
        }
    }
    let k = ancillas.len();
    let mut gates: Vec<Gate> = chain.windows(2).map(|w| Gate::cnot(w[0], w[1])).collect();
    // Undo the copies held by the ancillas, innermost first.
    gates.extend(chain[..k + 1].windows(2).rev().map(|w| Gate::cnot(w[0], w[1])));
    Ok(gates)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Role {
    Root,
    Leaf,
}

/// One block's synthesis on hardware.
pub struct Synthesizer<'a> {
    graph: &'a CouplingGraph,
    cfg: &'a SynthConfig,
}

impl<'a> Synthesizer<'a> {
    pub fn new(graph: &'a CouplingGraph, cfg: &'a SynthConfig) -> Self {
        Self { graph, cfg }
    }

    /// Places the block's qubits, appends SWAPs and every string's gates to
    /// `out`, and updates `mapping`. `lookahead` holds strings expected to
    /// follow; it only informs the SWAP-versus-bridge choice.
    pub fn synthesize_block(
        &self,
        block: &TetrisBlock,
        lookahead: &[&PauliString],
        mapping: &mut Mapping,
        out: &mut Circuit,
    ) -> Result<BlockSynthesis, SynthError> {
        let (roots, leaves) = effective_sets(block);
        if roots.is_empty() {
            return Err(SynthError::EmptyBlock);
        }
        let result = match self.cfg.leaf_trees {
            LeafTreePolicy::Adaptive => {
                self.place_adaptive(block, &roots, &leaves, lookahead, mapping, &mut out.gates)?
            }
            LeafTreePolicy::Single => single::place(self.graph, self.cfg, &roots, &leaves, mapping, &mut out.gates)?,
        };
        for ps in &block.strings {
            emit_string(&result.tree, ps, &mut out.gates);
        }
        for a in result.tree.ancillas() {
            mapping.set_liveness(a, Liveness::ReleasedToZero);
        }
        out.final_mapping = mapping.positions().to_vec();
        Ok(result)
    }

    fn place_adaptive(
        &self,
        block: &TetrisBlock,
        roots: &BTreeSet<usize>,
        leaves: &BTreeSet<usize>,
        lookahead: &[&PauliString],
        mapping: &mut Mapping,
        out: &mut Vec<Gate>,
    ) -> Result<BlockSynthesis, SynthError> {
        let graph = self.graph;
        let num_ps = block.num_strings();
        let mut swaps = 0;
        let mut bridges = 0;

        let positions: Vec<usize> = roots.iter().map(|&q| mapping.phys(q)).collect();
        let (center, _) = find_center(graph, &positions)?;
        let anchor = match mapping.logical_at(center) {
            Some(q) if roots.contains(&q) => q,
            _ => {
                let q = *roots
                    .iter()
                    .min_by_key(|&&q| (graph.distance(mapping.phys(q), center), q))
                    .expect("roots is non-empty");
                let path = graph.shortest_path(mapping.phys(q), center, &BTreeSet::new())?;
                for w in path.windows(2) {
                    out.push(Gate::Swap(w[0], w[1]));
                    mapping.apply_swap(w[0], w[1]);
                    swaps += 1;
                }
                q
            }
        };
        let mut tree = SynthesisTree::new(center, anchor);

        // Roots join the cluster closest-first.
        let mut pending: BTreeSet<usize> = roots.iter().copied().filter(|&q| q != anchor).collect();
        while !pending.is_empty() {
            let occupied: BTreeSet<usize> = tree.positions().collect();
            let mut best: Option<(usize, usize, usize)> = None;
            for &r in &pending {
                for (t, q) in tree.logical_nodes() {
                    if !roots.contains(&q) {
                        continue;
                    }
                    let excluded = without(&occupied, t);
                    if let Some(d) = graph.restricted_distance(mapping.phys(r), t, &excluded) {
                        if best.is_none_or(|b| (d, r, t) < b) {
                            best = Some((d, r, t));
                        }
                    }
                }
            }
            let (_, r, t) = best.ok_or_else(|| SynthError::Unroutable(format!("root {}", pending.first().unwrap())))?;
            let path = graph.shortest_path(mapping.phys(r), t, &without(&occupied, t))?;
            let movement = self.connect(&path, r, Role::Root, num_ps, lookahead, mapping, &mut tree, out);
            tally(&movement, &mut swaps, &mut bridges);
            pending.remove(&r);
        }

        // Leaves attach by global minimum score.
        let mut trace = Vec::new();
        let mut pending: BTreeSet<usize> = leaves.clone();
        while !pending.is_empty() {
            let occupied: BTreeSet<usize> = tree.positions().collect();
            let mut candidates = Vec::new();
            for &l in &pending {
                for (t, m) in tree.logical_nodes() {
                    let excluded = without(&occupied, t);
                    if let Some(d) = graph.restricted_distance(mapping.phys(l), t, &excluded) {
                        candidates.push(Candidate {
                            leaf: l,
                            parent: m,
                            distance: d,
                            score: score(d, self.cfg.swap_weight, roots.contains(&m), num_ps),
                        });
                    }
                }
            }
            let chosen = candidates
                .iter()
                .min_by(|a, b| {
                    a.score
                        .total_cmp(&b.score)
                        .then(a.leaf.cmp(&b.leaf))
                        .then(a.parent.cmp(&b.parent))
                })
                .cloned()
                .ok_or_else(|| SynthError::Unroutable(format!("leaf {}", pending.first().unwrap())))?;
            let t = tree.position_of(chosen.parent).expect("parent is placed");
            let path = graph.shortest_path(mapping.phys(chosen.leaf), t, &without(&occupied, t))?;
            let movement = self.connect(
                &path,
                chosen.leaf,
                Role::Leaf,
                num_ps,
                lookahead,
                mapping,
                &mut tree,
                out,
            );
            tally(&movement, &mut swaps, &mut bridges);
            pending.remove(&chosen.leaf);
            trace.push(AttachStep {
                chosen,
                candidates,
                movement,
            });
        }

        Ok(BlockSynthesis {
            tree,
            trace,
            swaps,
            bridges,
        })
    }

    /// Brings logical `q` at `path[0]` under the tree node at `path.last()`,
    /// either by SWAPs or by threading the tree through |0> ancillas.
    #[allow(clippy::too_many_arguments)]
    fn connect(
        &self,
        path: &[usize],
        q: usize,
        role: Role,
        num_ps: usize,
        lookahead: &[&PauliString],
        mapping: &mut Mapping,
        tree: &mut SynthesisTree,
        out: &mut Vec<Gate>,
    ) -> Movement {
        let parent = *path.last().expect("path has a target");
        if path.len() == 2 {
            tree.attach(path[0], Occupant::Logical(q), parent);
            return Movement::Adjacent;
        }
        let interior = &path[1..path.len() - 1];
        let bridgeable = self.cfg.bridging && interior.iter().all(|&p| mapping.is_zero_ancilla(p));
        if bridgeable && !self.prefer_swap(path, q, role, num_ps, lookahead, mapping) {
            let mut above = parent;
            for &a in interior.iter().rev() {
                tree.attach(a, Occupant::Ancilla, above);
                mapping.set_liveness(a, Liveness::InUse);
                above = a;
            }
            tree.attach(path[0], Occupant::Logical(q), above);
            return Movement::Bridged(interior.to_vec());
        }
        let n = route_swap(path, mapping, out);
        tree.attach(path[path.len() - 2], Occupant::Logical(q), parent);
        Movement::Swapped(n)
    }

    /// SWAP wins when moving `q` makes at least two upcoming two-qubit
    /// interactions adjacent that were not adjacent before. A root's move
    /// also serves every other string of its own block.
    fn prefer_swap(
        &self,
        path: &[usize],
        q: usize,
        role: Role,
        num_ps: usize,
        lookahead: &[&PauliString],
        mapping: &Mapping,
    ) -> bool {
        let mut moved = mapping.clone();
        route_swap(path, &mut moved, &mut Vec::new());
        let mut uses = if role == Role::Root { num_ps - 1 } else { 0 };
        for ps in lookahead {
            if q >= ps.len() || ps.op(q).is_identity() {
                continue;
            }
            for o in ps.support().filter(|&o| o != q && o < mapping.n_logical()) {
                let before = self.graph.is_edge(mapping.phys(q), mapping.phys(o));
                let after = self.graph.is_edge(moved.phys(q), moved.phys(o));
                if after && !before {
                    uses += 1;
                }
            }
        }
        uses >= 2
    }
}

fn without(set: &BTreeSet<usize>, x: usize) -> BTreeSet<usize> {
    let mut s = set.clone();
    s.remove(&x);
    s
}

fn tally(m: &Movement, swaps: &mut usize, bridges: &mut usize) {
    match m {
        Movement::Adjacent => {}
        Movement::Swapped(n) => *swaps += n,
        Movement::Bridged(_) => *bridges += 1,
    }
}

#[cfg(test)]
mod tests;
