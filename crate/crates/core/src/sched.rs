//! Block ordering: similar leaf structure first, cheap root clustering second.

use crate::pauli::{active_length, Kernel, TetrisBlock};
use crate::synth::effective_sets;
use crate::topology::{find_center, CouplingGraph, Mapping};

/// Jaccard similarity of two leaf assignments. A qubit is shared only when
/// both blocks hold it as a leaf with the same operator.
pub fn similarity(a: &TetrisBlock, b: &TetrisBlock) -> f64 {
    let common = a
        .leaf_set
        .iter()
        .filter(|&&q| b.leaf_set.contains(&q) && a.leaf_op(q) == b.leaf_op(q))
        .count();
    let union = a.leaf_set.len() + b.leaf_set.len() - common;
    if union == 0 {
        0.0
    } else {
        common as f64 / union as f64
    }
}

/// SWAPs needed to pull the block's roots next to their 1-median under the
/// current placement, estimated as the sum of `distance - 1`.
pub fn swap_cost_estimate(graph: &CouplingGraph, mapping: &Mapping, block: &TetrisBlock) -> usize {
    let (roots, _) = effective_sets(block);
    let positions: Vec<usize> = roots.iter().map(|&q| mapping.phys(q)).collect();
    let Ok((center, _)) = find_center(graph, &positions) else {
        return 0;
    };
    positions
        .iter()
        .map(|&p| graph.distance(p, center).saturating_sub(1))
        .sum()
}

/// Incremental scheduler; the caller supplies the cost of each candidate at
/// the moment it is picked, so costs can follow a mapping that evolves.
#[derive(Debug, Clone)]
pub struct Scheduler {
    remaining: Vec<usize>,
    last: Option<usize>,
    lookahead_k: usize,
}

impl Scheduler {
    pub fn new(n_blocks: usize, lookahead_k: usize) -> Self {
        Self {
            remaining: (0..n_blocks).collect(),
            last: None,
            lookahead_k: lookahead_k.max(1),
        }
    }

    pub fn is_done(&self) -> bool {
        self.remaining.is_empty()
    }

    /// Remaining blocks ranked by similarity to the last pick, top K.
    /// Before the first pick this is the single longest block.
    pub fn candidates(&self, kernel: &Kernel) -> Vec<usize> {
        match self.last {
            None => self
                .remaining
                .iter()
                .copied()
                .max_by_key(|&b| (active_length(&kernel.blocks[b]), std::cmp::Reverse(b)))
                .into_iter()
                .collect(),
            Some(last) => {
                let mut ranked: Vec<(f64, usize)> = self
                    .remaining
                    .iter()
                    .map(|&b| (similarity(&kernel.blocks[last], &kernel.blocks[b]), b))
                    .collect();
                ranked.sort_by(|x, y| y.0.total_cmp(&x.0).then(x.1.cmp(&y.1)));
                ranked.into_iter().take(self.lookahead_k).map(|(_, b)| b).collect()
            }
        }
    }

    /// Picks the cheapest candidate; ties go to higher similarity, then
    /// input order.
    pub fn pick(&mut self, kernel: &Kernel, mut cost: impl FnMut(&TetrisBlock) -> usize) -> Option<usize> {
        let candidates = self.candidates(kernel);
        // `candidates` is already sorted by similarity then index, so the
        // first minimum wins ties.
        let chosen = candidates
            .into_iter()
            .enumerate()
            .min_by_key(|&(rank, b)| (cost(&kernel.blocks[b]), rank))
            .map(|(_, b)| b)?;
        self.remaining.retain(|&b| b != chosen);
        self.last = Some(chosen);
        Some(chosen)
    }
}

/// Full order with a fixed cost function.
pub fn schedule(kernel: &Kernel, lookahead_k: usize, mut cost: impl FnMut(&TetrisBlock) -> usize) -> Vec<usize> {
    let mut s = Scheduler::new(kernel.blocks.len(), lookahead_k);
    let mut order = Vec::with_capacity(kernel.blocks.len());
    while let Some(b) = s.pick(kernel, &mut cost) {
        order.push(b);
    }
    order
}
