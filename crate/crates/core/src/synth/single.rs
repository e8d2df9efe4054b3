//! Placement with exactly one leaf tree, found by exhaustive SWAP search.

use std::collections::{BTreeSet, HashMap, VecDeque};

use super::{BlockSynthesis, Occupant, SynthConfig, SynthError, SynthesisTree};
use crate::circuit::Gate;
use crate::topology::{CouplingGraph, Mapping};

/// Finds the fewest SWAPs after which the roots are connected, the leaves
/// are connected, and some leaf touches some root; then builds breadth-first
/// spanning trees over both groups.
pub(super) fn place(
    graph: &CouplingGraph,
    cfg: &SynthConfig,
    roots: &BTreeSet<usize>,
    leaves: &BTreeSet<usize>,
    mapping: &mut Mapping,
    out: &mut Vec<Gate>,
) -> Result<BlockSynthesis, SynthError> {
    let n_roots = roots.len();
    let active: Vec<usize> = roots.iter().chain(leaves.iter()).copied().collect();
    let start: Vec<usize> = active.iter().map(|&q| mapping.phys(q)).collect();

    let goal = |state: &[usize]| {
        let r: BTreeSet<usize> = state[..n_roots].iter().copied().collect();
        let l: BTreeSet<usize> = state[n_roots..].iter().copied().collect();
        graph.induces_connected(&r)
            && graph.induces_connected(&l)
            && (l.is_empty() || l.iter().any(|&a| r.iter().any(|&b| graph.is_edge(a, b))))
    };

    let mut states = vec![start.clone()];
    let mut back: Vec<Option<(usize, (usize, usize))>> = vec![None];
    let mut index = HashMap::from([(start, 0usize)]);
    let mut queue = VecDeque::from([0usize]);
    let mut found = None;
    while let Some(i) = queue.pop_front() {
        if goal(&states[i]) {
            found = Some(i);
            break;
        }
        for &(a, b) in graph.edges() {
            let state = &states[i];
            if !state.contains(&a) && !state.contains(&b) {
                continue;
            }
            let next: Vec<usize> = state
                .iter()
                .map(|&p| {
                    if p == a {
                        b
                    } else if p == b {
                        a
                    } else {
                        p
                    }
                })
                .collect();
            if index.contains_key(&next) {
                continue;
            }
            if states.len() >= cfg.search_limit {
                return Err(SynthError::SearchLimit(cfg.search_limit));
            }
            index.insert(next.clone(), states.len());
            states.push(next);
            back.push(Some((i, (a, b))));
            queue.push_back(states.len() - 1);
        }
    }
    let mut i = found.ok_or(SynthError::SearchLimit(cfg.search_limit))?;
    let mut swaps = Vec::new();
    while let Some((prev, edge)) = back[i] {
        swaps.push(edge);
        i = prev;
    }
    swaps.reverse();
    for &(a, b) in &swaps {
        out.push(Gate::Swap(a, b));
        mapping.apply_swap(a, b);
    }

    let root_pos: BTreeSet<usize> = roots.iter().map(|&q| mapping.phys(q)).collect();
    let root_q = *roots
        .iter()
        .min_by_key(|&&q| {
            let p = mapping.phys(q);
            (root_pos.iter().map(|&o| graph.distance(p, o)).sum::<usize>(), q)
        })
        .expect("roots is non-empty");
    let mut tree = SynthesisTree::new(mapping.phys(root_q), root_q);
    spanning(graph, mapping, &root_pos, mapping.phys(root_q), &mut tree);

    let leaf_pos: BTreeSet<usize> = leaves.iter().map(|&q| mapping.phys(q)).collect();
    if let Some(&first) = leaves
        .iter()
        .find(|&&l| graph.neighbors(mapping.phys(l)).iter().any(|p| root_pos.contains(p)))
    {
        let p = mapping.phys(first);
        let parent = *graph
            .neighbors(p)
            .iter()
            .find(|n| root_pos.contains(n))
            .expect("checked adjacent");
        tree.attach(p, Occupant::Logical(first), parent);
        spanning(graph, mapping, &leaf_pos, p, &mut tree);
    }

    Ok(BlockSynthesis {
        tree,
        trace: Vec::new(),
        swaps: swaps.len(),
        bridges: 0,
    })
}

/// Breadth-first spanning tree of `nodes` from `start`, which is already in
/// `tree`.
fn spanning(graph: &CouplingGraph, mapping: &Mapping, nodes: &BTreeSet<usize>, start: usize, tree: &mut SynthesisTree) {
    let mut queue = VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        for &v in graph.neighbors(u) {
            if nodes.contains(&v) && !tree.contains(v) {
                let q = mapping.logical_at(v).expect("node holds a block qubit");
                tree.attach(v, Occupant::Logical(q), u);
                queue.push_back(v);
            }
        }
    }
}
