//! Synthesis trees and per-string gate emission.

use std::collections::{BTreeMap, VecDeque};
use std::f64::consts::FRAC_PI_2;

use crate::circuit::{Angle, Gate};
use crate::pauli::{PauliOp, PauliString};

/// What sits on a tree node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Occupant {
    Logical(usize),
    /// A free qubit in |0> used as a bridge; it behaves like a Z node.
    Ancilla,
}

/// Directed tree over positions; every edge becomes CNOT(child -> parent).
///
/// Positions are physical qubits for hardware synthesis and logical
/// indices for the unrouted baselines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynthesisTree {
    root: usize,
    parent: BTreeMap<usize, usize>,
    occupant: BTreeMap<usize, Occupant>,
}

impl SynthesisTree {
    pub fn new(root_pos: usize, root_qubit: usize) -> Self {
        Self {
            root: root_pos,
            parent: BTreeMap::new(),
            occupant: BTreeMap::from([(root_pos, Occupant::Logical(root_qubit))]),
        }
    }

    /// Adds `pos` below `parent`, which must already be in the tree.
    pub fn attach(&mut self, pos: usize, occupant: Occupant, parent: usize) {
        assert!(self.occupant.contains_key(&parent), "parent {parent} not in tree");
        assert!(!self.occupant.contains_key(&pos), "position {pos} already in tree");
        self.occupant.insert(pos, occupant);
        self.parent.insert(pos, parent);
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn parent(&self, pos: usize) -> Option<usize> {
        self.parent.get(&pos).copied()
    }

    pub fn occupant(&self, pos: usize) -> Option<Occupant> {
        self.occupant.get(&pos).copied()
    }

    pub fn contains(&self, pos: usize) -> bool {
        self.occupant.contains_key(&pos)
    }

    pub fn positions(&self) -> impl Iterator<Item = usize> + '_ {
        self.occupant.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.occupant.len()
    }

    pub fn is_empty(&self) -> bool {
        self.occupant.is_empty()
    }

    /// `(position, logical)` for every non-ancilla node.
    pub fn logical_nodes(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.occupant.iter().filter_map(|(&p, o)| match o {
            Occupant::Logical(q) => Some((p, *q)),
            Occupant::Ancilla => None,
        })
    }

    pub fn ancillas(&self) -> impl Iterator<Item = usize> + '_ {
        self.occupant
            .iter()
            .filter(|(_, o)| **o == Occupant::Ancilla)
            .map(|(&p, _)| p)
    }

    pub fn position_of(&self, logical: usize) -> Option<usize> {
        self.logical_nodes().find(|&(_, q)| q == logical).map(|(p, _)| p)
    }

    /// Tree edges as `(child, parent)` pairs, ordered by child.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.parent.iter().map(|(&c, &p)| (c, p))
    }

    fn undirected(&self) -> BTreeMap<usize, Vec<usize>> {
        let mut adj: BTreeMap<usize, Vec<usize>> = self.occupant.keys().map(|&p| (p, Vec::new())).collect();
        for (&c, &p) in &self.parent {
            adj.get_mut(&c).unwrap().push(p);
            adj.get_mut(&p).unwrap().push(c);
        }
        for v in adj.values_mut() {
            v.sort_unstable();
        }
        adj
    }
}

fn pre_basis(op: PauliOp, pos: usize) -> Option<Gate> {
    match op {
        PauliOp::X => Some(Gate::H(pos)),
        PauliOp::Y => Some(Gate::Rx(pos, FRAC_PI_2)),
        PauliOp::Z | PauliOp::I => None,
    }
}

fn post_basis(op: PauliOp, pos: usize) -> Option<Gate> {
    match op {
        PauliOp::X => Some(Gate::H(pos)),
        PauliOp::Y => Some(Gate::Rx(pos, -FRAC_PI_2)),
        PauliOp::Z | PauliOp::I => None,
    }
}

/// Appends `exp(-i coeff*theta/2 P)` for one string using `tree`.
///
/// Subtrees without any non-identity operator are skipped. If the tree root
/// carries an identity the tree is re-rooted at the nearest non-identity
/// node. An identity node that still has to relay parity gets an extra
/// CNOT to its parent first, which removes its own value from the parity.
pub fn emit_string(tree: &SynthesisTree, ps: &PauliString, out: &mut Vec<Gate>) {
    let active = |pos: usize| matches!(tree.occupant[&pos], Occupant::Logical(q) if !ps.op(q).is_identity());
    let adj = tree.undirected();

    let root = if active(tree.root) {
        tree.root
    } else {
        let dist = bfs(&adj, tree.root);
        dist.iter()
            .filter(|(&p, _)| active(p))
            .min_by_key(|(&p, &d)| (d, p))
            .map(|(&p, _)| p)
            .expect("string has non-identity support inside the tree")
    };

    // Orient every edge toward the chosen root.
    let mut children: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut order = VecDeque::from([root]);
    let mut seen = std::collections::BTreeSet::from([root]);
    while let Some(u) = order.pop_front() {
        for &v in &adj[&u] {
            if seen.insert(v) {
                children.entry(u).or_default().push(v);
                order.push_back(v);
            }
        }
    }

    let mut keep = BTreeMap::new();
    mark_kept(root, &children, &active, &mut keep);

    let support: Vec<usize> = ps.support().collect();
    let pos_of = |q: usize| tree.position_of(q).expect("support qubit missing from tree");
    for &q in &support {
        out.extend(pre_basis(ps.op(q), pos_of(q)));
    }

    let mut cascade = Vec::new();
    collect_cascade(tree, root, None, &children, &keep, &active, &mut cascade);
    out.extend(cascade.iter().cloned());
    out.push(Gate::Rz(root, Angle::symbol(&ps.angle_ref, ps.coefficient)));
    out.extend(cascade.iter().rev().cloned());

    for &q in &support {
        out.extend(post_basis(ps.op(q), pos_of(q)));
    }
}

fn bfs(adj: &BTreeMap<usize, Vec<usize>>, start: usize) -> BTreeMap<usize, usize> {
    let mut dist = BTreeMap::from([(start, 0)]);
    let mut queue = VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        let du = dist[&u];
        for &v in &adj[&u] {
            if let std::collections::btree_map::Entry::Vacant(e) = dist.entry(v) {
                e.insert(du + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

fn mark_kept(
    node: usize,
    children: &BTreeMap<usize, Vec<usize>>,
    active: &dyn Fn(usize) -> bool,
    keep: &mut BTreeMap<usize, bool>,
) -> bool {
    let mut k = active(node);
    for &c in children.get(&node).into_iter().flatten() {
        k |= mark_kept(c, children, active, keep);
    }
    keep.insert(node, k);
    k
}

fn collect_cascade(
    tree: &SynthesisTree,
    node: usize,
    parent: Option<usize>,
    children: &BTreeMap<usize, Vec<usize>>,
    keep: &BTreeMap<usize, bool>,
    active: &dyn Fn(usize) -> bool,
    out: &mut Vec<Gate>,
) {
    let relays_identity = parent.is_some() && !active(node) && tree.occupant[&node] != Occupant::Ancilla;
    if let (Some(p), true) = (parent, relays_identity) {
        out.push(Gate::cnot(node, p));
    }
    for &c in children.get(&node).into_iter().flatten() {
        if keep[&c] {
            collect_cascade(tree, c, Some(node), children, keep, active, out);
        }
    }
    if let Some(p) = parent {
        out.push(Gate::cnot(node, p));
    }
}
