//! Hardware coupling graphs, shortest paths, and the logical-to-physical
//! mapping that evolves while a kernel is compiled.

use std::collections::{BTreeSet, VecDeque};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TopologyError {
    #[error("topology must have at least one qubit")]
    Empty,
    #[error("edge ({0}, {1}) is a self-loop")]
    SelfLoop(usize, usize),
    #[error("edge ({0}, {1}) references a qubit outside 0..{2}")]
    OutOfRange(usize, usize, usize),
    #[error("coupling graph is not connected")]
    Disconnected,
    #[error("no path from {from} to {to} under the given exclusions")]
    NoPath { from: usize, to: usize },
    #[error("cannot place {logical} logical qubits on {physical} physical qubits")]
    TooManyQubits { logical: usize, physical: usize },
    #[error("root set is empty")]
    EmptyRootSet,
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("invalid mapping: {0}")]
    InvalidMapping(String),
    #[error("unknown topology '{0}'")]
    UnknownTopology(String),
}

/// Undirected, connected coupling graph over physical qubits `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CouplingGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
    distances: Vec<Vec<usize>>,
}

impl CouplingGraph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, TopologyError> {
        if n == 0 {
            return Err(TopologyError::Empty);
        }
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a == b {
                return Err(TopologyError::SelfLoop(a, b));
            }
            if a >= n || b >= n {
                return Err(TopologyError::OutOfRange(a, b, n));
            }
            set.insert((a.min(b), a.max(b)));
        }
        let mut adjacency = vec![Vec::new(); n];
        for &(a, b) in &set {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for nbrs in &mut adjacency {
            nbrs.sort_unstable();
        }
        let mut graph = Self {
            n,
            edges: set.into_iter().collect(),
            adjacency,
            distances: Vec::new(),
        };
        graph.distances = (0..n).map(|s| graph.bfs_distances(s, &[])).collect();
        if graph.distances[0].contains(&usize::MAX) {
            return Err(TopologyError::Disconnected);
        }
        Ok(graph)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, q: usize) -> &[usize] {
        &self.adjacency[q]
    }

    pub fn degree(&self, q: usize) -> usize {
        self.adjacency[q].len()
    }

    pub fn is_edge(&self, a: usize, b: usize) -> bool {
        a != b && self.adjacency[a].binary_search(&b).is_ok()
    }

    /// Unrestricted hop distance.
    pub fn distance(&self, a: usize, b: usize) -> usize {
        self.distances[a][b]
    }

    fn bfs_distances(&self, source: usize, excluded: &[bool]) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n];
        dist[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for &v in &self.adjacency[u] {
                if dist[v] == usize::MAX && !excluded.get(v).copied().unwrap_or(false) {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Shortest path from `a` to `b` whose interior avoids `excluded`.
    ///
    /// Among all shortest paths the lexicographically smallest node sequence
    /// is returned.
    pub fn shortest_path(&self, a: usize, b: usize, excluded: &BTreeSet<usize>) -> Result<Vec<usize>, TopologyError> {
        if a == b {
            return Ok(vec![a]);
        }
        let mut blocked = vec![false; self.n];
        for &x in excluded {
            if x < self.n && x != a && x != b {
                blocked[x] = true;
            }
        }
        // Distances to the target let us walk forward greedily, always taking
        // the smallest neighbour that stays on a shortest path.
        let to_target = self.bfs_distances(b, &blocked);
        if to_target[a] == usize::MAX {
            return Err(TopologyError::NoPath { from: a, to: b });
        }
        let mut path = vec![a];
        let mut cur = a;
        while cur != b {
            let next = self.adjacency[cur]
                .iter()
                .copied()
                .find(|&v| !blocked[v] && to_target[v] != usize::MAX && to_target[v] + 1 == to_target[cur])
                .expect("distance labels guarantee a successor");
            path.push(next);
            cur = next;
        }
        Ok(path)
    }

    /// Hop count of [`Self::shortest_path`], or `None` when unreachable.
    pub fn restricted_distance(&self, a: usize, b: usize, excluded: &BTreeSet<usize>) -> Option<usize> {
        self.shortest_path(a, b, excluded).ok().map(|p| p.len() - 1)
    }

    /// Breadth-first order from node 0 with ascending neighbour order.
    pub fn bfs_order(&self) -> Vec<usize> {
        let mut seen = vec![false; self.n];
        let mut order = Vec::with_capacity(self.n);
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &v in &self.adjacency[u] {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        order
    }

    /// Whether the induced subgraph on `nodes` is connected.
    pub fn induces_connected(&self, nodes: &BTreeSet<usize>) -> bool {
        let Some(&start) = nodes.iter().next() else {
            return true;
        };
        let mut seen = BTreeSet::from([start]);
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for &v in &self.adjacency[u] {
                if nodes.contains(&v) && seen.insert(v) {
                    stack.push(v);
                }
            }
        }
        seen.len() == nodes.len()
    }

    /// Parses `n <count>` followed by one `u v` edge per line.
    pub fn parse(text: &str) -> Result<Self, TopologyError> {
        let mut n: Option<usize> = None;
        let mut edges = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let fields: Vec<&str> = content.split_whitespace().collect();
            let err = |message: &str| TopologyError::Format {
                line,
                message: message.to_string(),
            };
            match (n, fields.as_slice()) {
                (None, ["n", count]) => {
                    n = Some(count.parse().map_err(|_| err("bad qubit count"))?);
                }
                (None, _) => return Err(err("expected 'n <count>' header")),
                (Some(_), [u, v]) => {
                    let u = u.parse().map_err(|_| err("bad edge endpoint"))?;
                    let v = v.parse().map_err(|_| err("bad edge endpoint"))?;
                    edges.push((u, v));
                }
                (Some(_), _) => return Err(err("expected 'u v' edge")),
            }
        }
        Self::new(n.ok_or(TopologyError::Empty)?, edges)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("n {}\n", self.n);
        for (a, b) in &self.edges {
            out.push_str(&format!("{a} {b}\n"));
        }
        out
    }
}

pub fn make_linear(n: usize) -> Result<CouplingGraph, TopologyError> {
    CouplingGraph::new(n, (1..n).map(|i| (i - 1, i)))
}

/// Square lattice; qubit `(r, c)` has index `r * cols + c`.
pub fn make_grid(rows: usize, cols: usize) -> Result<CouplingGraph, TopologyError> {
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            let q = r * cols + c;
            if c + 1 < cols {
                edges.push((q, q + 1));
            }
            if r + 1 < rows {
                edges.push((q, q + cols));
            }
        }
    }
    CouplingGraph::new(rows * cols, edges)
}

/// Diagonal lattice: every qubit couples to up to two qubits in the row
/// below, shifted left on even rows and right on odd rows.
pub fn make_sycamore(rows: usize, cols: usize) -> Result<CouplingGraph, TopologyError> {
    let mut edges = Vec::new();
    for r in 0..rows.saturating_sub(1) {
        for c in 0..cols {
            let q = r * cols + c;
            edges.push((q, q + cols));
            if r % 2 == 0 && c > 0 {
                edges.push((q, q + cols - 1));
            }
            if r % 2 == 1 && c + 1 < cols {
                edges.push((q, q + cols + 1));
            }
        }
    }
    CouplingGraph::new(rows * cols, edges)
}

/// Heavy-hex lattice built from `rows` horizontal chains of `cols` qubits.
///
/// Neighbouring chains are joined through a bridge qubit every four columns;
/// the bridge columns alternate between `0 mod 4` and `2 mod 4` so that no
/// qubit exceeds degree three. When `trim_corners` is set the last column of
/// the first chain and the first column of the last chain are dropped, which
/// reproduces the 65-qubit Hummingbird layout for `rows = 5, cols = 11`.
pub fn make_heavy_hex(rows: usize, cols: usize, trim_corners: bool) -> Result<CouplingGraph, TopologyError> {
    if rows == 0 || cols == 0 {
        return Err(TopologyError::Empty);
    }
    let present = |r: usize, c: usize| -> bool {
        if trim_corners && rows > 1 {
            if r == 0 && c == cols - 1 {
                return false;
            }
            if r == rows - 1 && c == 0 {
                return false;
            }
        }
        true
    };
    let bridge_cols = |r: usize| (if r.is_multiple_of(2) { 0 } else { 2 }..cols).step_by(4);
    // Number each chain, then the bridges hanging below it.
    let mut index = vec![vec![None; cols]; rows];
    let mut bridges = Vec::new();
    let mut next = 0usize;
    for (r, row) in index.iter_mut().enumerate() {
        for (c, slot) in row.iter_mut().enumerate() {
            if present(r, c) {
                *slot = Some(next);
                next += 1;
            }
        }
        if r + 1 < rows {
            for c in bridge_cols(r) {
                if present(r, c) && present(r + 1, c) {
                    bridges.push((r, c, next));
                    next += 1;
                }
            }
        }
    }
    let mut edges = Vec::new();
    for row in &index {
        for pair in row.windows(2) {
            if let [Some(a), Some(b)] = pair {
                edges.push((*a, *b));
            }
        }
    }
    for (r, c, b) in bridges {
        edges.push((index[r][c].unwrap(), b));
        edges.push((b, index[r + 1][c].unwrap()));
    }
    CouplingGraph::new(next, edges)
}

/// The 65-qubit heavy-hex device layout.
pub fn make_heavy_hex_65() -> CouplingGraph {
    make_heavy_hex(5, 11, true).expect("fixed layout is valid")
}

/// Builds a topology from a CLI name: `linear:N`, `grid:RxC`,
/// `heavyhex` (65 qubits) or `heavyhex:RxC`, `sycamore` (8x8) or
/// `sycamore:RxC`.
pub fn topology_by_name(name: &str) -> Result<CouplingGraph, TopologyError> {
    let unknown = || TopologyError::UnknownTopology(name.to_string());
    let (kind, arg) = match name.split_once(':') {
        Some((k, a)) => (k, Some(a)),
        None => (name, None),
    };
    let dims = |a: &str| -> Result<(usize, usize), TopologyError> {
        let (r, c) = a.split_once('x').ok_or_else(unknown)?;
        Ok((r.parse().map_err(|_| unknown())?, c.parse().map_err(|_| unknown())?))
    };
    match (kind, arg) {
        ("linear", Some(a)) => make_linear(a.parse().map_err(|_| unknown())?),
        ("grid", Some(a)) => {
            let (r, c) = dims(a)?;
            make_grid(r, c)
        }
        ("heavyhex", None) => Ok(make_heavy_hex_65()),
        ("heavyhex", Some(a)) => {
            let (r, c) = dims(a)?;
            make_heavy_hex(r, c, false)
        }
        ("sycamore", None) => make_sycamore(8, 8),
        ("sycamore", Some(a)) => {
            let (r, c) = dims(a)?;
            make_sycamore(r, c)
        }
        _ => Err(unknown()),
    }
}

/// 1-median of `positions`: the node minimising the summed distance to all
/// of them (ties broken by smallest index), plus one shortest path from each
/// position to it. A position equal to the center gets an empty path.
pub fn find_center(graph: &CouplingGraph, positions: &[usize]) -> Result<(usize, Vec<Vec<usize>>), TopologyError> {
    if positions.is_empty() {
        return Err(TopologyError::EmptyRootSet);
    }
    let center = (0..graph.num_qubits())
        .min_by_key(|&v| (positions.iter().map(|&p| graph.distance(p, v)).sum::<usize>(), v))
        .expect("graph is non-empty");
    let no_exclusions = BTreeSet::new();
    let paths = positions
        .iter()
        .map(|&p| {
            if p == center {
                Ok(Vec::new())
            } else {
                graph.shortest_path(p, center, &no_exclusions)
            }
        })
        .collect::<Result<_, _>>()?;
    Ok((center, paths))
}

/// What a physical qubit currently holds, as far as bridging is concerned.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Liveness {
    /// Never touched; still in |0>.
    Untouched,
    /// Holds a logical qubit or is part of an open bridge.
    InUse,
    /// Used as a bridge earlier and restored to |0>.
    ReleasedToZero,
}

impl Liveness {
    pub fn is_zero(self) -> bool {
        matches!(self, Liveness::Untouched | Liveness::ReleasedToZero)
    }
}

/// Injective logical-to-physical placement plus per-node liveness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mapping {
    log_to_phys: Vec<usize>,
    phys_to_log: Vec<Option<usize>>,
    liveness: Vec<Liveness>,
}

impl Mapping {
    /// Places logical qubit `i` on `positions[i]`.
    pub fn new(positions: Vec<usize>, n_phys: usize) -> Result<Self, TopologyError> {
        if positions.len() > n_phys {
            return Err(TopologyError::TooManyQubits {
                logical: positions.len(),
                physical: n_phys,
            });
        }
        let mut phys_to_log = vec![None; n_phys];
        for (l, &p) in positions.iter().enumerate() {
            if p >= n_phys {
                return Err(TopologyError::InvalidMapping(format!(
                    "physical qubit {p} out of range"
                )));
            }
            if phys_to_log[p].replace(l).is_some() {
                return Err(TopologyError::InvalidMapping(format!("physical qubit {p} used twice")));
            }
        }
        let liveness = phys_to_log
            .iter()
            .map(|o| {
                if o.is_some() {
                    Liveness::InUse
                } else {
                    Liveness::Untouched
                }
            })
            .collect();
        Ok(Self {
            log_to_phys: positions,
            phys_to_log,
            liveness,
        })
    }

    /// Logical qubit `i` goes to the `i`-th node of a breadth-first walk.
    pub fn bfs_initial(graph: &CouplingGraph, n_logical: usize) -> Result<Self, TopologyError> {
        let order = graph.bfs_order();
        if n_logical > order.len() {
            return Err(TopologyError::TooManyQubits {
                logical: n_logical,
                physical: order.len(),
            });
        }
        Self::new(order[..n_logical].to_vec(), graph.num_qubits())
    }

    /// Whitespace-separated physical indices, one per logical qubit.
    pub fn parse(text: &str, n_phys: usize) -> Result<Self, TopologyError> {
        let positions = text
            .split_whitespace()
            .take_while(|t| !t.starts_with('#'))
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| TopologyError::InvalidMapping(format!("bad index '{t}'")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(positions, n_phys)
    }

    pub fn n_logical(&self) -> usize {
        self.log_to_phys.len()
    }

    pub fn n_physical(&self) -> usize {
        self.phys_to_log.len()
    }

    pub fn phys(&self, logical: usize) -> usize {
        self.log_to_phys[logical]
    }

    pub fn logical_at(&self, phys: usize) -> Option<usize> {
        self.phys_to_log[phys]
    }

    pub fn positions(&self) -> &[usize] {
        &self.log_to_phys
    }

    pub fn liveness(&self, phys: usize) -> Liveness {
        self.liveness[phys]
    }

    /// A free physical qubit known to be in |0>.
    pub fn is_zero_ancilla(&self, phys: usize) -> bool {
        self.phys_to_log[phys].is_none() && self.liveness[phys].is_zero()
    }

    pub fn set_liveness(&mut self, phys: usize, state: Liveness) {
        self.liveness[phys] = state;
    }

    /// Exchanges the contents of two physical qubits.
    pub fn apply_swap(&mut self, a: usize, b: usize) {
        let la = self.phys_to_log[a];
        let lb = self.phys_to_log[b];
        self.phys_to_log[a] = lb;
        self.phys_to_log[b] = la;
        if let Some(l) = la {
            self.log_to_phys[l] = b;
        }
        if let Some(l) = lb {
            self.log_to_phys[l] = a;
        }
        self.liveness.swap(a, b);
    }

    pub fn is_injective(&self) -> bool {
        let distinct: BTreeSet<_> = self.log_to_phys.iter().collect();
        distinct.len() == self.log_to_phys.len()
            && self
                .log_to_phys
                .iter()
                .enumerate()
                .all(|(l, &p)| self.phys_to_log[p] == Some(l))
    }
}
