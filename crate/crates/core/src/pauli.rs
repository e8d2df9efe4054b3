//! Pauli-string kernels and the block IR.
//!
//! A kernel is a list of blocks; each block is an ordered group of Pauli
//! strings sharing one rotation parameter. Building the IR splits the support
//! of every block into a *leaf set* (qubits on which every string carries the
//! same non-identity operator) and a *root set* (the rest of the support).

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PauliOp {
    I,
    X,
    Y,
    Z,
}

impl PauliOp {
    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'I' => Some(PauliOp::I),
            'X' => Some(PauliOp::X),
            'Y' => Some(PauliOp::Y),
            'Z' => Some(PauliOp::Z),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            PauliOp::I => 'I',
            PauliOp::X => 'X',
            PauliOp::Y => 'Y',
            PauliOp::Z => 'Z',
        }
    }

    pub fn is_identity(self) -> bool {
        self == PauliOp::I
    }
}

/// One term `exp(-i * coefficient * theta / 2 * P)` of a block.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliString {
    pub ops: Vec<PauliOp>,
    pub coefficient: f64,
    /// Name of the shared rotation parameter.
    pub angle_ref: String,
}

impl PauliString {
    pub fn new(ops: Vec<PauliOp>, coefficient: f64, angle_ref: impl Into<String>) -> Self {
        Self {
            ops,
            coefficient,
            angle_ref: angle_ref.into(),
        }
    }

    /// Parses an operator word such as `"XXYZI"` with coefficient 1.
    pub fn parse_word(word: &str, angle_ref: impl Into<String>) -> Result<Self, ParseError> {
        let ops = parse_ops(word, 1)?;
        Ok(Self::new(ops, 1.0, angle_ref))
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn op(&self, qubit: usize) -> PauliOp {
        self.ops[qubit]
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.ops
            .iter()
            .enumerate()
            .filter(|(_, op)| !op.is_identity())
            .map(|(q, _)| q)
    }

    pub fn weight(&self) -> usize {
        self.support().count()
    }

    pub fn word(&self) -> String {
        self.ops.iter().map(|op| op.as_char()).collect()
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.word())
    }
}

/// A group of strings together with its root/leaf qubit partition.
#[derive(Debug, Clone, PartialEq)]
pub struct TetrisBlock {
    pub strings: Vec<PauliString>,
    pub leaf_set: BTreeSet<usize>,
    pub root_set: BTreeSet<usize>,
    /// Root qubits followed by leaf qubits, each ascending.
    pub qubit_order: Vec<usize>,
}

impl TetrisBlock {
    /// Creates a block with the partition computed from its strings.
    pub fn new(strings: Vec<PauliString>) -> Self {
        let mut block = Self {
            strings,
            leaf_set: BTreeSet::new(),
            root_set: BTreeSet::new(),
            qubit_order: Vec::new(),
        };
        block.rebuild_sets();
        block
    }

    /// Creates a block with a caller-chosen partition. The sets must be
    /// disjoint and cover exactly the support of the block; leaf qubits must
    /// be non-identity in every string.
    pub fn with_partition(
        strings: Vec<PauliString>,
        root_set: BTreeSet<usize>,
        leaf_set: BTreeSet<usize>,
    ) -> Result<Self, IrError> {
        let support = union_support(&strings);
        if !root_set.is_disjoint(&leaf_set) {
            return Err(IrError::OverlappingSets);
        }
        let covered: BTreeSet<usize> = root_set.union(&leaf_set).copied().collect();
        if covered != support {
            return Err(IrError::PartitionMismatch);
        }
        for &q in &leaf_set {
            if strings.iter().any(|s| s.op(q).is_identity()) {
                return Err(IrError::IdentityOnLeaf(q));
            }
        }
        let qubit_order = root_set.iter().chain(leaf_set.iter()).copied().collect();
        Ok(Self {
            strings,
            leaf_set,
            root_set,
            qubit_order,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.strings.first().map_or(0, |s| s.len())
    }

    pub fn num_strings(&self) -> usize {
        self.strings.len()
    }

    pub fn active_qubits(&self) -> BTreeSet<usize> {
        self.root_set.union(&self.leaf_set).copied().collect()
    }

    /// Operator the block carries on a leaf qubit.
    pub fn leaf_op(&self, qubit: usize) -> Option<PauliOp> {
        if self.leaf_set.contains(&qubit) {
            Some(self.strings[0].op(qubit))
        } else {
            None
        }
    }

    fn rebuild_sets(&mut self) {
        let (root_set, leaf_set) = partition(&self.strings);
        self.qubit_order = root_set.iter().chain(leaf_set.iter()).copied().collect();
        self.root_set = root_set;
        self.leaf_set = leaf_set;
    }
}

fn union_support(strings: &[PauliString]) -> BTreeSet<usize> {
    strings.iter().flat_map(|s| s.support()).collect()
}

fn partition(strings: &[PauliString]) -> (BTreeSet<usize>, BTreeSet<usize>) {
    let support = union_support(strings);
    // A lone string has nothing to cancel against; its whole support is root.
    if strings.len() < 2 {
        return (support, BTreeSet::new());
    }
    let first = &strings[0];
    let leaf: BTreeSet<usize> = support
        .iter()
        .copied()
        .filter(|&q| {
            let op = first.op(q);
            !op.is_identity() && strings.iter().all(|s| s.op(q) == op)
        })
        .collect();
    let root = support.difference(&leaf).copied().collect();
    (root, leaf)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Kernel {
    pub n_qubits: usize,
    pub blocks: Vec<TetrisBlock>,
}

impl Kernel {
    pub fn num_strings(&self) -> usize {
        self.blocks.iter().map(|b| b.num_strings()).sum()
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("line {line}: invalid operator '{found}'")]
    InvalidOperator { line: usize, found: char },
    #[error("line {line}: string has length {found}, expected {expected}")]
    LengthMismatch { line: usize, expected: usize, found: usize },
    #[error("line {line}: empty block")]
    EmptyBlock { line: usize },
    #[error("line {line}: string has no non-identity operator")]
    IdentityString { line: usize },
    #[error("line {line}: malformed weight '{text}'")]
    BadWeight { line: usize, text: String },
    #[error("input contains no blocks")]
    NoBlocks,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IrError {
    #[error("root and leaf sets overlap")]
    OverlappingSets,
    #[error("root and leaf sets do not cover the block support")]
    PartitionMismatch,
    #[error("leaf qubit {0} carries the identity in some string")]
    IdentityOnLeaf(usize),
}

fn parse_ops(word: &str, line: usize) -> Result<Vec<PauliOp>, ParseError> {
    word.chars()
        .map(|c| PauliOp::from_char(c).ok_or(ParseError::InvalidOperator { line, found: c }))
        .collect()
}

/// Name of the rotation parameter shared by the strings of block `index`.
pub fn block_angle_ref(index: usize) -> String {
    format!("theta{index}")
}

/// Parses the text IR. Blocks are separated by exactly one blank line;
/// `#` starts a comment; a string may carry a trailing `; w=<float>`.
pub fn parse_kernel(text: &str) -> Result<Kernel, ParseError> {
    let mut blocks: Vec<Vec<PauliString>> = Vec::new();
    let mut current: Vec<PauliString> = Vec::new();
    let mut blank_run = 0usize;
    let mut empty_block_at: Option<usize> = None;
    let mut n_qubits: Option<usize> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        let is_comment = raw.trim_start().starts_with('#');
        if content.is_empty() {
            if is_comment {
                continue;
            }
            blank_run += 1;
            if blank_run == 1 && !current.is_empty() {
                blocks.push(std::mem::take(&mut current));
            } else if blank_run == 2 && !blocks.is_empty() {
                empty_block_at = Some(line);
            }
            continue;
        }
        // Extra blank lines only matter when another block follows them.
        if let Some(line) = empty_block_at {
            return Err(ParseError::EmptyBlock { line });
        }
        blank_run = 0;

        let (word, weight) = match content.split_once(';') {
            Some((w, rest)) => (w.trim(), Some(rest.trim())),
            None => (content, None),
        };
        let ops = parse_ops(word, line)?;
        let expected = *n_qubits.get_or_insert(ops.len());
        if ops.len() != expected {
            return Err(ParseError::LengthMismatch {
                line,
                expected,
                found: ops.len(),
            });
        }
        if ops.iter().all(|op| op.is_identity()) {
            return Err(ParseError::IdentityString { line });
        }
        let coefficient = match weight {
            None => 1.0,
            Some(w) => parse_weight(w).ok_or_else(|| ParseError::BadWeight {
                line,
                text: w.to_string(),
            })?,
        };
        current.push(PauliString::new(ops, coefficient, block_angle_ref(blocks.len())));
    }
    if !current.is_empty() {
        blocks.push(current);
    }
    if blocks.is_empty() {
        return Err(ParseError::NoBlocks);
    }
    let kernel = Kernel {
        n_qubits: n_qubits.unwrap_or(0),
        blocks: blocks.into_iter().map(TetrisBlock::new).collect(),
    };
    Ok(kernel)
}

fn parse_weight(text: &str) -> Option<f64> {
    let value = text.strip_prefix("w=")?.trim();
    value.parse::<f64>().ok().filter(|v| v.is_finite())
}

/// Recomputes the root/leaf partition of every block.
pub fn build_tetris_ir(mut kernel: Kernel) -> Kernel {
    for block in &mut kernel.blocks {
        block.rebuild_sets();
    }
    kernel
}

/// Number of qubits carrying a non-identity operator somewhere in the block.
pub fn active_length(block: &TetrisBlock) -> usize {
    block.root_set.len() + block.leaf_set.len()
}

/// Writes a kernel in the text IR accepted by [`parse_kernel`].
pub fn emit_kernel(kernel: &Kernel) -> String {
    let mut out = String::new();
    for (i, block) in kernel.blocks.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        for s in &block.strings {
            out.push_str(&s.word());
            if s.coefficient != 1.0 {
                out.push_str(&format!("; w={}", s.coefficient));
            }
            out.push('\n');
        }
    }
    out
}
