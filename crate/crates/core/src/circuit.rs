//! Gate-level circuits over physical qubits.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Rotation angle `constant + sum(coeff * symbol)`.
///
/// Symbols are block parameters such as `theta0`; the angle stays symbolic
/// until it is bound for simulation or QASM output.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Angle {
    pub constant: f64,
    pub terms: BTreeMap<String, f64>,
}

impl Angle {
    pub fn constant(value: f64) -> Self {
        Self {
            constant: value,
            terms: BTreeMap::new(),
        }
    }

    pub fn symbol(name: &str, coeff: f64) -> Self {
        let mut terms = BTreeMap::new();
        if coeff != 0.0 {
            terms.insert(name.to_string(), coeff);
        }
        Self { constant: 0.0, terms }
    }

    /// Exact zero: no constant and no surviving symbolic term.
    pub fn is_zero(&self) -> bool {
        self.constant == 0.0 && self.terms.is_empty()
    }

    pub fn add(&self, other: &Angle) -> Angle {
        let mut out = self.clone();
        out.constant += other.constant;
        for (k, v) in &other.terms {
            let sum = out.terms.get(k).copied().unwrap_or(0.0) + v;
            if sum == 0.0 {
                out.terms.remove(k);
            } else {
                out.terms.insert(k.clone(), sum);
            }
        }
        out
    }

    pub fn neg(&self) -> Angle {
        Angle {
            constant: -self.constant,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), -v)).collect(),
        }
    }

    /// Numeric value; unbound symbols take `default`.
    pub fn eval(&self, bindings: &BTreeMap<String, f64>, default: f64) -> f64 {
        self.constant
            + self
                .terms
                .iter()
                .map(|(k, c)| c * bindings.get(k).copied().unwrap_or(default))
                .sum::<f64>()
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.constant != 0.0 || self.terms.is_empty() {
            parts.push(format!("{}", self.constant));
        }
        for (k, c) in &self.terms {
            parts.push(format!("{c}*{k}"));
        }
        write!(f, "{}", parts.join("+"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Gate {
    H(usize),
    X(usize),
    Rx(usize, f64),
    Rz(usize, Angle),
    Cnot { control: usize, target: usize },
    Swap(usize, usize),
    Reset(usize),
}

impl Gate {
    pub fn cnot(control: usize, target: usize) -> Self {
        Gate::Cnot { control, target }
    }

    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::H(q) | Gate::X(q) | Gate::Rx(q, _) | Gate::Rz(q, _) | Gate::Reset(q) => vec![q],
            Gate::Cnot { control, target } => vec![control, target],
            Gate::Swap(a, b) => vec![a, b],
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        matches!(self, Gate::Cnot { .. } | Gate::Swap(..))
    }

    pub fn is_single_qubit_unitary(&self) -> bool {
        matches!(self, Gate::H(_) | Gate::X(_) | Gate::Rx(..) | Gate::Rz(..))
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gate::H(q) => write!(f, "H {q}"),
            Gate::X(q) => write!(f, "X {q}"),
            Gate::Rx(q, a) => write!(f, "RX({a}) {q}"),
            Gate::Rz(q, a) => write!(f, "RZ({a}) {q}"),
            Gate::Cnot { control, target } => write!(f, "CNOT {control} {target}"),
            Gate::Swap(a, b) => write!(f, "SWAP {a} {b}"),
            Gate::Reset(q) => write!(f, "RESET {q}"),
        }
    }
}

/// Gate list on `n_qubits` physical qubits, with the logical placement
/// before the first gate and after the last one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    pub n_qubits: usize,
    pub gates: Vec<Gate>,
    /// `initial_mapping[l]` is the physical qubit holding logical `l` at the start.
    pub initial_mapping: Vec<usize>,
    pub final_mapping: Vec<usize>,
}

impl Circuit {
    /// Empty circuit with logical `i` on physical `i`.
    pub fn new(n_qubits: usize) -> Self {
        Self::with_mapping(n_qubits, (0..n_qubits).collect())
    }

    pub fn with_mapping(n_qubits: usize, mapping: Vec<usize>) -> Self {
        Self {
            n_qubits,
            gates: Vec::new(),
            final_mapping: mapping.clone(),
            initial_mapping: mapping,
        }
    }

    pub fn push(&mut self, gate: Gate) {
        self.gates.push(gate);
    }

    pub fn cnot_count(&self) -> usize {
        self.gates.iter().filter(|g| matches!(g, Gate::Cnot { .. })).count()
    }

    pub fn swap_count(&self) -> usize {
        self.gates.iter().filter(|g| matches!(g, Gate::Swap(..))).count()
    }

    pub fn single_qubit_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_single_qubit_unitary()).count()
    }

    /// Replaces every SWAP by three alternating CNOTs.
    pub fn decompose_swaps(&self) -> Circuit {
        let mut out = Circuit {
            gates: Vec::with_capacity(self.gates.len()),
            ..self.clone()
        };
        for g in &self.gates {
            match *g {
                Gate::Swap(a, b) => {
                    out.push(Gate::cnot(a, b));
                    out.push(Gate::cnot(b, a));
                    out.push(Gate::cnot(a, b));
                }
                _ => out.push(g.clone()),
            }
        }
        out
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.gates {
            writeln!(f, "{g}")?;
        }
        Ok(())
    }
}
