//! OpenQASM 2.0 output with bound angles, and a reader for the same subset.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;
use std::fmt::Write;

use thiserror::Error;

use crate::circuit::{Angle, Circuit, Gate};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QasmError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing qreg declaration")]
    NoRegister,
}

fn rx_angle(a: f64) -> String {
    if a == FRAC_PI_2 {
        "pi/2".to_string()
    } else if a == -FRAC_PI_2 {
        "-pi/2".to_string()
    } else {
        format!("{a}")
    }
}

fn join(v: &[usize]) -> String {
    v.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" ")
}

/// Writes `circ` with SWAPs expanded and every RZ angle evaluated.
/// The logical placement is recorded in `// initial_mapping:` and
/// `// final_mapping:` comments.
pub fn to_qasm(circ: &Circuit, bindings: &BTreeMap<String, f64>, default_angle: f64) -> String {
    let mut s = String::new();
    s.push_str("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    let _ = writeln!(s, "// initial_mapping: {}", join(&circ.initial_mapping));
    let _ = writeln!(s, "// final_mapping: {}", join(&circ.final_mapping));
    let _ = writeln!(s, "qreg q[{}];", circ.n_qubits);
    for g in &circ.decompose_swaps().gates {
        let _ = match g {
            Gate::H(q) => writeln!(s, "h q[{q}];"),
            Gate::X(q) => writeln!(s, "x q[{q}];"),
            Gate::Rx(q, a) => writeln!(s, "rx({}) q[{q}];", rx_angle(*a)),
            Gate::Rz(q, a) => writeln!(s, "rz({}) q[{q}];", a.eval(bindings, default_angle)),
            Gate::Cnot { control, target } => writeln!(s, "cx q[{control}],q[{target}];"),
            Gate::Reset(q) => writeln!(s, "reset q[{q}];"),
            Gate::Swap(..) => unreachable!("swaps were decomposed"),
        };
    }
    s
}

fn parse_angle(text: &str) -> Option<f64> {
    match text.trim() {
        "pi/2" => Some(FRAC_PI_2),
        "-pi/2" => Some(-FRAC_PI_2),
        t => t.parse().ok(),
    }
}

fn parse_qubit(text: &str) -> Option<usize> {
    text.trim().strip_prefix("q[")?.strip_suffix(']')?.parse().ok()
}

fn parse_mapping(text: &str) -> Option<Vec<usize>> {
    text.split_whitespace().map(|t| t.parse().ok()).collect()
}

/// Reads back the subset written by [`to_qasm`].
pub fn parse_qasm(text: &str) -> Result<Circuit, QasmError> {
    let mut n = None;
    let mut initial = None;
    let mut fin = None;
    let mut gates = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let err = |message: &str| QasmError::Syntax {
            line,
            message: message.to_string(),
        };
        let t = raw.trim();
        if let Some(rest) = t.strip_prefix("// initial_mapping:") {
            initial = Some(parse_mapping(rest).ok_or_else(|| err("bad mapping"))?);
            continue;
        }
        if let Some(rest) = t.strip_prefix("// final_mapping:") {
            fin = Some(parse_mapping(rest).ok_or_else(|| err("bad mapping"))?);
            continue;
        }
        if t.is_empty() || t.starts_with("//") || t.starts_with("OPENQASM") || t.starts_with("include") {
            continue;
        }
        let stmt = t.strip_suffix(';').ok_or_else(|| err("missing ';'"))?;
        let (head, args) = stmt.split_once(' ').ok_or_else(|| err("malformed statement"))?;
        if head == "qreg" {
            let size = args
                .trim()
                .strip_prefix("q[")
                .and_then(|r| r.strip_suffix(']'))
                .and_then(|r| r.parse().ok())
                .ok_or_else(|| err("bad qreg"))?;
            n = Some(size);
            continue;
        }
        let (name, param) = match head.split_once('(') {
            Some((name, rest)) => (name, Some(rest.strip_suffix(')').ok_or_else(|| err("unclosed '('"))?)),
            None => (head, None),
        };
        let qubits: Vec<usize> = args
            .split(',')
            .map(parse_qubit)
            .collect::<Option<_>>()
            .ok_or_else(|| err("bad qubit operand"))?;
        let angle = || param.and_then(parse_angle).ok_or_else(|| err("bad angle"));
        let gate = match (name, qubits.as_slice()) {
            ("h", [q]) => Gate::H(*q),
            ("x", [q]) => Gate::X(*q),
            ("rx", [q]) => Gate::Rx(*q, angle()?),
            ("rz", [q]) => Gate::Rz(*q, Angle::constant(angle()?)),
            ("cx", [c, t]) => Gate::cnot(*c, *t),
            ("reset", [q]) => Gate::Reset(*q),
            _ => return Err(err(&format!("unsupported gate '{name}'"))),
        };
        gates.push(gate);
    }
    let n_qubits = n.ok_or(QasmError::NoRegister)?;
    let initial_mapping = initial.unwrap_or_else(|| (0..n_qubits).collect());
    let final_mapping = fin.unwrap_or_else(|| initial_mapping.clone());
    Ok(Circuit {
        n_qubits,
        gates,
        initial_mapping,
        final_mapping,
    })
}
