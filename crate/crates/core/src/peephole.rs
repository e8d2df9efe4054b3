//! Adjacent inverse-pair cancellation and RZ merging.
//!
//! Two gates cancel only when the later one is the very next gate on every
//! qubit the earlier one touches. No commutation rules are applied.

use crate::circuit::{Angle, Circuit, Gate};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CancelStats {
    pub canceled_cnots: usize,
    pub canceled_1q: usize,
}

fn inverse_pair(earlier: &Gate, later: &Gate) -> bool {
    match (earlier, later) {
        (Gate::H(a), Gate::H(b)) | (Gate::X(a), Gate::X(b)) => a == b,
        (Gate::Rx(a, x), Gate::Rx(b, y)) => a == b && *x == -*y,
        (
            Gate::Cnot {
                control: c1,
                target: t1,
            },
            Gate::Cnot {
                control: c2,
                target: t2,
            },
        ) => c1 == c2 && t1 == t2,
        _ => false,
    }
}

/// One left-to-right sweep. Each qubit keeps a stack of the surviving gates
/// that touch it, so a removal exposes the gate before it.
fn sweep(gates: &[Gate], n_qubits: usize, stats: &mut CancelStats) -> Vec<Gate> {
    let mut out: Vec<Option<Gate>> = Vec::with_capacity(gates.len());
    let mut stacks: Vec<Vec<usize>> = vec![Vec::new(); n_qubits];

    for gate in gates {
        let qubits = gate.qubits();
        let top = stacks[qubits[0]].last().copied();
        let shared_top = top.filter(|&i| {
            let prev = out[i].as_ref().expect("stack entries are live");
            prev.qubits().len() == qubits.len() && qubits.iter().all(|&q| stacks[q].last() == Some(&i))
        });

        if let Some(i) = shared_top {
            let prev = out[i].as_ref().unwrap();
            if inverse_pair(prev, gate) {
                if matches!(gate, Gate::Cnot { .. }) {
                    stats.canceled_cnots += 2;
                } else {
                    stats.canceled_1q += 2;
                }
                out[i] = None;
                for &q in &qubits {
                    stacks[q].pop();
                }
                continue;
            }
            if let (Gate::Rz(q, a), Gate::Rz(_, b)) = (prev, gate) {
                let merged: Angle = a.add(b);
                let q = *q;
                if merged.is_zero() {
                    stats.canceled_1q += 2;
                    out[i] = None;
                    stacks[q].pop();
                } else {
                    stats.canceled_1q += 1;
                    out[i] = Some(Gate::Rz(q, merged));
                }
                continue;
            }
        }

        let idx = out.len();
        out.push(Some(gate.clone()));
        for &q in &qubits {
            stacks[q].push(idx);
        }
    }
    out.into_iter().flatten().collect()
}

/// Cancels to a fixpoint. SWAP and RESET never match anything, so they act
/// as barriers on their qubits.
pub fn cancel(circ: &Circuit) -> (Circuit, CancelStats) {
    let mut stats = CancelStats::default();
    let mut gates = circ.gates.clone();
    loop {
        let before = gates.len();
        gates = sweep(&gates, circ.n_qubits, &mut stats);
        if gates.len() == before {
            break;
        }
    }
    (Circuit { gates, ..circ.clone() }, stats)
}

/// Canceled logical CNOTs over the logical CNOT count before cancellation.
/// `None` when there were no CNOTs to begin with.
pub fn gate_cancellation_ratio(before: &Circuit, canceled_cnots: usize) -> Option<f64> {
    let total = before.cnot_count();
    (total > 0).then(|| canceled_cnots as f64 / total as f64)
}
