//! Circuit cost metrics: CNOT counts, depth, a duration model, and an
//! analytic fidelity estimate.

use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Gate};
use crate::peephole::{gate_cancellation_ratio, CancelStats};

/// Per-gate depolarizing error rates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseParams {
    pub p_2q: f64,
    pub p_1q: f64,
}

impl Default for NoiseParams {
    fn default() -> Self {
        Self { p_2q: 1e-3, p_1q: 1e-4 }
    }
}

/// Gate durations in arbitrary time units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DurationModel {
    pub single: f64,
    pub cnot: f64,
    pub reset: f64,
}

impl Default for DurationModel {
    fn default() -> Self {
        Self {
            single: 1.0,
            cnot: 10.0,
            reset: 1.0,
        }
    }
}

impl DurationModel {
    fn of(&self, gate: &Gate) -> f64 {
        match gate {
            Gate::Cnot { .. } => self.cnot,
            Gate::Swap(..) => 3.0 * self.cnot,
            Gate::Reset(_) => self.reset,
            _ => self.single,
        }
    }
}

/// Longest dependency chain after expanding SWAPs; every gate is one layer.
pub fn depth(circ: &Circuit) -> usize {
    let decomposed = circ.decompose_swaps();
    let mut level = vec![0usize; circ.n_qubits];
    for g in &decomposed.gates {
        let qs = g.qubits();
        let l = qs.iter().map(|&q| level[q]).max().unwrap_or(0) + 1;
        for q in qs {
            level[q] = l;
        }
    }
    level.into_iter().max().unwrap_or(0)
}

/// ASAP makespan under `model`.
pub fn duration(circ: &Circuit, model: &DurationModel) -> f64 {
    let decomposed = circ.decompose_swaps();
    let mut ready = vec![0.0f64; circ.n_qubits];
    for g in &decomposed.gates {
        let qs = g.qubits();
        let start = qs.iter().map(|&q| ready[q]).fold(0.0, f64::max);
        let end = start + model.of(g);
        for q in qs {
            ready[q] = end;
        }
    }
    ready.into_iter().fold(0.0, f64::max)
}

/// `(1 - p_2q)^n2 * (1 - p_1q)^n1` over the SWAP-expanded circuit.
pub fn fidelity_proxy(circ: &Circuit, noise: &NoiseParams) -> f64 {
    let two = circ.cnot_count() + 3 * circ.swap_count();
    let one = circ.gates.len() - circ.cnot_count() - circ.swap_count();
    (1.0 - noise.p_2q).powi(two as i32) * (1.0 - noise.p_1q).powi(one as i32)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    /// All CNOTs after SWAP expansion.
    pub cnot_count: usize,
    pub total_gate_count: usize,
    pub depth: usize,
    pub duration: f64,
    pub gcr: Option<f64>,
    pub fidelity_proxy: f64,
    pub swap_count: usize,
    pub swap_induced_cnots: usize,
    pub logical_cnots_before: usize,
    pub logical_cnots_after: usize,
    pub canceled_cnots: usize,
    pub canceled_1q: usize,
    pub bridges: usize,
}

impl MetricsReport {
    /// `logical` is the synthesized circuit before cancellation (SWAPs are
    /// not counted as logical CNOTs); `compiled` is the final circuit.
    pub fn measure(
        logical: &Circuit,
        compiled: &Circuit,
        stats: CancelStats,
        bridges: usize,
        noise: &NoiseParams,
        model: &DurationModel,
    ) -> Self {
        let swap_count = compiled.swap_count();
        let decomposed = compiled.decompose_swaps();
        Self {
            cnot_count: decomposed.cnot_count(),
            total_gate_count: decomposed.gates.len(),
            depth: depth(compiled),
            duration: duration(compiled, model),
            gcr: gate_cancellation_ratio(logical, stats.canceled_cnots),
            fidelity_proxy: fidelity_proxy(compiled, noise),
            swap_count,
            swap_induced_cnots: 3 * swap_count,
            logical_cnots_before: logical.cnot_count(),
            logical_cnots_after: compiled.cnot_count(),
            canceled_cnots: stats.canceled_cnots,
            canceled_1q: stats.canceled_1q,
            bridges,
        }
    }

    /// One `key=value` pair per line; an absent ratio prints as `none`.
    pub fn to_key_value(&self) -> String {
        let gcr = self.gcr.map_or_else(|| "none".to_string(), |g| format!("{g}"));
        [
            ("cnot_count", self.cnot_count.to_string()),
            ("total_gate_count", self.total_gate_count.to_string()),
            ("depth", self.depth.to_string()),
            ("duration", format!("{}", self.duration)),
            ("gcr", gcr),
            ("fidelity_proxy", format!("{}", self.fidelity_proxy)),
            ("swap_count", self.swap_count.to_string()),
            ("swap_induced_cnots", self.swap_induced_cnots.to_string()),
            ("logical_cnots_before", self.logical_cnots_before.to_string()),
            ("logical_cnots_after", self.logical_cnots_after.to_string()),
            ("canceled_cnots", self.canceled_cnots.to_string()),
            ("canceled_1q", self.canceled_1q.to_string()),
            ("bridges", self.bridges.to_string()),
        ]
        .iter()
        .map(|(k, v)| format!("{k}={v}\n"))
        .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is always serializable")
    }
}
