//! Dense statevector simulation used to check compiled circuits against the
//! product of Pauli exponentials they are supposed to implement.
//!
//! Qubit `i` is bit `i` of a basis-state index.

use std::collections::BTreeMap;

use num_complex::Complex64;
use thiserror::Error;

use crate::circuit::{Circuit, Gate};
use crate::pauli::{Kernel, PauliOp, PauliString};

pub const MAX_QUBITS: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("{0} qubits exceeds the simulation limit of {MAX_QUBITS}")]
    TooManyQubits(usize),
    #[error("gate '{0}' is not unitary and cannot be simulated")]
    UnsupportedGate(String),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Row-major `2^n x 2^n` complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseUnitary {
    n_qubits: usize,
    data: Vec<Complex64>,
}

impl DenseUnitary {
    pub fn identity(n_qubits: usize) -> Result<Self, VerifyError> {
        check_size(n_qubits)?;
        let dim = 1 << n_qubits;
        let mut data = vec![ZERO; dim * dim];
        for i in 0..dim {
            data[i * dim + i] = ONE;
        }
        Ok(Self { n_qubits, data })
    }

    /// Builds a matrix column by column from a map on basis states.
    fn from_columns(n_qubits: usize, mut column: impl FnMut(usize) -> Vec<Complex64>) -> Self {
        let dim = 1 << n_qubits;
        let mut data = vec![ZERO; dim * dim];
        for c in 0..dim {
            for (r, v) in column(c).into_iter().enumerate() {
                data[r * dim + c] = v;
            }
        }
        Self { n_qubits, data }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim() + col]
    }

    pub fn column(&self, col: usize) -> Vec<Complex64> {
        (0..self.dim()).map(|r| self.get(r, col)).collect()
    }

    /// `self * other`.
    pub fn mul(&self, other: &DenseUnitary) -> Result<DenseUnitary, VerifyError> {
        if self.n_qubits != other.n_qubits {
            return Err(VerifyError::DimensionMismatch(self.dim(), other.dim()));
        }
        let dim = self.dim();
        let mut data = vec![ZERO; dim * dim];
        for r in 0..dim {
            for k in 0..dim {
                let a = self.data[r * dim + k];
                if a == ZERO {
                    continue;
                }
                for c in 0..dim {
                    data[r * dim + c] += a * other.data[k * dim + c];
                }
            }
        }
        Ok(DenseUnitary {
            n_qubits: self.n_qubits,
            data,
        })
    }

    pub fn dagger(&self) -> DenseUnitary {
        let dim = self.dim();
        let mut data = vec![ZERO; dim * dim];
        for r in 0..dim {
            for c in 0..dim {
                data[c * dim + r] = self.data[r * dim + c].conj();
            }
        }
        DenseUnitary {
            n_qubits: self.n_qubits,
            data,
        }
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        let id = DenseUnitary::identity(self.n_qubits).expect("size already checked");
        self.dagger()
            .mul(self)
            .map(|p| p.max_abs_diff(&id) <= tol)
            .unwrap_or(false)
    }

    pub fn max_abs_diff(&self, other: &DenseUnitary) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Equality up to a global phase, fixed at the largest entry of `self`.
    pub fn approx_eq_up_to_phase(&self, other: &DenseUnitary, tol: f64) -> bool {
        self.n_qubits == other.n_qubits && phase_aligned_diff(&self.data, &other.data) <= tol
    }
}

/// Max entry-wise distance after rotating `candidate` onto `reference`'s
/// phase at the reference's largest-magnitude entry.
fn phase_aligned_diff(reference: &[Complex64], candidate: &[Complex64]) -> f64 {
    let Some(pivot) = (0..reference.len()).max_by(|&a, &b| reference[a].norm().total_cmp(&reference[b].norm())) else {
        return 0.0;
    };
    let phase = if candidate[pivot].norm() > 0.0 {
        let ratio = reference[pivot] / candidate[pivot];
        ratio / ratio.norm()
    } else {
        ONE
    };
    reference
        .iter()
        .zip(candidate)
        .map(|(r, c)| (r - c * phase).norm())
        .fold(0.0, f64::max)
}

fn check_size(n: usize) -> Result<(), VerifyError> {
    if n > MAX_QUBITS {
        Err(VerifyError::TooManyQubits(n))
    } else {
        Ok(())
    }
}

/// `P|x> = phase * |x ^ flip>` for a Pauli string over qubits `qubits[i]`.
fn pauli_action(ps: &PauliString, qubits: &[usize], x: usize) -> (usize, Complex64) {
    let mut y = x;
    let mut phase = ONE;
    for (i, op) in ps.ops.iter().enumerate() {
        let bit = (x >> qubits[i]) & 1;
        match op {
            PauliOp::I => {}
            PauliOp::X => y ^= 1 << qubits[i],
            PauliOp::Y => {
                y ^= 1 << qubits[i];
                phase *= if bit == 0 { I } else { -I };
            }
            PauliOp::Z => {
                if bit == 1 {
                    phase = -phase;
                }
            }
        }
    }
    (y, phase)
}

/// `exp(-i theta/2 P) = cos(theta/2) I - i sin(theta/2) P`.
pub fn pauli_exponential(ps: &PauliString, theta: f64) -> Result<DenseUnitary, VerifyError> {
    let n = ps.len();
    check_size(n)?;
    let qubits: Vec<usize> = (0..n).collect();
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    Ok(DenseUnitary::from_columns(n, |x| {
        let mut col = vec![ZERO; 1 << n];
        let (y, phase) = pauli_action(ps, &qubits, x);
        col[x] += Complex64::new(c, 0.0);
        col[y] += -I * s * phase;
        col
    }))
}

fn apply_pauli_rotation(state: &mut [Complex64], ps: &PauliString, qubits: &[usize], theta: f64) {
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let old = state.to_vec();
    for v in state.iter_mut() {
        *v *= c;
    }
    for (x, amp) in old.into_iter().enumerate() {
        if amp != ZERO {
            let (y, phase) = pauli_action(ps, qubits, x);
            state[y] += -I * s * phase * amp;
        }
    }
}

fn apply_1q(state: &mut [Complex64], q: usize, m: [[Complex64; 2]; 2]) {
    let bit = 1 << q;
    for x in 0..state.len() {
        if x & bit == 0 {
            let (a, b) = (state[x], state[x | bit]);
            state[x] = m[0][0] * a + m[0][1] * b;
            state[x | bit] = m[1][0] * a + m[1][1] * b;
        }
    }
}

/// Applies one gate in place; symbolic angles are bound through `bindings`
/// with `default` for anything unbound.
pub fn apply_gate(
    state: &mut [Complex64],
    gate: &Gate,
    bindings: &BTreeMap<String, f64>,
    default: f64,
) -> Result<(), VerifyError> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    match gate {
        Gate::H(q) => apply_1q(state, *q, [[ONE * h, ONE * h], [ONE * h, -ONE * h]]),
        Gate::X(q) => apply_1q(state, *q, [[ZERO, ONE], [ONE, ZERO]]),
        Gate::Rx(q, t) => {
            let (c, s) = ((t / 2.0).cos(), (t / 2.0).sin());
            apply_1q(state, *q, [[ONE * c, -I * s], [-I * s, ONE * c]]);
        }
        Gate::Rz(q, a) => {
            let t = a.eval(bindings, default);
            apply_1q(
                state,
                *q,
                [
                    [Complex64::from_polar(1.0, -t / 2.0), ZERO],
                    [ZERO, Complex64::from_polar(1.0, t / 2.0)],
                ],
            );
        }
        Gate::Cnot { control, target } => {
            let (cb, tb) = (1 << control, 1 << target);
            for x in 0..state.len() {
                if x & cb != 0 && x & tb == 0 {
                    state.swap(x, x | tb);
                }
            }
        }
        Gate::Swap(a, b) => {
            let (ab, bb) = (1 << a, 1 << b);
            for x in 0..state.len() {
                if x & ab != 0 && x & bb == 0 {
                    state.swap(x, (x ^ ab) | bb);
                }
            }
        }
        Gate::Reset(_) => return Err(VerifyError::UnsupportedGate(gate.to_string())),
    }
    Ok(())
}

/// Full unitary of a circuit on its physical register.
pub fn circuit_unitary(
    circ: &Circuit,
    bindings: &BTreeMap<String, f64>,
    default: f64,
) -> Result<DenseUnitary, VerifyError> {
    check_size(circ.n_qubits)?;
    let dim = 1 << circ.n_qubits;
    let mut columns = Vec::with_capacity(dim);
    for x in 0..dim {
        let mut state = vec![ZERO; dim];
        state[x] = ONE;
        for g in &circ.gates {
            apply_gate(&mut state, g, bindings, default)?;
        }
        columns.push(state);
    }
    Ok(DenseUnitary::from_columns(circ.n_qubits, |c| {
        std::mem::take(&mut columns[c])
    }))
}

/// Product of string exponentials, blocks in `order` and strings in IR order,
/// each rotated by `coefficient` times its bound angle symbol.
pub fn kernel_reference(
    kernel: &Kernel,
    order: &[usize],
    bindings: &BTreeMap<String, f64>,
    default: f64,
) -> Result<DenseUnitary, VerifyError> {
    let n = kernel.n_qubits;
    check_size(n)?;
    let qubits: Vec<usize> = (0..n).collect();
    let dim = 1 << n;
    Ok(DenseUnitary::from_columns(n, |x| {
        let mut state = vec![ZERO; dim];
        state[x] = ONE;
        for &b in order {
            for ps in &kernel.blocks[b].strings {
                let theta = bindings.get(&ps.angle_ref).copied().unwrap_or(default);
                apply_pauli_rotation(&mut state, ps, &qubits, ps.coefficient * theta);
            }
        }
        state
    }))
}

/// Checks that `circ`, run on logical basis states placed by its initial
/// mapping with every other physical qubit in |0>, returns all non-logical
/// qubits to |0> and matches `reference` (read through the final mapping)
/// up to one global phase.
pub fn equivalent_up_to_phase_and_permutation(
    circ: &Circuit,
    reference: &DenseUnitary,
    bindings: &BTreeMap<String, f64>,
    default: f64,
    tol: f64,
) -> Result<bool, VerifyError> {
    check_size(circ.n_qubits)?;
    let n_log = reference.n_qubits();
    if circ.initial_mapping.len() != n_log || circ.final_mapping.len() != n_log {
        return Err(VerifyError::DimensionMismatch(circ.initial_mapping.len(), n_log));
    }
    let dim_log = 1 << n_log;
    let embed = |x: usize, mapping: &[usize]| -> usize {
        (0..n_log).filter(|l| x >> l & 1 == 1).map(|l| 1 << mapping[l]).sum()
    };
    let readout: BTreeMap<usize, usize> = (0..dim_log).map(|x| (embed(x, &circ.final_mapping), x)).collect();

    let mut produced = vec![ZERO; dim_log * dim_log];
    let mut expected = vec![ZERO; dim_log * dim_log];
    for x in 0..dim_log {
        let mut state = vec![ZERO; 1 << circ.n_qubits];
        state[embed(x, &circ.initial_mapping)] = ONE;
        for g in &circ.gates {
            apply_gate(&mut state, g, bindings, default)?;
        }
        for (p, amp) in state.iter().enumerate() {
            match readout.get(&p) {
                Some(&y) => produced[y * dim_log + x] = *amp,
                // Weight outside the logical subspace means an ancilla was left dirty.
                None if amp.norm() > tol => return Ok(false),
                None => {}
            }
        }
        for y in 0..dim_log {
            expected[y * dim_log + x] = reference.get(y, x);
        }
    }
    Ok(phase_aligned_diff(&expected, &produced) <= tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Angle;
    use std::f64::consts::PI;

    fn nob() -> BTreeMap<String, f64> {
        BTreeMap::new()
    }

    #[test]
    fn z_rotation_by_pi() {
        let u = pauli_exponential(&PauliString::parse_word("Z", "t").unwrap(), PI).unwrap();
        assert!((u.get(0, 0) - Complex64::from_polar(1.0, -PI / 2.0)).norm() < 1e-12);
        assert!((u.get(1, 1) - Complex64::from_polar(1.0, PI / 2.0)).norm() < 1e-12);
        assert!(u.get(0, 1).norm() < 1e-12);
    }

    #[test]
    fn identity_string_is_global_phase() {
        let ps = PauliString::new(vec![PauliOp::I, PauliOp::I], 1.0, "t");
        let u = pauli_exponential(&ps, 0.8).unwrap();
        let id = DenseUnitary::identity(2).unwrap();
        assert!(u.approx_eq_up_to_phase(&id, 1e-12));
        assert!((u.get(0, 0) - Complex64::from_polar(1.0, -0.4)).norm() < 1e-12);
    }

    #[test]
    fn exponentials_compose_additively() {
        let ps = PauliString::parse_word("XYZ", "t").unwrap();
        let a = pauli_exponential(&ps, 0.3).unwrap();
        let b = pauli_exponential(&ps, 0.9).unwrap();
        let ab = pauli_exponential(&ps, 1.2).unwrap();
        assert!(a.mul(&b).unwrap().max_abs_diff(&ab) < 1e-12);
        assert!(ab.is_unitary(1e-10));
    }

    #[test]
    fn hadamard_and_double_cnot() {
        let mut c = Circuit::new(1);
        c.push(Gate::H(0));
        let u = circuit_unitary(&c, &nob(), 1.0).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((u.get(1, 1).re + h).abs() < 1e-12 && (u.get(0, 1).re - h).abs() < 1e-12);

        let mut c = Circuit::new(2);
        c.push(Gate::cnot(0, 1));
        c.push(Gate::cnot(0, 1));
        let u = circuit_unitary(&c, &nob(), 1.0).unwrap();
        assert!(u.max_abs_diff(&DenseUnitary::identity(2).unwrap()) < 1e-12);
    }

    #[test]
    fn swap_absorbed_by_final_mapping() {
        let mut c = Circuit::new(2);
        c.push(Gate::Swap(0, 1));
        c.final_mapping = vec![1, 0];
        let id = DenseUnitary::identity(2).unwrap();
        assert!(equivalent_up_to_phase_and_permutation(&c, &id, &nob(), 1.0, 1e-8).unwrap());
        c.final_mapping = vec![0, 1];
        let mut c2 = c.clone();
        c2.gates.push(Gate::X(0));
        assert!(!equivalent_up_to_phase_and_permutation(&c2, &id, &nob(), 1.0, 1e-8).unwrap());
    }

    #[test]
    fn rz_matches_z_exponential() {
        let mut c = Circuit::new(1);
        c.push(Gate::Rz(0, Angle::constant(0.3)));
        let ps = PauliString::parse_word("Z", "t").unwrap();
        let reference = pauli_exponential(&ps, 0.3).unwrap();
        assert!(equivalent_up_to_phase_and_permutation(&c, &reference, &nob(), 1.0, 1e-8).unwrap());
    }

    #[test]
    fn dirty_ancilla_is_detected() {
        let mut c = Circuit::with_mapping(2, vec![0]);
        c.push(Gate::cnot(0, 1));
        let id = DenseUnitary::identity(1).unwrap();
        assert!(!equivalent_up_to_phase_and_permutation(&c, &id, &nob(), 1.0, 1e-8).unwrap());
    }

    #[test]
    fn reset_and_size_errors() {
        let mut c = Circuit::new(1);
        c.push(Gate::Reset(0));
        assert!(matches!(
            circuit_unitary(&c, &nob(), 1.0),
            Err(VerifyError::UnsupportedGate(_))
        ));
        assert_eq!(DenseUnitary::identity(13), Err(VerifyError::TooManyQubits(13)));
    }
}
