//! Compiler for variational quantum kernels made of Pauli-string blocks.
//!
//! A kernel is parsed into blocks of Pauli strings ([`pauli`]), each block is
//! ordered by [`sched`], synthesized onto a coupling graph ([`topology`],
//! [`synth`]), cleaned up by [`peephole`], and measured by [`metrics`].
//! [`verify`] checks small results against dense unitaries.

pub mod circuit;
pub mod compile;
pub mod generate;
pub mod metrics;
pub mod pauli;
pub mod peephole;
pub mod qasm;
pub mod sched;
pub mod synth;
pub mod topology;
pub mod verify;
