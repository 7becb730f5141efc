//! Permutation gates in the third level of the Clifford hierarchy.
//!
//! This crate characterizes the n-qubit permutation gates that sit in C₃:
//! staircase-form Toffoli circuits, the bijection between staircase C₃
//! permutations and descending multiplications over F₂ⁿ, the U_k family of
//! non-semi-Clifford gates, semi-Clifford classification and decomposition,
//! a dense-unitary oracle for small qubit counts, and an exhaustive survey
//! reproducing the seven-qubit minimality of non-semi-Clifford permutations.
//!
//! Start with the runnable examples (`cargo run --release --example ...`)
//! or the `permc3` CLI, which emits machine-checkable JSON certificates.

pub mod anf;
pub mod cert;
pub mod descmult;
pub mod densesim;
pub mod f2core;
pub mod family;
pub mod hierarchy;
pub mod permgate;
pub mod search;
