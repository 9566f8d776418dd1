//! Simulation core for universal quantum deletion machines.
//!
//! A deletion machine takes two identical copies of an unknown qubit
//! |ψ⟩|ψ⟩ together with a machine ancilla |A⟩ and maps them to one
//! retained qubit, one approximately deleted qubit driven toward a fixed
//! standard state |Σ⟩, and a final machine state. Perfect deletion is
//! forbidden by linearity, so the interesting questions are quantitative:
//! how well is the first qubit retained, how close is the second to the
//! deletion target |Σ'⟩ = (|Σ⟩+|Σ⊥⟩)/√2, and how much information leaks
//! into the machine.
//!
//! The crate builds the machine vectors concretely from their inner-product
//! constraints (Gram realization), assembles the deleter isometry and the
//! two-qubit transformer gate, evolves arbitrary inputs through the
//! conventional (deleter only) and modified (deleter + transformer)
//! pipelines, and cross-checks every reduced density operator and fidelity
//! against closed-form expressions.
//!
//! The crate is `no_std` (with `alloc`); all state is immutable after
//! construction and every operation is a pure function, so values can be
//! shared freely across threads by a `std` front end.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod engine;
pub mod error;
pub mod linalg;
pub mod machine;
pub mod selftest;
pub mod tensor;
pub mod tol;

pub use error::{Error, Result};
pub use num_complex::Complex64;
