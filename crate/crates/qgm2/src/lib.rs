//! Directed quantum graphs on the 2x2 matrix algebra.
//!
//! A quantum graph here is a quantum set `(M_2, psi_q)` for `q` in `(0,1]`
//! together with an operator space `S` inside `M_2` (the quantum edge space).
//! The crate converts between the three standard presentations of such a
//! graph (edge space, quantum adjacency matrix, edge projection), decides the
//! structural properties (reflexive, loopfree, GNS-/KMS-undirected), computes
//! the canonical parameter form of every graph, and decides isomorphism.
//!
//! Start with [`qgraph::QuantumGraph`] and [`canonical::canonicalize`]; the
//! `examples/` directory has one runnable program per capability.

pub mod cmatrix;
pub mod qset;
pub mod pauli;
pub mod lines;
pub mod qgraph;
pub mod canonical;
pub mod oracle;
pub mod cli;

pub use cmatrix::{kron, vec2, CMat, CVec, Mat2, Mat4, Subspace};



pub use qset::{InnerProductKind, QuantumSet};
