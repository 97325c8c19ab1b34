//! Entanglement entropy of the Gaussian ground state of coupled harmonic
//! oscillators on graphs, with special support for Hamming graphs `H(d, n)`.
//!
//! The oscillators sit on the vertices and interact along edges, giving the
//! potential matrix `V = I + 2gL`. For a vertex bipartition the ground state's
//! entropy is a sum of two-mode contributions fixed by the correlation
//! parameters `γ` ([`gaussian`]). For Hamming graphs the adjacency matrix
//! decomposes into small tridiagonal chains ([`strata`]) that can be reduced
//! by Schur complements ([`schur`]), which yields closed forms for several
//! bipartition families. [`enumerate`] scans all bipartitions of a given size.
//!
//! The crate is `no_std` and needs only `alloc`.

// Negated comparisons reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![no_std]

extern crate alloc;

pub mod enumerate;
pub mod error;
pub mod gaussian;
pub mod matrix;
pub mod netgraph;
pub mod schur;
pub mod strata;

pub use error::{Error, Result, SchemeViolation};
pub use gaussian::{
    bipartite_entropy, gamma_spectrum, mode_entropy, nu_from_gamma, Bipartition, EntropyResult, ExponentConvention,
    GammaSpectrum, LogBase,
};
pub use matrix::SymmetricMatrix;
pub use netgraph::{build_from_edges, build_hamming, laplacian, potential_matrix, HammingSpec};
