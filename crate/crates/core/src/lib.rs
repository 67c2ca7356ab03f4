//! Spectral solvers for one bosonic mode coupled to two qubits.
//!
//! Four routes to the same spectra, each with its own regime:
//!
//! * [`fock`]: brute-force dense diagonalization in a truncated number basis,
//!   split by the conserved parity reflection. Works everywhere; the
//!   reference the other solvers are checked against.
//! * [`gfunc`]: series-expansion determinant roots for unequal couplings,
//!   no truncation error.
//! * [`jc`]: the rotating-wave counterpart, block-diagonal in the total
//!   excitation number, with closed-form characteristic polynomials.
//! * [`quasi`]: coupling values where the full model has an eigenstate
//!   confined to finitely many photon numbers, found exactly.

pub mod error;
pub mod fock;
pub mod gfunc;
pub mod jc;
pub mod linalg;
pub mod model;
pub mod quasi;

pub use error::{Error, Result};

/// Bound the global worker pool. Zero keeps the default (all cores); calls
/// after the pool has started are ignored.
pub fn configure_threads(n: usize) {
    if n == 0 {
        return;
    }
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
}
