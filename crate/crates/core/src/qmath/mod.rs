//! Dense complex linear algebra for small multi-qubit registers.
//!
//! Qubit 0 is the leftmost ket label and the most significant bit of a
//! basis index: `|q0 q1 ... q(n-1)>` has index `q0·2^(n-1) + ... + q(n-1)`.

mod basis;
mod density;
mod kernel;
mod matrix;
mod measure;
mod state;

pub use basis::SingleQubitBasis;
pub use density::{fidelity_pure_vs_mixed, partial_trace, DensityMatrix};
pub use matrix::{gates, tensor_product, ComplexMatrix};
pub use measure::{measure_in_basis, Measurement, OutcomeSelection};
pub use state::StateVector;

pub use num_complex::Complex64 as C64;

use crate::error::Result;

/// Largest register handled by the dense representation.
pub const MAX_QUBITS: usize = 10;

/// Numerical tolerances shared by every module.
pub mod tol {
    /// Algebraic identities (normalization, orthonormality, hermiticity).
    pub const EXACT: f64 = 1e-12;
    /// Smallest eigenvalue still accepted as positive semidefinite.
    pub const PSD_FLOOR: f64 = -1e-10;
    /// Forced outcomes below this probability are rejected.
    pub const FORCED_PROBABILITY: f64 = 1e-15;
    /// Simulation vs. closed-form comparisons.
    pub const CLOSED_FORM: f64 = 1e-9;
}

/// Operations shared by pure and mixed register states.
pub trait QubitRegister: Sized {
    fn num_qubits(&self) -> usize;

    /// Applies `op` on `targets` (identity elsewhere). Density matrices
    /// transform as `U ρ U†`.
    fn apply_on_qubits(&self, op: &ComplexMatrix, targets: &[usize]) -> Result<Self>;

    /// Projects qubit `qubit` onto `vector` without renormalizing; returns the
    /// projected state and the squared weight it carries.
    fn project_qubit(&self, qubit: usize, vector: &[C64; 2]) -> Result<(Self, f64)>;

    /// Rescales so that the norm (pure) or trace (mixed) is one.
    fn renormalized(self, weight: f64) -> Self;
}

/// Free-function form of [`QubitRegister::apply_on_qubits`].
pub fn apply_on_qubits<S: QubitRegister>(
    state: &S,
    op: &ComplexMatrix,
    targets: &[usize],
) -> Result<S> {
    state.apply_on_qubits(op, targets)
}
