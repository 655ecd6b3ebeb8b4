use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::kernel::{apply_in_place, check_qubits, check_register_size, mask};
use super::{tol, ComplexMatrix, QubitRegister, StateVector, C64};
use crate::error::{Error, Result};

/// Density operator on `num_qubits` qubits.
///
/// Post-selection and correlated noise produce trace-deficient operators;
/// those carry `normalized == false` until [`DensityMatrix::normalize`] is
/// called explicitly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityMatrix {
    num_qubits: usize,
    matrix: ComplexMatrix,
    normalized: bool,
}

impl DensityMatrix {
    pub fn from_pure(state: &StateVector) -> Self {
        let amps = state.amplitudes();
        Self {
            num_qubits: state.num_qubits(),
            matrix: ComplexMatrix::outer(amps, amps),
            normalized: true,
        }
    }

    /// Validates shape and hermiticity; the normalization flag follows the
    /// trace.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let num_qubits = qubits_for_dim(&matrix)?;
        if !matrix.is_hermitian(tol::EXACT) {
            return Err(Error::Parse("density matrix is not Hermitian".into()));
        }
        Ok(Self::from_parts(num_qubits, matrix))
    }

    fn from_parts(num_qubits: usize, matrix: ComplexMatrix) -> Self {
        let normalized = (matrix.trace().re - 1.0).abs() <= tol::EXACT;
        Self {
            num_qubits,
            matrix,
            normalized,
        }
    }

    pub fn maximally_mixed(num_qubits: usize) -> Result<Self> {
        check_register_size(num_qubits)?;
        let dim = 1usize << num_qubits;
        Ok(Self {
            num_qubits,
            matrix: ComplexMatrix::identity(dim).scale(C64::new(1.0 / dim as f64, 0.0)),
            normalized: true,
        })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn normalize(&self) -> Result<DensityMatrix> {
        let tr = self.trace();
        if tr < tol::FORCED_PROBABILITY {
            return Err(Error::ImpossiblePostSelection(tr));
        }
        Ok(self.clone().renormalized(tr))
    }

    /// `K ρ K†` for an arbitrary (not necessarily unitary) operator on
    /// `targets`.
    pub fn conjugate_by(&self, op: &ComplexMatrix, targets: &[usize]) -> Result<DensityMatrix> {
        let n = self.num_qubits;
        check_qubits(n, targets)?;
        let dim = 1usize << targets.len();
        if op.rows() != dim || op.cols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: op.rows().max(op.cols()),
            });
        }
        // Row-major ρ is a 2n-qubit vector: row bits first, column bits after.
        let mut matrix = self.matrix.clone();
        let col_targets: Vec<usize> = targets.iter().map(|t| t + n).collect();
        apply_in_place(matrix.as_mut_slice(), 2 * n, op, targets);
        apply_in_place(matrix.as_mut_slice(), 2 * n, &op.conj(), &col_targets);
        Ok(Self::from_parts(n, matrix))
    }

    pub fn tensor(&self, other: &DensityMatrix) -> Result<DensityMatrix> {
        check_register_size(self.num_qubits + other.num_qubits)?;
        Ok(Self::from_parts(
            self.num_qubits + other.num_qubits,
            self.matrix.kron(&other.matrix),
        ))
    }

    /// Elementwise sum; used to accumulate Kraus branches.
    pub fn accumulate(&mut self, other: &DensityMatrix) -> Result<()> {
        self.matrix = self.matrix.add(&other.matrix)?;
        self.normalized = (self.trace() - 1.0).abs() <= tol::EXACT;
        Ok(())
    }

    pub(crate) fn zeros(num_qubits: usize) -> Self {
        let dim = 1usize << num_qubits;
        Self {
            num_qubits,
            matrix: ComplexMatrix::zeros(dim, dim),
            normalized: false,
        }
    }

    /// `<ψ|ρ|ψ>` without any normalization requirement on ρ.
    pub fn expectation(&self, state: &StateVector) -> Result<C64> {
        if state.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: state.dim(),
            });
        }
        let rho_psi = self.matrix.mul_vec(state.amplitudes())?;
        Ok(state
            .amplitudes()
            .iter()
            .zip(&rho_psi)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> f64 {
        let dim = self.dim();
        let m = DMatrix::from_fn(dim, dim, |i, j| self.matrix[(i, j)]);
        let herm = (&m + m.adjoint()) * C64::new(0.5, 0.0);
        herm.symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    pub fn is_hermitian(&self) -> bool {
        self.matrix.is_hermitian(tol::EXACT)
    }

    pub fn is_positive_semidefinite(&self) -> bool {
        self.min_eigenvalue() >= tol::PSD_FLOOR
    }

    pub fn purity(&self) -> f64 {
        self.matrix
            .matmul(&self.matrix)
            .map(|m| m.trace().re)
            .unwrap_or(f64::NAN)
    }
}

impl QubitRegister for DensityMatrix {
    fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    fn apply_on_qubits(&self, op: &ComplexMatrix, targets: &[usize]) -> Result<Self> {
        let mut out = self.conjugate_by(op, targets)?;
        out.normalized = self.normalized && out.normalized;
        Ok(out)
    }

    fn project_qubit(&self, qubit: usize, vector: &[C64; 2]) -> Result<(Self, f64)> {
        let projector = ComplexMatrix::outer(vector, vector);
        let projected = self.conjugate_by(&projector, &[qubit])?;
        let weight = projected.trace();
        Ok((projected, weight))
    }

    fn renormalized(mut self, weight: f64) -> Self {
        self.matrix = self.matrix.scale(C64::new(1.0 / weight, 0.0));
        self.normalized = true;
        self
    }
}

fn qubits_for_dim(matrix: &ComplexMatrix) -> Result<usize> {
    let dim = matrix.rows();
    if !matrix.is_square() || dim < 2 || !dim.is_power_of_two() {
        return Err(Error::DimensionMismatch {
            expected: dim.next_power_of_two().max(2),
            actual: matrix.cols(),
        });
    }
    let n = dim.trailing_zeros() as usize;
    check_register_size(n)?;
    Ok(n)
}

/// Reduced state on `keep`, with output qubit `j` being input qubit `keep[j]`.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let n = rho.num_qubits;
    check_qubits(n, keep)?;
    let traced: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
    let scatter = |bits: &[usize], value: usize| -> usize {
        let k = bits.len();
        bits.iter()
            .enumerate()
            .filter(|(j, _)| (value >> (k - 1 - j)) & 1 == 1)
            .fold(0, |acc, (_, &q)| acc | mask(n, q))
    };
    let kept_offsets: Vec<usize> = (0..1usize << keep.len()).map(|v| scatter(keep, v)).collect();
    let traced_offsets: Vec<usize> = (0..1usize << traced.len())
        .map(|v| scatter(&traced, v))
        .collect();

    let out_dim = kept_offsets.len();
    let mut out = ComplexMatrix::zeros(out_dim, out_dim);
    for (r, &ro) in kept_offsets.iter().enumerate() {
        for (c, &co) in kept_offsets.iter().enumerate() {
            out[(r, c)] = traced_offsets
                .iter()
                .map(|&t| rho.matrix[(ro | t, co | t)])
                .sum();
        }
    }
    let mut reduced = DensityMatrix::from_parts(keep.len(), out);
    reduced.normalized = rho.normalized && reduced.normalized;
    Ok(reduced)
}

/// `F = <T|ρ|T>` for a pure target and a normalized mixed state.
pub fn fidelity_pure_vs_mixed(target: &StateVector, rho: &DensityMatrix) -> Result<f64> {
    if (rho.trace() - 1.0).abs() > tol::CLOSED_FORM {
        return Err(Error::NotNormalized(rho.trace()));
    }
    let f = rho.expectation(target)?;
    debug_assert!(f.im.abs() < 1e-9, "fidelity has imaginary part {}", f.im);
    Ok(f.re)
}
