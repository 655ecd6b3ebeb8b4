use serde::{Deserialize, Serialize};

use super::kernel::{apply_in_place, check_qubits, check_register_size, mask};
use super::{tol, ComplexMatrix, DensityMatrix, QubitRegister, C64};
use crate::error::{Error, Result};

/// Normalized pure state of `num_qubits` qubits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateVector {
    num_qubits: usize,
    amplitudes: Vec<C64>,
}

impl StateVector {
    /// Wraps amplitudes that must already be normalized.
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        let state = Self::unchecked(amplitudes)?;
        let n2 = state.norm_sqr();
        if (n2 - 1.0).abs() > tol::EXACT {
            return Err(Error::NotNormalized(n2));
        }
        Ok(state)
    }

    /// Normalizes arbitrary nonzero amplitudes.
    pub fn normalized(amplitudes: Vec<C64>) -> Result<Self> {
        let state = Self::unchecked(amplitudes)?;
        let n2 = state.norm_sqr();
        if n2 < tol::FORCED_PROBABILITY {
            return Err(Error::NotNormalized(n2));
        }
        Ok(state.renormalized(n2))
    }

    fn unchecked(amplitudes: Vec<C64>) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::DimensionMismatch {
                expected: len.next_power_of_two().max(2),
                actual: len,
            });
        }
        let num_qubits = len.trailing_zeros() as usize;
        check_register_size(num_qubits)?;
        Ok(Self {
            num_qubits,
            amplitudes,
        })
    }

    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        check_register_size(num_qubits)?;
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: index,
            });
        }
        let mut amplitudes = vec![C64::new(0.0, 0.0); dim];
        amplitudes[index] = C64::new(1.0, 0.0);
        Ok(Self {
            num_qubits,
            amplitudes,
        })
    }

    /// `|b0 b1 ...>` from a bit string such as `"010"`.
    pub fn from_bits(bits: &str) -> Result<Self> {
        let index = usize::from_str_radix(bits, 2)
            .map_err(|_| Error::Parse(format!("not a bit string: {bits:?}")))?;
        Self::basis(bits.len(), index)
    }

    pub fn single(amplitudes: [C64; 2]) -> Result<Self> {
        Self::new(amplitudes.to_vec())
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: other.dim(),
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|<self|other>|²`, insensitive to global phase.
    pub fn overlap(&self, other: &StateVector) -> Result<f64> {
        self.inner(other).map(|z| z.norm_sqr())
    }

    pub fn tensor(&self, other: &StateVector) -> Result<StateVector> {
        check_register_size(self.num_qubits + other.num_qubits)?;
        let amplitudes = self
            .amplitudes
            .iter()
            .flat_map(|a| other.amplitudes.iter().map(move |b| a * b))
            .collect();
        Ok(StateVector {
            num_qubits: self.num_qubits + other.num_qubits,
            amplitudes,
        })
    }

    /// Reorders qubits so that new qubit `i` is old qubit `order[i]`.
    pub fn permute(&self, order: &[usize]) -> Result<StateVector> {
        let n = self.num_qubits;
        if order.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: order.len(),
            });
        }
        check_qubits(n, order)?;
        let mut amplitudes = vec![C64::new(0.0, 0.0); self.dim()];
        for (old, &amp) in self.amplitudes.iter().enumerate() {
            let new = order
                .iter()
                .enumerate()
                .filter(|(_, &src)| old & mask(n, src) != 0)
                .fold(0, |acc, (dst, _)| acc | mask(n, dst));
            amplitudes[new] = amp;
        }
        Ok(StateVector {
            num_qubits: n,
            amplitudes,
        })
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix::from_pure(self)
    }

    /// Reduced state of `keep` (in that order) without forming the full
    /// density matrix.
    pub fn reduced_density(&self, keep: &[usize]) -> Result<DensityMatrix> {
        check_qubits(self.num_qubits, keep)?;
        let rest = (0..self.num_qubits).filter(|q| !keep.contains(q));
        let order: Vec<usize> = keep.iter().copied().chain(rest).collect();
        let permuted = self.permute(&order)?;
        let (rows, cols) = (1usize << keep.len(), 1usize << (self.num_qubits - keep.len()));
        let psi = permuted.amplitudes();
        let mut rho = ComplexMatrix::zeros(rows, rows);
        for a in 0..rows {
            for b in 0..rows {
                rho[(a, b)] = (0..cols).map(|j| psi[a * cols + j] * psi[b * cols + j].conj()).sum();
            }
        }
        DensityMatrix::new(rho)
    }

    pub fn as_column(&self) -> ComplexMatrix {
        ComplexMatrix::new(self.dim(), 1, self.amplitudes.clone()).expect("column shape")
    }
}

impl QubitRegister for StateVector {
    fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    fn apply_on_qubits(&self, op: &ComplexMatrix, targets: &[usize]) -> Result<Self> {
        check_qubits(self.num_qubits, targets)?;
        let dim = 1usize << targets.len();
        if op.rows() != dim || op.cols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: op.rows().max(op.cols()),
            });
        }
        let mut out = self.clone();
        apply_in_place(&mut out.amplitudes, self.num_qubits, op, targets);
        Ok(out)
    }

    fn project_qubit(&self, qubit: usize, vector: &[C64; 2]) -> Result<(Self, f64)> {
        let projector = ComplexMatrix::outer(vector, vector);
        let projected = self.apply_on_qubits(&projector, &[qubit])?;
        let weight = projected.norm_sqr();
        Ok((projected, weight))
    }

    fn renormalized(mut self, weight: f64) -> Self {
        let s = 1.0 / weight.sqrt();
        self.amplitudes.iter_mut().for_each(|a| *a *= s);
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmath::gates;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn r(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn reduced_density_matches_partial_trace() {
        let amps: Vec<C64> = (0..16).map(|k| C64::new(k as f64 * 0.1 - 0.4, (k % 3) as f64 * 0.2)).collect();
        let psi = StateVector::normalized(amps).unwrap();
        for keep in [vec![2], vec![3, 0], vec![1, 2, 3]] {
            let fast = psi.reduced_density(&keep).unwrap();
            let slow = crate::qmath::partial_trace(&psi.to_density(), &keep).unwrap();
            assert!(fast.matrix().max_abs_diff(slow.matrix()) < tol::EXACT);
        }
    }

    #[test]
    fn basis_kets_tensor() {
        let k0 = StateVector::from_bits("0").unwrap();
        let k1 = StateVector::from_bits("1").unwrap();
        let k01 = k0.tensor(&k1).unwrap();
        assert_eq!(k01.amplitudes(), &[r(0.0), r(1.0), r(0.0), r(0.0)]);
    }

    #[test]
    fn bell_tensor_ancilla_distributes() {
        let bell = StateVector::new(vec![r(FRAC_1_SQRT_2), r(0.0), r(0.0), r(FRAC_1_SQRT_2)]).unwrap();
        let out = bell.tensor(&StateVector::from_bits("0").unwrap()).unwrap();
        let expected = StateVector::normalized(
            (0..8).map(|i| r(if i == 0b000 || i == 0b110 { 1.0 } else { 0.0 })).collect(),
        )
        .unwrap();
        assert!(out.overlap(&expected).unwrap() > 1.0 - tol::EXACT);
        assert!((out.inner(&expected).unwrap() - 1.0).norm() < tol::EXACT);
    }

    #[test]
    fn x_on_second_qubit() {
        let s = StateVector::from_bits("00").unwrap();
        let out = s.apply_on_qubits(&gates::pauli_x(), &[1]).unwrap();
        assert_eq!(out, StateVector::from_bits("01").unwrap());
    }

    #[test]
    fn cnot_entangles() {
        let s = StateVector::new(vec![r(FRAC_1_SQRT_2), r(0.0), r(FRAC_1_SQRT_2), r(0.0)]).unwrap();
        let out = s.apply_on_qubits(&gates::cnot(), &[0, 1]).unwrap();
        let bell = StateVector::new(vec![r(FRAC_1_SQRT_2), r(0.0), r(0.0), r(FRAC_1_SQRT_2)]).unwrap();
        assert!((out.inner(&bell).unwrap() - 1.0).norm() < tol::EXACT);
    }

    #[test]
    fn reversed_targets_swap_control() {
        // CNOT with control qubit 1, target qubit 0: |01> -> |11>.
        let s = StateVector::from_bits("01").unwrap();
        let out = s.apply_on_qubits(&gates::cnot(), &[1, 0]).unwrap();
        assert_eq!(out, StateVector::from_bits("11").unwrap());
    }

    #[test]
    fn target_validation() {
        let s = StateVector::from_bits("000").unwrap();
        assert!(matches!(
            s.apply_on_qubits(&gates::cnot(), &[1, 1]),
            Err(Error::DuplicateQubit(1))
        ));
        assert!(matches!(
            s.apply_on_qubits(&gates::cnot(), &[0]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            s.apply_on_qubits(&gates::pauli_x(), &[3]),
            Err(Error::QubitOutOfRange { .. })
        ));
    }

    #[test]
    fn permute_moves_bits() {
        let s = StateVector::from_bits("110").unwrap();
        // new order (q2, q0, q1) -> |0 1 1>
        let p = s.permute(&[2, 0, 1]).unwrap();
        assert_eq!(p, StateVector::from_bits("011").unwrap());
    }

    #[test]
    fn rejects_unnormalized_and_oversized() {
        assert!(matches!(
            StateVector::new(vec![r(1.0), r(1.0)]),
            Err(Error::NotNormalized(_))
        ));
        assert!(StateVector::basis(11, 0).is_err());
        assert!(StateVector::new(vec![r(1.0), r(0.0), r(0.0)]).is_err());
    }
}
