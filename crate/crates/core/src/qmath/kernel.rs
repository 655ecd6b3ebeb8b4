use super::{ComplexMatrix, C64, MAX_QUBITS};
use crate::error::{Error, Result};

pub(crate) fn check_qubits(num_qubits: usize, qubits: &[usize]) -> Result<()> {
    if qubits.is_empty() {
        return Err(Error::EmptyQubitList);
    }
    let mut seen = 0usize;
    for &q in qubits {
        if q >= num_qubits {
            return Err(Error::QubitOutOfRange {
                index: q,
                num_qubits,
            });
        }
        if seen & (1 << q) != 0 {
            return Err(Error::DuplicateQubit(q));
        }
        seen |= 1 << q;
    }
    Ok(())
}

pub(crate) fn check_register_size(num_qubits: usize) -> Result<()> {
    if num_qubits == 0 || num_qubits > MAX_QUBITS {
        Err(Error::TooManyQubits(num_qubits))
    } else {
        Ok(())
    }
}

/// Bit mask of qubit `q` in an `n`-qubit big-endian index.
#[inline]
pub(crate) fn mask(n: usize, q: usize) -> usize {
    1 << (n - 1 - q)
}

/// Offsets of the `2^k` sub-indices spanned by `targets`, with `targets[0]`
/// the most significant bit of the operator index.
pub(crate) fn offsets(n: usize, targets: &[usize]) -> Vec<usize> {
    let k = targets.len();
    (0..1usize << k)
        .map(|s| {
            targets
                .iter()
                .enumerate()
                .filter(|(j, _)| (s >> (k - 1 - j)) & 1 == 1)
                .fold(0, |acc, (_, &t)| acc | mask(n, t))
        })
        .collect()
}

/// In-place application of a `2^k × 2^k` operator to an amplitude vector of
/// `n` qubits. Callers validate `targets`.
pub(crate) fn apply_in_place(amps: &mut [C64], n: usize, op: &ComplexMatrix, targets: &[usize]) {
    debug_assert_eq!(amps.len(), 1 << n);
    let offs = offsets(n, targets);
    let target_mask = offs.last().copied().unwrap_or(0);
    let dim = offs.len();
    let mut gathered = vec![C64::new(0.0, 0.0); dim];
    for base in 0..amps.len() {
        if base & target_mask != 0 {
            continue;
        }
        for (g, off) in gathered.iter_mut().zip(&offs) {
            *g = amps[base | off];
        }
        for (row, off) in offs.iter().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for (col, g) in gathered.iter().enumerate() {
                acc += op[(row, col)] * g;
            }
            amps[base | off] = acc;
        }
    }
}
