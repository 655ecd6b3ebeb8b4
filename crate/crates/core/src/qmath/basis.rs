use serde::{Deserialize, Serialize};

use super::{tol, ComplexMatrix, C64};
use crate::error::{Error, Result};

/// Orthonormal pair of single-qubit vectors; outcome 0 is `first`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingleQubitBasis {
    first: [C64; 2],
    second: [C64; 2],
}

impl SingleQubitBasis {
    pub fn new(first: [C64; 2], second: [C64; 2]) -> Result<Self> {
        let dev = orthonormality_deviation(&first, &second);
        if dev > tol::EXACT {
            return Err(Error::NotOrthonormal(dev));
        }
        Ok(Self { first, second })
    }

    pub fn computational() -> Self {
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        Self {
            first: [one, zero],
            second: [zero, one],
        }
    }

    /// `{|+>, |->}`.
    pub fn plus_minus() -> Self {
        let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self {
            first: [h, h],
            second: [h, -h],
        }
    }

    /// `first = cos(t/2)|0> + e^{ip} sin(t/2)|1>`, `second` its orthogonal
    /// complement `sin(t/2)|0> - e^{ip} cos(t/2)|1>`.
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        let (s, c) = (theta / 2.0).sin_cos();
        let e = C64::from_polar(1.0, phi);
        Self {
            first: [C64::new(c, 0.0), e * s],
            second: [C64::new(s, 0.0), -e * c],
        }
    }

    pub fn first(&self) -> &[C64; 2] {
        &self.first
    }

    pub fn second(&self) -> &[C64; 2] {
        &self.second
    }

    /// Basis vector for outcome 0 or 1.
    pub fn vector(&self, outcome: u8) -> &[C64; 2] {
        if outcome == 0 {
            &self.first
        } else {
            &self.second
        }
    }

    pub fn projector(&self, outcome: u8) -> ComplexMatrix {
        let v = self.vector(outcome);
        ComplexMatrix::outer(v, v)
    }

    pub fn deviation(&self) -> f64 {
        orthonormality_deviation(&self.first, &self.second)
    }
}

fn inner(a: &[C64; 2], b: &[C64; 2]) -> C64 {
    a[0].conj() * b[0] + a[1].conj() * b[1]
}

fn orthonormality_deviation(a: &[C64; 2], b: &[C64; 2]) -> f64 {
    let aa = (inner(a, a) - 1.0).norm();
    let bb = (inner(b, b) - 1.0).norm();
    let ab = inner(a, b).norm();
    aa.max(bb).max(ab)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_are_orthonormal() {
        assert!(SingleQubitBasis::computational().deviation() < tol::EXACT);
        assert!(SingleQubitBasis::plus_minus().deviation() < tol::EXACT);
        for k in 0..20 {
            let b = SingleQubitBasis::from_angles(0.31 * k as f64, 1.7 * k as f64);
            assert!(b.deviation() < tol::EXACT);
        }
    }

    #[test]
    fn rejects_non_orthogonal_pair() {
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        assert!(matches!(
            SingleQubitBasis::new([one, zero], [h, h]),
            Err(Error::NotOrthonormal(_))
        ));
    }
}
