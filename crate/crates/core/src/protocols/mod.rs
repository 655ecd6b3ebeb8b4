//! Probabilistic, deterministic and joint controlled bidirectional remote
//! state preparation, executed as Alice/Bob/Charlie state machines.
//!
//! The first Bell (or GHZ) factor of a channel carries Alice→Bob, the second
//! Bob→Alice. Alice holds `S1` and `R2`, Bob holds `R1` and `S2`, Charlie
//! keeps `C1`.

mod deterministic;
mod engine;
mod joint;
mod probabilistic;
mod tables;
mod transcript;

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmath::{ComplexMatrix, SingleQubitBasis, StateVector, C64};

pub use deterministic::run_deterministic_cbrsp;
pub use joint::{run_cjbrsp, KnowledgeSplit, SenderRoles};
pub use probabilistic::run_probabilistic_cbrsp;
pub use tables::{table1_correction, table1_lookup, table2_correction, table3_correction, CorrectionOp};
pub use transcript::{
    Broadcast, CorrectionEvent, Direction, DirectionOutput, Directional, LocalOperation,
    MeasurementEvent, ProtocolKind, ProtocolTranscript, QubitState,
};

/// The known state `a|0> + b e^{iφ}|1>` with `a = sin θ`, `b = cos θ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TargetState {
    theta: f64,
    phi: f64,
}

impl TargetState {
    /// `theta ∈ [0, π/2]`, `phi ∈ [0, 2π)`.
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=FRAC_PI_2).contains(&theta) {
            return Err(Error::InvalidTarget(format!("theta {theta} outside [0, π/2]")));
        }
        if !(0.0..TAU).contains(&phi) {
            return Err(Error::InvalidTarget(format!("phi {phi} outside [0, 2π)")));
        }
        Ok(Self { theta, phi })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn a(&self) -> f64 {
        self.theta.sin()
    }

    pub fn b(&self) -> f64 {
        self.theta.cos()
    }

    pub fn ket(&self) -> StateVector {
        StateVector::single([C64::new(self.a(), 0.0), C64::from_polar(self.b(), self.phi)])
            .expect("sin² + cos² = 1")
    }
}

/// `{|q1>, |q2>}`: `q1 = a|0> + b e^{iφ}|1>`, `q2 = b e^{-iφ}|0> - a|1>`.
pub fn rsp_basis(target: &TargetState) -> SingleQubitBasis {
    let (a, b, phi) = (target.a(), target.b(), target.phi());
    SingleQubitBasis::new(
        [C64::new(a, 0.0), C64::from_polar(b, phi)],
        [C64::from_polar(b, -phi), C64::new(-a, 0.0)],
    )
    .expect("rotated basis is orthonormal")
}

/// `{|u0>, |u1>}`: `u0 = a|0> + b|1>`, `u1 = b|0> - a|1>`. Needs only the
/// amplitudes.
pub fn amplitude_basis(target: &TargetState) -> SingleQubitBasis {
    let (a, b) = (target.a(), target.b());
    SingleQubitBasis::new(
        [C64::new(a, 0.0), C64::new(b, 0.0)],
        [C64::new(b, 0.0), C64::new(-a, 0.0)],
    )
    .expect("amplitude basis is orthonormal")
}

/// `{|v0>, |v1>}`: `v0 = (|0> + e^{iφ}|1>)/√2`, `v1 = (e^{-iφ}|0> - |1>)/√2`.
/// Needs only the phase.
pub fn phase_basis(target: &TargetState) -> SingleQubitBasis {
    let phi = target.phi();
    let h = FRAC_1_SQRT_2;
    SingleQubitBasis::new(
        [C64::new(h, 0.0), C64::from_polar(h, phi)],
        [C64::from_polar(h, -phi), C64::new(-h, 0.0)],
    )
    .expect("phase basis is orthonormal")
}

/// `Π = diag(1, e^{2iφ})`.
pub fn phase_gate(target: &TargetState) -> ComplexMatrix {
    ComplexMatrix::diagonal(&[C64::new(1.0, 0.0), C64::from_polar(1.0, 2.0 * target.phi())])
}

/// How measurement outcomes are chosen during a protocol run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OutcomePolicy {
    /// One outcome per measurement slot, in the protocol's slot order:
    /// probabilistic `[S1, S2, C1]`; deterministic and joint
    /// `[u_A, v_A, u_B, v_B, C1]`.
    Forced(Vec<u8>),
    /// Born-rule sampling from a seeded generator.
    Sampled(u64),
    /// Every branch with nonzero probability.
    EnumerateAll,
}

impl OutcomePolicy {
    /// Parses labels such as `"q2,q2,a"` or `"u0,v1,u1,v0,b"`.
    pub fn forced_from_labels(text: &str) -> Result<Self> {
        text.split(',')
            .map(|t| match t.trim() {
                "0" | "q1" | "a" | "u0" | "v0" => Ok(0),
                "1" | "q2" | "b" | "u1" | "v1" => Ok(1),
                other => Err(Error::Parse(format!("unknown outcome label {other:?}"))),
            })
            .collect::<Result<Vec<u8>>>()
            .map(OutcomePolicy::Forced)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmath::tol;
    use std::f64::consts::{FRAC_PI_4, PI};

    fn close(a: &[C64; 2], b: [C64; 2]) -> bool {
        (a[0] - b[0]).norm() < tol::EXACT && (a[1] - b[1]).norm() < tol::EXACT
    }

    #[test]
    fn target_range_checked() {
        assert!(TargetState::new(-0.1, 0.0).is_err());
        assert!(TargetState::new(1.6, 0.0).is_err());
        assert!(TargetState::new(0.3, TAU).is_err());
        assert!(TargetState::new(FRAC_PI_2, 0.0).is_ok());
    }

    #[test]
    fn rsp_basis_examples() {
        let h = FRAC_1_SQRT_2;
        let b = rsp_basis(&TargetState::new(FRAC_PI_4, 0.0).unwrap());
        assert!(close(b.first(), [C64::new(h, 0.0), C64::new(h, 0.0)]));
        assert!(close(b.second(), [C64::new(h, 0.0), C64::new(-h, 0.0)]));

        let b = rsp_basis(&TargetState::new(FRAC_PI_2, 0.0).unwrap());
        assert!(close(b.first(), [C64::new(1.0, 0.0), C64::new(0.0, 0.0)]));
        assert!(close(b.second(), [C64::new(0.0, 0.0), C64::new(-1.0, 0.0)]));

        // q2 = (e^{-iπ/2}|0> - |1>)/√2 = (-i|0> - |1>)/√2
        let b = rsp_basis(&TargetState::new(FRAC_PI_4, FRAC_PI_2).unwrap());
        assert!(close(b.second(), [C64::new(0.0, -h), C64::new(-h, 0.0)]));
    }

    #[test]
    fn amplitude_basis_examples() {
        let h = FRAC_1_SQRT_2;
        let b = amplitude_basis(&TargetState::new(FRAC_PI_4, 2.0).unwrap());
        assert!(close(b.first(), [C64::new(h, 0.0), C64::new(h, 0.0)]));
        assert!(close(b.second(), [C64::new(h, 0.0), C64::new(-h, 0.0)]));
        let b = amplitude_basis(&TargetState::new(0.0, 0.0).unwrap());
        assert!(close(b.first(), [C64::new(0.0, 0.0), C64::new(1.0, 0.0)]));
        assert!(close(b.second(), [C64::new(1.0, 0.0), C64::new(0.0, 0.0)]));
    }

    #[test]
    fn phase_basis_examples() {
        let h = FRAC_1_SQRT_2;
        let b = phase_basis(&TargetState::new(0.4, 0.0).unwrap());
        assert_eq!(b.deviation(), SingleQubitBasis::plus_minus().deviation());
        assert!(close(b.first(), *SingleQubitBasis::plus_minus().first()));
        let b = phase_basis(&TargetState::new(0.4, PI).unwrap());
        assert!(close(b.first(), [C64::new(h, 0.0), C64::new(-h, 0.0)]));
        assert!(close(b.second(), [C64::new(-h, 0.0), C64::new(-h, 0.0)]));
    }

    #[test]
    fn phase_gate_examples() {
        let id = phase_gate(&TargetState::new(0.3, 0.0).unwrap());
        assert!(id.max_abs_diff(&ComplexMatrix::identity(2)) < tol::EXACT);
        let z = phase_gate(&TargetState::new(0.3, FRAC_PI_2).unwrap());
        assert!(z.max_abs_diff(&crate::qmath::gates::pauli_z()) < tol::EXACT);
        for k in 0..10 {
            let g = phase_gate(&TargetState::new(0.1, 0.6 * k as f64).unwrap());
            assert!(g.is_unitary(tol::EXACT));
        }
    }

    #[test]
    fn forced_labels() {
        assert_eq!(
            OutcomePolicy::forced_from_labels("q2,q2,a").unwrap(),
            OutcomePolicy::Forced(vec![1, 1, 0])
        );
        assert!(OutcomePolicy::forced_from_labels("q3").is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn protocol_bases_orthonormal(theta in 0.0..FRAC_PI_2, phi in 0.0..TAU) {
                let t = TargetState::new(theta, phi).unwrap();
                prop_assert!(rsp_basis(&t).deviation() < tol::EXACT);
                prop_assert!(amplitude_basis(&t).deviation() < tol::EXACT);
                prop_assert!(phase_basis(&t).deviation() < tol::EXACT);
                // q1 is the target itself
                let q1 = StateVector::single(*rsp_basis(&t).first()).unwrap();
                prop_assert!((q1.overlap(&t.ket()).unwrap() - 1.0).abs() < tol::EXACT);
            }
        }
    }
}
