use serde::{Deserialize, Serialize};

use super::{CorrectionOp, TargetState};
use crate::qmath::DensityMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProtocolKind {
    Probabilistic,
    Deterministic,
    Joint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    AToB,
    BToA,
}

impl Direction {
    pub fn index(self) -> usize {
        match self {
            Direction::AToB => 0,
            Direction::BToA => 1,
        }
    }
}

/// A pair of values, one per direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Directional<T> {
    pub a_to_b: T,
    pub b_to_a: T,
}

impl<T> Directional<T> {
    pub fn get(&self, direction: Direction) -> &T {
        match direction {
            Direction::AToB => &self.a_to_b,
            Direction::BToA => &self.b_to_a,
        }
    }
}

/// Events carry a shared `step` counter so the separate lists can be merged
/// back into causal order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementEvent {
    pub step: usize,
    pub party: String,
    pub qubit: String,
    pub basis: String,
    pub outcome: u8,
    pub outcome_label: String,
    /// Probability conditioned on all earlier outcomes.
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Broadcast {
    pub step: usize,
    pub party: String,
    pub bits: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalOperation {
    pub step: usize,
    pub party: String,
    pub gate: String,
    pub qubits: Vec<String>,
    /// True when the decision had to wait for the controller's bit.
    pub waited_for_controller: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrectionEvent {
    pub step: usize,
    pub party: String,
    pub qubit: String,
    pub op: CorrectionOp,
    /// Shared resource the correction was looked up for, e.g. `phi-`.
    pub resource: String,
}

/// 2×2 complex matrix as `[[re, im]; 2]` rows.
pub type QubitState = [[[f64; 2]; 2]; 2];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirectionOutput {
    pub receiver: String,
    pub qubit: String,
    pub success: bool,
    /// `<ψ|ρ|ψ>` for the target `ψ`, conditioned on this branch.
    pub fidelity: f64,
    pub state: QubitState,
}

impl DirectionOutput {
    pub(crate) fn state_from(rho: &DensityMatrix) -> QubitState {
        let m = rho.matrix();
        let e = |r, c| {
            let z = m[(r, c)];
            [z.re, z.im]
        };
        [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
    }
}

/// Complete record of one protocol branch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtocolTranscript {
    pub protocol: ProtocolKind,
    pub channel: String,
    pub targets: Directional<TargetState>,
    pub measurements: Vec<MeasurementEvent>,
    pub broadcasts: Vec<Broadcast>,
    pub operations: Vec<LocalOperation>,
    pub corrections: Vec<CorrectionEvent>,
    pub outputs: Directional<DirectionOutput>,
    /// Probability of this whole branch.
    pub probability: f64,
    pub classical_bits: usize,
}

impl ProtocolTranscript {
    pub fn outcomes(&self) -> Vec<u8> {
        self.measurements.iter().map(|m| m.outcome).collect()
    }

    pub fn success(&self) -> bool {
        self.outputs.a_to_b.success && self.outputs.b_to_a.success
    }
}
