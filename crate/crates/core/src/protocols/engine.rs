//! Shared bookkeeping for the protocol state machines.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::transcript::*;
use super::{CorrectionOp, OutcomePolicy, TargetState};
use crate::error::{Error, Result};
use crate::qmath::{
    fidelity_pure_vs_mixed, measure_in_basis, ComplexMatrix, OutcomeSelection,
    QubitRegister, SingleQubitBasis, StateVector,
};

enum Selector {
    Forced(Vec<u8>),
    Sampled(ChaCha8Rng),
}

pub(super) struct Session {
    state: StateVector,
    labels: &'static [&'static str],
    selector: Selector,
    step: usize,
    probability: f64,
    measurements: Vec<MeasurementEvent>,
    broadcasts: Vec<Broadcast>,
    operations: Vec<LocalOperation>,
    corrections: Vec<CorrectionEvent>,
}

pub(super) struct MeasureSpec<'a> {
    pub party: &'a str,
    pub qubit: usize,
    pub basis: &'a SingleQubitBasis,
    pub basis_name: &'a str,
    pub outcome_labels: [&'a str; 2],
}

impl Session {
    /// `policy` must not be `EnumerateAll`; callers expand that first.
    pub fn new(
        state: StateVector,
        labels: &'static [&'static str],
        policy: &OutcomePolicy,
        slots: usize,
    ) -> Result<Self> {
        let selector = match policy {
            OutcomePolicy::Forced(v) if v.len() != slots => {
                return Err(Error::Policy(format!(
                    "expected {slots} forced outcomes, got {}",
                    v.len()
                )))
            }
            OutcomePolicy::Forced(v) if v.iter().any(|&o| o > 1) => {
                return Err(Error::Policy("forced outcomes must be 0 or 1".into()))
            }
            OutcomePolicy::Forced(v) => Selector::Forced(v.clone()),
            OutcomePolicy::Sampled(seed) => Selector::Sampled(ChaCha8Rng::seed_from_u64(*seed)),
            OutcomePolicy::EnumerateAll => {
                return Err(Error::Policy("enumeration must be expanded by the caller".into()))
            }
        };
        Ok(Self {
            state,
            labels,
            selector,
            step: 0,
            probability: 1.0,
            measurements: Vec::new(),
            broadcasts: Vec::new(),
            operations: Vec::new(),
            corrections: Vec::new(),
        })
    }

    fn next_step(&mut self) -> usize {
        self.step += 1;
        self.step
    }

    pub fn label(&self, qubit: usize) -> &'static str {
        self.labels[qubit]
    }

    /// Measures one qubit; `slot` indexes the forced-outcome list, sampled
    /// runs draw in call order.
    pub fn measure(&mut self, slot: usize, m: MeasureSpec<'_>) -> Result<u8> {
        let selection = match &mut self.selector {
            Selector::Forced(v) => OutcomeSelection::Forced(v[slot]),
            Selector::Sampled(rng) => OutcomeSelection::Uniform(rng.gen()),
        };
        let result = measure_in_basis(&self.state, m.qubit, m.basis, selection)?;
        self.state = result.post_state;
        self.probability *= result.probability;
        let step = self.next_step();
        self.measurements.push(MeasurementEvent {
            step,
            party: m.party.to_string(),
            qubit: self.label(m.qubit).to_string(),
            basis: m.basis_name.to_string(),
            outcome: result.outcome,
            outcome_label: m.outcome_labels[result.outcome as usize].to_string(),
            probability: result.probability,
        });
        Ok(result.outcome)
    }

    pub fn broadcast(&mut self, party: &str, bits: &[u8]) {
        let step = self.next_step();
        self.broadcasts.push(Broadcast {
            step,
            party: party.to_string(),
            bits: bits.to_vec(),
        });
    }

    pub fn operate(
        &mut self,
        party: &str,
        gate: &str,
        op: &ComplexMatrix,
        qubits: &[usize],
        waited_for_controller: bool,
    ) -> Result<()> {
        self.state = self.state.apply_on_qubits(op, qubits)?;
        let step = self.next_step();
        self.operations.push(LocalOperation {
            step,
            party: party.to_string(),
            gate: gate.to_string(),
            qubits: qubits.iter().map(|&q| self.labels[q].to_string()).collect(),
            waited_for_controller,
        });
        Ok(())
    }

    pub fn correct(&mut self, party: &str, qubit: usize, op: CorrectionOp, resource: &str) -> Result<()> {
        self.state = self.state.apply_on_qubits(&op.matrix(), &[qubit])?;
        let step = self.next_step();
        self.corrections.push(CorrectionEvent {
            step,
            party: party.to_string(),
            qubit: self.label(qubit).to_string(),
            op,
            resource: resource.to_string(),
        });
        Ok(())
    }

    pub fn output(
        &self,
        receiver: &str,
        qubit: usize,
        target: &TargetState,
        success: bool,
    ) -> Result<DirectionOutput> {
        let rho = self.state.reduced_density(&[qubit])?;
        Ok(DirectionOutput {
            receiver: receiver.to_string(),
            qubit: self.label(qubit).to_string(),
            success,
            fidelity: fidelity_pure_vs_mixed(&target.ket(), &rho)?,
            state: DirectionOutput::state_from(&rho),
        })
    }

    pub fn finish(
        self,
        protocol: ProtocolKind,
        channel: String,
        targets: Directional<TargetState>,
        outputs: Directional<DirectionOutput>,
    ) -> ProtocolTranscript {
        let classical_bits = self.broadcasts.iter().map(|b| b.bits.len()).sum();
        ProtocolTranscript {
            protocol,
            channel,
            targets,
            measurements: self.measurements,
            broadcasts: self.broadcasts,
            operations: self.operations,
            corrections: self.corrections,
            outputs,
            probability: self.probability,
            classical_bits,
        }
    }
}

/// Runs `branch` once per policy, expanding `EnumerateAll` into every
/// forced combination and dropping the impossible ones.
pub(super) fn run_policy(
    policy: &OutcomePolicy,
    slots: usize,
    mut branch: impl FnMut(&OutcomePolicy) -> Result<ProtocolTranscript>,
) -> Result<Vec<ProtocolTranscript>> {
    match policy {
        OutcomePolicy::EnumerateAll => {
            let mut out = Vec::new();
            for code in 0..(1usize << slots) {
                let forced = (0..slots)
                    .map(|i| ((code >> (slots - 1 - i)) & 1) as u8)
                    .collect();
                match branch(&OutcomePolicy::Forced(forced)) {
                    Ok(t) => out.push(t),
                    Err(Error::ZeroProbabilityOutcome { .. }) => {}
                    Err(e) => return Err(e),
                }
            }
            Ok(out)
        }
        single => Ok(vec![branch(single)?]),
    }
}
