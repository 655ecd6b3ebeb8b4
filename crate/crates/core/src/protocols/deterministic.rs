use super::engine::{run_policy, MeasureSpec, Session};
use super::transcript::{Directional, ProtocolKind, ProtocolTranscript};
use super::{amplitude_basis, phase_basis, phase_gate, table2_correction, OutcomePolicy, TargetState};
use crate::channels::{make_five_qubit_channel, seven, FiveQubitChannelSpec};
use crate::error::Result;
use crate::qmath::{gates, StateVector};

const SLOTS: usize = 5;

/// Deterministic controlled bidirectional RSP: each sender adds a `|0>`
/// ancilla, CNOTs onto it and measures amplitude then phase.
///
/// Measurement slots are `[u_A, v_A, u_B, v_B, C1]`. Every branch succeeds.
pub fn run_deterministic_cbrsp(
    spec: &FiveQubitChannelSpec,
    targets: Directional<TargetState>,
    policy: &OutcomePolicy,
) -> Result<Vec<ProtocolTranscript>> {
    // S1 R1 S2 R2 C1 S1' S2'  ->  S1 S1' R1 S2 S2' R2 C1
    let extended = make_five_qubit_channel(spec)?
        .tensor(&StateVector::from_bits("00")?)?
        .permute(&[0, 5, 1, 2, 6, 3, 4])?;

    run_policy(policy, SLOTS, |branch| {
        let mut s = Session::new(extended.clone(), &seven::LABELS, branch, SLOTS)?;
        let cnot = gates::cnot();

        let senders = [
            ("Alice", seven::S1, seven::S1P, &targets.a_to_b, "A→B"),
            ("Bob", seven::S2, seven::S2P, &targets.b_to_a, "B→A"),
        ];
        let mut outcomes = [(0u8, 0u8); 2];
        for (i, (party, q, ancilla, target, dir)) in senders.into_iter().enumerate() {
            s.operate(party, "CNOT", &cnot, &[q, ancilla], false)?;
            let u = s.measure(2 * i, MeasureSpec {
                party,
                qubit: q,
                basis: &amplitude_basis(target),
                basis_name: &format!("amplitude({dir})"),
                outcome_labels: ["u0", "u1"],
            })?;
            if u == 0 {
                s.operate(party, "Π", &phase_gate(target), &[ancilla], false)?;
            }
            let v = s.measure(2 * i + 1, MeasureSpec {
                party,
                qubit: ancilla,
                basis: &phase_basis(target),
                basis_name: &format!("phase({dir})"),
                outcome_labels: ["v0", "v1"],
            })?;
            s.broadcast(party, &[u, v]);
            outcomes[i] = (u, v);
        }

        let charlie_basis = spec.charlie.basis();
        let basis_name = spec.charlie.to_string();
        let c = s.measure(4, MeasureSpec {
            party: "Charlie",
            qubit: seven::C1,
            basis: &charlie_basis,
            basis_name: &basis_name,
            outcome_labels: ["a", "b"],
        })?;
        s.broadcast("Charlie", &[c]);

        let (bell_ab, bell_ba) = spec.revealed(c);
        let ((ua, va), (ub, vb)) = (outcomes[0], outcomes[1]);
        s.correct("Bob", seven::R1, table2_correction(bell_ab, ua, va), bell_ab.label())?;
        s.correct("Alice", seven::R2, table2_correction(bell_ba, ub, vb), bell_ba.label())?;

        let outputs = Directional {
            a_to_b: s.output("Bob", seven::R1, &targets.a_to_b, true)?,
            b_to_a: s.output("Alice", seven::R2, &targets.b_to_a, true)?,
        };
        Ok(s.finish(ProtocolKind::Deterministic, spec.canonical(), targets, outputs))
    })
}
