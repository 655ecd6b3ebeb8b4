use super::engine::{run_policy, MeasureSpec, Session};
use super::transcript::{Directional, ProtocolKind, ProtocolTranscript};
use super::{rsp_basis, table1_correction, OutcomePolicy, TargetState};
use crate::channels::{five, make_five_qubit_channel, FiveQubitChannelSpec};
use crate::error::Result;

const SLOTS: usize = 3;

/// Probabilistic controlled bidirectional RSP over a five-qubit channel.
///
/// Measurement slots are `[S1, S2, C1]` with outcome 0 = `q1` / `a` and
/// 1 = `q2` / `b`. A direction succeeds exactly when its sender obtains `q2`.
pub fn run_probabilistic_cbrsp(
    spec: &FiveQubitChannelSpec,
    targets: Directional<TargetState>,
    policy: &OutcomePolicy,
) -> Result<Vec<ProtocolTranscript>> {
    let channel = make_five_qubit_channel(spec)?;
    run_policy(policy, SLOTS, |branch| {
        let mut s = Session::new(channel.clone(), &five::LABELS, branch, SLOTS)?;

        let basis_ab = rsp_basis(&targets.a_to_b);
        let sa = s.measure(0, MeasureSpec {
            party: "Alice",
            qubit: five::S1,
            basis: &basis_ab,
            basis_name: "rsp(A→B)",
            outcome_labels: ["q1", "q2"],
        })?;
        s.broadcast("Alice", &[sa]);

        let basis_ba = rsp_basis(&targets.b_to_a);
        let sb = s.measure(1, MeasureSpec {
            party: "Bob",
            qubit: five::S2,
            basis: &basis_ba,
            basis_name: "rsp(B→A)",
            outcome_labels: ["q1", "q2"],
        })?;
        s.broadcast("Bob", &[sb]);

        let charlie_basis = spec.charlie.basis();
        let basis_name = spec.charlie.to_string();
        let c = s.measure(2, MeasureSpec {
            party: "Charlie",
            qubit: five::C1,
            basis: &charlie_basis,
            basis_name: &basis_name,
            outcome_labels: ["a", "b"],
        })?;
        s.broadcast("Charlie", &[c]);

        let (bell_ab, bell_ba) = spec.revealed(c);
        if sa == 1 {
            s.correct("Bob", five::R1, table1_correction(bell_ab), bell_ab.label())?;
        }
        if sb == 1 {
            s.correct("Alice", five::R2, table1_correction(bell_ba), bell_ba.label())?;
        }

        let outputs = Directional {
            a_to_b: s.output("Bob", five::R1, &targets.a_to_b, sa == 1)?,
            b_to_a: s.output("Alice", five::R2, &targets.b_to_a, sb == 1)?,
        };
        Ok(s.finish(ProtocolKind::Probabilistic, spec.canonical(), targets, outputs))
    })
}
