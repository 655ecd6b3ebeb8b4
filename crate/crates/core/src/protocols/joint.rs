use serde::{Deserialize, Serialize};

use super::engine::{run_policy, MeasureSpec, Session};
use super::transcript::{Direction, Directional, ProtocolKind, ProtocolTranscript};
use super::{amplitude_basis, phase_basis, phase_gate, table3_correction, OutcomePolicy, TargetState};
use crate::channels::{make_seven_qubit_channel, seven, GhzFamily, SevenQubitChannelSpec};
use crate::error::Result;

const SLOTS: usize = 5;

/// Who knows what about one direction's target: the amplitude sender knows
/// only `θ`, the phase sender only `φ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SenderRoles {
    pub amplitude: String,
    pub phase: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnowledgeSplit {
    pub a_to_b: SenderRoles,
    pub b_to_a: SenderRoles,
}

impl Default for KnowledgeSplit {
    fn default() -> Self {
        let roles = |a: &str, p: &str| SenderRoles {
            amplitude: a.to_string(),
            phase: p.to_string(),
        };
        Self {
            a_to_b: roles("Alice", "Alice2"),
            b_to_a: roles("Bob", "Bob2"),
        }
    }
}

struct Leg<'a> {
    direction: Direction,
    roles: &'a SenderRoles,
    sender: usize,
    ancilla: usize,
    receiver_qubit: usize,
    receiver: &'static str,
    target: &'a TargetState,
    tag: &'static str,
}

/// Controlled joint bidirectional RSP over a seven-qubit GHZ channel.
///
/// Measurement slots are `[u_A, v_A, u_B, v_B, C1]`. When the two controller
/// branches put a direction's GHZ state in different families, that
/// direction's phase sender waits for Charlie's bit before deciding on `Π`;
/// Charlie then measures before that phase measurement.
pub fn run_cjbrsp(
    spec: &SevenQubitChannelSpec,
    targets: Directional<TargetState>,
    split: &KnowledgeSplit,
    policy: &OutcomePolicy,
) -> Result<Vec<ProtocolTranscript>> {
    let channel = make_seven_qubit_channel(spec)?;
    let legs = [
        Leg {
            direction: Direction::AToB,
            roles: &split.a_to_b,
            sender: seven::S1,
            ancilla: seven::S1P,
            receiver_qubit: seven::R1,
            receiver: "Bob",
            target: &targets.a_to_b,
            tag: "A→B",
        },
        Leg {
            direction: Direction::BToA,
            roles: &split.b_to_a,
            sender: seven::S2,
            ancilla: seven::S2P,
            receiver_qubit: seven::R2,
            receiver: "Alice",
            target: &targets.b_to_a,
            tag: "B→A",
        },
    ];

    run_policy(policy, SLOTS, |branch| {
        let mut s = Session::new(channel.clone(), &seven::LABELS, branch, SLOTS)?;
        let charlie_basis = spec.charlie.basis();
        let charlie_name = spec.charlie.to_string();
        let mut charlie: Option<u8> = None;
        let mut outcomes = [(0u8, 0u8); 2];

        // Charlie keeps the last slot even when speaking early, so forced
        // outcome lists mean the same thing on every channel.
        let measure_charlie = |s: &mut Session| -> Result<u8> {
            s.measure(
                SLOTS - 1,
                MeasureSpec {
                    party: "Charlie",
                    qubit: seven::C1,
                    basis: &charlie_basis,
                    basis_name: &charlie_name,
                    outcome_labels: ["a", "b"],
                },
            )
        };

        for (i, leg) in legs.iter().enumerate() {
            let u = s.measure(2 * i, MeasureSpec {
                party: &leg.roles.amplitude,
                qubit: leg.sender,
                basis: &amplitude_basis(leg.target),
                basis_name: &format!("amplitude({})", leg.tag),
                outcome_labels: ["u0", "u1"],
            })?;
            s.broadcast(&leg.roles.amplitude, &[u]);

            let d = leg.direction.index();
            let waited = !spec.family_known(d);
            let family = if waited {
                let c = match charlie {
                    Some(c) => c,
                    None => {
                        let c = measure_charlie(&mut s)?;
                        s.broadcast("Charlie", &[c]);
                        charlie = Some(c);
                        c
                    }
                };
                revealed_family(spec, c, d)
            } else {
                revealed_family(spec, 0, d)
            };
            let apply_pi = matches!(
                (u, family),
                (0, GhzFamily::LowAncilla) | (1, GhzFamily::HighAncilla)
            );
            if apply_pi {
                s.operate(&leg.roles.phase, "Π", &phase_gate(leg.target), &[leg.ancilla], waited)?;
            }
            let v = s.measure(2 * i + 1, MeasureSpec {
                party: &leg.roles.phase,
                qubit: leg.ancilla,
                basis: &phase_basis(leg.target),
                basis_name: &format!("phase({})", leg.tag),
                outcome_labels: ["v0", "v1"],
            })?;
            s.broadcast(&leg.roles.phase, &[v]);
            outcomes[i] = (u, v);
        }

        let c = match charlie {
            Some(c) => c,
            None => {
                let c = measure_charlie(&mut s)?;
                s.broadcast("Charlie", &[c]);
                c
            }
        };

        let (ghz_ab, ghz_ba) = spec.revealed(c);
        for (leg, (ghz, (u, v))) in legs.iter().zip([(ghz_ab, outcomes[0]), (ghz_ba, outcomes[1])]) {
            s.correct(leg.receiver, leg.receiver_qubit, table3_correction(ghz, u, v), &ghz.label())?;
        }

        let outputs = Directional {
            a_to_b: s.output(legs[0].receiver, legs[0].receiver_qubit, legs[0].target, true)?,
            b_to_a: s.output(legs[1].receiver, legs[1].receiver_qubit, legs[1].target, true)?,
        };
        Ok(s.finish(ProtocolKind::Joint, spec.canonical(), targets, outputs))
    })
}

fn revealed_family(spec: &SevenQubitChannelSpec, charlie: u8, direction: usize) -> GhzFamily {
    let (ab, ba) = spec.revealed(charlie);
    if direction == 0 {
        ab.family()
    } else {
        ba.family()
    }
}
