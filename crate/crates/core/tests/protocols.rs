use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6, TAU};

use cbrsp_core::channels::{
    enumerate_five_qubit_specs, enumerate_seven_qubit_specs, BellKind, CharlieBasis,
    FiveQubitChannelSpec, GhzFamily, GhzKind, SevenQubitChannelSpec, Sign,
};
use cbrsp_core::protocols::*;
use cbrsp_core::qmath::{tol, StateVector, C64};
use cbrsp_core::Error;
use proptest::prelude::*;

fn targets(t1: (f64, f64), t2: (f64, f64)) -> Directional<TargetState> {
    Directional {
        a_to_b: TargetState::new(t1.0, t1.1).unwrap(),
        b_to_a: TargetState::new(t2.0, t2.1).unwrap(),
    }
}

fn sample_targets() -> Vec<Directional<TargetState>> {
    vec![
        targets((FRAC_PI_4, 0.0), (FRAC_PI_3, FRAC_PI_2)),
        targets((0.3, 4.0), (1.2, 0.7)),
        targets((FRAC_PI_2, 5.9), (0.0, 2.2)),
    ]
}

fn bases() -> [CharlieBasis; 3] {
    [
        CharlieBasis::Computational,
        CharlieBasis::PlusMinus,
        CharlieBasis::Angles { theta: 1.1, phi: 0.4 },
    ]
}

fn assert_branch_probabilities_sum_to_one(runs: &[ProtocolTranscript]) {
    let total: f64 = runs.iter().map(|t| t.probability).sum();
    assert!((total - 1.0).abs() < 1e-10, "branch probabilities sum to {total}");
}

#[test]
fn probabilistic_standard_forced_scenario() {
    let t = targets((FRAC_PI_4, 0.0), (FRAC_PI_3, FRAC_PI_2));
    let policy = OutcomePolicy::forced_from_labels("q2,q2,a").unwrap();
    let run = &run_probabilistic_cbrsp(&FiveQubitChannelSpec::standard(), t, &policy).unwrap()[0];
    assert!(run.success());
    assert!((run.outputs.a_to_b.fidelity - 1.0).abs() < tol::EXACT);
    assert!((run.outputs.b_to_a.fidelity - 1.0).abs() < tol::EXACT);
    assert_eq!(run.classical_bits, 3);
    assert_eq!(run.outcomes(), vec![1, 1, 0]);
    let labels: Vec<_> = run.measurements.iter().map(|m| m.outcome_label.as_str()).collect();
    assert_eq!(labels, ["q2", "q2", "a"]);
}

#[test]
fn probabilistic_success_structure_on_every_channel() {
    for charlie in bases() {
        for spec in enumerate_five_qubit_specs(charlie) {
            for t in sample_targets() {
                let runs = run_probabilistic_cbrsp(&spec, t, &OutcomePolicy::EnumerateAll).unwrap();
                assert_branch_probabilities_sum_to_one(&runs);
                let mut p_ab = 0.0;
                let mut p_both = 0.0;
                for run in &runs {
                    let o = run.outcomes();
                    assert_eq!(run.outputs.a_to_b.success, o[0] == 1);
                    assert_eq!(run.outputs.b_to_a.success, o[1] == 1);
                    for (out, ok) in [
                        (&run.outputs.a_to_b, o[0] == 1),
                        (&run.outputs.b_to_a, o[1] == 1),
                    ] {
                        if ok {
                            assert!((out.fidelity - 1.0).abs() < tol::EXACT, "{spec} {o:?}");
                        }
                    }
                    if o[0] == 1 {
                        p_ab += run.probability;
                    }
                    if run.success() {
                        p_both += run.probability;
                    }
                    assert_eq!(run.classical_bits, 3);
                }
                assert!((p_ab - 0.5).abs() < 1e-10);
                assert!((p_both - 0.25).abs() < 1e-10);
            }
        }
    }
}

#[test]
fn probabilistic_failure_branch_leaves_wrong_state() {
    let t = targets((FRAC_PI_6, 1.0), (FRAC_PI_3, 2.0));
    let policy = OutcomePolicy::forced_from_labels("q1,q2,a").unwrap();
    let run = &run_probabilistic_cbrsp(&FiveQubitChannelSpec::standard(), t, &policy).unwrap()[0];
    assert!(!run.outputs.a_to_b.success);
    assert!(run.outputs.a_to_b.fidelity < 0.99);
    assert!(run.outputs.b_to_a.success);
}

#[test]
fn deterministic_all_branches_succeed() {
    for charlie in bases() {
        for spec in enumerate_five_qubit_specs(charlie) {
            for t in sample_targets() {
                let runs = run_deterministic_cbrsp(&spec, t, &OutcomePolicy::EnumerateAll).unwrap();
                assert_eq!(runs.len(), 32);
                assert_branch_probabilities_sum_to_one(&runs);
                for run in &runs {
                    assert!(run.success());
                    assert!((run.outputs.a_to_b.fidelity - 1.0).abs() < tol::EXACT, "{spec}");
                    assert!((run.outputs.b_to_a.fidelity - 1.0).abs() < tol::EXACT, "{spec}");
                    assert_eq!(run.classical_bits, 5);
                    // the senders' four outcomes are uniform whatever the target
                    let senders: f64 = run.measurements[..4].iter().map(|m| m.probability).product();
                    assert!((senders - 1.0 / 16.0).abs() < 1e-10);
                }
            }
        }
    }
}

#[test]
fn deterministic_records_cnot_and_conditional_phase_gate() {
    let t = targets((0.4, 1.3), (1.0, 2.5));
    let policy = OutcomePolicy::forced_from_labels("u0,v1,u1,v0,b").unwrap();
    let run = &run_deterministic_cbrsp(&FiveQubitChannelSpec::standard(), t, &policy).unwrap()[0];
    let gates: Vec<_> = run.operations.iter().map(|o| (o.party.as_str(), o.gate.as_str())).collect();
    assert_eq!(gates, [("Alice", "CNOT"), ("Alice", "Π"), ("Bob", "CNOT")]);
    assert_eq!(run.broadcasts[0].bits, vec![0, 1]);
    assert_eq!(run.broadcasts[1].bits, vec![1, 0]);
}

#[test]
fn joint_all_branches_succeed_for_both_families() {
    for family in [GhzFamily::LowAncilla, GhzFamily::HighAncilla] {
        for spec in enumerate_seven_qubit_specs(family, CharlieBasis::PlusMinus) {
            for t in sample_targets() {
                let runs =
                    run_cjbrsp(&spec, t, &KnowledgeSplit::default(), &OutcomePolicy::EnumerateAll)
                        .unwrap();
                assert_branch_probabilities_sum_to_one(&runs);
                for run in &runs {
                    assert!((run.outputs.a_to_b.fidelity - 1.0).abs() < tol::EXACT, "{spec}");
                    assert!((run.outputs.b_to_a.fidelity - 1.0).abs() < tol::EXACT, "{spec}");
                    assert_eq!(run.classical_bits, 5);
                    assert!(run.operations.iter().all(|o| !o.waited_for_controller));
                }
            }
        }
    }
}

#[test]
fn joint_mixed_family_channel_defers_phase_gate() {
    let g = |x, s| GhzKind::new(x, s).unwrap();
    let spec = SevenQubitChannelSpec::new(
        [g(0, Sign::Plus), g(1, Sign::Minus), g(3, Sign::Plus), g(2, Sign::Minus)],
        Sign::Plus,
        CharlieBasis::Computational,
    )
    .unwrap();
    assert!(!spec.family_known(0) && !spec.family_known(1));
    let t = targets((0.7, 3.3), (1.4, 0.2));
    let runs = run_cjbrsp(&spec, t, &KnowledgeSplit::default(), &OutcomePolicy::EnumerateAll).unwrap();
    assert_branch_probabilities_sum_to_one(&runs);
    for run in &runs {
        assert!((run.outputs.a_to_b.fidelity - 1.0).abs() < tol::EXACT);
        assert!((run.outputs.b_to_a.fidelity - 1.0).abs() < tol::EXACT);
        // Charlie speaks before the first phase measurement
        let charlie = run.measurements.iter().position(|m| m.party == "Charlie").unwrap();
        let first_phase = run.measurements.iter().position(|m| m.party == "Alice2").unwrap();
        assert!(charlie < first_phase);
        assert!(run.operations.iter().all(|o| o.waited_for_controller));
    }
}

#[test]
fn joint_uses_the_knowledge_split_names() {
    let spec = SevenQubitChannelSpec::from_five(&FiveQubitChannelSpec::standard(), (0, 0)).unwrap();
    let split = KnowledgeSplit {
        a_to_b: SenderRoles { amplitude: "Alice".into(), phase: "Dana".into() },
        b_to_a: SenderRoles { amplitude: "Bob".into(), phase: "Eve".into() },
    };
    let t = targets((0.5, 0.5), (0.6, 0.6));
    let run = &run_cjbrsp(&spec, t, &split, &OutcomePolicy::Sampled(3)).unwrap()[0];
    let parties: Vec<_> = run.broadcasts.iter().map(|b| b.party.as_str()).collect();
    assert_eq!(parties, ["Alice", "Dana", "Bob", "Eve", "Charlie"]);
}

#[test]
fn sampled_runs_are_reproducible() {
    let t = targets((0.9, 1.9), (0.2, 3.1));
    let spec = FiveQubitChannelSpec::standard();
    let a = run_deterministic_cbrsp(&spec, t, &OutcomePolicy::Sampled(42)).unwrap();
    let b = run_deterministic_cbrsp(&spec, t, &OutcomePolicy::Sampled(42)).unwrap();
    assert_eq!(a, b);
    let outcomes: std::collections::HashSet<_> = (0..40)
        .map(|seed| run_probabilistic_cbrsp(&spec, t, &OutcomePolicy::Sampled(seed)).unwrap()[0].outcomes())
        .collect();
    assert!(outcomes.len() > 1);
}

#[test]
fn policy_errors() {
    let t = targets((0.9, 1.9), (0.2, 3.1));
    let spec = FiveQubitChannelSpec::standard();
    assert!(matches!(
        run_probabilistic_cbrsp(&spec, t, &OutcomePolicy::Forced(vec![1, 1])),
        Err(Error::Policy(_))
    ));
    assert!(matches!(
        run_probabilistic_cbrsp(&spec, t, &OutcomePolicy::Forced(vec![1, 2, 0])),
        Err(Error::Policy(_))
    ));
}

/// Independent oracle: the Pauli that maps the receiver's conditional state
/// onto the target, found by trying all four.
fn best_correction(run: &ProtocolTranscript, direction: Direction, target: &TargetState) -> CorrectionOp {
    let out = run.outputs.get(direction);
    let applied = run
        .corrections
        .iter()
        .find(|c| c.qubit == out.qubit)
        .map(|c| c.op)
        .unwrap_or(CorrectionOp::I);
    // undo the applied correction, then search
    let rho = |s: &QubitState| {
        cbrsp_core::qmath::ComplexMatrix::from_rows([
            [C64::new(s[0][0][0], s[0][0][1]), C64::new(s[0][1][0], s[0][1][1])],
            [C64::new(s[1][0][0], s[1][0][1]), C64::new(s[1][1][0], s[1][1][1])],
        ])
    };
    let m = applied.matrix();
    let raw = m.adjoint().matmul(&rho(&out.state)).unwrap().matmul(&m).unwrap();
    let ket = target.ket();
    let fid = |op: CorrectionOp| {
        let u = op.matrix();
        let r = u.matmul(&raw).unwrap().matmul(&u.adjoint()).unwrap();
        let v = ket.amplitudes();
        let rv = r.mul_vec(v).unwrap();
        v.iter().zip(&rv).map(|(a, b)| a.conj() * b).sum::<C64>().re
    };
    [CorrectionOp::I, CorrectionOp::X, CorrectionOp::IY, CorrectionOp::Z]
        .into_iter()
        .find(|&op| (fid(op) - 1.0).abs() < 1e-10)
        .expect("some Pauli restores the target")
}

#[test]
fn table1_matches_pauli_search() {
    // ψ1 runs over all four Bell states on the A→B link
    let t = targets((0.37, 2.1), (1.1, 5.0));
    for bell in BellKind::ALL {
        let other = BellKind::ALL.into_iter().find(|&b| b != bell).unwrap();
        let spec = FiveQubitChannelSpec::new([bell, bell, other, other], Sign::Plus, CharlieBasis::Computational).unwrap();
        let run = &run_probabilistic_cbrsp(&spec, t, &OutcomePolicy::Forced(vec![1, 1, 0])).unwrap()[0];
        assert_eq!(best_correction(run, Direction::AToB, &t.a_to_b), table1_correction(bell), "{bell}");
        assert_eq!(best_correction(run, Direction::BToA, &t.b_to_a), table1_correction(bell), "{bell}");
    }
}

#[test]
fn table2_matches_pauli_search() {
    let t = targets((0.37, 2.1), (1.1, 5.0));
    for bell in BellKind::ALL {
        let other = BellKind::ALL.into_iter().find(|&b| b != bell).unwrap();
        let spec = FiveQubitChannelSpec::new([bell, bell, other, other], Sign::Plus, CharlieBasis::Computational).unwrap();
        for u in 0..2u8 {
            for v in 0..2u8 {
                let policy = OutcomePolicy::Forced(vec![u, v, u, v, 0]);
                let run = &run_deterministic_cbrsp(&spec, t, &policy).unwrap()[0];
                let expected = table2_correction(bell, u, v);
                assert_eq!(best_correction(run, Direction::AToB, &t.a_to_b), expected, "{bell} u{u} v{v}");
                assert_eq!(best_correction(run, Direction::BToA, &t.b_to_a), expected, "{bell} u{u} v{v}");
            }
        }
    }
}

#[test]
fn table3_matches_pauli_search() {
    let t = targets((0.81, 0.3), (0.2, 4.4));
    for ghz in GhzKind::all() {
        let other = GhzKind::all().find(|g| g.family() == ghz.family() && *g != ghz).unwrap();
        let spec = SevenQubitChannelSpec::new([ghz, ghz, other, other], Sign::Plus, CharlieBasis::Computational).unwrap();
        for u in 0..2u8 {
            for v in 0..2u8 {
                let policy = OutcomePolicy::Forced(vec![u, v, u, v, 0]);
                let run = &run_cjbrsp(&spec, t, &KnowledgeSplit::default(), &policy).unwrap()[0];
                let expected = table3_correction(ghz, u, v);
                assert_eq!(best_correction(run, Direction::AToB, &t.a_to_b), expected, "{ghz} u{u} v{v}");
            }
        }
    }
}

#[test]
fn transcript_round_trips_through_json() {
    let t = targets((0.9, 1.9), (0.2, 3.1));
    let run = run_deterministic_cbrsp(&FiveQubitChannelSpec::standard(), t, &OutcomePolicy::Sampled(5)).unwrap();
    let json = serde_json::to_string(&run[0]).unwrap();
    assert!(json.contains("\"a_to_b\""));
    let back: ProtocolTranscript = serde_json::from_str(&json).unwrap();
    assert_eq!(back, run[0]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn deterministic_fidelity_is_one_for_any_target(
        t1 in 0.0..FRAC_PI_2, p1 in 0.0..TAU, t2 in 0.0..FRAC_PI_2, p2 in 0.0..TAU, seed in any::<u64>()
    ) {
        let t = targets((t1, p1), (t2, p2));
        let run = &run_deterministic_cbrsp(&FiveQubitChannelSpec::standard(), t, &OutcomePolicy::Sampled(seed)).unwrap()[0];
        prop_assert!((run.outputs.a_to_b.fidelity - 1.0).abs() < tol::EXACT);
        prop_assert!((run.outputs.b_to_a.fidelity - 1.0).abs() < tol::EXACT);
    }

    #[test]
    fn joint_fidelity_is_one_for_any_target(
        t1 in 0.0..FRAC_PI_2, p1 in 0.0..TAU, t2 in 0.0..FRAC_PI_2, p2 in 0.0..TAU, seed in any::<u64>(), hi in any::<bool>()
    ) {
        let anc = u8::from(hi);
        let spec = SevenQubitChannelSpec::from_five(&FiveQubitChannelSpec::standard(), (anc, 1 - anc)).unwrap();
        let t = targets((t1, p1), (t2, p2));
        let run = &run_cjbrsp(&spec, t, &KnowledgeSplit::default(), &OutcomePolicy::Sampled(seed)).unwrap()[0];
        prop_assert!((run.outputs.a_to_b.fidelity - 1.0).abs() < tol::EXACT);
        prop_assert!((run.outputs.b_to_a.fidelity - 1.0).abs() < tol::EXACT);
    }
}

#[test]
fn target_ket_matches_amplitudes() {
    let t = TargetState::new(FRAC_PI_6, 1.0).unwrap();
    let expected = StateVector::single([C64::new(0.5, 0.0), C64::from_polar(3f64.sqrt() / 2.0, 1.0)]).unwrap();
    assert!((t.ket().overlap(&expected).unwrap() - 1.0).abs() < tol::EXACT);
}
