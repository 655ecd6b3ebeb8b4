//! Noisy probabilistic protocol: correlated damping, post-selection on the
//! successful branch, reduction to the receivers and fidelity. Also the
//! published closed forms and the tooling that compares the two.
//!
//! The density-matrix pipeline is the reference. Closed forms are treated
//! as claims to be checked, and disagreements are reported with residuals.

mod closed_form;
mod sweep;

pub use closed_form::{closed_form_f_ad, closed_form_f_pd, closed_form_fidelity, closed_form_rho_out};
pub use sweep::{
    compare_report, compare_rho_out, parse_range, sweep, ComparisonReport, FidelityRecord,
    MatrixResidual, RhoComparison, SweepGrid, Verdict,
};

use crate::channels::{five, make_five_qubit_channel, FiveQubitChannelSpec};
use crate::error::{Error, Result};
use crate::noise::{apply_grouped_noise, KrausSet, NoiseGrouping, NoiseModel};
use crate::protocols::{rsp_basis, table1_lookup, Directional, TargetState};
use crate::qmath::{partial_trace, tol, DensityMatrix};

/// Probability of the post-selected branch without noise: each sender and
/// the controller see a uniformly random outcome.
pub const NOISELESS_SELECTION_PROBABILITY: f64 = 0.125;

/// Outcomes kept by the post-selection: sender outcomes are 0 = `q1`,
/// 1 = `q2`; controller 0 = `|a>`, 1 = `|b>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PostSelection {
    pub sender_a_to_b: u8,
    pub sender_b_to_a: u8,
    pub controller: u8,
}

impl Default for PostSelection {
    fn default() -> Self {
        Self {
            sender_a_to_b: 1,
            sender_b_to_a: 1,
            controller: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NoisyRunConfig {
    pub channel: FiveQubitChannelSpec,
    pub targets: Directional<TargetState>,
    pub model: NoiseModel,
    pub eta: f64,
    pub post_selection: PostSelection,
}

impl NoisyRunConfig {
    /// Noise-study channel, both senders on `q2`, controller on `|b>`.
    pub fn new(targets: Directional<TargetState>, model: NoiseModel, eta: f64) -> Self {
        Self {
            channel: FiveQubitChannelSpec::noise_study(),
            targets,
            model,
            eta,
            post_selection: PostSelection::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NoisyOutcome {
    /// Corrected, normalized state of `(R1, R2)`.
    pub rho_out: DensityMatrix,
    /// `<T|ρ_out|T>` with `|T> = target(A→B) ⊗ target(B→A)`.
    pub fidelity: f64,
    /// `tr(U ρ_k U†)`, including the trace lost to correlated noise.
    pub selection_probability: f64,
    /// `tr(ρ_k)` right after the noise.
    pub noise_trace: f64,
}

impl NoisyOutcome {
    /// Fidelity weighted by how much of the noiseless selection probability
    /// survives: `F · p_sel / p_sel(η = 0)`. This is `<T|ρ|T>` on the
    /// post-selected state before normalization, rescaled so that it is 1
    /// without noise.
    pub fn selection_weighted_fidelity(&self) -> f64 {
        self.fidelity * self.selection_probability / NOISELESS_SELECTION_PROBABILITY
    }
}

pub fn noisy_probabilistic_fidelity(config: &NoisyRunConfig) -> Result<NoisyOutcome> {
    let spec = &config.channel;
    let sel = config.post_selection;
    let targets = &config.targets;

    let rho = make_five_qubit_channel(spec)?.to_density();
    let kraus = KrausSet::new(config.model, config.eta)?;
    let rho_k = apply_grouped_noise(&rho, &kraus, &NoiseGrouping::default_correlated())?;
    let noise_trace = rho_k.trace();

    let projected = rho_k
        .conjugate_by(&rsp_basis(&targets.a_to_b).projector(sel.sender_a_to_b), &[five::S1])?
        .conjugate_by(&rsp_basis(&targets.b_to_a).projector(sel.sender_b_to_a), &[five::S2])?
        .conjugate_by(&spec.charlie.basis().projector(sel.controller), &[five::C1])?;
    let selection_probability = projected.trace();
    if selection_probability < tol::FORCED_PROBABILITY {
        return Err(Error::ImpossiblePostSelection(selection_probability));
    }

    let (bell_ab, bell_ba) = spec.revealed(sel.controller);
    let fix_ab = table1_lookup(bell_ab, sel.sender_a_to_b)?;
    let fix_ba = table1_lookup(bell_ba, sel.sender_b_to_a)?;

    let reduced = partial_trace(&projected.normalize()?, &[five::R1, five::R2])?;
    let rho_out = reduced
        .conjugate_by(&fix_ab.matrix(), &[0])?
        .conjugate_by(&fix_ba.matrix(), &[1])?;
    let target = targets.a_to_b.ket().tensor(&targets.b_to_a.ket())?;
    let fidelity = rho_out.expectation(&target)?.re;

    Ok(NoisyOutcome {
        rho_out,
        fidelity,
        selection_probability,
        noise_trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_4, FRAC_PI_8};

    fn config(t1: f64, t2: f64, p1: f64, p2: f64, model: NoiseModel, eta: f64) -> NoisyRunConfig {
        NoisyRunConfig::new(
            Directional {
                a_to_b: TargetState::new(t1, p1).unwrap(),
                b_to_a: TargetState::new(t2, p2).unwrap(),
            },
            model,
            eta,
        )
    }

    #[test]
    fn noiseless_branch_is_perfect() {
        for model in [NoiseModel::Ad, NoiseModel::Pd] {
            let out = noisy_probabilistic_fidelity(&config(0.3, 1.2, 0.4, 5.0, model, 0.0)).unwrap();
            assert!((out.fidelity - 1.0).abs() < tol::EXACT);
            assert!((out.selection_probability - 0.125).abs() < tol::EXACT);
            assert!((out.noise_trace - 1.0).abs() < tol::EXACT);
        }
    }

    #[test]
    fn controller_a_branch_uses_iy_corrections() {
        let mut cfg = config(0.3, 1.2, 0.4, 5.0, NoiseModel::Ad, 0.0);
        cfg.post_selection.controller = 0;
        let out = noisy_probabilistic_fidelity(&cfg).unwrap();
        assert!((out.fidelity - 1.0).abs() < tol::EXACT);
    }

    #[test]
    fn q1_post_selection_is_rejected() {
        let mut cfg = config(0.3, 1.2, 0.4, 5.0, NoiseModel::Pd, 0.2);
        cfg.post_selection.sender_a_to_b = 0;
        assert!(matches!(noisy_probabilistic_fidelity(&cfg), Err(Error::ProtocolFails(_))));
    }

    #[test]
    fn amplitude_damping_pipeline_values() {
        let out = noisy_probabilistic_fidelity(&config(FRAC_PI_4, FRAC_PI_4, 0.0, 0.0, NoiseModel::Ad, 0.5)).unwrap();
        assert!((out.fidelity - 0.75).abs() < tol::CLOSED_FORM);
        assert!((out.selection_probability - 0.046875).abs() < tol::EXACT);
        assert!((out.noise_trace - 0.40625).abs() < tol::EXACT);
        let out = noisy_probabilistic_fidelity(&config(FRAC_PI_8, FRAC_PI_4, 0.0, 0.0, NoiseModel::Ad, 0.25)).unwrap();
        assert!((out.fidelity - 0.919718972513).abs() < 1e-11);
    }

    #[test]
    fn phase_damping_pipeline_values() {
        let out = noisy_probabilistic_fidelity(&config(FRAC_PI_4, FRAC_PI_4, 0.0, 0.0, NoiseModel::Pd, 0.5)).unwrap();
        assert!((out.fidelity - 0.55).abs() < tol::EXACT);
        assert!((out.selection_probability - 0.01953125).abs() < tol::EXACT);
        let out = noisy_probabilistic_fidelity(&config(FRAC_PI_4, FRAC_PI_4, 0.0, 0.0, NoiseModel::Pd, 1.0)).unwrap();
        assert!((out.fidelity - 0.25).abs() < tol::EXACT);
    }

    #[test]
    fn output_state_is_a_density_matrix() {
        let out = noisy_probabilistic_fidelity(&config(0.5, 1.0, 2.0, 3.0, NoiseModel::Pd, 0.7)).unwrap();
        assert!(out.rho_out.is_hermitian());
        assert!(out.rho_out.is_positive_semidefinite());
        assert!((out.rho_out.trace() - 1.0).abs() < tol::EXACT);
    }
}
