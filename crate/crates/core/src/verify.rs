//! Named verification suites. Each criterion produces a pass/fail line plus
//! details; mismatches are reported, never hidden.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_8, TAU};
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::analysis::{
    closed_form_f_ad, closed_form_f_pd, closed_form_rho_out, compare_report, compare_rho_out,
    noisy_probabilistic_fidelity, parse_range, sweep, NoisyRunConfig, SweepGrid, Verdict,
    NOISELESS_SELECTION_PROBABILITY,
};
use crate::channels::{
    enumerate_five_qubit_specs, enumerate_seven_qubit_specs, make_five_qubit_channel, CharlieBasis,
    FiveQubitChannelSpec, GhzFamily, GhzKind, SevenQubitChannelSpec, Sign,
};
use crate::error::{Error, Result};
use crate::noise::{apply_grouped_noise, completeness_check, KrausSet, NoiseGrouping, NoiseModel};
use crate::protocols::{
    run_cjbrsp, run_deterministic_cbrsp, run_probabilistic_cbrsp, Directional, KnowledgeSplit,
    OutcomePolicy, ProtocolTranscript, TargetState,
};
use crate::qmath::tol;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Enumeration,
    Tables,
    Cptp,
    ClosedForm,
    All,
}

impl Suite {
    pub fn criteria(self) -> &'static [u8] {
        match self {
            Suite::Enumeration => &[1],
            Suite::Tables => &[2],
            Suite::Cptp => &[3, 7],
            Suite::ClosedForm => &[4, 5, 6, 8],
            Suite::All => &[1, 2, 3, 4, 5, 6, 7, 8],
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "enumeration" => Ok(Suite::Enumeration),
            "tables" => Ok(Suite::Tables),
            "cptp" => Ok(Suite::Cptp),
            "closedform" => Ok(Suite::ClosedForm),
            "all" => Ok(Suite::All),
            other => Err(Error::Parse(format!(
                "unknown suite {other:?}; expected closedform, tables, enumeration, cptp or all"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub id: u8,
    pub name: String,
    pub passed: bool,
    /// Passed only because the mismatching entries were reported, which the
    /// criterion allows.
    pub passed_with_report: bool,
    pub summary: String,
    pub details: Vec<String>,
    pub elapsed_s: f64,
    pub budget_s: f64,
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = match (self.passed, self.passed_with_report) {
            (true, false) => "PASS",
            (true, true) => "PASS (mismatches reported)",
            (false, _) => "FAIL",
        };
        write!(
            f,
            "criterion {} [{}]: {status}; {} ({:.2}s of {:.0}s)",
            self.id, self.name, self.summary, self.elapsed_s, self.budget_s
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub suite: Suite,
    pub criteria: Vec<CriterionReport>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.criteria.iter().all(|c| c.passed)
    }
}

pub fn run_suite(suite: Suite) -> Result<VerifyReport> {
    let criteria = suite
        .criteria()
        .iter()
        .map(|&id| run_criterion(id))
        .collect::<Result<Vec<_>>>()?;
    Ok(VerifyReport { suite, criteria })
}

pub fn run_criterion(id: u8) -> Result<CriterionReport> {
    let start = Instant::now();
    let mut draft = match id {
        1 => enumeration()?,
        2 => noiseless_protocols()?,
        3 => kraus_completeness()?,
        4 => closed_form_agreement()?,
        5 => noise_curves()?,
        6 => phase_independence()?,
        7 => trace_structure()?,
        8 => output_state_check()?,
        other => return Err(Error::Parse(format!("no criterion {other}"))),
    };
    let elapsed = start.elapsed();
    let budget = Duration::from_secs_f64(draft.budget_s);
    if elapsed > budget {
        draft.passed = false;
        draft.details.push(format!("time budget exceeded: {:.2}s", elapsed.as_secs_f64()));
    }
    draft.elapsed_s = elapsed.as_secs_f64();
    Ok(draft)
}

fn report(id: u8, name: &str, budget_s: f64, passed: bool, summary: String, details: Vec<String>) -> CriterionReport {
    CriterionReport {
        id,
        name: name.to_string(),
        passed,
        passed_with_report: false,
        summary,
        details,
        elapsed_s: 0.0,
        budget_s,
    }
}

fn charlie_bases() -> [CharlieBasis; 3] {
    [
        CharlieBasis::Computational,
        CharlieBasis::PlusMinus,
        CharlieBasis::Angles { theta: 1.1, phi: 0.4 },
    ]
}

fn enumeration() -> Result<CriterionReport> {
    let mut details = Vec::new();
    let mut ok = true;
    for basis in charlie_bases() {
        let specs = enumerate_five_qubit_specs(basis);
        let valid = specs.iter().filter(|s| s.validate().is_ok()).count();
        ok &= specs.len() == 144 && valid == 144;
        details.push(format!("five-qubit, controller basis {basis}: {} specs, {valid} valid", specs.len()));
    }
    for family in [GhzFamily::LowAncilla, GhzFamily::HighAncilla] {
        let specs = enumerate_seven_qubit_specs(family, CharlieBasis::Computational);
        let valid = specs.iter().filter(|s| s.validate().is_ok()).count();
        ok &= specs.len() == 144 && valid == 144;
        details.push(format!("seven-qubit, {family:?}: {} specs, {valid} valid", specs.len()));
    }
    Ok(report(1, "channel enumeration", 1.0, ok, "144 specs per basis and per family".into(), details))
}

fn random_targets(rng: &mut ChaCha8Rng) -> Result<Directional<TargetState>> {
    let mut one = || TargetState::new(rng.gen_range(0.0..=FRAC_PI_2), rng.gen_range(0.0..TAU));
    Ok(Directional {
        a_to_b: one()?,
        b_to_a: one()?,
    })
}

fn perfect(run: &ProtocolTranscript) -> bool {
    (run.outputs.a_to_b.fidelity - 1.0).abs() < tol::EXACT && (run.outputs.b_to_a.fidelity - 1.0).abs() < tol::EXACT
}

/// Specs whose controller branches disagree on a GHZ family in at least one
/// direction, spread over the space of such channels.
pub fn mixed_seven_qubit_specs(count: usize) -> Vec<SevenQubitChannelSpec> {
    let all: Vec<GhzKind> = GhzKind::all().collect();
    let mut mixed = Vec::new();
    for &g1 in &all {
        for &g2 in &all {
            for &g3 in &all {
                for &g4 in &all {
                    if g1.family() == g3.family() && g2.family() == g4.family() {
                        continue;
                    }
                    if let Ok(spec) = SevenQubitChannelSpec::new([g1, g2, g3, g4], Sign::Plus, CharlieBasis::PlusMinus) {
                        mixed.push(spec);
                    }
                }
            }
        }
    }
    let stride = (mixed.len() / count.max(1)).max(1);
    mixed.into_iter().step_by(stride).take(count).collect()
}

fn noiseless_protocols() -> Result<CriterionReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut details = Vec::new();
    let mut ok = true;

    // probabilistic: every spec and controller basis, both controller
    // outcomes, ten random target pairs
    let (mut branches, mut bad_fid, mut bad_prob) = (0usize, 0usize, 0usize);
    for basis in charlie_bases() {
        for spec in enumerate_five_qubit_specs(basis) {
            for _ in 0..10 {
                let t = random_targets(&mut rng)?;
                for c in 0..2u8 {
                    let mut joint = [[0.0; 2]; 2];
                    for sa in 0..2u8 {
                        for sb in 0..2u8 {
                            let policy = OutcomePolicy::Forced(vec![sa, sb, c]);
                            let run = &run_probabilistic_cbrsp(&spec, t, &policy)?[0];
                            branches += 1;
                            joint[sa as usize][sb as usize] = run.probability;
                            for (ok_dir, out) in [(sa == 1, &run.outputs.a_to_b), (sb == 1, &run.outputs.b_to_a)] {
                                if ok_dir && (out.fidelity - 1.0).abs() >= tol::EXACT {
                                    bad_fid += 1;
                                }
                            }
                        }
                    }
                    let pc: f64 = joint.iter().flatten().sum();
                    let p_ab = (joint[1][0] + joint[1][1]) / pc;
                    let p_ba = (joint[0][1] + joint[1][1]) / pc;
                    if (p_ab - 0.5).abs() >= tol::EXACT || (p_ba - 0.5).abs() >= tol::EXACT {
                        bad_prob += 1;
                    }
                }
            }
        }
    }
    ok &= bad_fid == 0 && bad_prob == 0;
    details.push(format!(
        "probabilistic: {branches} branches, {bad_fid} imperfect success outputs, {bad_prob} cases with success probability != 1/2"
    ));

    // deterministic: all 144 Bell assignments, every forced branch
    let (mut runs, mut bad) = (0usize, 0usize);
    for spec in enumerate_five_qubit_specs(CharlieBasis::PlusMinus) {
        let t = random_targets(&mut rng)?;
        for branch in run_deterministic_cbrsp(&spec, t, &OutcomePolicy::EnumerateAll)? {
            runs += 1;
            bad += usize::from(!perfect(&branch));
        }
    }
    ok &= bad == 0 && runs == 144 * 32;
    details.push(format!("deterministic: 144 specs, {runs} forced branches, {bad} below fidelity 1"));

    // joint: both uniform families and mixed-family channels
    let split = KnowledgeSplit::default();
    let mut joint_specs: Vec<SevenQubitChannelSpec> = Vec::new();
    for family in [GhzFamily::LowAncilla, GhzFamily::HighAncilla] {
        joint_specs.extend(enumerate_seven_qubit_specs(family, CharlieBasis::PlusMinus));
    }
    let mixed = mixed_seven_qubit_specs(24);
    let mixed_count = mixed.len();
    joint_specs.extend(mixed);
    let (mut runs, mut bad) = (0usize, 0usize);
    for spec in &joint_specs {
        let t = random_targets(&mut rng)?;
        for branch in run_cjbrsp(spec, t, &split, &OutcomePolicy::EnumerateAll)? {
            runs += 1;
            bad += usize::from(!perfect(&branch));
        }
    }
    ok &= bad == 0 && mixed_count >= 5;
    details.push(format!(
        "joint: {} specs ({mixed_count} mixed-family), {runs} branches, {bad} below fidelity 1",
        joint_specs.len()
    ));

    Ok(report(2, "noiseless protocol correctness", 60.0, ok, details.join("; "), details.clone()))
}

fn eta_grid() -> Vec<f64> {
    (0..=10).map(|k| k as f64 / 10.0).collect()
}

fn kraus_completeness() -> Result<CriterionReport> {
    let mut worst: f64 = 0.0;
    for eta in eta_grid() {
        for model in [NoiseModel::Ad, NoiseModel::Pd] {
            worst = worst.max(completeness_check(&KrausSet::new(model, eta)?));
        }
    }
    let ok = worst < tol::EXACT;
    Ok(report(
        3,
        "Kraus completeness",
        1.0,
        ok,
        format!("max |Σ E†E - I| = {worst:.3e} over AD and PD at η = 0, 0.1, ..., 1"),
        vec![],
    ))
}

fn closed_form_grid(model: NoiseModel) -> Result<SweepGrid> {
    let angles = vec![FRAC_PI_8, FRAC_PI_4, 3.0 * FRAC_PI_8];
    Ok(SweepGrid {
        models: vec![model],
        etas: parse_range("0:1:0.05")?,
        theta1: angles.clone(),
        theta2: angles,
        phi1: vec![0.0, FRAC_PI_3],
        phi2: vec![0.0, FRAC_PI_3],
    })
}

fn diagonal_config(model: NoiseModel, eta: f64) -> Result<NoisyRunConfig> {
    let t = TargetState::new(FRAC_PI_4, 0.0)?;
    Ok(NoisyRunConfig::new(Directional { a_to_b: t, b_to_a: t }, model, eta))
}

fn closed_form_agreement() -> Result<CriterionReport> {
    let mut details = Vec::new();
    let mut ok = true;

    for model in [NoiseModel::Ad, NoiseModel::Pd] {
        let records = sweep(&closed_form_grid(model)?)?;
        let cmp = compare_report(&records);
        ok &= cmp.verdict == Verdict::Match;
        details.push(format!(
            "{model}: {:?} over {} points, max diff {:.3e}, mean diff {:.3e}, {} points above {:.0e}",
            cmp.verdict,
            cmp.points,
            cmp.max_diff,
            cmp.mean_diff,
            cmp.exceeding.len(),
            cmp.tolerance
        ));
        for r in cmp.exceeding.iter().take(5) {
            details.push(format!(
                "  mismatch {model} η={:.2} θ=({:.4},{:.4}) φ=({:.4},{:.4}): F_sim={:.10} F_closed={:.10} diff={:.3e}",
                r.eta, r.theta1, r.theta2, r.phi1, r.phi2, r.f_sim, r.f_closed, r.abs_diff
            ));
        }
        if cmp.exceeding.len() > 5 {
            details.push(format!("  ... {} more", cmp.exceeding.len() - 5));
        }
    }

    // spot values: independent evaluation of the formulas, then the pipeline
    let spots = [
        (NoiseModel::Ad, 0.5, 0.75),
        (NoiseModel::Ad, 1.0, 0.25),
        (NoiseModel::Pd, 0.5, 0.0859375),
        (NoiseModel::Pd, 1.0, 0.125),
    ];
    for (model, eta, expected) in spots {
        let closed = match model {
            NoiseModel::Ad => closed_form_f_ad(FRAC_PI_4, FRAC_PI_4, eta),
            NoiseModel::Pd => closed_form_f_pd(FRAC_PI_4, FRAC_PI_4, eta),
        };
        let sim = noisy_probabilistic_fidelity(&diagonal_config(model, eta)?)?;
        let closed_ok = (closed - expected).abs() < tol::CLOSED_FORM;
        let sim_ok = (sim.fidelity - expected).abs() < tol::CLOSED_FORM;
        ok &= closed_ok && sim_ok;
        details.push(format!(
            "spot {model}(π/4, π/4, {eta}) = {expected}: formula {closed:.10} [{}], pipeline {:.10} [{}]",
            if closed_ok { "ok" } else { "differs" },
            sim.fidelity,
            if sim_ok { "ok" } else { "differs" }
        ));
    }

    // diagnostic: the PD formula against the selection-weighted fidelity
    let mut worst: f64 = 0.0;
    for r in sweep(&closed_form_grid(NoiseModel::Pd)?)? {
        let targets = Directional {
            a_to_b: TargetState::new(r.theta1, r.phi1)?,
            b_to_a: TargetState::new(r.theta2, r.phi2)?,
        };
        let sim = noisy_probabilistic_fidelity(&NoisyRunConfig::new(targets, NoiseModel::Pd, r.eta))?;
        worst = worst.max((sim.selection_weighted_fidelity() - r.f_closed).abs());
    }
    details.push(format!(
        "diagnostic: PD formula vs F_sim · p_sel / {NOISELESS_SELECTION_PROBABILITY} (no normalization after post-selection): max diff {worst:.3e}"
    ));

    let summary = if ok {
        "simulation and closed forms agree on the full grid".to_string()
    } else {
        "simulation and closed forms disagree; see mismatch report".to_string()
    };
    Ok(report(4, "closed-form agreement", 120.0, ok, summary, details))
}

fn argmin(values: &[f64]) -> usize {
    values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap_or(0)
}

struct CurveCheck {
    ad_decreasing: bool,
    pd_dip: bool,
    ad_above_pd: bool,
    pd_min: f64,
    pd_argmin: f64,
}

fn check_curves(etas: &[f64], ad: &[f64], pd: &[f64]) -> CurveCheck {
    let ad_decreasing = ad.windows(2).all(|w| w[1] < w[0]);
    let i = argmin(pd);
    let pd_dip = i > 0
        && i + 1 < pd.len()
        && pd[..=i].windows(2).all(|w| w[1] < w[0])
        && pd[i..].windows(2).all(|w| w[1] > w[0])
        && (pd[i] - 0.049).abs() < 1e-3
        && (etas[i] - 0.7).abs() <= 0.05 + 1e-12;
    let ad_above_pd = etas.iter().zip(ad.iter().zip(pd)).filter(|(e, _)| **e > 0.0).all(|(_, (a, p))| a > p);
    CurveCheck {
        ad_decreasing,
        pd_dip,
        ad_above_pd,
        pd_min: pd[i],
        pd_argmin: etas[i],
    }
}

fn noise_curves() -> Result<CriterionReport> {
    let etas = parse_range("0:1:0.05")?;
    let mut sim_ad = Vec::new();
    let mut sim_pd = Vec::new();
    for &eta in &etas {
        sim_ad.push(noisy_probabilistic_fidelity(&diagonal_config(NoiseModel::Ad, eta)?)?.fidelity);
        sim_pd.push(noisy_probabilistic_fidelity(&diagonal_config(NoiseModel::Pd, eta)?)?.fidelity);
    }
    let closed_ad: Vec<f64> = etas.iter().map(|&e| closed_form_f_ad(FRAC_PI_4, FRAC_PI_4, e)).collect();
    let closed_pd: Vec<f64> = etas.iter().map(|&e| closed_form_f_pd(FRAC_PI_4, FRAC_PI_4, e)).collect();

    let sim = check_curves(&etas, &sim_ad, &sim_pd);
    let closed = check_curves(&etas, &closed_ad, &closed_pd);
    let describe = |c: &CurveCheck| {
        format!(
            "AD strictly decreasing: {}; PD dips to ≈0.049 near η≈0.7 then rises: {} (min {:.6} at η={:.2}); AD > PD on (0,1]: {}",
            c.ad_decreasing, c.pd_dip, c.pd_min, c.pd_argmin, c.ad_above_pd
        )
    };
    let ok = sim.ad_decreasing && sim.pd_dip && sim.ad_above_pd;
    let details = vec![
        format!("simulation: {}", describe(&sim)),
        format!("closed forms (reference): {}", describe(&closed)),
        format!(
            "simulated PD curve: {}",
            sim_pd.iter().map(|v| format!("{v:.4}")).collect::<Vec<_>>().join(" ")
        ),
    ];
    Ok(report(5, "noise curve shape at θ1 = θ2 = π/4", 10.0, ok, describe(&sim), details))
}

fn phase_independence() -> Result<CriterionReport> {
    let phases = [(0.0, 0.0), (FRAC_PI_3, 0.0), (0.0, 1.0), (2.0, 4.5), (5.5, 3.1), (1.7, 1.7)];
    let mut worst: f64 = 0.0;
    let mut points = 0;
    for model in [NoiseModel::Ad, NoiseModel::Pd] {
        for (t1, t2) in [(FRAC_PI_8, FRAC_PI_4), (0.3, 1.2), (FRAC_PI_4, 3.0 * FRAC_PI_8)] {
            for eta in [0.0, 0.3, 0.65, 1.0] {
                let mut values = Vec::new();
                for (p1, p2) in phases {
                    let targets = Directional {
                        a_to_b: TargetState::new(t1, p1)?,
                        b_to_a: TargetState::new(t2, p2)?,
                    };
                    values.push(noisy_probabilistic_fidelity(&NoisyRunConfig::new(targets, model, eta))?.fidelity);
                }
                let spread = values.iter().copied().fold(f64::MIN, f64::max)
                    - values.iter().copied().fold(f64::MAX, f64::min);
                worst = worst.max(spread);
                points += 1;
            }
        }
    }
    let ok = worst < tol::EXACT;
    Ok(report(
        6,
        "phase independence",
        10.0,
        ok,
        format!("max spread over {} phase pairs at {points} (model, θ, η) points: {worst:.3e}", phases.len()),
        vec![],
    ))
}

fn trace_structure() -> Result<CriterionReport> {
    let rho = make_five_qubit_channel(&FiveQubitChannelSpec::noise_study())?.to_density();
    let correlated = NoiseGrouping::default_correlated();
    let independent = NoiseGrouping::per_qubit(5);
    let mut max_correlated: f64 = 0.0;
    let mut worst_independent: f64 = 0.0;
    for eta in parse_range("0:1:0.05")? {
        for model in [NoiseModel::Ad, NoiseModel::Pd] {
            let k = KrausSet::new(model, eta)?;
            if eta > 0.0 && eta < 1.0 {
                max_correlated = max_correlated.max(apply_grouped_noise(&rho, &k, &correlated)?.trace());
            }
            let t = apply_grouped_noise(&rho, &k, &independent)?.trace();
            worst_independent = worst_independent.max((t - 1.0).abs());
        }
    }
    let ok = max_correlated < 1.0 && worst_independent < tol::EXACT;
    Ok(report(
        7,
        "correlated noise loses trace",
        5.0,
        ok,
        format!(
            "correlated grouping: max trace {max_correlated:.6} for η in (0,1); per-qubit grouping: max |trace - 1| = {worst_independent:.3e}"
        ),
        vec![],
    ))
}

fn output_state_check() -> Result<CriterionReport> {
    let mut details = Vec::new();
    let mut all_agree = true;
    let mut ad_agree = true;
    for model in [NoiseModel::Ad, NoiseModel::Pd] {
        let grid = closed_form_grid(model)?;
        let (mut points, mut bad_points, mut bad_entries) = (0usize, 0usize, 0usize);
        let mut worst: f64 = 0.0;
        let mut worst_rescaled: f64 = 0.0;
        let mut first = None;
        for &eta in &grid.etas {
            for &t1 in &grid.theta1 {
                for &t2 in &grid.theta2 {
                    for &p1 in &grid.phi1 {
                        for &p2 in &grid.phi2 {
                            let targets = Directional {
                                a_to_b: TargetState::new(t1, p1)?,
                                b_to_a: TargetState::new(t2, p2)?,
                            };
                            let config = NoisyRunConfig::new(targets, model, eta);
                            let cmp = compare_rho_out(&config)?;
                            points += 1;
                            worst = worst.max(cmp.max_residual);
                            if !cmp.mismatches.is_empty() {
                                bad_points += 1;
                                bad_entries += cmp.mismatches.len();
                                first.get_or_insert(cmp);
                            }
                            // the same comparison against the post-selected
                            // state before normalization
                            let sim = noisy_probabilistic_fidelity(&config)?;
                            let scale = sim.selection_probability / NOISELESS_SELECTION_PROBABILITY;
                            let closed = closed_form_rho_out(model, t1, t2, p1, p2, eta)?;
                            let rescaled = sim.rho_out.matrix().scale(scale.into());
                            worst_rescaled = worst_rescaled.max(rescaled.max_abs_diff(closed.matrix()));
                        }
                    }
                }
            }
        }
        all_agree &= bad_points == 0;
        if model == NoiseModel::Ad {
            ad_agree = bad_points == 0;
        }
        details.push(format!(
            "{model}: {points} points, {bad_points} with mismatching entries ({bad_entries} entries), max residual {worst:.3e}"
        ));
        if let Some(c) = first {
            details.push(format!(
                "  first mismatch {model} η={:.2} θ=({:.4},{:.4}) φ=({:.4},{:.4}):",
                c.eta, c.theta1, c.theta2, c.phi1, c.phi2
            ));
            for m in &c.mismatches {
                details.push(format!(
                    "    entry ({},{}): simulated {:.8}{:+.8}i, closed {:.8}{:+.8}i, residual {:.3e}",
                    m.row, m.col, m.simulated[0], m.simulated[1], m.closed[0], m.closed[1], m.residual
                ));
            }
        }
        if bad_points > 0 {
            details.push(format!(
                "  diagnostic: closed form vs simulated state scaled by p_sel/{NOISELESS_SELECTION_PROBABILITY}: max residual {worst_rescaled:.3e}"
            ));
        }
    }
    let mut r = report(
        8,
        "output density matrices",
        60.0,
        true,
        if all_agree {
            "all entries agree".to_string()
        } else if ad_agree {
            "AD agrees everywhere; PD mismatches reported with residuals".to_string()
        } else {
            "mismatches reported with residuals".to_string()
        },
        details,
    );
    r.passed_with_report = !all_agree;
    Ok(r)
}
