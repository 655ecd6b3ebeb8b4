use serde::{Deserialize, Serialize};

use super::{closed_form_fidelity, closed_form_rho_out, noisy_probabilistic_fidelity, NoisyRunConfig};
use crate::error::{Error, Result};
use crate::noise::NoiseModel;
use crate::protocols::{Directional, TargetState};
use crate::qmath::tol;

/// One grid point of a fidelity sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FidelityRecord {
    pub model: NoiseModel,
    pub eta: f64,
    pub theta1: f64,
    pub theta2: f64,
    pub phi1: f64,
    pub phi2: f64,
    #[serde(rename = "F_sim")]
    pub f_sim: f64,
    #[serde(rename = "F_closed")]
    pub f_closed: f64,
    pub abs_diff: f64,
}

/// Cartesian grid, iterated as model, η, θ1, θ2, φ1, φ2 (last varies
/// fastest).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepGrid {
    pub models: Vec<NoiseModel>,
    pub etas: Vec<f64>,
    pub theta1: Vec<f64>,
    pub theta2: Vec<f64>,
    pub phi1: Vec<f64>,
    pub phi2: Vec<f64>,
}

impl SweepGrid {
    pub fn len(&self) -> usize {
        self.models.len()
            * self.etas.len()
            * self.theta1.len()
            * self.theta2.len()
            * self.phi1.len()
            * self.phi2.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

pub fn sweep(grid: &SweepGrid) -> Result<Vec<FidelityRecord>> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let mut records = Vec::with_capacity(grid.len());
    for &model in &grid.models {
        for &eta in &grid.etas {
            for &theta1 in &grid.theta1 {
                for &theta2 in &grid.theta2 {
                    for &phi1 in &grid.phi1 {
                        for &phi2 in &grid.phi2 {
                            let targets = Directional {
                                a_to_b: TargetState::new(theta1, phi1)?,
                                b_to_a: TargetState::new(theta2, phi2)?,
                            };
                            let sim = noisy_probabilistic_fidelity(&NoisyRunConfig::new(targets, model, eta))?;
                            let f_closed = closed_form_fidelity(model, theta1, theta2, eta);
                            records.push(FidelityRecord {
                                model,
                                eta,
                                theta1,
                                theta2,
                                phi1,
                                phi2,
                                f_sim: sim.fidelity,
                                f_closed,
                                abs_diff: (sim.fidelity - f_closed).abs(),
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(records)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Match,
    Mismatch,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub verdict: Verdict,
    pub points: usize,
    pub max_diff: f64,
    pub mean_diff: f64,
    pub tolerance: f64,
    /// Grid points whose difference exceeds the tolerance.
    pub exceeding: Vec<FidelityRecord>,
}

/// Simulation vs. closed form at the comparison tolerance.
pub fn compare_report(records: &[FidelityRecord]) -> ComparisonReport {
    let tolerance = tol::CLOSED_FORM;
    let max_diff = records.iter().map(|r| r.abs_diff).fold(0.0, f64::max);
    let mean_diff = if records.is_empty() {
        0.0
    } else {
        records.iter().map(|r| r.abs_diff).sum::<f64>() / records.len() as f64
    };
    // NaN differences count as exceeding
    let exceeding: Vec<_> = records.iter().filter(|r| !(r.abs_diff <= tolerance)).cloned().collect();
    ComparisonReport {
        verdict: if exceeding.is_empty() { Verdict::Match } else { Verdict::Mismatch },
        points: records.len(),
        max_diff,
        mean_diff,
        tolerance,
        exceeding,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixResidual {
    pub row: usize,
    pub col: usize,
    /// `[re, im]`
    pub simulated: [f64; 2],
    pub closed: [f64; 2],
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RhoComparison {
    pub model: NoiseModel,
    pub eta: f64,
    pub theta1: f64,
    pub theta2: f64,
    pub phi1: f64,
    pub phi2: f64,
    pub max_residual: f64,
    /// Entries whose residual exceeds the comparison tolerance.
    pub mismatches: Vec<MatrixResidual>,
}

/// Elementwise comparison of the simulated output state with the published
/// matrix for the same point.
pub fn compare_rho_out(config: &NoisyRunConfig) -> Result<RhoComparison> {
    let t = &config.targets;
    let (theta1, phi1, theta2, phi2) = (t.a_to_b.theta(), t.a_to_b.phi(), t.b_to_a.theta(), t.b_to_a.phi());
    let sim = noisy_probabilistic_fidelity(config)?.rho_out;
    let closed = closed_form_rho_out(config.model, theta1, theta2, phi1, phi2, config.eta)?;
    let mut max_residual: f64 = 0.0;
    let mut mismatches = Vec::new();
    for row in 0..4 {
        for col in 0..4 {
            let (s, c) = (sim.matrix()[(row, col)], closed.matrix()[(row, col)]);
            let residual = (s - c).norm();
            max_residual = max_residual.max(residual);
            if !(residual <= tol::CLOSED_FORM) {
                mismatches.push(MatrixResidual {
                    row,
                    col,
                    simulated: [s.re, s.im],
                    closed: [c.re, c.im],
                    residual,
                });
            }
        }
    }
    Ok(RhoComparison {
        model: config.model,
        eta: config.eta,
        theta1,
        theta2,
        phi1,
        phi2,
        max_residual,
        mismatches,
    })
}

/// Parses `start:stop:step` (both endpoints included; the final point is
/// snapped onto `stop`, which lies within half a step of it) or a single
/// value.
pub fn parse_range(text: &str) -> Result<Vec<f64>> {
    let bad = || Error::Parse(format!("expected start:stop:step or a number, got {text:?}"));
    let nums = text
        .split(':')
        .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<Vec<f64>>>()?;
    if nums.iter().any(|v| !v.is_finite()) {
        return Err(bad());
    }
    match nums[..] {
        [v] => Ok(vec![v]),
        [start, stop, step] => {
            if step <= 0.0 || stop < start {
                return Err(Error::Parse(format!("range {text:?} needs step > 0 and stop >= start")));
            }
            // the number of steps is rounded, so the last point is always
            // within half a step of `stop` and is placed exactly on it
            let n = ((stop - start) / step).round() as u32;
            let mut values: Vec<f64> = (0..=n).map(|k| start + f64::from(k) * step).collect();
            if let Some(last) = values.last_mut() {
                *last = stop;
            }
            Ok(values)
        }
        _ => Err(bad()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        let v = parse_range("0:1:0.05").unwrap();
        assert_eq!(v.len(), 21);
        assert_eq!(v[0], 0.0);
        assert_eq!(v[20], 1.0);
        assert_eq!(parse_range("0:1:0.4").unwrap(), vec![0.0, 0.4, 0.8, 1.0]);
        assert_eq!(parse_range("0:1:0.3").unwrap().len(), 4);
        assert_eq!(parse_range("0.5").unwrap(), vec![0.5]);
        assert!(parse_range("1:0:0.1").is_err());
        assert!(parse_range("0:1:0").is_err());
        assert!(parse_range("a:b").is_err());
    }

    #[test]
    fn empty_grid_rejected() {
        assert!(matches!(sweep(&SweepGrid::default()), Err(Error::EmptyGrid)));
    }

    #[test]
    fn noiseless_grid_matches() {
        let grid = SweepGrid {
            models: vec![NoiseModel::Ad, NoiseModel::Pd],
            etas: vec![0.0],
            theta1: vec![0.2, 1.0],
            theta2: vec![0.7],
            phi1: vec![0.0, 2.0],
            phi2: vec![1.0],
        };
        let records = sweep(&grid).unwrap();
        assert_eq!(records.len(), grid.len());
        let report = compare_report(&records);
        assert_eq!(report.verdict, Verdict::Match);
        assert!(report.max_diff < tol::EXACT);
    }

    #[test]
    fn corrupted_closed_form_is_flagged() {
        let grid = SweepGrid {
            models: vec![NoiseModel::Ad],
            etas: vec![0.3],
            theta1: vec![0.4],
            theta2: vec![0.9],
            phi1: vec![0.0],
            phi2: vec![0.0],
        };
        let mut records = sweep(&grid).unwrap();
        assert_eq!(compare_report(&records).verdict, Verdict::Match);
        // flip the sign of the closed-form value
        for r in &mut records {
            r.f_closed = -r.f_closed;
            r.abs_diff = (r.f_sim - r.f_closed).abs();
        }
        let report = compare_report(&records);
        assert_eq!(report.verdict, Verdict::Mismatch);
        assert_eq!(report.exceeding.len(), 1);
    }
}
