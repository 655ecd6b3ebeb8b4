//! Amplitude- and phase-damping noise applied with a correlated grouping:
//! one Kraus index is shared by every qubit of a group.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::channels::five;
use crate::error::{Error, Result};
use crate::qmath::{tol, ComplexMatrix, DensityMatrix, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NoiseModel {
    Ad,
    Pd,
}

impl fmt::Display for NoiseModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NoiseModel::Ad => "ad",
            NoiseModel::Pd => "pd",
        })
    }
}

impl FromStr for NoiseModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ad" | "amplitude" => Ok(NoiseModel::Ad),
            "pd" | "phase" => Ok(NoiseModel::Pd),
            other => Err(Error::Parse(format!("unknown noise model {other:?}"))),
        }
    }
}

/// Single-qubit Kraus operators with their decoherence rate.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausSet {
    model: NoiseModel,
    eta: f64,
    operators: Vec<ComplexMatrix>,
}

fn check_eta(eta: f64) -> Result<()> {
    if (0.0..=1.0).contains(&eta) {
        Ok(())
    } else {
        Err(Error::EtaOutOfRange(eta))
    }
}

fn real_diag(d0: f64, d1: f64) -> ComplexMatrix {
    ComplexMatrix::diagonal(&[C64::new(d0, 0.0), C64::new(d1, 0.0)])
}

impl KrausSet {
    pub fn new(model: NoiseModel, eta: f64) -> Result<Self> {
        match model {
            NoiseModel::Ad => kraus_ad(eta),
            NoiseModel::Pd => kraus_pd(eta),
        }
    }

    /// Builds a set from explicit operators; rejects incomplete ones.
    pub fn from_operators(model: NoiseModel, eta: f64, operators: Vec<ComplexMatrix>) -> Result<Self> {
        let set = Self { model, eta, operators };
        let dev = completeness_check(&set);
        if dev > tol::EXACT {
            return Err(Error::IncompleteKraus(dev));
        }
        Ok(set)
    }

    pub fn model(&self) -> NoiseModel {
        self.model
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    /// Copy with one operator dropped, bypassing the completeness check.
    /// Useful for showing that the check catches damaged sets.
    pub fn without_operator(&self, index: usize) -> Self {
        let mut operators = self.operators.clone();
        operators.remove(index);
        Self {
            model: self.model,
            eta: self.eta,
            operators,
        }
    }
}

/// `E0 = [[1, 0], [0, √(1-η)]]`, `E1 = [[0, √η], [0, 0]]`.
pub fn kraus_ad(eta: f64) -> Result<KrausSet> {
    check_eta(eta)?;
    let e1 = ComplexMatrix::from_real_rows([[0.0, eta.sqrt()], [0.0, 0.0]]);
    Ok(KrausSet {
        model: NoiseModel::Ad,
        eta,
        operators: vec![real_diag(1.0, (1.0 - eta).sqrt()), e1],
    })
}

/// `E0 = √(1-η) I`, `E1 = √η |0><0|`, `E2 = √η |1><1|`.
pub fn kraus_pd(eta: f64) -> Result<KrausSet> {
    check_eta(eta)?;
    let (k, s) = ((1.0 - eta).sqrt(), eta.sqrt());
    Ok(KrausSet {
        model: NoiseModel::Pd,
        eta,
        operators: vec![real_diag(k, k), real_diag(s, 0.0), real_diag(0.0, s)],
    })
}

/// `max |Σ E†E - I|` over matrix entries.
pub fn completeness_check(set: &KrausSet) -> f64 {
    let sum = set.operators.iter().fold(ComplexMatrix::zeros(2, 2), |acc, e| {
        acc.add(&e.adjoint().matmul(e).expect("2x2")).expect("2x2")
    });
    sum.max_abs_diff(&ComplexMatrix::identity(2))
}

/// Partition of the register into correlated noise groups plus qubits left
/// noiseless.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NoiseGrouping {
    pub groups: Vec<(String, Vec<usize>)>,
    pub untouched: Vec<usize>,
}

impl NoiseGrouping {
    /// `{S1, R2}` share index `i`, `{R1, S2}` share index `j`; `C1` is kept
    /// noiseless.
    pub fn default_correlated() -> Self {
        Self {
            groups: vec![
                ("S1R2".into(), vec![five::S1, five::R2]),
                ("R1S2".into(), vec![five::R1, five::S2]),
            ],
            untouched: vec![five::C1],
        }
    }

    /// Independent noise on each of `n` qubits.
    pub fn per_qubit(n: usize) -> Self {
        Self {
            groups: (0..n).map(|q| (format!("q{q}"), vec![q])).collect(),
            untouched: Vec::new(),
        }
    }

    pub fn validate(&self, num_qubits: usize) -> Result<()> {
        let mismatch = |reason: String| Error::GroupingMismatch { num_qubits, reason };
        let mut seen = vec![false; num_qubits];
        let all = self.groups.iter().flat_map(|(_, g)| g).chain(&self.untouched);
        for &q in all {
            let slot = seen
                .get_mut(q)
                .ok_or_else(|| mismatch(format!("qubit {q} does not exist")))?;
            if *slot {
                return Err(mismatch(format!("qubit {q} appears twice")));
            }
            *slot = true;
        }
        if let Some(q) = seen.iter().position(|s| !s) {
            return Err(mismatch(format!("qubit {q} is not assigned")));
        }
        if self.groups.iter().any(|(_, g)| g.is_empty()) {
            return Err(mismatch("empty group".into()));
        }
        Ok(())
    }
}

/// `Σ_{i,j,...} (E_i^{⊗g1} ⊗ E_j^{⊗g2} ⊗ ...) ρ (...)†`, summed group by group
/// and index by index in ascending order.
///
/// Sharing one index across a group makes the map trace-decreasing, so the
/// result is returned unnormalized (its flag is cleared when the trace moves).
pub fn apply_grouped_noise(
    rho: &DensityMatrix,
    kraus: &KrausSet,
    grouping: &NoiseGrouping,
) -> Result<DensityMatrix> {
    let n = crate::qmath::QubitRegister::num_qubits(rho);
    grouping.validate(n)?;
    let mut current = rho.clone();
    for (_, qubits) in &grouping.groups {
        let mut next = DensityMatrix::zeros(n);
        for e in kraus.operators() {
            let op = (1..qubits.len()).fold(e.clone(), |acc, _| acc.kron(e));
            next.accumulate(&current.conjugate_by(&op, qubits)?)?;
        }
        current = next;
    }
    Ok(current)
}
