use std::fmt;

use serde::{Deserialize, Serialize};

use crate::channels::{BellKind, GhzKind};
use crate::error::{Error, Result};
use crate::qmath::{gates, ComplexMatrix};

/// Receiver-side Pauli correction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CorrectionOp {
    I,
    X,
    #[serde(rename = "iY")]
    IY,
    Z,
}

impl CorrectionOp {
    pub fn matrix(self) -> ComplexMatrix {
        match self {
            CorrectionOp::I => gates::identity(),
            CorrectionOp::X => gates::pauli_x(),
            CorrectionOp::IY => gates::i_y(),
            CorrectionOp::Z => gates::pauli_z(),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            CorrectionOp::I => "I",
            CorrectionOp::X => "X",
            CorrectionOp::IY => "iY",
            CorrectionOp::Z => "Z",
        }
    }
}

impl fmt::Display for CorrectionOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Probabilistic correction for the `|q2>` branch.
pub fn table1_correction(bell: BellKind) -> CorrectionOp {
    match bell {
        BellKind::PsiPlus => CorrectionOp::IY,
        BellKind::PsiMinus => CorrectionOp::X,
        BellKind::PhiPlus => CorrectionOp::Z,
        BellKind::PhiMinus => CorrectionOp::I,
    }
}

/// Probabilistic correction keyed by the sender's outcome (0 = `q1`, 1 = `q2`).
/// The `q1` branch cannot be repaired.
pub fn table1_lookup(bell: BellKind, sender_outcome: u8) -> Result<CorrectionOp> {
    if sender_outcome == 1 {
        Ok(table1_correction(bell))
    } else {
        Err(Error::ProtocolFails(format!(
            "sender obtained q1 on shared {bell}; the receiver cannot map q2 onto the target"
        )))
    }
}

/// Deterministic correction for sender outcomes `u` and `v`.
pub fn table2_correction(bell: BellKind, u: u8, v: u8) -> CorrectionOp {
    use CorrectionOp::*;
    // columns: ψ+, ψ-, φ+, φ-
    const ROWS: [[CorrectionOp; 4]; 4] = [
        [I, Z, X, IY],
        [Z, I, IY, X],
        [IY, X, Z, I],
        [X, IY, I, Z],
    ];
    let column = match bell {
        BellKind::PsiPlus => 0,
        BellKind::PsiMinus => 1,
        BellKind::PhiPlus => 2,
        BellKind::PhiMinus => 3,
    };
    ROWS[(((u & 1) << 1) | (v & 1)) as usize][column]
}

/// Joint correction; columns are `{GHZ^{0+}, GHZ^{2+}}`, `{GHZ^{0-}, GHZ^{2-}}`,
/// `{GHZ^{1+}, GHZ^{3+}}`, `{GHZ^{1-}, GHZ^{3-}}`.
pub fn table3_correction(ghz: GhzKind, u: u8, v: u8) -> CorrectionOp {
    table2_correction(ghz.bell(), u, v)
}
