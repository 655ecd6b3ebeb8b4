//! Entangled resources: Bell pairs, GHZ triples and the controlled five- and
//! seven-qubit channels.
//!
//! Bell labels follow the equal-bits/unequal-bits convention used by the
//! correction tables, which differs from the textbook names:
//!
//! | here  | state                 | textbook |
//! |-------|-----------------------|----------|
//! | `ψ+`  | (\|00⟩ + \|11⟩)/√2    | Φ+       |
//! | `ψ-`  | (\|00⟩ − \|11⟩)/√2    | Φ−       |
//! | `φ+`  | (\|01⟩ + \|10⟩)/√2    | Ψ+       |
//! | `φ-`  | (\|01⟩ − \|10⟩)/√2    | Ψ−       |

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmath::{gates, QubitRegister, SingleQubitBasis, StateVector, C64};

/// Qubit positions in the five-qubit channel `S1 R1 S2 R2 C1`.
pub mod five {
    pub const S1: usize = 0;
    pub const R1: usize = 1;
    pub const S2: usize = 2;
    pub const R2: usize = 3;
    pub const C1: usize = 4;
    pub const LABELS: [&str; 5] = ["S1", "R1", "S2", "R2", "C1"];
}

/// Qubit positions in the seven-qubit channel `S1 S1' R1 S2 S2' R2 C1`.
pub mod seven {
    pub const S1: usize = 0;
    pub const S1P: usize = 1;
    pub const R1: usize = 2;
    pub const S2: usize = 3;
    pub const S2P: usize = 4;
    pub const R2: usize = 5;
    pub const C1: usize = 6;
    pub const LABELS: [&str; 7] = ["S1", "S1'", "R1", "S2", "S2'", "R2", "C1"];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }

    fn parse(s: &str) -> Result<Self> {
        match s {
            "+" => Ok(Sign::Plus),
            "-" => Ok(Sign::Minus),
            _ => Err(Error::Parse(format!("expected '+' or '-', got {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BellKind {
    PsiPlus,
    PsiMinus,
    PhiPlus,
    PhiMinus,
}

impl BellKind {
    pub const ALL: [BellKind; 4] = [
        BellKind::PsiPlus,
        BellKind::PsiMinus,
        BellKind::PhiPlus,
        BellKind::PhiMinus,
    ];

    /// Second bit of the leading ket `|ij>`; `i` is always 0.
    pub fn parity_bit(self) -> u8 {
        match self {
            BellKind::PsiPlus | BellKind::PsiMinus => 0,
            BellKind::PhiPlus | BellKind::PhiMinus => 1,
        }
    }

    pub fn sign(self) -> Sign {
        match self {
            BellKind::PsiPlus | BellKind::PhiPlus => Sign::Plus,
            BellKind::PsiMinus | BellKind::PhiMinus => Sign::Minus,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            BellKind::PsiPlus => "psi+",
            BellKind::PsiMinus => "psi-",
            BellKind::PhiPlus => "phi+",
            BellKind::PhiMinus => "phi-",
        }
    }

    pub fn conventional_name(self) -> &'static str {
        match self {
            BellKind::PsiPlus => "Phi+",
            BellKind::PsiMinus => "Phi-",
            BellKind::PhiPlus => "Psi+",
            BellKind::PhiMinus => "Psi-",
        }
    }
}

impl fmt::Display for BellKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for BellKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BellKind::ALL
            .into_iter()
            .find(|b| b.label() == s.trim())
            .ok_or_else(|| Error::Parse(format!("unknown Bell state {s:?}")))
    }
}

/// `GHZ^{x±} = (|x> ± |7-x>)/√2` on `S S' R`, with `x ∈ {0,1,2,3}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GhzKind {
    x: u8,
    sign: Sign,
}

/// Which ancilla preparation a GHZ kind descends from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GhzFamily {
    /// Ancilla `|0>`: `GHZ^{0±}`, `GHZ^{1±}`.
    LowAncilla,
    /// Ancilla `|1>`: `GHZ^{2±}`, `GHZ^{3±}`.
    HighAncilla,
}

impl GhzFamily {
    pub fn ancilla(self) -> u8 {
        match self {
            GhzFamily::LowAncilla => 0,
            GhzFamily::HighAncilla => 1,
        }
    }
}

impl GhzKind {
    pub fn new(x: u8, sign: Sign) -> Result<Self> {
        if x > 3 {
            return Err(Error::InvalidChannel(format!("GHZ index {x} outside 0..=3")));
        }
        Ok(Self { x, sign })
    }

    pub fn all() -> impl Iterator<Item = GhzKind> {
        (0..4u8).flat_map(|x| [Sign::Plus, Sign::Minus].map(|sign| GhzKind { x, sign }))
    }

    pub fn x(self) -> u8 {
        self.x
    }

    pub fn sign(self) -> Sign {
        self.sign
    }

    pub fn family(self) -> GhzFamily {
        if self.x < 2 {
            GhzFamily::LowAncilla
        } else {
            GhzFamily::HighAncilla
        }
    }

    /// The Bell pair this kind is built from (ancilla discarded).
    pub fn bell(self) -> BellKind {
        match (self.x & 1, self.sign) {
            (0, Sign::Plus) => BellKind::PsiPlus,
            (0, Sign::Minus) => BellKind::PsiMinus,
            (_, Sign::Plus) => BellKind::PhiPlus,
            (_, Sign::Minus) => BellKind::PhiMinus,
        }
    }

    pub fn label(self) -> String {
        format!("ghz{}{}", self.x, self.sign.symbol())
    }
}

impl fmt::Display for GhzKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl FromStr for GhzKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let body = s
            .strip_prefix("ghz")
            .ok_or_else(|| Error::Parse(format!("unknown GHZ state {s:?}")))?;
        let (digit, sign) = body.split_at(body.len().saturating_sub(1));
        let x = digit
            .parse::<u8>()
            .map_err(|_| Error::Parse(format!("unknown GHZ state {s:?}")))?;
        GhzKind::new(x, Sign::parse(sign)?)
    }
}

/// Orthonormal controller basis `{|a>, |b>}`; outcome 0 is `|a>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CharlieBasis {
    Computational,
    PlusMinus,
    /// `|a> = cos(θ/2)|0> + e^{iφ} sin(θ/2)|1>`, `|b>` its complement.
    Angles { theta: f64, phi: f64 },
}

impl CharlieBasis {
    pub fn basis(&self) -> SingleQubitBasis {
        match *self {
            CharlieBasis::Computational => SingleQubitBasis::computational(),
            CharlieBasis::PlusMinus => SingleQubitBasis::plus_minus(),
            CharlieBasis::Angles { theta, phi } => SingleQubitBasis::from_angles(theta, phi),
        }
    }

    pub fn a(&self) -> StateVector {
        StateVector::single(*self.basis().first()).expect("basis vector is normalized")
    }

    pub fn b(&self) -> StateVector {
        StateVector::single(*self.basis().second()).expect("basis vector is normalized")
    }
}

impl fmt::Display for CharlieBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CharlieBasis::Computational => f.write_str("comp"),
            CharlieBasis::PlusMinus => f.write_str("pm"),
            CharlieBasis::Angles { theta, phi } => write!(f, "theta={theta},phi={phi}"),
        }
    }
}

impl FromStr for CharlieBasis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "comp" => Ok(CharlieBasis::Computational),
            "pm" => Ok(CharlieBasis::PlusMinus),
            other => {
                let mut theta = None;
                let mut phi = None;
                for part in other.split(',') {
                    let (key, value) = part
                        .split_once('=')
                        .ok_or_else(|| Error::Parse(format!("bad controller basis {s:?}")))?;
                    let value: f64 = value
                        .trim()
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad angle in {s:?}")))?;
                    match key.trim() {
                        "theta" => theta = Some(value),
                        "phi" => phi = Some(value),
                        _ => return Err(Error::Parse(format!("bad controller basis {s:?}"))),
                    }
                }
                match (theta, phi) {
                    (Some(theta), Some(phi)) if theta.is_finite() && phi.is_finite() => {
                        Ok(CharlieBasis::Angles { theta, phi })
                    }
                    _ => Err(Error::Parse(format!("bad controller basis {s:?}"))),
                }
            }
        }
    }
}

/// `(|ψ1>_{S1R1}|ψ2>_{S2R2}|a> ± |ψ3>_{S1R1}|ψ4>_{S2R2}|b>)/√2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiveQubitChannelSpec {
    pub psi1: BellKind,
    pub psi2: BellKind,
    pub psi3: BellKind,
    pub psi4: BellKind,
    pub relative_sign: Sign,
    pub charlie: CharlieBasis,
}

impl FiveQubitChannelSpec {
    pub fn new(
        bells: [BellKind; 4],
        relative_sign: Sign,
        charlie: CharlieBasis,
    ) -> Result<Self> {
        let spec = Self {
            psi1: bells[0],
            psi2: bells[1],
            psi3: bells[2],
            psi4: bells[3],
            relative_sign,
            charlie,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.psi1 == self.psi3 {
            return Err(Error::InvalidChannel(format!(
                "psi1 and psi3 are both {}; the controller qubit would not be entangled",
                self.psi1
            )));
        }
        if self.psi2 == self.psi4 {
            return Err(Error::InvalidChannel(format!(
                "psi2 and psi4 are both {}; the controller qubit would not be entangled",
                self.psi2
            )));
        }
        Ok(())
    }

    /// `(ψ+, ψ+, ψ-, ψ-; +; {|+>, |->})`, the default five-qubit channel.
    pub fn standard() -> Self {
        Self::new(
            [BellKind::PsiPlus, BellKind::PsiPlus, BellKind::PsiMinus, BellKind::PsiMinus],
            Sign::Plus,
            CharlieBasis::PlusMinus,
        )
        .expect("preset is valid")
    }

    /// `(ψ+, ψ+, φ-, φ-; +; computational)`, the channel used for the noise study.
    pub fn noise_study() -> Self {
        Self::new(
            [BellKind::PsiPlus, BellKind::PsiPlus, BellKind::PhiMinus, BellKind::PhiMinus],
            Sign::Plus,
            CharlieBasis::Computational,
        )
        .expect("preset is valid")
    }

    pub fn bells(&self) -> [BellKind; 4] {
        [self.psi1, self.psi2, self.psi3, self.psi4]
    }

    /// Bell pairs `(A→B, B→A)` revealed by controller outcome 0 (`|a>`) or 1 (`|b>`).
    pub fn revealed(&self, charlie_outcome: u8) -> (BellKind, BellKind) {
        if charlie_outcome == 0 {
            (self.psi1, self.psi2)
        } else {
            (self.psi3, self.psi4)
        }
    }

    pub fn canonical(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for FiveQubitChannelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{},{},{},{};{};{}",
            self.psi1,
            self.psi2,
            self.psi3,
            self.psi4,
            self.relative_sign.symbol(),
            self.charlie
        )
    }
}

impl FromStr for FiveQubitChannelSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (states, sign, basis) = split_spec(s)?;
        let bells: Vec<BellKind> = states
            .split(',')
            .map(str::parse)
            .collect::<Result<_>>()?;
        let bells: [BellKind; 4] = bells
            .try_into()
            .map_err(|_| Error::Parse(format!("expected four Bell states in {s:?}")))?;
        Self::new(bells, Sign::parse(sign)?, basis.parse()?)
    }
}

/// `(|GHZ1>|GHZ2>|a> ± |GHZ3>|GHZ4>|b>)/√2` on `S1 S1' R1 S2 S2' R2 C1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SevenQubitChannelSpec {
    pub ghz1: GhzKind,
    pub ghz2: GhzKind,
    pub ghz3: GhzKind,
    pub ghz4: GhzKind,
    pub relative_sign: Sign,
    pub charlie: CharlieBasis,
}

impl SevenQubitChannelSpec {
    pub fn new(ghz: [GhzKind; 4], relative_sign: Sign, charlie: CharlieBasis) -> Result<Self> {
        let spec = Self {
            ghz1: ghz[0],
            ghz2: ghz[1],
            ghz3: ghz[2],
            ghz4: ghz[3],
            relative_sign,
            charlie,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.ghz1 == self.ghz3 || self.ghz2 == self.ghz4 {
            return Err(Error::InvalidChannel(format!(
                "GHZ pairs must differ between controller branches: {self}"
            )));
        }
        Ok(())
    }

    /// The channel obtained by CNOT-ing each sender qubit onto a local ancilla
    /// prepared in `|ancillas.0>` (`S1'`) and `|ancillas.1>` (`S2'`).
    pub fn from_five(spec: &FiveQubitChannelSpec, ancillas: (u8, u8)) -> Result<Self> {
        Self::new(
            [
                ghz_from_bell_and_ancilla(spec.psi1, ancillas.0),
                ghz_from_bell_and_ancilla(spec.psi2, ancillas.1),
                ghz_from_bell_and_ancilla(spec.psi3, ancillas.0),
                ghz_from_bell_and_ancilla(spec.psi4, ancillas.1),
            ],
            spec.relative_sign,
            spec.charlie,
        )
    }

    pub fn ghz(&self) -> [GhzKind; 4] {
        [self.ghz1, self.ghz2, self.ghz3, self.ghz4]
    }

    /// GHZ states `(A→B, B→A)` revealed by controller outcome 0 or 1.
    pub fn revealed(&self, charlie_outcome: u8) -> (GhzKind, GhzKind) {
        if charlie_outcome == 0 {
            (self.ghz1, self.ghz2)
        } else {
            (self.ghz3, self.ghz4)
        }
    }

    /// True when both controller branches agree on the family for the
    /// direction, so the phase sender can decide on `Π` before the
    /// controller speaks.
    pub fn family_known(&self, direction_index: usize) -> bool {
        let (a, b) = if direction_index == 0 {
            (self.ghz1, self.ghz3)
        } else {
            (self.ghz2, self.ghz4)
        };
        a.family() == b.family()
    }

    pub fn canonical(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for SevenQubitChannelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{},{},{},{};{};{}",
            self.ghz1,
            self.ghz2,
            self.ghz3,
            self.ghz4,
            self.relative_sign.symbol(),
            self.charlie
        )
    }
}

impl FromStr for SevenQubitChannelSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (states, sign, basis) = split_spec(s)?;
        let ghz: Vec<GhzKind> = states
            .split(',')
            .map(str::parse)
            .collect::<Result<_>>()?;
        let ghz: [GhzKind; 4] = ghz
            .try_into()
            .map_err(|_| Error::Parse(format!("expected four GHZ states in {s:?}")))?;
        Self::new(ghz, Sign::parse(sign)?, basis.parse()?)
    }
}

fn split_spec(s: &str) -> Result<(&str, &str, &str)> {
    let mut parts = s.trim().splitn(3, ';');
    match (parts.next(), parts.next(), parts.next()) {
        (Some(states), Some(sign), Some(basis)) => Ok((states, sign.trim(), basis)),
        _ => Err(Error::Parse(format!(
            "channel spec {s:?} is not of the form 'k1,k2,k3,k4;±;basis'"
        ))),
    }
}

pub fn make_bell(kind: BellKind) -> StateVector {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut amps = vec![C64::new(0.0, 0.0); 4];
    let j = kind.parity_bit() as usize;
    amps[j] = C64::new(h, 0.0);
    amps[3 - j] = C64::new(h * kind.sign().factor(), 0.0);
    StateVector::new(amps).expect("Bell state is normalized")
}

pub fn make_ghz(kind: GhzKind) -> StateVector {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut amps = vec![C64::new(0.0, 0.0); 8];
    let x = kind.x as usize;
    amps[x] = C64::new(h, 0.0);
    amps[7 - x] = C64::new(h * kind.sign.factor(), 0.0);
    StateVector::new(amps).expect("GHZ state is normalized")
}

/// The GHZ kind produced by `CNOT_{S→S'}` on `|bell>_{SR} |ancilla>_{S'}`.
pub fn ghz_from_bell_and_ancilla(bell: BellKind, ancilla: u8) -> GhzKind {
    GhzKind {
        x: ((ancilla & 1) << 1) | bell.parity_bit(),
        sign: bell.sign(),
    }
}

/// `CNOT_{S→S'} (|bell>_{SR} ⊗ |ancilla>_{S'})`, reordered to `S S' R`.
pub fn cnot_onto_ancilla(bell: BellKind, ancilla: u8) -> StateVector {
    let ancilla_ket = StateVector::basis(1, (ancilla & 1) as usize).expect("one qubit");
    // S R S' -> apply CNOT(S -> S') -> reorder to S S' R.
    make_bell(bell)
        .tensor(&ancilla_ket)
        .and_then(|s| s.apply_on_qubits(&gates::cnot(), &[0, 2]))
        .and_then(|s| s.permute(&[0, 2, 1]))
        .expect("three-qubit construction")
}

pub fn make_five_qubit_channel(spec: &FiveQubitChannelSpec) -> Result<StateVector> {
    spec.validate()?;
    let first = make_bell(spec.psi1)
        .tensor(&make_bell(spec.psi2))?
        .tensor(&spec.charlie.a())?;
    let second = make_bell(spec.psi3)
        .tensor(&make_bell(spec.psi4))?
        .tensor(&spec.charlie.b())?;
    superpose(&first, &second, spec.relative_sign)
}

pub fn make_seven_qubit_channel(spec: &SevenQubitChannelSpec) -> Result<StateVector> {
    spec.validate()?;
    let first = make_ghz(spec.ghz1)
        .tensor(&make_ghz(spec.ghz2))?
        .tensor(&spec.charlie.a())?;
    let second = make_ghz(spec.ghz3)
        .tensor(&make_ghz(spec.ghz4))?
        .tensor(&spec.charlie.b())?;
    superpose(&first, &second, spec.relative_sign)
}

fn superpose(first: &StateVector, second: &StateVector, sign: Sign) -> Result<StateVector> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let amps = first
        .amplitudes()
        .iter()
        .zip(second.amplitudes())
        .map(|(a, b)| (a + b * sign.factor()) * h)
        .collect();
    StateVector::normalized(amps)
}

/// All 144 ordered `(ψ1, ψ3) × (ψ2, ψ4)` choices with `ψ1 ≠ ψ3`, `ψ2 ≠ ψ4`
/// and relative sign `+`.
pub fn enumerate_five_qubit_specs(charlie: CharlieBasis) -> Vec<FiveQubitChannelSpec> {
    let pairs: Vec<(BellKind, BellKind)> = BellKind::ALL
        .into_iter()
        .flat_map(|a| BellKind::ALL.into_iter().map(move |b| (a, b)))
        .filter(|(a, b)| a != b)
        .collect();
    pairs
        .iter()
        .flat_map(|&(p1, p3)| {
            pairs.iter().map(move |&(p2, p4)| FiveQubitChannelSpec {
                psi1: p1,
                psi2: p2,
                psi3: p3,
                psi4: p4,
                relative_sign: Sign::Plus,
                charlie,
            })
        })
        .collect()
}

/// All 144 seven-qubit specs whose GHZ kinds come from one ancilla family.
pub fn enumerate_seven_qubit_specs(
    family: GhzFamily,
    charlie: CharlieBasis,
) -> Vec<SevenQubitChannelSpec> {
    let kinds: Vec<GhzKind> = GhzKind::all().filter(|g| g.family() == family).collect();
    let pairs: Vec<(GhzKind, GhzKind)> = kinds
        .iter()
        .flat_map(|&a| kinds.iter().map(move |&b| (a, b)))
        .filter(|(a, b)| a != b)
        .collect();
    pairs
        .iter()
        .flat_map(|&(g1, g3)| {
            pairs.iter().map(move |&(g2, g4)| SevenQubitChannelSpec {
                ghz1: g1,
                ghz2: g2,
                ghz3: g3,
                ghz4: g4,
                relative_sign: Sign::Plus,
                charlie,
            })
        })
        .collect()
}
