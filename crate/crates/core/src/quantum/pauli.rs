use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::bell::BellLabel;
use super::state::{index, QubitSlot, TwoQubitState};
use crate::error::Error;

/// A single-qubit Pauli operation carrying a 2-bit message.
///
/// Bits map as `00 -> I`, `01 -> σz`, `10 -> σx`, `11 -> iσy`. With this
/// assignment, composition of operations (up to phase) is XOR of the bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "EncodingRepr", into = "EncodingRepr")]
pub enum PauliEncoding {
    Identity,
    SigmaZ,
    SigmaX,
    ISigmaY,
}

impl PauliEncoding {
    /// Ordered by message bits.
    pub const ALL: [PauliEncoding; 4] = [
        PauliEncoding::Identity,
        PauliEncoding::SigmaZ,
        PauliEncoding::SigmaX,
        PauliEncoding::ISigmaY,
    ];

    pub fn from_bits(bits: MessageBits) -> Self {
        Self::ALL[bits.value() as usize]
    }

    pub fn bits(self) -> MessageBits {
        MessageBits(self as u8)
    }

    pub fn token(self) -> &'static str {
        match self {
            PauliEncoding::Identity => "identity",
            PauliEncoding::SigmaZ => "sigma-z",
            PauliEncoding::SigmaX => "sigma-x",
            PauliEncoding::ISigmaY => "i-sigma-y",
        }
    }

    /// Row-major 2x2 matrix.
    pub fn matrix(self) -> [[Complex64; 2]; 2] {
        let o = Complex64::new(0.0, 0.0);
        let l = Complex64::new(1.0, 0.0);
        match self {
            PauliEncoding::Identity => [[l, o], [o, l]],
            PauliEncoding::SigmaZ => [[l, o], [o, -l]],
            PauliEncoding::SigmaX => [[o, l], [l, o]],
            PauliEncoding::ISigmaY => [[o, l], [-l, o]],
        }
    }
}

impl fmt::Display for PauliEncoding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for PauliEncoding {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        if let Some(op) = PauliEncoding::ALL.into_iter().find(|p| p.token() == s) {
            return Ok(op);
        }
        s.parse::<MessageBits>().map(PauliEncoding::from_bits)
    }
}

/// A 2-bit classical message, written `00`..`11`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct MessageBits(u8);

impl MessageBits {
    pub const ALL: [MessageBits; 4] = [MessageBits(0), MessageBits(1), MessageBits(2), MessageBits(3)];

    pub fn new(value: u8) -> Option<Self> {
        (value < 4).then_some(Self(value))
    }

    pub fn value(self) -> u8 {
        self.0
    }
}

impl fmt::Display for MessageBits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:02b}", self.0)
    }
}

impl FromStr for MessageBits {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "00" => Ok(Self(0)),
            "01" => Ok(Self(1)),
            "10" => Ok(Self(2)),
            "11" => Ok(Self(3)),
            _ => Err(Error::UnknownToken {
                kind: "message bits",
                token: s.to_string(),
            }),
        }
    }
}

impl TryFrom<String> for MessageBits {
    type Error = Error;

    fn try_from(s: String) -> Result<Self, Error> {
        s.parse()
    }
}

impl From<MessageBits> for String {
    fn from(bits: MessageBits) -> Self {
        bits.to_string()
    }
}

#[derive(Serialize, Deserialize)]
struct EncodingRepr {
    op: String,
    bits: MessageBits,
}

impl TryFrom<EncodingRepr> for PauliEncoding {
    type Error = Error;

    fn try_from(repr: EncodingRepr) -> Result<Self, Error> {
        let op = PauliEncoding::ALL
            .into_iter()
            .find(|p| p.token() == repr.op)
            .ok_or_else(|| Error::UnknownToken {
                kind: "Pauli operation",
                token: repr.op.clone(),
            })?;
        if op.bits() != repr.bits {
            return Err(Error::UnknownToken {
                kind: "Pauli encoding",
                token: format!("{}/{}", repr.op, repr.bits),
            });
        }
        Ok(op)
    }
}

impl From<PauliEncoding> for EncodingRepr {
    fn from(p: PauliEncoding) -> Self {
        EncodingRepr {
            op: p.token().to_string(),
            bits: p.bits(),
        }
    }
}

/// Applies `P ⊗ I` (home slot) or `I ⊗ P` (travel slot).
pub fn apply_pauli(state: &TwoQubitState, slot: QubitSlot, enc: PauliEncoding) -> TwoQubitState {
    let m = enc.matrix();
    let mut out = [Complex64::new(0.0, 0.0); 4];
    for other in 0..2u8 {
        for row in 0..2u8 {
            for col in 0..2u8 {
                let (dst, src) = match slot {
                    QubitSlot::Home => (index(row, other), index(col, other)),
                    QubitSlot::Travel => (index(other, row), index(other, col)),
                };
                out[dst] += m[row as usize][col as usize] * state.amps()[src];
            }
        }
    }
    TwoQubitState::from_amps_unchecked(out)
}

use BellLabel::{PhiMinus as FM, PhiPlus as FP, PsiMinus as SM, PsiPlus as SP};

/// `PAULI_ON_BELL[enc][label]`, indexed by `PauliEncoding` bits and
/// `BellLabel` declaration order (psi-, psi+, phi-, phi+).
const PAULI_ON_BELL: [[BellLabel; 4]; 4] = [
    // identity
    [SM, SP, FM, FP],
    // sigma-z
    [SP, SM, FP, FM],
    // sigma-x
    [FM, FP, SM, SP],
    // i-sigma-y
    [FP, FM, SP, SM],
];

/// The Bell state reached (up to phase) by applying `enc` to one qubit
/// of `label`. Either slot gives the same answer.
pub fn pauli_on_bell(enc: PauliEncoding, label: BellLabel) -> BellLabel {
    PAULI_ON_BELL[enc as usize][label.ordinal()]
}

/// The single operation equivalent (up to phase) to applying `b` then `a`.
pub fn compose_pauli(a: PauliEncoding, b: PauliEncoding) -> PauliEncoding {
    PauliEncoding::ALL[(a as usize) ^ (b as usize)]
}
