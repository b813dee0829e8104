use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::state::{Parity, TwoQubitState};
use crate::error::Error;

/// One of the four Bell states. Serves both as a preparation and as a
/// Bell-measurement outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BellLabel {
    PsiMinus,
    PsiPlus,
    PhiMinus,
    PhiPlus,
}

impl BellLabel {
    pub const ALL: [BellLabel; 4] = [
        BellLabel::PsiMinus,
        BellLabel::PsiPlus,
        BellLabel::PhiMinus,
        BellLabel::PhiPlus,
    ];

    pub(crate) fn ordinal(self) -> usize {
        self as usize
    }

    pub fn token(self) -> &'static str {
        match self {
            BellLabel::PsiMinus => "psi-minus",
            BellLabel::PsiPlus => "psi-plus",
            BellLabel::PhiMinus => "phi-minus",
            BellLabel::PhiPlus => "phi-plus",
        }
    }

    pub fn parity(self) -> Parity {
        parity_of(self)
    }

    pub fn state(self) -> TwoQubitState {
        bell_state_vector(self)
    }
}

impl fmt::Display for BellLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BellLabel::PsiMinus => "psi-",
            BellLabel::PsiPlus => "psi+",
            BellLabel::PhiMinus => "phi-",
            BellLabel::PhiPlus => "phi+",
        })
    }
}

impl FromStr for BellLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        BellLabel::ALL
            .into_iter()
            .find(|l| l.token() == s || l.to_string() == s)
            .ok_or_else(|| Error::UnknownToken {
                kind: "Bell state",
                token: s.to_string(),
            })
    }
}

/// Canonical amplitude vector: `psi± = (|01> ± |10>)/√2`,
/// `phi± = (|00> ± |11>)/√2`.
pub fn bell_state_vector(label: BellLabel) -> TwoQubitState {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let z = Complex64::new(0.0, 0.0);
    let p = Complex64::new(h, 0.0);
    let m = Complex64::new(-h, 0.0);
    let amps = match label {
        BellLabel::PsiMinus => [z, p, m, z],
        BellLabel::PsiPlus => [z, p, p, z],
        BellLabel::PhiMinus => [p, z, z, m],
        BellLabel::PhiPlus => [p, z, z, p],
    };
    TwoQubitState::from_amps_unchecked(amps)
}

pub fn parity_of(label: BellLabel) -> Parity {
    match label {
        BellLabel::PsiMinus | BellLabel::PsiPlus => Parity::Odd,
        BellLabel::PhiMinus | BellLabel::PhiPlus => Parity::Even,
    }
}
