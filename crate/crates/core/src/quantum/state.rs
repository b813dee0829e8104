use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A single complex amplitude.
pub type ComplexAmp = Complex64;

/// Tolerance on normalization and probability sums.
pub const NORM_TOLERANCE: f64 = 1e-9;

/// Branches lighter than this are dropped from measurement results.
pub const PRUNE_THRESHOLD: f64 = 1e-12;

/// Which member of the entangled pair an operation touches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QubitSlot {
    /// Bob's retained qubit.
    Home,
    /// The qubit sent to Alice and back.
    Travel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of_index(index: usize) -> Self {
        if ((index >> 1) ^ index) & 1 == 1 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }
}

/// Pure state of Bob's home qubit and the travel qubit.
///
/// Amplitudes are indexed by `2 * home_bit + travel_bit`, so index 1 is
/// `|0>_B|1>_A` and index 2 is `|1>_B|0>_A`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[ComplexAmp; 4]", into = "[ComplexAmp; 4]")]
pub struct TwoQubitState {
    amps: [ComplexAmp; 4],
}

impl TwoQubitState {
    /// Validates finiteness and normalization.
    pub fn new(amps: [ComplexAmp; 4]) -> Result<Self> {
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { amps })
    }

    /// Rescales a nonzero vector to unit norm.
    pub(crate) fn normalized(amps: [ComplexAmp; 4]) -> Self {
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        debug_assert!(norm > 0.0);
        Self {
            amps: amps.map(|a| a / norm),
        }
    }

    pub(crate) fn from_amps_unchecked(amps: [ComplexAmp; 4]) -> Self {
        Self { amps }
    }

    /// The product state `|home>_B |travel>_A`.
    pub fn basis(home: u8, travel: u8) -> Self {
        let mut amps = [ComplexAmp::new(0.0, 0.0); 4];
        amps[index(home, travel)] = ComplexAmp::new(1.0, 0.0);
        Self { amps }
    }

    pub fn amps(&self) -> &[ComplexAmp; 4] {
        &self.amps
    }

    pub fn amp(&self, home: u8, travel: u8) -> ComplexAmp {
        self.amps[index(home, travel)]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> ComplexAmp {
        self.amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Basis indices carrying non-negligible weight.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        (0..4).filter(|&k| self.amps[k].norm_sqr() >= PRUNE_THRESHOLD)
    }

    /// Parity shared by every supported basis state, if there is one.
    pub fn parity(&self) -> Option<Parity> {
        let mut support = self.support().map(Parity::of_index);
        let first = support.next()?;
        support.all(|p| p == first).then_some(first)
    }

    /// The basis index holding all the weight, if the state is a
    /// computational-basis product state.
    pub fn z_product_index(&self) -> Option<usize> {
        (0..4).find(|&k| self.amps[k].norm_sqr() >= 1.0 - NORM_TOLERANCE)
    }

    pub fn scaled(&self, factor: ComplexAmp) -> Self {
        Self {
            amps: self.amps.map(|a| a * factor),
        }
    }
}

impl TryFrom<[ComplexAmp; 4]> for TwoQubitState {
    type Error = Error;

    fn try_from(amps: [ComplexAmp; 4]) -> Result<Self> {
        Self::new(amps)
    }
}

impl From<TwoQubitState> for [ComplexAmp; 4] {
    fn from(state: TwoQubitState) -> Self {
        state.amps
    }
}

pub(crate) fn index(home: u8, travel: u8) -> usize {
    debug_assert!(home < 2 && travel < 2);
    2 * home as usize + travel as usize
}

/// True iff `|<a|b>| >= 1 - 1e-9`, i.e. the states differ at most by a
/// global phase.
pub fn states_equal_up_to_phase(a: &TwoQubitState, b: &TwoQubitState) -> bool {
    a.inner(b).norm() >= 1.0 - NORM_TOLERANCE
}

fn fmt_real(x: f64) -> String {
    let s = format!("{x:.4}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// Writes the state in ket notation, e.g. `0.7071|01> - 0.7071|10>`,
/// with the home bit first.
impl fmt::Display for TwoQubitState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, k) in self.support().enumerate() {
            let a = self.amps[k];
            let (negative, coeff) = if a.im.abs() < 1e-12 {
                let mag = a.re.abs();
                let coeff = if (mag - 1.0).abs() < 1e-12 { String::new() } else { fmt_real(mag) };
                (a.re < 0.0, coeff)
            } else {
                (false, format!("({}{:+.4}i)", fmt_real(a.re), a.im))
            };
            match (n, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            write!(f, "{coeff}|{}{}>", k >> 1, k & 1)?;
        }
        Ok(())
    }
}
