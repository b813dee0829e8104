//! Eavesdropper models acting on the travel qubit.
//!
//! An attack is a branch transformer: given the transit leg and the joint
//! state, it returns every possible (probability, post-state, record)
//! outcome. Exact enumeration walks all branches; simulation samples one.

use std::f64::consts::{FRAC_PI_2, TAU};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantum::{measure_z, QubitSlot, TwoQubitState, PRUNE_THRESHOLD};

/// Transit direction of the travel qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Leg {
    /// Bob to Alice, after Bob's encoding.
    #[serde(rename = "b2a")]
    BtoA,
    /// Alice back to Bob, after Alice's encoding.
    #[serde(rename = "a2b")]
    AtoB,
}

/// Non-empty set of legs an attack is active on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Legs {
    #[default]
    #[serde(rename = "b2a")]
    BtoA,
    #[serde(rename = "a2b")]
    AtoB,
    Both,
}

impl Legs {
    pub fn contains(self, leg: Leg) -> bool {
        matches!(
            (self, leg),
            (Legs::Both, _) | (Legs::BtoA, Leg::BtoA) | (Legs::AtoB, Leg::AtoB)
        )
    }

    pub fn token(self) -> &'static str {
        match self {
            Legs::BtoA => "b2a",
            Legs::AtoB => "a2b",
            Legs::Both => "both",
        }
    }
}

impl fmt::Display for Legs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for Legs {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "b2a" => Ok(Legs::BtoA),
            "a2b" => Ok(Legs::AtoB),
            "both" => Ok(Legs::Both),
            _ => Err(Error::UnknownToken {
                kind: "legs",
                token: s.to_string(),
            }),
        }
    }
}

/// What Eve learned on one leg of one run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EveRecord {
    pub leg: Leg,
    pub basis_description: String,
    pub outcome: u8,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AttackBranch {
    pub probability: f64,
    pub post_state: TwoQubitState,
    pub record: Option<EveRecord>,
}

impl AttackBranch {
    fn passthrough(state: &TwoQubitState) -> Self {
        Self {
            probability: 1.0,
            post_state: *state,
            record: None,
        }
    }
}

pub trait AttackModel: Send + Sync {
    fn legs(&self) -> Option<Legs>;

    /// Branches produced on `leg`. An inactive leg yields exactly one
    /// pass-through branch.
    fn intercept(&self, leg: Leg, state: &TwoQubitState) -> Vec<AttackBranch>;

    fn describe(&self) -> String;
}

/// Measurement basis `{cosθ|0> + e^{iφ}sinθ|1>, sinθ|0> − e^{iφ}cosθ|1>}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterceptBasis {
    theta: f64,
    phi: f64,
}

impl InterceptBasis {
    pub const Z: InterceptBasis = InterceptBasis { theta: 0.0, phi: 0.0 };

    /// `theta` in `[0, π/2]`, `phi` in `[0, 2π)`.
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=FRAC_PI_2).contains(&theta) || !(0.0..TAU).contains(&phi) {
            return Err(Error::InvalidBasis { theta, phi });
        }
        Ok(Self { theta, phi })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// The two basis vectors as `[amp of |0>, amp of |1>]`.
    pub fn vectors(&self) -> [[Complex64; 2]; 2] {
        let (s, c) = self.theta.sin_cos();
        let phase = Complex64::from_polar(1.0, self.phi);
        [
            [Complex64::new(c, 0.0), phase * s],
            [Complex64::new(s, 0.0), -phase * c],
        ]
    }
}

/// Measures the travel qubit in an arbitrary basis and resends the
/// collapsed eigenstate.
pub fn measure_travel_in_basis(
    state: &TwoQubitState,
    basis: &InterceptBasis,
) -> Vec<(u8, f64, TwoQubitState)> {
    let mut out = Vec::with_capacity(2);
    for (k, b) in basis.vectors().iter().enumerate() {
        let mut amps = [Complex64::new(0.0, 0.0); 4];
        let mut probability = 0.0;
        for home in 0..2u8 {
            let c = b[0].conj() * state.amp(home, 0) + b[1].conj() * state.amp(home, 1);
            probability += c.norm_sqr();
            amps[2 * home as usize] = c * b[0];
            amps[2 * home as usize + 1] = c * b[1];
        }
        if probability >= PRUNE_THRESHOLD {
            out.push((k as u8, probability, TwoQubitState::normalized(amps)));
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Attack {
    #[default]
    None,
    /// Measure-and-forward in the computational basis.
    ZBasis { legs: Legs },
    /// Measure-and-forward in a general basis.
    Basis { basis: InterceptBasis, legs: Legs },
}

pub fn no_attack() -> Attack {
    Attack::None
}

pub fn z_basis_disturbance(legs: Legs) -> Attack {
    Attack::ZBasis { legs }
}

pub fn basis_intercept(basis: InterceptBasis, legs: Legs) -> Attack {
    Attack::Basis { basis, legs }
}

impl Attack {
    /// Builds an attack from the `none | z-basis | basis:theta=<r>,phi=<r>`
    /// grammar plus a leg set.
    pub fn parse(spec: &str, legs: Legs) -> Result<Self> {
        Ok(match spec.parse::<AttackKind>()? {
            AttackKind::None => Attack::None,
            AttackKind::ZBasis => Attack::ZBasis { legs },
            AttackKind::Basis(basis) => Attack::Basis { basis, legs },
        })
    }

    /// True for attacks outside the computational-basis disturbance attack.
    pub fn is_extension(&self) -> bool {
        matches!(self, Attack::Basis { .. })
    }

    fn basis_label(&self) -> String {
        match self {
            Attack::None => String::new(),
            Attack::ZBasis { .. } => "B_z".to_string(),
            Attack::Basis { basis, .. } => {
                format!("theta={},phi={}", basis.theta, basis.phi)
            }
        }
    }
}

/// The leg-independent part of an attack selection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AttackKind {
    None,
    ZBasis,
    Basis(InterceptBasis),
}

impl FromStr for AttackKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let unknown = || Error::UnknownToken {
            kind: "attack",
            token: s.to_string(),
        };
        match s {
            "none" => return Ok(AttackKind::None),
            "z-basis" => return Ok(AttackKind::ZBasis),
            _ => {}
        }
        let params = s.strip_prefix("basis:").ok_or_else(unknown)?;
        let (mut theta, mut phi) = (None, None);
        for pair in params.split(',') {
            let (key, value) = pair.split_once('=').ok_or_else(unknown)?;
            let value: f64 = value.trim().parse().map_err(|_| unknown())?;
            match key.trim() {
                "theta" if theta.is_none() => theta = Some(value),
                "phi" if phi.is_none() => phi = Some(value),
                _ => return Err(unknown()),
            }
        }
        let basis = InterceptBasis::new(theta.ok_or_else(unknown)?, phi.unwrap_or(0.0))?;
        Ok(AttackKind::Basis(basis))
    }
}

impl AttackModel for Attack {
    fn legs(&self) -> Option<Legs> {
        match self {
            Attack::None => None,
            Attack::ZBasis { legs } | Attack::Basis { legs, .. } => Some(*legs),
        }
    }

    fn intercept(&self, leg: Leg, state: &TwoQubitState) -> Vec<AttackBranch> {
        if !self.legs().is_some_and(|l| l.contains(leg)) {
            return vec![AttackBranch::passthrough(state)];
        }
        let record = |outcome| EveRecord {
            leg,
            basis_description: self.basis_label(),
            outcome,
        };
        match self {
            Attack::None => unreachable!(),
            Attack::ZBasis { .. } => measure_z(state, QubitSlot::Travel)
                .into_iter()
                .map(|b| AttackBranch {
                    probability: b.probability,
                    post_state: b.post_state,
                    record: Some(record(b.outcome)),
                })
                .collect(),
            Attack::Basis { basis, .. } => measure_travel_in_basis(state, basis)
                .into_iter()
                .map(|(outcome, probability, post_state)| AttackBranch {
                    probability,
                    post_state,
                    record: Some(record(outcome)),
                })
                .collect(),
        }
    }

    fn describe(&self) -> String {
        match self {
            Attack::None => "none".to_string(),
            Attack::ZBasis { legs } => format!("z-basis legs={legs}"),
            Attack::Basis { basis, legs } => {
                format!("basis:theta={},phi={} legs={legs}", basis.theta, basis.phi)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{bell_state_vector, states_equal_up_to_phase, BellLabel};
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn no_attack_passes_through() {
        let s = bell_state_vector(BellLabel::PsiPlus);
        for leg in [Leg::BtoA, Leg::AtoB] {
            let b = no_attack().intercept(leg, &s);
            assert_eq!(b, vec![AttackBranch::passthrough(&s)]);
        }
    }

    #[test]
    fn z_basis_collapses_psi_plus() {
        let attack = z_basis_disturbance(Legs::BtoA);
        let branches = attack.intercept(Leg::BtoA, &bell_state_vector(BellLabel::PsiPlus));
        assert_eq!(branches.len(), 2);
        let states: Vec<_> = branches.iter().map(|b| b.post_state.z_product_index()).collect();
        assert!(states.contains(&Some(1)) && states.contains(&Some(2)));
        for b in &branches {
            assert!((b.probability - 0.5).abs() < 1e-12);
            let rec = b.record.as_ref().unwrap();
            assert_eq!(rec.leg, Leg::BtoA);
            assert_eq!(rec.basis_description, "B_z");
        }
        // inactive leg
        let passthrough = attack.intercept(Leg::AtoB, &bell_state_vector(BellLabel::PsiPlus));
        assert_eq!(passthrough.len(), 1);
        assert!(passthrough[0].record.is_none());
    }

    #[test]
    fn z_basis_on_eigenstate_is_deterministic() {
        let s = TwoQubitState::basis(0, 1);
        let branches = z_basis_disturbance(Legs::BtoA).intercept(Leg::BtoA, &s);
        assert_eq!(branches.len(), 1);
        assert_eq!(branches[0].probability, 1.0);
        assert_eq!(branches[0].post_state, s);
    }

    #[test]
    fn diagonal_basis_probabilities() {
        let basis = InterceptBasis::new(FRAC_PI_4, 0.0).unwrap();
        let branches = basis_intercept(basis, Legs::BtoA)
            .intercept(Leg::BtoA, &bell_state_vector(BellLabel::PsiPlus));
        assert_eq!(branches.len(), 2);
        for b in &branches {
            assert!((b.probability - 0.5).abs() < 1e-12);
        }
        // a travel qubit already in |+> is an eigenstate of this basis
        let plus = TwoQubitState::new([
            Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
            Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
        ])
        .unwrap();
        let branches = basis_intercept(basis, Legs::BtoA).intercept(Leg::BtoA, &plus);
        assert_eq!(branches.len(), 1);
        assert!(states_equal_up_to_phase(&branches[0].post_state, &plus));
    }

    #[test]
    fn basis_angle_validation() {
        assert!(InterceptBasis::new(-0.1, 0.0).is_err());
        assert!(InterceptBasis::new(1.6, 0.0).is_err());
        assert!(InterceptBasis::new(0.0, TAU).is_err());
        assert!(InterceptBasis::new(FRAC_PI_2, 0.0).is_ok());
    }

    #[test]
    fn attack_grammar() {
        assert_eq!(Attack::parse("none", Legs::Both).unwrap(), Attack::None);
        assert_eq!(
            Attack::parse("z-basis", Legs::Both).unwrap(),
            Attack::ZBasis { legs: Legs::Both }
        );
        let a = Attack::parse("basis:theta=0.5,phi=1.25", Legs::BtoA).unwrap();
        assert_eq!(
            a,
            Attack::Basis {
                basis: InterceptBasis::new(0.5, 1.25).unwrap(),
                legs: Legs::BtoA
            }
        );
        assert!(a.is_extension());
        for bad in ["x-basis", "basis:", "basis:theta=a", "basis:phi=1", "basis:theta=0,theta=1", "basis:theta=3"] {
            assert!(Attack::parse(bad, Legs::BtoA).is_err(), "{bad}");
        }
        assert_eq!("both".parse::<Legs>().unwrap(), Legs::Both);
        assert!("ab".parse::<Legs>().is_err());
    }
}
