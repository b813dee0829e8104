use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("state amplitudes must be finite")]
    NonFinite,

    #[error("state is not normalized (squared norm {0})")]
    NotNormalized(f64),

    #[error("intercept basis angle out of range: theta={theta}, phi={phi}")]
    InvalidBasis { theta: f64, phi: f64 },

    #[error("probability {0} is outside [0, 1]")]
    InvalidProbability(f64),

    #[error("unknown {kind} token `{token}`")]
    UnknownToken { kind: &'static str, token: String },

    #[error("check_control called on a message-mode transcript")]
    NotControlRun,

    #[error("no control-mode runs among {trials} trials")]
    InsufficientSamples { trials: u64 },

    #[error("trial count must be at least 1")]
    NoTrials,

    #[error("per-run detection probability is not uniform across configurations ({min} to {max})")]
    NonUniformDetection { min: f64, max: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
