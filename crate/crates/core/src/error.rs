use alloc::string::String;

use crate::network::TopologyViolation;
use crate::time::HyTime;

/// Failures raised while stepping components.
///
/// Variants split into kernel-ordering defects (the coordinator called an
/// action out of order) and model defects (the model itself is ill-formed).
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum KernelError {
    #[error("{path}: output requested at {t} before last transition time {t_last}")]
    Causality {
        path: String,
        t: HyTime,
        t_last: HyTime,
    },

    #[error("{path}: output requested at {t} after next transition time {next}")]
    MissedTransition {
        path: String,
        t: HyTime,
        next: HyTime,
    },

    #[error("{path}: value read before any output action")]
    ValueBeforeOutput { path: String },

    #[error("{path}: transition at {t} is neither scheduled nor condition-triggered")]
    SpuriousTransition { path: String, t: HyTime },

    #[error("{path}: more than {bound} conditional transitions at {t}")]
    Livelock {
        path: String,
        t: HyTime,
        bound: usize,
    },

    #[error("{path}: ranking is not a permutation of the ranked set")]
    InvalidRanking { path: String },

    #[error("{path}: no definition for process `{name}`")]
    UnknownProcess { path: String, name: String },

    #[error("{path}: input rejected: {reason}")]
    InputRejected { path: String, reason: String },

    #[error("{path}: invalid topology: {violation}")]
    InvalidTopology {
        path: String,
        violation: TopologyViolation,
    },

    #[error("{path}: unknown component model `{model}`")]
    UnknownModel { path: String, model: String },

    #[error("clock did not advance: {previous} then {next}")]
    NonMonotonicClock { previous: HyTime, next: HyTime },
}

impl KernelError {
    /// True for errors caused by an ill-formed model rather than by the
    /// coordinator calling actions out of order.
    pub fn is_model_defect(&self) -> bool {
        matches!(
            self,
            KernelError::Livelock { .. }
                | KernelError::InvalidRanking { .. }
                | KernelError::UnknownProcess { .. }
                | KernelError::InputRejected { .. }
                | KernelError::InvalidTopology { .. }
                | KernelError::UnknownModel { .. }
        )
    }
}

/// Reason returned by a model's input function when it refuses a value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputRejected(pub String);

impl<S: Into<String>> From<S> for InputRejected {
    fn from(s: S) -> Self {
        InputRejected(s.into())
    }
}
