use thiserror::Error;

/// Errors raised by the evaluators and certifiers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unphysical Bloch vector: norm {norm} exceeds 1")]
    UnphysicalBloch { norm: f64 },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid priors ({first}, {second}): must be non-negative and sum to 1")]
    InvalidPriors { first: f64, second: f64 },

    #[error("invalid argument `{name}` = {value}: {reason}")]
    InvalidArgument {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("negative radicand {0} in square-root term")]
    NegativeRadicand(f64),

    #[error("inconsistent separation statistics: squared separation {0} is negative")]
    InconsistentStatistics(f64),

    #[error("degenerate conditioning: outcome {outcome:+} at setting {setting} has probability {probability}")]
    DegenerateConditioning {
        setting: usize,
        outcome: i8,
        probability: f64,
    },

    #[error("conditional states at setting {setting} are not pure (Bloch norms {norm_plus}, {norm_minus})")]
    MixedConditionalStates {
        setting: usize,
        norm_plus: f64,
        norm_minus: f64,
    },

    #[error("infeasible constraint set: {0}")]
    Infeasible(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_range(name: &'static str, value: f64, lo: f64, hi: f64) -> Result<()> {
    if value.is_finite() && value >= lo && value <= hi {
        Ok(())
    } else {
        Err(Error::InvalidArgument {
            name,
            value,
            reason: "out of range",
        })
    }
}
