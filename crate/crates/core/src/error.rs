use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("segment duration mismatch: video has {video} s, timing has {timing} s")]
    SegmentDurationMismatch { video: f64, timing: f64 },

    #[error("both transmission and computing rates are zero")]
    DegenerateRates,

    #[error("invalid timing: {0}")]
    InvalidTiming(String),

    #[error("grid step {step} s leaves no feasible lattice point (needs 0 < step <= {limit} s)")]
    InvalidStep { step: f64, limit: f64 },

    #[error("invalid sweep: {0}")]
    InvalidSweep(String),

    #[error("zero-forcing needs at least as many antennas as users ({antennas} < {users})")]
    ZfInfeasible { antennas: usize, users: usize },

    #[error("channel matrix draw was numerically singular after {retries} retries")]
    SingularDraw { retries: usize },
}

pub(crate) fn check_positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            reason: format!("must be finite and > 0, got {value}"),
        })
    }
}

pub(crate) fn check_non_negative(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            reason: format!("must be finite and >= 0, got {value}"),
        })
    }
}
