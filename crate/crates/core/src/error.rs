use crate::energy::Region;
use crate::eigen::EigenfunctionKind;
use thiserror::Error;

/// Library-wide error type.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("eigenfunction kind {kind:?} is not defined in region {region:?}")]
    KindRegionMismatch {
        kind: EigenfunctionKind,
        region: Region,
    },

    #[error("energy lies on the real axis; the resolvent kernel needs Im E != 0")]
    OnRealAxis,

    #[error("expected an energy in the {expected} half-plane, got region {region:?}")]
    WrongRegion {
        expected: &'static str,
        region: Region,
    },

    #[error("energy must be strictly positive, got {energy}")]
    NonPositiveEnergy { energy: f64 },

    #[error("integrand is not finite near r = {at}")]
    NonFiniteIntegrand { at: f64 },

    #[error("quadrature tolerance not met: achieved {achieved:e}, requested {requested:e}")]
    ToleranceNotMet { achieved: f64, requested: f64 },

    #[error("no finite truncation radius: integrand stays above {threshold:e}")]
    TruncationFailed { threshold: f64 },

    #[error("limit sequence diverges")]
    LimitDiverges,

    #[error("limit extrapolation did not settle; residual estimate {estimate:e}")]
    NoConvergence { estimate: f64 },

    #[error("ODE step size underflow: requested accuracy unattainable")]
    StepSizeUnderflow,

    #[error("energy function grows towards E = 0+; inverse transform undefined")]
    SingularEndpoint,

    #[error("symbol magnitude {magnitude:e} exceeds the bounded-function probe limit")]
    UnboundedSymbol { magnitude: f64 },

    #[error("invalid test function: {0}")]
    InvalidTestFunction(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid spec: {0}")]
    InvalidSpec(String),
}

pub type Result<T> = std::result::Result<T, Error>;
