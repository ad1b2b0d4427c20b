use thiserror::Error;

/// Errors produced by state constructors and post-selection operations.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Normalization of a state with vanishing norm was requested, e.g. after
    /// post-selecting a photon-number block that carries no amplitude.
    #[error("cannot normalize a zero-norm state (empty post-selection block)")]
    ZeroNorm,

    /// The requested total-photon-number block carries no amplitude.
    #[error("photon-number block N = {n} carries no amplitude")]
    EmptyBlock { n: usize },

    /// The odd cat state is undefined at beta = 0.
    #[error("odd cat state is undefined at beta = 0")]
    OddCatAtZero,

    /// NOON states are defined for N >= 1.
    #[error("NOON state requires N >= 1, got N = {n}")]
    InvalidNoonOrder { n: usize },

    /// The closed-form ideal beam-splitter input exists only for positive
    /// even N; with gamma = i*pi/4 the odd-N NOON fidelity is always < 1.
    #[error(
        "ideal input state requires a positive even photon number, got N = {n}; \
         only even-N NOON states are produced exactly by the 50-50 beam splitter"
    )]
    EvenPhotonNumberRequired { n: usize },

    /// The disentangled beam-splitter form requires |gamma| < pi/2.
    #[error("beam-splitter mixing magnitude |gamma| = {magnitude} must be < pi/2")]
    GammaOutOfRange { magnitude: f64 },

    /// The two independent evaluation routes disagreed beyond tolerance.
    #[error("internal cross-check failed in {context}: routes differ by {deviation:.3e}")]
    CrossCheckFailed { context: &'static str, deviation: f64 },

    /// A sweep or optimization grid was empty or not ascending.
    #[error("invalid parameter grid: {reason}")]
    InvalidGrid { reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
