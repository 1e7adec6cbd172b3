//! Error type shared by all modules of the crate.

use alloc::string::String;

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;

/// Everything that can go wrong in the simulation and analysis kernels.
///
/// Numerical routines never panic on bad input; they return one of these
/// variants instead. `NegativeProbability` and `NonRealProbability` signal
/// internal inconsistencies (a computed probability outside its clamping
/// band), all other variants are caller errors.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid matrix dimension: {0}")]
    InvalidDimension(String),

    #[error("matrix dimension {dim} exceeds the permanent kernel limit {max}")]
    DimensionTooLarge { dim: usize, max: usize },

    #[error("photon-number mismatch: input total {input}, output total {output}")]
    PhotonNumberMismatch { input: u32, output: u32 },

    #[error("index sequence is not a permutation of 0..{len}")]
    InvalidPermutation { len: usize },

    #[error("pattern enumeration would produce {count} patterns, above the cap {cap}")]
    PatternCountTooLarge { count: u64, cap: u64 },

    #[error("input pattern has a mode with more than one photon; only collision-free inputs are supported")]
    CollisionInput,

    #[error("parameter {name} = {value} outside its legal range")]
    ParameterOutOfRange { name: &'static str, value: f64 },

    #[error("computed probability {value} is negative beyond the clamping band")]
    NegativeProbability { value: f64 },

    #[error("computed probability has imaginary residue {imaginary} above tolerance")]
    NonRealProbability { imaginary: f64 },

    #[error("noise configuration admits no n-photon output patterns (zero normalization)")]
    DegenerateConfig,

    #[error("post-selection infeasible: {accepted} accepted out of {raw} raw shots")]
    InfeasiblePostSelection { accepted: u64, raw: u64 },

    #[error("photon count {n} exceeds the chain-rule sampler limit {max}")]
    PhotonCountTooLarge { n: u32, max: u32 },

    #[error("moment source holds no samples or patterns")]
    EmptySource,

    #[error("invalid mode subset: {0}")]
    InvalidModes(String),

    #[error("correlator order {order} outside the supported range 1..={max}")]
    OrderOutOfRange { order: usize, max: usize },

    #[error("{count} mode subsets requested, above the cap {cap}")]
    SubsetCountExceedsCap { count: u64, cap: u64 },

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("correlator-sum ratio denominator {comp_sum} below floor (numerator {test_sum})")]
    GammaDenominatorNearZero { test_sum: f64, comp_sum: f64 },

    #[error("correlator sets differ in order or key set")]
    CorrelatorKeyMismatch,
}
