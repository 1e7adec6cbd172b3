//! Simulation and analysis kernels for boson sampling under realistic noise.
//!
//! The crate covers three layers:
//!
//! - **Generation**: Haar-random interferometers, exact chain-rule sampling
//!   of output patterns, and noise channels for photon partial
//!   distinguishability, balanced photon loss, and detector dark counts
//!   ([`linalg`], [`sampler`]).
//! - **Ground truth**: brute-force probability oracles for every supported
//!   noise model, pattern enumeration, and total variation distance, usable
//!   wherever the output space is small enough to enumerate
//!   ([`distributions`]).
//! - **Evaluation**: photon-number correlators of arbitrary order built
//!   from set-partition cumulants, Pearson/Spearman/deviation-ratio
//!   comparisons against a reference, and the cloud statistics (coefficient
//!   of variation and skewness over input combinations) that track the
//!   noise level without knowledge of the interferometer ([`stats`]).
//!
//! Everything is deterministic given explicit seeds: samplers derive one
//! counter-based random stream per shot index, so results do not depend on
//! scheduling or worker count. The crate is `no_std` (with `alloc`); IO and
//! file formats live in the companion `bosonbench` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod combinatorics;
pub mod distributions;
mod error;
pub mod linalg;
mod pattern;
pub mod rng;
pub mod sampler;
pub mod stats;

pub use distributions::ExactDistribution;
pub use error::{Error, Result};
pub use linalg::ComplexMatrix;
pub use pattern::OccupationPattern;
pub use sampler::{NoiseConfig, SampleSet};
pub use stats::{CorrelatorSet, EvaluationReport, MomentSource};
