//! Exact simulation: positive stable variables, MPH* reward paths and GMML
//! vectors through the stable product representation.

mod batch;
mod chain;
mod rng;
mod stable;

pub use batch::{sample_batch, SampleBatch};
pub use chain::{sample_gmml, sample_mph_rewards, GmmlSampler, MphSampler, Sampler};
pub use rng::{Fingerprint, RngState, ALGORITHM};
pub use stable::{sample_positive_stable, StableSpec};
