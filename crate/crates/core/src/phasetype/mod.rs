//! Phase-type (PH) and multivariate MPH* representations: validation,
//! univariate functionals, joint Laplace transforms, reward projections and
//! feed-forward chains.

mod ops;
mod random;
mod types;

pub use ops::{
    ff_block_initial, ff_joint_density, ff_joint_fractional_moment, ff_marginal, ff_to_mph_star, mph_laplace,
    ph_cdf, ph_density, ph_fractional_moment, ph_laplace, ph_survival, project, ProjectionResult, ZERO_REWARD_TOL,
};
pub(crate) use ops::{censor, partition_rates};
pub use random::{random_feed_forward, random_mph_star, random_ph, random_subintensity};
pub use types::{
    validate, validate_ff, validate_ph, Diagnostics, FeedForwardRep, MPHStarRep, PhaseTypeRep, RewardMatrix,
    SubIntensityMatrix, Violation,
};
