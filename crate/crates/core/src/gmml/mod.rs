//! Matrix Mittag-Leffler (MML) and generalized MML laws: densities, transforms,
//! convolution and scaling, projections, feed-forward chains and power laws.

mod feedforward;
mod multivariate;
mod power;
mod quadrature;
mod types;
mod univariate;

pub use feedforward::{
    correlation_power, correlation_power_pair, ff_block_initials, ff_gmml_density, ff_gmml_laplace,
    ff_gmml_marginal, ff_power_joint_density, ff_power_joint_moment, power_marginal_moment,
};
pub use multivariate::{gmml_joint_laplace, gmml_project, GMMLProjection};
pub use power::{power_cdf, power_density, power_laplace, POWER_SERIES_TOL};
pub use quadrature::{green_by_quadrature, green_tail, mml_mass_by_quadrature, mml_tail_constant, tail_cut, TAIL_CUT_SCALE};
pub use types::{AlphaBlocks, FFGMMLRep, GMMLRep, GMMLUnivariateRep, PowerParams};
pub use univariate::{
    convolve_mixed, convolve_same_index, gmml_univ_laplace, mml_cdf, mml_density, mml_laplace, scale, scale_gmml,
};
