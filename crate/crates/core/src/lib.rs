//! Matrix Mittag-Leffler and generalized matrix Mittag-Leffler distributions.
//!
//! Modules, bottom-up:
//! * [`mlfun`]: scalar and matrix Mittag-Leffler functions, fractional matrix powers;
//! * [`phasetype`]: phase-type and multivariate (MPH*) representations;
//! * [`gmml`]: MML / GMML laws, their algebra and power transforms;
//! * [`sampling`]: exact simulation through stable subordination;
//! * [`models`]: the bivariate order-statistics construction and the figure models.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod gmml;
pub mod linalg;
pub mod mlfun;
pub mod models;
pub mod phasetype;
pub mod quad;
pub mod sampling;
pub mod special;

pub use error::{Error, Result};
pub use linalg::{spectral, SpectralInfo, SquareMatrix};
pub use mlfun::{matrix_neg_fractional_power, ml_matrix, ml_real, ml_scalar, MLParams};
