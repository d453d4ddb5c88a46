//! Mittag-Leffler functions of scalar and matrix argument, and negative
//! fractional matrix powers.

mod matrix;
mod power;
mod scalar;

pub use matrix::{
    ml_matrix, ml_matrix_circle, ml_matrix_hankel, ml_matrix_series, ml_matrix_with_method, MatrixMethod,
    SPECTRAL_CONDITION_LIMIT,
};
pub use power::matrix_neg_fractional_power;
pub use scalar::{
    ml_asymptotic, ml_integral, ml_real, ml_scalar, ml_scalar_with_regime, ml_series, MLParams, Regime,
    RegimeValue, ASYMPTOTIC_RADIUS, SERIES_RADIUS,
};
