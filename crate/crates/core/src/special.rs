//! Gamma function helpers.
//!
//! The Lanczos approximation (with reflection below 1/2) comes from `statrs`.
//! What this module adds is the pole convention needed by the Mittag-Leffler
//! asymptotic series: `1/Γ(x)` is exactly zero at nonpositive integers.

/// Largest argument for which `Γ(x)` is finite in `f64`.
const GAMMA_OVERFLOW: f64 = 171.0;

/// Returns true when `x` is a nonpositive integer up to a few ulps.
pub fn is_gamma_pole(x: f64) -> bool {
    if x > 0.5 {
        return false;
    }
    let r = x.round();
    (x - r).abs() <= 4.0 * f64::EPSILON * r.abs().max(1.0)
}

/// `Γ(x)`; infinite at the poles.
pub fn gamma(x: f64) -> f64 {
    if is_gamma_pole(x) {
        return f64::INFINITY;
    }
    statrs::function::gamma::gamma(x)
}

/// `ln |Γ(x)|` for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    statrs::function::gamma::ln_gamma(x)
}

/// Reciprocal gamma `1/Γ(x)`, exactly `0` at nonpositive integers and
/// underflowing gracefully for large positive arguments.
pub fn rgamma(x: f64) -> f64 {
    if is_gamma_pole(x) {
        return 0.0;
    }
    if x >= GAMMA_OVERFLOW {
        return (-ln_gamma(x)).exp();
    }
    1.0 / statrs::function::gamma::gamma(x)
}
