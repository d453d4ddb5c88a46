//! Power MML laws `Y = X^{1/ν}`, viewed either through `(α, ν)` or through the
//! tail index `β = να`.

use super::types::check_alpha;
use super::univariate::{check_nonnegative, check_positive, ml_form};
use crate::error::{Error, Result};
use crate::phasetype::PhaseTypeRep;
use crate::special::ln_gamma;
use nalgebra::DVector;

/// Relative size of the last retained series term.
pub const POWER_SERIES_TOL: f64 = 1e-14;
const POWER_SERIES_CAP: usize = 5000;

/// `(β/α) x^{β-1} π E_{α,α}(T x^β) t`.
pub fn power_density(alpha: f64, rep: &PhaseTypeRep, beta: f64, x: f64) -> Result<f64> {
    check_alpha(alpha)?;
    check_positive(beta, "beta")?;
    check_positive(x, "x")?;
    let v = ml_form(alpha, alpha, rep, x.powf(beta), rep.t.exit())?;
    Ok((beta / alpha * x.powf(beta - 1.0) * v).max(0.0))
}

/// `sum(π) - π E_{α,1}(T x^β) e`.
pub fn power_cdf(alpha: f64, rep: &PhaseTypeRep, beta: f64, x: f64) -> Result<f64> {
    check_alpha(alpha)?;
    check_positive(beta, "beta")?;
    check_nonnegative(x, "x")?;
    if x == 0.0 {
        return Ok(0.0);
    }
    let e = DVector::from_element(rep.dim(), 1.0);
    let s = ml_form(alpha, 1.0, rep, x.powf(beta), &e)?;
    Ok((rep.mass() - s).clamp(0.0, rep.mass()))
}

/// Laplace transform of `X^{1/ν}` from the term-by-term transform of its density,
/// `ν s^{-να} π Σ_k Γ(να(k+1))/Γ(α(k+1)) (s^{-να} T)^k t`.
///
/// For `ν > 1` the series is only asymptotic; it is summed while its terms
/// shrink, and `OutOfDomain` is returned unless a term falls below
/// [`POWER_SERIES_TOL`] relative to the partial sum before they start growing.
pub fn power_laplace(alpha: f64, rep: &PhaseTypeRep, nu: f64, s: f64) -> Result<f64> {
    check_alpha(alpha)?;
    check_positive(nu, "nu")?;
    check_positive(s, "s")?;
    let na = nu * alpha;
    let h = s.powf(-na);
    let ht = rep.t.matrix() * h;
    let mut v = rep.t.exit().clone();
    let mut sum = 0.0;
    let mut smallest = f64::INFINITY;
    for k in 0..POWER_SERIES_CAP {
        let kk = (k + 1) as f64;
        let c = nu * (ln_gamma(na * kk) - ln_gamma(alpha * kk)).exp() * h;
        let term = c * rep.pi.dot(&v);
        let size = c * v.iter().map(|x| x.abs()).sum::<f64>();
        if !size.is_finite() {
            break;
        }
        sum += term;
        if size <= POWER_SERIES_TOL * sum.abs() {
            return Ok(sum);
        }
        if size > 1e3 * smallest {
            return Err(Error::OutOfDomain(format!(
                "power Laplace series diverges at s = {s}: smallest term {smallest:e} vs sum {sum:e}"
            )));
        }
        smallest = smallest.min(size);
        v = &ht * v;
    }
    Err(Error::OutOfDomain(format!("power Laplace series did not converge at s = {s}")))
}
