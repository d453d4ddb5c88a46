//! Integrals of heavy-tailed MML densities.
//!
//! The range is cut at a point `X` beyond which the density is replaced by
//! the first two terms of its power-law expansion and integrated in closed
//! form; `(0, X]` is handled by adaptive quadrature in `ln x`.

use super::types::check_alpha;
use crate::error::{Error, Result};
use crate::linalg::{eigenvalues, inverse, SquareMatrix};
use crate::mlfun::{ml_matrix, MLParams};
use crate::phasetype::{PhaseTypeRep, SubIntensityMatrix};
use crate::quad::{integrate_with_breaks, QuadOptions};
use crate::special::{gamma, rgamma};
use std::cell::RefCell;

/// `|λ| X^α` at the cut point, for the slowest eigenvalue `λ`.
pub const TAIL_CUT_SCALE: f64 = 1e3;
const HEAD_CUT_SCALE: f64 = 1e-12;

/// The cut point `X = (K / |λ_min|)^{1/α}` with `K =` [`TAIL_CUT_SCALE`].
pub fn tail_cut(alpha: f64, t: &SubIntensityMatrix) -> Result<f64> {
    check_alpha(alpha)?;
    let eig = eigenvalues(t.matrix())?;
    let slow = eig.iter().map(|l| l.norm()).fold(f64::INFINITY, f64::min);
    Ok((TAIL_CUT_SCALE / slow).powf(1.0 / alpha))
}

/// `∫_X^∞ x^{α-1} E_{α,α}(T x^α) dx ≈ T^{-2} X^{-α}/Γ(1-α) + T^{-3} X^{-2α}/Γ(1-2α)`.
pub fn green_tail(alpha: f64, t: &SquareMatrix, x: f64) -> Result<SquareMatrix> {
    let ti = inverse(t)?;
    let t2 = &ti * &ti;
    let t3 = &t2 * &ti;
    Ok(t2 * (x.powf(-alpha) * rgamma(1.0 - alpha)) + t3 * (x.powf(-2.0 * alpha) * rgamma(1.0 - 2.0 * alpha)))
}

/// `∫_0^∞ x^{α-1} E_{α,α}(T x^α) dx` by quadrature plus the analytic tail;
/// the exact value is `(-T)^{-1}`.
pub fn green_by_quadrature(alpha: f64, t: &SubIntensityMatrix) -> Result<SquareMatrix> {
    check_alpha(alpha)?;
    let tm = t.matrix();
    let p = tm.nrows();
    let eig = eigenvalues(tm)?;
    let fast = eig.iter().map(|l| l.norm()).fold(0.0, f64::max);
    let x_hi = tail_cut(alpha, t)?;
    let x_lo = (HEAD_CUT_SCALE / fast).powf(1.0 / alpha);
    let params = MLParams::new(alpha, alpha)?;
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    // substitution x = e^v turns x^{α-1} dx into x^α dv
    let f = |v: f64| {
        let x = v.exp();
        match ml_matrix(params, &(tm * x.powf(alpha))) {
            Ok(m) => m * x.powf(alpha),
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                SquareMatrix::zeros(p, p)
            }
        }
    };
    let breaks: Vec<f64> = eig.iter().map(|l| -l.norm().ln() / alpha).collect();
    let res = integrate_with_breaks(f, x_lo.ln(), x_hi.ln(), &breaks, QuadOptions::tol(1e-13, 1e-11));
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    if !res.converged {
        return Err(Error::Numeric(format!("Green-matrix quadrature did not converge (error {:e})", res.error)));
    }
    // near zero the integrand is x^{α-1}/Γ(α)
    let head = SquareMatrix::identity(p, p) * (x_lo.powf(alpha) / (alpha * gamma(alpha)));
    Ok(res.value + head + green_tail(alpha, tm, x_hi)?)
}

/// Total mass `π G t` of an MML law computed through [`green_by_quadrature`].
pub fn mml_mass_by_quadrature(alpha: f64, rep: &PhaseTypeRep) -> Result<f64> {
    let g = green_by_quadrature(alpha, &rep.t)?;
    Ok(rep.pi.dot(&(g * rep.t.exit())))
}

/// Limit of `x^α (1 - F(x))`: `π (-T)^{-1} e / Γ(1-α)`.
pub fn mml_tail_constant(alpha: f64, rep: &PhaseTypeRep) -> Result<f64> {
    check_alpha(alpha)?;
    let g = rep.t.green()?;
    Ok(rep.pi.dot(&g.column_sum()) * rgamma(1.0 - alpha))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn green_matrix_recovered() {
        let t = SubIntensityMatrix::from_row_slice(2, &[-1.5, 0.5, 0.2, -0.8]).unwrap();
        let want = t.green().unwrap();
        for &a in &[0.5, 0.9, 1.0] {
            let g = green_by_quadrature(a, &t).unwrap();
            assert!(g.relative_eq(&want, 1e-7, 1e-7), "alpha {a}: {g} vs {want}");
        }
    }

    #[test]
    fn exponential_tail_constant() {
        let rep = PhaseTypeRep::exponential(2.0).unwrap();
        assert_relative_eq!(mml_tail_constant(0.5, &rep).unwrap(), 0.5 / gamma(0.5), max_relative = 1e-14);
        assert_eq!(mml_tail_constant(1.0, &rep).unwrap(), 0.0);
    }
}
