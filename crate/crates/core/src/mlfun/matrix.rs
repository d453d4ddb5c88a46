//! Mittag-Leffler functions of a matrix argument.
//!
//! `E_{α,β}(A)` is computed by the first applicable method of:
//! 1. the matrix exponential when `α = β = 1`;
//! 2. entrywise evaluation for diagonal `A`;
//! 3. the eigen-decomposition when the eigenvector matrix is well conditioned;
//! 4. the Hankel integral `E_{α,β}(A) = (1/2πi) ∫ e^s s^{α-β} (s^α I - A)^{-1} ds`
//!    on a parabolic contour, when no eigenvalue maps to a pole on the principal sheet;
//! 5. the Cauchy integral `(1/2πi) ∮ E_{α,β}(z) (zI - A)^{-1} dz` on a circle.
//!
//! For matrices of small norm the truncated power series is evaluated as a
//! cross-check.

use super::scalar::{ml_scalar, MLParams};
use crate::error::{numeric, Result};
use crate::linalg::{
    check_square, csolve, is_diagonal, norm_inf, real_part, spectral, to_complex, CMatrix, SpectralInfo,
    SquareMatrix,
};
use crate::special::rgamma;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Eigenvector conditioning below which the spectral path is trusted.
pub const SPECTRAL_CONDITION_LIMIT: f64 = 1e8;

const CIRCLE_START_NODES: usize = 64;
const CIRCLE_MAX_NODES: usize = 4096;
const CIRCLE_TOL: f64 = 1e-10;
const HANKEL_TOL: f64 = 1e-9;
const SERIES_CHECK_NORM: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixMethod {
    Exponential,
    Diagonal,
    Spectral,
    Hankel,
    Circle,
}

/// `E_{α,β}(A)`.
pub fn ml_matrix(params: MLParams, a: &SquareMatrix) -> Result<SquareMatrix> {
    ml_matrix_with_method(params, a).map(|(m, _)| m)
}

/// `E_{α,β}(A)` together with the method that produced it.
pub fn ml_matrix_with_method(params: MLParams, a: &SquareMatrix) -> Result<(SquareMatrix, MatrixMethod)> {
    params.validate()?;
    check_square(a)?;
    if params.alpha == 1.0 && params.beta == 1.0 {
        return Ok((a.clone().exp(), MatrixMethod::Exponential));
    }
    if is_diagonal(a) {
        let n = a.nrows();
        let mut out = SquareMatrix::zeros(n, n);
        for i in 0..n {
            out[(i, i)] = ml_scalar(params, Complex64::new(a[(i, i)], 0.0))?.re;
        }
        return Ok((out, MatrixMethod::Diagonal));
    }
    let info = spectral(a)?;
    let (value, method) = ml_matrix_nondiagonal(params, a, &info)?;
    if norm_inf(a) <= SERIES_CHECK_NORM {
        let series = ml_matrix_series(params, a)?;
        let scale = value.amax().max(1.0);
        let cond = if info.condition.is_finite() { info.condition } else { 0.0 };
        let diff = (&series - &value).amax();
        if diff > 1e-9 * scale + 1e-15 * cond {
            return numeric(format!("matrix Mittag-Leffler paths disagree by {diff:e}"));
        }
    }
    Ok((value, method))
}

fn ml_matrix_nondiagonal(
    params: MLParams,
    a: &SquareMatrix,
    info: &SpectralInfo,
) -> Result<(SquareMatrix, MatrixMethod)> {
    if info.condition < SPECTRAL_CONDITION_LIMIT {
        let c = info.apply(|l| ml_scalar(params, l))?;
        return Ok((real_part(&c, 1e-6)?, MatrixMethod::Spectral));
    }
    if hankel_applies(params, info) {
        if let Ok(m) = ml_matrix_hankel(params, a) {
            return Ok((m, MatrixMethod::Hankel));
        }
    }
    Ok((ml_matrix_circle(params, a, info)?, MatrixMethod::Circle))
}

/// The parabolic Hankel contour is usable when no eigenvalue has `|arg λ| < απ`
/// (such eigenvalues would put poles of `(s^α I - A)^{-1}` on the principal sheet).
fn hankel_applies(params: MLParams, info: &SpectralInfo) -> bool {
    if params.alpha >= 1.0 {
        return false;
    }
    let sector = params.alpha * PI;
    let margin = 0.02 * (PI - sector);
    info.eigenvalues
        .iter()
        .all(|l| l.norm() == 0.0 || l.arg().abs() >= sector + margin)
}

fn hankel_sum(params: MLParams, ac: &CMatrix, nodes: usize) -> Result<SquareMatrix> {
    let n = ac.nrows();
    let (alpha, beta) = (params.alpha, params.beta);
    let h = 3.0 / nodes as f64;
    let mu = PI * nodes as f64 / 12.0;
    let eye = CMatrix::identity(n, n);
    let mut acc = SquareMatrix::zeros(n, n);
    for k in 0..=nodes {
        let u = k as f64 * h;
        let w = Complex64::new(1.0, u);
        let s = mu * w * w;
        let ds = Complex64::new(0.0, 2.0 * mu) * w;
        let factor = s.exp() * s.powf(alpha - beta) * ds;
        let lhs = &eye * s.powf(alpha) - ac;
        let res = csolve(&lhs, &eye)?;
        let weight = if k == 0 { 1.0 } else { 2.0 };
        for (o, r) in acc.iter_mut().zip(res.iter()) {
            *o += weight * (factor * r).im;
        }
    }
    Ok(acc * (h / (2.0 * PI)))
}

/// Hankel-contour evaluation with an internal error estimate from two node counts.
pub fn ml_matrix_hankel(params: MLParams, a: &SquareMatrix) -> Result<SquareMatrix> {
    params.validate()?;
    check_square(a)?;
    let ac = to_complex(a);
    let coarse = hankel_sum(params, &ac, 24)?;
    let fine = hankel_sum(params, &ac, 32)?;
    let diff = (&fine - &coarse).amax();
    if !(diff <= HANKEL_TOL * fine.amax().max(1.0)) {
        return numeric(format!("Hankel contour estimates differ by {diff:e}"));
    }
    Ok(fine)
}

/// Cauchy-integral evaluation on a circle around the spectrum, doubling the
/// trapezoid nodes until successive estimates agree.
pub fn ml_matrix_circle(params: MLParams, a: &SquareMatrix, info: &SpectralInfo) -> Result<SquareMatrix> {
    let n = a.nrows();
    let m = info.eigenvalues.len() as f64;
    let centre = info.eigenvalues.iter().map(|l| l.re).sum::<f64>() / m;
    let spread = info
        .eigenvalues
        .iter()
        .map(|l| (l - centre).norm())
        .fold(0.0, f64::max);
    let radius = 1.5 * spread + 1.0;
    let ac = to_complex(a);
    let eye = CMatrix::identity(n, n);
    let node = |theta: f64| -> Result<CMatrix> {
        let dz = Complex64::from_polar(radius, theta);
        let z = centre + dz;
        let e = ml_scalar(params, z)?;
        let res = csolve(&(&eye * z - &ac), &eye)?;
        Ok(res * (e * dz))
    };
    let mut count = CIRCLE_START_NODES;
    let mut sum = CMatrix::zeros(n, n);
    for k in 0..count {
        sum += node(2.0 * PI * k as f64 / count as f64)?;
    }
    let mut prev = real_part(&(&sum / Complex64::new(count as f64, 0.0)), 1e-6)?;
    while count < CIRCLE_MAX_NODES {
        for k in 0..count {
            sum += node(PI * (2 * k + 1) as f64 / count as f64)?;
        }
        count *= 2;
        let cur = real_part(&(&sum / Complex64::new(count as f64, 0.0)), 1e-6)?;
        if (&cur - &prev).amax() < CIRCLE_TOL {
            return Ok(cur);
        }
        prev = cur;
    }
    numeric(format!("circle contour did not converge with {CIRCLE_MAX_NODES} nodes"))
}

/// Truncated power series `Σ A^k / Γ(αk + β)`.
pub fn ml_matrix_series(params: MLParams, a: &SquareMatrix) -> Result<SquareMatrix> {
    params.validate()?;
    check_square(a)?;
    let n = a.nrows();
    let norm = norm_inf(a);
    let peak = norm.powf(1.0 / params.alpha) / params.alpha;
    if peak > 500.0 {
        return numeric("matrix power series would need too many terms");
    }
    let mut power = SquareMatrix::identity(n, n);
    let mut sum = SquareMatrix::zeros(n, n);
    for k in 0..2000 {
        let term = &power * rgamma(params.alpha * k as f64 + params.beta);
        let tn = term.amax();
        sum += &term;
        if k as f64 > peak + 2.0 && tn <= 1e-17 * sum.amax().max(f64::MIN_POSITIVE) {
            return Ok(sum);
        }
        if !tn.is_finite() {
            break;
        }
        power = &power * a;
    }
    numeric("matrix power series did not converge")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(a: f64, b: f64) -> MLParams {
        MLParams::new(a, b).unwrap()
    }

    #[test]
    fn exponential_path() {
        let a = SquareMatrix::from_row_slice(2, 2, &[-2.0, 1.0, 0.5, -1.0]);
        let (e, m) = ml_matrix_with_method(p(1.0, 1.0), &a).unwrap();
        assert_eq!(m, MatrixMethod::Exponential);
        let back = ml_matrix(p(1.0, 1.0), &(-&a)).unwrap();
        assert!((&e * &back - SquareMatrix::identity(2, 2)).amax() < 1e-12);
    }

    #[test]
    fn jordan_block_against_series() {
        let a = SquareMatrix::from_row_slice(2, 2, &[-1.0, 1.0, 0.0, -1.0]);
        let (e, m) = ml_matrix_with_method(p(0.6, 0.6), &a).unwrap();
        assert_eq!(m, MatrixMethod::Hankel);
        let s = ml_matrix_series(p(0.6, 0.6), &a).unwrap();
        assert!((&e - &s).amax() < 1e-9);
    }

    #[test]
    fn hankel_matches_spectral_on_well_conditioned_input() {
        let a = SquareMatrix::from_row_slice(3, 3, &[-3.0, 1.0, 0.5, 0.2, -2.0, 1.0, 0.3, 0.3, -1.5]);
        for (al, be) in [(0.5, 1.0), (0.7, 0.7), (0.9, 1.3)] {
            let info = spectral(&a).unwrap();
            let spec = real_part(&info.apply(|l| ml_scalar(p(al, be), l)).unwrap(), 1e-8).unwrap();
            let hank = ml_matrix_hankel(p(al, be), &a).unwrap();
            assert!((&spec - &hank).amax() < 1e-10, "{al} {be}");
            let circ = ml_matrix_circle(p(al, be), &a, &info).unwrap();
            assert!((&spec - &circ).amax() < 1e-9, "{al} {be}");
        }
    }

    #[test]
    fn rotation_uses_spectral_path() {
        let a = SquareMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]);
        let (e, m) = ml_matrix_with_method(p(0.8, 1.0), &a).unwrap();
        assert_eq!(m, MatrixMethod::Spectral);
        let s = ml_matrix_series(p(0.8, 1.0), &a).unwrap();
        assert!((&e - &s).amax() < 1e-12);
    }
}
