//! Negative real powers `(-T)^{-s}` of a matrix whose spectrum lies in the
//! open left half-plane.

use crate::error::{domain, Result};
use crate::linalg::{check_square, inverse, is_diagonal, norm_inf, real_part, spectral, SquareMatrix};
use crate::quad::{integrate_with_breaks, QuadOptions};
use std::f64::consts::PI;

/// Conditioning below which the eigen-decomposition is used directly.
const POWER_SPECTRAL_LIMIT: f64 = 1e6;
/// Relative size of the neglected terms in the analytic tails.
const TAIL_CUT: f64 = 1e-5;

/// `(-T)^{-s}` for `s > 0`, principal branch.
pub fn matrix_neg_fractional_power(t: &SquareMatrix, s: f64) -> Result<SquareMatrix> {
    check_square(t)?;
    if !(s > 0.0 && s.is_finite()) {
        return domain(format!("power must be positive, got {s}"));
    }
    let a = -t;
    let n = a.nrows();
    if is_diagonal(&a) {
        let mut out = SquareMatrix::zeros(n, n);
        for i in 0..n {
            let d = a[(i, i)];
            if !(d > 0.0) {
                return domain("spectrum of -T must lie in the open right half-plane");
            }
            out[(i, i)] = d.powf(-s);
        }
        return Ok(out);
    }
    let info = spectral(&a)?;
    if info.eigenvalues.iter().any(|l| !(l.re > 0.0)) {
        return domain("spectrum of -T must lie in the open right half-plane");
    }
    if s.fract() == 0.0 {
        return integer_inverse_power(&a, s as u32);
    }
    if info.condition < POWER_SPECTRAL_LIMIT {
        let c = info.apply(|l| Ok(l.powf(-s)))?;
        return real_part(&c, 1e-6);
    }
    let whole = s.floor();
    let frac = s - whole;
    let base = fractional_inverse_power(&a, frac)?;
    if whole == 0.0 {
        Ok(base)
    } else {
        Ok(integer_inverse_power(&a, whole as u32)? * base)
    }
}

fn integer_inverse_power(a: &SquareMatrix, k: u32) -> Result<SquareMatrix> {
    let inv = inverse(a)?;
    let n = a.nrows();
    let mut out = SquareMatrix::identity(n, n);
    for _ in 0..k {
        out = &out * &inv;
    }
    Ok(out)
}

/// `A^{-f}` for `0 < f < 1` from
/// `A^{-f} = (sin πf / π) ∫_{-∞}^{∞} e^{(1-f)u} (e^u I + A)^{-1} du`,
/// integrating adaptively on a finite window and adding the tails from the
/// Neumann expansions of the resolvent at both ends.
fn fractional_inverse_power(a: &SquareMatrix, f: f64) -> Result<SquareMatrix> {
    let n = a.nrows();
    let eye = SquareMatrix::identity(n, n);
    let inv = inverse(a)?;
    let inv2 = &inv * &inv;
    let inv3 = &inv2 * &inv;
    let a2 = a * a;
    let lo = (TAIL_CUT / norm_inf(&inv)).ln();
    let hi = (norm_inf(a) / TAIL_CUT).ln();

    let mut bad = false;
    let body = |u: f64| -> SquareMatrix {
        let eu = u.exp();
        let mut m = a.clone();
        for i in 0..n {
            m[(i, i)] += eu;
        }
        match m.try_inverse() {
            Some(r) => r * ((1.0 - f) * u).exp(),
            None => SquareMatrix::from_element(n, n, f64::NAN),
        }
    };
    let breaks: Vec<f64> = {
        let steps = ((hi - lo) / 2.0).ceil().max(1.0) as usize;
        (1..steps).map(|k| lo + (hi - lo) * k as f64 / steps as f64).collect()
    };
    let opts = QuadOptions {
        abs_tol: 0.0,
        rel_tol: 1e-14,
        max_intervals: 4000,
    };
    let mid = integrate_with_breaks(body, lo, hi, &breaks, opts);
    if mid.value.iter().any(|x| !x.is_finite()) {
        bad = true;
    }
    if bad {
        return crate::error::numeric("fractional power quadrature hit a singular resolvent");
    }

    let low_tail = &inv * (((1.0 - f) * lo).exp() / (1.0 - f)) - &inv2 * (((2.0 - f) * lo).exp() / (2.0 - f))
        + &inv3 * (((3.0 - f) * lo).exp() / (3.0 - f));
    let high_tail = &eye * ((-f * hi).exp() / f) - a * ((-(1.0 + f) * hi).exp() / (1.0 + f))
        + &a2 * ((-(2.0 + f) * hi).exp() / (2.0 + f));
    Ok((mid.value + low_tail + high_tail) * ((PI * f).sin() / PI))
}
