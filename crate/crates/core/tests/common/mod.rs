#![allow(dead_code)]

use gmml_core::linalg::{eigenvalues, inverse, SquareMatrix};
use gmml_core::mlfun::{ml_matrix, MLParams};
use gmml_core::quad::{integrate_to_infinity, integrate_with_breaks, QuadOptions};
use gmml_core::special::rgamma;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

pub fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

fn spectral_bounds(c: &SquareMatrix) -> (f64, f64) {
    let ev = eigenvalues(c).unwrap();
    let slow = ev.iter().map(|l| l.norm()).fold(f64::INFINITY, f64::min);
    let fast = ev.iter().map(|l| l.norm()).fold(0.0, f64::max);
    (slow, fast)
}

/// `∫_lo^hi w(x) x^{α-1} E_{α,α}(C x^α) dx`, integrated in `ln x`.
pub fn weighted_ml_integral<W: Fn(f64) -> f64>(alpha: f64, c: &SquareMatrix, w: W, lo: f64, hi: f64) -> SquareMatrix {
    let p = MLParams::new(alpha, alpha).unwrap();
    let f = |v: f64| {
        let x = v.exp();
        ml_matrix(p, &(c * x.powf(alpha))).unwrap() * (w(x) * x.powf(alpha))
    };
    let r = integrate_with_breaks(f, lo.ln(), hi.ln(), &[0.0], QuadOptions::tol(1e-15, 1e-11));
    assert!(r.converged, "matrix quadrature did not converge");
    r.value
}

/// `∫_0^∞ e^{-ux} x^{α-1} E_{α,α}(C x^α) dx`; the exact value is `(u^α I - C)^{-1}`.
pub fn laplace_matrix_by_quadrature(alpha: f64, c: &SquareMatrix, u: f64) -> SquareMatrix {
    let n = c.nrows();
    let lo = 1e-16f64.powf(1.0 / alpha);
    // below `lo` the integrand is x^{α-1}/Γ(α)
    let head = SquareMatrix::identity(n, n) * (lo.powf(alpha) / alpha * rgamma(alpha));
    weighted_ml_integral(alpha, c, |x| (-u * x).exp(), lo, 45.0 / u) + head
}

/// `∫_0^∞ x^s x^{α-1} E_{α,α}(C x^α) dx` for `0 ≤ s < α`, closing the range
/// with the two-term power-law tail
/// `x^{α-1}E_{α,α}(Cx^α) ≈ -C^{-2}x^{-α-1}/Γ(-α) - C^{-3}x^{-2α-1}/Γ(-2α)`.
pub fn ml_power_integral(alpha: f64, c: &SquareMatrix, s: f64) -> SquareMatrix {
    assert!(s >= 0.0 && s < alpha);
    let n = c.nrows();
    let (slow, fast) = spectral_bounds(c);
    let lo = (1e-14 / fast).powf(1.0 / alpha);
    let hi = (1e4 / slow).powf(1.0 / alpha);
    let head = SquareMatrix::identity(n, n) * (lo.powf(s + alpha) / (s + alpha) * rgamma(alpha));
    let body = weighted_ml_integral(alpha, c, |x| x.powf(s), lo, hi);
    let ci = inverse(c).unwrap();
    let c2 = &ci * &ci;
    let c3 = &c2 * &ci;
    let tail = c2 * (-rgamma(-alpha) * hi.powf(s - alpha) / (alpha - s))
        + c3 * (-rgamma(-2.0 * alpha) * hi.powf(s - 2.0 * alpha) / (2.0 * alpha - s));
    head + body + tail
}

/// `∫_0^∞ x^θ e^{Cx} dx` by quadrature in `ln x`; the exact value is
/// `Γ(θ+1)(-C)^{-θ-1}`.
pub fn exp_moment_by_quadrature(c: &SquareMatrix, theta: f64) -> SquareMatrix {
    let slow = eigenvalues(c).unwrap().iter().map(|l| -l.re).fold(f64::INFINITY, f64::min);
    let n = c.nrows();
    let lo = 1e-16f64.powf(1.0 / (theta + 1.0));
    let hi = (60.0 + 10.0 * theta) / slow;
    let f = |v: f64| {
        let x = v.exp();
        (c * x).exp() * x.powf(theta + 1.0)
    };
    let r = integrate_with_breaks(f, lo.ln(), hi.ln(), &[], QuadOptions::tol(1e-15, 1e-12));
    assert!(r.converged);
    r.value + SquareMatrix::identity(n, n) * (lo.powf(theta + 1.0) / (theta + 1.0))
}

/// `∫_0^∞ f` for an integrand that decays at least exponentially, split at `scale`.
pub fn integrate_half_line<F: Fn(f64) -> f64>(f: F, scale: f64) -> f64 {
    let opts = QuadOptions::tol(1e-14, 1e-11);
    let head = integrate_with_breaks(&f, 0.0, scale, &[], opts);
    let tail = integrate_to_infinity(&f, scale, opts);
    head.value + tail.value
}

/// `∫_lo^hi f` in `ln x`, for integrands spread over many decades.
pub fn integrate_log<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, rel: f64) -> f64 {
    let g = |v: f64| {
        let x = v.exp();
        f(x) * x
    };
    let r = integrate_with_breaks(g, lo.ln(), hi.ln(), &[0.0], QuadOptions::tol(1e-16, rel));
    assert!(r.converged, "log quadrature did not converge");
    r.value
}

/// `∫_a^b f` for integrands with `(y-a)^{α-1}` and `(b-y)^{α-1}` endpoint
/// singularities: each half is mapped through `d = t^{1/α}`.
pub fn integrate_endpoint_singular<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, alpha: f64) -> f64 {
    let top = (0.5 * (b - a)).powf(alpha);
    let jac = |t: f64| {
        let d = t.powf(1.0 / alpha);
        (d, d.powf(1.0 - alpha) / alpha)
    };
    let left = |t: f64| {
        let (d, j) = jac(t);
        f(a + d) * j
    };
    let right = |t: f64| {
        let (d, j) = jac(t);
        f(b - d) * j
    };
    let opts = QuadOptions::tol(1e-15, 1e-12);
    integrate_with_breaks(left, 0.0, top, &[], opts).value + integrate_with_breaks(right, 0.0, top, &[], opts).value
}

/// Two-sided one-sample KS statistic against a continuous cdf.
pub fn ks_one_sample<F: Fn(f64) -> f64>(sample: &[f64], cdf: F) -> f64 {
    let mut xs = sample.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter().enumerate().fold(0.0, |d, (i, &x)| {
        let f = cdf(x);
        d.max(f - i as f64 / n).max((i + 1) as f64 / n - f)
    })
}

/// Mean and standard error.
pub fn mean_se(x: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let m = x.iter().sum::<f64>() / n;
    let v = x.iter().map(|y| (y - m) * (y - m)).sum::<f64>() / (n - 1.0);
    (m, (v / n).sqrt())
}

/// Two-sample KS statistic by merging the sorted samples.
pub fn ks_two(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (n, m) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0, 0, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    d
}

/// 1% critical values of the one- and two-sample KS statistics.
pub fn ks_crit(n: usize) -> f64 {
    1.62762 / (n as f64).sqrt()
}

pub fn ks_crit_two(n: usize, m: usize) -> f64 {
    1.62762 * ((n + m) as f64 / (n * m) as f64).sqrt()
}
