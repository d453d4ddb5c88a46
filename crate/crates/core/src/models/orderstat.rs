//! Bivariate exponential law built from order statistics, and its
//! Mittag-Leffler lift.

use crate::error::{domain, model, Result};
use crate::gmml::{FFGMMLRep, GMMLRep};
use crate::linalg::SquareMatrix;
use crate::mlfun::{ml_real, MLParams};
use crate::phasetype::{FeedForwardRep, MPHStarRep, RewardMatrix, SubIntensityMatrix};
use nalgebra::{DMatrix, DVector};

const DOUBLY_STOCHASTIC_TOL: f64 = 1e-12;

pub fn identity_coupling(m: usize) -> SquareMatrix {
    SquareMatrix::identity(m, m)
}

/// `δ_{i, m-i+1}`.
pub fn anti_identity_coupling(m: usize) -> SquareMatrix {
    SquareMatrix::from_fn(m, m, |i, j| if i + j + 1 == m { 1.0 } else { 0.0 })
}

/// `E / m`.
pub fn uniform_coupling(m: usize) -> SquareMatrix {
    SquareMatrix::from_element(m, m, 1.0 / m as f64)
}

pub fn is_doubly_stochastic(p: &SquareMatrix) -> bool {
    let m = p.nrows();
    m == p.ncols()
        && p.iter().all(|&x| x >= 0.0)
        && (0..m).all(|i| (p.row(i).sum() - 1.0).abs() <= DOUBLY_STOCHASTIC_TOL)
        && (0..m).all(|j| (p.column(j).sum() - 1.0).abs() <= DOUBLY_STOCHASTIC_TOL)
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrderStatConfig {
    pub m: usize,
    pub lambda: f64,
    pub mu: f64,
    pub p: SquareMatrix,
}

impl OrderStatConfig {
    pub fn new(m: usize, lambda: f64, mu: f64, p: SquareMatrix) -> Result<Self> {
        if m == 0 {
            return domain("order m must be at least 1");
        }
        if !(lambda > 0.0 && lambda.is_finite() && mu > 0.0 && mu.is_finite()) {
            return domain(format!("rates must be positive, got {lambda} and {mu}"));
        }
        if p.nrows() != m || !is_doubly_stochastic(&p) {
            return model(format!("coupling must be a doubly stochastic {m}x{m} matrix"));
        }
        Ok(Self { m, lambda, mu, p })
    }

    /// `S`: diagonal `-(m-i)λ`, superdiagonal `(m-i-1)λ` (zero-based `i`).
    pub fn s(&self) -> SquareMatrix {
        let (m, l) = (self.m, self.lambda);
        SquareMatrix::from_fn(m, m, |i, j| {
            if i == j {
                -((m - i) as f64) * l
            } else if j == i + 1 {
                (m - i - 1) as f64 * l
            } else {
                0.0
            }
        })
    }

    /// `S̃`: diagonal `-(i+1)μ`, superdiagonal `(i+1)μ` (zero-based `i`).
    pub fn s_tilde(&self) -> SquareMatrix {
        let (m, u) = (self.m, self.mu);
        SquareMatrix::from_fn(m, m, |i, j| {
            if i == j {
                -((i + 1) as f64) * u
            } else if j == i + 1 {
                (i + 1) as f64 * u
            } else {
                0.0
            }
        })
    }
}

/// `MPH*(e_1, [[S, λP], [0, S̃]], [[e, 0], [0, e]])`.
pub fn build_orderstat_bivariate(cfg: &OrderStatConfig) -> Result<MPHStarRep> {
    let m = cfg.m;
    let mut t = SquareMatrix::zeros(2 * m, 2 * m);
    t.view_mut((0, 0), (m, m)).copy_from(&cfg.s());
    t.view_mut((0, m), (m, m)).copy_from(&(&cfg.p * cfg.lambda));
    t.view_mut((m, m), (m, m)).copy_from(&cfg.s_tilde());
    let mut r = DMatrix::zeros(2 * m, 2);
    for i in 0..m {
        r[(i, 0)] = 1.0;
        r[(m + i, 1)] = 1.0;
    }
    let mut pi = DVector::zeros(2 * m);
    pi[0] = 1.0;
    MPHStarRep::new(pi, SubIntensityMatrix::new(t)?, RewardMatrix::new(r)?)
}

/// The same law as a two-block feed-forward chain.
pub fn orderstat_feed_forward(cfg: &OrderStatConfig) -> Result<FeedForwardRep> {
    let s = SubIntensityMatrix::new(cfg.s())?;
    let st = SubIntensityMatrix::new(cfg.s_tilde())?;
    let d2 = DMatrix::from_diagonal(st.exit());
    let mut pi = DVector::zeros(cfg.m);
    pi[0] = 1.0;
    FeedForwardRep::new(pi, vec![(s, &cfg.p * cfg.lambda), (st, d2)])
}

pub fn orderstat_gmml(cfg: &OrderStatConfig, alphas: (f64, f64)) -> Result<GMMLRep> {
    GMMLRep::new(vec![alphas.0, alphas.1], build_orderstat_bivariate(cfg)?)
}

pub fn orderstat_ff_gmml(cfg: &OrderStatConfig, alphas: (f64, f64)) -> Result<FFGMMLRep> {
    FFGMMLRep::new(orderstat_feed_forward(cfg)?, vec![alphas.0, alphas.1])
}

/// Eigenvectors of `S` (columns of `v`, eigenvalue `-kλ` in column `k-1`)
/// and of `S̃` (columns of `w`, eigenvalue `-kμ`), with exact inverses.
///
/// The recursions give `v_i^{(k)} = C(m-k, i-1) / C(m-1, i-1)` and
/// `w_i^{(k)} = (-1)^{i-1} C(k-1, i-1)`; `W` is its own inverse and
/// `(V^{-1})_{kj} = (-1)^{j+k-m-1} C(j-1, m-k) C(m-1, j-1)`. Both bases are
/// badly conditioned (about 1e9 at m = 20), so inverting them numerically
/// would cost most of the available digits.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenBasis {
    pub v: SquareMatrix,
    pub w: SquareMatrix,
    pub v_inv: SquareMatrix,
    pub w_inv: SquareMatrix,
}

fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    // exact for the sizes used here: every partial product is an integer below 2^53
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64).round()
}

pub fn orderstat_eigenbasis(cfg: &OrderStatConfig) -> EigenBasis {
    let m = cfg.m;
    let mut v = SquareMatrix::zeros(m, m);
    let mut w = SquareMatrix::zeros(m, m);
    for k in 1..=m {
        for i in 0..m {
            v[(i, k - 1)] = binomial(m - k, i) / binomial(m - 1, i);
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            w[(i, k - 1)] = sign * binomial(k - 1, i);
        }
    }
    let v_inv = SquareMatrix::from_fn(m, m, |k, j| {
        // zero-based k, j
        let (k1, j1) = (k + 1, j + 1);
        if j1 + k1 < m + 1 {
            return 0.0;
        }
        let sign = if (j1 + k1 - m - 1).is_multiple_of(2) { 1.0 } else { -1.0 };
        sign * binomial(j1 - 1, m - k1) * binomial(m - 1, j1 - 1)
    });
    let w_inv = w.clone();
    EigenBasis { v, w, v_inv, w_inv }
}

/// `B diag(E_{α,α}(-k r y)) B^{-1}`.
fn spectral_ml(basis: &SquareMatrix, inv: &SquareMatrix, alpha: f64, rate: f64, y: f64) -> Result<SquareMatrix> {
    let params = MLParams::new(alpha, alpha)?;
    let mut scaled = basis.clone();
    for k in 1..=basis.ncols() {
        let e = ml_real(params, -(k as f64) * rate * y)?;
        scaled.column_mut(k - 1).scale_mut(e);
    }
    Ok(scaled * inv)
}

/// Joint density of the Mittag-Leffler lift,
/// `mλμ x₁^{α₁-1} x₂^{α₂-1} e₁' E(S x₁^{α₁}) P E(S̃ x₂^{α₂}) e_m`,
/// with both matrix functions taken through the explicit eigenbases.
///
/// The eigenbasis sums cancel heavily for large `m`; at `m = 20` about eight
/// significant digits survive.
pub fn bivariate_ml_density(cfg: &OrderStatConfig, alphas: (f64, f64), x: (f64, f64)) -> Result<f64> {
    if !(x.0 > 0.0 && x.1 > 0.0 && x.0.is_finite() && x.1.is_finite()) {
        return domain("density needs both coordinates > 0");
    }
    let b = orderstat_eigenbasis(cfg);
    let e1 = spectral_ml(&b.v, &b.v_inv, alphas.0, cfg.lambda, x.0.powf(alphas.0))?;
    let e2 = spectral_ml(&b.w, &b.w_inv, alphas.1, cfg.mu, x.1.powf(alphas.1))?;
    let m = cfg.m;
    let v = (e1.row(0) * &cfg.p * e2.column(m - 1))[(0, 0)];
    let f = m as f64 * cfg.lambda * cfg.mu * x.0.powf(alphas.0 - 1.0) * x.1.powf(alphas.1 - 1.0) * v;
    Ok(f.max(0.0))
}
