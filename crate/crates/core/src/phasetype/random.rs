//! Random valid representations for tests and self-checks.
//!
//! Off-diagonal and exit rates are Uniform(0, 1); diagonals close the rows.

use super::types::{FeedForwardRep, MPHStarRep, PhaseTypeRep, RewardMatrix, SubIntensityMatrix};
use crate::error::Result;
use crate::linalg::SquareMatrix;
use nalgebra::{DMatrix, DVector};
use rand::{Rng, RngExt};

pub fn random_subintensity<R: Rng + ?Sized>(rng: &mut R, p: usize) -> Result<SubIntensityMatrix> {
    let mut t = SquareMatrix::zeros(p, p);
    for i in 0..p {
        let mut out = 0.0;
        for j in 0..p {
            if i != j {
                let v: f64 = rng.random();
                t[(i, j)] = v;
                out += v;
            }
        }
        // keep the exit rate away from zero so every state can be left
        let exit = 0.05 + 0.95 * rng.random::<f64>();
        t[(i, i)] = -(out + exit);
    }
    SubIntensityMatrix::new(t)
}

fn random_probability<R: Rng + ?Sized>(rng: &mut R, p: usize) -> DVector<f64> {
    let w = DVector::from_iterator(p, (0..p).map(|_| 0.05 + rng.random::<f64>()));
    let s = w.sum();
    w / s
}

pub fn random_ph<R: Rng + ?Sized>(rng: &mut R, p: usize) -> Result<PhaseTypeRep> {
    let t = random_subintensity(rng, p)?;
    PhaseTypeRep::new(random_probability(rng, p), t)
}

/// Random `(π, T, R)` with `n` reward columns; each reward is zero with
/// probability `zero_prob`, but no column is left entirely zero.
pub fn random_mph_star<R: Rng + ?Sized>(rng: &mut R, p: usize, n: usize, zero_prob: f64) -> Result<MPHStarRep> {
    let t = random_subintensity(rng, p)?;
    let pi = random_probability(rng, p);
    let mut r = DMatrix::zeros(p, n);
    for i in 0..p {
        for j in 0..n {
            if rng.random::<f64>() >= zero_prob {
                r[(i, j)] = 0.1 + rng.random::<f64>();
            }
        }
    }
    for j in 0..n {
        if r.column(j).iter().all(|&x| x == 0.0) {
            let i = rng.random_range(0..p);
            r[(i, j)] = 0.1 + rng.random::<f64>();
        }
    }
    MPHStarRep::new(pi, t, RewardMatrix::new(r)?)
}

/// Random feed-forward chain with the given block sizes.
pub fn random_feed_forward<R: Rng + ?Sized>(rng: &mut R, dims: &[usize]) -> Result<FeedForwardRep> {
    let mut blocks = Vec::with_capacity(dims.len());
    for (b, &p) in dims.iter().enumerate() {
        let c = random_subintensity(rng, p)?;
        let q = dims.get(b + 1).copied().unwrap_or(p);
        let mut d = DMatrix::zeros(p, q);
        for i in 0..p {
            let w = random_probability(rng, q);
            for j in 0..q {
                d[(i, j)] = c.exit()[i] * w[j];
            }
        }
        blocks.push((c, d));
    }
    FeedForwardRep::new(random_probability(rng, dims[0]), blocks)
}
