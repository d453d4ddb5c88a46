use crate::error::{domain, Result};
use rand::{Rng, RngExt};
use rand_distr::Exp1;
use std::f64::consts::PI;

/// Positive stable law with Laplace transform `exp(-u^α)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StableSpec {
    alpha: f64,
}

impl StableSpec {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return domain(format!("stable index must lie in (0, 1], got {alpha}"));
        }
        Ok(Self { alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

const EDGE: f64 = 1e-15;

/// Kanter's representation from `U ~ Uniform(0, π)` and `E ~ Exp(1)`:
/// `S = sin(αU)/sin(U)^{1/α} · (sin((1-α)U)/E)^{(1-α)/α}`.
pub fn sample_positive_stable<R: Rng + ?Sized>(spec: StableSpec, rng: &mut R) -> f64 {
    let a = spec.alpha;
    if a == 1.0 {
        return 1.0;
    }
    let u = (rng.random::<f64>() * PI).clamp(EDGE, PI - EDGE);
    let e: f64 = rng.sample(Exp1);
    let head = (a * u).sin() / u.sin().powf(1.0 / a);
    let tail = (((1.0 - a) * u).sin() / e).powf((1.0 - a) / a);
    head * tail
}
