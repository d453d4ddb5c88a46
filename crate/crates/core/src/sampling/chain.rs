use super::stable::{sample_positive_stable, StableSpec};
use crate::error::{domain, Result};
use crate::gmml::{GMMLRep, PowerParams};
use crate::phasetype::MPHStarRep;
use rand::{Rng, RngExt};
use rand_distr::Exp1;

/// Draws from a law with a fixed number of nonnegative coordinates.
pub trait Sampler: Sync {
    fn columns(&self) -> usize;
    fn draw(&self, rng: &mut dyn Rng, out: &mut [f64]);
}

fn pick(cum: &[f64], u: f64) -> usize {
    cum.iter().position(|&c| u < c).unwrap_or(cum.len())
}

/// Embedded jump chain of an MPH* representation.
#[derive(Debug, Clone)]
pub struct MphSampler {
    /// Cumulative initial probabilities; index `p` means immediate absorption.
    start: Vec<f64>,
    /// Total exit rate `-t_ii` of every state.
    rates: Vec<f64>,
    /// Cumulative jump probabilities over states; past the end means absorption.
    jumps: Vec<Vec<f64>>,
    rewards: Vec<Vec<f64>>,
    n: usize,
}

fn cumulative(w: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut acc = 0.0;
    w.map(|x| {
        acc += x;
        acc
    })
    .collect()
}

impl MphSampler {
    pub fn new(rep: &MPHStarRep) -> Self {
        let t = rep.t.matrix();
        let p = rep.dim();
        let rates: Vec<f64> = (0..p).map(|i| -t[(i, i)]).collect();
        let jumps = (0..p)
            .map(|i| cumulative((0..p).map(|j| if i == j { 0.0 } else { t[(i, j)] / rates[i] })))
            .collect();
        let r = rep.r.matrix();
        Self {
            start: cumulative(rep.pi.iter().copied()),
            rates,
            jumps,
            rewards: (0..p).map(|i| r.row(i).iter().copied().collect()).collect(),
            n: rep.coordinates(),
        }
    }
}

impl Sampler for MphSampler {
    fn columns(&self) -> usize {
        self.n
    }

    fn draw(&self, rng: &mut dyn Rng, out: &mut [f64]) {
        out.fill(0.0);
        let p = self.rates.len();
        let mut state = pick(&self.start, rng.random::<f64>());
        while state < p {
            let e: f64 = rng.sample(Exp1);
            let sojourn = e / self.rates[state];
            for (o, r) in out.iter_mut().zip(&self.rewards[state]) {
                *o += r * sojourn;
            }
            state = pick(&self.jumps[state], rng.random::<f64>());
        }
    }
}

/// Total rewards `X_k = ∫_0^τ r_{J_t, k} dt` of one path.
pub fn sample_mph_rewards<R: Rng>(rep: &MPHStarRep, rng: &mut R) -> Vec<f64> {
    let s = MphSampler::new(rep);
    let mut out = vec![0.0; s.columns()];
    s.draw(rng, &mut out);
    out
}

/// GMML or power-GMML draws: `Y_i = (S_i W_i^{1/α_i})^{1/ν_i}` with `W` the
/// MPH* rewards and independent stable `S_i`.
#[derive(Debug, Clone)]
pub struct GmmlSampler {
    base: MphSampler,
    stables: Vec<StableSpec>,
    nu: Vec<f64>,
}

impl GmmlSampler {
    pub fn new(rep: &GMMLRep, nu: Option<&PowerParams>) -> Result<Self> {
        let nu = match nu {
            Some(p) if p.nu().len() != rep.coordinates() => {
                return domain(format!("expected {} power exponents, got {}", rep.coordinates(), p.nu().len()))
            }
            Some(p) => p.nu().to_vec(),
            None => vec![1.0; rep.coordinates()],
        };
        Ok(Self {
            base: MphSampler::new(&rep.base),
            stables: rep.alphas.iter().map(|&a| StableSpec::new(a)).collect::<Result<_>>()?,
            nu,
        })
    }
}

impl Sampler for GmmlSampler {
    fn columns(&self) -> usize {
        self.nu.len()
    }

    fn draw(&self, rng: &mut dyn Rng, out: &mut [f64]) {
        self.base.draw(rng, out);
        for ((o, s), &nu) in out.iter_mut().zip(&self.stables).zip(&self.nu) {
            let stable = sample_positive_stable(*s, rng);
            let x = stable * o.powf(1.0 / s.alpha());
            *o = if nu == 1.0 { x } else { x.powf(1.0 / nu) };
        }
    }
}

pub fn sample_gmml<R: Rng>(rep: &GMMLRep, nu: Option<&PowerParams>, rng: &mut R) -> Result<Vec<f64>> {
    let s = GmmlSampler::new(rep, nu)?;
    let mut out = vec![0.0; s.columns()];
    s.draw(rng, &mut out);
    Ok(out)
}
