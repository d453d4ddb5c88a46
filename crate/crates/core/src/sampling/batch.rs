use super::chain::Sampler;
use super::rng::{Fingerprint, RngState};
use crate::error::{domain, Result};
use rayon::prelude::*;

/// Row-major block of draws.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBatch {
    pub columns: usize,
    pub rows: usize,
    pub data: Vec<f64>,
    pub seed: u64,
    pub fingerprint: u64,
}

impl SampleBatch {
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.columns..(i + 1) * self.columns]
    }

    pub fn column(&self, k: usize) -> Vec<f64> {
        self.data.iter().skip(k).step_by(self.columns).copied().collect()
    }
}

/// `n` draws, row `i` from stream `i` of `state`; runs on the current rayon
/// pool and gives the same bytes for any number of threads.
pub fn sample_batch<S: Sampler + ?Sized>(sampler: &S, n: usize, state: RngState) -> Result<SampleBatch> {
    if n == 0 {
        return domain("sample size must be at least 1");
    }
    let c = sampler.columns();
    let mut data = vec![0.0; n * c];
    data.par_chunks_mut(c).enumerate().for_each(|(i, row)| {
        let mut rng = state.stream(i as u64);
        sampler.draw(&mut rng, row);
    });
    let mut fp = Fingerprint::default();
    fp.bytes(state.algorithm().as_bytes());
    fp.bytes(&state.seed.to_le_bytes());
    for x in &data {
        fp.bytes(&x.to_bits().to_le_bytes());
    }
    Ok(SampleBatch {
        columns: c,
        rows: n,
        data,
        seed: state.seed,
        fingerprint: fp.value(),
    })
}
