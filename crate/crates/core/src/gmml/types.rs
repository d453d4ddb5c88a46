use crate::error::{domain, model, Result};
use crate::phasetype::{FeedForwardRep, MPHStarRep, PhaseTypeRep};

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha <= 1.0 {
        Ok(())
    } else {
        domain(format!("alpha must lie in (0, 1], got {alpha}"))
    }
}

/// Per-block tail indices `α_i` with block sizes.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaBlocks {
    alphas: Vec<f64>,
    dims: Vec<usize>,
}

impl AlphaBlocks {
    pub fn new(alphas: Vec<f64>, dims: Vec<usize>) -> Result<Self> {
        if alphas.len() != dims.len() || alphas.is_empty() {
            return domain("alpha blocks need equally many indices and sizes, at least one");
        }
        for &a in &alphas {
            check_alpha(a)?;
        }
        if dims.contains(&0) {
            return domain("alpha blocks must be nonempty");
        }
        Ok(Self { alphas, dims })
    }

    pub fn single(alpha: f64, dim: usize) -> Result<Self> {
        Self::new(vec![alpha], vec![dim])
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total(&self) -> usize {
        self.dims.iter().sum()
    }

    /// The index attached to every state.
    pub fn per_state(&self) -> Vec<f64> {
        self.alphas
            .iter()
            .zip(&self.dims)
            .flat_map(|(&a, &d)| std::iter::repeat_n(a, d))
            .collect()
    }
}

/// Univariate GMML law: block indices plus a phase-type representation.
#[derive(Debug, Clone, PartialEq)]
pub struct GMMLUnivariateRep {
    pub blocks: AlphaBlocks,
    pub rep: PhaseTypeRep,
}

impl GMMLUnivariateRep {
    pub fn new(blocks: AlphaBlocks, rep: PhaseTypeRep) -> Result<Self> {
        if blocks.total() != rep.dim() {
            return model(format!(
                "alpha blocks cover {} states but the representation has {}",
                blocks.total(),
                rep.dim()
            ));
        }
        Ok(Self { blocks, rep })
    }

    /// MML law as a single-block GMML.
    pub fn mml(alpha: f64, rep: PhaseTypeRep) -> Result<Self> {
        let d = rep.dim();
        Self::new(AlphaBlocks::single(alpha, d)?, rep)
    }
}

/// Multivariate GMML law `(α, π, T, R)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GMMLRep {
    pub alphas: Vec<f64>,
    pub base: MPHStarRep,
}

impl GMMLRep {
    pub fn new(alphas: Vec<f64>, base: MPHStarRep) -> Result<Self> {
        if alphas.len() != base.coordinates() {
            return model(format!(
                "{} tail indices for {} coordinates",
                alphas.len(),
                base.coordinates()
            ));
        }
        for &a in &alphas {
            check_alpha(a)?;
        }
        Ok(Self { alphas, base })
    }

    pub fn coordinates(&self) -> usize {
        self.alphas.len()
    }
}

/// Power exponents `ν`; coordinate `i` of the power law is `X_i^{1/ν_i}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerParams {
    nu: Vec<f64>,
}

impl PowerParams {
    pub fn new(nu: Vec<f64>) -> Result<Self> {
        if nu.is_empty() || nu.iter().any(|&v| !(v > 0.0 && v.is_finite())) {
            return domain("power exponents must be positive");
        }
        Ok(Self { nu })
    }

    pub fn nu(&self) -> &[f64] {
        &self.nu
    }

    /// Tail indices `β_i = ν_i α_i`.
    pub fn betas(&self, alphas: &[f64]) -> Vec<f64> {
        self.nu.iter().zip(alphas).map(|(n, a)| n * a).collect()
    }

    /// Exponents giving the tail indices `β` for indices `α`.
    pub fn from_betas(alphas: &[f64], betas: &[f64]) -> Result<Self> {
        if alphas.len() != betas.len() {
            return domain("need one tail index per coordinate");
        }
        Self::new(betas.iter().zip(alphas).map(|(b, a)| b / a).collect())
    }
}

/// Feed-forward GMML law: a feed-forward chain with one index per block.
#[derive(Debug, Clone, PartialEq)]
pub struct FFGMMLRep {
    pub ff: FeedForwardRep,
    pub alphas: Vec<f64>,
}

impl FFGMMLRep {
    pub fn new(ff: FeedForwardRep, alphas: Vec<f64>) -> Result<Self> {
        if alphas.len() != ff.len() {
            return model(format!("{} tail indices for {} blocks", alphas.len(), ff.len()));
        }
        for &a in &alphas {
            check_alpha(a)?;
        }
        Ok(Self { ff, alphas })
    }

    pub fn len(&self) -> usize {
        self.alphas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphas.is_empty()
    }
}
