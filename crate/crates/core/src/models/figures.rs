//! The four worked configurations and the statistics quoted for them.

use super::orderstat::{
    anti_identity_coupling, identity_coupling, orderstat_ff_gmml, orderstat_gmml, OrderStatConfig,
};
use crate::error::{domain, Error, Result};
use crate::gmml::{
    correlation_power, ff_block_initials, ff_power_joint_density, power_density, FFGMMLRep, GMMLRep, PowerParams,
};
use crate::linalg::{is_diagonal, SquareMatrix};
use crate::phasetype::{ff_to_mph_star, FeedForwardRep, PhaseTypeRep, SubIntensityMatrix};
use crate::sampling::GmmlSampler;
use nalgebra::{DMatrix, DVector};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FigureName {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
}

impl FigureName {
    pub const ALL: [FigureName; 4] = [Self::Fig1, Self::Fig2, Self::Fig3, Self::Fig4];

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Fig1 => "fig1",
            Self::Fig2 => "fig2",
            Self::Fig3 => "fig3",
            Self::Fig4 => "fig4",
        }
    }
}

impl fmt::Display for FigureName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FigureName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| Error::Domain(format!("unknown figure '{s}' (expected fig1, fig2, fig3 or fig4)")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Statistic {
    /// Pearson correlation of the logarithms of simulated pairs.
    LogCorrelation,
    /// Pearson correlation from the closed-form moments.
    Pearson,
}

impl Statistic {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::LogCorrelation => "log_correlation",
            Self::Pearson => "pearson_correlation",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Expected {
    pub statistic: Statistic,
    pub value: f64,
    pub tolerance: f64,
}

/// A figure configuration with its reference statistic.
#[derive(Debug, Clone, PartialEq)]
pub struct FigureModel {
    pub name: FigureName,
    pub ff: FFGMMLRep,
    pub gmml: GMMLRep,
    pub nu: PowerParams,
    pub orderstat: Option<OrderStatConfig>,
    pub expected: Expected,
    /// Number of simulated points shown with the figure.
    pub sample_size: usize,
}

pub const ORDERSTAT_ALPHAS: (f64, f64) = (0.6, 0.7);
pub const POWER_ALPHAS: [f64; 2] = [0.6, 0.7];
pub const POWER_BETAS: [f64; 2] = [3.0, 3.0];
pub const MIXTURE_RATES: [f64; 3] = [10.0, 1.0, 0.1];

fn mixture_chain(d1: SquareMatrix) -> Result<FeedForwardRep> {
    let c = SquareMatrix::from_diagonal(&DVector::from_iterator(3, MIXTURE_RATES.iter().map(|r| -r)));
    let c1 = SubIntensityMatrix::new(c.clone())?;
    let c2 = SubIntensityMatrix::new(c.clone())?;
    FeedForwardRep::new(DVector::from_element(3, 1.0 / 3.0), vec![(c1, d1), (c2, -c)])
}

pub fn build_figure_config(name: FigureName) -> Result<FigureModel> {
    match name {
        FigureName::Fig1 | FigureName::Fig2 => {
            let m = 20;
            let (p, value) = if name == FigureName::Fig1 {
                (identity_coupling(m), -0.53)
            } else {
                (anti_identity_coupling(m), 0.55)
            };
            let cfg = OrderStatConfig::new(m, 1.0, 2.0, p)?;
            Ok(FigureModel {
                name,
                ff: orderstat_ff_gmml(&cfg, ORDERSTAT_ALPHAS)?,
                gmml: orderstat_gmml(&cfg, ORDERSTAT_ALPHAS)?,
                nu: PowerParams::new(vec![1.0, 1.0])?,
                orderstat: Some(cfg),
                expected: Expected {
                    statistic: Statistic::LogCorrelation,
                    value,
                    tolerance: 0.1,
                },
                sample_size: 1000,
            })
        }
        FigureName::Fig3 | FigureName::Fig4 => {
            let (d1, value) = if name == FigureName::Fig3 {
                (SquareMatrix::from_diagonal(&DVector::from_row_slice(&MIXTURE_RATES)), 0.35)
            } else {
                (
                    DMatrix::from_row_slice(3, 3, &[0.0, 0.0, 10.0, 0.0, 1.0, 0.0, 0.1, 0.0, 0.0]),
                    -0.32,
                )
            };
            let ff = FFGMMLRep::new(mixture_chain(d1)?, POWER_ALPHAS.to_vec())?;
            let gmml = GMMLRep::new(POWER_ALPHAS.to_vec(), ff_to_mph_star(&ff.ff)?)?;
            Ok(FigureModel {
                name,
                nu: PowerParams::from_betas(&POWER_ALPHAS, &POWER_BETAS)?,
                ff,
                gmml,
                orderstat: None,
                expected: Expected {
                    statistic: Statistic::Pearson,
                    value,
                    tolerance: 0.01,
                },
                sample_size: 1000,
            })
        }
    }
}

impl FigureModel {
    pub fn density(&self, x: &[f64]) -> Result<f64> {
        ff_power_joint_density(&self.ff, &self.nu, x)
    }

    pub fn sampler(&self) -> Result<GmmlSampler> {
        GmmlSampler::new(&self.gmml, Some(&self.nu))
    }

    /// Closed-form Pearson correlation; only the power figures have one.
    pub fn analytic_correlation(&self) -> Result<Option<f64>> {
        match self.expected.statistic {
            Statistic::Pearson => correlation_power(&self.ff, &self.nu).map(Some),
            Statistic::LogCorrelation => Ok(None),
        }
    }
}

/// Marginal density of coordinate `i` of a power figure as the mixture
/// `Σ_j β_{ij} · power_density(α_i, Exp(λ_j), β_i, x)` over the diagonal rates.
pub fn mixture_marginal_density(name: FigureName, i: usize, x: f64) -> Result<f64> {
    let fig = build_figure_config(name)?;
    if fig.orderstat.is_some() {
        return domain(format!("{name} is not a mixture configuration"));
    }
    if i >= fig.ff.len() {
        return domain(format!("coordinate {i} out of range"));
    }
    let weights = &ff_block_initials(&fig.ff)?[i];
    let c = fig.ff.ff.blocks[i].0.matrix();
    if !is_diagonal(c) {
        return domain("mixture form needs a diagonal block");
    }
    let alpha = fig.ff.alphas[i];
    let beta = fig.nu.betas(&fig.ff.alphas)[i];
    let mut f = 0.0;
    for (j, &w) in weights.iter().enumerate() {
        if w != 0.0 {
            f += w * power_density(alpha, &PhaseTypeRep::exponential(-c[(j, j)])?, beta, x)?;
        }
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn names_round_trip() {
        for n in FigureName::ALL {
            assert_eq!(n.as_str().parse::<FigureName>().unwrap(), n);
        }
        assert!("fig5".parse::<FigureName>().is_err());
    }

    #[test]
    fn power_exponents() {
        let f = build_figure_config(FigureName::Fig3).unwrap();
        assert_relative_eq!(f.nu.nu()[0], 5.0, max_relative = 1e-15);
        assert_relative_eq!(f.nu.nu()[1], 3.0 / 0.7, max_relative = 1e-15);
    }

    #[test]
    fn mixture_matches_generic_marginal() {
        use crate::gmml::ff_gmml_marginal;
        let f = build_figure_config(FigureName::Fig4).unwrap();
        for i in 0..2 {
            let (a, rep) = ff_gmml_marginal(&f.ff, i).unwrap();
            let b = f.nu.betas(&f.ff.alphas)[i];
            for &x in &[0.3, 1.0, 2.2] {
                assert_relative_eq!(
                    mixture_marginal_density(FigureName::Fig4, i, x).unwrap(),
                    power_density(a, &rep, b, x).unwrap(),
                    max_relative = 1e-12
                );
            }
        }
    }
}
