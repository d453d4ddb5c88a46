//! Model configuration files (TOML) and their resolution into representations.

use crate::error::{usage, CliError, CliResult};
use gmml_core::gmml::{FFGMMLRep, GMMLRep, PowerParams};
use gmml_core::models::{
    anti_identity_coupling, build_figure_config, identity_coupling, orderstat_ff_gmml, uniform_coupling, FigureModel,
    FigureName, OrderStatConfig,
};
use gmml_core::phasetype::{FeedForwardRep, MPHStarRep, PhaseTypeRep, RewardMatrix, SubIntensityMatrix};
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    Ph,
    Mph,
    Mml,
    Gmml,
    FfGmml,
    PowerFfGmml,
    Orderstat,
    Figure,
}

/// A row-major matrix with explicit dimensions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl Matrix {
    pub fn from_dmatrix(m: &DMatrix<f64>) -> Self {
        let data = (0..m.nrows()).flat_map(|i| (0..m.ncols()).map(move |j| m[(i, j)])).collect();
        Self { rows: m.nrows(), cols: m.ncols(), data }
    }

    pub fn to_dmatrix(&self, name: &str) -> CliResult<DMatrix<f64>> {
        if self.data.len() != self.rows * self.cols {
            return usage(format!(
                "matrix {name}: {} entries for declared {}x{}",
                self.data.len(),
                self.rows,
                self.cols
            ));
        }
        Ok(DMatrix::from_row_slice(self.rows, self.cols, &self.data))
    }

    fn square(&self, name: &str) -> CliResult<DMatrix<f64>> {
        if self.rows != self.cols {
            return usage(format!("matrix {name} must be square"));
        }
        self.to_dmatrix(name)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Block {
    #[serde(rename = "C")]
    pub c: Matrix,
    #[serde(rename = "D")]
    pub d: Matrix,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrderStatSpec {
    pub m: usize,
    pub lambda: f64,
    pub mu: f64,
    /// `identity`, `anti-identity` or `uniform`; ignored when `P` is given.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coupling: Option<String>,
    #[serde(rename = "P", default, skip_serializing_if = "Option::is_none")]
    pub p: Option<Matrix>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub kind: ModelKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alphas: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nu: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pi: Option<Vec<f64>>,
    #[serde(rename = "figure-name", default, skip_serializing_if = "Option::is_none")]
    pub figure_name: Option<String>,
    #[serde(rename = "T", default, skip_serializing_if = "Option::is_none")]
    pub t: Option<Matrix>,
    #[serde(rename = "R", default, skip_serializing_if = "Option::is_none")]
    pub r: Option<Matrix>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub blocks: Vec<Block>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orderstat: Option<OrderStatSpec>,
}

/// A resolved model.
#[derive(Debug, Clone)]
pub enum Model {
    Ph(PhaseTypeRep),
    Mph(MPHStarRep),
    Mml(f64, PhaseTypeRep),
    Gmml(GMMLRep),
    FeedForward(FFGMMLRep, Option<PowerParams>),
    Figure(Box<FigureModel>),
}

impl ModelConfig {
    pub fn parse(text: &str) -> CliResult<Self> {
        toml::from_str(text).map_err(|e| CliError::Usage(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serialization is infallible")
    }

    pub fn figure(name: FigureName) -> Self {
        Self {
            kind: ModelKind::Figure,
            alphas: None,
            nu: None,
            pi: None,
            figure_name: Some(name.to_string()),
            t: None,
            r: None,
            blocks: Vec::new(),
            orderstat: None,
        }
    }

    fn need<'a, T>(&self, field: &'a Option<T>, name: &str) -> CliResult<&'a T> {
        field
            .as_ref()
            .ok_or_else(|| CliError::Usage(format!("kind {:?} needs field '{name}'", self.kind)))
    }

    fn ph(&self) -> CliResult<PhaseTypeRep> {
        let pi = DVector::from_vec(self.need(&self.pi, "pi")?.clone());
        let t = self.need(&self.t, "T")?.square("T")?;
        if t.nrows() != pi.len() {
            return usage("pi and T have different dimensions");
        }
        let t = SubIntensityMatrix::new(t).map_err(CliError::model)?;
        PhaseTypeRep::new(pi, t).map_err(CliError::model)
    }

    fn mph(&self) -> CliResult<MPHStarRep> {
        let ph = self.ph()?;
        let r = self.need(&self.r, "R")?.to_dmatrix("R")?;
        if r.nrows() != ph.dim() {
            return usage("R must have one row per state");
        }
        let r = RewardMatrix::new(r).map_err(CliError::model)?;
        MPHStarRep::new(ph.pi, ph.t, r).map_err(CliError::model)
    }

    fn alphas(&self, n: usize) -> CliResult<Vec<f64>> {
        let a = self.need(&self.alphas, "alphas")?;
        if a.len() != n {
            return usage(format!("expected {n} alphas, got {}", a.len()));
        }
        Ok(a.clone())
    }

    fn feed_forward(&self) -> CliResult<FeedForwardRep> {
        if self.blocks.is_empty() {
            return usage("feed-forward kinds need at least one [[blocks]] entry");
        }
        let pi = DVector::from_vec(self.need(&self.pi, "pi")?.clone());
        let mut blocks = Vec::with_capacity(self.blocks.len());
        for (i, b) in self.blocks.iter().enumerate() {
            let c = b.c.square(&format!("blocks[{i}].C"))?;
            let d = b.d.to_dmatrix(&format!("blocks[{i}].D"))?;
            if d.nrows() != c.nrows() {
                return usage(format!("blocks[{i}]: D must have as many rows as C"));
            }
            blocks.push((SubIntensityMatrix::new(c).map_err(CliError::model)?, d));
        }
        FeedForwardRep::new(pi, blocks).map_err(CliError::model)
    }

    fn orderstat_config(&self) -> CliResult<OrderStatConfig> {
        let spec = self.need(&self.orderstat, "orderstat")?;
        let p = match (&spec.p, spec.coupling.as_deref()) {
            (Some(p), _) => p.square("orderstat.P")?,
            (None, Some("identity")) => identity_coupling(spec.m),
            (None, Some("anti-identity")) => anti_identity_coupling(spec.m),
            (None, Some("uniform")) => uniform_coupling(spec.m),
            (None, Some(other)) => return usage(format!("unknown coupling '{other}'")),
            (None, None) => return usage("orderstat needs 'coupling' or 'P'"),
        };
        if p.nrows() != spec.m {
            return usage("orderstat.P must be m x m");
        }
        OrderStatConfig::new(spec.m, spec.lambda, spec.mu, p).map_err(CliError::model)
    }

    /// Builds and validates the representation.
    pub fn resolve(&self) -> CliResult<Model> {
        Ok(match self.kind {
            ModelKind::Ph => Model::Ph(self.ph()?),
            ModelKind::Mph => Model::Mph(self.mph()?),
            ModelKind::Mml => {
                let a = self.alphas(1)?[0];
                let rep = self.ph()?;
                gmml_core::mlfun::MLParams::new(a, a).map_err(CliError::model)?;
                Model::Mml(a, rep)
            }
            ModelKind::Gmml => {
                let base = self.mph()?;
                let a = self.alphas(base.coordinates())?;
                Model::Gmml(GMMLRep::new(a, base).map_err(CliError::model)?)
            }
            ModelKind::FfGmml | ModelKind::PowerFfGmml => {
                let ff = self.feed_forward()?;
                let a = self.alphas(ff.len())?;
                let rep = FFGMMLRep::new(ff, a).map_err(CliError::model)?;
                let nu = if self.kind == ModelKind::PowerFfGmml {
                    let nu = self.need(&self.nu, "nu")?;
                    if nu.len() != rep.len() {
                        return usage(format!("expected {} nu values, got {}", rep.len(), nu.len()));
                    }
                    Some(PowerParams::new(nu.clone()).map_err(CliError::model)?)
                } else {
                    None
                };
                Model::FeedForward(rep, nu)
            }
            ModelKind::Orderstat => {
                let cfg = self.orderstat_config()?;
                let a = match &self.alphas {
                    Some(a) if a.len() == 2 => (a[0], a[1]),
                    Some(_) => return usage("orderstat takes two alphas"),
                    None => (1.0, 1.0),
                };
                Model::FeedForward(orderstat_ff_gmml(&cfg, a).map_err(CliError::model)?, None)
            }
            ModelKind::Figure => {
                let name: FigureName =
                    self.need(&self.figure_name, "figure-name")?.parse().map_err(|e: gmml_core::Error| CliError::Usage(e.to_string()))?;
                Model::Figure(Box::new(build_figure_config(name).map_err(CliError::model)?))
            }
        })
    }
}

impl Model {
    pub fn dim(&self) -> usize {
        match self {
            Self::Ph(_) | Self::Mml(..) => 1,
            Self::Mph(r) => r.coordinates(),
            Self::Gmml(g) => g.coordinates(),
            Self::FeedForward(f, _) => f.len(),
            Self::Figure(f) => f.ff.len(),
        }
    }
}
