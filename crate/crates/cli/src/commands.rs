//! The subcommands, as functions from parsed arguments to output text.

use crate::config::{Matrix, Model, ModelConfig};
use crate::error::{usage, CliError, CliResult};
use crate::grid::{self, GridSpec};
use crate::output::{coordinate_names, float, Csv};
use gmml_core::gmml::{
    ff_gmml_density, ff_gmml_laplace, ff_power_joint_density, ff_power_joint_moment, gmml_joint_laplace, gmml_project,
    gmml_univ_laplace, mml_cdf, mml_density, mml_laplace, FFGMMLRep, GMMLRep, PowerParams,
};
use gmml_core::models::{bivariate_ml_density, log_correlation, mean_se, pearson_with_se, FigureModel, FigureName, Statistic};
use gmml_core::phasetype::{
    ff_to_mph_star, mph_laplace, ph_cdf, ph_density, ph_fractional_moment, ph_laplace, project, FeedForwardRep,
    MPHStarRep, PhaseTypeRep, RewardMatrix,
};
use gmml_core::sampling::{sample_batch, GmmlSampler, MphSampler, RngState, SampleBatch, Sampler};
use gmml_core::{ml_real, Error as CoreError, MLParams};
use nalgebra::DMatrix;
use rayon::prelude::*;
use serde_json::json;
use std::path::Path;

/// Points where projections are spot-checked against the joint transform.
pub const PROJECTION_CHECK_POINTS: [f64; 5] = [0.1, 0.5, 1.0, 2.0, 5.0];

fn evaluate<F>(rows: &[Vec<f64>], f: F) -> CliResult<Vec<f64>>
where
    F: Fn(&[f64]) -> CliResult<f64> + Sync,
{
    rows.par_iter().map(|x| f(x)).collect()
}

fn grid_csv(kind: &str, names: Vec<String>, rows: &[Vec<f64>], values: &[f64]) -> String {
    let mut csv = Csv::new();
    csv.comment(format!("model = {kind}"));
    csv.header(&names);
    for (x, v) in rows.iter().zip(values) {
        let mut r = x.clone();
        r.push(*v);
        csv.row(&r);
    }
    csv.into_string()
}

pub fn cmd_ml(alpha: f64, beta: f64, z: &GridSpec) -> CliResult<String> {
    let params = MLParams::new(alpha, beta)?;
    let zs = z.points()?;
    let values = zs.par_iter().map(|&z| ml_real(params, z).map_err(CliError::from)).collect::<CliResult<Vec<_>>>()?;
    let mut csv = Csv::new();
    csv.comment(format!("mittag-leffler alpha = {} beta = {}", float(alpha), float(beta)));
    csv.header(&["z", "value"]);
    for (z, v) in zs.iter().zip(&values) {
        csv.row(&[*z, *v]);
    }
    Ok(csv.into_string())
}

fn kind_name(model: &Model) -> &'static str {
    match model {
        Model::Ph(_) => "ph",
        Model::Mph(_) => "mph",
        Model::Mml(..) => "mml",
        Model::Gmml(_) => "gmml",
        Model::FeedForward(_, None) => "ff-gmml",
        Model::FeedForward(_, Some(_)) => "power-ff-gmml",
        Model::Figure(f) => f.name.as_str(),
    }
}

fn unsupported<T>(what: &str, model: &Model) -> CliResult<T> {
    usage(format!("{what} is not available for model '{}'", kind_name(model)))
}

pub fn density(model: &Model, x: &[f64]) -> CliResult<f64> {
    Ok(match model {
        Model::Ph(rep) => ph_density(rep, x[0])?,
        Model::Mml(a, rep) => mml_density(*a, rep, x[0])?,
        Model::FeedForward(f, None) => ff_gmml_density(f, x)?,
        Model::FeedForward(f, Some(nu)) => ff_power_joint_density(f, nu, x)?,
        // the order-statistics figures have a closed-form eigenbasis, much faster than the generic path
        Model::Figure(f) => match &f.orderstat {
            Some(cfg) => bivariate_ml_density(cfg, (f.ff.alphas[0], f.ff.alphas[1]), (x[0], x[1]))?,
            None => f.density(x)?,
        },
        Model::Mph(_) | Model::Gmml(_) => return unsupported("a joint density", model),
    })
}

pub fn cmd_density(model: &Model, grids: &[GridSpec]) -> CliResult<String> {
    if matches!(model, Model::Mph(_) | Model::Gmml(_)) {
        return unsupported("a joint density", model);
    }
    let rows = grid::product(grids, model.dim())?;
    grid::require_positive(&rows)?;
    let values = evaluate(&rows, |x| density(model, x))?;
    let mut names = coordinate_names("x", model.dim());
    names.push("density".into());
    Ok(grid_csv(kind_name(model), names, &rows, &values))
}

pub fn cmd_cdf(model: &Model, grids: &[GridSpec]) -> CliResult<String> {
    let f = |x: &[f64]| -> CliResult<f64> {
        Ok(match model {
            Model::Ph(rep) => ph_cdf(rep, x[0])?,
            Model::Mml(a, rep) => mml_cdf(*a, rep, x[0])?,
            _ => return unsupported("a distribution function", model),
        })
    };
    if model.dim() != 1 {
        return unsupported("a distribution function", model);
    }
    let rows = grid::product(grids, 1)?;
    grid::require_positive(&rows)?;
    let values = evaluate(&rows, f)?;
    Ok(grid_csv(kind_name(model), vec!["x".into(), "cdf".into()], &rows, &values))
}

pub fn laplace(model: &Model, u: &[f64]) -> CliResult<f64> {
    Ok(match model {
        Model::Ph(rep) => ph_laplace(rep, u[0])?,
        Model::Mml(a, rep) => mml_laplace(*a, rep, u[0])?,
        Model::Mph(rep) => mph_laplace(rep, u)?,
        Model::Gmml(g) => gmml_joint_laplace(g, u)?,
        Model::FeedForward(f, None) => ff_gmml_laplace(f, u)?,
        Model::FeedForward(_, Some(_)) | Model::Figure(_) => {
            if let Model::Figure(f) = model {
                if f.nu.nu().iter().all(|&n| n == 1.0) {
                    return Ok(ff_gmml_laplace(&f.ff, u)?);
                }
            }
            return unsupported("a joint Laplace transform", model);
        }
    })
}

pub fn cmd_laplace(model: &Model, grids: &[GridSpec]) -> CliResult<String> {
    let rows = grid::product(grids, model.dim())?;
    grid::require_nonnegative(&rows)?;
    let values = evaluate(&rows, |u| laplace(model, u))?;
    let mut names = coordinate_names("u", model.dim());
    names.push("laplace".into());
    Ok(grid_csv(kind_name(model), names, &rows, &values))
}

fn univariate_mph(rep: &PhaseTypeRep) -> CliResult<MPHStarRep> {
    Ok(MPHStarRep::new(rep.pi.clone(), rep.t.clone(), RewardMatrix::ones(rep.dim()))?)
}

fn ff_gmml(f: &FFGMMLRep) -> CliResult<GMMLRep> {
    Ok(GMMLRep::new(f.alphas.clone(), ff_to_mph_star(&f.ff)?)?)
}

pub fn sampler(model: &Model) -> CliResult<Box<dyn Sampler>> {
    Ok(match model {
        Model::Ph(rep) => Box::new(MphSampler::new(&univariate_mph(rep)?)),
        Model::Mml(a, rep) => Box::new(GmmlSampler::new(&GMMLRep::new(vec![*a], univariate_mph(rep)?)?, None)?),
        Model::Mph(rep) => Box::new(MphSampler::new(rep)),
        Model::Gmml(g) => Box::new(GmmlSampler::new(g, None)?),
        Model::FeedForward(f, nu) => Box::new(GmmlSampler::new(&ff_gmml(f)?, nu.as_ref())?),
        Model::Figure(f) => Box::new(f.sampler()?),
    })
}

pub fn draw(model: &Model, n: usize, seed: u64) -> CliResult<SampleBatch> {
    if n == 0 {
        return usage("sample size must be at least 1");
    }
    Ok(sample_batch(sampler(model)?.as_ref(), n, RngState::new(seed))?)
}

pub fn samples_csv(kind: &str, batch: &SampleBatch) -> String {
    let mut csv = Csv::new();
    csv.comment(format!("model = {kind}"));
    csv.header(&coordinate_names("y", batch.columns));
    for i in 0..batch.rows {
        csv.row(batch.row(i));
    }
    csv.comment(format!("rows = {}", batch.rows));
    csv.comment(format!("seed = {}", batch.seed));
    csv.comment(format!("algorithm = {}", RngState::new(batch.seed).algorithm()));
    csv.comment(format!("fingerprint = {:016x}", batch.fingerprint));
    csv.into_string()
}

pub fn cmd_sample(model: &Model, n: usize, seed: u64) -> CliResult<String> {
    let batch = draw(model, n, seed)?;
    Ok(samples_csv(kind_name(model), &batch))
}

fn single_block(alpha: f64, rep: &PhaseTypeRep) -> CliResult<FFGMMLRep> {
    let d = DMatrix::from_diagonal(rep.t.exit());
    let ff = FeedForwardRep::new(rep.pi.clone(), vec![(rep.t.clone(), d)])?;
    Ok(FFGMMLRep::new(ff, vec![alpha])?)
}

/// `E ∏ Y_i^{θ_i}` from the closed-form moment formulas.
pub fn analytic_moment(model: &Model, theta: &[f64]) -> CliResult<std::result::Result<f64, CoreError>> {
    let ones = |n: usize| PowerParams::new(vec![1.0; n]);
    Ok(match model {
        Model::Ph(rep) => ph_fractional_moment(rep, theta[0]),
        Model::Mml(a, rep) => ff_power_joint_moment(&single_block(*a, rep)?, &ones(1)?, theta),
        Model::FeedForward(f, nu) => match nu {
            Some(nu) => ff_power_joint_moment(f, nu, theta),
            None => ff_power_joint_moment(f, &ones(f.len())?, theta),
        },
        Model::Figure(f) => ff_power_joint_moment(&f.ff, &f.nu, theta),
        Model::Mph(_) | Model::Gmml(_) => return unsupported("closed-form moments", model),
    })
}

pub fn cmd_moments(model: &Model, thetas: &[Vec<f64>], n: usize, seed: u64) -> CliResult<String> {
    let dim = model.dim();
    if thetas.is_empty() {
        return usage("give at least one --theta");
    }
    if let Some(t) = thetas.iter().find(|t| t.len() != dim || t.iter().any(|&x| !(x >= 0.0 && x.is_finite()))) {
        return usage(format!("theta {t:?} must have {dim} nonnegative entries"));
    }
    let batch = draw(model, n, seed)?;
    let mut csv = Csv::new();
    csv.comment(format!("model = {}", kind_name(model)));
    csv.comment(format!("monte carlo rows = {n} seed = {seed}"));
    let mut names = coordinate_names("theta", dim);
    names.extend(["analytic", "mc", "mc_se", "note"].map(String::from));
    csv.header(&names);
    for theta in thetas {
        let mut cells: Vec<String> = theta.iter().map(|&t| float(t)).collect();
        match analytic_moment(model, theta)? {
            Ok(v) => {
                let prod: Vec<f64> = (0..batch.rows)
                    .map(|i| batch.row(i).iter().zip(theta).map(|(y, t)| y.powf(*t)).product())
                    .collect();
                let (m, se) = mean_se(&prod);
                cells.extend([float(v), float(m), float(se), String::new()]);
            }
            Err(CoreError::MomentDoesNotExist { .. }) => {
                cells.extend(["inf".into(), String::new(), String::new(), "does not exist".into()]);
            }
            Err(e) => return Err(e.into()),
        }
        csv.raw_row(&cells);
    }
    Ok(csv.into_string())
}

fn matrix_json(m: &DMatrix<f64>) -> serde_json::Value {
    serde_json::to_value(Matrix::from_dmatrix(m)).expect("matrix serializes")
}

fn residual_json(f: impl Fn(f64) -> CliResult<f64>) -> CliResult<(serde_json::Value, f64)> {
    let mut worst = 0.0f64;
    let mut rows = Vec::new();
    for &u in &PROJECTION_CHECK_POINTS {
        let r = f(u)?;
        worst = worst.max(r);
        rows.push(json!({ "u": u, "residual": r }));
    }
    Ok((serde_json::Value::Array(rows), worst))
}

fn project_mph(rep: &MPHStarRep, w: &[f64]) -> CliResult<serde_json::Value> {
    let pr = project(rep, w)?;
    let (residuals, worst) = residual_json(|u| {
        let uw: Vec<f64> = w.iter().map(|x| x * u).collect();
        Ok((mph_laplace(rep, &uw)? - pr.atom - ph_laplace(&pr.rep, u)?).abs())
    })?;
    Ok(json!({
        "w": w,
        "atom": pr.atom,
        "retained": pr.retained,
        "pi": pr.rep.pi.as_slice(),
        "T": matrix_json(pr.rep.t.matrix()),
        "residuals": residuals,
        "max_residual": worst,
    }))
}

fn project_gmml(rep: &GMMLRep, w: &[f64]) -> CliResult<serde_json::Value> {
    let pr = gmml_project(rep, w)?;
    let (residuals, worst) = residual_json(|u| {
        let uw: Vec<f64> = w.iter().map(|x| x * u).collect();
        Ok((gmml_joint_laplace(rep, &uw)? - pr.atom - gmml_univ_laplace(&pr.law, u)?).abs())
    })?;
    Ok(json!({
        "w": w,
        "atom": pr.atom,
        "retained": pr.retained,
        "alphas": pr.law.blocks.alphas(),
        "block_dims": pr.law.blocks.dims(),
        "pi": pr.law.rep.pi.as_slice(),
        "T": matrix_json(pr.law.rep.t.matrix()),
        "residuals": residuals,
        "max_residual": worst,
    }))
}

pub fn cmd_project(model: &Model, w: &[f64]) -> CliResult<String> {
    let report = match model {
        Model::Mph(rep) => project_mph(rep, w)?,
        Model::Gmml(g) => project_gmml(g, w)?,
        Model::FeedForward(f, None) => project_gmml(&ff_gmml(f)?, w)?,
        Model::Figure(f) if f.nu.nu().iter().all(|&n| n == 1.0) => project_gmml(&f.gmml, w)?,
        _ => return unsupported("projection", model),
    };
    Ok(serde_json::to_string_pretty(&report).expect("report serializes") + "\n")
}

pub struct FigureOptions {
    pub seed: u64,
    /// Draws written to the samples file; defaults to the figure's own size.
    pub n: Option<usize>,
    /// Draws behind the Monte Carlo correlation of the power figures.
    pub mc_n: usize,
    pub grid: Vec<GridSpec>,
}

pub const FIGURE_GRID: &str = "0.05:5:100:log";

fn figure_summary(fig: &FigureModel, batch: &SampleBatch, opts: &FigureOptions) -> CliResult<serde_json::Value> {
    let e = fig.expected;
    let log_corr = log_correlation(batch)?;
    let mut summary = json!({
        "figure": fig.name.as_str(),
        "statistic": e.statistic.as_str(),
        "expected": e.value,
        "tolerance": e.tolerance,
        "seed": opts.seed,
        "samples": batch.rows,
        "fingerprint": format!("{:016x}", batch.fingerprint),
        "log_correlation": log_corr,
    });
    let pass = match e.statistic {
        Statistic::LogCorrelation => {
            summary["observed"] = json!(log_corr);
            (log_corr - e.value).abs() <= e.tolerance
        }
        Statistic::Pearson => {
            let rho = fig.analytic_correlation()?.expect("power figures have a closed form");
            let mc = sample_batch(&fig.sampler()?, opts.mc_n, RngState::new(opts.seed))?;
            let (r, se) = pearson_with_se(&mc.column(0), &mc.column(1))?;
            let within = (r - rho).abs() <= 3.0 * se;
            summary["observed"] = json!(rho);
            summary["monte_carlo"] = json!({
                "samples": opts.mc_n,
                "estimate": r,
                "standard_error": se,
                "within_3se": within,
            });
            (rho - e.value).abs() <= e.tolerance && within
        }
    };
    summary["pass"] = json!(pass);
    Ok(summary)
}

/// Writes `<name>_density.csv`, `<name>_samples.csv` and `<name>_summary.json`
/// into `dir`; returns the summary.
pub fn cmd_figure(name: &str, dir: &Path, opts: &FigureOptions) -> CliResult<serde_json::Value> {
    let name: FigureName = name.parse().map_err(|e: CoreError| CliError::Usage(e.to_string()))?;
    let model = ModelConfig::figure(name).resolve()?;
    let Model::Figure(fig) = &model else { unreachable!() };
    std::fs::create_dir_all(dir)?;

    let grids = if opts.grid.is_empty() { vec![FIGURE_GRID.parse()?] } else { opts.grid.clone() };
    let density = cmd_density(&model, &grids)?;
    let batch = draw(&model, opts.n.unwrap_or(fig.sample_size), opts.seed)?;
    let summary = figure_summary(fig, &batch, opts)?;

    std::fs::write(dir.join(format!("{name}_density.csv")), density)?;
    std::fs::write(dir.join(format!("{name}_samples.csv")), samples_csv(name.as_str(), &batch))?;
    let text = serde_json::to_string_pretty(&summary).expect("summary serializes") + "\n";
    std::fs::write(dir.join(format!("{name}_summary.json")), text)?;
    Ok(summary)
}
