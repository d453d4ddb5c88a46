//! Built-in invariant suite behind `gmml validate`.
//!
//! Each check yields a nonnegative residual compared against a tolerance.
//! Tolerances can be overridden with `GMML_TOLERANCES=name=value,...`.

use crate::error::{usage, CliError, CliResult};
use gmml_core::gmml::{
    convolve_same_index, correlation_power, green_by_quadrature, mml_cdf, mml_density, mml_laplace, mml_tail_constant,
};
use gmml_core::linalg::SquareMatrix;
use gmml_core::mlfun::{matrix_neg_fractional_power, ml_matrix_hankel, ml_real, MLParams};
use gmml_core::models::{
    bivariate_ml_density, build_figure_config, conditional_exceedance, identity_coupling, orderstat_ff_gmml, FigureName,
    OrderStatConfig,
};
use gmml_core::gmml::ff_gmml_density;
use gmml_core::phasetype::{
    mph_laplace, ph_cdf, ph_density, ph_laplace, project, random_mph_star, random_ph, random_subintensity,
    PhaseTypeRep, SubIntensityMatrix,
};
use gmml_core::sampling::{sample_batch, sample_positive_stable, MphSampler, RngState, StableSpec};
use gmml_core::Error as CoreError;
use std::collections::BTreeMap;
use std::fmt::Write as _;

pub const TOLERANCE_ENV: &str = "GMML_TOLERANCES";
pub const MODULES: [&str; 5] = ["mlfun", "phasetype", "gmml", "sampling", "models"];

type Residual = Result<f64, CoreError>;

struct Check {
    module: &'static str,
    name: &'static str,
    tolerance: f64,
    run: fn() -> Residual,
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn mat_rel(a: &SquareMatrix, b: &SquareMatrix) -> f64 {
    (a - b).amax() / b.amax()
}

fn rep2() -> PhaseTypeRep {
    PhaseTypeRep::from_parts(&[0.6, 0.4], SquareMatrix::from_row_slice(2, 2, &[-1.5, 0.5, 0.2, -0.8]))
        .expect("fixed representation is valid")
}

fn ml_exp() -> Residual {
    let p = MLParams::new(1.0, 1.0)?;
    [-1.0, 0.0, 1.0].iter().try_fold(0.0f64, |w, &z| Ok(w.max(rel(ml_real(p, z)?, f64::exp(z)))))
}

fn ml_erfc() -> Residual {
    // E_{1/2,1}(-1) = e erfc(1)
    Ok(rel(ml_real(MLParams::new(0.5, 1.0)?, -1.0)?, 0.427_583_576_155_807))
}

fn ml_recurrence() -> Residual {
    let mut worst = 0.0f64;
    for &(a, b) in &[(0.6, 0.6), (0.8, 1.0), (0.5, 1.3)] {
        for i in 0..=10 {
            let z = -5.0 - 2.5 * i as f64;
            let lhs = ml_real(MLParams::new(a, b)?, z)?;
            let rhs = gmml_core::special::rgamma(b) + z * ml_real(MLParams::new(a, a + b)?, z)?;
            worst = worst.max((lhs - rhs).abs() / (lhs.abs() + gmml_core::special::rgamma(b)));
        }
    }
    Ok(worst)
}

fn ml_matrix_exp() -> Residual {
    let mut rng = RngState::new(11).stream(0);
    let mut worst = 0.0f64;
    for d in 1..=4 {
        let t = random_subintensity(&mut rng, d)?;
        worst = worst.max(mat_rel(&ml_matrix_hankel(MLParams::new(1.0, 1.0)?, t.matrix())?, &t.exp(1.0)));
    }
    Ok(worst)
}

fn ml_fractional_power() -> Residual {
    let t = rep2().t;
    let h = matrix_neg_fractional_power(t.matrix(), 0.5)?;
    Ok(mat_rel(&(&h * &h), &t.green()?))
}

fn ph_normalization() -> Residual {
    let r = rep2();
    Ok((ph_cdf(&r, 200.0)? - 1.0).abs().max((ph_laplace(&r, 0.0)? - 1.0).abs()))
}

fn ph_projection_identity() -> Residual {
    let mut rng = RngState::new(12).stream(0);
    let mut worst = 0.0f64;
    for k in 0..5 {
        let rep = random_mph_star(&mut rng, 2 + k % 3, 2, 0.3)?;
        let w = [1.0, 0.5 + k as f64 * 0.2];
        let pr = project(&rep, &w)?;
        for &u in &[0.2, 1.0, 3.0] {
            let joint = mph_laplace(&rep, &[u * w[0], u * w[1]])?;
            worst = worst.max((joint - pr.atom - ph_laplace(&pr.rep, u)?).abs());
        }
    }
    Ok(worst)
}

fn gmml_alpha_one() -> Residual {
    let mut rng = RngState::new(13).stream(0);
    let mut worst = 0.0f64;
    for p in 1..=5 {
        let rep = random_ph(&mut rng, p)?;
        for &x in &[0.1, 1.0, 4.0] {
            worst = worst.max(rel(mml_density(1.0, &rep, x)?, ph_density(&rep, x)?));
            worst = worst.max(rel(mml_cdf(1.0, &rep, x)?, ph_cdf(&rep, x)?));
            worst = worst.max(rel(mml_laplace(1.0, &rep, x)?, ph_laplace(&rep, x)?));
        }
    }
    Ok(worst)
}

fn gmml_green() -> Residual {
    let t = rep2().t;
    let g = t.green()?;
    [0.5, 0.9].iter().try_fold(0.0f64, |w, &a| Ok(w.max(mat_rel(&green_by_quadrature(a, &t)?, &g))))
}

fn gmml_tail() -> Residual {
    let r = rep2();
    let mut worst = 0.0f64;
    for &a in &[0.5, 0.6, 0.9] {
        let x = 1e6f64;
        let scaled = x.powf(a) * (1.0 - mml_cdf(a, &r, x)?);
        worst = worst.max(rel(scaled, mml_tail_constant(a, &r)?));
    }
    Ok(worst)
}

fn gmml_convolution() -> Residual {
    let e = PhaseTypeRep::exponential(2.0)?;
    let (a, c) = convolve_same_index((0.7, &rep2()), (0.7, &e))?;
    [0.3, 1.0, 4.0].iter().try_fold(0.0f64, |w, &u| {
        let want = mml_laplace(0.7, &rep2(), u)? * mml_laplace(0.7, &e, u)?;
        Ok(w.max(rel(mml_laplace(a, &c, u)?, want)))
    })
}

fn sampling_stable_ks() -> Residual {
    // S_{1/2} has the law of 1/(4G) with G ~ Gamma(1/2, 1), i.e. cdf erfc(1/(2√x))
    let n = 20_000;
    let mut rng = RngState::new(14).stream(0);
    let spec = StableSpec::new(0.5)?;
    let mut x: Vec<f64> = (0..n).map(|_| sample_positive_stable(spec, &mut rng)).collect();
    x.sort_by(f64::total_cmp);
    let cdf = |v: f64| erfc(0.5 / v.sqrt());
    let d = x.iter().enumerate().fold(0.0f64, |d, (i, &v)| {
        let f = cdf(v);
        d.max((f - i as f64 / n as f64).abs()).max(((i + 1) as f64 / n as f64 - f).abs())
    });
    // residual in units of the 1% critical value
    Ok(d * (n as f64).sqrt() / gmml_core::models::KS_CRITICAL_1PCT)
}

/// `erfc(x) = e^{-x²} E_{1/2,1}(-x)`.
fn erfc(x: f64) -> f64 {
    let v = ml_real(MLParams::new(0.5, 1.0).expect("valid"), -x).expect("E_{1/2,1} on the negative axis");
    v * (-x * x).exp()
}

fn sampling_atom() -> Residual {
    let rep = gmml_core::phasetype::MPHStarRep::new(
        nalgebra::DVector::from_vec(vec![0.3, 0.7]),
        SubIntensityMatrix::from_row_slice(2, &[-1.0, 0.0, 0.0, -2.0])?,
        gmml_core::phasetype::RewardMatrix::new(nalgebra::DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 0.0, 1.0]))?,
    )?;
    let b = sample_batch(&MphSampler::new(&rep), 50_000, RngState::new(15))?;
    let zeros: Vec<f64> = b.column(0).iter().map(|&x| if x == 0.0 { 1.0 } else { 0.0 }).collect();
    let (m, se) = gmml_core::models::mean_se(&zeros);
    // residual in standard errors
    Ok((m - 0.7).abs() / se)
}

fn sampling_determinism() -> Residual {
    let rep = random_mph_star(&mut RngState::new(16).stream(0), 3, 2, 0.2)?;
    let s = MphSampler::new(&rep);
    let a = sample_batch(&s, 2000, RngState::new(5))?;
    let b = sample_batch(&s, 2000, RngState::new(5))?;
    Ok(if a == b { 0.0 } else { 1.0 })
}

fn models_figure_correlations() -> Residual {
    let mut worst = 0.0f64;
    for name in [FigureName::Fig3, FigureName::Fig4] {
        let fig = build_figure_config(name)?;
        let rho = correlation_power(&fig.ff, &fig.nu)?;
        // residual relative to the caption tolerance
        worst = worst.max((rho - fig.expected.value).abs() / fig.expected.tolerance);
    }
    Ok(worst)
}

fn models_eigen_path() -> Residual {
    let mut worst = 0.0f64;
    for m in 2..=4 {
        let cfg = OrderStatConfig::new(m, 1.0, 2.0, identity_coupling(m))?;
        let ff = orderstat_ff_gmml(&cfg, (0.6, 0.7))?;
        for &(x1, x2) in &[(0.2, 0.3), (1.0, 1.0), (3.0, 0.5)] {
            let a = bivariate_ml_density(&cfg, (0.6, 0.7), (x1, x2))?;
            worst = worst.max(rel(a, ff_gmml_density(&ff, &[x1, x2])?));
        }
    }
    Ok(worst)
}

fn models_tail_independence() -> Residual {
    let fig = build_figure_config(FigureName::Fig1)?;
    let b = sample_batch(&fig.sampler()?, 100_000, RngState::new(17))?;
    Ok(conditional_exceedance(&b, 0.99))
}

fn suite() -> Vec<Check> {
    let c = |module, name, tolerance, run| Check { module, name, tolerance, run };
    vec![
        c("mlfun", "mlfun.exponential", 1e-14, ml_exp as fn() -> Residual),
        c("mlfun", "mlfun.erfc", 1e-12, ml_erfc),
        c("mlfun", "mlfun.recurrence", 1e-10, ml_recurrence),
        c("mlfun", "mlfun.matrix_exponential", 1e-10, ml_matrix_exp),
        c("mlfun", "mlfun.fractional_power", 1e-10, ml_fractional_power),
        c("phasetype", "phasetype.normalization", 1e-12, ph_normalization),
        c("phasetype", "phasetype.projection_identity", 1e-10, ph_projection_identity),
        c("gmml", "gmml.alpha_one_collapse", 1e-10, gmml_alpha_one),
        c("gmml", "gmml.green_matrix", 1e-3, gmml_green),
        c("gmml", "gmml.tail_constant", 1e-2, gmml_tail),
        c("gmml", "gmml.convolution", 1e-10, gmml_convolution),
        c("sampling", "sampling.stable_ks", 1.0, sampling_stable_ks),
        c("sampling", "sampling.atom_fraction", 3.0, sampling_atom),
        c("sampling", "sampling.determinism", 0.0, sampling_determinism),
        c("models", "models.power_correlations", 1.0, models_figure_correlations),
        c("models", "models.eigen_path", 1e-12, models_eigen_path),
        c("models", "models.tail_independence", 0.15, models_tail_independence),
    ]
}

fn overrides(spec: Option<&str>) -> CliResult<BTreeMap<String, f64>> {
    let mut map = BTreeMap::new();
    let Some(spec) = spec else { return Ok(map) };
    let known: Vec<&str> = suite().iter().map(|c| c.name).collect();
    for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let Some((k, v)) = item.split_once('=') else {
            return usage(format!("{TOLERANCE_ENV}: '{item}' is not name=value"));
        };
        if !known.contains(&k.trim()) {
            return usage(format!("{TOLERANCE_ENV}: unknown check '{k}'"));
        }
        let v: f64 = v.trim().parse().or_else(|_| usage(format!("{TOLERANCE_ENV}: bad tolerance '{v}'")))?;
        map.insert(k.trim().to_string(), v);
    }
    Ok(map)
}

/// Runs the suite (optionally one module) and returns the report and whether
/// every check passed.
pub fn cmd_validate(module: Option<&str>, tolerance_spec: Option<&str>) -> CliResult<(String, bool)> {
    if let Some(m) = module {
        if !MODULES.contains(&m) {
            return usage(format!("unknown module '{m}' (expected one of {})", MODULES.join(", ")));
        }
    }
    let over = overrides(tolerance_spec)?;
    let mut report = String::new();
    let mut all = true;
    for check in suite().into_iter().filter(|c| module.is_none_or(|m| m == c.module)) {
        let tol = over.get(check.name).copied().unwrap_or(check.tolerance);
        let (ok, detail) = match (check.run)() {
            Ok(r) => (r.is_finite() && r <= tol, format!("residual={r:e} tolerance={tol:e}")),
            Err(e) => (false, format!("error: {e}")),
        };
        all &= ok;
        let _ = writeln!(report, "{} {} {detail}", if ok { "PASS" } else { "FAIL" }, check.name);
    }
    let _ = writeln!(report, "{}", if all { "all checks passed" } else { "some checks failed" });
    Ok((report, all))
}

/// Maps a failed suite to the numeric-failure exit code.
pub fn failure() -> CliError {
    CliError::Numeric("validation failed".into())
}
