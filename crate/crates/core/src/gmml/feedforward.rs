use super::types::{FFGMMLRep, PowerParams};
use super::univariate::check_nonnegative;
use crate::error::{domain, Error, Result};
use crate::linalg::SquareMatrix;
use crate::mlfun::{ml_matrix, MLParams};
use crate::phasetype::{ff_joint_fractional_moment, ff_marginal, PhaseTypeRep};
use crate::special::gamma;
use nalgebra::DVector;

fn check_len(rep: &FFGMMLRep, len: usize, what: &str) -> Result<()> {
    if len != rep.len() {
        return domain(format!("expected {} {what}, got {len}", rep.len()));
    }
    Ok(())
}

/// `π ∏ (u_i^{α_i} I - C_i)^{-1} D_i e`, one solve per block.
pub fn ff_gmml_laplace(rep: &FFGMMLRep, u: &[f64]) -> Result<f64> {
    check_len(rep, u.len(), "Laplace arguments")?;
    for &x in u {
        check_nonnegative(x, "Laplace argument")?;
    }
    let mut row = rep.ff.pi.clone();
    for (((c, d), &ui), &a) in rep.ff.blocks.iter().zip(u).zip(&rep.alphas) {
        let p = c.dim();
        let m = SquareMatrix::identity(p, p) * ui.powf(a) - c.matrix();
        let y = m
            .transpose()
            .lu()
            .solve(&row)
            .ok_or_else(|| Error::Numeric("singular block in feed-forward transform".into()))?;
        row = d.transpose() * y;
    }
    Ok(row.sum())
}

/// `π ∏ ν_i x_i^{α_iν_i - 1} E_{α_i,α_i}(C_i x_i^{α_iν_i}) D_i e`.
fn product_density(rep: &FFGMMLRep, nu: &[f64], x: &[f64]) -> Result<f64> {
    check_len(rep, x.len(), "coordinates")?;
    if x.iter().any(|&v| !(v > 0.0 && v.is_finite())) {
        return domain("joint density needs every coordinate > 0");
    }
    let mut row = rep.ff.pi.clone();
    for ((((c, d), &xi), &a), &n) in rep.ff.blocks.iter().zip(x).zip(&rep.alphas).zip(nu) {
        let b = a * n;
        let e = ml_matrix(MLParams::new(a, a)?, &(c.matrix() * xi.powf(b)))?;
        row = d.transpose() * (e.transpose() * row) * (n * xi.powf(b - 1.0));
    }
    Ok(row.sum().max(0.0))
}

pub fn ff_gmml_density(rep: &FFGMMLRep, x: &[f64]) -> Result<f64> {
    product_density(rep, &vec![1.0; rep.len()], x)
}

/// Coordinate `i` is `MML(α_i, π ∏_{j<i} (-C_j)^{-1} D_j, C_i)`.
pub fn ff_gmml_marginal(rep: &FFGMMLRep, i: usize) -> Result<(f64, PhaseTypeRep)> {
    let m = ff_marginal(&rep.ff, i)?;
    Ok((rep.alphas[i], m))
}

/// Joint density of `Y = X^{1/ν}`.
pub fn ff_power_joint_density(rep: &FFGMMLRep, nu: &PowerParams, x: &[f64]) -> Result<f64> {
    check_len(rep, nu.nu().len(), "power exponents")?;
    product_density(rep, nu.nu(), x)
}

/// `E S^{θ/ν}` for the stable factor `S` with transform `exp(-u^α)`; one
/// when `α = 1`.
fn stable_moment(alpha: f64, nu: f64, theta: f64) -> Result<f64> {
    if theta == 0.0 || alpha == 1.0 {
        return Ok(1.0);
    }
    if theta >= nu * alpha {
        return Err(Error::MomentDoesNotExist {
            order: theta,
            tail_index: nu * alpha,
        });
    }
    Ok(gamma(1.0 - theta / (nu * alpha)) / gamma(1.0 - theta / nu))
}

/// `E ∏ Y_i^{θ_i}` for `Y = X^{1/ν}`; `θ_i = 0` leaves coordinate `i` out.
///
/// Requires `θ_i < ν_i α_i` for every coordinate with `α_i < 1`.
pub fn ff_power_joint_moment(rep: &FFGMMLRep, nu: &PowerParams, theta: &[f64]) -> Result<f64> {
    check_len(rep, nu.nu().len(), "power exponents")?;
    check_len(rep, theta.len(), "moment orders")?;
    for &t in theta {
        check_nonnegative(t, "moment order")?;
    }
    let mut factor = 1.0;
    let mut q = Vec::with_capacity(theta.len());
    for ((&a, &n), &t) in rep.alphas.iter().zip(nu.nu()).zip(theta) {
        factor *= stable_moment(a, n, t)?;
        q.push(t / (n * a));
    }
    Ok(factor * ff_joint_fractional_moment(&rep.ff, &q)?)
}

/// Pearson correlation of `Y_i` and `Y_j`; needs `ν_k α_k > 2` for `k ∈ {i, j}`
/// unless `α_k = 1`.
pub fn correlation_power_pair(rep: &FFGMMLRep, nu: &PowerParams, i: usize, j: usize) -> Result<f64> {
    let n = rep.len();
    if i >= n || j >= n || i == j {
        return domain(format!("need two distinct coordinates below {n}, got {i} and {j}"));
    }
    let moment = |pairs: &[(usize, f64)]| {
        let mut th = vec![0.0; n];
        for &(k, v) in pairs {
            th[k] += v;
        }
        ff_power_joint_moment(rep, nu, &th)
    };
    let mi = moment(&[(i, 1.0)])?;
    let mj = moment(&[(j, 1.0)])?;
    let vi = moment(&[(i, 2.0)])? - mi * mi;
    let vj = moment(&[(j, 2.0)])? - mj * mj;
    let cov = moment(&[(i, 1.0), (j, 1.0)])? - mi * mj;
    if !(vi > 0.0 && vj > 0.0) {
        return Err(Error::Numeric("nonpositive variance".into()));
    }
    Ok((cov / (vi * vj).sqrt()).clamp(-1.0, 1.0))
}

/// Correlation of a bivariate power law.
pub fn correlation_power(rep: &FFGMMLRep, nu: &PowerParams) -> Result<f64> {
    if rep.len() != 2 {
        return domain(format!("correlation needs a bivariate law, got {} blocks", rep.len()));
    }
    correlation_power_pair(rep, nu, 0, 1)
}

/// Marginal moment `E Y_i^θ`.
pub fn power_marginal_moment(rep: &FFGMMLRep, nu: &PowerParams, i: usize, theta: f64) -> Result<f64> {
    if i >= rep.len() {
        return domain(format!("block {i} out of range"));
    }
    let mut th = vec![0.0; rep.len()];
    th[i] = theta;
    ff_power_joint_moment(rep, nu, &th)
}

/// `β_i` vectors for every block.
pub fn ff_block_initials(rep: &FFGMMLRep) -> Result<Vec<DVector<f64>>> {
    (0..rep.len()).map(|i| ff_marginal(&rep.ff, i).map(|m| m.pi)).collect()
}
