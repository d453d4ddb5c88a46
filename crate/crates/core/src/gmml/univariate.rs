use super::types::{check_alpha, AlphaBlocks, GMMLUnivariateRep};
use crate::error::{domain, Result};
use crate::linalg::{solve_vec, SquareMatrix};
use crate::mlfun::{ml_matrix, MLParams};
use crate::phasetype::{PhaseTypeRep, SubIntensityMatrix};
use nalgebra::DVector;

pub(crate) fn check_positive(x: f64, what: &str) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        domain(format!("{what} must be positive, got {x}"))
    }
}

pub(crate) fn check_nonnegative(x: f64, what: &str) -> Result<()> {
    if x >= 0.0 && x.is_finite() {
        Ok(())
    } else {
        domain(format!("{what} must be >= 0, got {x}"))
    }
}

/// `π E_{α,β}(T y) v`.
pub(crate) fn ml_form(alpha: f64, beta: f64, rep: &PhaseTypeRep, y: f64, v: &DVector<f64>) -> Result<f64> {
    let e = ml_matrix(MLParams::new(alpha, beta)?, &(rep.t.matrix() * y))?;
    Ok(rep.pi.dot(&(e * v)))
}

/// `x^{α-1} π E_{α,α}(T x^α) t`.
pub fn mml_density(alpha: f64, rep: &PhaseTypeRep, x: f64) -> Result<f64> {
    check_alpha(alpha)?;
    check_positive(x, "x")?;
    let v = ml_form(alpha, alpha, rep, x.powf(alpha), rep.t.exit())?;
    Ok((x.powf(alpha - 1.0) * v).max(0.0))
}

/// `sum(π) - π E_{α,1}(T x^α) e`.
pub fn mml_cdf(alpha: f64, rep: &PhaseTypeRep, x: f64) -> Result<f64> {
    check_alpha(alpha)?;
    check_nonnegative(x, "x")?;
    if x == 0.0 {
        return Ok(0.0);
    }
    let e = DVector::from_element(rep.dim(), 1.0);
    let s = ml_form(alpha, 1.0, rep, x.powf(alpha), &e)?;
    Ok((rep.mass() - s).clamp(0.0, rep.mass()))
}

/// `π (u^α I - T)^{-1} t`.
pub fn mml_laplace(alpha: f64, rep: &PhaseTypeRep, u: f64) -> Result<f64> {
    check_alpha(alpha)?;
    check_nonnegative(u, "u")?;
    let n = rep.dim();
    let a = SquareMatrix::identity(n, n) * u.powf(alpha) - rep.t.matrix();
    Ok(rep.pi.dot(&solve_vec(&a, rep.t.exit())?))
}

/// `π (Δ(u^{α_1} I_1, …, u^{α_n} I_n) - T)^{-1} t`.
pub fn gmml_univ_laplace(rep: &GMMLUnivariateRep, u: f64) -> Result<f64> {
    check_nonnegative(u, "u")?;
    let shift = DVector::from_iterator(rep.rep.dim(), rep.blocks.per_state().into_iter().map(|a| u.powf(a)));
    let a = SquareMatrix::from_diagonal(&shift) - rep.rep.t.matrix();
    Ok(rep.rep.pi.dot(&solve_vec(&a, rep.rep.t.exit())?))
}

/// `π = (π₁, 0)`, `T = [[T₁, t₁π₂], [0, T₂]]`.
fn stack(a: &PhaseTypeRep, b: &PhaseTypeRep) -> Result<PhaseTypeRep> {
    let (p, q) = (a.dim(), b.dim());
    let mut t = SquareMatrix::zeros(p + q, p + q);
    t.view_mut((0, 0), (p, p)).copy_from(a.t.matrix());
    t.view_mut((p, p), (q, q)).copy_from(b.t.matrix());
    t.view_mut((0, p), (p, q)).copy_from(&(a.t.exit() * b.pi.transpose()));
    let mut pi = DVector::zeros(p + q);
    pi.rows_mut(0, p).copy_from(&a.pi);
    PhaseTypeRep::new(pi, SubIntensityMatrix::new(t)?)
}

/// Sum of independent MML variables sharing the index `α`.
pub fn convolve_same_index(a1: (f64, &PhaseTypeRep), a2: (f64, &PhaseTypeRep)) -> Result<(f64, PhaseTypeRep)> {
    check_alpha(a1.0)?;
    check_alpha(a2.0)?;
    if a1.0 != a2.0 {
        return domain(format!(
            "indices differ ({} vs {}); use convolve_mixed",
            a1.0, a2.0
        ));
    }
    Ok((a1.0, stack(a1.1, a2.1)?))
}

/// Sum of independent GMML variables; the index blocks are concatenated.
pub fn convolve_mixed(a1: &GMMLUnivariateRep, a2: &GMMLUnivariateRep) -> Result<GMMLUnivariateRep> {
    let rep = stack(&a1.rep, &a2.rep)?;
    let mut alphas = a1.blocks.alphas().to_vec();
    alphas.extend_from_slice(a2.blocks.alphas());
    let mut dims = a1.blocks.dims().to_vec();
    dims.extend_from_slice(a2.blocks.dims());
    GMMLUnivariateRep::new(AlphaBlocks::new(alphas, dims)?, rep)
}

/// Law of `cX` for `X ~ MML(α, π, T)`: `(π, c^{-α} T)`.
pub fn scale(alpha: f64, rep: &PhaseTypeRep, c: f64) -> Result<PhaseTypeRep> {
    check_alpha(alpha)?;
    check_positive(c, "scale factor")?;
    PhaseTypeRep::new(rep.pi.clone(), rep.t.scaled(c.powf(-alpha))?)
}

/// Law of `cX` for a GMML variable: block `i` rows are multiplied by `c^{-α_i}`.
pub fn scale_gmml(rep: &GMMLUnivariateRep, c: f64) -> Result<GMMLUnivariateRep> {
    check_positive(c, "scale factor")?;
    let mut t = rep.rep.t.matrix().clone();
    for (i, a) in rep.blocks.per_state().into_iter().enumerate() {
        let f = c.powf(-a);
        t.row_mut(i).scale_mut(f);
    }
    let inner = PhaseTypeRep::new(rep.rep.pi.clone(), SubIntensityMatrix::new(t)?)?;
    GMMLUnivariateRep::new(rep.blocks.clone(), inner)
}
