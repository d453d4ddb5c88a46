use super::types::{FeedForwardRep, MPHStarRep, PhaseTypeRep, RewardMatrix, SubIntensityMatrix};
use crate::error::{domain, Error, Result};
use crate::linalg::{solve, solve_vec, SquareMatrix};
use crate::special::gamma;
use nalgebra::{DMatrix, DVector};

/// Zero-reward threshold relative to the largest reward rate.
pub const ZERO_REWARD_TOL: f64 = 1e-14;

/// `π exp(Tx) t`.
pub fn ph_density(rep: &PhaseTypeRep, x: f64) -> Result<f64> {
    if !(x > 0.0 && x.is_finite()) {
        return domain(format!("density needs x > 0, got {x}"));
    }
    let v = rep.t.exp(x).transpose() * &rep.pi;
    Ok(v.dot(rep.t.exit()).max(0.0))
}

/// `π exp(Tx) e`, the probability of not yet being absorbed.
pub fn ph_survival(rep: &PhaseTypeRep, x: f64) -> Result<f64> {
    if !(x >= 0.0) || x.is_nan() {
        return domain(format!("survival needs x >= 0, got {x}"));
    }
    if x.is_infinite() {
        return Ok(0.0);
    }
    let v = rep.t.exp(x).transpose() * &rep.pi;
    Ok(v.sum().max(0.0))
}

/// `sum(π) - π exp(Tx) e`; equals `1 - π exp(Tx) e` for proper representations
/// and tends to `sum(π)` for defective ones.
pub fn ph_cdf(rep: &PhaseTypeRep, x: f64) -> Result<f64> {
    let s = ph_survival(rep, x)?;
    Ok((rep.mass() - s).clamp(0.0, rep.mass()))
}

/// `π (sI - T)^{-1} t`.
pub fn ph_laplace(rep: &PhaseTypeRep, s: f64) -> Result<f64> {
    if !(s >= 0.0 && s.is_finite()) {
        return domain(format!("Laplace argument must be >= 0, got {s}"));
    }
    let n = rep.dim();
    let a = SquareMatrix::identity(n, n) * s - rep.t.matrix();
    let y = solve_vec(&a, rep.t.exit())?;
    Ok(rep.pi.dot(&y))
}

/// `Γ(a+1) π (-T)^{-a} e`.
pub fn ph_fractional_moment(rep: &PhaseTypeRep, a: f64) -> Result<f64> {
    if !(a > 0.0 && a.is_finite()) {
        return domain(format!("moment order must be positive, got {a}"));
    }
    let m = rep.t.neg_power(a)?;
    let e = DVector::from_element(rep.dim(), 1.0);
    Ok(gamma(a + 1.0) * rep.pi.dot(&(m * e)))
}

/// `π (Δ(Ru) - T)^{-1} t`.
pub fn mph_laplace(rep: &MPHStarRep, u: &[f64]) -> Result<f64> {
    if u.len() != rep.coordinates() {
        return domain(format!("expected {} Laplace arguments, got {}", rep.coordinates(), u.len()));
    }
    if u.iter().any(|&x| !(x >= 0.0 && x.is_finite())) {
        return domain("Laplace arguments must be >= 0");
    }
    let ru = rep.r.matrix() * DVector::from_column_slice(u);
    let a = SquareMatrix::from_diagonal(&ru) - rep.t.matrix();
    let y = solve_vec(&a, rep.t.exit())?;
    Ok(rep.pi.dot(&y))
}

/// Law of `<w, X>`: an atom at zero plus a possibly defective phase-type part.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionResult {
    pub atom: f64,
    pub rep: PhaseTypeRep,
    /// Original state index of each retained state.
    pub retained: Vec<usize>,
}

/// Splits states by whether `(Rw)_i` is positive, then censors the
/// zero-reward states out of the chain and rescales time by the reward rate.
pub fn project(rep: &MPHStarRep, w: &[f64]) -> Result<ProjectionResult> {
    if w.len() != rep.coordinates() {
        return domain(format!("expected {} weights, got {}", rep.coordinates(), w.len()));
    }
    if w.iter().any(|&x| !(x >= 0.0 && x.is_finite())) || w.iter().all(|&x| x == 0.0) {
        return domain("weights must be nonnegative and not all zero");
    }
    let rw = rep.r.matrix() * DVector::from_column_slice(w);
    let (plus, zero) = partition_rates(&rw);
    if plus.is_empty() {
        return Err(Error::Degenerate("every state earns zero reward".into()));
    }
    let (atom, pi_w, t) = censor(&rep.pi, rep.t.matrix(), rep.t.exit(), &plus, &zero)?;
    let mut tw = t;
    for (k, &i) in plus.iter().enumerate() {
        let rate = rw[i];
        for j in 0..plus.len() {
            tw[(k, j)] /= rate;
        }
    }
    let rep_w = PhaseTypeRep::new(pi_w, SubIntensityMatrix::new(tw)?)?;
    Ok(ProjectionResult {
        atom,
        rep: rep_w,
        retained: plus,
    })
}

pub(crate) fn partition_rates(rw: &DVector<f64>) -> (Vec<usize>, Vec<usize>) {
    let top = rw.iter().copied().fold(0.0, f64::max);
    let tol = ZERO_REWARD_TOL * top;
    let mut plus = vec![];
    let mut zero = vec![];
    for (i, &x) in rw.iter().enumerate() {
        if x > tol {
            plus.push(i);
        } else {
            zero.push(i);
        }
    }
    (plus, zero)
}

/// Censors the `zero` states: returns the probability of absorption before
/// reaching `plus`, the initial vector on `plus` and `T₊₊ + T₊₀(-T₀₀)^{-1}T₀₊`.
pub(crate) fn censor(
    pi: &DVector<f64>,
    t: &SquareMatrix,
    exit: &DVector<f64>,
    plus: &[usize],
    zero: &[usize],
) -> Result<(f64, DVector<f64>, SquareMatrix)> {
    let sub = |rows: &[usize], cols: &[usize]| DMatrix::from_fn(rows.len(), cols.len(), |i, j| t[(rows[i], cols[j])]);
    let pi_p = DVector::from_iterator(plus.len(), plus.iter().map(|&i| pi[i]));
    let t_pp = sub(plus, plus);
    if zero.is_empty() {
        return Ok((0.0, pi_p, t_pp));
    }
    let pi_z = DVector::from_iterator(zero.len(), zero.iter().map(|&i| pi[i]));
    let neg_t00 = -sub(zero, zero);
    let t_0p = sub(zero, plus);
    let t_p0 = sub(plus, zero);
    // X = (-T₀₀)^{-1} T₀₊ and the absorption probabilities (-T₀₀)^{-1} t₀
    let x = solve(&neg_t00, &t_0p)?;
    let exit_z = DVector::from_iterator(zero.len(), zero.iter().map(|&i| exit[i]));
    let absorb = solve_vec(&neg_t00, &exit_z)?;
    let atom = pi_z.dot(&absorb).max(0.0);
    let pi_w = pi_p + x.transpose() * pi_z;
    let t_w = t_pp + t_p0 * x;
    Ok((atom, pi_w, t_w))
}

/// `π exp(C₁x₁) D₁ ⋯ exp(C_n x_n) D_n e`.
pub fn ff_joint_density(rep: &FeedForwardRep, x: &[f64]) -> Result<f64> {
    if x.len() != rep.len() {
        return domain(format!("expected {} coordinates, got {}", rep.len(), x.len()));
    }
    if x.iter().any(|&v| !(v > 0.0 && v.is_finite())) {
        return domain("joint density needs every coordinate > 0");
    }
    let mut row = rep.pi.clone();
    for ((c, d), &xi) in rep.blocks.iter().zip(x) {
        row = d.transpose() * (c.exp(xi).transpose() * row);
    }
    Ok(row.sum().max(0.0))
}

/// `∏ Γ(θ_i+1) · π ∏ (-C_i)^{-θ_i-1} D_i e`; `θ_i = 0` leaves coordinate `i` out.
pub fn ff_joint_fractional_moment(rep: &FeedForwardRep, theta: &[f64]) -> Result<f64> {
    if theta.len() != rep.len() {
        return domain(format!("expected {} orders, got {}", rep.len(), theta.len()));
    }
    if theta.iter().any(|&v| !(v >= 0.0 && v.is_finite())) {
        return domain("moment orders must be >= 0");
    }
    let mut row = rep.pi.clone();
    let mut factor = 1.0;
    for ((c, d), &th) in rep.blocks.iter().zip(theta) {
        let m = c.neg_power(th + 1.0)?;
        row = d.transpose() * (m.transpose() * row);
        factor *= gamma(th + 1.0);
    }
    Ok(factor * row.sum())
}

/// The block-bidiagonal MPH* representation of a feed-forward chain:
/// `T` has `C_i` on the diagonal and `D_i` above it, `R` marks block membership.
pub fn ff_to_mph_star(rep: &FeedForwardRep) -> Result<MPHStarRep> {
    let dims = rep.dims();
    let offs = rep.offsets();
    let p: usize = dims.iter().sum();
    let n = rep.len();
    let mut t = SquareMatrix::zeros(p, p);
    let mut r = DMatrix::zeros(p, n);
    for (b, (c, d)) in rep.blocks.iter().enumerate() {
        let o = offs[b];
        t.view_mut((o, o), (dims[b], dims[b])).copy_from(c.matrix());
        if b + 1 < n {
            t.view_mut((o, offs[b + 1]), (dims[b], dims[b + 1])).copy_from(d);
        }
        for i in 0..dims[b] {
            r[(o + i, b)] = 1.0;
        }
    }
    let mut pi = DVector::zeros(p);
    pi.rows_mut(0, dims[0]).copy_from(&rep.pi);
    MPHStarRep::new(pi, SubIntensityMatrix::new(t)?, RewardMatrix::new(r)?)
}

/// Initial vector of block `i`: `π ∏_{j<i} (-C_j)^{-1} D_j`.
pub fn ff_block_initial(rep: &FeedForwardRep, i: usize) -> Result<DVector<f64>> {
    if i >= rep.len() {
        return domain(format!("block {i} out of range"));
    }
    let mut row = rep.pi.clone();
    for (c, d) in &rep.blocks[..i] {
        let y = solve(&(-c.matrix()).transpose(), &DMatrix::from_column_slice(row.len(), 1, row.as_slice()))?;
        row = d.transpose() * y.column(0);
    }
    Ok(row)
}

/// Marginal law of coordinate `i`: `PH(π ∏_{j<i} (-C_j)^{-1} D_j, C_i)`.
pub fn ff_marginal(rep: &FeedForwardRep, i: usize) -> Result<PhaseTypeRep> {
    let beta = ff_block_initial(rep, i)?;
    PhaseTypeRep::new(beta, rep.blocks[i].0.clone())
}
