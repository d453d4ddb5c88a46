//! Dense linear-algebra plumbing: eigen-decomposition with a conditioning
//! estimate, complex solves and small helpers shared by the matrix functions.

use crate::error::{domain, numeric, Result};
use nalgebra::{DMatrix, DVector, Schur};
use num_complex::Complex64;

/// Real square matrix.
pub type SquareMatrix = DMatrix<f64>;
pub type CMatrix = DMatrix<Complex64>;

/// Eigenvalues, right eigenvectors (unit columns) and the 2-norm condition
/// number of the eigenvector matrix (infinite when it is numerically singular).
#[derive(Debug, Clone)]
pub struct SpectralInfo {
    pub eigenvalues: Vec<Complex64>,
    pub vectors: CMatrix,
    pub condition: f64,
}

impl SpectralInfo {
    pub fn is_diagonalizable(&self) -> bool {
        self.condition.is_finite()
    }

    /// Largest real part of the spectrum.
    pub fn abscissa(&self) -> f64 {
        self.eigenvalues.iter().map(|l| l.re).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Largest modulus of the spectrum.
    pub fn radius(&self) -> f64 {
        self.eigenvalues.iter().map(|l| l.norm()).fold(0.0, f64::max)
    }

    /// Applies a scalar function through `V diag(f(λ)) V^{-1}`.
    pub fn apply<F>(&self, f: F) -> Result<CMatrix>
    where
        F: Fn(Complex64) -> Result<Complex64>,
    {
        if !self.is_diagonalizable() {
            return numeric("eigenvector matrix is singular");
        }
        let n = self.eigenvalues.len();
        let mut scaled = self.vectors.clone();
        for (j, &l) in self.eigenvalues.iter().enumerate() {
            let fl = f(l)?;
            for i in 0..n {
                scaled[(i, j)] *= fl;
            }
        }
        // X = scaled V^{-1}, i.e. V^T X^T = scaled^T
        let vt = self.vectors.transpose();
        let lu = vt.lu();
        let xt = lu
            .solve(&scaled.transpose())
            .ok_or_else(|| crate::Error::Numeric("eigenvector matrix is singular".into()))?;
        Ok(xt.transpose())
    }
}

pub fn check_square(a: &SquareMatrix) -> Result<()> {
    if a.nrows() == 0 || a.nrows() != a.ncols() {
        return domain(format!("expected a nonempty square matrix, got {}x{}", a.nrows(), a.ncols()));
    }
    if a.iter().any(|x| !x.is_finite()) {
        return domain("matrix has non-finite entries");
    }
    Ok(())
}

pub fn is_diagonal(a: &SquareMatrix) -> bool {
    let n = a.nrows();
    (0..n).all(|i| (0..n).all(|j| i == j || a[(i, j)] == 0.0))
}

pub fn to_complex(a: &SquareMatrix) -> CMatrix {
    a.map(|x| Complex64::new(x, 0.0))
}

/// Real part, failing if the imaginary part is not negligible.
pub fn real_part(a: &CMatrix, tol: f64) -> Result<SquareMatrix> {
    let scale = a.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let worst = a.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    if worst > tol * scale {
        return numeric(format!("imaginary residue {worst:e} in a real matrix function"));
    }
    Ok(a.map(|z| z.re))
}

/// Infinity norm (max row sum).
pub fn norm_inf(a: &SquareMatrix) -> f64 {
    (0..a.nrows())
        .map(|i| a.row(i).iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn max_abs_diff(a: &SquareMatrix, b: &SquareMatrix) -> f64 {
    (a - b).amax()
}

/// Solves `A X = B`, erroring on singular `A`.
pub fn solve(a: &SquareMatrix, b: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    a.clone()
        .lu()
        .solve(b)
        .ok_or_else(|| crate::Error::Numeric("singular linear system".into()))
}

pub fn solve_vec(a: &SquareMatrix, b: &DVector<f64>) -> Result<DVector<f64>> {
    a.clone()
        .lu()
        .solve(b)
        .ok_or_else(|| crate::Error::Numeric("singular linear system".into()))
}

/// Solves `x A = b` for a row vector `x`.
pub fn solve_left(a: &SquareMatrix, b: &DVector<f64>) -> Result<DVector<f64>> {
    solve_vec(&a.transpose(), b)
}

pub fn inverse(a: &SquareMatrix) -> Result<SquareMatrix> {
    a.clone()
        .try_inverse()
        .ok_or_else(|| crate::Error::Numeric("singular matrix".into()))
}

pub fn csolve(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    a.clone()
        .lu()
        .solve(b)
        .ok_or_else(|| crate::Error::Numeric("singular complex linear system".into()))
}

/// Eigenvalues from the real Schur form (Hessenberg reduction followed by
/// shifted QR), sorted by real then imaginary part.
pub fn eigenvalues(a: &SquareMatrix) -> Result<Vec<Complex64>> {
    check_square(a)?;
    let n = a.nrows();
    let scale = a.amax().max(f64::MIN_POSITIVE);
    let schur = Schur::try_new(a.clone(), f64::EPSILON, 100 * n.max(10))
        .ok_or_else(|| crate::Error::Numeric("eigenvalue iteration did not converge".into()))?;
    let mut eig: Vec<Complex64> = schur.complex_eigenvalues().iter().copied().collect();
    for l in eig.iter_mut() {
        if l.im.abs() <= 1e-14 * scale {
            l.im = 0.0;
        }
    }
    eig.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
    Ok(eig)
}

/// Eigen-decomposition of a real square matrix.
///
/// Each eigenvector is the right singular vector of `A - λI` for the smallest
/// singular value; repeated eigenvalues take as many vectors as their
/// multiplicity, and if the null space is too small the matrix is declared
/// defective (condition = ∞).
pub fn spectral(a: &SquareMatrix) -> Result<SpectralInfo> {
    let mut eig = eigenvalues(a)?;
    let n = a.nrows();
    let scale = a.amax().max(f64::MIN_POSITIVE);

    let ac = to_complex(a);
    let mut vectors = CMatrix::zeros(n, n);
    let mut defective = false;
    let cluster_tol = 1e-8 * scale;
    let residual_tol = 1e-9 * scale;
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        while j < n && (eig[j] - eig[i]).norm() <= cluster_tol {
            j += 1;
        }
        let mult = j - i;
        let lambda = eig[i..j].iter().sum::<Complex64>() / mult as f64;
        let mut shifted = ac.clone();
        for k in 0..n {
            shifted[(k, k)] -= lambda;
        }
        let svd = nalgebra::SVD::try_new(shifted, false, true, f64::EPSILON, 0)
            .ok_or_else(|| crate::Error::Numeric("singular value iteration did not converge".into()))?;
        let vt = svd.v_t.as_ref().expect("requested right vectors");
        for m in 0..mult {
            let row = n - 1 - m;
            if svd.singular_values[row] > residual_tol {
                defective = true;
            }
            for k in 0..n {
                vectors[(k, i + m)] = vt[(row, k)].conj();
            }
            if mult > 1 {
                eig[i + m] = lambda;
            }
        }
        i = j;
    }
    let condition = if defective {
        f64::INFINITY
    } else {
        let sv = vectors.clone().singular_values();
        let smax = sv.iter().copied().fold(0.0, f64::max);
        let smin = sv.iter().copied().fold(f64::INFINITY, f64::min);
        if smin <= f64::EPSILON * smax * n as f64 {
            f64::INFINITY
        } else {
            smax / smin
        }
    };
    Ok(SpectralInfo {
        eigenvalues: eig,
        vectors,
        condition,
    })
}
