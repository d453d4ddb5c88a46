//! Numerical quadrature: globally adaptive Gauss-Kronrod (7/15 points) over
//! finite and semi-infinite intervals, plus Gauss-Laguerre rules.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

/// Values that can be integrated: scalars, complex numbers and matrices.
pub trait QuadValue: Clone {
    fn zero_like(&self) -> Self;
    fn add_scaled(&mut self, w: f64, x: &Self);
    fn norm(&self) -> f64;
}

impl QuadValue for f64 {
    fn zero_like(&self) -> Self {
        0.0
    }
    fn add_scaled(&mut self, w: f64, x: &Self) {
        *self += w * x;
    }
    fn norm(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero_like(&self) -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn add_scaled(&mut self, w: f64, x: &Self) {
        *self += x * w;
    }
    fn norm(&self) -> f64 {
        Complex64::norm(*self)
    }
}

impl QuadValue for DMatrix<f64> {
    fn zero_like(&self) -> Self {
        DMatrix::zeros(self.nrows(), self.ncols())
    }
    fn add_scaled(&mut self, w: f64, x: &Self) {
        *self += x * w;
    }
    fn norm(&self) -> f64 {
        self.amax()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-14,
            rel_tol: 1e-12,
            max_intervals: 2000,
        }
    }
}

impl QuadOptions {
    pub fn tol(abs_tol: f64, rel_tol: f64) -> Self {
        Self {
            abs_tol,
            rel_tol,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone)]
pub struct QuadResult<T> {
    pub value: T,
    pub error: f64,
    pub intervals: usize,
    pub converged: bool,
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<T: QuadValue, F: Fn(f64) -> T>(f: &F, a: f64, b: f64) -> (T, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc.zero_like();
    let mut gauss = fc.zero_like();
    kron.add_scaled(WGK[7], &fc);
    gauss.add_scaled(WG[3], &fc);
    for j in 0..7 {
        let dx = h * XGK[j];
        let f1 = f(c - dx);
        let f2 = f(c + dx);
        kron.add_scaled(WGK[j], &f1);
        kron.add_scaled(WGK[j], &f2);
        if j % 2 == 1 {
            gauss.add_scaled(WG[j / 2], &f1);
            gauss.add_scaled(WG[j / 2], &f2);
        }
    }
    let mut diff = kron.clone();
    diff.add_scaled(-1.0, &gauss);
    let err = (diff.norm() * h.abs()).max(f64::MIN_POSITIVE);
    let mut value = kron.zero_like();
    value.add_scaled(h, &kron);
    (value, err)
}

struct Segment<T> {
    a: f64,
    b: f64,
    value: T,
    error: f64,
}

impl<T> PartialEq for Segment<T> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<T> Eq for Segment<T> {}
impl<T> PartialOrd for Segment<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T> Ord for Segment<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Integrates `f` over `[a, b]` splitting first at the given interior break points.
pub fn integrate_with_breaks<T, F>(f: F, a: f64, b: f64, breaks: &[f64], opts: QuadOptions) -> QuadResult<T>
where
    T: QuadValue,
    F: Fn(f64) -> T,
{
    let mut points = vec![a];
    let mut interior: Vec<f64> = breaks.iter().copied().filter(|&p| p > a && p < b).collect();
    interior.sort_by(f64::total_cmp);
    interior.dedup();
    points.extend(interior);
    points.push(b);

    let mut heap = BinaryHeap::new();
    for w in points.windows(2) {
        let (value, error) = gk15(&f, w[0], w[1]);
        heap.push(Segment {
            a: w[0],
            b: w[1],
            value,
            error,
        });
    }

    let total = |heap: &BinaryHeap<Segment<T>>| -> (T, f64) {
        let mut it = heap.iter();
        let first = it.next().expect("at least one segment");
        let mut v = first.value.clone();
        let mut e = first.error;
        for s in it {
            v.add_scaled(1.0, &s.value);
            e += s.error;
        }
        (v, e)
    };

    loop {
        let (value, error) = total(&heap);
        let tol = opts.abs_tol.max(opts.rel_tol * value.norm());
        if error <= tol {
            return QuadResult {
                value,
                error,
                intervals: heap.len(),
                converged: true,
            };
        }
        if heap.len() >= opts.max_intervals {
            return QuadResult {
                value,
                error,
                intervals: heap.len(),
                converged: false,
            };
        }
        let worst = heap.pop().expect("nonempty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval cannot be split further in floating point
            heap.push(worst);
            let (value, error) = total(&heap);
            return QuadResult {
                value,
                error,
                intervals: heap.len(),
                converged: false,
            };
        }
        let (v1, e1) = gk15(&f, worst.a, mid);
        let (v2, e2) = gk15(&f, mid, worst.b);
        heap.push(Segment {
            a: worst.a,
            b: mid,
            value: v1,
            error: e1,
        });
        heap.push(Segment {
            a: mid,
            b: worst.b,
            value: v2,
            error: e2,
        });
    }
}

/// Integrates `f` over `[a, b]`.
pub fn integrate<T, F>(f: F, a: f64, b: f64, opts: QuadOptions) -> QuadResult<T>
where
    T: QuadValue,
    F: Fn(f64) -> T,
{
    integrate_with_breaks(f, a, b, &[], opts)
}

/// Integrates `f` over `[a, ∞)` through the map `x = a + t / (1 - t)`.
pub fn integrate_to_infinity<T, F>(f: F, a: f64, opts: QuadOptions) -> QuadResult<T>
where
    T: QuadValue,
    F: Fn(f64) -> T,
{
    let g = |t: f64| {
        let s = 1.0 - t;
        let x = a + t / s;
        let y = f(x);
        let mut out = y.zero_like();
        out.add_scaled(1.0 / (s * s), &y);
        out
    };
    integrate(g, 0.0, 1.0, opts)
}

/// Gauss-Laguerre nodes and weights for `∫_0^∞ e^{-x} f(x) dx`, by Golub-Welsch.
pub fn gauss_laguerre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "need at least one node");
    let mut jacobi = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        jacobi[(i, i)] = 2.0 * i as f64 + 1.0;
        if i + 1 < n {
            let b = (i + 1) as f64;
            jacobi[(i, i + 1)] = b;
            jacobi[(i + 1, i)] = b;
        }
    }
    let eig = SymmetricEigen::new(jacobi);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|k| (eig.eigenvalues[k], eig.eigenvectors[(0, k)].powi(2)))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.into_iter().unzip()
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`, by Golub-Welsch.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "need at least one node");
    let mut jacobi = DMatrix::<f64>::zeros(n, n);
    for i in 1..n {
        let k = i as f64;
        let b = k / (4.0 * k * k - 1.0).sqrt();
        jacobi[(i - 1, i)] = b;
        jacobi[(i, i - 1)] = b;
    }
    let eig = SymmetricEigen::new(jacobi);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|k| (eig.eigenvalues[k], 2.0 * eig.eigenvectors[(0, k)].powi(2)))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.into_iter().unzip()
}
