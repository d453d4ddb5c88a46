use crate::error::{Error, Result};
use crate::linalg::{eigenvalues, inverse, SquareMatrix};
use crate::mlfun::matrix_neg_fractional_power;
use nalgebra::{DMatrix, DVector};
use std::fmt;

/// Relative tolerance for sign and balance checks.
pub(crate) const STRUCT_TOL: f64 = 1e-12;

/// One violated invariant, with the offending indices when there are any.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    Empty,
    NotSquare { rows: usize, cols: usize },
    NonFinite,
    DimensionMismatch { what: &'static str, expected: usize, found: usize },
    NegativeOffDiagonal { row: usize, col: usize },
    NonNegativeDiagonal { row: usize },
    PositiveRowSum { row: usize },
    NoExit,
    UnstableSpectrum,
    NegativeInitial { index: usize },
    InitialAboveOne { index: usize },
    InitialMassAboveOne { mass: f64 },
    NegativeReward { row: usize, col: usize },
    DegenerateCoordinate { col: usize },
    NegativeCoupling { block: usize, row: usize, col: usize },
    UnbalancedBlock { block: usize, row: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Violation::*;
        match self {
            Empty => write!(f, "empty representation"),
            NotSquare { rows, cols } => write!(f, "matrix is {rows}x{cols}, not square"),
            NonFinite => write!(f, "non-finite entries"),
            DimensionMismatch { what, expected, found } => {
                write!(f, "dimension mismatch in {what}: expected {expected}, found {found}")
            }
            NegativeOffDiagonal { row, col } => write!(f, "off-diagonal entries >= 0 violated at ({row}, {col})"),
            NonNegativeDiagonal { row } => write!(f, "diagonal entries < 0 violated at row {row}"),
            PositiveRowSum { row } => write!(f, "row sums <= 0 violated at row {row}"),
            NoExit => write!(f, "exit vector has no positive entry"),
            UnstableSpectrum => write!(f, "spectrum not strictly in the left half-plane"),
            NegativeInitial { index } => write!(f, "initial probability negative at {index}"),
            InitialAboveOne { index } => write!(f, "initial probability above one at {index}"),
            InitialMassAboveOne { mass } => write!(f, "initial mass {mass} exceeds one"),
            NegativeReward { row, col } => write!(f, "negative reward at ({row}, {col})"),
            DegenerateCoordinate { col } => write!(f, "degenerate coordinate: reward column {col} is zero"),
            NegativeCoupling { block, row, col } => {
                write!(f, "negative coupling entry in block {block} at ({row}, {col})")
            }
            UnbalancedBlock { block, row } => write!(f, "block {block} row {row}: -C e differs from D e"),
        }
    }
}

/// Result of a structural check.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Diagnostics {
    pub violations: Vec<Violation>,
}

impl Diagnostics {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub(crate) fn into_result(self) -> Result<()> {
        if self.passed() {
            Ok(())
        } else {
            let msg: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
            Err(Error::Model(msg.join("; ")))
        }
    }
}

fn check_subintensity(t: &SquareMatrix, out: &mut Vec<Violation>) {
    if t.nrows() == 0 {
        out.push(Violation::Empty);
        return;
    }
    if t.nrows() != t.ncols() {
        out.push(Violation::NotSquare {
            rows: t.nrows(),
            cols: t.ncols(),
        });
        return;
    }
    if t.iter().any(|x| !x.is_finite()) {
        out.push(Violation::NonFinite);
        return;
    }
    let n = t.nrows();
    let scale = t.amax();
    let tol = STRUCT_TOL * scale;
    let mut exit_positive = false;
    for i in 0..n {
        let mut row = 0.0;
        for j in 0..n {
            let v = t[(i, j)];
            row += v;
            if i != j && v < 0.0 {
                out.push(Violation::NegativeOffDiagonal { row: i, col: j });
            }
        }
        if !(t[(i, i)] < 0.0) {
            out.push(Violation::NonNegativeDiagonal { row: i });
        }
        if row > tol {
            out.push(Violation::PositiveRowSum { row: i });
        }
        if -row > tol {
            exit_positive = true;
        }
    }
    if !exit_positive {
        out.push(Violation::NoExit);
    }
    if out.is_empty() {
        match eigenvalues(t) {
            Ok(eig) if eig.iter().all(|l| l.re < 0.0) => {}
            _ => out.push(Violation::UnstableSpectrum),
        }
    }
}

fn check_initial(pi: &DVector<f64>, dim: usize, out: &mut Vec<Violation>) {
    if pi.len() != dim {
        out.push(Violation::DimensionMismatch {
            what: "initial vector",
            expected: dim,
            found: pi.len(),
        });
        return;
    }
    if pi.iter().any(|x| !x.is_finite()) {
        out.push(Violation::NonFinite);
        return;
    }
    for (i, &p) in pi.iter().enumerate() {
        if p < 0.0 {
            out.push(Violation::NegativeInitial { index: i });
        }
        if p > 1.0 + STRUCT_TOL {
            out.push(Violation::InitialAboveOne { index: i });
        }
    }
    let mass = pi.sum();
    if mass > 1.0 + STRUCT_TOL {
        out.push(Violation::InitialMassAboveOne { mass });
    }
}

fn check_rewards(r: &DMatrix<f64>, rows: usize, out: &mut Vec<Violation>) {
    if r.nrows() != rows {
        out.push(Violation::DimensionMismatch {
            what: "reward rows",
            expected: rows,
            found: r.nrows(),
        });
        return;
    }
    if r.ncols() == 0 {
        out.push(Violation::Empty);
        return;
    }
    if r.iter().any(|x| !x.is_finite()) {
        out.push(Violation::NonFinite);
        return;
    }
    for i in 0..r.nrows() {
        for j in 0..r.ncols() {
            if r[(i, j)] < 0.0 {
                out.push(Violation::NegativeReward { row: i, col: j });
            }
        }
    }
    for j in 0..r.ncols() {
        if r.column(j).iter().all(|&x| x == 0.0) {
            out.push(Violation::DegenerateCoordinate { col: j });
        }
    }
}

/// Checks an `(π, T, R)` triple without constructing it.
pub fn validate(pi: &DVector<f64>, t: &SquareMatrix, r: &DMatrix<f64>) -> Diagnostics {
    let mut v = vec![];
    check_subintensity(t, &mut v);
    if t.nrows() == t.ncols() {
        check_initial(pi, t.nrows(), &mut v);
        check_rewards(r, t.nrows(), &mut v);
    }
    Diagnostics { violations: v }
}

/// Checks a `(π, T)` pair without constructing it.
pub fn validate_ph(pi: &DVector<f64>, t: &SquareMatrix) -> Diagnostics {
    let mut v = vec![];
    check_subintensity(t, &mut v);
    if t.nrows() == t.ncols() {
        check_initial(pi, t.nrows(), &mut v);
    }
    Diagnostics { violations: v }
}

/// Transient generator `T` of a phase-type law, validated at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct SubIntensityMatrix {
    t: SquareMatrix,
    exit: DVector<f64>,
}

impl SubIntensityMatrix {
    pub fn new(t: SquareMatrix) -> Result<Self> {
        let mut v = vec![];
        check_subintensity(&t, &mut v);
        Diagnostics { violations: v }.into_result()?;
        let n = t.nrows();
        let exit = DVector::from_iterator(n, (0..n).map(|i| (-t.row(i).sum()).max(0.0)));
        Ok(Self { t, exit })
    }

    pub fn from_row_slice(dim: usize, entries: &[f64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::Domain(format!("expected {} entries, got {}", dim * dim, entries.len())));
        }
        Self::new(SquareMatrix::from_row_slice(dim, dim, entries))
    }

    pub fn dim(&self) -> usize {
        self.t.nrows()
    }

    pub fn matrix(&self) -> &SquareMatrix {
        &self.t
    }

    /// Exit vector `t = -T e`.
    pub fn exit(&self) -> &DVector<f64> {
        &self.exit
    }

    /// `exp(T x)`.
    pub fn exp(&self, x: f64) -> SquareMatrix {
        (&self.t * x).exp()
    }

    /// Green matrix `(-T)^{-1}`.
    pub fn green(&self) -> Result<SquareMatrix> {
        inverse(&(-&self.t))
    }

    /// `(-T)^{-s}`.
    pub fn neg_power(&self, s: f64) -> Result<SquareMatrix> {
        matrix_neg_fractional_power(&self.t, s)
    }

    /// `c T` for `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::Domain(format!("scale must be positive, got {c}")));
        }
        Ok(Self {
            t: &self.t * c,
            exit: &self.exit * c,
        })
    }
}

/// A possibly defective phase-type representation `(π, T)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseTypeRep {
    pub pi: DVector<f64>,
    pub t: SubIntensityMatrix,
}

impl PhaseTypeRep {
    pub fn new(pi: DVector<f64>, t: SubIntensityMatrix) -> Result<Self> {
        let mut v = vec![];
        check_initial(&pi, t.dim(), &mut v);
        Diagnostics { violations: v }.into_result()?;
        Ok(Self { pi, t })
    }

    pub fn from_parts(pi: &[f64], t: SquareMatrix) -> Result<Self> {
        Self::new(DVector::from_row_slice(pi), SubIntensityMatrix::new(t)?)
    }

    /// Exponential law with rate `lambda`.
    pub fn exponential(lambda: f64) -> Result<Self> {
        Self::from_parts(&[1.0], SquareMatrix::from_element(1, 1, -lambda))
    }

    pub fn dim(&self) -> usize {
        self.t.dim()
    }

    /// Total mass `sum(π)`; below one for defective representations.
    pub fn mass(&self) -> f64 {
        self.pi.sum()
    }
}

/// Nonnegative `p × n` reward matrix with no zero column.
#[derive(Debug, Clone, PartialEq)]
pub struct RewardMatrix(DMatrix<f64>);

impl RewardMatrix {
    pub fn new(r: DMatrix<f64>) -> Result<Self> {
        let mut v = vec![];
        check_rewards(&r, r.nrows(), &mut v);
        Diagnostics { violations: v }.into_result()?;
        Ok(Self(r))
    }

    /// The `p × 1` all-ones reward.
    pub fn ones(p: usize) -> Self {
        Self(DMatrix::from_element(p, 1, 1.0))
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn states(&self) -> usize {
        self.0.nrows()
    }

    pub fn coordinates(&self) -> usize {
        self.0.ncols()
    }
}

/// Multivariate phase-type representation `(π, T, R)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MPHStarRep {
    pub pi: DVector<f64>,
    pub t: SubIntensityMatrix,
    pub r: RewardMatrix,
}

impl MPHStarRep {
    pub fn new(pi: DVector<f64>, t: SubIntensityMatrix, r: RewardMatrix) -> Result<Self> {
        let d = validate(&pi, t.matrix(), r.matrix());
        d.into_result()?;
        Ok(Self { pi, t, r })
    }

    pub fn dim(&self) -> usize {
        self.t.dim()
    }

    pub fn coordinates(&self) -> usize {
        self.r.coordinates()
    }

    pub fn ph(&self) -> PhaseTypeRep {
        PhaseTypeRep {
            pi: self.pi.clone(),
            t: self.t.clone(),
        }
    }
}

/// Feed-forward block chain `(C_i, D_i)` with initial vector on the first block.
#[derive(Debug, Clone, PartialEq)]
pub struct FeedForwardRep {
    pub pi: DVector<f64>,
    pub blocks: Vec<(SubIntensityMatrix, DMatrix<f64>)>,
}

impl FeedForwardRep {
    pub fn new(pi: DVector<f64>, blocks: Vec<(SubIntensityMatrix, DMatrix<f64>)>) -> Result<Self> {
        let d = validate_feed_forward(&pi, &blocks);
        d.into_result()?;
        Ok(Self { pi, blocks })
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.blocks.iter().map(|(c, _)| c.dim()).collect()
    }

    /// Offsets of each block inside the assembled state space.
    pub fn offsets(&self) -> Vec<usize> {
        let mut o = Vec::with_capacity(self.blocks.len());
        let mut acc = 0;
        for (c, _) in &self.blocks {
            o.push(acc);
            acc += c.dim();
        }
        o
    }

    /// Total number of states.
    pub fn dim(&self) -> usize {
        self.dims().iter().sum()
    }
}

fn validate_feed_forward(pi: &DVector<f64>, blocks: &[(SubIntensityMatrix, DMatrix<f64>)]) -> Diagnostics {
    let mut v = vec![];
    if blocks.is_empty() {
        v.push(Violation::Empty);
        return Diagnostics { violations: v };
    }
    check_initial(pi, blocks[0].0.dim(), &mut v);
    for (b, (c, d)) in blocks.iter().enumerate() {
        let next = blocks.get(b + 1).map(|(c2, _)| c2.dim()).unwrap_or(c.dim());
        if d.nrows() != c.dim() || d.ncols() != next {
            v.push(Violation::DimensionMismatch {
                what: "coupling block",
                expected: c.dim() * next,
                found: d.nrows() * d.ncols(),
            });
            continue;
        }
        if d.iter().any(|x| !x.is_finite()) {
            v.push(Violation::NonFinite);
            continue;
        }
        for i in 0..d.nrows() {
            for j in 0..d.ncols() {
                if d[(i, j)] < 0.0 {
                    v.push(Violation::NegativeCoupling { block: b, row: i, col: j });
                }
            }
        }
        let scale = c.matrix().amax().max(1.0);
        for i in 0..c.dim() {
            if (c.exit()[i] - d.row(i).sum()).abs() > STRUCT_TOL * scale {
                v.push(Violation::UnbalancedBlock { block: b, row: i });
            }
        }
    }
    Diagnostics { violations: v }
}

/// Checks a feed-forward chain without constructing it.
pub fn validate_ff(pi: &DVector<f64>, blocks: &[(SquareMatrix, DMatrix<f64>)]) -> Diagnostics {
    let mut v = vec![];
    let mut built = vec![];
    for (c, d) in blocks {
        let mut local = vec![];
        check_subintensity(c, &mut local);
        if local.is_empty() {
            let n = c.nrows();
            let exit = DVector::from_iterator(n, (0..n).map(|i| (-c.row(i).sum()).max(0.0)));
            built.push((SubIntensityMatrix { t: c.clone(), exit }, d.clone()));
        }
        v.extend(local);
    }
    if v.is_empty() {
        v = validate_feed_forward(pi, &built).violations;
    }
    Diagnostics { violations: v }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_exponential_passes() {
        let d = validate(
            &DVector::from_vec(vec![1.0]),
            &SquareMatrix::from_element(1, 1, -1.0),
            &DMatrix::from_element(1, 1, 1.0),
        );
        assert!(d.passed());
    }

    #[test]
    fn positive_row_sum_is_reported_with_row() {
        let t = SquareMatrix::from_row_slice(2, 2, &[-1.0, 0.5, 2.0, -1.0]);
        let d = validate(&DVector::from_vec(vec![1.0, 0.0]), &t, &DMatrix::from_element(2, 1, 1.0));
        assert!(d.violations.contains(&Violation::PositiveRowSum { row: 1 }));
        assert!(d.violations[0].to_string().contains("row sums <= 0"));
    }

    #[test]
    fn zero_reward_column_is_degenerate() {
        let r = DMatrix::from_row_slice(1, 2, &[1.0, 0.0]);
        let d = validate(&DVector::from_vec(vec![1.0]), &SquareMatrix::from_element(1, 1, -1.0), &r);
        assert_eq!(d.violations, vec![Violation::DegenerateCoordinate { col: 1 }]);
        assert!(d.violations[0].to_string().contains("degenerate coordinate"));
    }

    #[test]
    fn closed_chain_is_rejected() {
        // no exit: absorbing state unreachable
        assert!(SubIntensityMatrix::from_row_slice(2, &[-1.0, 1.0, 1.0, -1.0]).is_err());
    }

    #[test]
    fn unbalanced_coupling_is_rejected() {
        let c = SubIntensityMatrix::from_row_slice(1, &[-1.0]).unwrap();
        let r = FeedForwardRep::new(
            DVector::from_vec(vec![1.0]),
            vec![(c.clone(), DMatrix::from_element(1, 1, 0.5)), (c, DMatrix::from_element(1, 1, 1.0))],
        );
        assert!(r.is_err());
    }
}
