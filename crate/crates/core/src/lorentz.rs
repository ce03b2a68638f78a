//! Lorentzian linear algebra on ℝ^{n,1}.
//!
//! The inner product is `x₁y₁ + … + xₙyₙ − x_{n+1}y_{n+1}`: the last
//! coordinate is the timelike one. Degeneracy of Gram-type matrices is
//! decided from singular values rather than determinants so that verdicts
//! do not depend on the overall scale of the input.

use crate::error::{GeomError, Result};
use nalgebra::{DMatrix, DVector, SymmetricEigen, SVD};
use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Neg, Sub};
use twofloat::TwoFloat;

/// Default relative tolerance used throughout the crate.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Relative asymmetry accepted by [`degeneracy`].
const SYMMETRY_TOL: f64 = 1e-12;

/// A coordinate vector in ℝ^{n,1}; the last coordinate is timelike.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LorentzVector(Vec<f64>);

impl LorentzVector {
    /// Builds a vector, checking that it has at least three finite coordinates.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 3 {
            return Err(GeomError::InvalidObject(format!(
                "Lorentz vectors need at least 3 coordinates, got {}",
                coords.len()
            )));
        }
        if let Some(bad) = coords.iter().find(|c| !c.is_finite()) {
            return Err(GeomError::InvalidObject(format!("non-finite coordinate {bad}")));
        }
        Ok(Self(coords))
    }

    pub(crate) fn from_vec(coords: Vec<f64>) -> Self {
        debug_assert!(coords.len() >= 3);
        Self(coords)
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    /// Number of coordinates, `n + 1`.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The hyperbolic dimension `n` of the ambient ℝ^{n,1}.
    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    /// The timelike (last) coordinate.
    pub fn time(&self) -> f64 {
        self.0[self.0.len() - 1]
    }

    /// The spacelike coordinates `x₁ … xₙ`.
    pub fn spatial(&self) -> &[f64] {
        &self.0[..self.0.len() - 1]
    }

    /// Standard basis vector `e_k` of ℝ^{n,1} (0-based `k`).
    pub fn basis(n: usize, k: usize) -> Self {
        let mut v = vec![0.0; n + 1];
        v[k] = 1.0;
        Self(v)
    }

    pub fn inner(&self, other: &Self) -> Result<f64> {
        if self.len() != other.len() {
            return Err(GeomError::DimensionMismatch {
                expected: self.len(),
                got: other.len(),
            });
        }
        Ok(inner_slices(&self.0, &other.0))
    }

    /// `⟨x,y⟩` for vectors already known to have equal length.
    pub(crate) fn dot(&self, other: &Self) -> f64 {
        debug_assert_eq!(self.len(), other.len());
        inner_slices(&self.0, &other.0)
    }

    /// Squared Lorentzian norm `‖x‖² = ⟨x,x⟩`.
    pub fn norm_sq(&self) -> f64 {
        inner_slices(&self.0, &self.0)
    }

    /// Largest absolute coordinate.
    pub fn max_abs(&self) -> f64 {
        max_abs(&self.0)
    }

    pub fn scaled(&self, k: f64) -> Self {
        Self(self.0.iter().map(|x| x * k).collect())
    }

    /// Rescales so that the largest coordinate has magnitude one.
    pub fn normalized_max(&self) -> Self {
        let m = self.max_abs();
        if m == 0.0 {
            self.clone()
        } else {
            self.scaled(1.0 / m)
        }
    }

    /// Rescales a spacelike or timelike vector to `‖x‖² = ±1`.
    pub fn normalized_unit(&self) -> Option<Self> {
        let q = self.norm_sq();
        if q == 0.0 || !q.is_finite() {
            return None;
        }
        Some(self.scaled(1.0 / q.abs().sqrt()))
    }

    /// Flips the sign so that the first coordinate that is not negligible is positive.
    pub fn sign_normalized(&self) -> Self {
        let m = self.max_abs();
        match self.0.iter().find(|x| x.abs() > 1e-12 * m) {
            Some(&x) if x < 0.0 => -self.clone(),
            _ => self.clone(),
        }
    }

    /// Flips the sign so that the timelike coordinate is nonnegative.
    pub fn forward(&self) -> Self {
        if self.time() < 0.0 {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Euclidean (not Lorentzian) distance in the max norm.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl Add for &LorentzVector {
    type Output = LorentzVector;
    fn add(self, rhs: &LorentzVector) -> LorentzVector {
        debug_assert_eq!(self.len(), rhs.len());
        LorentzVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &LorentzVector {
    type Output = LorentzVector;
    fn sub(self, rhs: &LorentzVector) -> LorentzVector {
        debug_assert_eq!(self.len(), rhs.len());
        LorentzVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Add for LorentzVector {
    type Output = LorentzVector;
    fn add(self, rhs: LorentzVector) -> LorentzVector {
        &self + &rhs
    }
}

impl Sub for LorentzVector {
    type Output = LorentzVector;
    fn sub(self, rhs: LorentzVector) -> LorentzVector {
        &self - &rhs
    }
}

impl Mul<f64> for &LorentzVector {
    type Output = LorentzVector;
    fn mul(self, k: f64) -> LorentzVector {
        self.scaled(k)
    }
}

impl Mul<f64> for LorentzVector {
    type Output = LorentzVector;
    fn mul(self, k: f64) -> LorentzVector {
        self.scaled(k)
    }
}

impl Neg for LorentzVector {
    type Output = LorentzVector;
    fn neg(self) -> LorentzVector {
        LorentzVector(self.0.into_iter().map(|x| -x).collect())
    }
}

pub(crate) fn inner_slices(x: &[f64], y: &[f64]) -> f64 {
    let last = x.len() - 1;
    let space: f64 = x[..last].iter().zip(&y[..last]).map(|(a, b)| a * b).sum();
    space - x[last] * y[last]
}

pub(crate) fn max_abs(x: &[f64]) -> f64 {
    x.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Causal character of a vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SignClass {
    Spacelike,
    Timelike,
    Lightlike,
}

/// Classifies `x` as lightlike when `|⟨x,x⟩| ≤ tol·(1 + |x|∞²)`.
pub fn classify(x: &LorentzVector, tol: f64) -> SignClass {
    classify_slice(x.coords(), tol)
}

pub(crate) fn classify_slice(x: &[f64], tol: f64) -> SignClass {
    let q = inner_slices(x, x);
    let m = max_abs(x);
    if q.abs() <= tol * (1.0 + m * m) {
        SignClass::Lightlike
    } else if q > 0.0 {
        SignClass::Spacelike
    } else {
        SignClass::Timelike
    }
}

/// Scale-free variant used on kernel vectors of arbitrary magnitude.
pub(crate) fn classify_direction(x: &[f64], tol: f64) -> SignClass {
    let m = max_abs(x);
    if m == 0.0 {
        return SignClass::Lightlike;
    }
    let y: Vec<f64> = x.iter().map(|v| v / m).collect();
    classify_slice(&y, tol)
}

/// Matrix of pairwise inner products.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    pub entries: DMatrix<f64>,
    /// Hyperbolic dimension `n` of the ambient ℝ^{n,1}.
    pub n_ambient: usize,
}

impl GramMatrix {
    pub fn size(&self) -> usize {
        self.entries.nrows()
    }
}

/// Builds the Gram matrix `X_{ij} = ⟨v_i, v_j⟩`.
pub fn gram(vs: &[LorentzVector]) -> Result<GramMatrix> {
    let first = vs
        .first()
        .ok_or(GeomError::WrongCount { expected: 1, got: 0 })?;
    check_same_len(vs, first.len())?;
    let m = vs.len();
    let entries = DMatrix::from_fn(m, m, |i, j| vs[i].dot(&vs[j]));
    Ok(GramMatrix {
        entries,
        n_ambient: first.dim(),
    })
}

pub(crate) fn check_same_len(vs: &[LorentzVector], len: usize) -> Result<()> {
    match vs.iter().find(|v| v.len() != len) {
        Some(v) => Err(GeomError::DimensionMismatch {
            expected: len,
            got: v.len(),
        }),
        None => Ok(()),
    }
}

/// Scale-aware rank verdict for a symmetric matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegeneracyVerdict {
    pub is_degenerate: bool,
    /// Determinant of the matrix.
    pub det_value: f64,
    pub sigma_min: f64,
    pub sigma_max: f64,
    /// Unit singular vector for `sigma_min`, present when degenerate.
    pub kernel: Option<Vec<f64>>,
    /// Number of singular values below the threshold.
    pub nullity: usize,
}

impl DegeneracyVerdict {
    /// `sigma_min / max(sigma_max, 1)`, the quantity compared against the tolerance.
    pub fn ratio(&self) -> f64 {
        self.sigma_min / self.sigma_max.max(1.0)
    }
}

pub(crate) fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(GeomError::InvalidTolerance(tol))
    }
}

fn check_symmetric(m: &DMatrix<f64>) -> Result<()> {
    let scale = m.iter().fold(1.0_f64, |a, v| a.max(v.abs()));
    let mut worst = 0.0_f64;
    for i in 0..m.nrows() {
        for j in (i + 1)..m.ncols() {
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    if worst > SYMMETRY_TOL * scale {
        Err(GeomError::NotSymmetric { asymmetry: worst })
    } else {
        Ok(())
    }
}

/// Eigen-decomposition sorted by ascending `|λ|`.
struct SortedEigen {
    values: Vec<f64>,
    vectors: Vec<Vec<f64>>,
}

fn sorted_eigen(m: &DMatrix<f64>) -> SortedEigen {
    let eig = SymmetricEigen::new(m.clone());
    let mut idx: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    idx.sort_by(|&a, &b| {
        eig.eigenvalues[a]
            .abs()
            .total_cmp(&eig.eigenvalues[b].abs())
            .then(a.cmp(&b))
    });
    SortedEigen {
        values: idx.iter().map(|&i| eig.eigenvalues[i]).collect(),
        vectors: idx
            .iter()
            .map(|&i| eig.eigenvectors.column(i).iter().copied().collect())
            .collect(),
    }
}

/// Sign convention for kernel vectors: the largest-magnitude component
/// (lowest index on ties) is made positive.
pub(crate) fn orient_kernel(mut v: Vec<f64>) -> Vec<f64> {
    let m = max_abs(&v);
    if let Some(&pivot) = v.iter().find(|x| x.abs() >= m * (1.0 - 1e-12)) {
        if pivot < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
    v
}

/// Decides whether a symmetric matrix is singular: degenerate iff
/// `σ_min ≤ tol·max(σ_max, 1)`.
pub fn degeneracy(m: &DMatrix<f64>, tol: f64) -> Result<DegeneracyVerdict> {
    check_tol(tol)?;
    if m.nrows() != m.ncols() {
        return Err(GeomError::DimensionMismatch {
            expected: m.nrows(),
            got: m.ncols(),
        });
    }
    if m.nrows() == 0 {
        return Err(GeomError::WrongCount { expected: 1, got: 0 });
    }
    check_symmetric(m)?;
    let eig = sorted_eigen(m);
    let sigma_min = eig.values[0].abs();
    let sigma_max = eig.values[eig.values.len() - 1].abs();
    let threshold = tol * sigma_max.max(1.0);
    let is_degenerate = sigma_min <= threshold;
    let nullity = eig.values.iter().filter(|v| v.abs() <= threshold).count();
    Ok(DegeneracyVerdict {
        is_degenerate,
        det_value: eig.values.iter().product(),
        sigma_min,
        sigma_max,
        kernel: is_degenerate.then(|| orient_kernel(eig.vectors[0].clone())),
        nullity,
    })
}

/// Orthonormal basis of the numerical kernel of a symmetric matrix
/// (at least one vector, ordered by ascending `|λ|`).
pub fn null_space_sym(m: &DMatrix<f64>, tol: f64) -> Result<Vec<Vec<f64>>> {
    check_tol(tol)?;
    check_symmetric(m)?;
    let eig = sorted_eigen(m);
    let sigma_max = eig.values[eig.values.len() - 1].abs();
    let threshold = tol * sigma_max.max(1.0);
    let k = eig
        .values
        .iter()
        .filter(|v| v.abs() <= threshold)
        .count()
        .max(1);
    Ok(eig.vectors.into_iter().take(k).map(orient_kernel).collect())
}

/// Euclidean right null space of a row matrix, returned as an orthonormal
/// basis ordered by ascending singular value. At least `min_dim` vectors are
/// returned even if their singular values exceed the threshold.
pub(crate) fn right_null_space(
    rows: &[Vec<f64>],
    ncols: usize,
    tol: f64,
    min_dim: usize,
) -> Vec<Vec<f64>> {
    let nrows = rows.len().max(ncols);
    let mat = DMatrix::from_fn(nrows, ncols, |i, j| rows.get(i).map_or(0.0, |r| r[j]));
    let svd = SVD::new(mat, false, true);
    let v_t = svd.v_t.expect("v_t requested");
    let mut idx: Vec<usize> = (0..svd.singular_values.len()).collect();
    idx.sort_by(|&a, &b| {
        svd.singular_values[a]
            .total_cmp(&svd.singular_values[b])
            .then(a.cmp(&b))
    });
    let sigma_max = svd.singular_values.iter().fold(0.0_f64, |a, &b| a.max(b));
    let threshold = tol * sigma_max.max(1.0);
    let below = idx
        .iter()
        .filter(|&&i| svd.singular_values[i] <= threshold)
        .count();
    idx.iter()
        .take(below.max(min_dim).min(ncols))
        .map(|&i| v_t.row(i).iter().copied().collect())
        .collect()
}

/// Basis of the Lorentz-orthogonal complement `{x : ⟨v_i, x⟩ = 0 ∀i}`.
///
/// Row `i` of the system is `D·v_i` with `D = diag(1,…,1,−1)`, so the
/// Euclidean kernel of that system is exactly the Lorentzian complement.
pub(crate) fn lorentz_complement(vs: &[Vec<f64>], tol: f64, min_dim: usize) -> Vec<Vec<f64>> {
    let len = vs[0].len();
    let rows: Vec<Vec<f64>> = vs
        .iter()
        .map(|v| {
            let mut r = v.clone();
            r[len - 1] = -r[len - 1];
            r
        })
        .collect();
    right_null_space(&rows, len, tol, min_dim)
}

/// Looks for a spacelike vector in the span of `basis`: the eigenvector of the
/// restricted Lorentz Gram matrix with the largest eigenvalue. Returns it
/// normalized to `‖w‖² = 1` if that eigenvalue exceeds `tol`.
pub(crate) fn spacelike_in_span(basis: &[Vec<f64>], tol: f64) -> Option<Vec<f64>> {
    if basis.is_empty() {
        return None;
    }
    let k = basis.len();
    let g = DMatrix::from_fn(k, k, |i, j| inner_slices(&basis[i], &basis[j]));
    let eig = SymmetricEigen::new(g);
    let (best, &mu) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1).then(b.0.cmp(&a.0)))?;
    if mu <= tol {
        return None;
    }
    let c = eig.eigenvectors.column(best);
    let len = basis[0].len();
    let mut w = vec![0.0; len];
    for (ck, b) in c.iter().zip(basis) {
        for (wi, bi) in w.iter_mut().zip(b) {
            *wi += ck * bi;
        }
    }
    let q = inner_slices(&w, &w);
    (q > 0.0).then(|| w.iter().map(|x| x / q.sqrt()).collect())
}

/// Result of the codimension-one test on `n+1` vectors of ℝ^{n,1}.
#[derive(Debug, Clone, PartialEq)]
pub struct Codim1Report {
    pub verdict: DegeneracyVerdict,
    /// A nonzero `w` with `⟨v_i, w⟩ ≈ 0` for all `i`, scaled to `|w|∞ = 1`.
    pub normal: Option<LorentzVector>,
    /// Determinant of the coordinate matrix whose rows are the `v_i`.
    pub det_coords: f64,
    /// `|det X + (det Y)²|` relative to `max(|det X|, (det Y)², 1e-300)`.
    pub lemma_gap: f64,
}

/// Tests whether `n+1` vectors lie in a codimension-one subspace, via the
/// Gram matrix, and extracts a Lorentz normal when they do.
pub fn codim1_test(vs: &[LorentzVector], tol: f64) -> Result<Codim1Report> {
    let first = vs
        .first()
        .ok_or(GeomError::WrongCount { expected: 1, got: 0 })?;
    let len = first.len();
    check_same_len(vs, len)?;
    if vs.len() != len {
        return Err(GeomError::WrongCount {
            expected: len,
            got: vs.len(),
        });
    }
    let x = gram(vs)?;
    let verdict = degeneracy(&x.entries, tol)?;
    let y = DMatrix::from_fn(len, len, |i, j| vs[i].coords()[j]);
    let det_coords = y.determinant();
    let mut verdict = verdict;
    verdict.det_value = gram_det_extended(vs);
    let det_x = verdict.det_value;
    let lemma_gap =
        (det_x + det_coords * det_coords).abs() / det_x.abs().max(det_coords * det_coords).max(1e-300);
    let normal = verdict.is_degenerate.then(|| {
        let rows: Vec<Vec<f64>> = vs.iter().map(|v| v.coords().to_vec()).collect();
        let w = lorentz_complement(&rows, tol, 1).swap_remove(0);
        LorentzVector::from_vec(w).normalized_max().sign_normalized()
    });
    Ok(Codim1Report {
        verdict,
        normal,
        det_coords,
        lemma_gap,
    })
}

/// Determinant of the Gram matrix in double-double arithmetic.
///
/// The Gram matrix squares the conditioning of the coordinates, so an f64
/// elimination loses about twice as many digits as `det Y` does. Entries
/// are formed from exact products and eliminated with partial pivoting.
fn gram_det_extended(vs: &[LorentzVector]) -> f64 {
    let m = vs.len();
    let last = vs[0].len() - 1;
    let mut a: Vec<Vec<TwoFloat>> = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let (x, y) = (vs[i].coords(), vs[j].coords());
                    let mut acc = TwoFloat::from(0.0);
                    for k in 0..=last {
                        let p = TwoFloat::new_mul(x[k], y[k]);
                        acc = if k == last { acc - p } else { acc + p };
                    }
                    acc
                })
                .collect()
        })
        .collect();
    let mut det = TwoFloat::from(1.0);
    for c in 0..m {
        let pivot = (c..m)
            .max_by(|&p, &q| a[p][c].abs().partial_cmp(&a[q][c].abs()).unwrap())
            .unwrap();
        if a[pivot][c] == TwoFloat::from(0.0) {
            return 0.0;
        }
        if pivot != c {
            a.swap(pivot, c);
            det = -det;
        }
        det *= a[c][c];
        for r in (c + 1)..m {
            let f = a[r][c] / a[c][c];
            for k in c..m {
                let t = a[c][k];
                a[r][k] -= f * t;
            }
        }
    }
    det.hi()
}

/// `M·λ` for a dense matrix and a coefficient vector.
pub(crate) fn mat_vec(m: &DMatrix<f64>, v: &[f64]) -> Vec<f64> {
    (m * DVector::from_column_slice(v)).iter().copied().collect()
}
