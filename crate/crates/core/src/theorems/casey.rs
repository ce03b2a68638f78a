//! Cooriented hyperplanes with a degenerate σ-matrix, and the Euclidean
//! sphere version via the τ-matrix.

use super::pairwise_matrix;
use crate::error::{GeomError, Result};
use crate::lorentz::{
    check_tol, classify_direction, degeneracy, inner_slices, lorentz_complement, mat_vec, max_abs,
    null_space_sym, DegeneracyVerdict, LorentzVector, SignClass,
};
use crate::models::{sphere_lift, unlift_lightlike, unlift_spacelike, EuclideanWitness};
use crate::objects::{tau, CoHyperplane, CoSphereE, OBJECT_TOL};
use nalgebra::DMatrix;
use serde::Serialize;

/// Residual accepted by the classifier when choosing among candidate witnesses.
pub const WITNESS_TOL: f64 = 1e-7;

/// Largest family for which every coorientation is tried.
pub const MAX_SIGN_SEARCH: usize = 16;

/// Relative residual `|Cλ|∞ / max(σ_max, 1)` above which a kernel vector is rejected.
const KERNEL_TOL: f64 = 1e-6;

/// Floor on the tolerance used to read off causal characters and `|α| = 1`.
const KIND_TOL: f64 = 1e-8;

/// The three alternatives for hyperplanes with a degenerate σ-matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum CaseyCase {
    /// Unit spacelike `v` with `|⟨n_i, v⟩| = 1`: every hyperplane is tangent
    /// at infinity to the hyperplane `v⊥`.
    TangentHyperplaneAtInfinity { v: LorentzVector },
    /// Lightlike `w` with `⟨n_i, w⟩ = 0`: a common ideal point.
    CommonIdealPoint { w: LorentzVector },
    /// Unit spacelike `u`, `v` with `⟨n_i, u⟩ = 0` and `|⟨n_i, v⟩| = λ < 1`.
    OrthogonalAndEquallyInclined {
        u: LorentzVector,
        v: LorentzVector,
        lambda: f64,
    },
}

impl CaseyCase {
    pub fn name(&self) -> &'static str {
        match self {
            CaseyCase::TangentHyperplaneAtInfinity { .. } => "tangent_hyperplane_at_infinity",
            CaseyCase::CommonIdealPoint { .. } => "common_ideal_point",
            CaseyCase::OrthogonalAndEquallyInclined { .. } => "orthogonal_and_equally_inclined",
        }
    }

    fn dim_ok(&self, len: usize) -> bool {
        match self {
            CaseyCase::TangentHyperplaneAtInfinity { v } => v.len() == len,
            CaseyCase::CommonIdealPoint { w } => w.len() == len,
            CaseyCase::OrthogonalAndEquallyInclined { u, v, .. } => u.len() == len && v.len() == len,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WitnessReport {
    pub residual: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseyVerdict {
    /// Coorientation signs applied to the inputs; the first is always `+1`.
    pub signs: Vec<i8>,
    pub verdict: DegeneracyVerdict,
    pub case: Option<CaseyCase>,
    pub witness_residual: Option<f64>,
}

/// `C_{ij} = (⟨n_i, n_j⟩ − 1)/2`.
pub fn casey_matrix(normals: &[LorentzVector]) -> DMatrix<f64> {
    pairwise_matrix(normals.len(), |i, j| (normals[i].dot(&normals[j]) - 1.0) / 2.0)
}

fn check_normals(normals: &[LorentzVector]) -> Result<()> {
    let first = normals.first().ok_or(GeomError::WrongCount { expected: 3, got: 0 })?;
    let len = first.len();
    if let Some(v) = normals.iter().find(|v| v.len() != len) {
        return Err(GeomError::DimensionMismatch { expected: len, got: v.len() });
    }
    if normals.len() != len {
        return Err(GeomError::WrongCount { expected: len, got: normals.len() });
    }
    for v in normals {
        let m = v.max_abs();
        if (v.norm_sq() - 1.0).abs() > OBJECT_TOL * (m * m).max(1.0) {
            return Err(GeomError::InvalidObject(
                "hyperplane normals must be unit spacelike".into(),
            ));
        }
    }
    Ok(())
}

/// Sign vectors with `ε₁ = +1`, in lexicographic order with `+1 < −1`.
fn sign_vectors(m: usize) -> impl Iterator<Item = Vec<i8>> {
    (0..1_u32 << (m - 1)).map(move |b| {
        (0..m)
            .map(|k| {
                if k > 0 && (b >> (m - 1 - k)) & 1 == 1 {
                    -1
                } else {
                    1
                }
            })
            .collect()
    })
}

/// Runs the sign search: returns the signs minimizing `σ_min / max(σ_max, 1)`
/// of the matrix `build(signs)`, the earliest sign vector winning ties.
fn search_signs(
    m: usize,
    search: bool,
    tol: f64,
    build: impl Fn(&[i8]) -> DMatrix<f64>,
) -> Result<(Vec<i8>, DegeneracyVerdict)> {
    if !search {
        let signs = vec![1; m];
        let verdict = degeneracy(&build(&signs), tol)?;
        return Ok((signs, verdict));
    }
    if m > MAX_SIGN_SEARCH {
        return Err(GeomError::InvalidObject(format!(
            "coorientation search is limited to {MAX_SIGN_SEARCH} objects, got {m}"
        )));
    }
    let mut best: Option<(Vec<i8>, DegeneracyVerdict)> = None;
    for signs in sign_vectors(m) {
        let verdict = degeneracy(&build(&signs), tol)?;
        if best.as_ref().is_none_or(|(_, b)| verdict.ratio() < b.ratio()) {
            best = Some((signs, verdict));
        }
    }
    Ok(best.expect("at least one sign vector"))
}

/// Tests whether the hyperplanes admit coorientations with a degenerate
/// σ-matrix, and classifies the configuration when they do.
pub fn casey_test(hps: &[CoHyperplane], tol: f64, search: bool) -> Result<CaseyVerdict> {
    check_tol(tol)?;
    let normals: Vec<LorentzVector> = hps.iter().map(|h| h.normal().clone()).collect();
    check_normals(&normals)?;
    let (signs, verdict) = search_signs(normals.len(), search, tol, |s| {
        casey_matrix(&apply_signs(&normals, s))
    })?;
    if !verdict.is_degenerate {
        return Ok(CaseyVerdict { signs, verdict, case: None, witness_residual: None });
    }
    let (case, residual) = classify_core(&apply_signs(&normals, &signs), tol)?;
    Ok(CaseyVerdict {
        signs,
        verdict,
        case: Some(case),
        witness_residual: Some(residual),
    })
}

fn apply_signs(normals: &[LorentzVector], signs: &[i8]) -> Vec<LorentzVector> {
    normals
        .iter()
        .zip(signs)
        .map(|(n, &s)| if s < 0 { -n.clone() } else { n.clone() })
        .collect()
}

/// Extracts a witness for one of the three alternatives from signed normals
/// whose σ-matrix is degenerate. Returns the case and its witness residual.
pub fn casey_classify(normals: &[LorentzVector], tol: f64) -> Result<(CaseyCase, f64)> {
    check_tol(tol)?;
    check_normals(normals)?;
    if !degeneracy(&casey_matrix(normals), tol)?.is_degenerate {
        return Err(GeomError::NotDegenerate);
    }
    classify_core(normals, tol)
}

/// Maximum residual of the defining equations of `case` over all normals.
pub fn casey_witness_check(case: &CaseyCase, normals: &[LorentzVector], tol: f64) -> WitnessReport {
    let residual = witness_residual(case, normals);
    WitnessReport { residual, pass: residual <= tol }
}

fn witness_residual(case: &CaseyCase, normals: &[LorentzVector]) -> f64 {
    let Some(first) = normals.first() else {
        return f64::INFINITY;
    };
    if !case.dim_ok(first.len()) {
        return f64::INFINITY;
    }
    let r = match case {
        CaseyCase::TangentHyperplaneAtInfinity { v } => normals
            .iter()
            .map(|n| (n.dot(v).abs() - 1.0).abs())
            .fold((v.norm_sq() - 1.0).abs(), f64::max),
        CaseyCase::CommonIdealPoint { w } => {
            let m = w.max_abs();
            if m == 0.0 {
                return f64::INFINITY;
            }
            let w = w.scaled(1.0 / m);
            normals
                .iter()
                .map(|n| n.dot(&w).abs())
                .fold(w.norm_sq().abs(), f64::max)
        }
        CaseyCase::OrthogonalAndEquallyInclined { u, v, lambda } => {
            if !(0.0..1.0).contains(lambda) || !independent(u.coords(), v.coords()) {
                return f64::INFINITY;
            }
            normals
                .iter()
                .map(|n| n.dot(u).abs().max((n.dot(v).abs() - lambda).abs()))
                .fold(
                    (u.norm_sq() - 1.0).abs().max((v.norm_sq() - 1.0).abs()),
                    f64::max,
                )
        }
    };
    if r.is_nan() {
        f64::INFINITY
    } else {
        r
    }
}

fn independent(u: &[f64], v: &[f64]) -> bool {
    let uu: f64 = u.iter().map(|x| x * x).sum();
    let vv: f64 = v.iter().map(|x| x * x).sum();
    let uv: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
    uu * vv - uv * uv > 1e-12 * uu * vv
}

fn combine(coeffs: &[f64], vecs: &[Vec<f64>]) -> Vec<f64> {
    let mut out = vec![0.0; vecs[0].len()];
    for (c, v) in coeffs.iter().zip(vecs) {
        out.iter_mut().zip(v).for_each(|(o, x)| *o += c * x);
    }
    out
}

fn axpy(a: f64, x: &[f64], y: &[f64]) -> Vec<f64> {
    x.iter().zip(y).map(|(xi, yi)| a * xi + yi).collect()
}

fn scale(v: &[f64], k: f64) -> Vec<f64> {
    v.iter().map(|x| x * k).collect()
}

fn unit(v: &[f64]) -> Vec<f64> {
    scale(v, 1.0 / inner_slices(v, v).abs().sqrt())
}

fn lv(v: Vec<f64>) -> LorentzVector {
    LorentzVector::from_vec(v)
}

fn case_i(v: Vec<f64>) -> CaseyCase {
    CaseyCase::TangentHyperplaneAtInfinity { v: lv(v).sign_normalized() }
}

fn case_ii(w: Vec<f64>) -> CaseyCase {
    let w = lv(w);
    let t = w.time();
    let w = if t.abs() > 1e-12 * w.max_abs() { w.scaled(1.0 / t) } else { w.normalized_max() };
    CaseyCase::CommonIdealPoint { w }
}

fn case_iii(u: Vec<f64>, v: Vec<f64>, lambda: f64) -> CaseyCase {
    CaseyCase::OrthogonalAndEquallyInclined {
        u: lv(u).sign_normalized(),
        v: lv(v).sign_normalized(),
        lambda,
    }
}

/// Given unit spacelike `u ⊥ n_i` and `w` with `⟨n_i, w⟩ = α`, moves `w`
/// along `u` until `‖w + tu‖² ≥ α² + 1`, which forces `λ < 1`.
fn spacelike_branch(u: &[f64], w: &[f64], alpha: f64) -> CaseyCase {
    let a = inner_slices(w, u);
    let x = alpha * alpha + a * a - inner_slices(w, w);
    let t = -a + (x.max(0.0) + 1.0).sqrt();
    let z = axpy(t, u, w);
    let nz = inner_slices(&z, &z).sqrt();
    case_iii(u.to_vec(), scale(&z, 1.0 / nz), alpha.abs() / nz)
}

/// Given unit timelike `u ⊥ n_i` and `w` with `⟨n_i, w⟩ = α`.
fn timelike_branch(u: &[f64], w: &[f64], n_last: &[f64], kind_tol: f64) -> Vec<CaseyCase> {
    let y = axpy(inner_slices(w, u), u, w);
    if inner_slices(&y, &y) <= 0.0 {
        return Vec::new();
    }
    let y = unit(&y);
    let alpha = inner_slices(n_last, &y);
    if (alpha.abs() - 1.0).abs() <= kind_tol || alpha.abs() > 1.0 {
        vec![case_i(y)]
    } else if alpha.abs() <= kind_tol {
        vec![spacelike_branch(&y, u, inner_slices(n_last, u))]
    } else {
        let z = axpy((1.0 / (alpha * alpha) - 1.0).sqrt(), u, &scale(&y, 1.0 / alpha));
        vec![case_i(z)]
    }
}

/// Candidates from `v = Σλ_j n_j` when it does not vanish: `‖v‖² = (Σλ_j)²`.
fn nonzero_branch(v: &[f64], kind_tol: f64) -> Vec<CaseyCase> {
    let spacelike = inner_slices(v, v) > 0.0;
    let mut out = Vec::new();
    if classify_direction(v, kind_tol) == SignClass::Lightlike {
        out.push(case_ii(v.to_vec()));
        if spacelike {
            out.push(case_i(unit(v)));
        }
    } else {
        if spacelike {
            out.push(case_i(unit(v)));
        }
        out.push(case_ii(v.to_vec()));
    }
    out
}

/// Candidates when `Σλ_j n_j = 0`: the differences `n_i − n_last` span a
/// subspace `V` with `dim V⊥ ≥ 2`, on which `⟨n_i, ·⟩` is a single functional.
fn vanishing_branch(normals: &[Vec<f64>], tol: f64, kind_tol: f64) -> Vec<CaseyCase> {
    let last = &normals[normals.len() - 1];
    let diffs: Vec<Vec<f64>> = normals[..normals.len() - 1]
        .iter()
        .map(|n| axpy(-1.0, last, n))
        .collect();
    let basis = lorentz_complement(&diffs, tol, 2);
    let k = basis.len();
    let phi: Vec<f64> = basis.iter().map(|b| inner_slices(last, b)).collect();

    // Orthonormal coefficient frame whose first vector is along φ.
    let mut frame: Vec<Vec<f64>> = Vec::new();
    let phi_norm = phi.iter().map(|x| x * x).sum::<f64>().sqrt();
    if phi_norm > 1e-14 {
        frame.push(scale(&phi, 1.0 / phi_norm));
    }
    for j in 0..k {
        let mut e = vec![0.0; k];
        e[j] = 1.0;
        for f in &frame {
            let p: f64 = e.iter().zip(f).map(|(a, b)| a * b).sum();
            e = axpy(-p, f, &e);
        }
        let len = e.iter().map(|x| x * x).sum::<f64>().sqrt();
        if len > 0.1 {
            frame.push(scale(&e, 1.0 / len));
        }
        if frame.len() == k {
            break;
        }
    }
    let w = combine(&frame[0], &basis);
    let alpha = inner_slices(last, &w);
    let mut out = Vec::new();
    for c in &frame[1..] {
        let u = combine(c, &basis);
        let q = inner_slices(&u, &u);
        match classify_direction(&u, kind_tol) {
            SignClass::Lightlike => {
                out.push(case_ii(u.clone()));
                if q > 0.0 {
                    out.push(spacelike_branch(&unit(&u), &w, alpha));
                } else if q < 0.0 {
                    out.extend(timelike_branch(&unit(&u), &w, last, kind_tol));
                }
            }
            SignClass::Spacelike => {
                out.push(spacelike_branch(&unit(&u), &w, alpha));
                out.push(case_ii(u.clone()));
            }
            SignClass::Timelike => {
                out.extend(timelike_branch(&unit(&u), &w, last, kind_tol));
                out.push(case_ii(u.clone()));
            }
        }
    }
    out
}

/// Candidate witnesses in the order the converse argument reaches them;
/// the first one passing the checker is returned, otherwise the best.
fn classify_core(normals: &[LorentzVector], tol: f64) -> Result<(CaseyCase, f64)> {
    let c = casey_matrix(normals);
    let sigma_max = c.iter().fold(0.0_f64, |a, x| a.max(x.abs()));
    let kernel = null_space_sym(&c, tol)?;
    let kernel_res = |l: &[f64]| max_abs(&mat_vec(&c, l)) / sigma_max.max(1.0);
    let r0 = kernel_res(&kernel[0]);
    if r0 > KERNEL_TOL {
        return Err(GeomError::NoReliableKernel(r0));
    }
    let mut lambdas: Vec<Vec<f64>> = Vec::new();
    if kernel.len() >= 2 {
        // A combination with Σλ = 0 leads straight to the lightlike branch.
        let s0: f64 = kernel[0].iter().sum();
        let s1: f64 = kernel[1].iter().sum();
        let z = axpy(s1, &kernel[0], &scale(&kernel[1], -s0));
        let zn = z.iter().map(|x| x * x).sum::<f64>().sqrt();
        if zn > 1e-12 {
            lambdas.push(scale(&z, 1.0 / zn));
        }
    }
    lambdas.extend(kernel.iter().filter(|l| kernel_res(l) <= KERNEL_TOL).cloned());

    let rows: Vec<Vec<f64>> = normals.iter().map(|n| n.coords().to_vec()).collect();
    let n_scale = rows.iter().map(|r| max_abs(r)).fold(0.0, f64::max);
    let kind_tol = tol.max(KIND_TOL);
    let accept = tol.max(WITNESS_TOL);
    let mut best: Option<(CaseyCase, f64)> = None;
    for lambda in &lambdas {
        let v = combine(lambda, &rows);
        let l1: f64 = lambda.iter().map(|x| x.abs()).sum();
        let significant = max_abs(&v) > tol * l1 * n_scale;
        let candidates = if significant {
            let mut c = nonzero_branch(&v, kind_tol);
            c.extend(vanishing_branch(&rows, tol, kind_tol));
            c
        } else {
            vanishing_branch(&rows, tol, kind_tol)
        };
        for case in candidates {
            let r = witness_residual(&case, normals);
            if r <= accept {
                return Ok((case, r));
            }
            if best.as_ref().is_none_or(|(_, b)| r < *b) {
                best = Some((case, r));
            }
        }
    }
    best.ok_or(GeomError::NoReliableKernel(r0))
}

/// Euclidean reading of a case for lifted spheres.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum EuclideanCase {
    /// A sphere or plane tangent to every input sphere.
    CommonTangent { tangent: EuclideanWitness },
    /// A point (possibly at infinity) on every input sphere.
    CommonPoint { point: EuclideanWitness },
    /// A sphere or plane orthogonal to every input, and one meeting every
    /// input at the same angle.
    OrthogonalAndEquallyInclined {
        orthogonal: EuclideanWitness,
        inclined: EuclideanWitness,
        lambda: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorollaryDVerdict {
    pub signs: Vec<i8>,
    /// Verdict on the τ-matrix.
    pub verdict: DegeneracyVerdict,
    /// Verdict on the σ-matrix of the lifted hyperplanes under the same signs.
    pub lifted_verdict: DegeneracyVerdict,
    pub case: Option<CaseyCase>,
    pub euclidean: Option<EuclideanCase>,
    pub witness_residual: Option<f64>,
}

/// `D_{ij} = τ(S_i, S_j)`.
pub fn corollary_d_matrix(spheres: &[CoSphereE]) -> DMatrix<f64> {
    pairwise_matrix(spheres.len(), |i, j| tau(&spheres[i], &spheres[j]))
}

fn euclidean_case(case: &CaseyCase, tol: f64) -> EuclideanCase {
    match case {
        CaseyCase::TangentHyperplaneAtInfinity { v } => EuclideanCase::CommonTangent {
            tangent: unlift_spacelike(v, tol),
        },
        CaseyCase::CommonIdealPoint { w } => EuclideanCase::CommonPoint {
            point: unlift_lightlike(w, tol),
        },
        CaseyCase::OrthogonalAndEquallyInclined { u, v, lambda } => {
            EuclideanCase::OrthogonalAndEquallyInclined {
                orthogonal: unlift_spacelike(u, tol),
                inclined: unlift_spacelike(v, tol),
                lambda: *lambda,
            }
        }
    }
}

/// Tests whether `n+2` cooriented spheres of ℝⁿ admit coorientations with a
/// degenerate τ-matrix, and classifies through the lift to hyperplanes.
pub fn corollary_d_test(spheres: &[CoSphereE], tol: f64, search: bool) -> Result<CorollaryDVerdict> {
    check_tol(tol)?;
    let first = spheres.first().ok_or(GeomError::WrongCount { expected: 4, got: 0 })?;
    let n = first.dim();
    if let Some(s) = spheres.iter().find(|s| s.dim() != n) {
        return Err(GeomError::DimensionMismatch { expected: n, got: s.dim() });
    }
    if spheres.len() != n + 2 {
        return Err(GeomError::WrongCount { expected: n + 2, got: spheres.len() });
    }
    for s in spheres {
        CoSphereE::new(s.centre.clone(), s.radius, s.eps)?;
    }
    let signed = |signs: &[i8]| -> Vec<CoSphereE> {
        spheres.iter().zip(signs).map(|(s, &e)| s.with_sign(e)).collect()
    };
    let (signs, verdict) =
        search_signs(spheres.len(), search, tol, |s| corollary_d_matrix(&signed(s)))?;
    let lifted: Vec<LorentzVector> = signed(&signs)
        .iter()
        .map(|s| sphere_lift(s).map(|h| h.normal().clone()))
        .collect::<Result<_>>()?;
    let lifted_verdict = degeneracy(&casey_matrix(&lifted), tol)?;
    if !verdict.is_degenerate {
        return Ok(CorollaryDVerdict {
            signs,
            verdict,
            lifted_verdict,
            case: None,
            euclidean: None,
            witness_residual: None,
        });
    }
    let (case, residual) = classify_core(&lifted, tol)?;
    let euclidean = euclidean_case(&case, tol.max(KIND_TOL));
    Ok(CorollaryDVerdict {
        signs,
        verdict,
        lifted_verdict,
        case: Some(case),
        euclidean: Some(euclidean),
        witness_residual: Some(residual),
    })
}
