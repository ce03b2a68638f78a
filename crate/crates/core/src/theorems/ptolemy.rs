//! Points on a common hyperplane inside an umbilical hypersurface, and
//! points on a common umbilical hypersurface.

use super::{pairwise_matrix, unit_witness};
use crate::error::{GeomError, Result};
use crate::lorentz::{
    check_tol, degeneracy, inner_slices, lorentz_complement, max_abs, spacelike_in_span,
    DegeneracyVerdict, LorentzVector,
};
use crate::objects::{
    half_dist_sinh_sq, CoHyperplane, EquidistantBranch, HPoint, Horosphere, Hypersphere, Surface,
};
use nalgebra::DMatrix;
use serde::Serialize;
use std::f64::consts::SQRT_2;

/// Floor on the relative residual accepted when checking surface membership.
const MEMBER_TOL: f64 = 1e-9;

/// Floor on the tolerance separating the four surface kinds.
const KIND_TOL: f64 = 1e-8;

/// Distance of `‖u‖²` from `±1` below which a datum is rejected.
const DATUM_TOL: f64 = 1e-9;

/// `B_{ij} = sinh²(ϱ(p_i,p_j)/2)`.
pub fn ptolemy_matrix(ps: &[HPoint]) -> DMatrix<f64> {
    pairwise_matrix(ps.len(), |i, j| half_dist_sinh_sq(&ps[i], &ps[j]))
}

fn check_points(ps: &[HPoint], extra: usize) -> Result<usize> {
    let first = ps.first().ok_or(GeomError::WrongCount { expected: 3, got: 0 })?;
    let n = first.dim();
    if let Some(p) = ps.iter().find(|p| p.dim() != n) {
        return Err(GeomError::DimensionMismatch { expected: n, got: p.dim() });
    }
    if ps.len() != n + extra {
        return Err(GeomError::WrongCount { expected: n + extra, got: ps.len() });
    }
    Ok(n)
}

/// Surface containing the points of a hyperplane-section test.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum UmbilicalSurface {
    Horosphere(Horosphere),
    Hypersphere(Hypersphere),
    /// A raw datum `u` with `‖u‖² ≠ ±1`; the surface is
    /// `{x : ⟨x,u⟩ = (‖u‖² − 1)/2}`.
    Datum(LorentzVector),
}

impl UmbilicalSurface {
    /// The vector `u` with `⟨p,u⟩ = (‖u‖² − 1)/2` on the surface.
    pub fn datum(&self) -> LorentzVector {
        match self {
            UmbilicalSurface::Horosphere(h) => h.rep().scaled(1.0 / SQRT_2),
            UmbilicalSurface::Hypersphere(s) => {
                let c = s.radius.cosh();
                let delta = c + (c * c - 1.0).sqrt();
                s.centre.rep().scaled(delta)
            }
            UmbilicalSurface::Datum(u) => u.clone(),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            UmbilicalSurface::Horosphere(h) => h.dim(),
            UmbilicalSurface::Hypersphere(s) => s.centre.dim(),
            UmbilicalSurface::Datum(u) => u.dim(),
        }
    }

    /// Residual of the defining equation at `p`, relative to the coordinate scale.
    pub fn residual(&self, p: &HPoint) -> f64 {
        let scale = max_abs(p.rep().coords());
        match self {
            UmbilicalSurface::Horosphere(h) => {
                Surface::Horosphere(h.clone()).residual(p) / (scale * h.rep().max_abs())
            }
            UmbilicalSurface::Hypersphere(s) => {
                Surface::Hypersphere(s.clone()).residual(p) / (scale * s.centre.rep().max_abs())
            }
            UmbilicalSurface::Datum(u) => {
                (p.rep().dot(u) - (u.norm_sq() - 1.0) / 2.0).abs() / (scale * u.max_abs().max(1.0))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PtolemyVerdict {
    pub verdict: DegeneracyVerdict,
    /// Hyperplane through all points, when degenerate.
    pub witness: Option<CoHyperplane>,
    /// `max_i |⟨p_i, normal⟩| / |p_i|∞`.
    pub witness_residual: Option<f64>,
}

/// Tests whether `n+1` points of an umbilical hypersurface lie on a common
/// hyperplane.
pub fn ptolemy1_test(ps: &[HPoint], surface: &UmbilicalSurface, tol: f64) -> Result<PtolemyVerdict> {
    check_tol(tol)?;
    let n = check_points(ps, 1)?;
    if surface.dim() != n {
        return Err(GeomError::DimensionMismatch { expected: n, got: surface.dim() });
    }
    let u = surface.datum();
    let q = u.norm_sq();
    if (q - 1.0).abs() <= DATUM_TOL || (q + 1.0).abs() <= DATUM_TOL {
        return Err(GeomError::DegenerateDatum(q));
    }
    let member_tol = tol.max(MEMBER_TOL);
    if let Some((i, r)) = ps
        .iter()
        .map(|p| surface.residual(p))
        .enumerate()
        .find(|(_, r)| *r > member_tol)
    {
        return Err(GeomError::HypothesisViolated(format!(
            "point {i} is not on the surface (relative residual {r:.3e})"
        )));
    }

    let verdict = degeneracy(&ptolemy_matrix(ps), tol)?;
    if !verdict.is_degenerate {
        return Ok(PtolemyVerdict { verdict, witness: None, witness_residual: None });
    }
    // v_i′ = p_i − u has Gram matrix −2B, so B is singular iff the v_i′ span
    // a proper subspace; pulling its normal back along u gives the hyperplane.
    let primed: Vec<Vec<f64>> = ps.iter().map(|p| (p.rep() - &u).into_vec()).collect();
    let w_prime = lorentz_complement(&primed, tol, 1).swap_remove(0);
    let mu = 2.0 * inner_slices(u.coords(), &w_prime) / (q - 1.0);
    let w: Vec<f64> = w_prime.iter().zip(u.coords()).map(|(a, b)| a - mu * b).collect();
    let witness = unit_witness(&w);
    let witness_residual = witness.as_ref().map(|h| hyperplane_residual(ps, h));
    Ok(PtolemyVerdict { verdict, witness, witness_residual })
}

fn hyperplane_residual(ps: &[HPoint], h: &CoHyperplane) -> f64 {
    ps.iter()
        .map(|p| p.rep().dot(h.normal()).abs() / max_abs(p.rep().coords()))
        .fold(0.0, f64::max)
}

/// Finds a datum `u` with `⟨p_i,u⟩ = (‖u‖² − 1)/2` for all points, by solving
/// `⟨p_i − p_1, y⟩ = 0` and rescaling `y`.
pub fn fit_umbilical(ps: &[HPoint], tol: f64) -> Result<LorentzVector> {
    check_tol(tol)?;
    let first = ps.first().ok_or(GeomError::WrongCount { expected: 2, got: 0 })?;
    let p1 = first.rep().coords();
    let diffs: Vec<Vec<f64>> = ps[1..]
        .iter()
        .map(|p| p.rep().coords().iter().zip(p1).map(|(a, b)| a - b).collect())
        .collect();
    let basis = if diffs.is_empty() {
        lorentz_complement(&[vec![0.0; p1.len()]], tol, p1.len())
    } else {
        lorentz_complement(&diffs, tol, 1)
    };
    // Among solutions, take the one with the largest ⟨p_1, y⟩.
    let phi: Vec<f64> = basis.iter().map(|b| inner_slices(p1, b)).collect();
    let phi_norm = phi.iter().map(|x| x * x).sum::<f64>().sqrt();
    let y: Vec<f64> = if phi_norm > 0.0 {
        (0..p1.len())
            .map(|k| basis.iter().zip(&phi).map(|(b, f)| f * b[k]).sum::<f64>() / phi_norm)
            .collect()
    } else {
        basis[0].clone()
    };
    let mu = inner_slices(p1, &y);
    let q = inner_slices(&y, &y);
    let disc = (mu * mu + q).max(0.0);
    let s = if mu < 0.0 { -1.0 } else { 1.0 };
    let k = -1.0 / (mu + s * disc.sqrt());
    let u = LorentzVector::from_vec(y.iter().map(|x| k * x).collect());
    let qu = u.norm_sq();
    if !qu.is_finite() || (qu - 1.0).abs() <= DATUM_TOL || (qu + 1.0).abs() <= DATUM_TOL {
        return Err(GeomError::DegenerateDatum(qu));
    }
    Ok(u)
}

/// `n+2` points lie on a common horosphere, hypersphere, hyperplane or
/// equidistant branch iff this verdict is degenerate.
pub fn ptolemy2_test(ps: &[HPoint], tol: f64) -> Result<DegeneracyVerdict> {
    check_tol(tol)?;
    check_points(ps, 2)?;
    degeneracy(&ptolemy_matrix(ps), tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SurfaceKind {
    Horosphere,
    Hypersphere,
    Hyperplane,
    EquidistantBranch,
}

/// A surface `{x : ⟨x, datum⟩ = offset}` through a family of points.
///
/// The datum is a forward lightlike representative with offset `−1/√2` for
/// a horosphere, the forward unit centre with offset `−cosh r` for a
/// hypersphere, and a unit spacelike normal (first nonzero coordinate
/// positive) otherwise.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UmbilicalFit {
    pub kind: SurfaceKind,
    pub datum: LorentzVector,
    pub offset: f64,
    /// `max_i |⟨p_i, datum⟩ − offset|`.
    pub residual: f64,
}

impl UmbilicalFit {
    /// Hypersphere radius `arccosh(−offset)`.
    pub fn radius(&self) -> Option<f64> {
        (self.kind == SurfaceKind::Hypersphere).then(|| (-self.offset).max(1.0).acosh())
    }

    pub fn surface(&self) -> Result<Surface> {
        Ok(match self.kind {
            SurfaceKind::Horosphere => Surface::Horosphere(Horosphere::new(self.datum.clone())?),
            SurfaceKind::Hypersphere => Surface::Hypersphere(Hypersphere::new(
                HPoint::from_timelike(&self.datum)?,
                self.radius().unwrap_or(0.0),
            )?),
            SurfaceKind::Hyperplane => Surface::Hyperplane(CoHyperplane::new(self.datum.clone())?),
            SurfaceKind::EquidistantBranch => {
                Surface::Equidistant(EquidistantBranch::new(self.datum.clone(), self.offset)?)
            }
        })
    }
}

fn fit(ps: &[HPoint], kind: SurfaceKind, datum: LorentzVector) -> UmbilicalFit {
    let values: Vec<f64> = ps.iter().map(|p| p.rep().dot(&datum)).collect();
    let offset = values.iter().sum::<f64>() / values.len() as f64;
    let residual = values.iter().map(|v| (v - offset).abs()).fold(0.0, f64::max);
    UmbilicalFit { kind, datum, offset, residual }
}

/// Recovers the surface through `n+2` points with a degenerate verdict.
pub fn ptolemy2_classify(ps: &[HPoint], tol: f64) -> Result<UmbilicalFit> {
    let verdict = ptolemy2_test(ps, tol)?;
    if !verdict.is_degenerate {
        return Err(GeomError::NotDegenerate);
    }
    // Lift to ℝ^{n+1,1} as (1, p_i); the lifted vectors have Gram matrix −2B.
    let lifted: Vec<Vec<f64>> = ps
        .iter()
        .map(|p| std::iter::once(1.0).chain(p.rep().coords().iter().copied()).collect())
        .collect();
    let basis = lorentz_complement(&lifted, tol, 1);
    let w = spacelike_in_span(&basis, tol).ok_or(GeomError::NormalSearchFailed)?;
    // w = λ·e₀ + v, so ⟨p_i, v⟩ = −λ and ‖v‖² = 1 − λ².
    let lambda = w[0];
    let v = LorentzVector::from_vec(w[1..].to_vec());
    let q = v.norm_sq();
    let kind_tol = tol.max(KIND_TOL);
    Ok(if q.abs() <= kind_tol {
        let rep = v.scaled(1.0 / (SQRT_2 * lambda)).forward();
        fit(ps, SurfaceKind::Horosphere, rep)
    } else if q < 0.0 {
        let c = v.normalized_unit().expect("timelike").forward();
        fit(ps, SurfaceKind::Hypersphere, c)
    } else {
        let nrm = v.normalized_unit().expect("spacelike").sign_normalized();
        let f = fit(ps, SurfaceKind::EquidistantBranch, nrm);
        if f.offset.abs() <= kind_tol {
            UmbilicalFit { kind: SurfaceKind::Hyperplane, ..f }
        } else {
            f
        }
    })
}
