//! Conversions between the hyperboloid, Poincaré ball and upper half-space
//! models, the Euclidean chart of a horosphere, and the lift of cooriented
//! Euclidean spheres to hyperplane normals one dimension up.

use crate::error::{GeomError, Result};
use crate::lorentz::LorentzVector;
use crate::objects::{CoHyperplane, CoSphereE, HPoint, Horosphere, OBJECT_TOL};
use serde::{Deserialize, Serialize};
use std::f64::consts::SQRT_2;

fn norm_sq(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

/// A point of the open unit ball.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BallPoint(pub Vec<f64>);

/// A point `(z, t)` of the upper half-space, `t > 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HalfSpacePoint {
    pub z: Vec<f64>,
    pub t: f64,
}

/// Stereographic projection from `(0,…,0,−1)`: `b = x_{1..n} / (1 + x_{n+1})`.
pub fn hyperboloid_to_ball(p: &HPoint) -> BallPoint {
    let x = p.rep();
    let d = 1.0 + x.time();
    BallPoint(x.spatial().iter().map(|c| c / d).collect())
}

/// Inverse of [`hyperboloid_to_ball`]: `x = (2b, 1 + |b|²) / (1 − |b|²)`.
pub fn ball_to_hyperboloid(b: &BallPoint) -> Result<HPoint> {
    let s = norm_sq(&b.0);
    if s.sqrt() >= 1.0 - 1e-12 {
        return Err(GeomError::OutsideBall);
    }
    let d = 1.0 - s;
    let mut c: Vec<f64> = b.0.iter().map(|v| 2.0 * v / d).collect();
    c.push((1.0 + s) / d);
    HPoint::from_coords(c)
}

/// A null frame `(ℓ, m, e_1 … e_{n−1})` with `⟨ℓ,m⟩ = −1`, both null, and
/// the `e_k` orthonormal and orthogonal to both. Sends `ℓ` to the point at
/// infinity of the half-space model.
#[derive(Debug, Clone)]
struct NullFrame {
    ell: LorentzVector,
    m: LorentzVector,
    basis: Vec<LorentzVector>,
}

impl NullFrame {
    /// `ell` must be forward lightlike.
    fn new(ell: LorentzVector) -> Self {
        let n = ell.dim();
        let c = ell.time();
        let a = ell.spatial();
        let mut m: Vec<f64> = a.iter().map(|x| -x / (2.0 * c * c)).collect();
        m.push(1.0 / (2.0 * c));

        // Orthonormal basis of a⊥ ⊂ ℝⁿ by Gram–Schmidt over â, e_1, …, e_n.
        let a_norm = norm_sq(a).sqrt();
        let mut ortho: Vec<Vec<f64>> = vec![a.iter().map(|x| x / a_norm).collect()];
        for k in 0..n {
            if ortho.len() == n {
                break;
            }
            let mut v = vec![0.0; n];
            v[k] = 1.0;
            for q in &ortho {
                let p = dot(&v, q);
                v.iter_mut().zip(q).for_each(|(vi, qi)| *vi -= p * qi);
            }
            let len = norm_sq(&v).sqrt();
            if len > 0.1 {
                ortho.push(v.iter().map(|x| x / len).collect());
            }
        }
        let basis = ortho
            .into_iter()
            .skip(1)
            .map(|mut e| {
                e.push(0.0);
                LorentzVector::from_vec(e)
            })
            .collect();
        Self {
            ell,
            m: LorentzVector::from_vec(m),
            basis,
        }
    }

    fn standard(n: usize) -> Self {
        let mut ell = vec![0.0; n + 1];
        ell[n - 1] = 1.0;
        ell[n] = 1.0;
        Self::new(LorentzVector::from_vec(ell))
    }

    fn to_half_space(&self, x: &LorentzVector) -> HalfSpacePoint {
        let t = -1.0 / x.dot(&self.ell);
        HalfSpacePoint {
            z: self.basis.iter().map(|e| t * x.dot(e)).collect(),
            t,
        }
    }

    /// `x = (1/t)·(m + Σ z_k e_k + ((|z|² + t²)/2)·ℓ)`.
    fn from_half_space(&self, h: &HalfSpacePoint) -> LorentzVector {
        let mut x = self.m.clone();
        for (zk, e) in h.z.iter().zip(&self.basis) {
            x = &x + &(e * *zk);
        }
        x = &x + &(&self.ell * ((norm_sq(&h.z) + h.t * h.t) / 2.0));
        x.scaled(1.0 / h.t)
    }
}

/// Upper half-space coordinates with the ideal point `(0,…,0,1,1)` at infinity.
pub fn hyperboloid_to_half_space(p: &HPoint) -> HalfSpacePoint {
    NullFrame::standard(p.dim()).to_half_space(p.rep())
}

pub fn half_space_to_hyperboloid(h: &HalfSpacePoint) -> Result<HPoint> {
    if !(h.t > 0.0) {
        return Err(GeomError::InvalidObject("half-space height must be positive".into()));
    }
    HPoint::new(NullFrame::standard(h.z.len() + 1).from_half_space(h))
}

pub fn ball_to_half_space(b: &BallPoint) -> Result<HalfSpacePoint> {
    Ok(hyperboloid_to_half_space(&ball_to_hyperboloid(b)?))
}

pub fn half_space_to_ball(h: &HalfSpacePoint) -> Result<BallPoint> {
    Ok(hyperboloid_to_ball(&half_space_to_hyperboloid(h)?))
}

fn horosphere_frame(h: &Horosphere) -> NullFrame {
    // ℓ = √2·rep places the horosphere at height t = 1.
    NullFrame::new(h.rep().scaled(SQRT_2))
}

/// Isometric Euclidean chart of a horosphere: chart distances equal
/// `2 sinh(ϱ/2)`.
pub fn horosphere_chart(h: &Horosphere, p: &HPoint) -> Result<Vec<f64>> {
    let residual = (p.rep().dot(h.rep()) + std::f64::consts::FRAC_1_SQRT_2).abs();
    let scale = p.rep().max_abs().max(h.rep().max_abs());
    if residual > OBJECT_TOL * scale {
        return Err(GeomError::HypothesisViolated(format!(
            "point is not on the horosphere (residual {residual:.3e})"
        )));
    }
    Ok(horosphere_frame(h).to_half_space(p.rep()).z)
}

/// Inverse of [`horosphere_chart`].
pub fn horosphere_chart_inverse(h: &Horosphere, z: &[f64]) -> Result<HPoint> {
    if z.len() + 1 != h.dim() {
        return Err(GeomError::DimensionMismatch {
            expected: h.dim() - 1,
            got: z.len(),
        });
    }
    let x = horosphere_frame(h).from_half_space(&HalfSpacePoint { z: z.to_vec(), t: 1.0 });
    HPoint::new(x)
}

/// Lifts a cooriented sphere of ℝⁿ to the unit spacelike normal
/// `ε·(c, (|c|²−r²−1)/2, (|c|²−r²+1)/2)/r` in ℝ^{n+1,1}; pairwise inner
/// products of lifts are minus the inversive distances.
pub fn sphere_lift(s: &CoSphereE) -> Result<CoHyperplane> {
    if !(s.radius > 0.0) {
        return Err(GeomError::InvalidObject("sphere radius must be positive".into()));
    }
    let k = norm_sq(&s.centre) - s.radius * s.radius;
    let f = f64::from(s.eps) / s.radius;
    let mut v: Vec<f64> = s.centre.iter().map(|c| f * c).collect();
    v.push(f * (k - 1.0) / 2.0);
    v.push(f * (k + 1.0) / 2.0);
    CoHyperplane::new(LorentzVector::new(v)?)
}

/// The null vector of ℝ^{n+1,1} representing a point of ℝⁿ on the ideal
/// boundary: `(x, (|x|²−1)/2, (|x|²+1)/2)`.
pub fn point_lift(x: &[f64]) -> LorentzVector {
    let s = norm_sq(x);
    let mut v = x.to_vec();
    v.push((s - 1.0) / 2.0);
    v.push((s + 1.0) / 2.0);
    LorentzVector::from_vec(v)
}

/// Euclidean reading of a lifted witness vector.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum EuclideanWitness {
    Sphere { centre: Vec<f64>, radius: f64, eps: i8 },
    /// The hyperplane `{x : normal·x = offset}`, `|normal| = 1`.
    Plane { normal: Vec<f64>, offset: f64 },
    Point { coords: Vec<f64> },
    PointAtInfinity,
}

/// Reads a unit spacelike vector of ℝ^{n+1,1} back as a cooriented sphere,
/// or as a plane when it has the `(û, d, d)` form.
pub fn unlift_spacelike(v: &LorentzVector, tol: f64) -> EuclideanWitness {
    let c = v.coords();
    let n = c.len() - 2;
    let s = c[n + 1] - c[n];
    if s.abs() <= tol * v.max_abs() {
        let u = &c[..n];
        let len = norm_sq(u).sqrt();
        return EuclideanWitness::Plane {
            normal: u.iter().map(|x| x / len).collect(),
            offset: c[n] / len,
        };
    }
    let radius = 1.0 / s.abs();
    let eps: i8 = if s > 0.0 { 1 } else { -1 };
    EuclideanWitness::Sphere {
        centre: c[..n].iter().map(|x| x * radius * f64::from(eps)).collect(),
        radius,
        eps,
    }
}

/// Reads a null vector of ℝ^{n+1,1} back as a point of ℝⁿ ∪ {∞}.
pub fn unlift_lightlike(w: &LorentzVector, tol: f64) -> EuclideanWitness {
    let c = w.coords();
    let n = c.len() - 2;
    let s = c[n + 1] - c[n];
    if s.abs() <= tol * w.max_abs() {
        EuclideanWitness::PointAtInfinity
    } else {
        EuclideanWitness::Point {
            coords: c[..n].iter().map(|x| x / s).collect(),
        }
    }
}

/// Ball-model description of a horosphere: its ideal point on the unit
/// sphere and the point of the horosphere on the ray towards it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BallHorosphere {
    pub ideal_point: Vec<f64>,
    pub apex: Vec<f64>,
}

pub fn horosphere_to_ball(h: &Horosphere) -> BallHorosphere {
    let xi = h.ideal_point();
    // Along (sinh t·ξ, cosh t): ⟨x, c(ξ,1)⟩ = −c·e^{−t} = −1/√2.
    let t = (h.rep().time() * SQRT_2).ln();
    let b = (t / 2.0).tanh();
    BallHorosphere {
        apex: xi.iter().map(|x| b * x).collect(),
        ideal_point: xi,
    }
}

pub fn horosphere_from_ball(b: &BallHorosphere) -> Result<Horosphere> {
    let s = dot(&b.apex, &b.ideal_point);
    if s.abs() >= 1.0 {
        return Err(GeomError::OutsideBall);
    }
    let t = 2.0 * s.atanh();
    Horosphere::from_ideal(&b.ideal_point, t.exp() / SQRT_2)
}

/// Ball-model description of a cooriented hyperplane by its ideal boundary
/// `{ξ ∈ S^{n−1} : axis·ξ = height}`; the axis carries the coorientation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BallHyperplane {
    pub axis: Vec<f64>,
    pub height: f64,
}

pub fn hyperplane_to_ball(h: &CoHyperplane) -> BallHyperplane {
    let a = h.normal().spatial();
    let len = norm_sq(a).sqrt();
    BallHyperplane {
        axis: a.iter().map(|x| x / len).collect(),
        height: h.normal().time() / len,
    }
}

pub fn hyperplane_from_ball(b: &BallHyperplane) -> Result<CoHyperplane> {
    if b.height.abs() >= 1.0 {
        return Err(GeomError::OutsideBall);
    }
    let len = 1.0 / (1.0 - b.height * b.height).sqrt();
    let mut v: Vec<f64> = b.axis.iter().map(|x| x * len).collect();
    v.push(b.height * len);
    CoHyperplane::new(LorentzVector::new(v)?)
}
