//! Geometric objects of the hyperboloid model and their pairwise invariants.

use crate::error::{GeomError, Result};
use crate::lorentz::{classify, LorentzVector, SignClass};
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_1_SQRT_2;

/// Tolerance on the defining equations checked by constructors.
pub const OBJECT_TOL: f64 = 1e-9;

/// How far an argument may stray outside an inverse-hyperbolic domain before
/// clamping is refused.
pub const DOMAIN_SLACK: f64 = 1e-7;

/// Same-centre criterion for horosphere representatives.
pub const SAME_CENTRE_TOL: f64 = 1e-9;

/// `arccosh`, clamping arguments in `[1 − DOMAIN_SLACK, 1)` up to 1.
pub fn acosh_clamped(x: f64) -> Result<f64> {
    if x < 1.0 - DOMAIN_SLACK || x.is_nan() {
        return Err(GeomError::OutOfDomain(x));
    }
    Ok(x.max(1.0).acosh())
}

/// `√x`, clamping arguments in `[−DOMAIN_SLACK, 0)` up to 0.
pub fn sqrt_clamped(x: f64) -> Result<f64> {
    if x < -DOMAIN_SLACK || x.is_nan() {
        return Err(GeomError::OutOfDomain(x));
    }
    Ok(x.max(0.0).sqrt())
}

fn unit_residual(v: &LorentzVector, target: f64) -> f64 {
    let m = v.max_abs();
    (v.norm_sq() - target).abs() / (m * m).max(1.0)
}

/// A point of 𝓗ⁿ: `‖x‖² = −1`, `x_{n+1} > 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HPoint {
    rep: LorentzVector,
}

impl HPoint {
    pub fn new(rep: LorentzVector) -> Result<Self> {
        if rep.time() <= 0.0 {
            return Err(GeomError::InvalidObject(
                "hyperboloid point must have positive last coordinate".into(),
            ));
        }
        let r = unit_residual(&rep, -1.0);
        if r > OBJECT_TOL {
            return Err(GeomError::InvalidObject(format!(
                "point is off the hyperboloid (‖x‖²+1 residual {r:.3e})"
            )));
        }
        Ok(Self { rep })
    }

    pub fn from_coords(coords: Vec<f64>) -> Result<Self> {
        Self::new(LorentzVector::new(coords)?)
    }

    /// Lifts `x ∈ ℝⁿ` to `(x, √(1+|x|²))`.
    pub fn lift(spatial: &[f64]) -> Result<Self> {
        let t = (1.0 + spatial.iter().map(|x| x * x).sum::<f64>()).sqrt();
        let mut c = spatial.to_vec();
        c.push(t);
        Ok(Self {
            rep: LorentzVector::new(c)?,
        })
    }

    /// Projects a timelike vector onto 𝓗ⁿ by rescaling and orienting forward.
    pub fn from_timelike(v: &LorentzVector) -> Result<Self> {
        let q = v.norm_sq();
        if q >= 0.0 {
            return Err(GeomError::InvalidObject("vector is not timelike".into()));
        }
        Self::new(v.forward().scaled(1.0 / (-q).sqrt()))
    }

    pub fn origin(n: usize) -> Self {
        Self {
            rep: LorentzVector::basis(n, n),
        }
    }

    pub fn rep(&self) -> &LorentzVector {
        &self.rep
    }

    pub fn dim(&self) -> usize {
        self.rep.dim()
    }
}

/// A horosphere `{x : ⟨x,v⟩ = −1/√2}` for a forward lightlike `v`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Horosphere {
    rep: LorentzVector,
}

impl Horosphere {
    pub fn new(rep: LorentzVector) -> Result<Self> {
        if rep.time() <= 0.0 {
            return Err(GeomError::InvalidObject(
                "horosphere representative must be forward (last coordinate > 0)".into(),
            ));
        }
        if classify(&rep, OBJECT_TOL) != SignClass::Lightlike {
            return Err(GeomError::InvalidObject(
                "horosphere representative must be lightlike".into(),
            ));
        }
        Ok(Self { rep })
    }

    pub fn from_coords(coords: Vec<f64>) -> Result<Self> {
        Self::new(LorentzVector::new(coords)?)
    }

    /// The horosphere centred at the ideal direction `d` (any nonzero vector
    /// of ℝⁿ) with representative `scale·(d/|d|, 1)`.
    pub fn from_ideal(direction: &[f64], scale: f64) -> Result<Self> {
        let norm = direction.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 || scale <= 0.0 {
            return Err(GeomError::InvalidObject("degenerate ideal direction".into()));
        }
        let mut c: Vec<f64> = direction.iter().map(|x| scale * x / norm).collect();
        c.push(scale);
        Self::new(LorentzVector::new(c)?)
    }

    pub fn rep(&self) -> &LorentzVector {
        &self.rep
    }

    pub fn dim(&self) -> usize {
        self.rep.dim()
    }

    /// Unit vector of ℝⁿ pointing at the centre on the ideal sphere.
    pub fn ideal_point(&self) -> Vec<f64> {
        let t = self.rep.time();
        self.rep.spatial().iter().map(|x| x / t).collect()
    }
}

/// A cooriented hyperplane given by its signed unit spacelike normal.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoHyperplane {
    normal: LorentzVector,
}

impl CoHyperplane {
    pub fn new(normal: LorentzVector) -> Result<Self> {
        let r = unit_residual(&normal, 1.0);
        if r > OBJECT_TOL {
            return Err(GeomError::InvalidObject(format!(
                "hyperplane normal must be unit spacelike (residual {r:.3e})"
            )));
        }
        Ok(Self { normal })
    }

    pub fn from_coords(coords: Vec<f64>) -> Result<Self> {
        Self::new(LorentzVector::new(coords)?)
    }

    /// Normalizes a spacelike vector to unit length, keeping its direction.
    pub fn from_spacelike(v: &LorentzVector) -> Result<Self> {
        if v.norm_sq() <= 0.0 {
            return Err(GeomError::InvalidObject("normal is not spacelike".into()));
        }
        Self::new(v.normalized_unit().expect("spacelike vector"))
    }

    pub fn normal(&self) -> &LorentzVector {
        &self.normal
    }

    pub fn dim(&self) -> usize {
        self.normal.dim()
    }

    /// The same hyperplane with the opposite coorientation.
    pub fn flipped(&self) -> Self {
        Self {
            normal: -self.normal.clone(),
        }
    }

    /// Applies a coorientation sign `±1`.
    pub fn with_sign(&self, sign: i8) -> Self {
        if sign < 0 {
            self.flipped()
        } else {
            self.clone()
        }
    }
}

/// A metric hypersphere `{x : ϱ(x,c) = r}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Hypersphere {
    pub centre: HPoint,
    pub radius: f64,
}

impl Hypersphere {
    pub fn new(centre: HPoint, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(GeomError::InvalidObject(format!(
                "hypersphere radius must be positive, got {radius}"
            )));
        }
        Ok(Self { centre, radius })
    }
}

/// One branch `{x : ⟨x,v⟩ = λ}` of an equidistant hypersurface, `λ ≠ 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquidistantBranch {
    pub normal: LorentzVector,
    pub offset: f64,
}

impl EquidistantBranch {
    pub fn new(normal: LorentzVector, offset: f64) -> Result<Self> {
        if unit_residual(&normal, 1.0) > OBJECT_TOL {
            return Err(GeomError::InvalidObject(
                "equidistant normal must be unit spacelike".into(),
            ));
        }
        if offset == 0.0 || !offset.is_finite() {
            return Err(GeomError::InvalidObject(
                "equidistant offset must be nonzero".into(),
            ));
        }
        Ok(Self { normal, offset })
    }
}

/// A cooriented Euclidean hypersphere in ℝⁿ; `eps = +1` is the outward normal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoSphereE {
    pub centre: Vec<f64>,
    pub radius: f64,
    pub eps: i8,
}

impl CoSphereE {
    pub fn new(centre: Vec<f64>, radius: f64, eps: i8) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(GeomError::InvalidObject(format!(
                "sphere radius must be positive, got {radius}"
            )));
        }
        if eps != 1 && eps != -1 {
            return Err(GeomError::InvalidObject(format!("eps must be ±1, got {eps}")));
        }
        if centre.iter().any(|c| !c.is_finite()) {
            return Err(GeomError::InvalidObject("non-finite sphere centre".into()));
        }
        Ok(Self {
            centre,
            radius,
            eps,
        })
    }

    pub fn dim(&self) -> usize {
        self.centre.len()
    }

    pub fn with_sign(&self, sign: i8) -> Self {
        Self {
            eps: self.eps * sign,
            ..self.clone()
        }
    }

    fn centre_dist_sq(&self, other: &Self) -> f64 {
        self.centre
            .iter()
            .zip(&other.centre)
            .map(|(a, b)| (a - b) * (a - b))
            .sum()
    }

    fn eps_product(&self, other: &Self) -> f64 {
        f64::from(self.eps * other.eps)
    }
}

/// Hyperbolic distance `arccosh(−⟨p,q⟩)`.
pub fn distance(p: &HPoint, q: &HPoint) -> f64 {
    let c = -p.rep.dot(&q.rep);
    if c > 2.0 {
        c.acosh()
    } else {
        // acosh loses half the digits near 1; the chord form does not.
        2.0 * half_dist_sinh_sq(p, q).sqrt().asinh()
    }
}

/// `sinh²(ϱ/2) = ⟨p−q, p−q⟩/4`, clamped below at 0.
pub fn half_dist_sinh_sq(p: &HPoint, q: &HPoint) -> f64 {
    let d = p.rep.clone() - q.rep.clone();
    (d.dot(&d) / 4.0).max(0.0)
}

/// Whether two horospheres share their centre (parallel representatives).
pub fn same_centre(a: &Horosphere, b: &Horosphere) -> bool {
    let na = a.rep.scaled(1.0 / a.rep.time());
    let nb = b.rep.scaled(1.0 / b.rep.time());
    na.max_abs_diff(&nb) <= SAME_CENTRE_TOL
}

/// λ-length `√(−⟨v₁,v₂⟩)`, zero for horospheres with a common centre.
pub fn lambda_length(a: &Horosphere, b: &Horosphere) -> f64 {
    if same_centre(a, b) {
        return 0.0;
    }
    (-a.rep.dot(&b.rep)).max(0.0).sqrt()
}

/// `σ = (⟨n₁,n₂⟩ − 1)/2` for cooriented hyperplanes.
pub fn sigma(a: &CoHyperplane, b: &CoHyperplane) -> f64 {
    (a.normal.dot(&b.normal) - 1.0) / 2.0
}

/// Relative position of two cooriented hyperplanes read off from σ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "relation", rename_all = "snake_case")]
pub enum SigmaRelation {
    TangentAtInfinitySame,
    Intersecting { angle: f64 },
    TangentAtInfinityOpposite,
    DisjointSame { distance: f64 },
    DisjointOpposite { distance: f64 },
}

/// Inverts the piecewise definition of σ.
pub fn sigma_decode(value: f64, tol: f64) -> SigmaRelation {
    if value.abs() <= tol {
        SigmaRelation::TangentAtInfinitySame
    } else if (value + 1.0).abs() <= tol {
        SigmaRelation::TangentAtInfinityOpposite
    } else if value > 0.0 {
        SigmaRelation::DisjointSame {
            distance: 2.0 * value.sqrt().asinh(),
        }
    } else if value > -1.0 {
        SigmaRelation::Intersecting {
            angle: 2.0 * (-value).sqrt().asin(),
        }
    } else {
        SigmaRelation::DisjointOpposite {
            distance: 2.0 * (-value).sqrt().acosh(),
        }
    }
}

/// Signed inversive distance `ε_aε_b(|c_a−c_b|² − r_a² − r_b²)/(2 r_a r_b)`.
pub fn inversive_distance(a: &CoSphereE, b: &CoSphereE) -> f64 {
    a.eps_product(b) * (a.centre_dist_sq(b) - a.radius * a.radius - b.radius * b.radius)
        / (2.0 * a.radius * b.radius)
}

/// Casey's pairwise quantity `ε_aε_b(|c_a−c_b|² − (r_a − ε_aε_b r_b)²)`.
pub fn tau(a: &CoSphereE, b: &CoSphereE) -> f64 {
    let e = a.eps_product(b);
    let dr = a.radius - e * b.radius;
    e * (a.centre_dist_sq(b) - dr * dr)
}

/// Common tangent length: exterior when `ε_aε_b = 1`, interior otherwise.
pub fn tangent_length(a: &CoSphereE, b: &CoSphereE) -> Result<f64> {
    let e = a.eps_product(b);
    let d2 = a.centre_dist_sq(b);
    let dr = a.radius - e * b.radius;
    let radicand = d2 - dr * dr;
    let scale = d2 + (a.radius + b.radius).powi(2);
    if radicand < -1e-12 * scale {
        return Err(GeomError::NoCommonTangent(radicand));
    }
    Ok(radicand.max(0.0).sqrt())
}

/// Umbilical hypersurfaces and hyperplanes that points can be tested against.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Surface {
    Horosphere(Horosphere),
    Hyperplane(CoHyperplane),
    Hypersphere(Hypersphere),
    Equidistant(EquidistantBranch),
}

impl Surface {
    /// Residual of the defining equation at `p`.
    pub fn residual(&self, p: &HPoint) -> f64 {
        let x = p.rep();
        match self {
            Surface::Horosphere(h) => (x.dot(h.rep()) + FRAC_1_SQRT_2).abs(),
            Surface::Hyperplane(h) => x.dot(h.normal()).abs(),
            Surface::Hypersphere(s) => (-x.dot(s.centre.rep()) - s.radius.cosh()).abs(),
            Surface::Equidistant(e) => (x.dot(&e.normal) - e.offset).abs(),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Surface::Horosphere(h) => h.dim(),
            Surface::Hyperplane(h) => h.dim(),
            Surface::Hypersphere(s) => s.centre.dim(),
            Surface::Equidistant(e) => e.normal.dim(),
        }
    }
}

/// Membership test: the surface's defining residual is at most `tol`.
pub fn contains(surface: &Surface, p: &HPoint, tol: f64) -> bool {
    surface.dim() == p.dim() && surface.residual(p) <= tol
}
