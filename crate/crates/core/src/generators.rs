//! Seeded samplers for every configuration class, and perturbations.
//!
//! Random numbers come from [`Rng`]: the seed is scrambled once with
//! SplitMix64 and the stream is xorshift64*, so output is reproducible
//! bit-for-bit from the algorithm alone.

use crate::error::{GeomError, Result};
use crate::lorentz::{degeneracy, inner_slices, LorentzVector};
use crate::models::horosphere_chart_inverse;
use crate::objects::{CoHyperplane, CoSphereE, HPoint, Horosphere};
use crate::theorems::{casey_matrix, penner_matrix, ptolemy_matrix, MAX_SIGN_SEARCH};
use nalgebra::DMatrix;
use serde::Serialize;
use std::collections::BTreeMap;
use std::f64::consts::{PI, SQRT_2};
use std::fmt;
use std::str::FromStr;

/// 64-bit generator: SplitMix64 seeding followed by xorshift64*.
///
/// ```text
/// seed:   z = seed + 0x9E3779B97F4A7C15
///         z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///         z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///         state = z ^ (z >> 31)            (replaced by 0x9E3779B97F4A7C15 if 0)
/// next:   x ^= x >> 12; x ^= x << 25; x ^= x >> 27
///         return x * 0x2545F4914F6CDD1D    (all arithmetic wrapping mod 2⁶⁴)
/// uniform: (next >> 11) * 2⁻⁵³             in [0, 1)
/// normal:  √(−2 ln(1 − u₁)) · cos(2π u₂)   one Box–Muller draw per two uniforms
/// ```
#[derive(Debug, Clone)]
pub struct Rng {
    state: u64,
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        let mut z = seed.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^= z >> 31;
        Self {
            state: if z == 0 { 0x9E37_79B9_7F4A_7C15 } else { z },
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.state = x;
        x.wrapping_mul(0x2545_F491_4F6C_DD1D)
    }

    /// Uniform in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    pub fn normal(&mut self) -> f64 {
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        (-2.0 * u1.ln()).sqrt() * (2.0 * PI * u2).cos()
    }

    pub fn sign(&mut self) -> f64 {
        if self.next_u64() >> 63 == 1 {
            -1.0
        } else {
            1.0
        }
    }

    pub fn normal_vec(&mut self, n: usize) -> Vec<f64> {
        (0..n).map(|_| self.normal()).collect()
    }

    /// Uniform direction on the unit sphere of ℝⁿ.
    pub fn unit_vec(&mut self, n: usize) -> Vec<f64> {
        loop {
            let g = self.normal_vec(n);
            let len = g.iter().map(|x| x * x).sum::<f64>().sqrt();
            if len > 1e-6 {
                return g.iter().map(|x| x / len).collect();
            }
        }
    }
}

/// Configuration classes that can be generated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GenKind {
    PointsOnHorosphere,
    PointsOnHypersphere,
    PointsOnHyperplane,
    PointsOnEquidistant,
    HorospheresOnHyperplaneBoundary,
    HyperplanesTangentAtInfinity,
    HyperplanesCommonIdealPoint,
    HyperplanesOrthEqual,
    GenericPoints,
    GenericHorospheres,
    GenericHyperplanes,
    SpheresTangentToCircle,
    SpheresThroughPoint,
}

impl GenKind {
    pub const ALL: [GenKind; 13] = [
        GenKind::PointsOnHorosphere,
        GenKind::PointsOnHypersphere,
        GenKind::PointsOnHyperplane,
        GenKind::PointsOnEquidistant,
        GenKind::HorospheresOnHyperplaneBoundary,
        GenKind::HyperplanesTangentAtInfinity,
        GenKind::HyperplanesCommonIdealPoint,
        GenKind::HyperplanesOrthEqual,
        GenKind::GenericPoints,
        GenKind::GenericHorospheres,
        GenKind::GenericHyperplanes,
        GenKind::SpheresTangentToCircle,
        GenKind::SpheresThroughPoint,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GenKind::PointsOnHorosphere => "points_on_horosphere",
            GenKind::PointsOnHypersphere => "points_on_hypersphere",
            GenKind::PointsOnHyperplane => "points_on_hyperplane",
            GenKind::PointsOnEquidistant => "points_on_equidistant",
            GenKind::HorospheresOnHyperplaneBoundary => "horospheres_on_hyperplane_boundary",
            GenKind::HyperplanesTangentAtInfinity => "hyperplanes_tangent_at_infinity",
            GenKind::HyperplanesCommonIdealPoint => "hyperplanes_common_ideal_point",
            GenKind::HyperplanesOrthEqual => "hyperplanes_orth_equal",
            GenKind::GenericPoints => "generic_points",
            GenKind::GenericHorospheres => "generic_horospheres",
            GenKind::GenericHyperplanes => "generic_hyperplanes",
            GenKind::SpheresTangentToCircle => "spheres_tangent_to_circle",
            GenKind::SpheresThroughPoint => "spheres_through_point",
        }
    }

    /// Whether the generated family satisfies a theorem's hypothesis.
    pub fn is_degenerate_class(self) -> bool {
        !matches!(
            self,
            GenKind::GenericPoints | GenKind::GenericHorospheres | GenKind::GenericHyperplanes
        )
    }

    /// Number of objects the matching theorem expects in `𝓗ⁿ`.
    pub fn default_count(self, n: usize) -> usize {
        match self {
            GenKind::HorospheresOnHyperplaneBoundary
            | GenKind::GenericHorospheres
            | GenKind::HyperplanesTangentAtInfinity
            | GenKind::HyperplanesCommonIdealPoint
            | GenKind::HyperplanesOrthEqual
            | GenKind::GenericHyperplanes => n + 1,
            _ => n + 2,
        }
    }

    fn params(self) -> &'static [&'static str] {
        match self {
            GenKind::PointsOnHypersphere | GenKind::SpheresTangentToCircle => &["radius"],
            GenKind::PointsOnEquidistant => &["offset"],
            GenKind::HyperplanesOrthEqual => &["lambda"],
            _ => &[],
        }
    }
}

impl fmt::Display for GenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GenKind {
    type Err = GeomError;
    fn from_str(s: &str) -> Result<Self> {
        GenKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| GeomError::InfeasibleParams(format!("unknown generator kind '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenSpec {
    pub kind: GenKind,
    /// Hyperbolic dimension (the Euclidean dimension for sphere kinds).
    pub n: usize,
    /// Defaults to [`GenKind::default_count`].
    pub count: Option<usize>,
    pub seed: u64,
    pub params: BTreeMap<String, f64>,
}

impl GenSpec {
    pub fn new(kind: GenKind, n: usize, seed: u64) -> Self {
        Self {
            kind,
            n,
            count: None,
            seed,
            params: BTreeMap::new(),
        }
    }

    pub fn with_count(mut self, count: usize) -> Self {
        self.count = Some(count);
        self
    }

    pub fn with_param(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }

    pub fn count(&self) -> usize {
        self.count.unwrap_or_else(|| self.kind.default_count(self.n))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", content = "objects", rename_all = "snake_case")]
pub enum Configuration {
    Points(Vec<HPoint>),
    Horospheres(Vec<Horosphere>),
    Hyperplanes(Vec<CoHyperplane>),
    SpheresE(Vec<CoSphereE>),
}

impl Configuration {
    pub fn len(&self) -> usize {
        match self {
            Configuration::Points(v) => v.len(),
            Configuration::Horospheres(v) => v.len(),
            Configuration::Hyperplanes(v) => v.len(),
            Configuration::SpheresE(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// The data a configuration was built from.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroundTruth {
    Horosphere { rep: Vec<f64> },
    Hypersphere { centre: Vec<f64>, radius: f64 },
    Hyperplane { normal: Vec<f64> },
    Equidistant { normal: Vec<f64>, offset: f64 },
    BoundaryHyperplane { normal: Vec<f64> },
    TangentAtInfinity { v: Vec<f64> },
    CommonIdealPoint { w: Vec<f64> },
    OrthogonalEquallyInclined { u: Vec<f64>, v: Vec<f64>, lambda: f64 },
    TangentSphere { centre: Vec<f64>, radius: f64 },
    CommonPoint { point: Vec<f64> },
    Generic,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Generated {
    pub config: Configuration,
    pub truth: GroundTruth,
}

/// Ratio below which a generic sample is rejected.
const GENERIC_MARGIN: f64 = 1e-5;
const MAX_TRIES: usize = 100;

fn lv(v: Vec<f64>) -> LorentzVector {
    LorentzVector::from_vec(v)
}

fn axpy(a: f64, x: &[f64], y: &[f64]) -> Vec<f64> {
    x.iter().zip(y).map(|(xi, yi)| a * xi + yi).collect()
}

fn unit(v: &[f64]) -> Vec<f64> {
    let q = inner_slices(v, v).abs().sqrt();
    v.iter().map(|x| x / q).collect()
}

fn random_point(rng: &mut Rng, n: usize, spread: f64) -> Vec<f64> {
    let x: Vec<f64> = rng.normal_vec(n).iter().map(|v| v * spread).collect();
    let t = (1.0 + x.iter().map(|v| v * v).sum::<f64>()).sqrt();
    let mut c = x;
    c.push(t);
    c
}

/// Unit spacelike vector orthogonal to the unit timelike `p`.
fn tangent_at(rng: &mut Rng, p: &[f64]) -> Vec<f64> {
    loop {
        let g = rng.normal_vec(p.len());
        let e = axpy(inner_slices(&g, p), p, &g);
        if inner_slices(&e, &e) > 1e-6 {
            return unit(&e);
        }
    }
}

/// Lorentz-orthonormal spacelike vectors completing `fixed` (which must
/// contain a timelike vector), chosen greedily from the standard basis.
fn complete_frame(fixed: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let len = fixed[0].len();
    let mut frame: Vec<Vec<f64>> = fixed.to_vec();
    let mut out = Vec::new();
    while frame.len() < len {
        let best = (0..len)
            .map(|k| {
                let mut e = vec![0.0; len];
                e[k] = 1.0;
                for f in &frame {
                    e = axpy(-inner_slices(&e, f) / inner_slices(f, f), f, &e);
                }
                e
            })
            .max_by(|a, b| inner_slices(a, a).total_cmp(&inner_slices(b, b)))
            .expect("nonempty");
        let e = unit(&best);
        frame.push(e.clone());
        out.push(e);
    }
    out
}

fn combine(coeffs: &[f64], vecs: &[Vec<f64>]) -> Vec<f64> {
    let mut out = vec![0.0; vecs[0].len()];
    for (c, v) in coeffs.iter().zip(vecs) {
        out.iter_mut().zip(v).for_each(|(o, x)| *o += c * x);
    }
    out
}

fn param(spec: &GenSpec, key: &str, rng: &mut Rng, lo: f64, hi: f64) -> f64 {
    // Draw unconditionally so the stream does not depend on which params are set.
    let drawn = rng.range(lo, hi);
    spec.params.get(key).copied().unwrap_or(drawn)
}

fn validate(spec: &GenSpec) -> Result<()> {
    if spec.n < 2 {
        return Err(GeomError::InfeasibleParams(format!("n must be at least 2, got {}", spec.n)));
    }
    if spec.count() < 1 {
        return Err(GeomError::InfeasibleParams("count must be at least 1".into()));
    }
    let allowed = spec.kind.params();
    for (k, v) in &spec.params {
        if !allowed.contains(&k.as_str()) {
            return Err(GeomError::InfeasibleParams(format!(
                "parameter '{k}' is not used by {}",
                spec.kind
            )));
        }
        if !v.is_finite() {
            return Err(GeomError::InfeasibleParams(format!("parameter '{k}' must be finite")));
        }
    }
    let positive = |key: &str| match spec.params.get(key) {
        Some(&v) if v <= 0.0 => Err(GeomError::InfeasibleParams(format!("{key} must be positive"))),
        _ => Ok(()),
    };
    positive("radius")?;
    if let Some(&l) = spec.params.get("lambda") {
        if !(0.0..1.0).contains(&l) {
            return Err(GeomError::InfeasibleParams(format!(
                "equal inclination needs 0 ≤ lambda < 1, got {l}"
            )));
        }
    }
    if spec.params.get("offset") == Some(&0.0) {
        return Err(GeomError::InfeasibleParams("equidistant offset must be nonzero".into()));
    }
    Ok(())
}

pub fn generate(spec: &GenSpec) -> Result<Generated> {
    validate(spec)?;
    let mut rng = Rng::new(spec.seed);
    let n = spec.n;
    let m = spec.count();
    let rng = &mut rng;
    Ok(match spec.kind {
        GenKind::PointsOnHorosphere => {
            let scale = (0.5 * rng.normal()).exp();
            let h = Horosphere::from_ideal(&rng.unit_vec(n), scale)?;
            let ps = (0..m)
                .map(|_| horosphere_chart_inverse(&h, &rng.normal_vec(n - 1)))
                .collect::<Result<_>>()?;
            Generated {
                truth: GroundTruth::Horosphere { rep: h.rep().coords().to_vec() },
                config: Configuration::Points(ps),
            }
        }
        GenKind::PointsOnHypersphere => {
            let c = random_point(rng, n, 0.5);
            let r = param(spec, "radius", rng, 0.3, 1.5);
            let ps = (0..m)
                .map(|_| {
                    let e = tangent_at(rng, &c);
                    HPoint::new(lv(axpy(r.sinh(), &e, &c.iter().map(|x| x * r.cosh()).collect::<Vec<_>>())))
                })
                .collect::<Result<_>>()?;
            Generated {
                truth: GroundTruth::Hypersphere { centre: c, radius: r },
                config: Configuration::Points(ps),
            }
        }
        GenKind::PointsOnHyperplane | GenKind::PointsOnEquidistant => {
            let p0 = random_point(rng, n, 0.5);
            let w = tangent_at(rng, &p0);
            let d = if spec.kind == GenKind::PointsOnEquidistant {
                let drawn = rng.sign() * rng.range(0.2, 1.0);
                spec.params.get("offset").copied().unwrap_or(drawn)
            } else {
                0.0
            };
            let s = d.asinh();
            let ps = (0..m)
                .map(|_| {
                    let x = random_point(rng, n, 1.0);
                    let y = unit(&axpy(-inner_slices(&x, &w), &w, &x));
                    let z: Vec<f64> = y.iter().zip(&w).map(|(a, b)| s.cosh() * a + s.sinh() * b).collect();
                    HPoint::new(lv(z))
                })
                .collect::<Result<_>>()?;
            Generated {
                truth: if spec.kind == GenKind::PointsOnEquidistant {
                    GroundTruth::Equidistant { normal: w, offset: d }
                } else {
                    GroundTruth::Hyperplane { normal: w }
                },
                config: Configuration::Points(ps),
            }
        }
        GenKind::HorospheresOnHyperplaneBoundary => {
            let p0 = random_point(rng, n, 0.5);
            let w = tangent_at(rng, &p0);
            let frame = complete_frame(&[p0.clone(), w.clone()]);
            let hs = (0..m)
                .map(|_| {
                    let d = rng.unit_vec(n - 1);
                    let scale = (0.5 * rng.normal()).exp();
                    let l = combine(&d, &frame);
                    Horosphere::new(lv(p0.iter().zip(&l).map(|(a, b)| scale * (a + b)).collect()))
                })
                .collect::<Result<_>>()?;
            Generated {
                truth: GroundTruth::BoundaryHyperplane { normal: w },
                config: Configuration::Horospheres(hs),
            }
        }
        GenKind::HyperplanesTangentAtInfinity => {
            let p0 = random_point(rng, n, 0.5);
            let v = tangent_at(rng, &p0);
            let frame = complete_frame(&[p0.clone(), v.clone()]);
            let hps = (0..m)
                .map(|_| {
                    let d = rng.unit_vec(n - 1);
                    let scale = (0.5 * rng.normal()).exp();
                    let sign = rng.sign();
                    let z = axpy(1.0, &combine(&d, &frame), &p0);
                    let nrm: Vec<f64> = v.iter().zip(&z).map(|(a, b)| sign * (a + scale * b)).collect();
                    CoHyperplane::new(lv(nrm))
                })
                .collect::<Result<_>>()?;
            Generated {
                truth: GroundTruth::TangentAtInfinity { v },
                config: Configuration::Hyperplanes(hps),
            }
        }
        GenKind::HyperplanesCommonIdealPoint => {
            let d = rng.unit_vec(n);
            let mut w = d.clone();
            w.push(1.0);
            // Null partner with ⟨m, w⟩ = −1.
            let mut mm: Vec<f64> = d.iter().map(|x| -x / 2.0).collect();
            mm.push(0.5);
            let hps = (0..m)
                .map(|_| loop {
                    let g = rng.normal_vec(n + 1);
                    let nv = axpy(inner_slices(&g, &w), &mm, &g);
                    let sign = rng.sign();
                    if inner_slices(&nv, &nv) > 1e-4 {
                        break CoHyperplane::new(lv(unit(&nv).iter().map(|x| sign * x).collect()));
                    }
                })
                .collect::<Result<_>>()?;
            Generated {
                truth: GroundTruth::CommonIdealPoint { w },
                config: Configuration::Hyperplanes(hps),
            }
        }
        GenKind::HyperplanesOrthEqual => {
            let lambda = param(spec, "lambda", rng, 0.1, 0.9);
            let f = random_point(rng, n, 0.5);
            let u = tangent_at(rng, &f);
            let frame = complete_frame(&[f.clone(), u.clone()]);
            let k = (1.0 + lambda * lambda).sqrt();
            let hps = (0..m)
                .map(|_| {
                    let e = combine(&rng.unit_vec(n - 1), &frame);
                    let s = rng.sign();
                    let nrm = axpy(-s * lambda, &f, &e.iter().map(|x| k * x).collect::<Vec<_>>());
                    CoHyperplane::new(lv(nrm))
                })
                .collect::<Result<_>>()?;
            let v = axpy(SQRT_2, &u, &f);
            Generated {
                truth: GroundTruth::OrthogonalEquallyInclined { u, v, lambda },
                config: Configuration::Hyperplanes(hps),
            }
        }
        GenKind::GenericPoints => rejection(rng, |rng| {
            let ps: Vec<HPoint> = (0..m)
                .map(|_| HPoint::new(lv(random_point(rng, n, 1.0))))
                .collect::<Result<_>>()?;
            Ok((ratio(&ptolemy_matrix(&ps)), Configuration::Points(ps)))
        })?,
        GenKind::GenericHorospheres => rejection(rng, |rng| {
            let hs: Vec<Horosphere> = (0..m)
                .map(|_| {
                    let scale = (0.5 * rng.normal()).exp();
                    Horosphere::from_ideal(&rng.unit_vec(n), scale)
                })
                .collect::<Result<_>>()?;
            Ok((ratio(&penner_matrix(&hs)), Configuration::Horospheres(hs)))
        })?,
        GenKind::GenericHyperplanes => {
            if m > MAX_SIGN_SEARCH {
                return Err(GeomError::InfeasibleParams(format!(
                    "generic hyperplanes are limited to {MAX_SIGN_SEARCH} objects"
                )));
            }
            rejection(rng, |rng| {
                let hps: Vec<CoHyperplane> = (0..m)
                    .map(|_| {
                        let p = random_point(rng, n, 0.7);
                        CoHyperplane::new(lv(tangent_at(rng, &p)))
                    })
                    .collect::<Result<_>>()?;
                Ok((min_signed_ratio(&hps), Configuration::Hyperplanes(hps)))
            })?
        }
        GenKind::SpheresTangentToCircle => {
            let c = rng.normal_vec(n).iter().map(|x| 0.5 * x).collect::<Vec<_>>();
            let big = param(spec, "radius", rng, 1.0, 2.0);
            let ss = (0..m)
                .map(|_| {
                    let r = big * rng.range(0.1, 0.45);
                    let d = rng.unit_vec(n);
                    let eps = rng.sign() as i8;
                    CoSphereE::new(axpy(big - r, &d, &c), r, eps)
                })
                .collect::<Result<_>>()?;
            Generated {
                truth: GroundTruth::TangentSphere { centre: c, radius: big },
                config: Configuration::SpheresE(ss),
            }
        }
        GenKind::SpheresThroughPoint => {
            let p = rng.normal_vec(n).iter().map(|x| 0.5 * x).collect::<Vec<_>>();
            let ss = (0..m)
                .map(|_| {
                    let r = rng.range(0.2, 1.5);
                    let d = rng.unit_vec(n);
                    let eps = rng.sign() as i8;
                    CoSphereE::new(axpy(r, &d, &p), r, eps)
                })
                .collect::<Result<_>>()?;
            Generated {
                truth: GroundTruth::CommonPoint { point: p },
                config: Configuration::SpheresE(ss),
            }
        }
    })
}

fn ratio(m: &DMatrix<f64>) -> f64 {
    match degeneracy(m, 1.0) {
        Ok(v) if v.sigma_max > 0.0 => v.sigma_min / v.sigma_max,
        _ => 0.0,
    }
}

fn min_signed_ratio(hps: &[CoHyperplane]) -> f64 {
    let m = hps.len();
    (0..1_u32 << (m - 1))
        .map(|bits| {
            let normals: Vec<LorentzVector> = hps
                .iter()
                .enumerate()
                .map(|(k, h)| {
                    if k > 0 && (bits >> (k - 1)) & 1 == 1 {
                        -h.normal().clone()
                    } else {
                        h.normal().clone()
                    }
                })
                .collect();
            ratio(&casey_matrix(&normals))
        })
        .fold(f64::INFINITY, f64::min)
}

fn rejection(
    rng: &mut Rng,
    mut sample: impl FnMut(&mut Rng) -> Result<(f64, Configuration)>,
) -> Result<Generated> {
    for _ in 0..MAX_TRIES {
        let (r, config) = sample(rng)?;
        if r >= GENERIC_MARGIN {
            return Ok(Generated { config, truth: GroundTruth::Generic });
        }
    }
    Err(GeomError::RejectionLimit(MAX_TRIES))
}

/// Adds seeded Gaussian noise of the given magnitude and re-projects each
/// object onto its own type (points onto 𝓗ⁿ, normals to unit length, …).
pub fn perturb(config: &Configuration, magnitude: f64, seed: u64) -> Configuration {
    if magnitude == 0.0 {
        return config.clone();
    }
    let mag = magnitude.abs();
    let mut rng = Rng::new(seed);
    let rng = &mut rng;
    let jitter = |rng: &mut Rng, x: &[f64], k: f64| -> Vec<f64> {
        x.iter().map(|v| v + k * mag * rng.normal()).collect()
    };
    match config {
        Configuration::Points(ps) => Configuration::Points(
            ps.iter()
                .map(|p| {
                    let x = jitter(rng, p.rep().spatial(), 1.0);
                    HPoint::lift(&x).expect("finite coordinates")
                })
                .collect(),
        ),
        Configuration::Horospheres(hs) => Configuration::Horospheres(
            hs.iter()
                .map(|h| {
                    let a = jitter(rng, h.rep().spatial(), h.rep().time());
                    let t = a.iter().map(|x| x * x).sum::<f64>().sqrt();
                    Horosphere::from_ideal(&a, t).unwrap_or_else(|_| h.clone())
                })
                .collect(),
        ),
        Configuration::Hyperplanes(hps) => Configuration::Hyperplanes(
            hps.iter()
                .map(|h| loop {
                    let v = jitter(rng, h.normal().coords(), h.normal().max_abs());
                    if let Ok(out) = CoHyperplane::from_spacelike(&lv(v)) {
                        break out;
                    }
                })
                .collect(),
        ),
        Configuration::SpheresE(ss) => Configuration::SpheresE(
            ss.iter()
                .map(|s| CoSphereE {
                    centre: jitter(rng, &s.centre, 1.0),
                    radius: (s.radius * (1.0 + mag * rng.normal())).abs(),
                    eps: s.eps,
                })
                .collect(),
        ),
    }
}
