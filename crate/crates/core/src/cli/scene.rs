//! Scene files: versioned JSON documents holding one family of objects.

use super::CliError;
use crate::generators::{Configuration, Generated};
use crate::lorentz::LorentzVector;
use crate::objects::{CoHyperplane, CoSphereE, HPoint, Horosphere, Hypersphere};
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

pub const SCHEMA: &str = "lorentz-gram/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum SceneObject {
    Point { coords: Vec<f64> },
    Horosphere { rep: Vec<f64> },
    Hyperplane { normal: Vec<f64> },
    SphereE { centre: Vec<f64>, radius: f64, eps: i8 },
    /// Only used as the surface of a hyperplane-section test.
    Hypersphere { centre: Vec<f64>, radius: f64 },
}

impl SceneObject {
    pub fn type_name(&self) -> &'static str {
        match self {
            SceneObject::Point { .. } => "point",
            SceneObject::Horosphere { .. } => "horosphere",
            SceneObject::Hyperplane { .. } => "hyperplane",
            SceneObject::SphereE { .. } => "sphere_e",
            SceneObject::Hypersphere { .. } => "hypersphere",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scene {
    pub schema: String,
    pub dimension: usize,
    pub objects: Vec<SceneObject>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<Map<String, Value>>,
}

/// Typed contents of a scene.
#[derive(Debug, Clone, PartialEq)]
pub struct Objects {
    pub points: Vec<HPoint>,
    pub horospheres: Vec<Horosphere>,
    pub hyperplanes: Vec<CoHyperplane>,
    pub spheres: Vec<CoSphereE>,
    pub hyperspheres: Vec<Hypersphere>,
}

fn schema_err(msg: impl Into<String>) -> CliError {
    CliError::Schema(msg.into())
}

impl Scene {
    /// Parses and validates a scene document.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let scene: Scene = serde_json::from_str(text).map_err(|e| schema_err(e.to_string()))?;
        scene.validate()?;
        Ok(scene)
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.schema != SCHEMA {
            return Err(schema_err(format!(
                "unsupported schema '{}', expected '{SCHEMA}'",
                self.schema
            )));
        }
        if self.dimension < 2 {
            return Err(schema_err("dimension must be at least 2"));
        }
        let n = self.dimension;
        for (i, o) in self.objects.iter().enumerate() {
            let (len, want) = match o {
                SceneObject::Point { coords } => (coords.len(), n + 1),
                SceneObject::Horosphere { rep } => (rep.len(), n + 1),
                SceneObject::Hyperplane { normal } => (normal.len(), n + 1),
                SceneObject::Hypersphere { centre, .. } => (centre.len(), n + 1),
                SceneObject::SphereE { centre, .. } => (centre.len(), n),
            };
            if len != want {
                return Err(schema_err(format!(
                    "object {i} ({}) has {len} coordinates, expected {want}",
                    o.type_name()
                )));
            }
        }
        Ok(())
    }

    /// SHA-256 of the compact JSON serialization with sorted keys.
    pub fn digest(&self) -> String {
        let value = serde_json::to_value(self).expect("scene serializes");
        let canonical = serde_json::to_string(&value).expect("value serializes");
        hex::encode(Sha256::digest(canonical.as_bytes()))
    }

    pub fn objects(&self) -> Result<Objects, CliError> {
        let mut out = Objects {
            points: Vec::new(),
            horospheres: Vec::new(),
            hyperplanes: Vec::new(),
            spheres: Vec::new(),
            hyperspheres: Vec::new(),
        };
        for o in &self.objects {
            match o {
                SceneObject::Point { coords } => out.points.push(HPoint::from_coords(coords.clone())?),
                SceneObject::Horosphere { rep } => {
                    out.horospheres.push(Horosphere::from_coords(rep.clone())?)
                }
                SceneObject::Hyperplane { normal } => {
                    out.hyperplanes.push(CoHyperplane::from_coords(normal.clone())?)
                }
                SceneObject::SphereE { centre, radius, eps } => {
                    out.spheres.push(CoSphereE::new(centre.clone(), *radius, *eps)?)
                }
                SceneObject::Hypersphere { centre, radius } => out.hyperspheres.push(
                    Hypersphere::new(HPoint::from_coords(centre.clone())?, *radius)?,
                ),
            }
        }
        Ok(out)
    }

    /// Seed recorded by the generator, if any.
    pub fn seed(&self) -> Option<u64> {
        self.meta
            .as_ref()?
            .get("generator")?
            .get("seed")?
            .as_u64()
    }

    pub fn from_generated(n: usize, g: &Generated, meta: Map<String, Value>) -> Self {
        let objects = match &g.config {
            Configuration::Points(ps) => ps
                .iter()
                .map(|p| SceneObject::Point { coords: p.rep().coords().to_vec() })
                .collect(),
            Configuration::Horospheres(hs) => hs
                .iter()
                .map(|h| SceneObject::Horosphere { rep: h.rep().coords().to_vec() })
                .collect(),
            Configuration::Hyperplanes(hps) => hps
                .iter()
                .map(|h| SceneObject::Hyperplane { normal: h.normal().coords().to_vec() })
                .collect(),
            Configuration::SpheresE(ss) => ss
                .iter()
                .map(|s| SceneObject::SphereE {
                    centre: s.centre.clone(),
                    radius: s.radius,
                    eps: s.eps,
                })
                .collect(),
        };
        Scene {
            schema: SCHEMA.to_string(),
            dimension: n,
            objects,
            meta: Some(meta),
        }
    }
}

/// Coordinates of a vector as a JSON array.
pub fn coords_value(v: &LorentzVector) -> Value {
    serde_json::to_value(v.coords()).expect("finite floats")
}
