use super::report::{render_value, verdict_value, Report};
use super::scene::{coords_value, Objects, Scene};
use super::{CliError, GenArgs, Outcome, RelationArgs, RunArgs, Theorem};
use super::{EXIT_DEGENERATE, EXIT_ERROR, EXIT_NON_DEGENERATE};
use crate::generators::{generate as gen, GenKind, GenSpec};
use crate::models::{horosphere_to_ball, hyperboloid_to_ball, hyperplane_to_ball};
use crate::objects::{half_dist_sinh_sq, lambda_length, tangent_length, CoHyperplane};
use crate::theorems::{
    casey_test, corollary_d_test, fit_umbilical, four_term_relation, penner_test, ptolemy1_test,
    ptolemy2_classify, ptolemy2_test, Alternative, CaseyCase, SurfaceKind, UmbilicalSurface,
};
use serde_json::{json, Map, Value};

type Res<T> = Result<T, CliError>;

fn exit_for(degenerate: bool) -> i32 {
    if degenerate {
        EXIT_DEGENERATE
    } else {
        EXIT_NON_DEGENERATE
    }
}

/// Parses the scene and records the fields every scene report carries.
fn load(text: &str, r: &mut Report) -> Res<(Scene, Objects)> {
    let scene = Scene::parse(text)?;
    r.set("input_digest", Value::from(scene.digest()));
    if let Some(seed) = scene.seed() {
        r.set("seed", Value::from(seed));
    }
    let objects = scene.objects()?;
    Ok((scene, objects))
}

fn finish(command: &str, mut r: Report, result: Res<i32>) -> Report {
    match result {
        Ok(code) => {
            r.code = code;
            r
        }
        Err(e) => {
            let err = Report::error(command, &e);
            r.set("error", err.value["error"].clone());
            r.code = EXIT_ERROR;
            r
        }
    }
}

fn expect_only(scene: &Scene, theorem: &str, allowed: &[&str]) -> Res<()> {
    match scene.objects.iter().find(|o| !allowed.contains(&o.type_name())) {
        Some(o) => Err(CliError::Schema(format!(
            "{theorem} expects {} objects, found {}",
            allowed.join("/"),
            o.type_name()
        ))),
        None => Ok(()),
    }
}

fn hyperplane_case(name: &str, h: &CoHyperplane, residual: Option<f64>) -> Value {
    json!({ "name": name, "witnesses": [coords_value(h.normal())], "residual": residual })
}

fn casey_case_value(case: &CaseyCase, residual: Option<f64>) -> Value {
    let witnesses = match case {
        CaseyCase::TangentHyperplaneAtInfinity { v } => vec![coords_value(v)],
        CaseyCase::CommonIdealPoint { w } => vec![coords_value(w)],
        CaseyCase::OrthogonalAndEquallyInclined { u, v, .. } => vec![coords_value(u), coords_value(v)],
    };
    let mut m = Map::new();
    m.insert("name".into(), Value::from(case.name()));
    m.insert("witnesses".into(), Value::from(witnesses));
    m.insert("residual".into(), json!(residual));
    if let CaseyCase::OrthogonalAndEquallyInclined { lambda, .. } = case {
        m.insert("lambda".into(), Value::from(*lambda));
    }
    Value::Object(m)
}

fn disk_value(objects: &Objects, witness: Option<&CoHyperplane>) -> Value {
    let mut items: Vec<Value> = Vec::new();
    for p in &objects.points {
        items.push(json!({ "type": "point", "coords": hyperboloid_to_ball(p).0 }));
    }
    for h in &objects.horospheres {
        items.push(json!({ "type": "horosphere", "ball": horosphere_to_ball(h) }));
    }
    for h in &objects.hyperplanes {
        items.push(json!({ "type": "hyperplane", "ball": hyperplane_to_ball(h) }));
    }
    let mut m = Map::new();
    m.insert("objects".into(), Value::from(items));
    if let Some(w) = witness {
        m.insert("witness".into(), json!(hyperplane_to_ball(w)));
    }
    Value::Object(m)
}

fn surface_kind_name(k: SurfaceKind) -> &'static str {
    match k {
        SurfaceKind::Horosphere => "horosphere",
        SurfaceKind::Hypersphere => "hypersphere",
        SurfaceKind::Hyperplane => "hyperplane",
        SurfaceKind::EquidistantBranch => "equidistant_branch",
    }
}

fn search_default(a: &RunArgs) -> bool {
    a.search_signs.unwrap_or(matches!(a.theorem, Theorem::Casey | Theorem::CaseyE))
}

fn run_theorem(text: &str, a: &RunArgs, classify: bool, r: &mut Report) -> Res<i32> {
    r.set("theorem", Value::from(a.theorem.name()));
    r.set("tol", Value::from(a.tol));
    if classify && matches!(a.theorem, Theorem::Penner | Theorem::Ptolemy1) {
        return Err(CliError::Usage(format!(
            "classify supports ptolemy2, casey and casey-e, not {}",
            a.theorem.name()
        )));
    }
    let (scene, objects) = load(text, r)?;
    let tol = a.tol;
    let mut disk_witness: Option<CoHyperplane> = None;
    let code = match a.theorem {
        Theorem::Penner => {
            expect_only(&scene, "penner", &["horosphere"])?;
            let res = penner_test(&objects.horospheres, tol)?;
            r.set("verdict", verdict_value(&res.verdict));
            if let Some(w) = &res.witness {
                let name = if res.same_centre { "same_centre" } else { "boundary_hyperplane" };
                r.set("case", hyperplane_case(name, w, res.witness_residual));
            }
            disk_witness = res.witness;
            exit_for(res.verdict.is_degenerate)
        }
        Theorem::Ptolemy1 => {
            expect_only(&scene, "ptolemy1", &["point", "horosphere", "hypersphere"])?;
            let surfaces = objects.horospheres.len() + objects.hyperspheres.len();
            let surface = match (objects.horospheres.first(), objects.hyperspheres.first()) {
                _ if surfaces > 1 => {
                    return Err(CliError::Schema("at most one surface object is allowed".into()))
                }
                (Some(h), _) => UmbilicalSurface::Horosphere(h.clone()),
                (_, Some(s)) => UmbilicalSurface::Hypersphere(s.clone()),
                _ => UmbilicalSurface::Datum(fit_umbilical(&objects.points, tol)?),
            };
            r.set("surface", json!({ "datum": coords_value(&surface.datum()) }));
            let res = ptolemy1_test(&objects.points, &surface, tol)?;
            r.set("verdict", verdict_value(&res.verdict));
            if let Some(w) = &res.witness {
                r.set("case", hyperplane_case("common_hyperplane", w, res.witness_residual));
            }
            disk_witness = res.witness;
            exit_for(res.verdict.is_degenerate)
        }
        Theorem::Ptolemy2 => {
            expect_only(&scene, "ptolemy2", &["point"])?;
            let verdict = ptolemy2_test(&objects.points, tol)?;
            r.set("verdict", verdict_value(&verdict));
            if classify && verdict.is_degenerate {
                let fit = ptolemy2_classify(&objects.points, tol)?;
                let mut m = Map::new();
                m.insert("name".into(), Value::from(surface_kind_name(fit.kind)));
                m.insert("witnesses".into(), json!([coords_value(&fit.datum)]));
                m.insert("offset".into(), Value::from(fit.offset));
                m.insert("residual".into(), Value::from(fit.residual));
                if let Some(radius) = fit.radius() {
                    m.insert("radius".into(), Value::from(radius));
                }
                r.set("case", Value::Object(m));
            }
            exit_for(verdict.is_degenerate)
        }
        Theorem::Casey => {
            expect_only(&scene, "casey", &["hyperplane"])?;
            let res = casey_test(&objects.hyperplanes, tol, search_default(a))?;
            r.set("verdict", verdict_value(&res.verdict));
            r.set("signs", json!(res.signs));
            if let Some(case) = &res.case {
                r.set("case", casey_case_value(case, res.witness_residual));
            }
            exit_for(res.verdict.is_degenerate)
        }
        Theorem::CaseyE => {
            expect_only(&scene, "casey-e", &["sphere_e"])?;
            let res = corollary_d_test(&objects.spheres, tol, search_default(a))?;
            r.set("verdict", verdict_value(&res.verdict));
            r.set("lifted_verdict", verdict_value(&res.lifted_verdict));
            r.set("signs", json!(res.signs));
            if let Some(case) = &res.case {
                let mut v = casey_case_value(case, res.witness_residual);
                v["euclidean"] = json!(res.euclidean);
                r.set("case", v);
            }
            exit_for(res.verdict.is_degenerate)
        }
    };
    if a.emit_disk {
        r.set("disk", disk_value(&objects, disk_witness.as_ref()));
    }
    Ok(code)
}

pub fn verify(text: &str, a: &RunArgs) -> Report {
    let mut r = Report::new("verify");
    let res = run_theorem(text, a, false, &mut r);
    finish("verify", r, res)
}

pub fn classify(text: &str, a: &RunArgs) -> Report {
    let mut r = Report::new("classify");
    let res = run_theorem(text, a, true, &mut r);
    finish("classify", r, res)
}

fn alternative_name(a: Alternative) -> &'static str {
    match a {
        Alternative::Alt12_34 => "Alt12_34",
        Alternative::Alt13_24 => "Alt13_24",
        Alternative::Alt14_23 => "Alt14_23",
        Alternative::None => "None",
    }
}

fn relation_inner(text: &str, a: &RelationArgs, r: &mut Report) -> Res<i32> {
    r.set("tol", Value::from(a.tol));
    let (scene, objects) = load(text, r)?;
    if scene.objects.len() != 4 {
        return Err(crate::error::GeomError::WrongCount { expected: 4, got: scene.objects.len() }.into());
    }
    let first = scene.objects[0].type_name();
    expect_only(&scene, "relation", &[first])?;
    let mut x = [[0.0; 4]; 4];
    let mode = match first {
        "horosphere" => {
            for i in 0..4 {
                for j in 0..4 {
                    if i != j {
                        x[i][j] = lambda_length(&objects.horospheres[i], &objects.horospheres[j]);
                    }
                }
            }
            "lambda"
        }
        "point" => {
            for i in 0..4 {
                for j in 0..4 {
                    if i != j {
                        x[i][j] = 2.0 * half_dist_sinh_sq(&objects.points[i], &objects.points[j]).sqrt();
                    }
                }
            }
            "chord"
        }
        "sphere_e" => {
            for i in 0..4 {
                for j in 0..4 {
                    if i != j {
                        x[i][j] = tangent_length(&objects.spheres[i], &objects.spheres[j])?;
                    }
                }
            }
            "tangent"
        }
        other => {
            return Err(CliError::Schema(format!("relation does not support {other} objects")));
        }
    };
    let rel = four_term_relation(&x, a.tol)?;
    r.set(
        "relation",
        json!({
            "mode": mode,
            "which": alternative_name(rel.which),
            "products": rel.products,
            "residual": rel.residual,
            "residuals": rel.residuals,
        }),
    );
    Ok(if rel.which == Alternative::None { EXIT_NON_DEGENERATE } else { EXIT_DEGENERATE })
}

pub fn relation(text: &str, a: &RelationArgs) -> Report {
    let mut r = Report::new("relation");
    let res = relation_inner(text, a, &mut r);
    finish("relation", r, res)
}

fn gen_spec(a: &GenArgs) -> Res<GenSpec> {
    let kind: GenKind = a.kind.parse()?;
    let mut spec = GenSpec::new(kind, a.n, a.seed);
    spec.count = a.count;
    for p in &a.params {
        let (k, v) = p
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("parameter '{p}' is not key=value")))?;
        let v: f64 = v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("parameter '{p}' has a non-numeric value")))?;
        spec.params.insert(k.trim().to_string(), v);
    }
    Ok(spec)
}

pub fn generate(a: &GenArgs) -> Outcome {
    let result = gen_spec(a).and_then(|spec| {
        let g = gen(&spec)?;
        let mut meta = Map::new();
        meta.insert(
            "generator".into(),
            json!({
                "kind": spec.kind.name(),
                "n": spec.n,
                "count": spec.count(),
                "seed": spec.seed,
                "params": spec.params,
            }),
        );
        meta.insert("truth".into(), json!(g.truth));
        Ok(Scene::from_generated(spec.n, &g, meta))
    });
    match result {
        Ok(scene) => Outcome {
            output: render_value(&serde_json::to_value(&scene).expect("scene serializes")),
            code: EXIT_DEGENERATE,
        },
        Err(e) => {
            let r = Report::error("generate", &e);
            Outcome { output: r.render(), code: r.code }
        }
    }
}
