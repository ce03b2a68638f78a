use lorentz_gram::models::horosphere_chart_inverse;
use lorentz_gram::Horosphere;
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::process::Command;

fn run(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_lorentz-gram")).args(args).output().unwrap();
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)));
    (out.status.code().unwrap(), v)
}

fn scene_file(name: &str, scene: &Value) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("lorentz-gram-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string(scene).unwrap()).unwrap();
    path
}

fn generated(name: &str, args: &[&str]) -> PathBuf {
    let out = Command::new(env!("CARGO_BIN_EXE_lorentz-gram")).arg("generate").args(args).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    scene_file(name, &serde_json::from_slice(&out.stdout).unwrap())
}

fn circulant_scene() -> Value {
    let objects: Vec<Value> = [[0.0, 1.0, 0.0, 1.0], [0.0, 0.0, 1.0, 1.0], [0.0, -1.0, 0.0, 1.0], [0.0, 0.0, -1.0, 1.0]]
        .iter()
        .map(|r| json!({ "type": "horosphere", "rep": r }))
        .collect();
    json!({ "schema": "lorentz-gram/1", "dimension": 3, "objects": objects })
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn penner_circulant_scene_is_degenerate() {
    let f = scene_file("circulant.json", &circulant_scene());
    let (code, r) = run(&["verify", p(&f), "--theorem", "penner"]);
    assert_eq!(code, 0);
    assert_eq!(r["verdict"]["degenerate"], true);
    assert!(r["verdict"]["det"].as_f64().unwrap().abs() < 1e-9);
    assert_eq!(r["case"]["name"], "boundary_hyperplane");
    assert_eq!(r["theorem"], "penner");
    assert_eq!(r["input_digest"].as_str().unwrap().len(), 64);
}

#[test]
fn generic_points_are_not_degenerate() {
    let f = generated("generic.json", &["--kind", "generic_points", "--n", "2", "--seed", "7"]);
    let (code, r) = run(&["verify", p(&f), "--theorem", "ptolemy2"]);
    assert_eq!(code, 1);
    assert_eq!(r["verdict"]["degenerate"], false);
    let (code, _) = run(&["classify", p(&f), "--theorem", "ptolemy2"]);
    assert_eq!(code, 1);
}

#[test]
fn missing_dimension_is_a_schema_violation() {
    let f = scene_file("nodim.json", &json!({ "schema": "lorentz-gram/1", "objects": [] }));
    let (code, r) = run(&["verify", p(&f), "--theorem", "penner"]);
    assert_eq!(code, 2);
    assert_eq!(r["error"]["kind"], "SchemaViolation");
}

#[test]
fn count_mismatch_is_an_error() {
    let mut s = circulant_scene();
    s["objects"].as_array_mut().unwrap().pop();
    s["dimension"] = json!(3);
    let f = scene_file("short.json", &s);
    let (code, r) = run(&["verify", p(&f), "--theorem", "penner"]);
    assert_eq!(code, 2);
    assert!(r["error"]["kind"].is_string());
}

#[test]
fn hypersphere_scene_classifies() {
    let f = generated("hs.json", &["--kind", "points_on_hypersphere", "--n", "2", "--seed", "7"]);
    let (code, _) = run(&["verify", p(&f), "--theorem", "ptolemy2"]);
    assert_eq!(code, 0);
    let (code, r) = run(&["classify", p(&f), "--theorem", "ptolemy2"]);
    assert_eq!(code, 0);
    assert_eq!(r["case"]["name"], "hypersphere");
    let scene: Value = serde_json::from_str(&std::fs::read_to_string(&f).unwrap()).unwrap();
    let truth = &scene["meta"]["truth"];
    let radius = r["case"]["radius"].as_f64().unwrap();
    assert!((radius - truth["radius"].as_f64().unwrap()).abs() < 1e-9);
    let centre = r["case"]["witnesses"][0].as_array().unwrap();
    for (a, b) in centre.iter().zip(truth["centre"].as_array().unwrap()) {
        assert!((a.as_f64().unwrap() - b.as_f64().unwrap()).abs() < 1e-9);
    }
}

#[test]
fn common_ideal_point_scene_classifies() {
    let f = generated("cip.json", &["--kind", "hyperplanes_common_ideal_point", "--n", "3", "--seed", "4"]);
    let (code, r) = run(&["classify", p(&f), "--theorem", "casey"]);
    assert_eq!(code, 0);
    assert_eq!(r["case"]["name"], "common_ideal_point");
    assert!(r["case"]["residual"].as_f64().unwrap() <= 1e-7);
}

#[test]
fn generate_is_byte_deterministic() {
    let args = ["generate", "--kind", "points_on_hypersphere", "--n", "2", "--seed", "7"];
    let a = Command::new(env!("CARGO_BIN_EXE_lorentz-gram")).args(args).output().unwrap();
    let b = Command::new(env!("CARGO_BIN_EXE_lorentz-gram")).args(args).output().unwrap();
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn infeasible_lambda_is_rejected() {
    let (code, r) = run(&["generate", "--kind", "hyperplanes_orth_equal", "--n", "2", "--params", "lambda=1.5"]);
    assert_eq!(code, 2);
    assert_eq!(r["error"]["kind"], "InfeasibleParams");
}

#[test]
fn relation_on_circulant_horospheres() {
    let f = scene_file("rel-h.json", &circulant_scene());
    let (code, r) = run(&["relation", p(&f)]);
    assert_eq!(code, 0);
    assert_eq!(r["relation"]["mode"], "lambda");
    assert_eq!(r["relation"]["which"], "Alt13_24");
}

#[test]
fn relation_on_square_in_horosphere_chart() {
    let h = Horosphere::from_coords(vec![0.3, -0.4, 0.2, (0.29_f64).sqrt()]).unwrap();
    let objects: Vec<Value> = [[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]]
        .iter()
        .map(|z| json!({ "type": "point", "coords": horosphere_chart_inverse(&h, z).unwrap().rep().coords() }))
        .collect();
    let f = scene_file("rel-p.json", &json!({ "schema": "lorentz-gram/1", "dimension": 3, "objects": objects }));
    let (code, r) = run(&["relation", p(&f)]);
    assert_eq!(code, 0);
    assert_eq!(r["relation"]["mode"], "chord");
    assert_eq!(r["relation"]["which"], "Alt13_24");
    let products: Vec<f64> = r["relation"]["products"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
    // Side 2 sinh ½ϱ equals the chart side √2, diagonals equal 2.
    assert!((products[1] - 4.0).abs() < 1e-9);
}

#[test]
fn relation_on_tangent_circles() {
    let objects: Vec<Value> = [(0.2, 0.0_f64), (0.3, 80.0), (0.1, 170.0), (0.25, 260.0)]
        .iter()
        .map(|&(r, a)| {
            let t = a.to_radians();
            json!({ "type": "sphere_e", "centre": [(1.0 - r) * t.cos(), (1.0 - r) * t.sin()], "radius": r, "eps": 1 })
        })
        .collect();
    let f = scene_file("rel-s.json", &json!({ "schema": "lorentz-gram/1", "dimension": 2, "objects": objects }));
    let (code, r) = run(&["relation", p(&f)]);
    assert_eq!(code, 0);
    assert_eq!(r["relation"]["mode"], "tangent");
    assert_eq!(r["relation"]["which"], "Alt13_24");
}

#[test]
fn relation_rejects_mixed_objects() {
    let mut s = circulant_scene();
    s["objects"][3] = json!({ "type": "hyperplane", "normal": [1.0, 0.0, 0.0, 0.0] });
    let f = scene_file("rel-mixed.json", &s);
    let (code, r) = run(&["relation", p(&f)]);
    assert_eq!(code, 2);
    assert!(r["error"].is_object());
}

#[test]
fn classify_rejects_penner() {
    let f = scene_file("cls-penner.json", &circulant_scene());
    let (code, r) = run(&["classify", p(&f), "--theorem", "penner"]);
    assert_eq!(code, 2);
    assert_eq!(r["error"]["kind"], "UsageError");
}
