use lorentz_gram::generators::{generate, Configuration, GenKind, GenSpec, GroundTruth, Rng};
use lorentz_gram::lorentz::LorentzVector;
use lorentz_gram::models::{horosphere_from_ball, hyperplane_from_ball, BallHorosphere, BallHyperplane};
use lorentz_gram::objects::{distance, lambda_length};
use lorentz_gram::theorems::{casey_witness_check, CaseyCase};
use lorentz_gram::{HPoint, Horosphere};
use serde_json::Value;
use std::f64::consts::FRAC_1_SQRT_2;
use std::process::Command;

fn lv(v: &[f64]) -> LorentzVector {
    LorentzVector::new(v.to_vec()).unwrap()
}

fn bisect(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> f64 {
    let flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (f(mid) > 0.0) == (flo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn lambda_length_matches_signed_distance_along_common_geodesic() {
    let mut rng = Rng::new(33);
    for _ in 0..100 {
        let a = Horosphere::from_ideal(&rng.unit_vec(2), (0.7 * rng.normal()).exp()).unwrap();
        let b = Horosphere::from_ideal(&rng.unit_vec(2), (0.7 * rng.normal()).exp()).unwrap();
        let (va, vb) = (a.rep(), b.rep());
        // Unit-speed geodesic from the centre of `a` (s → −∞) to that of `b`.
        let c = (-2.0 * va.inner(vb).unwrap()).sqrt();
        let gamma = |s: f64| va.scaled((-s).exp() / c) + vb.scaled(s.exp() / c);
        // Horospheres are {x : ⟨x, v⟩ = −1/√2}.
        let s_a = bisect(-30.0, 30.0, |s| gamma(s).inner(va).unwrap() + FRAC_1_SQRT_2);
        let s_b = bisect(-30.0, 30.0, |s| gamma(s).inner(vb).unwrap() + FRAC_1_SQRT_2);
        let delta = s_b - s_a;
        // Both crossings are genuine geodesic distances from a common point.
        let o = HPoint::new(gamma(0.0)).unwrap();
        assert!((distance(&o, &HPoint::new(gamma(s_a)).unwrap()) - s_a.abs()).abs() < 1e-7);
        let lambda = lambda_length(&a, &b);
        assert!(((delta / 2.0).exp() - lambda).abs() <= 1e-8 * lambda, "{delta} {lambda}");
    }
}

fn residual_against_truth(config: &Configuration, truth: &GroundTruth) -> f64 {
    let max = |it: &mut dyn Iterator<Item = f64>| it.fold(0.0_f64, f64::max);
    match (config, truth) {
        (Configuration::Points(ps), GroundTruth::Horosphere { rep }) => {
            max(&mut ps.iter().map(|p| (p.rep().inner(&lv(rep)).unwrap() + FRAC_1_SQRT_2).abs() / p.rep().max_abs()))
        }
        (Configuration::Points(ps), GroundTruth::Hypersphere { centre, radius }) => {
            let c = HPoint::new(lv(centre)).unwrap();
            max(&mut ps.iter().map(|p| (distance(p, &c) - radius).abs()))
        }
        (Configuration::Points(ps), GroundTruth::Hyperplane { normal }) => {
            max(&mut ps.iter().map(|p| p.rep().inner(&lv(normal)).unwrap().abs() / p.rep().max_abs()))
        }
        (Configuration::Points(ps), GroundTruth::Equidistant { normal, offset }) => {
            max(&mut ps.iter().map(|p| (p.rep().inner(&lv(normal)).unwrap() - offset).abs() / p.rep().max_abs()))
        }
        (Configuration::Horospheres(hs), GroundTruth::BoundaryHyperplane { normal }) => {
            max(&mut hs.iter().map(|h| h.rep().inner(&lv(normal)).unwrap().abs() / h.rep().max_abs()))
        }
        (Configuration::Hyperplanes(hps), t) => {
            let case = match t {
                GroundTruth::TangentAtInfinity { v } => CaseyCase::TangentHyperplaneAtInfinity { v: lv(v) },
                GroundTruth::CommonIdealPoint { w } => CaseyCase::CommonIdealPoint { w: lv(w) },
                GroundTruth::OrthogonalEquallyInclined { u, v, lambda } => {
                    CaseyCase::OrthogonalAndEquallyInclined { u: lv(u), v: lv(v), lambda: *lambda }
                }
                other => panic!("unexpected truth {other:?}"),
            };
            let normals: Vec<LorentzVector> = hps.iter().map(|h| h.normal().clone()).collect();
            casey_witness_check(&case, &normals, 1e-10).residual
        }
        (Configuration::SpheresE(ss), GroundTruth::TangentSphere { centre, radius }) => max(&mut ss.iter().map(|s| {
            let d = s.centre.iter().zip(centre).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
            (d - (radius - s.radius)).abs().min((d - (radius + s.radius)).abs())
        })),
        (Configuration::SpheresE(ss), GroundTruth::CommonPoint { point }) => max(&mut ss.iter().map(|s| {
            let d = s.centre.iter().zip(point).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
            (d - s.radius).abs()
        })),
        (c, t) => panic!("no membership check for {t:?} on {c:?}"),
    }
}

#[test]
fn generators_meet_their_constraints() {
    for kind in GenKind::ALL.into_iter().filter(|k| k.is_degenerate_class()) {
        for n in 2..=4 {
            for seed in 0..50 {
                let g = generate(&GenSpec::new(kind, n, seed)).unwrap();
                let r = residual_against_truth(&g.config, &g.truth);
                assert!(r <= 1e-10, "{} n={n} seed={seed}: residual {r:e}", kind.name());
            }
        }
    }
}

#[test]
fn disk_export_round_trips() {
    let cases = [
        ("horospheres_on_hyperplane_boundary", "penner"),
        ("hyperplanes_common_ideal_point", "casey"),
        ("points_on_equidistant", "ptolemy2"),
    ];
    for (kind, theorem) in cases {
        let dir = std::env::temp_dir().join(format!("lorentz-gram-disk-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let gen = Command::new(env!("CARGO_BIN_EXE_lorentz-gram"))
            .args(["generate", "--kind", kind, "--n", "3", "--seed", "11"])
            .output()
            .unwrap();
        let path = dir.join(format!("{kind}.json"));
        std::fs::write(&path, &gen.stdout).unwrap();
        let scene: Value = serde_json::from_slice(&gen.stdout).unwrap();
        let out = Command::new(env!("CARGO_BIN_EXE_lorentz-gram"))
            .args(["verify", path.to_str().unwrap(), "--theorem", theorem, "--emit-disk"])
            .output()
            .unwrap();
        let report: Value = serde_json::from_slice(&out.stdout).unwrap();
        let disk = report["disk"]["objects"].as_array().unwrap();
        let objects = scene["objects"].as_array().unwrap();
        assert_eq!(disk.len(), objects.len());
        for (d, o) in disk.iter().zip(objects) {
            let (back, orig): (Vec<f64>, Vec<f64>) = match d["type"].as_str().unwrap() {
                "horosphere" => {
                    let b: BallHorosphere = serde_json::from_value(d["ball"].clone()).unwrap();
                    (horosphere_from_ball(&b).unwrap().rep().coords().to_vec(), serde_json::from_value(o["rep"].clone()).unwrap())
                }
                "hyperplane" => {
                    let b: BallHyperplane = serde_json::from_value(d["ball"].clone()).unwrap();
                    (hyperplane_from_ball(&b).unwrap().normal().coords().to_vec(), serde_json::from_value(o["normal"].clone()).unwrap())
                }
                "point" => {
                    let b: Vec<f64> = serde_json::from_value(d["coords"].clone()).unwrap();
                    let p = lorentz_gram::models::ball_to_hyperboloid(&lorentz_gram::models::BallPoint(b)).unwrap();
                    (p.rep().coords().to_vec(), serde_json::from_value(o["coords"].clone()).unwrap())
                }
                other => panic!("unexpected disk object {other}"),
            };
            let scale = orig.iter().fold(1.0_f64, |m, x| m.max(x.abs()));
            for (a, b) in back.iter().zip(&orig) {
                assert!((a - b).abs() <= 1e-9 * scale, "{kind}: {back:?} vs {orig:?}");
            }
        }
    }
}
