//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use lorentz_gram::generators::{generate, perturb, Configuration, GenKind, GenSpec, GroundTruth, Rng};
use lorentz_gram::lorentz::{codim1_test, LorentzVector};
use lorentz_gram::models::{horosphere_chart, horosphere_chart_inverse, sphere_lift};
use lorentz_gram::objects::{distance, half_dist_sinh_sq, lambda_length, tangent_length, tau};
use lorentz_gram::theorems::{
    casey_matrix, casey_test, casey_witness_check, corollary_d_matrix, corollary_d_test,
    four_term_factorization, four_term_relation, penner_test, ptolemy1_test, ptolemy2_classify,
    ptolemy2_test, Alternative, SurfaceKind, UmbilicalSurface,
};
use lorentz_gram::{CoSphereE, HPoint, Horosphere};
use nalgebra::Matrix4;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

fn cofactor_det(m: &[Vec<f64>]) -> f64 {
    if m.len() == 1 {
        return m[0][0];
    }
    (0..m.len())
        .map(|j| {
            let minor: Vec<Vec<f64>> = m[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, v)| *v).collect())
                .collect();
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            sign * m[0][j] * cofactor_det(&minor)
        })
        .sum()
}

fn criterion_1() -> Outcome {
    let mut rng = Rng::new(101);
    let mut worst = 0.0_f64;
    for n in 2..=4 {
        for _ in 0..1000 {
            let vs: Vec<LorentzVector> = (0..=n)
                .map(|_| LorentzVector::new(rng.normal_vec(n + 1)).unwrap())
                .collect();
            let report = codim1_test(&vs, 1e-9).unwrap();
            // Oracle: det Y by an independent cofactor expansion.
            let y: Vec<Vec<f64>> = vs.iter().map(|v| v.coords().to_vec()).collect();
            let dy = cofactor_det(&y);
            worst = worst.max(rel(report.verdict.det_value, -dy * dy));
        }
    }
    outcome(worst <= 1e-8, format!("3000 tuples, worst relative error {worst:.2e} (limit 1e-8)"))
}

fn criterion_2() -> Outcome {
    let mut rng = Rng::new(202);
    let mut worst = 0.0_f64;
    for _ in 0..1000 {
        let mut x = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in (i + 1)..4 {
                let v = rng.range(0.0, 2.0);
                x[i][j] = v;
                x[j][i] = v;
            }
        }
        let a = Matrix4::from_fn(|i, j| x[i][j] * x[i][j]);
        let b = a / 4.0;
        let f = four_term_factorization(&x);
        worst = worst.max(rel(a.determinant(), f));
        worst = worst.max(rel(b.determinant(), f / 256.0));
    }
    outcome(worst <= 1e-8, format!("1000 matrices, worst relative error {worst:.2e} (limit 1e-8)"))
}

fn horospheres(c: &Configuration) -> &[Horosphere] {
    match c {
        Configuration::Horospheres(h) => h,
        _ => panic!("expected horospheres"),
    }
}

fn criterion_3() -> Outcome {
    let mut msgs = Vec::new();
    let mut pass = true;
    for n in 2..=4 {
        let (mut degenerate, mut worst_res, mut generic_ok, mut perturbed_ok) = (0, 0.0_f64, 0, 0);
        for seed in 0..200 {
            let g = generate(&GenSpec::new(GenKind::HorospheresOnHyperplaneBoundary, n, seed)).unwrap();
            let hs = horospheres(&g.config);
            let r = penner_test(hs, 1e-9).unwrap();
            if r.verdict.is_degenerate {
                if let Some(w) = &r.witness {
                    let res = hs
                        .iter()
                        .map(|h| h.rep().inner(w.normal()).unwrap().abs() / h.rep().max_abs())
                        .fold(0.0, f64::max);
                    worst_res = worst_res.max(res);
                    if res <= 1e-7 {
                        degenerate += 1;
                    }
                }
            }
            let p = perturb(&g.config, 1e-2, seed + 10_000);
            if !penner_test(horospheres(&p), 1e-9).unwrap().verdict.is_degenerate {
                perturbed_ok += 1;
            }
            let gen = generate(&GenSpec::new(GenKind::GenericHorospheres, n, seed + 20_000)).unwrap();
            if !penner_test(horospheres(&gen.config), 1e-9).unwrap().verdict.is_degenerate {
                generic_ok += 1;
            }
        }
        pass &= degenerate == 200 && generic_ok >= 198 && perturbed_ok >= 198;
        msgs.push(format!(
            "n={n}: witnessed {degenerate}/200 (worst {worst_res:.1e}), generic {generic_ok}/200, perturbed {perturbed_ok}/200"
        ));
    }
    outcome(pass, msgs.join("; "))
}

fn criterion_4() -> Outcome {
    let mut exact_one = 0;
    for seed in 0..200 {
        let spec = GenSpec::new(GenKind::HorospheresOnHyperplaneBoundary, 3, 30_000 + seed).with_count(4);
        let g = generate(&spec).unwrap();
        let hs = horospheres(&g.config);
        let mut x = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    x[i][j] = lambda_length(&hs[i], &hs[j]);
                }
            }
        }
        let r = four_term_relation(&x, 1e-9).unwrap();
        if r.which != Alternative::None && r.alternatives_within(1e-9).len() == 1 {
            exact_one += 1;
        }
    }
    outcome(exact_one == 200, format!("{exact_one}/200 configurations with exactly one alternative at 1e-9"))
}

/// Circle-fit oracle: the fourth point lies on the circle (or line) through
/// the first three.
fn concyclic(z: &[Vec<f64>], tol: f64) -> bool {
    let (a, b, c, d) = (&z[0], &z[1], &z[2], &z[3]);
    let cross = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
    let scale = z.iter().flat_map(|p| p.iter()).fold(1.0_f64, |m, v| m.max(v.abs()));
    if cross.abs() <= tol * scale * scale {
        // Collinear first three: the fourth must be on the same line.
        let cross4 = (b[0] - a[0]) * (d[1] - a[1]) - (b[1] - a[1]) * (d[0] - a[0]);
        return cross4.abs() <= tol * scale * scale;
    }
    let sa = a[0] * a[0] + a[1] * a[1];
    let sb = b[0] * b[0] + b[1] * b[1];
    let sc = c[0] * c[0] + c[1] * c[1];
    let den = 2.0 * cross;
    let ux = (sa * (b[1] - c[1]) + sb * (c[1] - a[1]) + sc * (a[1] - b[1])) / den;
    let uy = (sa * (c[0] - b[0]) + sb * (a[0] - c[0]) + sc * (b[0] - a[0])) / den;
    let r = ((a[0] - ux).powi(2) + (a[1] - uy).powi(2)).sqrt();
    let rd = ((d[0] - ux).powi(2) + (d[1] - uy).powi(2)).sqrt();
    (rd - r).abs() <= tol * r.max(1.0)
}

fn criterion_5() -> Outcome {
    let mut rng = Rng::new(505);
    let (mut agree, mut worst_chart, mut worst_b) = (0, 0.0_f64, 0.0_f64);
    for k in 0..200 {
        let h = Horosphere::from_ideal(&rng.unit_vec(3), (0.5 * rng.normal()).exp()).unwrap();
        let zs: Vec<Vec<f64>> = match k % 3 {
            0 => {
                let c = rng.normal_vec(2);
                let r = rng.range(0.3, 2.0);
                (0..4)
                    .map(|_| {
                        let t = rng.range(0.0, std::f64::consts::TAU);
                        vec![c[0] + r * t.cos(), c[1] + r * t.sin()]
                    })
                    .collect()
            }
            1 => {
                let p = rng.normal_vec(2);
                let d = rng.unit_vec(2);
                (0..4)
                    .map(|_| {
                        let s = rng.range(-2.0, 2.0);
                        vec![p[0] + s * d[0], p[1] + s * d[1]]
                    })
                    .collect()
            }
            _ => (0..4).map(|_| rng.normal_vec(2)).collect(),
        };
        let ps: Vec<HPoint> = zs.iter().map(|z| horosphere_chart_inverse(&h, z).unwrap()).collect();
        let charts: Vec<Vec<f64>> = ps.iter().map(|p| horosphere_chart(&h, p).unwrap()).collect();
        for i in 0..4 {
            for j in (i + 1)..4 {
                let d = ((charts[i][0] - charts[j][0]).powi(2) + (charts[i][1] - charts[j][1]).powi(2)).sqrt();
                worst_chart = worst_chart.max(rel(d, 2.0 * (distance(&ps[i], &ps[j]) / 2.0).sinh()));
                worst_b = worst_b.max(rel(half_dist_sinh_sq(&ps[i], &ps[j]), d * d / 4.0));
            }
        }
        let r = ptolemy1_test(&ps, &UmbilicalSurface::Horosphere(h.clone()), 1e-7).unwrap();
        if r.verdict.is_degenerate == concyclic(&charts, 1e-7) {
            agree += 1;
        }
    }
    let pass = agree == 200 && worst_chart <= 1e-9;
    outcome(
        pass,
        format!("agreement {agree}/200; chart distance error {worst_chart:.1e} (limit 1e-9); B vs d²/4 error {worst_b:.1e}"),
    )
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn scale_of(v: &[f64]) -> f64 {
    v.iter().fold(1.0_f64, |m, x| m.max(x.abs()))
}

/// Sign-normalizes a normal together with its offset.
fn oriented(normal: &[f64], offset: f64) -> (Vec<f64>, f64) {
    let first = normal.iter().find(|x| x.abs() > 1e-12).copied().unwrap_or(1.0);
    if first < 0.0 {
        (normal.iter().map(|x| -x).collect(), -offset)
    } else {
        (normal.to_vec(), offset)
    }
}

fn criterion_6() -> Outcome {
    let kinds = [
        (GenKind::PointsOnHorosphere, SurfaceKind::Horosphere),
        (GenKind::PointsOnHypersphere, SurfaceKind::Hypersphere),
        (GenKind::PointsOnHyperplane, SurfaceKind::Hyperplane),
        (GenKind::PointsOnEquidistant, SurfaceKind::EquidistantBranch),
    ];
    let mut pass = true;
    let mut msgs = Vec::new();
    for n in 2..=3 {
        for (kind, want) in kinds {
            let (mut deg, mut ok, mut worst) = (0, 0, 0.0_f64);
            for seed in 0..200 {
                let g = generate(&GenSpec::new(kind, n, 60_000 + seed)).unwrap();
                let Configuration::Points(ps) = &g.config else { unreachable!() };
                if !ptolemy2_test(ps, 1e-9).unwrap().is_degenerate {
                    continue;
                }
                deg += 1;
                let Ok(fit) = ptolemy2_classify(ps, 1e-9) else { continue };
                let d = fit.datum.coords();
                let err = match (&g.truth, fit.kind) {
                    (GroundTruth::Horosphere { rep }, SurfaceKind::Horosphere) => max_diff(d, rep) / scale_of(rep),
                    (GroundTruth::Hypersphere { centre, radius }, SurfaceKind::Hypersphere) => {
                        (max_diff(d, centre) / scale_of(centre)).max((fit.radius().unwrap() - radius).abs())
                    }
                    (GroundTruth::Hyperplane { normal }, SurfaceKind::Hyperplane) => {
                        let (t, _) = oriented(normal, 0.0);
                        max_diff(d, &t) / scale_of(&t)
                    }
                    (GroundTruth::Equidistant { normal, offset }, SurfaceKind::EquidistantBranch) => {
                        let (t, o) = oriented(normal, *offset);
                        (max_diff(d, &t) / scale_of(&t)).max((fit.offset - o).abs())
                    }
                    _ => f64::INFINITY,
                };
                worst = worst.max(err);
                if err <= 1e-6 && fit.kind == want {
                    ok += 1;
                }
            }
            pass &= deg == 200 && ok == 200;
            msgs.push(format!("n={n} {want:?}: {deg}/{ok} (err {worst:.1e})"));
        }
    }
    outcome(pass, format!("degenerate/recovered of 200: {}", msgs.join(", ")))
}

fn criterion_7() -> Outcome {
    let kinds = [
        GenKind::HyperplanesTangentAtInfinity,
        GenKind::HyperplanesCommonIdealPoint,
        GenKind::HyperplanesOrthEqual,
    ];
    let mut pass = true;
    let mut msgs = Vec::new();
    for n in 2..=3 {
        for kind in kinds {
            let (mut deg, mut ok, mut worst) = (0, 0, 0.0_f64);
            for seed in 0..200 {
                let g = generate(&GenSpec::new(kind, n, 70_000 + seed)).unwrap();
                let Configuration::Hyperplanes(hps) = &g.config else { unreachable!() };
                let Ok(r) = casey_test(hps, 1e-9, true) else { continue };
                if !r.verdict.is_degenerate {
                    continue;
                }
                deg += 1;
                let normals: Vec<LorentzVector> = hps.iter().map(|h| h.normal().clone()).collect();
                if let Some(case) = &r.case {
                    let check = casey_witness_check(case, &normals, 1e-7);
                    worst = worst.max(check.residual);
                    if check.pass {
                        ok += 1;
                    }
                }
            }
            pass &= deg == 200 && ok == 200;
            msgs.push(format!("n={n} {}: {deg}/{ok} (res {worst:.1e})", kind.name()));
        }
    }
    outcome(pass, format!("degenerate/witnessed of 200: {}", msgs.join(", ")))
}

fn criterion_8() -> Outcome {
    let r = [0.2, 0.3, 0.1, 0.25];
    let ang = [0.0_f64, 80.0, 170.0, 260.0];
    let spheres: Vec<CoSphereE> = r
        .iter()
        .zip(ang)
        .map(|(&rk, a)| {
            let p = a.to_radians();
            CoSphereE::new(vec![(1.0 - rk) * p.cos(), (1.0 - rk) * p.sin()], rk, 1).unwrap()
        })
        .collect();
    let v = corollary_d_test(&spheres, 1e-9, false).unwrap();
    let t = |i: usize, j: usize| tangent_length(&spheres[i], &spheres[j]).unwrap();
    let casey_err = rel(t(0, 2) * t(1, 3), t(0, 1) * t(2, 3) + t(0, 3) * t(1, 2));
    let d = corollary_d_matrix(&spheres);
    let lifted: Vec<LorentzVector> = spheres.iter().map(|s| sphere_lift(s).unwrap().normal().clone()).collect();
    let c = casey_matrix(&lifted);
    let mut worst = 0.0_f64;
    for i in 0..4 {
        for j in 0..4 {
            let rcr = -4.0 * r[i] * r[j] * c[(i, j)];
            if i != j {
                worst = worst.max(rel(d[(i, j)], rcr));
                worst = worst.max(rel(tau(&spheres[i], &spheres[j]), rcr));
            } else {
                worst = worst.max(d[(i, j)].abs() + rcr.abs());
            }
        }
    }
    let pass = v.verdict.is_degenerate && v.lifted_verdict.is_degenerate && casey_err <= 1e-9 && worst <= 1e-10;
    outcome(
        pass,
        format!(
            "degenerate D={} C={}; Casey relation error {casey_err:.1e} (limit 1e-9); D vs −4RCR {worst:.1e} (limit 1e-10)",
            v.verdict.is_degenerate, v.lifted_verdict.is_degenerate
        ),
    )
}

fn cli(args: &[&str]) -> (i32, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_lorentz-gram"))
        .args(args)
        .output()
        .expect("run binary");
    (out.status.code().unwrap_or(-1), out.stdout)
}

fn scratch_dir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("lorentz-gram-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn theorem_for(kind: GenKind) -> (&'static str, bool) {
    match kind {
        GenKind::PointsOnHorosphere
        | GenKind::PointsOnHypersphere
        | GenKind::PointsOnHyperplane
        | GenKind::PointsOnEquidistant
        | GenKind::GenericPoints => ("ptolemy2", true),
        GenKind::HorospheresOnHyperplaneBoundary | GenKind::GenericHorospheres => ("penner", false),
        GenKind::SpheresTangentToCircle | GenKind::SpheresThroughPoint => ("casey-e", true),
        _ => ("casey", true),
    }
}

fn criterion_9() -> Outcome {
    let dir = scratch_dir();
    let mut failures = Vec::new();
    let mut runs = 0;
    let path = |name: &str| -> PathBuf { dir.join(name) };
    let s = |p: &Path| p.to_str().unwrap().to_string();
    for kind in GenKind::ALL {
        let (theorem, can_classify) = theorem_for(kind);
        let expected = if kind.is_degenerate_class() { 0 } else { 1 };
        for n in 2..=3 {
            for seed in [1_u64, 2] {
                let seed_s = seed.to_string();
                let n_s = n.to_string();
                let gen_args = ["generate", "--kind", kind.name(), "--n", &n_s, "--seed", &seed_s];
                let (c1, scene1) = cli(&gen_args);
                let (c2, scene2) = cli(&gen_args);
                runs += 2;
                if c1 != 0 || c2 != 0 || scene1 != scene2 {
                    failures.push(format!("generate {} n={n} seed={seed}", kind.name()));
                    continue;
                }
                let file = path(&format!("{}-{n}-{seed}.json", kind.name()));
                std::fs::write(&file, &scene1).unwrap();
                let mut commands = vec!["verify"];
                if can_classify {
                    commands.push("classify");
                }
                for cmd in commands {
                    let args = [cmd, s(&file).as_str(), "--theorem", theorem, "--emit-disk"].map(String::from);
                    let args: Vec<&str> = args.iter().map(String::as_str).collect();
                    let (a, out_a) = cli(&args);
                    let (b, out_b) = cli(&args);
                    runs += 2;
                    if a != expected || b != expected || out_a != out_b {
                        failures.push(format!("{cmd} {} n={n} seed={seed}: exit {a}", kind.name()));
                    }
                }
            }
        }
    }
    // Error contract.
    let bad = path("no-dimension.json");
    std::fs::write(&bad, r#"{"schema":"lorentz-gram/1","objects":[]}"#).unwrap();
    let (code, out) = cli(&["verify", &s(&bad), "--theorem", "penner"]);
    runs += 1;
    if code != 2 || !String::from_utf8_lossy(&out).contains("SchemaViolation") {
        failures.push("missing dimension".into());
    }
    let (code, _) = cli(&["generate", "--kind", "hyperplanes_orth_equal", "--n", "2", "--params", "lambda=1.5"]);
    runs += 1;
    if code != 2 {
        failures.push("lambda=1.5".into());
    }
    let _ = std::fs::remove_dir_all(&dir);
    outcome(
        failures.is_empty(),
        format!("{runs} invocations, {} contract violations {:?}", failures.len(), failures),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("Gram-lemma identity", criterion_1),
        ("four-term factorization", criterion_2),
        ("horosphere boundary round-trip", criterion_3),
        ("Penner relation in H²", criterion_4),
        ("hyperplane sections of a horosphere", criterion_5),
        ("umbilical surface classification", criterion_6),
        ("hyperplane family classification", criterion_7),
        ("tangent circles and the τ-matrix", criterion_8),
        ("CLI contract", criterion_9),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = f();
        if !o.pass {
            failed += 1;
        }
        println!(
            "criterion {} {:<38} {} ({:.2}s) {}",
            k + 1,
            name,
            if o.pass { "PASS" } else { "FAIL" },
            t.elapsed().as_secs_f64(),
            o.detail
        );
    }
    println!("acceptance: {}/9 passed in {:.2}s", 9 - failed, start.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
