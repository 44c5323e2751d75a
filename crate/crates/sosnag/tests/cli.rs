use num_complex::Complex64 as C;
use serde_json::Value;
use sosnag::dispatch_to;
use sosnag::format::{DetRepJson, PolyJson, SystemJson};
use sosnag_core::symmetroid::{clr_quartic, DetRep};
use sosnag_core::{PolySystem, Polynomial};

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("sosnag").chain(args.iter().copied());
    let code = dispatch_to(argv, &mut out, &mut err);
    Run { code, stdout: String::from_utf8(out).unwrap(), stderr: String::from_utf8(err).unwrap() }
}

fn json(args: &[&str]) -> Value {
    let r = run(args);
    assert_eq!(r.code, 0, "{args:?}: {}", r.stderr);
    serde_json::from_str(&r.stdout).unwrap()
}

fn write_json<T: serde::Serialize>(dir: &tempfile::TempDir, name: &str, v: &T) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, serde_json::to_string(v).unwrap()).unwrap();
    p.to_str().unwrap().to_string()
}

fn two_quadrics() -> PolySystem {
    let x = Polynomial::var(2, 0);
    let y = Polynomial::var(2, 1);
    let one = Polynomial::constant(2, C::new(1.0, 0.0));
    let f = &(&x * &x) - &one;
    let g = &(&(&y * &y) - &one.scale(C::new(4.0, 0.0))) + &(&x * &y);
    PolySystem::new(2, vec![f, g]).unwrap()
}

#[test]
fn closed_form_commands() {
    assert_eq!(json(&["ht", "--size", "10", "--rank", "7"]), serde_json::json!({"degree": 2640, "codim": 6}));
    assert_eq!(json(&["ht", "10", "6"]), serde_json::json!({"degree": 28314, "codim": 10}));
    assert_eq!(json(&["gw", "--degree", "6"]), serde_json::json!({"N": 26312976}));
    assert_eq!(json(&["disc", "--n", "4", "--d", "2"]), serde_json::json!({"degree": 108}));
    assert_eq!(json(&["disc", "--n", "3", "--d", "3"]), serde_json::json!({"degree": 75}));
    let nl = json(&["nl", "--case", "quartic"]);
    assert_eq!(nl["degree"], 38475);
    assert_eq!(nl["delta"], "2");
    assert_eq!(json(&["nl", "--case", "sextic"])["degree"], 83200);
}

#[test]
fn large_integers_stay_exact() {
    let v = json(&["gw", "--degree", "12"]);
    assert_eq!(v["N"].to_string(), sosnag_core::enumerative::kontsevich_manin(12).to_string());
}

#[test]
fn usage_and_domain_errors() {
    let r = run(&["frobnicate"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("Usage"));
    assert_eq!(run(&["gw"]).code, 2);
    assert_eq!(run(&["ht", "10"]).code, 2);
    let r = run(&["ht", "3", "5"]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("out of range"));
    assert!(r.stdout.is_empty());
    assert_eq!(run(&["solve", "--input", "/nonexistent/system.json"]).code, 1);
    let help = run(&["--help"]);
    assert_eq!(help.code, 0);
    assert!(help.stdout.contains("symmetroid"));
}

#[test]
fn solve_is_reproducible_and_threads_do_not_matter() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_json(&dir, "sys.json", &SystemJson::from_system(&two_quadrics()));
    let a = run(&["solve", "--input", &input, "--seed", "5", "--threads", "1"]);
    let b = run(&["solve", "--input", &input, "--seed", "5", "--threads", "2"]);
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_str(&a.stdout).unwrap();
    assert_eq!(v["points"].as_array().unwrap().len(), 4);
    assert_eq!(v["counts"]["success"], 4);
    for r in v["residuals"].as_array().unwrap() {
        assert!(r.as_f64().unwrap() < 1e-9);
    }
    let limited = run(&["solve", "--input", &input, "--paths-limit", "3"]);
    assert_eq!(limited.code, 1);
    assert!(limited.stderr.contains("budget"));
}

#[test]
fn out_flag_writes_result_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ht.json");
    let r = run(&["ht", "10", "7", "--out", out.to_str().unwrap()]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["degree"], 2640);
    let m: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("ht.json.manifest.json")).unwrap()).unwrap();
    assert_eq!(m["seed"], 0);
    assert_eq!(m["command"][1], "ht");
    assert!(m["wall_time_s"].as_f64().unwrap() >= 0.0);
}

#[test]
fn witness_round_trip_and_membership() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("w.json");
    let r = run(&["witness", "--symmetric", "3", "--rank", "1", "--seed", "11", "--out", out.to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["degrees"], serde_json::json!([4]));
    assert_eq!(v["formula_degree"], 4);
    let ws = write_json(&dir, "ws.json", &v["components"][0]);
    // v v^T in the upper-triangle coordinates of the matrix.
    let vv = [C::new(0.4, -0.3), C::new(1.2, 0.1), C::new(-0.5, 0.8)];
    let on: Vec<C> = vec![vv[0] * vv[0], vv[0] * vv[1], vv[0] * vv[2], vv[1] * vv[1], vv[1] * vv[2], vv[2] * vv[2]];
    let off: Vec<C> = (0..6).map(|i| C::new(0.3 + i as f64, -0.2)).collect();
    for (pt, want) in [(on, true), (off, false)] {
        let p = write_json(&dir, "p.json", &sosnag::format::point_json(&pt));
        let m = json(&["witness", "--load", &ws, "--point", &p, "--seed", "3"]);
        assert_eq!(m["member"], want);
    }
}

#[test]
fn hankel_layout_and_formula() {
    let v = json(&["hankel", "--n", "3", "--d", "3", "--layout"]);
    assert_eq!(v["rows"][0][0], "a_{006}");
    assert_eq!(v["rows"][9][9], "a_{600}");
    let r = json(&["hankel", "--n", "4", "--d", "2", "--rank", "6"]);
    assert_eq!(r["degree"], 28314);
    assert_eq!(r["dim"], 24);
    assert_eq!(run(&["hankel", "--n", "3", "--d", "3"]).code, 2);
}

#[test]
fn boundary_commands() {
    let s = json(&["boundary", "--case", "sextic"]);
    assert_eq!(s["census"]["unknowns"], 28);
    assert_eq!(s["census"]["linear"], 2);
    assert_eq!(s["expected_degree"], 83200);
    let q = json(&["boundary", "--case", "quartic"]);
    assert_eq!(q["census"]["unknowns"], 35);
    assert_eq!(q["expected_degree"], 38475);
    let b = json(&["boundary", "--case", "binary:2", "--seed", "4"]);
    assert_eq!(b["distinct_s"], b["oracle_degree"]);
    assert_eq!(b["path_counts"]["failed"], 0);
    assert_eq!(run(&["boundary", "--case", "octic"]).code, 2);
    assert_eq!(run(&["boundary", "--case", "binary:x"]).code, 2);
    assert_eq!(run(&["boundary", "--case", "sextic", "--sample", "20", "--paths-limit", "10"]).code, 1);
    let sample = json(&["boundary", "--case", "sextic", "--sample", "30", "--seed", "2"]);
    let c = &sample["sample"]["path_counts"];
    assert_eq!(c["failed"], 0);
    assert_eq!(sample["sample"]["distinct_s"], c["success"]);
    assert_eq!(sample["sample"]["total_orbits"].to_string(), (1u64 << 25).to_string());
}

#[test]
fn symmetroid_command_certifies() {
    let dir = tempfile::tempdir().unwrap();
    let f = clr_quartic(1.5).f;
    let input = write_json(&dir, "f.json", &PolyJson::from_poly(&f));
    let out = dir.path().join("detrep.json");
    let r = run(&["symmetroid", "--input", &input, "--node-index", "3", "--out", out.to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let rep: DetRepJson = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(rep.entries.len(), 10);
    assert_eq!(rep.nodes.len(), 10);
    assert!(rep.residual < 1e-8);
    let (scale, residual) = DetRep::certify(&rep.matrix().unwrap(), &f);
    assert!(residual < 1e-8);
    assert!((scale - C::from(rep.scale)).norm() < 1e-6 * scale.norm());
}

#[test]
fn symmetroid_rejects_smooth_surface() {
    let dir = tempfile::tempdir().unwrap();
    let f = (0..4).fold(Polynomial::zero(4), |acc, i| &acc + &Polynomial::var(4, i).pow(4));
    let input = write_json(&dir, "f.json", &PolyJson::from_poly(&f));
    let r = run(&["symmetroid", "--input", &input]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("10"), "{}", r.stderr);
    assert_eq!(run(&["symmetroid"]).code, 2);
}
