use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use polyknot_core::format::{knot_to_string, parse_knot};
use polyknot_core::{make_knot, Index, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_polyknot"))
}

fn run(dir: &Path, args: &[&str]) -> Output {
    bin().current_dir(dir).args(args).output().expect("spawn polyknot")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

const LINE3: &str = r#"{"dimension": 3, "coefficients": [{"i": 1, "j": 1, "value": "1"}]}"#;
const EVEN: &str = r#"{"dimension": 2, "coefficients": [{"i": 1, "j": 2, "value": "1"}]}"#;
const TREFOIL: &str = r#"{"dimension": 3, "coefficients": [
  {"i": 1, "j": 3, "value": "1"}, {"i": 1, "j": 1, "value": "-3"},
  {"i": 2, "j": 4, "value": "1"}, {"i": 2, "j": 2, "value": "-4"},
  {"i": 3, "j": 5, "value": "1"}, {"i": 3, "j": 1, "value": "-10"}]}"#;
const WOBBLE: &str = r#"{"dimension": 2, "coefficients": [
  {"i": 1, "j": 3, "value": "[9/10, 11/10]"}, {"i": 1, "j": 1, "value": "[-1/10, 1/10]"},
  {"i": 2, "j": 2, "value": "1"}]}"#;

fn fixtures() -> TempDir {
    let d = TempDir::new().unwrap();
    write(d.path(), "line.json", LINE3);
    write(d.path(), "even.json", EVEN);
    write(d.path(), "trefoil.json", TREFOIL);
    write(d.path(), "wobble.json", WOBBLE);
    d
}

#[test]
fn verify_exit_table() {
    let d = fixtures();
    let p = d.path();
    assert_eq!(run(p, &["verify", "line.json"]).status.code(), Some(0));

    let o = run(p, &["verify", "even.json"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("witness: s = -1, t = 1"));

    assert_eq!(run(p, &["verify", "wobble.json"]).status.code(), Some(2));

    let o = run(p, &["verify", "trefoil.json", "--oracle"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("oracle: no failure found"));

    write(p, "bad.json", "{\"dimension\": 2,\n \"coefficients\": [{\"i\": 1, \"j\": 1, \"value\": \"one\"}]}");
    let o = run(p, &["verify", "bad.json"]);
    assert_eq!(o.status.code(), Some(65));
    assert!(String::from_utf8_lossy(&o.stderr).contains("coefficients[0].value"));

    write(p, "broken.json", "{\"dimension\": 2,\n \"coefficients\": [");
    let o = run(p, &["verify", "broken.json"]);
    assert_eq!(o.status.code(), Some(65));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));

    assert_eq!(run(p, &["verify"]).status.code(), Some(64));
    assert_eq!(run(p, &["verify", "line.json", "--depth", "x"]).status.code(), Some(64));
    assert_eq!(run(p, &["frobnicate"]).status.code(), Some(64));
}

#[test]
fn verify_json_certificate() {
    let d = fixtures();
    let o = run(d.path(), &["verify", "even.json", "--json", "--oracle"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdict"], "refuted");
    assert_eq!(v["witness"]["s"], "-1");
    assert_eq!(v["agreement"], true);
}

#[test]
fn distances() {
    let d = fixtures();
    let p = d.path();
    write(p, "cubic.json", r#"{"dimension": 3, "coefficients": [{"i": 1, "j": 3, "value": "1"}, {"i": 1, "j": 1, "value": "1"}]}"#);
    write(p, "root5.json", r#"{"dimension": 3, "coefficients": [
        {"i": 1, "j": 1, "value": "1"}, {"i": 1, "j": 2, "value": "1"}, {"i": 2, "j": 2, "value": "2"}]}"#);
    assert_eq!(stdout(&run(p, &["distance", "line.json", "cubic.json", "--metric", "inf"])).trim(), "1");
    assert_eq!(stdout(&run(p, &["distance", "line.json", "line.json"])).trim(), "0");
    let o = stdout(&run(p, &["distance", "line.json", "root5.json", "--metric", "2"]));
    let (lo, hi) = o.trim().trim_matches(['[', ']']).split_once(", ").unwrap();
    let (lo, hi): (f64, f64) = (lo.parse().unwrap(), hi.parse().unwrap());
    assert!(lo <= 5f64.sqrt() + 1e-15 && 5f64.sqrt() <= hi + 1e-15 && hi - lo < 1e-15, "{o}");
    assert_eq!(run(p, &["distance", "line.json", "cubic.json", "--metric", "1/2"]).status.code(), Some(64));

    write(p, "x.json", r#"{"entries": [{"i": 1, "value": "3"}]}"#);
    write(p, "y.json", r#"{"entries": [{"i": 2, "value": "4"}]}"#);
    assert_eq!(stdout(&run(p, &["distance", "x.json", "y.json", "--metric", "2"])).trim(), "5");
    assert_eq!(run(p, &["distance", "x.json", "line.json"]).status.code(), Some(65));
}

#[test]
fn linearize_and_contract() {
    let d = fixtures();
    let p = d.path();
    let o = run(p, &["linearize", "trefoil.json", "--steps", "11", "--out", "t.json"]);
    assert_eq!(o.status.code(), Some(0));
    let t: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(p.join("t.json")).unwrap()).unwrap();
    let samples = t["samples"].as_array().unwrap();
    assert_eq!(samples.len(), 11);
    assert!(samples.iter().all(|s| s["verdict"] == "certified"));
    assert_eq!(
        samples[0]["state"]["coefficients"],
        serde_json::json!([{"i": 1, "j": 1, "value": "-3"}, {"i": 3, "j": 1, "value": "-10"}])
    );

    let o = run(p, &["linearize", "line.json", "--steps", "5"]);
    let t: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let states: Vec<_> = t["samples"].as_array().unwrap().iter().map(|s| s["state"].clone()).collect();
    assert_eq!(states.len(), 5);
    assert!(states.iter().all(|s| *s == states[0]));

    let o = run(p, &["linearize", "even.json", "--out", "never.json"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!p.join("never.json").exists());

    write(p, "x.json", r#"{"entries": [{"i": 2, "value": "5"}]}"#);
    let o = run(p, &["contract", "x.json", "--steps", "21"]);
    assert_eq!(o.status.code(), Some(0));
    let t: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let samples = t["samples"].as_array().unwrap();
    assert_eq!(samples.len(), 42);
    assert_eq!(samples.last().unwrap()["state"], serde_json::json!({"entries": [{"i": 1, "value": "1"}]}));
}

#[test]
fn project_and_embed() {
    let d = fixtures();
    let p = d.path();
    let o = run(p, &["project", "trefoil.json", "--out", "f.json"]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(p, &["embed-linear", "f.json"]);
    let k = parse_knot(&stdout(&o)).unwrap();
    assert_eq!(k.table().get(&Index::new(3, 1)), Scalar::from_int(-10));
    assert_eq!(run(p, &["project", "even.json"]).status.code(), Some(1));
}

fn report(p: &Path, args: &[&str]) -> (Option<i32>, serde_json::Value, String) {
    let o = run(p, args);
    let text = stdout(&o);
    (o.status.code(), serde_json::from_str(&text).unwrap_or(serde_json::Value::Null), text)
}

#[test]
fn witness_examples() {
    let d = fixtures();
    let p = d.path();
    let (code, v, _) = report(p, &["witness", "--kind", "inf-r", "--r", "2", "--delta", "0.3"]);
    assert_eq!(code, Some(0));
    assert_eq!(v["strictness"]["k"], 12);
    assert_eq!(v["pass"], true);

    let (code, v, _) = report(p, &["witness", "--kind", "p-inf", "--constraint", "1,1,0,2"]);
    assert_eq!(code, Some(0));
    assert_eq!(v["inclusion"]["delta"], "1/2");

    let (code, v, _) = report(p, &["witness", "--kind", "s-box", "--epsilon", "1"]);
    assert_eq!(code, Some(0));
    assert_eq!(v["inclusion"]["delta"], "1/2");
    assert!(v["inclusion"]["inner"].as_str().unwrap().starts_with("box open"));

    let o = run(p, &["witness", "--kind", "inf-r", "--r", "2", "--delta", "0.3", "--k", "5"]);
    assert_eq!(o.status.code(), Some(64));
    assert!(String::from_utf8_lossy(&o.stderr).contains("k > "));
    assert_eq!(run(p, &["witness", "--kind", "r-s", "--r", "1", "--s", "2"]).status.code(), Some(64));
    assert_eq!(run(p, &["witness", "--kind", "nope"]).status.code(), Some(64));

    let (code, v, _) = report(p, &["witness", "--kind", "p-inf", "--constraint", "1,1,2,3"]);
    assert_eq!(code, Some(1));
    assert_eq!(v["pass"], false);
}

#[test]
fn seeded_reports_are_byte_identical() {
    let d = fixtures();
    let p = d.path();
    for kind in ["p-inf", "inf-r", "r-s", "s-box"] {
        let args = ["witness", "--kind", kind, "--seed", "42", "--samples", "20", "--member", "trefoil.json", "--center", "trefoil.json"];
        let (code, _, a) = report(p, &args);
        let (_, _, b) = report(p, &args);
        assert_eq!(code, Some(0), "{kind}: {a}");
        assert_eq!(a, b, "{kind}");
        let mut out = args.to_vec();
        out.extend(["--out", "w.json"]);
        run(p, &out);
        assert_eq!(std::fs::read_to_string(p.join("w.json")).unwrap(), a);
    }
}

#[test]
fn plots() {
    let d = fixtures();
    let p = d.path();
    write(p, "cube.json", r#"{"dimension": 2, "coefficients": [{"i": 1, "j": 1, "value": "1"}, {"i": 2, "j": 3, "value": "1"}]}"#);
    let o = run(p, &["plot", "cube.json", "--range", "-2", "2", "--samples", "401", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let csv = stdout(&o);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t,x1,x2"));
    assert_eq!(lines.clone().count(), 401);
    assert_eq!(lines.next(), Some("-2,-2,-8"));
    assert!(csv.contains("\n0.01,0.01,0.000001\n"));

    let o = run(p, &["plot", "wobble.json", "--samples", "3", "--format", "csv"]);
    let csv = stdout(&o);
    assert!(csv.starts_with("t,x1,x1±,x2,x2±\n"));
    assert!(csv.contains("\n2,8,"));

    let o = run(p, &["plot", "trefoil.json", "--components", "1", "2", "--format", "svg", "--out", "t.svg"]);
    assert_eq!(o.status.code(), Some(0));
    let svg = std::fs::read_to_string(p.join("t.svg")).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 1);
    assert_eq!(svg.matches("<svg").count(), 1);

    run(p, &["linearize", "trefoil.json", "--steps", "11", "--out", "t.json"]);
    let o = run(p, &["plot", "t.json", "--format", "svg", "--out", "frames"]);
    assert_eq!(o.status.code(), Some(0));
    let mut names: Vec<String> =
        std::fs::read_dir(p.join("frames")).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    names.sort();
    assert_eq!(names.len(), 11);
    assert_eq!(names[0], "frame_0000.svg");
    assert_eq!(names[10], "frame_0010.svg");

    assert_eq!(run(p, &["plot", "cube.json", "--range", "1", "1"]).status.code(), Some(64));
    assert_eq!(run(p, &["plot", "cube.json", "--format", "svg", "--components", "1"]).status.code(), Some(64));
    assert_eq!(run(p, &["plot", "line.json", "--components", "4"]).status.code(), Some(64));
    assert_eq!(run(p, &["plot", "cube.json", "--range", "3", "1", "--out", "partial.csv"]).status.code(), Some(64));
    assert!(!p.join("partial.csv").exists());
}

#[test]
fn round_trip_two_hundred_knots() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..200 {
        let n = rng.random_range(1..=4u32);
        let terms = rng.random_range(1..=8);
        let mut entries = std::collections::BTreeMap::new();
        for _ in 0..terms {
            let v = match rng.random_range(0..3) {
                0 => Scalar::from_int(rng.random_range(-50..=50)),
                1 => Scalar::ratio(rng.random_range(-99..=99), rng.random_range(1..=40)),
                _ => {
                    let lo = rng.random_range(-20..20);
                    Scalar::Approx(polyknot_core::Interval::new(
                        polyknot_core::scalar::rat(lo, 7),
                        polyknot_core::scalar::rat(lo + rng.random_range(1..5), 7),
                    ))
                }
            };
            entries.insert(Index::new(rng.random_range(1..=n), rng.random_range(0..=6)), v);
        }
        entries.insert(Index::new(1, 1), Scalar::one());
        let k = make_knot(n, entries).unwrap();
        let text = knot_to_string(&k);
        let back = parse_knot(&text).unwrap();
        assert_eq!(back, k);
        assert_eq!(knot_to_string(&back), text);
    }
}
