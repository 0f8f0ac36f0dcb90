use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use tiltwall_core::{int, rat, FirstWallReport};

fn configs() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn cfg(name: &str) -> String {
    configs().join(name).display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tiltwall"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn first_wall_worked_example() {
    let v = json(&["first-wall", "--config", &cfg("worked.toml")]);
    assert_eq!(v["b0"], "-26/5");
    assert_eq!(v["w_f"], "1103/50");
    assert_eq!(v["w_js"], "626/25");
    assert_eq!(v["survivors"], serde_json::json!(["-2"]));
    assert_eq!(v["command"], "first-wall");
    let p = &v["provenance"];
    assert_eq!(p["config_sha256"].as_str().unwrap().len(), 64);
    assert_eq!(p["version"], env!("CARGO_PKG_VERSION"));
    let names: Vec<_> = p["filter_transcript"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| t["filter"].as_str().unwrap())
        .collect();
    assert_eq!(names, ["w-range", "b-range", "combined", "f2-ch3"]);
}

#[test]
fn first_wall_json_parses_back_into_report() {
    let v = json(&["first-wall", "--config", &cfg("worked.toml")]);
    let r: FirstWallReport = serde_json::from_value(v).unwrap();
    assert_eq!(r.b0, rat(-26, 5));
    assert_eq!(r.survivors, vec![int(-2)]);
    let again: FirstWallReport = serde_json::from_value(serde_json::to_value(&r).unwrap()).unwrap();
    assert_eq!(again, r);
}

#[test]
fn outputs_are_byte_identical() {
    let a = run(&["first-wall", "--config", &cfg("quintic.toml")]);
    let b = run(&["first-wall", "--config", &cfg("quintic.toml")]);
    assert_eq!(a.stdout, b.stdout);
    let a = run(&["plot", "--config", &cfg("worked.toml")]);
    let b = run(&["plot", "--config", &cfg("worked.toml")]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn plot_writes_parallel_walls() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("walls.svg");
    let v = json(&[
        "plot",
        "--config",
        &cfg("worked.toml"),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(v["walls"], 1);
    let svg = std::fs::read_to_string(&out).unwrap();
    let doc = roxmltree::Document::parse(&svg).unwrap();
    let walls: Vec<_> = doc
        .descendants()
        .filter(|n| n.has_tag_name("line"))
        .collect();
    assert!(!walls.is_empty());
    for l in walls {
        let f = |k: &str| l.attribute(k).unwrap().parse::<f64>().unwrap();
        let slope = -(f("y2") - f("y1")) / (f("x2") - f("x1"));
        assert!((slope + 26.0 / 5.0).abs() < 1e-5, "slope {slope}");
    }
}

#[test]
fn decimal_flag() {
    let v = json(&[
        "first-wall",
        "--config",
        &cfg("worked.toml"),
        "--decimal",
        "2",
    ]);
    assert_eq!(v["b0"], "-5.20");
    assert_eq!(v["w_f"], "22.06");
}

#[test]
fn min_n_is_integer_or_none() {
    let v = json(&["min-n", "--config", &cfg("quintic.toml"), "--n-max", "60"]);
    assert!(v["min_n"].as_u64().unwrap() <= 60);
    let v = json(&["min-n", "--config", &cfg("quintic.toml"), "--n-max", "1"]);
    assert!(v["min_n"] == "none" || v["min_n"] == 1);
}

#[test]
fn counting_commands() {
    let q = cfg("quintic-n1.toml");
    assert_eq!(json(&["chi", "--config", &q])["chi"], "5");
    assert_eq!(json(&["en", "--config", &q])["e_n"], 5);
    let w = cfg("worked.toml");
    let t = json(&["twist", "--config", &w, "--a", "1"]);
    assert_eq!(t["mhat_before"], t["mhat_after"]);
    let toda = json(&[
        "toda",
        "--config",
        &cfg("quintic.toml"),
        "--i-table",
        &cfg("i-quintic.toml"),
        "--p-table",
        &cfg("p-origin.toml"),
    ]);
    assert_eq!(toda["toda"]["terms"].as_array().unwrap().len(), 1);
    assert_eq!(toda["toda"]["value"], toda["dt_with_minus_m"]);
}

#[test]
fn modular_commands() {
    let q = cfg("quintic-n1.toml");
    let g = json(&["goettsche", "--config", &q, "--d", "0"]);
    assert_eq!(g["series"]["offset"], "-55/24");
    assert_eq!(g["pole_order"], "55/24");
    let t = json(&[
        "t-check",
        "--config",
        &q,
        "--nl-table",
        &cfg("nl-quintic-n1.toml"),
    ]);
    assert_eq!(t["t_check"], true);
    assert_eq!(t["components"].as_array().unwrap().len(), 5);
    let s = json(&["s-matrix", "--modulus", "2"]);
    assert!(s["unitarity_deviation"].as_f64().unwrap() < 1e-12);
}

#[test]
fn li_region_and_wall() {
    let v = json(&["li-region", "--b", "-1/2", "--w", "3/8"]);
    assert_eq!(v["bound"], "1/4");
    assert_eq!(v["contains"], true);
    let v = json(&[
        "wall",
        "--config",
        &cfg("worked.toml"),
        "--u",
        "0,10,-2,0",
        "--v",
        "1,0,-2,-3",
    ]);
    assert_eq!(v["wall"]["kind"], "line");
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["first-wall", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    let parity = run(&[
        "t-check",
        "--config",
        &cfg("quintic-n1.toml"),
        "--nl-table",
        &cfg("nl-parity-violation.toml"),
    ]);
    assert_eq!(parity.status.code(), Some(3));
    let outside = run(&[
        "bg-check",
        "--config",
        &cfg("worked.toml"),
        "--charge",
        "1,0,0,0",
        "--b",
        "0",
        "--w",
        "-1",
    ]);
    assert_eq!(outside.status.code(), Some(3));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "[threefold]\nh3 = 1\nc2H = 10\ncolour = 3\n").unwrap();
    assert_eq!(
        run(&["first-wall", "--config", bad.to_str().unwrap()])
            .status
            .code(),
        Some(4)
    );
    let no_charge = dir.path().join("nocharge.toml");
    std::fs::write(&no_charge, "[threefold]\nh3 = 1\nc2H = 10\n").unwrap();
    assert_eq!(
        run(&["en", "--config", no_charge.to_str().unwrap()])
            .status
            .code(),
        Some(4)
    );
    assert_eq!(
        run(&["en", "--config", "/no/such/file.toml"]).status.code(),
        Some(4)
    );
}
