use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    [
        env!("CARGO_MANIFEST_DIR"),
        "..",
        "..",
        "fixtures",
        &format!("{name}.json"),
    ]
    .iter()
    .collect()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("bbloc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn bbloc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bbloc"))
        .args(args)
        .env_remove("BBLOC_SEED")
        .output()
        .expect("binary runs")
}

fn run(args: &[&str]) -> (i32, String) {
    let out = bbloc(args);
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json(args: &[&str]) -> Value {
    let (code, out) = run(args);
    assert_eq!(code, 0, "{args:?}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn every_fixture_verifies() {
    for name in [
        "hollow-triangle",
        "line-conic",
        "p1",
        "p2",
        "square",
        "p1xp1",
        "f1-trapezoid",
        "octahedron-tilted",
        "bott-samelson",
        "hilbert4",
    ] {
        let (code, out) = run(&["verify", "--model", path_str(&fixture(name))]);
        assert_eq!(code, 0, "{name}:\n{out}");
        assert!(!out.contains("FAIL"), "{name}:\n{out}");
    }
}

#[test]
fn bad_input_exits_with_two() {
    let broken = scratch("broken.json");
    std::fs::write(&broken, "{ \"kind\": \"toric\", ").unwrap();
    assert_eq!(run(&["complex", "--model", path_str(&broken)]).0, 2);

    let unknown = scratch("unknown-field.json");
    std::fs::write(
        &unknown,
        r#"{ "kind": "toric", "vertices": [{ "id": "o", "coords": [0] }, { "id": "a", "coords": [1] }], "xi": [1], "colour": 3 }"#,
    )
    .unwrap();
    assert_eq!(run(&["coeffs", "--model", path_str(&unknown)]).0, 2);

    assert_eq!(run(&["complex", "--model", "/nonexistent/model.json"]).0, 2);
    let (code, _) = run(&["density", "--model", path_str(&fixture("p2"))]);
    assert_eq!(code, 2, "density without --points");
}

#[test]
fn corrupted_coefficient_fails_verification() {
    let text = std::fs::read_to_string(fixture("line-conic")).unwrap();
    let mut v: Value = serde_json::from_str(&text).unwrap();
    v["chains"][0]["v"] = Value::from(4);
    let bad = scratch("line-conic-v4.json");
    std::fs::write(&bad, serde_json::to_string(&v).unwrap()).unwrap();
    let (code, out) = run(&["verify", "--model", path_str(&bad)]);
    assert_eq!(code, 1, "{out}");
    assert!(out.contains("FAIL"));
}

#[test]
fn output_is_deterministic() {
    let f1 = fixture("f1-trapezoid");
    for cmd in ["complex", "coeffs", "verify"] {
        let args = [cmd, "--model", path_str(&f1)];
        assert_eq!(bbloc(&args).stdout, bbloc(&args).stdout, "{cmd}");
    }
    let p2 = fixture("p2");
    let args = ["verify", "--model", path_str(&p2), "--format", "json"];
    let seeded = |seed: &str| {
        Command::new(env!("CARGO_BIN_EXE_bbloc"))
            .args(args)
            .env("BBLOC_SEED", seed)
            .output()
            .unwrap()
    };
    let a = seeded("17");
    assert_eq!(a.stdout, seeded("17").stdout);
    let report: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(report["seed"], 17);
    assert_eq!(seeded("not a number").status.code(), Some(2));
}

#[test]
fn exported_model_reproduces_coefficients_and_densities() {
    let points = scratch("points-f1.json");
    std::fs::write(
        &points,
        r#"[["1/3", "1/4"], ["3/2", "1/5"], [5, 5], ["1/2", "1/2"], ["-1/7", "2/9"]]"#,
    )
    .unwrap();
    for name in ["f1-trapezoid", "octahedron-tilted", "hollow-triangle"] {
        let exported = scratch(&format!("{name}-generic.json"));
        let (code, _) = run(&[
            "complex",
            "--model",
            path_str(&fixture(name)),
            "--as-model",
            "--out",
            path_str(&exported),
        ]);
        assert_eq!(code, 0);
        let original = json(&["coeffs", "--model", path_str(&fixture(name)), "--format", "json"]);
        let copy = json(&["coeffs", "--model", path_str(&exported), "--format", "json"]);
        assert_eq!(original["chains"], copy["chains"], "{name}");
        assert_eq!(original["degree"], copy["degree"], "{name}");
        let a = json(&["complex", "--model", path_str(&fixture(name)), "--format", "json"]);
        let b = json(&["complex", "--model", path_str(&exported), "--format", "json"]);
        assert_eq!(a["faces"], b["faces"], "{name}");
        assert_eq!(run(&["verify", "--model", path_str(&exported)]).0, 0, "{name}");
    }
    let exported = scratch("f1-trapezoid-generic.json");
    let a = json(&[
        "density",
        "--model",
        path_str(&fixture("f1-trapezoid")),
        "--points",
        path_str(&points),
        "--format",
        "json",
    ]);
    let b = json(&[
        "density",
        "--model",
        path_str(&exported),
        "--points",
        path_str(&points),
        "--format",
        "json",
    ]);
    let densities = |r: &Value| {
        r["rows"]
            .as_array()
            .unwrap()
            .iter()
            .map(|row| row["density"].clone())
            .collect::<Vec<_>>()
    };
    assert_eq!(densities(&a), densities(&b));
}

#[test]
fn density_reports_values_and_skips_non_generic_points() {
    let points = scratch("points-density.json");
    std::fs::write(&points, r#"[["1/3", "1/4"], ["1/2", "1/2"], [3, "1/7"]]"#).unwrap();
    let (code, out) = run(&[
        "density",
        "--model",
        path_str(&fixture("f1-trapezoid")),
        "--points",
        path_str(&points),
    ]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().filter(|l| l.starts_with('(')).collect();
    assert_eq!(lines.len(), 3, "{out}");
    assert!(
        lines[0].contains("density=1") && lines[0].contains("alternating=1"),
        "{out}"
    );
    assert!(lines[1].contains("non-generic"), "{out}");
    assert!(lines[2].contains("density=0"), "{out}");

    let wrong_dim = scratch("points-3d.json");
    std::fs::write(&wrong_dim, "[[1, 2, 3]]").unwrap();
    assert_eq!(
        run(&[
            "density",
            "--model",
            path_str(&fixture("p2")),
            "--points",
            path_str(&wrong_dim)
        ])
        .0,
        2
    );
}

#[test]
fn json_reports_carry_the_computed_data() {
    let c = json(&[
        "complex",
        "--model",
        path_str(&fixture("hollow-triangle")),
        "--format",
        "json",
    ]);
    assert_eq!(c["f_vector"], serde_json::json!([3, 3]));
    assert_eq!(c["pure"], true);
    let k = json(&[
        "coeffs",
        "--model",
        path_str(&fixture("octahedron-tilted")),
        "--format",
        "json",
    ]);
    assert_eq!(k["degree"], 8);
    assert_eq!(k["chains"].as_array().unwrap().len(), 4);
    let v = json(&["verify", "--model", path_str(&fixture("square")), "--format", "json"]);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["status"] != "fail"));
}

#[test]
fn svg_for_polygons_only() {
    for name in ["f1-trapezoid", "square"] {
        let out = scratch(&format!("{name}.svg"));
        let (code, _) = run(&["svg", "--model", path_str(&fixture(name)), "--out", path_str(&out)]);
        assert_eq!(code, 0, "{name}");
        let text = std::fs::read_to_string(&out).unwrap();
        assert!(text.starts_with("<svg") && text.trim_end().ends_with("</svg>"));
        assert_eq!(text.matches("v=").count(), 2, "{name}: two triangles");
    }
    assert_eq!(run(&["svg", "--model", path_str(&fixture("octahedron-tilted"))]).0, 2);
    assert_eq!(run(&["svg", "--model", path_str(&fixture("hollow-triangle"))]).0, 2);
}
