use std::path::PathBuf;
use std::process::Command;

use liftspec_cli::run;
use serde_json::Value;

fn data(name: &str) -> String {
    format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn scratch(name: &str, body: &str) -> String {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, body).unwrap();
    path.display().to_string()
}

fn ok_json(args: &[&str]) -> Value {
    let out = run(std::iter::once("liftspec").chain(args.iter().copied()));
    assert_eq!(out.code, 0, "stderr: {}", out.stderr);
    serde_json::from_str(&out.stdout).unwrap()
}

fn exit_code(args: &[&str]) -> i32 {
    run(std::iter::once("liftspec").chain(args.iter().copied())).code
}

fn re(v: &Value) -> f64 {
    v[0].as_f64().unwrap()
}

#[test]
fn spectrum_of_dumbbell_relative_lift() {
    let report = ok_json(&["spectrum", &data("dumbbell.json")]);
    assert_eq!(report["kn"], 6);
    let values: Vec<f64> = report["eigenvalues"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| re(&e["value"]))
        .collect();
    let (s3, s7) = (3f64.sqrt(), 7f64.sqrt());
    let want = [-s7, -s3, 1.0, s3, s7, 3.0];
    assert_eq!(values.len(), want.len());
    for (got, want) in values.iter().zip(want) {
        assert!((got - want).abs() < 1e-12, "{got} vs {want}");
    }
    // the sign irrep has rank zero and contributes nothing
    for e in report["eigenvalues"].as_array().unwrap() {
        for p in e["provenance"].as_array().unwrap() {
            assert_ne!(p["irrep"], 1);
            assert_eq!(p["rank"], 1);
        }
    }
}

#[test]
fn reports_are_deterministic() {
    for cmd in ["spectrum", "eigvecs", "characters", "irreps"] {
        let file = if cmd == "characters" {
            data("dumbbell_regular.json")
        } else {
            data("dumbbell.json")
        };
        let a = run(["liftspec", cmd, &file]);
        let b = run(["liftspec", cmd, &file]);
        assert_eq!(a.code, 0, "{cmd}: {}", a.stderr);
        assert_eq!(a, b, "{cmd}");
    }
    let a = run([
        "liftspec",
        "verify",
        "--trials",
        "3",
        "--seed",
        "9",
        &data("dumbbell_regular.json"),
    ]);
    let b = run([
        "liftspec",
        "verify",
        "--trials",
        "3",
        "--seed",
        "9",
        &data("dumbbell_regular.json"),
    ]);
    assert_eq!(a, b);
}

#[test]
fn computed_irreps_match_catalog_spectrum() {
    // same group given by generators: irreps come from the numerical decomposition
    let regular = ok_json(&["spectrum", &data("dumbbell_regular.json")]);
    assert_eq!(regular["kn"], 12);
    let total: u64 = regular["eigenvalues"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["count"].as_u64().unwrap())
        .sum();
    assert_eq!(total, 12);
}

#[test]
fn eigvecs_select_a_basis() {
    let report = ok_json(&["eigvecs", &data("dumbbell.json")]);
    let columns = report["columns"].as_array().unwrap();
    // k * sum of d^2 = 2 * (1 + 1 + 4)
    assert_eq!(columns.len(), 12);
    assert_eq!(columns.iter().filter(|c| c["selected"] == true).count(), 6);
    assert!(columns
        .iter()
        .filter(|c| c["irrep"] == 1)
        .all(|c| c["zero"] == true && c["selected"] == false));
    assert!(columns
        .iter()
        .all(|c| c["vector"].as_array().unwrap().len() == 6));
    assert!(report["max_residual"].as_f64().unwrap() <= 1e-8);
}

#[test]
fn lift_edge_list() {
    let out = run(["liftspec", "lift", &data("dumbbell.json")]);
    assert_eq!(out.code, 0);
    let want = "u@0 u@0 2\nu@0 v@0 1\nu@1 u@2 2\nu@1 v@1 1\nu@2 v@2 1\nv@0 v@1 2\nv@2 v@2 2\n";
    assert_eq!(out.stdout, want);
}

#[test]
fn lift_adjacency_is_symmetric_and_cubic() {
    let report = ok_json(&["lift", "--emit-adjacency", &data("dumbbell.json")]);
    let labels: Vec<&str> = report["vertices"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap())
        .collect();
    assert_eq!(labels, ["u@0", "u@1", "u@2", "v@0", "v@1", "v@2"]);
    let rows: Vec<Vec<u64>> = report["adjacency"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| {
            r.as_array()
                .unwrap()
                .iter()
                .map(|x| x.as_u64().unwrap())
                .collect()
        })
        .collect();
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row.iter().sum::<u64>(), 3);
        for (j, x) in row.iter().enumerate() {
            assert_eq!(*x, rows[j][i]);
        }
    }
}

#[test]
fn verify_passes_on_random_voltages() {
    for file in [
        "dumbbell.json",
        "dumbbell_regular.json",
        "triangle_cyclic.json",
    ] {
        let report = ok_json(&["verify", "--trials", "5", &data(file)]);
        assert_eq!(report["passed"], true, "{file}");
        assert_eq!(report["trials"].as_array().unwrap().len(), 5);
    }
}

#[test]
fn characters_report_traces_and_spectrum() {
    let report = ok_json(&["characters", &data("dumbbell_regular.json")]);
    assert_eq!(report["count"], 12);
    let fourth = &report["traces"][3]["terms"];
    let terms: Vec<(String, i64)> = fourth
        .as_array()
        .unwrap()
        .iter()
        .map(|t| {
            (
                t["element"].as_str().unwrap().to_string(),
                t["coefficient"].as_i64().unwrap(),
            )
        })
        .collect();
    assert_eq!(
        terms,
        [
            ("()".into(), 66),
            ("(1 2 3)".into(), 8),
            ("(1 3 2)".into(), 8)
        ]
    );

    let spectrum: Vec<f64> = report["spectrum"]
        .as_array()
        .unwrap()
        .iter()
        .map(re)
        .collect();
    let via_irreps = ok_json(&["spectrum", &data("dumbbell_regular.json")]);
    let mut expanded = Vec::new();
    for e in via_irreps["eigenvalues"].as_array().unwrap() {
        expanded.extend(std::iter::repeat_n(
            re(&e["value"]),
            e["count"].as_u64().unwrap() as usize,
        ));
    }
    for (a, b) in spectrum.iter().zip(&expanded) {
        assert!((a - b).abs() < 1e-7);
    }
}

#[test]
fn irreps_listing_and_dump() {
    let report = ok_json(&["irreps", &data("dumbbell.json")]);
    assert_eq!(report["order"], 6);
    assert_eq!(report["dims"], serde_json::json!([1, 1, 2]));
    assert!(report["irreps"][0].get("matrices").is_none());

    let dumped = ok_json(&["irreps", "--dump", &data("dumbbell.json")]);
    let matrices = dumped["irreps"][2]["matrices"].as_array().unwrap();
    assert_eq!(matrices.len(), 6);
    assert_eq!(matrices[0].as_array().unwrap().len(), 2);
}

#[test]
fn parse_errors_exit_2() {
    assert_eq!(
        exit_code(&["spectrum", &scratch("bad.json", "{ not json")]),
        2
    );
    let bad_cycle = r#"{"group":{"kind":"generators","degree":3,"generators":["(1 1)"]},"graph":{"vertices":["a"]}}"#;
    assert_eq!(
        exit_code(&["spectrum", &scratch("bad_cycle.json", bad_cycle)]),
        2
    );
    let bad_family = r#"{"group":{"kind":"named","family":"monster"},"graph":{"vertices":["a"]}}"#;
    assert_eq!(
        exit_code(&["spectrum", &scratch("bad_family.json", bad_family)]),
        2
    );
    assert_eq!(exit_code(&["spectrum", "/nonexistent/instance.json"]), 2);
    assert_eq!(
        exit_code(&["spectrum", "--tol-match", "-1", &data("dumbbell.json")]),
        2
    );
    assert_eq!(exit_code(&["frobnicate"]), 2);
}

#[test]
fn inconsistent_inputs_exit_3() {
    let foreign_voltage = r#"{"group":{"kind":"named","family":"cyclic","param":3},
        "graph":{"vertices":["a"],"edges":[{"from":"a","to":"a","voltage":"(1 2)"}]}}"#;
    assert_eq!(
        exit_code(&["spectrum", &scratch("foreign.json", foreign_voltage)]),
        3
    );
    let unknown_vertex = r#"{"group":{"kind":"named","family":"cyclic","param":3},
        "graph":{"vertices":["a"],"edges":[{"from":"a","to":"b"}]}}"#;
    assert_eq!(
        exit_code(&["spectrum", &scratch("unknown_vertex.json", unknown_vertex)]),
        3
    );
    let not_subgroup = r#"{"group":{"kind":"named","family":"sym3"},
        "subgroup":{"kind":"generators","generators":["(1 2 4)"]},"graph":{"vertices":["a"]}}"#;
    assert_ne!(
        exit_code(&["spectrum", &scratch("not_subgroup.json", not_subgroup)]),
        0
    );
    let directed = r#"{"group":{"kind":"named","family":"cyclic","param":3},
        "graph":{"directed":true,"vertices":["a","b"],"edges":[{"from":"a","to":"b","voltage":"(1 2 3)"}]}}"#;
    let directed = scratch("directed.json", directed);
    assert_eq!(exit_code(&["spectrum", &directed]), 3);
    assert_eq!(exit_code(&["verify", &directed]), 3);
    assert_eq!(exit_code(&["characters", &data("dumbbell.json")]), 3);
}

#[test]
fn directed_graphs_lift_and_use_characters() {
    let directed = r#"{"group":{"kind":"named","family":"cyclic","param":3},
        "graph":{"directed":true,"vertices":["a","b"],"edges":[
            {"from":"a","to":"b","voltage":"(1 2 3)"},{"from":"b","to":"a"}]}}"#;
    let directed = scratch("directed_cycle.json", directed);
    let out = run(["liftspec", "lift", &directed]);
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout.lines().count(), 6);
    // the lift is a directed 6-cycle: eigenvalues are the sixth roots of unity
    let report = ok_json(&["characters", &directed]);
    for root in report["spectrum"].as_array().unwrap() {
        let (x, y) = (root[0].as_f64().unwrap(), root[1].as_f64().unwrap());
        assert!(((x * x + y * y).sqrt() - 1.0).abs() < 1e-9);
    }
}

#[test]
fn tolerance_flags_are_accepted() {
    let report = ok_json(&[
        "verify",
        "--trials",
        "2",
        "--tol-match",
        "1e-6",
        "--tol-residual",
        "1e-7",
        &data("dumbbell.json"),
    ]);
    assert_eq!(report["passed"], true);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_liftspec");
    let status = Command::new(bin)
        .args(["spectrum", &data("dumbbell.json")])
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(0));
    let report: Value = serde_json::from_slice(&status.stdout).unwrap();
    assert_eq!(report["kn"], 6);
    let status = Command::new(bin)
        .args(["characters", &data("dumbbell.json")])
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&status.stderr).contains("trivial subgroup"));
}
