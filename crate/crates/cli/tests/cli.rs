use std::process::{Command, Output};

use acampo_core::table::CountTable;
use serde_json::Value;

fn acampo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_acampo"))
        .args(args)
        .env_remove("ACAMPO_MAX_CELLS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json output")
}

#[test]
fn count_flat_degree_three() {
    let o = acampo(&["count", "--codim", "0", "--degree", "3", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["agree"], true);
    let values: Vec<&str> = v["values"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x["value"].as_str().unwrap())
        .collect();
    assert_eq!(values, ["22", "22", "22"]);
}

#[test]
fn count_codim_one_and_support() {
    let o = acampo(&["count", "-c", "1", "-d", "2", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "route,convention,value\nsolver,thm19,4\nsolver,remark,4\nalgorithm1,,4\n"
    );
    let o = acampo(&["count", "-c", "4", "-d", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("all routes agree"));
}

#[test]
fn conventions_disagree_is_exit_two() {
    let o = acampo(&["count", "-c", "4", "-d", "4", "--format", "json"]);
    assert_eq!(o.status.code(), Some(2));
    let v = json(&o);
    assert_eq!(v["agree"], false);
    let o = acampo(&["count", "-c", "4", "-d", "4", "--convention", "thm19"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn table_csv_rows() {
    let o = acampo(&[
        "table",
        "--cmax",
        "1",
        "--dmax",
        "3",
        "--format",
        "csv",
        "--convention",
        "thm19",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(
        out.contains("c\\d,0,1,2,3\n0,1,1,4,22\n1,0,0,4,48\n"),
        "{out}"
    );
}

#[test]
fn table_single_cell() {
    let o = acampo(&["table", "--cmax", "0", "--dmax", "0", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    for t in json(&o)["tables"].as_array().unwrap() {
        assert_eq!(t["values"], serde_json::json!([["1"]]));
    }
}

#[test]
fn table_json_roundtrips_through_schema() {
    let o = acampo(&["table", "--cmax", "3", "--dmax", "5", "--format", "json"]);
    let v = json(&o);
    for t in v["tables"].as_array().unwrap() {
        let parsed = CountTable::from_json(&t.to_string()).unwrap();
        assert_eq!(parsed.cmax, 3);
        assert_eq!(serde_json::to_value(&parsed).unwrap(), *t);
    }
}

#[test]
fn text_and_json_carry_same_numbers() {
    let text = stdout(&acampo(&["count", "-c", "2", "-d", "6"]));
    let v = json(&acampo(&[
        "count", "-c", "2", "-d", "6", "--format", "json",
    ]));
    for x in v["values"].as_array().unwrap() {
        assert!(text.contains(x["value"].as_str().unwrap()));
    }
    assert!(text.contains("109296"));
}

#[test]
fn simple_table_agrees_with_formula() {
    let o = acampo(&["simple", "--cmax", "3", "--dmax", "8", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["tables"].as_array().unwrap().len(), 2);
}

#[test]
fn verify_single_checks() {
    let o = acampo(&["verify", "--only", "growth-constant", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    let g = r["details"]["inverse_y0"].as_f64().unwrap();
    assert!((g - 25.327).abs() <= 0.001);

    let o = acampo(&[
        "verify", "--only", "oracle", "--degree", "3", "--format", "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let rows = json(&o)["details"]["rows"].clone();
    assert_eq!(rows[3]["enumerated"], 22);
    assert_eq!(rows[3]["formula"], "22");
}

#[test]
fn verify_quick_scale_stream() {
    let o = acampo(&["verify", "--scale", "quick", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let lines: Vec<Value> = stdout(&o)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), acampo_core::suite::CHECK_NAMES.len());
    for r in &lines {
        for key in ["check", "status", "mandatory", "offending_cells", "details"] {
            assert!(r.get(key).is_some(), "{key} missing in {r}");
        }
    }
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(acampo(&["count"]).status.code(), Some(1));
    assert_eq!(
        acampo(&["count", "-c", "-1", "-d", "2"]).status.code(),
        Some(1)
    );
    assert_eq!(
        acampo(&[
            "table",
            "--cmax",
            "1",
            "--dmax",
            "1",
            "--convention",
            "other"
        ])
        .status
        .code(),
        Some(1)
    );
    assert_eq!(
        acampo(&["verify", "--only", "nonsense"]).status.code(),
        Some(1)
    );
    assert_eq!(acampo(&["asymptotics", "-d", "0"]).status.code(), Some(1));
    assert_eq!(acampo(&["--help"]).status.code(), Some(0));
}

#[test]
fn resource_guard_exit_three() {
    let o = Command::new(env!("CARGO_BIN_EXE_acampo"))
        .args(["table", "--cmax", "10", "--dmax", "10"])
        .env("ACAMPO_MAX_CELLS", "50")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(acampo(&["oracle", "--degree", "5"]).status.code(), Some(3));
    assert_eq!(
        acampo(&["verify", "--only", "oracle", "--degree", "9"])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn oracle_dump_and_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("flat2.json");
    let o = acampo(&[
        "oracle",
        "-d",
        "2",
        "--dump",
        "--format",
        "json",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["enumerated"], 4);
    let diagrams = v["diagrams"].as_array().unwrap();
    assert_eq!(diagrams.len(), 4);
    assert_eq!(diagrams[0]["chords"].as_array().unwrap().len(), 4);
}

#[test]
fn asymptotics_rows() {
    let o = acampo(&["asymptotics", "-d", "200", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    for row in json(&o)["rows"].as_array().unwrap() {
        let r = row["ratio"].as_f64().unwrap();
        assert!((0.8..=1.2).contains(&r), "{row}");
    }
}
