use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn sewing(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sewing")).args(args).env_remove("SEWING_BUDGET").output().unwrap()
}

fn json_of(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn terms(v: &Value) -> Vec<String> {
    v["result"]["terms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| format!("{}/{}", t["num"].as_str().unwrap(), t["den"].as_str().unwrap()))
        .collect()
}

#[test]
fn heisenberg_partition_matches_the_closed_form() {
    let v = json_of(&sewing(&["partition", "--model", "heisenberg:1", "--genus", "1", "--trunc", "2", "--points", "builtin:g1a"]));
    assert_eq!(terms(&v), ["1/1", "-1/4", "1/4"]);
    let prov = &v["provenance"];
    assert_eq!(prov["model"], "heisenberg:1");
    assert_eq!(prov["points"], serde_json::json!(["3", "1"]));
    assert_eq!(prov["truncation"], 2);
    assert_eq!(prov["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(prov["certificate"]["r"], "2/3");
    let o = json_of(&sewing(&["oracle", "--model", "heisenberg:1", "--trunc", "2", "--points", "builtin:g1a"]));
    assert_eq!(terms(&o), terms(&v));
}

#[test]
fn csv_table_has_exponent_and_fraction_columns() {
    let out = sewing(&["--out", "csv", "partition", "--model", "heisenberg:1", "--trunc", "2"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("# provenance: {"));
    assert_eq!(&lines[1..], ["e1,num,den", "0,1,1", "1,-1,4", "2,1,4"]);
}

#[test]
fn theta_of_e8() {
    let v = json_of(&sewing(&["theta", "--lattice", "E8", "--trunc", "3"]));
    assert_eq!(v["result"]["coefficients"], serde_json::json!(["1", "240", "2160", "6720"]));
}

#[test]
fn user_lattice_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "a1.json", r#"{"name": "myA1", "rank": 1, "gram": [[2]]}"#);
    let v = json_of(&sewing(&["theta", "--lattice", &f, "--trunc", "2"]));
    assert_eq!(v["result"]["coefficients"], serde_json::json!(["1", "2", "0"]));
    let model = format!("lattice:{f}");
    let p = json_of(&sewing(&["partition", "--model", &model, "--trunc", "1"]));
    let o = json_of(&sewing(&["oracle", "--model", "lattice:A1", "--trunc", "1"]));
    assert_eq!(terms(&p), terms(&o));
}

#[test]
fn compare_reports_equal_and_budget_overruns() {
    let out = sewing(&["compare", "--a", "lattice:D16plus", "--b", "tensor:lattice:E8,lattice:E8", "--trunc", "4"]);
    assert_eq!(out.status.code(), Some(3));
    let v = json_of(&sewing(&[
        "compare", "--a", "lattice:D16plus", "--b", "tensor:lattice:E8,lattice:E8", "--trunc", "4", "--method", "oracle",
    ]));
    assert_eq!(v["result"]["result"], "equal");
    let v = json_of(&sewing(&["compare", "--a", "heisenberg:1", "--b", "heisenberg:2", "--trunc", "2"]));
    assert_eq!(v["result"]["result"], "differ");
    assert_eq!(v["result"]["exponent"], serde_json::json!([1]));
    assert!(v["result"]["warning"].is_string());
}

#[test]
fn budget_flag_and_environment_override() {
    let out = sewing(&["--budget", "1", "partition", "--model", "heisenberg:1", "--trunc", "3"]);
    assert_eq!(out.status.code(), Some(3));
    let out = Command::new(env!("CARGO_BIN_EXE_sewing"))
        .args(["partition", "--model", "heisenberg:1", "--trunc", "3"])
        .env("SEWING_BUDGET", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn exit_codes() {
    assert_eq!(sewing(&["partition"]).status.code(), Some(2));
    assert_eq!(sewing(&["partition", "--model", "nope:1", "--trunc", "1"]).status.code(), Some(2));
    assert_eq!(sewing(&["partition", "--model", "heisenberg:1", "--trunc", "1", "--points", "list:1,3"]).status.code(), Some(4));
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "c.json", r#"{"w": "1", "z": "0", "q": "1/4"}"#);
    // irrational fixed points: approximate, with an error bound
    let v = json_of(&sewing(&["schottky", "convert", "--input", &f]));
    assert_eq!(v["result"]["exact"], false);
    assert!(v["result"].get("round_trip").is_none());
    let g = write(dir.path(), "p.json", r#"{"w": "1", "z": "1", "q": "1"}"#);
    assert_eq!(sewing(&["schottky", "convert", "--input", &g]).status.code(), Some(4));
}

#[test]
fn correlate_with_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "c.json",
        r#"{"insertions": [{"state": "h[1,-1]", "point": "3"}, {"state": "h[1,-1]", "point": "1"}]}"#,
    );
    let v = json_of(&sewing(&["correlate", "--model", "heisenberg:1", "--input", &f, "--oracle"]));
    assert_eq!(v["result"]["value"], "1/4");
    assert_eq!(v["result"]["oracle"]["agrees"], true);
    let g = write(
        dir.path(),
        "l.json",
        r#"{"insertions": [{"state": "vac @ [1]", "point": "2"}, {"terms": [{"state": "vac @ [-1]", "coeff": "2"}], "point": "1"}]}"#,
    );
    let v = json_of(&sewing(&["correlate", "--model", "lattice:A1", "--input", &g]));
    assert!(v["result"]["value"].is_string());
}

#[test]
fn schottky_subcommands() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "c.json", r#"{"w": "4", "z": "-2", "q": "-8"}"#);
    let v = json_of(&sewing(&["schottky", "convert", "--input", &f]));
    assert_eq!(v["result"]["exact"], true);
    assert_eq!(v["result"]["round_trip"], serde_json::json!({"w": "4", "z": "-2", "q": "-8"}));
    let back = write(
        dir.path(),
        "b.json",
        &format!(
            r#"{{"W": {}, "Z": {}, "mu": {}}}"#,
            v["result"]["W"], v["result"]["Z"], v["result"]["mu"]
        ),
    );
    let w = json_of(&sewing(&["schottky", "convert", "--input", &back]));
    assert_eq!(w["result"]["q"], "-8");
    let u = write(dir.path(), "u.json", r#"{"handles": [{"w": "3", "z": "1", "q": "1/100"}], "r": "9/10"}"#);
    let v = json_of(&sewing(&["schottky", "check-ur", "--input", &u]));
    assert_eq!(v["result"]["in_region"], true);
    assert_eq!(v["result"]["disks_disjoint"], true);
    let p = write(dir.path(), "p.json", r#"{"handles": [{"w": "4", "z": "-2", "q": "-8"}], "handle": 0, "y": "0"}"#);
    let v = json_of(&sewing(&["schottky", "plumb", "--input", &p]));
    assert_eq!(v["result"]["x"], "0");
    assert_eq!(v["result"]["relation_holds"], true);
    let v = json_of(&sewing(&["schottky", "certify", "--points", "builtin:g2a"]));
    assert_eq!(v["result"]["ordered"], true);
}

#[test]
fn pv_table() {
    let v = json_of(&sewing(&["pv", "--model", "heisenberg:1", "--cutoff", "4", "--trace-k", "2"]));
    let dims: Vec<u64> = v["result"]["weights"].as_array().unwrap().iter().map(|w| w["dim_pv"].as_u64().unwrap()).collect();
    assert_eq!(dims, [1, 0, 1, 1, 3]);
    assert!(v["result"]["trace_checks"].as_array().unwrap().iter().all(|r| r["passed"] == true));
}

#[test]
fn output_is_independent_of_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for t in ["1", "4", "16"] {
        let path = dir.path().join(format!("out{t}.json"));
        let p = path.to_str().unwrap();
        let out = sewing(&["--threads", t, "-o", p, "partition", "--model", "lattice:A1", "--genus", "2", "--trunc", "2"]);
        assert!(out.status.success());
        outputs.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[0], outputs[2]);
}

#[test]
fn separating_variant_and_normalization() {
    let v = json_of(&sewing(&[
        "partition", "--model", "heisenberg:1", "--genus", "2", "--trunc", "2", "--variant", "sep:1", "--sep-w", "1/2",
        "--sep-z", "1/4", "--sep-k", "2",
    ]));
    assert_eq!(v["result"]["vars"], 3);
    let v = json_of(&sewing(&["partition", "--model", "heisenberg:2", "--genus", "2", "--trunc", "2", "--normalized"]));
    assert_eq!(terms(&v), ["1/1"]);
}
