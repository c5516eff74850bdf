use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_llm-astar"))
}

fn gen(out: &Path, maps: &str) {
    let status = bin()
        .args(["gen", "--maps", maps, "--pairs", "10", "--seed", "7", "--out"])
        .arg(out)
        .status()
        .unwrap();
    assert!(status.success());
}

#[test]
fn gen_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    gen(&a, "3");
    gen(&b, "3");
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let maps: serde_json::Value = serde_json::from_slice(&std::fs::read(&a).unwrap()).unwrap();
    assert_eq!(maps.as_array().unwrap().len(), 3);
}

#[test]
fn bench_astar_is_all_hundreds() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("d.json");
    let report = dir.path().join("r.json");
    gen(&data, "2");
    let out = bin()
        .args(["bench", "--algo", "astar", "--dataset"])
        .arg(&data)
        .arg("--out-json")
        .arg(&report)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let json: serde_json::Value = serde_json::from_slice(&std::fs::read(&report).unwrap()).unwrap();
    let row = &json["rows"][0];
    for key in ["operation_ratio", "storage_ratio", "relative_path_length", "valid_path_ratio"] {
        assert_eq!(row[key], 100.0, "{key}");
    }
    assert!(String::from_utf8_lossy(&out.stdout).contains("Operation Ratio"));
}

#[test]
fn bench_oracle_guided() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("d.json");
    let report = dir.path().join("r.json");
    gen(&data, "5");
    let status = bin()
        .args(["bench", "--algo", "llm_astar", "--provider", "oracle:3", "--dataset"])
        .arg(&data)
        .arg("--out-json")
        .arg(&report)
        .status()
        .unwrap();
    assert!(status.success());
    let json: serde_json::Value = serde_json::from_slice(&std::fs::read(&report).unwrap()).unwrap();
    let row = &json["rows"][1];
    assert_eq!(row["algorithm"], "LLM-A*");
    assert!(row["operation_ratio"].as_f64().unwrap() < 100.0);
    assert_eq!(row["valid_path_ratio"], 100.0);
}

#[test]
fn cold_cache_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("d.json");
    gen(&data, "1");
    let status = bin()
        .args(["replay", "--dataset"])
        .arg(&data)
        .arg("--cache")
        .arg(dir.path().join("missing.json"))
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn svg_and_scale_commands() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("d.json");
    gen(&data, "2");
    let svg = dir.path().join("s.svg");
    let status = bin().args(["svg", "--map", "1", "--pair", "3", "--dataset"]).arg(&data).arg("--out").arg(&svg).status().unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<svg") && text.contains("class=\"waypoint\""));

    let report = dir.path().join("scale.json");
    let status = bin()
        .args(["scale", "--scales", "1,2", "--queries", "3", "--dataset"])
        .arg(&data)
        .arg("--out-json")
        .arg(&report)
        .status()
        .unwrap();
    assert!(status.success());
    let json: serde_json::Value = serde_json::from_slice(&std::fs::read(&report).unwrap()).unwrap();
    assert_eq!(json["series"][0][1][0]["combined"], 1.0);
}
