use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn hillgap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hillgap")).args(args).output().expect("spawn hillgap")
}

fn write_config(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const FREE: &str = "[potential]\nkind = \"zero\"\nperiod = 3.141592653589793\n[bands]\nbc = \"both\"\n";

fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines().filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines.next().unwrap().split(',').map(str::to_owned).collect();
    let rows = lines.map(|l| l.split(',').map(str::to_owned).collect()).collect();
    (header, rows)
}

#[test]
fn free_spectrum_csv() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "free.toml", FREE);
    let out = hillgap(&["spectrum", "--config", s(&cfg), "--m-range", "1:3"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("# pairs\nbc,m,n,center,method,lower,upper,gap,degenerate,isolated\n"));
    let pairs = &text[..text.find("# ground_state").unwrap()];
    let (header, rows) = csv_rows(pairs);
    let col = |name: &str| header.iter().position(|h| h == name).unwrap();
    assert_eq!(rows.len(), 2 * 3 * 2);
    for r in &rows {
        let n: f64 = r[col("n")].parse().unwrap();
        let lower: f64 = r[col("lower")].parse().unwrap();
        assert!((lower - n * n).abs() < 1e-8, "{r:?}");
        assert_eq!(r[col("degenerate")], "true");
    }
    // sorted by boundary condition, then band
    let keys: Vec<(String, usize)> = rows.iter().map(|r| (r[0].clone(), r[1].parse().unwrap())).collect();
    let mut sorted = keys.clone();
    sorted.sort_by_key(|(bc, m)| (bc != "periodic", *m));
    assert_eq!(keys, sorted);
}

#[test]
fn runs_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "m.toml", "[potential]\nkind = \"mathieu(1.0)\"\n[bands]\nm_min = 1\nm_max = 4\n");
    let a = hillgap(&["report", "-c", s(&cfg)]);
    let b = hillgap(&["report", "-c", s(&cfg)]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn json_mirrors_csv() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "h.toml",
        "[potential]\nkind = \"harmonic_decay\"\nalpha = 1.0\nharmonics = 16\n[bands]\nm_min = 2\nm_max = 6\n",
    );
    let csv = hillgap(&["gaps", "-c", s(&cfg)]);
    let json = hillgap(&["gaps", "-c", s(&cfg), "--format", "json"]);
    assert!(csv.status.success() && json.status.success());
    let (header, rows) = csv_rows(&String::from_utf8(csv.stdout).unwrap());
    let parsed: Value = serde_json::from_slice(&json.stdout).unwrap();
    let records = parsed["gaps"].as_array().unwrap();
    assert_eq!(records.len(), rows.len());
    for (row, rec) in rows.iter().zip(records) {
        assert_eq!(rec.as_object().unwrap().len(), header.len());
        for (h, cell) in header.iter().zip(row) {
            let v = &rec[h.as_str()];
            match v {
                Value::Number(x) => assert_eq!(x.as_f64().unwrap(), cell.parse::<f64>().unwrap(), "{h}"),
                Value::String(t) => assert_eq!(t, cell),
                Value::Bool(b) => assert_eq!(b.to_string(), *cell),
                Value::Null => assert!(cell.is_empty()),
                other => panic!("unexpected {other}"),
            }
        }
    }
}

#[test]
fn out_path_splits_tables() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "sq.toml", "[potential]\nkind = \"square(1.0)\"\n[bands]\nm_min = 5\nm_max = 8\n");
    let out = dir.path().join("res").join("sq.csv");
    let st = hillgap(&["asym", "-c", s(&cfg), "--out", s(&out)]);
    assert!(st.status.success(), "{}", String::from_utf8_lossy(&st.stderr));
    for t in ["asym", "conditions", "simplicity", "summary"] {
        let p = dir.path().join("res").join(format!("sq.{t}.csv"));
        assert!(p.exists(), "{}", p.display());
    }
    let summary = std::fs::read_to_string(dir.path().join("res/sq.summary.csv")).unwrap();
    assert!(summary.contains("periodic,rho_decay,"));
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let bad = write_config(&dir, "bad.toml", "[potential]\nkind = \"zero\"\n[bands]\nm_min = 0\n");
    let out = hillgap(&["gaps", "-c", s(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bands.m_min"));

    let small_k = write_config(&dir, "k.toml", FREE);
    let out = hillgap(&["spectrum", "-c", s(&small_k), "--m-range", "1:10", "--truncation", "30"]);
    assert_eq!(out.status.code(), Some(2));

    let sq = write_config(&dir, "sq.toml", "[potential]\nkind = \"square\"\ngamma = 1.0\n");
    assert_eq!(hillgap(&["identities", "-c", s(&sq)]).status.code(), Some(3));

    assert_eq!(hillgap(&["nonsense", "-c", s(&sq)]).status.code(), Some(2));
    assert_eq!(hillgap(&["gaps", "-c", "/definitely/missing.toml"]).status.code(), Some(2));
}

#[test]
fn identities_for_trig_config() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "t.toml",
        "[potential]\nkind = \"trig\"\ncoefficients = [[1, 0.5, 0.25], [-1, 0.5, -0.25], [3, -0.3, 0.0], [-3, -0.3, 0.0]]\n[bands]\nm_min = 1\nm_max = 3\n",
    );
    let out = hillgap(&["identities", "-c", s(&cfg), "--format", "json"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = v["identities"].as_array().unwrap();
    assert_eq!(rows.len(), 3 * 11);
    assert!(rows.iter().all(|r| r["pass"] == Value::Bool(true)));
}
