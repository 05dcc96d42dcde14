use std::path::PathBuf;
use std::process::{Command, Output};

fn multequi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_multequi"))
        .args(args)
        .env_remove("MULTEQUI_PRECISION_BITS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    dir.join(name)
}

#[test]
fn exact_prints_the_period_three_resultant() {
    let o = multequi(&["exact", "--n", "3"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "64*c^3 + 128*c^2 - 8*c*r + 64*c + r^2 - 16*r + 64");
}

#[test]
fn exact_json_carries_the_counts() {
    let o = multequi(&["exact", "--n", "4", "--json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["d_n"], 6);
    assert!(v["polynomial"].as_str().unwrap().contains("r^3"));
}

#[test]
fn eta_levels() {
    assert_eq!(stdout(&multequi(&["eta", "--L", "0.693147"])).trim(), "0");
    assert_eq!(stdout(&multequi(&["eta", "--L", "-inf"])).trim(), "0");
    let v: f64 = stdout(&multequi(&["eta", "--L", "1"])).trim().parse().unwrap();
    assert!((v - (2.0 - 2.0 * std::f64::consts::LN_2)).abs() < 1e-15);
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(multequi(&["exact"]).status.code(), Some(2));
    assert_eq!(multequi(&["exact", "--n", "0"]).status.code(), Some(2));
    assert_eq!(multequi(&["eta", "--L", "nan"]).status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_multequi"))
        .args(["green", "--c", "1,0"])
        .env("MULTEQUI_PRECISION_BITS", "20")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn green_value_and_error() {
    let o = multequi(&["green", "--c", "-2.1,0"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let fields: Vec<f64> = text.split_whitespace().map(|f| f.parse().unwrap()).collect();
    assert_eq!(fields.len(), 2);
    assert!(fields[0] > 0.0 && fields[1] <= 1e-12);
    let inside = stdout(&multequi(&["green", "--c", "-1,0"]));
    assert!(inside.starts_with("0.0000000000000000e0"));
}

#[test]
fn itinerary_csv() {
    let o = multequi(&["itinerary", "--c", "3", "--n", "4"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("code,points,multiplier,rate"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 3);
    for row in rows {
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!(cols.len(), 4);
        assert_eq!(cols[1].split(';').count(), 4);
    }
}

#[test]
fn render_marks_every_boundary_root() {
    let out = scratch("boundary.ppm");
    let o = multequi(&[
        "render", "--n", "10", "--rho", "1", "--out", out.to_str().unwrap(), "--width", "320", "--height", "240",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let marks: usize = stdout(&o).split_whitespace().nth(1).unwrap().parse().unwrap();
    assert!(marks >= 495, "{marks} marks");
    let bytes = std::fs::read(&out).unwrap();
    let header = b"P6\n320 240\n255\n";
    assert!(bytes.starts_with(header));
    assert_eq!(bytes.len(), header.len() + 3 * 320 * 240);
}

#[test]
fn sweep_is_reproducible() {
    let config = scratch("sweep.json");
    std::fs::write(&config, r#"{"L": 1.5, "n_range": [2, 3, 4], "eval_points": [[0.5, 0.5], [-2.5, 0.0]]}"#).unwrap();
    let run = |name: &str| {
        let out = scratch(name);
        let o = multequi(&["sweep", "--config", config.to_str().unwrap(), "--out", out.to_str().unwrap()]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        std::fs::read(out).unwrap()
    };
    let (a, b) = (run("sweep_a.csv"), run("sweep_b.csv"));
    assert!(!a.is_empty());
    assert_eq!(a, b);
}

#[test]
fn sweep_rejects_a_bad_config() {
    let config = scratch("bad.json");
    std::fs::write(&config, r#"{"L": 1.0}"#).unwrap();
    let out = scratch("bad.csv");
    let o = multequi(&["sweep", "--config", config.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}
