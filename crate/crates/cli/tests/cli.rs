//! End-to-end tests of the `telsim` binary: exit codes, CSV schema,
//! determinism, and the documented failure modes.

use std::process::{Command, Output};

fn telsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_telsim"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .map(|l| l.split(',').map(|s| s.to_string()).collect())
        .collect()
}

#[test]
fn table1_default_covers_all_cells() {
    let out = telsim(&["table1"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&stdout(&out));
    assert_eq!(
        rows[0],
        vec!["channel", "noise", "kt", "fbar_numeric", "fbar_closed", "abs_delta"]
    );
    // 2 channels × 4 noise kinds × 4 default κt values.
    assert_eq!(rows.len() - 1, 32);
    for row in &rows[1..] {
        let delta: f64 = row[5].parse().unwrap();
        assert!(delta < 1e-9, "delta {delta} in {row:?}");
    }
}

#[test]
fn table1_kt_zero_rows_are_unity() {
    let out = telsim(&["table1", "--kt", "0"]);
    assert_eq!(out.status.code(), Some(0));
    for row in &csv_rows(&stdout(&out))[1..] {
        let fbar: f64 = row[3].parse().unwrap();
        assert!((fbar - 1.0).abs() < 1e-12);
    }
}

#[test]
fn table1_channel_filter() {
    let out = telsim(&["table1", "--kt", "0.1", "--channel", "w"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&stdout(&out));
    assert_eq!(rows.len() - 1, 4);
    assert!(rows[1..].iter().all(|r| r[0] == "w"));
}

#[test]
fn isotropic_rows_match_across_channels() {
    let out = telsim(&["table1", "--kt", "0.7"]);
    let text = stdout(&out);
    let rows = csv_rows(&text);
    let iso: Vec<&Vec<String>> = rows[1..].iter().filter(|r| r[1] == "iso").collect();
    assert_eq!(iso.len(), 2);
    let a: f64 = iso[0][4].parse().unwrap();
    let b: f64 = iso[1][4].parse().unwrap();
    assert!((a - b).abs() < 1e-12);
}

#[test]
fn sweep_4c_flips_sign_once_near_crossover() {
    let out = telsim(&["sweep", "--figure", "4c", "--kt-range", "0.01", "1.0", "100"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&stdout(&out));
    let mut flips = Vec::new();
    let mut prev: Option<f64> = None;
    for row in &rows[1..] {
        let kt: f64 = row[0].parse().unwrap();
        let ghz: f64 = row[1].parse().unwrap();
        let w: f64 = row[2].parse().unwrap();
        let diff = w - ghz;
        if let Some(p) = prev {
            if p * diff < 0.0 {
                flips.push(kt);
            }
        }
        prev = Some(diff);
    }
    assert_eq!(flips.len(), 1, "flips at {flips:?}");
    assert!((flips[0] - 0.223).abs() < 0.02);
}

#[test]
fn sweep_4a_ghz_always_dominates() {
    let out = telsim(&["sweep", "--figure", "4a", "--kt-range", "0.05", "3.0", "60"]);
    for row in &csv_rows(&stdout(&out))[1..] {
        let ghz: f64 = row[1].parse().unwrap();
        let w: f64 = row[2].parse().unwrap();
        assert!(ghz > w);
    }
}

#[test]
fn sweep_fig5_surface_shape() {
    let out = telsim(&["sweep", "--figure", "5", "--grid", "5", "7", "--noise", "x"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&stdout(&out));
    assert_eq!(rows[0], vec!["theta", "phi", "f_ghz", "f_w"]);
    assert_eq!(rows.len() - 1, 35);
    // GHZ under x-noise at θ=0, κt=0.5: F = (1 + e^{−2})/2.
    let want = 0.5 * (1.0 + (-2.0f64).exp());
    let first: f64 = rows[1][2].parse().unwrap();
    assert!((first - want).abs() < 1e-12);
}

#[test]
fn epr_mixed_below_same_axis() {
    let out = telsim(&["epr", "--kt-range", "0", "2", "9"]);
    assert_eq!(out.status.code(), Some(0));
    for row in &csv_rows(&stdout(&out))[1..] {
        let kt: f64 = row[0].parse().unwrap();
        let same: f64 = row[1].parse().unwrap();
        let mixed: f64 = row[4].parse().unwrap();
        if kt > 0.0 {
            assert!(mixed < same, "kt={kt}");
        }
    }
}

#[test]
fn epr_isotropic_hits_two_thirds_at_ln3_over_8() {
    let kt = 3.0f64.ln() / 8.0;
    let out = telsim(&["epr", "--kt", &format!("{kt}")]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&stdout(&out));
    let iso_closed: f64 = rows[1][8].parse().unwrap();
    assert!((iso_closed - 2.0 / 3.0).abs() < 1e-12);
}

#[test]
fn crossover_value_and_absence() {
    let out = telsim(&["crossover"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&stdout(&out));
    let kt_star: f64 = rows[1][3].parse().unwrap();
    assert!((kt_star - 0.223).abs() < 5e-3);

    let out = telsim(&["crossover", "--noise", "y"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&stdout(&out));
    assert_eq!(rows[1][3], "none");
    assert_eq!(rows[1][4], "w");
}

#[test]
fn groverian_deterministic_and_within_tolerance() {
    let a = telsim(&["groverian", "--seed", "11"]);
    let b = telsim(&["groverian", "--seed", "11"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout, "same seed must give identical bytes");
    let rows = csv_rows(&stdout(&a));
    assert_eq!(rows.len() - 1, 8); // ghz, w, product, 5 random two-branch
    for row in &rows[1..] {
        let delta: f64 = row[3].parse().unwrap();
        assert!(delta < 1e-6);
    }
}

#[test]
fn verify_passes_with_defaults() {
    let out = telsim(&["verify"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("all 13 checks passed"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn verify_honest_failure_with_coarse_rk4() {
    let out = telsim(&["verify", "--rk4-steps", "10"]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("FAIL channel-solutions-rk4"));
    assert!(text.contains("max residual"));
}

#[test]
fn json_format_round_trips() {
    let out = telsim(&["table1", "--kt", "0.5", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let rows = parsed.as_array().unwrap();
    assert_eq!(rows.len(), 8);
    assert!(rows[0].get("fbar_numeric").unwrap().is_f64());
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join("telsim-test-out");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("epr.csv");
    let out = telsim(&["epr", "--kt", "0.25", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).is_empty());
    let body = std::fs::read_to_string(&path).unwrap();
    assert!(body.starts_with("kt,"));
    assert!(body.ends_with('\n'));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(telsim(&["table1", "--kt", "-1"]).status.code(), Some(2));
    assert_eq!(
        telsim(&["sweep", "--figure", "9"]).status.code(),
        Some(2),
        "unknown figure"
    );
    assert_eq!(
        telsim(&["table1", "--kt-range", "0", "1", "1"]).status.code(),
        Some(2),
        "count below 2"
    );
    assert_eq!(
        telsim(&["table1", "--channel", "epr"]).status.code(),
        Some(2)
    );
    assert_eq!(telsim(&["nonsense"]).status.code(), Some(2));
}
