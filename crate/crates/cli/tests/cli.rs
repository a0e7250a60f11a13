use std::fs;
use std::path::PathBuf;
use std::process::Command as Process;

use gmp_cli::{execute, CliError, EXIT_DOMAIN, EXIT_OK, EXIT_USAGE, EXIT_VERIFY};
use gmp_core::{GmpModel, PhysicalParams};
use serde_json::Value;

// (4,2) ground state against its G- satellite, computed independently.
const G_MINUS_OVERLAP: f64 = 0.3653258924472811;

struct Outcome {
    code: i32,
    stdout: String,
    stderr: String,
}

fn gmp(args: &[&str]) -> Outcome {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = execute(
        std::iter::once("gmp").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    Outcome {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn gmp_json(args: &[&str]) -> Value {
    let o = gmp(args);
    assert_eq!(o.code, EXIT_OK, "{args:?}: {}", o.stderr);
    serde_json::from_str(&o.stdout).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("gmp-cli-tests-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

/// Data rows of CSV output, comments dropped, header first.
fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn spectrum_small_model() {
    let v = gmp_json(&["spectrum", "--k", "4", "--b", "2"]);
    assert_eq!(v["model"]["n_max"], 1);
    let levels = v["levels"].as_array().unwrap();
    assert_eq!(levels.len(), 2);
    let m = GmpModel::new(4.0, 2.0).unwrap();
    for (i, lvl) in levels.iter().enumerate() {
        assert_eq!(lvl["n"], i);
        assert_eq!(lvl["eps"].as_f64().unwrap(), m.level(i).unwrap().eps);
        assert!(lvl["E"].is_null());
    }
    assert_eq!(v["units"]["eps"], "dimensionless");
}

#[test]
fn spectrum_reference_model_has_four_levels() {
    let v = gmp_json(&["spectrum", "--D", "10", "--a", "1", "--re", "2.5"]);
    assert_eq!(v["model"]["n_max"], 3);
    let levels = v["levels"].as_array().unwrap();
    assert_eq!(levels.len(), 4);
    let p = PhysicalParams::new(10.0, 1.0, 2.5).unwrap();
    for (i, lvl) in levels.iter().enumerate() {
        assert_eq!(
            lvl["E"].as_f64().unwrap(),
            p.level(i).unwrap().energy.unwrap()
        );
    }
    assert_eq!(v["params"]["D"], 10.0);
    assert_eq!(v["units"]["E"], "energy");
    assert_eq!(v["units"]["re"], "length");
}

#[test]
fn every_numeric_field_has_a_unit() {
    fn walk(v: &Value, units: &Value, path: &str) {
        match v {
            Value::Object(map) => {
                for (k, x) in map {
                    if k == "units" {
                        continue;
                    }
                    if x.is_number() {
                        assert!(units.get(k).is_some(), "{path}.{k} has no unit");
                    }
                    walk(x, units, &format!("{path}.{k}"));
                }
            }
            Value::Array(items) => items.iter().for_each(|x| walk(x, units, path)),
            _ => {}
        }
    }
    for args in [
        &["spectrum", "--D", "10", "--a", "1", "--re", "2.5"][..],
        &[
            "wavefunction",
            "--k",
            "4",
            "--b",
            "2",
            "--grid-points",
            "10",
        ],
        &["ladder", "--k", "4", "--b", "2", "--direction", "g-"],
        &[
            "satellite",
            "--D",
            "10",
            "--a",
            "1",
            "--re",
            "2.5",
            "--direction",
            "g-",
            "--steps",
            "2",
        ],
        &["ptp", "--k", "4", "--b", "2"],
        &["ptp", "--m1", "6", "--m2", "2"],
        &["susy", "--k", "4", "--b", "2"],
        &["fcf", "--k", "4", "--b", "2", "--n2", "1"],
    ] {
        let v = gmp_json(args);
        walk(&v, &v["units"], args[0]);
    }
}

#[test]
fn json_round_trips_bit_for_bit() {
    let first = gmp_json(&[
        "spectrum", "--D", "7.3", "--a", "0.83", "--re", "1.9", "--mu", "1.7",
    ]);
    let k = first["model"]["k"].to_string();
    let b = first["model"]["b"].to_string();
    let again = gmp_json(&["spectrum", "--k", &k, "--b", &b]);
    assert_eq!(again["model"], first["model"]);
    for (x, y) in first["levels"]
        .as_array()
        .unwrap()
        .iter()
        .zip(again["levels"].as_array().unwrap())
    {
        for key in ["alpha", "beta", "eps"] {
            assert_eq!(
                x[key].as_f64().unwrap().to_bits(),
                y[key].as_f64().unwrap().to_bits()
            );
        }
    }
    let m = PhysicalParams::with_units(7.3, 0.83, 1.9, 1.7, 1.0)
        .unwrap()
        .reduce()
        .unwrap();
    assert_eq!(
        first["model"]["k"].as_f64().unwrap().to_bits(),
        m.k().to_bits()
    );
}

#[test]
fn csv_round_trips_bit_for_bit() {
    let o = gmp(&[
        "spectrum", "--D", "10", "--a", "1", "--re", "2.5", "--format", "csv",
    ]);
    assert_eq!(o.code, EXIT_OK);
    let rows = csv_rows(&o.stdout);
    assert_eq!(rows[0], ["n", "alpha", "beta", "eps", "E"]);
    let p = PhysicalParams::new(10.0, 1.0, 2.5).unwrap();
    for row in &rows[1..] {
        let n: usize = row[0].parse().unwrap();
        let rec = p.level(n).unwrap();
        assert_eq!(row[3].parse::<f64>().unwrap().to_bits(), rec.eps.to_bits());
        assert_eq!(
            row[4].parse::<f64>().unwrap().to_bits(),
            rec.energy.unwrap().to_bits()
        );
    }
    assert_eq!(rows.len(), 5);
}

#[test]
fn usage_errors_exit_3() {
    for args in [
        &["spectrum", "--k", "4", "--b", "2", "--D", "10"][..],
        &["spectrum", "--k", "4"],
        &["spectrum", "--D", "10", "--a", "1"],
        &["spectrum", "--k", "4", "--b", "2", "--mu", "2"],
        &["spectrum"],
        &["ladder", "--k", "4", "--b", "2"],
        &["ladder", "--k", "4", "--b", "2", "--direction", "up"],
        &[
            "satellite",
            "--k",
            "4",
            "--b",
            "2",
            "--direction",
            "g-",
            "--steps",
            "0",
        ],
        &["fcf", "--k", "4", "--b", "2"],
        &["fit", "--D", "10", "--a", "1", "--re", "2.5"],
        &["verify", "--suite", "everything"],
        &["spectrum", "--k", "4", "--b", "2", "--bogus"],
        &["nonsense"],
        &[],
    ] {
        let o = gmp(args);
        assert_eq!(o.code, EXIT_USAGE, "{args:?}: {}", o.stderr);
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn domain_errors_exit_1() {
    for args in [
        &["spectrum", "--k", "-1", "--b", "2"][..],
        &["spectrum", "--D", "10", "--a", "0", "--re", "2.5"],
        &["wavefunction", "--k", "4", "--b", "2", "--n", "5"],
        &["satellite", "--k", "4", "--b", "2", "--direction", "g+"],
        &["ptp", "--m1", "-1", "--m2", "2"],
    ] {
        let o = gmp(args);
        assert_eq!(o.code, EXIT_DOMAIN, "{args:?}: {}", o.stderr);
        assert!(o.stderr.starts_with("gmp: "));
    }
}

#[test]
fn help_and_version_exit_0() {
    let o = gmp(&["--help"]);
    assert_eq!(o.code, EXIT_OK);
    assert!(o.stdout.contains("spectrum") && o.stdout.contains("verify"));
    assert_eq!(gmp(&["spectrum", "--help"]).code, EXIT_OK);
    assert_eq!(gmp(&["--version"]).code, EXIT_OK);
}

#[test]
fn verify_failure_maps_to_exit_2() {
    assert_eq!(CliError::VerifyFailed(3).exit_code(), EXIT_VERIFY);
    let o = gmp(&["verify", "--suite", "core"]);
    assert_eq!(o.code, EXIT_OK);
    assert!(o.stdout.contains("PASS core") && o.stdout.contains("0 failed"));
    let v = gmp_json(&["verify", "--suite", "algebra", "--format", "json"]);
    assert_eq!(v["passed"], true);
    assert!(!v["checks"].as_array().unwrap().is_empty());
}

#[test]
fn config_file_with_flag_override() {
    let path = scratch("config.json");
    fs::write(
        &path,
        r#"{"command": "spectrum", "k": 4, "b": 2, "format": "csv"}"#,
    )
    .unwrap();
    let cfg = path.to_str().unwrap();
    let o = gmp(&["--config", cfg]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    assert_eq!(csv_rows(&o.stdout).len(), 3);
    // flags win over the file
    let v = gmp_json(&["spectrum", "--config", cfg, "--k", "20", "--format", "json"]);
    assert_eq!(v["model"]["k"], 20.0);
    assert_eq!(v["model"]["b"], 2.0);

    fs::write(&path, r#"{"k": 4, "b": 2, "colour": "blue"}"#).unwrap();
    assert_eq!(gmp(&["spectrum", "--config", cfg]).code, EXIT_USAGE);
    assert_eq!(
        gmp(&["spectrum", "--config", "/nonexistent/gmp.json"]).code,
        EXIT_USAGE
    );
}

#[test]
fn out_flag_writes_a_file() {
    let path = scratch("levels.json");
    let o = gmp(&[
        "spectrum",
        "--k",
        "4",
        "--b",
        "2",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.code, EXIT_OK);
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["levels"].as_array().unwrap().len(), 2);
}

#[test]
fn ladder_and_satellite_chain() {
    let v = gmp_json(&["ladder", "--k", "4", "--b", "2", "--direction", "g-"]);
    assert!((v["target"]["b"].as_f64().unwrap() - 1.38754845034029).abs() < 1e-13);
    assert!(v["mismatch"].as_f64().unwrap() <= 1e-8);
    let v = gmp_json(&["ladder", "--k", "4", "--b", "2", "--direction", "g+"]);
    assert_eq!(v["annihilated"], true);
    assert_eq!(v["coeff"], 0.0);

    let v = gmp_json(&[
        "satellite",
        "--D",
        "10",
        "--a",
        "1",
        "--re",
        "2.5",
        "--direction",
        "g-",
        "--steps",
        "3",
    ]);
    let chain = v["chain"].as_array().unwrap();
    assert_eq!(chain.len(), 4);
    let inv0 = chain[0]["Db2_over_a2"].as_f64().unwrap();
    for (i, c) in chain.iter().enumerate() {
        assert_eq!(c["n"], i);
        assert!((c["Db2_over_a2"].as_f64().unwrap() / inv0 - 1.0).abs() <= 1e-12);
        assert_eq!(c["params"]["a"], 1.0);
    }
    assert!(v["conservation"]["invariant_rel_drift"].as_f64().unwrap() <= 1e-12);
}

#[test]
fn fcf_matches_regression_value() {
    let v = gmp_json(&["fcf", "--k", "4", "--b", "2", "--direction", "g-"]);
    assert!((v["overlap"].as_f64().unwrap() - G_MINUS_OVERLAP).abs() <= 1e-9);
    let v = gmp_json(&["fcf", "--k", "4", "--b", "2", "--k2", "4", "--b2", "2"]);
    assert!((v["factor"].as_f64().unwrap() - 1.0).abs() <= 1e-8);
}

#[test]
fn ptp_and_susy() {
    let v = gmp_json(&["ptp", "--m1", "6", "--m2", "2"]);
    assert_eq!(v["count"], 2);
    let v = gmp_json(&["ptp", "--D", "10", "--a", "1", "--re", "2.5"]);
    for lvl in v["levels"].as_array().unwrap() {
        let (l, r) = (lvl["lhs"].as_f64().unwrap(), lvl["rhs"].as_f64().unwrap());
        assert!((l / r - 1.0).abs() <= 1e-12);
    }
    let v = gmp_json(&["susy", "--D", "10", "--a", "1", "--re", "2.5"]);
    let l = v["model"]["l"].as_f64().unwrap();
    assert!((v["partner"]["l"].as_f64().unwrap() - l - 1.0).abs() <= 1e-12 * l);
    assert_eq!(v["partner_levels"].as_array().unwrap().len(), 3);
}

#[test]
fn wavefunction_table() {
    let o = gmp(&[
        "wavefunction",
        "--D",
        "10",
        "--a",
        "1",
        "--re",
        "2.5",
        "--n",
        "2",
        "--grid-points",
        "50",
        "--format",
        "csv",
    ]);
    assert_eq!(o.code, EXIT_OK);
    let rows = csv_rows(&o.stdout);
    assert_eq!(rows[0], ["x", "r", "psi"]);
    assert_eq!(rows.len(), 51);
    let last: f64 = rows[50][2].parse().unwrap();
    assert!(last.abs() <= 1e-12 * (1.0 + 1e-9));
}

#[test]
fn potential_plot_data() {
    // r_e = 2.5 lands on the 10th of 42 samples spanning [r_e/10, r_e + 8/a]
    let o = gmp(&[
        "plot",
        "--D",
        "10",
        "--a",
        "1",
        "--re",
        "2.5",
        "--grid-points",
        "42",
    ]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    assert!(o.stdout.contains("# hbar_omega="));
    let rows = csv_rows(&o.stdout);
    assert_eq!(rows[0], ["r", "V_GMP", "V_Morse", "V_harmonic"]);
    let at_re = &rows[10];
    assert!((at_re[0].parse::<f64>().unwrap() - 2.5).abs() < 1e-12);
    for cell in &at_re[1..] {
        assert!(cell.parse::<f64>().unwrap().abs() < 1e-20);
    }
    // the wall: V grows like 1/r^2 towards the origin
    let v0: f64 = rows[1][1].parse().unwrap();
    let r0: f64 = rows[1][0].parse().unwrap();
    assert!(v0 > 10.0 * 10.0);
    let p = PhysicalParams::new(10.0, 1.0, 2.5).unwrap();
    let ratio = p.potential(r0 / 100.0) / v0;
    assert!(ratio > 5000.0, "ratio {ratio}");
}

#[test]
fn satellite_plot_data() {
    let o = gmp(&[
        "plot",
        "--D",
        "10",
        "--a",
        "1",
        "--re",
        "2.5",
        "--direction",
        "g-",
        "--steps",
        "3",
        "--grid-points",
        "20",
    ]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    let p = PhysicalParams::new(10.0, 1.0, 2.5).unwrap();
    let line = o
        .stdout
        .lines()
        .find(|l| l.starts_with("# Db2_over_a2="))
        .unwrap();
    let inv: f64 = line.trim_start_matches("# Db2_over_a2=").parse().unwrap();
    assert!((inv / p.satellite_invariant() - 1.0).abs() < 1e-15);
    let rows = csv_rows(&o.stdout);
    let header = &rows[0];
    for j in 1..=3 {
        assert!(header.contains(&format!("V_{j}")) && header.contains(&format!("psi_{j}")));
    }
    assert_eq!(rows.len(), 21);
    let v = gmp_json(&[
        "plot",
        "--D",
        "10",
        "--a",
        "1",
        "--re",
        "2.5",
        "--grid-points",
        "5",
        "--format",
        "json",
    ]);
    assert_eq!(v["rows"].as_array().unwrap().len(), 5);
}

#[test]
fn fit_from_spectrum_output() {
    let levels = scratch("fit-levels.json");
    let o = gmp(&[
        "spectrum",
        "--D",
        "30",
        "--a",
        "0.8",
        "--re",
        "1.7",
        "--out",
        levels.to_str().unwrap(),
    ]);
    assert_eq!(o.code, EXIT_OK);
    let v = gmp_json(&[
        "fit",
        "--levels",
        levels.to_str().unwrap(),
        "--D",
        "36",
        "--a",
        "0.96",
        "--re",
        "2.04",
    ]);
    assert_eq!(v["converged"], true);
    for (key, want) in [("D", 30.0), ("a", 0.8), ("re", 1.7)] {
        let got = v["params"][key].as_f64().unwrap();
        assert!((got / want - 1.0).abs() <= 1e-4, "{key}: {got}");
    }

    let csv = scratch("fit-levels.csv");
    let p = PhysicalParams::new(30.0, 0.8, 1.7).unwrap();
    let mut text = String::from("n,energy\n");
    for n in 0..3 {
        text.push_str(&format!(
            "{n},{:.17e}\n",
            p.level(n).unwrap().energy.unwrap()
        ));
    }
    fs::write(&csv, text).unwrap();
    let v = gmp_json(&[
        "fit",
        "--levels",
        csv.to_str().unwrap(),
        "--D",
        "36",
        "--a",
        "0.96",
        "--re",
        "2.04",
    ]);
    assert!(v["residual_rms"].as_f64().unwrap() < 1e-6);

    let spectrum_csv = scratch("spectrum-levels.csv");
    let o = gmp(&[
        "spectrum", "--D", "30", "--a", "0.8", "--re", "1.7", "--format", "csv",
    ]);
    fs::write(&spectrum_csv, o.stdout).unwrap();
    let v = gmp_json(&[
        "fit",
        "--levels",
        spectrum_csv.to_str().unwrap(),
        "--D",
        "36",
        "--a",
        "0.96",
        "--re",
        "2.04",
    ]);
    assert_eq!(v["converged"], true);
    assert!((v["params"]["D"].as_f64().unwrap() / 30.0 - 1.0).abs() <= 1e-4);

    let two = scratch("two-levels.csv");
    fs::write(&two, "0,1.0\n1,2.0\n").unwrap();
    let o = gmp(&[
        "fit",
        "--levels",
        two.to_str().unwrap(),
        "--D",
        "36",
        "--a",
        "0.96",
        "--re",
        "2.04",
    ]);
    assert_eq!(o.code, EXIT_DOMAIN);
}

#[test]
fn binary_smoke_test() {
    let out = Process::new(env!("CARGO_BIN_EXE_gmp"))
        .args(["spectrum", "--k", "4", "--b", "2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_OK));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["levels"].as_array().unwrap().len(), 2);
    let out = Process::new(env!("CARGO_BIN_EXE_gmp"))
        .args(["spectrum", "--k", "4"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_USAGE));
}
