use std::fs;
use std::process::{Command, Output};

fn qrotor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qrotor"))
        .args(args)
        .env_remove("QROTOR_DATA_DIR")
        .output()
        .expect("run qrotor")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn verify_passes_and_reports() {
    let o = qrotor(&["verify", "--ell-max", "4", "--tau", "0.1"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["cases"].as_array().unwrap().len(), 9);
}

#[test]
fn verify_phase_root_of_unity_is_input_error() {
    let o = qrotor(&[
        "verify",
        "--ell-max",
        "4",
        "--tau",
        "1.5707963267948966",
        "--regime",
        "phase",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("root of unity"));
}

#[test]
fn verify_ell_max_zero_is_all_zero() {
    let o = qrotor(&["verify", "--ell-max", "0", "--tau", "0.1,0.3"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    for case in v["cases"].as_array().unwrap() {
        for (_, r) in case["identities"].as_object().unwrap() {
            assert_eq!(r.as_f64().unwrap(), 0.0);
        }
    }
}

#[test]
fn verify_rejects_large_ell_max() {
    assert_eq!(
        qrotor(&["verify", "--ell-max", "65", "--tau", "0.1"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn spectrum_csv_and_json() {
    let o = qrotor(&[
        "spectrum", "--model", "III", "--A", "20.55", "--B", "-0.00204", "--ells", "2",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("ell,energy_cm1"));
    let e: f64 = lines
        .next()
        .unwrap()
        .split(',')
        .nth(1)
        .unwrap()
        .parse()
        .unwrap();
    assert!((e - 123.23).abs() < 0.01);
    let o = qrotor(&[
        "spectrum", "--model", "Ip", "--A", "20.554", "--tau", "0.01742", "--ells", "0:4:2",
        "--json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["model"], "Iprime");
    assert_eq!(v["levels"].as_array().unwrap().len(), 3);
    let o = qrotor(&["spectrum", "--model", "IV", "--a", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn expand_dumps_coefficients() {
    let o = qrotor(&[
        "expand", "--family", "suq2", "--tau", "0.01742", "--terms", "5",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 6);
    assert!(text.starts_with("n,coefficient\n0,"));
    assert_eq!(
        qrotor(&["expand", "--family", "ito", "--tau", "0.1", "--terms", "0"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn fit_single_model_json() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("fit.json");
    let res = dir.path().join("res.csv");
    let o = qrotor(&[
        "fit",
        "--model",
        "I",
        "--out",
        json.to_str().unwrap(),
        "--residuals",
        res.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(v["model"], "I");
    assert!((v["params"]["a"].as_f64().unwrap() - 20.553).abs() < 0.01);
    assert!((v["sigma_cm1"].as_f64().unwrap() - 0.072).abs() < 0.01);
    assert_eq!(stdout(&o), fs::read_to_string(&json).unwrap());
    let csv = fs::read_to_string(&res).unwrap();
    assert!(csv.starts_with("ell,energy_exp,energy_th,residual\n"));
    assert_eq!(csv.lines().count(), 10);
}

#[test]
fn fit_all_prints_six_rows() {
    let o = qrotor(&["fit", "--model", "all"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 7);
}

#[test]
fn fit_missing_file() {
    let o = qrotor(&["fit", "--data", "/nonexistent/levels.csv", "--model", "I"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(qrotor(&["fit", "--model", "V"]).status.code(), Some(2));
}

#[test]
fn unknown_flag_rejected() {
    assert_eq!(
        qrotor(&["fit", "--model", "I", "--bogus"]).status.code(),
        Some(2)
    );
}

#[test]
fn outputs_are_deterministic() {
    for args in [
        &["fit", "--model", "all"][..],
        &["report", "--csv"][..],
        &["verify", "--ell-max", "2", "--tau", "0.2"][..],
    ] {
        let a = qrotor(args);
        let b = qrotor(args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

fn reference_levels() -> Vec<Vec<f64>> {
    vec![
        vec![2.0, 123.33, 123.25, 123.25, 123.29, 123.27, 123.23, 123.34],
        vec![4.0, 410.34, 410.25, 410.25, 410.35, 410.32, 410.18, 410.52],
        vec![6.0, 859.69, 859.60, 859.60, 859.73, 859.72, 859.49, 860.04],
        vec![8.0, 1469.2, 1469.1, 1469.1, 1469.3, 1469.3, 1469.0, 1469.6],
        vec![10.0, 2235.9, 2235.9, 2235.9, 2236.0, 2236.0, 2235.8, 2236.2],
        vec![12.0, 3156.1, 3156.1, 3156.1, 3156.1, 3156.1, 3156.1, 3156.1],
        vec![14.0, 4225.3, 4225.4, 4225.4, 4225.3, 4225.2, 4225.5, 4224.9],
        vec![16.0, 5438.4, 5438.5, 5438.5, 5438.3, 5438.3, 5438.6, 5438.0],
        vec![18.0, 6789.6, 6789.5, 6789.5, 6789.6, 6789.7, 6789.4, 6790.0],
    ]
}

#[test]
fn report_reproduces_level_table() {
    let o = qrotor(&["report", "--csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("ell,exp.,I,I',II,II',III,IV"));
    let expected = reference_levels();
    let mut n = 0;
    for (line, want) in lines.zip(&expected) {
        let cells: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!(cells[..2], want[..2]);
        for (got, w) in cells.iter().zip(want).skip(2) {
            assert!((got - w).abs() <= 0.1 + 1e-9, "{line}");
        }
        n += 1;
    }
    assert_eq!(n, 9);
    let plain = stdout(&qrotor(&["report"]));
    assert_eq!(plain.lines().count(), 10);
}

#[test]
fn report_on_self_generated_model_three() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("levels.csv");
    let mut csv = String::from("ell,energy_cm1\n");
    for l in (2..=18).step_by(2) {
        let x = f64::from(l * (l + 1));
        csv.push_str(&format!("{l},{}\n", 20.55 * x - 0.00204 * x * x));
    }
    fs::write(&path, csv).unwrap();
    let o = qrotor(&["report", "--csv", "--data", path.to_str().unwrap()]);
    let text = stdout(&o);
    for line in text.lines().skip(1) {
        let cells: Vec<&str> = line.split(',').collect();
        assert_eq!(cells[1], cells[6], "{line}");
    }
}

#[test]
fn report_on_empty_dataset() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.csv");
    fs::write(&path, "ell,energy_cm1\n").unwrap();
    assert_eq!(
        qrotor(&["report", "--data", path.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn ingest_then_fit_matches_direct_fit() {
    let dir = tempfile::tempdir().unwrap();
    let lower = |l: u32| {
        let x = f64::from(l * (l + 1));
        20.55 * x - 0.00204 * x * x
    };
    let upper = |l: u32| {
        let x = f64::from(l * (l + 1));
        19.75 * x - 0.00202 * x * x
    };
    let mut branches = String::from("branch,ell,wavenumber_cm1\n");
    for l in 0..=18u32 {
        branches.push_str(&format!("R,{l},{}\n", 3961.4 + upper(l + 1) - lower(l)));
        if l > 0 {
            branches.push_str(&format!("P,{l},{}\n", 3961.4 + upper(l - 1) - lower(l)));
        }
    }
    let bpath = dir.path().join("branches.csv");
    let lpath = dir.path().join("levels.csv");
    fs::write(&bpath, branches).unwrap();
    let o = qrotor(&[
        "ingest",
        "--branches",
        bpath.to_str().unwrap(),
        "--band",
        "v0",
        "--out",
        lpath.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let ingested = fs::read_to_string(&lpath).unwrap();
    assert_eq!(ingested.lines().count(), 10);

    let direct = dir.path().join("direct.csv");
    let mut csv = String::from("ell,energy_cm1\n");
    for line in ingested.lines().skip(1) {
        let l: u32 = line.split(',').next().unwrap().parse().unwrap();
        csv.push_str(&format!("{l},{}\n", line.split(',').nth(1).unwrap()));
    }
    fs::write(&direct, csv).unwrap();
    let a = qrotor(&["fit", "--model", "II", "--data", lpath.to_str().unwrap()]);
    let b = qrotor(&["fit", "--model", "II", "--data", direct.to_str().unwrap()]);
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["residuals"].as_array().unwrap().len(), 9);
}

#[test]
fn data_dir_override() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("hf_v0_levels.v1.csv"),
        "ell,energy_cm1\n2,120\n4,400\n6,840\n8,1440\n",
    )
    .unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_qrotor"))
        .args(["fit", "--model", "III"])
        .env("QROTOR_DATA_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["residuals"].as_array().unwrap().len(), 4);
}
