use std::process::{Command, Output};

fn residuum(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_residuum"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn error_object(o: &Output) -> serde_json::Value {
    let text = String::from_utf8(o.stderr.clone()).unwrap();
    serde_json::from_str(text.trim())
        .unwrap_or_else(|e| panic!("stderr is not a JSON error object ({e}): {text}"))
}

#[test]
fn winding_of_the_center() {
    let o = residuum(&["winding", "--contour", "circle:0,0,1", "--point", "0,0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "{\"value\":\"0+6.283185307179586e0i\",\"kind\":\"Interior\",\"winding\":1}\n"
    );
}

#[test]
fn improper_log_total_value() {
    let o = residuum(&[
        "improper", "--F", "log(z)", "--a", "-1", "--b", "1", "--sing", "0",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["vt"], "0-3.141592653589793e0i");
    assert_eq!(v["vs"]["kind"], "finite");
    assert_eq!(v["table"].as_array().unwrap().len(), 9);
}

#[test]
fn improper_csv_table() {
    let o = residuum(&[
        "improper", "--F", "1/z", "--a", "-1", "--b", "2", "--sing", "0", "--format", "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("step,param,value_re,value_im,err_estimate")
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 9);
    for (k, row) in rows.iter().enumerate() {
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!(cols.len(), 5);
        assert_eq!(cols[0], k.to_string());
        assert!(
            (cols[2].parse::<f64>().unwrap() - 1.5).abs() < 1e-9,
            "{row}"
        );
    }
}

#[test]
fn whole_suite_passes() {
    let o = residuum(&["verify", "--suite", "all"]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let reports = v.as_array().unwrap();
    assert!(reports.len() >= 30);
    assert!(reports.iter().all(|r| r["expectation_met"] == true));
    assert!(reports.iter().any(|r| r["status"] == "not_applicable"));
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let jobs: &[&[&str]] = &[
        &["verify", "--suite", "all"],
        &["verify", "--suite", "lemmas", "--format", "text"],
        &[
            "improper", "--F", "log(z)", "--a", "-3", "--b", "0.5", "--sing", "0", "--format",
            "csv",
        ],
        &[
            "residue",
            "--expr",
            "exp(z)/(z-0.5) + conj(z)^2*z",
            "--at",
            "0.5,0",
        ],
        &[
            "residue",
            "--expr",
            "1/z",
            "--at",
            "0,0",
            "--sectors",
            "0,pi/2,pi,3pi/2",
        ],
        &[
            "integrate",
            "--expr",
            "conj(z)",
            "--domain",
            "disc:0,0,1",
            "--measure",
            "area",
        ],
        &[
            "winding",
            "--contour",
            "keyhole:0,0,1,0.1,pi,0.01",
            "--point",
            "0.5,0.1",
            "--point",
            "-0.5,0",
        ],
    ];
    for job in jobs {
        let a = residuum(job);
        let b = residuum(job);
        assert_eq!(a.status.code(), Some(0), "{job:?}");
        assert_eq!(a.stdout, b.stdout, "{job:?}");
        assert!(!a.stdout.is_empty());
    }
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("job.json");
    std::fs::write(
        &path,
        r#"{
            "command": "improper",
            "expression": "log(z)",
            "interval": {"a": -1, "b": 1},
            "singularities": [0],
            "output": {"format": "json"}
        }"#,
    )
    .unwrap();
    let p = path.to_str().unwrap();
    let o = residuum(&["--config", p]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["vt"], "0-3.141592653589793e0i");

    // b = 2 from the command line wins over the file.
    let o = residuum(&["--config", p, "improper", "--b", "2"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let vt = v["vt"].as_str().unwrap();
    assert!(vt.starts_with("6.93147180559945"), "{vt}");

    let out = dir.path().join("report.csv");
    let o = residuum(&[
        "--config",
        p,
        "--format",
        "csv",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert!(std::fs::read_to_string(&out)
        .unwrap()
        .starts_with("step,param,value_re,value_im,err_estimate\n"));
}

#[test]
fn validation_errors_exit_1_with_an_error_object() {
    for args in [
        &["winding", "--contour", "circle:0,0,-1", "--point", "0,0"][..],
        &["winding", "--contour", "circle:0,0", "--point", "0,0"],
        &["winding", "--contour", "circle:0,0,1"],
        &["residue", "--expr", "1/(z", "--at", "0,0"],
        &["verify", "--suite", "no_such_case"],
        &["winding", "--frobnicate"],
        &[
            "winding",
            "--contour",
            "circle:0,0,1",
            "--point",
            "0,0",
            "--format",
            "csv",
        ],
        &["--config", "/nonexistent/job.json"],
    ] {
        let o = residuum(args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        let e = error_object(&o);
        assert_eq!(e["error"]["code"], "validation", "{args:?}");
        assert!(e["error"]["message"]
            .as_str()
            .is_some_and(|m| !m.is_empty()));
        assert!(e["error"]["field"].is_string(), "{args:?}");
    }
}

#[test]
fn non_convergence_exits_2() {
    let o = residuum(&[
        "improper", "--F", "sin(1/z)", "--a", "-1", "--b", "1", "--sing", "0",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(error_object(&o)["error"]["code"], "non_convergence");
}

#[test]
fn failed_verification_exits_3() {
    let o = residuum(&[
        "verify",
        "--suite",
        "planar.double_and_simple_pole",
        "--tol",
        "1e-300",
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(error_object(&o)["error"]["code"], "verification");
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v[0]["status"], "fail");
}

#[test]
fn listing_the_suite() {
    let o = residuum(&["verify", "--suite", "lemmas", "--list"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v.as_array().unwrap().iter().all(|c| c["group"] == "lemmas"));
}
