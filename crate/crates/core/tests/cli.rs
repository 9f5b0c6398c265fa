use std::process::{Command, Output};

fn ldplpp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ldplpp")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("valid JSON on stdout")
}

#[test]
fn exact_all_routes_agree() {
    let out = ldplpp(&["exact", "--n", "2", "--m", "1", "--ell", "1", "--q2", "1/2", "--route", "all"]);
    assert!(out.status.success());
    let v = json(&out);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    for r in rows {
        assert!(r["decimal"].as_str().unwrap().starts_with("5.0000000000"));
    }
    assert_eq!(rows[0]["value"], "1/2");
    assert_eq!(v["meta"]["tool"], "ldplpp");
    assert_eq!(v["meta"]["params"]["q2"], "1/2");
    assert_eq!(v["meta"]["precision_digits"], 64);
}

#[test]
fn exact_single_site() {
    let v = json(&ldplpp(&["exact", "--n", "1", "--m", "1", "--ell", "0", "--q2", "1/2", "--route", "jue"]));
    assert_eq!(v["rows"][0]["value"], "1/2");
}

#[test]
fn validation_error_exits_2() {
    let out = ldplpp(&["exact", "--n", "2", "--m", "2", "--ell", "1", "--q2", "3/2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("q^2"));
}

#[test]
fn regime_error_exits_3() {
    // omega(1, 1/3) = 1, so delta = 1 sits on the boundary
    let out = ldplpp(&["uptail", "--q2", "1/9", "--delta", "1", "--N-list", "4,8"]);
    assert_eq!(out.status.code(), Some(3));
    let out = ldplpp(&["converge", "--q2", "1/2", "--delta", "6", "--N-list", "4"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn verify_passes_and_fault_exits_5() {
    let out = ldplpp(&["verify"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(&out)["meta"]["passed"], true);
    let out = ldplpp(&["verify", "--inject-fault", "tue-constant"]);
    assert_eq!(out.status.code(), Some(5));
    let v = json(&out);
    let failed: Vec<&str> = v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["status"] == "fail")
        .map(|r| r["name"].as_str().unwrap())
        .collect();
    assert_eq!(failed, ["duality_schur_tue"]);
}

#[test]
fn converge_csv_has_header_and_one_row_per_n() {
    let out = ldplpp(&["converge", "--q2", "1/2", "--delta", "1", "--N-list", "4,8,16", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l == "# tool: ldplpp"));
    assert!(text.lines().any(|l| l.starts_with("# seed: ")));
    let body: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert!(body[0].starts_with("n_big,n,m,ell,delta_effective,precision_digits,exact_log_p"));
    assert_eq!(body.len(), 4);
}

#[test]
fn uptail_reports_rounded_threshold() {
    let v = json(&ldplpp(&["uptail", "--q2", "1/2", "--delta", "6.1", "--N-list", "4,8"]));
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows[0]["ell"], 24);
    assert_eq!(rows[1]["ell"], 48);
    assert_eq!(rows[0]["u1"], rows[1]["u1"]);
}

#[test]
fn asymptote_on_each_side_of_omega() {
    let lo = json(&ldplpp(&["asymptote", "--q2", "1/2", "--gamma", "2", "--delta", "1", "--N-list", "10"]));
    assert_eq!(lo["rows"][0]["regime"], "lower_rect");
    let hi = json(&ldplpp(&["asymptote", "--q2", "1/2", "--delta", "6", "--N-list", "10"]));
    assert_eq!(hi["rows"][0]["regime"], "upper");
}

#[test]
fn simulate_is_byte_identical_for_a_seed() {
    let args = ["simulate", "--q2", "1/2", "--n", "20", "--m", "20", "--trials", "300", "--seed", "4", "--format", "csv"];
    let a = ldplpp(&args);
    let b = ldplpp(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let c = ldplpp(&["simulate", "--q2", "1/2", "--n", "20", "--m", "20", "--trials", "300", "--seed", "5", "--format", "csv"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn simulate_rejects_zero_trials() {
    let out = ldplpp(&["simulate", "--q2", "1/2", "--n", "3", "--m", "3", "--trials", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn out_flag_writes_file_with_header() {
    let dir = std::env::temp_dir().join(format!("ldplpp-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("exact.json");
    let out = ldplpp(&["exact", "--n", "3", "--m", "2", "--ell", "2", "--q2", "0.25", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["meta"]["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["rows"][0]["exact"], false);
    std::fs::remove_dir_all(&dir).unwrap();
}
