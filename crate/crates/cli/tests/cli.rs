use assert_cmd::Command;
use predicates::prelude::*;
use serde_json::Value;

const TENT: &str = r#"{"breakpoints": ["-1","0","1"], "pieces": [["1","1"],["1","-1"]]}"#;
const RECT: &str = r#"{"breakpoints": ["-1/2","1/2"], "pieces": [["1"]]}"#;

fn uncert() -> Command {
    Command::cargo_bin("uncert").unwrap()
}

fn json_out(args: &[&str], stdin: &str) -> Value {
    let out = uncert()
        .args(args)
        .write_stdin(stdin)
        .assert()
        .success()
        .get_output()
        .stdout
        .clone();
    serde_json::from_slice(&out).unwrap()
}

#[test]
fn moments_of_tent_and_rect() {
    let v = json_out(&["moments"], TENT);
    assert_eq!(v["U"], "3/10");
    assert_eq!(v["U_float"], 0.3);
    assert_eq!(v["class"]["class"], "P_plus_zero");
    let r = json_out(&["moments", "-"], RECT);
    assert_eq!(r["sigma_w2"], "inf");
    assert_eq!(r["U"], "inf");
}

#[test]
fn moments_of_a_modulated_atom() {
    let v = json_out(&["moments", "--gamma", "2,1,5"], TENT);
    assert_eq!(v["alpha"], "5");
    assert_eq!(v["beta_coeff"], "1");
    assert_eq!(v["U"], "3/10");
}

#[test]
fn moments_reads_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tent.json");
    std::fs::write(&path, TENT).unwrap();
    uncert()
        .arg("moments")
        .arg(&path)
        .assert()
        .success()
        .stdout(predicate::str::contains(r#""sigma_x2": "1/10""#));
}

#[test]
fn output_is_deterministic() {
    let run = || {
        uncert()
            .args(["symmetry-check"])
            .write_stdin(TENT)
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run(), run());
}

#[test]
fn dictionary_table_csv() {
    uncert()
        .args(["dict-table", "--family", "F", "--n-max", "3"])
        .assert()
        .success()
        .stdout("family,n,sigma_x2,sigma_w2,U,U_float\nF,1,1/10,3,3/10,0.3\nF,2,1/7,5/2,5/14,0.35714285714285715\nF,3,14/81,14/5,196/405,0.4839506172839506\n");
    uncert()
        .args(["dict-table", "--family", "G", "--n-max", "0"])
        .assert()
        .code(2);
    uncert()
        .args(["dict-table", "--family", "H"])
        .assert()
        .code(2);
}

#[test]
fn rect_scan_csv_round_trips() {
    let out = uncert()
        .args(["rect-scan", "--p-max", "5"])
        .output()
        .unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "p,u_p,nu_p,U,U_float");
    assert_eq!(lines[2], "3,43/308,20/11,215/847,0.2538370720188902");
    assert_eq!(lines.len(), 5);
    uncert()
        .args(["rect-scan", "--p-min", "1", "--p-max", "1"])
        .assert()
        .code(2);
    uncert()
        .args(["rect-scan", "--p-min", "4", "--p-max", "3"])
        .assert()
        .code(2);
}

#[test]
fn symmetry_check_flags() {
    let v = json_out(&["symmetry-check", "--axis", "barycenter"], TENT);
    assert_eq!(v["min_bound_holds"], true);
    assert_eq!(v["cs_equality_case"], true);
    let o = json_out(&["symmetry-check", "--no-centering"], TENT);
    assert_eq!(o["centered"], false);
    uncert()
        .args(["symmetry-check", "--axis", "barycenter", "--no-centering"])
        .write_stdin(TENT)
        .assert()
        .code(2);
    uncert()
        .args(["symmetry-check"])
        .write_stdin(RECT)
        .assert()
        .code(1);
    uncert()
        .args(["symmetry-check", "--axis", "middle"])
        .write_stdin(TENT)
        .assert()
        .code(2);
}

#[test]
fn spectrum_sample_csv() {
    uncert()
        .args(["spectrum-sample", "--omega-min", "-1", "--omega-max", "1", "--points", "3"])
        .write_stdin(TENT)
        .assert()
        .success()
        .stdout("omega,re,im,abs2\n-1,0.9193953882637206,0,0.8452878799605975\n0,1,0,1\n1,0.9193953882637206,0,0.8452878799605975\n");
}

#[test]
fn parse_errors_exit_two() {
    uncert()
        .args(["moments"])
        .write_stdin("{not json")
        .assert()
        .code(2)
        .stderr(predicate::str::contains("line 1"));
    uncert()
        .args(["moments"])
        .write_stdin(r#"{"breakpoints": ["0","1"], "pieces": [["x"]]}"#)
        .assert()
        .code(2);
    uncert()
        .args(["moments", "--gamma", "0,1,1"])
        .write_stdin(TENT)
        .assert()
        .code(2);
    uncert()
        .args(["moments", "--gamma", "1,1"])
        .write_stdin(TENT)
        .assert()
        .code(2);
    uncert()
        .args(["moments", "/nonexistent/f.json"])
        .assert()
        .code(2);
    uncert().arg("frobnicate").assert().code(2);
}

#[test]
fn zero_function_is_rejected() {
    uncert()
        .args(["moments"])
        .write_stdin(r#"{"breakpoints": ["0","1"], "pieces": [["0"]]}"#)
        .assert()
        .code(1);
}

#[test]
fn verify_filter_runs_one_group() {
    let out = uncert()
        .args(["verify", "--filter", "rect", "--json"])
        .assert()
        .success()
        .get_output()
        .stdout
        .clone();
    let v: Value = serde_json::from_slice(&out).unwrap();
    let checks = v.as_array().unwrap();
    assert!(!checks.is_empty());
    assert!(checks
        .iter()
        .all(|c| c["group"] == "rect" && c["pass"] == true));
    uncert()
        .args(["verify", "--filter", "no such claim"])
        .assert()
        .code(2);
}

#[test]
fn verify_dictionary_group_passes() {
    uncert()
        .args(["verify", "--filter", "dict"])
        .assert()
        .success()
        .stdout(
            predicate::str::contains("U(F,3) from envelope")
                .and(predicate::str::ends_with("0 failed\n")),
        );
}
