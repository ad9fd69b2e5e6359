use std::io::Write;
use std::process::Command;

use serde_json::Value;
use tempfile::NamedTempFile;

fn iwasawa(args: &[&str]) -> (i32, Value, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_iwasawa"))
        .args(args)
        .output()
        .expect("binary runs");
    let stdout = String::from_utf8(out.stdout).unwrap();
    let report = serde_json::from_str(&stdout).unwrap_or(Value::Null);
    (
        out.status.code().unwrap(),
        report,
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json_file(body: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(body.as_bytes()).unwrap();
    f
}

#[test]
fn split_113() {
    let (code, v, _) = iwasawa(&["split", "--l", "113", "--p", "7"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["f"], 1);
    assert_eq!(v["results"]["g"], 6);
    assert_eq!(v["command"], "split");
}

#[test]
fn euler_factor_at_seven() {
    let (code, v, _) = iwasawa(&["euler-factor", "--a", "-2", "--q", "7", "--p", "7"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["valuation"], 2);
    assert_eq!(v["convention"], "reciprocal");
}

#[test]
fn chi_module_square_is_infinite() {
    let f = json_file(r#"{"p":7,"generators":["T^2"]}"#);
    let (code, v, _) = iwasawa(&[
        "chi-module",
        "--module",
        f.path().to_str().unwrap(),
        "--oracle",
        "--prec",
        "6",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["closed_form"]["finite"], false);
    assert_eq!(v["results"]["oracle"]["finite"], false);
    assert_eq!(v["results"]["agree"], true);
}

#[test]
fn chi_module_finite() {
    let f = json_file(r#"{"p":7,"generators":["T*(T-7)", "T - 7"]}"#);
    let (code, v, _) = iwasawa(&["chi-module", "--module", f.path().to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["closed_form"]["value"], "7^2");
    assert_eq!(v["results"]["closed_form"]["r"], 1);
}

#[test]
fn precision_error_exit_code() {
    let f = json_file(r#"{"p":7,"generators":["T*(T+2401)"]}"#);
    let (code, _, err) = iwasawa(&[
        "chi-module",
        "--module",
        f.path().to_str().unwrap(),
        "--oracle",
        "--prec",
        "3",
    ]);
    assert_eq!(code, 3, "{err}");
}

#[test]
fn prep_and_leading() {
    let f = json_file(r#"{"p":7,"N":4,"D":8,"series":"7*(T^2 - 7)*(1 + T)"}"#);
    let path = f.path().to_str().unwrap();
    let (code, v, _) = iwasawa(&["prep", "--series", path]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["mu"], 1);
    assert_eq!(v["results"]["lambda"], 2);
    let (code, v, _) = iwasawa(&["leading", "--series", path]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["k"], 0);
    assert_eq!(v["results"]["alpha_valuation"], 2);
}

#[test]
fn akashi_with_check() {
    let l = json_file(r#"{"p":5,"char_elements":["T + 5", "1"]}"#);
    let n = json_file(r#"{"p":5,"char_elements":["T", "T - 5"]}"#);
    let m = json_file(r#"{"p":5,"char_elements":["T*(T + 5)", "T - 5"]}"#);
    let check = format!(
        "{},{},{}",
        l.path().display(),
        m.path().display(),
        n.path().display()
    );
    let (code, v, _) = iwasawa(&[
        "akashi",
        "--data",
        m.path().to_str().unwrap(),
        "--check",
        &check,
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["multiplicative"], true);
    assert_eq!(v["results"]["leading"]["k"], 1);
}

#[test]
fn theorem3_config() {
    let f = json_file(
        r#"{"p":7,"chi_gamma":"7^8","curve":{"a":[0,-1,1,0,0]},"extension":{"p":7,"m":113},"tamagawa":{"113":1}}"#,
    );
    let (code, v, _) = iwasawa(&["theorem3", "--config", f.path().to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["chi_sigma"], "7^8");
    assert_eq!(v["results"]["m_place_count"], 6);
}

#[test]
fn inertia_set() {
    let (code, v, _) = iwasawa(&["inertia-set", "--p", "7", "--m", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["places"].as_array().unwrap().len(), 2);
    assert_eq!(v["results"]["places"][0]["q_v"], 8);
}

#[test]
fn example_and_usage_errors() {
    let (code, v, _) = iwasawa(&["example-x1-11"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["pipeline"]["chi_sigma"], "7^8");
    let (code, _, err) = iwasawa(&["split", "--frobnicate"]);
    assert_eq!(code, 2);
    assert!(err.contains("Usage"), "{err}");
    let (code, _, _) = iwasawa(&["split", "--l", "113", "--p", "8"]);
    assert_eq!(code, 2);
}

#[test]
fn reports_are_byte_identical() {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_iwasawa"))
            .args(["inertia-set", "--p", "5", "--m", "10"])
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run(), run());
}
