use std::process::{Command, Output};

use serde_json::Value;

fn fig8(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fig8"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_lines(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

#[test]
fn jones_range_has_one_row_per_n() {
    let out = fig8(&["jones", "--u", "0.5", "--p", "2", "--N", "101..501", "--step", "50"]);
    assert!(out.status.success());
    let lines = json_lines(&out);
    assert_eq!(lines[0]["schema"], "fig8.jones");
    assert_eq!(lines[0]["version"], 1);
    let ns: Vec<u64> = lines[1..].iter().map(|r| r["n"].as_u64().unwrap()).collect();
    assert_eq!(ns, vec![101, 151, 201, 251, 301, 351, 401, 451, 501]);
}

#[test]
fn u_outside_the_interval_is_an_input_error() {
    let out = fig8(&["jones", "--u", "1.5", "--p", "2", "--N", "101"]);
    assert_eq!(out.status.code(), Some(2));
    let out = fig8(&["modularity", "--eta", "1,1,1,1", "--u", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn theorem_skips_noncoprime_unless_asked() {
    let out = fig8(&["theorem", "--u", "0.5", "--p", "2", "--N", "100..101"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("gcd"));
    let lines = json_lines(&out);
    assert_eq!(lines[1]["status"], "skipped");
    assert_eq!(lines[2]["status"], "ok");
    assert!(lines[2]["abs_err"].as_f64().unwrap() < 0.05);

    let out = fig8(&["theorem", "--u", "0.5", "--p", "2", "--N", "100", "--include-noncoprime"]);
    assert!(out.status.success());
    assert_eq!(json_lines(&out)[1]["status"], "ok");
}

#[test]
fn region_file_reports_two_components() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("region.csv");
    let out = fig8(&["region", "--p", "2", "--m", "1", "--u", "0.5", "--res", "120", "-o", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    let header: Value = serde_json::from_str(lines.next().unwrap().strip_prefix("# ").unwrap()).unwrap();
    assert_eq!(header["schema"], "fig8.region");
    assert_eq!(header["components"], 2);
    assert_eq!(lines.next().unwrap(), "x,y,re_phi,in_u,in_e,in_d,in_rbar,in_runder");
    let (cols, rows) = (header["resolution"][0].as_u64().unwrap(), header["resolution"][1].as_u64().unwrap());
    assert_eq!(lines.count() as u64, cols * rows);
}

#[test]
fn lemmas_pass_by_default_and_fail_when_tightened() {
    let out = fig8(&["lemmas", "--samples", "20"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(json_lines(&out)[1..].iter().all(|r| r["pass"] == true));

    let out = fig8(&["lemmas", "--samples", "20", "--tol", "1e-15"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(json_lines(&out)[1..].iter().any(|r| r["pass"] == false));
}

#[test]
fn reruns_are_byte_identical() {
    let args = ["lemmas", "--samples", "10", "--seed", "7"];
    let a = fig8(&args);
    let b = fig8(&[&args[..], &["--threads", "1"]].concat());
    assert_eq!(a.stdout, b.stdout);
    let args = ["region", "--p", "1", "--m", "0", "--u", "0.3", "--res", "60", "--format", "json"];
    assert_eq!(fig8(&args).stdout, fig8(&args).stdout);
}

#[test]
fn modularity_for_s_recovers_one() {
    let out = fig8(&["modularity", "--eta", "0,-1,1,0", "--u", "0.5", "--p", "1,2"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let lines = json_lines(&out);
    let estimates: Vec<&Value> = lines.iter().filter(|r| r["kind"] == "estimate").collect();
    assert_eq!(estimates.len(), 2);
    for e in estimates {
        let (re, im) = (e["c_re"].as_f64().unwrap(), e["c_im"].as_f64().unwrap());
        assert!(((re - 1.0).powi(2) + im * im).sqrt() < 1e-3);
    }
}
