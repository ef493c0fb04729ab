use std::process::{Command, Output};

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ussd-lab")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn meta(csv: &str, key: &str) -> f64 {
    let head = csv.lines().next().unwrap();
    let field = head.split(' ').find_map(|kv| kv.strip_prefix(&format!("{key}="))).unwrap();
    field.parse().unwrap()
}

#[test]
fn csv_has_metadata_header() {
    let o = lab(&["fig4", "--steps", "3"]);
    assert!(o.status.success());
    let s = stdout(&o);
    let mut lines = s.lines();
    let head = lines.next().unwrap();
    assert!(head.starts_with("# tool=ussd-lab version=0.1.0 command=fig4 steps=3 nodes=64"));
    assert_eq!(lines.next().unwrap(), "tangle,channel_angle,c_i,c_s_c,c_a_sc,proportion");
    assert_eq!(lines.count(), 3);
    assert!(!s.contains('\r'));
}

#[test]
fn invalid_input_exits_with_two() {
    for args in [
        &["eval", "--p-plus", "0.3", "--alpha", "1.0"][..],
        &["eval", "--p-plus", "1.5", "--alpha", "0.2"],
        &["teleport", "--rho", "0.9", "--mu", "1.0"],
        &["teleport", "--rho", "0.1", "--mu", "1.0", "--nu", "7.0"],
        &["fig3", "--steps", "1"],
        &["bogus"],
    ] {
        let o = lab(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
    let o = lab(&["eval", "--p-plus", "0.3", "--alpha", "1.0"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("DegenerateOverlap"));
}

#[test]
fn selftest_reports_json_and_fails_when_too_strict() {
    let o = lab(&["selftest", "--only", "optimal.spot,berry.gamma"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["meta"]["checks"], 3);
    assert_eq!(v["meta"]["failed"], 0);
    assert_eq!(v["columns"][0], "check");

    let o = lab(&["selftest", "--only", "monogamy.sums", "--tolerance", "1e-18"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["rows"][0][3], false);
    assert!(String::from_utf8_lossy(&o.stderr).contains("FAILED monogamy.sums"));
}

#[test]
fn sampled_teleport_matches_analytic_rate() {
    let o = lab(&["teleport", "--rho", "0.3927", "--mu", "1.0", "--nu", "0.5", "--sample", "1000", "--seed", "7"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!((meta(&s, "total_success") - 0.292893).abs() < 1e-5);
    assert!(meta(&s, "z_score").abs() < 4.0);
}

#[test]
fn perfect_channel_transcript() {
    let o = lab(&["teleport", "--rho", "0", "--mu", "1.0", "--nu", "0.5"]);
    let s = stdout(&o);
    assert!((meta(&s, "total_success") - 1.0).abs() < 1e-12);
    for line in s.lines().skip(2) {
        let f: Vec<&str> = line.split(',').collect();
        if f[4] == "true" {
            assert_eq!(f[6], "1");
        }
    }
}

#[test]
fn output_file_matches_stdout() {
    let dir = std::env::temp_dir().join(format!("ussd-lab-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("fig2.json");
    let o = lab(&["fig2", "--steps", "5", "--format", "json", "--output", path.to_str().unwrap()]);
    assert!(o.status.success() && o.stdout.is_empty());
    let written = std::fs::read(&path).unwrap();
    assert_eq!(written, lab(&["fig2", "--steps", "5", "--format", "json"]).stdout);
    std::fs::remove_dir_all(&dir).unwrap();
}
