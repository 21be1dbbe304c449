use std::path::Path;
use std::process::{Command, Output};

fn verify(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_verify")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn full_run_reports_the_open_node() {
    let o = verify(&["run"]);
    assert_eq!(o.status.code(), Some(1));
    let s = stdout(&o);
    assert!(s.starts_with("schema_version 1\n"));
    assert!(s.contains("[failed]"));
    assert!(s.contains("t.no0"));
    assert!(s.lines().last().unwrap().starts_with("verdict: failed"));
}

#[test]
fn case_ii_subtree_verifies() {
    let o = verify(&["run", "--node", "ii"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let s = stdout(&o);
    assert!(s.contains("target t.ii"));
    assert!(s.contains("[contradiction-as-expected] t.ii"));
}

#[test]
fn list2_is_an_empty_enumeration() {
    let o = verify(&["run", "--node", "p.list2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["schema_version"], 1);
    let node = v["nodes"].as_array().unwrap().iter().find(|n| n["id"] == "p.list2").unwrap();
    assert_eq!(node["kind"], "enumeration");
    assert_eq!(node["status"], "verified");
    assert!(node["summary"].as_str().unwrap().starts_with("0 cases"));
}

#[test]
fn json_is_identical_across_job_counts() {
    let a = verify(&["run", "--format", "json", "--jobs", "1"]);
    let b = verify(&["run", "--format", "json", "--jobs", "8"]);
    let c = verify(&["run", "--format", "json", "--jobs", "3"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn explain_shows_decisive_numbers() {
    let s = stdout(&verify(&["explain", "p.no2"]));
    assert!(s.contains("13 <= 6r"), "{s}");
    let s = stdout(&verify(&["explain", "e.fixed"]));
    assert!(s.lines().filter(|l| l.contains("h1 + 2h2 =")).count() >= 10, "{s}");
    let s = stdout(&verify(&["explain", "p.equiv0"]));
    assert!(s.contains("7) -> 6) [4,3,3] -> 5)"), "{s}");
    assert!(s.contains("2) [2,2,2] -> 1) [2,2,1]"), "{s}");
    let s = stdout(&verify(&["explain", "ax.ccm2"]));
    assert!(s.contains("citation: [CCM2], lemma 2.2"), "{s}");
}

#[test]
fn usage_and_io_errors_exit_two() {
    assert_eq!(verify(&["run", "--node", "no.such.node"]).status.code(), Some(2));
    assert_eq!(verify(&["explain", "no.such.node"]).status.code(), Some(2));
    assert_eq!(verify(&["run", "--format", "yaml"]).status.code(), Some(2));
    assert_eq!(verify(&[]).status.code(), Some(2));
    assert_eq!(verify(&["run", "--data", "/definitely/not/here"]).status.code(), Some(2));
}

#[test]
fn out_writes_the_report() {
    let dir = std::env::temp_dir().join(format!("verify-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join("r.json");
    let o = verify(&["run", "--node", "t.i", "--format", "json", "--out", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
    assert_eq!(v["summary"]["verdict"], "verified");
    std::fs::remove_dir_all(&dir).ok();
}

fn copy_data(to: &Path) {
    let src = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    for sub in ["fixtures", "tables"] {
        std::fs::create_dir_all(to.join(sub)).unwrap();
        for e in std::fs::read_dir(src.join(sub)).unwrap() {
            let e = e.unwrap();
            std::fs::copy(e.path(), to.join(sub).join(e.file_name())).unwrap();
        }
    }
}

#[test]
fn fixtures_check_catches_an_edited_file() {
    let dir = std::env::temp_dir().join(format!("verify-data-{}", std::process::id()));
    copy_data(&dir);
    let d = dir.to_str().unwrap();
    assert_eq!(verify(&["fixtures", "check", "--data", d]).status.code(), Some(0));
    assert_eq!(verify(&["run", "--node", "p.list0", "--data", d]).status.code(), Some(0));

    let f = dir.join("fixtures/pencil_list0.json");
    let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&f).unwrap()).unwrap();
    v[0]["g"] = serde_json::json!(7);
    std::fs::write(&f, v.to_string()).unwrap();
    let o = verify(&["fixtures", "check", "--data", d]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL fixtures/pencil_list0.json: pencil_list0.json: $[0].g"), "{}", stdout(&o));
    let o = verify(&["run", "--node", "p.list0", "--data", d]);
    assert_eq!(o.status.code(), Some(1));

    std::fs::remove_file(&f).unwrap();
    assert_eq!(verify(&["fixtures", "check", "--data", d]).status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}
