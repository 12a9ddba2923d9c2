use std::path::PathBuf;
use std::process::{Command, Output};

fn horobound(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_horobound"))
        .args(args)
        .env_remove("HOROBOUND_MAX_VERTICES")
        .env_remove("HOROBOUND_MAX_ENUMERATION")
        .output()
        .unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("horobound-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn run_prints_a_verified_report() {
    let out = horobound(&["run", "--graph", "gamma1", "--op", "fingerprints", "--r-test", "2", "--annuli", "6,7"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["verification"]["status"], "verified");
    assert_eq!(v["payload"]["kind"], "fingerprints");
}

#[test]
fn output_does_not_depend_on_the_worker_count() {
    let args = ["run", "--graph", "heisenberg:std", "--op", "rigid-scan", "--radius", "3"];
    let one = horobound(&[&["--workers", "1"], &args[..]].concat());
    let four = horobound(&[&["--workers", "4"], &args[..]].concat());
    assert_eq!(code(&one), 0);
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn bad_input_exits_2() {
    assert_eq!(code(&horobound(&["run", "--graph", "gamma1", "--op", "ball"])), 2);
    assert_eq!(code(&horobound(&["run", "--graph", "nope", "--op", "ball", "--radius", "2"])), 2);
    assert_eq!(code(&horobound(&["ball", "--graph", "zd:2", "--radius", "2", "--base", "(0,x)"])), 2);
}

#[test]
fn resource_caps_exit_3() {
    let out = horobound(&["--max-vertices", "50", "ball", "--graph", "free:2", "--radius", "6"]);
    assert_eq!(code(&out), 3);
    assert!(!out.stderr.is_empty());
}

#[test]
fn tampered_reports_fail_verification() {
    let path = scratch("ball.json");
    let p = path.to_str().unwrap();
    let out = horobound(&["run", "--graph", "zd:2", "--op", "ball", "--radius", "2", "--output", p]);
    assert_eq!(code(&out), 0);
    assert_eq!(code(&horobound(&["verify", p])), 0);

    let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    v["payload"]["records"]["sphere_sizes"][2] = 9.into();
    std::fs::write(&path, serde_json::to_string_pretty(&v).unwrap()).unwrap();
    assert_eq!(code(&horobound(&["verify", p])), 4);
}

#[test]
fn paper_check_passes_and_catches_a_corruption() {
    let ok = horobound(&["paper-check", "--only", "gamma1"]);
    assert_eq!(code(&ok), 0, "{}", String::from_utf8_lossy(&ok.stdout));
    let bad = horobound(&["paper-check", "--only", "gamma1", "--corrupt", "gamma1"]);
    assert_eq!(code(&bad), 4);
    assert!(String::from_utf8_lossy(&bad.stdout).contains("corrupted gamma1"));
}

#[test]
fn kb_complete_reports_confluence() {
    assert_eq!(code(&horobound(&["kb-complete", "zd:2"])), 0);
    assert_eq!(code(&horobound(&["normal-form", "--graph", "free_product:2,3", "aab"])), 0);
}
