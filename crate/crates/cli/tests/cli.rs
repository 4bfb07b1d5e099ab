use std::path::PathBuf;
use std::process::{Command, Output};

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_holonomy-lab")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("holonomy-lab-tests-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn abelian_file_passes_jacobi() {
    let path = scratch("abelian.txt", "# abelian\ndim 5\n");
    let out = lab(&["jacobi", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("PASS d^2 = 0"));
}

#[test]
fn non_lie_algebra_fails_jacobi() {
    // d(de1) = de2 ^ e3 = -e134
    let path = scratch("bad_jacobi.txt", "dim 4\nde1 = 1 : 2 3\nde2 = 1 : 1 4\n");
    let out = lab(&["jacobi", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1), "{}", stdout(&out));
    assert!(stdout(&out).contains("FAIL d^2 = 0"));
}

#[test]
fn ricci_f2_table() {
    let json = scratch("ricci.json", "");
    let out = lab(&["ricci", "--family", "F2", "--set", "r=1", "--json", json.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    let diag: Vec<String> = (0..5).map(|i| v["data"]["ricci"][i][i].as_str().unwrap().to_string()).collect();
    assert_eq!(diag, ["-8", "-8", "-8", "-8", "4"]);
    assert_eq!(v["data"]["eta_einstein"]["tau"], "-8");
    assert_eq!(v["data"]["eta_einstein"]["nu"], "12");
    let text = stdout(&out);
    assert!(text.contains("tau") && text.contains("-8") && text.contains("12"));
}

#[test]
fn ricci_from_file_matches_family() {
    let dumped = lab(&["catalog", "dump", "F2", "--set", "r=1"]);
    let path = scratch("f2.txt", &stdout(&dumped));
    let a = lab(&["ricci", "--file", path.to_str().unwrap()]);
    let b = lab(&["ricci", "--family", "F2", "--set", "r=1"]);
    let table = |o: &Output| stdout(o).lines().skip(1).take_while(|l| !l.starts_with("PASS")).collect::<Vec<_>>().join("\n");
    assert_eq!(table(&a), table(&b));
}

#[test]
fn g2_explicit_solution() {
    let json = scratch("g2.json", "");
    let out = lab(&["g2", "--kind", "K", "--set", "a=0", "b=0", "a1=2", "--json", json.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(v["data"]["rank"]["rank"], 14);
    for (name, r) in v["residual_maxima"].as_object().unwrap() {
        assert!(r.as_f64().unwrap() < 1e-10, "{name}: {r}");
    }
}

#[test]
fn holonomy_su3() {
    let out = lab(&["holonomy", "--family", "F2", "--set", "r=1"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("holonomy = SU(3)"));
}

#[test]
fn malformed_file_reports_position() {
    let path = scratch("bad.txt", "dim 5\nparam r\nde2 = 3*q : 1 2\n");
    let out = lab(&["hypo-check", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains(":3:7:"), "{err}");
    let path = scratch("bad_index.txt", "dim 5\nde2 = 1 : 1 6\n");
    let out = lab(&["jacobi", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains(":2:13:"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(lab(&["ricci"]).status.code(), Some(2));
    assert_eq!(lab(&["ricci", "--family", "F9"]).status.code(), Some(2));
    assert_eq!(lab(&["ricci", "--family", "F2", "--set", "r"]).status.code(), Some(2));
    assert_eq!(lab(&["evolve", "--family", "F3", "--set", "a=1", "r=1"]).status.code(), Some(2));
    assert_eq!(lab(&["jacobi", "/nonexistent/file"]).status.code(), Some(2));
}

#[test]
fn catalog_dump_round_trips() {
    for (id, set) in [("F1", vec!["r=1"]), ("F4", vec![]), ("F5", vec!["r=-2"]), ("F7", vec!["a=1/2", "r=3"])] {
        let mut args = vec!["catalog", "dump", id];
        if !set.is_empty() {
            args.push("--set");
            args.extend(set.iter().copied());
        }
        let out = lab(&args);
        assert_eq!(out.status.code(), Some(0), "{id}");
        let text = stdout(&out);
        assert!(text.contains("# PASS round trip: exact"));
        let path = scratch(&format!("{id}.txt"), &text);
        let check = lab(&["hypo-check", path.to_str().unwrap()]);
        assert_eq!(check.status.code(), Some(0), "{id}: {}", stdout(&check));
        assert!(stdout(&check).contains("PASS hypo-contact"));
    }
}

#[test]
fn catalog_list_names_families() {
    let out = lab(&["catalog", "list"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for id in ["F1", "F2", "F3", "F4", "F5", "F7"] {
        assert!(text.contains(id));
    }
}

#[test]
fn evolve_prints_trajectory() {
    let out = lab(&["evolve", "--family", "F2", "--set", "r=0", "--t-end", "0.5", "--tol", "1e-10"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    let last = text.lines().take_while(|l| !l.is_empty()).last().unwrap().to_string();
    let cols: Vec<f64> = last.split_whitespace().map(|c| c.parse().unwrap()).collect();
    assert!((cols[0] - 0.5).abs() < 1e-12);
    assert!((cols[1] - 3f64.sqrt()).abs() < 1e-8);
}

#[test]
fn thread_cap_is_validated() {
    let out = Command::new(env!("CARGO_BIN_EXE_holonomy-lab"))
        .args(["catalog", "list"])
        .env("HOLONOMY_LAB_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_holonomy-lab"))
        .args(["holonomy", "--family", "F2", "--set", "r=1"])
        .env("HOLONOMY_LAB_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}
