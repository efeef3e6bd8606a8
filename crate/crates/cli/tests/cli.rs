use std::path::PathBuf;
use std::process::{Command, Output};

fn hitcalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hitcalc"))
        .args(args)
        .env_remove("HITCALC_FORMAT")
        .env_remove("HITCALC_CONFIG")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn first_line(args: &[&str]) -> String {
    let o = hitcalc(args);
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    stdout(&o).lines().next().unwrap().to_string()
}

fn temp(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("hitcalc-cli-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn dimensions() {
    assert_eq!(first_line(&["dim", "-s", "5", "-d", "5"]), "dim (QP_5)_5 = 46");
    assert_eq!(first_line(&["dim", "-s", "5", "-d", "12"]), "dim (QP_5)_12 = 190");
    assert_eq!(first_line(&["dim", "-s", "1", "-d", "3"]), "dim (QP_1)_3 = 1");
    assert_eq!(first_line(&["--strategy", "recursive", "dim", "-s", "5", "-d", "13"]), "dim (QP_5)_13 = 250");
    let csv = stdout(&hitcalc(&["--format", "csv", "dim", "-s", "5", "-d", "13"]));
    assert_eq!(csv, "s,degree,dim,strategy,kernel,image,zero,positive\n5,13,250,direct,205,45,145,105\n");
}

#[test]
fn hit_test() {
    let o = hitcalc(&["hit-test", "-s", "5", "[2,2,1,1,7]+[1,2,2,1,7]"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "hit: no\nclass: [1,2,1,2,7]\n");
    let o = hitcalc(&["--format", "json", "hit-test", "[2,2,1,1,7]+[1,2,1,2,7]+[1,2,2,1,7]"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["hit"], true);
    assert!(v["certificate_size"].as_u64().unwrap() > 0);
    assert_eq!(first_line(&["hit-test", "[2,1]+[1,2]"]), "hit: yes");
    assert_eq!(hitcalc(&["hit-test", "-s", "4", "[2,1]"]).status.code(), Some(1));
    assert_eq!(hitcalc(&["hit-test", "[2,1]+[1]"]).status.code(), Some(1));
}

#[test]
fn strict_test() {
    let text = stdout(&hitcalc(&["strict-test", "[1,2,2,1,7]"]));
    assert!(text.contains("strictly inadmissible: yes"), "{text}");
    let text = stdout(&hitcalc(&["strict-test", "[1,2,2,2,2,1]"]));
    assert!(text.contains("strictly inadmissible: no\ninadmissible: yes"), "{text}");
}

#[test]
fn kameko_and_invariants() {
    let text = stdout(&hitcalc(&["kameko", "-s", "5", "-d", "13"]));
    assert!(text.contains("source 250, target 45, kernel 205, surjective yes"), "{text}");
    assert_eq!(hitcalc(&["kameko", "-s", "5", "-d", "12"]).status.code(), Some(1));
    assert_eq!(
        first_line(&["invariants", "-s", "5", "-d", "13", "--group", "GL"]),
        "GL-invariants of (QP_5)_13: dim 0"
    );
    assert_eq!(
        first_line(&["invariants", "-s", "5", "-d", "13", "--weight", "3,3,1"]),
        "Sigma-invariants of QP_5(3,3,1): dim 3"
    );
    assert_eq!(hitcalc(&["invariants", "-s", "5", "-d", "13", "--group", "SL"]).status.code(), Some(1));
}

#[test]
fn verify() {
    assert_eq!(first_line(&["verify", "--t", "2"]), "PASS t = 2, degree 13: q 145, b 60, dim 250");
    assert_eq!(first_line(&["verify", "--t", "1"]), "PASS t = 1, degree 5: q 45, b 1, dim 46");
    assert_eq!(hitcalc(&["verify", "--t", "0"]).status.code(), Some(1));
    let o = hitcalc(&["--format", "json", "verify", "--t", "2"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!((v["q"]["golden"].as_u64(), v["b"]["golden"].as_u64(), v["computed_dim"].as_u64()), (Some(145), Some(60), Some(250)));
    assert_eq!(v["amended"].as_array().unwrap().len(), 48);
}

#[test]
fn verify_reports_mismatches() {
    let shipped = include_str!("../../core/data/families.txt");
    // a monomial of the right degree and weight that is not admissible
    let swapped = shipped.replacen("q; 1; 0, 0, 2^t-1, 2^t-1, 2^{t+1}-1; t>=1", "q; 1; 0, 2, 1, 3, 7; t>=1", 1);
    assert_ne!(swapped, shipped);
    let path = temp("swapped", &swapped);
    let o = hitcalc(&["verify", "--t", "2", "--catalogue", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let text = stdout(&o);
    assert!(text.starts_with("FAIL t = 2"));
    assert!(text.contains("computed, not listed: [0,0,3,3,7]"));
    assert!(text.contains("listed, not computed: [0,2,1,3,7]"));
    // a repeated monomial
    let repeated = shipped.replacen("q; 1; 0, 0, 2^t-1, 2^t-1, 2^{t+1}-1; t>=1", "q; 1; 0, 0, 2^{t+1}-1, 2^t-1, 2^t-1; t>=1", 1);
    let path2 = temp("repeated", &repeated);
    assert_eq!(hitcalc(&["verify", "--t", "2", "--catalogue", path2.to_str().unwrap()]).status.code(), Some(2));
    let path3 = temp("broken", "q; 1; 0,0,x,1,1; t>=1\n");
    let o = hitcalc(&["verify", "--t", "2", "--catalogue", path3.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1, column 11"));
    for p in [path, path2, path3] {
        std::fs::remove_file(p).unwrap();
    }
}

#[test]
fn larger_t_is_checked_for_consistency() {
    let o = hitcalc(&["verify", "--t", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("PASS t = 4, degree 61: q 195 and b 270"), "{text}");
    assert!(text.contains("v: 33 listed, 33 computed"));
}

#[test]
fn export() {
    let text = stdout(&hitcalc(&["export", "--t", "2", "--label", "u"]));
    assert_eq!(text.lines().count(), 23);
    assert!(text.starts_with("u_1 [1,2,3,7]\n"));
    let all = stdout(&hitcalc(&["--format", "csv", "export", "--t", "2"]));
    assert_eq!(all.lines().count(), 1 + 145 + 60 + 23);
    let path = std::env::temp_dir().join(format!("hitcalc-cli-{}-export.json", std::process::id()));
    let o = hitcalc(&["--format", "json", "export", "--t", "3", "-o", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["monomials"].as_array().unwrap().len(), 195 + 260);
    std::fs::remove_file(path).unwrap();
    assert_eq!(hitcalc(&["export", "--t", "3", "--label", "u"]).status.code(), Some(1));
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["--format", "json", "basis", "-s", "4", "-d", "13"][..],
        &["invariants", "-s", "5", "-d", "13", "--weight", "3,3,1"],
        &["--format", "json", "verify", "--t", "2"],
    ] {
        let a = hitcalc(args);
        let mut with_threads = vec!["--threads", "1"];
        with_threads.extend_from_slice(args);
        let b = hitcalc(&with_threads);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.stdout, hitcalc(args).stdout);
    }
}

#[test]
fn configuration_sources() {
    let o = Command::new(env!("CARGO_BIN_EXE_hitcalc"))
        .args(["dim", "-s", "5", "-d", "5"])
        .env("HITCALC_FORMAT", "json")
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["dim"], 46);
    let path = temp("config", "# defaults\nformat=csv\nmax-space=2000\n");
    let c = path.to_str().unwrap();
    let o = hitcalc(&["--config", c, "dim", "-s", "5", "-d", "5"]);
    assert!(stdout(&o).starts_with("s,degree,dim"));
    // the file limit applies
    let o = hitcalc(&["--config", c, "dim", "-s", "5", "-d", "13"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--max-space 2380"));
    // flags win over the file
    let o = hitcalc(&["--config", c, "--format", "text", "--max-space", "5000", "dim", "-s", "5", "-d", "13"]);
    assert_eq!(stdout(&o).lines().next(), Some("dim (QP_5)_13 = 250"));
    let bad = temp("bad-config", "colour=blue\n");
    assert_eq!(hitcalc(&["--config", bad.to_str().unwrap(), "dim", "-s", "1", "-d", "1"]).status.code(), Some(1));
    std::fs::remove_file(path).unwrap();
    std::fs::remove_file(bad).unwrap();
}

#[test]
fn usage_errors() {
    assert_eq!(hitcalc(&[]).status.code(), Some(1));
    assert_eq!(hitcalc(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(hitcalc(&["dim", "-s", "5"]).status.code(), Some(1));
    assert_eq!(hitcalc(&["--format", "xml", "dim", "-s", "5", "-d", "5"]).status.code(), Some(1));
    assert_eq!(hitcalc(&["dim", "-s", "9", "-d", "5"]).status.code(), Some(1));
    assert_eq!(hitcalc(&["--help"]).status.code(), Some(0));
    assert_eq!(hitcalc(&["--version"]).status.code(), Some(0));
}
