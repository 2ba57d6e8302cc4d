use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn addcomp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_addcomp"))
        .args(args)
        .env_remove("ADDCOMP_PREFIX_CAP")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn fixture_dir() -> &'static Path {
    Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/../core/fixtures"))
}

#[test]
fn generate_prefixes() {
    let o = addcomp(&["generate", "-m", "0->01 1->02 2->0", "-a", "0", "-n", "12"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "010201001020\n");

    let o = addcomp(&["generate", "-m", "0->012 1->02 2->1", "-a", "0", "-n", "8"]);
    assert_eq!(stdout(&o), "01202101\n");

    let o = addcomp(&["generate", "-w", "fib", "-n", "0"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "");
}

#[test]
fn generate_to_file_with_coding() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("w.txt");
    let o = addcomp(&[
        "generate", "-m", "0->01 1->10", "-c", "0->1 1->0", "-n", "8", "-o",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(fs::read_to_string(out).unwrap(), "10010110\n");
}

#[test]
fn profile_summaries() {
    let o = addcomp(&["profile", "-m", "0->012 1->120 2->201", "--n-max", "50"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("additive: 1 3 (5)^ω"), "{s}");
    assert!(s.contains("abelian: 1 3 (6 7 6)^ω"), "{s}");

    let o = addcomp(&["profile", "-w", "collinear", "--n-max", "100"]);
    let s = stdout(&o);
    assert!(s.contains("additive: 1 3 4 (3 5 5)^ω"), "{s}");
    assert!(s.contains("abelian: 1 3 5 (3 7 7)^ω"), "{s}");
}

#[test]
fn profile_difference_csv_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("p.csv");
    let svg = dir.path().join("p.svg");
    let o = addcomp(&[
        "profile", "-w", "ccss", "--n-max", "40", "--difference", "--csv",
        csv.to_str().unwrap(), "--svg", svg.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("difference: first nonzero at n=23"));

    let text = fs::read_to_string(csv).unwrap();
    let rows: Vec<Vec<i64>> = text
        .lines()
        .skip(1)
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 41);
    for r in &rows {
        assert_eq!(r[3], r[1] - r[2]);
    }
    assert!(rows[..23].iter().all(|r| r[3] == 0));
    assert_ne!(rows[23][3], 0);

    let plot = fs::read_to_string(svg).unwrap();
    assert!(plot.starts_with("<svg") && plot.trim_end().ends_with("</svg>"));
    assert!(!plot.contains("href"));
}

#[test]
fn dfao_round_trip_and_compare() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("rs.dfao");
    let rep = fixture_dir().join("rudin_shapiro.linrep");
    let o = addcomp(&["linrep", "semigroup", rep.to_str().unwrap(), "-o", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(
        fs::read_to_string(&out).unwrap(),
        fs::read_to_string(fixture_dir().join("rudin_shapiro.dfao")).unwrap()
    );
    let args: Vec<String> = (0..16).map(|n| n.to_string()).collect();
    let mut cmd = vec!["dfao", "run", out.to_str().unwrap(), "--numsys", "base:2"];
    cmd.extend(args.iter().map(String::as_str));
    let o = addcomp(&cmd);
    let text = stdout(&o);
    let terms: Vec<&str> = text.lines().map(|l| l.split(' ').nth(1).unwrap()).collect();
    assert_eq!(terms.join(""), "0001001000011101");

    let prop = fixture_dir().join("collinear_additive.dfao");
    let o = addcomp(&["dfao", "compare", prop.to_str().unwrap(), "--numsys", "base:3", "-w", "collinear", "--n-max", "243"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    // the wrong automaton for this word is a verification failure
    let tm = fixture_dir().join("ternary_tm_additive.dfao");
    let o = addcomp(&["dfao", "compare", tm.to_str().unwrap(), "--numsys", "base:3", "-w", "collinear", "--n-max", "50"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("first mismatch at n=2"), "{}", stdout(&o));
}

#[test]
fn linrep_eval_matches_automaton() {
    let rep = fixture_dir().join("rudin_shapiro.linrep");
    let o = addcomp(&["linrep", "eval", rep.to_str().unwrap(), "--digits", "1011"]);
    assert_eq!(stdout(&o).trim(), "1");
    let o = addcomp(&["linrep", "minimize", rep.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("dim: "));
}

#[test]
fn exit_codes() {
    // input error
    let o = addcomp(&["generate", "-m", "0->>1", "-n", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("error"));
    let o = addcomp(&["dfao", "run", "/nonexistent.dfao", "--digits", "1"]);
    assert_eq!(o.status.code(), Some(2));
    // resource caps
    let o = addcomp(&["valuation", "mismatch", "-w", "vtm:5", "--n-max", "200", "--cap", "100"]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    let o = Command::new(env!("CARGO_BIN_EXE_addcomp"))
        .args(["valuation", "mismatch", "-w", "vtm:5", "--n-max", "200"])
        .env("ADDCOMP_PREFIX_CAP", "100")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    let dir = tempfile::tempdir().unwrap();
    let pos = dir.path().join("pos.linrep");
    fs::write(&pos, "dim: 1\nlambda: 1\nmu 0:\n1\nmu 1:\n2\ngamma: 1\n").unwrap();
    let o = addcomp(&["linrep", "semigroup", pos.to_str().unwrap(), "--max-states", "20"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn valuation_commands() {
    let o = addcomp(&["valuation", "equalize", "--alphabet", "0,1,2", "-C", "2"]);
    assert_eq!(stdout(&o).trim(), "0:0,1:1,2:3");
    let o = addcomp(&["valuation", "mismatch", "-w", "vtm:3", "--n-max", "60"]);
    assert_eq!(stdout(&o).trim(), "first mismatch at n=11");
}

#[test]
fn powers_commands() {
    let o = addcomp(&["powers", "orders", "-w", "fib", "-k", "2", "--max-order", "10", "--window", "3000"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert_eq!(s.lines().filter(|l| !l.starts_with('#')).count(), 11, "{s}");
    let o = addcomp(&["--sequential", "powers", "orders", "-w", "fib", "-k", "2", "--max-order", "10", "--window", "3000"]);
    assert_eq!(stdout(&o), s);
}

#[test]
fn verify_suites_pass_with_json_report() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.jsonl");
    let o = addcomp(&["verify", "vtm", "semigroup", "--report", report.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = fs::read_to_string(report).unwrap();
    let mut suites = std::collections::BTreeSet::new();
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["pass"], true, "{line}");
        for key in ["check", "expected", "actual", "elapsed_ms"] {
            assert!(v.get(key).is_some(), "{key} missing in {line}");
        }
        suites.insert(v["suite"].as_str().unwrap().to_string());
    }
    assert_eq!(suites.into_iter().collect::<Vec<_>>(), ["semigroup", "vtm"]);
}

#[test]
fn verify_all_fails_on_corrupted_fixture() {
    let dir = tempfile::tempdir().unwrap();
    for f in fs::read_dir(fixture_dir()).unwrap() {
        let f = f.unwrap();
        fs::copy(f.path(), dir.path().join(f.file_name())).unwrap();
    }
    let target = dir.path().join("rudin_shapiro.dfao");
    let text = fs::read_to_string(&target).unwrap();
    fs::write(&target, text.replace("w3 --0--> w3", "w3 --0--> w2")).unwrap();

    let o = addcomp(&["verify", "all", "--fixtures", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("-  ") && err.contains("w3 --0--> w3"), "{err}");
    assert!(err.contains("+  ") && err.contains("w3 --0--> w2"), "{err}");
    let failed: Vec<serde_json::Value> = stdout(&o)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .filter(|v: &serde_json::Value| v["pass"] == false)
        .collect();
    assert_eq!(failed.len(), 1);
    assert_eq!(failed[0]["suite"], "semigroup");
}

#[test]
fn unknown_suite_is_an_input_error() {
    let o = addcomp(&["verify", "nope"]);
    assert_eq!(o.status.code(), Some(2));
}
