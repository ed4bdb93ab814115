use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn dlwb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dlwb")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

fn write_temp(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn infer_prints_sorted_conclusions_for_requested_tags() {
    let ex1 = fixture("ex1.dfl");
    let o = dlwb(&["infer", "--tags", "pd*", ex1.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "+pd* q\n-pd* p\n-pd* ~p\n-pd* ~q\n");

    let o = dlwb(&["infer", "--tags", "D,s*", "--json", ex1.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = doc["conclusions"].as_array().unwrap();
    assert!(rows.iter().all(|r| r["tag"] == "D" || r["tag"] == "s*"));
    assert_eq!(rows.iter().filter(|r| r["tag"] == "s*" && r["sign"] == "+").count(), 4);
}

#[test]
fn parse_echoes_canonical_form_and_reports_positions() {
    let dir = tempfile::tempdir().unwrap();
    let messy = write_temp(&dir, "messy.dfl", "# note\nr2 :  q,p=>~s .  fact t.\nr1: -> q.\nr1 > r2.\n");
    let o = dlwb(&["parse", &messy]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "t.\nr2: p, q => ~s.\nr1: -> q.\nr1 > r2.\n");

    let broken = write_temp(&dir, "broken.dfl", "r1: => p.\nr2: p => .\n");
    let o = dlwb(&["parse", &broken]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains(":2:"));

    let reserved = write_temp(&dir, "reserved.dfl", "r1: => $h(r1).\n");
    assert_eq!(dlwb(&["parse", &reserved]).status.code(), Some(2));
    assert_eq!(dlwb(&["parse", "--loose", &reserved]).status.code(), Some(0));
}

#[test]
fn transform_output_reparses_in_loose_mode() {
    let ex13 = fixture("ex13.dfl");
    let o = dlwb(&["transform", "--kind", "team-for-individual", ex13.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.lines().any(|l| l.starts_with("$o(p):") && l.contains("~>")));

    let dir = tempfile::tempdir().unwrap();
    let out = write_temp(&dir, "t.dfl", &text);
    let o = dlwb(&["parse", "--loose", &out]);
    assert_eq!(stdout(&o), text);
}

#[test]
fn add_joins_or_reports_clashes() {
    let (d, a) = (fixture("ex13.dfl"), fixture("ex13_addition.dfl"));
    let o = dlwb(&["add", d.to_str().unwrap(), a.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "r1: => p.\nr2: => ~p.\na1: => p.\n");

    let o = dlwb(&["add", d.to_str().unwrap(), d.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("r1"));
}

#[test]
fn check_sim_reports_the_known_counterexample() {
    let (d, a) = (fixture("ex13.dfl"), fixture("ex13_addition.dfl"));
    let args = [
        "check-sim",
        "--transform",
        "def4",
        "--source",
        "pd*",
        "--target",
        "pd",
        "--additions",
        "rules",
        "--trials",
        "1",
        "--fixture",
        a.to_str().unwrap(),
        d.to_str().unwrap(),
    ];
    let o = dlwb(&args);
    assert_eq!(o.status.code(), Some(1));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["verdict"], "Mismatch");
    let m = &doc["mismatches"][0];
    assert_eq!((m["literal"].as_str(), m["sign"].as_str()), (Some("p"), Some("+")));
    assert_eq!((m["source"].as_bool(), m["target"].as_bool()), (Some(false), Some(true)));
    for key in ["claim", "trials", "seed"] {
        assert!(doc.get(key).is_some(), "{key}");
    }
}

#[test]
fn check_sim_passes_and_replays() {
    let ex1 = fixture("ex1.dfl");
    let args = [
        "check-sim",
        "--transform",
        "block-for-prop",
        "--source",
        "d*",
        "--target",
        "pd*",
        "--additions",
        "facts",
        "--trials",
        "50",
        "--seed",
        "11",
        ex1.to_str().unwrap(),
    ];
    let first = dlwb(&args);
    assert_eq!(first.status.code(), Some(0), "{}", stdout(&first));
    assert!(stdout(&first).contains("\"AllPass\""));
    assert_eq!(first.stdout, dlwb(&args).stdout);
}

#[test]
fn usage_errors_exit_with_two() {
    let ex1 = fixture("ex1.dfl");
    let ex1 = ex1.to_str().unwrap();
    let unseeded = [
        "check-sim", "--transform", "def2", "--source", "d*", "--target", "pd*", "--additions", "facts", ex1,
    ];
    let unsupported = [
        "check-sim", "--transform", "def2", "--source", "pd", "--target", "d", "--additions", "facts", "--seed", "1",
        ex1,
    ];
    let cases: [&[&str]; 6] = [
        &[],
        &["infer"],
        &["infer", "--tags", "x*", ex1],
        &["transform", "--kind", "def9", ex1],
        &unseeded,
        &unsupported,
    ];
    for args in cases {
        assert_eq!(dlwb(args).status.code(), Some(2), "{args:?}");
    }
    assert_eq!(dlwb(&["parse", "/nonexistent/x.dfl"]).status.code(), Some(2));
    assert_eq!(dlwb(&["check-props"]).status.code(), Some(2));
}

#[test]
fn check_props_and_examples_succeed() {
    let o = dlwb(&["check-props", "--seed", "3", "--trials", "40", fixture("ex15.dfl").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "41 theories checked, 0 with violations\n");

    let o = dlwb(&["examples"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 7);
    assert!(text.lines().all(|l| l.starts_with("PASS")));
    assert_eq!(o.stdout, dlwb(&["examples"]).stdout);
}
