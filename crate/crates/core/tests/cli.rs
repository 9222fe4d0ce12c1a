use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use genred::format::{parse_generator, ParseOptions};
use genred::rat::rat;
use tempfile::TempDir;

fn genred(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_genred")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn example(dir: &TempDir, name: &str) -> PathBuf {
    let o = genred(&["example", name]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    write(dir, &format!("{}.json", name.replace([':', '/'], "_")), &stdout(&o))
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const COIN: &str = r#"{
  "format_version": 1,
  "states": ["q"],
  "alphabet": ["h", "t"],
  "transitions": [
    {"from": "q", "to": "q", "symbol": "h", "prob": "1/2"},
    {"from": "q", "to": "q", "symbol": "t", "prob": "1/2"}
  ]
}"#;

#[test]
fn validate_exit_codes() {
    let dir = TempDir::new().unwrap();
    let ok = write(&dir, "coin.json", COIN);
    let o = genred(&["validate", s(&ok)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "valid\n");

    let bad = write(&dir, "short.json", &COIN.replacen("\"prob\": \"1/2\"}\n", "\"prob\": \"1/3\"}\n", 1));
    let o = genred(&["validate", s(&bad)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("row q sums to 5/6"), "{}", stdout(&o));

    let malformed = write(&dir, "broken.json", "{\"format_version\": 1, \"states\": [");
    assert_eq!(genred(&["validate", s(&malformed)]).status.code(), Some(2));
    assert_eq!(genred(&["validate", "/nonexistent/file.json"]).status.code(), Some(2));
    assert_eq!(genred(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn reduce_randomness_to_one_state() {
    let dir = TempDir::new().unwrap();
    let input = example(&dir, "randomness-2");
    let out = dir.path().join("reduced.json");
    let dot = dir.path().join("reduced.dot");
    let o = genred(&["reduce", "--mode", "full", s(&input), "--out", s(&out), "--dot", s(&dot)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let report = stdout(&o);
    assert!(report.contains("reduced states: 1"), "{report}");
    let loaded = parse_generator(&std::fs::read_to_string(&out).unwrap(), &ParseOptions::default()).unwrap();
    assert_eq!(loaded.generator.num_states(), 1);
    assert_eq!(loaded.generator.prob(0, 0, 0), rat(1, 2));
    assert_eq!(loaded.generator.prob(0, 0, 1), rat(1, 2));
    assert_eq!(loaded.quotient.unwrap().len(), 2);
    let dot = std::fs::read_to_string(&dot).unwrap();
    assert!(dot.starts_with("digraph"));
    assert!(dot.contains("label=\"a : 1/2\""), "{dot}");
}

#[test]
fn reduce_event_mode_reports_parity_partition() {
    let dir = TempDir::new().unwrap();
    let input = example(&dir, "parity-4");
    let o = genred(&["reduce", "--mode", "event", s(&input)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("event partition: {{0,2},{1,3}}"), "{}", stderr(&o));
    let reduced = parse_generator(&stdout(&o), &ParseOptions::default()).unwrap().generator;
    assert_eq!(reduced.num_states(), 2);
}

#[test]
fn reducing_a_minimal_generator_changes_only_names() {
    let dir = TempDir::new().unwrap();
    let input = example(&dir, "golden-mean-redundant");
    let once = genred(&["reduce", s(&input)]);
    assert_eq!(once.status.code(), Some(0));
    let first = write(&dir, "once.json", &stdout(&once));
    let twice = genred(&["reduce", s(&first)]);
    assert_eq!(twice.status.code(), Some(0));
    assert!(stderr(&twice).contains("c_0 -> c_c_0\n"), "{}", stderr(&twice));
    // stripping the class prefix and the quotient map gives the same file
    let strip = |text: &str| -> String {
        let mut v: serde_json::Value = serde_json::from_str(text).unwrap();
        v.as_object_mut().unwrap().remove("quotient");
        serde_json::to_string(&v).unwrap().replace("c_", "")
    };
    assert_eq!(strip(&stdout(&once)), strip(&stdout(&twice)));
}

#[test]
fn words_command() {
    let dir = TempDir::new().unwrap();
    let input = example(&dir, "randomness-2");
    let o = genred(&["words", s(&input), "--max-len", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "ε 1/1\na 1/2\nb 1/2\naa 1/4\nab 1/4\nba 1/4\nbb 1/4\n");

    let o = genred(&["words", s(&input), "--max-len", "1", "--initial", "state:a"]);
    assert_eq!(o.status.code(), Some(0));
    let o = genred(&["words", s(&input), "--max-len", "0"]);
    assert_eq!(stdout(&o), "ε 1/1\n");
}

#[test]
fn size_limit_flag_and_environment() {
    let dir = TempDir::new().unwrap();
    let input = example(&dir, "randomness-2");
    // 2^0 + .. + 2^4 = 31 entries
    let o = genred(&["words", s(&input), "--max-len", "4", "--size-limit", "30"]);
    assert_eq!(o.status.code(), Some(1));
    let run = |limit: &str, flag: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_genred"));
        cmd.args(["words", s(&input), "--max-len", "4"]).env("GENRED_SIZE_LIMIT", limit);
        if let Some(f) = flag {
            cmd.args(["--size-limit", f]);
        }
        cmd.output().unwrap().status.code()
    };
    assert_eq!(run("30", None), Some(1));
    assert_eq!(run("31", None), Some(0));
    assert_eq!(run("30", Some("31")), Some(0));
    assert_eq!(run("lots", None), Some(2));
}

#[test]
fn decimal_tolerance_flag() {
    let dir = TempDir::new().unwrap();
    let thirds = COIN.replacen("1/2", "0.333333333", 1).replacen("1/2", "0.666666666", 1);
    let path = write(&dir, "thirds.json", &thirds);
    assert_eq!(genred(&["validate", s(&path)]).status.code(), Some(1));
    assert_eq!(genred(&["validate", "--decimal-tolerance", s(&path)]).status.code(), Some(0));
    assert_eq!(genred(&["validate", "--decimal-tolerance=1/1000", s(&path)]).status.code(), Some(0));
    let o = genred(&["words", "--decimal-tolerance", s(&path), "--max-len", "1"]);
    assert_eq!(stdout(&o), "ε 1/1\nh 1/3\nt 2/3\n");
}

#[test]
fn equiv_reports_shortest_witness() {
    let dir = TempDir::new().unwrap();
    let coin = write(&dir, "coin.json", COIN);
    let two = write(
        &dir,
        "two.json",
        r#"{"format_version": 1, "states": ["u", "v"], "alphabet": ["h", "t"], "transitions": [
            {"from": "u", "to": "v", "symbol": "h", "prob": "1/2"},
            {"from": "u", "to": "u", "symbol": "t", "prob": "1/2"},
            {"from": "v", "to": "u", "symbol": "h", "prob": "1/2"},
            {"from": "v", "to": "v", "symbol": "t", "prob": "1/2"}]}"#,
    );
    let o = genred(&["equiv", s(&coin), s(&two)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o), "equivalent\n");

    // a biased coin after the first symbol: differs first at length 2
    let sticky = write(
        &dir,
        "sticky.json",
        r#"{"format_version": 1, "states": ["s", "h", "t"], "alphabet": ["h", "t"], "transitions": [
            {"from": "s", "to": "h", "symbol": "h", "prob": "1/2"},
            {"from": "s", "to": "t", "symbol": "t", "prob": "1/2"},
            {"from": "h", "to": "h", "symbol": "h", "prob": "3/4"},
            {"from": "h", "to": "t", "symbol": "t", "prob": "1/4"},
            {"from": "t", "to": "h", "symbol": "h", "prob": "1/4"},
            {"from": "t", "to": "t", "symbol": "t", "prob": "3/4"}],
          "initial": {"s": "1", "h": "0", "t": "0"}}"#,
    );
    let o = genred(&["equiv", s(&coin), s(&sticky)]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "not equivalent\nshortest distinguishing word: hh\n  P_A = 1/4\n  P_B = 3/8\n");
    let o = genred(&["equiv", s(&coin), s(&sticky), "--muB", "state:h"]);
    assert_eq!(stdout(&o).lines().nth(1), Some("shortest distinguishing word: h"));

    let other = write(&dir, "other.json", &COIN.replace("\"t\"", "\"x\""));
    assert_eq!(genred(&["equiv", s(&coin), s(&other)]).status.code(), Some(1));
}

#[test]
fn causal_command() {
    let dir = TempDir::new().unwrap();
    let input = example(&dir, "golden-mean-redundant");
    let o = genred(&["causal", s(&input)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "causal states: 2\npartition: {{0},{1,1b}}\n");
}

#[test]
fn example_command() {
    let o = genred(&["example", "rotation:1/4"]);
    assert_eq!(o.status.code(), Some(0));
    let rot = parse_generator(&stdout(&o), &ParseOptions::default()).unwrap();
    assert_eq!(rot.generator.num_states(), 4);
    assert_eq!(rot.generator.states(), ["arc0", "arc1", "arc2", "arc3"]);

    let o = genred(&["example", "rotation:sqrt2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("no finite"), "{}", stderr(&o));
    assert_eq!(genred(&["example", "unknown"]).status.code(), Some(1));

    // canonical output is a fixed point of parse and print
    let o = genred(&["example", "randomness-2"]);
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "r.json", &stdout(&o));
    let again = genred(&["reduce", "--mode", "state", s(&path)]);
    assert_eq!(again.status.code(), Some(0));
    let text = stdout(&o);
    let parsed = parse_generator(&text, &ParseOptions::default()).unwrap();
    let printed = genred::format::generator_to_json(&parsed.generator, parsed.initial.as_ref());
    assert_eq!(printed, text);
}

#[test]
fn sample_command() {
    let dir = TempDir::new().unwrap();
    let input = example(&dir, "randomness-2");
    let a = genred(&["sample", s(&input), "-n", "40", "--seed", "9"]);
    let b = genred(&["sample", s(&input), "-n", "40", "--seed", "9"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
    assert_eq!(stdout(&a).trim().len(), 40);
    assert_eq!(stdout(&genred(&["sample", s(&input), "-n", "0"])), "\n");

    let parity = example(&dir, "parity-4");
    let o = genred(&["sample", s(&parity), "-n", "8", "--initial", "state:0"]);
    assert_eq!(stdout(&o), "10101010\n");
}

#[test]
fn morphism_command() {
    let dir = TempDir::new().unwrap();
    let source = example(&dir, "golden-mean-redundant");
    let reduced = genred(&["reduce", s(&source)]);
    let target = write(&dir, "target.json", &stdout(&reduced));
    let good = write(&dir, "good.json", r#"{"f": {"0": "c_0", "1": "c_1", "1b": "c_1"}, "g": {"0": "0", "1": "1"}}"#);
    let o = genred(&["morphism", s(&source), s(&target), s(&good), "--transport", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o), "transition-preserving\ntransport holds up to length 4\n");

    let bad = write(&dir, "bad.json", r#"{"f": {"0": "c_1", "1": "c_0", "1b": "c_0"}, "g": {"0": "0", "1": "1"}}"#);
    let o = genred(&["morphism", s(&source), s(&target), s(&bad)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("not transition-preserving"));

    let partial = write(&dir, "partial.json", r#"{"f": {"0": "c_0"}, "g": {"0": "0", "1": "1"}}"#);
    assert_eq!(genred(&["morphism", s(&source), s(&target), s(&partial)]).status.code(), Some(2));
}

#[test]
fn in_process_runner_matches_binary() {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = genred::cli::run(["genred", "example", "parity-4"], &mut out, &mut err);
    assert_eq!(code, 0);
    assert_eq!(out, genred(&["example", "parity-4"]).stdout);
}
