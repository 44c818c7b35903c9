use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn catcode(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_catcode")).args(args).env_remove("OPENAI_API_KEY").output().unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = catcode(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    catcode(args).status.code().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn stages_chain_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let java = fixtures().join("humaneval-x/java.jsonl");
    let corpus = d.join("corpus.jsonl");
    let variants = d.join("variants.jsonl");
    let pairs = d.join("pairs.jsonl");
    let tasks = d.join("tasks.jsonl");
    let responses = d.join("responses.jsonl");
    let report = d.join("report.json");

    ok(&["ingest", "--dataset", "humaneval-x", "--path", s(&java), "--out", s(&corpus), "--compile", "syntax-only"]);
    ok(&["morph", "--in", s(&corpus), "--seed", "3", "--out", s(&variants)]);
    ok(&["pairs", "--corpus", s(&corpus), "--variants", s(&variants), "--seed", "3", "--out", s(&pairs)]);
    ok(&["tasks", "--kind", "identification", "--pairs", s(&pairs), "--out", s(&tasks)]);
    ok(&["run", "--tasks", s(&tasks), "--model", "yes-man", "--adapter", "stub-constant-true", "--out", s(&responses)]);
    ok(&["score", "--pairs", s(&pairs), "--responses", s(&responses), "--out", s(&report)]);

    let csv = ok(&["report", "--in", s(&report), "--format", "csv"]);
    assert!(csv.starts_with("run_id,section,slice,metric,num,den,value"));
    let json: serde_json::Value = serde_json::from_str(&ok(&["report", "--in", s(&report), "--format", "json"])).unwrap();
    assert_eq!(json["pairing"]["overall"]["precision_eq"]["value"], 1.0);
    assert_eq!(json["pairing"]["overall"]["precision_neq"]["value"], 0.0);
}

#[test]
fn same_seed_same_pairs() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let java = fixtures().join("humaneval-x/java.jsonl");
    let corpus = d.join("corpus.jsonl");
    ok(&["ingest", "--dataset", "humaneval-x", "--path", s(&java), "--out", s(&corpus), "--compile", "syntax-only"]);
    let mut outputs = Vec::new();
    for name in ["a", "b"] {
        let v = d.join(format!("{name}-variants.jsonl"));
        let p = d.join(format!("{name}-pairs.jsonl"));
        ok(&["morph", "--in", s(&corpus), "--seed", "11", "--out", s(&v)]);
        ok(&["pairs", "--corpus", s(&corpus), "--variants", s(&v), "--seed", "11", "--out", s(&p)]);
        outputs.push(std::fs::read(p).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn each_failing_stage_has_its_own_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let missing = d.join("nope.jsonl");
    let garbage = d.join("garbage.jsonl");
    std::fs::write(&garbage, "{not json\n").unwrap();
    let out = d.join("out.jsonl");

    assert_eq!(code(&["pipeline", "--config", s(&missing)]), 2);
    assert_eq!(code(&["frobnicate"]), 2);
    assert_eq!(code(&["ingest", "--dataset", "humaneval-x", "--path", s(&missing), "--out", s(&out)]), 10);
    assert_eq!(code(&["morph", "--in", s(&garbage), "--seed", "1", "--out", s(&out)]), 11);
    assert_eq!(code(&["pairs", "--corpus", s(&garbage), "--seed", "1", "--out", s(&out)]), 12);
    assert_eq!(code(&["tasks", "--kind", "identification", "--pairs", s(&garbage), "--out", s(&out)]), 13);

    let tasks = d.join("tasks.jsonl");
    std::fs::write(&tasks, "").unwrap();
    let run = [
        "run",
        "--tasks",
        s(&tasks),
        "--model",
        "m",
        "--adapter",
        "chat-http",
        "--endpoint",
        "http://127.0.0.1:9",
        "--model-name",
        "x",
        "--out",
        s(&out),
    ];
    assert_eq!(code(&run), 14, "no API key in the environment");
    assert_eq!(code(&["exec", "--candidates", s(&garbage), "--corpus", s(&garbage), "--out", s(&out)]), 15);
    assert_eq!(code(&["score", "--pairs", s(&garbage), "--verdicts", s(&garbage), "--out", s(&out)]), 16);
    assert_eq!(code(&["report", "--in", s(&garbage)]), 17);

    let doctor = Command::new(env!("CARGO_BIN_EXE_catcode")).arg("doctor").env("CATCODE_JAVAC", d.join("no-such-javac")).output().unwrap();
    assert_eq!(doctor.status.code(), Some(18));
    assert!(String::from_utf8_lossy(&doctor.stdout).contains("MISSING"));
}

#[test]
fn pipeline_runs_offline_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(
        &cfg,
        format!(
            "seed = 5\nout_dir = \"out\"\n[[dataset]]\nname = \"humaneval-x\"\nlanguage = \"java\"\npath = \"{}\"\n\
             [task]\nkind = \"identification\"\n[model]\nid = \"t\"\nadapter = \"stub_constant_true\"\n\
             [harness]\ncompile_check = \"syntax_only\"\n",
            fixtures().join("humaneval-x/java.jsonl").display()
        ),
    )
    .unwrap();
    let stdout = ok(&["pipeline", "--config", s(&cfg)]);
    assert!(stdout.contains("precision(eq)  1.0000"), "{stdout}");
    let reports: Vec<_> = std::fs::read_dir(dir.path().join("out"))
        .unwrap()
        .filter_map(|e| e.ok())
        .filter(|e| e.file_name().to_string_lossy().starts_with("report-") && e.file_name().to_string_lossy().ends_with(".json"))
        .collect();
    assert_eq!(reports.len(), 1);
}
