//! Pairing test and execution test.
//!
//! The pairing side reads a True/False judgment out of model text; the
//! execution side assembles candidate code with a test suite in a fresh
//! temporary directory, compiles it where the language needs that, runs it
//! under time and memory limits, and classifies anything that is not a pass.
//!
//! Containment is limited to a scrubbed environment, a private working
//! directory, a process group that is killed on timeout, and an address-space
//! limit. There is no OS-level network or filesystem isolation.

mod classify;
mod extract;
mod process;
mod toolchain;

use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{LazyLock, Mutex};
use std::time::Duration;

use regex::Regex;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub use classify::{classify_failure, is_assertion_failure, ExitState, Phase, EXTRACTION_FAILURE, TEST_FAILURE, TIMEOUT, UNKNOWN};
pub use extract::{code_from_text, verdict_from_text, Verdict, VerdictLabel};
pub use process::ProcessResult;
pub use toolchain::{doctor, DoctorReport, ToolStatus, Toolchain};

use crate::corpus::{CodeObject, CompileCheck, TestSuite};
use crate::error::{Error, Result};
use crate::lang::Language;
use crate::modelgw::{ModelResponse, ResponseStatus};
use crate::pairgen::SuiteRunner;

/// Verdict for a gateway response; failed requests are unparseable.
pub fn extract_boolean_verdict(resp: &ModelResponse) -> Verdict {
    if resp.status != ResponseStatus::Ok {
        return Verdict { task_id: resp.task_id.clone(), parsed: VerdictLabel::Unparseable, evidence: String::new() };
    }
    verdict_from_text(&resp.task_id, &resp.raw_text)
}

pub fn extract_code_block(resp: &ModelResponse, language: Language) -> Option<String> {
    if resp.status != ResponseStatus::Ok {
        return None;
    }
    code_from_text(&resp.raw_text, language)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Limits {
    pub compile_timeout_secs: u64,
    pub run_timeout_secs: u64,
    pub memory_mb: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { compile_timeout_secs: 60, run_timeout_secs: 30, memory_mb: 512 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExecStatus {
    Pass,
    TestFailure,
    CompileError,
    RuntimeError,
    Timeout,
    ExtractionFailure,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExecutionOutcome {
    pub task_id: String,
    pub status: ExecStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure_type: Option<String>,
    pub stderr_digest: String,
    pub duration_ms: u64,
    /// Head of the diagnostics, for reading failures without rerunning.
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub stderr_excerpt: String,
}

impl ExecutionOutcome {
    pub fn extraction_failure(task_id: &str) -> Self {
        ExecutionOutcome {
            task_id: task_id.into(),
            status: ExecStatus::ExtractionFailure,
            failure_type: Some(EXTRACTION_FAILURE.into()),
            stderr_digest: digest(""),
            duration_ms: 0,
            stderr_excerpt: String::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == ExecStatus::Pass
    }
}

fn digest(text: &str) -> String {
    hex::encode(&Sha256::digest(text.as_bytes())[..8])
}

fn excerpt(text: &str) -> String {
    text.chars().take(2000).collect()
}

/// A file to write plus the commands that compile and run it.
struct Unit {
    file: String,
    contents: String,
    compile: Option<(PathBuf, Vec<String>)>,
    run: (PathBuf, Vec<String>),
    /// Address-space limit; the JVM and V8 get heap flags instead.
    rlimit: Option<u64>,
}

static IMPORT_LINE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"(?m)^[ \t]*import\s+(?:static\s+)?[\w.*]+\s*;[ \t]*\r?\n?").unwrap());
static PACKAGE_LINE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"(?m)^[ \t]*package\s+[\w.]+\s*;[ \t]*\r?\n?").unwrap());
static PUBLIC_CLASS: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?m)^\s*public\s+(?:final\s+|abstract\s+)*class\s+([A-Za-z_$][\w$]*)").unwrap());
static CLASS_DECL: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"(?m)\bclass\s+([A-Za-z_$][\w$]*)").unwrap());
static MAIN_METHOD: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"public\s+static\s+void\s+main\s*\(").unwrap());

/// Joins Java fragments into one compilation unit: imports hoisted and
/// deduplicated, package clauses dropped, and at most one public class, which
/// names the file.
fn java_unit(parts: &[&str]) -> (String, String, String) {
    let mut imports: Vec<String> = Vec::new();
    let mut bodies = Vec::new();
    for part in parts {
        for m in IMPORT_LINE.find_iter(part) {
            let line = m.as_str().trim().to_string();
            if !imports.contains(&line) {
                imports.push(line);
            }
        }
        let body = PACKAGE_LINE.replace_all(&IMPORT_LINE.replace_all(part, ""), "").into_owned();
        bodies.push(body);
    }
    let mut text = bodies.join("\n\n");
    let publics: Vec<String> = PUBLIC_CLASS.captures_iter(&text).map(|c| c[1].to_string()).collect();
    // Only one public class is allowed per file: keep the one holding `main`.
    let main_class = main_class_name(&text).unwrap_or_else(|| "Main".into());
    if publics.len() > 1 || publics.iter().any(|p| *p != main_class) {
        for p in publics.iter().filter(|p| **p != main_class) {
            let re = Regex::new(&format!(r"public\s+((?:final\s+|abstract\s+)*class\s+{}\b)", regex::escape(p))).unwrap();
            text = re.replace_all(&text, "$1").into_owned();
        }
    }
    let contents = format!("{}\n\n{}\n", imports.join("\n"), text.trim());
    let file = if publics.contains(&main_class) { format!("{main_class}.java") } else { "Main.java".into() };
    (file, contents, main_class)
}

/// The class whose body contains `public static void main(`.
fn main_class_name(text: &str) -> Option<String> {
    let at = MAIN_METHOD.find(text)?.start();
    CLASS_DECL.captures_iter(&text[..at]).last().map(|c| c[1].to_string())
}

fn build_unit(code: &str, suite: &TestSuite, language: Language, tools: &[PathBuf], limits: &Limits) -> Result<Unit> {
    let mem = limits.memory_mb;
    let script = if suite.is_stdio() { "" } else { suite.script.as_str() };
    Ok(match language {
        Language::Java => {
            let (file, contents, main) = java_unit(&[code, script]);
            Unit {
                compile: Some((tools[0].clone(), vec!["-J-Xmx512m".into(), "-nowarn".into(), "-d".into(), ".".into(), file.clone()])),
                run: (tools[1].clone(), vec![format!("-Xmx{mem}m"), "-Xss64m".into(), "-cp".into(), ".".into(), main]),
                file,
                contents,
                rlimit: None,
            }
        }
        Language::Python => Unit {
            file: "main.py".into(),
            contents: format!("{code}\n\n{script}\n"),
            compile: Some((tools[0].clone(), vec!["-m".into(), "py_compile".into(), "main.py".into()])),
            run: (tools[0].clone(), vec!["main.py".into()]),
            rlimit: Some(mem * 1024 * 1024),
        },
        Language::Javascript => Unit {
            file: "main.js".into(),
            contents: format!("{code}\n\n{script}\n"),
            compile: Some((tools[0].clone(), vec!["--check".into(), "main.js".into()])),
            run: (tools[0].clone(), vec![format!("--max-old-space-size={mem}"), "main.js".into()]),
            rlimit: None,
        },
        Language::Cpp => return Err(Error::UnsupportedLanguage("cpp".into())),
    })
}

fn normalize_output(s: &str) -> String {
    s.lines().map(str::trim_end).collect::<Vec<_>>().join("\n").trim_end().to_string()
}

fn outcome(task_id: &str, status: ExecStatus, failure_type: Option<String>, stderr: &str, ms: u64) -> ExecutionOutcome {
    ExecutionOutcome {
        task_id: task_id.into(),
        status,
        failure_type,
        stderr_digest: digest(stderr),
        duration_ms: ms,
        stderr_excerpt: excerpt(stderr),
    }
}

fn failed_run(task_id: &str, language: Language, r: &ProcessResult, total_ms: u64) -> ExecutionOutcome {
    let exit = ExitState { phase: Phase::Run, code: r.code, timed_out: r.timed_out };
    let label = classify_failure(language, &r.stderr, &exit);
    let status = if r.timed_out {
        ExecStatus::Timeout
    } else if label == TEST_FAILURE {
        ExecStatus::TestFailure
    } else {
        ExecStatus::RuntimeError
    };
    outcome(task_id, status, Some(label), &r.stderr, total_ms)
}

/// Compiles and runs `code` against `suite` in a throwaway directory.
/// Environment problems (missing toolchain, unwritable temp dir) are errors;
/// everything the candidate does is an outcome.
pub fn run_execution_test(
    task_id: &str,
    code: &str,
    suite: &TestSuite,
    language: Language,
    limits: &Limits,
    toolchain: &Toolchain,
) -> Result<ExecutionOutcome> {
    if !suite.present {
        return Err(Error::Config(format!("{task_id}: no test suite to run")));
    }
    let tools = toolchain.require(language)?;
    let unit = build_unit(code, suite, language, &tools, limits)?;
    let dir =
        tempfile::Builder::new().prefix("catcode-").tempdir().map_err(|e| Error::Environment(format!("cannot create sandbox: {e}")))?;
    let path = dir.path().join(&unit.file);
    std::fs::write(&path, &unit.contents).map_err(|e| Error::io(&path, e))?;

    let mut elapsed = 0u64;
    if let Some((tool, args)) = &unit.compile {
        let r = process::run(tool, args, dir.path(), None, Duration::from_secs(limits.compile_timeout_secs), None)?;
        elapsed += r.duration.as_millis() as u64;
        if !r.success() {
            let exit = ExitState { phase: Phase::Compile, code: r.code, timed_out: r.timed_out };
            let status = if r.timed_out { ExecStatus::Timeout } else { ExecStatus::CompileError };
            let diag = if r.stderr.trim().is_empty() { &r.stdout } else { &r.stderr };
            return Ok(outcome(task_id, status, Some(classify_failure(language, diag, &exit)), diag, elapsed));
        }
    }

    let (tool, args) = &unit.run;
    let run_timeout = Duration::from_secs(limits.run_timeout_secs);
    if suite.is_stdio() {
        for case in &suite.io_cases {
            let r = process::run(tool, args, dir.path(), Some(&case.input), run_timeout, unit.rlimit)?;
            elapsed += r.duration.as_millis() as u64;
            if !r.success() {
                return Ok(failed_run(task_id, language, &r, elapsed));
            }
            if normalize_output(&r.stdout) != normalize_output(&case.output) {
                let detail = format!("expected {:?}, got {:?}", case.output, r.stdout);
                return Ok(outcome(task_id, ExecStatus::TestFailure, Some(TEST_FAILURE.into()), &detail, elapsed));
            }
        }
        return Ok(outcome(task_id, ExecStatus::Pass, None, "", elapsed));
    }

    let r = process::run(tool, args, dir.path(), None, run_timeout, unit.rlimit)?;
    elapsed += r.duration.as_millis() as u64;
    // console.assert reports on stderr and still exits 0.
    if r.success() && !is_assertion_failure(language, &r.stderr) {
        return Ok(outcome(task_id, ExecStatus::Pass, None, &r.stderr, elapsed));
    }
    Ok(failed_run(task_id, language, &r, elapsed))
}

/// One unit of work for [`execute_batch`].
#[derive(Debug, Clone)]
pub struct ExecRequest {
    pub task_id: String,
    /// `None` when no code could be extracted from the response.
    pub code: Option<String>,
    pub suite: TestSuite,
    pub language: Language,
}

/// Runs requests on at most `parallelism` worker threads, which bounds the
/// number of live compiler/interpreter processes. Output order follows input.
pub fn execute_batch(
    requests: &[ExecRequest],
    limits: &Limits,
    toolchain: &Toolchain,
    parallelism: usize,
) -> Result<Vec<ExecutionOutcome>> {
    let next = AtomicUsize::new(0);
    let slots: Vec<Mutex<Option<Result<ExecutionOutcome>>>> = requests.iter().map(|_| Mutex::new(None)).collect();
    std::thread::scope(|s| {
        for _ in 0..parallelism.max(1).min(requests.len().max(1)) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                let Some(req) = requests.get(i) else { break };
                let result = match &req.code {
                    None => Ok(ExecutionOutcome::extraction_failure(&req.task_id)),
                    Some(code) => run_execution_test(&req.task_id, code, &req.suite, req.language, limits, toolchain),
                };
                *slots[i].lock().expect("slot lock") = Some(result);
            });
        }
    });
    slots.into_iter().map(|m| m.into_inner().expect("slot lock").expect("every slot filled")).collect()
}

/// Per-object compile budget while filtering a corpus.
pub const FILTER_COMPILE_TIMEOUT_SECS: u64 = 30;

/// Standalone compile check used when filtering a corpus.
pub struct ToolchainCompiler {
    pub toolchain: Toolchain,
    pub limits: Limits,
}

impl ToolchainCompiler {
    pub fn new(toolchain: Toolchain, limits: Limits) -> Self {
        ToolchainCompiler { toolchain, limits }
    }

    /// Compiler for corpus filtering: the harness limits, with the compile
    /// timeout capped at [`FILTER_COMPILE_TIMEOUT_SECS`].
    pub fn for_filtering(toolchain: Toolchain, limits: Limits) -> Self {
        let compile_timeout_secs = limits.compile_timeout_secs.min(FILTER_COMPILE_TIMEOUT_SECS);
        ToolchainCompiler { toolchain, limits: Limits { compile_timeout_secs, ..limits } }
    }
}

impl CompileCheck for ToolchainCompiler {
    fn check(&self, obj: &CodeObject) -> Result<std::result::Result<(), String>> {
        let tools = self.toolchain.require(obj.language)?;
        let unit = build_unit(&obj.source, &TestSuite::absent(), obj.language, &tools, &self.limits)?;
        let Some((tool, args)) = &unit.compile else { return Ok(Ok(())) };
        let dir = tempfile::tempdir().map_err(|e| Error::Environment(format!("cannot create sandbox: {e}")))?;
        let path = dir.path().join(&unit.file);
        std::fs::write(&path, &unit.contents).map_err(|e| Error::io(&path, e))?;
        let r = process::run(tool, args, dir.path(), None, Duration::from_secs(self.limits.compile_timeout_secs), None)?;
        if r.success() {
            return Ok(Ok(()));
        }
        let diag = if r.stderr.trim().is_empty() { r.stdout } else { r.stderr };
        let exit = ExitState { phase: Phase::Compile, code: r.code, timed_out: r.timed_out };
        Ok(Err(format!("{}: {}", classify_failure(obj.language, &diag, &exit), diag.lines().next().unwrap_or("").trim())))
    }
}

/// Stand-in compile check that only requires a clean parse. Used when no
/// compiler is installed and the caller explicitly accepts the weaker check.
pub struct SyntaxOnly;

impl CompileCheck for SyntaxOnly {
    fn check(&self, obj: &CodeObject) -> Result<std::result::Result<(), String>> {
        Ok(crate::syntax::parse(&obj.source, obj.language).map(|_| ()).map_err(|e| e.to_string()))
    }
}

/// Runs an object against its own suite.
pub struct HarnessRunner {
    pub toolchain: Toolchain,
    pub limits: Limits,
}

impl SuiteRunner for HarnessRunner {
    fn passes(&self, obj: &CodeObject) -> Option<bool> {
        run_execution_test(&obj.task_id, &obj.source, &obj.tests, obj.language, &self.limits, &self.toolchain).ok().map(|o| o.passed())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn java_unit_hoists_imports_and_keeps_one_public_class() {
        let code = "import java.util.*;\npublic class Solution {\n    public int f() { return 1; }\n}\n";
        let test = "import java.util.*;\nimport java.io.*;\npublic class Main {\n    public static void main(String[] a) {}\n}\n";
        let (file, contents, main) = java_unit(&[code, test]);
        assert_eq!(file, "Main.java");
        assert_eq!(main, "Main");
        assert_eq!(contents.matches("import java.util.*;").count(), 1);
        assert!(contents.starts_with("import java.util.*;\nimport java.io.*;"));
        assert!(contents.contains("\nclass Solution"));
        assert!(contents.contains("public class Main"));
    }

    #[test]
    fn contest_program_keeps_its_class_name() {
        let code = "import java.util.*;\npublic class Solver {\n    public static void main(String[] args) {}\n}\n";
        let (file, _, main) = java_unit(&[code, ""]);
        assert_eq!((file.as_str(), main.as_str()), ("Solver.java", "Solver"));
    }

    #[test]
    fn output_comparison_ignores_trailing_whitespace() {
        assert_eq!(normalize_output("3 \n4\n\n"), normalize_output("3\n4"));
    }
}
