//! Failure taxonomy: compiler diagnostics, exception class names, "Test
//! Failure", and "Unknown" when nothing recognizable was printed.

use std::sync::LazyLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::lang::Language;

pub const TEST_FAILURE: &str = "Test Failure";
pub const UNKNOWN: &str = "Unknown";
pub const TIMEOUT: &str = "Timeout";
pub const EXTRACTION_FAILURE: &str = "ExtractionFailure";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    Compile,
    Run,
}

/// How a non-passing process ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExitState {
    pub phase: Phase,
    pub code: Option<i32>,
    pub timed_out: bool,
}

static JAVAC_ERROR: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"(?m)^\S*\.java:\d+: error: ([^\n]+)").unwrap());
static JAVA_EXCEPTION: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"(?m)^(?:Exception in thread \S+ |Caused by: )?((?:[a-z_$][\w$]*\.)*([A-Z][\w$]*(?:Exception|Error)))(?::|\s*$)").unwrap()
});
static PY_EXCEPTION: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?m)^(?:[\w.]+\.)?([A-Z]\w*(?:Error|Exception|Exit|Interrupt|Warning))\b").unwrap());
static JS_EXCEPTION: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"(?m)^(?:Uncaught )?([A-Z]\w*Error)(?:\s*\[\w+\])?:").unwrap());

/// Signals that the unit ran and an assertion in the suite rejected it.
pub fn is_assertion_failure(language: Language, stderr: &str) -> bool {
    match language {
        Language::Java => {
            stderr.contains("java.lang.AssertionError") || stderr.contains("did not pass") || stderr.contains("AssertionFailedError")
        }
        Language::Python => PY_EXCEPTION.captures_iter(stderr).last().is_some_and(|c| &c[1] == "AssertionError"),
        Language::Javascript => {
            stderr.contains("Assertion failed") || JS_EXCEPTION.captures(stderr).is_some_and(|c| &c[1] == "AssertionError")
        }
        Language::Cpp => false,
    }
}

/// `cannot find symbol` → `CannotFindSymbol`; the text after the first `:`
/// (the specific type or symbol) is dropped.
fn camel(diagnostic: &str) -> String {
    let head = diagnostic.split(':').next().unwrap_or(diagnostic);
    let out: String = head
        .split(|c: char| !c.is_ascii_alphanumeric())
        .filter(|w| !w.is_empty())
        .map(|w| {
            let mut cs = w.chars();
            let first = cs.next().map(|c| c.to_ascii_uppercase()).into_iter();
            first.chain(cs).collect::<String>()
        })
        .collect();
    if out.is_empty() {
        UNKNOWN.into()
    } else {
        out
    }
}

pub fn classify_failure(language: Language, stderr: &str, exit: &ExitState) -> String {
    if exit.timed_out {
        return TIMEOUT.into();
    }
    if exit.phase == Phase::Run && is_assertion_failure(language, stderr) {
        return TEST_FAILURE.into();
    }
    let label = match language {
        Language::Java => {
            JAVAC_ERROR.captures(stderr).map(|c| camel(&c[1])).or_else(|| JAVA_EXCEPTION.captures(stderr).map(|c| c[2].to_string()))
        }
        // The last exception line of a traceback names the raised class.
        Language::Python => PY_EXCEPTION.captures_iter(stderr).last().map(|c| c[1].to_string()),
        Language::Javascript => JS_EXCEPTION.captures(stderr).map(|c| c[1].to_string()),
        Language::Cpp => None,
    };
    label.unwrap_or_else(|| UNKNOWN.into())
}
