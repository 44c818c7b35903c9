//! Pulling a True/False judgment or a code block out of free-form model text.

use std::sync::LazyLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::lang::Language;
use crate::syntax;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictLabel {
    Equivalent,
    Nonequivalent,
    Unparseable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub task_id: String,
    pub parsed: VerdictLabel,
    /// The deciding token and up to 40 characters on either side.
    pub evidence: String,
}

static FENCE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"(?s)```[ \t]*([\w+#.-]*)[^\n]*\n(.*?)(?:```|\z)").unwrap());
static INLINE_CODE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"`([^`\n]*)`").unwrap());
static BARE_BOOL: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"(?i)^\s*(?:true|false)\s*\.?\s*$").unwrap());
/// Echoes of the question ("True or False", "True/False") are not answers.
static CHOICE_ECHO: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"(?i)\b(?:true|false)\b\s*(?:or|/|\|)\s*\b(?:true|false)\b").unwrap());
/// Booleans talked about as program values: "returns true", "false otherwise".
static VALUE_USE: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(
        r"(?ix)
        \b(?:return|returns|returning|returned|evaluates?\ to|set\ to|equals?|yields?)\s+(?:true|false)\b
        | (?:==|!=|=)\s*(?:true|false)\b
        | \b(?:true|false)\s+(?:otherwise|if|when|whenever|for|on)\b",
    )
    .unwrap()
});
static BOOL_TOKEN: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"(?i)\b(true|false)\b").unwrap());
static NEGATION: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(
        r"(?ix)
        \b(?:not|n't)\s+(?:functionally\s+|semantically\s+|behaviou?rally\s+|exactly\s+)?(?:equivalent|the\ same|identical)\b
        | \bnon-?equivalent\b
        | \binequivalent\b",
    )
    .unwrap()
});
static LEADING_YES_NO: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"(?i)^[\s*_]*(?:answer\s*:\s*)?[*_]*(yes|no)\b").unwrap());
static AFFIRMATIVE: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"(?i)\b(?:are|is)\s+(?:functionally\s+|semantically\s+|behaviou?rally\s+)?(?:equivalent|identical|the\ same)\b").unwrap()
});
static HEDGE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?i)\b(?:whether|if|cannot|can't|unclear|not\ sure|unsure|possible|might|may)\b").unwrap());

/// Replaces matches with spaces so byte offsets stay aligned with the input.
fn blank(text: &str, re: &Regex) -> String {
    re.replace_all(text, |c: &regex::Captures<'_>| " ".repeat(c[0].len())).into_owned()
}

/// Blanks inline code except a bare boolean, which is kept as an answer.
fn blank_inline_code(text: &str) -> String {
    INLINE_CODE
        .replace_all(
            text,
            |c: &regex::Captures<'_>| {
                if BARE_BOOL.is_match(&c[1]) {
                    format!(" {} ", &c[1])
                } else {
                    " ".repeat(c[0].len())
                }
            },
        )
        .into_owned()
}

fn window(text: &str, start: usize, end: usize) -> String {
    let mut lo = start.saturating_sub(40);
    while !text.is_char_boundary(lo) {
        lo -= 1;
    }
    let mut hi = (end + 40).min(text.len());
    while !text.is_char_boundary(hi) {
        hi += 1;
    }
    text[lo..hi].split_whitespace().collect::<Vec<_>>().join(" ")
}

/// The sentence around `at`, for hedge detection.
fn sentence(text: &str, at: usize) -> &str {
    let is_end = |c: char| matches!(c, '.' | '!' | '?' | '\n');
    let lo = text[..at].rfind(is_end).map_or(0, |i| i + 1);
    let hi = text[at..].find(is_end).map_or(text.len(), |i| at + i);
    &text[lo..hi]
}

/// Code, question echoes and booleans used as program values are ignored.
/// The earliest of a true/false token, a negated-equivalence phrase, or a
/// leading yes/no decides. Failing those, an unhedged "are equivalent"
/// counts as equivalent.
pub fn verdict_from_text(task_id: &str, text: &str) -> Verdict {
    let prose = blank(&blank(&blank_inline_code(&blank(text, &FENCE)), &CHOICE_ECHO), &VALUE_USE);
    let mut found: Vec<(usize, usize, VerdictLabel)> = Vec::new();
    if let Some(t) = BOOL_TOKEN.find(&prose) {
        let label = if t.as_str().eq_ignore_ascii_case("true") { VerdictLabel::Equivalent } else { VerdictLabel::Nonequivalent };
        found.push((t.start(), t.end(), label));
    }
    if let Some(n) = NEGATION.find(&prose) {
        found.push((n.start(), n.end(), VerdictLabel::Nonequivalent));
    }
    if let Some(c) = LEADING_YES_NO.captures(&prose) {
        let m = c.get(1).expect("group");
        let label = if m.as_str().eq_ignore_ascii_case("yes") { VerdictLabel::Equivalent } else { VerdictLabel::Nonequivalent };
        found.push((m.start(), m.end(), label));
    }
    let decided = found.into_iter().min_by_key(|f| f.0).or_else(|| {
        AFFIRMATIVE
            .find(&prose)
            .filter(|a| !HEDGE.is_match(sentence(&prose, a.start())))
            .map(|a| (a.start(), a.end(), VerdictLabel::Equivalent))
    });
    match decided {
        Some((start, end, parsed)) => Verdict { task_id: task_id.into(), parsed, evidence: window(text, start, end) },
        None => Verdict { task_id: task_id.into(), parsed: VerdictLabel::Unparseable, evidence: String::new() },
    }
}

/// Fenced block tagged for `language`, else the first fenced block, else the
/// longest run of lines that parses and defines a function.
pub fn code_from_text(text: &str, language: Language) -> Option<String> {
    let blocks: Vec<(String, String)> = FENCE.captures_iter(text).map(|c| (c[1].to_ascii_lowercase(), c[2].to_string())).collect();
    if let Some((_, body)) = blocks.iter().find(|(tag, _)| language.fence_aliases().contains(&tag.as_str())) {
        return Some(body.trim_end().to_string() + "\n");
    }
    if let Some((_, body)) = blocks.first() {
        return Some(body.trim_end().to_string() + "\n");
    }
    longest_function_region(text, language)
}

/// Upper bound on lines scanned for an unfenced region; the search is quadratic.
const MAX_SCAN_LINES: usize = 200;

fn longest_function_region(text: &str, language: Language) -> Option<String> {
    let lines: Vec<&str> = text.lines().take(MAX_SCAN_LINES).collect();
    let mut best: Option<String> = None;
    for start in 0..lines.len() {
        if lines[start].trim().is_empty() {
            continue;
        }
        for end in (start + 1..=lines.len()).rev() {
            let candidate = lines[start..end].join("\n");
            if best.as_ref().is_some_and(|b| b.len() >= candidate.len()) {
                break;
            }
            let Ok(parsed) = syntax::parse(&candidate, language) else { continue };
            if !syntax::function_nodes(parsed.root(), language).is_empty() {
                best = Some(candidate + "\n");
                break;
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn label(text: &str) -> VerdictLabel {
        verdict_from_text("t", text).parsed
    }

    #[test]
    fn first_token_wins() {
        assert_eq!(label("True, both compute the same result."), VerdictLabel::Equivalent);
        assert_eq!(label("These are not equivalent. False."), VerdictLabel::Nonequivalent);
        assert_eq!(label("It depends on the input."), VerdictLabel::Unparseable);
        assert_eq!(label("FALSE. Although it may look true at first glance"), VerdictLabel::Nonequivalent);
    }

    #[test]
    fn tokens_inside_code_and_question_echoes_are_ignored() {
        assert_eq!(label("Answer (True or False): False"), VerdictLabel::Nonequivalent);
        assert_eq!(label("```java\nreturn true;\n```\nSo the answer is False."), VerdictLabel::Nonequivalent);
        assert_eq!(label("`flag = false` is set in both, hence True"), VerdictLabel::Equivalent);
    }

    #[test]
    fn evidence_accompanies_parsed_verdicts() {
        let v = verdict_from_text("t", "After careful analysis the answer is True.");
        assert!(v.evidence.contains("True"));
    }

    #[test]
    fn fenced_block_with_language_tag_preferred() {
        let text = "Here:\n```\nnope\n```\n```python\ndef f(x):\n    return x\n```\n";
        assert_eq!(code_from_text(text, Language::Python).unwrap(), "def f(x):\n    return x\n");
    }

    #[test]
    fn first_fence_when_untagged() {
        let text = "```\nconst f = (x) => x;\n```";
        assert_eq!(code_from_text(text, Language::Javascript).unwrap(), "const f = (x) => x;\n");
    }

    #[test]
    fn unfenced_function_region_is_found() {
        let text = "Sure, here is the translation:\ndef add(a, b):\n    return a + b\nThis adds two numbers.";
        let code = code_from_text(text, Language::Python).unwrap();
        assert!(syntax::parses(&code, Language::Python));
        assert!(code.starts_with("def add(a, b):\n    return a + b"));
    }

    #[test]
    fn prose_only_yields_nothing() {
        assert_eq!(code_from_text("I cannot translate this code.", Language::Java), None);
    }
}
