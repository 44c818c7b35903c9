//! Hand-labeled model replies. Every case must agree with its label, and
//! unparseable replies are counted rather than dropped.

use catcode::harness::{extract_boolean_verdict, VerdictLabel};
use catcode::modelgw::{ModelResponse, ResponseStatus};
use serde::Deserialize;

#[derive(Deserialize)]
struct Case {
    id: String,
    text: String,
    label: VerdictLabel,
}

fn cases() -> Vec<Case> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/verdicts.jsonl");
    catcode::jsonl::read(path).unwrap()
}

fn response(id: &str, text: &str) -> ModelResponse {
    ModelResponse {
        task_id: id.into(),
        raw_text: text.into(),
        latency_ms: 0,
        status: ResponseStatus::Ok,
        attempt_count: 1,
        model_id: "fixture".into(),
        error: None,
    }
}

#[test]
fn fixture_has_fifty_cases_of_every_kind() {
    let cases = cases();
    assert_eq!(cases.len(), 50);
    for label in [VerdictLabel::Equivalent, VerdictLabel::Nonequivalent, VerdictLabel::Unparseable] {
        assert!(cases.iter().any(|c| c.label == label));
    }
}

#[test]
fn every_case_matches_its_label() {
    let cases = cases();
    let wrong: Vec<String> = cases
        .iter()
        .filter_map(|c| {
            let v = extract_boolean_verdict(&response(&c.id, &c.text));
            (v.parsed != c.label).then(|| format!("{}: expected {:?}, got {:?} ({:?})", c.id, c.label, v.parsed, c.text))
        })
        .collect();
    assert!(wrong.is_empty(), "{}", wrong.join("\n"));
}

#[test]
fn one_verdict_per_response_even_when_unparseable() {
    let cases = cases();
    let responses: Vec<_> = cases.iter().map(|c| response(&c.id, &c.text)).collect();
    let verdicts: Vec<_> = responses.iter().map(extract_boolean_verdict).collect();
    assert_eq!(verdicts.len(), responses.len());
    for (r, v) in responses.iter().zip(&verdicts) {
        assert_eq!(r.task_id, v.task_id);
    }
    let unparseable = verdicts.iter().filter(|v| v.parsed == VerdictLabel::Unparseable).count();
    let expected = cases.iter().filter(|c| c.label == VerdictLabel::Unparseable).count();
    assert_eq!(unparseable, expected);
}
