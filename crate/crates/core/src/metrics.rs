//! Scoring: pairing precision, pass@1, failure tables and reports.
//!
//! Every ratio travels with its numerator and denominator. An empty
//! denominator gives an absent value, never zero.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::corpus::DatasetName;
use crate::error::{Error, Result};
use crate::harness::{ExecStatus, ExecutionOutcome, Verdict, VerdictLabel};
use crate::pairgen::{Distance, EqLabel, EvalPair};
use crate::taskgen::identification_task_id;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionCounts {
    pub tp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
    pub tn: u64,
    pub fp: u64,
}

impl ConfusionCounts {
    /// An unparseable verdict is a wrong answer on either side.
    pub fn record(&mut self, truth: EqLabel, said: VerdictLabel) {
        match (truth, said) {
            (EqLabel::Equivalent, VerdictLabel::Equivalent) => self.tp += 1,
            (EqLabel::Equivalent, _) => self.fn_ += 1,
            (EqLabel::Nonequivalent, VerdictLabel::Nonequivalent) => self.tn += 1,
            (EqLabel::Nonequivalent, _) => self.fp += 1,
        }
    }

    pub fn add(&mut self, other: &ConfusionCounts) {
        self.tp += other.tp;
        self.fn_ += other.fn_;
        self.tn += other.tn;
        self.fp += other.fp;
    }

    pub fn eq_total(&self) -> u64 {
        self.tp + self.fn_
    }

    pub fn neq_total(&self) -> u64 {
        self.tn + self.fp
    }

    pub fn correct(&self) -> u64 {
        self.tp + self.tn
    }

    pub fn total(&self) -> u64 {
        self.eq_total() + self.neq_total()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ratio {
    pub num: u64,
    pub den: u64,
    pub value: Option<f64>,
}

impl Ratio {
    pub fn new(num: u64, den: u64) -> Self {
        Ratio { num, den, value: (den > 0).then(|| num as f64 / den as f64) }
    }

    /// As a percentage, the way tables usually show it.
    pub fn percent(&self) -> Option<f64> {
        self.value.map(|v| v * 100.0)
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value {
            Some(v) => write!(f, "{:.4} ({}/{})", v, self.num, self.den),
            None => write!(f, "n/a (0/0)"),
        }
    }
}

pub fn precision_eq(c: &ConfusionCounts) -> Ratio {
    Ratio::new(c.tp, c.eq_total())
}

pub fn precision_neq(c: &ConfusionCounts) -> Ratio {
    Ratio::new(c.tn, c.neq_total())
}

/// Extraction failures stay in the denominator as non-passes.
pub fn pass_at_1(outcomes: &[ExecutionOutcome]) -> Ratio {
    let passed = outcomes.iter().filter(|o| o.status == ExecStatus::Pass).count();
    Ratio::new(passed as u64, outcomes.len() as u64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SliceScore {
    pub distance: Option<Distance>,
    pub dataset: Option<DatasetName>,
    pub combination: Option<String>,
    pub counts: ConfusionCounts,
    pub unparseable: u64,
    pub precision_eq: Ratio,
    pub precision_neq: Ratio,
}

impl SliceScore {
    fn new(distance: Option<Distance>, dataset: Option<DatasetName>, combination: Option<String>) -> Self {
        SliceScore {
            distance,
            dataset,
            combination,
            counts: ConfusionCounts::default(),
            unparseable: 0,
            precision_eq: Ratio::new(0, 0),
            precision_neq: Ratio::new(0, 0),
        }
    }

    fn record(&mut self, truth: EqLabel, said: VerdictLabel) {
        self.counts.record(truth, said);
        if said == VerdictLabel::Unparseable {
            self.unparseable += 1;
        }
        self.precision_eq = precision_eq(&self.counts);
        self.precision_neq = precision_neq(&self.counts);
    }
}

/// A named ratio such as `1-eq` or `global-neq`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedRatio {
    pub name: String,
    pub ratio: Ratio,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MorphismRow {
    pub combination: String,
    pub label: EqLabel,
    pub precision: Ratio,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairingScore {
    pub overall: SliceScore,
    /// Distance-by-label slices; a slice with no pairs is left out.
    pub by_distance_label: Vec<NamedRatio>,
    /// Distance × dataset × combination.
    pub slices: Vec<SliceScore>,
    pub by_morphism: Vec<MorphismRow>,
    pub unparseable: u64,
}

/// Joins verdicts to pairs by identification task id. Both sides must
/// correspond one-to-one.
pub fn align<'a>(pairs: &'a [EvalPair], verdicts: &'a [Verdict]) -> Result<Vec<(&'a EvalPair, &'a Verdict)>> {
    let mut by_task: HashMap<&str, &Verdict> = HashMap::with_capacity(verdicts.len());
    for v in verdicts {
        if by_task.insert(v.task_id.as_str(), v).is_some() {
            return Err(Error::Alignment(format!("duplicate verdict for {}", v.task_id)));
        }
    }
    let mut joined = Vec::with_capacity(pairs.len());
    for p in pairs {
        let id = identification_task_id(&p.id);
        match by_task.remove(id.as_str()) {
            Some(v) => joined.push((p, v)),
            None => return Err(Error::Alignment(format!("no verdict for {id}"))),
        }
    }
    if let Some(extra) = by_task.keys().next() {
        return Err(Error::Alignment(format!("verdict {extra} matches no pair ({} unmatched)", by_task.len())));
    }
    Ok(joined)
}

pub fn score_verdicts(pairs: &[EvalPair], verdicts: &[Verdict]) -> Result<PairingScore> {
    let joined = align(pairs, verdicts)?;
    let mut overall = SliceScore::new(None, None, None);
    let mut slices: BTreeMap<(String, String, String), SliceScore> = BTreeMap::new();
    let mut named: BTreeMap<String, ConfusionCounts> = BTreeMap::new();
    for (p, v) in &joined {
        let combination = p.combination();
        overall.record(p.label, v.parsed);
        slices
            .entry((p.distance.to_string(), p.dataset.tag().to_string(), combination.clone()))
            .or_insert_with(|| SliceScore::new(Some(p.distance), Some(p.dataset), Some(combination)))
            .record(p.label, v.parsed);
        named.entry(p.slice()).or_default().record(p.label, v.parsed);
    }
    let by_distance_label = named
        .into_iter()
        .map(|(name, c)| {
            let ratio = if name.ends_with("-neq") { precision_neq(&c) } else { precision_eq(&c) };
            NamedRatio { name, ratio }
        })
        .collect();
    Ok(PairingScore {
        unparseable: overall.unparseable,
        by_morphism: breakdown_by_morphism(&joined),
        overall,
        by_distance_label,
        slices: slices.into_values().collect(),
    })
}

/// Precision per morphism combination, worst first.
pub fn breakdown_by_morphism(joined: &[(&EvalPair, &Verdict)]) -> Vec<MorphismRow> {
    let mut table: BTreeMap<(String, EqLabel), ConfusionCounts> = BTreeMap::new();
    for (p, v) in joined {
        table.entry((p.combination(), p.label)).or_default().record(p.label, v.parsed);
    }
    let mut rows: Vec<MorphismRow> = table
        .into_iter()
        .map(|((combination, label), c)| MorphismRow { combination, label, precision: Ratio::new(c.correct(), c.total()) })
        .collect();
    rows.sort_by(|a, b| {
        let (x, y) = (a.precision.value.unwrap_or(0.0), b.precision.value.unwrap_or(0.0));
        x.total_cmp(&y).then_with(|| a.combination.cmp(&b.combination))
    });
    rows
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailureRow {
    pub failure_type: String,
    pub count: u64,
}

/// Non-passing outcomes per failure type, most frequent first.
pub fn failure_frequencies(outcomes: &[ExecutionOutcome]) -> Vec<FailureRow> {
    let mut counts: BTreeMap<String, u64> = BTreeMap::new();
    for o in outcomes.iter().filter(|o| o.status != ExecStatus::Pass) {
        let kind = o.failure_type.clone().unwrap_or_else(|| crate::harness::UNKNOWN.to_string());
        *counts.entry(kind).or_default() += 1;
    }
    let mut rows: Vec<FailureRow> = counts.into_iter().map(|(failure_type, count)| FailureRow { failure_type, count }).collect();
    rows.sort_by(|a, b| b.count.cmp(&a.count).then_with(|| a.failure_type.cmp(&b.failure_type)));
    rows
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExecutionScore {
    /// e.g. `humaneval-x:java->python`
    pub group: String,
    pub pass_at_1: Ratio,
    pub extraction_failures: u64,
    pub failures: Vec<FailureRow>,
}

pub fn score_outcomes(group: &str, outcomes: &[ExecutionOutcome]) -> ExecutionScore {
    ExecutionScore {
        group: group.to_string(),
        pass_at_1: pass_at_1(outcomes),
        extraction_failures: outcomes.iter().filter(|o| o.status == ExecStatus::ExtractionFailure).count() as u64,
        failures: failure_frequencies(outcomes),
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunMetadata {
    pub seed: Option<u64>,
    pub config_digest: Option<String>,
    pub model_digest: Option<String>,
    #[serde(default)]
    pub template_ids: Vec<String>,
    #[serde(default)]
    pub toolchain: BTreeMap<String, String>,
    pub tool_version: String,
}

impl RunMetadata {
    pub fn new() -> Self {
        RunMetadata { tool_version: env!("CARGO_PKG_VERSION").to_string(), ..Default::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub run_id: String,
    pub model_id: Option<String>,
    pub template_id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairing: Option<PairingScore>,
    #[serde(default)]
    pub execution: Vec<ExecutionScore>,
    pub unparseable: u64,
    pub metadata: RunMetadata,
}

impl MetricsReport {
    pub fn new(run_id: impl Into<String>, metadata: RunMetadata) -> Self {
        MetricsReport {
            run_id: run_id.into(),
            model_id: None,
            template_id: None,
            pairing: None,
            execution: Vec::new(),
            unparseable: 0,
            metadata,
        }
    }

    pub fn with_pairing(mut self, score: PairingScore) -> Self {
        self.unparseable = score.unparseable;
        self.pairing = Some(score);
        self
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// One row per reported number: section, slice, metric, numerator,
    /// denominator, value (blank when absent).
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let csv_err = |e: csv::Error| Error::Config(format!("csv: {e}"));
        w.write_record(["run_id", "section", "slice", "metric", "num", "den", "value"]).map_err(csv_err)?;
        let mut row = |section: &str, slice: &str, metric: &str, r: &Ratio| {
            let value = r.value.map(|v| format!("{v:.6}")).unwrap_or_default();
            w.write_record([&self.run_id, section, slice, metric, &r.num.to_string(), &r.den.to_string(), &value])
        };
        if let Some(p) = &self.pairing {
            row("pairing", "overall", "precision_eq", &p.overall.precision_eq).map_err(csv_err)?;
            row("pairing", "overall", "precision_neq", &p.overall.precision_neq).map_err(csv_err)?;
            for n in &p.by_distance_label {
                row("pairing", &n.name, "precision", &n.ratio).map_err(csv_err)?;
            }
            for s in &p.slices {
                let name = format!(
                    "{}/{}/{}",
                    s.distance.map(|d| d.to_string()).unwrap_or_default(),
                    s.dataset.map(|d| d.tag()).unwrap_or_default(),
                    s.combination.as_deref().unwrap_or_default()
                );
                if s.counts.eq_total() > 0 {
                    row("slice", &name, "precision_eq", &s.precision_eq).map_err(csv_err)?;
                }
                if s.counts.neq_total() > 0 {
                    row("slice", &name, "precision_neq", &s.precision_neq).map_err(csv_err)?;
                }
            }
            for m in &p.by_morphism {
                row("morphism", &format!("{}/{}", m.combination, m.label.tag()), "precision", &m.precision).map_err(csv_err)?;
            }
            row("pairing", "overall", "unparseable", &Ratio::new(p.unparseable, p.overall.counts.total())).map_err(csv_err)?;
        }
        for e in &self.execution {
            row("execution", &e.group, "pass@1", &e.pass_at_1).map_err(csv_err)?;
            let failed = e.pass_at_1.den - e.pass_at_1.num;
            for f in &e.failures {
                row("failure", &e.group, &f.failure_type, &Ratio::new(f.count, failed)).map_err(csv_err)?;
            }
        }
        let bytes = w.into_inner().map_err(|e| Error::Config(format!("csv: {e}")))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::corpus::{CodeObject, TestSuite};
    use crate::lang::Language;
    use crate::morphism::MorphismKind;

    fn obj(id: &str) -> CodeObject {
        CodeObject {
            task_id: id.into(),
            dataset: DatasetName::HumanEvalX,
            language: Language::Java,
            source: String::new(),
            entry_point: String::new(),
            declaration: String::new(),
            tests: TestSuite::absent(),
            problem_id: id.into(),
            verdict: Default::default(),
            description: String::new(),
        }
    }

    fn pair(i: usize, label: EqLabel, distance: Distance, kinds: Vec<MorphismKind>) -> EvalPair {
        EvalPair {
            id: format!("p{i}"),
            dataset: DatasetName::HumanEvalX,
            left: obj("a"),
            right: obj("b"),
            label,
            distance,
            provenance: String::new(),
            kinds,
            tests_distinguish: None,
        }
    }

    fn verdict(i: usize, parsed: VerdictLabel) -> Verdict {
        Verdict { task_id: identification_task_id(&format!("p{i}")), parsed, evidence: String::new() }
    }

    fn outcome(i: usize, status: ExecStatus, failure: Option<&str>) -> ExecutionOutcome {
        ExecutionOutcome {
            task_id: format!("t{i}"),
            status,
            failure_type: failure.map(String::from),
            stderr_digest: String::new(),
            duration_ms: 0,
            stderr_excerpt: String::new(),
        }
    }

    #[test]
    fn precision_arithmetic() {
        let c = ConfusionCounts { tp: 3, fn_: 1, tn: 0, fp: 10 };
        assert_eq!(precision_eq(&c).value, Some(0.75));
        assert_eq!(precision_neq(&c).value, Some(0.0));
        let empty = ConfusionCounts::default();
        assert_eq!(precision_eq(&empty).value, None);
        assert_eq!(pass_at_1(&[]).value, None);
    }

    #[test]
    fn pass_at_1_counts_extraction_failures() {
        let o = vec![outcome(0, ExecStatus::Pass, None), outcome(1, ExecStatus::ExtractionFailure, Some("Extraction Failure"))];
        assert_eq!(pass_at_1(&o), Ratio::new(1, 2));
        let rows = failure_frequencies(&o);
        assert_eq!(rows, vec![FailureRow { failure_type: "Extraction Failure".into(), count: 1 }]);
    }

    #[test]
    fn failure_table_is_sorted_descending() {
        let o = vec![
            outcome(0, ExecStatus::CompileError, Some("CannotFindSymbol")),
            outcome(1, ExecStatus::TestFailure, Some("Test Failure")),
            outcome(2, ExecStatus::TestFailure, Some("Test Failure")),
            outcome(3, ExecStatus::Pass, None),
        ];
        let rows = failure_frequencies(&o);
        assert_eq!(rows[0], FailureRow { failure_type: "Test Failure".into(), count: 2 });
        assert_eq!(rows[1].failure_type, "CannotFindSymbol");
    }

    #[test]
    fn combination_rows_and_unparseable() {
        use MorphismKind::*;
        let pairs = vec![
            pair(0, EqLabel::Equivalent, Distance::Two, vec![BooleanExchange, VariableRenaming]),
            pair(1, EqLabel::Equivalent, Distance::Two, vec![VariableRenaming, BooleanExchange]),
            pair(2, EqLabel::Nonequivalent, Distance::One, vec![ModifyCondition]),
            pair(3, EqLabel::Equivalent, Distance::One, vec![LoopExchange]),
        ];
        let verdicts = vec![
            verdict(0, VerdictLabel::Equivalent),
            verdict(1, VerdictLabel::Equivalent),
            verdict(2, VerdictLabel::Unparseable),
            verdict(3, VerdictLabel::Nonequivalent),
        ];
        let s = score_verdicts(&pairs, &verdicts).unwrap();
        assert_eq!(s.unparseable, 1);
        assert_eq!(s.overall.counts, ConfusionCounts { tp: 2, fn_: 1, tn: 0, fp: 1 });
        let be_vr = s.by_morphism.iter().find(|r| r.combination == "BE-VR").unwrap();
        assert_eq!(be_vr.precision.percent(), Some(100.0));
        assert_eq!(s.by_morphism[0].precision.value, Some(0.0));
        let names: Vec<_> = s.by_distance_label.iter().map(|n| n.name.as_str()).collect();
        assert_eq!(names, ["1-eq", "1-neq", "2-eq"]);
    }

    #[test]
    fn alignment_is_strict() {
        let pairs = vec![pair(0, EqLabel::Equivalent, Distance::One, vec![])];
        assert!(matches!(score_verdicts(&pairs, &[]), Err(Error::Alignment(_))));
        let extra = vec![verdict(0, VerdictLabel::Equivalent), verdict(1, VerdictLabel::Equivalent)];
        assert!(matches!(score_verdicts(&pairs, &extra), Err(Error::Alignment(_))));
        let dup = vec![verdict(0, VerdictLabel::Equivalent), verdict(0, VerdictLabel::Equivalent)];
        assert!(matches!(score_verdicts(&pairs, &dup), Err(Error::Alignment(_))));
    }

    #[test]
    fn report_round_trips_and_flattens() {
        let pairs = vec![pair(0, EqLabel::Equivalent, Distance::One, vec![MorphismKind::LoopExchange])];
        let score = score_verdicts(&pairs, &[verdict(0, VerdictLabel::Equivalent)]).unwrap();
        let mut r = MetricsReport::new("run", RunMetadata::new()).with_pairing(score);
        r.execution.push(score_outcomes("humaneval-x:java->java", &[outcome(0, ExecStatus::Pass, None)]));
        let back = MetricsReport::from_json(&r.to_json().unwrap()).unwrap();
        assert_eq!(back, r);
        let csv = r.to_csv().unwrap();
        assert!(csv.contains("run,pairing,overall,precision_eq,1,1,1.000000"));
        assert!(csv.contains("run,execution,humaneval-x:java->java,pass@1,1,1,1.000000"));
        assert!(csv.contains("run,pairing,overall,precision_neq,0,0,\n"));
    }

    fn labels() -> impl Strategy<Value = (EqLabel, VerdictLabel, u8, u8)> {
        (
            prop_oneof![Just(EqLabel::Equivalent), Just(EqLabel::Nonequivalent)],
            prop_oneof![Just(VerdictLabel::Equivalent), Just(VerdictLabel::Nonequivalent), Just(VerdictLabel::Unparseable)],
            0u8..3,
            0u8..4,
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(2000))]

        #[test]
        fn precision_matches_brute_force(records in prop::collection::vec(labels(), 0..60)) {
            use MorphismKind::*;
            let combos = [vec![LoopExchange], vec![BooleanExchange, VariableRenaming], vec![ModifyCondition], vec![RemoveElse]];
            let pairs: Vec<_> = records.iter().enumerate().map(|(i, (l, _, d, k))| {
                let distance = [Distance::One, Distance::Two, Distance::Global][*d as usize];
                pair(i, *l, distance, combos[*k as usize].clone())
            }).collect();
            let verdicts: Vec<_> = records.iter().enumerate().map(|(i, (_, v, _, _))| verdict(i, *v)).collect();
            let s = score_verdicts(&pairs, &verdicts).unwrap();

            let eq: Vec<_> = records.iter().filter(|r| r.0 == EqLabel::Equivalent).collect();
            let neq: Vec<_> = records.iter().filter(|r| r.0 == EqLabel::Nonequivalent).collect();
            let tp = eq.iter().filter(|r| r.1 == VerdictLabel::Equivalent).count() as u64;
            let tn = neq.iter().filter(|r| r.1 == VerdictLabel::Nonequivalent).count() as u64;
            prop_assert_eq!(s.overall.precision_eq, Ratio::new(tp, eq.len() as u64));
            prop_assert_eq!(s.overall.precision_neq, Ratio::new(tn, neq.len() as u64));
            prop_assert_eq!(s.unparseable, records.iter().filter(|r| r.1 == VerdictLabel::Unparseable).count() as u64);

            // Slices partition the records.
            let mut sum = ConfusionCounts::default();
            for slice in &s.slices { sum.add(&slice.counts); }
            prop_assert_eq!(sum, s.overall.counts);
            let weighted: u64 = s.slices.iter().map(|x| x.precision_eq.num).sum();
            prop_assert_eq!(weighted, s.overall.precision_eq.num);
        }

        #[test]
        fn pass_at_1_matches_brute_force(statuses in prop::collection::vec(0u8..6, 0..80)) {
            let all = [ExecStatus::Pass, ExecStatus::TestFailure, ExecStatus::CompileError,
                       ExecStatus::RuntimeError, ExecStatus::Timeout, ExecStatus::ExtractionFailure];
            let outcomes: Vec<_> = statuses.iter().enumerate().map(|(i, s)| outcome(i, all[*s as usize], Some("X"))).collect();
            let passes = statuses.iter().filter(|s| **s == 0).count() as u64;
            prop_assert_eq!(pass_at_1(&outcomes), Ratio::new(passes, statuses.len() as u64));
            let failures: u64 = failure_frequencies(&outcomes).iter().map(|r| r.count).sum();
            prop_assert_eq!(failures, statuses.len() as u64 - passes);
        }
    }
}
