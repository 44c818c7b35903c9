//! Labeled pairs for the morphism-identification experiment.
//!
//! Local pairs come from morphism outputs of one object: with two sampled
//! self-morphism outputs `m1`, `m2` of `a` we get `(a, m1)`, `(a, m2)` at
//! distance one and `(m1, m2)` at distance two, all equivalent, plus `(a, b)`
//! for a nonequivalent output `b`. Global pairs come from independent
//! solutions of one Code Contest problem.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::corpus::{group_by_problem, CodeObject, DatasetName, SolutionVerdict};
use crate::error::{Error, Result};
use crate::morphism::{self, Equivalence, MorphismChain, MorphismEngine, MorphismKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EqLabel {
    Equivalent,
    Nonequivalent,
}

impl EqLabel {
    pub fn tag(self) -> &'static str {
        match self {
            EqLabel::Equivalent => "eq",
            EqLabel::Nonequivalent => "neq",
        }
    }
}

impl From<Equivalence> for EqLabel {
    fn from(e: Equivalence) -> Self {
        match e {
            Equivalence::Equivalent => EqLabel::Equivalent,
            Equivalence::Nonequivalent => EqLabel::Nonequivalent,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Distance {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "2")]
    Two,
    #[serde(rename = "global")]
    Global,
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Distance::One => "1",
            Distance::Two => "2",
            Distance::Global => "global",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalPair {
    pub id: String,
    pub dataset: DatasetName,
    pub left: CodeObject,
    pub right: CodeObject,
    pub label: EqLabel,
    pub distance: Distance,
    /// Chain descriptions for local pairs, problem id and verdicts for global ones.
    pub provenance: String,
    /// Morphism kinds separating the two sides; empty for global pairs.
    #[serde(default)]
    pub kinds: Vec<MorphismKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tests_distinguish: Option<bool>,
}

impl EvalPair {
    /// Report slice name such as `1-eq` or `global-neq`.
    pub fn slice(&self) -> String {
        format!("{}-{}", self.distance, self.label.tag())
    }

    /// Combination label of the separating kinds, e.g. `BE-VR`; `global` for
    /// contest pairs.
    pub fn combination(&self) -> String {
        match self.distance {
            Distance::Global => "global".into(),
            _ => morphism::combination_label(&self.kinds),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct PairConfig {
    /// Self-morphism outputs sampled per object (two gives the 3-pair scheme).
    pub eq_per_object: usize,
    pub neq_per_object: usize,
    /// Also emit `(m1, b)` distance-two nonequivalent pairs.
    pub neq_distance_two: bool,
    /// Upper bound on nonequivalent global pairs per problem.
    pub global_neq_cap: usize,
    /// Shuffle which side is shown first.
    pub randomize_order: bool,
}

impl Default for PairConfig {
    fn default() -> Self {
        PairConfig { eq_per_object: 2, neq_per_object: 1, neq_distance_two: false, global_neq_cap: 4, randomize_order: true }
    }
}

#[derive(Debug, Default, Clone)]
pub struct PairSet {
    pub pairs: Vec<EvalPair>,
    /// Availability log: shortfalls, skipped rewrites, dropped duplicates.
    pub notes: Vec<String>,
}

impl PairSet {
    pub fn count(&self, label: EqLabel) -> usize {
        self.pairs.iter().filter(|p| p.label == label).count()
    }
}

/// Per-object stream seed, so an object's pairs do not depend on its neighbours.
fn object_seed(seed: u64, key: &str) -> u64 {
    let h = Sha256::digest(key.as_bytes());
    seed ^ u64::from_le_bytes(h[..8].try_into().expect("8 bytes"))
}

struct Emitter<'c> {
    config: &'c PairConfig,
    rng: ChaCha8Rng,
    set: PairSet,
}

impl Emitter<'_> {
    fn push(&mut self, a: &CodeObject, b: &CodeObject, label: EqLabel, distance: Distance, kinds: Vec<MorphismKind>, provenance: String) {
        if a.source == b.source {
            self.set.notes.push(format!("{} / {}: identical sources, pair dropped", a.task_id, b.task_id));
            return;
        }
        let (left, right) = if self.config.randomize_order && self.rng.gen_bool(0.5) { (b, a) } else { (a, b) };
        self.set.pairs.push(EvalPair {
            id: format!("{}|{}", left.task_id, right.task_id),
            dataset: a.dataset,
            left: left.clone(),
            right: right.clone(),
            label,
            distance,
            provenance,
            kinds,
            tests_distinguish: None,
        });
    }
}

/// One sampled morphism output, tied to the corpus object it came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Variant {
    pub original: String,
    pub label: EqLabel,
    pub chain: MorphismChain,
    pub object: CodeObject,
}

#[derive(Debug, Default, Clone)]
pub struct VariantSet {
    pub variants: Vec<Variant>,
    pub notes: Vec<String>,
}

/// Samples `eq_per_object` self-morphism outputs and `neq_per_object`
/// nonequivalent outputs per object, each from a distinct kind.
pub fn sample_variants(corpus: &[CodeObject], engine: &MorphismEngine, config: &PairConfig, rng_seed: u64) -> Result<VariantSet> {
    let mut set = VariantSet::default();
    for a in corpus {
        let sampled = engine.sample_outputs(a, config.eq_per_object, config.neq_per_object, object_seed(rng_seed, &a.task_id))?;
        set.notes.extend(sampled.notes);
        set.variants.extend(sampled.outputs.into_iter().map(|(object, chain)| Variant {
            original: a.task_id.clone(),
            label: chain.label.into(),
            chain,
            object,
        }));
    }
    Ok(set)
}

/// Distance-one pairs `(a, m)` and `(a, b)`, distance-two pairs `(m1, m2)`
/// (and `(m1, b)` when configured). Every variant must name a corpus object.
pub fn pairs_from_variants(corpus: &[CodeObject], variants: &[Variant], config: &PairConfig, rng_seed: u64) -> Result<PairSet> {
    let mut em = Emitter { config, rng: ChaCha8Rng::seed_from_u64(rng_seed), set: PairSet::default() };
    let mut by_origin: HashMap<&str, Vec<&Variant>> = HashMap::new();
    for v in variants {
        by_origin.entry(v.original.as_str()).or_default().push(v);
    }
    for a in corpus {
        let Some(mine) = by_origin.remove(a.task_id.as_str()) else { continue };
        let (eq, neq): (Vec<&Variant>, Vec<&Variant>) = mine.into_iter().partition(|v| v.label == EqLabel::Equivalent);
        for m in &eq {
            em.push(a, &m.object, EqLabel::Equivalent, Distance::One, m.chain.kinds(), m.chain.describe());
        }
        for (i, m1) in eq.iter().enumerate() {
            for m2 in &eq[i + 1..] {
                let kinds = [m1.chain.kinds(), m2.chain.kinds()].concat();
                em.push(&m1.object, &m2.object, EqLabel::Equivalent, Distance::Two, kinds, two_step(&m1.chain, &m2.chain));
            }
        }
        for b in &neq {
            em.push(a, &b.object, EqLabel::Nonequivalent, Distance::One, b.chain.kinds(), b.chain.describe());
            if config.neq_distance_two {
                if let Some(m1) = eq.first() {
                    let kinds = [m1.chain.kinds(), b.chain.kinds()].concat();
                    em.push(&m1.object, &b.object, EqLabel::Nonequivalent, Distance::Two, kinds, two_step(&m1.chain, &b.chain));
                }
            }
        }
    }
    if let Some(orphan) = by_origin.keys().next() {
        return Err(Error::Alignment(format!("variant of `{orphan}` has no corpus object")));
    }
    Ok(em.set)
}

pub fn build_local_pairs(corpus: &[CodeObject], engine: &MorphismEngine, config: &PairConfig, rng_seed: u64) -> Result<PairSet> {
    let sampled = sample_variants(corpus, engine, config, rng_seed)?;
    let mut set = pairs_from_variants(corpus, &sampled.variants, config, rng_seed)?;
    let mut notes = sampled.notes;
    notes.append(&mut set.notes);
    set.notes = notes;
    Ok(set)
}

/// The path between two outputs of one object runs back through it.
fn two_step(from: &MorphismChain, to: &MorphismChain) -> String {
    format!("inverse({}) ; {}", from.describe(), to.describe())
}

/// Pairs from independent solutions of the same problem. Solutions are
/// comment-stripped (when they parse) and deduplicated by text first.
pub fn build_global_pairs(contest: &[CodeObject], config: &PairConfig, rng_seed: u64) -> PairSet {
    let mut em = Emitter { config, rng: ChaCha8Rng::seed_from_u64(rng_seed), set: PairSet::default() };
    for (problem, members) in group_by_problem(contest) {
        let mut by_lang: HashMap<_, (Vec<CodeObject>, Vec<CodeObject>)> = HashMap::new();
        let mut seen = BTreeSet::new();
        let mut order = Vec::new();
        for m in members {
            let clean = m.strip_comments().unwrap_or_else(|_| m.clone());
            if !seen.insert((clean.language, clean.source.clone())) {
                em.set.notes.push(format!("{}: duplicate solution text dropped", m.task_id));
                continue;
            }
            if !by_lang.contains_key(&clean.language) {
                order.push(clean.language);
            }
            let entry = by_lang.entry(clean.language).or_default();
            match clean.verdict {
                SolutionVerdict::Correct => entry.0.push(clean),
                SolutionVerdict::Incorrect => entry.1.push(clean),
                SolutionVerdict::Unknown => {}
            }
        }
        for lang in order {
            let (correct, incorrect) = &by_lang[&lang];
            let mut rng = ChaCha8Rng::seed_from_u64(object_seed(rng_seed, &format!("{problem}/{lang}")));
            if correct.len() >= 2 {
                let picked: Vec<&CodeObject> = correct.choose_multiple(&mut rng, 2).collect();
                em.push(picked[0], picked[1], EqLabel::Equivalent, Distance::Global, Vec::new(), format!("{problem}: correct+correct"));
            } else {
                em.set.notes.push(format!("{problem} ({lang}): {} correct solution(s), no equivalent pair", correct.len()));
            }
            let mut combos: Vec<(&CodeObject, &CodeObject)> = correct.iter().flat_map(|c| incorrect.iter().map(move |i| (c, i))).collect();
            combos.shuffle(&mut rng);
            for (c, i) in combos.into_iter().take(config.global_neq_cap) {
                em.push(c, i, EqLabel::Nonequivalent, Distance::Global, Vec::new(), format!("{problem}: correct+incorrect"));
            }
        }
    }
    em.set
}

/// Runs an object's own suite; `None` when the environment could not decide.
pub trait SuiteRunner: Sync {
    fn passes(&self, obj: &CodeObject) -> Option<bool>;
}

/// Sets `tests_distinguish` for pairs where both sides carry tests: true iff
/// exactly one side passes. Each distinct (source, suite) runs once.
pub fn flag_distinguishing_tests(mut pairs: Vec<EvalPair>, runner: &dyn SuiteRunner, parallelism: usize) -> Vec<EvalPair> {
    fn key(o: &CodeObject) -> String {
        let suite = serde_json::to_string(&o.tests).unwrap_or_default();
        format!("{}:{}:{}", o.language, morphism::digest(&o.source), morphism::digest(&suite))
    }
    let mut unique: Vec<&CodeObject> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    for p in &pairs {
        if !(p.left.tests.present && p.right.tests.present) {
            continue;
        }
        for o in [&p.left, &p.right] {
            index.entry(key(o)).or_insert_with(|| {
                unique.push(o);
                unique.len() - 1
            });
        }
    }
    let chunk = unique.len().div_ceil(parallelism.max(1)).max(1);
    let results: Vec<Option<bool>> = std::thread::scope(|s| {
        let handles: Vec<_> =
            unique.chunks(chunk).map(|objs| s.spawn(move || objs.iter().map(|o| runner.passes(o)).collect::<Vec<_>>())).collect();
        handles.into_iter().flat_map(|h| h.join().unwrap_or_default()).collect()
    });
    let lookup: HashMap<String, Option<bool>> = index.into_iter().map(|(k, i)| (k, results.get(i).copied().flatten())).collect();
    for p in &mut pairs {
        p.tests_distinguish = match (lookup.get(&key(&p.left)), lookup.get(&key(&p.right))) {
            (Some(Some(l)), Some(Some(r))) => Some(l != r),
            _ => None,
        };
    }
    pairs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::TestSuite;
    use crate::lang::Language;

    fn contest(id: &str, problem: &str, src: &str, verdict: SolutionVerdict) -> CodeObject {
        CodeObject {
            task_id: id.into(),
            dataset: DatasetName::CodeContest,
            language: Language::Python,
            source: src.into(),
            entry_point: String::new(),
            declaration: String::new(),
            tests: TestSuite::absent(),
            problem_id: problem.into(),
            verdict,
            description: String::new(),
        }
    }

    #[test]
    fn identical_correct_solutions_do_not_pair() {
        let objs = vec![
            contest("a", "P", "print(1)\n", SolutionVerdict::Correct),
            contest("b", "P", "print(1)  # same\n", SolutionVerdict::Correct),
        ];
        let set = build_global_pairs(&objs, &PairConfig::default(), 1);
        assert!(set.pairs.is_empty());
        assert!(set.notes.iter().any(|n| n.contains("duplicate")));
    }

    #[test]
    fn lone_correct_solution_gives_nothing() {
        let objs = vec![contest("a", "P", "print(1)\n", SolutionVerdict::Correct)];
        assert!(build_global_pairs(&objs, &PairConfig::default(), 1).pairs.is_empty());
    }

    #[test]
    fn neq_global_pairs_are_capped() {
        let mut objs = vec![
            contest("c1", "P", "print(1)\n", SolutionVerdict::Correct),
            contest("c2", "P", "print(2 - 1)\n", SolutionVerdict::Correct),
        ];
        for i in 0..5 {
            objs.push(contest(&format!("i{i}"), "P", &format!("print({})\n", i + 5), SolutionVerdict::Incorrect));
        }
        let set = build_global_pairs(&objs, &PairConfig::default(), 3);
        assert_eq!(set.count(EqLabel::Equivalent), 1);
        assert_eq!(set.count(EqLabel::Nonequivalent), 4);
        for p in &set.pairs {
            assert_eq!(p.left.problem_id, p.right.problem_id);
            assert_eq!(p.distance, Distance::Global);
        }
    }

    struct Fixed;
    impl SuiteRunner for Fixed {
        fn passes(&self, obj: &CodeObject) -> Option<bool> {
            match obj.source.as_str() {
                "pass" => Some(true),
                "fail" => Some(false),
                _ => None,
            }
        }
    }

    #[test]
    fn flags_follow_pass_vectors() {
        let mk = |l: &str, r: &str, present: bool| {
            let mut a = contest("l", "P", l, SolutionVerdict::Correct);
            let mut b = contest("r", "P", r, SolutionVerdict::Incorrect);
            a.tests.present = present;
            b.tests.present = true;
            EvalPair {
                id: format!("{l}|{r}"),
                dataset: DatasetName::CodeContest,
                left: a,
                right: b,
                label: EqLabel::Nonequivalent,
                distance: Distance::Global,
                provenance: String::new(),
                kinds: Vec::new(),
                tests_distinguish: None,
            }
        };
        let pairs = vec![mk("pass", "fail", true), mk("pass", "pass", true), mk("pass", "fail", false), mk("pass", "boom", true)];
        let flagged = flag_distinguishing_tests(pairs, &Fixed, 2);
        let flags: Vec<_> = flagged.iter().map(|p| p.tests_distinguish).collect();
        assert_eq!(flags, [Some(true), Some(false), None, None]);
    }
}
