//! Acceptance report: one PASS/FAIL line per criterion.
//!
//! Criteria needing the real datasets read them from `CATCODE_DATA_DIR`
//! (`humaneval-x/{java,python}.jsonl`, `mbxp/java.jsonl`, `mathqa/java.jsonl`,
//! `codecontests/test.jsonl`); compile and run checks need a JDK. When either
//! is missing the criterion is reported as `FAIL [blocked]` with the reason.
//! The process exits non-zero if an evaluable criterion fails, or if any
//! criterion is blocked and `CATCODE_ACCEPTANCE_STRICT=1`.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::{Duration, Instant};

use catcode::corpus::{self, CodeObject, DatasetDescriptor, DatasetName, FilterRules};
use catcode::harness::{self, ExecRequest, Limits, Toolchain, ToolchainCompiler};
use catcode::metrics::{self, ConfusionCounts, Ratio};
use catcode::modelgw::{self, Adapter, ExecutionOracle, ModelSpec, StubConstantTrue};
use catcode::morphism::{MorphismChain, MorphismEngine, MorphismKind};
use catcode::pairgen::{self, EqLabel, EvalPair, PairConfig};
use catcode::pipeline::{self, CompileMode, DatasetEntry};
use catcode::taskgen::{self, PromptSet, TaskKind};
use catcode::{syntax, Language};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 7;

#[derive(PartialEq)]
enum Status {
    Pass,
    Fail,
    Blocked,
    Skip,
}

struct Line {
    n: u32,
    title: &'static str,
    status: Status,
    detail: String,
    elapsed: Duration,
    budget: Option<Duration>,
}

struct Env {
    data: Option<PathBuf>,
    tools: Toolchain,
    java: bool,
    python: bool,
}

impl Env {
    fn discover() -> Self {
        let data = std::env::var_os("CATCODE_DATA_DIR").map(PathBuf::from).filter(|d| d.join("humaneval-x/java.jsonl").is_file());
        let tools = Toolchain::discover();
        let ready = harness::doctor(&tools).ready;
        Env { data, java: ready.contains(&Language::Java), python: ready.contains(&Language::Python), tools }
    }

    fn missing(&self, data: bool, java: bool) -> Option<String> {
        let mut why = Vec::new();
        if data && self.data.is_none() {
            why.push("the real datasets (set CATCODE_DATA_DIR)");
        }
        if java && !self.java {
            why.push("a JDK (javac + java)");
        }
        (!why.is_empty()).then(|| format!("needs {}", why.join(" and ")))
    }
}

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn limits() -> Limits {
    Limits::default()
}

/// Java objects the morphism criteria run on: the filtered HumanEval-X split
/// when available, otherwise every Java fixture that parses.
fn java_objects(env: &Env) -> (Vec<CodeObject>, String) {
    if let (Some(dir), true) = (&env.data, env.java) {
        let entry = DatasetEntry {
            name: DatasetName::HumanEvalX,
            language: Language::Java,
            path: dir.join("humaneval-x/java.jsonl"),
            split: None,
            missing_tests: None,
        };
        if let Ok(ing) = pipeline::ingest(&[entry], CompileMode::Toolchain, &env.tools, &limits()) {
            return (ing.kept, "filtered HumanEval-X Java".into());
        }
    }
    let mut objs = Vec::new();
    for (name, file) in [
        (DatasetName::HumanEvalX, "humaneval-x/java.jsonl"),
        (DatasetName::Mbxp, "mbxp/java.jsonl"),
        (DatasetName::MathQa, "mathqa/java.jsonl"),
    ] {
        let loaded = corpus::load_dataset(&DatasetDescriptor::new(name, Language::Java), fixtures().join(file)).unwrap();
        objs.extend(loaded.objects.into_iter().filter(|o| syntax::parses(&o.source, Language::Java)));
    }
    (objs, "Java fixtures".into())
}

fn c1_filtering(env: &Env) -> (Status, String) {
    if let Some(why) = env.missing(true, true) {
        return (Status::Blocked, why);
    }
    let dir = env.data.as_ref().unwrap();
    let compiler = ToolchainCompiler::for_filtering(env.tools.clone(), limits());
    let count = |name: DatasetName, lang: Language, file: &str| -> catcode::Result<(usize, usize, usize, usize)> {
        let loaded = corpus::load_dataset(&DatasetDescriptor::new(name, lang), dir.join(file))?;
        let filtered = corpus::filter_corpus(&loaded.objects, &FilterRules::for_dataset(name), Some(&compiler))?;
        let before: HashSet<&str> = loaded.objects.iter().map(|o| o.problem_id.as_str()).collect();
        Ok((loaded.objects.len(), filtered.kept.len(), before.len(), filtered.problem_count()))
    };
    let mut ok = true;
    let mut detail = Vec::new();
    for (name, file, before, after, exact) in [
        (DatasetName::HumanEvalX, "humaneval-x/java.jsonl", 164, 159, true),
        (DatasetName::Mbxp, "mbxp/java.jsonl", 974, 953, false),
        (DatasetName::MathQa, "mathqa/java.jsonl", 1881, 1734, false),
    ] {
        match count(name, Language::Java, file) {
            Ok((b, a, _, _)) => {
                let hit = if exact { b == before && a == after } else { (a as f64 - after as f64).abs() <= after as f64 * 0.01 };
                ok &= hit;
                detail.push(format!("{name} {b}->{a} (target {before}->{after}{})", if exact { "" } else { " ±1%" }));
            }
            Err(e) => {
                ok = false;
                detail.push(format!("{name}: {e}"));
            }
        }
    }
    let mut problems_before = HashSet::new();
    let mut problems_after = HashSet::new();
    for lang in [Language::Java, Language::Python] {
        let loaded = corpus::load_dataset(&DatasetDescriptor::new(DatasetName::CodeContest, lang), dir.join("codecontests/test.jsonl"));
        match loaded.and_then(|l| {
            let f = corpus::filter_corpus(&l.objects, &FilterRules::for_dataset(DatasetName::CodeContest), None)?;
            Ok((l, f))
        }) {
            Ok((l, f)) => {
                problems_before.extend(l.objects.into_iter().map(|o| o.problem_id));
                problems_after.extend(f.kept.into_iter().map(|o| o.problem_id));
            }
            Err(e) => {
                ok = false;
                detail.push(format!("codecontests: {e}"));
            }
        }
    }
    ok &= problems_after.len() == 97;
    detail.push(format!("codecontests {}->{} problems (target 164->97)", problems_before.len(), problems_after.len()));
    (if ok { Status::Pass } else { Status::Fail }, detail.join("; "))
}

fn c2_self_soundness(env: &Env) -> (Status, String) {
    if let Some(why) = env.missing(true, true) {
        return (Status::Blocked, why);
    }
    let (objs, _) = java_objects(env);
    let engine = MorphismEngine::default();
    let mut requests = Vec::new();
    let mut labels = Vec::new();
    for o in objs.iter().filter(|o| o.tests.present) {
        for kind in MorphismKind::SELF_KINDS {
            let Ok(sites) = engine.enumerate_sites(&o.source, Language::Java, kind) else { continue };
            for (i, site) in sites.iter().enumerate() {
                match engine.apply(&o.source, site, SEED ^ i as u64) {
                    Ok((code, _)) => {
                        labels.push(format!("{} {} {}", o.task_id, kind.abbrev(), site.descriptor));
                        requests.push(ExecRequest {
                            task_id: o.task_id.clone(),
                            code: Some(code),
                            suite: o.tests.clone(),
                            language: Language::Java,
                        });
                    }
                    Err(_) => {
                        // counted as a failed application
                        labels.push(format!("{} {} {}", o.task_id, kind.abbrev(), site.descriptor));
                        requests.push(ExecRequest {
                            task_id: o.task_id.clone(),
                            code: None,
                            suite: o.tests.clone(),
                            language: Language::Java,
                        });
                    }
                }
            }
        }
    }
    let outcomes = match harness::execute_batch(&requests, &limits(), &env.tools, 8) {
        Ok(o) => o,
        Err(e) => return (Status::Fail, e.to_string()),
    };
    let exclusions: HashSet<String> =
        std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/self_morphism_exclusions.txt"))
            .unwrap_or_default()
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(String::from)
            .collect();
    let failed: Vec<&String> = labels.iter().zip(&outcomes).filter(|(_, o)| !o.passed()).map(|(l, _)| l).collect();
    let unexcused: Vec<&&String> = failed.iter().filter(|l| !exclusions.contains(l.as_str())).collect();
    let cap = (labels.len() as f64 * 0.05).floor() as usize;
    let ok = unexcused.is_empty() && exclusions.len() <= cap;
    let mut detail = format!("{} applications, {} failed, {} excluded (cap {cap})", labels.len(), failed.len(), exclusions.len());
    if let Some(first) = unexcused.first() {
        detail += &format!("; first unexcused: {first}");
    }
    (if ok { Status::Pass } else { Status::Fail }, detail)
}

fn c3_noneq_validity(env: &Env) -> (Status, String) {
    let (objs, what) = java_objects(env);
    let engine = MorphismEngine::default();
    let mut outputs: Vec<(MorphismKind, &CodeObject, String)> = Vec::new();
    let mut rewrite_errors = 0;
    for o in &objs {
        for kind in MorphismKind::NONEQUIVALENT_KINDS {
            let Ok(sites) = engine.enumerate_sites(&o.source, Language::Java, kind) else { continue };
            for (i, site) in sites.iter().enumerate() {
                match engine.apply(&o.source, site, SEED ^ i as u64) {
                    Ok((code, _)) => outputs.push((kind, o, code)),
                    Err(_) => rewrite_errors += 1,
                }
            }
        }
    }
    let parsed = outputs.iter().filter(|(_, _, c)| syntax::parses(c, Language::Java)).count();
    let parse_ok = parsed == outputs.len() && rewrite_errors == 0 && !outputs.is_empty();
    let mut detail = format!("{what}: {parsed}/{} MC/RE outputs parse, {rewrite_errors} rewrite errors", outputs.len());
    if let Some(why) = env.missing(false, true) {
        detail += &format!("; compile check and distinguishing rate {why}");
        return (if parse_ok { Status::Blocked } else { Status::Fail }, detail);
    }
    let compiler = ToolchainCompiler::new(env.tools.clone(), limits());
    let mut compiled = 0;
    for (_, o, code) in &outputs {
        let probe = CodeObject { source: code.clone(), ..(*o).clone() };
        if matches!(corpus::CompileCheck::check(&compiler, &probe), Ok(Ok(()))) {
            compiled += 1;
        }
    }
    let requests: Vec<ExecRequest> = outputs
        .iter()
        .filter(|(_, o, _)| o.tests.present)
        .map(|(_, o, c)| ExecRequest {
            task_id: o.task_id.clone(),
            code: Some(c.clone()),
            suite: o.tests.clone(),
            language: Language::Java,
        })
        .collect();
    let kinds: Vec<MorphismKind> = outputs.iter().filter(|(_, o, _)| o.tests.present).map(|(k, _, _)| *k).collect();
    let mut per_kind: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
    if let Ok(outcomes) = harness::execute_batch(&requests, &limits(), &env.tools, 8) {
        for (k, o) in kinds.iter().zip(outcomes) {
            let e = per_kind.entry(k.abbrev()).or_default();
            e.1 += 1;
            if !o.passed() {
                e.0 += 1;
            }
        }
    }
    detail += &format!("; {compiled}/{} compile", outputs.len());
    for (k, (d, n)) in &per_kind {
        detail += &format!("; {k} distinguished by tests {d}/{n}");
    }
    (if parse_ok && compiled == outputs.len() { Status::Pass } else { Status::Fail }, detail)
}

/// Equivalent pairs the 3-per-object scheme can yield from `k` sampled outputs.
fn eq_pairs_for(k: usize) -> usize {
    k + k * k.saturating_sub(1) / 2
}

fn pair_arithmetic(objs: &[CodeObject]) -> (usize, usize, bool, usize) {
    let engine = MorphismEngine::default();
    let config = PairConfig::default();
    let variants = pairgen::sample_variants(objs, &engine, &config, SEED).unwrap();
    let set = pairgen::pairs_from_variants(objs, &variants.variants, &config, SEED).unwrap();
    let mut per_object: HashMap<&str, usize> = HashMap::new();
    for v in variants.variants.iter().filter(|v| v.label == EqLabel::Equivalent) {
        *per_object.entry(v.original.as_str()).or_default() += 1;
    }
    let expected: usize = objs.iter().map(|o| eq_pairs_for(per_object.get(o.task_id.as_str()).copied().unwrap_or(0))).sum();
    let actual = set.count(EqLabel::Equivalent);
    let dropped = set.notes.iter().filter(|n| n.contains("identical sources")).count();
    let short: Vec<&CodeObject> = objs.iter().filter(|o| per_object.get(o.task_id.as_str()).copied().unwrap_or(0) < 2).collect();
    let explained =
        short.iter().all(|o| variants.notes.iter().any(|n| n.starts_with(&format!("{}:", o.task_id)) && n.contains("self-morphism")));
    (actual, expected, explained && actual + dropped >= expected, short.len())
}

fn c4_pairs(env: &Env) -> (Status, String) {
    let (fixture_objs, _) = java_objects(&Env { data: None, ..Env::discover() });
    let (a, e, explained, short) = pair_arithmetic(&fixture_objs);
    let dry = format!("fixtures: {a} eq pairs, {e} expected from availability, {short} objects short, log explains: {explained}");
    if let Some(why) = env.missing(true, true) {
        return (Status::Blocked, format!("{why}; {dry}"));
    }
    let (objs, _) = java_objects(env);
    let (a, e, explained, short) = pair_arithmetic(&objs);
    let ok = (a == 477 && objs.len() == 159) || (explained && short > 0);
    (
        if ok { Status::Pass } else { Status::Fail },
        format!(
            "{} objects -> {a} eq pairs (target 477, {e} possible from availability); {short} short, log explains: {explained}",
            objs.len()
        ),
    )
}

fn c5_laws(env: &Env) -> (Status, String) {
    let (objs, what) = java_objects(env);
    let engine = MorphismEngine::default();
    let identity_ok = objs
        .iter()
        .filter(|o| engine.apply_chain(&o.source, &[MorphismKind::Identity], SEED).map(|(s, _)| s == o.source).unwrap_or(false))
        .count();
    let mut unit_checked = 0;
    let mut unit_bad = 0;
    for (i, o) in objs.iter().enumerate() {
        for kind in MorphismKind::ALL {
            let seed = SEED.wrapping_add(i as u64);
            let Ok((plain, _)) = engine.apply_chain(&o.source, &[kind], seed) else { continue };
            unit_checked += 1;
            let left = engine.apply_chain(&o.source, &[MorphismKind::Identity, kind], seed).map(|r| r.0);
            let right = engine.apply_chain(&o.source, &[kind, MorphismKind::Identity], seed).map(|r| r.0);
            if left.as_ref().ok() != Some(&plain) || right.as_ref().ok() != Some(&plain) {
                unit_bad += 1;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut chains, mut assoc_bad, mut draws) = (0, 0, 0);
    while chains < 1000 && draws < 200_000 {
        draws += 1;
        let o = objs.choose(&mut rng).unwrap();
        let kinds: Vec<MorphismKind> = (0..3).map(|_| *MorphismKind::ALL.choose(&mut rng).unwrap()).collect();
        let Ok((whole, chain)) = engine.apply_chain(&o.source, &kinds, rng.gen()) else { continue };
        chains += 1;
        let step = |i: usize| MorphismChain::from_steps(vec![chain.steps[i].clone()]);
        let (f, g, h) = (step(0), step(1), step(2));
        let left = f.then(&g).then(&h).replay(&engine, &o.source).ok();
        let right = f.then(&g.then(&h)).replay(&engine, &o.source).ok();
        if left.as_ref() != Some(&whole) || right.as_ref() != Some(&whole) {
            assoc_bad += 1;
        }
    }
    let ok = identity_ok == objs.len() && !objs.is_empty() && unit_bad == 0 && chains == 1000 && assoc_bad == 0;
    (
        if ok { Status::Pass } else { Status::Fail },
        format!(
            "{what}: identity byte-identical {identity_ok}/{}; unit laws {}/{unit_checked}; associativity {}/{chains} chains",
            objs.len(),
            unit_checked - unit_bad,
            chains - assoc_bad
        ),
    )
}

fn fixture_pairs(env: &Env) -> Vec<EvalPair> {
    let (java, _) = java_objects(&Env { data: None, ..Env::discover() });
    let config = PairConfig::default();
    let mut pairs = pairgen::build_local_pairs(&java, &MorphismEngine::default(), &config, SEED).unwrap().pairs;
    let contest: Vec<CodeObject> = [Language::Python, Language::Java]
        .into_iter()
        .flat_map(|l| {
            let d = DatasetDescriptor::new(DatasetName::CodeContest, l);
            let loaded = corpus::load_dataset(&d, fixtures().join("codecontests/test.jsonl")).unwrap();
            corpus::filter_corpus(&loaded.objects, &FilterRules::for_dataset(DatasetName::CodeContest), None).unwrap().kept
        })
        .collect();
    pairs.extend(pairgen::build_global_pairs(&contest, &config, SEED).pairs);
    let runner = harness::HarnessRunner { toolchain: env.tools.clone(), limits: limits() };
    pairgen::flag_distinguishing_tests(pairs, &runner, 4)
}

fn score_with(
    pairs: &[EvalPair],
    spec: &ModelSpec,
    backend: Arc<dyn modelgw::CompletionBackend>,
) -> catcode::Result<metrics::PairingScore> {
    let tpl = PromptSet::builtin().default_for(TaskKind::MorphismIdentification)?.clone();
    let tasks = taskgen::build_identification_tasks(pairs, &tpl)?;
    let responses = modelgw::dispatch_blocking(&tasks, spec, backend, None)?;
    let verdicts: Vec<_> = responses.iter().map(harness::extract_boolean_verdict).collect();
    metrics::score_verdicts(pairs, &verdicts)
}

fn c6_offline(env: &Env) -> (Status, String) {
    let pairs = fixture_pairs(env);
    let mut ok = true;
    let mut detail = Vec::new();

    let spec = ModelSpec::stub(Adapter::StubConstantTrue);
    match score_with(&pairs, &spec, Arc::new(StubConstantTrue)) {
        Ok(s) => {
            let hit = s.overall.precision_eq.value == Some(1.0) && s.overall.precision_neq.value == Some(0.0);
            ok &= hit;
            detail.push(format!("constant-true eq {} neq {}", s.overall.precision_eq, s.overall.precision_neq));
        }
        Err(e) => {
            ok = false;
            detail.push(format!("constant-true: {e}"));
        }
    }

    let flagged: Vec<EvalPair> = pairs.iter().filter(|p| p.tests_distinguish == Some(true)).cloned().collect();
    let sides: Vec<CodeObject> = flagged.iter().flat_map(|p| [p.left.clone(), p.right.clone()]).collect();
    let oracle = Arc::new(Arc::new(ExecutionOracle::new(&sides, &[], env.tools.clone(), limits())));
    let spec = ModelSpec::stub(Adapter::StubExecutionOracle);
    match score_with(&flagged, &spec, oracle) {
        Ok(s) if !flagged.is_empty() => {
            ok &= s.overall.precision_neq.value == Some(1.0);
            detail.push(format!("oracle on {} distinguishing pairs neq {}", flagged.len(), s.overall.precision_neq));
        }
        Ok(_) => {
            ok = false;
            detail.push("no pair with distinguishing tests could be executed".into());
        }
        Err(e) => {
            ok = false;
            detail.push(format!("oracle: {e}"));
        }
    }

    // Identity translation on the 156 tested HumanEval-X Java tasks.
    let blocked = env.missing(true, true);
    match &blocked {
        Some(why) => {
            let py = env
                .python
                .then(|| identity_translation(&fixtures().join("humaneval-x/python.jsonl"), Language::Python, CompileMode::Toolchain, env));
            let extra = match py {
                Some(Ok((r, _))) => format!(" (python->python on fixtures: {r})"),
                Some(Err(e)) => format!(" (python->python on fixtures failed: {e})"),
                None => String::new(),
            };
            detail.push(format!("identity translation {why}{extra}"));
        }
        None => {
            let path = env.data.as_ref().unwrap().join("humaneval-x/java.jsonl");
            match identity_translation(&path, Language::Java, CompileMode::Toolchain, env) {
                Ok((r, n)) => {
                    ok &= r.value == Some(1.0) && n == 156;
                    detail.push(format!("identity translation pass@1 {r} over {n} tasks (target 156)"));
                }
                Err(e) => {
                    ok = false;
                    detail.push(format!("identity translation: {e}"));
                }
            }
        }
    }
    let status = match (ok, blocked) {
        (false, _) => Status::Fail,
        (true, Some(_)) => Status::Blocked,
        (true, None) => Status::Pass,
    };
    (status, detail.join("; "))
}

fn identity_translation(path: &Path, lang: Language, mode: CompileMode, env: &Env) -> catcode::Result<(Ratio, usize)> {
    let entry = DatasetEntry { name: DatasetName::HumanEvalX, language: lang, path: path.to_path_buf(), split: None, missing_tests: None };
    let corpus = pipeline::ingest(&[entry], mode, &env.tools, &limits())?.kept;
    let (sources, _) = pipeline::translation_sources(&corpus, lang, lang);
    let tpl = PromptSet::builtin().default_for(TaskKind::Translation)?.clone();
    let tasks = taskgen::build_translation_tasks(&sources, lang, lang, &tpl)?;
    let spec = ModelSpec::stub(Adapter::StubIdentity);
    let responses = modelgw::dispatch_blocking(&tasks, &spec, Arc::new(modelgw::StubIdentity), None)?;
    let requests = pipeline::exec_requests(&responses, &corpus)?;
    let outcomes = harness::execute_batch(&requests, &limits(), &env.tools, 8)?;
    Ok((metrics::pass_at_1(&outcomes), outcomes.len()))
}

fn c7_metric_oracles() -> (Status, String) {
    use catcode::harness::{ExecStatus, ExecutionOutcome, Verdict, VerdictLabel};
    use catcode::pairgen::Distance;
    let template = {
        let d = DatasetDescriptor::new(DatasetName::HumanEvalX, Language::Java);
        corpus::load_dataset(&d, fixtures().join("humaneval-x/java.jsonl")).unwrap().objects.remove(0)
    };
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut mismatches = 0;
    let sets = 10_000;
    for set in 0..sets {
        let n = rng.gen_range(0..40);
        let mut pairs = Vec::with_capacity(n);
        let mut verdicts = Vec::with_capacity(n);
        let mut truth = Vec::with_capacity(n);
        for i in 0..n {
            let label = if rng.gen_bool(0.5) { EqLabel::Equivalent } else { EqLabel::Nonequivalent };
            let said = [VerdictLabel::Equivalent, VerdictLabel::Nonequivalent, VerdictLabel::Unparseable][rng.gen_range(0..3)];
            let id = format!("{set}-{i}");
            pairs.push(EvalPair {
                id: id.clone(),
                dataset: DatasetName::HumanEvalX,
                left: template.clone(),
                right: template.clone(),
                label,
                distance: [Distance::One, Distance::Two, Distance::Global][rng.gen_range(0..3)],
                provenance: String::new(),
                kinds: vec![*MorphismKind::ALL.choose(&mut rng).unwrap()],
                tests_distinguish: None,
            });
            verdicts.push(Verdict { task_id: taskgen::identification_task_id(&id), parsed: said, evidence: String::new() });
            truth.push((label, said));
        }
        verdicts.shuffle(&mut rng);
        let score = metrics::score_verdicts(&pairs, &verdicts).unwrap();
        let mut c = ConfusionCounts::default();
        for (label, said) in &truth {
            match (label, said) {
                (EqLabel::Equivalent, VerdictLabel::Equivalent) => c.tp += 1,
                (EqLabel::Equivalent, _) => c.fn_ += 1,
                (EqLabel::Nonequivalent, VerdictLabel::Nonequivalent) => c.tn += 1,
                (EqLabel::Nonequivalent, _) => c.fp += 1,
            }
        }
        let eq = (c.tp + c.fn_ > 0).then(|| c.tp as f64 / (c.tp + c.fn_) as f64);
        let neq = (c.tn + c.fp > 0).then(|| c.tn as f64 / (c.tn + c.fp) as f64);
        if score.overall.precision_eq.value != eq || score.overall.precision_neq.value != neq || score.overall.counts != c {
            mismatches += 1;
        }

        let statuses: Vec<ExecStatus> = (0..n)
            .map(|_| {
                [
                    ExecStatus::Pass,
                    ExecStatus::TestFailure,
                    ExecStatus::CompileError,
                    ExecStatus::RuntimeError,
                    ExecStatus::Timeout,
                    ExecStatus::ExtractionFailure,
                ][rng.gen_range(0..6)]
            })
            .collect();
        let outcomes: Vec<ExecutionOutcome> = statuses
            .iter()
            .enumerate()
            .map(|(i, s)| ExecutionOutcome {
                task_id: i.to_string(),
                status: *s,
                failure_type: None,
                stderr_digest: String::new(),
                duration_ms: 0,
                stderr_excerpt: String::new(),
            })
            .collect();
        let passes = statuses.iter().filter(|s| **s == ExecStatus::Pass).count();
        let expect = (n > 0).then(|| passes as f64 / n as f64);
        if metrics::pass_at_1(&outcomes).value != expect {
            mismatches += 1;
        }
    }
    (if mismatches == 0 { Status::Pass } else { Status::Fail }, format!("{sets} random record sets, {mismatches} mismatches"))
}

fn c8_verdicts() -> (Status, String) {
    use catcode::harness::{verdict_from_text, VerdictLabel};
    #[derive(serde::Deserialize)]
    struct Case {
        id: String,
        text: String,
        label: VerdictLabel,
    }
    let cases: Vec<Case> = catcode::jsonl::read(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/verdicts.jsonl")).unwrap();
    let verdicts: Vec<_> = cases.iter().map(|c| verdict_from_text(&c.id, &c.text)).collect();
    let agree = cases.iter().zip(&verdicts).filter(|(c, v)| c.label == v.parsed && c.id == v.task_id).count();
    let unparseable = verdicts.iter().filter(|v| v.parsed == VerdictLabel::Unparseable).count();
    let ok = agree == cases.len() && cases.len() == 50 && verdicts.len() == cases.len();
    (
        if ok { Status::Pass } else { Status::Fail },
        format!("{agree}/{} agree with hand labels; {unparseable} unparseable counted", cases.len()),
    )
}

fn main() {
    let env = Env::discover();
    println!(
        "environment: datasets {}, java {}, python {}",
        env.data.as_ref().map_or("absent".into(), |d| d.display().to_string()),
        if env.java { "yes" } else { "no" },
        if env.python { "yes" } else { "no" }
    );
    type Check = Box<dyn Fn(&Env) -> (Status, String)>;
    let checks: Vec<(u32, &'static str, Option<u64>, Check)> = vec![
        (1, "corpus filtering", Some(15 * 60), Box::new(c1_filtering)),
        (2, "self-morphism soundness", Some(30 * 60), Box::new(c2_self_soundness)),
        (3, "nonequivalent-morphism validity", None, Box::new(c3_noneq_validity)),
        (4, "pair arithmetic", None, Box::new(c4_pairs)),
        (5, "category laws", None, Box::new(c5_laws)),
        (6, "offline end-to-end with stubs", Some(20 * 60), Box::new(c6_offline)),
        (7, "metric oracles", None, Box::new(|_: &Env| c7_metric_oracles())),
        (8, "verdict extraction", None, Box::new(|_: &Env| c8_verdicts())),
    ];
    let mut lines = Vec::new();
    for (n, title, budget, check) in checks {
        let started = Instant::now();
        let (status, detail) = check(&env);
        lines.push(Line { n, title, status, detail, elapsed: started.elapsed(), budget: budget.map(Duration::from_secs) });
        let l = lines.last_mut().unwrap();
        if let (Status::Pass, Some(b)) = (&l.status, l.budget) {
            if l.elapsed > b {
                l.status = Status::Fail;
                l.detail += &format!("; over the {}s budget", b.as_secs());
            }
        }
        print_line(l);
    }
    let live = if std::env::var_os("CATCODE_LIVE_ENDPOINT").is_some() {
        "set, but live runs go through `catcode pipeline`; see the guide"
    } else {
        "optional, not run (no CATCODE_LIVE_ENDPOINT)"
    };
    lines.push(Line { n: 9, title: "live sanity", status: Status::Skip, detail: live.into(), elapsed: Duration::ZERO, budget: None });
    print_line(lines.last().unwrap());

    let failed = lines.iter().filter(|l| l.status == Status::Fail).count();
    let blocked = lines.iter().filter(|l| l.status == Status::Blocked).count();
    let passed = lines.iter().filter(|l| l.status == Status::Pass).count();
    println!("summary: {passed} pass, {failed} fail, {blocked} fail [blocked by environment]");
    let strict = std::env::var("CATCODE_ACCEPTANCE_STRICT").is_ok_and(|v| v == "1");
    if failed > 0 || (strict && blocked > 0) {
        std::process::exit(1);
    }
}

fn print_line(l: &Line) {
    let status = match l.status {
        Status::Pass => "PASS",
        Status::Fail => "FAIL",
        Status::Blocked => "FAIL [blocked]",
        Status::Skip => "SKIP",
    };
    println!("criterion {} ({}): {status} - {} [{:.1}s]", l.n, l.title, l.detail, l.elapsed.as_secs_f64());
}
