//! End-to-end runs driven by one configuration file.
//!
//! Stages run in order (ingest, morph, pairs, tasks, run, exec, score) and
//! each leaves a newline-delimited artifact named
//! `{stage}-{config digest}-{seed}.jsonl` in the output directory. A stage
//! whose artifact already exists is loaded instead of recomputed, so an
//! interrupted run resumes where it stopped; the model stage additionally
//! resumes mid-way from its journal.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::corpus::{self, CodeObject, DatasetDescriptor, DatasetName, FilterRules, Rejection};
use crate::error::{Error, Result};
use crate::harness::{self, ExecRequest, ExecutionOutcome, HarnessRunner, Limits, Toolchain, ToolchainCompiler, Verdict};
use crate::jsonl;
use crate::lang::Language;
use crate::metrics::{self, MetricsReport, RunMetadata};
use crate::modelgw::{self, Adapter, CompletionBackend, ExecutionOracle, ModelResponse, ModelSpec, ResponseStatus};
use crate::morphism::{self, MorphismConfig, MorphismEngine};
use crate::pairgen::{self, EvalPair, PairConfig, Variant};
use crate::taskgen::{self, PromptSet, PromptTemplate, TaskInstance, TaskKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Config,
    Ingest,
    Morph,
    Pairs,
    Tasks,
    Run,
    Exec,
    Score,
    Report,
    Doctor,
}

impl Stage {
    pub fn name(self) -> &'static str {
        match self {
            Stage::Config => "config",
            Stage::Ingest => "ingest",
            Stage::Morph => "morph",
            Stage::Pairs => "pairs",
            Stage::Tasks => "tasks",
            Stage::Run => "run",
            Stage::Exec => "exec",
            Stage::Score => "score",
            Stage::Report => "report",
            Stage::Doctor => "doctor",
        }
    }

    /// Process exit status when this stage fails.
    pub fn exit_code(self) -> i32 {
        match self {
            Stage::Config => 2,
            Stage::Ingest => 10,
            Stage::Morph => 11,
            Stage::Pairs => 12,
            Stage::Tasks => 13,
            Stage::Run => 14,
            Stage::Exec => 15,
            Stage::Score => 16,
            Stage::Report => 17,
            Stage::Doctor => 18,
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, thiserror::Error)]
#[error("stage `{stage}` failed{}: {source}", .artifact.as_ref().map(|p| format!(" ({})", p.display())).unwrap_or_default())]
pub struct StageError {
    pub stage: Stage,
    /// Artifact being produced when the stage failed; earlier ones are kept.
    pub artifact: Option<PathBuf>,
    #[source]
    pub source: Error,
}

trait AtStage<T> {
    fn at(self, stage: Stage, artifact: Option<&Path>) -> std::result::Result<T, StageError>;
}

impl<T> AtStage<T> for Result<T> {
    fn at(self, stage: Stage, artifact: Option<&Path>) -> std::result::Result<T, StageError> {
        self.map_err(|source| StageError { stage, artifact: artifact.map(Path::to_path_buf), source })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetEntry {
    pub name: DatasetName,
    pub language: Language,
    pub path: PathBuf,
    #[serde(default)]
    pub split: Option<String>,
    #[serde(default)]
    pub missing_tests: Option<Vec<String>>,
}

impl DatasetEntry {
    pub fn descriptor(&self) -> DatasetDescriptor {
        let mut d = DatasetDescriptor::new(self.name, self.language);
        if let Some(split) = &self.split {
            d.split = split.clone();
        }
        if self.missing_tests.is_some() {
            d.missing_tests = self.missing_tests.clone();
        }
        d
    }
}

/// How the ingest stage decides whether a solution compiles.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CompileMode {
    /// Compile with the installed toolchain; missing tools fail the stage.
    #[default]
    Toolchain,
    /// Accept anything that parses. Weaker; for machines without compilers.
    SyntaxOnly,
    Off,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskSettings {
    pub kind: TaskKind,
    #[serde(default)]
    pub template: Option<String>,
    /// Prompt file replacing the built-in templates.
    #[serde(default)]
    pub prompts: Option<PathBuf>,
    #[serde(default)]
    pub source: Option<Language>,
    #[serde(default)]
    pub target: Option<Language>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct HarnessSettings {
    pub compile_check: CompileMode,
    pub parallelism: usize,
    /// Run both sides of every pair to fill in `tests_distinguish`.
    pub flag_distinguishing: bool,
}

impl Default for HarnessSettings {
    fn default() -> Self {
        HarnessSettings { compile_check: CompileMode::Toolchain, parallelism: 4, flag_distinguishing: false }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub seed: u64,
    pub out_dir: PathBuf,
    #[serde(rename = "dataset")]
    pub datasets: Vec<DatasetEntry>,
    pub task: TaskSettings,
    pub model: ModelSpec,
    #[serde(default)]
    pub morph: MorphismConfig,
    #[serde(default)]
    pub pairs: PairConfig,
    #[serde(default)]
    pub limits: Limits,
    #[serde(default)]
    pub harness: HarnessSettings,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    /// Reads a config file; relative paths in it are taken from its directory.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg = Self::parse(&text)?;
        let base = path.parent().unwrap_or(Path::new("."));
        let rebase = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        rebase(&mut cfg.out_dir);
        cfg.datasets.iter_mut().for_each(|d| rebase(&mut d.path));
        if let Some(p) = cfg.task.prompts.as_mut() {
            rebase(p);
        }
        Ok(cfg)
    }

    pub fn prompts(&self) -> Result<PromptSet> {
        match &self.task.prompts {
            Some(p) => PromptSet::load(p),
            None => Ok(PromptSet::builtin()),
        }
    }

    /// The template for `kind`: the configured one for the main task kind,
    /// otherwise the default of its kind.
    pub fn template(&self, prompts: &PromptSet, kind: TaskKind) -> Result<PromptTemplate> {
        let tpl = match (&self.task.template, kind == self.task.kind) {
            (Some(id), true) => prompts.get(id)?,
            _ => prompts.default_for(kind)?,
        };
        tpl.expect_kind(kind)?;
        Ok(tpl.clone())
    }

    pub fn validate(&self) -> Result<()> {
        if self.datasets.is_empty() {
            return Err(Error::Config("at least one [[dataset]] is required".into()));
        }
        self.model.validate()?;
        let prompts = self.prompts()?;
        self.template(&prompts, self.task.kind)?;
        match self.task.kind {
            TaskKind::Translation if self.task.source.is_none() || self.task.target.is_none() => {
                return Err(Error::Config("translation needs task.source and task.target".into()))
            }
            TaskKind::Explanation if self.task.source.is_none() => return Err(Error::Config("explanation needs task.source".into())),
            TaskKind::Reproduction => return Err(Error::Config("reproduction runs as part of kind = \"explanation\"".into())),
            TaskKind::Explanation => {
                self.template(&prompts, TaskKind::Reproduction)?;
            }
            _ => {}
        }
        if self.harness.parallelism == 0 {
            return Err(Error::Config("harness.parallelism must be positive".into()));
        }
        Ok(())
    }

    /// Digest of everything that determines the artifacts except the output
    /// directory; templates are included by content.
    pub fn digest(&self) -> Result<String> {
        let mut c = self.clone();
        c.out_dir = PathBuf::new();
        let prompts = self.prompts()?;
        let mut text = serde_json::to_string(&c)?;
        for t in &prompts.templates {
            text.push_str(&serde_json::to_string(t)?);
        }
        Ok(morphism::digest(&text))
    }
}

/// A standalone `[model]`-style table, as used by `catcode run --model-config`.
pub fn parse_model_spec(text: &str) -> Result<ModelSpec> {
    toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
}

pub fn parse_limits(text: &str) -> Result<Limits> {
    toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
}

/// Names and locates the artifacts of one run.
#[derive(Debug, Clone)]
pub struct Artifacts {
    pub dir: PathBuf,
    pub digest: String,
    pub seed: u64,
}

impl Artifacts {
    pub fn path(&self, stage: &str, ext: &str) -> PathBuf {
        self.dir.join(format!("{stage}-{}-{}.{ext}", self.digest, self.seed))
    }
}

fn cached<T, F>(path: &Path, compute: F) -> Result<Vec<T>>
where
    T: Serialize + for<'de> Deserialize<'de>,
    F: FnOnce() -> Result<Vec<T>>,
{
    if path.exists() {
        tracing::info!(artifact = %path.display(), "reusing");
        return jsonl::read(path);
    }
    let records = compute()?;
    jsonl::write(path, &records)?;
    Ok(records)
}

fn write_log(path: &Path, lines: &[String]) -> Result<()> {
    let mut text = lines.join("\n");
    if !text.is_empty() {
        text.push('\n');
    }
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

#[derive(Debug, Default)]
pub struct Ingested {
    pub kept: Vec<CodeObject>,
    pub rejected: Vec<Rejection>,
    pub load_errors: Vec<String>,
}

/// Loads and filters every dataset with its own rules.
pub fn ingest(entries: &[DatasetEntry], mode: CompileMode, toolchain: &Toolchain, limits: &Limits) -> Result<Ingested> {
    let compiler = ToolchainCompiler::for_filtering(toolchain.clone(), *limits);
    let mut out = Ingested::default();
    for entry in entries {
        let loaded = corpus::load_dataset(&entry.descriptor(), &entry.path)?;
        out.load_errors.extend(loaded.errors);
        let mut rules = FilterRules::for_dataset(entry.name);
        let check: Option<&dyn corpus::CompileCheck> = match mode {
            CompileMode::Toolchain => Some(&compiler),
            CompileMode::SyntaxOnly => Some(&harness::SyntaxOnly),
            CompileMode::Off => {
                rules.compile_check = false;
                None
            }
        };
        let filtered = corpus::filter_corpus(&loaded.objects, &rules, check)?;
        out.kept.extend(filtered.kept);
        out.rejected.extend(filtered.rejected);
    }
    Ok(out)
}

/// Objects that receive morphisms: Java function-level datasets.
pub fn morphable(corpus: &[CodeObject]) -> Vec<CodeObject> {
    corpus.iter().filter(|o| o.language == Language::Java && o.dataset != DatasetName::CodeContest).cloned().collect()
}

/// Translation sources whose problem has a tested target-language object.
pub fn translation_sources(corpus: &[CodeObject], src: Language, dst: Language) -> (Vec<CodeObject>, Vec<String>) {
    let tested: HashSet<(DatasetName, &str)> =
        corpus.iter().filter(|o| o.language == dst && o.tests.present).map(|o| (o.dataset, o.problem_id.as_str())).collect();
    let mut notes = Vec::new();
    let sources = corpus
        .iter()
        .filter(|o| o.language == src && o.dataset != DatasetName::CodeContest)
        .filter(|o| {
            let ok = tested.contains(&(o.dataset, o.problem_id.as_str()));
            if !ok {
                notes.push(format!("{}: no tested {dst} counterpart, not translated", o.task_id));
            }
            ok
        })
        .cloned()
        .collect();
    (sources, notes)
}

/// Turns code-producing responses into execution requests against the
/// target-language suite of the source object's problem.
pub fn exec_requests(responses: &[ModelResponse], corpus: &[CodeObject]) -> Result<Vec<ExecRequest>> {
    let by_id: HashMap<&str, &CodeObject> = corpus.iter().map(|o| (o.task_id.as_str(), o)).collect();
    let suites: HashMap<(DatasetName, &str, Language), &CodeObject> =
        corpus.iter().map(|o| ((o.dataset, o.problem_id.as_str(), o.language), o)).collect();
    responses
        .iter()
        .map(|r| {
            let (source_id, lang) = taskgen::code_task_target(&r.task_id)
                .ok_or_else(|| Error::Alignment(format!("{} is not a code-producing task", r.task_id)))?;
            let source = by_id.get(source_id).ok_or_else(|| Error::Alignment(format!("{}: source object not in corpus", r.task_id)))?;
            let target = suites
                .get(&(source.dataset, source.problem_id.as_str(), lang))
                .ok_or_else(|| Error::Alignment(format!("{}: no {lang} suite for {}", r.task_id, source.problem_id)))?;
            let code = harness::extract_code_block(r, lang);
            Ok(ExecRequest { task_id: r.task_id.clone(), code, suite: target.tests.clone(), language: lang })
        })
        .collect()
}

/// Backend for the configured model. The oracle sees every object a task
/// may refer to and uses the corpus for reference solutions.
pub fn backend(
    spec: &ModelSpec,
    objects: &[CodeObject],
    corpus: &[CodeObject],
    toolchain: &Toolchain,
    limits: &Limits,
) -> Result<Arc<dyn CompletionBackend>> {
    match spec.adapter {
        Adapter::StubExecutionOracle => Ok(Arc::new(Arc::new(ExecutionOracle::new(objects, corpus, toolchain.clone(), *limits)))),
        _ => modelgw::backend_for(spec),
    }
}

pub struct PipelineOutput {
    pub report: MetricsReport,
    pub report_path: PathBuf,
    pub artifacts: Artifacts,
}

pub fn run_pipeline(config: &RunConfig) -> std::result::Result<PipelineOutput, StageError> {
    run_pipeline_with(config, &Toolchain::discover())
}

pub fn run_pipeline_with(config: &RunConfig, toolchain: &Toolchain) -> std::result::Result<PipelineOutput, StageError> {
    config.validate().at(Stage::Config, None)?;
    let art = Artifacts { dir: config.out_dir.clone(), digest: config.digest().at(Stage::Config, None)?, seed: config.seed };
    std::fs::create_dir_all(&art.dir).map_err(|e| Error::io(&art.dir, e)).at(Stage::Config, Some(&art.dir))?;
    let prompts = config.prompts().at(Stage::Config, None)?;
    let limits = config.limits;
    let kind = config.task.kind;

    let corpus_path = art.path("corpus", "jsonl");
    let corpus: Vec<CodeObject> = cached(&corpus_path, || {
        let ing = ingest(&config.datasets, config.harness.compile_check, toolchain, &limits)?;
        jsonl::write(art.path("rejections", "jsonl"), &ing.rejected)?;
        write_log(&art.path("ingest-errors", "log"), &ing.load_errors)?;
        Ok(ing.kept)
    })
    .at(Stage::Ingest, Some(&corpus_path))?;

    let mut report = MetricsReport::new(format!("{}-{}", art.digest, art.seed), metadata(config, &art, toolchain));
    report.model_id = Some(config.model.id.clone());
    let main_template = config.template(&prompts, kind).at(Stage::Tasks, None)?;
    report.template_id = Some(main_template.id.clone());

    match kind {
        TaskKind::MorphismIdentification => {
            let variants_path = art.path("variants", "jsonl");
            let variants: Vec<Variant> = cached(&variants_path, || {
                let engine = MorphismEngine { config: config.morph.clone() };
                let set = pairgen::sample_variants(&morphable(&corpus), &engine, &config.pairs, config.seed)?;
                write_log(&art.path("morph-notes", "log"), &set.notes)?;
                Ok(set.variants)
            })
            .at(Stage::Morph, Some(&variants_path))?;

            let pairs_path = art.path("pairs", "jsonl");
            let pairs: Vec<EvalPair> = cached(&pairs_path, || {
                let mut local = pairgen::pairs_from_variants(&morphable(&corpus), &variants, &config.pairs, config.seed)?;
                let contest: Vec<CodeObject> = corpus.iter().filter(|o| o.dataset == DatasetName::CodeContest).cloned().collect();
                let global = pairgen::build_global_pairs(&contest, &config.pairs, config.seed);
                local.pairs.extend(global.pairs);
                local.notes.extend(global.notes);
                write_log(&art.path("availability", "log"), &local.notes)?;
                let mut pairs = local.pairs;
                if config.harness.flag_distinguishing {
                    let runner = HarnessRunner { toolchain: toolchain.clone(), limits };
                    pairs = pairgen::flag_distinguishing_tests(pairs, &runner, config.harness.parallelism);
                }
                Ok(pairs)
            })
            .at(Stage::Pairs, Some(&pairs_path))?;

            let tasks_path = art.path("tasks", "jsonl");
            let tasks =
                cached(&tasks_path, || taskgen::build_identification_tasks(&pairs, &main_template)).at(Stage::Tasks, Some(&tasks_path))?;

            let sides: Vec<CodeObject> = pairs.iter().flat_map(|p| [p.left.clone(), p.right.clone()]).collect();
            let responses = run_stage(config, &art, "responses", &tasks, &sides, &corpus, toolchain)?;

            let verdicts_path = art.path("verdicts", "jsonl");
            let verdicts: Vec<Verdict> = cached(&verdicts_path, || Ok(responses.iter().map(harness::extract_boolean_verdict).collect()))
                .at(Stage::Score, Some(&verdicts_path))?;
            let score = metrics::score_verdicts(&pairs, &verdicts).at(Stage::Score, Some(&verdicts_path))?;
            report = report.with_pairing(score);
        }
        TaskKind::Translation | TaskKind::Explanation => {
            let src = config.task.source.expect("validated");
            let dst = config.task.target.unwrap_or(src);
            let (sources, notes) = translation_sources(&corpus, src, dst);

            let tasks_path = art.path("tasks", "jsonl");
            let tasks = cached(&tasks_path, || {
                write_log(&art.path("task-notes", "log"), &notes)?;
                match kind {
                    TaskKind::Translation => taskgen::build_translation_tasks(&sources, src, dst, &main_template),
                    _ => taskgen::build_explanation_tasks(&sources, &main_template),
                }
            })
            .at(Stage::Tasks, Some(&tasks_path))?;
            let mut responses = run_stage(config, &art, "responses", &tasks, &sources, &corpus, toolchain)?;
            let mut gaps: Vec<String> = Vec::new();

            if kind == TaskKind::Explanation {
                let tpl = config.template(&prompts, TaskKind::Reproduction).at(Stage::Tasks, None)?;
                let explanations: Vec<(String, String)> = responses
                    .iter()
                    .filter(|r| r.status == ResponseStatus::Ok && !r.raw_text.trim().is_empty())
                    .filter_map(|r| r.task_id.strip_prefix("explain:").map(|t| (t.to_string(), r.raw_text.clone())))
                    .collect();
                let repro_path = art.path("tasks-reproduce", "jsonl");
                let repro_tasks = cached(&repro_path, || {
                    let (tasks, notes) = taskgen::build_reproduction_tasks(&explanations, dst, &tpl)?;
                    write_log(&art.path("reproduce-notes", "log"), &notes)?;
                    Ok(tasks)
                })
                .at(Stage::Tasks, Some(&repro_path))?;
                responses = run_stage(config, &art, "responses-reproduce", &repro_tasks, &sources, &corpus, toolchain)?;
                // Explanations that never arrived count as failed reproductions.
                let expected: Vec<String> = sources.iter().map(|o| o.task_id.clone()).collect();
                for missing in taskgen::missing_explanations(&expected, &explanations) {
                    gaps.push(format!("reproduce:{missing}:{}", dst.tag()));
                }
            }

            let outcomes_path = art.path("outcomes", "jsonl");
            let mut outcomes: Vec<ExecutionOutcome> = cached(&outcomes_path, || {
                let requests = exec_requests(&responses, &corpus)?;
                harness::execute_batch(&requests, &limits, toolchain, config.harness.parallelism)
            })
            .at(Stage::Exec, Some(&outcomes_path))?;
            outcomes.extend(gaps.iter().map(|id| ExecutionOutcome::extraction_failure(id)));
            let group = format!("{}:{}->{}", dataset_label(&config.datasets), src.tag(), dst.tag());
            report.execution.push(metrics::score_outcomes(&group, &outcomes));
        }
        TaskKind::Reproduction => unreachable!("rejected by validate"),
    }

    let report_path = art.path("report", "json");
    let write = || -> Result<()> {
        let json = report.to_json()?;
        std::fs::write(&report_path, json).map_err(|e| Error::io(&report_path, e))?;
        let csv_path = art.path("report", "csv");
        std::fs::write(&csv_path, report.to_csv()?).map_err(|e| Error::io(&csv_path, e))
    };
    write().at(Stage::Report, Some(&report_path))?;
    Ok(PipelineOutput { report, report_path, artifacts: art })
}

fn run_stage(
    config: &RunConfig,
    art: &Artifacts,
    name: &str,
    tasks: &[TaskInstance],
    objects: &[CodeObject],
    corpus: &[CodeObject],
    toolchain: &Toolchain,
) -> std::result::Result<Vec<ModelResponse>, StageError> {
    let path = art.path(name, "jsonl");
    cached(&path, || {
        let backend = backend(&config.model, objects, corpus, toolchain, &config.limits)?;
        let journal = art.path(&format!("{name}-journal"), "jsonl");
        modelgw::dispatch_blocking(tasks, &config.model, backend, Some(&journal))
    })
    .at(Stage::Run, Some(&path))
}

fn dataset_label(entries: &[DatasetEntry]) -> String {
    let mut names: Vec<&str> = entries.iter().filter(|d| d.name != DatasetName::CodeContest).map(|d| d.name.tag()).collect();
    names.dedup();
    names.join("+")
}

fn metadata(config: &RunConfig, art: &Artifacts, toolchain: &Toolchain) -> RunMetadata {
    let mut m = RunMetadata::new();
    m.seed = Some(config.seed);
    m.config_digest = Some(art.digest.clone());
    m.model_digest = Some(config.model.digest());
    m.template_ids = match config.task.kind {
        TaskKind::Explanation => config
            .prompts()
            .ok()
            .map(|p| {
                [TaskKind::Explanation, TaskKind::Reproduction]
                    .into_iter()
                    .filter_map(|k| config.template(&p, k).ok().map(|t| t.id))
                    .collect()
            })
            .unwrap_or_default(),
        k => config.task.template.clone().map_or_else(
            || config.prompts().ok().and_then(|p| p.default_for(k).ok().map(|t| vec![t.id.clone()])).unwrap_or_default(),
            |t| vec![t],
        ),
    };
    for tool in harness::doctor(toolchain).tools {
        if let Some(v) = tool.version {
            m.toolchain.insert(tool.tool, v);
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixtures() -> PathBuf {
        Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
    }

    fn config(dir: &Path, body: &str) -> RunConfig {
        let text = format!("seed = 7\nout_dir = \"{}\"\n{body}", dir.display());
        RunConfig::parse(&text).unwrap()
    }

    #[test]
    fn exit_codes_are_distinct() {
        let all = [
            Stage::Config,
            Stage::Ingest,
            Stage::Morph,
            Stage::Pairs,
            Stage::Tasks,
            Stage::Run,
            Stage::Exec,
            Stage::Score,
            Stage::Report,
            Stage::Doctor,
        ];
        let codes: HashSet<i32> = all.iter().map(|s| s.exit_code()).collect();
        assert_eq!(codes.len(), all.len());
        assert!(!codes.contains(&0) && !codes.contains(&1));
    }

    #[test]
    fn config_rejects_unknown_fields_and_missing_seed() {
        assert!(RunConfig::parse("out_dir = \"x\"\n[task]\nkind = \"translation\"\n").is_err());
        let dir = tempfile::tempdir().unwrap();
        let bad = format!(
            "seed = 1\nout_dir = \"{}\"\ncolour = \"red\"\n[task]\nkind = \"translation\"\n[model]\nid = \"m\"\nadapter = \"stub_identity\"\n",
            dir.path().display()
        );
        assert!(RunConfig::parse(&bad).is_err());
    }

    #[test]
    fn identification_runs_offline_and_resumes_identically() {
        let dir = tempfile::tempdir().unwrap();
        let f = fixtures();
        let cfg = config(
            dir.path(),
            &format!(
                r#"
[[dataset]]
name = "humaneval-x"
language = "java"
path = "{}"

[task]
kind = "identification"

[model]
id = "always-true"
adapter = "stub_constant_true"

[harness]
compile_check = "syntax_only"
"#,
                f.join("humaneval-x/java.jsonl").display()
            ),
        );
        let first = run_pipeline_with(&cfg, &Toolchain::default()).unwrap();
        let pairing = first.report.pairing.as_ref().unwrap();
        assert_eq!(pairing.overall.precision_eq.value, Some(1.0));
        assert_eq!(pairing.overall.precision_neq.value, Some(0.0));
        let bytes = std::fs::read(&first.report_path).unwrap();

        // Drop the later artifacts and rerun: the earlier ones are reused and
        // the report comes out the same.
        std::fs::remove_file(first.artifacts.path("verdicts", "jsonl")).unwrap();
        std::fs::remove_file(&first.report_path).unwrap();
        let second = run_pipeline_with(&cfg, &Toolchain::default()).unwrap();
        assert_eq!(std::fs::read(&second.report_path).unwrap(), bytes);
    }

    #[test]
    fn identity_translation_passes_on_canonical_solutions() {
        let tools = Toolchain { python: Toolchain::discover().python, ..Toolchain::default() };
        if tools.python.is_none() {
            eprintln!("python not installed; skipping");
            return;
        }
        let dir = tempfile::tempdir().unwrap();
        let cfg = config(
            dir.path(),
            &format!(
                "[[dataset]]\nname = \"humaneval-x\"\nlanguage = \"python\"\npath = \"{}\"\n\
                 [task]\nkind = \"translate\"\nsource = \"python\"\ntarget = \"python\"\n\
                 [model]\nid = \"echo\"\nadapter = \"stub_identity\"\n[harness]\ncompile_check = \"toolchain\"\n",
                fixtures().join("humaneval-x/python.jsonl").display()
            ),
        );
        let out = run_pipeline_with(&cfg, &tools).unwrap();
        let exec = &out.report.execution[0];
        assert!(exec.pass_at_1.den > 0);
        assert_eq!(exec.pass_at_1.value, Some(1.0), "{:?}", exec.failures);
    }

    #[test]
    fn missing_toolchain_fails_ingest() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = config(
            dir.path(),
            &format!(
                "[[dataset]]\nname = \"humaneval-x\"\nlanguage = \"java\"\npath = \"{}\"\n[task]\nkind = \"identification\"\n[model]\nid = \"t\"\nadapter = \"stub_constant_true\"\n",
                fixtures().join("humaneval-x/java.jsonl").display()
            ),
        );
        let err = run_pipeline_with(&cfg, &Toolchain::default()).err().expect("no javac");
        assert_eq!(err.stage, Stage::Ingest);
        assert!(err.artifact.unwrap().to_string_lossy().contains("corpus-"));
    }
}
