use std::path::{Path, PathBuf};
use std::process::ExitCode;

use catcode::corpus::{CodeObject, DatasetName};
use catcode::harness::{self, ExecutionOutcome, HarnessRunner, Limits, Toolchain, Verdict};
use catcode::jsonl;
use catcode::metrics::{self, MetricsReport, RunMetadata};
use catcode::modelgw::{self, Adapter, ModelResponse, ModelSpec};
use catcode::morphism::{self, MorphismEngine};
use catcode::pairgen::{self, EvalPair, PairConfig, Variant};
use catcode::pipeline::{self, CompileMode, DatasetEntry, Stage};
use catcode::taskgen::{self, PromptSet, TaskInstance, TaskKind};
use catcode::{Error, Language};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "catcode", version, about = "Morphism, functor and execution tests for code models")]
struct Cli {
    /// Log filter, e.g. `info` or `catcode=debug`.
    #[arg(long, global = true, default_value = "warn", env = "CATCODE_LOG")]
    log: String,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load and filter a dataset into a corpus file.
    Ingest(IngestArgs),
    /// Apply morphisms to corpus objects.
    Morph(MorphArgs),
    /// Build labeled pairs from a corpus and its variants.
    Pairs(PairsArgs),
    /// Render prompts into task records.
    Tasks(TasksArgs),
    /// Send tasks to a model.
    Run(RunArgs),
    /// Compile and test code returned by a model.
    Exec(ExecArgs),
    /// Turn verdicts or execution outcomes into a report.
    Score(ScoreArgs),
    /// Print a stored report.
    Report(ReportArgs),
    /// Check which toolchains are installed.
    Doctor(DoctorArgs),
    /// Run every stage from one configuration file.
    Pipeline(PipelineArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum CompileArg {
    Toolchain,
    SyntaxOnly,
    Off,
}

impl From<CompileArg> for CompileMode {
    fn from(c: CompileArg) -> Self {
        match c {
            CompileArg::Toolchain => CompileMode::Toolchain,
            CompileArg::SyntaxOnly => CompileMode::SyntaxOnly,
            CompileArg::Off => CompileMode::Off,
        }
    }
}

#[derive(Args)]
struct IngestArgs {
    #[arg(long)]
    dataset: DatasetName,
    #[arg(long, default_value = "java")]
    language: Language,
    #[arg(long)]
    path: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Rejection log; defaults to `<out>.rejections.jsonl`.
    #[arg(long)]
    rejections: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "toolchain")]
    compile: CompileArg,
}

#[derive(Args)]
struct MorphArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Apply this chain (e.g. `VR,US`) to every object instead of sampling.
    #[arg(long)]
    kinds: Option<String>,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    /// Write the site inventory per object and kind instead of variants.
    #[arg(long)]
    list_sites: bool,
    #[arg(long, default_value_t = 2)]
    eq: usize,
    #[arg(long, default_value_t = 1)]
    neq: usize,
}

#[derive(Args)]
struct PairsArgs {
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long)]
    variants: Option<PathBuf>,
    #[arg(long)]
    contest: Option<PathBuf>,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    /// Also emit distance-two nonequivalent pairs.
    #[arg(long)]
    neq_distance_two: bool,
    /// Run both sides of each pair against the tests.
    #[arg(long)]
    flag_tests: bool,
    #[arg(long, default_value_t = 4)]
    parallel: usize,
}

#[derive(Args)]
struct TasksArgs {
    #[arg(long)]
    kind: TaskKind,
    #[arg(long)]
    src: Option<Language>,
    #[arg(long)]
    dst: Option<Language>,
    #[arg(long)]
    template: Option<String>,
    /// Prompt file to use instead of the built-in templates.
    #[arg(long)]
    prompts: Option<PathBuf>,
    /// Corpus, for translation and explanation.
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// Pairs, for identification.
    #[arg(long)]
    pairs: Option<PathBuf>,
    /// Explanation responses, for reproduction.
    #[arg(long)]
    explanations: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    tasks: PathBuf,
    /// Model id recorded with every response.
    #[arg(long)]
    model: String,
    /// Full model spec (TOML); the flags below override its fields.
    #[arg(long)]
    model_config: Option<PathBuf>,
    #[arg(long, value_enum)]
    adapter: Option<AdapterArg>,
    #[arg(long)]
    endpoint: Option<String>,
    #[arg(long)]
    model_name: Option<String>,
    #[arg(long)]
    parallel: Option<usize>,
    #[arg(long)]
    api_key_env: Option<String>,
    #[arg(long)]
    out: PathBuf,
    /// Append-only journal; defaults to `<out>.journal`.
    #[arg(long)]
    journal: Option<PathBuf>,
    /// Objects the execution oracle may be asked about.
    #[arg(long)]
    corpus: Option<PathBuf>,
    #[arg(long)]
    pairs: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum AdapterArg {
    ChatHttp,
    CompletionHttp,
    StubIdentity,
    StubConstantTrue,
    StubExecutionOracle,
}

impl From<AdapterArg> for Adapter {
    fn from(a: AdapterArg) -> Self {
        match a {
            AdapterArg::ChatHttp => Adapter::ChatHttp,
            AdapterArg::CompletionHttp => Adapter::CompletionHttp,
            AdapterArg::StubIdentity => Adapter::StubIdentity,
            AdapterArg::StubConstantTrue => Adapter::StubConstantTrue,
            AdapterArg::StubExecutionOracle => Adapter::StubExecutionOracle,
        }
    }
}

#[derive(Args)]
struct ExecArgs {
    /// Model responses to translation or reproduction tasks.
    #[arg(long)]
    candidates: PathBuf,
    #[arg(long)]
    corpus: PathBuf,
    /// `default` or a TOML file with limit fields.
    #[arg(long, default_value = "default")]
    limits: String,
    #[arg(long, default_value_t = 4)]
    parallel: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ScoreArgs {
    #[arg(long)]
    pairs: Option<PathBuf>,
    /// Extracted verdict records.
    #[arg(long, conflicts_with = "responses")]
    verdicts: Option<PathBuf>,
    /// Raw identification responses; verdicts are extracted first.
    #[arg(long)]
    responses: Option<PathBuf>,
    #[arg(long)]
    outcomes: Option<PathBuf>,
    /// Label of the outcome group, e.g. `humaneval-x:java->python`.
    #[arg(long, default_value = "all")]
    group: String,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args)]
struct ReportArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct DoctorArgs {
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct PipelineArgs {
    #[arg(long)]
    config: PathBuf,
}

struct Failure {
    stage: Stage,
    error: Box<dyn std::error::Error>,
}

trait At<T> {
    fn at(self, stage: Stage) -> Result<T, Failure>;
}

impl<T, E: std::error::Error + 'static> At<T> for Result<T, E> {
    fn at(self, stage: Stage) -> Result<T, Failure> {
        self.map_err(|e| Failure { stage, error: Box::new(e) })
    }
}

fn config_error(msg: impl Into<String>) -> Failure {
    Failure { stage: Stage::Config, error: Box::new(Error::Config(msg.into())) }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    tracing_subscriber::fmt()
        .with_env_filter(tracing_subscriber::EnvFilter::try_new(&cli.log).unwrap_or_else(|_| "warn".into()))
        .with_writer(std::io::stderr)
        .init();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let message = f.error.to_string();
            eprintln!("catcode: {} failed: {message}", f.stage);
            let mut source = f.error.source();
            while let Some(s) = source {
                let cause = s.to_string();
                if !message.contains(&cause) {
                    eprintln!("  caused by: {cause}");
                }
                source = s.source();
            }
            ExitCode::from(f.stage.exit_code() as u8)
        }
    }
}

fn dispatch(command: Command) -> Result<(), Failure> {
    match command {
        Command::Ingest(a) => ingest(a),
        Command::Morph(a) => morph(a),
        Command::Pairs(a) => pairs(a),
        Command::Tasks(a) => tasks(a),
        Command::Run(a) => run(a),
        Command::Exec(a) => exec(a),
        Command::Score(a) => score(a),
        Command::Report(a) => report(a),
        Command::Doctor(a) => doctor(a),
        Command::Pipeline(a) => run_pipeline(a),
    }
}

fn sidecar(out: &Path, suffix: &str) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(suffix);
    PathBuf::from(name)
}

fn ingest(a: IngestArgs) -> Result<(), Failure> {
    let entry = DatasetEntry { name: a.dataset, language: a.language, path: a.path, split: None, missing_tests: None };
    let ing = pipeline::ingest(&[entry], a.compile.into(), &Toolchain::discover(), &Limits::default()).at(Stage::Ingest)?;
    jsonl::write(&a.out, &ing.kept).at(Stage::Ingest)?;
    let rejections = a.rejections.unwrap_or_else(|| sidecar(&a.out, ".rejections.jsonl"));
    jsonl::write(&rejections, &ing.rejected).at(Stage::Ingest)?;
    for e in &ing.load_errors {
        eprintln!("warning: {e}");
    }
    let problems: std::collections::BTreeSet<&str> = ing.kept.iter().map(|o| o.problem_id.as_str()).collect();
    println!("kept {} objects ({} problems), rejected {}", ing.kept.len(), problems.len(), ing.rejected.len());
    Ok(())
}

fn morph(a: MorphArgs) -> Result<(), Failure> {
    let corpus: Vec<CodeObject> = jsonl::read(&a.input).at(Stage::Morph)?;
    let objects = pipeline::morphable(&corpus);
    let engine = MorphismEngine::default();
    if a.list_sites {
        let mut rows = Vec::new();
        for o in &objects {
            for kind in morphism::MorphismKind::ALL {
                let sites = engine.enumerate_sites(&o.source, o.language, kind).at(Stage::Morph)?;
                if !sites.is_empty() {
                    let descriptors: Vec<&str> = sites.iter().map(|s| s.descriptor.as_str()).collect();
                    rows.push(serde_json::json!({ "task_id": o.task_id, "kind": kind, "sites": descriptors }));
                }
            }
        }
        jsonl::write(&a.out, &rows).at(Stage::Morph)?;
        println!("{} (object, kind) entries", rows.len());
        return Ok(());
    }
    let variants: Vec<Variant> = match &a.kinds {
        Some(list) => {
            let kinds = morphism::parse_kind_list(list).at(Stage::Config)?;
            let mut out = Vec::new();
            for o in &objects {
                match engine.apply_chain(&o.source, &kinds, a.seed) {
                    Ok((source, chain)) => out.push(Variant {
                        original: o.task_id.clone(),
                        label: chain.label.into(),
                        object: o.variant(source, &chain),
                        chain,
                    }),
                    Err(e @ (Error::InapplicableKind { .. } | Error::RewriteFailure { .. })) => {
                        eprintln!("{}: {e}", o.task_id)
                    }
                    Err(e) => return Err(e).at(Stage::Morph),
                }
            }
            out
        }
        None => {
            let config = PairConfig { eq_per_object: a.eq, neq_per_object: a.neq, ..PairConfig::default() };
            let set = pairgen::sample_variants(&objects, &engine, &config, a.seed).at(Stage::Morph)?;
            for n in &set.notes {
                eprintln!("{n}");
            }
            set.variants
        }
    };
    jsonl::write(&a.out, &variants).at(Stage::Morph)?;
    println!("{} variants from {} objects", variants.len(), objects.len());
    Ok(())
}

fn pairs(a: PairsArgs) -> Result<(), Failure> {
    let config = PairConfig { neq_distance_two: a.neq_distance_two, ..PairConfig::default() };
    let corpus: Vec<CodeObject> = jsonl::read(&a.corpus).at(Stage::Pairs)?;
    let mut set = match &a.variants {
        Some(v) => {
            let variants: Vec<Variant> = jsonl::read(v).at(Stage::Pairs)?;
            pairgen::pairs_from_variants(&pipeline::morphable(&corpus), &variants, &config, a.seed).at(Stage::Pairs)?
        }
        None => pairgen::PairSet::default(),
    };
    if let Some(c) = &a.contest {
        let contest: Vec<CodeObject> = jsonl::read(c).at(Stage::Pairs)?;
        let global = pairgen::build_global_pairs(&contest, &config, a.seed);
        set.pairs.extend(global.pairs);
        set.notes.extend(global.notes);
    }
    let mut pairs = set.pairs;
    if a.flag_tests {
        let runner = HarnessRunner { toolchain: Toolchain::discover(), limits: Limits::default() };
        pairs = pairgen::flag_distinguishing_tests(pairs, &runner, a.parallel);
    }
    jsonl::write(&a.out, &pairs).at(Stage::Pairs)?;
    let log = sidecar(&a.out, ".availability.log");
    std::fs::write(&log, set.notes.join("\n")).map_err(|e| Error::Io { path: log.clone(), source: e }).at(Stage::Pairs)?;
    let eq = pairs.iter().filter(|p| p.label == pairgen::EqLabel::Equivalent).count();
    println!("{} pairs ({eq} eq, {} neq); availability log {}", pairs.len(), pairs.len() - eq, log.display());
    Ok(())
}

fn need<T: Clone>(value: &Option<T>, flag: &str) -> Result<T, Failure> {
    value.clone().ok_or_else(|| config_error(format!("--{flag} is required for this task kind")))
}

fn tasks(a: TasksArgs) -> Result<(), Failure> {
    let prompts = match &a.prompts {
        Some(p) => PromptSet::load(p).at(Stage::Config)?,
        None => PromptSet::builtin(),
    };
    let tpl = match &a.template {
        Some(id) => prompts.get(id).at(Stage::Config)?,
        None => prompts.default_for(a.kind).at(Stage::Config)?,
    };
    let out: Vec<TaskInstance> = match a.kind {
        TaskKind::MorphismIdentification => {
            let pairs: Vec<EvalPair> = jsonl::read(need(&a.pairs, "pairs")?).at(Stage::Tasks)?;
            taskgen::build_identification_tasks(&pairs, tpl).at(Stage::Tasks)?
        }
        TaskKind::Translation | TaskKind::Explanation => {
            let src = need(&a.src, "src")?;
            let dst = a.dst.unwrap_or(src);
            let corpus: Vec<CodeObject> = jsonl::read(need(&a.corpus, "corpus")?).at(Stage::Tasks)?;
            let (sources, notes) = pipeline::translation_sources(&corpus, src, dst);
            for n in &notes {
                eprintln!("{n}");
            }
            if a.kind == TaskKind::Translation {
                taskgen::build_translation_tasks(&sources, src, dst, tpl).at(Stage::Tasks)?
            } else {
                taskgen::build_explanation_tasks(&sources, tpl).at(Stage::Tasks)?
            }
        }
        TaskKind::Reproduction => {
            let dst = need(&a.dst, "dst")?;
            let responses: Vec<ModelResponse> = jsonl::read(need(&a.explanations, "explanations")?).at(Stage::Tasks)?;
            let explanations: Vec<(String, String)> = responses
                .iter()
                .filter(|r| r.status == modelgw::ResponseStatus::Ok)
                .filter_map(|r| r.task_id.strip_prefix("explain:").map(|t| (t.to_string(), r.raw_text.clone())))
                .collect();
            let (tasks, notes) = taskgen::build_reproduction_tasks(&explanations, dst, tpl).at(Stage::Tasks)?;
            for n in &notes {
                eprintln!("{n}");
            }
            tasks
        }
    };
    jsonl::write(&a.out, &out).at(Stage::Tasks)?;
    println!("{} tasks with template {}", out.len(), tpl.id);
    Ok(())
}

fn run(a: RunArgs) -> Result<(), Failure> {
    let mut spec = match &a.model_config {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| Error::Io { path: p.clone(), source: e }).at(Stage::Config)?;
            catcode::pipeline::parse_model_spec(&text).at(Stage::Config)?
        }
        None => {
            let adapter = a.adapter.ok_or_else(|| config_error("--adapter or --model-config is required"))?;
            ModelSpec::stub(adapter.into())
        }
    };
    spec.id = a.model.clone();
    if let Some(x) = a.adapter {
        spec.adapter = x.into();
    }
    if a.endpoint.is_some() {
        spec.endpoint = a.endpoint.clone();
    }
    if a.model_name.is_some() {
        spec.model_name = a.model_name.clone();
    }
    if let Some(p) = a.parallel {
        spec.parallelism = p;
    }
    if let Some(k) = &a.api_key_env {
        spec.api_key_env = k.clone();
    }
    spec.validate().at(Stage::Config)?;

    let tasks: Vec<TaskInstance> = jsonl::read(&a.tasks).at(Stage::Run)?;
    let corpus: Vec<CodeObject> = match &a.corpus {
        Some(p) => jsonl::read(p).at(Stage::Run)?,
        None => Vec::new(),
    };
    let mut objects = corpus.clone();
    if let Some(p) = &a.pairs {
        let pairs: Vec<EvalPair> = jsonl::read(p).at(Stage::Run)?;
        objects.extend(pairs.into_iter().flat_map(|p| [p.left, p.right]));
    }
    let toolchain = Toolchain::discover();
    let backend = pipeline::backend(&spec, &objects, &corpus, &toolchain, &Limits::default()).at(Stage::Run)?;
    let journal = a.journal.unwrap_or_else(|| sidecar(&a.out, ".journal"));
    let responses = modelgw::dispatch_blocking(&tasks, &spec, backend, Some(&journal)).at(Stage::Run)?;
    jsonl::write(&a.out, &responses).at(Stage::Run)?;
    let failed = responses.iter().filter(|r| r.status != modelgw::ResponseStatus::Ok).count();
    println!("{} responses, {failed} failed after retries", responses.len());
    Ok(())
}

fn exec(a: ExecArgs) -> Result<(), Failure> {
    let limits = match a.limits.as_str() {
        "default" => Limits::default(),
        path => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Io { path: path.into(), source: e }).at(Stage::Config)?;
            catcode::pipeline::parse_limits(&text).at(Stage::Config)?
        }
    };
    let responses: Vec<ModelResponse> = jsonl::read(&a.candidates).at(Stage::Exec)?;
    let corpus: Vec<CodeObject> = jsonl::read(&a.corpus).at(Stage::Exec)?;
    let requests = pipeline::exec_requests(&responses, &corpus).at(Stage::Exec)?;
    let outcomes = harness::execute_batch(&requests, &limits, &Toolchain::discover(), a.parallel).at(Stage::Exec)?;
    jsonl::write(&a.out, &outcomes).at(Stage::Exec)?;
    println!("pass@1 {}", metrics::pass_at_1(&outcomes));
    Ok(())
}

fn score(a: ScoreArgs) -> Result<(), Failure> {
    let mut report =
        MetricsReport::new(a.out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default(), RunMetadata::new());
    if let Some(p) = &a.pairs {
        let pairs: Vec<EvalPair> = jsonl::read(p).at(Stage::Score)?;
        let verdicts: Vec<Verdict> = match (&a.verdicts, &a.responses) {
            (Some(v), _) => jsonl::read(v).at(Stage::Score)?,
            (None, Some(r)) => {
                let responses: Vec<ModelResponse> = jsonl::read(r).at(Stage::Score)?;
                responses.iter().map(harness::extract_boolean_verdict).collect()
            }
            (None, None) => return Err(config_error("--pairs needs --verdicts or --responses")),
        };
        report = report.with_pairing(metrics::score_verdicts(&pairs, &verdicts).at(Stage::Score)?);
    }
    if let Some(o) = &a.outcomes {
        let outcomes: Vec<ExecutionOutcome> = jsonl::read(o).at(Stage::Score)?;
        report.execution.push(metrics::score_outcomes(&a.group, &outcomes));
    }
    if report.pairing.is_none() && report.execution.is_empty() {
        return Err(config_error("nothing to score: pass --pairs or --outcomes"));
    }
    let json = report.to_json().at(Stage::Score)?;
    std::fs::write(&a.out, json).map_err(|e| Error::Io { path: a.out.clone(), source: e }).at(Stage::Score)?;
    print!("{}", render_text(&report));
    Ok(())
}

fn render_text(r: &MetricsReport) -> String {
    let mut out = format!("run {}\n", r.run_id);
    if let Some(p) = &r.pairing {
        out += &format!(
            "precision(eq)  {}\nprecision(neq) {}\nunparseable    {}\n",
            p.overall.precision_eq, p.overall.precision_neq, p.unparseable
        );
        for n in &p.by_distance_label {
            out += &format!("  {:<12} {}\n", n.name, n.ratio);
        }
        for m in &p.by_morphism {
            out += &format!("  {:<12} {:<4} {}\n", m.combination, m.label.tag(), m.precision);
        }
    }
    for e in &r.execution {
        out += &format!("pass@1 {} {}\n", e.group, e.pass_at_1);
        for f in &e.failures {
            out += &format!("  {:<28} {}\n", f.failure_type, f.count);
        }
    }
    out
}

fn report(a: ReportArgs) -> Result<(), Failure> {
    let text = std::fs::read_to_string(&a.input).map_err(|e| Error::Io { path: a.input.clone(), source: e }).at(Stage::Report)?;
    let r = MetricsReport::from_json(&text).at(Stage::Report)?;
    match a.format {
        Format::Json => print!("{}", r.to_json().at(Stage::Report)?),
        Format::Csv => print!("{}", r.to_csv().at(Stage::Report)?),
        Format::Text => print!("{}", render_text(&r)),
    }
    Ok(())
}

fn doctor(a: DoctorArgs) -> Result<(), Failure> {
    let report = harness::doctor(&Toolchain::discover());
    if a.json {
        println!("{}", serde_json::to_string_pretty(&report).at(Stage::Doctor)?);
    } else {
        println!("{}", report.render());
        let ready: Vec<&str> = report.ready.iter().map(|l| l.tag()).collect();
        println!("ready: {}", if ready.is_empty() { "none".into() } else { ready.join(", ") });
    }
    if report.all_ok() {
        Ok(())
    } else {
        Err(Failure { stage: Stage::Doctor, error: Box::new(Error::Environment("some toolchains are missing".into())) })
    }
}

fn run_pipeline(a: PipelineArgs) -> Result<(), Failure> {
    let config = pipeline::RunConfig::load(&a.config).at(Stage::Config)?;
    let out = pipeline::run_pipeline(&config).map_err(|e| Failure { stage: e.stage, error: Box::new(e) })?;
    print!("{}", render_text(&out.report));
    println!("report: {}", out.report_path.display());
    Ok(())
}
