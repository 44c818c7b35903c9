//! Model gateway.
//!
//! [`dispatch`] sends every task to a [`CompletionBackend`] with at most
//! `parallelism` requests in flight, retries transient failures with
//! exponential backoff, appends each finished response to an optional
//! journal, and returns exactly one response per task in input order. A task
//! already answered successfully in the journal is not sent again.
//!
//! Besides the two HTTP adapters there are three deterministic stubs for
//! offline runs: `stub_identity` echoes the embedded payload,
//! `stub_constant_true` always answers "True", and `stub_execution_oracle`
//! answers by running code (see [`ExecutionOracle`]).

use std::collections::{BTreeMap, HashMap};
use std::path::Path;
use std::sync::Arc;
use std::time::{Duration, Instant};

use async_trait::async_trait;
use futures::StreamExt;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use tokio::sync::Mutex;

use crate::corpus::CodeObject;
use crate::error::{Error, Result};
use crate::harness::{self, Limits, Toolchain};
use crate::jsonl;
use crate::lang::Language;
use crate::taskgen::{TaskInstance, TaskKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Adapter {
    ChatHttp,
    CompletionHttp,
    StubIdentity,
    StubConstantTrue,
    StubExecutionOracle,
}

impl Adapter {
    pub fn is_http(self) -> bool {
        matches!(self, Adapter::ChatHttp | Adapter::CompletionHttp)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct RetryPolicy {
    pub max_attempts: u32,
    pub backoff_ms: u64,
    pub max_backoff_ms: u64,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        RetryPolicy { max_attempts: 4, backoff_ms: 500, max_backoff_ms: 16_000 }
    }
}

impl RetryPolicy {
    fn delay(&self, attempt: u32) -> Duration {
        let factor = 1u64 << attempt.saturating_sub(1).min(16);
        Duration::from_millis(self.backoff_ms.saturating_mul(factor).min(self.max_backoff_ms))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub id: String,
    pub adapter: Adapter,
    #[serde(default)]
    pub endpoint: Option<String>,
    #[serde(default)]
    pub model_name: Option<String>,
    #[serde(default = "default_max_tokens")]
    pub max_tokens: u32,
    /// Extra request fields (temperature and the like), passed through as-is.
    #[serde(default)]
    pub params: BTreeMap<String, Value>,
    #[serde(default = "default_parallelism")]
    pub parallelism: usize,
    #[serde(default)]
    pub retry: RetryPolicy,
    /// Environment variable holding the API key.
    #[serde(default = "default_key_env")]
    pub api_key_env: String,
    #[serde(default = "default_request_timeout")]
    pub request_timeout_secs: u64,
}

fn default_max_tokens() -> u32 {
    500
}
fn default_parallelism() -> usize {
    4
}
fn default_key_env() -> String {
    "OPENAI_API_KEY".into()
}
fn default_request_timeout() -> u64 {
    120
}

impl ModelSpec {
    pub fn stub(adapter: Adapter) -> Self {
        let id = serde_json::to_value(adapter).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
        ModelSpec {
            id,
            adapter,
            endpoint: None,
            model_name: None,
            max_tokens: default_max_tokens(),
            params: BTreeMap::new(),
            parallelism: default_parallelism(),
            retry: RetryPolicy::default(),
            api_key_env: default_key_env(),
            request_timeout_secs: default_request_timeout(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.parallelism == 0 || self.max_tokens == 0 || self.retry.max_attempts == 0 {
            return Err(Error::Config(format!("model `{}`: parallelism, max_tokens and max_attempts must be positive", self.id)));
        }
        if self.adapter.is_http() && (self.endpoint.is_none() || self.model_name.is_none()) {
            return Err(Error::Config(format!("model `{}`: http adapters need endpoint and model_name", self.id)));
        }
        Ok(())
    }

    /// Stable digest of the configuration, recorded in reports.
    pub fn digest(&self) -> String {
        crate::morphism::digest(&serde_json::to_string(self).unwrap_or_default())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResponseStatus {
    Ok,
    ApiError,
    Timeout,
    RateLimitedExhausted,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelResponse {
    pub task_id: String,
    pub raw_text: String,
    pub latency_ms: u64,
    pub status: ResponseStatus,
    pub attempt_count: u32,
    #[serde(default)]
    pub model_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Result of one request attempt.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Attempt {
    Ok(String),
    /// Worth retrying: rate limits, server errors, timeouts.
    Transient {
        rate_limited: bool,
        timed_out: bool,
        detail: String,
    },
    /// Retrying cannot help, e.g. a malformed request.
    Fatal(String),
}

#[async_trait]
pub trait CompletionBackend: Send + Sync {
    async fn complete(&self, task: &TaskInstance) -> Attempt;
}

async fn run_one(task: &TaskInstance, spec: &ModelSpec, backend: &dyn CompletionBackend) -> ModelResponse {
    let started = Instant::now();
    let timeout = Duration::from_secs(spec.request_timeout_secs);
    let mut attempt = 0;
    let (status, raw_text, error) = loop {
        attempt += 1;
        let result = match tokio::time::timeout(timeout, backend.complete(task)).await {
            Ok(r) => r,
            Err(_) => Attempt::Transient { rate_limited: false, timed_out: true, detail: "request timed out".into() },
        };
        match result {
            Attempt::Ok(text) => break (ResponseStatus::Ok, text, None),
            Attempt::Fatal(detail) => break (ResponseStatus::ApiError, String::new(), Some(detail)),
            Attempt::Transient { rate_limited, timed_out, detail } => {
                if attempt >= spec.retry.max_attempts {
                    let status = if rate_limited {
                        ResponseStatus::RateLimitedExhausted
                    } else if timed_out {
                        ResponseStatus::Timeout
                    } else {
                        ResponseStatus::ApiError
                    };
                    break (status, String::new(), Some(detail));
                }
                tokio::time::sleep(spec.retry.delay(attempt)).await;
            }
        }
    };
    ModelResponse {
        task_id: task.id.clone(),
        raw_text,
        latency_ms: started.elapsed().as_millis() as u64,
        status,
        attempt_count: attempt,
        model_id: spec.id.clone(),
        error,
    }
}

/// Successful responses already in the journal, last record per task winning.
fn journaled(path: &Path) -> Result<HashMap<String, ModelResponse>> {
    if !path.exists() {
        return Ok(HashMap::new());
    }
    // A crash can leave a torn final line; it is simply redone.
    let (records, _torn): (Vec<ModelResponse>, _) = jsonl::read_lenient(path)?;
    Ok(records.into_iter().filter(|r| r.status == ResponseStatus::Ok).map(|r| (r.task_id.clone(), r)).collect())
}

pub async fn dispatch(
    tasks: &[TaskInstance],
    spec: &ModelSpec,
    backend: Arc<dyn CompletionBackend>,
    journal: Option<&Path>,
) -> Result<Vec<ModelResponse>> {
    spec.validate()?;
    let done = match journal {
        Some(p) => journaled(p)?,
        None => HashMap::new(),
    };
    let writer = match journal {
        Some(p) => Some(Arc::new(Mutex::new(jsonl::Appender::open(p)?))),
        None => None,
    };
    let mut slots: Vec<Option<ModelResponse>> = tasks.iter().map(|t| done.get(&t.id).cloned()).collect();
    let pending: Vec<usize> = (0..tasks.len()).filter(|&i| slots[i].is_none()).collect();

    let mut stream = futures::stream::iter(pending)
        .map(|i| {
            let backend = Arc::clone(&backend);
            let writer = writer.clone();
            async move {
                let resp = run_one(&tasks[i], spec, backend.as_ref()).await;
                if let Some(w) = writer {
                    w.lock().await.append(&resp)?;
                }
                Ok::<_, Error>((i, resp))
            }
        })
        .buffer_unordered(spec.parallelism);
    while let Some(item) = stream.next().await {
        let (i, resp) = item?;
        slots[i] = Some(resp);
    }
    Ok(slots.into_iter().map(|r| r.expect("every task answered")).collect())
}

/// Runs [`dispatch`] on a private multi-threaded runtime.
pub fn dispatch_blocking(
    tasks: &[TaskInstance],
    spec: &ModelSpec,
    backend: Arc<dyn CompletionBackend>,
    journal: Option<&Path>,
) -> Result<Vec<ModelResponse>> {
    let rt = tokio::runtime::Builder::new_multi_thread()
        .enable_all()
        .build()
        .map_err(|e| Error::Environment(format!("cannot start async runtime: {e}")))?;
    rt.block_on(dispatch(tasks, spec, backend, journal))
}

/// Chat- or completion-style HTTP endpoint.
pub struct HttpBackend {
    client: reqwest::Client,
    spec: ModelSpec,
    key: String,
}

impl HttpBackend {
    /// Fails when the credential variable is unset.
    pub fn new(spec: &ModelSpec) -> Result<Self> {
        spec.validate()?;
        let key = std::env::var(&spec.api_key_env).map_err(|_| Error::MissingCredential(spec.api_key_env.clone()))?;
        let client = reqwest::Client::builder().build().map_err(|e| Error::Environment(format!("http client: {e}")))?;
        Ok(HttpBackend { client, spec: spec.clone(), key })
    }

    fn body(&self, task: &TaskInstance) -> Value {
        let mut body = match self.spec.adapter {
            Adapter::CompletionHttp => {
                let prompt = if task.system.is_empty() {
                    task.rendered_input.clone()
                } else {
                    format!("{}\n\n{}", task.system, task.rendered_input)
                };
                json!({ "model": self.spec.model_name, "prompt": prompt, "max_tokens": self.spec.max_tokens })
            }
            _ => {
                let mut messages = Vec::new();
                if !task.system.is_empty() {
                    messages.push(json!({ "role": "system", "content": task.system }));
                }
                messages.push(json!({ "role": "user", "content": task.rendered_input }));
                json!({ "model": self.spec.model_name, "messages": messages, "max_tokens": self.spec.max_tokens })
            }
        };
        if let Some(obj) = body.as_object_mut() {
            for (k, v) in &self.spec.params {
                obj.insert(k.clone(), v.clone());
            }
        }
        body
    }

    fn text(&self, v: &Value) -> Option<String> {
        let choice = v.get("choices")?.get(0)?;
        let text = match self.spec.adapter {
            Adapter::CompletionHttp => choice.get("text")?,
            _ => choice.get("message")?.get("content")?,
        };
        // A null content (e.g. a refusal) is recorded as an empty answer.
        Some(text.as_str().unwrap_or_default().to_string())
    }
}

#[async_trait]
impl CompletionBackend for HttpBackend {
    async fn complete(&self, task: &TaskInstance) -> Attempt {
        let endpoint = self.spec.endpoint.as_deref().unwrap_or_default();
        let sent = self.client.post(endpoint).bearer_auth(&self.key).json(&self.body(task)).send().await;
        let resp = match sent {
            Ok(r) => r,
            Err(e) => return Attempt::Transient { rate_limited: false, timed_out: e.is_timeout(), detail: e.to_string() },
        };
        let status = resp.status();
        let body = resp.text().await.unwrap_or_default();
        if status.as_u16() == 429 {
            return Attempt::Transient { rate_limited: true, timed_out: false, detail: format!("429: {body}") };
        }
        if status.is_server_error() {
            return Attempt::Transient { rate_limited: false, timed_out: false, detail: format!("{status}: {body}") };
        }
        if !status.is_success() {
            return Attempt::Fatal(format!("{status}: {body}"));
        }
        match serde_json::from_str::<Value>(&body).ok().and_then(|v| self.text(&v)) {
            Some(text) => Attempt::Ok(text),
            None => Attempt::Fatal(format!("unexpected response body: {}", body.chars().take(200).collect::<String>())),
        }
    }
}

/// Echoes what it was given: the code for translation-like tasks (fenced),
/// the code itself as an "explanation", and both snippets for pairs.
pub struct StubIdentity;

#[async_trait]
impl CompletionBackend for StubIdentity {
    async fn complete(&self, task: &TaskInstance) -> Attempt {
        let first = task.payload.first().cloned().unwrap_or_default();
        Attempt::Ok(match task.kind {
            TaskKind::Translation | TaskKind::Reproduction => {
                let tag = task.target_language.map_or("", |l| l.tag());
                format!("```{tag}\n{}\n```", first.trim_end())
            }
            TaskKind::Explanation => first,
            TaskKind::MorphismIdentification => task.payload.join("\n\n"),
        })
    }
}

pub struct StubConstantTrue;

#[async_trait]
impl CompletionBackend for StubConstantTrue {
    async fn complete(&self, _task: &TaskInstance) -> Attempt {
        Attempt::Ok("True".into())
    }
}

/// Answers from ground truth obtained by execution.
///
/// Identification: both snippets are run against their suites; equal pass
/// vectors give "True", different ones "False". Translation and
/// reproduction: the dataset's canonical solution in the target language,
/// looked up by problem id. Explanation: the code itself.
pub struct ExecutionOracle {
    objects: HashMap<String, CodeObject>,
    canonical: HashMap<(String, Language), String>,
    toolchain: Toolchain,
    limits: Limits,
}

impl ExecutionOracle {
    /// `objects` must contain every object a task refers to; `canonical`
    /// supplies reference solutions in other languages.
    pub fn new(objects: &[CodeObject], canonical: &[CodeObject], toolchain: Toolchain, limits: Limits) -> Self {
        ExecutionOracle {
            objects: objects.iter().map(|o| (o.task_id.clone(), o.clone())).collect(),
            canonical: canonical.iter().map(|o| ((o.problem_id.clone(), o.language), o.source.clone())).collect(),
            toolchain,
            limits,
        }
    }

    /// Per-case outcomes for stdin/stdout suites, one overall bit otherwise.
    fn pass_vector(&self, obj: &CodeObject) -> Option<Vec<bool>> {
        if !obj.tests.present {
            return None;
        }
        let suites: Vec<_> = if obj.tests.is_stdio() {
            obj.tests
                .io_cases
                .iter()
                .map(|c| crate::corpus::TestSuite { io_cases: vec![c.clone()], case_count: 1, ..obj.tests.clone() })
                .collect()
        } else {
            vec![obj.tests.clone()]
        };
        suites
            .iter()
            .map(|s| {
                harness::run_execution_test(&obj.task_id, &obj.source, s, obj.language, &self.limits, &self.toolchain)
                    .ok()
                    .map(|o| o.passed())
            })
            .collect()
    }

    fn answer(&self, task: &TaskInstance) -> String {
        match task.kind {
            TaskKind::MorphismIdentification => {
                let sides: Option<Vec<&CodeObject>> = task.source_refs.iter().take(2).map(|id| self.objects.get(id)).collect();
                let vectors = sides.and_then(|s| Some((self.pass_vector(s.first()?)?, self.pass_vector(s.get(1)?)?)));
                match vectors {
                    Some((a, b)) if a == b => "True".into(),
                    Some(_) => "False".into(),
                    None => "Cannot decide: the code could not be executed.".into(),
                }
            }
            TaskKind::Explanation => task.payload.first().cloned().unwrap_or_default(),
            TaskKind::Translation | TaskKind::Reproduction => {
                let target = task.target_language;
                let problem = task.source_refs.first().and_then(|id| self.objects.get(id)).map(|o| o.problem_id.clone());
                match (problem, target) {
                    (Some(p), Some(lang)) => match self.canonical.get(&(p, lang)) {
                        Some(code) => format!("```{}\n{}\n```", lang.tag(), code.trim_end()),
                        None => "No reference solution is available.".into(),
                    },
                    _ => "No reference solution is available.".into(),
                }
            }
        }
    }
}

#[async_trait]
impl CompletionBackend for Arc<ExecutionOracle> {
    async fn complete(&self, task: &TaskInstance) -> Attempt {
        let me = Arc::clone(self);
        let task = task.clone();
        match tokio::task::spawn_blocking(move || me.answer(&task)).await {
            Ok(text) => Attempt::Ok(text),
            Err(e) => Attempt::Fatal(format!("oracle worker failed: {e}")),
        }
    }
}

/// Backend for a spec. The execution oracle needs context and is built
/// separately with [`ExecutionOracle::new`].
pub fn backend_for(spec: &ModelSpec) -> Result<Arc<dyn CompletionBackend>> {
    Ok(match spec.adapter {
        Adapter::ChatHttp | Adapter::CompletionHttp => Arc::new(HttpBackend::new(spec)?),
        Adapter::StubIdentity => Arc::new(StubIdentity),
        Adapter::StubConstantTrue => Arc::new(StubConstantTrue),
        Adapter::StubExecutionOracle => {
            return Err(Error::Config("stub_execution_oracle needs corpus context; build ExecutionOracle".into()))
        }
    })
}
