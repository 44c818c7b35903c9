//! Prompt selection and input construction.
//!
//! Templates live in a versioned TOML file ([`PromptSet`]); the default set
//! is compiled in. Rendering is a plain placeholder substitution, and every
//! rendered input starts with a `[task <id>]` line so distinct payloads never
//! collide.

use std::collections::{BTreeSet, HashMap};
use std::path::Path;
use std::sync::LazyLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::corpus::CodeObject;
use crate::error::{Error, Result};
use crate::lang::Language;
use crate::pairgen::EvalPair;

pub const DEFAULT_PROMPTS: &str = include_str!("../prompts/default.toml");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TaskKind {
    #[serde(alias = "identification", alias = "identify")]
    MorphismIdentification,
    #[serde(alias = "translate")]
    Translation,
    #[serde(alias = "explain")]
    Explanation,
    #[serde(alias = "reproduce")]
    Reproduction,
}

impl TaskKind {
    /// Placeholders a template of this kind must use, and may only use.
    pub fn placeholders(self) -> &'static [&'static str] {
        match self {
            TaskKind::MorphismIdentification => &["source_language", "code_a", "code_b"],
            TaskKind::Translation => &["source_language", "target_language", "code"],
            TaskKind::Explanation => &["source_language", "code"],
            TaskKind::Reproduction => &["target_language", "explanation"],
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            TaskKind::MorphismIdentification => "identify",
            TaskKind::Translation => "translate",
            TaskKind::Explanation => "explain",
            TaskKind::Reproduction => "reproduce",
        }
    }
}

impl std::str::FromStr for TaskKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "identify" | "identification" | "morphism_identification" => Ok(TaskKind::MorphismIdentification),
            "translate" | "translation" => Ok(TaskKind::Translation),
            "explain" | "explanation" => Ok(TaskKind::Explanation),
            "reproduce" | "reproduction" => Ok(TaskKind::Reproduction),
            _ => Err(Error::Config(format!("unknown task kind `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnswerProtocol {
    BooleanVerdict,
    CodeBlock,
    FreeText,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TaskPhase {
    Single,
    ExplainPhase,
    ReproducePhase,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PromptTemplate {
    pub id: String,
    #[serde(rename = "kind")]
    pub task_kind: TaskKind,
    pub template: String,
    #[serde(rename = "protocol")]
    pub answer_protocol: AnswerProtocol,
    /// System message sent alongside the rendered input.
    #[serde(default)]
    pub system: String,
}

static PLACEHOLDER: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"\{([A-Za-z_]+)\}").unwrap());

impl PromptTemplate {
    pub fn validate(&self) -> Result<()> {
        let used: BTreeSet<&str> = PLACEHOLDER.captures_iter(&self.template).map(|c| c.get(1).unwrap().as_str()).collect();
        let wanted: BTreeSet<&str> = self.task_kind.placeholders().iter().copied().collect();
        if used != wanted {
            return Err(Error::Config(format!(
                "template `{}` uses placeholders {used:?}, {:?} requires exactly {wanted:?}",
                self.id, self.task_kind
            )));
        }
        Ok(())
    }

    pub fn expect_kind(&self, kind: TaskKind) -> Result<()> {
        if self.task_kind != kind {
            return Err(Error::Config(format!("template `{}` is for {:?}, not {kind:?}", self.id, self.task_kind)));
        }
        self.validate()
    }

    /// Substitutes every placeholder in one pass, so substituted text is never
    /// scanned for further placeholders.
    pub fn render(&self, task_id: &str, values: &HashMap<&str, &str>) -> Result<String> {
        let mut missing = None;
        let body = PLACEHOLDER.replace_all(&self.template, |c: &regex::Captures<'_>| match values.get(&c[1]) {
            Some(v) => v.to_string(),
            None => {
                missing = Some(c[1].to_string());
                String::new()
            }
        });
        if let Some(m) = missing {
            return Err(Error::Config(format!("template `{}`: no value for `{{{m}}}`", self.id)));
        }
        Ok(format!("[task {task_id}]\n{}", body.trim()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PromptSet {
    pub version: u32,
    #[serde(rename = "template")]
    pub templates: Vec<PromptTemplate>,
}

impl PromptSet {
    pub fn parse(text: &str) -> Result<Self> {
        let set: PromptSet = toml::from_str(text).map_err(|e| Error::Config(format!("prompt file: {e}")))?;
        let mut ids = BTreeSet::new();
        for t in &set.templates {
            t.validate()?;
            if !ids.insert(t.id.as_str()) {
                return Err(Error::Config(format!("duplicate template id `{}`", t.id)));
            }
        }
        Ok(set)
    }

    pub fn builtin() -> Self {
        PromptSet::parse(DEFAULT_PROMPTS).expect("bundled prompt file is valid")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        PromptSet::parse(&text)
    }

    pub fn get(&self, id: &str) -> Result<&PromptTemplate> {
        self.templates.iter().find(|t| t.id == id).ok_or_else(|| Error::Config(format!("no prompt template `{id}`")))
    }

    /// First template of `kind`; the default set has exactly one per kind.
    pub fn default_for(&self, kind: TaskKind) -> Result<&PromptTemplate> {
        self.templates.iter().find(|t| t.task_kind == kind).ok_or_else(|| Error::Config(format!("no prompt template for {kind:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaskInstance {
    pub id: String,
    pub kind: TaskKind,
    pub rendered_input: String,
    #[serde(default)]
    pub system: String,
    /// Task ids of the code objects (and explain-phase task) this input uses.
    pub source_refs: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source_language: Option<Language>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_language: Option<Language>,
    pub expected: AnswerProtocol,
    pub phase: TaskPhase,
    pub template_id: String,
    /// The code snippets or explanation embedded in the input, in order.
    #[serde(default)]
    pub payload: Vec<String>,
}

fn instance(tpl: &PromptTemplate, id: String, rendered_input: String) -> TaskInstance {
    TaskInstance {
        id,
        kind: tpl.task_kind,
        rendered_input,
        system: tpl.system.clone(),
        source_refs: Vec::new(),
        source_language: None,
        target_language: None,
        expected: tpl.answer_protocol,
        phase: TaskPhase::Single,
        template_id: tpl.id.clone(),
        payload: Vec::new(),
    }
}

/// Source object id and target language encoded in a translation or
/// reproduction task id.
pub fn code_task_target(task_id: &str) -> Option<(&str, Language)> {
    let rest = task_id.strip_prefix("translate:").or_else(|| task_id.strip_prefix("reproduce:"))?;
    let (source, lang) = rest.rsplit_once(':')?;
    Some((source, lang.parse().ok()?))
}

pub fn identification_task_id(pair_id: &str) -> String {
    format!("identify:{pair_id}")
}

pub fn build_identification_tasks(pairs: &[EvalPair], tpl: &PromptTemplate) -> Result<Vec<TaskInstance>> {
    tpl.expect_kind(TaskKind::MorphismIdentification)?;
    pairs
        .iter()
        .map(|p| {
            let id = identification_task_id(&p.id);
            let lang = p.left.language.display_name();
            let values =
                HashMap::from([("source_language", lang), ("code_a", p.left.source.as_str()), ("code_b", p.right.source.as_str())]);
            let rendered = tpl.render(&id, &values)?;
            Ok(TaskInstance {
                source_refs: vec![p.left.task_id.clone(), p.right.task_id.clone()],
                source_language: Some(p.left.language),
                payload: vec![p.left.source.clone(), p.right.source.clone()],
                ..instance(tpl, id, rendered)
            })
        })
        .collect()
}

pub fn build_translation_tasks(corpus: &[CodeObject], src: Language, dst: Language, tpl: &PromptTemplate) -> Result<Vec<TaskInstance>> {
    tpl.expect_kind(TaskKind::Translation)?;
    corpus
        .iter()
        .map(|o| {
            if o.language != src {
                return Err(Error::Config(format!("{} is {}, expected {src}", o.task_id, o.language)));
            }
            let id = format!("translate:{}:{}", o.task_id, dst.tag());
            let values = HashMap::from([
                ("source_language", src.display_name()),
                ("target_language", dst.display_name()),
                ("code", o.source.as_str()),
            ]);
            let rendered = tpl.render(&id, &values)?;
            Ok(TaskInstance {
                source_refs: vec![o.task_id.clone()],
                source_language: Some(src),
                target_language: Some(dst),
                payload: vec![o.source.clone()],
                ..instance(tpl, id, rendered)
            })
        })
        .collect()
}

pub fn build_explanation_tasks(corpus: &[CodeObject], tpl: &PromptTemplate) -> Result<Vec<TaskInstance>> {
    tpl.expect_kind(TaskKind::Explanation)?;
    corpus
        .iter()
        .map(|o| {
            let id = format!("explain:{}", o.task_id);
            let values = HashMap::from([("source_language", o.language.display_name()), ("code", o.source.as_str())]);
            let rendered = tpl.render(&id, &values)?;
            Ok(TaskInstance {
                source_refs: vec![o.task_id.clone()],
                source_language: Some(o.language),
                phase: TaskPhase::ExplainPhase,
                payload: vec![o.source.clone()],
                ..instance(tpl, id, rendered)
            })
        })
        .collect()
}

/// Reproduction instances, one per `(task_id, explanation)`. Empty and
/// repeated explanations are skipped and noted.
pub fn build_reproduction_tasks(
    explanations: &[(String, String)],
    dst: Language,
    tpl: &PromptTemplate,
) -> Result<(Vec<TaskInstance>, Vec<String>)> {
    tpl.expect_kind(TaskKind::Reproduction)?;
    let mut seen = BTreeSet::new();
    let mut notes = Vec::new();
    let mut out = Vec::new();
    for (task_id, text) in explanations {
        if text.trim().is_empty() {
            notes.push(format!("{task_id}: empty explanation, reproduction skipped"));
            continue;
        }
        if !seen.insert(task_id.as_str()) {
            notes.push(format!("{task_id}: more than one explanation, later ones ignored"));
            continue;
        }
        let id = format!("reproduce:{task_id}:{}", dst.tag());
        let values = HashMap::from([("target_language", dst.display_name()), ("explanation", text.as_str())]);
        let rendered = tpl.render(&id, &values)?;
        out.push(TaskInstance {
            source_refs: vec![task_id.clone(), format!("explain:{task_id}")],
            target_language: Some(dst),
            phase: TaskPhase::ReproducePhase,
            payload: vec![text.clone()],
            ..instance(tpl, id, rendered)
        });
    }
    Ok((out, notes))
}

/// Notes the task ids in `expected` that have no explanation.
pub fn missing_explanations(expected: &[String], explanations: &[(String, String)]) -> Vec<String> {
    let have: BTreeSet<&str> = explanations.iter().map(|(id, _)| id.as_str()).collect();
    expected.iter().filter(|id| !have.contains(id.as_str())).map(|id| format!("{id}: no explanation, reproduction skipped")).collect()
}
