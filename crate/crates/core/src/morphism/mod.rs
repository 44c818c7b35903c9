//! Predefined morphisms over Java functions.
//!
//! A morphism is a concrete source edit. Seven of the catalog kinds (plus the
//! identity) are self-morphisms: the edited program keeps the running outcome
//! of the original on every input. `ModifyCondition` and `RemoveElse` change
//! behavior by construction.
//!
//! Every rewrite is a span edit on the original text, located through the
//! concrete syntax tree, so bytes outside the edited spans are preserved.
//! Sites are addressed by a descriptor that is unique per kind within one
//! source, and carry the digest of the source they were enumerated on.

mod analysis;
mod rewrite;

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::corpus::CodeObject;
use crate::error::{Error, Result};
use crate::lang::Language;
use crate::syntax;

pub use rewrite::Edit;

/// Whether a morphism keeps the object (self-morphism) or moves to another one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Equivalence {
    Equivalent,
    Nonequivalent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MorphismKind {
    Identity,
    VariableRenaming,
    BooleanExchange,
    LoopExchange,
    SwitchToIf,
    UnusedStatement,
    ReorderCondition,
    PermuteStatement,
    ModifyCondition,
    RemoveElse,
}

impl MorphismKind {
    pub const ALL: [MorphismKind; 10] = [
        MorphismKind::Identity,
        MorphismKind::VariableRenaming,
        MorphismKind::BooleanExchange,
        MorphismKind::LoopExchange,
        MorphismKind::SwitchToIf,
        MorphismKind::UnusedStatement,
        MorphismKind::ReorderCondition,
        MorphismKind::PermuteStatement,
        MorphismKind::ModifyCondition,
        MorphismKind::RemoveElse,
    ];

    /// The seven non-identity self-morphisms.
    pub const SELF_KINDS: [MorphismKind; 7] = [
        MorphismKind::VariableRenaming,
        MorphismKind::BooleanExchange,
        MorphismKind::LoopExchange,
        MorphismKind::SwitchToIf,
        MorphismKind::UnusedStatement,
        MorphismKind::ReorderCondition,
        MorphismKind::PermuteStatement,
    ];

    pub const NONEQUIVALENT_KINDS: [MorphismKind; 2] = [MorphismKind::ModifyCondition, MorphismKind::RemoveElse];

    pub fn equivalence(self) -> Equivalence {
        match self {
            MorphismKind::ModifyCondition | MorphismKind::RemoveElse => Equivalence::Nonequivalent,
            _ => Equivalence::Equivalent,
        }
    }

    pub fn is_identity(self) -> bool {
        self == MorphismKind::Identity
    }

    pub fn abbrev(self) -> &'static str {
        match self {
            MorphismKind::Identity => "ID",
            MorphismKind::VariableRenaming => "VR",
            MorphismKind::BooleanExchange => "BE",
            MorphismKind::LoopExchange => "LE",
            MorphismKind::SwitchToIf => "SI",
            MorphismKind::UnusedStatement => "US",
            MorphismKind::ReorderCondition => "RC",
            MorphismKind::PermuteStatement => "PS",
            MorphismKind::ModifyCondition => "MC",
            MorphismKind::RemoveElse => "RE",
        }
    }
}

impl fmt::Display for MorphismKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for MorphismKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        MorphismKind::ALL
            .into_iter()
            .find(|k| k.abbrev().eq_ignore_ascii_case(s) || format!("{k:?}").eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Config(format!("unknown morphism kind `{s}`")))
    }
}

/// Parses a comma-separated kind list such as `VR,US`.
pub fn parse_kind_list(s: &str) -> Result<Vec<MorphismKind>> {
    s.split(',').filter(|p| !p.trim().is_empty()).map(str::parse).collect()
}

/// Joins kinds into the combination label used in reports, e.g. `BE-VR`.
/// Identity steps are omitted and the abbreviations are sorted.
pub fn combination_label(kinds: &[MorphismKind]) -> String {
    let mut abbrevs: Vec<&str> = kinds.iter().filter(|k| !k.is_identity()).map(|k| k.abbrev()).collect();
    if abbrevs.is_empty() {
        return MorphismKind::Identity.abbrev().to_string();
    }
    abbrevs.sort_unstable();
    abbrevs.join("-")
}

pub fn digest(source: &str) -> String {
    let hash = Sha256::digest(source.as_bytes());
    hex::encode(&hash[..8])
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismSite {
    pub kind: MorphismKind,
    /// Byte range of the rewritten node in the source.
    pub node_span: (usize, usize),
    pub descriptor: String,
    pub source_digest: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AppliedMorphism {
    pub kind: MorphismKind,
    pub site: MorphismSite,
    pub seed: u64,
    pub before: String,
    pub after: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismChain {
    pub steps: Vec<AppliedMorphism>,
    pub distance: usize,
    pub label: Equivalence,
}

impl MorphismChain {
    pub fn from_steps(steps: Vec<AppliedMorphism>) -> Self {
        let distance = steps.iter().filter(|s| !s.kind.is_identity()).count();
        let label = if steps.iter().any(|s| s.kind.equivalence() == Equivalence::Nonequivalent) {
            Equivalence::Nonequivalent
        } else {
            Equivalence::Equivalent
        };
        MorphismChain { steps, distance, label }
    }

    pub fn kinds(&self) -> Vec<MorphismKind> {
        self.steps.iter().map(|s| s.kind).collect()
    }

    /// Sequential composition: `self` first, then `next`.
    pub fn then(&self, next: &MorphismChain) -> MorphismChain {
        let mut steps = self.steps.clone();
        steps.extend(next.steps.iter().cloned());
        MorphismChain::from_steps(steps)
    }

    /// Re-applies every recorded step to `source`.
    pub fn replay(&self, engine: &MorphismEngine, source: &str) -> Result<String> {
        let mut current = source.to_string();
        for step in &self.steps {
            let sites = engine.enumerate_sites(&current, Language::Java, step.kind)?;
            let site = sites
                .into_iter()
                .find(|s| s.descriptor == step.site.descriptor)
                .ok_or_else(|| Error::StaleSite { expected: step.before.clone(), actual: digest(&current) })?;
            current = engine.apply(&current, &site, step.seed)?.0;
        }
        Ok(current)
    }

    pub fn describe(&self) -> String {
        self.steps.iter().map(|s| format!("{}[{}]#{}", s.kind.abbrev(), s.site.descriptor, s.seed)).collect::<Vec<_>>().join(" -> ")
    }
}

/// How `VariableRenaming` picks the new name.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "scheme", content = "names")]
pub enum RenameScheme {
    /// `var_N`, N being the 1-based index of the declaration.
    #[default]
    VarN,
    /// A name drawn (by seed) from a pool, e.g. all variable names in a dataset.
    Pool(Vec<String>),
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct MorphismConfig {
    #[serde(default)]
    pub rename: RenameScheme,
}

/// Result of sampling morphism outputs for one object.
#[derive(Debug, Clone, Default)]
pub struct SampledOutputs {
    pub outputs: Vec<(CodeObject, MorphismChain)>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Default)]
pub struct MorphismEngine {
    pub config: MorphismConfig,
}

impl MorphismEngine {
    pub fn new(config: MorphismConfig) -> Self {
        MorphismEngine { config }
    }

    pub fn enumerate_sites(&self, source: &str, language: Language, kind: MorphismKind) -> Result<Vec<MorphismSite>> {
        if language != Language::Java {
            return Err(Error::UnsupportedLanguage(language.tag().to_string()));
        }
        let parsed = syntax::parse(source, language)?;
        let digest = digest(source);
        let mut sites: Vec<MorphismSite> = rewrite::candidates(&parsed, kind, &self.config)
            .into_iter()
            .map(|c| MorphismSite { kind, node_span: c.span, descriptor: c.descriptor, source_digest: digest.clone() })
            .collect();
        sites.sort_by(|a, b| a.node_span.0.cmp(&b.node_span.0).then_with(|| a.descriptor.cmp(&b.descriptor)));
        Ok(sites)
    }

    pub fn apply(&self, source: &str, site: &MorphismSite, seed: u64) -> Result<(String, AppliedMorphism)> {
        let before = digest(source);
        if before != site.source_digest {
            return Err(Error::StaleSite { expected: site.source_digest.clone(), actual: before });
        }
        let parsed = syntax::parse(source, Language::Java)?;
        let candidate = rewrite::candidates(&parsed, site.kind, &self.config)
            .into_iter()
            .find(|c| c.descriptor == site.descriptor)
            .ok_or_else(|| Error::StaleSite { expected: site.source_digest.clone(), actual: before.clone() })?;
        let edits = (candidate.edits)(seed);
        let output = rewrite::apply_edits(source, edits);
        if !syntax::parses(&output, Language::Java) {
            return Err(Error::RewriteFailure { kind: site.kind, descriptor: site.descriptor.clone() });
        }
        let applied = AppliedMorphism { kind: site.kind, site: site.clone(), seed, before, after: digest(&output) };
        Ok((output, applied))
    }

    /// Applies `kinds` left to right. Only non-identity steps draw from the
    /// seeded stream, so identity steps never perturb the sampling of the rest.
    pub fn apply_chain(&self, source: &str, kinds: &[MorphismKind], rng_seed: u64) -> Result<(String, MorphismChain)> {
        let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
        let mut current = source.to_string();
        let mut steps = Vec::with_capacity(kinds.len());
        for (step, &kind) in kinds.iter().enumerate() {
            let sites = self.enumerate_sites(&current, Language::Java, kind)?;
            if sites.is_empty() {
                return Err(Error::InapplicableKind { kind, step });
            }
            let (site, seed) = if kind.is_identity() {
                (sites[0].clone(), 0)
            } else {
                let idx = rng.gen_range(0..sites.len());
                (sites[idx].clone(), rng.gen::<u64>())
            };
            let (next, applied) = self.apply(&current, &site, seed)?;
            current = next;
            steps.push(applied);
        }
        Ok((current, MorphismChain::from_steps(steps)))
    }

    /// Kinds from `pool` that have at least one site on `source`.
    pub fn applicable_kinds(&self, source: &str, pool: &[MorphismKind]) -> Result<Vec<MorphismKind>> {
        let mut out = Vec::new();
        for &kind in pool {
            if !self.enumerate_sites(source, Language::Java, kind)?.is_empty() {
                out.push(kind);
            }
        }
        Ok(out)
    }

    /// Samples `want_eq` distinct self-morphism kinds and `want_neq` distinct
    /// nonequivalent kinds applicable to `obj`, one output each.
    pub fn sample_outputs(&self, obj: &CodeObject, want_eq: usize, want_neq: usize, rng_seed: u64) -> Result<SampledOutputs> {
        let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
        let mut sampled = SampledOutputs::default();
        for (pool, want, what) in
            [(&MorphismKind::SELF_KINDS[..], want_eq, "self-morphism"), (&MorphismKind::NONEQUIVALENT_KINDS[..], want_neq, "nonequivalent")]
        {
            if want == 0 {
                continue;
            }
            let mut kinds = self.applicable_kinds(&obj.source, pool)?;
            kinds.shuffle(&mut rng);
            let mut produced = 0;
            for kind in kinds {
                if produced == want {
                    break;
                }
                match self.sample_one(obj, kind, &mut rng) {
                    Ok(out) => {
                        sampled.outputs.push(out);
                        produced += 1;
                    }
                    Err(e) => sampled.notes.push(format!("{}: {kind} skipped: {e}", obj.task_id)),
                }
            }
            if produced < want {
                sampled.notes.push(format!("{}: shortfall, wanted {want} {what} outputs, produced {produced}", obj.task_id));
            }
        }
        Ok(sampled)
    }

    fn sample_one(&self, obj: &CodeObject, kind: MorphismKind, rng: &mut ChaCha8Rng) -> Result<(CodeObject, MorphismChain)> {
        let sites = self.enumerate_sites(&obj.source, Language::Java, kind)?;
        let site = &sites[rng.gen_range(0..sites.len())];
        let seed = rng.gen::<u64>();
        let (source, applied) = self.apply(&obj.source, site, seed)?;
        let chain = MorphismChain::from_steps(vec![applied]);
        Ok((obj.variant(source, &chain), chain))
    }
}
