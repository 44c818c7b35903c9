use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Closed registry of source-language tags.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Language {
    Java,
    Python,
    Javascript,
    Cpp,
}

impl Language {
    pub const ALL: [Language; 4] = [Language::Java, Language::Python, Language::Javascript, Language::Cpp];

    pub fn tag(self) -> &'static str {
        match self {
            Language::Java => "java",
            Language::Python => "python",
            Language::Javascript => "javascript",
            Language::Cpp => "cpp",
        }
    }

    /// Human-facing name used inside prompts.
    pub fn display_name(self) -> &'static str {
        match self {
            Language::Java => "Java",
            Language::Python => "Python",
            Language::Javascript => "JavaScript",
            Language::Cpp => "C++",
        }
    }

    /// Fence tags a model might put on a code block for this language.
    pub fn fence_aliases(self) -> &'static [&'static str] {
        match self {
            Language::Java => &["java"],
            Language::Python => &["python", "py", "python3"],
            Language::Javascript => &["javascript", "js", "node"],
            Language::Cpp => &["cpp", "c++", "cc"],
        }
    }

    pub fn tree_sitter(self) -> Option<tree_sitter::Language> {
        match self {
            Language::Java => Some(tree_sitter_java::LANGUAGE.into()),
            Language::Python => Some(tree_sitter_python::LANGUAGE.into()),
            Language::Javascript => Some(tree_sitter_javascript::LANGUAGE.into()),
            Language::Cpp => None,
        }
    }
}

impl fmt::Display for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Language {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.trim().to_ascii_lowercase();
        Language::ALL
            .into_iter()
            .find(|l| l.tag() == lower || l.fence_aliases().contains(&lower.as_str()))
            .ok_or_else(|| Error::UnsupportedLanguage(s.to_string()))
    }
}
