//! Locating compilers and interpreters, and the `doctor` report.

use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::{Deserialize, Serialize};

use super::process;
use crate::error::{Error, Result};
use crate::lang::Language;

/// Executables used by the harness. Each is looked up through an override
/// variable (`CATCODE_JAVAC`, `CATCODE_JAVA`, `CATCODE_PYTHON`,
/// `CATCODE_NODE`), then `JAVA_HOME/bin` for the Java tools, then `PATH`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Toolchain {
    pub javac: Option<PathBuf>,
    pub java: Option<PathBuf>,
    pub python: Option<PathBuf>,
    pub node: Option<PathBuf>,
}

fn on_path(name: &str) -> Option<PathBuf> {
    let path = std::env::var_os("PATH")?;
    std::env::split_paths(&path).map(|d| d.join(name)).find(|p| is_executable(p))
}

fn is_executable(p: &Path) -> bool {
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        p.metadata().map(|m| m.is_file() && m.permissions().mode() & 0o111 != 0).unwrap_or(false)
    }
    #[cfg(not(unix))]
    {
        p.is_file()
    }
}

fn locate(var: &str, java_home_tool: Option<&str>, names: &[&str]) -> Option<PathBuf> {
    if let Some(p) = std::env::var_os(var).map(PathBuf::from) {
        return is_executable(&p).then_some(p);
    }
    if let (Some(tool), Some(home)) = (java_home_tool, std::env::var_os("JAVA_HOME")) {
        let p = Path::new(&home).join("bin").join(tool);
        if is_executable(&p) {
            return Some(p);
        }
    }
    names.iter().find_map(|n| on_path(n))
}

impl Toolchain {
    pub fn discover() -> Self {
        Toolchain {
            javac: locate("CATCODE_JAVAC", Some("javac"), &["javac"]),
            java: locate("CATCODE_JAVA", Some("java"), &["java"]),
            python: locate("CATCODE_PYTHON", None, &["python3", "python"]),
            node: locate("CATCODE_NODE", None, &["node", "nodejs"]),
        }
    }

    fn need(tool: &Option<PathBuf>, what: &str) -> Result<PathBuf> {
        tool.clone().ok_or_else(|| Error::Environment(format!("{what} not found (see `catcode doctor`)")))
    }

    /// Tools required to compile and run `language`, in order of use.
    pub fn require(&self, language: Language) -> Result<Vec<PathBuf>> {
        match language {
            Language::Java => Ok(vec![Self::need(&self.javac, "javac")?, Self::need(&self.java, "java")?]),
            Language::Python => Ok(vec![Self::need(&self.python, "python3")?]),
            Language::Javascript => Ok(vec![Self::need(&self.node, "node")?]),
            Language::Cpp => Err(Error::UnsupportedLanguage("cpp".into())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToolStatus {
    pub tool: String,
    pub path: Option<PathBuf>,
    pub version: Option<String>,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DoctorReport {
    pub tools: Vec<ToolStatus>,
    /// Languages whose full compile-and-run path is available.
    pub ready: Vec<Language>,
}

impl DoctorReport {
    pub fn all_ok(&self) -> bool {
        self.tools.iter().all(|t| t.ok)
    }

    /// One line per tool, for terminals and reports.
    pub fn render(&self) -> String {
        self.tools
            .iter()
            .map(|t| {
                let state = if t.ok { "ok" } else { "MISSING" };
                let path = t.path.as_ref().map_or("-".into(), |p| p.display().to_string());
                format!("{:<7} {:<8} {} {}", t.tool, state, path, t.version.as_deref().unwrap_or(""))
            })
            .collect::<Vec<_>>()
            .join("\n")
    }
}

fn version_of(tool: &Path, flag: &str) -> Option<String> {
    let dir = tempfile::tempdir().ok()?;
    let r = process::run(tool, &[flag.to_string()], dir.path(), None, Duration::from_secs(20), None).ok()?;
    if !r.success() {
        return None;
    }
    let text = if r.stdout.trim().is_empty() { r.stderr } else { r.stdout };
    text.lines().next().map(|l| l.trim().to_string())
}

/// Checks presence and version of every toolchain the harness may need.
pub fn doctor(toolchain: &Toolchain) -> DoctorReport {
    let entries = [
        ("javac", &toolchain.javac, "-version"),
        ("java", &toolchain.java, "-version"),
        ("python", &toolchain.python, "--version"),
        ("node", &toolchain.node, "--version"),
    ];
    let tools: Vec<ToolStatus> = entries
        .into_iter()
        .map(|(name, path, flag)| {
            let version = path.as_deref().and_then(|p| version_of(p, flag));
            ToolStatus { tool: name.into(), path: path.clone(), ok: version.is_some(), version }
        })
        .collect();
    let ok = |name: &str| tools.iter().any(|t| t.tool == name && t.ok);
    let mut ready = Vec::new();
    if ok("javac") && ok("java") {
        ready.push(Language::Java);
    }
    if ok("python") {
        ready.push(Language::Python);
    }
    if ok("node") {
        ready.push(Language::Javascript);
    }
    DoctorReport { tools, ready }
}
