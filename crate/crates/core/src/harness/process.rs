//! Child processes with a wall-clock limit, drained output and a scrubbed
//! environment.

use std::io::{Read, Write};
use std::path::Path;
use std::process::{Command, Stdio};
use std::thread;
use std::time::{Duration, Instant};

use wait_timeout::ChildExt;

use crate::error::{Error, Result};

/// Captured output is cut at this many bytes per stream.
const CAPTURE_LIMIT: usize = 1 << 20;

#[derive(Debug, Clone)]
pub struct ProcessResult {
    /// Exit code; `None` when killed by a signal or on timeout.
    pub code: Option<i32>,
    pub stdout: String,
    pub stderr: String,
    pub timed_out: bool,
    pub duration: Duration,
}

impl ProcessResult {
    pub fn success(&self) -> bool {
        !self.timed_out && self.code == Some(0)
    }
}

/// Only these variables survive into the sandbox; `PATH` is narrowed to the
/// tool's own directory plus the system defaults.
fn scrubbed(cmd: &mut Command, program: &Path, workdir: &Path) {
    cmd.env_clear();
    let mut path = String::new();
    if let Some(dir) = program.parent().filter(|d| !d.as_os_str().is_empty()) {
        path.push_str(&dir.to_string_lossy());
        path.push(':');
    }
    path.push_str("/usr/local/bin:/usr/bin:/bin");
    cmd.env("PATH", path)
        .env("HOME", workdir)
        .env("TMPDIR", workdir)
        .env("LANG", "C.UTF-8")
        .env("PYTHONDONTWRITEBYTECODE", "1")
        .env("PYTHONHASHSEED", "0");
}

fn drain(mut r: impl Read + Send + 'static) -> thread::JoinHandle<String> {
    thread::spawn(move || {
        let mut buf = Vec::new();
        let mut chunk = [0u8; 8192];
        loop {
            match r.read(&mut chunk) {
                Ok(0) | Err(_) => break,
                Ok(n) => {
                    if buf.len() < CAPTURE_LIMIT {
                        let take = n.min(CAPTURE_LIMIT - buf.len());
                        buf.extend_from_slice(&chunk[..take]);
                    }
                }
            }
        }
        String::from_utf8_lossy(&buf).into_owned()
    })
}

/// Runs `program args` in `workdir`. A missing program is an environment
/// error; everything the program itself does is reported in the result.
pub fn run(
    program: &Path,
    args: &[String],
    workdir: &Path,
    stdin: Option<&str>,
    timeout: Duration,
    memory_bytes: Option<u64>,
) -> Result<ProcessResult> {
    let mut cmd = Command::new(program);
    cmd.args(args)
        .current_dir(workdir)
        .stdin(if stdin.is_some() { Stdio::piped() } else { Stdio::null() })
        .stdout(Stdio::piped())
        .stderr(Stdio::piped());
    scrubbed(&mut cmd, program, workdir);
    limit_child(&mut cmd, memory_bytes);

    let started = Instant::now();
    let mut child = cmd.spawn().map_err(|e| Error::Environment(format!("cannot start {}: {e}", program.display())))?;
    let out = drain(child.stdout.take().expect("piped stdout"));
    let err = drain(child.stderr.take().expect("piped stderr"));
    if let (Some(mut sink), Some(input)) = (child.stdin.take(), stdin) {
        let input = input.to_string();
        // A program that exits without reading its input closes the pipe early.
        thread::spawn(move || {
            let _ = sink.write_all(input.as_bytes());
        });
    }
    let status = child.wait_timeout(timeout).map_err(|e| Error::Environment(format!("wait failed: {e}")))?;
    let timed_out = status.is_none();
    let code = match status {
        Some(s) => s.code(),
        None => {
            kill_tree(&mut child);
            let _ = child.wait();
            None
        }
    };
    let duration = started.elapsed();
    Ok(ProcessResult { code, stdout: out.join().unwrap_or_default(), stderr: err.join().unwrap_or_default(), timed_out, duration })
}

#[cfg(unix)]
fn limit_child(cmd: &mut Command, memory_bytes: Option<u64>) {
    use std::os::unix::process::CommandExt;
    // SAFETY: only async-signal-safe calls between fork and exec.
    unsafe {
        cmd.pre_exec(move || {
            libc::setpgid(0, 0);
            if let Some(bytes) = memory_bytes {
                let lim = libc::rlimit { rlim_cur: bytes as libc::rlim_t, rlim_max: bytes as libc::rlim_t };
                libc::setrlimit(libc::RLIMIT_AS, &lim);
            }
            Ok(())
        });
    }
}

#[cfg(not(unix))]
fn limit_child(_cmd: &mut Command, _memory_bytes: Option<u64>) {}

#[cfg(unix)]
fn kill_tree(child: &mut std::process::Child) {
    // The child leads its own process group; take down anything it spawned.
    unsafe {
        libc::kill(-(child.id() as libc::pid_t), libc::SIGKILL);
    }
    let _ = child.kill();
}

#[cfg(not(unix))]
fn kill_tree(child: &mut std::process::Child) {
    let _ = child.kill();
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sh() -> std::path::PathBuf {
        "/bin/sh".into()
    }

    #[test]
    fn captures_output_and_exit_code() {
        let dir = tempfile::tempdir().unwrap();
        let r =
            run(&sh(), &["-c".into(), "echo out; echo err >&2; exit 3".into()], dir.path(), None, Duration::from_secs(5), None).unwrap();
        assert_eq!((r.code, r.stdout.as_str(), r.stderr.as_str()), (Some(3), "out\n", "err\n"));
    }

    #[test]
    fn feeds_stdin() {
        let dir = tempfile::tempdir().unwrap();
        let r =
            run(&sh(), &["-c".into(), "read x; echo \"got $x\"".into()], dir.path(), Some("7\n"), Duration::from_secs(5), None).unwrap();
        assert_eq!(r.stdout, "got 7\n");
    }

    #[test]
    fn kills_on_timeout() {
        let dir = tempfile::tempdir().unwrap();
        let r = run(&sh(), &["-c".into(), "sleep 30".into()], dir.path(), None, Duration::from_millis(200), None).unwrap();
        assert!(r.timed_out);
        assert!(r.duration < Duration::from_secs(10));
    }

    #[test]
    fn environment_is_scrubbed() {
        let dir = tempfile::tempdir().unwrap();
        std::env::set_var("CATCODE_SECRET_PROBE", "leak");
        let r =
            run(&sh(), &["-c".into(), "echo \"[$CATCODE_SECRET_PROBE]\"".into()], dir.path(), None, Duration::from_secs(5), None).unwrap();
        assert_eq!(r.stdout, "[]\n");
    }

    #[test]
    fn missing_program_is_an_environment_error() {
        let dir = tempfile::tempdir().unwrap();
        let err = run(Path::new("/nonexistent/tool"), &[], dir.path(), None, Duration::from_secs(1), None).unwrap_err();
        assert!(matches!(err, Error::Environment(_)));
    }
}
