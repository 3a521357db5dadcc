//! Run reports and the JSON encodings of library results.

use std::fs;
use std::path::{Path, PathBuf};

use cube_psatz::certificates::VerifyReport;
use cube_psatz::enclosure::Enclosure;
use cube_psatz::rational::{to_f64, to_fraction_string};
use cube_psatz::{Degree, Rational};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::format::{self, Certificate};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Pass,
    Fail,
    InputError,
    InternalError,
}

impl Outcome {
    /// 0 pass, 1 mathematical failure, 2 usage or input error.
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Pass => 0,
            Outcome::Fail | Outcome::InternalError => 1,
            Outcome::InputError => 2,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn input(e: impl std::fmt::Display) -> Self {
        CliError::Input(e.to_string())
    }

    pub fn internal(e: impl std::fmt::Display) -> Self {
        CliError::Internal(e.to_string())
    }
}

/// What a successful command hands back: pass or mathematical fail, plus
/// its result payload.
#[derive(Debug)]
pub struct Completed {
    pub outcome: Outcome,
    pub result: Value,
    /// One-line summary for stderr on failure.
    pub message: Option<String>,
}

impl Completed {
    pub fn pass(result: Value) -> Self {
        Completed {
            outcome: Outcome::Pass,
            result,
            message: None,
        }
    }

    pub fn judged(pass: bool, result: Value, message: impl FnOnce() -> String) -> Self {
        if pass {
            Self::pass(result)
        } else {
            Completed {
                outcome: Outcome::Fail,
                result,
                message: Some(message()),
            }
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub inputs_digest: String,
    pub outcome: Outcome,
    pub exit_code: i32,
    pub artifacts: Vec<String>,
    pub elapsed_ms: u64,
    pub result: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl RunReport {
    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Per-run state: seed, input digest and written artifacts.
pub struct Context {
    pub seed: u64,
    digest: Sha256,
    artifacts: Vec<String>,
}

impl Context {
    pub fn new(args: &[String], seed: u64) -> Self {
        let mut digest = Sha256::new();
        for a in args {
            digest.update(a.as_bytes());
            digest.update([0u8]);
        }
        Context {
            seed,
            digest,
            artifacts: Vec::new(),
        }
    }

    pub fn read_input(&mut self, path: &Path) -> Result<String, CliError> {
        let text =
            fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        self.digest.update(path.to_string_lossy().as_bytes());
        self.digest.update([0u8]);
        self.digest.update(text.as_bytes());
        self.digest.update([0u8]);
        Ok(text)
    }

    pub fn read_certificate(&mut self, path: &Path) -> Result<Certificate, CliError> {
        let text = self.read_input(path)?;
        format::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
    }

    /// Writes atomically and records the path.
    pub fn write_artifact(&mut self, path: &Path, contents: &str) -> Result<(), CliError> {
        write_atomic(path, contents)
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))?;
        self.artifacts.push(path.display().to_string());
        Ok(())
    }

    pub fn finish(
        self,
        command: Vec<String>,
        result: Result<Completed, CliError>,
        elapsed_ms: u64,
    ) -> (RunReport, Option<String>) {
        let inputs_digest = format!("sha256:{:x}", self.digest.finalize());
        let (outcome, result, error, message) = match result {
            Ok(c) => (c.outcome, c.result, None, c.message),
            Err(e) => {
                let outcome = match e {
                    CliError::Input(_) => Outcome::InputError,
                    CliError::Internal(_) => Outcome::InternalError,
                };
                (outcome, Value::Null, Some(e.to_string()), Some(e.to_string()))
            }
        };
        let report = RunReport {
            command,
            inputs_digest,
            outcome,
            exit_code: outcome.exit_code(),
            artifacts: self.artifacts,
            elapsed_ms,
            result,
            error,
        };
        (report, message)
    }
}

/// Writes through a temporary file in the same directory, then renames.
pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    use std::io::Write;
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

pub fn rational(q: &Rational) -> Value {
    Value::String(to_fraction_string(q))
}

pub fn enclosure(e: &Enclosure) -> Value {
    json!({ "lo": rational(&e.lo), "hi": rational(&e.hi), "approx": e.midpoint_f64() })
}

pub fn approx(q: &Rational) -> Value {
    json!(to_f64(q))
}

/// `null` for the zero polynomial's degree.
pub fn degree(d: Degree) -> Value {
    match d.finite() {
        Some(d) => json!(d),
        None => Value::Null,
    }
}

pub fn verify_report(rep: &VerifyReport) -> Value {
    json!({
        "pass": rep.pass,
        "identity_holds": rep.identity_holds,
        "degrees_ok": rep.degrees_ok,
        "claimed_r": rep.claimed_r,
        "max_degree": degree(rep.max_degree),
        "residual": rep.residual.to_string(),
        "expansion_minus_target": (-rep.residual.clone()).to_string(),
        "terms": rep.terms.iter().map(|t| json!({
            "index": t.index,
            "sigma_degree": degree(t.sigma_degree),
            "generator_degree": degree(t.generator_degree),
            "degree": degree(t.degree),
            "within_bound": t.within_bound,
        })).collect::<Vec<_>>(),
    })
}
