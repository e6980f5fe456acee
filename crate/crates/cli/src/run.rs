//! Bookkeeping shared by every subcommand: error classes, input hashing,
//! artifact writing and the run manifest.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use ihara::ZetaError;
use serde::Serialize;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

/// Failure classes mapped onto exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, unreadable or malformed inputs, requests outside the domain.
    Input(String),
    /// Numerical failures, resource limits and failed checks.
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::Failure(_) => 2,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Input(_) => "input",
            CliError::Failure(_) => "failure",
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) | CliError::Failure(m) => f.write_str(m),
        }
    }
}

impl From<ZetaError> for CliError {
    fn from(e: ZetaError) -> Self {
        if e.is_input_error() {
            CliError::Input(e.to_string())
        } else {
            CliError::Failure(e.to_string())
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// One invocation: what went in, what came out.
pub struct Run {
    command: &'static str,
    arguments: Map<String, Value>,
    settings: Map<String, Value>,
    inputs: Vec<Value>,
    outputs: Vec<Value>,
    manifest_path: Option<PathBuf>,
}

impl Run {
    pub fn new(command: &'static str, manifest_path: Option<PathBuf>) -> Self {
        Run {
            command,
            arguments: Map::new(),
            settings: Map::new(),
            inputs: Vec::new(),
            outputs: Vec::new(),
            manifest_path,
        }
    }

    /// Records a command-line argument.
    pub fn arg(&mut self, key: &str, value: impl Serialize) {
        self.arguments.insert(key.into(), to_value(value));
    }

    /// Records an effective setting such as a tolerance or size cap.
    pub fn setting(&mut self, key: &str, value: impl Serialize) {
        self.settings.insert(key.into(), to_value(value));
    }

    pub fn read_input(&mut self, path: &Path) -> CliResult<String> {
        let bytes = fs::read(path)
            .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
        self.inputs.push(json!({
            "path": path.display().to_string(),
            "sha256": sha256_hex(&bytes),
        }));
        String::from_utf8(bytes)
            .map_err(|_| CliError::Input(format!("{} is not UTF-8", path.display())))
    }

    pub fn write_output(&mut self, path: &Path, contents: &str) -> CliResult<()> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir).map_err(|e| write_error(dir, e))?;
        }
        fs::write(path, contents).map_err(|e| write_error(path, e))?;
        self.outputs.push(json!({
            "path": path.display().to_string(),
            "sha256": sha256_hex(contents.as_bytes()),
        }));
        Ok(())
    }

    /// Uses `dir/manifest.json` unless `--manifest` was given.
    pub fn manifest_in(&mut self, dir: &Path) {
        if self.manifest_path.is_none() {
            self.manifest_path = Some(dir.join("manifest.json"));
        }
    }

    /// Hash of the command, its arguments, settings and input file contents.
    pub fn input_hash(&self) -> String {
        let canonical = json!({
            "command": self.command,
            "arguments": self.arguments,
            "settings": self.settings,
            "inputs": self.inputs,
        });
        sha256_hex(canonical.to_string().as_bytes())
    }

    /// Writes the manifest and returns the summary line. Runs without file
    /// outputs and without `--manifest` carry the manifest inline.
    pub fn finish(mut self, mut summary: Map<String, Value>) -> CliResult<String> {
        let input_hash = self.input_hash();
        let manifest = json!({
            "tool": "ihara",
            "version": env!("CARGO_PKG_VERSION"),
            "library_version": ihara::VERSION,
            "command": self.command,
            "arguments": self.arguments,
            "settings": self.settings,
            "inputs": self.inputs,
            "input_hash": input_hash,
            "outputs": self.outputs,
        });
        let path = self.manifest_path.take().or_else(|| {
            self.outputs
                .first()
                .and_then(|o| o["path"].as_str())
                .map(|p| PathBuf::from(format!("{p}.manifest.json")))
        });
        summary.insert("command".into(), json!(self.command));
        summary.insert("status".into(), json!("ok"));
        summary.insert("input_hash".into(), json!(input_hash));
        match path {
            Some(p) => {
                let text = serde_json::to_string_pretty(&manifest).expect("manifest serialises") + "\n";
                if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                    fs::create_dir_all(dir).map_err(|e| write_error(dir, e))?;
                }
                fs::write(&p, text).map_err(|e| write_error(&p, e))?;
                summary.insert("manifest".into(), json!(p.display().to_string()));
            }
            None => {
                summary.insert("manifest".into(), manifest);
            }
        }
        Ok(Value::Object(summary).to_string())
    }
}

fn to_value(value: impl Serialize) -> Value {
    serde_json::to_value(value).expect("plain data serialises")
}

fn write_error(path: &Path, e: std::io::Error) -> CliError {
    CliError::Failure(format!("cannot write {}: {e}", path.display()))
}
