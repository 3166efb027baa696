use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub const SCHEMA: &str = "jsm-report/1";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] jsm_core::CoreError),
    #[error(transparent)]
    Plegma(#[from] jsm_plegma::PlegmaError),
    #[error(transparent)]
    Space(#[from] jsm_spaces::SpaceError),
    #[error(transparent)]
    Asym(#[from] jsm_asymptotics::AsymError),
    #[error(transparent)]
    Uals(#[from] jsm_uals::UalsError),
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub command: String,
    pub parameters: Value,
    pub seed: u64,
    /// Hash of the σ registry log, for commands that use one.
    pub registry: Option<String>,
    pub version: String,
    pub digest: String,
}

impl RunManifest {
    pub fn to_json(&self) -> Value {
        json!({
            "command": self.command,
            "parameters": self.parameters,
            "seed": self.seed,
            "registry": self.registry,
            "version": self.version,
            "digest": self.digest,
        })
    }
}

/// Outcome of one command.
#[derive(Debug, Clone)]
pub struct Run {
    pub manifest: RunManifest,
    pub result: Value,
    /// False when a checked bound failed.
    pub passed: bool,
    pub text: String,
    /// `(file name, contents)` pairs.
    pub tables: Vec<(String, String)>,
}

pub struct RunBuilder {
    pub command: String,
    pub parameters: Value,
    pub seed: u64,
    pub registry: Option<String>,
    pub tables: Vec<(String, String)>,
}

impl RunBuilder {
    pub fn new(command: &str, parameters: Value, seed: u64) -> RunBuilder {
        RunBuilder { command: command.into(), parameters, seed, registry: None, tables: Vec::new() }
    }

    pub fn table(mut self, name: &str, csv: String) -> RunBuilder {
        self.tables.push((name.into(), csv));
        self
    }

    pub fn finish(self, result: Value, passed: bool, mut text: String) -> Run {
        // serde_json maps are sorted, so this serialization is canonical.
        let body = json!({ "result": result, "tables": self.tables, "registry": self.registry });
        let digest = sha256_hex(body.to_string().as_bytes());
        if !text.ends_with('\n') && !text.is_empty() {
            text.push('\n');
        }
        text.push_str(&format!("digest {digest}\n"));
        Run {
            manifest: RunManifest {
                command: self.command,
                parameters: self.parameters,
                seed: self.seed,
                registry: self.registry,
                version: env!("CARGO_PKG_VERSION").into(),
                digest,
            },
            result,
            passed,
            text,
            tables: self.tables,
        }
    }
}

impl Run {
    pub fn to_json(&self) -> Value {
        json!({ "schema": SCHEMA, "manifest": self.manifest.to_json(), "passed": self.passed, "result": self.result })
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }

    /// Writes `<stem>.json` and the tables into `dir`.
    pub fn write(&self, dir: &Path) -> std::io::Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let stem = self.manifest.command.replace(' ', "-");
        let mut written = Vec::new();
        let path = dir.join(format!("{stem}.json"));
        let mut text = serde_json::to_string_pretty(&self.to_json()).expect("report serializes");
        text.push('\n');
        std::fs::write(&path, text)?;
        written.push(path);
        for (name, csv) in &self.tables {
            let path = dir.join(name);
            std::fs::write(&path, csv)?;
            written.push(path);
        }
        Ok(written)
    }
}
