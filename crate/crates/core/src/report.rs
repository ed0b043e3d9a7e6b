//! Command reports: what was run, digests of what was read, the results and
//! the verdict ledger. JSON is canonical; Markdown is rendered from it.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::verdict::Verdict;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Md,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: Vec<String>,
    pub inputs: Vec<InputDigest>,
    pub results: serde_json::Map<String, serde_json::Value>,
    pub verdicts: Vec<Verdict>,
}

impl Report {
    pub fn new(command: Vec<String>) -> Self {
        Report {
            command,
            inputs: Vec::new(),
            results: serde_json::Map::new(),
            verdicts: Vec::new(),
        }
    }

    pub fn digest_input(&mut self, path: &Path) -> Result<()> {
        let bytes = std::fs::read(path).map_err(|e| Error::Catalog(format!("{}: {e}", path.display())))?;
        self.inputs.push(InputDigest {
            path: path.display().to_string(),
            sha256: sha256_hex(&bytes),
        });
        Ok(())
    }

    pub fn set(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).expect("result serializes");
        self.results.insert(key.to_string(), v);
    }

    pub fn extend(&mut self, verdicts: impl IntoIterator<Item = Verdict>) {
        self.verdicts.extend(verdicts);
    }

    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }

    pub fn first_failure(&self) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| !v.passed)
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_markdown(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# schreier {}\n", self.command.join(" "));
        if !self.inputs.is_empty() {
            let _ = writeln!(s, "| input | sha256 |\n|---|---|");
            for i in &self.inputs {
                let _ = writeln!(s, "| {} | `{}` |", i.path, i.sha256);
            }
            s.push('\n');
        }
        let nested = |v: &serde_json::Value| matches!(v, serde_json::Value::Object(_) | serde_json::Value::Array(_));
        for (k, v) in self.results.iter().filter(|(_, v)| !nested(v)) {
            let _ = writeln!(s, "- **{k}**: {v}");
        }
        for (k, v) in self.results.iter().filter(|(_, v)| nested(v)) {
            let body = serde_json::to_string(v).expect("json");
            let _ = writeln!(s, "\n## {k}\n\n```json\n{body}\n```");
        }
        if !self.verdicts.is_empty() {
            let _ = writeln!(s, "\n## Verdicts\n\n| check | result | witness |\n|---|---|---|");
            for v in &self.verdicts {
                let _ = writeln!(
                    s,
                    "| {} | {} | {} |",
                    v.check,
                    if v.passed { "PASS" } else { "FAIL" },
                    v.witness.as_deref().unwrap_or("")
                );
            }
        }
        s
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json_string(),
            Format::Md => self.to_markdown(),
        }
    }
}
