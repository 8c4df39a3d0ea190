use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::input::Model;

#[derive(Serialize, Debug, Clone)]
pub struct Report {
    pub command: String,
    pub input: String,
    /// SHA-256 of the normalized input document.
    pub input_digest: String,
    pub passed: bool,
    pub results: Value,
    pub table: Vec<String>,
}

impl Report {
    pub fn new(command: &str, model: &Model) -> Self {
        let digest = Sha256::digest(model.input.to_json().as_bytes());
        Report {
            command: command.to_string(),
            input: model.input.name.clone(),
            input_digest: digest.iter().map(|b| format!("{b:02x}")).collect(),
            passed: true,
            results: Value::Null,
            table: Vec::new(),
        }
    }

    pub fn line(&mut self, s: String) {
        self.table.push(s);
    }

    pub fn text(&self) -> String {
        let mut out = format!("{} [{}]\n", self.command, self.input);
        for l in &self.table {
            out.push_str(l);
            out.push('\n');
        }
        out.push_str(if self.passed { "result: pass\n" } else { "result: FAIL\n" });
        out
    }

    pub fn json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data") + "\n"
    }
}
