//! Structured output document. The JSON form is deterministic for fixed
//! input bytes and flags; timing stays on stderr only.

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::path::Path;
use stringtop::graded::Degree;

pub struct ResultDocument {
    command: String,
    input_digest: String,
    max_degree: Option<Degree>,
    degrees: Vec<Degree>,
    betti: Vec<usize>,
    tables: BTreeMap<String, BTreeMap<String, String>>,
    verdicts: BTreeMap<String, String>,
}

impl ResultDocument {
    pub fn new(command: &str, input: &str, max_degree: Option<Degree>) -> Self {
        let digest = format!("{:x}", Sha256::digest(input.as_bytes()));
        ResultDocument {
            command: command.to_string(),
            input_digest: digest,
            max_degree,
            degrees: Vec::new(),
            betti: Vec::new(),
            tables: BTreeMap::new(),
            verdicts: BTreeMap::new(),
        }
    }

    pub fn betti(&mut self, degrees: &[Degree], betti: &[usize]) {
        self.degrees = degrees.to_vec();
        self.betti = betti.to_vec();
    }

    pub fn table_entry(&mut self, table: &str, key: &str, value: &str) {
        self.tables
            .entry(table.to_string())
            .or_default()
            .insert(key.to_string(), value.to_string());
    }

    pub fn verdict(&mut self, key: &str, value: &str) {
        self.verdicts.insert(key.to_string(), value.to_string());
    }

    fn to_json(&self) -> Value {
        // degree keys as strings so negative degrees serialize cleanly
        let tables: Map<String, Value> = self
            .tables
            .iter()
            .map(|(name, entries)| {
                let inner: Map<String, Value> = entries
                    .iter()
                    .map(|(k, v)| (k.clone(), Value::String(v.clone())))
                    .collect();
                (name.clone(), Value::Object(inner))
            })
            .collect();
        let verdicts: Map<String, Value> = self
            .verdicts
            .iter()
            .map(|(k, v)| (k.clone(), Value::String(v.clone())))
            .collect();
        json!({
            "command": self.command,
            "input_digest": self.input_digest,
            "max_degree": self.max_degree,
            "degrees": self.degrees.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
            "betti": self.betti,
            "tables": Value::Object(tables),
            "verdicts": Value::Object(verdicts),
        })
    }

    pub fn write(&self, path: Option<&Path>) -> Result<(), String> {
        if let Some(path) = path {
            let rendered = serde_json::to_string_pretty(&self.to_json())
                .map_err(|e| format!("json: {e}"))?;
            std::fs::write(path, rendered + "\n")
                .map_err(|e| format!("json: cannot write {}: {e}", path.display()))?;
        }
        Ok(())
    }
}
