use std::io::{self, Write};

use cdset_core::{CongruenceSet, Rational};
use serde_json::{json, Map, Value};

pub const SCHEMA_VERSION: u64 = 1;

pub mod exit {
    pub const OK: i32 = 0;
    pub const NEGATIVE: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const RESOURCE: i32 = 3;
}

/// Output of one subcommand: a JSON payload plus the equivalent plain lines.
#[derive(Debug)]
pub struct Report {
    pub command: &'static str,
    pub inputs: Value,
    pub results: Map<String, Value>,
    pub lines: Vec<String>,
    pub error: Option<String>,
    pub exit_code: i32,
}

impl Report {
    pub fn new(command: &'static str, inputs: Value) -> Self {
        Report {
            command,
            inputs,
            results: Map::new(),
            lines: Vec::new(),
            error: None,
            exit_code: exit::OK,
        }
    }

    /// Records a result field and its plain `key: value` line.
    pub fn field(&mut self, key: &str, value: impl Into<Value>, plain: impl Into<String>) {
        self.results.insert(key.to_owned(), value.into());
        self.lines.push(format!("{key}: {}", plain.into()));
    }

    pub fn json_only(&mut self, key: &str, value: impl Into<Value>) {
        self.results.insert(key.to_owned(), value.into());
    }

    pub fn line(&mut self, line: impl Into<String>) {
        self.lines.push(line.into());
    }

    pub fn fail(mut self, code: i32, message: impl Into<String>) -> Self {
        self.error = Some(message.into());
        self.exit_code = code;
        self
    }

    pub fn to_json(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("schema_version".into(), json!(SCHEMA_VERSION));
        obj.insert("command".into(), json!(self.command));
        obj.insert("inputs".into(), self.inputs.clone());
        obj.insert("results".into(), Value::Object(self.results.clone()));
        match &self.error {
            None => {
                obj.insert("status".into(), json!("ok"));
            }
            Some(msg) => {
                obj.insert("status".into(), json!("error"));
                obj.insert("message".into(), json!(msg));
            }
        }
        Value::Object(obj)
    }

    pub fn emit(&self, as_json: bool) -> io::Result<()> {
        let stdout = io::stdout();
        let mut out = stdout.lock();
        if as_json {
            writeln!(out, "{}", self.to_json())?;
        } else {
            for l in &self.lines {
                writeln!(out, "{l}")?;
            }
        }
        if let Some(msg) = &self.error {
            eprintln!("error: {msg}");
        }
        Ok(())
    }
}

pub fn rational(r: &Rational) -> Value {
    json!(r.to_string())
}

pub fn set_json(s: &CongruenceSet) -> Value {
    Value::Array(
        s.congruences()
            .iter()
            .map(|c| json!([c.residue(), c.modulus()]))
            .collect(),
    )
}

pub fn set_plain(s: &CongruenceSet) -> String {
    s.congruences()
        .iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}
