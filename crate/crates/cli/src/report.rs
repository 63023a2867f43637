//! The single JSON report every subcommand emits.
//!
//! ```text
//! {
//!   "command":   string,
//!   "status":    "pass" | "fail" | "error",
//!   "exit_code": 0 | 1 | 2 | 3,
//!   "checks":    [{name, residuals, tolerance, passed, marginal, info}],
//!   "outputs":   {name: tensor},
//!   "values":    {name: number | [number] | string | bool},
//!   "error":     string | null
//! }
//! ```

use std::collections::BTreeMap;

use serde_json::{Map, Value};
use tensor_ginv::io::{check_report_json, num, tensor_to_json};
use tensor_ginv::report::CheckReport;
use tensor_ginv::{Error, Tensor};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

pub fn exit_code_for(e: &Error) -> i32 {
    if e.is_numerical() {
        EXIT_NUMERICAL
    } else {
        EXIT_INPUT
    }
}

#[derive(Debug, Default)]
pub struct Report {
    pub checks: Vec<CheckReport>,
    pub outputs: BTreeMap<String, Tensor>,
    pub values: BTreeMap<String, Value>,
    /// Overrides the pass/fail verdict derived from `checks`.
    pub verdict: Option<bool>,
}

impl Report {
    pub fn check(&mut self, c: CheckReport) {
        self.checks.push(c);
    }

    pub fn output(&mut self, name: &str, t: Tensor) {
        self.outputs.insert(name.to_string(), t);
    }

    pub fn value(&mut self, name: &str, v: Value) {
        self.values.insert(name.to_string(), v);
    }

    pub fn number(&mut self, name: &str, x: f64) {
        self.value(name, num(x));
    }

    pub fn passed(&self) -> bool {
        self.verdict.unwrap_or_else(|| self.checks.iter().all(|c| c.passed))
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            EXIT_PASS
        } else {
            EXIT_FAIL
        }
    }

    pub fn to_json(&self, command: &str) -> Value {
        let code = self.exit_code();
        envelope(
            command,
            if code == EXIT_PASS { "pass" } else { "fail" },
            code,
            self.checks.iter().map(check_report_json).collect(),
            Value::Object(self.outputs.iter().map(|(k, t)| (k.clone(), tensor_to_json(t))).collect()),
            Value::Object(self.values.iter().map(|(k, v)| (k.clone(), v.clone())).collect()),
            Value::Null,
        )
    }
}

pub fn error_json(command: &str, e: &Error) -> Value {
    envelope(
        command,
        "error",
        exit_code_for(e),
        Vec::new(),
        Value::Object(Map::new()),
        Value::Object(Map::new()),
        Value::from(e.to_string()),
    )
}

fn envelope(command: &str, status: &str, code: i32, checks: Vec<Value>, outputs: Value, values: Value, error: Value) -> Value {
    let mut obj = Map::new();
    obj.insert("command".into(), Value::from(command));
    obj.insert("status".into(), Value::from(status));
    obj.insert("exit_code".into(), Value::from(code));
    obj.insert("checks".into(), Value::Array(checks));
    obj.insert("outputs".into(), outputs);
    obj.insert("values".into(), values);
    obj.insert("error".into(), error);
    Value::Object(obj)
}
