//! Run reports: named sections of computed quantities plus a list of checks,
//! each carrying the numbers its verdict was derived from.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

use crate::model::TolerancePolicy;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub metrics: BTreeMap<String, f64>,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool) -> Self {
        Self { name: name.into(), passed, metrics: BTreeMap::new() }
    }

    pub fn metric(mut self, key: &str, value: impl Into<f64>) -> Self {
        self.metrics.insert(key.to_owned(), value.into());
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub tolerance: TolerancePolicy,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub sections: BTreeMap<String, Value>,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    pub passed: bool,
}

impl RunReport {
    pub fn new(command: Vec<String>, tolerance: TolerancePolicy) -> Self {
        Self {
            command,
            tolerance,
            seed: None,
            sections: BTreeMap::new(),
            checks: Vec::new(),
            output: None,
            passed: true,
        }
    }

    pub fn section(&mut self, title: &str, body: impl Serialize) {
        let value = serde_json::to_value(body).expect("report sections serialize to JSON");
        self.sections.insert(title.to_owned(), value);
    }

    pub fn check(&mut self, check: Check) {
        self.passed &= check.passed;
        self.checks.push(check);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize to JSON")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", self.command.join(" "));
        let _ = writeln!(
            out,
            "tolerance: rel_eps = {:e}, rank_eps_factor = {}",
            self.tolerance.rel_eps, self.tolerance.rank_eps_factor
        );
        if let Some(seed) = self.seed {
            let _ = writeln!(out, "seed: {seed}");
        }
        for (title, body) in &self.sections {
            let _ = writeln!(out, "\n[{title}]");
            write_value(&mut out, body, 1);
        }
        if !self.checks.is_empty() {
            let _ = writeln!(out, "\nchecks:");
        }
        for c in &self.checks {
            let metrics: Vec<String> = c.metrics.iter().map(|(k, v)| format!("{k} = {}", fmt_num(*v))).collect();
            let verdict = if c.passed { "PASS" } else { "FAIL" };
            let _ = writeln!(out, "  {verdict} {} ({})", c.name, metrics.join(", "));
        }
        if let Some(path) = &self.output {
            let _ = writeln!(out, "\nwrote {path}");
        }
        let _ = writeln!(out, "\nresult: {}", if self.passed { "PASS" } else { "FAIL" });
        out
    }
}

fn fmt_num(v: f64) -> String {
    let a = v.abs();
    if v == v.trunc() && a < 1e15 {
        format!("{v}")
    } else if (1e-4..1e6).contains(&a) {
        format!("{v:.12}").trim_end_matches('0').trim_end_matches('.').to_owned()
    } else {
        format!("{v:.6e}")
    }
}

fn write_value(out: &mut String, value: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                match v {
                    Value::Object(_) => {
                        let _ = writeln!(out, "{pad}{k}:");
                        write_value(out, v, depth + 1);
                    }
                    _ => {
                        let _ = writeln!(out, "{pad}{k} = {}", scalar(v));
                    }
                }
            }
        }
        other => {
            let _ = writeln!(out, "{pad}{}", scalar(other));
        }
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Number(n) => n.as_f64().map_or_else(|| n.to_string(), fmt_num),
        Value::Null => "n/a".into(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
