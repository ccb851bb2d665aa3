//! Byte-stable serializations of a `RunReport`.
//!
//! Keys are sorted (the JSON maps are `BTreeMap`s) and numbers are
//! integers, so equal reports give equal bytes. Timings are left out unless
//! asked for, since they are the only nondeterministic field.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::run::RunReport;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Format> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            _ => Err(Error::Invalid(format!("unknown format {s:?}"))),
        }
    }
}

/// Scalars print bare, everything else as compact JSON.
pub fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

pub fn emit(report: &RunReport, format: Format, timing: bool) -> Result<String> {
    match format {
        Format::Json => {
            let mut v = serde_json::to_value(report)?;
            if !timing {
                if let Some(rs) = v.get_mut("results").and_then(Value::as_array_mut) {
                    for r in rs {
                        r.as_object_mut().map(|o| o.remove("millis"));
                    }
                }
            }
            Ok(serde_json::to_string_pretty(&v)? + "\n")
        }
        Format::Csv => {
            let keys: BTreeSet<&String> = report
                .results
                .iter()
                .flat_map(|r| r.computed.keys())
                .collect();
            let mut w = csv::Writer::from_writer(Vec::new());
            let mut header = vec!["id".to_string(), "pass".to_string()];
            header.extend(keys.iter().map(|k| k.to_string()));
            header.push("error".into());
            if timing {
                header.push("millis".into());
            }
            w.write_record(&header)
                .map_err(|e| Error::Fixture(e.to_string()))?;
            for r in &report.results {
                let mut rec = vec![r.id.clone(), r.pass.to_string()];
                rec.extend(
                    keys.iter()
                        .map(|k| r.computed.get(*k).map(cell).unwrap_or_default()),
                );
                rec.push(r.error.clone().unwrap_or_default());
                if timing {
                    rec.push(r.millis.to_string());
                }
                w.write_record(&rec)
                    .map_err(|e| Error::Fixture(e.to_string()))?;
            }
            let bytes = w.into_inner().map_err(|e| Error::Fixture(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| Error::Fixture(e.to_string()))
        }
        Format::Text => {
            let mut s = String::new();
            for r in &report.results {
                let tag = if r.pass { "PASS" } else { "FAIL" };
                let vals: Vec<String> = r
                    .computed
                    .iter()
                    .map(|(k, v)| format!("{k}={}", cell(v)))
                    .collect();
                let _ = write!(s, "{tag} {}  {}", r.id, vals.join(" "));
                if timing {
                    let _ = write!(s, "  ({} ms)", r.millis);
                }
                s.push('\n');
                if let Some(e) = &r.error {
                    let _ = writeln!(s, "     error: {e}");
                }
                for k in &r.mismatched {
                    let got = r
                        .computed
                        .get(k)
                        .map(cell)
                        .unwrap_or_else(|| "<missing>".into());
                    let _ = writeln!(
                        s,
                        "     {k}: expected {}, computed {got}",
                        cell(&r.expected[k])
                    );
                }
            }
            let _ = writeln!(
                s,
                "{}: {} passed, {} failed (seed {})",
                report.suite, report.passed, report.failed, report.seed
            );
            Ok(s)
        }
    }
}
