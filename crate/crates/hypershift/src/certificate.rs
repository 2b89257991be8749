//! One envelope for every machine-readable output: what was checked, at
//! which resolution, with which parameters, what was found, and the
//! verdict. Payloads carry words as digit strings and rationals as "p/q".

use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Resolution {
    pub depth: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub horizon: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_max: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m_max: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_max: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gap_max: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
}

impl Resolution {
    pub fn depth(depth: usize) -> Resolution {
        Resolution { depth, ..Resolution::default() }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Meta {
    pub generated_at_unix: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Certificate {
    pub kind: String,
    pub spec: String,
    pub resolution: Resolution,
    pub parameters: Value,
    pub witnesses: Value,
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub meta: Option<Meta>,
}

impl Certificate {
    pub fn new(
        kind: &str,
        spec: &str,
        resolution: Resolution,
        parameters: Value,
        witnesses: Value,
        verdict: &str,
    ) -> Certificate {
        Certificate {
            kind: kind.into(),
            spec: spec.into(),
            resolution,
            parameters,
            witnesses,
            verdict: verdict.into(),
            meta: None,
        }
    }

    /// Stamp the envelope; skipped entirely under `--reproducible`.
    pub fn stamped(mut self) -> Certificate {
        let now = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        self.meta = Some(Meta { generated_at_unix: now });
        self
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)
            .map_err(|e| Error::Internal(format!("certificate serialisation failed: {e}")))?;
        s.push('\n');
        Ok(s)
    }

    pub fn to_text(&self) -> Result<String> {
        let resolution = serde_json::to_value(self.resolution)
            .map_err(|e| Error::Internal(format!("certificate serialisation failed: {e}")))?;
        let mut out = String::new();
        out.push_str(&format!("kind: {}\n", self.kind));
        out.push_str(&format!("spec: {}\n", self.spec));
        let sections: [(&str, Value); 3] = [
            ("resolution", resolution),
            ("parameters", self.parameters.clone()),
            ("witnesses", self.witnesses.clone()),
        ];
        for (name, value) in sections {
            if matches!(&value, Value::Object(m) if m.is_empty()) {
                out.push_str(&format!("{name}: (none)\n"));
            } else {
                out.push_str(&format!("{name}:\n"));
                render(&value, 1, &mut out);
            }
        }
        out.push_str(&format!("verdict: {}\n", self.verdict));
        if let Some(meta) = &self.meta {
            out.push_str(&format!("generated_at_unix: {}\n", meta.generated_at_unix));
        }
        Ok(out)
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("absent".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        _ => None,
    }
}

fn render(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, val) in map {
                match scalar(val) {
                    Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    None if matches!(val, Value::Array(a) if a.is_empty()) => {
                        out.push_str(&format!("{pad}{k}: (none)\n"))
                    }
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render(val, indent + 1, out);
                    }
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                match scalar(item) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}-\n"));
                        render(item, indent + 1, out);
                    }
                }
            }
        }
        other => {
            if let Some(s) = scalar(other) {
                out.push_str(&format!("{pad}{s}\n"));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn envelope_shape_and_rendering() {
        let cert = Certificate::new(
            "mixing",
            "full:k=2",
            Resolution { horizon: Some(5), ..Resolution::depth(12) },
            json!({"u": "01", "v": "10"}),
            json!({"N": 1, "gaps": [{"n": 1, "w": ""}]}),
            "certified",
        );
        let j = cert.to_json().unwrap();
        assert!(j.starts_with("{\n  \"kind\": \"mixing\""));
        assert!(j.ends_with("}\n"));
        assert!(!j.contains("meta"));
        let stamped = cert.clone().stamped();
        assert!(stamped.to_json().unwrap().contains("generated_at_unix"));

        let t = cert.to_text().unwrap();
        assert!(t.contains("kind: mixing\n"));
        assert!(t.contains("verdict: certified\n"));
        // nested array of objects renders as list items
        assert!(t.contains("- \n") || t.contains("-\n"));
    }
}
