use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum ReportFormat {
    #[default]
    Json,
    Text,
}

/// Every map is ordered, so serialization is byte-stable for a fixed input.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Report {
    pub schema_version: u32,
    pub input_digest: String,
    pub dims: BTreeMap<String, Vec<usize>>,
    pub exactness_table: BTreeMap<String, Vec<bool>>,
    pub verdicts: BTreeMap<String, Value>,
    pub timings: BTreeMap<String, f64>,
}

impl Report {
    pub fn new(input: &[u8]) -> Self {
        Report {
            schema_version: REPORT_SCHEMA_VERSION,
            input_digest: digest(input),
            dims: BTreeMap::new(),
            exactness_table: BTreeMap::new(),
            verdicts: BTreeMap::new(),
            timings: BTreeMap::new(),
        }
    }

    pub fn dims(&mut self, key: &str, v: &[usize]) {
        self.dims.insert(key.to_string(), v.to_vec());
    }

    pub fn verdict(&mut self, key: &str, v: impl Into<Value>) {
        self.verdicts.insert(key.to_string(), v.into());
    }

    pub fn render(&self, format: ReportFormat) -> String {
        match format {
            ReportFormat::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("report serializes");
                s.push('\n');
                s
            }
            ReportFormat::Text => self.render_text(),
        }
    }

    fn render_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "schema_version: {}", self.schema_version);
        let _ = writeln!(s, "input_digest: {}", self.input_digest);
        let _ = writeln!(s, "dims:");
        for (k, v) in &self.dims {
            let list: Vec<String> = v.iter().map(|d| d.to_string()).collect();
            let _ = writeln!(s, "  {k}: [{}]", list.join(", "));
        }
        if !self.exactness_table.is_empty() {
            let _ = writeln!(s, "exactness_table:");
            for (k, v) in &self.exactness_table {
                let row: String = v.iter().map(|&b| if b { '+' } else { '-' }).collect();
                let _ = writeln!(s, "  {k:<16} {row}");
            }
        }
        let _ = writeln!(s, "verdicts:");
        for (k, v) in &self.verdicts {
            let _ = writeln!(s, "  {k}: {v}");
        }
        s
    }
}

pub fn digest(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

/// `1 + 2t + 3t^2`, omitting zero coefficients.
pub fn series(dims: &[usize]) -> String {
    let terms: Vec<String> = dims
        .iter()
        .enumerate()
        .filter(|(_, &d)| d != 0)
        .map(|(n, &d)| match n {
            0 => d.to_string(),
            1 if d == 1 => "t".into(),
            1 => format!("{d}t"),
            _ if d == 1 => format!("t^{n}"),
            _ => format!("{d}t^{n}"),
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_formatting() {
        assert_eq!(series(&[1, 2, 1, 0]), "1 + 2t + t^2");
        assert_eq!(series(&[1, 1, 3]), "1 + t + 3t^2");
        assert_eq!(series(&[0, 0]), "0");
    }

    #[test]
    fn digest_is_sha256() {
        assert_eq!(digest(b""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    }
}
