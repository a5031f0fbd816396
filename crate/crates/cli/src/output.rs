//! CSV and JSON writers. Both carry a provenance block: tool version, the
//! command and the complete resolved configuration.

use std::fmt::Write as _;

use anyhow::Result;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::RunConfig;

/// 12 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.11e}")
}

pub struct Csv {
    text: String,
}

impl Csv {
    pub fn new(command: &str, cfg: &RunConfig, notes: &[String]) -> Result<Self> {
        let mut text = String::new();
        writeln!(text, "# kerrsq {}", kerrsq::VERSION)?;
        writeln!(text, "# command: {command}")?;
        writeln!(text, "# config: {}", serde_json::to_string(cfg)?)?;
        for n in notes {
            writeln!(text, "# {n}")?;
        }
        Ok(Csv { text })
    }

    pub fn header(&mut self, columns: &[&str]) {
        self.text.push_str(&columns.join(","));
        self.text.push('\n');
    }

    pub fn row(&mut self, cells: &[String]) {
        self.text.push_str(&cells.join(","));
        self.text.push('\n');
    }

    pub fn finish(self) -> String {
        self.text
    }
}

pub fn json_document(command: &str, cfg: &RunConfig, result: &impl Serialize) -> Result<String> {
    let doc: Value = json!({
        "provenance": {
            "tool": "kerrsq",
            "version": kerrsq::VERSION,
            "command": command,
            "config": cfg,
        },
        "result": result,
    });
    let mut s = serde_json::to_string_pretty(&doc)?;
    s.push('\n');
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(num(0.25), "2.50000000000e-1");
        assert_eq!(num(0.013932022500210195), "1.39320225002e-2");
        assert_eq!(num(-3.0), "-3.00000000000e0");
    }

    #[test]
    fn csv_has_provenance_then_header() {
        let mut csv = Csv::new("spectrum", &RunConfig::default(), &["warning: x".into()]).unwrap();
        csv.header(&["Omega", "S_X"]);
        csv.row(&[num(0.0), num(0.25)]);
        let text = csv.finish();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with("# kerrsq "));
        assert_eq!(lines[1], "# command: spectrum");
        assert!(lines[2].starts_with("# config: {"));
        assert_eq!(lines[3], "# warning: x");
        assert_eq!(lines[4], "Omega,S_X");
        assert_eq!(lines.len(), 6);
    }
}
