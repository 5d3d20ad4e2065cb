//! Run reports: one structured summary per CLI invocation.
//!
//! The JSON form has a fixed key order (struct declaration order plus a
//! sorted tolerance map), so two runs over identical inputs produce
//! byte-identical reports except for `timing_ms`, which comes last.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::pinv::PenroseReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportStyle {
    Text,
    Json,
}

/// Summary of one command: what ran, which route produced the output, the
/// numeric knobs and measurements, and the Penrose residuals when a
/// pseudoinverse was involved.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub route_used: String,
    pub tolerances: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub penrose_residuals: Option<PenroseReport>,
    pub timing_ms: f64,
}

impl RunReport {
    pub fn new(command: &str) -> RunReport {
        RunReport {
            command: command.to_string(),
            route_used: String::new(),
            tolerances: BTreeMap::new(),
            penrose_residuals: None,
            timing_ms: 0.0,
        }
    }

    pub fn record(&mut self, name: &str, value: f64) {
        self.tolerances.insert(name.to_string(), value);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("command:     {}\n", self.command));
        if !self.route_used.is_empty() {
            out.push_str(&format!("route used:  {}\n", self.route_used));
        }
        for (name, value) in &self.tolerances {
            out.push_str(&format!("{name}: {value:e}\n"));
        }
        if let Some(p) = &self.penrose_residuals {
            out.push_str(&format!(
                "penrose residuals: r1={:.3e} r2={:.3e} r3={:.3e} r4={:.3e} (scale {:.3e})\n",
                p.r1, p.r2, p.r3, p.r4, p.scale
            ));
        }
        out.push_str(&format!("timing_ms:   {:.3}\n", self.timing_ms));
        out
    }

    pub fn render(&self, style: ReportStyle) -> String {
        match style {
            ReportStyle::Text => self.to_text(),
            ReportStyle::Json => {
                let mut s = self.to_json();
                s.push('\n');
                s
            }
        }
    }
}
