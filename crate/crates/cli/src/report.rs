//! Distance reports: value or bounds, certificate, flags and runtime.

use mmdist::checks::Outcome;
use mmdist::{Coupling, PairSet};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    pub side: &'static str,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub kind: &'static str,
    pub a: String,
    pub b: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lower: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub upper: Option<f64>,
    pub flags: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certified_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pairset: Option<Vec<(usize, usize)>>,
    pub coupling: Vec<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    /// The reported value (or upper bound) recomputed from the certificate alone.
    pub reevaluated: f64,
    pub runtime_ms: f64,
}

impl Report {
    pub fn new(kind: &'static str, a: &str, b: &str, coupling: &Coupling) -> Self {
        Report {
            kind,
            a: a.to_string(),
            b: b.to_string(),
            value: None,
            lower: None,
            upper: None,
            flags: Vec::new(),
            threshold: None,
            epsilon: None,
            certified_error: None,
            pairset: None,
            coupling: coupling.matrix(),
            witness: None,
            reevaluated: f64::NAN,
            runtime_ms: 0.0,
        }
    }

    pub fn with_pairset(mut self, s: &PairSet) -> Self {
        self.pairset = Some(s.iter().collect());
        self
    }

    /// The number the certificate must reproduce.
    pub fn headline(&self) -> f64 {
        self.value.or(self.upper).unwrap_or(f64::NAN)
    }

    pub fn reproduced(&self, tolerance: f64) -> bool {
        (self.reevaluated - self.headline()).abs() <= tolerance
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string(self).expect("reports serialize"),
            Format::Table => self.table(),
        }
    }

    fn table(&self) -> String {
        let mut rows: Vec<(&str, String)> = vec![("kind", self.kind.to_string()), ("spaces", format!("{} vs {}", self.a, self.b))];
        if let Some(v) = self.value {
            rows.push(("value", format!("{v}")));
        }
        if let (Some(l), Some(u)) = (self.lower, self.upper) {
            rows.push(("bounds", format!("[{l}, {u}]")));
        }
        if !self.flags.is_empty() {
            rows.push(("flags", self.flags.join(", ")));
        }
        if let Some(t) = self.threshold {
            rows.push(("threshold", format!("{t}")));
        }
        if let Some(e) = self.epsilon {
            rows.push(("epsilon", format!("{e}")));
        }
        if let Some(e) = self.certified_error {
            rows.push(("certified error", format!("{e}")));
        }
        if let Some(s) = &self.pairset {
            let parts: Vec<String> = s.iter().map(|(i, j)| format!("({i},{j})")).collect();
            rows.push(("pair set", format!("{{{}}}", parts.join(", "))));
        }
        for (i, row) in self.coupling.iter().enumerate() {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:.6}")).collect();
            rows.push((if i == 0 { "coupling" } else { "" }, cells.join("  ")));
        }
        if let Some(w) = &self.witness {
            rows.push(("witness", format!("f on {} = {:?}", w.side, w.values)));
        }
        rows.push(("re-evaluated", format!("{}", self.reevaluated)));
        rows.push(("runtime", format!("{:.3} ms", self.runtime_ms)));
        let width = rows.iter().map(|r| r.0.len()).max().unwrap_or(0);
        rows.iter().map(|(k, v)| format!("{k:<width$}  {v}\n")).collect()
    }
}

#[derive(Serialize)]
struct OutcomeLine<'a> {
    check: &'a str,
    passed: bool,
    cases: usize,
    elapsed_ms: f64,
    failures: &'a [String],
}

pub fn render_outcome(o: &Outcome, format: Format) -> String {
    match format {
        Format::Json => {
            let line = OutcomeLine {
                check: &o.name,
                passed: o.passed(),
                cases: o.cases,
                elapsed_ms: o.elapsed.as_secs_f64() * 1e3,
                failures: &o.failures,
            };
            serde_json::to_string(&line).expect("outcomes serialize")
        }
        Format::Table => {
            let mut s = format!(
                "{}  {:<55} {:>5} cases  {:>10.3} ms",
                if o.passed() { "PASS" } else { "FAIL" },
                o.name,
                o.cases,
                o.elapsed.as_secs_f64() * 1e3
            );
            for f in &o.failures {
                s.push_str("\n      counterexample: ");
                s.push_str(f);
            }
            s
        }
    }
}
