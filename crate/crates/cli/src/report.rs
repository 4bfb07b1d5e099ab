use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt::Write as _;

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub check: String,
    pub pass: bool,
    /// Informational verdicts are reported but do not affect the exit code.
    pub required: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Table {
    pub title: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(title: &str, header: &[&str]) -> Self {
        Table { title: title.into(), header: header.iter().map(|s| s.to_string()).collect(), rows: vec![] }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        self.rows.push(cells);
    }

    fn render(&self, out: &mut String) {
        let cols = self.header.len().max(self.rows.iter().map(Vec::len).max().unwrap_or(0));
        let mut width = vec![0; cols];
        for r in std::iter::once(&self.header).chain(&self.rows) {
            for (i, c) in r.iter().enumerate() {
                width[i] = width[i].max(c.chars().count());
            }
        }
        let line = |r: &[String]| -> String {
            r.iter()
                .enumerate()
                .map(|(i, c)| format!("{c:<w$}", w = width[i]))
                .collect::<Vec<_>>()
                .join("  ")
                .trim_end()
                .to_string()
        };
        let _ = writeln!(out, "{}", self.title);
        let _ = writeln!(out, "{}", line(&self.header));
        for r in &self.rows {
            let _ = writeln!(out, "{}", line(r));
        }
    }
}

/// Result of one command, rendered as aligned text or JSON.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: BTreeMap<String, String>,
    pub verdicts: Vec<Verdict>,
    pub residual_maxima: BTreeMap<String, f64>,
    pub tables: Vec<Table>,
    pub timings: BTreeMap<String, f64>,
    /// Free-form text (e.g. a dumped structure file) printed verbatim.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub text: Option<String>,
    /// Structured payload specific to the command.
    #[serde(skip_serializing_if = "serde_json::Value::is_null")]
    pub data: serde_json::Value,
    /// Print only `text`, with verdicts as `#` comments (keeps file output parseable).
    #[serde(skip)]
    pub quiet: bool,
    /// Verdicts are already spelled out in `text`.
    #[serde(skip)]
    pub quiet_verdicts: bool,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report { command: command.into(), ..Default::default() }
    }

    pub fn input(&mut self, k: &str, v: impl ToString) {
        self.inputs.insert(k.into(), v.to_string());
    }

    pub fn verdict(&mut self, check: &str, pass: bool, detail: impl Into<String>) {
        self.verdicts.push(Verdict { check: check.into(), pass, required: true, detail: detail.into() });
    }

    pub fn note(&mut self, check: &str, pass: bool, detail: impl Into<String>) {
        self.verdicts.push(Verdict { check: check.into(), pass, required: false, detail: detail.into() });
    }

    pub fn residual(&mut self, name: &str, v: f64) {
        self.residual_maxima.insert(name.into(), v);
    }

    pub fn pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass || !v.required)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(t) = &self.text {
            out.push_str(t);
            if !t.ends_with('\n') {
                out.push('\n');
            }
        }
        if self.quiet {
            for v in &self.verdicts {
                let _ = writeln!(out, "# {} {}: {}", if v.pass { "PASS" } else { "FAIL" }, v.check, v.detail);
            }
            return out;
        }
        if !self.inputs.is_empty() {
            let inputs: Vec<String> = self.inputs.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let _ = writeln!(out, "{}: {}", self.command, inputs.join(" "));
        }
        for t in &self.tables {
            t.render(&mut out);
            out.push('\n');
        }
        if !self.residual_maxima.is_empty() {
            let w = self.residual_maxima.keys().map(|k| k.len()).max().unwrap_or(0);
            out.push_str("residual maxima\n");
            for (k, v) in &self.residual_maxima {
                let _ = writeln!(out, "  {k:<w$}  {v:.3e}");
            }
        }
        for v in self.verdicts.iter().filter(|_| !self.quiet_verdicts) {
            let tag = match (v.pass, v.required) {
                (true, _) => "PASS",
                (false, true) => "FAIL",
                (false, false) => "no  ",
            };
            if v.detail.is_empty() {
                let _ = writeln!(out, "{tag} {}", v.check);
            } else {
                let _ = writeln!(out, "{tag} {}: {}", v.check, v.detail);
            }
        }
        if !self.timings.is_empty() {
            let total = self.timings.get("total").copied().unwrap_or_else(|| self.timings.values().sum());
            let _ = writeln!(out, "time {total:.2}s");
        }
        out
    }
}
