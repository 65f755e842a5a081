//! Pass/fail checks, notes and CSV tables, rendered as text, JSON or CSV.

use std::fmt::Write;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Measured residual; for exact checks `0` on success and `1` on failure.
    pub residual: f64,
    pub tol: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    /// Passes when `residual ≤ tol` (a NaN residual fails).
    pub fn at_most(name: impl Into<String>, residual: f64, tol: f64) -> Self {
        Check { name: name.into(), passed: residual <= tol, residual, tol, note: None }
    }

    /// Passes when `residual > floor`; used for negative controls.
    pub fn above(name: impl Into<String>, residual: f64, floor: f64) -> Self {
        Check { name: name.into(), passed: residual > floor, residual, tol: floor, note: None }
    }

    /// An exact (symbolic) check.
    pub fn exact(name: impl Into<String>, ok: bool) -> Self {
        Check { name: name.into(), passed: ok, residual: if ok { 0.0 } else { 1.0 }, tol: 0.0, note: None }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Table { name: name.into(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    fn write_csv(&self, out: &mut String) {
        let _ = writeln!(out, "{}", self.columns.join(","));
        for row in &self.rows {
            let _ = writeln!(out, "{}", row.join(","));
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Report {
    pub title: String,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
    pub tables: Vec<Table>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Report { title: title.into(), ..Default::default() }
    }

    pub fn check(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn note(&mut self, n: impl Into<String>) {
        self.notes.push(n.into());
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed).count()
    }

    /// Process exit status: 0 iff every check passed.
    pub fn exit_code(&self) -> i32 {
        if self.all_passed() {
            0
        } else {
            1
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.render_text(),
            Format::Json => serde_json::to_string_pretty(self).expect("report is serializable") + "\n",
            Format::Csv => self.render_csv(),
        }
    }

    fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "== {} ==", self.title);
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        for c in &self.checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            let _ = write!(out, "{status}  {:<width$}  residual={} tol={}", c.name, num(c.residual), num(c.tol));
            if let Some(n) = &c.note {
                let _ = write!(out, "  ({n})");
            }
            out.push('\n');
        }
        for n in &self.notes {
            let _ = writeln!(out, "note: {n}");
        }
        for t in &self.tables {
            let _ = writeln!(out, "-- {} --", t.name);
            t.write_csv(&mut out);
        }
        let _ = writeln!(out, "{} checks, {} failed", self.checks.len(), self.failures());
        out
    }

    /// The tables as CSV blocks, or the checks themselves when there are no tables.
    fn render_csv(&self) -> String {
        let mut out = String::new();
        if self.tables.is_empty() {
            let _ = writeln!(out, "name,status,residual,tol");
            for c in &self.checks {
                let _ = writeln!(out, "{},{},{},{}", c.name, if c.passed { "pass" } else { "fail" }, num(c.residual), num(c.tol));
            }
        }
        for (i, t) in self.tables.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            t.write_csv(&mut out);
        }
        out
    }
}

/// Fixed-width scientific notation for residuals and tolerances.
pub fn num(x: f64) -> String {
    format!("{x:.3e}")
}

/// Full-precision scientific notation for table values.
pub fn val(x: f64) -> String {
    format!("{x:.15e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_code_and_rendering() {
        let mut r = Report::new("demo");
        r.check(Check::at_most("small", 1e-14, 1e-10));
        assert_eq!(r.exit_code(), 0);
        r.check(Check::at_most("nan", f64::NAN, 1e-10));
        assert_eq!(r.exit_code(), 1);
        let text = r.render(Format::Text);
        assert!(text.contains("PASS  small"));
        assert!(text.contains("FAIL  nan"));
        assert!(text.ends_with("2 checks, 1 failed\n"));
        let json: serde_json::Value = serde_json::from_str(&r.render(Format::Json)).unwrap();
        assert_eq!(json["checks"][0]["passed"], true);
        assert!(r.render(Format::Csv).starts_with("name,status,residual,tol\n"));
        assert!(Check::above("control", 0.5, 1e-2).passed);
        assert!(!Check::exact("x", false).passed);
    }
}
