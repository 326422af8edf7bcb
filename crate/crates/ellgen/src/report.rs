//! Deterministic text and key-value rendering of command results.

use std::fmt::Write as _;

use clap::ValueEnum;
use ellgen_core::series::Ring;
use ellgen_core::QSeries;

use crate::complex::format_real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Text,
    Kv,
}

/// One verified statement.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub label: String,
    /// `None` when the check could not be evaluated or is exact.
    pub deviation: Option<f64>,
    pub tol: Option<f64>,
    pub passed: bool,
    pub note: Option<String>,
}

impl Check {
    pub fn numeric(label: impl Into<String>, deviation: f64, tol: f64) -> Self {
        Self {
            label: label.into(),
            deviation: Some(deviation),
            tol: Some(tol),
            passed: deviation < tol,
            note: None,
        }
    }

    pub fn exact(label: impl Into<String>, passed: bool) -> Self {
        Self {
            label: label.into(),
            deviation: None,
            tol: None,
            passed,
            note: None,
        }
    }

    pub fn failed(label: impl Into<String>, note: impl Into<String>) -> Self {
        Self {
            label: label.into(),
            deviation: None,
            tol: None,
            passed: false,
            note: Some(note.into()),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Report {
    pub command: String,
    pub fields: Vec<(String, String)>,
    pub checks: Vec<Check>,
    /// `(q-power, coefficient)` lines of an expansion.
    pub series: Vec<(String, String)>,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Self {
            command: command.into(),
            ..Self::default()
        }
    }

    pub fn field(&mut self, key: impl Into<String>, value: impl ToString) -> &mut Self {
        self.fields.push((key.into(), value.to_string()));
        self
    }

    pub fn check(&mut self, c: Check) -> &mut Self {
        self.checks.push(c);
        self
    }

    pub fn expansion<R: Ring + std::fmt::Display>(&mut self, s: &QSeries<R>) -> &mut Self {
        let off = s.offset();
        for (k, c) in s.coeffs().iter().enumerate() {
            let power = off + k as i64;
            let label = if power.is_integer() {
                power.to_integer().to_string()
            } else {
                power.to_string()
            };
            self.series.push((label, c.to_string()));
        }
        self
    }

    /// True iff every check passed.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Text => self.render_text(),
            OutputFormat::Kv => self.render_kv(),
        }
    }

    fn render_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "command: {}", self.command).unwrap();
        for (k, v) in &self.fields {
            writeln!(out, "{k}: {v}").unwrap();
        }
        for (k, c) in &self.series {
            writeln!(out, "q^{k}: {c}").unwrap();
        }
        for c in &self.checks {
            let mut line = format!("{} {}", if c.passed { "PASS" } else { "FAIL" }, c.label);
            if let Some(d) = c.deviation {
                write!(line, " deviation={}", format_real(d)).unwrap();
            }
            if let Some(t) = c.tol {
                write!(line, " tol={}", format_real(t)).unwrap();
            }
            if let Some(n) = &c.note {
                write!(line, " ({n})").unwrap();
            }
            writeln!(out, "{line}").unwrap();
        }
        if !self.checks.is_empty() {
            let failed = self.checks.iter().filter(|c| !c.passed).count();
            writeln!(
                out,
                "result: {} ({} checks, {failed} failed)",
                if failed == 0 { "PASS" } else { "FAIL" },
                self.checks.len()
            )
            .unwrap();
        }
        out
    }

    fn render_kv(&self) -> String {
        let mut out = String::new();
        writeln!(out, "command={}", self.command).unwrap();
        for (k, v) in &self.fields {
            writeln!(out, "{k}={v}").unwrap();
        }
        for (k, c) in &self.series {
            writeln!(out, "q^{k}={c}").unwrap();
        }
        for (i, c) in self.checks.iter().enumerate() {
            writeln!(out, "check.{i}.label={}", c.label).unwrap();
            writeln!(out, "check.{i}.passed={}", c.passed).unwrap();
            if let Some(d) = c.deviation {
                writeln!(out, "check.{i}.deviation={}", format_real(d)).unwrap();
            }
            if let Some(t) = c.tol {
                writeln!(out, "check.{i}.tol={}", format_real(t)).unwrap();
            }
            if let Some(n) = &c.note {
                writeln!(out, "check.{i}.note={n}").unwrap();
            }
        }
        if !self.checks.is_empty() {
            writeln!(out, "passed={}", self.passed()).unwrap();
        }
        out
    }
}
