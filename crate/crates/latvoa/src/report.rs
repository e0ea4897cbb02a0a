//! Job reports and their JSON, CSV and text renderings.
//!
//! Every number in a report is an exact integer or fraction written as a
//! string, and every collection is emitted in a fixed order, so equal jobs
//! render to equal bytes.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use latvoa_core::axioms::CheckReport;
use serde::Serialize;

/// Counterexamples kept per check; the total count is always reported.
pub const MAX_FAILURES: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LatticeEntry {
    pub name: String,
    pub gram: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FailureEntry {
    pub inputs: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckEntry {
    pub name: String,
    pub instances: u64,
    pub passed: bool,
    pub failures_total: usize,
    pub failures: Vec<FailureEntry>,
}

impl CheckEntry {
    /// Entry for `report`, labelled `scope/name`.
    pub fn from_report(scope: &str, report: &CheckReport) -> Self {
        Self {
            name: format!("{scope}/{}", report.name),
            instances: report.instances_checked,
            passed: report.passed(),
            failures_total: report.failures.len(),
            failures: report
                .failures
                .iter()
                .take(MAX_FAILURES)
                .map(|f| FailureEntry {
                    inputs: f.inputs.clone(),
                    lhs: f.lhs.clone(),
                    rhs: f.rhs.clone(),
                })
                .collect(),
        }
    }

    /// A single-instance check with an explanatory failure record.
    pub fn single(
        name: impl Into<String>,
        ok: bool,
        inputs: &str,
        got: &str,
        expected: &str,
    ) -> Self {
        let failures = if ok {
            Vec::new()
        } else {
            vec![FailureEntry {
                inputs: inputs.to_string(),
                lhs: got.to_string(),
                rhs: expected.to_string(),
            }]
        };
        Self {
            name: name.into(),
            instances: 1,
            passed: ok,
            failures_total: failures.len(),
            failures,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: impl Into<String>, columns: &[&str]) -> Self {
        Self {
            name: name.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub command: String,
    pub seed: String,
    pub max_weight: String,
    pub sectors: String,
    pub depth: String,
    pub lattices: Vec<LatticeEntry>,
    pub passed: bool,
    pub checks: Vec<CheckEntry>,
    pub tables: Vec<Table>,
}

impl Report {
    pub fn finish(&mut self) {
        self.passed = self.checks.iter().all(|c| c.passed);
    }

    pub fn render(&self, format: Format) -> Vec<u8> {
        match format {
            Format::Json => {
                let mut out = serde_json::to_vec_pretty(self).expect("report serializes");
                out.push(b'\n');
                out
            }
            Format::Csv => self.render_csv(),
            Format::Text => self.render_text().into_bytes(),
        }
    }

    /// Sections separated by a blank line: header, checks, failures, then
    /// one section per table.
    fn render_csv(&self) -> Vec<u8> {
        let mut out = Vec::new();
        let mut section = |rows: Vec<Vec<String>>| {
            let mut w = csv::WriterBuilder::new()
                .flexible(true)
                .from_writer(Vec::new());
            for row in rows {
                w.write_record(&row).expect("in-memory write");
            }
            if !out.is_empty() {
                out.push(b'\n');
            }
            out.extend(w.into_inner().expect("in-memory flush"));
        };
        let lattices: Vec<String> = self
            .lattices
            .iter()
            .map(|l| format!("{}={:?}", l.name, l.gram))
            .collect();
        section(vec![
            strings(&[
                "command",
                "seed",
                "max_weight",
                "sectors",
                "depth",
                "lattices",
                "passed",
            ]),
            vec![
                self.command.clone(),
                self.seed.clone(),
                self.max_weight.clone(),
                self.sectors.clone(),
                self.depth.clone(),
                lattices.join(" "),
                self.passed.to_string(),
            ],
        ]);
        let mut checks = vec![strings(&["check", "instances", "passed", "failures"])];
        let mut failures = vec![strings(&["check", "inputs", "lhs", "rhs"])];
        for c in &self.checks {
            checks.push(vec![
                c.name.clone(),
                c.instances.to_string(),
                c.passed.to_string(),
                c.failures_total.to_string(),
            ]);
            for f in &c.failures {
                failures.push(vec![
                    c.name.clone(),
                    f.inputs.clone(),
                    f.lhs.clone(),
                    f.rhs.clone(),
                ]);
            }
        }
        section(checks);
        if failures.len() > 1 {
            section(failures);
        }
        for t in &self.tables {
            let mut rows = vec![vec![format!("table:{}", t.name)], t.columns.clone()];
            rows.extend(t.rows.iter().cloned());
            section(rows);
        }
        out
    }

    fn render_text(&self) -> String {
        let mut s = String::new();
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        let _ = writeln!(s, "{} {}", self.command, verdict);
        let _ = writeln!(
            s,
            "seed {}  max weight {}  sectors {}  depth {}",
            self.seed, self.max_weight, self.sectors, self.depth
        );
        for l in &self.lattices {
            let _ = writeln!(s, "lattice {} gram {:?}", l.name, l.gram);
        }
        let _ = writeln!(s);
        for c in &self.checks {
            let v = if c.passed { "ok  " } else { "FAIL" };
            let _ = writeln!(s, "{v} {} ({} instances)", c.name, c.instances);
            for f in &c.failures {
                let _ = writeln!(
                    s,
                    "     at {}\n       lhs {}\n       rhs {}",
                    f.inputs, f.lhs, f.rhs
                );
            }
            if c.failures_total > c.failures.len() {
                let _ = writeln!(s, "     ... {} failures in total", c.failures_total);
            }
        }
        for t in &self.tables {
            let _ = writeln!(s, "\n[{}]", t.name);
            let mut widths: Vec<usize> = t.columns.iter().map(|c| c.chars().count()).collect();
            for r in &t.rows {
                for (w, cell) in widths.iter_mut().zip(r) {
                    *w = (*w).max(cell.chars().count());
                }
            }
            let line = |cells: &[String]| {
                cells
                    .iter()
                    .zip(&widths)
                    .map(|(c, w)| format!("{c:<w$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
                    .trim_end()
                    .to_string()
            };
            let _ = writeln!(s, "{}", line(&t.columns));
            for r in &t.rows {
                let _ = writeln!(s, "{}", line(r));
            }
        }
        s
    }
}

fn strings(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

/// Writes `bytes` to `path` through a temporary file in the same directory,
/// so readers see either the old file or the complete new one.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
