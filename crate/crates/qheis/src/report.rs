//! Machine-readable run reports: check records, per-criterion status,
//! environment stamp and timings, written as JSON with a CSV summary.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use serde::Serialize;

use crate::config::RunConfig;
use crate::error::Result;

/// How `measured` is compared with `expected`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// measured ≤ tolerance; `expected` is 0.
    Bound,
    /// |measured − expected| ≤ tolerance
    Abs,
    /// |measured/expected − 1| ≤ tolerance
    Rel,
}

#[derive(Clone, Debug, Serialize)]
pub struct Record {
    pub name: String,
    /// Acceptance criterion the check belongs to (1–10); 0 for demo records.
    pub criterion: u8,
    /// Short label of the identity being checked.
    pub anchor: String,
    pub measured: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub mode: Mode,
    pub pass: bool,
}

impl Record {
    pub fn new(
        criterion: u8,
        name: &str,
        anchor: &str,
        mode: Mode,
        measured: f64,
        expected: f64,
        tolerance: f64,
    ) -> Self {
        let dev = match mode {
            Mode::Bound => measured,
            Mode::Abs => (measured - expected).abs(),
            Mode::Rel => (measured / expected - 1.0).abs(),
        };
        Record {
            name: name.into(),
            criterion,
            anchor: anchor.into(),
            measured,
            expected,
            tolerance,
            mode,
            pass: dev <= tolerance,
        }
    }

    pub fn bound(criterion: u8, name: &str, anchor: &str, measured: f64, tolerance: f64) -> Self {
        Self::new(criterion, name, anchor, Mode::Bound, measured, 0.0, tolerance)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Timing {
    pub name: String,
    pub criterion: u8,
    pub seconds: f64,
    /// Wall-clock budget, if the criterion sets one.
    pub limit: Option<f64>,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionStatus {
    pub id: u8,
    pub checks: usize,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Environment {
    pub version: &'static str,
    pub os: &'static str,
    pub arch: &'static str,
    pub threads: usize,
    pub debug_assertions: bool,
}

impl Environment {
    pub fn current() -> Self {
        Environment {
            version: env!("CARGO_PKG_VERSION"),
            os: std::env::consts::OS,
            arch: std::env::consts::ARCH,
            threads: rayon::current_num_threads(),
            debug_assertions: cfg!(debug_assertions),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub config: RunConfig,
    pub environment: Environment,
    pub records: Vec<Record>,
    pub criteria: Vec<CriterionStatus>,
    pub warnings: Vec<String>,
    /// Paths of fields and tables written by the run.
    pub artifacts: Vec<String>,
    pub timings: Vec<Timing>,
    pub pass: bool,
}

impl Report {
    pub fn new(command: &str, config: &RunConfig) -> Self {
        Report {
            command: command.into(),
            config: config.clone(),
            environment: Environment::current(),
            records: Vec::new(),
            criteria: Vec::new(),
            warnings: Vec::new(),
            artifacts: Vec::new(),
            timings: Vec::new(),
            pass: true,
        }
    }

    pub fn push(&mut self, r: Record) {
        self.records.push(r);
    }

    /// Runs `f`, records its wall time against `limit` and returns its value.
    pub fn timed<T>(&mut self, name: &str, criterion: u8, limit: Option<f64>, f: impl FnOnce(&mut Self) -> T) -> T {
        let t = Instant::now();
        let out = f(self);
        let seconds = t.elapsed().as_secs_f64();
        let pass = limit.is_none_or(|l| seconds <= l);
        self.timings.push(Timing { name: name.into(), criterion, seconds, limit, pass });
        out
    }

    pub fn absorb(&mut self, other: Report) {
        self.records.extend(other.records);
        self.warnings.extend(other.warnings);
        self.artifacts.extend(other.artifacts);
        self.timings.extend(other.timings);
    }

    /// Recomputes the per-criterion table and the overall verdict.
    pub fn finish(&mut self) {
        let mut by: BTreeMap<u8, (usize, bool)> = BTreeMap::new();
        for r in &self.records {
            let e = by.entry(r.criterion).or_insert((0, true));
            e.0 += 1;
            e.1 &= r.pass;
        }
        for t in &self.timings {
            by.entry(t.criterion).or_insert((0, true)).1 &= t.pass;
        }
        self.criteria = by
            .into_iter()
            .filter(|(id, _)| *id > 0)
            .map(|(id, (checks, pass))| CriterionStatus { id, checks, pass })
            .collect();
        self.pass = self.records.iter().all(|r| r.pass) && self.timings.iter().all(|t| t.pass);
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// The report without timings, for run-to-run comparison.
    pub fn numeric_json(&self) -> Result<String> {
        let mut v = serde_json::to_value(self)?;
        if let Some(m) = v.as_object_mut() {
            m.remove("timings");
        }
        Ok(serde_json::to_string(&v)?)
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(["criterion", "name", "anchor", "measured", "expected", "tolerance", "mode", "pass"])?;
        for r in &self.records {
            w.write_record([
                r.criterion.to_string(),
                r.name.clone(),
                r.anchor.clone(),
                format!("{:e}", r.measured),
                format!("{:e}", r.expected),
                format!("{:e}", r.tolerance),
                serde_json::to_value(r.mode)?.as_str().unwrap_or_default().to_string(),
                r.pass.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Writes `<stem>.json` and `<stem>.csv` into `dir`.
    pub fn save(&self, dir: impl AsRef<Path>, stem: &str) -> Result<()> {
        let dir = dir.as_ref();
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join(format!("{stem}.json")), self.to_json()?)?;
        self.write_csv(dir.join(format!("{stem}.csv")))
    }

    /// One line per criterion, then failing records.
    pub fn summary(&self) -> String {
        let mut s = String::new();
        for c in &self.criteria {
            s.push_str(&format!(
                "criterion {:>2}: {} ({} checks)\n",
                c.id,
                if c.pass { "PASS" } else { "FAIL" },
                c.checks
            ));
        }
        for r in self.records.iter().filter(|r| !r.pass) {
            s.push_str(&format!(
                "  failed {}: measured {:.4e}, expected {:.4e}, tolerance {:.1e}\n",
                r.name, r.measured, r.expected, r.tolerance
            ));
        }
        for t in self.timings.iter().filter(|t| !t.pass) {
            s.push_str(&format!("  slow {}: {:.1} s over {:.0} s\n", t.name, t.seconds, t.limit.unwrap_or(0.0)));
        }
        for w in &self.warnings {
            s.push_str(&format!("  warning: {w}\n"));
        }
        s
    }
}
