//! Runs every suite once and prints one verdict line per acceptance criterion.

use std::io::Write;

use qheis::config::RunConfig;
use qheis::report::{Mode, Report};
use qheis::suites::{run_selftest, Suite};

fn line(rep: &Report, id: u8) -> (bool, String) {
    let status = rep.criteria.iter().filter(|c| c.id == id).collect::<Vec<_>>();
    assert_eq!(status.len(), 1, "criterion {id} must appear exactly once");
    let mut parts: Vec<String> = rep
        .records
        .iter()
        .filter(|r| r.criterion == id)
        .map(|r| {
            let against = match r.mode {
                Mode::Bound => String::new(),
                Mode::Abs => format!(" vs {:.6e}, abs", r.expected),
                Mode::Rel => format!(" vs {:.4e}, rel", r.expected),
            };
            let verdict = if r.pass { "" } else { " FAIL" };
            format!("{} {:.4e}{against} (tol {:.1e}){verdict}", r.name, r.measured, r.tolerance)
        })
        .collect();
    for t in rep.timings.iter().filter(|t| t.criterion == id) {
        let limit = t.limit.map(|l| format!(" of {l:.0} s")).unwrap_or_default();
        parts.push(format!("{} {:.1} s{limit}", t.name, t.seconds));
    }
    let pass = status[0].pass;
    (pass, format!("criterion {id:>2}: {}  {}", if pass { "PASS" } else { "FAIL" }, parts.join("; ")))
}

#[test]
fn acceptance() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = RunConfig { out: dir.path().to_path_buf(), ..RunConfig::default() };
    let rep = run_selftest(&cfg, Suite::All).unwrap();
    let mut failed = Vec::new();
    for id in 1..=10 {
        let (pass, text) = line(&rep, id);
        // straight to the handle so the lines survive output capture
        writeln!(std::io::stderr(), "{text}").unwrap();
        if !pass {
            failed.push(id);
        }
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
