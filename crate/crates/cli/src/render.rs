//! Report rendering: a fixed JSON schema for machines and a text layout
//! for people. Both are deterministic; repeated runs produce identical
//! bytes.

use std::fmt::Write as _;
use std::io;

use serde::Serialize;

use csco_core::criterion::{CriterionReport, StateVerdict};
use csco_core::csco::CscoStatus;
use csco_core::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

/// Render one report.
pub fn render_report(report: &CriterionReport, format: Format) -> Result<String> {
    match format {
        Format::Text => Ok(render_text(report)),
        Format::Json => {
            let mut out = to_json_bytes(&ReportDoc::from(report))?;
            out.push(b'\n');
            String::from_utf8(out).map_err(|e| Error::Input(format!("non-UTF8 output: {e}")))
        }
    }
}

/// Render a bundle of reports (builtins with several B-set variants).
/// Text output concatenates the sections; JSON emits a single object for
/// one report and an array for several.
pub fn render_reports(reports: &[CriterionReport], format: Format) -> Result<String> {
    match format {
        Format::Text => {
            let mut out = String::new();
            for (i, r) in reports.iter().enumerate() {
                if i > 0 {
                    out.push('\n');
                }
                out.push_str(&render_text(r));
            }
            Ok(out)
        }
        Format::Json => {
            if reports.len() == 1 {
                return render_report(&reports[0], Format::Json);
            }
            let docs: Vec<ReportDoc> = reports.iter().map(ReportDoc::from).collect();
            let mut out = to_json_bytes(&docs)?;
            out.push(b'\n');
            String::from_utf8(out).map_err(|e| Error::Input(format!("non-UTF8 output: {e}")))
        }
    }
}

#[derive(Serialize)]
struct ReportDoc {
    scenario: String,
    a_csco: CscoDoc,
    b_csco: CscoDoc,
    c_norms: Vec<Vec<f64>>,
    condition_a_rows: Vec<bool>,
    expected_c_match: Option<Vec<Vec<bool>>>,
    states: Vec<StateDoc>,
    uncertainty_ok: bool,
}

#[derive(Serialize)]
struct CscoDoc {
    commuting: bool,
    complete: bool,
    duplicates: Vec<Vec<f64>>,
}

#[derive(Serialize)]
struct StateDoc {
    a_labels: Vec<f64>,
    expectation_max: f64,
    action_norms: Vec<Vec<f64>>,
    condition_b_literal: bool,
    condition_b_operational: bool,
    criterion_verdict: String,
    oracle_verdict: Option<String>,
    distribution: Vec<DistPointDoc>,
    mutual_information: Vec<Vec<f64>>,
    schmidt_rank: Option<usize>,
    agreement: Option<bool>,
}

#[derive(Serialize)]
struct DistPointDoc {
    b_labels: Vec<f64>,
    p: f64,
}

impl From<&CriterionReport> for ReportDoc {
    fn from(r: &CriterionReport) -> Self {
        ReportDoc {
            scenario: r.scenario.clone(),
            a_csco: CscoDoc::from(&r.a_status),
            b_csco: CscoDoc::from(&r.b_status),
            c_norms: r.c_norms.clone(),
            condition_a_rows: r.condition_a_rows.clone(),
            expected_c_match: r.expected_c_match.clone(),
            states: r.states.iter().map(StateDoc::from).collect(),
            uncertainty_ok: r.uncertainty_ok,
        }
    }
}

impl From<&CscoStatus> for CscoDoc {
    fn from(s: &CscoStatus) -> Self {
        CscoDoc {
            commuting: s.commuting,
            complete: s.complete,
            duplicates: s.degenerate_label_groups.clone(),
        }
    }
}

impl From<&StateVerdict> for StateDoc {
    fn from(s: &StateVerdict) -> Self {
        let (distribution, mutual_information) = match &s.distribution {
            Some(d) => (
                d.support
                    .iter()
                    .map(|(labels, p)| DistPointDoc {
                        b_labels: labels.clone(),
                        p: *p,
                    })
                    .collect(),
                d.mutual_information.clone(),
            ),
            None => (Vec::new(), Vec::new()),
        };
        StateDoc {
            a_labels: s.a_labels.clone(),
            expectation_max: s.expectation_max,
            action_norms: s.action_norms.clone(),
            condition_b_literal: s.condition_b_literal,
            condition_b_operational: s.condition_b_operational,
            criterion_verdict: s.criterion_verdict.as_str().to_string(),
            oracle_verdict: s.oracle_verdict.map(|o| o.as_str().to_string()),
            distribution,
            mutual_information,
            schmidt_rank: s.schmidt_rank,
            agreement: s.agreement,
        }
    }
}

/// JSON formatter that writes every float in scientific notation with 17
/// significant digits, enough to reconstruct the exact f64.
struct PreciseFormatter;

impl serde_json::ser::Formatter for PreciseFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        write!(writer, "{value:.16e}")
    }
}

fn to_json_bytes<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, PreciseFormatter);
    value
        .serialize(&mut ser)
        .map_err(|e| Error::Input(format!("serialization failed: {e}")))?;
    Ok(out)
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn csco_line(which: &str, s: &CscoStatus) -> String {
    let verdict = if s.commuting && s.complete {
        "CSCO".to_string()
    } else if !s.commuting {
        "NOT a CSCO (observables do not commute)".to_string()
    } else {
        let dups: Vec<String> = s
            .degenerate_label_groups
            .iter()
            .map(|t| format_tuple(t))
            .collect();
        format!("NOT a CSCO (degenerate joint labels: {})", dups.join(", "))
    };
    format!(
        "{which} set: {verdict}  [max commutator norm {:.3e}]",
        s.max_commutator_norm
    )
}

fn format_tuple(values: &[f64]) -> String {
    let inner: Vec<String> = values.iter().map(|v| format!("{v:.4}")).collect();
    format!("({})", inner.join(", "))
}

fn render_text(r: &CriterionReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "scenario: {}", r.scenario);
    let _ = writeln!(out, "{}", csco_line("A", &r.a_status));
    let _ = writeln!(out, "{}", csco_line("B", &r.b_status));

    let _ = writeln!(out, "commutator norms ‖C_ij‖_F (rows = B, cols = A):");
    for row in &r.c_norms {
        let cells: Vec<String> = row.iter().map(|n| format!("{n:10.6}")).collect();
        let _ = writeln!(out, "    {}", cells.join("  "));
    }
    let rows: Vec<String> = r
        .condition_a_rows
        .iter()
        .map(|&b| yes_no(b).to_string())
        .collect();
    let _ = writeln!(out, "condition (a) per row: [{}]", rows.join(", "));

    match &r.expected_c_match {
        None => {}
        Some(grid) => {
            let all = grid.iter().flatten().all(|&b| b);
            if all {
                let _ = writeln!(out, "expected C grid: all entries match");
            } else {
                let _ = writeln!(out, "expected C grid: MISMATCH");
                for (i, row) in grid.iter().enumerate() {
                    for (j, &ok) in row.iter().enumerate() {
                        if !ok {
                            let _ = writeln!(out, "    entry ({}, {}) differs", i + 1, j + 1);
                        }
                    }
                }
            }
        }
    }

    let _ = writeln!(out, "states ({}):", r.states.len());
    let mut disagreements = 0usize;
    for s in &r.states {
        let oracle = s
            .oracle_verdict
            .map_or("SKIPPED".to_string(), |o| o.as_str().to_string());
        let agreement = s
            .agreement
            .map_or("-".to_string(), |a| yes_no(a).to_string());
        let schmidt = s
            .schmidt_rank
            .map_or("-".to_string(), |rank| rank.to_string());
        let _ = writeln!(
            out,
            "  {}  {:<20} oracle {:<13} agreement {:<3} schmidt rank {}",
            format_tuple(&s.a_labels),
            s.criterion_verdict.as_str(),
            oracle,
            agreement,
            schmidt
        );
        let _ = writeln!(
            out,
            "      condition (b): literal {} (max |<C>| = {:.3e}), operational {}",
            yes_no(s.condition_b_literal),
            s.expectation_max,
            yes_no(s.condition_b_operational)
        );
        if let Some(d) = &s.distribution {
            let points: Vec<String> = d
                .support
                .iter()
                .map(|(labels, p)| format!("{} p={:.6}", format_tuple(labels), p))
                .collect();
            let _ = writeln!(out, "      outcomes: {}", points.join("; "));
        }
        if s.agreement == Some(false) {
            disagreements += 1;
        }
    }
    if disagreements > 0 {
        let _ = writeln!(
            out,
            "DISAGREEMENT: criterion and distribution oracle differ on {disagreements} state(s)"
        );
    }
    let _ = writeln!(
        out,
        "uncertainty relation: {} over {} samples",
        if r.uncertainty_ok {
            "holds"
        } else {
            "VIOLATED"
        },
        r.uncertainty_samples.len()
    );
    out
}
