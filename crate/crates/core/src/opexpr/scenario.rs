use std::collections::BTreeSet;

use serde::Deserialize;

use super::ast::OperatorExpr;
use super::layout::{SubsystemLayout, DEFAULT_MAX_DIM};
use super::parser::parse_operator_expr;
use crate::error::{Error, Result};
use crate::numerics::TolerancePolicy;

/// A fully parsed and validated scenario.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub name: String,
    pub layout: SubsystemLayout,
    pub a_set: Vec<NamedExpr>,
    pub b_set: Vec<NamedExpr>,
    /// Expected commutator grid, row-indexed by B, column-indexed by A.
    /// `"0"` in the document denotes the zero operator and simply parses
    /// as the literal 0.
    pub expected_c: Option<Vec<Vec<OperatorExpr>>>,
    pub bipartition: Option<Bipartition>,
    /// Defaults with any per-scenario overrides already applied.
    pub tolerances: TolerancePolicy,
}

/// Named observable expression.
#[derive(Clone, Debug)]
pub struct NamedExpr {
    pub name: String,
    pub expr: OperatorExpr,
}

/// Disjoint covering split of the subsystems (1-based indices), used by
/// the Schmidt-rank oracle.
#[derive(Clone, Debug, PartialEq)]
pub struct Bipartition {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    name: String,
    subsystems: Vec<RawSubsystem>,
    #[serde(rename = "A")]
    a: Vec<RawNamedExpr>,
    #[serde(rename = "B")]
    b: Vec<RawNamedExpr>,
    #[serde(default, rename = "expected_C")]
    expected_c: Option<Vec<Vec<String>>>,
    #[serde(default)]
    bipartition: Option<Vec<Vec<usize>>>,
    #[serde(default)]
    tolerances: Option<RawTolerances>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSubsystem {
    kind: String,
    s: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNamedExpr {
    name: String,
    expr: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTolerances {
    eig_residual_tol: Option<f64>,
    cluster_tol: Option<f64>,
    zero_tol: Option<f64>,
    prob_tol: Option<f64>,
    dep_tol: Option<f64>,
}

/// Parse a scenario document with the default dimension cap.
pub fn parse_scenario(text: &str) -> Result<Scenario> {
    parse_scenario_with_max_dim(text, DEFAULT_MAX_DIM)
}

/// Parse a scenario document, capping the total dimension at `max_dim`.
pub fn parse_scenario_with_max_dim(text: &str, max_dim: usize) -> Result<Scenario> {
    let raw: RawScenario = serde_json::from_str(text)
        .map_err(|e| Error::Scenario(format!("malformed document: {e}")))?;

    if raw.name.trim().is_empty() {
        return Err(Error::Scenario("scenario name must not be empty".into()));
    }

    let mut spins = Vec::with_capacity(raw.subsystems.len());
    for (k, sub) in raw.subsystems.iter().enumerate() {
        if sub.kind != "spin" {
            return Err(Error::Scenario(format!(
                "subsystem {}: unsupported kind '{}' (only \"spin\")",
                k + 1,
                sub.kind
            )));
        }
        spins.push(sub.s);
    }
    let layout = SubsystemLayout::new(&spins, max_dim)?;

    let a_set = parse_named_set(&raw.a, "A", &layout)?;
    let b_set = parse_named_set(&raw.b, "B", &layout)?;

    let expected_c = match raw.expected_c {
        None => None,
        Some(grid) => {
            if grid.len() != b_set.len() {
                return Err(Error::Scenario(format!(
                    "expected_C has {} rows but the B set has {} observables",
                    grid.len(),
                    b_set.len()
                )));
            }
            let mut rows = Vec::with_capacity(grid.len());
            for (i, row) in grid.iter().enumerate() {
                if row.len() != a_set.len() {
                    return Err(Error::Scenario(format!(
                        "expected_C row {} has {} columns but the A set has {} observables",
                        i + 1,
                        row.len(),
                        a_set.len()
                    )));
                }
                let mut cols = Vec::with_capacity(row.len());
                for text in row {
                    cols.push(parse_operator_expr(text, &layout)?);
                }
                rows.push(cols);
            }
            Some(rows)
        }
    };

    let bipartition = match raw.bipartition {
        None => None,
        Some(parts) => Some(validate_bipartition(&parts, &layout)?),
    };

    let mut tolerances = TolerancePolicy::default();
    if let Some(raw_tol) = raw.tolerances {
        if let Some(v) = raw_tol.eig_residual_tol {
            tolerances.eig_residual_tol = v;
        }
        if let Some(v) = raw_tol.cluster_tol {
            tolerances.cluster_tol = v;
        }
        if let Some(v) = raw_tol.zero_tol {
            tolerances.zero_tol = v;
        }
        if let Some(v) = raw_tol.prob_tol {
            tolerances.prob_tol = v;
        }
        if let Some(v) = raw_tol.dep_tol {
            tolerances.dep_tol = v;
        }
    }
    tolerances.validate()?;

    Ok(Scenario {
        name: raw.name,
        layout,
        a_set,
        b_set,
        expected_c,
        bipartition,
        tolerances,
    })
}

fn parse_named_set(
    raw: &[RawNamedExpr],
    which: &str,
    layout: &SubsystemLayout,
) -> Result<Vec<NamedExpr>> {
    if raw.is_empty() {
        return Err(Error::Scenario(format!("empty observable set {which}")));
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(raw.len());
    for entry in raw {
        if entry.name.trim().is_empty() {
            return Err(Error::Scenario(format!(
                "observable in set {which} has an empty name"
            )));
        }
        if !seen.insert(entry.name.clone()) {
            return Err(Error::Scenario(format!(
                "duplicate observable name '{}' in set {which}",
                entry.name
            )));
        }
        let expr = parse_operator_expr(&entry.expr, layout).map_err(|e| match e {
            Error::Syntax { line, col, message } => Error::Syntax {
                line,
                col,
                message: format!("in {which} observable '{}': {message}", entry.name),
            },
            other => other,
        })?;
        out.push(NamedExpr {
            name: entry.name.clone(),
            expr,
        });
    }
    Ok(out)
}

fn validate_bipartition(parts: &[Vec<usize>], layout: &SubsystemLayout) -> Result<Bipartition> {
    if parts.len() != 2 {
        return Err(Error::Scenario(format!(
            "bipartition must have exactly 2 parts, got {}",
            parts.len()
        )));
    }
    let (left, right) = (&parts[0], &parts[1]);
    if left.is_empty() || right.is_empty() {
        return Err(Error::Scenario(
            "bipartition parts must be non-empty".into(),
        ));
    }
    let mut seen = BTreeSet::new();
    for &k in left.iter().chain(right.iter()) {
        if k == 0 || k > layout.len() {
            return Err(Error::Scenario(format!(
                "bipartition index {k} out of range 1..={}",
                layout.len()
            )));
        }
        if !seen.insert(k) {
            return Err(Error::Scenario(format!(
                "bipartition mentions subsystem {k} twice"
            )));
        }
    }
    if seen.len() != layout.len() {
        return Err(Error::Scenario(
            "bipartition must cover every subsystem".into(),
        ));
    }
    Ok(Bipartition {
        left: left.clone(),
        right: right.clone(),
    })
}
