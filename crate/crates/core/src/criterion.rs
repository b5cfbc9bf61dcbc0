//! The commutator-matrix entanglement criterion and its oracles.
//!
//! Given two observable sets A and B on the same space, the grid
//! `C_ij = i[B_i, A_j]` decides, per simultaneous A-eigenstate, whether the
//! joint B-measurement outcomes can be deterministic. Condition (a) asks
//! every row of C for a nonzero operator entry. Condition (b) comes in two
//! readings that this module computes side by side:
//!
//! - literal: some `⟨ψ|C_ij|ψ⟩ ≠ 0`. On a normalizable A-eigenstate this
//!   expectation is identically zero (`⟨ψ|[B,A]|ψ⟩ = a⟨B⟩ − a⟨B⟩`), so the
//!   literal reading never fires there; it is computed and reported anyway.
//! - operational (b'): every row i has some j with `‖C_ij|ψ⟩‖ ≠ 0`, which
//!   certifies that ψ is not a simultaneous B-eigenstate.
//!
//! Verdicts use (a) ∧ (b'). Each verdict is cross-checked against the exact
//! joint outcome distribution of the B-set (dependence via pairwise mutual
//! information) and, across a declared bipartition, the Schmidt rank.
//! Disagreements are data, not errors.

use std::collections::BTreeMap;

use crate::csco::{analyze_set, CscoStatus, LabeledEigenbasis, ObservableSet};
use crate::error::{Error, Result};
use crate::numerics::{comm_i, hermitian_eig, vec_norm, ComplexMatrix, Ket, TolerancePolicy};
use crate::opexpr::{evaluate_expr, Bipartition, Scenario, SubsystemLayout};

/// Grid of Hermitian commutator operators `C_ij = i[B_i, A_j]`, rows
/// indexed by the B-set and columns by the A-set.
#[derive(Clone, Debug)]
pub struct CommutatorMatrix {
    entries: Vec<Vec<ComplexMatrix>>,
    entry_norms: Vec<Vec<f64>>,
    dim: usize,
}

impl CommutatorMatrix {
    pub fn n_rows(&self) -> usize {
        self.entries.len()
    }

    pub fn n_cols(&self) -> usize {
        self.entries.first().map_or(0, |r| r.len())
    }

    /// Dimension of the underlying space.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, i: usize, j: usize) -> &ComplexMatrix {
        &self.entries[i][j]
    }

    pub fn entry_norms(&self) -> &Vec<Vec<f64>> {
        &self.entry_norms
    }
}

/// Build `C_ij = i[B_i, A_j]` for every pair.
pub fn build_commutator_matrix(
    b_set: &ObservableSet,
    a_set: &ObservableSet,
) -> Result<CommutatorMatrix> {
    if b_set.dim() != a_set.dim() {
        return Err(Error::Dimension(format!(
            "B set acts on dimension {} but A set on {}",
            b_set.dim(),
            a_set.dim()
        )));
    }
    let mut entries = Vec::with_capacity(b_set.len());
    let mut entry_norms = Vec::with_capacity(b_set.len());
    for b in b_set.operators() {
        let mut row = Vec::with_capacity(a_set.len());
        let mut row_norms = Vec::with_capacity(a_set.len());
        for a in a_set.operators() {
            let c = comm_i(b, a)?;
            row_norms.push(c.fro_norm());
            row.push(c);
        }
        entries.push(row);
        entry_norms.push(row_norms);
    }
    Ok(CommutatorMatrix {
        entries,
        entry_norms,
        dim: a_set.dim(),
    })
}

/// Condition (a), per row: true iff some entry of the row is a nonzero
/// operator (`‖C_ij‖_F > zero_tol · max(1, dim)`).
pub fn condition_a(c: &CommutatorMatrix, tol: &TolerancePolicy) -> Vec<bool> {
    let threshold = tol.zero_tol * (c.dim() as f64).max(1.0);
    c.entry_norms
        .iter()
        .map(|row| row.iter().any(|&n| n > threshold))
        .collect()
}

/// `⟨ψ|C_ij|ψ⟩` for every entry; real parts (the entries are Hermitian).
pub fn expectation_matrix(c: &CommutatorMatrix, psi: &Ket) -> Result<Vec<Vec<f64>>> {
    c.entries
        .iter()
        .map(|row| {
            row.iter()
                .map(|m| Ok(m.expectation(psi)?.re))
                .collect::<Result<Vec<f64>>>()
        })
        .collect()
}

/// `‖C_ij|ψ⟩‖₂` for every entry.
pub fn action_norm_matrix(c: &CommutatorMatrix, psi: &Ket) -> Result<Vec<Vec<f64>>> {
    c.entries
        .iter()
        .map(|row| {
            row.iter()
                .map(|m| Ok(vec_norm(&m.apply(psi.amplitudes())?)))
                .collect::<Result<Vec<f64>>>()
        })
        .collect()
}

/// Robertson bound for one observable pair on one state:
/// `(ΔA, ΔB, ½|⟨i[B,A]⟩|)`. The caller asserts `ΔA·ΔB ≥ bound − zero_tol`.
pub fn uncertainty_check(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    psi: &Ket,
) -> Result<(f64, f64, f64)> {
    let c = comm_i(b, a)?;
    uncertainty_with_commutator(a, b, &c, psi)
}

fn uncertainty_with_commutator(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    c: &ComplexMatrix,
    psi: &Ket,
) -> Result<(f64, f64, f64)> {
    let delta_a = deviation(a, psi)?;
    let delta_b = deviation(b, psi)?;
    let bound = c.expectation(psi)?.norm() / 2.0;
    Ok((delta_a, delta_b, bound))
}

/// `ΔX = √(⟨X²⟩ − ⟨X⟩²)`, clamped at zero. For Hermitian X the second
/// moment is `‖Xψ‖²`.
fn deviation(x: &ComplexMatrix, psi: &Ket) -> Result<f64> {
    let image = x.apply(psi.amplitudes())?;
    let second = image.iter().map(|z| z.norm_sqr()).sum::<f64>();
    let first = crate::numerics::inner(psi.amplitudes(), &image).re;
    Ok((second - first * first).max(0.0).sqrt())
}

/// Exact joint distribution of simultaneous B-outcomes on a state.
#[derive(Clone, Debug)]
pub struct OutcomeDistribution {
    /// `(B-label tuple, probability)` for every basis vector with
    /// `|⟨b|ψ⟩|² > prob_tol`, in basis order.
    pub support: Vec<(Vec<f64>, f64)>,
    /// Per B-observable: `(eigenvalue-cluster representative, probability)`,
    /// ascending in eigenvalue.
    pub marginals: Vec<Vec<(f64, f64)>>,
    /// Pairwise mutual information in nats. The diagonal is
    /// `I(B_k; B_k) = H(B_k)`, the outcome entropy; dependence decisions
    /// only look at off-diagonal entries.
    pub mutual_information: Vec<Vec<f64>>,
}

impl OutcomeDistribution {
    pub fn max_probability(&self) -> f64 {
        self.support.iter().map(|(_, p)| *p).fold(0.0, f64::max)
    }

    pub fn total_probability(&self) -> f64 {
        self.support.iter().map(|(_, p)| *p).sum()
    }

    /// Total correlation `Σ_k H(B_k) − H(joint)` in nats: zero iff the
    /// outcomes are mutually independent. For two observables this equals
    /// the pairwise mutual information; for three or more it also catches
    /// purely higher-order dependence (parity-correlated outcomes have
    /// zero mutual information in every pair).
    pub fn total_correlation(&self) -> f64 {
        let joint_entropy = entropy(self.support.iter().map(|(_, p)| *p));
        let marginal_sum: f64 = self
            .marginals
            .iter()
            .map(|m| entropy(m.iter().map(|&(_, p)| p)))
            .sum();
        marginal_sum - joint_entropy
    }
}

fn entropy(probabilities: impl Iterator<Item = f64>) -> f64 {
    probabilities
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.ln())
        .sum()
}

/// Expand `ψ` in a complete B-eigenbasis and collect outcome statistics.
pub fn joint_distribution(
    psi: &Ket,
    b_basis: &LabeledEigenbasis,
    tol: &TolerancePolicy,
) -> Result<OutcomeDistribution> {
    if b_basis.is_empty() || b_basis.vectors[0].dim() != psi.dim() {
        return Err(Error::Dimension(
            "state and B-eigenbasis dimensions differ".into(),
        ));
    }
    // The expansion is only outcome-complete when joint labels are unique.
    for i in 0..b_basis.len() {
        for j in i + 1..b_basis.len() {
            if b_basis.cluster_ids[i] == b_basis.cluster_ids[j] {
                return Err(Error::Contract(
                    "B-eigenbasis labels are degenerate; the B set is not a CSCO".into(),
                ));
            }
        }
    }

    let n_obs = b_basis.label_width();
    let mut points: Vec<(&Vec<usize>, &Vec<f64>, f64)> = Vec::new();
    for (i, b) in b_basis.vectors.iter().enumerate() {
        let p = b.inner(psi).norm_sqr();
        if p > tol.prob_tol {
            points.push((&b_basis.cluster_ids[i], &b_basis.labels[i], p));
        }
    }

    let support: Vec<(Vec<f64>, f64)> = points
        .iter()
        .map(|(_, labels, p)| ((*labels).clone(), *p))
        .collect();

    // Marginals, grouped by per-observable cluster id.
    let mut marginals = Vec::with_capacity(n_obs);
    for k in 0..n_obs {
        let mut acc: BTreeMap<usize, (f64, f64)> = BTreeMap::new();
        for (ids, labels, p) in &points {
            let entry = acc.entry(ids[k]).or_insert((labels[k], 0.0));
            entry.1 += p;
        }
        marginals.push(acc.into_values().collect::<Vec<(f64, f64)>>());
    }

    // Pairwise mutual information from the exact joint cluster distribution.
    let mut mutual_information = vec![vec![0.0; n_obs]; n_obs];
    for i in 0..n_obs {
        for k in 0..n_obs {
            let mut joint: BTreeMap<(usize, usize), f64> = BTreeMap::new();
            let mut left: BTreeMap<usize, f64> = BTreeMap::new();
            let mut right: BTreeMap<usize, f64> = BTreeMap::new();
            for (ids, _, p) in &points {
                *joint.entry((ids[i], ids[k])).or_insert(0.0) += p;
                *left.entry(ids[i]).or_insert(0.0) += p;
                *right.entry(ids[k]).or_insert(0.0) += p;
            }
            let mut mi = 0.0;
            for (&(a, b), &p) in &joint {
                if p <= 0.0 {
                    continue;
                }
                mi += p * (p / (left[&a] * right[&b])).ln();
            }
            mutual_information[i][k] = mi;
        }
    }

    Ok(OutcomeDistribution {
        support,
        marginals,
        mutual_information,
    })
}

/// Statistical character of a joint outcome distribution.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleVerdict {
    /// One outcome carries (essentially) all the probability.
    Deterministic,
    /// Several outcomes, but every observable pair is uncorrelated.
    Independent,
    /// Some pair of observables carries positive mutual information.
    Dependent,
}

impl OracleVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            OracleVerdict::Deterministic => "DETERMINISTIC",
            OracleVerdict::Independent => "INDEPENDENT",
            OracleVerdict::Dependent => "DEPENDENT",
        }
    }
}

/// Classify a distribution: deterministic, independent, or dependent.
///
/// Dependence is decided on the total correlation, which bounds every
/// pairwise mutual information from above and is zero exactly for
/// mutually independent outcomes. Pairwise comparison alone would miss
/// three-body parity correlations whose two-observable marginals are
/// uniform products.
pub fn dependence_test(d: &OutcomeDistribution, tol: &TolerancePolicy) -> OracleVerdict {
    if d.max_probability() >= 1.0 - tol.prob_tol {
        return OracleVerdict::Deterministic;
    }
    if d.total_correlation() > tol.dep_tol {
        return OracleVerdict::Dependent;
    }
    OracleVerdict::Independent
}

/// Schmidt decomposition of `ψ` across a bipartition of the subsystems.
///
/// Returns the rank (singular values above `zero_tol`) and all singular
/// values in descending order; their squares sum to 1 for a normalized
/// state.
pub fn schmidt_rank(
    psi: &Ket,
    layout: &SubsystemLayout,
    bipartition: &Bipartition,
) -> Result<(usize, Vec<f64>)> {
    let n_sub = layout.len();
    if psi.dim() != layout.total_dim() {
        return Err(Error::Dimension(format!(
            "state dimension {} does not match the layout dimension {}",
            psi.dim(),
            layout.total_dim()
        )));
    }
    // parse_scenario validates documents, but the bipartition may also be
    // constructed programmatically.
    let mut seen = vec![false; n_sub];
    for &k in bipartition.left.iter().chain(&bipartition.right) {
        if k == 0 || k > n_sub || seen[k - 1] {
            return Err(Error::Scenario(format!(
                "invalid bipartition: subsystem {k} out of range or repeated"
            )));
        }
        seen[k - 1] = true;
    }
    if seen.iter().any(|&s| !s) || bipartition.left.is_empty() || bipartition.right.is_empty() {
        return Err(Error::Scenario(
            "invalid bipartition: parts must be non-empty and cover every subsystem".into(),
        ));
    }

    let dims: Vec<usize> = (1..=n_sub).map(|k| layout.subsystem_dim(k)).collect();
    let dim_of = |part: &[usize]| part.iter().map(|&k| dims[k - 1]).product::<usize>();
    let d_left = dim_of(&bipartition.left);
    let d_right = dim_of(&bipartition.right);

    // Reshape ψ into the (d_left × d_right) amplitude matrix.
    let mut m = ComplexMatrix::zeros(d_left, d_right);
    for (full, &amp) in psi.amplitudes().iter().enumerate() {
        // Decompose the full index (declaration order, subsystem 1 slowest).
        let mut per_subsystem = vec![0usize; n_sub];
        let mut rest = full;
        for k in (0..n_sub).rev() {
            per_subsystem[k] = rest % dims[k];
            rest /= dims[k];
        }
        let fold = |part: &[usize]| {
            part.iter()
                .fold(0usize, |acc, &k| acc * dims[k - 1] + per_subsystem[k - 1])
        };
        m[(fold(&bipartition.left), fold(&bipartition.right))] = amp;
    }

    // Singular values via the Gram matrix on the smaller side.
    let gram = if d_left <= d_right {
        m.matmul(&m.adjoint())?
    } else {
        m.adjoint().matmul(&m)?
    };
    let tol = TolerancePolicy::default();
    let eig = hermitian_eig(&gram, &tol)?;
    let mut values: Vec<f64> = eig.eigenvalues.iter().map(|&l| l.max(0.0).sqrt()).collect();
    values.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let rank = values.iter().filter(|&&v| v > tol.zero_tol).count();
    Ok((rank, values))
}

/// Criterion outcome for a single A-eigenstate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CriterionVerdict {
    PredictedEntangled,
    Inconclusive,
}

impl CriterionVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            CriterionVerdict::PredictedEntangled => "PREDICTED_ENTANGLED",
            CriterionVerdict::Inconclusive => "INCONCLUSIVE",
        }
    }
}

/// Everything the criterion and the oracles concluded about one
/// A-eigenstate. Oracle fields are `None` when the B set is not a complete
/// CSCO (no joint distribution exists) or, for the Schmidt rank, when no
/// applicable bipartition is declared.
#[derive(Clone, Debug)]
pub struct StateVerdict {
    pub a_labels: Vec<f64>,
    pub expectation_matrix: Vec<Vec<f64>>,
    pub expectation_max: f64,
    pub action_norms: Vec<Vec<f64>>,
    pub condition_b_literal: bool,
    pub condition_b_operational: bool,
    pub criterion_verdict: CriterionVerdict,
    pub oracle_verdict: Option<OracleVerdict>,
    pub distribution: Option<OutcomeDistribution>,
    pub schmidt_rank: Option<usize>,
    pub schmidt_coefficients: Option<Vec<f64>>,
    pub agreement: Option<bool>,
}

/// One Robertson-inequality sample: B-row `i`, A-column `j`, state index,
/// the two deviations and the half-commutator bound.
#[derive(Clone, Copy, Debug)]
pub struct UncertaintySample {
    pub b_index: usize,
    pub a_index: usize,
    pub state_index: usize,
    pub delta_a: f64,
    pub delta_b: f64,
    pub bound: f64,
}

impl UncertaintySample {
    pub fn holds(&self, zero_tol: f64) -> bool {
        self.delta_a * self.delta_b >= self.bound - zero_tol
    }
}

/// Full evaluation of a scenario.
#[derive(Clone, Debug)]
pub struct CriterionReport {
    pub scenario: String,
    pub a_status: CscoStatus,
    pub b_status: CscoStatus,
    /// The A-eigenbasis the per-state verdicts refer to, in verdict order.
    pub a_basis: LabeledEigenbasis,
    pub c_norms: Vec<Vec<f64>>,
    pub condition_a_rows: Vec<bool>,
    pub expected_c_match: Option<Vec<Vec<bool>>>,
    pub states: Vec<StateVerdict>,
    pub uncertainty_samples: Vec<UncertaintySample>,
    pub uncertainty_ok: bool,
}

/// Evaluate the criterion pipeline on a parsed scenario.
///
/// The A set must mutually commute (otherwise there is no simultaneous
/// eigenbasis to analyze and a contract error propagates); an incomplete A
/// set is still diagonalized, with the degeneracy recorded in `a_status`.
/// If the B set fails to be a complete CSCO the distribution oracles are
/// skipped and the corresponding fields stay `None`.
pub fn evaluate_criterion(scenario: &Scenario) -> Result<CriterionReport> {
    let tol = scenario.tolerances;
    tol.validate()?;
    let layout = &scenario.layout;

    let build_set = |exprs: &[crate::opexpr::NamedExpr], which: &str| -> Result<ObservableSet> {
        let mut names = Vec::with_capacity(exprs.len());
        let mut ops = Vec::with_capacity(exprs.len());
        for e in exprs {
            names.push(e.name.clone());
            ops.push(evaluate_expr(&e.expr, layout)?);
        }
        ObservableSet::new(names, ops, &tol).map_err(|err| match err {
            Error::Contract(msg) => Error::Contract(format!("{which} set: {msg}")),
            other => other,
        })
    };

    let a_set = build_set(&scenario.a_set, "A")?;
    let b_set = build_set(&scenario.b_set, "B")?;

    let (a_status, a_basis) = analyze_set(&a_set, &tol)?;
    let a_basis = a_basis.ok_or_else(|| {
        Error::Contract(format!(
            "A set does not mutually commute (worst commutator norm {:.3e}); \
             no simultaneous eigenbasis exists",
            a_status.max_commutator_norm
        ))
    })?;
    let (b_status, b_basis) = analyze_set(&b_set, &tol)?;
    let b_basis_usable = if b_status.complete {
        b_basis.as_ref()
    } else {
        None
    };

    let c = build_commutator_matrix(&b_set, &a_set)?;
    let condition_a_rows = condition_a(&c, &tol);
    let condition_a_all = condition_a_rows.iter().all(|&r| r);

    // Operator-level comparison with a declared expected grid.
    let expected_c_match = match &scenario.expected_c {
        None => None,
        Some(grid) => {
            let mut rows = Vec::with_capacity(grid.len());
            for (i, row) in grid.iter().enumerate() {
                let mut cols = Vec::with_capacity(row.len());
                for (j, expr) in row.iter().enumerate() {
                    let expected = evaluate_expr(expr, layout)?;
                    let diff = c.entry(i, j).sub(&expected)?.fro_norm();
                    cols.push(diff <= tol.zero_tol * c.entry(i, j).norm_scale());
                }
                rows.push(cols);
            }
            Some(rows)
        }
    };

    // The Schmidt oracle applies when a bipartition is declared and every
    // B observable touches only one of its sides.
    let schmidt_partition = scenario.bipartition.as_ref().filter(|bp| {
        scenario.b_set.iter().all(|e| {
            let refs = e.expr.referenced_subsystems();
            refs.iter().all(|k| bp.left.contains(k)) || refs.iter().all(|k| bp.right.contains(k))
        })
    });

    let entry_scales: Vec<Vec<f64>> = (0..c.n_rows())
        .map(|i| {
            (0..c.n_cols())
                .map(|j| c.entry(i, j).norm_scale())
                .collect()
        })
        .collect();

    let mut states = Vec::with_capacity(a_basis.len());
    let mut uncertainty_samples = Vec::new();
    for (state_index, psi) in a_basis.vectors.iter().enumerate() {
        let expectation = expectation_matrix(&c, psi)?;
        let action_norms = action_norm_matrix(&c, psi)?;
        let expectation_max = expectation
            .iter()
            .flatten()
            .fold(0.0f64, |m, &x| m.max(x.abs()));

        let condition_b_literal = expectation.iter().enumerate().any(|(i, row)| {
            row.iter()
                .enumerate()
                .any(|(j, &x)| x.abs() > tol.zero_tol * entry_scales[i][j])
        });
        let condition_b_operational = action_norms.iter().enumerate().all(|(i, row)| {
            row.iter()
                .enumerate()
                .any(|(j, &n)| n > tol.zero_tol * entry_scales[i][j])
        });

        let criterion_verdict = if condition_a_all && condition_b_operational {
            CriterionVerdict::PredictedEntangled
        } else {
            CriterionVerdict::Inconclusive
        };

        let (distribution, oracle_verdict) = match b_basis_usable {
            Some(basis) => {
                let d = joint_distribution(psi, basis, &tol)?;
                let verdict = dependence_test(&d, &tol);
                (Some(d), Some(verdict))
            }
            None => (None, None),
        };

        let (schmidt_rank_value, schmidt_coefficients) = match schmidt_partition {
            Some(bp) => {
                let (rank, coefficients) = schmidt_rank(psi, layout, bp)?;
                (Some(rank), Some(coefficients))
            }
            None => (None, None),
        };

        let agreement = oracle_verdict.map(|o| {
            (criterion_verdict == CriterionVerdict::PredictedEntangled)
                == (o == OracleVerdict::Dependent)
        });

        for (i, b_op) in b_set.operators().iter().enumerate() {
            for (j, a_op) in a_set.operators().iter().enumerate() {
                let (delta_a, delta_b, bound) =
                    uncertainty_with_commutator(a_op, b_op, c.entry(i, j), psi)?;
                uncertainty_samples.push(UncertaintySample {
                    b_index: i,
                    a_index: j,
                    state_index,
                    delta_a,
                    delta_b,
                    bound,
                });
            }
        }

        states.push(StateVerdict {
            a_labels: a_basis.labels[state_index].clone(),
            expectation_matrix: expectation,
            expectation_max,
            action_norms,
            condition_b_literal,
            condition_b_operational,
            criterion_verdict,
            oracle_verdict,
            distribution,
            schmidt_rank: schmidt_rank_value,
            schmidt_coefficients,
            agreement,
        });
    }

    let uncertainty_ok = uncertainty_samples.iter().all(|s| s.holds(tol.zero_tol));

    Ok(CriterionReport {
        scenario: scenario.name.clone(),
        a_status,
        b_status,
        a_basis,
        c_norms: c.entry_norms().clone(),
        condition_a_rows,
        expected_c_match,
        states,
        uncertainty_samples,
        uncertainty_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::csco::simultaneous_eigenbasis;
    use crate::numerics::{is_zero_operator, kron};
    use crate::opexpr::parse_scenario;
    use crate::test_support::{c, pauli_x, pauli_y, pauli_z};
    use num_complex::Complex64;

    fn tol() -> TolerancePolicy {
        TolerancePolicy::default()
    }

    fn observable_set(names: &[&str], ops: Vec<ComplexMatrix>) -> ObservableSet {
        ObservableSet::new(names.iter().map(|s| s.to_string()).collect(), ops, &tol()).unwrap()
    }

    /// s = σ/2 two-qubit spin operators, built independently of opexpr.
    fn spin_half_ops() -> (ComplexMatrix, ComplexMatrix, ComplexMatrix, ComplexMatrix) {
        let half = c(0.5, 0.0);
        let i2 = ComplexMatrix::identity(2);
        let sx1 = kron(&pauli_x().scale(half), &i2).unwrap();
        let sy1 = kron(&pauli_y().scale(half), &i2).unwrap();
        let sx2 = kron(&i2, &pauli_x().scale(half)).unwrap();
        let sy2 = kron(&i2, &pauli_y().scale(half)).unwrap();
        (sx1, sy1, sx2, sy2)
    }

    fn two_electron_sets() -> (ObservableSet, ObservableSet) {
        let half = c(0.5, 0.0);
        let i2 = ComplexMatrix::identity(2);
        let mut s_total_sq: Option<ComplexMatrix> = None;
        for p in [pauli_x(), pauli_y(), pauli_z()] {
            let one = kron(&p.scale(half), &i2).unwrap();
            let two = kron(&i2, &p.scale(half)).unwrap();
            let sum = one.add(&two).unwrap();
            let sq = sum.matmul(&sum).unwrap();
            s_total_sq = Some(match s_total_sq {
                None => sq,
                Some(acc) => acc.add(&sq).unwrap(),
            });
        }
        let s2 = s_total_sq.unwrap();
        let sz1 = kron(&pauli_z().scale(half), &i2).unwrap();
        let sz2 = kron(&i2, &pauli_z().scale(half)).unwrap();
        let sz = sz1.add(&sz2).unwrap();
        (
            observable_set(&["S2", "Sz"], vec![s2, sz]),
            observable_set(&["sz1", "sz2"], vec![sz1, sz2]),
        )
    }

    #[test]
    fn two_electron_commutator_grid_shape() {
        let (a, b) = two_electron_sets();
        let cm = build_commutator_matrix(&b, &a).unwrap();
        // Column 2 (A_2 = S_z) is identically zero; column 1 is not.
        for i in 0..2 {
            assert!(is_zero_operator(cm.entry(i, 1), &tol()));
            assert!(!is_zero_operator(cm.entry(i, 0), &tol()));
        }
        // Row 1 entry is −2(s_y⊗s_x − s_x⊗s_y); row 2 is its negative.
        let (sx1, sy1, sx2, sy2) = spin_half_ops();
        let expected = sy1
            .matmul(&sx2)
            .unwrap()
            .sub(&sx1.matmul(&sy2).unwrap())
            .unwrap()
            .scale(c(-2.0, 0.0));
        assert!(cm.entry(0, 0).sub(&expected).unwrap().fro_norm() < 1e-14);
        assert!(cm.entry(1, 0).add(&expected).unwrap().fro_norm() < 1e-14);
    }

    #[test]
    fn identical_diagonal_sets_give_zero_grid() {
        let zi = kron(&pauli_z(), &ComplexMatrix::identity(2)).unwrap();
        let iz = kron(&ComplexMatrix::identity(2), &pauli_z()).unwrap();
        let a = observable_set(&["Z1", "Z2"], vec![zi.clone(), iz.clone()]);
        let b = observable_set(&["Z1", "Z2"], vec![zi, iz]);
        let cm = build_commutator_matrix(&b, &a).unwrap();
        let rows = condition_a(&cm, &tol());
        assert_eq!(rows, vec![false, false]);
    }

    #[test]
    fn bell_commutator_first_column_vanishes() {
        let xx = kron(&pauli_x(), &pauli_x()).unwrap();
        let yy = kron(&pauli_y(), &pauli_y()).unwrap();
        let x1 = kron(&pauli_x(), &ComplexMatrix::identity(2)).unwrap();
        let x2 = kron(&ComplexMatrix::identity(2), &pauli_x()).unwrap();
        let a = observable_set(&["XX", "YY"], vec![xx, yy]);
        let b = observable_set(&["X1", "X2"], vec![x1, x2]);
        let cm = build_commutator_matrix(&b, &a).unwrap();
        assert!(is_zero_operator(cm.entry(0, 0), &tol()));
        assert!(is_zero_operator(cm.entry(1, 0), &tol()));
        assert!(!is_zero_operator(cm.entry(0, 1), &tol()));
        assert!(!is_zero_operator(cm.entry(1, 1), &tol()));
        assert_eq!(condition_a(&cm, &tol()), vec![true, true]);
    }

    #[test]
    fn expectations_vanish_on_a_eigenstates() {
        let (a, b) = two_electron_sets();
        let cm = build_commutator_matrix(&b, &a).unwrap();
        let basis = simultaneous_eigenbasis(&a, &tol()).unwrap();
        for v in &basis.vectors {
            let exp = expectation_matrix(&cm, v).unwrap();
            for row in exp {
                for x in row {
                    assert!(x.abs() <= 1e-10, "expectation {x} should vanish");
                }
            }
        }
    }

    #[test]
    fn expectation_nonzero_off_the_eigenbasis() {
        // ψ = (|↑↓⟩ + i|↓↑⟩)/√2 is an eigenstate of neither s_z^(1) nor S²;
        // the (1,1) expectation is −1. The oracle below recomputes it from
        // raw Pauli products, independent of build_commutator_matrix.
        let (a, b) = two_electron_sets();
        let cm = build_commutator_matrix(&b, &a).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi = Ket::normalized(vec![c(0.0, 0.0), c(s, 0.0), c(0.0, s), c(0.0, 0.0)]).unwrap();
        let exp = expectation_matrix(&cm, &psi).unwrap();

        // Oracle: C_11 = −(σ_y⊗σ_x − σ_x⊗σ_y)/2 from scratch.
        let sy_sx = kron(&pauli_y(), &pauli_x()).unwrap();
        let sx_sy = kron(&pauli_x(), &pauli_y()).unwrap();
        let c11 = sy_sx.sub(&sx_sy).unwrap().scale(c(-0.5, 0.0));
        let image = c11.apply(psi.amplitudes()).unwrap();
        let want = crate::numerics::inner(psi.amplitudes(), &image).re;
        assert!(want.abs() > 0.9, "oracle expectation should be nonzero");
        assert!((exp[0][0] - want).abs() < 1e-12);
        assert!((exp[0][0] + 1.0).abs() < 1e-12);
    }

    #[test]
    fn action_norms_distinguish_product_from_entangled() {
        let (a, b) = two_electron_sets();
        let cm = build_commutator_matrix(&b, &a).unwrap();
        let up_up = Ket::basis_state(4, 0);
        let grid = action_norm_matrix(&cm, &up_up).unwrap();
        for row in &grid {
            for &n in row {
                assert!(n <= 1e-12, "product state should be annihilated, got {n}");
            }
        }
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let singlet =
            Ket::normalized(vec![c(0.0, 0.0), c(s, 0.0), c(-s, 0.0), c(0.0, 0.0)]).unwrap();
        let grid = action_norm_matrix(&cm, &singlet).unwrap();
        assert!((grid[0][0] - 1.0).abs() < 1e-12);
        assert!((grid[1][0] - 1.0).abs() < 1e-12);
        assert!(grid[0][1] < 1e-12 && grid[1][1] < 1e-12);
    }

    #[test]
    fn bell_action_norms_equal_two() {
        let xx = kron(&pauli_x(), &pauli_x()).unwrap();
        let yy = kron(&pauli_y(), &pauli_y()).unwrap();
        let x1 = kron(&pauli_x(), &ComplexMatrix::identity(2)).unwrap();
        let x2 = kron(&ComplexMatrix::identity(2), &pauli_x()).unwrap();
        let a = observable_set(&["XX", "YY"], vec![xx, yy]);
        let b = observable_set(&["X1", "X2"], vec![x1, x2]);
        let cm = build_commutator_matrix(&b, &a).unwrap();
        let basis = simultaneous_eigenbasis(&a, &tol()).unwrap();
        for v in &basis.vectors {
            let grid = action_norm_matrix(&cm, v).unwrap();
            // Column 1 entries are zero operators; column 2 entries are
            // 2×(unitary), so the norms are exactly 2.
            assert!(grid[0][0] < 1e-12 && grid[1][0] < 1e-12);
            assert!((grid[0][1] - 2.0).abs() < 1e-12);
            assert!((grid[1][1] - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn uncertainty_check_examples() {
        let up = Ket::basis_state(2, 0);
        let (da, db, bound) = uncertainty_check(&pauli_z(), &pauli_x(), &up).unwrap();
        assert!(da.abs() < 1e-12);
        assert!((db - 1.0).abs() < 1e-12);
        assert!(bound.abs() < 1e-12);

        let s = std::f64::consts::FRAC_1_SQRT_2;
        let plus = Ket::normalized(vec![c(s, 0.0), c(s, 0.0)]).unwrap();
        let (da, db, bound) = uncertainty_check(&pauli_z(), &pauli_x(), &plus).unwrap();
        assert!((da - 1.0).abs() < 1e-12);
        assert!(db.abs() < 1e-7);
        assert!(bound.abs() < 1e-12);

        // (|↑⟩ + e^{iπ/4}|↓⟩)/√2: bound = |⟨σ_y⟩| = √2/2.
        let phase = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
        let psi = Ket::normalized(vec![c(s, 0.0), phase * s]).unwrap();
        let (da, db, bound) = uncertainty_check(&pauli_z(), &pauli_x(), &psi).unwrap();
        assert!((bound - s).abs() < 1e-12);
        assert!(da * db >= bound - 1e-12);
    }

    #[test]
    fn joint_distribution_of_phi_plus_in_x_basis() {
        let x1 = kron(&pauli_x(), &ComplexMatrix::identity(2)).unwrap();
        let x2 = kron(&ComplexMatrix::identity(2), &pauli_x()).unwrap();
        let b = observable_set(&["X1", "X2"], vec![x1, x2]);
        let basis = simultaneous_eigenbasis(&b, &tol()).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let phi = Ket::normalized(vec![c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(s, 0.0)]).unwrap();
        let d = joint_distribution(&phi, &basis, &tol()).unwrap();
        assert_eq!(d.support.len(), 2);
        for (labels, p) in &d.support {
            assert!((p - 0.5).abs() < 1e-12);
            assert!((labels[0] - labels[1]).abs() < 1e-9, "outcomes correlate");
        }
        let ln2 = std::f64::consts::LN_2;
        assert!((d.mutual_information[0][1] - ln2).abs() < 1e-12);
        assert!((d.mutual_information[1][0] - ln2).abs() < 1e-12);
        assert_eq!(dependence_test(&d, &tol()), OracleVerdict::Dependent);
    }

    #[test]
    fn uniform_product_state_is_independent() {
        let z1 = kron(&pauli_z(), &ComplexMatrix::identity(2)).unwrap();
        let z2 = kron(&ComplexMatrix::identity(2), &pauli_z()).unwrap();
        let b = observable_set(&["Z1", "Z2"], vec![z1, z2]);
        let basis = simultaneous_eigenbasis(&b, &tol()).unwrap();
        let plus_plus = Ket::normalized(vec![c(0.5, 0.0); 4]).unwrap();
        let d = joint_distribution(&plus_plus, &basis, &tol()).unwrap();
        assert_eq!(d.support.len(), 4);
        for (_, p) in &d.support {
            assert!((p - 0.25).abs() < 1e-12);
        }
        assert!(d.mutual_information[0][1].abs() < 1e-12);
        assert_eq!(dependence_test(&d, &tol()), OracleVerdict::Independent);
        // Diagonal carries the entropy of a fair coin.
        assert!((d.mutual_information[0][0] - std::f64::consts::LN_2).abs() < 1e-12);
    }

    #[test]
    fn eigenstate_distribution_is_deterministic() {
        let z1 = kron(&pauli_z(), &ComplexMatrix::identity(2)).unwrap();
        let z2 = kron(&ComplexMatrix::identity(2), &pauli_z()).unwrap();
        let b = observable_set(&["Z1", "Z2"], vec![z1, z2]);
        let basis = simultaneous_eigenbasis(&b, &tol()).unwrap();
        let up_up = Ket::basis_state(4, 0);
        let d = joint_distribution(&up_up, &basis, &tol()).unwrap();
        assert_eq!(d.support.len(), 1);
        assert!((d.support[0].1 - 1.0).abs() < 1e-12);
        assert_eq!(dependence_test(&d, &tol()), OracleVerdict::Deterministic);
        // Marginals collapse to single entries.
        for marginal in &d.marginals {
            assert_eq!(marginal.len(), 1);
        }
    }

    #[test]
    fn degenerate_b_basis_is_rejected() {
        let zi = kron(&pauli_z(), &ComplexMatrix::identity(2)).unwrap();
        let b = observable_set(&["Z1"], vec![zi]);
        let basis = simultaneous_eigenbasis(&b, &tol()).unwrap();
        let psi = Ket::basis_state(4, 0);
        match joint_distribution(&psi, &basis, &tol()) {
            Err(Error::Contract(_)) => {}
            other => panic!("expected contract error, got {other:?}"),
        }
    }

    #[test]
    fn schmidt_rank_cases() {
        let layout = SubsystemLayout::new(&[0.5, 0.5], 4096).unwrap();
        let bp = Bipartition {
            left: vec![1],
            right: vec![2],
        };
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let singlet =
            Ket::normalized(vec![c(0.0, 0.0), c(s, 0.0), c(-s, 0.0), c(0.0, 0.0)]).unwrap();
        let (rank, values) = schmidt_rank(&singlet, &layout, &bp).unwrap();
        assert_eq!(rank, 2);
        assert!((values[0] - s).abs() < 1e-12);
        assert!((values[1] - s).abs() < 1e-12);

        let up_up = Ket::basis_state(4, 0);
        let (rank, values) = schmidt_rank(&up_up, &layout, &bp).unwrap();
        assert_eq!(rank, 1);
        assert!((values.iter().map(|v| v * v).sum::<f64>() - 1.0).abs() < 1e-12);

        // GHZ across (1) | (2,3)
        let layout3 = SubsystemLayout::new(&[0.5, 0.5, 0.5], 4096).unwrap();
        let bp3 = Bipartition {
            left: vec![1],
            right: vec![2, 3],
        };
        let mut amps = vec![c(0.0, 0.0); 8];
        amps[0] = c(s, 0.0);
        amps[7] = c(s, 0.0);
        let ghz = Ket::normalized(amps).unwrap();
        let (rank, _) = schmidt_rank(&ghz, &layout3, &bp3).unwrap();
        assert_eq!(rank, 2);
    }

    #[test]
    fn schmidt_rejects_bad_bipartition() {
        let layout = SubsystemLayout::new(&[0.5, 0.5], 4096).unwrap();
        let psi = Ket::basis_state(4, 0);
        let bad = Bipartition {
            left: vec![1],
            right: vec![1],
        };
        assert!(schmidt_rank(&psi, &layout, &bad).is_err());
        let missing = Bipartition {
            left: vec![1],
            right: vec![],
        };
        assert!(schmidt_rank(&psi, &layout, &missing).is_err());
    }

    const PLUS_PRODUCT_DOC: &str = r#"{
        "name": "plus-product",
        "subsystems": [{"kind": "spin", "s": 0.5}, {"kind": "spin", "s": 0.5}],
        "A": [{"name": "X1", "expr": "X(1)"}, {"name": "X2", "expr": "X(2)"}],
        "B": [{"name": "Z1", "expr": "Z(1)"}, {"name": "Z2", "expr": "Z(2)"}],
        "bipartition": [[1], [2]]
    }"#;

    #[test]
    fn counterexample_scenario_disagrees() {
        let scenario = parse_scenario(PLUS_PRODUCT_DOC).unwrap();
        let report = evaluate_criterion(&scenario).unwrap();
        assert!(report.a_status.complete);
        assert!(report.b_status.complete);
        assert_eq!(report.condition_a_rows, vec![true, true]);
        assert_eq!(report.states.len(), 4);
        for state in &report.states {
            assert_eq!(
                state.criterion_verdict,
                CriterionVerdict::PredictedEntangled
            );
            assert_eq!(state.oracle_verdict, Some(OracleVerdict::Independent));
            assert_eq!(state.agreement, Some(false));
            assert_eq!(state.schmidt_rank, Some(1));
            assert!(!state.condition_b_literal);
            assert!(state.condition_b_operational);
        }
        assert!(report.uncertainty_ok);
    }

    #[test]
    fn non_commuting_a_set_is_a_contract_error() {
        let doc = r#"{
            "name": "bad",
            "subsystems": [{"kind": "spin", "s": 0.5}, {"kind": "spin", "s": 0.5}],
            "A": [{"name": "X1", "expr": "X(1)"}, {"name": "Y1", "expr": "Y(1)"}],
            "B": [{"name": "Z1", "expr": "Z(1)"}, {"name": "Z2", "expr": "Z(2)"}]
        }"#;
        let scenario = parse_scenario(doc).unwrap();
        match evaluate_criterion(&scenario) {
            Err(Error::Contract(msg)) => assert!(msg.contains("A set")),
            other => panic!("expected contract error, got {other:?}"),
        }
    }

    #[test]
    fn incomplete_b_set_skips_oracles() {
        let doc = r#"{
            "name": "incomplete-b",
            "subsystems": [{"kind": "spin", "s": 0.5}, {"kind": "spin", "s": 0.5}],
            "A": [{"name": "Z1", "expr": "Z(1)"}, {"name": "Z2", "expr": "Z(2)"}],
            "B": [{"name": "X1", "expr": "X(1)"}]
        }"#;
        let scenario = parse_scenario(doc).unwrap();
        let report = evaluate_criterion(&scenario).unwrap();
        assert!(!report.b_status.complete);
        for state in &report.states {
            assert!(state.oracle_verdict.is_none());
            assert!(state.distribution.is_none());
            assert!(state.agreement.is_none());
        }
    }

    #[test]
    fn incomplete_a_set_is_still_diagonalized() {
        // A single degenerate observable: the full space is still refined
        // into four states and every verdict is produced; the degeneracy
        // is recorded in the status rather than raised.
        let doc = r#"{
            "name": "incomplete-a",
            "subsystems": [{"kind": "spin", "s": 0.5}, {"kind": "spin", "s": 0.5}],
            "A": [{"name": "Z1", "expr": "Z(1)"}],
            "B": [{"name": "Z1", "expr": "Z(1)"}, {"name": "Z2", "expr": "Z(2)"}]
        }"#;
        let scenario = parse_scenario(doc).unwrap();
        let report = evaluate_criterion(&scenario).unwrap();
        assert!(report.a_status.commuting);
        assert!(!report.a_status.complete);
        assert_eq!(report.a_status.degenerate_label_groups.len(), 2);
        assert_eq!(report.states.len(), 4);
        assert!(report.b_status.complete);
        for state in &report.states {
            assert!(state.oracle_verdict.is_some());
        }
    }

    #[test]
    fn non_hermitian_observable_is_rejected() {
        let doc = r#"{
            "name": "nh",
            "subsystems": [{"kind": "spin", "s": 0.5}, {"kind": "spin", "s": 0.5}],
            "A": [{"name": "raise", "expr": "Sp(1)"}],
            "B": [{"name": "Z1", "expr": "Z(1)"}]
        }"#;
        let scenario = parse_scenario(doc).unwrap();
        match evaluate_criterion(&scenario) {
            Err(Error::Contract(msg)) => assert!(msg.contains("Hermitian")),
            other => panic!("expected contract error, got {other:?}"),
        }
    }
}
