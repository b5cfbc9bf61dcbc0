//! Complete-set-of-commuting-observables verification: mutual commutation,
//! simultaneous eigenbases by sequential eigenspace refinement, and
//! joint-spectrum non-degeneracy.
//!
//! Refinement walks the observables in declaration order. The first one is
//! diagonalized outright; its eigenvalues are grouped into clusters and each
//! cluster's eigenspace becomes a subspace. Every later observable is
//! projected onto each surviving subspace, diagonalized there, and splits the
//! subspace further. Since the operators commute, each projected block is
//! again Hermitian and the refined vectors stay eigenvectors of everything
//! processed earlier.
//!
//! Completeness follows Dirac: the set is complete when the joint eigenvalue
//! tuples label each basis vector uniquely. The check runs on integer cluster
//! ids rather than raw floats so verdicts are reproducible.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{commutator, hermitian_eig, inner, ComplexMatrix, Ket, TolerancePolicy};

/// Ordered, named set of Hermitian observables on a common space.
#[derive(Clone, Debug)]
pub struct ObservableSet {
    names: Vec<String>,
    operators: Vec<ComplexMatrix>,
    dim: usize,
}

impl ObservableSet {
    /// Validates non-emptiness, equal square dimensions and Hermiticity of
    /// every operator.
    pub fn new(
        names: Vec<String>,
        operators: Vec<ComplexMatrix>,
        tol: &TolerancePolicy,
    ) -> Result<Self> {
        if operators.is_empty() || names.len() != operators.len() {
            return Err(Error::Contract(
                "observable set needs one name per operator and at least one operator".into(),
            ));
        }
        let dim = operators[0].rows();
        for (name, op) in names.iter().zip(&operators) {
            if !op.is_square() || op.rows() != dim {
                return Err(Error::Dimension(format!(
                    "observable '{name}' is {}x{}, expected {dim}x{dim}",
                    op.rows(),
                    op.cols()
                )));
            }
            if !op.is_hermitian(tol) {
                return Err(Error::Contract(format!(
                    "observable '{name}' is not Hermitian (defect {:.3e})",
                    op.hermitian_defect()
                )));
            }
        }
        Ok(ObservableSet {
            names,
            operators,
            dim,
        })
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    pub fn operator(&self, k: usize) -> &ComplexMatrix {
        &self.operators[k]
    }
}

/// Orthonormal simultaneous eigenbasis with per-vector eigenvalue tuples.
///
/// `labels[v][k]` is the eigenvalue of observable `k` on vector `v`,
/// reported as its cluster representative so equal eigenvalues print
/// identically; `cluster_ids[v][k]` is the corresponding per-observable
/// cluster index (ascending in eigenvalue). Vectors are ordered
/// lexicographically by their cluster-id tuples.
#[derive(Clone, Debug)]
pub struct LabeledEigenbasis {
    pub vectors: Vec<Ket>,
    pub labels: Vec<Vec<f64>>,
    pub cluster_ids: Vec<Vec<usize>>,
}

impl LabeledEigenbasis {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Number of observables each label tuple covers.
    pub fn label_width(&self) -> usize {
        self.labels.first().map_or(0, |l| l.len())
    }
}

/// Outcome of CSCO verification.
#[derive(Clone, Debug, PartialEq)]
pub struct CscoStatus {
    pub commuting: bool,
    pub complete: bool,
    pub max_commutator_norm: f64,
    /// Label tuples shared by more than one basis vector (deduplicated).
    pub degenerate_label_groups: Vec<Vec<f64>>,
}

/// Pairwise commutation check.
///
/// A pair passes when `‖[O_a, O_b]‖_F ≤ zero_tol · max(1, ‖O_a‖_F·‖O_b‖_F)`.
/// Returns the overall verdict and the worst raw commutator norm.
pub fn check_mutually_commuting(set: &ObservableSet, tol: &TolerancePolicy) -> (bool, f64) {
    let ops = set.operators();
    let mut ok = true;
    let mut worst = 0.0f64;
    for a in 0..ops.len() {
        for b in a + 1..ops.len() {
            let norm = commutator(&ops[a], &ops[b])
                .expect("validated dims")
                .fro_norm();
            worst = worst.max(norm);
            let scale = (ops[a].fro_norm() * ops[b].fro_norm()).max(1.0);
            if norm > tol.zero_tol * scale {
                ok = false;
            }
        }
    }
    (ok, worst)
}

/// Build the simultaneous eigenbasis of a mutually commuting set.
///
/// Labels are Rayleigh quotients `⟨v|O_k|v⟩` clustered per observable with
/// `cluster_tol · max(1, ‖O_k‖_F)` gaps; each vector's residual
/// `‖O_k v − label·v‖` must stay below
/// `eig_residual_tol · max(1, ‖O_k‖_F)` or the call fails.
pub fn simultaneous_eigenbasis(
    set: &ObservableSet,
    tol: &TolerancePolicy,
) -> Result<LabeledEigenbasis> {
    let (commuting, worst) = check_mutually_commuting(set, tol);
    if !commuting {
        return Err(Error::Contract(format!(
            "observables do not mutually commute (worst commutator norm {worst:.3e})"
        )));
    }

    let dim = set.dim();

    // Subspaces invariant under everything processed so far, each given by
    // an orthonormal full-space basis.
    let mut subspaces: Vec<Vec<Ket>> = vec![(0..dim).map(|i| Ket::basis_state(dim, i)).collect()];

    for op in set.operators() {
        let scale = op.norm_scale();
        let mut refined: Vec<Vec<Ket>> = Vec::new();
        for sub in &subspaces {
            if sub.len() == 1 {
                refined.push(sub.clone());
                continue;
            }
            // Project the operator onto the subspace and diagonalize there.
            let images: Vec<Vec<Complex64>> = sub
                .iter()
                .map(|u| op.apply(u.amplitudes()))
                .collect::<Result<_>>()?;
            let m = sub.len();
            let mut block = ComplexMatrix::zeros(m, m);
            for a in 0..m {
                for b in 0..m {
                    block[(a, b)] = inner(sub[a].amplitudes(), &images[b]);
                }
            }
            let eig = hermitian_eig(&block, tol)?;
            let clusters = cluster_sorted(&eig.eigenvalues, tol.cluster_tol * scale);

            let mut start = 0;
            for cluster_len in clusters {
                let mut members = Vec::with_capacity(cluster_len);
                for j in start..start + cluster_len {
                    let coeffs = eig.eigenvectors[j].amplitudes();
                    let mut amps = vec![Complex64::ZERO; dim];
                    for (a, u) in sub.iter().enumerate() {
                        let w = coeffs[a];
                        if w == Complex64::ZERO {
                            continue;
                        }
                        for (slot, amp) in u.amplitudes().iter().enumerate() {
                            amps[slot] += w * amp;
                        }
                    }
                    members.push(Ket::normalized(amps)?);
                }
                refined.push(members);
                start += cluster_len;
            }
        }
        subspaces = refined;
    }

    let mut vectors: Vec<Ket> = subspaces.into_iter().flatten().collect();
    for v in &mut vectors {
        v.fix_phase();
    }

    // Rayleigh quotients, then a global per-observable clustering so labels
    // and cluster ids are comparable across refinement branches.
    let n_ops = set.len();
    let mut raw: Vec<Vec<f64>> = vec![vec![0.0; n_ops]; vectors.len()];
    for (vi, v) in vectors.iter().enumerate() {
        for (k, op) in set.operators().iter().enumerate() {
            raw[vi][k] = op.expectation(v)?.re;
        }
    }
    let mut labels = vec![vec![0.0; n_ops]; vectors.len()];
    let mut cluster_ids = vec![vec![0usize; n_ops]; vectors.len()];
    for (k, op) in set.operators().iter().enumerate() {
        let values: Vec<f64> = raw.iter().map(|row| row[k]).collect();
        let assignment = cluster_values(&values, tol.cluster_tol * op.norm_scale());
        for vi in 0..vectors.len() {
            cluster_ids[vi][k] = assignment.ids[vi];
            labels[vi][k] = assignment.representatives[assignment.ids[vi]];
        }
    }

    // Deterministic ordering: lexicographic in the cluster-id tuples.
    let mut order: Vec<usize> = (0..vectors.len()).collect();
    order.sort_by(|&a, &b| cluster_ids[a].cmp(&cluster_ids[b]));
    let vectors: Vec<Ket> = order.iter().map(|&i| vectors[i].clone()).collect();
    let labels: Vec<Vec<f64>> = order.iter().map(|&i| labels[i].clone()).collect();
    let cluster_ids: Vec<Vec<usize>> = order.iter().map(|&i| cluster_ids[i].clone()).collect();

    let basis = LabeledEigenbasis {
        vectors,
        labels,
        cluster_ids,
    };
    validate_basis(&basis, set, tol)?;
    Ok(basis)
}

fn validate_basis(
    basis: &LabeledEigenbasis,
    set: &ObservableSet,
    tol: &TolerancePolicy,
) -> Result<()> {
    let dim = set.dim();
    if basis.vectors.len() != dim {
        return Err(Error::Numeric(format!(
            "refinement produced {} vectors for a {dim}-dimensional space",
            basis.vectors.len()
        )));
    }
    for (vi, v) in basis.vectors.iter().enumerate() {
        for (k, op) in set.operators().iter().enumerate() {
            let lambda = basis.labels[vi][k];
            let image = op.apply(v.amplitudes())?;
            let residual: f64 = image
                .iter()
                .zip(v.amplitudes())
                .map(|(a, b)| (a - b * Complex64::new(lambda, 0.0)).norm_sqr())
                .sum::<f64>()
                .sqrt();
            let bound = tol.eig_residual_tol * op.norm_scale();
            if residual > bound {
                return Err(Error::Numeric(format!(
                    "refined vector {vi} has residual {residual:.3e} > {bound:.3e} \
                     on observable '{}'",
                    set.names()[k]
                )));
            }
        }
        for (vj, w) in basis.vectors.iter().enumerate() {
            let g = v.inner(w);
            let want = if vi == vj { 1.0 } else { 0.0 };
            if (g - Complex64::new(want, 0.0)).norm() > tol.eig_residual_tol {
                return Err(Error::Numeric(format!(
                    "basis vectors {vi} and {vj} are not orthonormal (⟨v|w⟩ = {g})"
                )));
            }
        }
    }
    Ok(())
}

/// Degeneracy check on the cluster-id tuples.
///
/// A basis can only exist for a commuting set, so `commuting` is reported
/// as `true`; `max_commutator_norm` is filled in by [`analyze_set`], which
/// is the usual entry point.
pub fn check_completeness(basis: &LabeledEigenbasis) -> CscoStatus {
    let mut degenerate: Vec<Vec<f64>> = Vec::new();
    let n = basis.len();
    let mut counted = vec![false; n];
    for i in 0..n {
        if counted[i] {
            continue;
        }
        let mut dup = false;
        for (j, seen) in counted.iter_mut().enumerate().skip(i + 1) {
            if basis.cluster_ids[i] == basis.cluster_ids[j] {
                *seen = true;
                dup = true;
            }
        }
        if dup {
            degenerate.push(basis.labels[i].clone());
        }
    }
    CscoStatus {
        commuting: true,
        complete: degenerate.is_empty(),
        max_commutator_norm: 0.0,
        degenerate_label_groups: degenerate,
    }
}

/// Full verification pipeline for one observable set.
///
/// Returns the status together with the simultaneous eigenbasis when the
/// set commutes; a non-commuting set yields `(status, None)` rather than an
/// error so callers can report "not a CSCO" verdicts as data.
pub fn analyze_set(
    set: &ObservableSet,
    tol: &TolerancePolicy,
) -> Result<(CscoStatus, Option<LabeledEigenbasis>)> {
    let (commuting, worst) = check_mutually_commuting(set, tol);
    if !commuting {
        return Ok((
            CscoStatus {
                commuting: false,
                complete: false,
                max_commutator_norm: worst,
                degenerate_label_groups: Vec::new(),
            },
            None,
        ));
    }
    let basis = simultaneous_eigenbasis(set, tol)?;
    let mut status = check_completeness(&basis);
    status.max_commutator_norm = worst;
    Ok((status, Some(basis)))
}

/// Result of grouping scalar values into clusters.
pub struct Clustering {
    /// Cluster index per input value, ascending in value.
    pub ids: Vec<usize>,
    /// Mean value of each cluster, ascending.
    pub representatives: Vec<f64>,
}

/// Group values whose consecutive gaps (in sorted order) stay within `tol`.
pub fn cluster_values(values: &[f64], tol: f64) -> Clustering {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap());

    let mut ids = vec![0usize; values.len()];
    let mut representatives = Vec::new();
    let mut members: Vec<usize> = Vec::new();

    fn flush(
        values: &[f64],
        members: &mut Vec<usize>,
        representatives: &mut Vec<f64>,
        ids: &mut [usize],
    ) {
        if members.is_empty() {
            return;
        }
        let mean = members.iter().map(|&i| values[i]).sum::<f64>() / members.len() as f64;
        let id = representatives.len();
        for &i in members.iter() {
            ids[i] = id;
        }
        representatives.push(mean);
        members.clear();
    }

    let mut prev: Option<f64> = None;
    for &i in &order {
        if let Some(p) = prev {
            if values[i] - p > tol {
                flush(values, &mut members, &mut representatives, &mut ids);
            }
        }
        members.push(i);
        prev = Some(values[i]);
    }
    flush(values, &mut members, &mut representatives, &mut ids);

    Clustering {
        ids,
        representatives,
    }
}

/// Cluster a pre-sorted ascending list into runs; returns run lengths.
fn cluster_sorted(sorted: &[f64], tol: f64) -> Vec<usize> {
    let mut sizes = Vec::new();
    let mut run = 0usize;
    for (i, &x) in sorted.iter().enumerate() {
        if run > 0 && x - sorted[i - 1] > tol {
            sizes.push(run);
            run = 0;
        }
        run += 1;
    }
    if run > 0 {
        sizes.push(run);
    }
    sizes
}
