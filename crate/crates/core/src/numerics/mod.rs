//! Dense complex linear algebra: matrices, kets, tensor products,
//! commutators and zero tests under an explicit tolerance policy.
//!
//! Everything here is plain `Vec<Complex64>` storage in row-major order.
//! Matrices at the scales this crate targets (total dimension ≤ a few
//! thousand, usually ≤ a few dozen) do not justify sparse storage or an
//! external linear-algebra backend, and a self-contained eigensolver keeps
//! results bit-reproducible across platforms.

mod eig;

pub use eig::{hermitian_eig, HermitianEig};

use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative tolerances used throughout the crate.
///
/// All comparisons are made relative to `max(1, ‖M‖_F)` of the matrix in
/// question, so operators of order one (the common case) behave as if the
/// tolerances were absolute.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TolerancePolicy {
    /// Eigenpair residual and orthonormality bound.
    pub eig_residual_tol: f64,
    /// Gap threshold when grouping eigenvalues into degenerate clusters.
    pub cluster_tol: f64,
    /// Generic "is this zero" threshold for norms and matrix entries.
    pub zero_tol: f64,
    /// Probability bookkeeping threshold (support membership, sum checks).
    pub prob_tol: f64,
    /// Mutual-information threshold, in nats, above which outcomes count
    /// as statistically dependent.
    pub dep_tol: f64,
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        TolerancePolicy {
            eig_residual_tol: 1e-10,
            cluster_tol: 1e-8,
            zero_tol: 1e-10,
            prob_tol: 1e-9,
            dep_tol: 1e-9,
        }
    }
}

impl TolerancePolicy {
    /// Every field must be strictly positive and below 1e-2.
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("eig_residual_tol", self.eig_residual_tol),
            ("cluster_tol", self.cluster_tol),
            ("zero_tol", self.zero_tol),
            ("prob_tol", self.prob_tol),
            ("dep_tol", self.dep_tol),
        ];
        for (name, value) in fields {
            if !(value > 0.0 && value < 1e-2) {
                return Err(Error::Input(format!(
                    "tolerance {name} must lie in (0, 1e-2), got {value}"
                )));
            }
        }
        Ok(())
    }
}

/// Dense complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        ComplexMatrix {
            rows,
            cols,
            entries: vec![Complex64::ZERO; rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::ONE;
        }
        m
    }

    /// Build from row-major entries; the count must match `rows × cols`.
    pub fn from_entries(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension(
                "matrix dimensions must be positive".into(),
            ));
        }
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(ComplexMatrix {
            rows,
            cols,
            entries,
        })
    }

    /// Convenience constructor from real row slices (tests, generators).
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::Dimension("ragged rows".into()));
            }
            entries.extend(row.iter().map(|&x| Complex64::new(x, 0.0)));
        }
        Self::from_entries(r, c, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn add(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.check_same_shape(other, "add")?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        Ok(ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn sub(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.check_same_shape(other, "sub")?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a - b)
            .collect();
        Ok(ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn scale(&self, factor: Complex64) -> ComplexMatrix {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|z| z * factor).collect(),
        }
    }

    /// Matrix product `self · other`.
    pub fn matmul(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = ComplexMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self[(i, k)];
                if aik == Complex64::ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += aik * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    /// Integer power; `pow(0)` is the identity.
    pub fn pow(&self, n: u32) -> Result<ComplexMatrix> {
        if !self.is_square() {
            return Err(Error::Dimension("power of a non-square matrix".into()));
        }
        let mut out = ComplexMatrix::identity(self.rows);
        for _ in 0..n {
            out = out.matmul(self)?;
        }
        Ok(out)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn fro_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// `max |M[i][j] − conj(M[j][i])|` over all entries (square matrices).
    pub fn hermitian_defect(&self) -> f64 {
        debug_assert!(self.is_square());
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                let d = (self[(i, j)] - self[(j, i)].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// Hermitian to `zero_tol` relative to `max(1, ‖M‖_F)`.
    pub fn is_hermitian(&self, tol: &TolerancePolicy) -> bool {
        self.is_square() && self.hermitian_defect() <= tol.zero_tol * self.norm_scale()
    }

    /// `(M + M†)/2`; used to scrub roundoff asymmetry before eigensolves.
    pub fn hermitized(&self) -> ComplexMatrix {
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = (self[(i, j)] + self[(j, i)].conj()) * 0.5;
            }
        }
        out
    }

    /// Matrix-vector product on raw amplitudes.
    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "cannot apply {}x{} matrix to a vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let mut out = vec![Complex64::ZERO; self.rows];
        for i in 0..self.rows {
            let mut acc = Complex64::ZERO;
            for j in 0..self.cols {
                acc += self[(i, j)] * v[j];
            }
            out[i] = acc;
        }
        Ok(out)
    }

    /// `⟨ψ|M|ψ⟩`.
    pub fn expectation(&self, psi: &Ket) -> Result<Complex64> {
        let mv = self.apply(psi.amplitudes())?;
        Ok(inner(psi.amplitudes(), &mv))
    }

    /// `max(1, ‖M‖_F)`, the scale every relative tolerance refers to.
    pub fn norm_scale(&self) -> f64 {
        self.fro_norm().max(1.0)
    }

    fn check_same_shape(&self, other: &ComplexMatrix, what: &str) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension(format!(
                "cannot {what} {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.entries[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.entries[r * self.cols + c]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.4}{:+.4}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Normalized state vector.
#[derive(Clone, Debug, PartialEq)]
pub struct Ket {
    amplitudes: Vec<Complex64>,
}

impl Ket {
    /// Normalize `amplitudes` to unit 2-norm. Errors on the zero vector.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = vec_norm(&amplitudes);
        if norm <= 0.0 || !norm.is_finite() {
            return Err(Error::Input(
                "cannot normalize a zero or non-finite vector".into(),
            ));
        }
        let inv = 1.0 / norm;
        Ok(Ket {
            amplitudes: amplitudes.into_iter().map(|z| z * inv).collect(),
        })
    }

    /// Computational basis vector `|index⟩`.
    pub fn basis_state(dim: usize, index: usize) -> Self {
        assert!(index < dim);
        let mut amplitudes = vec![Complex64::ZERO; dim];
        amplitudes[index] = Complex64::ONE;
        Ket { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        vec_norm(&self.amplitudes)
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Ket) -> Complex64 {
        inner(&self.amplitudes, &other.amplitudes)
    }

    /// Rotate the global phase so the largest-magnitude component is real
    /// and positive. Ties pick the earliest index, so the result is
    /// reproducible.
    pub fn fix_phase(&mut self) {
        let mut best = 0.0f64;
        let mut k = 0usize;
        for (i, z) in self.amplitudes.iter().enumerate() {
            let m = z.norm();
            if m > best {
                best = m;
                k = i;
            }
        }
        if best > 0.0 {
            let phase = self.amplitudes[k].conj() / best;
            for z in &mut self.amplitudes {
                *z *= phase;
            }
            self.amplitudes[k] = Complex64::new(best, 0.0);
        }
    }
}

/// 2-norm of raw amplitudes.
pub fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `⟨a|b⟩ = Σ conj(a_i) b_i`.
pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Kronecker product; dimensions multiply.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let rows = a
        .rows()
        .checked_mul(b.rows())
        .ok_or_else(|| Error::Dimension("tensor-product dimension overflow".into()))?;
    let cols = a
        .cols()
        .checked_mul(b.cols())
        .ok_or_else(|| Error::Dimension("tensor-product dimension overflow".into()))?;
    let mut out = ComplexMatrix::zeros(rows, cols);
    for i1 in 0..a.rows() {
        for j1 in 0..a.cols() {
            let f = a[(i1, j1)];
            if f == Complex64::ZERO {
                continue;
            }
            for i2 in 0..b.rows() {
                for j2 in 0..b.cols() {
                    out[(i1 * b.rows() + i2, j1 * b.cols() + j2)] = f * b[(i2, j2)];
                }
            }
        }
    }
    Ok(out)
}

/// Plain commutator `[a, b] = ab − ba`.
pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.matmul(b)?.sub(&b.matmul(a)?)
}

/// `i[b, a] = i(ba − ab)`; Hermitian whenever both inputs are.
pub fn comm_i(b: &ComplexMatrix, a: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !a.is_square() || !b.is_square() || a.rows() != b.rows() {
        return Err(Error::Dimension(format!(
            "commutator needs equal square matrices, got {}x{} and {}x{}",
            b.rows(),
            b.cols(),
            a.rows(),
            a.cols()
        )));
    }
    Ok(commutator(b, a)?.scale(Complex64::I))
}

/// True iff `‖m‖_F ≤ zero_tol · max(1, dim)`.
pub fn is_zero_operator(m: &ComplexMatrix, tol: &TolerancePolicy) -> bool {
    m.fro_norm() <= tol.zero_tol * (m.rows().max(m.cols()) as f64).max(1.0)
}
