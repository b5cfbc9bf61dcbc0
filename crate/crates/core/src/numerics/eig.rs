//! Hermitian eigendecomposition by cyclic Jacobi sweeps.
//!
//! Each sweep visits every off-diagonal pair (p, q) once and applies a
//! complex plane rotation that annihilates the entry. Off-diagonal mass
//! decreases monotonically and convergence is quadratic, so desk-scale
//! matrices settle in a handful of sweeps; the hard cap is 100.

use num_complex::Complex64;

use super::{ComplexMatrix, Ket, TolerancePolicy};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Sorted eigendecomposition of a Hermitian matrix.
///
/// Eigenvalues ascend; eigenvectors are orthonormal and carry the
/// deterministic phase convention from [`Ket::fix_phase`].
#[derive(Clone, Debug)]
pub struct HermitianEig {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<Ket>,
}

/// Diagonalize a Hermitian matrix.
///
/// The input must be Hermitian to `zero_tol` (relative to `max(1, ‖M‖_F)`);
/// roundoff-level asymmetry is scrubbed with `(M + M†)/2` before iterating.
pub fn hermitian_eig(m: &ComplexMatrix, tol: &TolerancePolicy) -> Result<HermitianEig> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "eigendecomposition of a non-square {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    if !m.is_hermitian(tol) {
        return Err(Error::Contract(format!(
            "matrix is not Hermitian: defect {:.3e} exceeds {:.3e}",
            m.hermitian_defect(),
            tol.zero_tol * m.norm_scale()
        )));
    }

    let n = m.rows();
    let scale = m.norm_scale();
    let mut a = m.hermitized();
    let mut v = ComplexMatrix::identity(n);

    if n == 1 {
        return Ok(HermitianEig {
            eigenvalues: vec![a[(0, 0)].re],
            eigenvectors: vec![Ket::basis_state(1, 0)],
        });
    }

    let target = 1e-14 * scale;
    let mut converged = false;
    for _sweep in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) <= target {
            converged = true;
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged && off_diagonal_norm(&a) > target {
        return Err(Error::Numeric(format!(
            "Jacobi eigensolver did not converge in {MAX_SWEEPS} sweeps \
             (off-diagonal norm {:.3e}, target {:.3e})",
            off_diagonal_norm(&a),
            target
        )));
    }

    // Sort ascending with a stable tie order, then fix phases.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).unwrap());

    let mut eigenvalues = Vec::with_capacity(n);
    let mut eigenvectors = Vec::with_capacity(n);
    for &j in &order {
        eigenvalues.push(a[(j, j)].re);
        let column: Vec<Complex64> = (0..n).map(|i| v[(i, j)]).collect();
        let mut ket = Ket::normalized(column)?;
        ket.fix_phase();
        eigenvectors.push(ket);
    }

    Ok(HermitianEig {
        eigenvalues,
        eigenvectors,
    })
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut sum = 0.0;
    for p in 0..n {
        for q in 0..n {
            if p != q {
                sum += a[(p, q)].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// Annihilate `a[p][q]` with a unitary plane rotation; `a ← U†aU`, `v ← vU`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag < 1e-300 {
        return;
    }
    let phase = apq / mag; // e^{iφ}
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;

    let tau = (aqq - app) / (2.0 * mag);
    let t = if tau == 0.0 {
        1.0
    } else {
        tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt())
    };
    let cos = 1.0 / (1.0 + t * t).sqrt();
    let sin = t * cos;

    let n = a.rows();
    let s_ph = phase * sin; // s·e^{iφ}
    let s_phc = phase.conj() * sin; // s·e^{−iφ}

    // Columns p, q of A (rows untouched yet), skipping the 2x2 block.
    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * cos - akq * s_phc;
        a[(k, q)] = akp * s_ph + akq * cos;
        // Mirror rows via hermiticity.
        a[(p, k)] = a[(k, p)].conj();
        a[(q, k)] = a[(k, q)].conj();
    }

    // The 2x2 block in closed form; the effective real block is
    // [[app, mag], [mag, aqq]] after folding out the phase.
    let new_pp = cos * cos * app - 2.0 * sin * cos * mag + sin * sin * aqq;
    let new_qq = sin * sin * app + 2.0 * sin * cos * mag + cos * cos * aqq;
    a[(p, p)] = Complex64::new(new_pp, 0.0);
    a[(q, q)] = Complex64::new(new_qq, 0.0);
    a[(p, q)] = Complex64::ZERO;
    a[(q, p)] = Complex64::ZERO;

    // Accumulate eigenvectors: V ← V·U.
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * cos - vkq * s_phc;
        v[(k, q)] = vkp * s_ph + vkq * cos;
    }
}
