use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::ComplexMatrix;

/// Spin generator matrices for a single subsystem of spin `s`.
///
/// Basis ordering is `m = s, s−1, …, −s`, so index 0 is the highest-weight
/// state (`|↑⟩` for a qubit). With `ħ = 1`:
/// `⟨s,m±1|S±|s,m⟩ = √(s(s+1) − m(m±1))`, `Sx = (S₊+S₋)/2`,
/// `Sy = (S₊−S₋)/(2i)`, `Sz = diag(m)`.
#[derive(Clone, Debug)]
pub struct SpinGenerators {
    pub sx: ComplexMatrix,
    pub sy: ComplexMatrix,
    pub sz: ComplexMatrix,
    pub splus: ComplexMatrix,
    pub sminus: ComplexMatrix,
}

/// Build the generators for spin `s`; errors unless `2s` is a nonnegative
/// integer.
pub fn spin_generators(s: f64) -> Result<SpinGenerators> {
    let doubled = 2.0 * s;
    let rounded = doubled.round();
    if !(s >= 0.0 && doubled.is_finite() && (doubled - rounded).abs() <= 1e-9) {
        return Err(Error::Input(format!(
            "spin must be a nonnegative half-integer, got {s}"
        )));
    }
    let twice_s = rounded as u32;
    Ok(generators_for_twice_spin(twice_s))
}

/// Same as [`spin_generators`] but from the doubled spin, which is always
/// exact.
pub fn generators_for_twice_spin(twice_s: u32) -> SpinGenerators {
    let dim = twice_s as usize + 1;
    let s = twice_s as f64 / 2.0;

    let mut sz = ComplexMatrix::zeros(dim, dim);
    let mut splus = ComplexMatrix::zeros(dim, dim);
    let mut sminus = ComplexMatrix::zeros(dim, dim);

    for idx in 0..dim {
        // index 0 ↔ m = s
        let m = s - idx as f64;
        sz[(idx, idx)] = Complex64::new(m, 0.0);
        // S₊|s,m⟩ = √(s(s+1) − m(m+1)) |s,m+1⟩, landing at index idx−1.
        if idx > 0 {
            let amp = (s * (s + 1.0) - m * (m + 1.0)).sqrt();
            splus[(idx - 1, idx)] = Complex64::new(amp, 0.0);
        }
        // S₋|s,m⟩ = √(s(s+1) − m(m−1)) |s,m−1⟩, landing at index idx+1.
        if idx + 1 < dim {
            let amp = (s * (s + 1.0) - m * (m - 1.0)).sqrt();
            sminus[(idx + 1, idx)] = Complex64::new(amp, 0.0);
        }
    }

    let half = Complex64::new(0.5, 0.0);
    let half_over_i = Complex64::new(0.0, -0.5); // 1/(2i)
    let sx = splus.add(&sminus).expect("same shape").scale(half);
    let sy = splus.sub(&sminus).expect("same shape").scale(half_over_i);

    SpinGenerators {
        sx,
        sy,
        sz,
        splus,
        sminus,
    }
}
