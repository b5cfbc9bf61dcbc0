use crate::error::{Error, Result};

/// Default cap on the total Hilbert-space dimension.
pub const DEFAULT_MAX_DIM: usize = 4096;

/// Ordered list of spin subsystems; subsystem k (1-based) has dimension
/// `2s_k + 1` and the total space is their tensor product in declaration
/// order (subsystem 1 is the slowest-varying index).
#[derive(Clone, Debug, PartialEq)]
pub struct SubsystemLayout {
    twice_spins: Vec<u32>,
    total_dim: usize,
}

impl SubsystemLayout {
    /// Build a layout from spin quantum numbers (`0.5` for a qubit, `1`,
    /// `1.5`, ...). Each `2s` must be a nonnegative integer and the total
    /// dimension must lie in `2..=max_dim`.
    pub fn new(spins: &[f64], max_dim: usize) -> Result<Self> {
        if spins.is_empty() {
            return Err(Error::Scenario(
                "layout needs at least one subsystem".into(),
            ));
        }
        let mut twice_spins = Vec::with_capacity(spins.len());
        let mut total_dim = 1usize;
        for (k, &s) in spins.iter().enumerate() {
            let doubled = 2.0 * s;
            let rounded = doubled.round();
            if !(s >= 0.0 && doubled.is_finite() && (doubled - rounded).abs() <= 1e-9) {
                return Err(Error::Scenario(format!(
                    "subsystem {}: spin must be a nonnegative half-integer, got {s}",
                    k + 1
                )));
            }
            let twice_s = rounded as u32;
            let dim = twice_s as usize + 1;
            total_dim = total_dim
                .checked_mul(dim)
                .filter(|&d| d <= max_dim)
                .ok_or_else(|| {
                    Error::Dimension(format!("total dimension exceeds the cap of {max_dim}"))
                })?;
            twice_spins.push(twice_s);
        }
        if total_dim < 2 {
            return Err(Error::Scenario("total dimension must be at least 2".into()));
        }
        Ok(SubsystemLayout {
            twice_spins,
            total_dim,
        })
    }

    pub fn len(&self) -> usize {
        self.twice_spins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.twice_spins.is_empty()
    }

    pub fn total_dim(&self) -> usize {
        self.total_dim
    }

    /// Dimension of the 1-based subsystem `k`.
    pub fn subsystem_dim(&self, k: usize) -> usize {
        self.twice_spins[k - 1] as usize + 1
    }

    /// Doubled spin (`2s`) of the 1-based subsystem `k`.
    pub fn twice_spin(&self, k: usize) -> u32 {
        self.twice_spins[k - 1]
    }

    /// Spin quantum number of the 1-based subsystem `k`.
    pub fn spin(&self, k: usize) -> f64 {
        self.twice_spins[k - 1] as f64 / 2.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_half_integer_spins() {
        let l = SubsystemLayout::new(&[0.5, 1.0, 1.5], DEFAULT_MAX_DIM).unwrap();
        assert_eq!(l.len(), 3);
        assert_eq!(l.total_dim(), 2 * 3 * 4);
        assert_eq!(l.subsystem_dim(1), 2);
        assert_eq!(l.subsystem_dim(3), 4);
        assert_eq!(l.spin(2), 1.0);
    }

    #[test]
    fn rejects_non_half_integer() {
        assert!(SubsystemLayout::new(&[0.3], DEFAULT_MAX_DIM).is_err());
        assert!(SubsystemLayout::new(&[-0.5], DEFAULT_MAX_DIM).is_err());
    }

    #[test]
    fn enforces_dimension_cap() {
        // 2^13 = 8192 > 4096
        let spins = vec![0.5; 13];
        assert!(SubsystemLayout::new(&spins, DEFAULT_MAX_DIM).is_err());
        let spins = vec![0.5; 12];
        assert!(SubsystemLayout::new(&spins, DEFAULT_MAX_DIM).is_ok());
    }

    #[test]
    fn rejects_total_dim_below_two() {
        // A single spin-0 subsystem is a one-dimensional space.
        assert!(SubsystemLayout::new(&[0.0], DEFAULT_MAX_DIM).is_err());
        // But spin-0 next to a qubit is fine.
        assert!(SubsystemLayout::new(&[0.0, 0.5], DEFAULT_MAX_DIM).is_ok());
    }
}
