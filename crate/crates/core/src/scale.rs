use serde::{Deserialize, Serialize};

/// Physical constants of the problem. Every formula in the library depends on
/// hbar and the mass only through the single coefficient `c = 2m/hbar^2`, so
/// that coefficient is precomputed and carried along.
///
/// The default configuration is hbar = 1, m = 1/2, i.e. c = 1, which is the
/// unit system all CLI fixtures quote energies in.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalScale {
    hbar: f64,
    mass: f64,
    c: f64,
}

impl PhysicalScale {
    pub fn new(hbar: f64, mass: f64) -> Self {
        assert!(
            hbar > 0.0 && mass > 0.0,
            "hbar and mass must be positive, got hbar={hbar}, mass={mass}"
        );
        Self {
            hbar,
            mass,
            c: 2.0 * mass / (hbar * hbar),
        }
    }

    /// Unit system fixed by the coefficient alone: hbar = 1, m = c/2.
    pub fn from_c(c: f64) -> Self {
        assert!(c > 0.0, "c must be positive, got {c}");
        Self {
            hbar: 1.0,
            mass: c / 2.0,
            c,
        }
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// The recurring prefactor 2m/hbar^2.
    pub fn c(&self) -> f64 {
        self.c
    }
}

impl Default for PhysicalScale {
    fn default() -> Self {
        Self::from_c(1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_has_unit_coefficient() {
        let s = PhysicalScale::default();
        assert_eq!(s.c(), 1.0);
        assert_eq!(s.hbar(), 1.0);
        assert_eq!(s.mass(), 0.5);
    }

    #[test]
    fn coefficient_matches_definition() {
        let s = PhysicalScale::new(2.0, 3.0);
        assert!((s.c() - 2.0 * 3.0 / 4.0).abs() < 1e-15);
    }

    #[test]
    fn from_c_round_trips() {
        let s = PhysicalScale::from_c(4.0);
        assert_eq!(s.c(), 4.0);
        assert!((2.0 * s.mass() / (s.hbar() * s.hbar()) - 4.0).abs() < 1e-15);
    }

    #[test]
    #[should_panic]
    fn rejects_nonpositive_mass() {
        PhysicalScale::new(1.0, 0.0);
    }
}
