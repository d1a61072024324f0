//! Run configuration and the record of convention choices.

use crate::error::EvalError;

/// Environment variable naming the directory for cached associator files.
pub const CACHE_ENV: &str = "CYCLOTANGLE_CACHE";

/// Convention-sensitive constants. Only `mirror` may be toggled; the other
/// fields document the fixed choices and are checked by [`Config::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Conventions {
    /// The hexagon letter c is read as -a-b.
    pub hexagon_c_is_neg_sum: bool,
    /// Braiding is exp(t/2)·σ rather than exp(t)·σ.
    pub braiding_half: bool,
    /// The pole generator is exp(t⁰/N)·τ.
    pub pole_exponent_over_n: bool,
    /// Quantum values are reported after q ↔ q⁻¹, ζ ↔ ζ⁻¹.
    pub mirror: bool,
}

impl Default for Conventions {
    fn default() -> Self {
        Conventions { hexagon_c_is_neg_sum: true, braiding_half: true, pole_exponent_over_n: true, mirror: false }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Config {
    pub n: u8,
    /// Truncation degree of Φ.
    pub phi_cap: usize,
    /// Truncation degree of Ψ and of evaluated series.
    pub degree: usize,
    /// Largest number of diagrams admitted per quotient degree.
    pub max_diagrams: usize,
    pub conventions: Conventions,
}

impl Config {
    /// Defaults: Φ to degree 4, Ψ to degree 3 for N ≤ 2 and 2 above.
    pub fn new(n: u8) -> Config {
        Config { n, phi_cap: 4, degree: if n <= 2 { 3 } else { 2 }, max_diagrams: 2_000_000, conventions: Conventions::default() }
    }

    pub fn validate(&self) -> Result<(), EvalError> {
        if self.n == 0 {
            return Err(EvalError::Other("N must be at least 1".into()));
        }
        if self.phi_cap == 0 || self.degree == 0 || self.max_diagrams == 0 {
            return Err(EvalError::Other("caps must be positive".into()));
        }
        let c = &self.conventions;
        if !(c.hexagon_c_is_neg_sum && c.braiding_half && c.pole_exponent_over_n) {
            return Err(EvalError::Other("only the mirror convention can be changed".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_follow_n() {
        assert_eq!(Config::new(2).degree, 3);
        assert_eq!(Config::new(3).degree, 2);
        assert!(Config::new(4).validate().is_ok());
    }

    #[test]
    fn fixed_conventions_are_enforced() {
        let mut c = Config::new(2);
        c.conventions.mirror = true;
        assert!(c.validate().is_ok());
        c.conventions.braiding_half = false;
        assert!(c.validate().is_err());
        assert!(Config::new(0).validate().is_err());
    }
}
