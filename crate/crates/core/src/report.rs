//! Residual reports for identity and predicate checks.

use std::collections::BTreeMap;

/// Named residuals checked against a single tolerance.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckReport {
    pub name: String,
    pub residuals: BTreeMap<String, f64>,
    pub tolerance: f64,
    pub passed: bool,
    /// Some residual lies within a factor of ten of the tolerance.
    pub marginal: bool,
    /// Informational values that do not affect `passed`.
    pub info: BTreeMap<String, f64>,
}

impl CheckReport {
    pub fn new<S: Into<String>>(name: S, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            residuals: BTreeMap::new(),
            tolerance,
            passed: true,
            marginal: false,
            info: BTreeMap::new(),
        }
    }

    pub fn from_residuals<S: Into<String>>(name: S, tolerance: f64, residuals: &[(&str, f64)]) -> Self {
        let mut r = Self::new(name, tolerance);
        for &(k, v) in residuals {
            r.push(k, v);
        }
        r
    }

    pub fn push(&mut self, key: &str, value: f64) {
        self.residuals.insert(key.to_string(), value);
        self.refresh();
    }

    pub fn note(&mut self, key: &str, value: f64) {
        self.info.insert(key.to_string(), value);
    }

    fn refresh(&mut self) {
        let tol = self.tolerance;
        // A NaN residual fails: the comparison is false.
        self.passed = self.residuals.values().all(|&r| r <= tol);
        self.marginal = self.residuals.values().any(|&r| r > tol / 10.0 && r <= tol * 10.0);
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.values().copied().fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_and_marginal() {
        let r = CheckReport::from_residuals("x", 1e-8, &[("a", 1e-12), ("b", 5e-9)]);
        assert!(r.passed && r.marginal);
        let r = CheckReport::from_residuals("x", 1e-8, &[("a", 2e-8)]);
        assert!(!r.passed && r.marginal);
        let r = CheckReport::from_residuals("x", 1e-8, &[("a", f64::NAN)]);
        assert!(!r.passed);
        assert!(CheckReport::new("empty", 1.0).passed);
    }
}
