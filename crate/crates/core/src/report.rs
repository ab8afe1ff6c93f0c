//! Structured results of verification runs.

use serde::{Deserialize, Serialize};

use crate::model::SystemParams;

/// One checked identity or property.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseRecord {
    pub identity: String,
    /// Largest principal number (or level) involved.
    pub n: usize,
    pub params: Option<SystemParams>,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CaseRecord {
    /// `pass` is `|residual| ≤ tolerance`; a NaN residual fails.
    pub fn new(
        identity: impl Into<String>,
        n: usize,
        params: Option<&SystemParams>,
        residual: f64,
        tolerance: f64,
    ) -> Self {
        Self {
            identity: identity.into(),
            n,
            params: params.cloned(),
            residual,
            tolerance,
            pass: residual.abs() <= tolerance,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub draws: Vec<SystemParams>,
    pub cases: Vec<CaseRecord>,
    pub pass: bool,
    /// Not serialized, so that equal inputs give byte-identical payloads.
    #[serde(skip)]
    pub wall_time: std::time::Duration,
}

impl SuiteReport {
    pub fn new(suite: &str, seed: u64, draws: Vec<SystemParams>, mut cases: Vec<CaseRecord>) -> Self {
        cases.sort_by(|a, b| a.identity.cmp(&b.identity));
        let pass = cases.iter().all(|c| c.pass);
        Self { suite: suite.to_string(), seed, draws, cases, pass, wall_time: Default::default() }
    }

    pub fn failures(&self) -> impl Iterator<Item = &CaseRecord> {
        self.cases.iter().filter(|c| !c.pass)
    }

    /// Largest residual among cases whose identity starts with `prefix`.
    pub fn worst(&self, prefix: &str) -> Option<f64> {
        self.cases
            .iter()
            .filter(|c| c.identity.starts_with(prefix))
            .map(|c| c.residual)
            .fold(None, |acc, r| Some(acc.map_or(r, |a: f64| a.max(r))))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_flag_follows_tolerance() {
        assert!(CaseRecord::new("a", 0, None, 1e-11, 1e-10).pass);
        assert!(CaseRecord::new("a", 0, None, -1e-11, 1e-10).pass);
        assert!(!CaseRecord::new("a", 0, None, 2e-10, 1e-10).pass);
        assert!(!CaseRecord::new("a", 0, None, f64::NAN, 1e-10).pass);
    }

    #[test]
    fn cases_sorted_and_time_excluded() {
        let r = SuiteReport::new(
            "x",
            1,
            vec![],
            vec![CaseRecord::new("b", 0, None, 0.0, 1.0), CaseRecord::new("a", 0, None, 0.0, 1.0)],
        );
        assert_eq!(r.cases[0].identity, "a");
        assert!(r.pass);
        assert!(!r.to_json().contains("wall"));
    }
}
