//! Structured results of verification suites.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CaseStatus {
    Pass,
    Fail,
}

/// One checked case: an observed value against an expectation and tolerance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CaseResult {
    pub id: String,
    pub inputs: String,
    pub expected: f64,
    pub actual: f64,
    pub abs_error: f64,
    pub tolerance: f64,
    pub status: CaseStatus,
}

impl CaseResult {
    pub fn compare(id: &str, inputs: &str, expected: f64, actual: f64, tolerance: f64) -> Self {
        let abs_error = (actual - expected).abs();
        Self {
            id: id.to_string(),
            inputs: inputs.to_string(),
            expected,
            actual,
            abs_error,
            tolerance,
            status: if abs_error <= tolerance {
                CaseStatus::Pass
            } else {
                CaseStatus::Fail
            },
        }
    }

    /// A case whose observable is a residual that must stay under tolerance.
    pub fn residual(id: &str, inputs: &str, residual: f64, tolerance: f64) -> Self {
        Self::compare(id, inputs, 0.0, residual, tolerance)
    }

    /// A case asserting `lhs <= rhs` (with a slack for roundoff); records the
    /// violation amount as the error.
    pub fn bound(id: &str, inputs: &str, lhs: f64, rhs: f64, slack: f64) -> Self {
        let violation = (lhs - rhs).max(0.0);
        Self {
            id: id.to_string(),
            inputs: inputs.to_string(),
            expected: rhs,
            actual: lhs,
            abs_error: violation,
            tolerance: slack,
            status: if violation <= slack {
                CaseStatus::Pass
            } else {
                CaseStatus::Fail
            },
        }
    }

    pub fn passed(&self) -> bool {
        self.status == CaseStatus::Pass
    }
}

/// A named collection of case results with pass/fail totals.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectralReport {
    pub suite: String,
    pub cases: Vec<CaseResult>,
    pub passed: usize,
    pub failed: usize,
}

impl SpectralReport {
    pub fn new(suite: &str) -> Self {
        Self {
            suite: suite.to_string(),
            cases: Vec::new(),
            passed: 0,
            failed: 0,
        }
    }

    pub fn push(&mut self, case: CaseResult) {
        if case.passed() {
            self.passed += 1;
        } else {
            self.failed += 1;
        }
        self.cases.push(case);
    }

    pub fn extend(&mut self, other: SpectralReport) {
        for case in other.cases {
            self.push(case);
        }
    }

    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}
