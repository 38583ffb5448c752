//! Pass/fail reports for the theorem-derived property checks.

use serde::Serialize;
use std::fmt;

/// Whether the checked statement is actually covered by a proved theorem
/// for the parameters at hand. In the band between the Sobolev exponent
/// and the critical stability exponent the checks still run, but their
/// outcome asserts nothing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Applicability {
    TheoremApplies,
    NoTheoremApplies,
}

/// Outcome of one property check, with the margin left to the boundary.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub name: String,
    pub passed: bool,
    /// Distance to failure in the check's own normalised units; negative
    /// when the check failed.
    pub margin: f64,
    pub applicability: Applicability,
    pub note: String,
}

impl VerificationReport {
    pub fn new(name: &str, passed: bool, margin: f64, applicability: Applicability) -> Self {
        VerificationReport {
            name: name.to_string(),
            passed,
            margin,
            applicability,
            note: String::new(),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }

    /// True when a failure actually contradicts a covered statement.
    pub fn is_violation(&self) -> bool {
        !self.passed && self.applicability == Applicability::TheoremApplies
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "pass" } else { "fail" };
        let scope = match self.applicability {
            Applicability::TheoremApplies => "",
            Applicability::NoTheoremApplies => " [no theorem applies]",
        };
        write!(
            f,
            "{}: {} (margin {:.3e}){}",
            self.name, status, self.margin, scope
        )?;
        if !self.note.is_empty() {
            write!(f, " - {}", self.note)?;
        }
        Ok(())
    }
}
