//! Pass/fail bookkeeping shared by every verification routine.

use std::fmt;

use serde::Serialize;

use crate::poly::VolumePolynomial;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Some required input lies outside the computed range.
    Inconclusive,
    /// The identity does not apply to this input.
    Skipped,
}

/// Outcome of checking one identity on one input.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub identity: String,
    pub status: Status,
    pub detail: String,
}

impl Check {
    pub fn pass(identity: impl Into<String>) -> Self {
        Check {
            identity: identity.into(),
            status: Status::Pass,
            detail: String::new(),
        }
    }

    pub fn fail(identity: impl Into<String>, detail: impl Into<String>) -> Self {
        Check {
            identity: identity.into(),
            status: Status::Fail,
            detail: detail.into(),
        }
    }

    pub fn inconclusive(identity: impl Into<String>, detail: impl Into<String>) -> Self {
        Check {
            identity: identity.into(),
            status: Status::Inconclusive,
            detail: detail.into(),
        }
    }

    pub fn skipped(identity: impl Into<String>, detail: impl Into<String>) -> Self {
        Check {
            identity: identity.into(),
            status: Status::Skipped,
            detail: detail.into(),
        }
    }

    /// Pass when the polynomials agree, otherwise fail naming the first
    /// monomial where they differ.
    pub fn compare(identity: impl Into<String>, lhs: &VolumePolynomial, rhs: &VolumePolynomial) -> Self {
        match first_difference(lhs, rhs) {
            None => Check::pass(identity),
            Some(d) => Check::fail(identity, d),
        }
    }

    pub fn is_pass(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn is_fail(&self) -> bool {
        self.status == Status::Fail
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Inconclusive => "INCONCLUSIVE",
            Status::Skipped => "SKIP",
        };
        if self.detail.is_empty() {
            write!(f, "{tag} {}", self.identity)
        } else {
            write!(f, "{tag} {}: {}", self.identity, self.detail)
        }
    }
}

/// Describes the first monomial (in canonical order) with different
/// coefficients, or `None` when the polynomials are equal.
pub fn first_difference(a: &VolumePolynomial, b: &VolumePolynomial) -> Option<String> {
    if a.n() != b.n() {
        return Some(format!("different numbers of variables: {} vs {}", a.n(), b.n()));
    }
    let mut monomials: Vec<_> = a.terms().map(|(m, _)| m.clone()).collect();
    monomials.extend(b.terms().map(|(m, _)| m.clone()));
    monomials.sort();
    monomials.dedup();
    monomials.into_iter().find_map(|m| {
        let (ca, cb) = (a.coeff(&m), b.coeff(&m));
        (ca != cb).then(|| format!("p^{} x^{:?}: {} vs {}", m.p_exp(), m.x_exps(), ca, cb))
    })
}

/// A named collection of checks.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
    /// Diagnostics that are reported but not asserted.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
        self.notes.extend(other.notes);
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn count(&self, status: Status) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }

    /// No failures and at least one pass.
    pub fn all_passed(&self) -> bool {
        self.count(Status::Fail) == 0 && self.count(Status::Pass) > 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.is_fail())
    }
}
