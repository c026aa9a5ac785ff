//! Named verification scenarios and their reports.

mod scenarios;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::faces::{CertificateFile, FaceError};
use crate::families::{Family, FamilyError};
use crate::maps::MapError;

pub use scenarios::run_scenario;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("unknown scenario {0:?}")]
    UnknownScenario(String),
    #[error("{0} (pass --force to override)")]
    Guard(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Face(#[from] FaceError),
    #[error(transparent)]
    Map(#[from] MapError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    Thm1,
    Prop1,
    Lemma1,
    Thm2,
    #[serde(rename = "phi-not-3-neighborly")]
    PhiNot3Neighborly,
    #[serde(rename = "qap-3-neighborly")]
    Qap3Neighborly,
    Nonisomorphism,
    #[serde(rename = "corollary-3n-face")]
    Corollary3nFace,
}

impl Scenario {
    pub const ALL: [Scenario; 8] = [
        Scenario::Thm1,
        Scenario::Prop1,
        Scenario::Lemma1,
        Scenario::Thm2,
        Scenario::PhiNot3Neighborly,
        Scenario::Qap3Neighborly,
        Scenario::Nonisomorphism,
        Scenario::Corollary3nFace,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::Thm1 => "thm1",
            Scenario::Prop1 => "prop1",
            Scenario::Lemma1 => "lemma1",
            Scenario::Thm2 => "thm2",
            Scenario::PhiNot3Neighborly => "phi-not-3-neighborly",
            Scenario::Qap3Neighborly => "qap-3-neighborly",
            Scenario::Nonisomorphism => "nonisomorphism",
            Scenario::Corollary3nFace => "corollary-3n-face",
        }
    }

    /// Name of the scenario's parameter: `k` (number of vertex pairs) for
    /// the pair-swapping face, `n` otherwise.
    pub fn parameter_name(self) -> &'static str {
        match self {
            Scenario::Thm2 | Scenario::Corollary3nFace => "k",
            _ => "n",
        }
    }

    pub fn default_parameter(self) -> usize {
        match self {
            Scenario::Thm1 => 2,
            Scenario::Prop1 => 4,
            Scenario::Lemma1 => 4,
            Scenario::Thm2 | Scenario::Corollary3nFace => 2,
            Scenario::PhiNot3Neighborly => 4,
            Scenario::Qap3Neighborly => 3,
            Scenario::Nonisomorphism => 3,
        }
    }

    /// `(min, max without --force, hard max)`.
    fn limits(self) -> (usize, usize, usize) {
        match self {
            Scenario::Thm1 => (2, 3, 4),
            Scenario::Prop1 => (3, 6, 7),
            Scenario::Lemma1 => (4, 6, 7),
            Scenario::Thm2 | Scenario::Corollary3nFace => (2, 3, 3),
            Scenario::PhiNot3Neighborly => (3, 6, 7),
            Scenario::Qap3Neighborly => (3, 4, 5),
            Scenario::Nonisomorphism => (3, 4, 5),
        }
    }

    pub fn check_parameter(self, p: usize, force: bool) -> Result<(), HarnessError> {
        let (min, soft, hard) = self.limits();
        let name = self.parameter_name();
        if p < min || p > hard {
            return Err(HarnessError::Parameter(format!(
                "{} needs {min} <= {name} <= {hard}, got {p}",
                self.name()
            )));
        }
        if p > soft && !force {
            return Err(HarnessError::Guard(format!(
                "{} with {name} = {p} is long-running",
                self.name()
            )));
        }
        Ok(())
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = HarnessError;
    fn from_str(s: &str) -> Result<Self, HarnessError> {
        Scenario::ALL
            .into_iter()
            .find(|sc| sc.name() == s)
            .ok_or_else(|| HarnessError::UnknownScenario(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StepStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub name: String,
    /// The mathematical statement this step checks.
    pub claim: String,
    pub status: StepStatus,
    pub detail: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub certificates: Vec<CertificateFile>,
}

impl Step {
    pub fn check(name: &str, claim: &str, ok: bool, detail: impl Into<String>) -> Self {
        Step {
            name: name.into(),
            claim: claim.into(),
            status: if ok {
                StepStatus::Pass
            } else {
                StepStatus::Fail
            },
            detail: detail.into(),
            certificates: Vec::new(),
        }
    }

    pub fn skipped(name: &str, claim: &str, why: impl Into<String>) -> Self {
        Step {
            name: name.into(),
            claim: claim.into(),
            status: StepStatus::Skipped,
            detail: why.into(),
            certificates: Vec::new(),
        }
    }

    pub fn with_certificate(mut self, c: CertificateFile) -> Self {
        self.certificates.push(c);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub scenario: Scenario,
    pub parameter: String,
    pub value: usize,
    pub passed: bool,
    pub steps: Vec<Step>,
    /// Wall-clock time; the only field that differs between runs.
    pub duration_ms: u64,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// JSON with the duration zeroed, for byte comparisons.
    pub fn canonical_json(&self) -> String {
        let mut r = self.clone();
        r.duration_ms = 0;
        r.to_json()
    }

    pub fn summary(&self) -> String {
        let mut out = format!(
            "{} ({} = {}): {}\n",
            self.scenario,
            self.parameter,
            self.value,
            if self.passed { "PASS" } else { "FAIL" }
        );
        for s in &self.steps {
            let tag = match s.status {
                StepStatus::Pass => "pass",
                StepStatus::Fail => "FAIL",
                StepStatus::Skipped => "skip",
            };
            out.push_str(&format!("  [{tag}] {}: {}\n", s.name, s.detail));
        }
        out
    }
}

/// Size guards for `generate`; returns a warning for large but allowed
/// parameters.
pub fn generate_guard(
    family: Family,
    n: usize,
    force: bool,
) -> Result<Option<String>, HarnessError> {
    let (soft, warn_above) = match family {
        Family::Bqp => (16, 16),
        Family::Qap | Family::Phi => (7, 5),
    };
    if n > soft && !force {
        return Err(HarnessError::Guard(format!(
            "{family}({n}) exceeds the size guard of {soft}"
        )));
    }
    Ok((n > warn_above).then(|| format!("{family}({n}) is large; later scans may be slow")))
}

/// Number of subsets above which a neighborliness scan needs `--force`.
pub const SCAN_GUARD: u64 = 2_000_000;
