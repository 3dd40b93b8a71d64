//! Tunable bounds shared by the decision procedures.

use serde::{Deserialize, Serialize};

use crate::witt::DEFAULT_MAX_LENGTH;

/// Bounds for the finite-window linear algebra. Unset values take
/// characteristic-dependent defaults.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalysisConfig {
    /// Degree cap for truncated computations; defaults to `4p^2`.
    pub truncation_degree: Option<u64>,
    /// Extra room added to the candidate window of the Frobenius-image
    /// search; defaults to `p`.
    pub candidate_slack: Option<u64>,
    pub witt_length_cap: usize,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            truncation_degree: None,
            candidate_slack: None,
            witt_length_cap: DEFAULT_MAX_LENGTH,
        }
    }
}

impl AnalysisConfig {
    pub fn truncation_degree(&self, p: u64) -> u64 {
        self.truncation_degree.unwrap_or(4 * p * p)
    }

    pub fn candidate_slack(&self, p: u64) -> u64 {
        self.candidate_slack.unwrap_or(p)
    }
}
