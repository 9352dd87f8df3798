//! Evaluation results and diagnostics.

use serde::Serialize;

use crate::bitset::StateSet;
use crate::model::Model;

/// Work counters accumulated while evaluating a formula.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Diagnostics {
    /// Uniform strategies (basic) or strategy relations (improved) evaluated.
    pub strategies_enumerated: u64,
    /// Improved-algorithm branches cut off without splitting further.
    pub branches_pruned: u64,
    pub fixpoint_iterations: u64,
}

impl Diagnostics {
    pub fn add(&mut self, other: &Diagnostics) {
        self.strategies_enumerated += other.strategies_enumerated;
        self.branches_pruned += other.branches_pruned;
        self.fixpoint_iterations += other.fixpoint_iterations;
    }
}

/// One line of a witness strategy: the action an agent plays in one of its
/// local states.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct WitnessEntry {
    pub agent: String,
    pub local_state: String,
    pub action: String,
}

impl std::fmt::Display for WitnessEntry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}({}) -> {}", self.agent, self.local_state, self.action)
    }
}

/// A winning uniform strategy for one initial state.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Witness {
    pub init_state: String,
    pub strategy: Vec<WitnessEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CheckResult {
    pub formula: String,
    pub semantics: String,
    pub algorithm: String,
    pub holds_in_all_init: bool,
    pub sat_states: Vec<String>,
    pub diagnostics: Diagnostics,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<Witness>>,
    #[serde(skip)]
    pub sat: StateSet,
}

impl CheckResult {
    pub fn new(
        model: &Model,
        formula: String,
        semantics: &str,
        algorithm: &str,
        sat: StateSet,
        diagnostics: Diagnostics,
    ) -> Self {
        CheckResult {
            formula,
            semantics: semantics.to_string(),
            algorithm: algorithm.to_string(),
            holds_in_all_init: model.init().is_subset(&sat),
            sat_states: sat.iter().map(|s| model.state_name(s)).collect(),
            diagnostics,
            witness: None,
            sat,
        }
    }
}
