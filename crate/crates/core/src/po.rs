//! Uniform-strategy evaluation of `⟨Γ⟩ψ` under partial observability.
//!
//! Two pairs `⟨s, a_Γ⟩`, `⟨s', a'_Γ⟩` conflict when some member `i` of Γ
//! cannot tell `s` from `s'` yet the two coalition actions give `i`
//! different actions. A maximal conflict-free subset of all enabled pairs is
//! exactly one uniform strategy per member.
//!
//! A state satisfies `⟨Γ⟩ψ` when one uniform strategy wins from every state
//! in its class of the transitive closure of `⋃_{i∈Γ} ∼i`.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::bitset::StateSet;
use crate::fo::Game;
use crate::formula::PathKind;
use crate::model::{Coalition, CoalitionView, Model, ModelError};
use crate::pairset::PairSet;
use crate::result::{Diagnostics, WitnessEntry};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PoAlgorithm {
    Basic,
    Improved,
    #[default]
    Auto,
}

impl PoAlgorithm {
    /// The algorithm that actually runs.
    pub fn resolve(self) -> PoAlgorithm {
        match self {
            PoAlgorithm::Auto => PoAlgorithm::Improved,
            other => other,
        }
    }
}

impl fmt::Display for PoAlgorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PoAlgorithm::Basic => "basic",
            PoAlgorithm::Improved => "improved",
            PoAlgorithm::Auto => "auto",
        })
    }
}

impl FromStr for PoAlgorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "basic" => Ok(PoAlgorithm::Basic),
            "improved" => Ok(PoAlgorithm::Improved),
            "auto" => Ok(PoAlgorithm::Auto),
            other => Err(format!("unknown algorithm `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PoOptions {
    pub algorithm: PoAlgorithm,
    /// Evaluate the basic algorithm's strategies on the rayon pool.
    pub parallel: bool,
    /// Attach a winning strategy to top-level `⟨Γ⟩` results.
    pub witness: bool,
}

/// First conflicting pair in ascending (state, action) order, as the state
/// and the coalition position of the lowest agent it conflicts for.
pub fn find_conflict(model: &Model, pairs: &PairSet) -> Option<(usize, usize)> {
    let coalition = pairs.coalition();
    let mut conflicting: Vec<Vec<bool>> = Vec::with_capacity(coalition.len());
    for (k, &agent) in coalition.members().iter().enumerate() {
        let n_local = model.agents()[agent].local_states.len();
        let mut seen: Vec<Option<usize>> = vec![None; n_local];
        let mut bad = vec![false; n_local];
        for (s, a) in pairs.iter() {
            let l = model.local(s, agent);
            let v = model.member_action(coalition, a, k);
            match seen[l] {
                None => seen[l] = Some(v),
                Some(w) if w != v => bad[l] = true,
                _ => {}
            }
        }
        conflicting.push(bad);
    }
    for (s, _) in pairs.iter() {
        for (k, &agent) in coalition.members().iter().enumerate() {
            if conflicting[k][model.local(s, agent)] {
                return Some((s, k));
            }
        }
    }
    None
}

/// Pairs whose state agent `agent` sees as local state `local`.
fn class_pairs(model: &Model, pairs: &PairSet, agent: usize, local: usize) -> PairSet {
    let mut out = PairSet::empty(pairs.coalition().clone(), pairs.n_states(), pairs.n_actions());
    for (s, a) in pairs.iter() {
        if model.local(s, agent) == local {
            out.insert(s, a);
        }
    }
    out
}

fn member_values(model: &Model, pairs: &PairSet, k: usize) -> Vec<usize> {
    let mut v: Vec<usize> = pairs
        .iter()
        .map(|(_, a)| model.member_action(pairs.coalition(), a, k))
        .collect();
    v.sort_unstable();
    v.dedup();
    v
}

fn with_member_value(model: &Model, pairs: &PairSet, k: usize, keep: impl Fn(usize) -> bool) -> PairSet {
    let mut out = PairSet::empty(pairs.coalition().clone(), pairs.n_states(), pairs.n_actions());
    for (s, a) in pairs.iter() {
        if keep(model.member_action(pairs.coalition(), a, k)) {
            out.insert(s, a);
        }
    }
    out
}

/// Calls `visit` on every maximal conflict-free subset of `strats`, in the
/// deterministic order of the recursive split, until it returns `false`.
pub fn split_visit(model: &Model, strats: &PairSet, visit: &mut dyn FnMut(PairSet) -> bool) -> bool {
    match find_conflict(model, strats) {
        None => visit(strats.clone()),
        Some((s, k)) => {
            let agent = strats.coalition().members()[k];
            let class = class_pairs(model, strats, agent, model.local(s, agent));
            let rest = strats.difference(&class);
            for v in member_values(model, &class, k) {
                let chosen = with_member_value(model, &class, k, |x| x == v);
                if !split_visit(model, &rest.union(&chosen), visit) {
                    return false;
                }
            }
            true
        }
    }
}

/// All maximal conflict-free subsets of `strats`.
pub fn split(model: &Model, strats: &PairSet) -> Result<Vec<PairSet>, ModelError> {
    if strats.coalition().is_empty() {
        return Err(ModelError::EmptyCoalition);
    }
    let mut out = Vec::new();
    split_visit(model, strats, &mut |p| {
        out.push(p);
        true
    });
    Ok(out)
}

/// Number of uniform strategies of Γ: the product over members and their
/// local states of the number of enabled actions. Saturates at `u128::MAX`.
pub fn count_uniform(model: &Model, coalition: &Coalition) -> u128 {
    let mut n: u128 = 1;
    for &i in coalition.members() {
        for p in &model.agents()[i].protocol {
            n = n.saturating_mul(p.len() as u128);
        }
    }
    n
}

/// `∏_{i∈Γ} |Act_i|^{|S_i|}`, saturating.
pub fn uniform_bound(model: &Model, coalition: &Coalition) -> u128 {
    let mut n: u128 = 1;
    for &i in coalition.members() {
        let a = &model.agents()[i];
        for _ in 0..a.local_states.len() {
            n = n.saturating_mul(a.actions.len() as u128);
        }
    }
    n
}

/// Class id per state for the transitive closure of the coalition's
/// indistinguishability relations.
#[derive(Debug, Clone)]
pub struct Closure {
    class_of: Vec<usize>,
}

impl Closure {
    pub fn new(model: &Model, coalition: &Coalition) -> Self {
        Closure {
            class_of: model.coalition_classes(coalition),
        }
    }

    /// States whose whole class lies in `w`.
    pub fn filter(&self, w: &StateSet) -> StateSet {
        let n = self.class_of.len();
        let mut bad = vec![false; n];
        for s in 0..n {
            if !w.contains(s) {
                bad[self.class_of[s]] = true;
            }
        }
        StateSet::from_indices(n, (0..n).filter(|&s| !bad[self.class_of[s]]))
    }

    pub fn class_of(&self, state: usize) -> usize {
        self.class_of[state]
    }
}

/// Partial-observability evaluator for one coalition.
pub struct PoEngine<'m> {
    model: &'m Model,
    coalition: Coalition,
    view: CoalitionView,
    closure: Closure,
}

impl<'m> PoEngine<'m> {
    pub fn new(model: &'m Model, coalition: &Coalition) -> Self {
        PoEngine {
            model,
            coalition: coalition.clone(),
            view: model.coalition_view(coalition),
            closure: Closure::new(model, coalition),
        }
    }

    pub fn view(&self) -> &CoalitionView {
        &self.view
    }

    pub fn closure(&self) -> &Closure {
        &self.closure
    }

    pub fn all_pairs(&self) -> PairSet {
        PairSet::all_enabled(&self.view)
    }

    /// Visits the uniform strategies in split order.
    pub fn visit_strategies(&self, visit: &mut dyn FnMut(PairSet) -> bool) {
        split_visit(self.model, &self.all_pairs(), visit);
    }

    /// States from which `strat` wins `⟨Γ⟩ψ` everywhere in their class.
    fn strategy_result(&self, strat: &PairSet, kind: PathKind, ops: &[StateSet]) -> (StateSet, u64) {
        let game = Game::restricted(self.model, &self.view, strat);
        let w = game.exists(kind, ops);
        (self.closure.filter(&w), game.iterations())
    }

    pub fn basic(&self, kind: PathKind, ops: &[StateSet], parallel: bool) -> (StateSet, Diagnostics) {
        let mut strategies = Vec::new();
        self.visit_strategies(&mut |p| {
            strategies.push(p);
            true
        });
        let n = self.model.n_states();
        let eval = |p: &PairSet| self.strategy_result(p, kind, ops);
        let merge = |(mut a, x): (StateSet, u64), (b, y): (StateSet, u64)| {
            a.union_with(&b);
            (a, x + y)
        };
        let (sat, iterations) = if parallel {
            strategies
                .par_iter()
                .map(eval)
                .reduce(|| (StateSet::empty(n), 0), merge)
        } else {
            strategies.iter().map(eval).fold((StateSet::empty(n), 0), merge)
        };
        let diag = Diagnostics {
            strategies_enumerated: strategies.len() as u64,
            branches_pruned: 0,
            fixpoint_iterations: iterations,
        };
        (sat, diag)
    }

    pub fn improved(&self, kind: PathKind, ops: &[StateSet]) -> (StateSet, Diagnostics) {
        self.improved_from(&self.all_pairs(), kind, ops)
    }

    /// The filter-and-split algorithm started from `strats`, which must
    /// hold, for every state it covers, a product of per-member action sets
    /// that is the same across each member's indistinguishability class.
    pub fn improved_from(&self, strats: &PairSet, kind: PathKind, ops: &[StateSet]) -> (StateSet, Diagnostics) {
        let mut sat = StateSet::empty(self.model.n_states());
        let mut diag = Diagnostics::default();
        self.improved_rec(strats.clone(), kind, ops, &mut sat, &mut diag);
        (sat, diag)
    }

    fn improved_rec(
        &self,
        strats: PairSet,
        kind: PathKind,
        ops: &[StateSet],
        sat: &mut StateSet,
        diag: &mut Diagnostics,
    ) {
        let model = self.model;
        diag.strategies_enumerated += 1;
        let game = Game::restricted(model, &self.view, &strats);
        let z = game.exists_ac(kind, ops);
        diag.fixpoint_iterations += game.iterations();
        let cand = self.closure.filter(&z.states());
        if cand.is_empty() || cand.is_subset(sat) {
            diag.branches_pruned += 1;
            return;
        }

        if let Some((s, k)) = find_conflict(model, &z) {
            // Only the actions that can start a winning play in this class
            // need their own branch.
            let agent = self.coalition.members()[k];
            let local = model.local(s, agent);
            let class = class_pairs(model, &strats, agent, local);
            let rest = strats.difference(&class);
            let winning = member_values(model, &class_pairs(model, &z, agent, local), k);
            for &v in &winning {
                let chosen = with_member_value(model, &class, k, |x| x == v);
                self.improved_rec(rest.union(&chosen), kind, ops, sat, diag);
            }
            if !game.not_fair().is_empty() {
                let others = with_member_value(model, &class, k, |x| !winning.contains(&x));
                if !others.is_empty() {
                    self.improved_rec(rest.union(&others), kind, ops, sat, diag);
                }
            }
            return;
        }

        // The winning pairs are conflict-free: check the uniform strategy
        // they induce, and keep splitting only if it falls short.
        let sigma = match uniform_completion(model, &z, &strats) {
            Some(sigma) => sigma,
            None => strats.clone(),
        };
        let result = if sigma == strats {
            self.closure.filter(&game.exists(kind, ops))
        } else {
            diag.strategies_enumerated += 1;
            let (r, it) = self.strategy_result(&sigma, kind, ops);
            diag.fixpoint_iterations += it;
            r
        };
        sat.union_with(&result);
        if cand.is_subset(&result) || sigma == strats {
            return;
        }
        let Some((s, k)) = find_conflict(model, &strats) else {
            return;
        };
        let agent = self.coalition.members()[k];
        let class = class_pairs(model, &strats, agent, model.local(s, agent));
        let rest = strats.difference(&class);
        for v in member_values(model, &class, k) {
            let chosen = with_member_value(model, &class, k, |x| x == v);
            self.improved_rec(rest.union(&chosen), kind, ops, sat, diag);
        }
    }

    /// First uniform strategy, in split order, that wins `⟨Γ⟩ψ` from
    /// `state` and every state in its class.
    pub fn witness(&self, kind: PathKind, ops: &[StateSet], state: usize) -> Option<PairSet> {
        let mut found = None;
        self.visit_strategies(&mut |p| {
            let (r, _) = self.strategy_result(&p, kind, ops);
            if r.contains(state) {
                found = Some(p);
                false
            } else {
                true
            }
        });
        found
    }

    /// One line per member and local state: the action the strategy plays.
    pub fn describe(&self, strat: &PairSet) -> Vec<WitnessEntry> {
        let model = self.model;
        let mut out = Vec::new();
        for (k, &agent) in self.coalition.members().iter().enumerate() {
            let decl = &model.agents()[agent];
            for (l, name) in decl.local_states.iter().enumerate() {
                let action = strat
                    .iter()
                    .find(|&(s, _)| model.local(s, agent) == l)
                    .map(|(_, a)| decl.actions[model.member_action(&self.coalition, a, k)].clone());
                if let Some(action) = action {
                    out.push(WitnessEntry {
                        agent: decl.name.clone(),
                        local_state: name.clone(),
                        action,
                    });
                }
            }
        }
        out
    }
}

/// A uniform strategy inside `strats` that agrees with the conflict-free
/// pairs `z` wherever `z` chooses.
fn uniform_completion(model: &Model, z: &PairSet, strats: &PairSet) -> Option<PairSet> {
    let coalition = strats.coalition();
    let mut chosen: Vec<Vec<Option<usize>>> = coalition
        .members()
        .iter()
        .map(|&i| vec![None; model.agents()[i].local_states.len()])
        .collect();
    for (s, a) in z.iter() {
        for (k, &i) in coalition.members().iter().enumerate() {
            chosen[k][model.local(s, i)] = Some(model.member_action(coalition, a, k));
        }
    }
    let mut out = PairSet::empty(coalition.clone(), strats.n_states(), strats.n_actions());
    for s in 0..strats.n_states() {
        let mut picked = None;
        for a in strats.actions_at(s) {
            let fits =
                coalition.members().iter().enumerate().all(|(k, &i)| {
                    chosen[k][model.local(s, i)].is_none_or(|v| v == model.member_action(coalition, a, k))
                });
            if fits {
                picked = Some(a);
                break;
            }
        }
        let a = picked?;
        for (k, &i) in coalition.members().iter().enumerate() {
            chosen[k][model.local(s, i)] = Some(model.member_action(coalition, a, k));
        }
        out.insert(s, a);
    }
    Some(out)
}
