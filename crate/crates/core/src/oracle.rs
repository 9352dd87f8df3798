//! Brute-force reference evaluation by strategy enumeration and graph
//! search. Nothing here uses the fixpoint engine.
//!
//! A strategy is a total map from states to coalition action indices. The
//! outcome graph of a strategy keeps the transitions whose joint action
//! agrees with it; a fair path visits every fairness set infinitely often.

use thiserror::Error;

use crate::bitset::StateSet;
use crate::eval::{EvalError, Semantics};
use crate::formula::{Formula, PathFormula, PathKind};
use crate::model::{for_each_product, Coalition, CoalitionAction, Model};

pub const DEFAULT_CAP: u128 = 1 << 20;

/// Strategy cap, overridable with `ATLK_STRATEGY_CAP`.
pub fn strategy_cap() -> u128 {
    std::env::var("ATLK_STRATEGY_CAP")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_CAP)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("{count} strategies exceed the enumeration cap of {cap}")]
    CapExceeded { count: u128, cap: u128 },
    #[error(transparent)]
    Eval(#[from] EvalError),
}

impl From<crate::model::ModelError> for OracleError {
    fn from(e: crate::model::ModelError) -> Self {
        OracleError::Eval(e.into())
    }
}

pub type StrategyMap = Vec<usize>;

fn index_of(model: &Model, coalition: &Coalition, parts: Vec<usize>) -> usize {
    model.coalition_action_index(&CoalitionAction {
        coalition: coalition.clone(),
        parts,
    })
}

/// Enabled coalition actions per state, straight from the transitions.
fn enabled(model: &Model, coalition: &Coalition, state: usize) -> Vec<usize> {
    let mut v: Vec<usize> = model
        .transitions_from(state)
        .iter()
        .map(|t| model.project_action(coalition, t.action as usize))
        .collect();
    v.sort_unstable();
    v.dedup();
    v
}

/// Every uniform strategy, built as one protocol choice per member and
/// local state.
pub fn enumerate_uniform(model: &Model, coalition: &Coalition, cap: u128) -> Result<Vec<StrategyMap>, OracleError> {
    let mut slots: Vec<(usize, usize)> = Vec::new();
    let mut choices: Vec<&Vec<usize>> = Vec::new();
    let mut count: u128 = 1;
    for (k, &i) in coalition.members().iter().enumerate() {
        for (l, allowed) in model.agents()[i].protocol.iter().enumerate() {
            slots.push((k, l));
            choices.push(allowed);
            count = count.saturating_mul(allowed.len() as u128);
        }
    }
    if count > cap {
        return Err(OracleError::CapExceeded { count, cap });
    }
    let mut out = Vec::with_capacity(count as usize);
    for_each_product(&choices, |pick| {
        let map = (0..model.n_states())
            .map(|s| {
                let parts = coalition
                    .members()
                    .iter()
                    .enumerate()
                    .map(|(k, &i)| {
                        let l = model.local(s, i);
                        let slot = slots.iter().position(|&x| x == (k, l)).expect("slot exists");
                        pick[slot]
                    })
                    .collect();
                index_of(model, coalition, parts)
            })
            .collect();
        out.push(map);
    });
    Ok(out)
}

/// Every global strategy: one enabled coalition action per state.
pub fn enumerate_global(model: &Model, coalition: &Coalition, cap: u128) -> Result<Vec<StrategyMap>, OracleError> {
    let per_state: Vec<Vec<usize>> = (0..model.n_states()).map(|s| enabled(model, coalition, s)).collect();
    let count = count_global(model, coalition);
    if count > cap {
        return Err(OracleError::CapExceeded { count, cap });
    }
    let mut out = Vec::with_capacity(count as usize);
    for_each_product(&per_state.iter().collect::<Vec<_>>(), |pick| out.push(pick.to_vec()));
    Ok(out)
}

pub fn count_global(model: &Model, coalition: &Coalition) -> u128 {
    (0..model.n_states()).fold(1u128, |n, s| {
        n.saturating_mul(enabled(model, coalition, s).len() as u128)
    })
}

/// The outcome graph of one strategy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrunedModel {
    pub successors: Vec<Vec<usize>>,
}

pub fn prune(model: &Model, coalition: &Coalition, strategy: &[usize]) -> PrunedModel {
    let successors = (0..model.n_states())
        .map(|s| {
            let mut v: Vec<usize> = model
                .transitions_from(s)
                .iter()
                .filter(|t| model.project_action(coalition, t.action as usize) == strategy[s])
                .flat_map(|t| t.successors.iter().map(|&d| d as usize))
                .collect();
            v.sort_unstable();
            v.dedup();
            v
        })
        .collect();
    PrunedModel { successors }
}

fn effective_fairness(model: &Model) -> Vec<StateSet> {
    if model.fairness().is_empty() {
        vec![StateSet::full(model.n_states())]
    } else {
        model.fairness().to_vec()
    }
}

/// Strongly connected components of the subgraph induced by `inside`.
fn sccs(pm: &PrunedModel, inside: &[bool]) -> Vec<Vec<usize>> {
    struct Tarjan<'a> {
        succ: &'a [Vec<usize>],
        inside: &'a [bool],
        index: Vec<Option<usize>>,
        low: Vec<usize>,
        on_stack: Vec<bool>,
        stack: Vec<usize>,
        next: usize,
        out: Vec<Vec<usize>>,
    }
    impl Tarjan<'_> {
        fn visit(&mut self, v: usize) {
            self.index[v] = Some(self.next);
            self.low[v] = self.next;
            self.next += 1;
            self.stack.push(v);
            self.on_stack[v] = true;
            for &w in &self.succ[v] {
                if !self.inside[w] {
                    continue;
                }
                match self.index[w] {
                    None => {
                        self.visit(w);
                        self.low[v] = self.low[v].min(self.low[w]);
                    }
                    Some(iw) if self.on_stack[w] => self.low[v] = self.low[v].min(iw),
                    _ => {}
                }
            }
            if Some(self.low[v]) == self.index[v] {
                let mut comp = Vec::new();
                while let Some(w) = self.stack.pop() {
                    self.on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                self.out.push(comp);
            }
        }
    }
    let n = pm.successors.len();
    let mut t = Tarjan {
        succ: &pm.successors,
        inside,
        index: vec![None; n],
        low: vec![0; n],
        on_stack: vec![false; n],
        stack: Vec::new(),
        next: 0,
        out: Vec::new(),
    };
    for (v, &keep) in inside.iter().enumerate() {
        if keep && t.index[v].is_none() {
            t.visit(v);
        }
    }
    t.out
}

/// States of `inside` from which some fair path stays inside forever.
fn fair_within(pm: &PrunedModel, inside: &[bool], fairness: &[StateSet]) -> Vec<bool> {
    let n = pm.successors.len();
    let mut good = vec![false; n];
    for comp in sccs(pm, inside) {
        let cyclic = comp.len() > 1 || pm.successors[comp[0]].contains(&comp[0]);
        if cyclic && fairness.iter().all(|f| comp.iter().any(|&s| f.contains(s))) {
            for &s in &comp {
                good[s] = true;
            }
        }
    }
    backward_within(pm, inside, good)
}

/// Closes `targets` under predecessors that lie in `inside`.
fn backward_within(pm: &PrunedModel, inside: &[bool], mut reached: Vec<bool>) -> Vec<bool> {
    let n = pm.successors.len();
    let mut changed = true;
    while changed {
        changed = false;
        for s in 0..n {
            if !reached[s] && inside[s] && pm.successors[s].iter().any(|&d| reached[d]) {
                reached[s] = true;
                changed = true;
            }
        }
    }
    reached
}

/// States of `pm` from which every fair path satisfies the path formula.
pub fn winning_states(model: &Model, pm: &PrunedModel, kind: PathKind, ops: &[StateSet]) -> StateSet {
    let n = model.n_states();
    let fairness = effective_fairness(model);
    let everywhere = vec![true; n];
    let fair = fair_within(pm, &everywhere, &fairness);
    let violated: Vec<bool> = match kind {
        PathKind::Next => (0..n)
            .map(|s| pm.successors[s].iter().any(|&d| fair[d] && !ops[0].contains(d)))
            .collect(),
        PathKind::Globally => {
            let bad = (0..n).map(|s| fair[s] && !ops[0].contains(s)).collect();
            backward_within(pm, &everywhere, bad)
        }
        PathKind::Until | PathKind::WeakUntil => {
            let waiting: Vec<bool> = (0..n).map(|s| ops[0].contains(s) && !ops[1].contains(s)).collect();
            let stuck = (0..n)
                .map(|s| fair[s] && !ops[0].contains(s) && !ops[1].contains(s))
                .collect();
            let mut bad = backward_within(pm, &waiting, stuck);
            if kind == PathKind::Until {
                let forever = fair_within(pm, &waiting, &fairness);
                for s in 0..n {
                    bad[s] |= forever[s];
                }
            }
            bad
        }
    };
    StateSet::from_indices(n, (0..n).filter(|&s| !violated[s]))
}

pub fn holds_all_fair_paths(model: &Model, pm: &PrunedModel, state: usize, kind: PathKind, ops: &[StateSet]) -> bool {
    winning_states(model, pm, kind, ops).contains(state)
}

/// `⟨Γ⟩ψ` over uniform strategies: a state is kept when one strategy wins
/// from its whole class.
pub fn oracle_eval_po(
    model: &Model,
    coalition: &Coalition,
    kind: PathKind,
    ops: &[StateSet],
    cap: u128,
) -> Result<StateSet, OracleError> {
    let n = model.n_states();
    let classes = model.coalition_classes(coalition);
    let mut sat = StateSet::empty(n);
    for strategy in enumerate_uniform(model, coalition, cap)? {
        let win = winning_states(model, &prune(model, coalition, &strategy), kind, ops);
        for s in 0..n {
            if (0..n).all(|t| classes[t] != classes[s] || win.contains(t)) {
                sat.insert(s);
            }
        }
    }
    Ok(sat)
}

/// `⟨Γ⟩ψ` over global strategies.
pub fn oracle_eval_fo(
    model: &Model,
    coalition: &Coalition,
    kind: PathKind,
    ops: &[StateSet],
    cap: u128,
) -> Result<StateSet, OracleError> {
    let mut sat = StateSet::empty(model.n_states());
    for strategy in enumerate_global(model, coalition, cap)? {
        sat.union_with(&winning_states(model, &prune(model, coalition, &strategy), kind, ops));
    }
    Ok(sat)
}

/// Operands of the negated path formula, on sets.
pub fn negate_operands(kind: PathKind, ops: &[StateSet]) -> (PathKind, Vec<StateSet>) {
    let n = ops[0].capacity();
    match kind {
        PathKind::Next => (PathKind::Next, vec![ops[0].complement()]),
        PathKind::Globally => (PathKind::Until, vec![StateSet::full(n), ops[0].complement()]),
        PathKind::Until | PathKind::WeakUntil => {
            let not1 = ops[0].complement();
            let not2 = ops[1].complement();
            let both = not1.intersection(&not2);
            let flipped = if kind == PathKind::Until {
                PathKind::WeakUntil
            } else {
                PathKind::Until
            };
            (flipped, vec![not2, both])
        }
    }
}

/// Reference evaluator for whole formulas.
pub struct Oracle<'m> {
    model: &'m Model,
    semantics: Semantics,
    cap: u128,
}

impl<'m> Oracle<'m> {
    pub fn new(model: &'m Model, semantics: Semantics, cap: u128) -> Self {
        Oracle { model, semantics, cap }
    }

    /// `⟨Γ⟩ψ` on operand sets.
    pub fn exists(&self, coalition: &Coalition, kind: PathKind, ops: &[StateSet]) -> Result<StateSet, OracleError> {
        match self.semantics {
            Semantics::Po => oracle_eval_po(self.model, coalition, kind, ops, self.cap),
            Semantics::Fo => oracle_eval_fo(self.model, coalition, kind, ops, self.cap),
        }
    }

    /// `[Γ]ψ`: no strategy of Γ rules out every fair path satisfying ψ.
    pub fn forced(&self, coalition: &Coalition, kind: PathKind, ops: &[StateSet]) -> Result<StateSet, OracleError> {
        let (kind, ops) = negate_operands(kind, ops);
        Ok(self.exists(coalition, kind, &ops)?.complement())
    }

    fn path(&self, psi: &PathFormula) -> Result<(PathKind, Vec<StateSet>), OracleError> {
        let ops = psi
            .operands()
            .into_iter()
            .map(|f| self.eval(f))
            .collect::<Result<_, _>>()?;
        Ok((psi.kind(), ops))
    }

    /// Reachable states with a fair path in the unrestricted model.
    fn domain(&self) -> StateSet {
        let model = self.model;
        let n = model.n_states();
        let everything = PrunedModel {
            successors: (0..n)
                .map(|s| {
                    let mut v: Vec<usize> = model
                        .transitions_from(s)
                        .iter()
                        .flat_map(|t| t.successors.iter().map(|&d| d as usize))
                        .collect();
                    v.sort_unstable();
                    v.dedup();
                    v
                })
                .collect(),
        };
        let fair = fair_within(&everything, &vec![true; n], &effective_fairness(model));
        let mut seen = vec![false; n];
        let mut stack: Vec<usize> = model.init().iter().collect();
        for &s in &stack {
            seen[s] = true;
        }
        while let Some(s) = stack.pop() {
            for &d in &everything.successors[s] {
                if !seen[d] {
                    seen[d] = true;
                    stack.push(d);
                }
            }
        }
        StateSet::from_indices(n, (0..n).filter(|&s| seen[s] && fair[s]))
    }

    /// Knowledge for a relation given as a key function: `s` is kept when
    /// every domain state with the same key satisfies `phi`.
    fn knows(&self, phi: &StateSet, key: impl Fn(usize) -> Vec<usize>) -> StateSet {
        let n = self.model.n_states();
        let dom = self.domain();
        StateSet::from_indices(
            n,
            (0..n).filter(|&s| dom.iter().all(|t| key(t) != key(s) || phi.contains(t))),
        )
    }

    fn everyone(&self, coalition: &Coalition, phi: &StateSet) -> StateSet {
        let mut out = StateSet::full(self.model.n_states());
        for &i in coalition.members() {
            out.intersect_with(&self.knows(phi, |s| vec![self.model.local(s, i)]));
        }
        out
    }

    fn group(&self, names: &[String]) -> Result<Coalition, OracleError> {
        let coalition = self.model.coalition(names)?;
        if coalition.is_empty() {
            return Err(crate::model::ModelError::EmptyCoalition.into());
        }
        Ok(coalition)
    }

    pub fn eval(&self, formula: &Formula) -> Result<StateSet, OracleError> {
        let model = self.model;
        let n = model.n_states();
        Ok(match formula {
            Formula::True => StateSet::full(n),
            Formula::False => StateSet::empty(n),
            Formula::Atom(a) => model
                .label(a)
                .cloned()
                .ok_or_else(|| EvalError::UnknownAtom(a.clone()))?,
            Formula::Not(f) => self.eval(f)?.complement(),
            Formula::And(a, b) => self.eval(a)?.intersection(&self.eval(b)?),
            Formula::Or(a, b) => self.eval(a)?.union(&self.eval(b)?),
            Formula::Implies(a, b) => self.eval(a)?.complement().union(&self.eval(b)?),
            Formula::Iff(a, b) => {
                let a = self.eval(a)?;
                let b = self.eval(b)?;
                a.intersection(&b).union(&a.complement().intersection(&b.complement()))
            }
            Formula::ExistsPath(psi) => {
                let (kind, ops) = self.path(psi)?;
                self.forced(&Coalition::empty(), kind, &ops)?
            }
            Formula::ForAllPath(psi) => {
                let (kind, ops) = self.path(psi)?;
                self.exists(&Coalition::empty(), kind, &ops)?
            }
            Formula::Know(agent, f) => {
                let coalition = model.coalition(std::slice::from_ref(agent))?;
                self.everyone(&coalition, &self.eval(f)?)
            }
            Formula::EveryoneKnows(names, f) => self.everyone(&self.group(names)?, &self.eval(f)?),
            Formula::DistKnows(names, f) => {
                let coalition = self.group(names)?;
                let phi = self.eval(f)?;
                self.knows(&phi, |s| {
                    coalition.members().iter().map(|&i| model.local(s, i)).collect()
                })
            }
            Formula::CommonKnows(names, f) => {
                // Common knowledge: every domain state reachable through the
                // members' relations, in one or more steps, satisfies phi.
                let coalition = self.group(names)?;
                let phi = self.eval(f)?;
                let dom = self.domain();
                let linked = |s: usize, t: usize| {
                    coalition
                        .members()
                        .iter()
                        .any(|&i| model.local(s, i) == model.local(t, i))
                };
                let mut out = StateSet::empty(n);
                for s in 0..n {
                    let mut seen = vec![false; n];
                    let mut stack = vec![s];
                    let mut ok = true;
                    while let Some(u) = stack.pop() {
                        for t in dom.iter() {
                            if !seen[t] && linked(u, t) {
                                seen[t] = true;
                                ok &= phi.contains(t);
                                stack.push(t);
                            }
                        }
                    }
                    if ok {
                        out.insert(s);
                    }
                }
                out
            }
            Formula::Exists(names, psi) => {
                let coalition = model.coalition(names)?;
                let (kind, ops) = self.path(psi)?;
                self.exists(&coalition, kind, &ops)?
            }
            Formula::Forced(names, psi) => {
                let coalition = model.coalition(names)?;
                let (kind, ops) = self.path(psi)?;
                self.forced(&coalition, kind, &ops)?
            }
        })
    }
}
