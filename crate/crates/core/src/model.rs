//! Multi-agent models with interpreted-system structure.
//!
//! A model is declared by name (agents with local states, actions and
//! protocols, plus transitions over global-state tuples) and then validated
//! and interned into dense indices:
//!
//! * the state universe is the full product of the agents' local states,
//!   interned in lexicographic order (agent 0 most significant);
//! * joint actions are interned the same way over the agents' action lists;
//! * a coalition action is indexed in mixed radix over the coalition's
//!   members, in coalition order.
//!
//! `enabled` is always derived from the transition relation; declared
//! protocols are checked against it rather than trusted.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::bitset::StateSet;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("model declares no agents")]
    NoAgents,
    #[error("duplicate {kind} `{name}` in {scope}")]
    DuplicateName {
        kind: &'static str,
        name: String,
        scope: String,
    },
    #[error("undeclared {kind} `{name}`")]
    UndeclaredSymbol { kind: &'static str, name: String },
    #[error("{context}: expected {expected} components, found {found}")]
    ArityMismatch {
        context: String,
        expected: usize,
        found: usize,
    },
    #[error("agent `{agent}` has no protocol entry for local state `{state}`")]
    MissingProtocol { agent: String, state: String },
    #[error("agent `{agent}` has an empty protocol in local state `{state}`")]
    EmptyProtocol { agent: String, state: String },
    #[error("state {state} has no outgoing transition")]
    NonSerialState { state: String },
    #[error("agent `{agent}` cannot distinguish {first} and {second} but has different enabled actions there")]
    EnabledConsistencyViolation {
        agent: String,
        first: String,
        second: String,
    },
    #[error("agent `{agent}` in state {state}: protocol declares {{{declared}}} but transitions enable {{{derived}}}")]
    ProtocolMismatch {
        agent: String,
        state: String,
        declared: String,
        derived: String,
    },
    #[error("state {state}: joint action {action} is allowed by every protocol but has no transition")]
    IncompleteJointAction { state: String, action: String },
    #[error("coalition must not be empty")]
    EmptyCoalition,
    #[error("unknown agent `{0}`")]
    UnknownAgent(String),
}

/// Declaration of one agent, by name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgentDecl {
    pub name: String,
    pub local_states: Vec<String>,
    pub actions: Vec<String>,
    /// One entry per local state: the actions the agent may take there.
    pub protocol: Vec<(String, Vec<String>)>,
}

/// A transition between named global states, labelled with a named joint action.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionDecl {
    pub source: Vec<String>,
    pub action: Vec<String>,
    pub target: Vec<String>,
}

/// Everything `build_model` needs, with states and actions referred to by name.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ModelSpec {
    pub agents: Vec<AgentDecl>,
    pub transitions: Vec<TransitionDecl>,
    pub init: Vec<Vec<String>>,
    pub labels: Vec<(String, Vec<Vec<String>>)>,
    pub fairness: Vec<Vec<Vec<String>>>,
}

/// A validated agent with its protocol resolved to action indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Agent {
    pub name: String,
    pub local_states: Vec<String>,
    pub actions: Vec<String>,
    pub protocol: Vec<Vec<usize>>,
}

/// A global state as a tuple of local-state indices, in agent order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GlobalState {
    pub locals: Vec<usize>,
}

/// A joint action as a tuple of action indices, in agent order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JointAction {
    pub parts: Vec<usize>,
}

/// A set of agents, kept sorted and duplicate-free.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Coalition(Vec<usize>);

impl Coalition {
    pub fn new<I: IntoIterator<Item = usize>>(agents: I) -> Self {
        let mut v: Vec<usize> = agents.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Coalition(v)
    }

    pub fn empty() -> Self {
        Coalition(Vec::new())
    }

    pub fn members(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, agent: usize) -> bool {
        self.0.binary_search(&agent).is_ok()
    }
}

/// An action for each member of a coalition, aligned with the coalition order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoalitionAction {
    pub coalition: Coalition,
    pub parts: Vec<usize>,
}

/// `a_Γ ⊑ a`: the joint action agrees with the coalition action on every member.
pub fn completes(partial: &CoalitionAction, joint: &JointAction) -> bool {
    partial
        .coalition
        .members()
        .iter()
        .zip(&partial.parts)
        .all(|(&agent, &action)| joint.parts.get(agent) == Some(&action))
}

/// All transitions leaving one state under one joint action.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transition {
    pub action: u32,
    pub successors: Vec<u32>,
}

/// One enabled coalition action at a state, with the union of the successors
/// of all joint actions completing it.
#[derive(Debug, Clone)]
pub struct Move {
    pub action: u32,
    pub successors: Vec<u32>,
}

/// The transition relation seen from a coalition: per state, the enabled
/// coalition actions and where they may lead.
#[derive(Debug, Clone)]
pub struct CoalitionView {
    coalition: Coalition,
    n_actions: usize,
    offsets: Vec<usize>,
    moves: Vec<Move>,
}

impl CoalitionView {
    pub fn coalition(&self) -> &Coalition {
        &self.coalition
    }

    /// Size of the coalition action space `Act_Γ`.
    pub fn n_actions(&self) -> usize {
        self.n_actions
    }

    pub fn n_states(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Enabled coalition moves at `state`, ordered by action index.
    pub fn moves(&self, state: usize) -> &[Move] {
        &self.moves[self.offsets[state]..self.offsets[state + 1]]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    agents: Vec<Agent>,
    state_strides: Vec<usize>,
    n_states: usize,
    action_strides: Vec<usize>,
    transitions: Vec<Vec<Transition>>,
    init: StateSet,
    labels: BTreeMap<String, StateSet>,
    fairness: Vec<StateSet>,
    warnings: Vec<String>,
}

fn strides(radices: impl DoubleEndedIterator<Item = usize>) -> (Vec<usize>, usize) {
    let mut rev = Vec::new();
    let mut total = 1usize;
    for r in radices.rev() {
        rev.push(total);
        total = total.checked_mul(r).expect("index space overflows usize");
    }
    rev.reverse();
    (rev, total)
}

fn check_unique(names: &[String], kind: &'static str, scope: &str) -> Result<(), ModelError> {
    let mut seen = std::collections::HashSet::new();
    for n in names {
        if !seen.insert(n.as_str()) {
            return Err(ModelError::DuplicateName {
                kind,
                name: n.clone(),
                scope: scope.to_string(),
            });
        }
    }
    Ok(())
}

fn lookup(names: &[String], name: &str, kind: &'static str) -> Result<usize, ModelError> {
    names
        .iter()
        .position(|n| n == name)
        .ok_or_else(|| ModelError::UndeclaredSymbol {
            kind,
            name: name.to_string(),
        })
}

/// Validates a declared model and interns it.
pub fn build_model(spec: &ModelSpec) -> Result<Model, ModelError> {
    if spec.agents.is_empty() {
        return Err(ModelError::NoAgents);
    }
    let agent_names: Vec<String> = spec.agents.iter().map(|a| a.name.clone()).collect();
    check_unique(&agent_names, "agent", "model")?;

    let mut agents = Vec::with_capacity(spec.agents.len());
    for decl in &spec.agents {
        let scope = format!("agent `{}`", decl.name);
        check_unique(&decl.local_states, "local state", &scope)?;
        check_unique(&decl.actions, "action", &scope)?;
        let mut protocol: Vec<Option<Vec<usize>>> = vec![None; decl.local_states.len()];
        for (state, actions) in &decl.protocol {
            let l = lookup(&decl.local_states, state, "local state")?;
            if protocol[l].is_some() {
                return Err(ModelError::DuplicateName {
                    kind: "protocol entry",
                    name: state.clone(),
                    scope: scope.clone(),
                });
            }
            check_unique(actions, "action", &format!("protocol of `{state}`"))?;
            let mut idx = actions
                .iter()
                .map(|a| lookup(&decl.actions, a, "action"))
                .collect::<Result<Vec<_>, _>>()?;
            if idx.is_empty() {
                return Err(ModelError::EmptyProtocol {
                    agent: decl.name.clone(),
                    state: state.clone(),
                });
            }
            idx.sort_unstable();
            protocol[l] = Some(idx);
        }
        let protocol = protocol
            .into_iter()
            .enumerate()
            .map(|(l, p)| {
                p.ok_or_else(|| ModelError::MissingProtocol {
                    agent: decl.name.clone(),
                    state: decl.local_states[l].clone(),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        if decl.local_states.is_empty() {
            return Err(ModelError::MissingProtocol {
                agent: decl.name.clone(),
                state: "<none declared>".into(),
            });
        }
        agents.push(Agent {
            name: decl.name.clone(),
            local_states: decl.local_states.clone(),
            actions: decl.actions.clone(),
            protocol,
        });
    }

    let (state_strides, n_states) = strides(agents.iter().map(|a| a.local_states.len()));
    let (action_strides, _) = strides(agents.iter().map(|a| a.actions.len()));

    let mut model = Model {
        agents,
        state_strides,
        n_states,
        action_strides,
        transitions: vec![Vec::new(); n_states],
        init: StateSet::empty(n_states),
        labels: BTreeMap::new(),
        fairness: Vec::new(),
        warnings: Vec::new(),
    };

    let mut rel: Vec<BTreeMap<u32, Vec<u32>>> = vec![BTreeMap::new(); n_states];
    for t in &spec.transitions {
        let s = model.resolve_state(&t.source, "transition source")?;
        let a = model.resolve_action(&t.action)?;
        let d = model.resolve_state(&t.target, "transition target")?;
        rel[s].entry(a as u32).or_default().push(d as u32);
    }
    for (s, moves) in rel.into_iter().enumerate() {
        model.transitions[s] = moves
            .into_iter()
            .map(|(action, mut successors)| {
                successors.sort_unstable();
                successors.dedup();
                Transition { action, successors }
            })
            .collect();
    }

    for st in &spec.init {
        let s = model.resolve_state(st, "initial state")?;
        model.init.insert(s);
    }
    for (atom, states) in &spec.labels {
        let mut set = model.labels.remove(atom).unwrap_or_else(|| StateSet::empty(n_states));
        for st in states {
            set.insert(model.resolve_state(st, &format!("label `{atom}`"))?);
        }
        model.labels.insert(atom.clone(), set);
    }
    for (k, constraint) in spec.fairness.iter().enumerate() {
        let mut set = StateSet::empty(n_states);
        for st in constraint {
            set.insert(model.resolve_state(st, "fairness constraint")?);
        }
        if set.is_empty() {
            model
                .warnings
                .push(format!("fairness constraint #{} is empty: no path is fair", k + 1));
        }
        model.fairness.push(set);
    }

    model.validate()?;
    Ok(model)
}

impl Model {
    fn resolve_state(&self, names: &[String], context: &str) -> Result<usize, ModelError> {
        if names.len() != self.agents.len() {
            return Err(ModelError::ArityMismatch {
                context: context.to_string(),
                expected: self.agents.len(),
                found: names.len(),
            });
        }
        let locals = names
            .iter()
            .zip(&self.agents)
            .map(|(n, a)| lookup(&a.local_states, n, "local state"))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(self.state_index(&GlobalState { locals }))
    }

    fn resolve_action(&self, names: &[String]) -> Result<usize, ModelError> {
        if names.len() != self.agents.len() {
            return Err(ModelError::ArityMismatch {
                context: "joint action".into(),
                expected: self.agents.len(),
                found: names.len(),
            });
        }
        let parts = names
            .iter()
            .zip(&self.agents)
            .map(|(n, a)| lookup(&a.actions, n, "action"))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(self.joint_action_index(&JointAction { parts }))
    }

    fn validate(&self) -> Result<(), ModelError> {
        for s in 0..self.n_states {
            if self.transitions[s].is_empty() {
                return Err(ModelError::NonSerialState {
                    state: self.state_name(s),
                });
            }
        }
        for (i, agent) in self.agents.iter().enumerate() {
            let mut first_of_class: Vec<Option<(usize, Vec<usize>)>> = vec![None; agent.local_states.len()];
            for s in 0..self.n_states {
                let enabled = self.enabled_agent(s, i);
                let l = self.local(s, i);
                match &first_of_class[l] {
                    None => first_of_class[l] = Some((s, enabled)),
                    Some((rep, rep_enabled)) => {
                        if *rep_enabled != enabled {
                            return Err(ModelError::EnabledConsistencyViolation {
                                agent: agent.name.clone(),
                                first: self.state_name(*rep),
                                second: self.state_name(s),
                            });
                        }
                    }
                }
            }
            for s in 0..self.n_states {
                let enabled = self.enabled_agent(s, i);
                let declared = &agent.protocol[self.local(s, i)];
                if &enabled != declared {
                    let names = |v: &[usize]| {
                        v.iter()
                            .map(|&a| agent.actions[a].as_str())
                            .collect::<Vec<_>>()
                            .join(", ")
                    };
                    return Err(ModelError::ProtocolMismatch {
                        agent: agent.name.clone(),
                        state: self.state_name(s),
                        declared: names(declared),
                        derived: names(&enabled),
                    });
                }
            }
        }
        // Joint protocols are the product of the local ones.
        for s in 0..self.n_states {
            let per_agent: Vec<&Vec<usize>> = (0..self.agents.len())
                .map(|i| &self.agents[i].protocol[self.local(s, i)])
                .collect();
            let expected: usize = per_agent.iter().map(|p| p.len()).product();
            if expected != self.transitions[s].len() {
                let present: std::collections::HashSet<u32> = self.transitions[s].iter().map(|t| t.action).collect();
                let mut missing = None;
                for_each_product(&per_agent, |parts| {
                    if missing.is_none() {
                        let ja = JointAction { parts: parts.to_vec() };
                        if !present.contains(&(self.joint_action_index(&ja) as u32)) {
                            missing = Some(ja);
                        }
                    }
                });
                let action = missing.map(|a| self.joint_action_name(&a)).unwrap_or_default();
                return Err(ModelError::IncompleteJointAction {
                    state: self.state_name(s),
                    action,
                });
            }
        }
        Ok(())
    }

    pub fn agents(&self) -> &[Agent] {
        &self.agents
    }

    pub fn agent_index(&self, name: &str) -> Option<usize> {
        self.agents.iter().position(|a| a.name == name)
    }

    /// Resolves agent names to a coalition.
    pub fn coalition<S: AsRef<str>>(&self, names: &[S]) -> Result<Coalition, ModelError> {
        names
            .iter()
            .map(|n| {
                self.agent_index(n.as_ref())
                    .ok_or_else(|| ModelError::UnknownAgent(n.as_ref().to_string()))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Coalition::new)
    }

    /// The coalition of every agent.
    pub fn grand_coalition(&self) -> Coalition {
        Coalition::new(0..self.agents.len())
    }

    pub fn n_states(&self) -> usize {
        self.n_states
    }

    pub fn n_joint_actions(&self) -> usize {
        self.agents.iter().map(|a| a.actions.len()).product()
    }

    pub fn state_index(&self, state: &GlobalState) -> usize {
        state.locals.iter().zip(&self.state_strides).map(|(l, s)| l * s).sum()
    }

    pub fn state(&self, index: usize) -> GlobalState {
        GlobalState {
            locals: (0..self.agents.len()).map(|i| self.local(index, i)).collect(),
        }
    }

    /// Agent `agent`'s local-state index in global state `state`.
    #[inline]
    pub fn local(&self, state: usize, agent: usize) -> usize {
        (state / self.state_strides[agent]) % self.agents[agent].local_states.len()
    }

    /// Looks up a global state by local-state names.
    pub fn state_by_names<S: AsRef<str>>(&self, names: &[S]) -> Option<usize> {
        let owned: Vec<String> = names.iter().map(|n| n.as_ref().to_string()).collect();
        self.resolve_state(&owned, "state").ok()
    }

    /// `(l1,l2,...)`
    pub fn state_name(&self, index: usize) -> String {
        let parts: Vec<&str> = (0..self.agents.len())
            .map(|i| self.agents[i].local_states[self.local(index, i)].as_str())
            .collect();
        format!("({})", parts.join(","))
    }

    pub fn joint_action_index(&self, action: &JointAction) -> usize {
        action.parts.iter().zip(&self.action_strides).map(|(a, s)| a * s).sum()
    }

    pub fn joint_action(&self, index: usize) -> JointAction {
        JointAction {
            parts: (0..self.agents.len())
                .map(|i| (index / self.action_strides[i]) % self.agents[i].actions.len())
                .collect(),
        }
    }

    pub fn joint_action_name(&self, action: &JointAction) -> String {
        let parts: Vec<&str> = action
            .parts
            .iter()
            .zip(&self.agents)
            .map(|(&a, agent)| agent.actions[a].as_str())
            .collect();
        format!("({})", parts.join(","))
    }

    pub fn transitions_from(&self, state: usize) -> &[Transition] {
        &self.transitions[state]
    }

    pub fn init(&self) -> &StateSet {
        &self.init
    }

    pub fn label(&self, atom: &str) -> Option<&StateSet> {
        self.labels.get(atom)
    }

    pub fn labels(&self) -> &BTreeMap<String, StateSet> {
        &self.labels
    }

    pub fn fairness(&self) -> &[StateSet] {
        &self.fairness
    }

    /// Non-fatal validation findings (e.g. an empty fairness constraint).
    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn all_states(&self) -> StateSet {
        StateSet::full(self.n_states)
    }

    /// Actions of `agent` occurring in some transition from `state`.
    pub fn enabled_agent(&self, state: usize, agent: usize) -> Vec<usize> {
        let n = self.agents[agent].actions.len();
        let mut seen = vec![false; n];
        for t in &self.transitions[state] {
            seen[(t.action as usize / self.action_strides[agent]) % n] = true;
        }
        (0..n).filter(|&a| seen[a]).collect()
    }

    /// Number of coalition actions, `|Act_Γ|`.
    pub fn coalition_action_count(&self, coalition: &Coalition) -> usize {
        coalition
            .members()
            .iter()
            .map(|&i| self.agents[i].actions.len())
            .product()
    }

    pub fn coalition_action_index(&self, action: &CoalitionAction) -> usize {
        let mut idx = 0;
        for (&agent, &a) in action.coalition.members().iter().zip(&action.parts) {
            idx = idx * self.agents[agent].actions.len() + a;
        }
        idx
    }

    pub fn coalition_action(&self, coalition: &Coalition, mut index: usize) -> CoalitionAction {
        let mut parts = vec![0; coalition.len()];
        for (k, &agent) in coalition.members().iter().enumerate().rev() {
            let n = self.agents[agent].actions.len();
            parts[k] = index % n;
            index /= n;
        }
        CoalitionAction {
            coalition: coalition.clone(),
            parts,
        }
    }

    /// Index of the coalition projection of a joint action.
    pub fn project_action(&self, coalition: &Coalition, joint: usize) -> usize {
        let mut idx = 0;
        for &agent in coalition.members() {
            let n = self.agents[agent].actions.len();
            idx = idx * n + (joint / self.action_strides[agent]) % n;
        }
        idx
    }

    /// Action of one coalition member inside a coalition action index.
    pub fn member_action(&self, coalition: &Coalition, action: usize, position: usize) -> usize {
        let mut rest = action;
        for &agent in coalition.members()[position + 1..].iter() {
            rest /= self.agents[agent].actions.len();
        }
        rest % self.agents[coalition.members()[position]].actions.len()
    }

    pub fn coalition_action_name(&self, action: &CoalitionAction) -> String {
        let parts: Vec<&str> = action
            .coalition
            .members()
            .iter()
            .zip(&action.parts)
            .map(|(&i, &a)| self.agents[i].actions[a].as_str())
            .collect();
        format!("({})", parts.join(","))
    }

    /// Γ-projections of the joint actions enabled at `state`, ordered by index.
    pub fn enabled_coalition(&self, state: usize, coalition: &Coalition) -> Vec<CoalitionAction> {
        let mut idx: Vec<usize> = self.transitions[state]
            .iter()
            .map(|t| self.project_action(coalition, t.action as usize))
            .collect();
        idx.sort_unstable();
        idx.dedup();
        idx.into_iter().map(|i| self.coalition_action(coalition, i)).collect()
    }

    /// `img(s, a)`; empty when `a` has no transition from `state`.
    pub fn img(&self, state: usize, action: &JointAction) -> StateSet {
        let a = self.joint_action_index(action) as u32;
        let succ = self.transitions[state]
            .iter()
            .find(|t| t.action == a)
            .map(|t| t.successors.as_slice())
            .unwrap_or(&[]);
        StateSet::from_indices(self.n_states, succ.iter().map(|&s| s as usize))
    }

    /// States agent `agent` cannot distinguish from `state`.
    pub fn equiv_class(&self, state: usize, agent: usize) -> StateSet {
        let l = self.local(state, agent);
        StateSet::from_indices(self.n_states, (0..self.n_states).filter(|&s| self.local(s, agent) == l))
    }

    /// States some member of the coalition cannot distinguish from `state`.
    pub fn equiv_union(&self, state: usize, coalition: &Coalition) -> Result<StateSet, ModelError> {
        if coalition.is_empty() {
            return Err(ModelError::EmptyCoalition);
        }
        let mut out = StateSet::empty(self.n_states);
        for &i in coalition.members() {
            out.union_with(&self.equiv_class(state, i));
        }
        Ok(out)
    }

    /// Class ids of the transitive closure of `⋃_{i∈Γ} ∼i` (ids are the
    /// smallest member index of each class). The empty coalition yields the
    /// identity relation.
    pub fn coalition_classes(&self, coalition: &Coalition) -> Vec<usize> {
        let mut parent: Vec<usize> = (0..self.n_states).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for &i in coalition.members() {
            let mut rep: Vec<Option<usize>> = vec![None; self.agents[i].local_states.len()];
            for s in 0..self.n_states {
                let l = self.local(s, i);
                match rep[l] {
                    None => rep[l] = Some(s),
                    Some(r) => {
                        let (a, b) = (find(&mut parent, r), find(&mut parent, s));
                        if a != b {
                            parent[a.max(b)] = a.min(b);
                        }
                    }
                }
            }
        }
        (0..self.n_states).map(|s| find(&mut parent, s)).collect()
    }

    /// Least fixpoint of the forward image from the initial states.
    pub fn reachable(&self) -> StateSet {
        let mut seen = self.init.clone();
        let mut stack: Vec<usize> = self.init.iter().collect();
        while let Some(s) = stack.pop() {
            for t in &self.transitions[s] {
                for &d in &t.successors {
                    if seen.insert(d as usize) {
                        stack.push(d as usize);
                    }
                }
            }
        }
        seen
    }

    /// Groups transitions by coalition projection.
    pub fn coalition_view(&self, coalition: &Coalition) -> CoalitionView {
        let mut offsets = Vec::with_capacity(self.n_states + 1);
        let mut moves = Vec::new();
        offsets.push(0);
        for s in 0..self.n_states {
            let mut grouped: BTreeMap<usize, Vec<u32>> = BTreeMap::new();
            for t in &self.transitions[s] {
                grouped
                    .entry(self.project_action(coalition, t.action as usize))
                    .or_default()
                    .extend_from_slice(&t.successors);
            }
            for (action, mut successors) in grouped {
                successors.sort_unstable();
                successors.dedup();
                moves.push(Move {
                    action: action as u32,
                    successors,
                });
            }
            offsets.push(moves.len());
        }
        CoalitionView {
            coalition: coalition.clone(),
            n_actions: self.coalition_action_count(coalition),
            offsets,
            moves,
        }
    }

    /// Back to a name-level declaration (used by the model printer).
    pub fn to_spec(&self) -> ModelSpec {
        let names = |s: usize| -> Vec<String> {
            (0..self.agents.len())
                .map(|i| self.agents[i].local_states[self.local(s, i)].clone())
                .collect()
        };
        let agents = self
            .agents
            .iter()
            .map(|a| AgentDecl {
                name: a.name.clone(),
                local_states: a.local_states.clone(),
                actions: a.actions.clone(),
                protocol: a
                    .local_states
                    .iter()
                    .zip(&a.protocol)
                    .map(|(l, p)| (l.clone(), p.iter().map(|&x| a.actions[x].clone()).collect()))
                    .collect(),
            })
            .collect();
        let mut transitions = Vec::new();
        for s in 0..self.n_states {
            for t in &self.transitions[s] {
                let ja = self.joint_action(t.action as usize);
                let action: Vec<String> = ja
                    .parts
                    .iter()
                    .zip(&self.agents)
                    .map(|(&x, a)| a.actions[x].clone())
                    .collect();
                for &d in &t.successors {
                    transitions.push(TransitionDecl {
                        source: names(s),
                        action: action.clone(),
                        target: names(d as usize),
                    });
                }
            }
        }
        ModelSpec {
            agents,
            transitions,
            init: self.init.iter().map(names).collect(),
            labels: self
                .labels
                .iter()
                .map(|(k, v)| (k.clone(), v.iter().map(names).collect()))
                .collect(),
            fairness: self.fairness.iter().map(|f| f.iter().map(names).collect()).collect(),
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "model with {} agents, {} states, {} initial, {} fairness constraints",
            self.agents.len(),
            self.n_states,
            self.init.count(),
            self.fairness.len()
        )
    }
}

/// Calls `f` on every tuple of the cartesian product, in lexicographic order.
pub(crate) fn for_each_product(sets: &[&Vec<usize>], mut f: impl FnMut(&[usize])) {
    if sets.iter().any(|s| s.is_empty()) {
        return;
    }
    let mut pos = vec![0usize; sets.len()];
    let mut buf: Vec<usize> = sets.iter().map(|s| s[0]).collect();
    loop {
        f(&buf);
        let mut k = sets.len();
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            pos[k] += 1;
            if pos[k] < sets[k].len() {
                buf[k] = sets[k][pos[k]];
                break;
            }
            pos[k] = 0;
            buf[k] = sets[k][0];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn m2_spec() -> ModelSpec {
        let t = |s: [&str; 2], a: [&str; 2], d: [&str; 2]| TransitionDecl {
            source: names(&s),
            action: names(&a),
            target: names(&d),
        };
        ModelSpec {
            agents: vec![
                AgentDecl {
                    name: "g".into(),
                    local_states: names(&["u"]),
                    actions: names(&["a", "b"]),
                    protocol: vec![("u".into(), names(&["a", "b"]))],
                },
                AgentDecl {
                    name: "e".into(),
                    local_states: names(&["v", "w"]),
                    actions: names(&["n"]),
                    protocol: vec![("v".into(), names(&["n"])), ("w".into(), names(&["n"]))],
                },
            ],
            transitions: vec![
                t(["u", "v"], ["a", "n"], ["u", "v"]),
                t(["u", "v"], ["b", "n"], ["u", "w"]),
                t(["u", "w"], ["a", "n"], ["u", "w"]),
                t(["u", "w"], ["b", "n"], ["u", "w"]),
            ],
            init: vec![names(&["u", "v"])],
            labels: vec![("q".into(), vec![names(&["u", "w"])])],
            fairness: vec![],
        }
    }

    #[test]
    fn builds_fixtures() {
        let m1 = fixtures::m1();
        assert_eq!(m1.n_states(), 2);
        assert_eq!(m1.n_joint_actions(), 2);
        let m2 = build_model(&m2_spec()).unwrap();
        assert_eq!(m2, fixtures::m2());
        assert_eq!(m2.state_name(0), "(u,v)");
        assert_eq!(m2.state_name(1), "(u,w)");
    }

    #[test]
    fn removing_one_action_breaks_enabled_consistency() {
        // (u,v) ∼g (u,w) but g could no longer play `a` in (u,w).
        let mut spec = m2_spec();
        spec.transitions.remove(2);
        assert!(matches!(
            build_model(&spec),
            Err(ModelError::EnabledConsistencyViolation { ref agent, .. }) if agent == "g"
        ));
    }

    #[test]
    fn removing_all_rows_of_a_state_is_non_serial() {
        let mut spec = m2_spec();
        spec.transitions.truncate(2);
        assert_eq!(
            build_model(&spec),
            Err(ModelError::NonSerialState { state: "(u,w)".into() })
        );
    }

    #[test]
    fn declaration_errors() {
        let mut spec = m2_spec();
        spec.agents[0].protocol[0].1.clear();
        assert!(matches!(build_model(&spec), Err(ModelError::EmptyProtocol { .. })));

        let mut spec = m2_spec();
        spec.transitions[0].action[0] = "zz".into();
        assert!(matches!(
            build_model(&spec),
            Err(ModelError::UndeclaredSymbol { kind: "action", .. })
        ));

        let mut spec = m2_spec();
        spec.agents[1].name = "g".into();
        assert!(matches!(
            build_model(&spec),
            Err(ModelError::DuplicateName { kind: "agent", .. })
        ));

        let mut spec = m2_spec();
        spec.agents[0].protocol[0].1 = names(&["a"]);
        assert!(matches!(build_model(&spec), Err(ModelError::ProtocolMismatch { .. })));

        let mut spec = m2_spec();
        spec.init[0].pop();
        assert!(matches!(build_model(&spec), Err(ModelError::ArityMismatch { .. })));
    }

    #[test]
    fn incomplete_joint_protocol_is_rejected() {
        // Two agents with two actions each, but only the diagonal is wired.
        let spec = ModelSpec {
            agents: ["p", "r"]
                .iter()
                .map(|n| AgentDecl {
                    name: n.to_string(),
                    local_states: names(&["s"]),
                    actions: names(&["a", "b"]),
                    protocol: vec![("s".into(), names(&["a", "b"]))],
                })
                .collect(),
            transitions: vec![
                TransitionDecl {
                    source: names(&["s", "s"]),
                    action: names(&["a", "a"]),
                    target: names(&["s", "s"]),
                },
                TransitionDecl {
                    source: names(&["s", "s"]),
                    action: names(&["b", "b"]),
                    target: names(&["s", "s"]),
                },
            ],
            init: vec![names(&["s", "s"])],
            ..Default::default()
        };
        assert_eq!(
            build_model(&spec),
            Err(ModelError::IncompleteJointAction {
                state: "(s,s)".into(),
                action: "(a,b)".into()
            })
        );
    }

    #[test]
    fn empty_fairness_constraint_warns() {
        let mut spec = m2_spec();
        spec.fairness.push(vec![]);
        let m = build_model(&spec).unwrap();
        assert_eq!(m.warnings().len(), 1);
    }

    #[test]
    fn enabled_and_img() {
        let m1 = fixtures::m1();
        let x = m1.state_by_names(&["x"]).unwrap();
        let y = m1.state_by_names(&["y"]).unwrap();
        assert_eq!(m1.enabled_agent(x, 0), vec![0, 1]);
        let a = JointAction { parts: vec![0] };
        let b = JointAction { parts: vec![1] };
        assert_eq!(m1.img(x, &b), StateSet::from_indices(2, [y]));
        assert_eq!(m1.img(x, &a), StateSet::from_indices(2, [x]));
        assert_eq!(m1.img(y, &a), StateSet::from_indices(2, [y]));
        assert_eq!(m1.img(y, &b), StateSet::from_indices(2, [y]));

        let m2 = fixtures::m2();
        let uv = m2.state_by_names(&["u", "v"]).unwrap();
        let uw = m2.state_by_names(&["u", "w"]).unwrap();
        assert_eq!(m2.enabled_agent(uw, 1), vec![0]);
        let g = m2.coalition(&["g"]).unwrap();
        let ge = m2.coalition(&["g", "e"]).unwrap();
        let names_of = |v: Vec<CoalitionAction>| v.iter().map(|a| m2.coalition_action_name(a)).collect::<Vec<_>>();
        assert_eq!(names_of(m2.enabled_coalition(uv, &g)), vec!["(a)", "(b)"]);
        assert_eq!(names_of(m2.enabled_coalition(uv, &Coalition::empty())), vec!["()"]);
        assert_eq!(names_of(m2.enabled_coalition(uv, &ge)), vec!["(a,n)", "(b,n)"]);
    }

    #[test]
    fn completes_projection() {
        let g = Coalition::new([0]);
        let bn = JointAction { parts: vec![1, 0] };
        assert!(completes(
            &CoalitionAction {
                coalition: g.clone(),
                parts: vec![1]
            },
            &bn
        ));
        assert!(!completes(
            &CoalitionAction {
                coalition: g,
                parts: vec![0]
            },
            &bn
        ));
        assert!(completes(
            &CoalitionAction {
                coalition: Coalition::empty(),
                parts: vec![]
            },
            &bn
        ));
    }

    #[test]
    fn equivalence_classes() {
        let m2 = fixtures::m2();
        let uv = m2.state_by_names(&["u", "v"]).unwrap();
        let both = m2.all_states();
        assert_eq!(m2.equiv_class(uv, 0), both);
        assert_eq!(m2.equiv_class(uv, 1), StateSet::from_indices(2, [uv]));
        assert_eq!(m2.equiv_union(uv, &Coalition::new([0])).unwrap(), both);
        assert_eq!(m2.equiv_union(uv, &Coalition::new([0, 1])).unwrap(), both);
        assert_eq!(m2.equiv_union(uv, &Coalition::empty()), Err(ModelError::EmptyCoalition));
        let m1 = fixtures::m1();
        assert_eq!(m1.equiv_class(0, 0), StateSet::from_indices(2, [0]));
    }

    #[test]
    fn reachability() {
        assert!(fixtures::m1().reachable().is_full());
        assert!(fixtures::m2().reachable().is_full());
        let cg = fixtures::cg_repeat();
        let r = cg.reachable();
        assert!(cg.init().is_subset(&r));
        // (A,none) is a junk state: never dealt.
        assert!(!r.contains(cg.state_by_names(&["A", "none"]).unwrap()));
    }

    #[test]
    fn coalition_action_indexing_round_trips() {
        let cg = fixtures::cg_repeat();
        let all = cg.grand_coalition();
        for idx in 0..cg.coalition_action_count(&all) {
            let a = cg.coalition_action(&all, idx);
            assert_eq!(cg.coalition_action_index(&a), idx);
            for pos in 0..all.len() {
                assert_eq!(cg.member_action(&all, idx, pos), a.parts[pos]);
            }
        }
        for j in 0..cg.n_joint_actions() {
            assert_eq!(cg.project_action(&all, j), j);
        }
    }

    #[test]
    fn product_enumeration_order() {
        let a = vec![1, 2];
        let b = vec![0, 5];
        let mut out = Vec::new();
        for_each_product(&[&a, &b], |t| out.push(t.to_vec()));
        assert_eq!(out, vec![vec![1, 0], vec![1, 5], vec![2, 0], vec![2, 5]]);
        let mut n = 0;
        for_each_product(&[], |_| n += 1);
        assert_eq!(n, 1);
    }
}
