//! Bottom-up evaluation of whole formulas under either semantics.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::bitset::StateSet;
use crate::fo::Game;
use crate::formula::{negate_path, Formula, PathFormula};
use crate::model::{Coalition, CoalitionView, Model, ModelError};
use crate::po::{PoAlgorithm, PoEngine, PoOptions};
use crate::result::{CheckResult, Diagnostics, Witness};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Semantics {
    /// Global strategies, full observability.
    Fo,
    /// Uniform strategies, partial observability.
    #[default]
    Po,
}

impl fmt::Display for Semantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Semantics::Fo => "fo",
            Semantics::Po => "po",
        })
    }
}

impl FromStr for Semantics {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "fo" => Ok(Semantics::Fo),
            "po" => Ok(Semantics::Po),
            other => Err(format!("unknown semantics `{other}`")),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Evaluates formulas against one model, caching closed subformulas.
pub struct Checker<'m> {
    model: &'m Model,
    semantics: Semantics,
    options: PoOptions,
    cache: HashMap<Formula, StateSet>,
    views: HashMap<Coalition, CoalitionView>,
    engines: HashMap<Coalition, PoEngine<'m>>,
    domain: Option<StateSet>,
    diagnostics: Diagnostics,
}

impl<'m> Checker<'m> {
    pub fn new(model: &'m Model, semantics: Semantics, options: PoOptions) -> Self {
        Checker {
            model,
            semantics,
            options,
            cache: HashMap::new(),
            views: HashMap::new(),
            engines: HashMap::new(),
            domain: None,
            diagnostics: Diagnostics::default(),
        }
    }

    pub fn fo(model: &'m Model) -> Self {
        Checker::new(model, Semantics::Fo, PoOptions::default())
    }

    pub fn po(model: &'m Model, options: PoOptions) -> Self {
        Checker::new(model, Semantics::Po, options)
    }

    pub fn model(&self) -> &'m Model {
        self.model
    }

    /// Counters accumulated over every evaluation so far.
    pub fn diagnostics(&self) -> Diagnostics {
        self.diagnostics
    }

    fn algorithm_name(&self) -> String {
        match self.semantics {
            Semantics::Fo => "fixpoint".to_string(),
            Semantics::Po => self.options.algorithm.resolve().to_string(),
        }
    }

    /// Evaluates `formula` and packages the outcome.
    pub fn check(&mut self, formula: &Formula) -> Result<CheckResult, EvalError> {
        let before = self.diagnostics;
        let sat = self.eval(formula)?;
        let mut diag = self.diagnostics;
        diag.strategies_enumerated -= before.strategies_enumerated;
        diag.branches_pruned -= before.branches_pruned;
        diag.fixpoint_iterations -= before.fixpoint_iterations;
        let mut result = CheckResult::new(
            self.model,
            formula.to_string(),
            &self.semantics.to_string(),
            &self.algorithm_name(),
            sat,
            diag,
        );
        if self.options.witness && self.semantics == Semantics::Po {
            if let Formula::Exists(names, psi) = formula {
                result.witness = Some(self.witnesses(names, psi, &result.sat)?);
            }
        }
        Ok(result)
    }

    fn witnesses(&mut self, names: &[String], psi: &PathFormula, sat: &StateSet) -> Result<Vec<Witness>, EvalError> {
        let coalition = self.model.coalition(names)?;
        let ops = self.operands(psi)?;
        let engine = PoEngine::new(self.model, &coalition);
        let mut out = Vec::new();
        for s in self.model.init().iter() {
            if !sat.contains(s) {
                continue;
            }
            let strategy = if coalition.is_empty() {
                Vec::new()
            } else {
                match engine.witness(psi.kind(), &ops, s) {
                    Some(strat) => engine.describe(&strat),
                    None => continue,
                }
            };
            out.push(Witness {
                init_state: self.model.state_name(s),
                strategy,
            });
        }
        Ok(out)
    }

    /// The set of states satisfying `formula`.
    pub fn eval(&mut self, formula: &Formula) -> Result<StateSet, EvalError> {
        if let Some(hit) = self.cache.get(formula) {
            return Ok(hit.clone());
        }
        let n = self.model.n_states();
        let result = match formula {
            Formula::True => StateSet::full(n),
            Formula::False => StateSet::empty(n),
            Formula::Atom(a) => self
                .model
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
            Formula::ExistsPath(psi) => self.forced(&Coalition::empty(), psi)?,
            Formula::ForAllPath(psi) => self.fo_exists(&Coalition::empty(), psi)?,
            Formula::Know(agent, f) => {
                let coalition = self.model.coalition(std::slice::from_ref(agent))?;
                let phi = self.eval(f)?;
                self.everyone_knows(&coalition, &phi)
            }
            Formula::EveryoneKnows(names, f) => {
                let coalition = self.nonempty(names)?;
                let phi = self.eval(f)?;
                self.everyone_knows(&coalition, &phi)
            }
            Formula::DistKnows(names, f) => {
                let coalition = self.nonempty(names)?;
                let phi = self.eval(f)?;
                self.distributed_knows(&coalition, &phi)
            }
            Formula::CommonKnows(names, f) => {
                let coalition = self.nonempty(names)?;
                let phi = self.eval(f)?;
                let mut z = StateSet::full(n);
                loop {
                    let next = self.everyone_knows(&coalition, &phi.intersection(&z));
                    if next == z {
                        break z;
                    }
                    z = next;
                }
            }
            Formula::Exists(names, psi) => {
                let coalition = self.model.coalition(names)?;
                match self.semantics {
                    Semantics::Fo => self.fo_exists(&coalition, psi)?,
                    Semantics::Po => self.po_exists(&coalition, psi)?,
                }
            }
            Formula::Forced(names, psi) => {
                let coalition = self.model.coalition(names)?;
                match self.semantics {
                    Semantics::Fo => self.forced(&coalition, psi)?,
                    Semantics::Po => self.po_exists(&coalition, &negate_path(psi))?.complement(),
                }
            }
        };
        self.cache.insert(formula.clone(), result.clone());
        Ok(result)
    }

    fn nonempty(&self, names: &[String]) -> Result<Coalition, EvalError> {
        let coalition = self.model.coalition(names)?;
        if coalition.is_empty() {
            return Err(ModelError::EmptyCoalition.into());
        }
        Ok(coalition)
    }

    fn operands(&mut self, psi: &PathFormula) -> Result<Vec<StateSet>, EvalError> {
        psi.operands().into_iter().map(|f| self.eval(f)).collect()
    }

    fn view(&mut self, coalition: &Coalition) -> &CoalitionView {
        let model = self.model;
        self.views
            .entry(coalition.clone())
            .or_insert_with(|| model.coalition_view(coalition))
    }

    /// `[Γ]ψ` over global strategies; with Γ = ∅ this is `E ψ`.
    fn forced(&mut self, coalition: &Coalition, psi: &PathFormula) -> Result<StateSet, EvalError> {
        let ops = self.operands(psi)?;
        let model = self.model;
        let game = Game::new(model, self.view(coalition));
        let out = game.forced(psi.kind(), &ops);
        self.diagnostics.fixpoint_iterations += game.iterations();
        Ok(out)
    }

    /// `⟨Γ⟩ψ` over global strategies; with Γ = ∅ this is `A ψ`.
    fn fo_exists(&mut self, coalition: &Coalition, psi: &PathFormula) -> Result<StateSet, EvalError> {
        use crate::formula::PathKind;
        let ops = self.operands(psi)?;
        let model = self.model;
        let game = Game::new(model, self.view(coalition));
        let out = match psi.kind() {
            PathKind::Next | PathKind::Globally => game.exists(psi.kind(), &ops),
            PathKind::Until | PathKind::WeakUntil => game.exists_by_complement(psi.kind(), &ops),
        };
        self.diagnostics.fixpoint_iterations += game.iterations();
        Ok(out)
    }

    /// `⟨Γ⟩ψ` over uniform strategies.
    fn po_exists(&mut self, coalition: &Coalition, psi: &PathFormula) -> Result<StateSet, EvalError> {
        if coalition.is_empty() {
            // The empty coalition has a single strategy and sees everything.
            self.diagnostics.strategies_enumerated += 1;
            let ops = self.operands(psi)?;
            let model = self.model;
            let game = Game::new(model, self.view(coalition));
            let out = game.exists(psi.kind(), &ops);
            self.diagnostics.fixpoint_iterations += game.iterations();
            return Ok(out);
        }
        let ops = self.operands(psi)?;
        let model = self.model;
        let engine = self
            .engines
            .entry(coalition.clone())
            .or_insert_with(|| PoEngine::new(model, coalition));
        let (sat, diag) = match self.options.algorithm.resolve() {
            PoAlgorithm::Basic => engine.basic(psi.kind(), &ops, self.options.parallel),
            _ => engine.improved(psi.kind(), &ops),
        };
        self.diagnostics.add(&diag);
        Ok(sat)
    }

    /// Reachable states from which some fair path starts.
    pub fn domain(&mut self) -> StateSet {
        if let Some(d) = &self.domain {
            return d.clone();
        }
        let model = self.model;
        let fair = Game::new(model, self.view(&Coalition::empty())).fair().clone();
        let d = model.reachable().intersection(&fair);
        self.domain = Some(d.clone());
        d
    }

    /// `E_Γ φ`: for each member, every domain state it considers possible
    /// satisfies `φ`. For a single agent this is `K_i φ`.
    fn everyone_knows(&mut self, coalition: &Coalition, phi: &StateSet) -> StateSet {
        let dom = self.domain();
        let model = self.model;
        let mut out = StateSet::full(model.n_states());
        for &i in coalition.members() {
            let mut bad = vec![false; model.agents()[i].local_states.len()];
            for s in dom.iter() {
                if !phi.contains(s) {
                    bad[model.local(s, i)] = true;
                }
            }
            for s in 0..model.n_states() {
                if bad[model.local(s, i)] {
                    out.remove(s);
                }
            }
        }
        out
    }

    /// `D_Γ φ` over the intersection of the members' relations.
    fn distributed_knows(&mut self, coalition: &Coalition, phi: &StateSet) -> StateSet {
        let dom = self.domain();
        let model = self.model;
        let key = |s: usize| -> Vec<usize> { coalition.members().iter().map(|&i| model.local(s, i)).collect() };
        let mut bad: HashMap<Vec<usize>, ()> = HashMap::new();
        for s in dom.iter() {
            if !phi.contains(s) {
                bad.insert(key(s), ());
            }
        }
        StateSet::from_indices(
            model.n_states(),
            (0..model.n_states()).filter(|&s| !bad.contains_key(&key(s))),
        )
    }
}

/// Evaluates `formula` under fo semantics.
pub fn eval_fo(model: &Model, formula: &Formula) -> Result<StateSet, EvalError> {
    Checker::fo(model).eval(formula)
}

/// Evaluates `formula` under po semantics.
pub fn eval_po(model: &Model, formula: &Formula, options: PoOptions) -> Result<StateSet, EvalError> {
    Checker::po(model, options).eval(formula)
}
