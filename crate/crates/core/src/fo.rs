//! Fixpoint engine for coalition games with state fairness.
//!
//! A [`Game`] fixes a coalition view of the model and, optionally, a relation
//! `strat ⊆ S × Act_Γ` restricting the moves the coalition may use. All
//! operators work on dense [`StateSet`]s.
//!
//! `forced_*` compute the `[Γ]` forms ("Γ cannot avoid a fair path
//! satisfying ψ"); `exists_*` compute the `⟨Γ⟩` forms ("Γ can make every fair
//! path satisfy ψ"). An empty fairness list is treated as the single
//! constraint `S`.

use std::cell::{Cell, OnceCell};

use crate::bitset::StateSet;
use crate::formula::PathKind;
use crate::model::{CoalitionView, Model, Move};
use crate::pairset::PairSet;

pub struct Game<'a> {
    view: &'a CoalitionView,
    allowed: Option<&'a PairSet>,
    fairness: Vec<StateSet>,
    n: usize,
    iterations: Cell<u64>,
    fair: OnceCell<StateSet>,
}

impl<'a> Game<'a> {
    pub fn new(model: &Model, view: &'a CoalitionView) -> Self {
        let n = model.n_states();
        let fairness = if model.fairness().is_empty() {
            vec![StateSet::full(n)]
        } else {
            model.fairness().to_vec()
        };
        Game {
            view,
            allowed: None,
            fairness,
            n,
            iterations: Cell::new(0),
            fair: OnceCell::new(),
        }
    }

    /// The same game with the coalition limited to the moves in `strat`.
    pub fn restricted(model: &Model, view: &'a CoalitionView, strat: &'a PairSet) -> Self {
        debug_assert_eq!(strat.coalition(), view.coalition());
        Game {
            allowed: Some(strat),
            ..Game::new(model, view)
        }
    }

    pub fn view(&self) -> &CoalitionView {
        self.view
    }

    pub fn n_states(&self) -> usize {
        self.n
    }

    /// Fixpoint loop iterations performed so far.
    pub fn iterations(&self) -> u64 {
        self.iterations.get()
    }

    fn moves(&self, s: usize) -> impl Iterator<Item = &Move> + '_ {
        let allowed = self.allowed;
        self.view
            .moves(s)
            .iter()
            .filter(move |m| allowed.is_none_or(|p| p.contains(s, m.action as usize)))
    }

    /// `Pre_[Γ]`: every allowed move may lead into `z`. States without an
    /// allowed move are excluded.
    pub fn pre_forced(&self, z: &StateSet) -> StateSet {
        let mut out = StateSet::empty(self.n);
        for s in 0..self.n {
            let mut any = false;
            let mut all = true;
            for m in self.moves(s) {
                any = true;
                if !z.contains_any(&m.successors) {
                    all = false;
                    break;
                }
            }
            if any && all {
                out.insert(s);
            }
        }
        out
    }

    /// `Pre_⟨Γ⟩`: some allowed move leads only into `z`.
    pub fn pre_exists(&self, z: &StateSet) -> StateSet {
        let mut out = StateSet::empty(self.n);
        for s in 0..self.n {
            if self.moves(s).any(|m| z.contains_all(&m.successors)) {
                out.insert(s);
            }
        }
        out
    }

    fn lfp(&self, mut f: impl FnMut(&StateSet) -> StateSet) -> StateSet {
        let mut z = StateSet::empty(self.n);
        loop {
            self.iterations.set(self.iterations.get() + 1);
            let next = f(&z);
            if next == z {
                return z;
            }
            z = next;
        }
    }

    fn gfp(&self, mut f: impl FnMut(&StateSet) -> StateSet) -> StateSet {
        let mut z = StateSet::full(self.n);
        loop {
            self.iterations.set(self.iterations.get() + 1);
            let next = f(&z);
            if next == z {
                return z;
            }
            z = next;
        }
    }

    /// `μY. target ∪ (through ∩ Pre_[Γ](Y))`
    fn reach_forced(&self, through: &StateSet, target: &StateSet) -> StateSet {
        self.lfp(|y| target.union(&through.intersection(&self.pre_forced(y))))
    }

    /// `Fair_[Γ]`: states from which Γ cannot avoid a fair path.
    pub fn fair(&self) -> &StateSet {
        self.fair.get_or_init(|| self.forced_globally(&StateSet::full(self.n)))
    }

    /// Complement of [`Game::fair`]: states where Γ can avoid every fair path.
    pub fn not_fair(&self) -> StateSet {
        self.fair().complement()
    }

    pub fn forced_next(&self, phi: &StateSet) -> StateSet {
        self.pre_forced(&phi.intersection(self.fair()))
    }

    pub fn forced_until(&self, phi1: &StateSet, phi2: &StateSet) -> StateSet {
        let goal = phi2.intersection(self.fair());
        self.reach_forced(phi1, &goal)
    }

    pub fn forced_globally(&self, phi: &StateSet) -> StateSet {
        self.gfp(|z| {
            let mut next = phi.clone();
            for f in &self.fairness {
                let inner = self.reach_forced(phi, &z.intersection(f));
                next.intersect_with(&self.pre_forced(&inner));
            }
            next
        })
    }

    pub fn forced_weak_until(&self, phi1: &StateSet, phi2: &StateSet) -> StateSet {
        let goal = phi2.intersection(self.fair());
        self.gfp(|z| {
            let mut body = phi1.clone();
            for f in &self.fairness {
                let inner = self.reach_forced(phi1, &goal.union(&z.intersection(f)));
                body.intersect_with(&self.pre_forced(&inner));
            }
            goal.union(&body)
        })
    }

    pub fn exists_next(&self, phi: &StateSet) -> StateSet {
        self.pre_exists(&phi.union(&self.not_fair()))
    }

    pub fn exists_globally(&self, phi: &StateSet) -> StateSet {
        let safe = phi.union(&self.not_fair());
        self.gfp(|z| safe.intersection(&self.pre_exists(z)))
    }

    pub fn exists_weak_until(&self, phi1: &StateSet, phi2: &StateSet) -> StateSet {
        let safe = phi1.union(phi2).union(&self.not_fair());
        self.gfp(|z| safe.intersection(&phi2.union(&self.pre_exists(z))))
    }

    /// `νY. safe ∩ (z ∪ ¬f) ∩ (φ2 ∪ Pre_⟨Γ⟩(Y))`: Γ can stay in `safe`
    /// until φ2, visiting `f` only at states of `z`.
    fn exists_until_inner(&self, safe: &StateSet, phi2: &StateSet, z: &StateSet, f: &StateSet) -> StateSet {
        let stay = safe.intersection(&z.union(&f.complement()));
        self.gfp(|y| stay.intersection(&phi2.union(&self.pre_exists(y))))
    }

    pub fn exists_until(&self, phi1: &StateSet, phi2: &StateSet) -> StateSet {
        let safe = phi1.union(phi2).union(&self.not_fair());
        self.lfp(|z| {
            let mut escape = StateSet::empty(self.n);
            for f in &self.fairness {
                escape.union_with(&self.pre_exists(&self.exists_until_inner(&safe, phi2, z, f)));
            }
            safe.intersection(&phi2.union(&escape))
        })
    }

    /// `[Γ]ψ` for a path operator with operand sets `ops` (one for X/G,
    /// two for U/W).
    pub fn forced(&self, kind: PathKind, ops: &[StateSet]) -> StateSet {
        match kind {
            PathKind::Next => self.forced_next(&ops[0]),
            PathKind::Globally => self.forced_globally(&ops[0]),
            PathKind::Until => self.forced_until(&ops[0], &ops[1]),
            PathKind::WeakUntil => self.forced_weak_until(&ops[0], &ops[1]),
        }
    }

    /// `⟨Γ⟩ψ` through the direct fixpoints.
    pub fn exists(&self, kind: PathKind, ops: &[StateSet]) -> StateSet {
        match kind {
            PathKind::Next => self.exists_next(&ops[0]),
            PathKind::Globally => self.exists_globally(&ops[0]),
            PathKind::Until => self.exists_until(&ops[0], &ops[1]),
            PathKind::WeakUntil => self.exists_weak_until(&ops[0], &ops[1]),
        }
    }

    /// `⟨Γ⟩ψ` as the complement of `[Γ]` on the negated path formula.
    pub fn exists_by_complement(&self, kind: PathKind, ops: &[StateSet]) -> StateSet {
        match kind {
            PathKind::Next => self.forced_next(&ops[0].complement()).complement(),
            PathKind::Globally => self
                .forced_until(&StateSet::full(self.n), &ops[0].complement())
                .complement(),
            PathKind::Until | PathKind::WeakUntil => {
                let not1 = ops[0].complement();
                let not2 = ops[1].complement();
                let both = not1.intersection(&not2);
                let negated = if kind == PathKind::Until {
                    self.forced_weak_until(&not2, &both)
                } else {
                    self.forced_until(&not2, &both)
                };
                negated.complement()
            }
        }
    }

    /// The moves the coalition may use, as a pair set.
    pub fn strats(&self) -> PairSet {
        match self.allowed {
            Some(p) => p.clone(),
            None => PairSet::all_enabled(self.view),
        }
    }

    /// `StatesActions_Γ|strats(z)`: allowed pairs whose state is in `z`.
    pub fn states_actions(&self, z: &StateSet) -> PairSet {
        let mut out = PairSet::empty(self.view.coalition().clone(), self.n, self.view.n_actions());
        for s in z {
            for m in self.moves(s) {
                out.insert(s, m.action as usize);
            }
        }
        out
    }

    /// `Pre^ac_⟨Γ⟩|strats(zp)`: allowed pairs all of whose successors lie in
    /// the states of `zp`.
    pub fn pre_exists_ac(&self, zp: &PairSet) -> PairSet {
        self.pairs_into(&zp.states())
    }

    fn pairs_into(&self, z: &StateSet) -> PairSet {
        let mut out = PairSet::empty(self.view.coalition().clone(), self.n, self.view.n_actions());
        for s in 0..self.n {
            for m in self.moves(s) {
                if z.contains_all(&m.successors) {
                    out.insert(s, m.action as usize);
                }
            }
        }
        out
    }

    /// Pairs `⟨s, a_Γ⟩` such that playing `a_Γ` at `s` is a first step of a
    /// winning play for `⟨Γ⟩ψ` within the allowed moves. Its state
    /// projection equals [`Game::exists`].
    pub fn exists_ac(&self, kind: PathKind, ops: &[StateSet]) -> PairSet {
        let nf = self.not_fair();
        let (base, goal, target) = match kind {
            PathKind::Next => (StateSet::full(self.n), StateSet::empty(self.n), ops[0].union(&nf)),
            PathKind::Globally => (ops[0].union(&nf), StateSet::empty(self.n), self.exists_globally(&ops[0])),
            PathKind::WeakUntil => {
                let w = self.exists_weak_until(&ops[0], &ops[1]);
                (ops[0].union(&ops[1]).union(&nf), ops[1].clone(), w)
            }
            // At the fixpoint every inner `νY` equals the result itself, so a
            // pair is winning when it stays inside the result.
            PathKind::Until => {
                let w = self.exists_until(&ops[0], &ops[1]);
                (ops[0].union(&ops[1]).union(&nf), ops[1].clone(), w)
            }
        };
        let mut out = self.states_actions(&goal.intersection(&base));
        out.union_with(&self.pairs_into(&target).restrict_to(&base));
        out
    }
}

/// Convenience wrappers over an unrestricted game.
pub fn pre_forced(model: &Model, view: &CoalitionView, z: &StateSet) -> StateSet {
    Game::new(model, view).pre_forced(z)
}

pub fn pre_exists(model: &Model, view: &CoalitionView, z: &StateSet) -> StateSet {
    Game::new(model, view).pre_exists(z)
}

pub fn fair_forced(model: &Model, view: &CoalitionView) -> StateSet {
    Game::new(model, view).fair().clone()
}
