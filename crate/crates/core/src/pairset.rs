//! Sets of (state, coalition action) pairs.

use std::fmt;

use crate::bitset::{BitSet, StateSet};
use crate::model::{Coalition, CoalitionView};

/// A relation `⊆ S × Act_Γ`, stored as a bit vector indexed by
/// `state * |Act_Γ| + action`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PairSet {
    coalition: Coalition,
    n_actions: usize,
    bits: BitSet,
}

impl PairSet {
    pub fn empty(coalition: Coalition, n_states: usize, n_actions: usize) -> Self {
        PairSet {
            coalition,
            n_actions,
            bits: BitSet::empty(n_states * n_actions),
        }
    }

    /// Every enabled pair of the view.
    pub fn all_enabled(view: &CoalitionView) -> Self {
        let mut out = PairSet::empty(view.coalition().clone(), view.n_states(), view.n_actions());
        for s in 0..view.n_states() {
            for m in view.moves(s) {
                out.insert(s, m.action as usize);
            }
        }
        out
    }

    pub fn coalition(&self) -> &Coalition {
        &self.coalition
    }

    pub fn n_actions(&self) -> usize {
        self.n_actions
    }

    pub fn n_states(&self) -> usize {
        self.bits.capacity().checked_div(self.n_actions).unwrap_or(0)
    }

    #[inline]
    pub fn contains(&self, state: usize, action: usize) -> bool {
        self.bits.contains(state * self.n_actions + action)
    }

    pub fn insert(&mut self, state: usize, action: usize) -> bool {
        self.bits.insert(state * self.n_actions + action)
    }

    pub fn remove(&mut self, state: usize, action: usize) -> bool {
        self.bits.remove(state * self.n_actions + action)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn len(&self) -> usize {
        self.bits.count()
    }

    /// Pairs in ascending (state, action) order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n_actions;
        self.bits.iter().map(move |i| (i / n, i % n))
    }

    /// Actions paired with `state`, ascending.
    pub fn actions_at(&self, state: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n_actions).filter(move |&a| self.contains(state, a))
    }

    /// States occurring in some pair.
    pub fn states(&self) -> StateSet {
        let n_states = self.n_states();
        StateSet::from_indices(n_states, self.iter().map(|(s, _)| s))
    }

    pub fn union(&self, other: &PairSet) -> PairSet {
        PairSet {
            bits: self.bits.union(&other.bits),
            ..self.clone()
        }
    }

    pub fn intersection(&self, other: &PairSet) -> PairSet {
        PairSet {
            bits: self.bits.intersection(&other.bits),
            ..self.clone()
        }
    }

    pub fn difference(&self, other: &PairSet) -> PairSet {
        PairSet {
            bits: self.bits.difference(&other.bits),
            ..self.clone()
        }
    }

    pub fn union_with(&mut self, other: &PairSet) {
        self.bits.union_with(&other.bits);
    }

    pub fn is_subset(&self, other: &PairSet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    /// Keeps only the pairs whose state is in `states`.
    pub fn restrict_to(&self, states: &StateSet) -> PairSet {
        let mut out = PairSet::empty(self.coalition.clone(), self.n_states(), self.n_actions);
        for (s, a) in self.iter() {
            if states.contains(s) {
                out.insert(s, a);
            }
        }
        out
    }
}

impl fmt::Debug for PairSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
