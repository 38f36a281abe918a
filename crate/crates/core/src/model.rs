//! Core model of vector addition systems with states and two players.
//!
//! A machine has `d` counters and a finite set of control states, each owned
//! by one of two players: *demonic* states resolve nondeterminism towards the
//! worst case (maximizing resource usage), *angelic* states towards the best
//! case. Transitions carry integer update vectors; a run gets stuck as soon
//! as no outgoing transition keeps every counter nonnegative. Purely demonic
//! machines model ordinary nondeterministic programs, mixed machines model
//! games between a scheduler and an adversarial environment.
//!
//! This module defines the machine representation shared by every analysis,
//! plus basic structural operations: validation, the step-counter reduction
//! (termination time as a counter), zeroing of updates on selected counters,
//! normalization of angelic states to zero-update branching, and sealing of
//! states without outgoing transitions.

use num_bigint::{BigInt, BigUint};
use serde::{Deserialize, Serialize};
use std::collections::HashSet;

use crate::growth::GrowthExponent;

/// Owner of a control state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Player {
    /// Nondeterminism resolved towards maximal resource usage.
    Demonic,
    /// Nondeterminism resolved towards minimal resource usage.
    Angelic,
}

/// A named control state with its owning player.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct State {
    pub name: String,
    pub player: Player,
}

/// A transition `src --update--> dst`; `update` has one entry per counter.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Transition {
    pub src: usize,
    pub update: Vec<i64>,
    pub dst: usize,
}

/// A vector addition system with states and player-owned control states.
///
/// Counters and states are referred to by index everywhere; names are kept
/// for parsing, printing and diagnostics. `initial`, when present, lists the
/// states from which analyses start; when absent, every state is a potential
/// start.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounterVass {
    pub counters: Vec<String>,
    pub states: Vec<State>,
    pub transitions: Vec<Transition>,
    pub initial: Option<Vec<usize>>,
}

/// A configuration: a control state together with counter values.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Configuration {
    pub state: usize,
    pub values: Vec<BigUint>,
}

/// Cumulative effect of a transition path on the counters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathEffect(pub Vec<BigInt>);

impl PathEffect {
    /// The neutral effect over `dim` counters.
    pub fn zero(dim: usize) -> Self {
        PathEffect(vec![BigInt::from(0); dim])
    }

    /// Effect of a single transition.
    pub fn of_transition(transition: &Transition) -> Self {
        PathEffect(transition.update.iter().map(|&u| BigInt::from(u)).collect())
    }

    /// Effect of running `self` and then `other` (componentwise sum).
    pub fn compose(&self, other: &PathEffect) -> PathEffect {
        assert_eq!(self.0.len(), other.0.len(), "dimension mismatch");
        PathEffect(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

impl CounterVass {
    /// Number of counters.
    pub fn dim(&self) -> usize {
        self.counters.len()
    }

    /// Number of control states.
    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    /// Index of the state with the given name.
    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s.name == name)
    }

    /// Index of the counter with the given name.
    pub fn counter_index(&self, name: &str) -> Option<usize> {
        self.counters.iter().position(|c| c == name)
    }

    /// Whether the state is demonic.
    pub fn is_demonic(&self, state: usize) -> bool {
        self.states[state].player == Player::Demonic
    }

    /// Indices of transitions leaving `state`, in declaration order.
    pub fn outgoing(&self, state: usize) -> impl Iterator<Item = usize> + '_ {
        self.transitions
            .iter()
            .enumerate()
            .filter(move |(_, t)| t.src == state)
            .map(|(i, _)| i)
    }

    /// Largest absolute counter update over all transitions (0 if none).
    pub fn max_update_magnitude(&self) -> i64 {
        self.transitions
            .iter()
            .flat_map(|t| t.update.iter().map(|u| u.unsigned_abs()))
            .max()
            .map_or(0, |m| i64::try_from(m).expect("update magnitude fits i64"))
    }

    /// States from which analyses start: the declared initial states if any,
    /// otherwise all states.
    pub fn start_states(&self) -> Vec<usize> {
        match &self.initial {
            Some(list) => list.clone(),
            None => (0..self.states.len()).collect(),
        }
    }

    /// Structural diagnostics; an empty result means the machine is well
    /// formed (in particular, every state can always keep moving as long as
    /// counters permit).
    pub fn validate(&self) -> Vec<String> {
        let mut problems = Vec::new();
        if self.counters.is_empty() {
            problems.push("machine has no counters".to_string());
        }
        if self.states.is_empty() {
            problems.push("machine has no states".to_string());
        }
        let mut seen = HashSet::new();
        for counter in &self.counters {
            if !seen.insert(counter.as_str()) {
                problems.push(format!("duplicate counter name `{counter}`"));
            }
        }
        let mut seen = HashSet::new();
        for state in &self.states {
            if !seen.insert(state.name.as_str()) {
                problems.push(format!("duplicate state name `{}`", state.name));
            }
        }
        let mut has_outgoing = vec![false; self.states.len()];
        for (i, t) in self.transitions.iter().enumerate() {
            if t.src >= self.states.len() {
                problems.push(format!("transition {i} has out-of-range source {}", t.src));
            } else {
                has_outgoing[t.src] = true;
            }
            if t.dst >= self.states.len() {
                problems.push(format!("transition {i} has out-of-range target {}", t.dst));
            }
            if t.update.len() != self.counters.len() {
                problems.push(format!(
                    "transition {i} updates {} counters, machine has {}",
                    t.update.len(),
                    self.counters.len()
                ));
            }
        }
        for (s, &ok) in has_outgoing.iter().enumerate() {
            if !ok {
                problems.push(format!(
                    "state `{}` has no outgoing transition",
                    self.states[s].name
                ));
            }
        }
        if let Some(initial) = &self.initial {
            if initial.is_empty() {
                problems.push("initial state list is empty".to_string());
            }
            for &s in initial {
                if s >= self.states.len() {
                    problems.push(format!("initial state index {s} out of range"));
                }
            }
        }
        problems
    }

    /// Adds a step counter: a fresh counter incremented by every transition.
    ///
    /// With the new counter started at `n`, its maximal value over a run from
    /// `p(n,…,n)` is `n` plus the maximal run length, so termination-time
    /// questions reduce to counter questions on the extended machine. Returns
    /// the extended machine and the new counter's index. The counter is named
    /// `sc`, with a numeric suffix appended on a name clash.
    pub fn add_step_counter(&self) -> (CounterVass, usize) {
        let mut extended = self.clone();
        let existing: HashSet<&str> = self.counters.iter().map(|c| c.as_str()).collect();
        let name = fresh_name(&existing, "sc");
        extended.counters.push(name);
        for t in &mut extended.transitions {
            t.update.push(1);
        }
        (extended, self.counters.len())
    }

    /// Zeroes every update on counters marked infinite in `v`.
    ///
    /// A counter that already holds an asymptotically unbounded value cannot
    /// constrain a polynomial-length run, so analyses treat it as absent; the
    /// remaining (finite) counters keep their updates.
    pub fn restrict_to_infinite(&self, v: &[GrowthExponent]) -> CounterVass {
        assert_eq!(v.len(), self.dim(), "growth vector dimension mismatch");
        let mut restricted = self.clone();
        for t in &mut restricted.transitions {
            for (i, entry) in t.update.iter_mut().enumerate() {
                if v[i] == GrowthExponent::Inf {
                    *entry = 0;
                }
            }
        }
        restricted
    }

    /// Splits every nonzero-update transition out of an angelic state into a
    /// zero-update choice followed by the original update from a fresh
    /// demonic state.
    ///
    /// After normalization, angelic states only pick among zero-update
    /// transitions, so an angelic choice never changes counters by itself;
    /// maximal counter values along runs are preserved, and run lengths
    /// change only by the extra intermediate step per split transition.
    pub fn normalize_angelic(&self) -> CounterVass {
        let mut result = CounterVass {
            counters: self.counters.clone(),
            states: self.states.clone(),
            transitions: Vec::with_capacity(self.transitions.len()),
            initial: self.initial.clone(),
        };
        let mut names: HashSet<String> =
            self.states.iter().map(|s| s.name.clone()).collect();
        let mut tail = Vec::new();
        for (i, t) in self.transitions.iter().enumerate() {
            let angelic = self.states[t.src].player == Player::Angelic;
            if angelic && t.update.iter().any(|&u| u != 0) {
                let base = format!("{}_mid{}", self.states[t.src].name, i);
                let name = fresh_name(
                    &names.iter().map(|s| s.as_str()).collect::<HashSet<_>>(),
                    &base,
                );
                names.insert(name.clone());
                let fresh = result.states.len();
                result.states.push(State {
                    name,
                    player: Player::Demonic,
                });
                result.transitions.push(Transition {
                    src: t.src,
                    update: vec![0; self.dim()],
                    dst: fresh,
                });
                tail.push(Transition {
                    src: fresh,
                    update: t.update.clone(),
                    dst: t.dst,
                });
            } else {
                result.transitions.push(t.clone());
            }
        }
        result.transitions.extend(tail);
        result
    }

    /// Gives every state without outgoing transitions a self-loop that drains
    /// a fresh counter.
    ///
    /// The fresh counter (named `halt`, suffixed on clashes) starts at `n`
    /// like every other counter, so a run reaching a sealed state performs at
    /// most `n` further steps; asymptotic classes above linear are unchanged.
    /// Returns the drain counter's index, or `None` when every state already
    /// had an outgoing transition (in which case the machine is untouched).
    pub fn seal_dead_states(&mut self) -> Option<usize> {
        let mut has_outgoing = vec![false; self.states.len()];
        for t in &self.transitions {
            has_outgoing[t.src] = true;
        }
        if has_outgoing.iter().all(|&ok| ok) {
            return None;
        }
        let existing: HashSet<&str> = self.counters.iter().map(|c| c.as_str()).collect();
        let name = fresh_name(&existing, "halt");
        let drain = self.counters.len();
        self.counters.push(name);
        for t in &mut self.transitions {
            t.update.push(0);
        }
        for (s, &ok) in has_outgoing.iter().enumerate() {
            if !ok {
                let mut update = vec![0; self.counters.len()];
                update[drain] = -1;
                self.transitions.push(Transition {
                    src: s,
                    update,
                    dst: s,
                });
            }
        }
        Some(drain)
    }

    /// Effect of a transition-index path, or `None` if some index is out of
    /// range or consecutive transitions do not chain (`dst` then `src`).
    pub fn path_effect(&self, path: &[usize]) -> Option<PathEffect> {
        let mut effect = PathEffect::zero(self.dim());
        let mut at: Option<usize> = None;
        for &i in path {
            let t = self.transitions.get(i)?;
            if let Some(state) = at {
                if state != t.src {
                    return None;
                }
            }
            effect = effect.compose(&PathEffect::of_transition(t));
            at = Some(t.dst);
        }
        Some(effect)
    }
}

/// Returns `base` if unused, otherwise `base_2`, `base_3`, … until fresh.
pub fn fresh_name(existing: &HashSet<&str>, base: &str) -> String {
    if !existing.contains(base) {
        return base.to_string();
    }
    for k in 2.. {
        let candidate = format!("{base}_{k}");
        if !existing.contains(candidate.as_str()) {
            return candidate;
        }
    }
    unreachable!("unbounded suffix search")
}
