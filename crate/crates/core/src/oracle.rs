//! Exact small-`n` exploration oracles for counter machines and games.
//!
//! For concrete (small) initial values these oracles compute ground truth by
//! state-space exploration, providing the reference values against which the
//! asymptotic analyses are cross-checked:
//!
//! * [`explore_demonic_max`] computes, for purely demonic machines, the exact
//!   maximal run length and per-counter maxima over all maximal runs, by
//!   memoized longest-path search over the reachable configuration graph.
//!   Counters that no transition ever decrements cannot gate behavior, so
//!   they are projected out of the memoization key and tracked as maximal
//!   path gains instead — this keeps monotone bookkeeping counters (step
//!   counters in particular) from blowing up the configuration space.
//!   Revisiting a configuration on the search stack means a repeatable cycle,
//!   i.e. an infinite run: length (and projected gains) saturate at the cap.
//! * [`game_values`] solves two-player machines exactly by building the full
//!   configuration graph (no pruning — discarding choices is unsound for the
//!   minimizing player) and running Kleene value iteration on the chosen
//!   measure, extracting positional optimal strategies for both players.
//! * [`fit_exponent`] turns doubling-`n` measurement series into a polynomial
//!   degree estimate with a stability verdict.
//!
//! Counter values are clamped at a configurable cap with a sticky saturation
//! flag: unsaturated and unexhausted results are exact, flagged ones are
//! lower bounds.

use std::collections::{HashMap, HashSet, VecDeque};

use num_bigint::BigUint;

use crate::growth::GrowthExponent;
use crate::model::{CounterVass, Player};

/// Resource limits for exploration.
#[derive(Debug, Clone, Copy)]
pub struct OracleCaps {
    /// Counter values and run lengths clamp here, stickily.
    pub value_cap: u64,
    /// Maximal number of distinct configurations to explore.
    pub visit_budget: usize,
}

impl Default for OracleCaps {
    fn default() -> Self {
        OracleCaps {
            value_cap: 1 << 30,
            visit_budget: 1_000_000,
        }
    }
}

/// Result of a demonic worst-case exploration.
#[derive(Debug, Clone)]
pub struct ExplorationOutcome {
    /// Per-counter maximum over all visited configurations (clamped).
    pub per_counter_max: Vec<u64>,
    /// Maximum number of steps over all runs (clamped).
    pub max_length: u64,
    /// Some value or run length hit the cap (a repeatable cycle was found or
    /// values overflowed); results are lower bounds.
    pub saturated: bool,
    /// The visit budget ran out; results are lower bounds.
    pub budget_exhausted: bool,
    /// Number of distinct configurations expanded.
    pub visited: usize,
}

fn apply_update(values: &[u64], update: &[i64], cap: u64, saturated: &mut bool) -> Option<Vec<u64>> {
    let mut next = Vec::with_capacity(values.len());
    for (&v, &u) in values.iter().zip(update) {
        if u >= 0 {
            let mut w = v.saturating_add(u as u64);
            if w > cap {
                w = cap;
                *saturated = true;
            }
            next.push(w);
        } else {
            let need = u.unsigned_abs();
            if v < need {
                return None;
            }
            next.push(v - need);
        }
    }
    Some(next)
}

/// Worst-case behavior reachable from one configuration: maximal run length,
/// per-gated-counter peaks, and maximal path gain per projected counter.
#[derive(Debug, Clone)]
struct NodeBest {
    len: u64,
    peaks: Vec<u64>,
    gains: Vec<u64>,
}

/// Worst-case exploration of a purely demonic machine from the given start
/// configurations.
///
/// Longest-path dynamic programming over the reachable configuration graph:
/// iterative depth-first search with memoization on (state, gated counter
/// values), where a counter is *gated* if some transition decrements it.
/// Counters that only ever increase cannot disable transitions, so their
/// peaks are recovered as `entry + maximal path gain` without entering the
/// memoization key. A configuration re-encountered on the search stack is a
/// repeatable cycle, i.e. an infinite run: length and projected gains
/// saturate at the cap and the result becomes a lower bound.
///
/// Returns exact maxima when neither the cap nor the budget was hit. Panics
/// if the machine contains angelic states (use [`game_values`] for games).
pub fn explore_demonic_max(
    vass: &CounterVass,
    starts: &[(usize, Vec<u64>)],
    caps: &OracleCaps,
) -> ExplorationOutcome {
    assert!(
        vass.states.iter().all(|s| s.player == Player::Demonic),
        "exploration oracle requires a purely demonic machine"
    );
    let d = vass.dim();
    let mut outcome = ExplorationOutcome {
        per_counter_max: vec![0; d],
        max_length: 0,
        saturated: false,
        budget_exhausted: false,
        visited: 0,
    };
    // Counters some transition decrements take part in the configuration;
    // the rest are projected out and tracked as path gains.
    let gated: Vec<usize> = (0..d)
        .filter(|&i| vass.transitions.iter().any(|t| t.update[i] < 0))
        .collect();
    let dropped: Vec<usize> = (0..d).filter(|i| !gated.contains(i)).collect();
    // Per-transition updates split along the same partition.
    let gated_updates: Vec<Vec<i64>> = vass
        .transitions
        .iter()
        .map(|t| gated.iter().map(|&i| t.update[i]).collect())
        .collect();
    let dropped_gains: Vec<Vec<u64>> = vass
        .transitions
        .iter()
        .map(|t| dropped.iter().map(|&i| t.update[i] as u64).collect())
        .collect();
    // Outgoing transition indices per state, precomputed.
    let mut outgoing: Vec<Vec<usize>> = vec![Vec::new(); vass.num_states()];
    for (i, t) in vass.transitions.iter().enumerate() {
        outgoing[t.src].push(i);
    }

    struct Frame {
        key: (usize, Vec<u64>),
        /// Successor configurations (enabled transitions, declaration order).
        children: Vec<(usize, (usize, Vec<u64>))>,
        next: usize,
        best: NodeBest,
    }

    let mut memo: HashMap<(usize, Vec<u64>), NodeBest> = HashMap::new();
    let mut on_stack: HashSet<(usize, Vec<u64>)> = HashSet::new();
    let mut stack: Vec<Frame> = Vec::new();

    let open_frame = |key: (usize, Vec<u64>),
                      outcome: &mut ExplorationOutcome,
                      on_stack: &mut HashSet<(usize, Vec<u64>)>|
     -> Frame {
        outcome.visited += 1;
        let children = outgoing[key.0]
            .iter()
            .filter_map(|&ti| {
                apply_update(
                    &key.1,
                    &gated_updates[ti],
                    caps.value_cap,
                    &mut outcome.saturated,
                )
                .map(|next| (ti, (vass.transitions[ti].dst, next)))
            })
            .collect();
        on_stack.insert(key.clone());
        Frame {
            best: NodeBest {
                len: 0,
                peaks: key.1.clone(),
                gains: vec![0; dropped.len()],
            },
            key,
            children,
            next: 0,
        }
    };
    // Folds one resolved child (reached via transition `ti`) into a frame.
    let absorb = |best: &mut NodeBest, ti: usize, child: &NodeBest| {
        best.len = best.len.max(child.len.saturating_add(1));
        for (p, &cp) in best.peaks.iter_mut().zip(&child.peaks) {
            *p = (*p).max(cp);
        }
        for ((g, &cg), &step) in best.gains.iter_mut().zip(&child.gains).zip(&dropped_gains[ti]) {
            *g = (*g).max(step.saturating_add(cg));
        }
    };

    for (state, values) in starts {
        assert_eq!(values.len(), d, "start configuration dimension mismatch");
        let mut entry: Vec<u64> = gated.iter().map(|&i| values[i]).collect();
        for value in &mut entry {
            if *value > caps.value_cap {
                *value = caps.value_cap;
                outcome.saturated = true;
            }
        }
        let root = (*state, entry);
        if !memo.contains_key(&root) {
            stack.push(open_frame(root.clone(), &mut outcome, &mut on_stack));
            while !stack.is_empty() {
                let top = stack.len() - 1;
                if stack[top].next < stack[top].children.len() {
                    let (ti, child) = stack[top].children[stack[top].next].clone();
                    stack[top].next += 1;
                    if let Some(known) = memo.get(&child) {
                        let known = known.clone();
                        absorb(&mut stack[top].best, ti, &known);
                    } else if on_stack.contains(&child) {
                        // Exact repetition of a configuration: a pumpable,
                        // effect-free cycle, hence an infinite run.
                        outcome.saturated = true;
                        let cycle = NodeBest {
                            len: caps.value_cap,
                            peaks: child.1.clone(),
                            gains: vec![caps.value_cap; dropped.len()],
                        };
                        absorb(&mut stack[top].best, ti, &cycle);
                    } else if outcome.visited >= caps.visit_budget {
                        // Out of budget: count the unexplored child as a leaf.
                        outcome.budget_exhausted = true;
                        let leaf = NodeBest {
                            len: 0,
                            peaks: child.1.clone(),
                            gains: vec![0; dropped.len()],
                        };
                        absorb(&mut stack[top].best, ti, &leaf);
                    } else {
                        stack.push(open_frame(child, &mut outcome, &mut on_stack));
                    }
                } else {
                    let done = stack.pop().expect("nonempty stack");
                    on_stack.remove(&done.key);
                    if let Some(parent) = stack.last_mut() {
                        let ti = parent.children[parent.next - 1].0;
                        absorb(&mut parent.best, ti, &done.best);
                    }
                    memo.insert(done.key, done.best);
                }
            }
        }
        // Fold the root result into the global outcome.
        let best = memo.get(&root).expect("root was just resolved");
        let len = best.len.min(caps.value_cap);
        outcome.max_length = outcome.max_length.max(len);
        for (&i, &peak) in gated.iter().zip(&best.peaks) {
            outcome.per_counter_max[i] = outcome.per_counter_max[i].max(peak);
        }
        for (&i, &gain) in dropped.iter().zip(&best.gains) {
            let mut peak = values[i].saturating_add(gain);
            if peak > caps.value_cap {
                peak = caps.value_cap;
                outcome.saturated = true;
            }
            outcome.per_counter_max[i] = outcome.per_counter_max[i].max(peak);
        }
    }
    outcome
}

/// One measured point of a complexity curve.
#[derive(Debug, Clone)]
pub struct SamplePoint {
    pub n: u64,
    pub max_length: u64,
    pub per_counter_max: Vec<u64>,
    pub saturated: bool,
    pub budget_exhausted: bool,
}

/// Measures worst-case length and counter maxima from all start states with
/// every counter initialized to `n`, for each requested `n`.
pub fn complexity_samples(vass: &CounterVass, ns: &[u64], caps: &OracleCaps) -> Vec<SamplePoint> {
    ns.iter()
        .map(|&n| {
            let starts: Vec<(usize, Vec<u64>)> = vass
                .start_states()
                .into_iter()
                .map(|s| (s, vec![n; vass.dim()]))
                .collect();
            let outcome = explore_demonic_max(vass, &starts, caps);
            SamplePoint {
                n,
                max_length: outcome.max_length,
                per_counter_max: outcome.per_counter_max,
                saturated: outcome.saturated,
                budget_exhausted: outcome.budget_exhausted,
            }
        })
        .collect()
}

/// Objective of a game analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Measure {
    /// Number of steps of the play.
    Length,
    /// Peak value of the given counter along the play.
    Counter(usize),
}

/// Exact game values and positional optimal strategies on the configuration
/// graph.
#[derive(Debug, Clone)]
pub struct GameTable {
    /// Optimal value per configuration; `None` means unbounded (the
    /// maximizing player forces an infinite play with unbounded measure).
    pub values: HashMap<(usize, Vec<u64>), Option<u64>>,
    /// Optimal transition choice at angelic-state configurations.
    pub angel_choice: HashMap<(usize, Vec<u64>), usize>,
    /// Optimal transition choice at demonic-state configurations.
    pub demon_choice: HashMap<(usize, Vec<u64>), usize>,
    pub saturated: bool,
    pub budget_exhausted: bool,
}

/// Solves the game exactly from the given start configurations.
///
/// Builds the reachable configuration graph without pruning and runs Kleene
/// iteration from below: demonic states maximize, angelic states minimize.
/// For [`Measure::Length`], values not stabilized after `|V| + 2` sweeps are
/// unbounded (`None`); peak-counter values always stabilize because they
/// range over the finite set of clamped counter values.
pub fn game_values(
    vass: &CounterVass,
    starts: &[(usize, Vec<u64>)],
    measure: Measure,
    caps: &OracleCaps,
) -> GameTable {
    let d = vass.dim();
    let mut outgoing: Vec<Vec<usize>> = vec![Vec::new(); vass.num_states()];
    for (i, t) in vass.transitions.iter().enumerate() {
        outgoing[t.src].push(i);
    }

    let mut table = GameTable {
        values: HashMap::new(),
        angel_choice: HashMap::new(),
        demon_choice: HashMap::new(),
        saturated: false,
        budget_exhausted: false,
    };

    // Reachable configuration graph: nodes plus, per node, the enabled
    // transitions with their successor node.
    let mut index: HashMap<(usize, Vec<u64>), usize> = HashMap::new();
    let mut nodes: Vec<(usize, Vec<u64>)> = Vec::new();
    let mut queue: VecDeque<usize> = VecDeque::new();
    for (state, values) in starts {
        assert_eq!(values.len(), d, "start configuration dimension mismatch");
        let mut clamped = values.clone();
        for v in &mut clamped {
            if *v > caps.value_cap {
                *v = caps.value_cap;
                table.saturated = true;
            }
        }
        let key = (*state, clamped);
        if !index.contains_key(&key) {
            index.insert(key.clone(), nodes.len());
            queue.push_back(nodes.len());
            nodes.push(key);
        }
    }
    let mut succs: Vec<Vec<(usize, usize)>> = Vec::new();
    while let Some(id) = queue.pop_front() {
        let (state, values) = nodes[id].clone();
        let mut here = Vec::new();
        for &ti in &outgoing[state] {
            let t = &vass.transitions[ti];
            let Some(next) = apply_update(&values, &t.update, caps.value_cap, &mut table.saturated)
            else {
                continue;
            };
            let key = (t.dst, next);
            let succ = match index.get(&key) {
                Some(&s) => s,
                None => {
                    let s = nodes.len();
                    index.insert(key.clone(), s);
                    nodes.push(key);
                    queue.push_back(s);
                    s
                }
            };
            here.push((ti, succ));
        }
        succs.push(here);
        if nodes.len() >= caps.visit_budget {
            table.budget_exhausted = true;
            break;
        }
    }
    // Nodes discovered but not expanded (budget) get no successors; they are
    // treated as dead ends, which is only reported, not exact.
    succs.resize(nodes.len(), Vec::new());

    // Kleene iteration from below on a finite lattice. Finite length values
    // never exceed |V| (the value strictly decreases along optimal play, so
    // optimal finite plays are acyclic); capping at |V| + 1 therefore keeps
    // the iteration finite and marks exactly the unbounded nodes. Peak values
    // already live in the finite set of clamped counter values.
    let length_top = nodes.len() as u64 + 1;
    let step_value = |succ_value: u64| match measure {
        Measure::Length => succ_value.saturating_add(1).min(length_top),
        Measure::Counter(_) => succ_value,
    };
    let mut current: Vec<u64> = nodes
        .iter()
        .map(|(_, values)| match measure {
            Measure::Length => 0,
            Measure::Counter(c) => values[c],
        })
        .collect();
    let safety = nodes.len().saturating_mul(nodes.len()) + 4;
    let mut sweeps = 0;
    loop {
        let mut changed = false;
        for id in (0..nodes.len()).rev() {
            let (state, values) = &nodes[id];
            let demonic = vass.is_demonic(*state);
            let over = succs[id].iter().map(|&(_, s)| step_value(current[s]));
            let opt = if demonic { over.max() } else { over.min() };
            let base = match measure {
                Measure::Length => 0,
                Measure::Counter(c) => values[c],
            };
            let new = match opt {
                None => base, // dead end
                Some(o) => match measure {
                    Measure::Length => o,
                    Measure::Counter(_) => o.max(base),
                },
            };
            if new != current[id] {
                current[id] = new;
                changed = true;
            }
        }
        if !changed {
            break;
        }
        sweeps += 1;
        assert!(sweeps <= safety, "value iteration failed to stabilize");
    }

    for (id, node) in nodes.iter().enumerate() {
        let value = match measure {
            Measure::Length if current[id] >= length_top => None,
            _ => Some(current[id]),
        };
        table.values.insert(node.clone(), value);
        // Positional optimal choices, declaration-order tie-break.
        if !succs[id].is_empty() {
            let demonic = vass.is_demonic(node.0);
            let mut best: Option<(u64, usize)> = None;
            for &(ti, s) in &succs[id] {
                let v = step_value(current[s]);
                let better = match best {
                    None => true,
                    Some((bv, _)) => {
                        if demonic {
                            v > bv
                        } else {
                            v < bv
                        }
                    }
                };
                if better {
                    best = Some((v, ti));
                }
            }
            let (_, ti) = best.expect("nonempty successor list");
            if demonic {
                table.demon_choice.insert(node.clone(), ti);
            } else {
                table.angel_choice.insert(node.clone(), ti);
            }
        }
    }
    table
}

/// Replays the positional strategies of `table` from `start`, returning the
/// achieved measure value, or `None` if the play cycles (infinite play).
pub fn replay(
    vass: &CounterVass,
    table: &GameTable,
    start: &(usize, Vec<u64>),
    measure: Measure,
    caps: &OracleCaps,
) -> Option<u64> {
    let mut seen = std::collections::HashSet::new();
    let mut config = start.clone();
    let mut steps: u64 = 0;
    let mut peak = match measure {
        Measure::Length => 0,
        Measure::Counter(c) => config.1[c],
    };
    loop {
        if !seen.insert(config.clone()) {
            return None;
        }
        let choice = if vass.is_demonic(config.0) {
            table.demon_choice.get(&config)
        } else {
            table.angel_choice.get(&config)
        };
        let Some(&ti) = choice else {
            return Some(match measure {
                Measure::Length => steps,
                Measure::Counter(_) => peak,
            });
        };
        let t = &vass.transitions[ti];
        let mut saturated = false;
        let next = apply_update(&config.1, &t.update, caps.value_cap, &mut saturated)
            .expect("strategy chose a disabled transition");
        config = (t.dst, next);
        steps += 1;
        if let Measure::Counter(c) = measure {
            peak = peak.max(config.1[c]);
        }
    }
}

/// Initial counter values `n^{v(i)}` for finite components and `min(2^n, cap)`
/// for infinite ones, with a flag reporting whether any value was clamped.
pub fn initial_schedule(v: &[GrowthExponent], n: u64, caps: &OracleCaps) -> (Vec<u64>, bool) {
    let mut clamped = false;
    let values = v
        .iter()
        .map(|&g| match g {
            GrowthExponent::Poly(k) => {
                let mut value: u64 = 1;
                for _ in 0..k {
                    value = value.saturating_mul(n);
                    if value > caps.value_cap {
                        clamped = true;
                        return caps.value_cap;
                    }
                }
                value
            }
            GrowthExponent::Inf => {
                let huge = if n >= 63 { u64::MAX } else { 1u64 << n };
                if huge > caps.value_cap {
                    clamped = true;
                    caps.value_cap
                } else {
                    huge
                }
            }
        })
        .collect();
    (values, clamped)
}

/// Converts a clamped `u64` oracle value to an exact arbitrary-precision
/// value when unsaturated.
pub fn exact_value(value: u64, saturated: bool) -> Option<BigUint> {
    if saturated {
        None
    } else {
        Some(BigUint::from(value))
    }
}

/// Fits a polynomial degree to a doubling-`n` measurement series.
///
/// For consecutive samples `(n, v)`, `(2n, v')` the observed local degree is
/// `log2(v'/v)`. The estimate is the rounded median of the last (up to) three
/// local degrees; the fit is *stable* iff all used local degrees round to the
/// same integer and the last one lies within `0.2` of it. The last ratio is
/// the right convergence gauge: positive lower-order terms bias all local
/// degrees downward, with the bias shrinking as `n` grows.
pub fn fit_exponent(samples: &[(u64, u64)]) -> (u32, bool) {
    let mut ratios = Vec::new();
    for pair in samples.windows(2) {
        let (n1, v1) = pair[0];
        let (n2, v2) = pair[1];
        if v1 == 0 || v2 == 0 || n2 <= n1 {
            return (0, false);
        }
        let r = ((v2 as f64) / (v1 as f64)).ln() / ((n2 as f64) / (n1 as f64)).ln();
        ratios.push(r);
    }
    if ratios.is_empty() {
        return (0, false);
    }
    let used = &ratios[ratios.len().saturating_sub(3)..];
    let mut sorted = used.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite ratios"));
    let median = if sorted.len() % 2 == 1 {
        sorted[sorted.len() / 2]
    } else {
        (sorted[sorted.len() / 2 - 1] + sorted[sorted.len() / 2]) / 2.0
    };
    let k = median.round();
    if k < 0.0 {
        return (0, false);
    }
    let rounded: Vec<i64> = used.iter().map(|r| r.round() as i64).collect();
    let last = *used.last().expect("nonempty");
    let stable = rounded.iter().all(|&r| r == k as i64) && (last - k).abs() < 0.2;
    (k as u32, stable)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{State, Transition};

    fn demonic(name: &str) -> State {
        State {
            name: name.into(),
            player: Player::Demonic,
        }
    }

    fn angelic(name: &str) -> State {
        State {
            name: name.into(),
            player: Player::Angelic,
        }
    }

    /// One state, one self-loop transferring x to y with gain 2.
    fn transfer_machine() -> CounterVass {
        CounterVass {
            counters: vec!["x".into(), "y".into()],
            states: vec![demonic("p")],
            transitions: vec![Transition {
                src: 0,
                update: vec![-1, 2],
                dst: 0,
            }],
            initial: None,
        }
    }

    #[test]
    fn exploration_is_exact_on_a_transfer_loop() {
        let m = transfer_machine();
        let caps = OracleCaps::default();
        let outcome = explore_demonic_max(&m, &[(0, vec![5, 5])], &caps);
        assert_eq!(outcome.max_length, 5);
        assert_eq!(outcome.per_counter_max, vec![5, 15]);
        assert!(!outcome.saturated && !outcome.budget_exhausted);
    }

    #[test]
    fn exploration_maximizes_over_wasteful_branches() {
        // Two self-loops: one wastes x, one converts x to y. The maximum of y
        // is found despite the wasteful interleavings sharing configurations.
        let mut m = transfer_machine();
        m.transitions.push(Transition {
            src: 0,
            update: vec![-1, 0],
            dst: 0,
        });
        let caps = OracleCaps::default();
        let outcome = explore_demonic_max(&m, &[(0, vec![4, 0])], &caps);
        assert_eq!(outcome.per_counter_max, vec![4, 8]);
        assert_eq!(outcome.max_length, 4);
    }

    #[test]
    fn infinite_runs_saturate_at_the_cap() {
        let m = CounterVass {
            counters: vec!["x".into()],
            states: vec![demonic("p")],
            transitions: vec![Transition {
                src: 0,
                update: vec![1],
                dst: 0,
            }],
            initial: None,
        };
        let caps = OracleCaps {
            value_cap: 50,
            visit_budget: 10_000,
        };
        let outcome = explore_demonic_max(&m, &[(0, vec![1])], &caps);
        assert!(outcome.saturated);
        assert_eq!(outcome.max_length, 50);
        assert_eq!(outcome.per_counter_max, vec![50]);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let m = transfer_machine();
        let caps = OracleCaps {
            value_cap: 1 << 30,
            visit_budget: 3,
        };
        let outcome = explore_demonic_max(&m, &[(0, vec![100, 0])], &caps);
        assert!(outcome.budget_exhausted);
    }

    #[test]
    fn sample_series_track_n() {
        let m = transfer_machine();
        let caps = OracleCaps::default();
        let samples = complexity_samples(&m, &[2, 4, 8], &caps);
        let lengths: Vec<u64> = samples.iter().map(|s| s.max_length).collect();
        assert_eq!(lengths, vec![2, 4, 8]);
        let ys: Vec<u64> = samples.iter().map(|s| s.per_counter_max[1]).collect();
        assert_eq!(ys, vec![6, 12, 24]);
    }

    /// Angel picks between a cheap and an expensive demonic branch.
    fn choice_game() -> CounterVass {
        CounterVass {
            counters: vec!["x".into(), "z".into()],
            states: vec![
                angelic("a"),
                demonic("cheap"),
                demonic("costly"),
            ],
            transitions: vec![
                Transition { src: 0, update: vec![0, 0], dst: 1 },
                Transition { src: 0, update: vec![0, 0], dst: 2 },
                // cheap: transfer x to z one-for-one
                Transition { src: 1, update: vec![-1, 1], dst: 1 },
                // costly: transfer x to z one-for-three
                Transition { src: 2, update: vec![-1, 3], dst: 2 },
            ],
            initial: Some(vec![0]),
        }
    }

    #[test]
    fn game_solver_minimizes_at_angelic_states() {
        let m = choice_game();
        let caps = OracleCaps::default();
        let start = (0usize, vec![4u64, 0u64]);
        let table = game_values(&m, &[start.clone()], Measure::Counter(1), &caps);
        assert_eq!(table.values[&start], Some(4));
        assert_eq!(table.angel_choice[&start], 0);
        let achieved = replay(&m, &table, &start, Measure::Counter(1), &caps);
        assert_eq!(achieved, Some(4));
    }

    #[test]
    fn game_solver_maximizes_at_demonic_states() {
        let mut m = choice_game();
        m.states[0].player = Player::Demonic;
        let caps = OracleCaps::default();
        let start = (0usize, vec![4u64, 0u64]);
        let table = game_values(&m, &[start.clone()], Measure::Counter(1), &caps);
        assert_eq!(table.values[&start], Some(12));
        assert_eq!(table.demon_choice[&start], 1);
    }

    #[test]
    fn unbounded_length_is_detected() {
        let m = CounterVass {
            counters: vec!["x".into()],
            states: vec![demonic("p")],
            transitions: vec![Transition {
                src: 0,
                update: vec![0],
                dst: 0,
            }],
            initial: None,
        };
        let caps = OracleCaps::default();
        let start = (0usize, vec![1u64]);
        let table = game_values(&m, &[start.clone()], Measure::Length, &caps);
        assert_eq!(table.values[&start], None);
        assert_eq!(replay(&m, &table, &start, Measure::Length, &caps), None);
    }

    #[test]
    fn finite_game_length_matches_exploration() {
        let m = transfer_machine();
        let caps = OracleCaps::default();
        let start = (0usize, vec![6u64, 0u64]);
        let table = game_values(&m, &[start.clone()], Measure::Length, &caps);
        assert_eq!(table.values[&start], Some(6));
    }

    #[test]
    fn schedules_follow_growth_vectors() {
        let caps = OracleCaps::default();
        let v = [
            GrowthExponent::Poly(1),
            GrowthExponent::Poly(2),
            GrowthExponent::Inf,
        ];
        let (values, clamped) = initial_schedule(&v, 4, &caps);
        assert_eq!(values, vec![4, 16, 16]);
        assert!(!clamped);

        let small = OracleCaps {
            value_cap: 10,
            visit_budget: 100,
        };
        let (values, clamped) = initial_schedule(&v, 4, &small);
        assert_eq!(values, vec![4, 10, 10]);
        assert!(clamped);
    }

    #[test]
    fn exponent_fit_accepts_marginally_stable_series() {
        let (k, stable) = fit_exponent(&[(2, 5), (4, 17), (8, 65)]);
        assert_eq!(k, 2);
        assert!(stable);
    }

    #[test]
    fn exponent_fit_rejects_drifting_series() {
        // Local degrees round to 1, 2, 2: not yet stable.
        let (_, stable) = fit_exponent(&[(2, 4), (4, 8), (8, 32), (16, 128)]);
        assert!(!stable);
    }

    #[test]
    fn exponent_fit_handles_exact_cubes() {
        let samples: Vec<(u64, u64)> = [2u64, 4, 8, 16].iter().map(|&n| (n, n * n * n)).collect();
        let (k, stable) = fit_exponent(&samples);
        assert_eq!(k, 3);
        assert!(stable);
    }

    #[test]
    fn exponent_fit_needs_at_least_two_samples() {
        assert_eq!(fit_exponent(&[(4, 16)]), (0, false));
        assert_eq!(fit_exponent(&[]), (0, false));
    }
}
