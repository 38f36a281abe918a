//! Optimal asymptotic play in two-player counter machines.
//!
//! The adversary (demonic states) maximizes a counter's peak or the run
//! length; the controller (angelic states) minimizes it. The analysis walks
//! the acyclic locking unfolding ([`crate::decomp::locking_decomposition`]):
//! along a path, adversarial vertices apply their class's growth update to
//! the current growth vector while controller vertices pass it through, and
//! the game value is the minimax over the unfolding — maximum over successor
//! vertices at adversarial ones, minimum over lock choices at controller
//! ones. Because controller states are singletons whose outgoing transitions
//! carry no counter updates (the machine is normalized first), restricting
//! the controller to *simple locking strategies* — committing to one
//! transition per choice point as a function of the class path — does not
//! change the value.
//!
//! Besides the value, the module synthesizes an optimal simple locking
//! strategy, materializes the purely adversarial machine induced by playing
//! it (for independent re-analysis), and can enumerate the values of all
//! simple locking strategies on small games to confirm optimality.
//!
//! Length is handled by the step-counter reduction before normalization, so
//! a single counter query covers both measures.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::decomp::{locking_decomposition, DecompError, LockVertex, LockingDag};
use crate::growth::{growth_step, unit_vector, GrowthExponent, GrowthVector};
use crate::model::{CounterVass, Player, State, Transition};
use crate::oracle::OracleCaps;
use crate::analysis::AnalysisOptions;

/// What the players fight over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GameTarget {
    /// Maximal run length (adversary maximizes).
    Length,
    /// Peak value of the given counter.
    Counter(usize),
}

/// Result of a game analysis.
#[derive(Debug)]
pub struct GameAnalysis {
    /// The prepared machine: step counter added for length targets, then
    /// controller transitions normalized to be update-free.
    pub machine: CounterVass,
    /// The queried counter in `machine`.
    pub counter: usize,
    /// The locking unfolding of `machine`.
    pub dag: LockingDag,
    /// Roots whose class contains a start state.
    pub start_roots: Vec<usize>,
    /// The game value: the target's asymptotic class under optimal play.
    pub optimal: GrowthExponent,
}

fn prepare(vass: &CounterVass, target: GameTarget) -> (CounterVass, usize) {
    match target {
        GameTarget::Counter(c) => {
            assert!(c < vass.dim(), "counter out of range");
            (vass.normalize_angelic(), c)
        }
        GameTarget::Length => {
            let (with_sc, sc) = vass.add_step_counter();
            (with_sc.normalize_angelic(), sc)
        }
    }
}

/// The transition added when extending a parent lock to a child lock.
fn lock_extension(parent: &LockVertex, child: &LockVertex) -> usize {
    let added: Vec<usize> = child
        .lock
        .iter()
        .copied()
        .filter(|t| !parent.lock.contains(t))
        .collect();
    assert_eq!(added.len(), 1, "controller edges add exactly one lock");
    added[0]
}

/// Shared evaluation state: growth updates memoized per (vertex, entry
/// projected to the vertex's touched counters) and game values per (vertex,
/// entry vector).
struct Evaluator<'a> {
    machine: &'a CounterVass,
    dag: &'a LockingDag,
    counter: usize,
    caps: &'a OracleCaps,
    subs: Vec<Option<CounterVass>>,
    steps: HashMap<(usize, GrowthVector), GrowthVector>,
    values: HashMap<(usize, GrowthVector), GrowthExponent>,
}

impl<'a> Evaluator<'a> {
    fn new(
        machine: &'a CounterVass,
        dag: &'a LockingDag,
        counter: usize,
        caps: &'a OracleCaps,
    ) -> Self {
        Evaluator {
            machine,
            dag,
            counter,
            caps,
            subs: vec![None; dag.vertices.len()],
            steps: HashMap::new(),
            values: HashMap::new(),
        }
    }

    /// The class machine of a vertex: its states (made adversarial — locked
    /// controller states behave adversarially) and the transitions the lock
    /// allows inside the class.
    fn vertex_machine(&mut self, vertex: usize) -> &CounterVass {
        if self.subs[vertex].is_none() {
            let v = &self.dag.vertices[vertex];
            let locked_src: HashMap<usize, usize> = v
                .lock
                .iter()
                .map(|&t| (self.machine.transitions[t].src, t))
                .collect();
            let mut index: HashMap<usize, usize> = HashMap::new();
            for (new, &old) in v.class.iter().enumerate() {
                index.insert(old, new);
            }
            let sub = CounterVass {
                counters: self.machine.counters.clone(),
                states: v
                    .class
                    .iter()
                    .map(|&s| State {
                        name: self.machine.states[s].name.clone(),
                        player: Player::Demonic,
                    })
                    .collect(),
                transitions: self
                    .machine
                    .transitions
                    .iter()
                    .enumerate()
                    .filter(|(i, t)| {
                        index.contains_key(&t.src)
                            && index.contains_key(&t.dst)
                            && locked_src.get(&t.src).map_or(true, |&only| only == *i)
                    })
                    .map(|(_, t)| Transition {
                        src: index[&t.src],
                        update: t.update.clone(),
                        dst: index[&t.dst],
                    })
                    .collect(),
                initial: None,
            };
            self.subs[vertex] = Some(sub);
        }
        self.subs[vertex].as_ref().unwrap()
    }

    fn step(&mut self, vertex: usize, v: &GrowthVector) -> GrowthVector {
        // Memoize on the entry restricted to the counters the vertex machine
        // touches: the step leaves all other counters unchanged and cannot
        // depend on them.
        let caps = self.caps;
        let sub = self.vertex_machine(vertex).clone();
        let support: Vec<usize> = (0..sub.dim())
            .filter(|&i| sub.transitions.iter().any(|t| t.update[i] != 0))
            .collect();
        let key: Vec<GrowthExponent> = support.iter().map(|&i| v[i]).collect();
        let touched = match self.steps.get(&(vertex, key.clone())) {
            Some(hit) => hit.clone(),
            None => {
                let full = growth_step(&sub, v, caps);
                let touched: Vec<GrowthExponent> =
                    support.iter().map(|&i| full[i]).collect();
                self.steps.insert((vertex, key), touched.clone());
                touched
            }
        };
        let mut u = v.clone();
        for (&i, g) in support.iter().zip(touched) {
            u[i] = g;
        }
        u
    }

    /// The game value from a vertex entered with vector `v`: maximum over
    /// successors at adversarial vertices (after applying the growth
    /// update), minimum over lock choices at controller vertices.
    fn value(&mut self, vertex: usize, v: &GrowthVector) -> GrowthExponent {
        if let Some(&val) = self.values.get(&(vertex, v.clone())) {
            return val;
        }
        let successors = self.dag.edges[vertex].clone();
        let val = if self.dag.vertices[vertex].angelic {
            if successors.is_empty() {
                v[self.counter]
            } else {
                successors
                    .iter()
                    .map(|&s| self.value(s, v))
                    .min()
                    .unwrap()
            }
        } else {
            let u = self.step(vertex, v);
            let mut best = u[self.counter];
            for &s in &successors {
                best = best.max(self.value(s, &u));
            }
            best
        };
        self.values.insert((vertex, v.clone()), val);
        val
    }
}

/// Analyzes a two-player machine: the value of the target under optimal
/// play by both sides.
pub fn analyze_game(
    vass: &CounterVass,
    target: GameTarget,
    opts: &AnalysisOptions,
) -> Result<GameAnalysis, DecompError> {
    let (machine, counter) = prepare(vass, target);
    let dag = locking_decomposition(&machine, opts.lock_budget)?;
    let starts = machine.start_states();
    let start_roots: Vec<usize> = dag
        .roots
        .iter()
        .copied()
        .filter(|&r| {
            dag.vertices[r]
                .class
                .iter()
                .any(|s| starts.contains(s))
        })
        .collect();
    let mut eval = Evaluator::new(&machine, &dag, counter, &opts.caps);
    let seed = unit_vector(machine.dim());
    let optimal = start_roots
        .iter()
        .map(|&r| eval.value(r, &seed))
        .max()
        .expect("a machine with states has start roots");
    Ok(GameAnalysis {
        machine,
        counter,
        dag,
        start_roots,
        optimal,
    })
}

/// A game decision at one degree.
#[derive(Debug)]
pub struct GameDecision {
    pub analysis: GameAnalysis,
    /// The adversary forces `Ω(n^degree)`.
    pub lower: bool,
    /// The controller keeps the target in `O(n^degree)`.
    pub upper: bool,
    pub theta: bool,
}

/// Decides `Θ/O/Ω(n^degree)` for the target under optimal play.
pub fn decide_game(
    vass: &CounterVass,
    target: GameTarget,
    degree: u32,
    opts: &AnalysisOptions,
) -> Result<GameDecision, DecompError> {
    assert!(degree >= 1, "queries are about degrees >= 1");
    let analysis = analyze_game(vass, target, opts)?;
    let bound = GrowthExponent::Poly(degree);
    Ok(GameDecision {
        lower: analysis.optimal >= bound,
        upper: analysis.optimal <= bound,
        theta: analysis.optimal == bound,
        analysis,
    })
}

/// One controller commitment: after following `prefix` (vertex ids from a
/// root), lock transition `lock`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrategyStep {
    pub prefix: Vec<usize>,
    pub lock: usize,
}

/// A simple locking strategy: a prefix-closed map from controller choice
/// points (identified by the vertex path leading there) to the locked
/// transition.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimpleLockingStrategy {
    pub steps: Vec<StrategyStep>,
}

impl SimpleLockingStrategy {
    pub fn lock_for(&self, prefix: &[usize]) -> Option<usize> {
        self.steps
            .iter()
            .find(|s| s.prefix == prefix)
            .map(|s| s.lock)
    }
}

const STRATEGY_NODE_BUDGET: usize = 100_000;

/// Extracts an optimal simple locking strategy: at every controller choice
/// point reachable under it, lock the transition whose successor vertex
/// minimizes the game value (first minimum in successor order).
pub fn synthesize_strategy(analysis: &GameAnalysis, opts: &AnalysisOptions) -> SimpleLockingStrategy {
    let mut eval = Evaluator::new(
        &analysis.machine,
        &analysis.dag,
        analysis.counter,
        &opts.caps,
    );
    let mut steps = Vec::new();
    let mut nodes = 0usize;
    fn walk(
        eval: &mut Evaluator<'_>,
        dag: &LockingDag,
        vertex: usize,
        v: &GrowthVector,
        path: &mut Vec<usize>,
        steps: &mut Vec<StrategyStep>,
        nodes: &mut usize,
    ) {
        *nodes += 1;
        assert!(
            *nodes <= STRATEGY_NODE_BUDGET,
            "strategy unfolding exceeds {STRATEGY_NODE_BUDGET} nodes"
        );
        path.push(vertex);
        let successors = dag.edges[vertex].clone();
        if dag.vertices[vertex].angelic {
            if let Some(&best) = successors
                .iter()
                .min_by_key(|&&s| eval.value(s, v))
            {
                steps.push(StrategyStep {
                    prefix: path.clone(),
                    lock: lock_extension(&dag.vertices[vertex], &dag.vertices[best]),
                });
                walk(eval, dag, best, v, path, steps, nodes);
            }
        } else {
            let u = eval.step(vertex, v);
            for &s in &successors {
                walk(eval, dag, s, &u, path, steps, nodes);
            }
        }
        path.pop();
    }
    let seed = unit_vector(analysis.machine.dim());
    for &root in &analysis.start_roots {
        walk(
            &mut eval,
            &analysis.dag,
            root,
            &seed,
            &mut Vec::new(),
            &mut steps,
            &mut nodes,
        );
    }
    SimpleLockingStrategy { steps }
}

/// Materializes the purely adversarial machine obtained by playing the
/// strategy: the unfolding tree of (vertex, entry vector) nodes with one
/// state per class member, internal class transitions, boundary transitions
/// to successor vertices, and the strategy's locked transition at controller
/// nodes. Dead states are sealed with a drain loop. The result can be
/// re-analyzed independently; its optimal exponent equals the value the
/// strategy secures.
pub fn induced_machine(
    analysis: &GameAnalysis,
    strategy: &SimpleLockingStrategy,
    opts: &AnalysisOptions,
) -> CounterVass {
    let machine = &analysis.machine;
    let dag = &analysis.dag;
    let mut eval = Evaluator::new(machine, dag, analysis.counter, &opts.caps);
    let mut states: Vec<State> = Vec::new();
    let mut transitions: Vec<Transition> = Vec::new();
    let mut initial: Vec<usize> = Vec::new();
    let starts = machine.start_states();

    // Builds the subtree for (vertex, v) reached along `path`; returns the
    // map class-state → machine-state for the node.
    #[allow(clippy::too_many_arguments)]
    fn build(
        eval: &mut Evaluator<'_>,
        machine: &CounterVass,
        dag: &LockingDag,
        strategy: &SimpleLockingStrategy,
        vertex: usize,
        v: &GrowthVector,
        path: &mut Vec<usize>,
        states: &mut Vec<State>,
        transitions: &mut Vec<Transition>,
    ) -> HashMap<usize, usize> {
        path.push(vertex);
        assert!(
            states.len() <= STRATEGY_NODE_BUDGET,
            "induced machine exceeds {STRATEGY_NODE_BUDGET} states"
        );
        let node = path.len() - 1 + states.len(); // unique-ish tag for names
        let class = &dag.vertices[vertex].class;
        let mut local: HashMap<usize, usize> = HashMap::new();
        for &q in class {
            local.insert(q, states.len());
            states.push(State {
                name: format!("u{node}_{}", machine.states[q].name),
                player: Player::Demonic,
            });
        }
        if dag.vertices[vertex].angelic {
            if let Some(lock) = strategy.lock_for(path) {
                let t = &machine.transitions[lock];
                let child_vertex = dag.edges[vertex]
                    .iter()
                    .copied()
                    .find(|&s| {
                        lock_extension(&dag.vertices[vertex], &dag.vertices[s]) == lock
                            && dag.vertices[s].class.contains(&t.dst)
                    })
                    .expect("locked transition has a successor vertex");
                let child = build(
                    eval, machine, dag, strategy, child_vertex, v, path, states, transitions,
                );
                transitions.push(Transition {
                    src: local[&t.src],
                    update: t.update.clone(),
                    dst: child[&t.dst],
                });
            }
        } else {
            let u = eval.step(vertex, v);
            let locked_src: HashMap<usize, usize> = dag.vertices[vertex]
                .lock
                .iter()
                .map(|&t| (machine.transitions[t].src, t))
                .collect();
            let allowed = |i: usize, t: &Transition| {
                locked_src.get(&t.src).map_or(true, |&only| only == i)
            };
            for (i, t) in machine.transitions.iter().enumerate() {
                if local.contains_key(&t.src) && local.contains_key(&t.dst) && allowed(i, t) {
                    transitions.push(Transition {
                        src: local[&t.src],
                        update: t.update.clone(),
                        dst: local[&t.dst],
                    });
                }
            }
            for &succ in &dag.edges[vertex] {
                let child = build(
                    eval, machine, dag, strategy, succ, &u, path, states, transitions,
                );
                for (i, t) in machine.transitions.iter().enumerate() {
                    if local.contains_key(&t.src) && child.contains_key(&t.dst) && allowed(i, t) {
                        transitions.push(Transition {
                            src: local[&t.src],
                            update: t.update.clone(),
                            dst: child[&t.dst],
                        });
                    }
                }
            }
        }
        path.pop();
        local
    }

    let seed = unit_vector(machine.dim());
    for &root in &analysis.start_roots {
        let local = build(
            &mut eval,
            machine,
            dag,
            strategy,
            root,
            &seed,
            &mut Vec::new(),
            &mut states,
            &mut transitions,
        );
        for (&orig, &new) in &local {
            if starts.contains(&orig) {
                initial.push(new);
            }
        }
    }
    initial.sort_unstable();
    let mut result = CounterVass {
        counters: machine.counters.clone(),
        states,
        transitions,
        initial: Some(initial),
    };
    result.seal_dead_states();
    result
}

const ENUMERATION_PATH_LIMIT: usize = 4096;

/// The set of values achievable by simple locking strategies (adversary
/// playing a best response to each). The minimum is the game value; used to
/// confirm optimality exhaustively on small games. Panics if the unfolding
/// has more than [`ENUMERATION_PATH_LIMIT`] maximal paths.
pub fn strategy_value_range(
    analysis: &GameAnalysis,
    opts: &AnalysisOptions,
) -> std::collections::BTreeSet<GrowthExponent> {
    let (_, truncated) = analysis.dag.enumerate_root_paths(ENUMERATION_PATH_LIMIT);
    assert!(
        !truncated,
        "exhaustive enumeration is limited to {ENUMERATION_PATH_LIMIT} paths"
    );
    use std::collections::BTreeSet;
    let mut eval = Evaluator::new(
        &analysis.machine,
        &analysis.dag,
        analysis.counter,
        &opts.caps,
    );
    type Memo = HashMap<(usize, GrowthVector), BTreeSet<GrowthExponent>>;
    fn values(
        eval: &mut Evaluator<'_>,
        dag: &LockingDag,
        counter: usize,
        vertex: usize,
        v: &GrowthVector,
        memo: &mut Memo,
    ) -> BTreeSet<GrowthExponent> {
        if let Some(s) = memo.get(&(vertex, v.clone())) {
            return s.clone();
        }
        let successors = dag.edges[vertex].clone();
        let result: BTreeSet<GrowthExponent> = if dag.vertices[vertex].angelic {
            if successors.is_empty() {
                BTreeSet::from([v[counter]])
            } else {
                // The controller picks any one branch.
                successors
                    .iter()
                    .flat_map(|&s| values(eval, dag, counter, s, v, memo))
                    .collect()
            }
        } else {
            // The adversary takes the worst branch; branch strategies are
            // chosen independently, so combine pointwise by maximum.
            let u = eval.step(vertex, v);
            let mut acc = BTreeSet::from([u[counter]]);
            for &s in &successors {
                let branch = values(eval, dag, counter, s, &u, memo);
                acc = acc
                    .iter()
                    .flat_map(|&a| branch.iter().map(move |&b| a.max(b)))
                    .collect();
            }
            acc
        };
        memo.insert((vertex, v.clone()), result.clone());
        result
    }
    let seed = unit_vector(analysis.machine.dim());
    let mut memo = Memo::new();
    let mut acc: Option<BTreeSet<GrowthExponent>> = None;
    for &root in &analysis.start_roots {
        let root_values = values(
            &mut eval,
            &analysis.dag,
            analysis.counter,
            root,
            &seed,
            &mut memo,
        );
        acc = Some(match acc {
            None => root_values,
            // Multiple start classes: the adversary picks the start, the
            // controller's choices are independent per root.
            Some(prev) => prev
                .iter()
                .flat_map(|&a| root_values.iter().map(move |&b| a.max(b)))
                .collect(),
        });
    }
    acc.expect("a machine with states has start roots")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{compute_vect, AnalysisOptions};
    use crate::generators::gen_example1;
    use crate::program::{compile_program, parse_program};

    /// The adversary pumps one of two products; the controller then copies
    /// one of the two source counters into z. Optimal play keeps z linear.
    fn hedging_game() -> CounterVass {
        let text = "decl i i2 i3 j k z\n\
                    choose {\nk <- i * i2\n} or {\nj <- i * i3\n}\n\
                    achoose {\nz <- [j]\n} or {\nz <- [k]\n}";
        let mut vass = compile_program(&parse_program(text).unwrap())
            .unwrap()
            .vass;
        vass.seal_dead_states();
        vass
    }

    #[test]
    fn controller_hedges_to_linear() {
        let opts = AnalysisOptions::default();
        let vass = hedging_game();
        let z = vass.counter_index("z").unwrap();
        let decision = decide_game(&vass, GameTarget::Counter(z), 1, &opts).unwrap();
        assert_eq!(decision.analysis.optimal, GrowthExponent::Poly(1));
        assert!(decision.upper && decision.theta);
    }

    #[test]
    fn strategy_secures_the_value_and_nothing_beats_it() {
        let opts = AnalysisOptions::default();
        let vass = hedging_game();
        let z = vass.counter_index("z").unwrap();
        let analysis = analyze_game(&vass, GameTarget::Counter(z), &opts).unwrap();

        let strategy = synthesize_strategy(&analysis, &opts);
        assert!(!strategy.steps.is_empty(), "the game has a choice point");
        let induced = induced_machine(&analysis, &strategy, &opts);
        let table = compute_vect(&induced, &opts);
        assert_eq!(table.max_exponent(analysis.counter), analysis.optimal);

        let range = strategy_value_range(&analysis, &opts);
        assert_eq!(range.iter().next().copied(), Some(analysis.optimal));
        assert!(
            range.contains(&GrowthExponent::Poly(2)),
            "copying the pumped counter is quadratic: {range:?}"
        );
    }

    #[test]
    fn adversary_only_games_degenerate_to_plain_analysis() {
        let opts = AnalysisOptions::default();
        let vass = gen_example1();
        let game = analyze_game(&vass, GameTarget::Length, &opts).unwrap();
        assert_eq!(game.optimal, GrowthExponent::Poly(2));

        let (with_sc, sc) = vass.add_step_counter();
        let table = compute_vect(&with_sc, &opts);
        assert_eq!(table.max_exponent(sc), game.optimal);
    }

    #[test]
    fn length_counts_controller_steps_within_a_constant() {
        let opts = AnalysisOptions::default();
        let vass = hedging_game();
        let game = analyze_game(&vass, GameTarget::Length, &opts).unwrap();
        // The adversary spends the products through the drain loop: the
        // pumped counter is quadratic, so the optimal length is too (the
        // controller cannot prevent the product from being built).
        assert_eq!(game.optimal, GrowthExponent::Poly(2));
    }
}
