//! Asymptotic complexity analysis of purely adversarial machines.
//!
//! The machine's SCC condensation is processed in topological order,
//! propagating *growth vectors*: entering a component with counter values
//! `n^{v(i)}` (or unbounded), the component's growth update
//! ([`crate::growth::growth_step`]) yields the values available when leaving
//! it. Start components are seeded with the all-linear vector `(n, …, n)`;
//! every component accumulates the set of vectors reachable along DAG paths
//! from the seeds. The per-component sets answer asymptotic queries:
//!
//! - the counter's maximal exponent is the maximum of its component over all
//!   accumulated vectors (growth updates never shrink a component, so the
//!   maximum over all vertices covers every reachable configuration);
//! - `value ∈ Ω(n^k)` iff the maximum is ≥ `n^k`; `value ∈ O(n^k)` iff it is
//!   ≤ `n^k`; `Θ(n^k)` iff both. At most one degree can be `Θ`-exact, and
//!   every query comes with a replayable path witness.
//!
//! Termination-time (length) queries reduce to counter queries: a step
//! counter starting at `n` and incremented by every transition turns the
//! maximal run length into a peak-counter question.
//!
//! Vector sets are capped per component; hitting the cap sets a truncation
//! flag on the result rather than failing.

use std::collections::{BTreeSet, HashMap};

use crate::decomp::{induced_subvass, scc_dag, SccDag};
use crate::growth::{growth_step, unit_vector, GrowthExponent, GrowthVector};
use crate::model::{CounterVass, Player};
use crate::oracle::OracleCaps;

/// Tunable limits for the analyses.
#[derive(Debug, Clone)]
pub struct AnalysisOptions {
    /// Limits for the exploration oracle backing degree estimation.
    pub caps: OracleCaps,
    /// Maximal number of growth vectors kept per component.
    pub vect_budget: usize,
    /// Maximal number of vertices in the locking unfolding (games).
    pub lock_budget: usize,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            caps: OracleCaps::default(),
            vect_budget: 4096,
            lock_budget: 100_000,
        }
    }
}

/// Where a component's growth vector came from.
#[derive(Debug, Clone)]
enum Provenance {
    /// Seeded at a start component from the all-linear vector.
    Root,
    /// Propagated from a predecessor component that accumulated `entry`.
    Step { pred: usize, entry: GrowthVector },
}

/// Pointwise `>=` on growth vectors.
fn dominates(a: &GrowthVector, b: &GrowthVector) -> bool {
    a.iter().zip(b).all(|(x, y)| x >= y)
}

/// Growth vectors accumulated per component of the condensation.
#[derive(Debug)]
pub struct VectTable {
    pub dag: SccDag,
    /// Result vectors per component, in canonical order.
    pub vect: Vec<BTreeSet<GrowthVector>>,
    /// True iff some component hit the vector budget.
    pub truncated: bool,
    subs: Vec<CounterVass>,
    provenance: HashMap<(usize, GrowthVector), Provenance>,
}

/// Propagates growth vectors over the condensation of a purely adversarial
/// machine.
///
/// Component results are additionally memoized on the entry restricted to the
/// counters the component actually updates: entries differing only on
/// counters a component never touches produce the same update on the touched
/// part and pass the rest through, so the (oracle-backed) growth step runs
/// once per genuinely distinct situation.
pub fn compute_vect(vass: &CounterVass, opts: &AnalysisOptions) -> VectTable {
    let mut supports: HashMap<usize, Vec<usize>> = HashMap::new();
    let mut memo: HashMap<(usize, Vec<GrowthExponent>), Vec<GrowthExponent>> = HashMap::new();
    compute_vect_with(vass, opts, move |comp, sub, entry, caps| {
        let support = supports.entry(comp).or_insert_with(|| {
            (0..sub.dim())
                .filter(|&i| sub.transitions.iter().any(|t| t.update[i] != 0))
                .collect()
        });
        let key: Vec<GrowthExponent> = support.iter().map(|&i| entry[i]).collect();
        let touched = memo
            .entry((comp, key))
            .or_insert_with(|| {
                let full = growth_step(sub, entry, caps);
                support.iter().map(|&i| full[i]).collect()
            })
            .clone();
        let mut result = entry.clone();
        for (&i, g) in support.iter().zip(touched) {
            result[i] = g;
        }
        result
    })
}

/// Like [`compute_vect`], but with a caller-supplied per-component growth
/// update `step(component, sub_machine, entry, caps)`. This exposes the
/// propagation logic — seeding, ordering, accumulation, memoization,
/// budgets, provenance — for testing against hand-specified component
/// behaviors without constructing machines that realize them.
///
/// Growth updates are monotone in their entry (larger entry values only
/// enable more behavior), so vectors dominated pointwise by another vector
/// can never contribute a new maximum: dominated entries are not stepped,
/// and each component's result set is kept as a Pareto-maximal antichain.
pub fn compute_vect_with(
    vass: &CounterVass,
    opts: &AnalysisOptions,
    mut step: impl FnMut(usize, &CounterVass, &GrowthVector, &OracleCaps) -> GrowthVector,
) -> VectTable {
    assert!(
        vass.states.iter().all(|s| s.player == Player::Demonic),
        "growth propagation requires a fully adversarial machine; analyze games via the locking unfolding"
    );
    let dag = scc_dag(vass);
    let subs: Vec<CounterVass> = dag
        .components
        .iter()
        .map(|c| induced_subvass(vass, c).0)
        .collect();
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); dag.components.len()];
    for (a, adj) in dag.edges.iter().enumerate() {
        for &b in adj {
            preds[b].push(a);
        }
    }
    let mut vect: Vec<BTreeSet<GrowthVector>> = vec![BTreeSet::new(); dag.components.len()];
    let mut provenance: HashMap<(usize, GrowthVector), Provenance> = HashMap::new();
    let mut memo: HashMap<(usize, GrowthVector), GrowthVector> = HashMap::new();
    let mut truncated = false;

    for comp in 0..dag.components.len() {
        let mut entries: Vec<(GrowthVector, Provenance)> = Vec::new();
        if dag.roots.contains(&comp) {
            entries.push((unit_vector(vass.dim()), Provenance::Root));
        }
        for &pred in &preds[comp] {
            for v in &vect[pred] {
                entries.push((
                    v.clone(),
                    Provenance::Step {
                        pred,
                        entry: v.clone(),
                    },
                ));
            }
        }
        // Keep only Pareto-maximal entries (first occurrence wins on ties).
        let mut maximal: Vec<(GrowthVector, Provenance)> = Vec::new();
        for (entry, prov) in entries {
            if maximal.iter().any(|(kept, _)| dominates(kept, &entry)) {
                continue;
            }
            maximal.retain(|(kept, _)| !dominates(&entry, kept));
            maximal.push((entry, prov));
        }
        for (entry, prov) in maximal {
            if vect[comp].len() >= opts.vect_budget {
                truncated = true;
                break;
            }
            let result = memo
                .entry((comp, entry.clone()))
                .or_insert_with(|| step(comp, &subs[comp], &entry, &opts.caps))
                .clone();
            if vect[comp].iter().any(|kept| dominates(kept, &result)) {
                continue;
            }
            let shadowed: Vec<GrowthVector> = vect[comp]
                .iter()
                .filter(|kept| dominates(&result, kept))
                .cloned()
                .collect();
            for w in shadowed {
                vect[comp].remove(&w);
                provenance.remove(&(comp, w));
            }
            vect[comp].insert(result.clone());
            provenance.insert((comp, result), prov);
        }
    }

    VectTable {
        dag,
        vect,
        truncated,
        subs,
        provenance,
    }
}

/// A path witness: components from a start component to the target, with the
/// entry vector and growth result at each step. `entries[0]` is the
/// all-linear seed and `entries[i+1] == results[i]`.
#[derive(Debug, Clone)]
pub struct PathWitness {
    pub components: Vec<usize>,
    pub entries: Vec<GrowthVector>,
    pub results: Vec<GrowthVector>,
}

impl VectTable {
    /// The maximal exponent of `counter` over all accumulated vectors.
    /// `Poly(0)` if no vector was accumulated at all (empty machine or zero
    /// budget).
    pub fn max_exponent(&self, counter: usize) -> GrowthExponent {
        self.vect
            .iter()
            .flatten()
            .map(|u| u[counter])
            .max()
            .unwrap_or(GrowthExponent::Poly(0))
    }

    /// A path witness reaching a vector whose `counter` component is at
    /// least `bound`, if any.
    pub fn witness_for(&self, counter: usize, bound: GrowthExponent) -> Option<PathWitness> {
        for comp in 0..self.vect.len() {
            for u in &self.vect[comp] {
                if u[counter] >= bound {
                    return Some(self.trace_back(comp, u.clone()));
                }
            }
        }
        None
    }

    fn trace_back(&self, comp: usize, result: GrowthVector) -> PathWitness {
        let mut components = vec![comp];
        let mut results = vec![result.clone()];
        let mut entries = Vec::new();
        let mut cursor = (comp, result);
        loop {
            match self
                .provenance
                .get(&cursor)
                .expect("accumulated vectors have provenance")
            {
                Provenance::Root => {
                    entries.push(unit_vector(self.subs[cursor.0].dim()));
                    break;
                }
                Provenance::Step { pred, entry } => {
                    entries.push(entry.clone());
                    components.push(*pred);
                    results.push(entry.clone());
                    cursor = (*pred, entry.clone());
                }
            }
        }
        components.reverse();
        results.reverse();
        entries.reverse();
        PathWitness {
            components,
            entries,
            results,
        }
    }

    /// Re-validates a witness: the components form a DAG path from a start
    /// component, consecutive vectors chain, and replaying the growth update
    /// reproduces every recorded result.
    pub fn replay_witness(&self, witness: &PathWitness, caps: &OracleCaps) -> bool {
        let n = witness.components.len();
        if n == 0 || witness.entries.len() != n || witness.results.len() != n {
            return false;
        }
        if !self.dag.roots.contains(&witness.components[0]) {
            return false;
        }
        if witness.entries[0] != unit_vector(self.subs[witness.components[0]].dim()) {
            return false;
        }
        for i in 0..n {
            let comp = witness.components[i];
            if i + 1 < n {
                if !self.dag.edges[comp].contains(&witness.components[i + 1]) {
                    return false;
                }
                if witness.entries[i + 1] != witness.results[i] {
                    return false;
                }
            }
            let replayed = growth_step(&self.subs[comp], &witness.entries[i], caps);
            if replayed != witness.results[i] {
                return false;
            }
        }
        true
    }
}

/// Outcome of an asymptotic query at one degree.
#[derive(Debug, Clone)]
pub struct QueryResult {
    /// `value ∈ Ω(n^degree)`.
    pub lower: bool,
    /// `value ∈ O(n^degree)`.
    pub upper: bool,
    /// `value ∈ Θ(n^degree)`.
    pub theta: bool,
    /// The exact asymptotic class of the value.
    pub max: GrowthExponent,
    /// Path witness attaining `max`.
    pub witness: Option<PathWitness>,
}

/// Queries the peak of a counter against `n^degree`.
pub fn query_counter(table: &VectTable, counter: usize, degree: u32) -> QueryResult {
    assert!(degree >= 1, "queries are about degrees >= 1");
    let max = table.max_exponent(counter);
    let bound = GrowthExponent::Poly(degree);
    QueryResult {
        lower: max >= bound,
        upper: max <= bound,
        theta: max == bound,
        max,
        witness: table.witness_for(counter, max),
    }
}

/// A counter analysis bundling the table and the query outcome.
pub struct CounterAnalysis {
    pub table: VectTable,
    pub outcome: QueryResult,
}

/// Analyzes the peak of `counter` against `n^degree`.
pub fn analyze_counter(
    vass: &CounterVass,
    counter: usize,
    degree: u32,
    opts: &AnalysisOptions,
) -> CounterAnalysis {
    let table = compute_vect(vass, opts);
    let outcome = query_counter(&table, counter, degree);
    CounterAnalysis { table, outcome }
}

/// A length analysis: the step-counter machine, the index of the step
/// counter, the table over that machine, and the query outcome.
pub struct LengthAnalysis {
    pub machine: CounterVass,
    pub step_counter: usize,
    pub table: VectTable,
    pub outcome: QueryResult,
}

/// Analyzes the maximal run length against `n^degree` via the step-counter
/// reduction.
pub fn analyze_length(vass: &CounterVass, degree: u32, opts: &AnalysisOptions) -> LengthAnalysis {
    let (machine, step_counter) = vass.add_step_counter();
    let table = compute_vect(&machine, opts);
    let outcome = query_counter(&table, step_counter, degree);
    LengthAnalysis {
        machine,
        step_counter,
        table,
        outcome,
    }
}
