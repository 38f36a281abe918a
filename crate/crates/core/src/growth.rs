//! Asymptotic counter growth in strongly connected demonic machines.
//!
//! A strongly connected demonic machine entered with counter values
//! `n^{v(i)}` lets each counter grow either polynomially (of some degree) or
//! beyond every polynomial. The exponentially pumpable counters are exactly
//! those covered by an *iteration scheme*: a finite family of cycles such
//! that every counter strictly decreased by one of the cycles is strictly
//! increased by the family's combined effect; the covered set is the set of
//! counters the combined effect strictly increases. Valid covered sets are
//! closed under union, so a unique maximal one exists.
//!
//! [`exp_counters`] computes that maximal set exactly. Cycles are treated as
//! connected circulations (nonnegative transition multiplicities satisfying
//! flow conservation, with weakly connected support — such a circulation is
//! realizable as a closed walk by Euler's theorem), and existence questions
//! become linear programs solved in exact rational arithmetic:
//!
//! 1. For a candidate set `S`, the cone of circulations with effect ≥ 0
//!    outside `S` is split into *leaves* — repeatedly compute the cone's
//!    maximal support (per-transition feasibility probes) and recurse into
//!    weak components until the support is connected. Every connected
//!    circulation of the cone lives inside one leaf, and conversely any
//!    circulation supported by a leaf can be mixed with the leaf's summed
//!    probe solutions into a single connected cycle.
//! 2. `S` is accepted iff one circulation per leaf can jointly achieve
//!    combined effect ≥ 1 on all of `S` (one more linear program).
//! 3. Candidate counters are pre-pruned by a fixpoint that drops counters
//!    without a connected witness cycle, then accepted sets are searched in
//!    decreasing size (lexicographic tie-break), which yields the maximum.
//!
//! Polynomial degrees are estimated empirically: [`estimate_exponent`] runs
//! the exact exploration oracle on the machine started from `n^{v(i)}` for
//! doubling `n` and fits the degree, escalating `n` until the fit stabilizes.
//! [`growth_step`] combines both into the one-component growth update, and
//! [`lift_with_pumper`] materializes `n^{v(i)}` entry values inside an
//! ordinary unit-initialized machine by prepending a pumping gadget.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use itertools::Itertools;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::lp::{ConstraintOp, LinearProgram};
use crate::model::{CounterVass, Player, State, Transition};
use crate::oracle::{explore_demonic_max, fit_exponent, initial_schedule, OracleCaps};

/// Asymptotic growth of one counter: polynomial of a given degree, or beyond
/// every polynomial.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub enum GrowthExponent {
    /// Bounded by (and attaining) `Θ(n^k)`.
    Poly(u32),
    /// `2^Ω(n)`: grows beyond every polynomial.
    Inf,
}

impl GrowthExponent {
    /// The polynomial degree, if polynomial.
    pub fn degree(self) -> Option<u32> {
        match self {
            GrowthExponent::Poly(k) => Some(k),
            GrowthExponent::Inf => None,
        }
    }
}

impl fmt::Display for GrowthExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GrowthExponent::Poly(k) => write!(f, "n^{k}"),
            GrowthExponent::Inf => write!(f, "exp"),
        }
    }
}

/// One growth exponent per counter.
pub type GrowthVector = Vec<GrowthExponent>;

/// The all-linear entry vector `(n, …, n)`.
pub fn unit_vector(dim: usize) -> GrowthVector {
    vec![GrowthExponent::Poly(1); dim]
}

/// A cycle witness: a circulation with positive rational transition
/// multiplicities, its exact effect on the counters, and connectivity of its
/// support (connected circulations are realizable as closed walks).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CirculationWitness {
    /// `(transition index, multiplicity)` pairs, multiplicities > 0.
    pub multiplicities: Vec<(usize, BigRational)>,
    /// Exact combined counter effect of the weighted transitions.
    pub effect: Vec<BigRational>,
}

/// Result of the exact exponential-growth analysis of one component.
#[derive(Debug, Clone)]
pub struct ExpAnalysis {
    /// The unique maximal set of counters pumpable beyond every polynomial.
    pub exponential: BTreeSet<usize>,
    /// Cycle family certifying the set: every member keeps counters outside
    /// the set nonnegative, and the summed effect is ≥ 1 on every member of
    /// the set. Empty iff the set is empty.
    pub witnesses: Vec<CirculationWitness>,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Exact effect vector of weighted transitions.
fn effect_of(vass: &CounterVass, weights: &[(usize, BigRational)]) -> Vec<BigRational> {
    let mut effect = vec![BigRational::zero(); vass.dim()];
    for (t, w) in weights {
        for (c, &u) in vass.transitions[*t].update.iter().enumerate() {
            if u != 0 {
                effect[c] += w * rat(u);
            }
        }
    }
    effect
}

/// Flow-conservation and sign constraints of the circulation cone over the
/// transition subset `trans`: multiplicities are balanced at every state and
/// the effect is nonnegative on every counter outside `allow_negative`.
fn cone_lp(
    vass: &CounterVass,
    trans: &[usize],
    allow_negative: &BTreeSet<usize>,
) -> LinearProgram {
    let mut lp = LinearProgram::new(trans.len());
    let mut incident: BTreeSet<usize> = BTreeSet::new();
    for &t in trans {
        incident.insert(vass.transitions[t].src);
        incident.insert(vass.transitions[t].dst);
    }
    for state in incident {
        let mut coeffs: Vec<(usize, BigRational)> = Vec::new();
        for (k, &t) in trans.iter().enumerate() {
            if vass.transitions[t].src == state {
                coeffs.push((k, rat(1)));
            }
            if vass.transitions[t].dst == state {
                coeffs.push((k, rat(-1)));
            }
        }
        lp.constrain(coeffs, ConstraintOp::Eq, rat(0));
    }
    for c in 0..vass.dim() {
        if allow_negative.contains(&c) {
            continue;
        }
        let coeffs: Vec<(usize, BigRational)> = trans
            .iter()
            .enumerate()
            .filter(|(_, &t)| vass.transitions[t].update[c] != 0)
            .map(|(k, &t)| (k, rat(vass.transitions[t].update[c])))
            .collect();
        if !coeffs.is_empty() {
            lp.constrain(coeffs, ConstraintOp::Ge, rat(0));
        }
    }
    lp
}

/// Adds `Σ_t x_t · update_t[counter] ≥ 1` over the subset `trans`.
fn constrain_effect_ge_one(
    lp: &mut LinearProgram,
    vass: &CounterVass,
    trans: &[usize],
    counter: usize,
) {
    let coeffs: Vec<(usize, BigRational)> = trans
        .iter()
        .enumerate()
        .filter(|(_, &t)| vass.transitions[t].update[counter] != 0)
        .map(|(k, &t)| (k, rat(vass.transitions[t].update[counter])))
        .collect();
    lp.constrain(coeffs, ConstraintOp::Ge, rat(1));
}

/// Maximal support of the cone: the transitions usable by some member, found
/// by per-transition feasibility probes (any member scales up to put weight
/// ≥ 1 on any transition of its support). Also returns the probe solutions'
/// sum, a cone member whose support is exactly the maximal support.
fn max_support(
    vass: &CounterVass,
    trans: &[usize],
    allow_negative: &BTreeSet<usize>,
    require_ge_one: Option<usize>,
) -> (Vec<usize>, Vec<(usize, BigRational)>) {
    let mut support = Vec::new();
    let mut sum: HashMap<usize, BigRational> = HashMap::new();
    for (k, &t) in trans.iter().enumerate() {
        let mut lp = cone_lp(vass, trans, allow_negative);
        if let Some(counter) = require_ge_one {
            constrain_effect_ge_one(&mut lp, vass, trans, counter);
        }
        lp.constrain([(k, rat(1))], ConstraintOp::Ge, rat(1));
        if let Some(solution) = lp.find_feasible() {
            support.push(t);
            for (pos, value) in solution.into_iter().enumerate() {
                if !value.is_zero() {
                    *sum.entry(trans[pos]).or_insert_with(BigRational::zero) += value;
                }
            }
        }
    }
    let mut summed: Vec<(usize, BigRational)> = sum.into_iter().collect();
    summed.sort_by_key(|&(t, _)| t);
    (support, summed)
}

/// Weakly connected components of the transition subset (transitions grouped
/// by the component of their endpoints).
fn weak_components(vass: &CounterVass, trans: &[usize]) -> Vec<Vec<usize>> {
    let mut parent: HashMap<usize, usize> = HashMap::new();
    fn find(parent: &mut HashMap<usize, usize>, s: usize) -> usize {
        let p = *parent.entry(s).or_insert(s);
        if p == s {
            s
        } else {
            let root = find(parent, p);
            parent.insert(s, root);
            root
        }
    }
    for &t in trans {
        let a = find(&mut parent, vass.transitions[t].src);
        let b = find(&mut parent, vass.transitions[t].dst);
        parent.insert(a, b);
    }
    let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
    for &t in trans {
        let root = find(&mut parent, vass.transitions[t].src);
        groups.entry(root).or_default().push(t);
    }
    let mut components: Vec<Vec<usize>> = groups.into_values().collect();
    components.sort();
    components
}

/// A connected fragment of the circulation cone together with a cone member
/// supported by exactly the fragment.
struct Leaf {
    trans: Vec<usize>,
    probe_sum: Vec<(usize, BigRational)>,
}

/// Splits the circulation cone over `trans` into connected leaves. Every
/// connected circulation with effect ≥ 0 outside `allow_negative` is
/// supported inside one leaf.
fn compute_leaves(
    vass: &CounterVass,
    trans: &[usize],
    allow_negative: &BTreeSet<usize>,
) -> Vec<Leaf> {
    let (support, probe_sum) = max_support(vass, trans, allow_negative, None);
    if support.is_empty() {
        return Vec::new();
    }
    let components = weak_components(vass, &support);
    if components.len() == 1 {
        return vec![Leaf {
            trans: support,
            probe_sum,
        }];
    }
    components
        .iter()
        .flat_map(|component| compute_leaves(vass, component, allow_negative))
        .collect()
}

/// Decides whether a family of connected cycles exists that keeps every
/// counter outside `s` nonnegative while the combined effect is ≥ 1 on all
/// of `s`; on success returns the verified witness family.
fn family_for(vass: &CounterVass, s: &BTreeSet<usize>) -> Option<Vec<CirculationWitness>> {
    if s.is_empty() {
        return Some(Vec::new());
    }
    let all: Vec<usize> = (0..vass.transitions.len()).collect();
    let leaves = compute_leaves(vass, &all, s);
    if leaves.is_empty() {
        return None;
    }

    // One circulation block per leaf; combined effect ≥ 1 on `s`.
    let offsets: Vec<usize> = leaves
        .iter()
        .scan(0, |acc, leaf| {
            let at = *acc;
            *acc += leaf.trans.len();
            Some(at)
        })
        .collect();
    let total: usize = leaves.iter().map(|leaf| leaf.trans.len()).sum();
    let mut lp = LinearProgram::new(total);
    for (leaf, &offset) in leaves.iter().zip(&offsets) {
        let mut incident: BTreeSet<usize> = BTreeSet::new();
        for &t in &leaf.trans {
            incident.insert(vass.transitions[t].src);
            incident.insert(vass.transitions[t].dst);
        }
        for state in incident {
            let mut coeffs: Vec<(usize, BigRational)> = Vec::new();
            for (k, &t) in leaf.trans.iter().enumerate() {
                if vass.transitions[t].src == state {
                    coeffs.push((offset + k, rat(1)));
                }
                if vass.transitions[t].dst == state {
                    coeffs.push((offset + k, rat(-1)));
                }
            }
            lp.constrain(coeffs, ConstraintOp::Eq, rat(0));
        }
        for c in 0..vass.dim() {
            if s.contains(&c) {
                continue;
            }
            let coeffs: Vec<(usize, BigRational)> = leaf
                .trans
                .iter()
                .enumerate()
                .filter(|(_, &t)| vass.transitions[t].update[c] != 0)
                .map(|(k, &t)| (offset + k, rat(vass.transitions[t].update[c])))
                .collect();
            if !coeffs.is_empty() {
                lp.constrain(coeffs, ConstraintOp::Ge, rat(0));
            }
        }
    }
    for &c in s {
        let mut coeffs: Vec<(usize, BigRational)> = Vec::new();
        for (leaf, &offset) in leaves.iter().zip(&offsets) {
            for (k, &t) in leaf.trans.iter().enumerate() {
                if vass.transitions[t].update[c] != 0 {
                    coeffs.push((offset + k, rat(vass.transitions[t].update[c])));
                }
            }
        }
        lp.constrain(coeffs, ConstraintOp::Ge, rat(1));
    }
    let solution = lp.find_feasible()?;

    // Mix each leaf's solution with the leaf's full-support probe sum so the
    // witness support is the (connected) leaf support. Scaling the solution
    // part preserves the ≥ 1 joint margin against the probe sums' effects.
    let probe_effects: Vec<Vec<BigRational>> = leaves
        .iter()
        .map(|leaf| effect_of(vass, &leaf.probe_sum))
        .collect();
    let mut worst = BigRational::zero();
    for &c in s {
        let total_probe: BigRational =
            probe_effects.iter().map(|e| e[c].clone()).sum();
        if -&total_probe > worst {
            worst = -total_probe;
        }
    }
    let scale = BigRational::one() + worst;
    let mut witnesses = Vec::new();
    for ((leaf, &offset), _) in leaves.iter().zip(&offsets).zip(&probe_effects) {
        let mut weights: HashMap<usize, BigRational> = HashMap::new();
        for (k, &t) in leaf.trans.iter().enumerate() {
            let w = &solution[offset + k] * &scale;
            if !w.is_zero() {
                *weights.entry(t).or_insert_with(BigRational::zero) += w;
            }
        }
        for (t, w) in &leaf.probe_sum {
            *weights.entry(*t).or_insert_with(BigRational::zero) += w.clone();
        }
        let mut multiplicities: Vec<(usize, BigRational)> = weights
            .into_iter()
            .filter(|(_, w)| !w.is_zero())
            .collect();
        multiplicities.sort_by_key(|&(t, _)| t);
        let effect = effect_of(vass, &multiplicities);
        witnesses.push(CirculationWitness {
            multiplicities,
            effect,
        });
    }
    Some(witnesses)
}

/// Decides whether a single connected cycle exists with effect ≥ 1 on
/// `counter` and ≥ 0 on every counter outside `allow_negative`.
fn connected_witness_exists(
    vass: &CounterVass,
    trans: &[usize],
    allow_negative: &BTreeSet<usize>,
    counter: usize,
) -> bool {
    let (support, _) = max_support(vass, trans, allow_negative, Some(counter));
    if support.is_empty() {
        return false;
    }
    let components = weak_components(vass, &support);
    if components.len() == 1 {
        return true;
    }
    components
        .iter()
        .any(|component| connected_witness_exists(vass, component, allow_negative, counter))
}

/// Checks a witness family exactly: positive multiplicities, flow
/// conservation at every state, recorded effects, connected supports,
/// nonnegative effects outside `exponential`, combined effect ≥ 1 on it.
pub fn verify_scheme(
    vass: &CounterVass,
    witnesses: &[CirculationWitness],
    exponential: &BTreeSet<usize>,
) -> Result<(), String> {
    let mut combined = vec![BigRational::zero(); vass.dim()];
    for (idx, witness) in witnesses.iter().enumerate() {
        if witness.multiplicities.is_empty() {
            return Err(format!("witness {idx} is empty"));
        }
        let mut balance: HashMap<usize, BigRational> = HashMap::new();
        for (t, w) in &witness.multiplicities {
            if *t >= vass.transitions.len() {
                return Err(format!("witness {idx} uses unknown transition {t}"));
            }
            if !w.is_positive() {
                return Err(format!("witness {idx} has nonpositive multiplicity"));
            }
            *balance
                .entry(vass.transitions[*t].src)
                .or_insert_with(BigRational::zero) += w.clone();
            *balance
                .entry(vass.transitions[*t].dst)
                .or_insert_with(BigRational::zero) -= w.clone();
        }
        if balance.values().any(|b| !b.is_zero()) {
            return Err(format!("witness {idx} violates flow conservation"));
        }
        let support: Vec<usize> = witness.multiplicities.iter().map(|&(t, _)| t).collect();
        if weak_components(vass, &support).len() != 1 {
            return Err(format!("witness {idx} has disconnected support"));
        }
        let effect = effect_of(vass, &witness.multiplicities);
        if effect != witness.effect {
            return Err(format!("witness {idx} records a wrong effect"));
        }
        for (c, e) in effect.iter().enumerate() {
            if !exponential.contains(&c) && e.is_negative() {
                return Err(format!(
                    "witness {idx} decreases counter {c} outside the covered set"
                ));
            }
            combined[c] += e.clone();
        }
    }
    for &c in exponential {
        if combined[c] < BigRational::one() {
            return Err(format!("combined effect on counter {c} is below 1"));
        }
    }
    Ok(())
}

/// Computes the maximal set of counters pumpable beyond every polynomial when
/// the component is entered with values `n^{v(i)}` (infinite components are
/// treated as unbounded, i.e. their updates are ignored), together with a
/// verified cycle-family witness.
pub fn exp_counters(scc: &CounterVass, v: &[GrowthExponent]) -> ExpAnalysis {
    let restricted = scc.restrict_to_infinite(v);
    // Candidates: finite counters incremented by some transition. A covered
    // counter needs a cycle strictly increasing it.
    let mut candidates: BTreeSet<usize> = (0..restricted.dim())
        .filter(|&c| v[c] != GrowthExponent::Inf)
        .filter(|&c| restricted.transitions.iter().any(|t| t.update[c] > 0))
        .collect();

    // Pruning fixpoint: a covered counter keeps a connected witness cycle
    // with respect to any superset of the maximal covered set, so counters
    // without one can never be covered; dropping them tightens the sign
    // constraints, hence the restart.
    let all: Vec<usize> = (0..restricted.transitions.len()).collect();
    loop {
        let drops: Vec<usize> = candidates
            .iter()
            .copied()
            .filter(|&j| !connected_witness_exists(&restricted, &all, &candidates, j))
            .collect();
        if drops.is_empty() {
            break;
        }
        for j in drops {
            candidates.remove(&j);
        }
    }

    // Search accepted sets in decreasing size (lexicographic within a size);
    // acceptance implies containment in the maximal covered set and the
    // maximal set is accepted, so the first hit is the maximum. The empty
    // set always succeeds.
    let ordered: Vec<usize> = candidates.iter().copied().collect();
    for size in (0..=ordered.len()).rev() {
        for subset in ordered.iter().copied().combinations(size) {
            let s: BTreeSet<usize> = subset.into_iter().collect();
            if let Some(witnesses) = family_for(&restricted, &s) {
                verify_scheme(&restricted, &witnesses, &s)
                    .expect("internal error: unverifiable witness family");
                return ExpAnalysis {
                    exponential: s,
                    witnesses,
                };
            }
        }
    }
    unreachable!("the empty set is always accepted")
}

/// Largest `n` tried by the degree estimator.
const ESTIMATE_MAX_N: u64 = 64;
/// Exploration-size guard: stop escalating `n` once a sample explored this
/// many configurations.
const ESTIMATE_VISIT_GUARD: usize = 100_000;

/// Entry values for one estimation run: `n^{v(i)}` on supported finite
/// counters, `min(2^n, cap)` on supported infinite ones, `0` elsewhere.
///
/// Counters outside the support are inert in the explored sub-machine, so
/// their slot is irrelevant; zeroing it keeps out-of-component degrees from
/// tripping the clamp flag.
fn masked_schedule(
    v: &[GrowthExponent],
    support: &[bool],
    n: u64,
    caps: &OracleCaps,
) -> (Vec<u64>, bool) {
    let mut clamped = false;
    let values = v
        .iter()
        .zip(support)
        .map(|(&g, &live)| {
            if !live {
                return 0;
            }
            let (full, flag) = initial_schedule(&[g], n, caps);
            clamped |= flag;
            full[0]
        })
        .collect();
    (values, clamped)
}

/// Estimates the polynomial degree of the maximal value of every counter when
/// the component runs from entry values `n^{v(i)}`, sharing one exploration
/// sweep across all counters.
///
/// Samples the exact oracle at doubling `n` (from every state of the
/// component, infinite entries replaced by `min(2^n, cap)`), fits the local
/// degrees per counter, and doubles the largest `n` until every supported
/// finite counter's fit stabilizes, `n` reaches [`ESTIMATE_MAX_N`], or
/// exploration becomes too expensive. Returns per counter the fitted degree
/// and whether the fit was stable; counters the component never updates keep
/// their entry degree (exactly), and slots with infinite entries are
/// placeholders `(0, false)`.
pub fn estimate_exponents(
    scc: &CounterVass,
    v: &[GrowthExponent],
    caps: &OracleCaps,
) -> Vec<(u32, bool)> {
    let d = scc.dim();
    let restricted = scc.restrict_to_infinite(v);
    let support: Vec<bool> = (0..d)
        .map(|i| restricted.transitions.iter().any(|t| t.update[i] != 0))
        .collect();
    let entry_fallback = |settled: bool| -> Vec<(u32, bool)> {
        (0..d)
            .map(|i| match v[i] {
                GrowthExponent::Poly(k) => (k, settled || !support[i]),
                GrowthExponent::Inf => (0, false),
            })
            .collect()
    };
    if restricted.transitions.iter().all(|t| t.update.iter().all(|&u| u == 0)) {
        // No internal counter moves: every counter keeps its entry value.
        return entry_fallback(true);
    }
    let mut ns: Vec<u64> = vec![2, 4, 8, 16];
    loop {
        let mut per: Vec<Vec<(u64, u64)>> = vec![Vec::new(); d];
        let mut big = false;
        let mut flagged = false;
        for &n in &ns {
            let (values, clamped) = masked_schedule(v, &support, n, caps);
            let starts: Vec<(usize, Vec<u64>)> = (0..restricted.num_states())
                .map(|s| (s, values.clone()))
                .collect();
            let outcome = explore_demonic_max(&restricted, &starts, caps);
            if clamped || outcome.saturated || outcome.budget_exhausted {
                flagged = true;
                break; // values from here on are lower bounds, not exact
            }
            if outcome.visited >= ESTIMATE_VISIT_GUARD {
                big = true;
            }
            for (series, &peak) in per.iter_mut().zip(&outcome.per_counter_max) {
                series.push((n, peak));
            }
        }
        let clean = per[0].len();
        if clean < 2 {
            // Not even two exact measurements: fall back to the entry degrees
            // rather than fitting noise.
            return entry_fallback(false);
        }
        let fits: Vec<(u32, bool)> = (0..d)
            .map(|i| {
                if !support[i] {
                    // Inert: keeps the entry value exactly.
                    (v[i].degree().unwrap_or(0), true)
                } else {
                    let (k, stable) = fit_exponent(&per[i]);
                    if flagged {
                        // Larger n would saturate as well; keep the fit over
                        // the exact prefix but call it settled only if the
                        // prefix already was.
                        (k, stable && clean >= 3)
                    } else {
                        (k, stable)
                    }
                }
            })
            .collect();
        let settled = (0..d)
            .filter(|&i| support[i] && v[i] != GrowthExponent::Inf)
            .all(|i| fits[i].1);
        let last = ns.last().copied().unwrap_or(0);
        if flagged || settled || big || last >= ESTIMATE_MAX_N {
            return fits;
        }
        ns.push(last * 2);
    }
}

/// Single-counter convenience form of [`estimate_exponents`].
pub fn estimate_exponent(
    scc: &CounterVass,
    v: &[GrowthExponent],
    counter: usize,
    caps: &OracleCaps,
) -> (u32, bool) {
    assert!(
        v[counter] != GrowthExponent::Inf,
        "cannot estimate an infinite component"
    );
    estimate_exponents(scc, v, caps)[counter]
}

/// The one-component growth update: entering the component with values
/// `n^{v(i)}`, returns the asymptotic counter values reachable when leaving
/// it (or staying inside). Infinite entries stay infinite, covered counters
/// become infinite, and the rest get their estimated polynomial degree, never
/// below the entry degree (values are never lost, only grown).
pub fn growth_step(scc: &CounterVass, v: &[GrowthExponent], caps: &OracleCaps) -> GrowthVector {
    assert_eq!(v.len(), scc.dim(), "growth vector dimension mismatch");
    if scc.transitions.is_empty() {
        return v.to_vec();
    }
    let analysis = exp_counters(scc, v);
    let estimates = estimate_exponents(scc, v, caps);
    v.iter()
        .enumerate()
        .map(|(i, &g)| match g {
            GrowthExponent::Inf => GrowthExponent::Inf,
            GrowthExponent::Poly(entry) => {
                if analysis.exponential.contains(&i) {
                    GrowthExponent::Inf
                } else {
                    GrowthExponent::Poly(estimates[i].0.max(entry))
                }
            }
        })
        .collect()
}

/// Embeds the component behind a pumping preamble that raises counter `i`
/// from `n` to `n^{v(i)}`, yielding a single machine started from plain `n`
/// values.
///
/// The preamble is a generated pumping machine whose output counters are
/// identified with the component's counters. Bridges connect the preamble's
/// exit to every component state and every component state back to the
/// preamble's entry, each crossing paying `m = max(1, |Q|·M)` from every
/// counter (`M` the component's largest update magnitude), so crossings cost
/// a constant per use. The machine starts at the preamble's entry.
pub fn lift_with_pumper(scc: &CounterVass, v: &[GrowthExponent]) -> CounterVass {
    let degrees: Vec<u32> = v
        .iter()
        .map(|g| {
            g.degree()
                .expect("lift requires finite growth components")
        })
        .collect();
    assert!(
        degrees.iter().all(|&k| k >= 1),
        "lift requires degrees >= 1"
    );
    let pump = crate::generators::gen_pumper(&degrees);
    let d = scc.dim();

    // Counters: the component's, then the pump's internals (outputs of the
    // pump are identified with the component counters).
    let mut counters = scc.counters.clone();
    let mut pump_counter_map: Vec<usize> = vec![usize::MAX; pump.vass.dim()];
    for (i, &out) in pump.outputs.iter().enumerate() {
        pump_counter_map[out] = i;
    }
    for (pc, name) in pump.vass.counters.iter().enumerate() {
        if pump_counter_map[pc] == usize::MAX {
            let existing: std::collections::HashSet<&str> =
                counters.iter().map(|c| c.as_str()).collect();
            let fresh = crate::model::fresh_name(&existing, name);
            pump_counter_map[pc] = counters.len();
            counters.push(fresh);
        }
    }
    let full = counters.len();

    let mut states = scc.states.clone();
    let mut state_names: std::collections::HashSet<String> =
        states.iter().map(|s| s.name.clone()).collect();
    let mut pump_state_map: Vec<usize> = Vec::with_capacity(pump.vass.num_states());
    for s in &pump.vass.states {
        let base = format!("pump_{}", s.name);
        let existing: std::collections::HashSet<&str> =
            state_names.iter().map(|n| n.as_str()).collect();
        let name = crate::model::fresh_name(&existing, &base);
        state_names.insert(name.clone());
        pump_state_map.push(states.len());
        states.push(State {
            name,
            player: Player::Demonic,
        });
    }

    let mut transitions = Vec::new();
    for t in &scc.transitions {
        let mut update = vec![0i64; full];
        update[..d].copy_from_slice(&t.update);
        transitions.push(Transition {
            src: t.src,
            update,
            dst: t.dst,
        });
    }
    for t in &pump.vass.transitions {
        let mut update = vec![0i64; full];
        for (pc, &u) in t.update.iter().enumerate() {
            update[pump_counter_map[pc]] = u;
        }
        transitions.push(Transition {
            src: pump_state_map[t.src],
            update,
            dst: pump_state_map[t.dst],
        });
    }
    let m = (scc.num_states() as i64 * scc.max_update_magnitude()).max(1);
    let toll = vec![-m; full];
    let entry = pump_state_map[pump.entry];
    let exit = pump_state_map[pump.exit];
    for p in 0..scc.num_states() {
        transitions.push(Transition {
            src: exit,
            update: toll.clone(),
            dst: p,
        });
        transitions.push(Transition {
            src: p,
            update: toll.clone(),
            dst: entry,
        });
    }

    CounterVass {
        counters,
        states,
        transitions,
        initial: Some(vec![entry]),
    }
}
