//! Machine-readable analysis reports.
//!
//! [`AnalysisReport`] is a schema-versioned JSON document bundling a digest
//! of the analyzed machine, the claimed asymptotic verdict, the witness path
//! that backs a lower bound, truncation flags from budgeted passes, and an
//! optional small-`n` simulation cross-check. Reports are plain serde
//! structures; [`SCHEMA_VERSION`] is bumped whenever their shape changes.

use serde::{Deserialize, Serialize};

use crate::analysis::PathWitness;
use crate::decomp::SccDag;
use crate::growth::{GrowthExponent, GrowthVector};
use crate::model::{CounterVass, Player};
use crate::oracle::{complexity_samples, fit_exponent, Measure, OracleCaps};
use crate::textfmt::emit_vass;

/// Version of the report layout.
pub const SCHEMA_VERSION: u32 = 1;

/// FNV-1a over the canonical text form; stable across runs and platforms.
fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Identifying facts about the analyzed machine.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MachineSummary {
    /// Hash of the canonical text form.
    pub digest: String,
    pub counters: Vec<String>,
    pub states: usize,
    /// Number of controller-owned (angelic) states.
    pub controller_states: usize,
    pub transitions: usize,
}

/// Summarizes a machine for inclusion in a report.
pub fn summarize(vass: &CounterVass) -> MachineSummary {
    MachineSummary {
        digest: format!("{:016x}", fnv1a(emit_vass(vass).as_bytes())),
        counters: vass.counters.clone(),
        states: vass.num_states(),
        controller_states: vass
            .states
            .iter()
            .filter(|s| s.player == Player::Angelic)
            .count(),
        transitions: vass.transitions.len(),
    }
}

/// The asymptotic claim for one target against a polynomial degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictReport {
    /// Degree the bounds were checked against.
    pub degree: u32,
    /// Does `n^degree` lower-bound the target (up to constants)?
    pub lower: bool,
    /// Does `n^degree` upper-bound the target?
    pub upper: bool,
    /// Tight bound: both of the above.
    pub theta: bool,
    /// Best growth found, rendered as `n^k` or `exp`.
    pub asymptotics: String,
}

fn render(v: &GrowthVector) -> Vec<String> {
    v.iter().map(|e| e.to_string()).collect()
}

/// A component path certifying a lower bound, with state names resolved.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessReport {
    /// States of each component along the path.
    pub components: Vec<Vec<String>>,
    /// Entry growth vector fed into each component.
    pub entries: Vec<Vec<String>>,
    /// Resulting growth vector after each component.
    pub results: Vec<Vec<String>>,
}

/// Resolves a [`PathWitness`] against the condensation it was traced in.
pub fn witness_report(vass: &CounterVass, dag: &SccDag, w: &PathWitness) -> WitnessReport {
    WitnessReport {
        components: w
            .components
            .iter()
            .map(|&c| {
                dag.components[c]
                    .iter()
                    .map(|&s| vass.states[s].name.clone())
                    .collect()
            })
            .collect(),
        entries: w.entries.iter().map(render).collect(),
        results: w.results.iter().map(render).collect(),
    }
}

/// Small-`n` measurements compared against the claimed growth.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleCheck {
    pub ns: Vec<u64>,
    pub values: Vec<u64>,
    /// Degree fitted from successive doublings.
    pub fitted_degree: u32,
    /// Whether the fit had settled.
    pub stable: bool,
    /// Whether any sample hit the value cap or the visit budget.
    pub saturated: bool,
    /// Whether the measurements corroborate the claim (see [`oracle_check`]).
    pub consistent: bool,
}

/// Runs the exact small-`n` oracle on a purely demonic machine and compares
/// the measurements with `claimed`.
///
/// A polynomial claim `n^k` is corroborated by a stable, unsaturated fit of
/// the same degree. An `exp` claim is corroborated by saturation or by the
/// last doubling growing faster than any fixed small power (ratio above 8,
/// i.e. past cubic).
pub fn oracle_check(
    vass: &CounterVass,
    measure: Measure,
    claimed: GrowthExponent,
    ns: &[u64],
    caps: OracleCaps,
) -> OracleCheck {
    let samples = complexity_samples(vass, ns, &caps);
    let values: Vec<u64> = samples
        .iter()
        .map(|s| match measure {
            Measure::Length => s.max_length,
            Measure::Counter(c) => s.per_counter_max[c],
        })
        .collect();
    let saturated = samples.iter().any(|s| s.saturated || s.budget_exhausted);
    let points: Vec<(u64, u64)> = ns.iter().copied().zip(values.iter().copied()).collect();
    let (fitted_degree, stable) = fit_exponent(&points);
    let ratio = match values.as_slice() {
        [.., a, b] if *a > 0 => *b as f64 / *a as f64,
        _ => 0.0,
    };
    let consistent = match claimed {
        GrowthExponent::Poly(k) => stable && !saturated && fitted_degree == k,
        GrowthExponent::Inf => saturated || ratio > 8.0,
    };
    OracleCheck {
        ns: ns.to_vec(),
        values,
        fitted_degree,
        stable,
        saturated,
        consistent,
    }
}

/// Top-level report for one analysis run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub schema_version: u32,
    /// `demonic` or `game`, crossed with the target kind.
    pub kind: String,
    /// `length` or `counter:<name>`.
    pub target: String,
    pub machine: MachineSummary,
    pub verdict: VerdictReport,
    /// Lower-bound witness, when one was requested and found.
    pub witness: Option<WitnessReport>,
    /// Whether any budgeted pass dropped information.
    pub truncated: bool,
    /// Simulation cross-check, when one was run.
    pub oracle: Option<OracleCheck>,
}

impl AnalysisReport {
    pub fn new(
        kind: impl Into<String>,
        target: impl Into<String>,
        machine: MachineSummary,
        verdict: VerdictReport,
    ) -> Self {
        AnalysisReport {
            schema_version: SCHEMA_VERSION,
            kind: kind.into(),
            target: target.into(),
            machine,
            verdict,
            witness: None,
            truncated: false,
            oracle: None,
        }
    }
}
