//! Asymptotic complexity analysis for vector addition systems with states.
//!
//! A machine here is a VASS whose states are owned by two players: demonic
//! states maximize and angelic states minimize. Runs start from a
//! configuration with every counter at `n` and stop when no transition can
//! be taken without driving a counter negative. For a machine `A`, the
//! library bounds — as functions of `n` — the worst-case termination length
//! `L(n)` and the worst-case peak `C[c](n)` of a chosen counter `c`,
//! classifying each as `Θ(n^k)` for a concrete `k` or as exponential.
//!
//! The pipeline:
//!
//! * [`model`] — machines, configurations, and normalizations (step
//!   counters, angelic update splitting, dead-state sealing).
//! * [`lp`] — exact rational feasibility via a phase-one simplex; all
//!   pumping certificates are checked in exact arithmetic.
//! * [`growth`] — per-component growth: which counters a strongly connected
//!   component can pump to exponential (certified by circulation witnesses)
//!   and the polynomial degrees of the rest.
//! * [`decomp`] — SCC condensation, the demonic-class decomposition of game
//!   machines, and the locking unfolding that reduces a game to a DAG of
//!   single-player analyses.
//! * [`analysis`] — growth-vector propagation across the condensation for
//!   purely demonic machines, with replayable lower-bound witnesses.
//! * [`game`] — optimal values of two-player machines over the locking
//!   unfolding, plus strategy synthesis and the demonic machine a fixed
//!   strategy induces.
//! * [`oracle`] — an exact small-`n` simulator (demonic maximization and
//!   two-player game tables) used to cross-validate symbolic verdicts.
//! * [`program`] / [`generators`] — a small straight-line gadget language
//!   (multiplication, copy, min, branching) and machine families built from
//!   CNF/QBF inputs whose asymptotics encode satisfiability questions.
//! * [`textfmt`] / [`report`] — a plain-text machine format and
//!   schema-versioned JSON reports.
//! * [`par`] — sequential/parallel execution of analysis batches.

pub mod analysis;
pub mod decomp;
pub mod game;
pub mod generators;
pub mod growth;
pub mod lp;
pub mod model;
pub mod oracle;
pub mod par;
pub mod program;
pub mod report;
pub mod textfmt;

pub use analysis::{analyze_counter, analyze_length, compute_vect, query_counter, AnalysisOptions};
pub use growth::{GrowthExponent, GrowthVector};
pub use model::{Configuration, CounterVass, Player, State, Transition};
pub use oracle::{Measure, OracleCaps};
