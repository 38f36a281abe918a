//! Command-line front end for the analysis library.
//!
//! Subcommands: `analyze` (demonic machines), `decide-game` and `strategy`
//! (two-player machines), `decompose` (SCC / demonic-class / locking views,
//! optionally as DOT), `simulate` and `estimate` (exact small-`n` runs), and
//! `gen` (machine families from CNF/QBF formulas and fixed shapes).
//!
//! Exit codes: `0` on success (and positive verdicts), `1` when a requested
//! bound does not hold, `2` on input or usage errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use polyvass::analysis::{analyze_counter, analyze_length, AnalysisOptions};
use polyvass::decomp::{
    demonic_decomposition, demonic_to_dot, locking_decomposition, locking_to_dot, scc_dag,
    scc_dag_to_dot,
};
use polyvass::game::{analyze_game, decide_game, induced_machine, synthesize_strategy, GameTarget};
use polyvass::generators::{
    gen_example1, gen_pumper, gen_qbf, gen_sat, gen_satunsat_counter, gen_satunsat_length,
    parse_dimacs, parse_qdimacs,
};
use polyvass::model::{CounterVass, Player};
use polyvass::oracle::{explore_demonic_max, fit_exponent, Measure, OracleCaps};
use polyvass::report::{oracle_check, summarize, witness_report, AnalysisReport, VerdictReport};
use polyvass::textfmt::{emit_vass, parse_vass};

#[derive(Parser)]
#[command(
    name = "polyvass",
    version,
    about = "Asymptotic run-length and counter-peak analysis of two-player counter machines"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Bound the growth of a purely demonic machine against n^degree.
    Analyze(AnalyzeArgs),
    /// Decide the optimal growth of a two-player machine against n^degree.
    DecideGame(DecideGameArgs),
    /// Print a decomposition of the machine.
    Decompose(DecomposeArgs),
    /// Run the exact small-n simulator; CSV `n,state,value` on stdout.
    Simulate(SimulateArgs),
    /// Fit a polynomial degree from doubling-n measurements.
    Estimate(EstimateArgs),
    /// Generate a machine and print it in the text format.
    #[command(subcommand)]
    Gen(GenCmd),
    /// Synthesize an optimal controller strategy for a two-player machine.
    Strategy(StrategyArgs),
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Machine in the plain-text format.
    input: PathBuf,
    /// `length` or `counter:<name>`.
    #[arg(long, default_value = "length")]
    target: String,
    /// Polynomial degree to test the target against.
    #[arg(long)]
    degree: u32,
    /// Emit a JSON report instead of text.
    #[arg(long)]
    json: bool,
    /// Cross-check the verdict with the exact simulator at n = 2,4,8,16.
    #[arg(long)]
    oracle: bool,
}

#[derive(Args)]
struct DecideGameArgs {
    input: PathBuf,
    /// `length` or `counter:<name>`.
    #[arg(long, default_value = "length")]
    target: String,
    #[arg(long)]
    degree: u32,
    #[arg(long)]
    json: bool,
    /// Vertex budget for the locking unfolding.
    #[arg(long, default_value_t = 100_000)]
    budget: usize,
}

#[derive(Args)]
struct DecomposeArgs {
    input: PathBuf,
    /// Which view: `scc`, `demonic`, or `locking`.
    #[arg(long, default_value = "scc")]
    kind: String,
    /// Emit Graphviz DOT instead of a text summary.
    #[arg(long)]
    dot: bool,
    /// Vertex budget for the locking unfolding.
    #[arg(long, default_value_t = 100_000)]
    budget: usize,
}

#[derive(Args)]
struct SimulateArgs {
    input: PathBuf,
    /// `length` or `counter:<name>`.
    #[arg(long, default_value = "length")]
    target: String,
    /// Comma-separated list of initial counter values.
    #[arg(long, default_value = "2,4,8", value_delimiter = ',')]
    ns: Vec<u64>,
    /// Stop counting past this value and report saturation.
    #[arg(long, default_value_t = 1 << 30)]
    value_cap: u64,
    /// Abort exploration past this many antichain insertions.
    #[arg(long, default_value_t = 1_000_000)]
    visit_budget: usize,
}

#[derive(Args)]
struct EstimateArgs {
    input: PathBuf,
    /// `length` or `counter:<name>`.
    #[arg(long, default_value = "length")]
    target: String,
    /// Comma-separated doubling schedule.
    #[arg(long, default_value = "2,4,8,16", value_delimiter = ',')]
    ns: Vec<u64>,
    #[arg(long, default_value_t = 1 << 30)]
    value_cap: u64,
    #[arg(long, default_value_t = 1_000_000)]
    visit_budget: usize,
}

#[derive(Subcommand)]
enum GenCmd {
    /// Demonic machine whose growth separates satisfiable from unsatisfiable.
    Sat {
        /// CNF in DIMACS format.
        cnf: PathBuf,
        /// Base degree k (>= 2): length is Θ(n^(k+1)) iff satisfiable, else Θ(n^k).
        #[arg(long, default_value_t = 2)]
        degree: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Pair construction: length is Θ(n^k) exactly when phi is satisfiable
    /// and psi is not.
    SatunsatLength {
        phi: PathBuf,
        psi: PathBuf,
        /// Degree k (>= 3).
        #[arg(long, default_value_t = 3)]
        degree: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Pair construction: counter `c` peaks at Θ(n^k) exactly when phi is
    /// satisfiable and psi is not.
    SatunsatCounter {
        phi: PathBuf,
        psi: PathBuf,
        /// Degree k (>= 2).
        #[arg(long, default_value_t = 2)]
        degree: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Two-player machine whose optimal length separates valid from invalid
    /// ∀∃ formulas.
    Qbf {
        /// Prenex 2-QBF in QDIMACS format (alternating a/e blocks).
        qdimacs: PathBuf,
        /// Base degree k (>= 2).
        #[arg(long, default_value_t = 2)]
        degree: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Demonic machine pumping counter ci to Θ(n^di) for each listed degree.
    Pumper {
        /// Comma-separated degrees, one output counter per entry.
        #[arg(value_delimiter = ',')]
        degrees: Vec<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fixed quadratic-length example: a four-phase transfer loop.
    Example1 {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct StrategyArgs {
    input: PathBuf,
    /// `length` or `counter:<name>`.
    #[arg(long, default_value = "length")]
    target: String,
    /// Write the demonic machine induced by the strategy here.
    #[arg(long)]
    induced: Option<PathBuf>,
    #[arg(long, default_value_t = 100_000)]
    budget: usize,
}

fn main() -> ExitCode {
    // Die quietly when stdout is a pipe that closes early (`… | head`);
    // Rust ignores SIGPIPE by default, turning that into a panic.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run() -> Result<ExitCode> {
    match Cli::parse().cmd {
        Cmd::Analyze(args) => cmd_analyze(args),
        Cmd::DecideGame(args) => cmd_decide_game(args),
        Cmd::Decompose(args) => cmd_decompose(args),
        Cmd::Simulate(args) => cmd_simulate(args),
        Cmd::Estimate(args) => cmd_estimate(args),
        Cmd::Gen(args) => cmd_gen(args),
        Cmd::Strategy(args) => cmd_strategy(args),
    }
}

fn load_machine(path: &Path) -> Result<CounterVass> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let vass =
        parse_vass(&text).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))?;
    let problems = vass.validate();
    if !problems.is_empty() {
        bail!("{}: invalid machine: {}", path.display(), problems.join("; "));
    }
    Ok(vass)
}

fn is_purely_demonic(vass: &CounterVass) -> bool {
    vass.states.iter().all(|s| s.player == Player::Demonic)
}

enum TargetSpec {
    Length,
    Counter(usize),
}

fn parse_target(vass: &CounterVass, target: &str) -> Result<TargetSpec> {
    if target == "length" {
        return Ok(TargetSpec::Length);
    }
    if let Some(name) = target.strip_prefix("counter:") {
        let idx = vass
            .counter_index(name)
            .with_context(|| format!("machine has no counter `{name}`"))?;
        return Ok(TargetSpec::Counter(idx));
    }
    bail!("bad target `{target}`: expected `length` or `counter:<name>`");
}

/// Rejects degrees beyond the `2^(d·|Q|)` ceiling on finite polynomial
/// growth; asking about such a degree is always a mistake.
fn check_degree(vass: &CounterVass, degree: u32) -> Result<()> {
    if degree == 0 {
        bail!("degree must be at least 1");
    }
    let bits = (vass.dim() as u64).saturating_mul(vass.num_states() as u64);
    if bits < 31 && u64::from(degree) > 1u64 << bits {
        bail!(
            "degree {degree} exceeds 2^(counters x states) = {}; finite growth never does",
            1u64 << bits
        );
    }
    Ok(())
}

fn exit_for(theta: bool) -> ExitCode {
    if theta {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<ExitCode> {
    let vass = load_machine(&args.input)?;
    if !is_purely_demonic(&vass) {
        bail!("`analyze` handles purely demonic machines; use `decide-game` for controller states");
    }
    check_degree(&vass, args.degree)?;
    let opts = AnalysisOptions::default();
    let target = parse_target(&vass, &args.target)?;

    let (kind, target_name, table, machine, outcome) = match target {
        TargetSpec::Length => {
            let a = analyze_length(&vass, args.degree, &opts);
            (
                "demonic-length",
                "length".to_string(),
                a.table,
                a.machine,
                a.outcome,
            )
        }
        TargetSpec::Counter(c) => {
            let a = analyze_counter(&vass, c, args.degree, &opts);
            (
                "demonic-counter",
                format!("counter:{}", vass.counters[c]),
                a.table,
                vass.clone(),
                a.outcome,
            )
        }
    };

    let verdict = VerdictReport {
        degree: args.degree,
        lower: outcome.lower,
        upper: outcome.upper,
        theta: outcome.theta,
        asymptotics: outcome.max.to_string(),
    };
    let mut report = AnalysisReport::new(kind, target_name, summarize(&vass), verdict);
    report.truncated = table.truncated;
    report.witness = outcome
        .witness
        .as_ref()
        .map(|w| witness_report(&machine, &table.dag, w));
    if args.oracle {
        let measure = match target {
            TargetSpec::Length => Measure::Length,
            TargetSpec::Counter(c) => Measure::Counter(c),
        };
        report.oracle = Some(oracle_check(
            &vass,
            measure,
            outcome.max,
            &[2, 4, 8, 16],
            OracleCaps::default(),
        ));
    }

    if args.json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        println!("target: {}", report.target);
        println!("growth: {}", report.verdict.asymptotics);
        println!(
            "n^{} lower: {}  upper: {}  theta: {}",
            args.degree,
            yn(report.verdict.lower),
            yn(report.verdict.upper),
            yn(report.verdict.theta)
        );
        if report.truncated {
            println!("note: growth table truncated by budget; bounds may be incomplete");
        }
        if let Some(oracle) = &report.oracle {
            println!(
                "oracle: fitted n^{} (stable: {}, saturated: {}, consistent: {})",
                oracle.fitted_degree,
                yn(oracle.stable),
                yn(oracle.saturated),
                yn(oracle.consistent)
            );
        }
    }
    Ok(exit_for(outcome.theta))
}

fn yn(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn cmd_decide_game(args: DecideGameArgs) -> Result<ExitCode> {
    let vass = load_machine(&args.input)?;
    check_degree(&vass, args.degree)?;
    let target = match parse_target(&vass, &args.target)? {
        TargetSpec::Length => GameTarget::Length,
        TargetSpec::Counter(c) => GameTarget::Counter(c),
    };
    let opts = AnalysisOptions {
        lock_budget: args.budget,
        ..AnalysisOptions::default()
    };
    let decision = decide_game(&vass, target, args.degree, &opts)
        .map_err(|e| anyhow::anyhow!("locking unfolding: {e}"))?;

    let verdict = VerdictReport {
        degree: args.degree,
        lower: decision.lower,
        upper: decision.upper,
        theta: decision.theta,
        asymptotics: decision.analysis.optimal.to_string(),
    };
    let kind = match target {
        GameTarget::Length => "game-length",
        GameTarget::Counter(_) => "game-counter",
    };
    let report = AnalysisReport::new(kind, args.target.clone(), summarize(&vass), verdict);

    if args.json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        println!("target: {}", report.target);
        println!("optimal growth: {}", report.verdict.asymptotics);
        println!(
            "n^{} lower: {}  upper: {}  theta: {}",
            args.degree,
            yn(report.verdict.lower),
            yn(report.verdict.upper),
            yn(report.verdict.theta)
        );
    }
    Ok(exit_for(decision.theta))
}

fn cmd_decompose(args: DecomposeArgs) -> Result<ExitCode> {
    let vass = load_machine(&args.input)?;
    let out = match args.kind.as_str() {
        "scc" => {
            let dag = scc_dag(&vass);
            if args.dot {
                scc_dag_to_dot(&vass, &dag)
            } else {
                let mut s = String::new();
                for (i, comp) in dag.components.iter().enumerate() {
                    let names: Vec<&str> =
                        comp.iter().map(|&q| vass.states[q].name.as_str()).collect();
                    let succ: Vec<String> =
                        dag.edges[i].iter().map(|e| e.to_string()).collect();
                    s.push_str(&format!(
                        "component {i}: {{{}}} -> [{}]\n",
                        names.join(" "),
                        succ.join(" ")
                    ));
                }
                s
            }
        }
        "demonic" => {
            let d = demonic_decomposition(&vass);
            if args.dot {
                demonic_to_dot(&vass, &d)
            } else {
                let mut s = String::new();
                for (i, class) in d.classes.iter().enumerate() {
                    let names: Vec<&str> =
                        class.iter().map(|&q| vass.states[q].name.as_str()).collect();
                    s.push_str(&format!("class {i}: {{{}}}\n", names.join(" ")));
                }
                s
            }
        }
        "locking" => {
            let dag = locking_decomposition(&vass, args.budget)
                .map_err(|e| anyhow::anyhow!("locking unfolding: {e}"))?;
            if args.dot {
                locking_to_dot(&vass, &dag)
            } else {
                let mut s = format!(
                    "{} vertices, {} roots, longest-path degree bound {}\n",
                    dag.vertices.len(),
                    dag.roots.len(),
                    dag.path_degree()
                );
                for (i, v) in dag.vertices.iter().enumerate() {
                    let names: Vec<&str> = v
                        .class
                        .iter()
                        .map(|&q| vass.states[q].name.as_str())
                        .collect();
                    let succ: Vec<String> =
                        dag.edges[i].iter().map(|e| e.to_string()).collect();
                    s.push_str(&format!(
                        "vertex {i}{}: {{{}}} locks={:?} -> [{}]\n",
                        if v.angelic { " (controller)" } else { "" },
                        names.join(" "),
                        v.lock,
                        succ.join(" ")
                    ));
                }
                s
            }
        }
        other => bail!("unknown decomposition kind `{other}` (scc, demonic, locking)"),
    };
    print!("{out}");
    Ok(ExitCode::SUCCESS)
}

fn oracle_caps(value_cap: u64, visit_budget: usize) -> OracleCaps {
    OracleCaps {
        value_cap,
        visit_budget,
    }
}

fn measured_values(
    vass: &CounterVass,
    target: &TargetSpec,
    ns: &[u64],
    caps: &OracleCaps,
) -> Result<Vec<(u64, Vec<(String, u64)>, bool)>> {
    if !is_purely_demonic(vass) {
        bail!("simulation handles purely demonic machines; use `decide-game` for controller states");
    }
    let mut rows = Vec::new();
    for &n in ns {
        if n == 0 {
            bail!("n must be positive");
        }
        let mut per_state = Vec::new();
        let mut saturated = false;
        for s in vass.start_states() {
            let outcome = explore_demonic_max(vass, &[(s, vec![n; vass.dim()])], caps);
            let value = match target {
                TargetSpec::Length => outcome.max_length,
                TargetSpec::Counter(c) => outcome.per_counter_max[*c],
            };
            saturated |= outcome.saturated || outcome.budget_exhausted;
            per_state.push((vass.states[s].name.clone(), value));
        }
        rows.push((n, per_state, saturated));
    }
    Ok(rows)
}

fn cmd_simulate(args: SimulateArgs) -> Result<ExitCode> {
    let vass = load_machine(&args.input)?;
    let target = parse_target(&vass, &args.target)?;
    let caps = oracle_caps(args.value_cap, args.visit_budget);
    let rows = measured_values(&vass, &target, &args.ns, &caps)?;
    println!("n,state,value");
    for (n, per_state, saturated) in &rows {
        for (state, value) in per_state {
            println!("{n},{state},{value}");
        }
        if *saturated {
            eprintln!("warning: n={n} hit the value cap or visit budget");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_estimate(args: EstimateArgs) -> Result<ExitCode> {
    let vass = load_machine(&args.input)?;
    let target = parse_target(&vass, &args.target)?;
    if args.ns.len() < 2 {
        bail!("need at least two sample sizes to fit a degree");
    }
    let caps = oracle_caps(args.value_cap, args.visit_budget);
    let rows = measured_values(&vass, &target, &args.ns, &caps)?;
    let points: Vec<(u64, u64)> = rows
        .iter()
        .map(|(n, per_state, _)| {
            (*n, per_state.iter().map(|(_, v)| *v).max().unwrap_or(0))
        })
        .collect();
    let saturated = rows.iter().any(|(_, _, s)| *s);
    let (degree, stable) = fit_exponent(&points);
    for (n, v) in &points {
        println!("n={n} value={v}");
    }
    println!(
        "fitted degree: {degree} ({}{})",
        if stable { "stable" } else { "unstable" },
        if saturated { ", saturated" } else { "" }
    );
    Ok(ExitCode::SUCCESS)
}

fn load_cnf(path: &Path) -> Result<polyvass::generators::CnfFormula> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_dimacs(&text).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))
}

fn write_machine(vass: &CounterVass, out: Option<&Path>) -> Result<()> {
    let text = emit_vass(vass);
    match out {
        Some(path) => fs::write(path, text)
            .with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn cmd_gen(cmd: GenCmd) -> Result<ExitCode> {
    match cmd {
        GenCmd::Sat { cnf, degree, out } => {
            if degree < 2 {
                bail!("degree must be at least 2");
            }
            let formula = load_cnf(&cnf)?;
            write_machine(&gen_sat(&formula, degree), out.as_deref())?;
        }
        GenCmd::SatunsatLength {
            phi,
            psi,
            degree,
            out,
        } => {
            if degree < 3 {
                bail!("degree must be at least 3");
            }
            let phi = load_cnf(&phi)?;
            let psi = load_cnf(&psi)?;
            write_machine(&gen_satunsat_length(&phi, &psi, degree), out.as_deref())?;
        }
        GenCmd::SatunsatCounter {
            phi,
            psi,
            degree,
            out,
        } => {
            if degree < 2 {
                bail!("degree must be at least 2");
            }
            let phi = load_cnf(&phi)?;
            let psi = load_cnf(&psi)?;
            write_machine(&gen_satunsat_counter(&phi, &psi, degree), out.as_deref())?;
        }
        GenCmd::Qbf {
            qdimacs,
            degree,
            out,
        } => {
            if degree < 2 {
                bail!("degree must be at least 2");
            }
            let text = fs::read_to_string(&qdimacs)
                .with_context(|| format!("reading {}", qdimacs.display()))?;
            let formula = parse_qdimacs(&text)
                .map_err(|e| anyhow::anyhow!("{}: {e}", qdimacs.display()))?;
            write_machine(&gen_qbf(&formula, degree), out.as_deref())?;
        }
        GenCmd::Pumper { degrees, out } => {
            if degrees.is_empty() {
                bail!("need at least one degree");
            }
            if degrees.iter().any(|&d| d == 0) {
                bail!("degrees must be at least 1");
            }
            let mut pumper = gen_pumper(&degrees).vass;
            pumper.seal_dead_states();
            write_machine(&pumper, out.as_deref())?;
        }
        GenCmd::Example1 { out } => {
            write_machine(&gen_example1(), out.as_deref())?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_strategy(args: StrategyArgs) -> Result<ExitCode> {
    let vass = load_machine(&args.input)?;
    let target = match parse_target(&vass, &args.target)? {
        TargetSpec::Length => GameTarget::Length,
        TargetSpec::Counter(c) => GameTarget::Counter(c),
    };
    let opts = AnalysisOptions {
        lock_budget: args.budget,
        ..AnalysisOptions::default()
    };
    let analysis = analyze_game(&vass, target, &opts)
        .map_err(|e| anyhow::anyhow!("locking unfolding: {e}"))?;
    let strategy = synthesize_strategy(&analysis, &opts);
    // Write the induced machine before printing: stdout may be a pipe that
    // closes early, and the file is the durable artifact.
    if let Some(path) = &args.induced {
        let machine = induced_machine(&analysis, &strategy, &opts);
        write_machine(&machine, Some(path))?;
    }
    let doc = serde_json::json!({
        "optimal": analysis.optimal.to_string(),
        "strategy": strategy,
    });
    println!("{}", serde_json::to_string_pretty(&doc)?);
    Ok(ExitCode::SUCCESS)
}
