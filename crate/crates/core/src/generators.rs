//! Generators for machines with known asymptotic behavior.
//!
//! The constructions embed Boolean satisfiability questions into counter
//! machines so that the machine's asymptotic length or counter growth
//! switches between polynomial degrees depending on satisfiability:
//!
//! - [`gen_sat`]: a 3-CNF formula and a degree `k ≥ 2` yield a demonic
//!   machine whose length is `Θ(n^{k+1})` iff the formula is satisfiable and
//!   `Θ(n^k)` otherwise; a distinguished counter peaks at `Θ(n^k)` vs `Θ(n)`.
//!   A multiplication chain pumps a counter to `n^k`, the adversary commits
//!   to an assignment by pumping one literal counter per variable, and a
//!   cascade of minimum gadgets leaves the clause counter large iff every
//!   clause has a pumped literal.
//! - [`gen_satunsat_length`] / [`gen_satunsat_counter`]: two formulas
//!   combined so that one specific degree is hit exactly when the first is
//!   satisfiable and the second is not — the degree that witnesses hardness
//!   of deciding `Θ(n^k)` membership.
//! - [`gen_qbf`]: a quantified formula `∀x₁∃y₁…` yields a two-player
//!   machine (the controller owns the universal choices) whose optimal
//!   length is `Θ(n^{k+1})` iff the formula is valid.
//! - [`gen_pumper`]: a machine that raises counter `i` from `n` to
//!   `Θ(n^{v_i})` by repeated squaring (`log₂ max v` multiplications) and
//!   per-target bit recombination.
//! - [`gen_example1`]: a small hand-written machine with quadratic length
//!   but only linear counter growth, useful for calibration.
//!
//! Generated machines are sealed: states that would have no outgoing
//! transition get a self-loop draining a fresh `halt` counter, preserving
//! every asymptotic class while keeping the machine total.

use serde::{Deserialize, Serialize};

use crate::model::{CounterVass, Player, State, Transition};
use crate::program::{compile_program, ProgramAst, Stmt};

/// A 3-CNF formula: clauses of exactly three nonzero literals over variables
/// `1..=num_vars` (negative literal = negated variable).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CnfFormula {
    pub num_vars: usize,
    pub clauses: Vec<[i32; 3]>,
}

impl CnfFormula {
    pub fn new(num_vars: usize, clauses: Vec<[i32; 3]>) -> Result<Self, String> {
        let formula = CnfFormula { num_vars, clauses };
        formula.validate()?;
        Ok(formula)
    }

    fn validate(&self) -> Result<(), String> {
        for clause in &self.clauses {
            for &lit in clause {
                if lit == 0 || lit.unsigned_abs() as usize > self.num_vars {
                    return Err(format!("literal {lit} out of range"));
                }
            }
        }
        Ok(())
    }

    /// Brute-force satisfiability (for fixture-sized formulas).
    pub fn is_satisfiable(&self) -> bool {
        assert!(self.num_vars <= 24, "brute force is for small formulas");
        (0u64..1 << self.num_vars).any(|assignment| {
            self.clauses.iter().all(|clause| {
                clause.iter().any(|&lit| {
                    let var = lit.unsigned_abs() as usize;
                    (assignment >> (var - 1)) & 1 == u64::from(lit > 0)
                })
            })
        })
    }
}

/// The canonical unsatisfiable fixture: all eight sign patterns over three
/// variables.
pub fn canonical_unsat() -> CnfFormula {
    let mut clauses = Vec::new();
    for bits in 0..8u8 {
        let lit = |v: i32, bit: u8| if bits >> bit & 1 == 0 { v } else { -v };
        clauses.push([lit(1, 0), lit(2, 1), lit(3, 2)]);
    }
    CnfFormula {
        num_vars: 3,
        clauses,
    }
}

/// A quantified Boolean formula `∀x₁∃y₁ ∀x₂∃y₂ … φ` with a 3-CNF matrix.
/// Variables are numbered `1..=2·num_pairs`: odd indices are the universal
/// `x_i`, even indices the existential `y_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QbfFormula {
    pub num_pairs: usize,
    pub clauses: Vec<[i32; 3]>,
}

impl QbfFormula {
    pub fn new(num_pairs: usize, clauses: Vec<[i32; 3]>) -> Result<Self, String> {
        for clause in &clauses {
            for &lit in clause {
                if lit == 0 || lit.unsigned_abs() as usize > 2 * num_pairs {
                    return Err(format!("literal {lit} out of range"));
                }
            }
        }
        Ok(QbfFormula { num_pairs, clauses })
    }

    /// Brute-force validity of the alternating prefix (for fixture sizes).
    pub fn is_valid(&self) -> bool {
        assert!(self.num_pairs <= 12, "brute force is for small formulas");
        fn go(f: &QbfFormula, depth: usize, assignment: &mut Vec<bool>) -> bool {
            if depth == 2 * f.num_pairs {
                return f.clauses.iter().all(|clause| {
                    clause.iter().any(|&lit| {
                        assignment[lit.unsigned_abs() as usize - 1] == (lit > 0)
                    })
                });
            }
            let universal = depth % 2 == 0;
            let mut result = universal;
            for value in [false, true] {
                assignment.push(value);
                let sub = go(f, depth + 1, assignment);
                assignment.pop();
                result = if universal { result && sub } else { result || sub };
            }
            result
        }
        go(self, 0, &mut Vec::new())
    }
}

fn decl(decls: &mut Vec<String>, name: String) -> String {
    decls.push(name.clone());
    name
}

/// Declares and emits the multiplication chain `d_2 ← d_1·e_1, …,
/// d_k ← d_{k−1}·e_{k−1}` pumping `d_k` to `n^k`. Returns the name of `d_k`.
fn chain(prefix: &str, k: u32, decls: &mut Vec<String>, body: &mut Vec<Stmt>) -> String {
    assert!(k >= 1);
    for j in 1..=k {
        decl(decls, format!("{prefix}d{j}"));
        if j < k {
            decl(decls, format!("{prefix}e{j}"));
        }
    }
    for j in 2..=k {
        body.push(Stmt::Mul {
            dst: format!("{prefix}d{j}"),
            x: format!("{prefix}d{}", j - 1),
            y: format!("{prefix}e{}", j - 1),
        });
    }
    format!("{prefix}d{k}")
}

fn literal_name(prefix: &str, lit: i32) -> String {
    if lit > 0 {
        format!("{prefix}x{lit}")
    } else {
        format!("{prefix}xb{}", -lit)
    }
}

/// Declares and emits the satisfiability core: the degree-`k` chain, one
/// adversarial assignment choice per variable, and a minimum cascade over
/// the clauses. Returns the name of the final clause counter (which peaks at
/// `Θ(n^k)` iff the formula is satisfiable, `Θ(n)` otherwise).
fn sat_core(
    cnf: &CnfFormula,
    k: u32,
    prefix: &str,
    decls: &mut Vec<String>,
    body: &mut Vec<Stmt>,
) -> String {
    assert!(k >= 2, "the construction needs a chain of degree >= 2");
    cnf.validate().expect("well-formed formula");
    let dk = chain(prefix, k, decls, body);
    for i in 1..=cnf.num_vars {
        let pos = decl(decls, format!("{prefix}x{i}"));
        let neg = decl(decls, format!("{prefix}xb{i}"));
        body.push(Stmt::Choose {
            player: Player::Demonic,
            branches: vec![
                vec![Stmt::Copy {
                    dst: pos,
                    src: dk.clone(),
                }],
                vec![Stmt::Copy {
                    dst: neg,
                    src: dk.clone(),
                }],
            ],
        });
    }
    let s0 = decl(decls, format!("{prefix}s0"));
    body.push(Stmt::Copy {
        dst: s0,
        src: dk.clone(),
    });
    for (c, clause) in cnf.clauses.iter().enumerate() {
        let prev = format!("{prefix}s{c}");
        let cur = decl(decls, format!("{prefix}s{}", c + 1));
        body.push(Stmt::Choose {
            player: Player::Demonic,
            branches: clause
                .iter()
                .map(|&lit| {
                    vec![Stmt::Min {
                        dst: cur.clone(),
                        kept: literal_name(prefix, lit),
                        consumed: prev.clone(),
                    }]
                })
                .collect(),
        });
    }
    format!("{prefix}s{}", cnf.clauses.len())
}

fn compile_sealed(decls: Vec<String>, body: Vec<Stmt>) -> CounterVass {
    let mut vass = compile_program(&ProgramAst { decls, body })
        .expect("generated program compiles")
        .vass;
    vass.seal_dead_states();
    vass
}

/// Satisfiability machine: length `Θ(n^{k+1})` iff `cnf` is satisfiable,
/// `Θ(n^k)` otherwise; the final clause counter (`s<m>`) peaks at `Θ(n^k)`
/// vs `Θ(n)`. Requires `k ≥ 2`.
pub fn gen_sat(cnf: &CnfFormula, k: u32) -> CounterVass {
    let mut decls = Vec::new();
    let mut body = Vec::new();
    let sm = sat_core(cnf, k, "", &mut decls, &mut body);
    let f = decl(&mut decls, "f".into());
    body.push(Stmt::MulByN { dst: f, src: sm });
    compile_sealed(decls, body)
}

/// Two-formula length machine, `k ≥ 3`: the optimal length is `Θ(n^k)`
/// exactly when `phi` is satisfiable and `psi` is not. The other cases give
/// `Θ(n^{2k−2})` (whenever `psi` is satisfiable) or `Θ(n^{max(2, k−1)})`
/// (both unsatisfiable).
pub fn gen_satunsat_length(phi: &CnfFormula, psi: &CnfFormula, k: u32) -> CounterVass {
    assert!(k >= 3, "degree separation needs k >= 3");
    let mut decls = Vec::new();
    let mut body = Vec::new();
    let p_sm = sat_core(phi, k - 1, "p_", &mut decls, &mut body);
    let q_sm = sat_core(psi, k - 1, "q_", &mut decls, &mut body);
    let a = decl(&mut decls, "a".into());
    let b = decl(&mut decls, "b".into());
    let c = decl(&mut decls, "c".into());
    let d = decl(&mut decls, "d".into());
    let e = decl(&mut decls, "e".into());
    let f = decl(&mut decls, "f".into());
    body.push(Stmt::Copy { dst: a.clone(), src: p_sm });
    body.push(Stmt::Copy { dst: b.clone(), src: q_sm.clone() });
    body.push(Stmt::Mul { dst: e, x: a, y: b });
    body.push(Stmt::Copy { dst: c.clone(), src: q_sm.clone() });
    body.push(Stmt::Copy { dst: d.clone(), src: q_sm });
    body.push(Stmt::Mul { dst: f, x: c, y: d });
    compile_sealed(decls, body)
}

/// Two-formula counter machine, `k ≥ 2`: counter `c` peaks at `Θ(n^k)`
/// exactly when `phi` is satisfiable and `psi` is not; `Θ(n^{k+1})` when
/// both are satisfiable, `Θ(n)` when `phi` is unsatisfiable.
pub fn gen_satunsat_counter(phi: &CnfFormula, psi: &CnfFormula, k: u32) -> CounterVass {
    assert!(k >= 2);
    let mut decls = Vec::new();
    let mut body = Vec::new();
    let p_sm = sat_core(phi, k + 1, "p_", &mut decls, &mut body);
    let q_sm = sat_core(psi, k + 1, "q_", &mut decls, &mut body);
    // A side chain pumping to n^{k−1} (for k = 2 it is just the initial n).
    let r = chain("r_", k - 1, &mut decls, &mut body);
    let a = decl(&mut decls, "a".into());
    let b = decl(&mut decls, "b".into());
    let c = decl(&mut decls, "c".into());
    body.push(Stmt::Copy { dst: a.clone(), src: p_sm });
    body.push(Stmt::Mul { dst: b.clone(), x: q_sm, y: r });
    body.push(Stmt::Min {
        dst: c,
        kept: a,
        consumed: b,
    });
    compile_sealed(decls, body)
}

/// Quantified-formula game, `k ≥ 2`: the controller owns the universal
/// choices, the adversary everything else. The optimal length under best
/// play from both sides is `Θ(n^{k+1})` iff `qbf` is valid, `Θ(n^k)`
/// otherwise; the final clause counter peaks at `Θ(n^k)` vs `Θ(n)`.
pub fn gen_qbf(qbf: &QbfFormula, k: u32) -> CounterVass {
    assert!(k >= 2);
    let mut decls = Vec::new();
    let mut body = Vec::new();
    let dk = chain("", k, &mut decls, &mut body);
    for i in 1..=qbf.num_pairs {
        for (base, player) in [("x", Player::Angelic), ("y", Player::Demonic)] {
            let pos = decl(&mut decls, format!("{base}{i}"));
            let neg = decl(&mut decls, format!("{base}b{i}"));
            body.push(Stmt::Choose {
                player,
                branches: vec![
                    vec![Stmt::Copy {
                        dst: pos,
                        src: dk.clone(),
                    }],
                    vec![Stmt::Copy {
                        dst: neg,
                        src: dk.clone(),
                    }],
                ],
            });
        }
    }
    let s0 = decl(&mut decls, "s0".into());
    body.push(Stmt::Copy {
        dst: s0,
        src: dk.clone(),
    });
    for (c, clause) in qbf.clauses.iter().enumerate() {
        let prev = format!("s{c}");
        let cur = decl(&mut decls, format!("s{}", c + 1));
        body.push(Stmt::Choose {
            player: Player::Demonic,
            branches: clause
                .iter()
                .map(|&lit| {
                    let var = lit.unsigned_abs();
                    let base = if var % 2 == 1 {
                        format!("x{}", var.div_ceil(2))
                    } else {
                        format!("y{}", var / 2)
                    };
                    let name = if lit > 0 {
                        base
                    } else {
                        let var = lit.unsigned_abs();
                        if var % 2 == 1 {
                            format!("xb{}", var.div_ceil(2))
                        } else {
                            format!("yb{}", var / 2)
                        }
                    };
                    vec![Stmt::Min {
                        dst: cur.clone(),
                        kept: name,
                        consumed: prev.clone(),
                    }]
                })
                .collect(),
        });
    }
    let sm = format!("s{}", qbf.clauses.len());
    let f = decl(&mut decls, "f".into());
    body.push(Stmt::MulByN { dst: f, src: sm });
    compile_sealed(decls, body)
}

/// A pumping machine and its interface points.
#[derive(Debug, Clone)]
pub struct Pumper {
    pub vass: CounterVass,
    /// Indices of the output counters `c_1, …` (one per requested degree).
    pub outputs: Vec<usize>,
    pub entry: usize,
    pub exit: usize,
}

/// Builds a machine raising output counter `i` from `n` to `Θ(n^{v_i})`:
/// repeated squaring produces `n^{2^j}` stages, and each output multiplies
/// together the stages of its degree's binary digits. Degrees must be ≥ 1.
/// The exit state is left open (no outgoing transitions) so the machine can
/// be embedded; seal it for standalone use.
pub fn gen_pumper(degrees: &[u32]) -> Pumper {
    assert!(!degrees.is_empty(), "at least one output");
    assert!(degrees.iter().all(|&v| v >= 1), "degrees must be >= 1");
    let levels = 31 - degrees.iter().max().unwrap().leading_zeros(); // floor(log2)
    let mut decls: Vec<String> = Vec::new();
    let mut body = Vec::new();
    let outputs: Vec<String> = (1..=degrees.len())
        .map(|i| decl(&mut decls, format!("c{i}")))
        .collect();
    if levels >= 1 {
        for j in 0..=levels {
            decl(&mut decls, format!("_pump_m{j}"));
        }
    }
    for i in 1..=degrees.len() {
        decl(&mut decls, format!("_pump_s{i}"));
    }
    for j in 1..=levels {
        body.push(Stmt::Mul {
            dst: format!("_pump_m{j}"),
            x: format!("_pump_m{}", j - 1),
            y: format!("_pump_m{}", j - 1),
        });
        for (idx, &v) in degrees.iter().enumerate() {
            let i = idx + 1;
            if j == 1 && v & 1 == 1 {
                body.push(Stmt::Copy {
                    dst: format!("_pump_s{i}"),
                    src: "_pump_m0".into(),
                });
            }
            if v >> j & 1 == 1 {
                if v.trailing_zeros() == j {
                    body.push(Stmt::Copy {
                        dst: format!("_pump_s{i}"),
                        src: format!("_pump_m{j}"),
                    });
                } else {
                    let a = decl(&mut decls, format!("_pump_a{i}_{j}"));
                    body.push(Stmt::Copy {
                        dst: a.clone(),
                        src: format!("_pump_s{i}"),
                    });
                    body.push(Stmt::Mul {
                        dst: format!("_pump_s{i}"),
                        x: format!("_pump_m{j}"),
                        y: a,
                    });
                }
            }
        }
    }
    for (idx, output) in outputs.iter().enumerate() {
        body.push(Stmt::DestructiveCopy {
            dst: output.clone(),
            src: format!("_pump_s{}", idx + 1),
        });
    }
    let compiled = compile_program(&ProgramAst { decls, body }).expect("pumper compiles");
    let outputs = outputs
        .iter()
        .map(|name| compiled.vass.counter_index(name).unwrap())
        .collect();
    Pumper {
        vass: compiled.vass,
        outputs,
        entry: compiled.entry,
        exit: compiled.exit,
    }
}

/// A five-state machine cycling through four transfer phases, metered by
/// counter `i`: its length is `Θ(n²)` while `i` itself stays `Θ(n)`.
pub fn gen_example1() -> CounterVass {
    let state = |name: &str| State {
        name: name.into(),
        player: Player::Demonic,
    };
    let t = |src: usize, update: [i64; 3], dst: usize| Transition {
        src,
        update: update.to_vec(),
        dst,
    };
    CounterVass {
        counters: vec!["i".into(), "j".into(), "aux".into()],
        states: vec![
            state("t0"),
            state("t1"),
            state("t2"),
            state("t3"),
            state("t4"),
        ],
        transitions: vec![
            t(0, [-1, 0, 0], 1),
            t(1, [0, -1, -1], 1),
            t(1, [0, 0, 0], 2),
            t(2, [-1, 1, 1], 2),
            t(2, [0, 0, 0], 3),
            t(3, [1, 0, -1], 3),
            t(3, [0, 0, 0], 4),
            t(4, [0, -1, 0], 4),
            t(4, [0, 0, 0], 0),
        ],
        initial: Some(vec![0]),
    }
}

/// Parses DIMACS CNF (`p cnf <vars> <clauses>`, three literals per clause).
pub fn parse_dimacs(text: &str) -> Result<CnfFormula, String> {
    let mut header: Option<(usize, usize)> = None;
    let mut literals: Vec<i32> = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("p ") {
            if header.is_some() {
                return Err("duplicate header".into());
            }
            let parts: Vec<&str> = rest.split_whitespace().collect();
            if parts.len() != 3 || parts[0] != "cnf" {
                return Err("expected `p cnf <vars> <clauses>`".into());
            }
            let vars = parts[1].parse().map_err(|_| "bad variable count")?;
            let clauses = parts[2].parse().map_err(|_| "bad clause count")?;
            header = Some((vars, clauses));
            continue;
        }
        for token in line.split_whitespace() {
            literals.push(token.parse().map_err(|_| format!("bad literal `{token}`"))?);
        }
    }
    let (num_vars, num_clauses) = header.ok_or("missing `p cnf` header")?;
    let mut clauses = Vec::new();
    let mut current = Vec::new();
    for lit in literals {
        if lit == 0 {
            let c: [i32; 3] = current
                .as_slice()
                .try_into()
                .map_err(|_| "every clause must have exactly three literals".to_string())?;
            clauses.push(c);
            current = Vec::new();
        } else {
            current.push(lit);
        }
    }
    if !current.is_empty() {
        return Err("trailing literals without terminating 0".into());
    }
    if clauses.len() != num_clauses {
        return Err(format!(
            "header declares {num_clauses} clauses, found {}",
            clauses.len()
        ));
    }
    CnfFormula::new(num_vars, clauses)
}

/// Parses QDIMACS with a strictly alternating prefix `∀x₁∃y₁…`: quantifier
/// lines must enumerate variables `1, 2, …, 2v` in order, universals odd.
pub fn parse_qdimacs(text: &str) -> Result<QbfFormula, String> {
    let mut quantified: Vec<(char, usize)> = Vec::new();
    let mut matrix = String::new();
    let mut header: Option<(usize, usize)> = None;
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("p ") {
            let parts: Vec<&str> = rest.split_whitespace().collect();
            if parts.len() != 3 || parts[0] != "cnf" {
                return Err("expected `p cnf <vars> <clauses>`".into());
            }
            header = Some((
                parts[1].parse().map_err(|_| "bad variable count")?,
                parts[2].parse().map_err(|_| "bad clause count")?,
            ));
            continue;
        }
        if let Some(rest) = line.strip_prefix("a ").or_else(|| line.strip_prefix("e ")) {
            let quant = line.chars().next().unwrap();
            for token in rest.split_whitespace() {
                let var: i64 = token.parse().map_err(|_| format!("bad variable `{token}`"))?;
                if var == 0 {
                    break;
                }
                if var < 0 {
                    return Err("quantifier lines list positive variables".into());
                }
                quantified.push((quant, var as usize));
            }
            continue;
        }
        matrix.push_str(line);
        matrix.push('\n');
    }
    let (num_vars, num_clauses) = header.ok_or("missing `p cnf` header")?;
    if num_vars % 2 != 0 {
        return Err("need an even variable count (alternating ∀∃ pairs)".into());
    }
    for (at, &(quant, var)) in quantified.iter().enumerate() {
        let expected = if at % 2 == 0 { 'a' } else { 'e' };
        if var != at + 1 || quant != expected {
            return Err(format!(
                "prefix must alternate `a 1`, `e 2`, …; position {} has `{quant} {var}`",
                at + 1
            ));
        }
    }
    if quantified.len() != num_vars {
        return Err("prefix must quantify every variable".into());
    }
    let body = parse_dimacs(&format!("p cnf {num_vars} {num_clauses}\n{matrix}"))?;
    QbfFormula::new(num_vars / 2, body.clauses)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{compute_vect, AnalysisOptions};
    use crate::growth::GrowthExponent;
    use crate::oracle::{complexity_samples, fit_exponent, OracleCaps};

    #[test]
    fn canonical_unsat_is_unsatisfiable() {
        let f = canonical_unsat();
        assert_eq!(f.clauses.len(), 8);
        assert!(!f.is_satisfiable());
        let single = CnfFormula::new(3, vec![[1, 2, 3]]).unwrap();
        assert!(single.is_satisfiable());
    }

    #[test]
    fn qbf_validity_brute_force() {
        // ∀x∃y (x ↔ y), encoded with the two sign patterns.
        let valid = QbfFormula::new(1, vec![[1, -2, -2], [-1, 2, 2]]).unwrap();
        assert!(valid.is_valid());
        // ∀x∃y (x ∧ y): fails for x = false.
        let invalid = QbfFormula::new(1, vec![[1, 1, 1], [2, 2, 2]]).unwrap();
        assert!(!invalid.is_valid());
    }

    #[test]
    fn sat_machine_is_total_and_demonic() {
        let cnf = CnfFormula::new(3, vec![[1, 2, 3]]).unwrap();
        let vass = gen_sat(&cnf, 2);
        assert!(vass.validate().is_empty(), "{:?}", vass.validate());
        assert!(vass.states.iter().all(|s| s.player == Player::Demonic));
        assert!(vass.counter_index("f").is_some());
        assert!(vass.counter_index("s1").is_some());
    }

    #[test]
    fn qbf_machine_has_one_controller_state_per_pair() {
        let qbf = QbfFormula::new(2, vec![[1, 2, 3], [-1, 4, 4]]).unwrap();
        let vass = gen_qbf(&qbf, 2);
        assert!(vass.validate().is_empty());
        assert_eq!(
            vass.states
                .iter()
                .filter(|s| s.player == Player::Angelic)
                .count(),
            2
        );
    }

    #[test]
    fn combined_machines_expose_the_target_counter() {
        let sat = CnfFormula::new(3, vec![[1, 2, 3]]).unwrap();
        let unsat = canonical_unsat();
        let vass = gen_satunsat_counter(&sat, &unsat, 2);
        assert!(vass.validate().is_empty());
        assert!(vass.counter_index("c").is_some());
        assert!(vass.counter_index("p_s1").is_some());
        assert!(vass.counter_index("q_s8").is_some());

        let vass = gen_satunsat_length(&sat, &unsat, 3);
        assert!(vass.validate().is_empty());
        assert!(vass.counter_index("f").is_some());
    }

    #[test]
    fn pumper_outputs_reach_their_degrees() {
        // Whole-machine exploration blows up on chained gadgets (the demon
        // may leave each gadget with any partial residue), so degrees are
        // checked through the per-component growth analysis instead.
        let opts = AnalysisOptions::default();
        for degree in [1u32, 2, 3] {
            let pumper = gen_pumper(&[degree]);
            let mut sealed = pumper.vass.clone();
            sealed.seal_dead_states();
            let table = compute_vect(&sealed, &opts);
            assert_eq!(
                table.max_exponent(pumper.outputs[0]),
                GrowthExponent::Poly(degree),
                "pump output degree for target {degree}"
            );
        }
    }

    #[test]
    fn pumper_pairs_pump_independently() {
        let pumper = gen_pumper(&[1, 2]);
        assert_eq!(pumper.outputs.len(), 2);
        let mut sealed = pumper.vass.clone();
        sealed.seal_dead_states();
        let table = compute_vect(&sealed, &AnalysisOptions::default());
        assert_eq!(table.max_exponent(pumper.outputs[0]), GrowthExponent::Poly(1));
        assert_eq!(table.max_exponent(pumper.outputs[1]), GrowthExponent::Poly(2));
    }

    #[test]
    fn example1_has_quadratic_length_but_linear_counter() {
        let vass = gen_example1();
        assert!(vass.validate().is_empty());
        let caps = OracleCaps::default();
        let samples = complexity_samples(&vass, &[4, 8, 16], &caps);
        let lengths: Vec<(u64, u64)> = samples.iter().map(|s| (s.n, s.max_length)).collect();
        let (k, _) = fit_exponent(&lengths);
        assert_eq!(k, 2);
        let i_peaks: Vec<(u64, u64)> = samples
            .iter()
            .map(|s| (s.n, s.per_counter_max[0]))
            .collect();
        let (k, _) = fit_exponent(&i_peaks);
        assert_eq!(k, 1);
    }

    #[test]
    fn dimacs_round_trip_and_errors() {
        let f = parse_dimacs("c example\np cnf 3 2\n1 -2 3 0\n-1 2 -3 0\n").unwrap();
        assert_eq!(f.num_vars, 3);
        assert_eq!(f.clauses, vec![[1, -2, 3], [-1, 2, -3]]);
        assert!(parse_dimacs("p cnf 2 1\n1 2 0\n").is_err(), "two-literal clause");
        assert!(parse_dimacs("1 2 3 0\n").is_err(), "missing header");
        assert!(parse_dimacs("p cnf 1 1\n1 2 3 0\n").is_err(), "variable range");
    }

    #[test]
    fn qdimacs_enforces_alternation() {
        let good = "p cnf 2 1\na 1 0\ne 2 0\n1 2 2 0\n";
        let f = parse_qdimacs(good).unwrap();
        assert_eq!(f.num_pairs, 1);
        let bad = "p cnf 2 1\ne 1 0\na 2 0\n1 2 2 0\n";
        assert!(parse_qdimacs(bad).is_err());
    }
}
