//! A straight-line counter language and its compiler to demonic machines.
//!
//! Programs are sequences of gadget statements over declared counters:
//!
//! ```text
//! decl z x y s a b
//! z <- x * y        # add x·y to z (budgeted multiplication)
//! z <- x * n        # add x·n, n the initial counter value
//! x <- y            # add y to x, restoring y
//! x <- [y]          # move y into x, destroying y
//! s <- min(a, b)    # add min(a, b) to s, restoring a, consuming b
//! choose { … } or { … }    # adversarial branch
//! achoose { … } or { … }   # controller branch
//! foreach i in 1..3 { … }  # unrolled; `_i` in names becomes `_1`, …
//! ```
//!
//! Each statement compiles to a fixed gadget: a small machine with an entry
//! and an exit whose loops transfer counter values, metered by a fresh
//! auxiliary counter that starts (like every counter) at `n`. The gadgets
//! realize their operation in the asymptotic sense — an adversary maximizing
//! a downstream counter can extract the stated value, and no play extracts
//! asymptotically more — and every gadget can also be skipped entirely
//! through its direct entry→exit edge. Statements are chained by zero-effect
//! edges; branches merge in a fresh join state. All states are adversarial
//! (demonic) except `achoose` branch points, which belong to the controller.
//!
//! The compiler output keeps the final exit without outgoing transitions;
//! callers embed it or seal it as needed.

use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::model::{CounterVass, Player, State, Transition};

/// One statement of the counter language.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Stmt {
    /// `dst <- x * y`: adds `x·y` to `dst`.
    Mul { dst: String, x: String, y: String },
    /// `dst <- src * n`: adds `src·n` to `dst`.
    MulByN { dst: String, src: String },
    /// `dst <- src`: adds `src` to `dst`, restoring `src`.
    Copy { dst: String, src: String },
    /// `dst <- [src]`: moves `src` into `dst`.
    DestructiveCopy { dst: String, src: String },
    /// `dst <- min(kept, consumed)`: adds the minimum to `dst`, restoring
    /// `kept` and consuming `consumed`.
    Min {
        dst: String,
        kept: String,
        consumed: String,
    },
    /// Branch between alternative blocks, owned by the given player.
    Choose {
        player: Player,
        branches: Vec<Vec<Stmt>>,
    },
}

/// A parsed program: declared counters and the statement sequence.
#[derive(Debug, Clone, Default)]
pub struct ProgramAst {
    pub decls: Vec<String>,
    pub body: Vec<Stmt>,
}

/// Parse or compilation failure, with a source line when available.
#[derive(Debug)]
pub struct ProgramError {
    pub line: Option<usize>,
    pub msg: String,
}

impl fmt::Display for ProgramError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {line}: {}", self.msg),
            None => write!(f, "{}", self.msg),
        }
    }
}

impl std::error::Error for ProgramError {}

fn err<T>(line: usize, msg: impl Into<String>) -> Result<T, ProgramError> {
    Err(ProgramError {
        line: Some(line),
        msg: msg.into(),
    })
}

fn is_ident(s: &str) -> bool {
    !s.is_empty()
        && s.chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !s.chars().next().unwrap().is_ascii_digit()
}

/// Replaces `_<var>` by `_<value>` wherever the occurrence is not followed by
/// another identifier character, so `x_i` becomes `x_3` while `x_i2` is left
/// alone.
fn substitute(line: &str, var: &str, value: u32) -> String {
    let needle: Vec<char> = format!("_{var}").chars().collect();
    let chars: Vec<char> = line.chars().collect();
    let mut out = String::new();
    let mut i = 0;
    while i < chars.len() {
        let matches = i + needle.len() <= chars.len()
            && chars[i..i + needle.len()] == needle[..]
            && chars
                .get(i + needle.len())
                .map_or(true, |c| !c.is_ascii_alphanumeric() && *c != '_');
        if matches {
            out.push('_');
            out.push_str(&value.to_string());
            i += needle.len();
        } else {
            out.push(chars[i]);
            i += 1;
        }
    }
    out
}

struct Parser {
    lines: Vec<(usize, String)>,
    pos: usize,
    decls: Vec<String>,
    declared: HashSet<String>,
}

/// How a block of statements ended.
enum BlockEnd {
    Eof,
    OrBrace(usize),
    CloseBrace(usize),
}

impl Parser {
    fn check_counter(&self, line: usize, name: &str) -> Result<(), ProgramError> {
        if !is_ident(name) {
            return err(line, format!("`{name}` is not a valid counter name"));
        }
        if !self.declared.contains(name) {
            return err(line, format!("counter `{name}` is not declared"));
        }
        Ok(())
    }

    fn parse_assignment(&self, lineno: usize, text: &str) -> Result<Stmt, ProgramError> {
        let (lhs, rhs) = match text.split_once("<-") {
            Some((l, r)) => (l.trim(), r.trim()),
            None => return err(lineno, format!("cannot parse statement `{text}`")),
        };
        self.check_counter(lineno, lhs)?;
        if let Some(inner) = rhs.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            let src = inner.trim();
            self.check_counter(lineno, src)?;
            return Ok(Stmt::DestructiveCopy {
                dst: lhs.into(),
                src: src.into(),
            });
        }
        if let Some(inner) = rhs.strip_prefix("min(").and_then(|r| r.strip_suffix(')')) {
            let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
            if parts.len() != 2 {
                return err(lineno, "min takes exactly two counters");
            }
            self.check_counter(lineno, parts[0])?;
            self.check_counter(lineno, parts[1])?;
            return Ok(Stmt::Min {
                dst: lhs.into(),
                kept: parts[0].into(),
                consumed: parts[1].into(),
            });
        }
        if let Some((x, y)) = rhs.split_once('*') {
            let (x, y) = (x.trim(), y.trim());
            self.check_counter(lineno, x)?;
            if y == "n" {
                return Ok(Stmt::MulByN {
                    dst: lhs.into(),
                    src: x.into(),
                });
            }
            self.check_counter(lineno, y)?;
            return Ok(Stmt::Mul {
                dst: lhs.into(),
                x: x.into(),
                y: y.into(),
            });
        }
        self.check_counter(lineno, rhs)?;
        Ok(Stmt::Copy {
            dst: lhs.into(),
            src: rhs.into(),
        })
    }

    /// Collects the lines of a block opened on the previous line, consuming
    /// the matching closer.
    fn collect_block(&mut self, open_line: usize) -> Result<Vec<(usize, String)>, ProgramError> {
        let mut depth = 1usize;
        let mut block = Vec::new();
        while self.pos < self.lines.len() {
            let (lineno, text) = self.lines[self.pos].clone();
            self.pos += 1;
            if text == "}" {
                depth -= 1;
                if depth == 0 {
                    return Ok(block);
                }
            } else if text.ends_with('{') && text != "} or {" {
                depth += 1;
            }
            block.push((lineno, text));
        }
        err(open_line, "unterminated block")
    }

    fn parse_block(&mut self) -> Result<(Vec<Stmt>, BlockEnd), ProgramError> {
        let mut stmts = Vec::new();
        while self.pos < self.lines.len() {
            let (lineno, text) = self.lines[self.pos].clone();
            self.pos += 1;
            if text == "}" {
                return Ok((stmts, BlockEnd::CloseBrace(lineno)));
            }
            if text == "} or {" {
                return Ok((stmts, BlockEnd::OrBrace(lineno)));
            }
            if let Some(rest) = text.strip_prefix("decl ") {
                for name in rest.split_whitespace() {
                    if !is_ident(name) || name == "n" {
                        return err(lineno, format!("`{name}` is not a valid counter name"));
                    }
                    if self.declared.insert(name.to_string()) {
                        self.decls.push(name.to_string());
                    }
                }
                continue;
            }
            if text == "choose {" || text == "achoose {" {
                let player = if text.starts_with('a') {
                    Player::Angelic
                } else {
                    Player::Demonic
                };
                let (left, end) = self.parse_block()?;
                match end {
                    BlockEnd::OrBrace(_) => {}
                    _ => return err(lineno, "expected `} or {` after the first branch"),
                }
                let (right, end) = self.parse_block()?;
                match end {
                    BlockEnd::CloseBrace(_) => {}
                    _ => return err(lineno, "expected `}` after the second branch"),
                }
                stmts.push(Stmt::Choose {
                    player,
                    branches: vec![left, right],
                });
                continue;
            }
            if let Some(rest) = text.strip_prefix("foreach ") {
                let rest = rest
                    .strip_suffix('{')
                    .ok_or(ProgramError {
                        line: Some(lineno),
                        msg: "foreach line must end with `{`".into(),
                    })?
                    .trim();
                let (var, range) = rest.split_once(" in ").ok_or(ProgramError {
                    line: Some(lineno),
                    msg: "expected `foreach <var> in <a>..<b> {`".into(),
                })?;
                let var = var.trim();
                if !is_ident(var) {
                    return err(lineno, format!("`{var}` is not a valid loop variable"));
                }
                let (a, b) = range.trim().split_once("..").ok_or(ProgramError {
                    line: Some(lineno),
                    msg: "expected literal bounds `<a>..<b>`".into(),
                })?;
                let a: u32 = a
                    .trim()
                    .parse()
                    .map_err(|_| ProgramError {
                        line: Some(lineno),
                        msg: "loop bounds must be literal integers".into(),
                    })?;
                let b: u32 = b
                    .trim()
                    .parse()
                    .map_err(|_| ProgramError {
                        line: Some(lineno),
                        msg: "loop bounds must be literal integers".into(),
                    })?;
                let block = self.collect_block(lineno)?;
                let mut unrolled = Vec::new();
                for value in a..=b {
                    for (l, t) in &block {
                        unrolled.push((*l, substitute(t, var, value)));
                    }
                }
                // Parse the unrolled lines in place of the loop.
                let tail: Vec<(usize, String)> = self.lines.split_off(self.pos);
                self.lines.truncate(self.pos);
                self.lines.extend(unrolled);
                self.lines.extend(tail);
                continue;
            }
            stmts.push(self.parse_assignment(lineno, &text)?);
        }
        Ok((stmts, BlockEnd::Eof))
    }
}

/// Parses program text; errors carry 1-based source line numbers.
pub fn parse_program(text: &str) -> Result<ProgramAst, ProgramError> {
    let lines: Vec<(usize, String)> = text
        .lines()
        .enumerate()
        .map(|(i, raw)| {
            let stripped = match raw.find('#') {
                Some(at) => &raw[..at],
                None => raw,
            };
            (i + 1, stripped.trim().to_string())
        })
        .filter(|(_, t)| !t.is_empty())
        .collect();
    let mut parser = Parser {
        lines,
        pos: 0,
        decls: Vec::new(),
        declared: HashSet::new(),
    };
    let (body, end) = parser.parse_block()?;
    match end {
        BlockEnd::Eof => Ok(ProgramAst {
            decls: parser.decls,
            body,
        }),
        BlockEnd::CloseBrace(l) | BlockEnd::OrBrace(l) => err(l, "unmatched `}`"),
    }
}

/// A compiled program: the machine plus its entry and exit states. The exit
/// has no outgoing transitions.
#[derive(Debug, Clone)]
pub struct CompiledProgram {
    pub vass: CounterVass,
    pub entry: usize,
    pub exit: usize,
}

struct Compiler {
    counters: Vec<String>,
    counter_idx: HashMap<String, usize>,
    states: Vec<State>,
    // Sparse updates; densified once all auxiliary counters exist.
    transitions: Vec<(usize, Vec<(usize, i64)>, usize)>,
    gadgets: usize,
}

impl Compiler {
    fn counter(&mut self, name: &str) -> Result<usize, ProgramError> {
        self.counter_idx.get(name).copied().ok_or(ProgramError {
            line: None,
            msg: format!("counter `{name}` is not declared"),
        })
    }

    fn add_counter(&mut self, name: String) -> usize {
        let idx = self.counters.len();
        self.counter_idx.insert(name.clone(), idx);
        self.counters.push(name);
        idx
    }

    fn add_state(&mut self, name: String, player: Player) -> usize {
        self.states.push(State { name, player });
        self.states.len() - 1
    }

    fn link(&mut self, src: usize, dst: usize) {
        self.transitions.push((src, Vec::new(), dst));
    }

    fn next_gadget(&mut self) -> usize {
        self.gadgets += 1;
        self.gadgets
    }

    /// The budgeted multiplication gadget: two transfer loops moving the
    /// multiplicand back and forth through a fresh auxiliary, each traversal
    /// adding to the product, with the multiplier metering the crossings.
    fn emit_mul(&mut self, z: usize, x: usize, y: usize) -> (usize, usize) {
        let g = self.next_gadget();
        let al = self.add_counter(format!("_aux{g}"));
        let i = self.add_state(format!("_g{g}_in"), Player::Demonic);
        let m = self.add_state(format!("_g{g}_mid"), Player::Demonic);
        let o = self.add_state(format!("_g{g}_out"), Player::Demonic);
        self.transitions.push((i, vec![(x, -1), (al, 1), (z, 1)], i));
        self.transitions.push((m, vec![(x, 1), (al, -1), (z, 1)], m));
        self.transitions.push((i, vec![(y, -1)], m));
        self.transitions.push((m, vec![(y, -1)], i));
        self.link(i, o);
        self.link(m, o);
        (i, o)
    }

    fn emit_copy(&mut self, dst: usize, src: usize) -> (usize, usize) {
        let g = self.next_gadget();
        let al = self.add_counter(format!("_aux{g}"));
        let i = self.add_state(format!("_g{g}_in"), Player::Demonic);
        let o = self.add_state(format!("_g{g}_out"), Player::Demonic);
        self.transitions
            .push((i, vec![(src, -1), (dst, 1), (al, 1)], i));
        self.transitions.push((o, vec![(src, 1), (al, -1)], o));
        self.link(i, o);
        (i, o)
    }

    fn emit_min(&mut self, dst: usize, kept: usize, consumed: usize) -> (usize, usize) {
        let g = self.next_gadget();
        let al = self.add_counter(format!("_aux{g}"));
        let i = self.add_state(format!("_g{g}_in"), Player::Demonic);
        let o = self.add_state(format!("_g{g}_out"), Player::Demonic);
        self.transitions
            .push((i, vec![(consumed, -1), (kept, -1), (dst, 1), (al, 1)], i));
        self.transitions.push((o, vec![(kept, 1), (al, -1)], o));
        self.link(i, o);
        (i, o)
    }

    fn emit_destructive(&mut self, dst: usize, src: usize) -> (usize, usize) {
        let g = self.next_gadget();
        let i = self.add_state(format!("_g{g}_in"), Player::Demonic);
        let o = self.add_state(format!("_g{g}_out"), Player::Demonic);
        self.transitions.push((i, vec![(src, -1), (dst, 1)], i));
        self.link(i, o);
        (i, o)
    }

    fn emit_stmt(&mut self, stmt: &Stmt) -> Result<(usize, usize), ProgramError> {
        match stmt {
            Stmt::Mul { dst, x, y } => {
                let (z, x, y) = (self.counter(dst)?, self.counter(x)?, self.counter(y)?);
                Ok(self.emit_mul(z, x, y))
            }
            Stmt::MulByN { dst, src } => {
                let (z, x) = (self.counter(dst)?, self.counter(src)?);
                let g = self.next_gadget();
                let nu = self.add_counter(format!("_nu{g}"));
                Ok(self.emit_mul(z, x, nu))
            }
            Stmt::Copy { dst, src } => {
                let (d, s) = (self.counter(dst)?, self.counter(src)?);
                Ok(self.emit_copy(d, s))
            }
            Stmt::DestructiveCopy { dst, src } => {
                let (d, s) = (self.counter(dst)?, self.counter(src)?);
                Ok(self.emit_destructive(d, s))
            }
            Stmt::Min {
                dst,
                kept,
                consumed,
            } => {
                let (d, k, c) = (
                    self.counter(dst)?,
                    self.counter(kept)?,
                    self.counter(consumed)?,
                );
                Ok(self.emit_min(d, k, c))
            }
            Stmt::Choose { player, branches } => {
                let g = self.next_gadget();
                let branch = self.add_state(format!("_g{g}_branch"), *player);
                let join = self.add_state(format!("_g{g}_join"), Player::Demonic);
                for block in branches {
                    match self.emit_seq(block)? {
                        Some((entry, exit)) => {
                            self.link(branch, entry);
                            self.link(exit, join);
                        }
                        None => self.link(branch, join),
                    }
                }
                Ok((branch, join))
            }
        }
    }

    fn emit_seq(&mut self, stmts: &[Stmt]) -> Result<Option<(usize, usize)>, ProgramError> {
        let mut span: Option<(usize, usize)> = None;
        for stmt in stmts {
            let (entry, exit) = self.emit_stmt(stmt)?;
            span = Some(match span {
                None => (entry, exit),
                Some((first, last)) => {
                    self.link(last, entry);
                    (first, exit)
                }
            });
        }
        Ok(span)
    }
}

/// Compiles a program to a demonic machine with designated entry and exit.
pub fn compile_program(ast: &ProgramAst) -> Result<CompiledProgram, ProgramError> {
    let mut compiler = Compiler {
        counters: Vec::new(),
        counter_idx: HashMap::new(),
        states: Vec::new(),
        transitions: Vec::new(),
        gadgets: 0,
    };
    for name in &ast.decls {
        if compiler.counter_idx.contains_key(name) {
            return Err(ProgramError {
                line: None,
                msg: format!("counter `{name}` declared twice"),
            });
        }
        compiler.add_counter(name.clone());
    }
    let (entry, exit) = compiler.emit_seq(&ast.body)?.ok_or(ProgramError {
        line: None,
        msg: "program has no statements".into(),
    })?;
    let dim = compiler.counters.len();
    let transitions = compiler
        .transitions
        .into_iter()
        .map(|(src, sparse, dst)| {
            let mut update = vec![0i64; dim];
            for (c, u) in sparse {
                update[c] += u;
            }
            Transition { src, update, dst }
        })
        .collect();
    Ok(CompiledProgram {
        vass: CounterVass {
            counters: compiler.counters,
            states: compiler.states,
            transitions,
            initial: Some(vec![entry]),
        },
        entry,
        exit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{explore_demonic_max, OracleCaps};

    fn compile_text(text: &str) -> CompiledProgram {
        compile_program(&parse_program(text).unwrap()).unwrap()
    }

    #[test]
    fn multiplication_gadget_shape() {
        let p = compile_text("decl z x y\nz <- x * y");
        assert_eq!(p.vass.counters, vec!["z", "x", "y", "_aux1"]);
        assert_eq!(p.vass.num_states(), 3);
        assert_eq!(p.vass.transitions.len(), 6);
        assert_eq!(p.vass.states[p.entry].name, "_g1_in");
        assert_eq!(p.vass.states[p.exit].name, "_g1_out");
    }

    #[test]
    fn copy_chain_shape() {
        let p = compile_text("decl x y z\nx <- y\nz <- x");
        assert_eq!(p.vass.num_states(), 4);
        // Two copies of three transitions each, plus the chaining edge.
        assert_eq!(p.vass.transitions.len(), 7);
    }

    #[test]
    fn destructive_copy_has_no_auxiliary() {
        let p = compile_text("decl x y\nx <- [y]");
        assert_eq!(p.vass.counters, vec!["x", "y"]);
        assert_eq!(p.vass.num_states(), 2);
        assert_eq!(p.vass.transitions.len(), 2);
    }

    #[test]
    fn multiply_by_n_uses_a_fresh_budget() {
        let p = compile_text("decl z x\nz <- x * n");
        assert!(p.vass.counters.iter().any(|c| c.starts_with("_nu")));
        assert_eq!(p.vass.transitions.len(), 6);
    }

    #[test]
    fn branch_players_follow_the_keyword() {
        let text = "decl a b s\nchoose {\na <- s\n} or {\nb <- s\n}";
        let p = compile_text(text);
        let branch = p
            .vass
            .states
            .iter()
            .find(|s| s.name.ends_with("_branch"))
            .unwrap();
        assert_eq!(branch.player, Player::Demonic);

        let p = compile_text(&text.replace("choose", "achoose"));
        let branch = p
            .vass
            .states
            .iter()
            .find(|s| s.name.ends_with("_branch"))
            .unwrap();
        assert_eq!(branch.player, Player::Angelic);
        // Exactly one controller state; joins and gadget states stay demonic.
        assert_eq!(
            p.vass
                .states
                .iter()
                .filter(|s| s.player == Player::Angelic)
                .count(),
            1
        );
    }

    #[test]
    fn foreach_unrolls_with_substitution() {
        let text = "decl s x_1 x_2 x_3\nforeach i in 1..3 {\nx_i <- s\n}";
        let ast = parse_program(text).unwrap();
        assert_eq!(ast.body.len(), 3);
        assert_eq!(
            ast.body[2],
            Stmt::Copy {
                dst: "x_3".into(),
                src: "s".into()
            }
        );
    }

    #[test]
    fn substitution_respects_identifier_boundaries() {
        assert_eq!(substitute("x_i <- s_i2", "i", 4), "x_4 <- s_i2");
        assert_eq!(substitute("a_ij <- b", "i", 1), "a_ij <- b");
        assert_eq!(substitute("q_i <- min(x_i, q_i)", "i", 2), "q_2 <- min(x_2, q_2)");
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = parse_program("decl x\nx <- undeclared").unwrap_err();
        assert_eq!(e.line, Some(2));
        let e = parse_program("decl x\nchoose {\nx <- x\n}").unwrap_err();
        assert_eq!(e.line, Some(2));
        let e = parse_program("}").unwrap_err();
        assert_eq!(e.line, Some(1));
    }

    #[test]
    fn comments_and_blanks_are_ignored() {
        let p = parse_program("# header\n\ndecl x y # trailing\nx <- y\n").unwrap();
        assert_eq!(p.body.len(), 1);
    }

    #[test]
    fn multiplication_extracts_the_documented_value() {
        // Maximal product extraction: val(x) + val(y)·(val(x) + n), starting
        // the destination at zero and the auxiliary at n.
        let p = compile_text("decl z x y\nz <- x * y");
        let mut sealed = p.vass.clone();
        sealed.seal_dead_states();
        for (x, y, n) in [(2u64, 3u64, 2u64), (1, 1, 1), (3, 2, 4)] {
            let start = vec![(p.entry, vec![0, x, y, n, n])];
            let outcome = explore_demonic_max(&sealed, &start, &OracleCaps::default());
            assert_eq!(
                outcome.per_counter_max[0],
                x + y * (x + n),
                "max product for x={x} y={y} n={n}"
            );
        }
    }
}
