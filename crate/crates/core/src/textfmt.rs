//! Plain-text machine format.
//!
//! ```text
//! # four-phase transfer loop
//! counters i j aux
//! state t0 demonic
//! state t1 angelic
//! init t0
//! t0 -> t1 [-1 0 0]
//! t1 -> t0 [0 2 -1]
//! ```
//!
//! One `counters` line, `state <name> demonic|angelic` lines, an optional
//! `init <names…>` line, and transition lines `src -> dst [u1 … ud]` with
//! one integer per counter. `#` starts a comment; identifiers are
//! alphanumeric/underscore and must not start with a digit. [`emit_vass`]
//! renders the canonical form (declaration order throughout), and parsing
//! an emitted machine reproduces it exactly.

use std::collections::HashMap;
use std::fmt;

use crate::model::{CounterVass, Player, State, Transition};

/// Parse failure with its 1-based source line.
#[derive(Debug)]
pub struct TextError {
    pub line: usize,
    pub msg: String,
}

impl fmt::Display for TextError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.msg)
    }
}

impl std::error::Error for TextError {}

fn err<T>(line: usize, msg: impl Into<String>) -> Result<T, TextError> {
    Err(TextError {
        line,
        msg: msg.into(),
    })
}

fn valid_ident(s: &str) -> bool {
    !s.is_empty()
        && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !s.chars().next().unwrap().is_ascii_digit()
}

/// Parses the plain-text format.
pub fn parse_vass(text: &str) -> Result<CounterVass, TextError> {
    let mut counters: Option<Vec<String>> = None;
    let mut states: Vec<State> = Vec::new();
    let mut state_idx: HashMap<String, usize> = HashMap::new();
    let mut initial: Option<Vec<usize>> = None;
    let mut transitions: Vec<Transition> = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = match raw.find('#') {
            Some(at) => raw[..at].trim(),
            None => raw.trim(),
        };
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("counters ") {
            if counters.is_some() {
                return err(lineno, "duplicate `counters` line");
            }
            let names: Vec<String> = rest.split_whitespace().map(String::from).collect();
            for name in &names {
                if !valid_ident(name) {
                    return err(lineno, format!("invalid counter name `{name}`"));
                }
            }
            let mut seen = std::collections::HashSet::new();
            for name in &names {
                if !seen.insert(name) {
                    return err(lineno, format!("duplicate counter `{name}`"));
                }
            }
            if names.is_empty() {
                return err(lineno, "a machine needs at least one counter");
            }
            counters = Some(names);
            continue;
        }
        if let Some(rest) = line.strip_prefix("state ") {
            let parts: Vec<&str> = rest.split_whitespace().collect();
            if parts.len() != 2 {
                return err(lineno, "expected `state <name> demonic|angelic`");
            }
            let name = parts[0];
            if !valid_ident(name) {
                return err(lineno, format!("invalid state name `{name}`"));
            }
            let player = match parts[1] {
                "demonic" => Player::Demonic,
                "angelic" => Player::Angelic,
                other => return err(lineno, format!("unknown player `{other}`")),
            };
            if state_idx.contains_key(name) {
                return err(lineno, format!("duplicate state `{name}`"));
            }
            state_idx.insert(name.to_string(), states.len());
            states.push(State {
                name: name.to_string(),
                player,
            });
            continue;
        }
        if let Some(rest) = line.strip_prefix("init ") {
            if initial.is_some() {
                return err(lineno, "duplicate `init` line");
            }
            let mut picked = Vec::new();
            for name in rest.split_whitespace() {
                match state_idx.get(name) {
                    Some(&i) => picked.push(i),
                    None => return err(lineno, format!("unknown state `{name}`")),
                }
            }
            if picked.is_empty() {
                return err(lineno, "`init` needs at least one state");
            }
            initial = Some(picked);
            continue;
        }
        // Transition: `src -> dst [u1 … ud]`.
        let (endpoints, update) = match line.split_once('[') {
            Some((e, u)) => (e.trim(), u),
            None => return err(lineno, format!("cannot parse line `{line}`")),
        };
        let update = match update.strip_suffix(']') {
            Some(u) => u,
            None => return err(lineno, "missing `]` after the update vector"),
        };
        let (src, dst) = match endpoints.split_once("->") {
            Some((s, d)) => (s.trim(), d.trim()),
            None => return err(lineno, "expected `src -> dst [update]`"),
        };
        let src = *state_idx
            .get(src)
            .ok_or(TextError {
                line: lineno,
                msg: format!("unknown state `{src}`"),
            })?;
        let dst = *state_idx
            .get(dst)
            .ok_or(TextError {
                line: lineno,
                msg: format!("unknown state `{dst}`"),
            })?;
        let dim = match &counters {
            Some(c) => c.len(),
            None => return err(lineno, "`counters` must come before transitions"),
        };
        let mut values = Vec::new();
        for token in update.split_whitespace() {
            values.push(token.parse::<i64>().map_err(|_| TextError {
                line: lineno,
                msg: format!("bad update entry `{token}`"),
            })?);
        }
        if values.len() != dim {
            return err(
                lineno,
                format!("update has {} entries, expected {dim}", values.len()),
            );
        }
        transitions.push(Transition {
            src,
            update: values,
            dst,
        });
    }

    let counters = counters.ok_or(TextError {
        line: text.lines().count().max(1),
        msg: "missing `counters` line".into(),
    })?;
    if states.is_empty() {
        return err(1, "a machine needs at least one state");
    }
    Ok(CounterVass {
        counters,
        states,
        transitions,
        initial,
    })
}

/// Renders the canonical plain-text form.
pub fn emit_vass(vass: &CounterVass) -> String {
    let mut out = String::new();
    out.push_str("counters ");
    out.push_str(&vass.counters.join(" "));
    out.push('\n');
    for s in &vass.states {
        let player = match s.player {
            Player::Demonic => "demonic",
            Player::Angelic => "angelic",
        };
        out.push_str(&format!("state {} {player}\n", s.name));
    }
    if let Some(init) = &vass.initial {
        let names: Vec<&str> = init.iter().map(|&i| vass.states[i].name.as_str()).collect();
        out.push_str(&format!("init {}\n", names.join(" ")));
    }
    for t in &vass.transitions {
        let update: Vec<String> = t.update.iter().map(|u| u.to_string()).collect();
        out.push_str(&format!(
            "{} -> {} [{}]\n",
            vass.states[t.src].name,
            vass.states[t.dst].name,
            update.join(" ")
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_example1, gen_qbf, QbfFormula};

    #[test]
    fn round_trips_are_exact() {
        let m = gen_example1();
        let text = emit_vass(&m);
        assert_eq!(parse_vass(&text).unwrap(), m);

        let qbf = QbfFormula::new(1, vec![[1, 2, 2]]).unwrap();
        let g = gen_qbf(&qbf, 2);
        assert_eq!(parse_vass(&emit_vass(&g)).unwrap(), g);
    }

    #[test]
    fn parses_the_documented_example() {
        let text = "# four-phase transfer loop\n\
                    counters i j aux\n\
                    state t0 demonic\n\
                    state t1 angelic\n\
                    init t0\n\
                    t0 -> t1 [-1 0 0]\n\
                    t1 -> t0 [0 2 -1]\n";
        let m = parse_vass(text).unwrap();
        assert_eq!(m.counters, vec!["i", "j", "aux"]);
        assert_eq!(m.states[1].player, Player::Angelic);
        assert_eq!(m.initial, Some(vec![0]));
        assert_eq!(m.transitions[1].update, vec![0, 2, -1]);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let cases = [
            ("counters x\nstate a demonic\nb -> a [0]\n", 3, "unknown state"),
            ("counters x\nstate a demonic\na -> a [0 1]\n", 3, "2 entries"),
            ("counters x\ncounters y\n", 2, "duplicate"),
            ("state a demonic\na -> a [0]\n", 2, "`counters` must come"),
            ("counters x\nstate a neutral\n", 2, "unknown player"),
            ("counters x\nstate a demonic\ninit b\n", 3, "unknown state"),
        ];
        for (text, line, needle) in cases {
            let e = parse_vass(text).unwrap_err();
            assert_eq!(e.line, line, "{text}");
            assert!(e.msg.contains(needle), "{e}");
        }
    }

    #[test]
    fn missing_counters_is_reported() {
        assert!(parse_vass("state a demonic\n").is_err());
        assert!(parse_vass("").is_err());
    }
}
