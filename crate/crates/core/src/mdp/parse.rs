//! Line-oriented model files.
//!
//! ```text
//! mdp
//! states s0 s1
//! init s0
//! label s0 a b
//! action s0 alpha : s0 1/2 , s1 1/2
//! action s1 gamma : s1 1
//! ```

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use super::{Action, Mdp, Valuation};
use crate::error::{Error, Result};
use crate::rational::{fmt_exact, parse_rational, Rational};

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::Model {
        line,
        msg: msg.into(),
    }
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.' || c == '-')
}

pub fn parse_mdp(text: &str) -> Result<(Mdp, Valuation)> {
    let mut header = false;
    let mut names: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut init: Option<usize> = None;
    let mut labels: Vec<BTreeSet<String>> = Vec::new();
    let mut actions: Vec<Action> = Vec::new();
    let mut declared: HashMap<(usize, String), usize> = HashMap::new();
    let mut last_line = 0;

    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        last_line = ln;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut words = line.split_whitespace();
        let keyword = words.next().unwrap_or_default();
        if !header {
            if keyword != "mdp" || words.next().is_some() {
                return Err(err(ln, "expected the header line `mdp`"));
            }
            header = true;
            continue;
        }
        let state = |name: Option<&str>, index: &HashMap<String, usize>| -> Result<usize> {
            let name = name.ok_or_else(|| err(ln, "missing state name"))?;
            index
                .get(name)
                .copied()
                .ok_or_else(|| err(ln, format!("unknown state `{name}`")))
        };
        match keyword {
            "states" => {
                if !names.is_empty() {
                    return Err(err(ln, "states declared twice"));
                }
                for name in words {
                    if !is_ident(name) {
                        return Err(err(ln, format!("malformed state name `{name}`")));
                    }
                    if index.insert(name.to_string(), names.len()).is_some() {
                        return Err(err(ln, format!("state `{name}` declared twice")));
                    }
                    names.push(name.to_string());
                }
                if names.is_empty() {
                    return Err(err(ln, "no states declared"));
                }
                labels = vec![BTreeSet::new(); names.len()];
            }
            "init" => {
                if init.is_some() {
                    return Err(err(ln, "init declared twice"));
                }
                init = Some(state(words.next(), &index)?);
                if words.next().is_some() {
                    return Err(err(ln, "trailing input after init state"));
                }
            }
            "label" => {
                let s = state(words.next(), &index)?;
                for atom in words {
                    if !atom.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                        || !atom.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
                    {
                        return Err(err(ln, format!("malformed atomic proposition `{atom}`")));
                    }
                    labels[s].insert(atom.to_string());
                }
            }
            "action" => {
                let (head, body) = line
                    .split_once(':')
                    .ok_or_else(|| err(ln, "expected `:` in action line"))?;
                let mut head_words = head.split_whitespace().skip(1);
                let s = state(head_words.next(), &index)?;
                let name = head_words
                    .next()
                    .filter(|n| is_ident(n))
                    .ok_or_else(|| err(ln, "missing or malformed action name"))?;
                if head_words.next().is_some() {
                    return Err(err(ln, "trailing input before `:`"));
                }
                if declared.insert((s, name.to_string()), ln).is_some() {
                    return Err(err(ln, format!("action `{name}` of state `{}` redeclared", names[s])));
                }
                let mut dist: Vec<(usize, Rational)> = Vec::new();
                for item in body.split(',') {
                    let mut parts = item.split_whitespace();
                    let t = state(parts.next(), &index)?;
                    let p_text = parts.next().ok_or_else(|| err(ln, "missing probability"))?;
                    if parts.next().is_some() {
                        return Err(err(ln, "expected `state probability` pairs separated by `,`"));
                    }
                    let p = parse_rational(p_text).map_err(|e| err(ln, e.to_string()))?;
                    if p <= Rational::from_integer(0.into()) || p > Rational::from_integer(1.into()) {
                        return Err(err(ln, format!("probability {p_text} is outside (0,1]")));
                    }
                    dist.push((t, p));
                }
                let total: Rational = dist.iter().map(|(_, p)| p.clone()).sum();
                if total != Rational::from_integer(1.into()) {
                    return Err(err(
                        ln,
                        format!("probabilities sum to {} instead of 1", fmt_exact(&total)),
                    ));
                }
                actions.push(Action {
                    state: s,
                    name: name.to_string(),
                    dist,
                });
            }
            other => return Err(err(ln, format!("unknown directive `{other}`"))),
        }
    }
    if !header {
        return Err(err(last_line.max(1), "empty model file"));
    }
    if names.is_empty() {
        return Err(err(last_line, "missing `states` line"));
    }
    let init = init.ok_or_else(|| err(last_line, "missing `init` line"))?;
    if let Some(s) = (0..names.len()).find(|&s| !actions.iter().any(|a| a.state == s)) {
        return Err(err(last_line, format!("state `{}` has no action", names[s])));
    }
    let mdp = Mdp::new(names, init, actions).map_err(|e| err(last_line, e.to_string()))?;
    Ok((mdp, Valuation(labels)))
}

/// Writes a model in the format accepted by [`parse_mdp`].
pub fn format_mdp(mdp: &Mdp, valuation: &Valuation) -> String {
    let mut out = String::from("mdp\n");
    let _ = writeln!(out, "states {}", mdp.state_names.join(" "));
    let _ = writeln!(out, "init {}", mdp.state_names[mdp.initial]);
    for (s, labels) in valuation.0.iter().enumerate() {
        if !labels.is_empty() {
            let atoms: Vec<&str> = labels.iter().map(String::as_str).collect();
            let _ = writeln!(out, "label {} {}", mdp.state_names[s], atoms.join(" "));
        }
    }
    for a in &mdp.actions {
        let dist: Vec<String> = a
            .dist
            .iter()
            .map(|(t, p)| format!("{} {}", mdp.state_names[*t], fmt_exact(p)))
            .collect();
        let _ = writeln!(
            out,
            "action {} {} : {}",
            mdp.state_names[a.state],
            a.name,
            dist.join(" , ")
        );
    }
    out
}
