//! Interactive session: equation bindings plus one-line queries over them.
//!
//! ```text
//! > x = {x}
//! x = n0 where n0 = {n0}
//! > wf x
//! false
//! > sat x dia(top)
//! true
//! > unfold x 2
//! {{{}}}
//! > members _
//! [{{}}]
//! ```
//!
//! Errors are recoverable per line; the session keeps its bindings. The
//! result of `unfold` is re-bound as `_`.

use std::io::{BufRead, Write};

use crate::equations::Equations;
use crate::error::{Error, Result};
use crate::hyperset::{decorate, HyperSet};
use crate::modal::{parse_formula, satisfies};
use crate::vr::{classify_event, classify_universe, UniverseRegistry};

struct Session {
    env: Vec<(String, HyperSet)>,
}

impl Session {
    fn new() -> Self {
        Session { env: Vec::new() }
    }

    fn lookup(&self, name: &str) -> Result<&HyperSet> {
        self.env
            .iter()
            .rev()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v)
            .ok_or_else(|| Error::UnknownNode(name.to_string()))
    }

    fn bind(&mut self, name: &str, value: HyperSet) {
        if let Some(slot) = self.env.iter_mut().find(|(n, _)| n == name) {
            slot.1 = value;
        } else {
            self.env.push((name.to_string(), value));
        }
    }

    /// Names declared by `name = {...}` statements on this line; a shallow
    /// scan, full validation happens in the parser.
    fn declared_names(line: &str) -> Vec<String> {
        line.split([';', '\n'])
            .filter_map(|stmt| {
                let stmt = stmt.trim();
                let (head, rest) = stmt.split_once('=')?;
                if rest.trim_start().starts_with('=') {
                    return None;
                }
                let head = head.trim();
                let is_ident = !head.is_empty()
                    && head
                        .chars()
                        .all(|c| c.is_ascii_alphanumeric() || c == '_')
                    && !head.starts_with(|c: char| c.is_ascii_digit());
                is_ident.then(|| head.to_string())
            })
            .collect()
    }

    /// Evaluates a binding line. Previously bound variables may appear on
    /// right-hand sides; their pictures are spliced into the equation system
    /// before solving.
    fn eval_bindings(&mut self, line: &str) -> Result<Vec<(String, HyperSet)>> {
        let declared = Session::declared_names(line);
        let mut text = String::from(line);
        text.push('\n');
        for (name, value) in &self.env {
            if declared.contains(name) || name == "_" {
                continue;
            }
            text.push_str(&render_as(value, name));
        }
        let eqs = Equations::parse(&text)?;
        let mut bound = Vec::new();
        for name in declared {
            let value = decorate(&eqs.system_for(&name)?);
            self.bind(&name, value.clone());
            bound.push((name, value));
        }
        Ok(bound)
    }
}

/// Renders a set's canonical picture as equations whose root is named
/// `name`; inner nodes get names that cannot collide with user identifiers
/// from other bindings.
fn render_as(value: &HyperSet, name: &str) -> String {
    let s = value.picture();
    let node_name = |x: crate::system::NodeId| {
        if x == s.root() {
            name.to_string()
        } else {
            format!("__{name}_{}", x.0)
        }
    };
    let mut out = String::new();
    for x in s.nodes() {
        let members: Vec<String> = s
            .children_unchecked(x)
            .iter()
            .map(|&c| node_name(c))
            .collect();
        out.push_str(&format!("{} = {{{}}}\n", node_name(x), members.join(", ")));
    }
    out
}

fn eval_line(session: &mut Session, line: &str, out: &mut impl Write) -> Result<bool> {
    let trimmed = line.trim();
    if trimmed.is_empty() || trimmed.starts_with('#') {
        return Ok(true);
    }
    let mut words = trimmed.split_whitespace();
    let head = words.next().unwrap_or_default();
    match head {
        "quit" | "exit" => return Ok(false),
        "help" => {
            writeln!(
                out,
                "bindings:  x = {{y, z}}   (may reference earlier bindings)\n\
                 queries:   wf VAR | eq VAR VAR | sat VAR FORMULA | unfold VAR RANK\n\
                 \x20          members VAR | classify [VAR] | quit"
            )?;
        }
        "wf" => {
            let name = words.next().ok_or_else(usage("wf VAR"))?;
            writeln!(out, "{}", session.lookup(name)?.is_wellfounded())?;
        }
        "eq" => {
            let a = words.next().ok_or_else(usage("eq VAR VAR"))?;
            let b = words.next().ok_or_else(usage("eq VAR VAR"))?;
            let equal = session.lookup(a)? == session.lookup(b)?;
            writeln!(out, "{}", if equal { "equal" } else { "not equal" })?;
        }
        "sat" => {
            let name = words.next().ok_or_else(usage("sat VAR FORMULA"))?;
            let rest: String = words.collect::<Vec<_>>().join(" ");
            let f = parse_formula(&rest)?;
            writeln!(out, "{}", satisfies(session.lookup(name)?, &f))?;
        }
        "unfold" => {
            let name = words.next().ok_or_else(usage("unfold VAR RANK"))?;
            let rank: usize = words
                .next()
                .and_then(|w| w.parse().ok())
                .ok_or_else(usage("unfold VAR RANK"))?;
            let result = session.lookup(name)?.unfold(rank);
            writeln!(out, "{result}")?;
            session.bind("_", result);
        }
        "members" => {
            let name = words.next().ok_or_else(usage("members VAR"))?;
            let ms: Vec<String> = session
                .lookup(name)?
                .members()
                .iter()
                .map(|m| m.to_string())
                .collect();
            writeln!(out, "[{}]", ms.join(", "))?;
        }
        "classify" => match words.next() {
            Some(name) => {
                let value = session.lookup(name)?.clone();
                let mut reg = UniverseRegistry::new("repl");
                reg.register_event(name, "world", value.picture())?;
                writeln!(out, "{}", classify_event(&reg.events()[0]))?;
            }
            None => {
                let mut reg = UniverseRegistry::new("repl");
                for (name, value) in &session.env {
                    if name != "_" {
                        reg.register_event(name.clone(), "world", value.picture())?;
                    }
                }
                writeln!(out, "{}", classify_universe(&reg)?)?;
            }
        },
        _ => {
            for (name, value) in session.eval_bindings(trimmed)? {
                writeln!(out, "{name} = {value}")?;
            }
        }
    }
    Ok(true)
}

fn usage(msg: &'static str) -> impl Fn() -> Error {
    move || {
        Error::syntax(
            crate::error::Pos { line: 1, col: 1 },
            format!("usage: {msg}"),
        )
    }
}

pub fn run(input: &mut impl BufRead, output: &mut impl Write) -> Result<()> {
    let mut session = Session::new();
    let mut line = String::new();
    loop {
        write!(output, "> ")?;
        output.flush()?;
        line.clear();
        if input.read_line(&mut line)? == 0 {
            writeln!(output)?;
            return Ok(());
        }
        match eval_line(&mut session, &line, output) {
            Ok(true) => {}
            Ok(false) => return Ok(()),
            Err(err) => writeln!(output, "error: {err}")?,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn drive(script: &str) -> String {
        let mut input = script.as_bytes();
        let mut output = Vec::new();
        run(&mut input, &mut output).unwrap();
        String::from_utf8(output).unwrap()
    }

    #[test]
    fn omega_session() {
        let out = drive("x = {x}\nwf x\nsat x dia(top)\n");
        assert!(out.contains("x = n0 where n0 = {n0}"));
        assert!(out.contains("false"));
        assert!(out.contains("true"));
    }

    #[test]
    fn unfold_binds_underscore() {
        let out = drive("x = {x}\nunfold x 2\nmembers _\n");
        assert!(out.contains("{{{}}}"), "unfold Ω 2 = {{{{∅}}}}: {out}");
        assert!(out.contains("[{{}}]"), "members of {{{{∅}}}}: {out}");
    }

    #[test]
    fn bindings_reference_earlier_bindings() {
        let out = drive("a = {}\nb = {a}\neq b a\nmembers b\n");
        assert!(out.contains("not equal"));
        assert!(out.contains("[{}]"));
    }

    #[test]
    fn mutual_recursion_on_one_line() {
        let out = drive("x = {y}; y = {x}\neq x y\n");
        assert!(out.contains("equal"));
    }

    #[test]
    fn errors_are_recoverable() {
        let out = drive("wf nope\nx = {}\nwf x\n");
        assert!(out.contains("error:"));
        assert!(out.contains("true"));
    }

    #[test]
    fn classify_session() {
        let out = drive("a = {}\nclassify a\nomega = {omega}\nclassify\n");
        assert!(out.contains("Wellfounded"));
        assert!(out.contains("WeakVR"));
    }

    #[test]
    fn rebinding_replaces() {
        // self-reference on a binding line refers to the line's own
        // variable, so the rebinding makes x = Ω
        let out = drive("x = {}\nx = {x}\nwf x\n");
        assert!(out.contains("false"), "{out}");
    }
}
