//! Parser for the textual equation format.
//!
//! ```text
//! # comment
//! x = {y, z}; y = {}
//! z = {z}
//! root x
//! ```
//!
//! Each equation declares one variable (one node) and its member occurrences
//! (its outgoing edges). The `root` directive picks the point of the system;
//! it may be omitted when every variable is meant to be solved in turn.

use std::collections::HashMap;

use crate::error::{Error, Pos, Result};
use crate::system::System;

/// A parsed equation system, not yet committed to a root.
#[derive(Debug, Clone)]
pub struct Equations {
    names: Vec<String>,
    members: Vec<Vec<usize>>,
    root: Option<usize>,
}

struct Scanner<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Scanner<'a> {
    fn new(src: &'a str) -> Self {
        Scanner {
            src: src.as_bytes(),
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    fn here(&self) -> Pos {
        Pos {
            line: self.line,
            col: self.col,
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        if c == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    /// Skips spaces, tabs, carriage returns and comments. Newlines and
    /// semicolons are statement separators and are skipped too; the grammar
    /// never needs them for disambiguation because statements start with an
    /// identifier.
    fn skip_trivia(&mut self) {
        while let Some(c) = self.peek() {
            match c {
                b' ' | b'\t' | b'\r' | b'\n' | b';' => {
                    self.bump();
                }
                b'#' => {
                    while let Some(c) = self.peek() {
                        if c == b'\n' {
                            break;
                        }
                        self.bump();
                    }
                }
                _ => break,
            }
        }
    }

    fn skip_inline(&mut self) {
        while matches!(self.peek(), Some(b' ' | b'\t' | b'\r')) {
            self.bump();
        }
    }

    fn ident(&mut self) -> Result<(String, Pos)> {
        let pos = self.here();
        match self.peek() {
            Some(c) if c == b'_' || c.is_ascii_alphabetic() => {}
            _ => return Err(Error::syntax(pos, "expected identifier")),
        }
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c == b'_' || c.is_ascii_alphanumeric() {
                self.bump();
            } else {
                break;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos])
            .expect("ascii identifier")
            .to_string();
        Ok((text, pos))
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        let pos = self.here();
        match self.bump() {
            Some(got) if got == c => Ok(()),
            Some(got) => Err(Error::syntax(
                pos,
                format!("expected `{}`, found `{}`", c as char, got as char),
            )),
            None => Err(Error::syntax(
                pos,
                format!("expected `{}`, found end of input", c as char),
            )),
        }
    }
}

impl Equations {
    pub fn parse(text: &str) -> Result<Self> {
        let mut sc = Scanner::new(text);
        let mut names: Vec<String> = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        // member occurrences by name, resolved after all declarations are seen
        let mut raw_members: Vec<Vec<(String, Pos)>> = Vec::new();
        let mut root: Option<(String, Pos)> = None;

        loop {
            sc.skip_trivia();
            if sc.peek().is_none() {
                break;
            }
            let (word, pos) = sc.ident()?;
            if word == "root" {
                sc.skip_inline();
                let (name, npos) = sc.ident()?;
                if root.is_some() {
                    return Err(Error::syntax(pos, "duplicate `root` directive"));
                }
                root = Some((name, npos));
                continue;
            }
            if index.contains_key(&word) {
                return Err(Error::syntax(pos, format!("`{word}` defined twice")));
            }
            sc.skip_inline();
            sc.expect(b'=')?;
            sc.skip_inline();
            sc.expect(b'{')?;
            let mut occ: Vec<(String, Pos)> = Vec::new();
            sc.skip_trivia();
            if sc.peek() != Some(b'}') {
                loop {
                    sc.skip_trivia();
                    occ.push(sc.ident()?);
                    sc.skip_trivia();
                    match sc.peek() {
                        Some(b',') => {
                            sc.bump();
                        }
                        _ => break,
                    }
                }
            }
            sc.skip_trivia();
            sc.expect(b'}')?;
            index.insert(word.clone(), names.len());
            names.push(word);
            raw_members.push(occ);
        }

        let resolve = |(name, pos): &(String, Pos)| -> Result<usize> {
            index.get(name).copied().ok_or_else(|| Error::UnknownVariable {
                name: name.clone(),
                pos: *pos,
            })
        };
        let members = raw_members
            .iter()
            .map(|occ| occ.iter().map(resolve).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let root = match &root {
            Some(r) => Some(resolve(r)?),
            None => None,
        };
        Ok(Equations {
            names,
            members,
            root,
        })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn has_root(&self) -> bool {
        self.root.is_some()
    }

    pub fn root_name(&self) -> Option<&str> {
        self.root.map(|i| self.names[i].as_str())
    }

    fn build(&self, root: usize) -> System {
        let edges: Vec<(usize, usize)> = self
            .members
            .iter()
            .enumerate()
            .flat_map(|(x, ms)| ms.iter().map(move |&y| (x, y)))
            .collect();
        System::build(self.names.len(), &edges, root).expect("indices resolved during parse")
    }

    /// The system selected by the `root` directive.
    pub fn system(&self) -> Result<System> {
        self.root.map(|r| self.build(r)).ok_or(Error::NoRoot)
    }

    /// The system rooted at a named variable.
    pub fn system_for(&self, name: &str) -> Result<System> {
        let idx = self
            .names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownNode(name.to_string()))?;
        Ok(self.build(idx))
    }
}

/// Parses equation text that must carry a `root` directive.
pub fn parse_system(text: &str) -> Result<System> {
    Equations::parse(text)?.system()
}
