//! Finitary modal sentences and their satisfaction by hypersets.
//!
//! The core language is negation, finite conjunction and ◇ ("has some member
//! described by"). ∨, □, △, top and bottom are distinct constructors that
//! normalize into the core three. Satisfaction follows the three axioms: a
//! set satisfies ¬φ iff it does not satisfy φ, satisfies a conjunction iff it
//! satisfies every conjunct, and satisfies ◇φ iff some member satisfies φ.
//!
//! Formulas are reference-counted DAGs: characteristic formulas share their
//! subformulas aggressively, and both normalization and evaluation memoize by
//! node identity, so rank-bounded work stays polynomial.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Pos, Result};
use crate::hyperset::HyperSet;
use crate::system::{NodeId, System};

/// Default cap on distinct formula nodes built by one characteristic-formula
/// construction.
pub const DEFAULT_BUDGET: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    Top,
    Bot,
    Neg(Arc<Formula>),
    And(Vec<Arc<Formula>>),
    Or(Vec<Arc<Formula>>),
    Dia(Arc<Formula>),
    Box_(Arc<Formula>),
    Delta(Vec<Arc<Formula>>),
}

impl Formula {
    pub fn top() -> Arc<Formula> {
        Arc::new(Formula::Top)
    }

    pub fn bot() -> Arc<Formula> {
        Arc::new(Formula::Bot)
    }

    // Associated constructor taking an `Arc`, not a unary-minus operator;
    // `std::ops::Neg` does not fit the `Arc`-shared representation.
    #[allow(clippy::should_implement_trait)]
    pub fn neg(f: Arc<Formula>) -> Arc<Formula> {
        Arc::new(Formula::Neg(f))
    }

    pub fn and(fs: Vec<Arc<Formula>>) -> Arc<Formula> {
        Arc::new(Formula::And(fs))
    }

    pub fn or(fs: Vec<Arc<Formula>>) -> Arc<Formula> {
        Arc::new(Formula::Or(fs))
    }

    pub fn dia(f: Arc<Formula>) -> Arc<Formula> {
        Arc::new(Formula::Dia(f))
    }

    pub fn box_(f: Arc<Formula>) -> Arc<Formula> {
        Arc::new(Formula::Box_(f))
    }

    pub fn delta(fs: Vec<Arc<Formula>>) -> Arc<Formula> {
        Arc::new(Formula::Delta(fs))
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |f: &mut fmt::Formatter<'_>, name: &str, fs: &[Arc<Formula>]| {
            write!(f, "{name}(")?;
            for (i, g) in fs.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{g}")?;
            }
            write!(f, ")")
        };
        match self {
            Formula::Top => write!(f, "top"),
            Formula::Bot => write!(f, "bot"),
            Formula::Neg(g) => write!(f, "not {g}"),
            Formula::And(fs) => list(f, "and", fs),
            Formula::Or(fs) => list(f, "or", fs),
            Formula::Dia(g) => write!(f, "dia({g})"),
            Formula::Box_(g) => write!(f, "box({g})"),
            Formula::Delta(fs) => list(f, "delta", fs),
        }
    }
}

fn ptr(f: &Arc<Formula>) -> usize {
    Arc::as_ptr(f) as usize
}

/// Rewrites a formula into the core fragment (negation, conjunction, ◇),
/// preserving subformula sharing. Idempotent.
pub fn normalize(f: &Arc<Formula>) -> Arc<Formula> {
    fn go(f: &Arc<Formula>, memo: &mut HashMap<usize, Arc<Formula>>) -> Arc<Formula> {
        if let Some(done) = memo.get(&ptr(f)) {
            return done.clone();
        }
        let out = match f.as_ref() {
            Formula::Top => Formula::and(vec![]),
            Formula::Bot => Formula::neg(Formula::and(vec![])),
            Formula::Neg(g) => Formula::neg(go(g, memo)),
            Formula::And(fs) => Formula::and(fs.iter().map(|g| go(g, memo)).collect()),
            Formula::Dia(g) => Formula::dia(go(g, memo)),
            // or(Φ) = not and(not φ : φ in Φ)
            Formula::Or(fs) => Formula::neg(Formula::and(
                fs.iter().map(|g| Formula::neg(go(g, memo))).collect(),
            )),
            // box(f) = not dia(not f)
            Formula::Box_(g) => Formula::neg(Formula::dia(Formula::neg(go(g, memo)))),
            // delta(Φ) = and(dia φ : φ in Φ) ∧ box(or Φ)
            Formula::Delta(fs) => {
                let inner: Vec<Arc<Formula>> = fs.iter().map(|g| go(g, memo)).collect();
                let mut conjuncts: Vec<Arc<Formula>> =
                    inner.iter().map(|g| Formula::dia(g.clone())).collect();
                let disjunction = Formula::neg(Formula::and(
                    inner.iter().map(|g| Formula::neg(g.clone())).collect(),
                ));
                conjuncts.push(Formula::neg(Formula::dia(Formula::neg(disjunction))));
                Formula::and(conjuncts)
            }
        };
        memo.insert(ptr(f), out.clone());
        out
    }
    go(f, &mut HashMap::new())
}

/// Whether `a ⊨ f`. Evaluation is memoized per (node, subformula) over the
/// canonical picture.
pub fn satisfies(a: &HyperSet, f: &Arc<Formula>) -> bool {
    let core = normalize(f);
    let mut memo: HashMap<(u32, usize), bool> = HashMap::new();
    eval(a.picture(), a.picture().root(), &core, &mut memo)
}

fn eval(
    s: &System,
    x: NodeId,
    f: &Arc<Formula>,
    memo: &mut HashMap<(u32, usize), bool>,
) -> bool {
    let key = (x.0, ptr(f));
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let v = match f.as_ref() {
        Formula::Neg(g) => !eval(s, x, g, memo),
        Formula::And(fs) => fs.iter().all(|g| eval(s, x, g, memo)),
        Formula::Dia(g) => s
            .children_unchecked(x)
            .iter()
            .any(|&c| eval(s, c, g, memo)),
        other => unreachable!("normalize left non-core constructor {other}"),
    };
    memo.insert(key, v);
    v
}

/// The rank-`rank` characteristic formula of `a`, with the default node
/// budget. Rank 0 is `top`; rank k+1 is △ over the members' rank-k formulas.
pub fn char_formula(a: &HyperSet, rank: usize) -> Result<Arc<Formula>> {
    char_formula_with_budget(a, rank, DEFAULT_BUDGET)
}

/// As [`char_formula`] but with an explicit cap on distinct formula nodes.
pub fn char_formula_with_budget(
    a: &HyperSet,
    rank: usize,
    budget: usize,
) -> Result<Arc<Formula>> {
    let s = a.picture();
    let mut memo: HashMap<(u32, usize), Arc<Formula>> = HashMap::new();
    let mut built = 0usize;
    char_node(s, s.root(), rank, budget, &mut built, &mut memo)
}

fn char_node(
    s: &System,
    x: NodeId,
    rank: usize,
    budget: usize,
    built: &mut usize,
    memo: &mut HashMap<(u32, usize), Arc<Formula>>,
) -> Result<Arc<Formula>> {
    if rank == 0 {
        return Ok(Formula::top());
    }
    if let Some(f) = memo.get(&(x.0, rank)) {
        return Ok(f.clone());
    }
    let mut parts = Vec::new();
    for &c in s.children_unchecked(x) {
        parts.push(char_node(s, c, rank - 1, budget, built, memo)?);
    }
    *built += parts.len() + 1;
    if *built > budget {
        return Err(Error::RankTooLarge { rank, budget });
    }
    let f = Formula::delta(parts);
    memo.insert((x.0, rank), f.clone());
    Ok(f)
}

/// Finite-rank observational equivalence: each set satisfies the other's
/// characteristic formula at the given rank.
pub fn modally_equivalent(a: &HyperSet, b: &HyperSet, rank: usize) -> Result<bool> {
    modally_equivalent_with_budget(a, b, rank, DEFAULT_BUDGET)
}

pub fn modally_equivalent_with_budget(
    a: &HyperSet,
    b: &HyperSet,
    rank: usize,
    budget: usize,
) -> Result<bool> {
    let phi_a = char_formula_with_budget(a, rank, budget)?;
    let phi_b = char_formula_with_budget(b, rank, budget)?;
    Ok(satisfies(b, &phi_a) && satisfies(a, &phi_b))
}

// ---------- parser ----------

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
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

    fn skip_ws(&mut self) {
        while let Some(&c) = self.src.get(self.pos) {
            if c.is_ascii_whitespace() {
                if c == b'\n' {
                    self.line += 1;
                    self.col = 1;
                } else {
                    self.col += 1;
                }
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> Result<()> {
        match self.peek() {
            Some(got) if got == c => {
                self.pos += 1;
                self.col += 1;
                Ok(())
            }
            got => Err(Error::syntax(
                self.here(),
                format!(
                    "expected `{}`, found {}",
                    c as char,
                    got.map_or("end of input".to_string(), |g| format!("`{}`", g as char))
                ),
            )),
        }
    }

    fn word(&mut self) -> Result<(String, Pos)> {
        self.skip_ws();
        let pos = self.here();
        let start = self.pos;
        while let Some(&c) = self.src.get(self.pos) {
            if c.is_ascii_alphabetic() || c == b'_' {
                self.pos += 1;
                self.col += 1;
            } else {
                break;
            }
        }
        if start == self.pos {
            return Err(Error::syntax(pos, "expected formula keyword"));
        }
        Ok((
            std::str::from_utf8(&self.src[start..self.pos])
                .expect("ascii word")
                .to_string(),
            pos,
        ))
    }
}

/// Parses `top | bot | not F | and(F, ..., F) | or(...) | dia(F) | box(F) |
/// delta(...)`. Whitespace-insensitive; empty argument lists are allowed.
pub fn parse_formula(text: &str) -> Result<Arc<Formula>> {
    let mut lx = Lexer::new(text);
    let f = parse_inner(&mut lx)?;
    if let Some(c) = lx.peek() {
        return Err(Error::syntax(
            lx.here(),
            format!("trailing input starting at `{}`", c as char),
        ));
    }
    Ok(f)
}

fn parse_list(lx: &mut Lexer) -> Result<Vec<Arc<Formula>>> {
    lx.eat(b'(')?;
    let mut fs = Vec::new();
    if lx.peek() != Some(b')') {
        loop {
            fs.push(parse_inner(lx)?);
            match lx.peek() {
                Some(b',') => lx.eat(b',')?,
                _ => break,
            }
        }
    }
    lx.eat(b')')?;
    Ok(fs)
}

fn parse_unary(lx: &mut Lexer) -> Result<Arc<Formula>> {
    lx.eat(b'(')?;
    let f = parse_inner(lx)?;
    lx.eat(b')')?;
    Ok(f)
}

fn parse_inner(lx: &mut Lexer) -> Result<Arc<Formula>> {
    let (word, pos) = lx.word()?;
    match word.as_str() {
        "top" => Ok(Formula::top()),
        "bot" => Ok(Formula::bot()),
        "not" => Ok(Formula::neg(parse_inner(lx)?)),
        "and" => Ok(Formula::and(parse_list(lx)?)),
        "or" => Ok(Formula::or(parse_list(lx)?)),
        "dia" => Ok(Formula::dia(parse_unary(lx)?)),
        "box" => Ok(Formula::box_(parse_unary(lx)?)),
        "delta" => Ok(Formula::delta(parse_list(lx)?)),
        other => Err(Error::syntax(pos, format!("unknown operator `{other}`"))),
    }
}
