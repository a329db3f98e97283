use thiserror::Error;

/// Position of a token in equation or formula source text, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl std::fmt::Display for Pos {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown node {0}")]
    UnknownNode(String),
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: Pos, msg: String },
    #[error("unknown variable `{name}` at {pos}")]
    UnknownVariable { name: String, pos: Pos },
    #[error("no `root` directive in system source")]
    NoRoot,
    #[error("cyclic input: collapse requires an acyclic picture")]
    CyclicInput,
    #[error("duplicate event name `{0}` in registry")]
    DuplicateName(String),
    #[error("registry has no events")]
    EmptyRegistry,
    #[error("formula budget exceeded: rank {rank} needs more than {budget} formula nodes")]
    RankTooLarge { rank: usize, budget: usize },
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn syntax(pos: Pos, msg: impl Into<String>) -> Self {
        Error::Syntax {
            pos,
            msg: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
