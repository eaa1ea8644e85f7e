use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("graph is not well-founded (node {node} lies on or reaches a cycle)")]
    NotWellFounded { node: usize },

    /// `actual` is `usize::MAX` when the true size does not fit in a `usize`.
    #[error("size limit exceeded: {what} is {}, limit is {limit}", show_size(*actual))]
    SizeLimitExceeded {
        what: &'static str,
        actual: usize,
        limit: usize,
    },

    #[error("graph is not extensional: nodes {0} and {1} have the same children")]
    NotExtensional(usize, usize),

    #[error("not an end-extension: {0}")]
    NotEndExtension(String),

    #[error("unknown set id #{0}")]
    UnknownSet(u64),

    #[error("invalid isomorphism: {0}")]
    InvalidIsomorphism(String),

    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("duplicate definition of `{name}` at {line}:{column}")]
    DuplicateDefinition { name: String, line: usize, column: usize },

    #[error("undefined name `{0}`")]
    UndefinedName(String),

    #[error("`{0}` is defined only in terms of itself and never names a set")]
    UnguardedAlias(String),

    #[error("atom `{0}` declared outside Boffa mode; only Boffa mode has more than one Quine atom")]
    AtomOutsideBoffa(String),

    #[error("atom map is not injective: atoms {0} and {1} share image")]
    NotInjective(usize, usize),

    #[error("invalid atom map: {0}")]
    InvalidAtomMap(String),

    #[error("invalid group table: {0}")]
    InvalidGroup(String),

    #[error("group order {order} exceeds limit {limit}")]
    GroupTooLarge { order: usize, limit: usize },

    #[error("group order {order} exceeds limit {limit} for isomorphism testing")]
    OrderTooLarge { order: usize, limit: usize },

    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

fn show_size(n: usize) -> String {
    if n == usize::MAX {
        format!("above {n}")
    } else {
        n.to_string()
    }
}
