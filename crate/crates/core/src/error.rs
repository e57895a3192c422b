use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("map is not well defined: image of relator {relator} is not a relation in the target")]
    IllDefinedMap { relator: usize },

    #[error("differential composition d_{degree} ∘ d_{} is nonzero", degree + 1)]
    DifferentialSquareNonzero { degree: i64 },

    #[error("group in degree {degree} is not free")]
    NonFreeLevel { degree: i64 },

    #[error("poset relation contains a cycle through {0}")]
    CyclicPoset(String),

    #[error("unknown object {0}")]
    UnknownObject(String),

    #[error("functoriality fails: path {first} and path {second} induce different maps")]
    Functoriality { first: String, second: String },

    #[error("map in degree {degree} does not commute with the differentials{}", context_suffix(.context))]
    NotChainMap { degree: i64, context: String },

    #[error("sequence is not short exact at object {object}")]
    LevelwiseNotExact { object: String },

    #[error("no initial object: cofinal reduction unavailable")]
    CofinalReductionUnavailable,

    #[error("subposet is not cofinal: object {witness} {reason}")]
    NotCofinal { witness: String, reason: String },

    #[error("index poset needs {required} objects, budget is {budget}")]
    IndexBudgetExceeded { required: u128, budget: u128 },

    #[error("bicomplex invariant fails at cell ({s},{t}): {what}")]
    BicomplexInvariant { s: i64, t: i64, what: String },

    #[error("window too short: {0}")]
    WindowTooShort(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

fn context_suffix(context: &str) -> String {
    if context.is_empty() {
        String::new()
    } else {
        format!(" ({context})")
    }
}
