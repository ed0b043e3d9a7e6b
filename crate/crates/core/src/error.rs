use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("table is not associative: ({x}*{y})*{z} != {x}*({y}*{z})")]
    NotAssociative { x: usize, y: usize, z: usize },

    #[error("element {identity} is not a two-sided identity (fails at {x})")]
    BadIdentity { identity: usize, x: usize },

    #[error("shape error: {0}")]
    Shape(String),

    #[error("size limit exceeded: {what} needs {requested}, limit is {limit}")]
    SizeLimit {
        what: String,
        requested: u128,
        limit: u128,
    },

    #[error("map is not a monoid homomorphism: {0}")]
    NotAHomomorphism(String),

    #[error("maps are not composable: {0}")]
    Composability(String),

    #[error("triangle does not commute over the base at element {x}")]
    Triangle { x: usize },

    #[error("not an action by endomorphisms: {0}")]
    NotAnAction(String),

    #[error("invalid lax action: axiom {axiom} fails at {witness}")]
    InvalidAction { axiom: String, witness: String },

    #[error("invalid lax homomorphism: {0}")]
    InvalidLaxHom(String),

    #[error("invalid 2-cell: {0}")]
    InvalidCell(String),

    #[error("not a prefibration: no precartesian element above {n}")]
    NotPrefibration { n: usize },

    #[error("invalid cleavage: {0}")]
    InvalidCleavage(String),

    #[error("automorphism does not preserve the kernel (element {x})")]
    NotKernelPreserving { x: usize },

    #[error("automorphism is not cartesian (precartesian {x} maps outside)")]
    NotCartesian { x: usize },

    #[error("automorphism does not descend to the base: fiber of {n} is split")]
    IllDefinedDescent { n: usize },

    #[error("cocycle is not regular at ({m},{n})")]
    NotRegular { m: usize, n: usize },

    #[error("not a regular Schreier extension: {0}")]
    NotRegularSchreier(String),

    #[error("invalid cocycle: {0}")]
    InvalidCocycle(String),

    #[error("invalid module: {0}")]
    InvalidModule(String),

    #[error("verification failed: {check}: {witness}")]
    Falsified { check: String, witness: String },

    #[error("catalog error: {0}")]
    Catalog(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn falsified(check: impl Into<String>, witness: impl Into<String>) -> Self {
        Error::Falsified {
            check: check.into(),
            witness: witness.into(),
        }
    }

    pub fn is_size_limit(&self) -> bool {
        matches!(self, Error::SizeLimit { .. })
    }
}
