use thiserror::Error;

/// Errors surfaced by the engine.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A Gram matrix with zero determinant where a nondegenerate one is required.
    #[error("degenerate form: {0}")]
    Degenerate(String),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("unknown identifier `{0}`")]
    UnknownIdent(String),

    /// Two expression factors whose objects do not line up.
    #[error("not composable: {0}")]
    NotComposable(String),
}
