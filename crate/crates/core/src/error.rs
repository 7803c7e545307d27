use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    Params(String),

    #[error("grid too small for injection: N^2 = {cells} < n = {n}")]
    GridTooSmall { cells: usize, n: usize },

    #[error("base graphs have mismatched orders ({red} vs {blue})")]
    OrderMismatch { red: usize, blue: usize },

    #[error("base graph roles swapped: expected red then blue")]
    WrongSide,

    #[error("placement is not injective: cell ({row}, {col}) used twice")]
    NotInjective { row: usize, col: usize },

    #[error("placement refers to cell ({row}, {col}) outside an {side}x{side} grid")]
    CellOutOfRange { row: usize, col: usize, side: usize },

    #[error("set has {got} vertices, expected k = {expected}")]
    WrongSetSize { got: usize, expected: usize },

    #[error("vertex {vertex} out of range for order {order}")]
    VertexOutOfRange { vertex: usize, order: usize },

    #[error("triple {0:?} repeats a vertex")]
    DegenerateTriple([usize; 3]),

    #[error("3-graph needs N >= 3, got {0}")]
    HyperOrder(usize),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
