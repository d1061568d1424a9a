use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("truncation degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("weight alpha must exceed -1, got {0}")]
    InvalidAlpha(f64),

    #[error("point {re}{im:+}i lies outside the open unit disk")]
    OutsideDisk { re: f64, im: f64 },

    #[error("derivative order {order} exceeds truncation degree {degree}")]
    OrderTooLarge { order: usize, degree: usize },

    #[error("phi not a self-map of the disk (max |phi| = {0})")]
    NotSelfMap(f64),

    #[error("value is not unimodular: |{name}| = {modulus}")]
    NotUnimodular { name: &'static str, modulus: f64 },

    #[error("invalid symbols: {0}")]
    InvalidSymbols(String),

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
