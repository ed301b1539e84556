use thiserror::Error;

use crate::subgroup::Violation;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid ADE type {label}{rank}: {reason}")]
    InvalidAde {
        label: String,
        rank: usize,
        reason: &'static str,
    },

    #[error("vertex {0} is out of range")]
    VertexOutOfRange(usize),

    #[error("label V_{label} is out of range for h = {h} (simples are V_0..V_{max})", max = .h - 2)]
    LabelOutOfRange { label: usize, h: usize },

    #[error("invalid Coxeter number h = {0} (need h >= 2)")]
    InvalidCoxeterNumber(usize),

    #[error("invalid height function: {0}")]
    InvalidHeight(String),

    #[error("vertex {vertex} is not a {required} of the orientation")]
    NotSourceOrSink {
        vertex: usize,
        required: &'static str,
    },

    #[error("{graph} is not a quantum subgroup graph: {violation}")]
    NotAdmissible { graph: String, violation: Violation },

    #[error("length cap {cap} is below 2h = {min}")]
    CapTooSmall { cap: usize, min: usize },

    #[error("representations live on different quivers")]
    QuiverMismatch,

    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("integer overflow in exact arithmetic")]
    Overflow,

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("slot ({0},{1}) of O_q is zero")]
    ZeroSlot(usize, usize),
}

pub type Result<T> = std::result::Result<T, Error>;
