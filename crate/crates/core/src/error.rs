use thiserror::Error;

use crate::algebra::AmbientSpace;
use crate::code::HadamardFailure;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("space mismatch: {0} vs {1}")]
    SpaceMismatch(AmbientSpace, AmbientSpace),

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("element of order four has no M-set")]
    NotTorsion,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("closure exceeded the cap of {0} elements")]
    ClosureCap(usize),

    #[error("Gray map is not injective on this group")]
    NotInjective,

    #[error("not a Hadamard code: {0}")]
    NotHadamard(HadamardFailure),

    #[error("normalization failed: {0}")]
    Normalization(String),

    #[error("unclassifiable group: {0}")]
    Unclassifiable(String),

    #[error("standardization failed: {0}")]
    Standardization(String),

    #[error("case mismatch: case {case} predicts {expected}, measured k={k} r={r}")]
    CaseMismatch {
        case: String,
        expected: String,
        k: usize,
        r: usize,
    },

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("existence conditions violated: {0}")]
    Existence(String),

    #[error("(k={k}, r={r}) is not allowable at m={m}; nearest allowable pairs: {}", format_pairs(.nearest))]
    NotAllowable {
        m: usize,
        k: usize,
        r: usize,
        nearest: Vec<(usize, usize)>,
    },

    #[error("infeasible plan: {0}")]
    Infeasible(String),
}

fn format_pairs(pairs: &[(usize, usize)]) -> String {
    pairs
        .iter()
        .map(|(k, r)| format!("(k={k}, r={r})"))
        .collect::<Vec<_>>()
        .join(", ")
}
