use thiserror::Error;

use crate::validate::ValidationReport;

#[derive(Debug, Error)]
pub enum OtError {
    #[error("invalid system parameter: N must be at least 3, got {0}")]
    InvalidParams(usize),
    #[error("head/tail data undefined on the zero exponent")]
    UndefinedOnZero,
    #[error("index {index} outside {lo}..={hi}")]
    IndexOutOfRange { index: usize, lo: usize, hi: usize },
    #[error("sequence lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("tower height {0} exceeds the cap {1}")]
    CapExceeded(usize, usize),
    #[error("no part of the exponent admits the sequence as a step-down")]
    NoWitness,
    #[error("collapsing chain stops at `{0}` before reaching K")]
    MalformedChain(String),
    #[error("term `{0}` is not a member of OT/E")]
    UnvalidatedInput(String),
    #[error("`{0}` is not admissible as a K-set subscript (need 0, K or a psi-term)")]
    BadDelta(String),
    #[error("`{0}` is not a psi-term with a nonzero coefficient sequence")]
    NotMahloTerm(String),
    #[error("Veblen arguments must lie below K")]
    ArgsNotBelowK,
    #[error("Omega index `{0}` must satisfy 0 < b < K")]
    OutOfRange(String),
    #[error("validation failed: {}", .0.first_failure().unwrap_or("unknown"))]
    Invalid(Box<ValidationReport>),
    #[error("enumeration budget of {0} terms exceeded")]
    BudgetExceeded(usize),
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("coefficient sequence has {found} entries, expected {expected}")]
    Arity { found: usize, expected: usize },
}

pub type Result<T> = std::result::Result<T, OtError>;

impl OtError {
    /// A stable short name for machine-readable error lines.
    pub fn kind(&self) -> &'static str {
        match self {
            OtError::InvalidParams(_) => "invalid-params",
            OtError::UndefinedOnZero => "undefined-on-zero",
            OtError::IndexOutOfRange { .. } => "index-out-of-range",
            OtError::LengthMismatch(..) => "length-mismatch",
            OtError::CapExceeded(..) => "cap-exceeded",
            OtError::NoWitness => "no-witness",
            OtError::MalformedChain(_) => "malformed-chain",
            OtError::UnvalidatedInput(_) => "unvalidated-input",
            OtError::BadDelta(_) => "bad-delta",
            OtError::NotMahloTerm(_) => "not-mahlo-term",
            OtError::ArgsNotBelowK => "args-not-below-k",
            OtError::OutOfRange(_) => "out-of-range",
            OtError::Invalid(_) => "invalid",
            OtError::BudgetExceeded(_) => "budget-exceeded",
            OtError::Syntax { .. } => "syntax",
            OtError::Arity { .. } => "arity",
        }
    }
}
