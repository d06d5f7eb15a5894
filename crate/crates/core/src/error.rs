use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("valuation is indeterminate at the current precision")]
    IndeterminateValuation,
    #[error("element has negative valuation")]
    NegativeValuation,
    #[error("precision exhausted: {0}")]
    Precision(String),
    #[error("invalid defining polynomial: {0}")]
    InvalidPolynomial(String),
    #[error("unsupported tower: {0}")]
    UnsupportedTower(String),
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("bad reduction at p = {0}")]
    BadReduction(u64),
    #[error("singular curve")]
    SingularCurve,
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("not covered by the classification: {0}")]
    NotCovered(String),
    #[error("escalation did not close by level {0}")]
    EscalationCap(u32),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub fn is_precision(&self) -> bool {
        matches!(self, Error::Precision(_) | Error::IndeterminateValuation)
    }
}

pub type Result<T> = std::result::Result<T, Error>;
