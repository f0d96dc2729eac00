use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProbError {
    #[error("malformed probability literal `{0}`")]
    Malformed(String),
    #[error("zero or negative denominator in `{0}`")]
    ZeroDenominator(String),
    #[error("probability {0} is outside [0, 1]")]
    OutOfRange(String),
}

/// Expression parse failure. `position` is a character offset.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at position {position}")]
pub struct ParseError {
    pub position: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected `{0}`")]
    Unexpected(char),
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("expected `{0}`")]
    Expected(&'static str),
    #[error("{0}")]
    Prob(#[from] ProbError),
    #[error("letter `{0}` is not in the alphabet")]
    UnknownSymbol(char),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChoiceError {
    #[error("weights sum to {0}, which exceeds 1")]
    MassExceedsOne(String),
    #[error("weight {0} is outside [0, 1]")]
    WeightOutOfRange(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AxiomError {
    #[error("{schema}: missing binding for `{var}`")]
    MissingBinding { schema: &'static str, var: &'static str },
    #[error("{schema}: probability `{var}` = {value} is outside [0, 1]")]
    OutOfRange {
        schema: &'static str,
        var: &'static str,
        value: String,
    },
    #[error("{schema}: undefined instance, {reason}")]
    Undefined { schema: &'static str, reason: String },
    #[error("{schema}: side condition E(e) = 0 fails, E(e) = {value}")]
    SideCondition { schema: &'static str, value: String },
}

#[derive(Debug, Error)]
pub enum GptsError {
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("letter `{0}` is not in the alphabet")]
    UnknownLetter(char),
    #[error("duplicate state `{0}`")]
    DuplicateState(String),
    #[error("schema violation at {pointer}: {message}")]
    Schema { pointer: String, message: String },
    #[error("invalid transition system: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<crate::gpts::Violation>),
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SystemError {
    #[error("row `{row}` sums to {sum}, expected 1")]
    RowSum { row: String, sum: String },
    #[error("coefficient M({row}, {col}) is not productive: E = {value}")]
    NotProductive { row: String, col: String, value: String },
    #[error("probability {value} at ({row}, {col}) is outside [0, 1]")]
    OutOfRange { row: String, col: String, value: String },
    #[error("coefficient tables do not match {0} unknowns")]
    Shape(usize),
    #[error("elimination order is not a permutation of the unknowns")]
    BadOrder,
    #[error("unknown `{0}`")]
    UnknownVariable(String),
}

#[derive(Debug, Error)]
pub enum SolveError {
    #[error(transparent)]
    Gpts(#[from] GptsError),
    #[error("equation system invariant violated: {0}")]
    System(#[from] SystemError),
}
