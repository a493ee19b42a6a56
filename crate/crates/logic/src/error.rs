use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LogicError {
    #[error("syntax error at {line}:{col}: {message}")]
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("unbound variable `{var}` at {line}:{col}")]
    UnboundVariable {
        var: String,
        line: usize,
        col: usize,
    },
    #[error("arity mismatch for `{pred}` at {line}:{col}: declared {expected}, used with {found}")]
    ArityMismatch {
        pred: String,
        expected: usize,
        found: usize,
        line: usize,
        col: usize,
    },
    #[error("variable `{var}` at {line}:{col} shadows an enclosing binder")]
    ShadowedVariable {
        var: String,
        line: usize,
        col: usize,
    },
    #[error("unknown predicate `{name}` (not registered in the grounding domain)")]
    UnknownPredicate { name: String },
    #[error("empty grounding domain for variable `{var}`")]
    EmptyDomain { var: String },
    #[error("unsupported generator: {kind} admits no additive generator")]
    UnsupportedGenerator { kind: String },
    #[error("known predicate `{name}` returned {value}; outputs must be exactly 0 or 1")]
    KnownPredicateRange { name: String, value: f64 },
    #[error("invalid constraint weight `{raw}` on line {line}")]
    InvalidWeight { raw: String, line: usize },
    #[error("formula root must be a universal quantifier")]
    NotUniversal,
    #[error("quantifier encountered where a ground connective was expected")]
    UnexpectedQuantifier,
    #[error("no positive examples supplied for the supervised predicate")]
    EmptyPositives,
}
