use thiserror::Error;

/// Errors shared across the whole crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("denominator must be nonzero")]
    ZeroDenominator,

    #[error("negative input not allowed: {0}")]
    NegativeInput(String),

    #[error("argument out of range: {0}")]
    ArgRange(String),

    #[error("node {0} occurs more than once; for coincident nodes use the confluent path")]
    DuplicateNode(String),

    #[error("node {0} is zero; zero nodes are not supported")]
    ZeroNode(String),

    #[error("evaluation at z = 0 of an expression with a pole is unsupported")]
    EvalAtZero,

    #[error("nodes coincide within working precision")]
    CoincidentNodes,

    #[error("resource guard tripped: {0}")]
    ResourceGuard(String),

    #[error("node {node} lies at or beyond the radius of convergence {radius}")]
    RadiusViolation { node: String, radius: f64 },
}
