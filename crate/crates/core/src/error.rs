use thiserror::Error;

/// Errors surfaced by the bound engine, graph tools, solver and sampler.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A resource guard was exceeded (override with the force flag where offered).
    #[error("guard exceeded: {what} = {actual} > {limit}")]
    Guard {
        what: &'static str,
        limit: u64,
        actual: u64,
    },

    /// Adaptive quadrature did not reach the requested tolerance within the
    /// bisection depth limit.  Carries the best estimate so callers can audit.
    #[error("quadrature did not converge: best estimate {estimate:e}, achieved relative tolerance {achieved:e}")]
    QuadratureNonConvergence { estimate: f64, achieved: f64 },

    /// A theorem hypothesis does not hold for the requested parameters.
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    /// Graph input contains a self-loop.
    #[error("graph parse error: self-loop at vertex {0}")]
    SelfLoop(u32),

    /// Graph input repeats an edge.
    #[error("graph parse error: duplicate edge {0}-{1}")]
    DuplicateEdge(u32, u32),

    /// Graph input leaves a vertex with no incident edge.
    #[error("graph parse error: isolated vertex {0}")]
    IsolatedVertex(u32),

    /// Malformed graph text or preset name.
    #[error("graph parse error: {0}")]
    GraphSyntax(String),

    /// Invalid configuration value.
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
