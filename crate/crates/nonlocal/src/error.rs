use thiserror::Error;

/// Errors raised by box construction, quasi-probability handling, the LP
/// solver, and the principle checkers.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A box's one-party marginals depend on the distant party's setting, so
    /// its correlators (and everything downstream of them) are ill-defined.
    #[error("signaling marginals: {0}")]
    SignalingMarginals(String),

    /// A quasi-probability distribution produced an observable marginal
    /// outside [0,1].
    #[error("observable marginal out of range: {0}")]
    ObservableNegativity(String),

    /// Multi-copy atom table would exceed the supported size.
    #[error("size limit exceeded: {0}")]
    SizeLimit(String),

    /// No joint quasi-probability distribution reproduces the box; by the
    /// NS equivalence this means the box is signaling.
    #[error("no jqpd exists for this box (box is signaling)")]
    NoJqpdExists,

    /// Local-orthogonality evaluation was given events that are not pairwise
    /// orthogonal.
    #[error("events are not pairwise orthogonal: {0}")]
    NonOrthogonalEvents(String),
}
