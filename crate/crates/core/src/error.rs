use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("lattice has no sites")]
    EmptyLattice,

    #[error("lattice dimension must be at least 1")]
    ZeroDimension,

    #[error("duplicate site name `{0}`")]
    DuplicateSite(String),

    #[error("unknown site `{0}`")]
    UnknownSite(String),

    #[error("bond {bond} connects site {site} to itself within one cell")]
    SelfLoop { bond: usize, site: usize },

    #[error("bond {bond} has non-positive or non-finite resistance {resistance}")]
    NonPositiveResistance { bond: usize, resistance: f64 },

    #[error("offset of length {found} does not match lattice dimension {expected}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("lattice is disconnected: {0}")]
    DisconnectedLattice(String),

    #[error("Laplacian is singular at x = {x:?} (condition estimate {condition:.3e})")]
    SingularPoint { x: Vec<f64>, condition: f64 },

    #[error("quadrature did not reach the target error: value {value}, error estimate {error_estimate:.3e} at order {order}")]
    NoConvergence {
        value: f64,
        error_estimate: f64,
        order: usize,
    },

    #[error("unknown lattice `{0}`")]
    UnknownLattice(String),

    #[error("invalid quadrature configuration: {0}")]
    InvalidQuadrature(String),

    #[error("invalid torus configuration: {0}")]
    InvalidTorus(String),

    #[error("mapping not available: {0}")]
    Mapping(String),

    #[error("lattice document: {0}")]
    Document(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Short machine-readable tag used by the CLI error object.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::EmptyLattice => "EmptyLattice",
            Error::ZeroDimension => "ZeroDimension",
            Error::DuplicateSite(_) => "DuplicateSite",
            Error::UnknownSite(_) => "UnknownSite",
            Error::SelfLoop { .. } => "SelfLoop",
            Error::NonPositiveResistance { .. } => "NonPositiveResistance",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::DisconnectedLattice(_) => "DisconnectedLattice",
            Error::SingularPoint { .. } => "SingularPoint",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::UnknownLattice(_) => "UnknownLattice",
            Error::InvalidQuadrature(_) => "InvalidQuadrature",
            Error::InvalidTorus(_) => "InvalidTorus",
            Error::Mapping(_) => "Mapping",
            Error::Document(_) => "Document",
            Error::InvalidArgument(_) => "InvalidArgument",
        }
    }
}
