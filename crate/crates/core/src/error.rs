use alloc::string::String;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("mesh topology error: {0}")]
    Topology(String),
    #[error("degenerate face {face}")]
    DegenerateFace { face: usize },
    #[error("mesh has {vertices} vertices, dense solve limit is {limit}")]
    MeshTooLarge { vertices: usize, limit: usize },
    #[error("argument {arg} outside the series budget {limit}")]
    Range { arg: f64, limit: f64 },
    #[error("degenerate pencil: denominator is numerically zero")]
    DegeneratePencil,
    #[error("constrained trial space is empty; raise the order")]
    StarvedSpace,
    #[error("missing spectrum: {0}")]
    MissingSpectrum(String),
    #[error("centering violated: {0}")]
    CenteringViolated(String),
    #[error("check {0} requires a convex domain")]
    ConvexityRequired(&'static str),
    #[error("check {id} is not applicable in dimension {dim}")]
    NotApplicable { id: &'static str, dim: usize },
}

pub type Result<T> = core::result::Result<T, Error>;
