use thiserror::Error;

use crate::hermitian::PointId;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported field configuration: {0}")]
    UnsupportedField(String),
    #[error("pole lies on the surface; its polar plane is tangent")]
    TangentPlane,
    #[error("point {0} is covered by the cap and cannot be added")]
    CapViolation(PointId),
    #[error("point {0} is not a member of the cap")]
    NotMember(PointId),
    #[error("point set is not a cap: {0} and {1} are conjugate")]
    NotACap(PointId, PointId),
    #[error("point set is not an ovoid (size {size}, expected {expected})")]
    NotAnOvoid { size: usize, expected: usize },
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("malformed cap file: {0}")]
    CapFile(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
