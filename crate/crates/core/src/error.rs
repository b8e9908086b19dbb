use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("mode index 0 is not a boson mode; use the charge operator")]
    ZeroMode,
    #[error("operator changes the level inside sector (charge {charge}, level {level})")]
    LevelChanging { charge: i64, level: u32 },
    #[error("operator kind {0} requires a statistics parameter")]
    MissingParameter(&'static str),
    #[error("momentum vector must be weakly decreasing and non-negative, got {0:?}")]
    NotOrdered(Vec<i64>),
    #[error("vanishing gap at offset {0}")]
    ZeroGap(String),
    #[error("offset enumeration exceeded {0} entries")]
    EnumerationLimit(usize),
    #[error("eigenvector certification failed for n = {n:?}: residual has {terms} nonzero terms")]
    Certification { n: Vec<i64>, terms: usize },
    #[error("polynomial routes disagree for n = {0:?}")]
    RouteMismatch(Vec<i64>),
    #[error("oracle eigenvalue collision between {0} and {1}")]
    EigenvalueCollision(String, String),
    #[error("vector has a term outside sector (charge {charge}, level {level})")]
    OutsideSector { charge: i64, level: u32 },
    #[error("inadmissible evaluation point: {0}")]
    InadmissiblePoint(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
