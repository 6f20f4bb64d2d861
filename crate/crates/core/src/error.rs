use thiserror::Error;

use crate::liealg::Violation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("Killing form is not negative definite (smallest eigenvalue of -B is {min_eigenvalue:e})")]
    NotCompact { min_eigenvalue: f64 },

    #[error("vector {index} is linearly dependent on its predecessors (residual {residual:e})")]
    RankDeficient { index: usize, residual: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("not a Cartan matrix of finite type: {0}")]
    NotFiniteType(String),

    #[error("structure constant sign consistency failure: {0}")]
    SignConsistency(String),

    #[error("map is not an involutive automorphism: {0}")]
    NotInvolution(String),

    #[error("center of k has dimension {0}, expected 1")]
    CenterDimension(usize),

    #[error("(ad_W)^2 restricted to p is not a negative scalar: eigenvalues span [{min:e}, {max:e}]")]
    NotComplexStructure { min: f64, max: f64 },

    #[error("no regular element found after {attempts} draws")]
    NoRegularElement { attempts: usize },

    #[error("restricted root system: {0}")]
    RootSystem(String),

    #[error("Z has a component of norm {residual:e} outside k_0 + k_2e1 + k_2e2")]
    ZDecomposition { residual: f64 },

    #[error("unknown root {0:?}")]
    UnknownRoot((i32, i32)),

    #[error("unknown check id {0:?}")]
    UnknownCheck(String),

    #[error("check {0} needs the restricted root system")]
    MissingRoots(String),

    #[error("level set search failed: {0}")]
    LevelSet(String),

    #[error("sphere extremum search did not converge: {0}")]
    Divergence(String),

    #[error("invalid structure-constant document: {} violation(s), first: {}", .0.len(), .0.first().map(|v| v.to_string()).unwrap_or_default())]
    InvalidModel(Vec<Violation>),

    #[error("malformed document: {0}")]
    Format(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
