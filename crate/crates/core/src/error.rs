use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("argument outside the domain of {function}: {detail}")]
    Domain {
        function: &'static str,
        detail: String,
    },

    #[error("the zero quaternion has no polar decomposition")]
    ZeroQuaternion,

    #[error("quaternion is not a unit: reduced norm {norm}")]
    NotUnit { norm: f64 },

    #[error("grid reciprocity violated: {product} > {bound} ({detail})")]
    Aliasing {
        product: f64,
        bound: f64,
        detail: &'static str,
    },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("quadrature did not resolve {what}: last two estimates differ by {diff:e} (tolerance {tol:e})")]
    Resolution {
        what: &'static str,
        diff: f64,
        tol: f64,
    },

    #[error("extrapolation did not converge: successive estimates differ by {diff:e} (tolerance {tol:e})")]
    Nonconvergence { diff: f64, tol: f64 },

    #[error("profile does not decay at the grid boundary: {boundary:e} relative to peak")]
    NoDecay { boundary: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn domain(function: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            function,
            detail: detail.into(),
        }
    }
}
