use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Input outside the domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The filtered amplitude vanishes, so its phase (and anything derived
    /// from the phase) is undefined.
    #[error("singular point at beta = {beta}, dkd = {dkd}: filtered amplitude vanishes")]
    SingularPoint { beta: f64, dkd: f64 },

    #[error("degenerate loop: |z| below tolerance at beta = {beta}, dkd = {dkd}")]
    DegenerateLoop { beta: f64, dkd: f64 },

    /// A closed form was evaluated at its pole.
    #[error("pole: {0}")]
    Pole(String),

    #[error("root solver failed: {0}")]
    SolverFailure(String),

    #[error("non-finite integrand at omega = {omega}")]
    NonFinite { omega: f64 },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
