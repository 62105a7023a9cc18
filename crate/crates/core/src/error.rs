use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Input outside the domain of an operation (invalid point, wrong rank, ...).
    #[error("domain error: {0}")]
    Domain(String),
    /// A computation lost accuracy (eigenvalue floor, under-resolution, ...).
    #[error("numeric error: {0}")]
    Numeric(String),
    /// A field whose interior product with the volume form is not exact.
    #[error("harmonic obstruction: component {component} has nonzero mean {mean:e}")]
    HarmonicObstruction { component: usize, mean: f64 },
    /// A chain submitted as an l1-cycle whose formal boundary does not vanish.
    #[error("chain is not a cycle; formal boundary = {0}")]
    NotACycle(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }

    /// True for errors caused by the input rather than by the numerics.
    pub fn is_domain(&self) -> bool {
        !matches!(self, Error::Numeric(_))
    }
}
