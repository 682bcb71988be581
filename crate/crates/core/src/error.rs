use num_complex::Complex64;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An argument violated a mathematical or physical precondition.
    #[error("domain error: {0}")]
    Domain(String),

    /// Node doubling stopped improving the integral before reaching the
    /// requested tolerance. Carries the last two estimates.
    #[error(
        "quadrature did not converge after {doublings} doublings \
         ({nodes} nodes): last estimates {previous} and {latest}, \
         relative change {rel_change:.3e}"
    )]
    Convergence {
        doublings: u32,
        nodes: usize,
        previous: Complex64,
        latest: Complex64,
        rel_change: f64,
    },

    /// Malformed command line or configuration file input.
    #[error("usage error: {0}")]
    Usage(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code the CLI maps this error to.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_) | Error::Usage(_) => 2,
            Error::Io(_) => 3,
            Error::Convergence { .. } => 4,
        }
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(Error::domain("x").exit_code(), 2);
        assert_eq!(Error::usage("x").exit_code(), 2);
        assert_eq!(
            Error::Io(std::io::Error::other("x")).exit_code(),
            3
        );
        let conv = Error::Convergence {
            doublings: 6,
            nodes: 1024,
            previous: Complex64::new(1.0, 0.0),
            latest: Complex64::new(1.1, 0.0),
            rel_change: 0.1,
        };
        assert_eq!(conv.exit_code(), 4);
    }
}
