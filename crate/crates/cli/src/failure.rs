use std::fmt;

/// A command failure and the exit code it maps to.
#[derive(Debug)]
pub enum Failure {
    /// Bad flags, sizes, files or formats.
    Usage(String),
    /// The input was read but failed a check.
    Verify(String),
    /// A solver stopped without converging.
    Convergence(String),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Verify(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Convergence(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "usage error: {m}"),
            Failure::Verify(m) => write!(f, "verification failed: {m}"),
            Failure::Convergence(m) => write!(f, "{m}"),
        }
    }
}

impl From<pqtrain::Error> for Failure {
    fn from(e: pqtrain::Error) -> Self {
        match e {
            pqtrain::Error::Convergence { .. } => Failure::Convergence(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

pub type Outcome<T = ()> = Result<T, Failure>;

pub fn usage<T>(msg: impl Into<String>) -> Outcome<T> {
    Err(Failure::Usage(msg.into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(Failure::Verify(String::new()).code(), 1);
        assert_eq!(Failure::Usage(String::new()).code(), 2);
        assert_eq!(Failure::Convergence(String::new()).code(), 3);
        let e = pqtrain::Error::Convergence {
            iterations: 3,
            residual: 1.0,
        };
        assert_eq!(Failure::from(e).code(), 3);
        assert_eq!(Failure::from(pqtrain::Error::Parse("x".into())).code(), 2);
    }
}
