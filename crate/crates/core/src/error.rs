use thiserror::Error;

/// Which side of a game made a move.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Player {
    I,
    II,
}

impl std::fmt::Display for Player {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Player::I => write!(f, "I"),
            Player::II => write!(f, "II"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("zero vector has no support")]
    ZeroVector,

    #[error("vectors {0} and {1} are not strictly block-ordered")]
    NotBlockOrdered(usize, usize),

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("vector {0} is not in the span of the given block sequence")]
    NotInSpan(String),

    #[error("claim requires card ≥ 2 (support has {0} element(s))")]
    SingletonSupport(usize),

    #[error("vector {0} lies outside the unit ball")]
    OutsideUnitBall(String),

    #[error("vector {0} is not a net element")]
    NotInNet(String),

    #[error("invalid tolerance sequence: {0}")]
    InvalidTolerance(String),

    #[error("enumeration window too large: lattice exponent {0} exceeds 60 bits")]
    WindowTooLarge(u64),

    #[error("illegal move by player {player} in round {round}: {reason}")]
    IllegalMove {
        round: usize,
        player: Player,
        reason: String,
    },

    #[error("player I move menu is empty")]
    EmptyMenu,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("certification failed: {what}: {value} exceeds {bound}")]
    Certification {
        what: String,
        value: String,
        bound: String,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("usage: {0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) | Error::Io(_) => 1,
            Error::Certification { .. } => 3,
            Error::Usage(_) => 64,
            _ => 2,
        }
    }

    pub(crate) fn certification(
        what: impl Into<String>,
        value: impl std::fmt::Display,
        bound: impl std::fmt::Display,
    ) -> Self {
        Error::Certification {
            what: what.into(),
            value: value.to_string(),
            bound: bound.to_string(),
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
