use thiserror::Error;

/// Pipeline stage, used to tag failures and certificate entries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Quadforms,
    Numfield,
    Localfield,
    Lmn,
    Bounds,
    Finale,
    Cli,
}

impl std::fmt::Display for Stage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Stage::Quadforms => "quadforms",
            Stage::Numfield => "numfield",
            Stage::Localfield => "localfield",
            Stage::Lmn => "lmn",
            Stage::Bounds => "bounds",
            Stage::Finale => "finale",
            Stage::Cli => "cli",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid discriminant {0}: must be negative and congruent to 0 or 1 mod 4")]
    InvalidDiscriminant(i64),

    #[error("[{stage}] precision exhausted at {bits} bits: {what}")]
    PrecisionExhausted {
        stage: Stage,
        bits: u32,
        what: String,
    },

    #[error("ambiguous rounding of class polynomial coefficient {index} for discriminant {disc} at {bits} bits")]
    AmbiguousRounding { disc: i64, index: usize, bits: u32 },

    #[error("cubic has three real roots; expected one real root and a complex pair")]
    ThreeRealRoots,

    #[error("[{stage}] rational reconstruction failed: {what}")]
    ReconstructionFailed { stage: Stage, what: String },

    #[error("division by zero")]
    DivisionByZero,

    #[error("argument is a root of unity")]
    RootOfUnity,

    #[error("argument does not lie on the unit circle")]
    NotOnUnitCircle,

    #[error("no primitive element x1 + c*x2 with |c| <= {0}")]
    NoPrimitiveElement(i64),

    #[error("local structure at p = {0} is outside the supported family of local fields")]
    UnsupportedLocalField(u64),

    #[error("local precision {prec} too small at p = {p}: {what}")]
    InsufficientLocalPrecision { p: u64, prec: i64, what: String },

    #[error("no prime ideal with the required divisibility pattern below {0}")]
    NoValuationPattern(u64),

    #[error("[{stage}] precondition violated: {what}")]
    Precondition { stage: Stage, what: String },

    #[error("[{stage}] invariant violated: {what}")]
    Invariant { stage: Stage, what: String },

    #[error("cache error: {0}")]
    Cache(String),

    #[error("certificate error: {0}")]
    Certificate(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn precondition(stage: Stage, what: impl Into<String>) -> Self {
        Error::Precondition {
            stage,
            what: what.into(),
        }
    }

    pub fn invariant(stage: Stage, what: impl Into<String>) -> Self {
        Error::Invariant {
            stage,
            what: what.into(),
        }
    }

    pub fn exhausted(stage: Stage, bits: u32, what: impl Into<String>) -> Self {
        Error::PrecisionExhausted {
            stage,
            bits,
            what: what.into(),
        }
    }

    /// Stage a failure belongs to, where it is determined by the variant.
    pub fn stage(&self) -> Option<Stage> {
        match self {
            Error::InvalidDiscriminant(_) | Error::AmbiguousRounding { .. } | Error::ThreeRealRoots | Error::Cache(_) => {
                Some(Stage::Quadforms)
            }
            Error::PrecisionExhausted { stage, .. }
            | Error::ReconstructionFailed { stage, .. }
            | Error::Precondition { stage, .. }
            | Error::Invariant { stage, .. } => Some(*stage),
            Error::RootOfUnity | Error::NotOnUnitCircle => Some(Stage::Lmn),
            Error::NoPrimitiveElement(_)
            | Error::UnsupportedLocalField(_)
            | Error::InsufficientLocalPrecision { .. }
            | Error::NoValuationPattern(_) => Some(Stage::Localfield),
            Error::Certificate(_) | Error::Io(_) => Some(Stage::Cli),
            Error::DivisionByZero => None,
        }
    }

    /// True for failures that a higher working precision may cure.
    pub fn is_precision(&self) -> bool {
        matches!(
            self,
            Error::PrecisionExhausted { .. }
                | Error::AmbiguousRounding { .. }
                | Error::ReconstructionFailed { .. }
                | Error::InsufficientLocalPrecision { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
