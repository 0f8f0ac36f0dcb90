use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Coarse classification used by front ends to pick exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    /// The inputs are well formed but violate a mathematical precondition.
    Precondition,
    /// The inputs themselves are malformed or mutually inconsistent.
    Input,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum Error {
    #[error("cannot compare surds over unrelated radicands")]
    IncomparableRadicands,
    #[error("leading coefficient of the quadratic is zero")]
    DegenerateLeadingCoefficient,
    #[error("negative radicand")]
    NegativeRadicand,
    #[error("cannot parse rational {0:?}")]
    ParseRational(String),
    #[error("invalid threefold data: {0}")]
    InvalidThreefold(String),
    #[error("ch1.c2(X) is unavailable (supply it or set pic_rank1)")]
    MissingC1c2,
    #[error("ch1^2.H is unavailable (supply it or set pic_rank1)")]
    MissingC1sqH,
    #[error("operation requires a rank-zero charge")]
    NonzeroRank,
    #[error("operation requires a charge of nonzero rank")]
    RankZero,
    #[error("({b}, {w}) is outside U = {{w > b^2/2}}")]
    OutsideU { b: String, w: String },
    #[error("slope N_(b,w) needs w != 0")]
    ZeroW,
    #[error("charges have proportional slope data: no wall")]
    ProportionalCharges,
    #[error("slopes never agree: no wall")]
    NoWall,
    #[error("wall line does not meet the Bogomolov-Gieseker locus at a rational point of U")]
    NoIntersectionInU,
    #[error("Bogomolov-Gieseker hypothesis ch2^bH.H = (w - b^2/2) ch0 H^3 fails at this point")]
    HypothesisNotMet,
    #[error("n must be a positive integer")]
    InvalidN,
    #[error("ch1.beta is needed but unavailable (supply it or set pic_rank1)")]
    MissingPairing,
    #[error("chi(v(n)) = {0} is not an integer")]
    NonIntegerChi(String),
    #[error("operation requires Pic(X) = Z.H")]
    NotPicRank1,
    #[error("Q = int (beta/nH).beta is unavailable (supply it or set pic_rank1)")]
    MissingQ,
    #[error("{0} must be an integer here")]
    NonIntegral(String),
    #[error("parity violation: l^2 = {l2} but n.beta.H = {nbh} (mod 2)")]
    ParityViolation { l2: String, nbh: String },
    #[error("discriminant {d} is not compatible with coset {gamma} of Z/{modulus}")]
    InconsistentCoset { d: String, gamma: u64, modulus: u64 },
    #[error("viewport has empty extent")]
    EmptyViewport,
    #[error("series offsets {0} and {1} do not differ by an integer")]
    IncompatibleOffsets(String, String),
    #[error("modular bookkeeping assumes H^2(X,Z)_tors = 0 (got {0} torsion classes)")]
    TorsionUnsupported(u64),
    #[error("invariant table: {0}")]
    InconsistentTable(String),
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::ParseRational(_) | Error::InvalidThreefold(_) | Error::InconsistentTable(_) => {
                ErrorKind::Input
            }
            _ => ErrorKind::Precondition,
        }
    }
}
