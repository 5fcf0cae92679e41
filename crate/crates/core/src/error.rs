use num_bigint::BigInt;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Coarse classification used by the command line to pick an exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Usage,
    Precondition,
    Budget,
    Certificate,
    Invariant,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{d} is not a quadratic residue mod {p}")]
    NotAResidue { d: BigInt, p: u64 },
    #[error("value is not a unit mod {p}")]
    NotAUnit { p: u64 },
    #[error("precision {have} too low, need at least {need}")]
    PrecisionTooLow { have: u32, need: u32 },
    #[error("p-adic operands have different primes ({0} vs {1})")]
    PrimeMismatch(u64, u64),
    #[error("{0} is not a negative fundamental discriminant")]
    NotFundamental(i64),
    #[error("{p} does not split in Q(sqrt({disc}))")]
    NotSplit { disc: i64, p: u64 },
    #[error("{p} is split in Q(sqrt({disc}))")]
    Split { disc: i64, p: u64 },
    #[error("p divides h: p={p}, h={h} for D={disc}")]
    PDividesH { disc: i64, p: u64, h: u64 },
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("ideal power is not principal")]
    NotPrincipal,
    #[error("class group has no element of order {p}")]
    NoOrderPClass { p: u64 },
    #[error("class group p-part is not cyclic")]
    NotCyclic,
    #[error("degree cap exceeded: p={0}")]
    DegreeCapExceeded(u64),
    #[error("operands belong to different fields")]
    ParameterMismatch,
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("order {n} out of range 1..{p}")]
    OrderOutOfRange { n: usize, p: u64 },
    #[error("relative norm of beta does not match alpha up to sign")]
    NormMismatch,
    #[error("valuation {valuation} at a prime above {q} is not divisible by p")]
    ValuationFail { q: BigInt, valuation: u64 },
    #[error("prime {q} divides the index of the period order; supply a different alpha1 or prime data")]
    IndexDivisor { q: BigInt },
    #[error("malformed certificate: {0}")]
    MalformedCertificate(String),
    #[error("cochain is not a cocycle")]
    NotACocycle,
    #[error("truncation n={n} outside 1..={max}")]
    TruncationRange { n: usize, max: usize },
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error("p divides the order of the group")]
    PDividesDelta,
    #[error("structure mismatch: {0}")]
    StructureMismatch(String),
    #[error("staircase does not satisfy the twisted homomorphism law")]
    NotCocycleCompatible,
    #[error("defining systems disagree on their shared blocks")]
    BlockMismatch,
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        use Error::*;
        match self {
            BudgetExceeded(_) => ErrorClass::Budget,
            NormMismatch | ValuationFail { .. } | IndexDivisor { .. } | MalformedCertificate(_) => {
                ErrorClass::Certificate
            }
            InternalInconsistency(_) => ErrorClass::Invariant,
            InvalidInput(_) => ErrorClass::Usage,
            _ => ErrorClass::Precondition,
        }
    }

    /// Stable process exit code for this error.
    pub fn exit_code(&self) -> i32 {
        match self.class() {
            ErrorClass::Usage => 1,
            ErrorClass::Precondition => 2,
            ErrorClass::Budget => 3,
            ErrorClass::Certificate => 4,
            ErrorClass::Invariant => 5,
        }
    }
}
