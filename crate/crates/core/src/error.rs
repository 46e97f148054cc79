use thiserror::Error;

use crate::forge::Record;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot subtract an infinite value from a finite one")]
    SubFromFinite,
    #[error("difference of two infinite values is undefined")]
    IndeterminateDifference,
    #[error("infinite value scaled by a non-positive rational")]
    InfiniteScale,

    #[error("division by zero")]
    DivisionByZero,
    #[error("element is not a monomial; general inverses need a series expansion")]
    NonMonomialInverse,
    #[error("element has nonzero valuation and has no residue")]
    NotAUnit,
    #[error("value {0} is not in the value group")]
    ValueNotInGroup(String),
    #[error("elements belong to different fields: {0} vs {1}")]
    FieldMismatch(String, String),

    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("zero element")]
    ZeroElement,
    #[error("element is indistinguishable from zero at its precision")]
    ZeroDivisorAtPrecision,
    #[error("radius {0} lies in the divisible closure of the value group")]
    RadiusInDivisibleClosure(String),
    #[error("denominator has no unique dominant monomial")]
    UnsupportedDenominator,
    #[error("decomposition does not sum to the element")]
    DecompositionMismatch,

    #[error("infeasible schedule: {0}")]
    InfeasibleSchedule(String),
    #[error("value group too sparse: {0}")]
    ValueGroupTooSparse(String),
    #[error("residue field too small: need {needed} distinct nonzero residues, field has {available}")]
    ResidueFieldTooSmall { needed: usize, available: u64 },
    #[error("certificate failure: {}", describe_record(.0))]
    CertificateFailure(Box<Record>),

    #[error("spectral profile is flat; |t|_spect * |t^-1|_spect = 1")]
    PreconditionFlat,
    #[error("term {index} has valuation above the stated lower bound")]
    NotBoundedBelow { index: usize },
    #[error("term {index} is zero")]
    ZeroTerm { index: usize },
    #[error("oracle could not decide: {0}")]
    Inconclusive(String),

    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

fn describe_record(r: &Record) -> String {
    format!("n={} zone={} claim={:?} lhs={} rhs={}", r.n, r.zone, r.claim, r.lhs, r.rhs)
}
