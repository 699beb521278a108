use thiserror::Error;

/// Every domain error raised by the library.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero has no divisor")]
    ZeroInput,
    #[error("divisor has a negative exponent")]
    NonIntegral,
    #[error("moduli are not pairwise coprime")]
    NonCoprimeModuli,
    #[error("{0} is not prime")]
    NotPrime(String),
    #[error("generator set is empty")]
    EmptyGeneratorSet,
    #[error("element does not belong to the lattice")]
    ElementNotInLattice,
    #[error("filter is improper")]
    ImproperFilter,
    #[error("element is not inside the interval")]
    NotInInterval,
    #[error("lattice is not relatively complemented")]
    NotComplemented,
    #[error("filter has no bounded counterpart")]
    UnboundedFilter,
    #[error("filter or ideal is not maximal")]
    NotMaximal,
    #[error("element is zero")]
    ZeroElement,
    #[error("ultrafilter is not materializable")]
    UndecidableUltrafilter,
    #[error("moduli of the two elements differ")]
    ModulusMismatch,
    #[error("witness set is not a member of the filter")]
    WitnessNotInFilter,
    #[error("filter is not an ultrafilter")]
    NotUltra,
    #[error("subgroup is the whole group")]
    NotProperSubgroup,
    #[error("subgroup is not a convex subgroup of the value group")]
    NotConvex,
    #[error("precision must be positive")]
    ZeroPrecision,
    #[error("p-adic operands have different primes")]
    PrimeMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("requested precision exceeds the configured search limits")]
    InfeasiblePrecision,
    #[error("components carry different precisions")]
    PrecisionMismatch,
    #[error("rational is not integral outside the exceptional set")]
    NonIntegralTail,
    #[error("adele is not an idele")]
    NotAnIdele,
    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::ZeroInput => "ZeroInput",
            Error::NonIntegral => "NonIntegral",
            Error::NonCoprimeModuli => "NonCoprimeModuli",
            Error::NotPrime(_) => "NotPrime",
            Error::EmptyGeneratorSet => "EmptyGeneratorSet",
            Error::ElementNotInLattice => "ElementNotInLattice",
            Error::ImproperFilter => "ImproperFilter",
            Error::NotInInterval => "NotInInterval",
            Error::NotComplemented => "NotComplemented",
            Error::UnboundedFilter => "UnboundedFilter",
            Error::NotMaximal => "NotMaximal",
            Error::ZeroElement => "ZeroElement",
            Error::UndecidableUltrafilter => "UndecidableUltrafilter",
            Error::ModulusMismatch => "ModulusMismatch",
            Error::WitnessNotInFilter => "WitnessNotInFilter",
            Error::NotUltra => "NotUltra",
            Error::NotProperSubgroup => "NotProperSubgroup",
            Error::NotConvex => "NotConvex",
            Error::ZeroPrecision => "ZeroPrecision",
            Error::PrimeMismatch => "PrimeMismatch",
            Error::DivisionByZero => "DivisionByZero",
            Error::InfeasiblePrecision => "InfeasiblePrecision",
            Error::PrecisionMismatch => "PrecisionMismatch",
            Error::NonIntegralTail => "NonIntegralTail",
            Error::NotAnIdele => "NotAnIdele",
            Error::Invalid(_) => "Invalid",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
