use thiserror::Error;

/// Every failure mode of the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabError {
    #[error("invalid field configuration: {0}")]
    InvalidConfig(String),
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(&'static str),
    #[error("division by zero")]
    DivisionByZero,
    #[error("element of odd valuation is not a norm from the unramified extension")]
    OddValuation,
    #[error("singular linear system")]
    SingularSystem,
    #[error("hermitian form is not split (odd discriminant valuation)")]
    NotSplit,
    #[error("not relatively regular semi-simple")]
    NotRss,
    #[error("operation is only defined on the general linear side")]
    SideError,
    #[error("no hermitian orbit lies above this invariant point")]
    NoHermitianOrbit,
    #[error("sampling exhausted after {0} rejections")]
    SamplingExhausted(usize),
    #[error("module generated by the zero vector")]
    ZeroModule,
    #[error("enumeration guard tripped: quotient of order p^{exponent} exceeds p^{bound}")]
    ExplosionGuard { exponent: u32, bound: u32 },
    #[error("oracle instance too large: rank {rank} with a box of order p^{exponent} (limits: rank {}, p^{bound})", crate::orbital::MAX_ORACLE_RANK)]
    OracleTooLarge { rank: usize, exponent: u32, bound: u32 },
    #[error("could not reach the reduction normal form: {0}")]
    NormalFormFailure(&'static str),
    #[error("character argument exceeds the conductor of the value ring")]
    ConductorExceeded,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = LabError> = std::result::Result<T, E>;
