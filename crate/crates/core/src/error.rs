use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("unsupported system shape {0:?}; expected [2, 2], [3, 3] or [2, 2, 2]")]
    UnsupportedShape(Vec<usize>),

    #[error("invalid subsystem selection: {0}")]
    InvalidSubsystems(String),

    #[error("coupling ordering violated: {0}")]
    OrderingViolation(String),

    #[error("zero Hamiltonian: extreme eigenvalues coincide, timescale is undefined")]
    ZeroHamiltonian,

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("optimality conditions violated (|r3 + s3| = {residual_r:e}, |t12 + t21| = {residual_tau:e})")]
    ConditionsViolated { residual_r: f64, residual_tau: f64 },

    #[error("time step {dt} exceeds the allowed bound {limit} (0.01 of the interaction timescale)")]
    StepTooLarge { dt: f64, limit: f64 },

    #[error("correlation tensor has zero norm")]
    DegenerateTensor,

    #[error("entanglement evaluated to {0:e}, below round-off tolerance")]
    NegativeEntanglement(f64),
}
