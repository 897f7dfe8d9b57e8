use thiserror::Error;

/// Errors produced by the reduction toolkit.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("matrix is not Hurwitz (spectral abscissa {abscissa:e})")]
    NotHurwitz { abscissa: f64 },

    #[error("numerical breakdown: {0}")]
    SolveFailure(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix dimension {0} is odd; a quadrature pair structure is required")]
    OddDimension(usize),

    #[error("matrix is not symmetric (relative asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("matrix is not positive semidefinite (smallest eigenvalue {0:e})")]
    NotPositiveSemidefinite(f64),

    #[error("J*P is not diagonalizable: {0}")]
    NotDiagonalizable(String),

    #[error("eigenvalues of K*P do not pair as +/- i sigma: {0}")]
    EigenPairing(String),

    #[error("symplectic form degenerates on an eigenspace (pivot {0:e})")]
    DegenerateFormBreakdown(f64),

    #[error("transform is not symplectic (residual {0:e})")]
    NotSymplectic(f64),

    #[error("complex transform has a non-negligible imaginary part ({0:e})")]
    ImaginaryResidual(f64),

    #[error("Gramian products do not commute (relative commutator {0:e})")]
    NotCommuting(f64),

    #[error("scattering matrix is not unitary (residual {0:e})")]
    NonUnitaryScattering(f64),

    #[error("output completion failed (pivot {0:e})")]
    CompletionFailure(f64),

    #[error("channel counts differ: {0} vs {1}")]
    ChannelMismatch(usize, usize),

    #[error("index {0} used more than once or out of range")]
    IndexOverlap(usize),

    #[error("invalid permutation: {0}")]
    BadPermutation(String),

    #[error("truncation order {r} out of range for {n} modes")]
    BadRange { r: usize, n: usize },

    #[error("s = {0} is a pole of the system (singular resolvent)")]
    SingularResolvent(String),

    #[error("no stable draw after {0} attempts")]
    StabilityRetryExhausted(usize),

    #[error("Gramians are not co-diagonalizable by a quasi-balancing transform: {0}")]
    NotCoDiagonalizable(String),

    #[error("certificate invalid: condition {0}")]
    CertificateInvalid(String),

    #[error("Gramian is singular; a minimal system is required")]
    SingularGramian,

    #[error("Delta_r(i w) is singular at w = {0}")]
    SingularDelta(f64),

    #[error("keeping {keep} modes splits a degenerate Hankel group (boundaries {boundaries:?})")]
    GroupBoundaryViolation { keep: usize, boundaries: Vec<usize> },

    #[error("leading block is not Hurwitz when keeping {0} modes")]
    HurwitzChainBroken(usize),

    #[error("no admissible truncation meets error budget {0}")]
    BudgetInfeasible(f64),

    #[error("post-condition violated: {0}")]
    Verification(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
