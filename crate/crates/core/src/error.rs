use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid Hilbert space: {0}")]
    InvalidSpace(String),

    #[error("site {site} out of range for a space with {sites} sites")]
    SiteOutOfRange { site: usize, sites: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("basis label `{0}` is not in the basis")]
    LabelNotInBasis(String),

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("operator is not Hermitian (max |A - A†| = {0:e})")]
    NotHermitian(f64),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("Schrieffer-Wolff expansion diverges: qubit {qubit} is resonant with the coupler")]
    CouplerResonance { qubit: &'static str },

    #[error("tone is off resonance: |ω_A - ω_B - ν| = {mismatch:e} exceeds {allowed:e}")]
    OffResonantTone { mismatch: f64, allowed: f64 },

    #[error("anharmonicities differ: α_A = {alpha_a}, α_B = {alpha_b}")]
    UnequalAnharmonicity { alpha_a: f64, alpha_b: f64 },

    #[error("Rabi frequency Ω vanishes for the requested coupling and detuning")]
    ZeroRabi,

    #[error("incommensurate schedule: n1·τ1 = {lhs}, n2·τ2 = {rhs}")]
    Incommensurate { lhs: f64, rhs: f64 },

    #[error("step size underflow at t = {t} (h = {h:e})")]
    StepSizeUnderflow { t: f64, h: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("root not bracketed in [{lo}, {hi}]")]
    NoBracket { lo: f64, hi: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit code used by the CLI: 2 for configuration problems,
    /// 3 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_)
            | Error::Io(_)
            | Error::Json(_)
            | Error::Csv(_)
            | Error::LabelNotInBasis(_)
            | Error::InvalidParameter(_)
            | Error::OffResonantTone { .. }
            | Error::UnequalAnharmonicity { .. }
            | Error::Incommensurate { .. }
            | Error::InvalidSpace(_)
            | Error::SiteOutOfRange { .. } => 2,
            _ => 3,
        }
    }
}
