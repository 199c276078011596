use core::fmt;

/// Errors raised by the model and the numerical routines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// PSF width is not positive or separation is negative / non-finite.
    InvalidPsf { sigma: f64, d: f64 },
    /// σ below 1/√(2π): PSF values could exceed 1 and stop being probabilities.
    SigmaTooSmall { sigma: f64 },
    EtaOutOfRange { eta: f64 },
    /// Σ_m ∫P_m dx is (numerically) zero, so C_m is undefined.
    DegenerateNormalization { normalization: f64 },
    QuadratureFailure { error_estimate: f64 },
    /// Zero Fisher information; the bound is infinite.
    InfiniteBound,
    /// `crb(d) - d` has the same sign at both bracket ends. `scan` holds
    /// `(d, crb(d) - d)` pairs sampled across the bracket.
    NoSignChange { lo: f64, hi: f64, scan: alloc::vec::Vec<(f64, f64)> },
    ZeroDenominator { x: f64 },
    OptimizerNonConvergence { width: f64 },
    /// Catch-all for violated argument preconditions (empty grid, n = 0, ...).
    InvalidArgument(&'static str),
}

impl Error {
    /// Stable variant name, used by the CLI diagnostics.
    pub fn name(&self) -> &'static str {
        match self {
            Error::InvalidPsf { .. } => "InvalidPsf",
            Error::SigmaTooSmall { .. } => "SigmaTooSmall",
            Error::EtaOutOfRange { .. } => "EtaOutOfRange",
            Error::DegenerateNormalization { .. } => "DegenerateNormalization",
            Error::QuadratureFailure { .. } => "QuadratureFailure",
            Error::InfiniteBound => "InfiniteBound",
            Error::NoSignChange { .. } => "NoSignChange",
            Error::ZeroDenominator { .. } => "ZeroDenominator",
            Error::OptimizerNonConvergence { .. } => "OptimizerNonConvergence",
            Error::InvalidArgument(_) => "InvalidArgument",
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidPsf { sigma, d } => {
                write!(f, "invalid PSF pair: sigma={sigma} must be > 0, d={d} must be >= 0")
            }
            Error::SigmaTooSmall { sigma } => write!(
                f,
                "sigma={sigma} is below 1/sqrt(2*pi); PSF values would exceed 1"
            ),
            Error::EtaOutOfRange { eta } => write!(f, "eta={eta} is outside [0, 1]"),
            Error::DegenerateNormalization { normalization } => {
                write!(f, "event normalization {normalization:e} is degenerate")
            }
            Error::QuadratureFailure { error_estimate } => {
                write!(f, "quadrature error estimate {error_estimate:e} exceeds 1e-6")
            }
            Error::InfiniteBound => write!(f, "Fisher information is zero; bound is infinite"),
            Error::NoSignChange { lo, hi, .. } => {
                write!(f, "crb(d) - d does not change sign on [{lo}, {hi}]")
            }
            Error::ZeroDenominator { x } => write!(f, "P_A + P_B underflows to 0 at x={x}"),
            Error::OptimizerNonConvergence { width } => {
                write!(f, "likelihood search stalled with bracket width {width:e}")
            }
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
