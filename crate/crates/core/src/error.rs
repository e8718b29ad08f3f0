use core::fmt;

/// Everything that can go wrong inside the core crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A physical or numerical parameter is outside its admissible range.
    InvalidParameter(&'static str),
    /// Argument outside the domain of a special function.
    Domain(&'static str),
    /// The first moment of a form factor does not exist.
    DivergentMoment { exponent: u32 },
    /// The integral of the spectral density does not exist.
    DivergentIntegral,
    /// Quadrature (or series acceleration) ran out of budget before meeting
    /// its tolerance.
    NoConvergence { value: f64, error: f64, tolerance: f64 },
    /// The controlled/free rate ratio never crosses 1 on the scan grid.
    NoCrossing { lo: f64, hi: f64 },
    /// The generator has no relaxation channel, so there is no unique
    /// stationary state.
    NoRelaxation,
    /// A density matrix violates hermiticity, normalization or positivity.
    InvalidState(&'static str),
    /// The discretized bath cannot represent the requested time span.
    InsufficientModes { recurrence_time: f64, span: f64 },
    /// A survival probability was requested past the recurrence time of the
    /// discretized bath.
    RecurrenceWindowExceeded { t: f64, recurrence_time: f64 },
    /// Kick protocols need an even number of kicks.
    OddKickCount(u32),
    /// Not enough samples to fit an exponential decay.
    WindowTooShort { samples: usize, required: usize },
    /// `-ln P` is undefined for the given sample.
    NonPositiveProbability { t: f64, p: f64 },
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
            Error::Domain(what) => write!(f, "argument outside domain: {what}"),
            Error::DivergentMoment { exponent } => write!(
                f,
                "polynomial form factor with n = {exponent} has no finite first moment (need n >= 2)"
            ),
            Error::DivergentIntegral => write!(f, "spectral density is not integrable"),
            Error::NoConvergence { value, error, tolerance } => write!(
                f,
                "no convergence: value {value:e} with error estimate {error:e} above tolerance {tolerance:e}"
            ),
            Error::NoCrossing { lo, hi } => {
                write!(f, "rate ratio does not cross 1 on [{lo:e}, {hi:e}]")
            }
            Error::NoRelaxation => write!(f, "generator has no relaxation channel"),
            Error::InvalidState(what) => write!(f, "invalid density matrix: {what}"),
            Error::InsufficientModes { recurrence_time, span } => write!(
                f,
                "bath recurrence time {recurrence_time:e} is shorter than the requested span {span:e}"
            ),
            Error::RecurrenceWindowExceeded { t, recurrence_time } => write!(
                f,
                "t = {t:e} exceeds the bath recurrence time {recurrence_time:e}"
            ),
            Error::OddKickCount(n) => write!(f, "kick count must be even, got {n}"),
            Error::WindowTooShort { samples, required } => write!(
                f,
                "fit window holds {samples} samples, at least {required} required"
            ),
            Error::NonPositiveProbability { t, p } => {
                write!(f, "non-positive survival probability {p:e} at t = {t:e}")
            }
        }
    }
}

impl core::error::Error for Error {}
