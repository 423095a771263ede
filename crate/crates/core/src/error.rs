//! Error type shared by every module of the crate.

use thiserror::Error;

/// Failure modes of the numerical routines.
///
/// Every routine that could otherwise hand back a NaN or a silently
/// truncated value returns one of these instead.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The argument sits on a pole of the function.
    #[error("{function}: pole at {at}")]
    Pole { function: &'static str, at: String },

    /// The argument is outside the documented domain.
    #[error("{function}: domain error: {detail}")]
    Domain { function: &'static str, detail: String },

    /// A series or iteration failed to converge within its budget.
    #[error("{what}: no convergence: {detail}")]
    NonConvergence { what: &'static str, detail: String },

    /// A non-finite intermediate value was produced.
    #[error("{what}: non-finite value encountered")]
    NotFinite { what: &'static str },

    /// The rational kernel form was asked for a point inside the diagonal band.
    #[error("kernel_rational: |x - y| = {gap:e} is inside the diagonal band; use kernel_diagonal_band")]
    NearDiagonal { gap: f64 },

    /// A matrix that must be invertible is numerically singular.
    #[error("{what}: singular matrix")]
    Singular { what: &'static str },

    /// A determinant that must be positive came out non-positive.
    #[error("fredholm_logdet: determinant is not positive ({detail})")]
    NegativeDeterminant { detail: String },

    /// A quantity documented as real carries a non-negligible imaginary part.
    #[error("{what}: imaginary part {im:e} exceeds tolerance")]
    ImaginaryResidue { what: &'static str, im: f64 },

    /// The ODE step controller could not make progress.
    #[error("integrate: step failure at s = {s}")]
    StepFailure { s: f64 },

    /// The monitored constraint drifted beyond its hard limit.
    #[error("integrate: constraint blow-up at s = {s} (|sum p_k q_k| = {value:e})")]
    ConstraintBlowup { s: f64, value: f64 },

    /// A denominator required to be non-zero degenerated.
    #[error("{what}: degenerate denominator ({detail})")]
    Degenerate { what: &'static str, detail: String },
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Pole { .. } => "pole",
            Error::Domain { .. } => "domain",
            Error::NonConvergence { .. } => "non_convergence",
            Error::NotFinite { .. } => "not_finite",
            Error::NearDiagonal { .. } => "near_diagonal",
            Error::Singular { .. } => "singular",
            Error::NegativeDeterminant { .. } => "negative_determinant",
            Error::ImaginaryResidue { .. } => "imaginary_residue",
            Error::StepFailure { .. } => "step_failure",
            Error::ConstraintBlowup { .. } => "constraint_blowup",
            Error::Degenerate { .. } => "degenerate",
        }
    }
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Return `Error::NotFinite` unless every component is finite.
pub(crate) fn ensure_finite(what: &'static str, values: &[f64]) -> Result<()> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::NotFinite { what })
    }
}
