//! Numerical operator theory on the universal Teichmüller space at finite
//! truncation.
//!
//! The crate welds analytic Jordan curves numerically, builds the Grunsky
//! coefficient table and its four weighted blocks, factorizes the interior
//! block (Takagi), extracts Fredholm eigenvalues and the Fredholm
//! determinant, evaluates the universal Liouville action and its companion
//! functionals, and cross-checks everything through an independent period
//! mapping built from the welding homeomorphism alone.
//!
//! Everything here is `no_std` + `alloc`: the numerics are self-contained
//! (FFT, dense complex linear algebra, truncated power series). IO, JSON,
//! and the command-line driver live in the companion `liouville-cli` crate.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod action;
pub mod faber;
pub mod fft;
pub mod linalg;
pub mod operators;
pub mod pair;
pub mod series;
pub mod welding;

/// Double-precision complex scalar used throughout.
pub type C64 = num_complex::Complex<f64>;

use core::fmt;

/// Every failure the toolkit can report.
///
/// Variants are shared across modules so callers match on one enum; each
/// operation documents which variants it can produce.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Division by a series whose constant term vanishes.
    DivisionByNonUnit,
    /// `log_unit` applied to a series with constant term != 1.
    NotUnit,
    /// Composition with an inner series whose constant term is nonzero.
    NotComposable,
    /// Reversion of a series with vanishing linear coefficient.
    NotInvertible,
    /// Pre-Schwarzian of a map whose derivative has no invertible leading term.
    VanishingDerivative,
    /// Kernel evaluation outside the kernel's domain.
    DomainViolation,
    /// Takagi factorization of a matrix that is not symmetric.
    NotSymmetric,
    /// Schur relation scaling breaks down because 1 - lambda_1^2 is below 1e-12.
    SingularScaling,
    /// Spectral pipeline rejected a block with largest singular value >= 1.
    NormAtLeastOne,
    /// The two independent reads of the mixed Grunsky block disagree.
    InconsistentBlocks(f64),
    /// Fixed-point solver failed to reach tolerance within the iteration cap.
    NoConvergence(usize),
    /// Curve violates the Theodorsen convergence guard.
    TheodorsenConditionViolated(f64),
    /// Welding homeomorphism lost strict monotonicity.
    MonotonicityLost,
    /// FFT tail energy too large for the requested truncation to be trusted.
    AliasingSuspected(f64),
    /// Linear solve rejected: condition estimate above the guard.
    IllConditioned(f64),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DivisionByNonUnit => write!(f, "division by a series with zero constant term"),
            Error::NotUnit => write!(f, "log_unit requires constant term 1"),
            Error::NotComposable => write!(f, "composition requires inner constant term 0"),
            Error::NotInvertible => write!(f, "reversion requires c0 = 0 and c1 != 0"),
            Error::VanishingDerivative => write!(f, "derivative has no invertible leading term"),
            Error::DomainViolation => write!(f, "evaluation point outside the kernel domain"),
            Error::NotSymmetric => write!(f, "matrix is not complex symmetric"),
            Error::SingularScaling => write!(f, "1 - lambda_1^2 below 1e-12, scaling singular"),
            Error::NormAtLeastOne => write!(f, "largest singular value is >= 1"),
            Error::InconsistentBlocks(r) => {
                write!(f, "mixed-block reads disagree by {r:e} (non-welding input?)")
            }
            Error::NoConvergence(n) => write!(f, "no convergence within {n} iterations"),
            Error::TheodorsenConditionViolated(c) => {
                write!(f, "Theodorsen constant {c} exceeds the convergence guard")
            }
            Error::MonotonicityLost => write!(f, "circle map is not strictly increasing"),
            Error::AliasingSuspected(frac) => {
                write!(f, "FFT tail fraction {frac:e} exceeds 1e-8: grid too coarse")
            }
            Error::IllConditioned(c) => write!(f, "condition estimate {c:e} above guard"),
        }
    }
}

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
