//! Padé–Chebyshev rational approximation and error-autocorrection analysis.
//!
//! The crate builds rational approximants `P/Q` to real functions on a
//! segment by three routes:
//!
//! * [`linear`]: the quadrature-based linear system with a normalization row,
//! * [`cross`]: the cross-multiplied scheme driven by Chebyshev coefficients,
//! * [`nonlinear`]: the nonlinear scheme built from an auxiliary γ system.
//!
//! [`diagnostics`] and [`interval`] then measure what happens to those
//! approximants when their coefficients are perturbed: the coefficient
//! errors form a rational function that itself approximates the target, so
//! the approximant's value barely moves while naive interval bounds explode.
//!
//! All numerics are generic over [`arith::Real`]; `f64` and the
//! arbitrary-precision [`arith::BigReal`] are provided.

#![no_std]

extern crate alloc;
#[cfg(feature = "std")]
extern crate std;

pub mod arith;
pub mod cross;
pub mod diagnostics;
pub mod error;
pub mod functions;
pub mod interval;
pub mod linear;
pub mod linsolve;
pub mod nonlinear;
pub mod plan;
pub mod poly;
pub mod rational;

pub use arith::{Arithmetic, BigReal, Double, Extended, Real};
pub use error::{Error, Result};
pub use functions::{CatalogEntry, FunctionId};
pub use linsolve::{DenseMatrix, SolveReport};
pub use poly::{ChebyshevSeries, MonomialPoly, QuadratureRule};
pub use rational::{Basis, NormalizationCondition, Parity, RationalApproximant, Segment};
