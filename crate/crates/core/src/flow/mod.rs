//! Quasi-linear Heisenberg flows.
//!
//! An [`AdAction`] records `ad_H` on a finite basis of operators (plus a unit slot `"1"`)
//! as a square matrix of polynomials in `H`:
//! `[H, X_k] = Σ_s F_ks(H) X_s`. Everything else follows from that matrix:
//!
//! - [`series_flow`]: exact Taylor coefficients `F^n / n!` of `exp(tF(H))`
//! - [`numeric_flow`]: the evolved matrices via one block matrix exponential
//! - [`heisenberg_oracle`]: the ground truth `e^{tH} X e^{−tH}` it is checked against
//!
//! Closed forms for the named algebras live alongside: [`qosc_closed_flow`],
//! [`uvw_recurrence`] / [`aw_closed_flow`] for Askey–Wilson, and the Dolan–Grady
//! family ([`dg_closed_flow`], [`onsager_transfer_check`], [`generalized_dg_ad`]).

mod adaction;
mod askey_wilson;
mod dolan_grady;
mod expm;
mod qosc;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use thiserror::Error;

use crate::poly::{PolyError, RationalComplex};

pub use adaction::{numeric_flow, series_flow, AdAction, FlowSeries, UNIT};
pub use askey_wilson::{
    aw_closed_flow, characteristic_roots, uvw_recurrence, AWKPresentation, AwFlow, KHamiltonian, UVWTriple,
};
pub use dolan_grady::{
    dg_closed_flow, generalized_dg_ad, onsager_transfer_check, onsager_transfer_residual, DGSystem,
    DgHamiltonian, DgPair, TridiagonalConstants,
};
pub use expm::{heisenberg_oracle, matrix_exp, matrix_exp_c};
pub use qosc::{qosc_closed_flow, qosc_phi};

/// Default tolerance for numeric identity checks (relative Frobenius norm).
pub const DEFAULT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FlowError {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix exponential overflow")]
    Overflow,
    #[error("no matrix supplied for basis element '{0}'")]
    MissingOperator(String),
    #[error("invalid ad-action: {0}")]
    InvalidAdAction(String),
    #[error("Dolan-Grady relations violated: residual {residual:.3e} exceeds {tol:.1e}")]
    DgViolation { residual: f64, tol: f64 },
    #[error("parameter {0} must be nonzero")]
    ZeroParameter(&'static str),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Scalars that algebra constants may be given in: exact for symbolic work,
/// floating point for values fitted from matrices.
pub trait Coefficient:
    Clone + fmt::Debug + PartialEq + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    fn from_int(n: i64) -> Self;
    fn to_c64(&self) -> Complex64;
}

impl Coefficient for RationalComplex {
    fn from_int(n: i64) -> Self {
        RationalComplex::from_int(n)
    }
    fn to_c64(&self) -> Complex64 {
        RationalComplex::to_c64(self)
    }
}

impl Coefficient for Complex64 {
    fn from_int(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
    fn to_c64(&self) -> Complex64 {
        *self
    }
}
