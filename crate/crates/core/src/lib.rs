//! Reduced density matrices and entanglement-monogamy quantities for pure
//! symmetric `N`-qubit states built from two distinct spinors,
//!
//! ```text
//! |D_{N-k,k}> = Σ_{r=0}^{k} beta_r(a) |N/2, N/2 - r>,   1 <= k <= N/2,  0 <= a <= 1,
//! ```
//!
//! together with a brute-force full-state path used to validate every
//! closed-form result at small `N`.
//!
//! The numeric modules are generic over [`Scalar`] (`f32` or `f64`); the
//! aliases at the crate root fix the scalar to `f64`, which is what the
//! sweep and verification drivers use.
//!
//! ```
//! use symtangle::{tangle_record, DickeParams};
//!
//! let rec = tangle_record(&DickeParams::new(4, 2, 0.0).unwrap()).unwrap();
//! assert!((rec.tau - 2.0 / 3.0).abs() < 1e-12);
//! ```

pub mod dicke;
pub mod error;
pub mod marginals;
pub mod measures;
pub mod oracle;
pub mod scalar;
pub mod smallmat;
pub mod sweep;
pub mod verify;

pub use dicke::{amplitudes, cg_coefficients};
pub use error::{Error, Result};
pub use marginals::{
    marginal_matrix, partial_transpose, single_qubit_marginal, two_qubit_marginal,
};
pub use measures::{concurrence_two_qubit, negativity_two_qubit, one_vs_rest, tangle_record};
pub use oracle::Oracle;
pub use scalar::Scalar;

pub type DickeParams = dicke::DickeParams<f64>;
pub type AmplitudeVector = dicke::AmplitudeVector<f64>;
pub type CgTriple = dicke::CgTriple<f64>;
pub type SmallMatrix = smallmat::SmallMatrix<f64>;
pub type TwoQubitMarginal = marginals::TwoQubitMarginal<f64>;
pub type SingleQubitMarginal = marginals::SingleQubitMarginal<f64>;
pub type TangleRecord = measures::TangleRecord<f64>;
pub type Spinor = oracle::Spinor<f64>;
pub type FullState = oracle::FullState<f64>;
