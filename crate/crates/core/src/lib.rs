//! Regularized Petersson inner products of weakly holomorphic modular forms.
//!
//! Three routes compute the same number and are checked against each other:
//! a Kloosterman-Bessel series, a semi-analytic truncated-domain integral, and
//! a finite pairing of Fourier coefficients with a harmonic preimage.  The
//! crate also carries the supporting objects: branch-aware exponential
//! integrals, Weil representations, traces of singular moduli, L-series of
//! weakly holomorphic forms, and the error-of-modularity cocycle.

pub mod cmtraces;
pub mod cocycle;
pub mod error;
pub mod kloosterman;
pub mod lseries;
pub mod mp;
pub mod qseries;
pub mod quad;
pub mod regprod;
pub mod report;
pub mod sl2;
pub mod specfun;
pub mod suite;
pub mod weil;

pub use error::{Error, Result};
