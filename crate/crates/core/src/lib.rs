//! Decoherence rates of a two-level system coupled to an Ohmic bosonic bath,
//! free and under three control strategies: repeated projective
//! measurements, bang-bang kicks and strong continuous coupling.
//!
//! All quantities are expressed in units of the bath bandwidth `W = 1` unless
//! stated otherwise. The crate is `no_std` (it needs `alloc`); the `std`
//! feature only adds `std::error::Error` interop through `core::error`.

#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(any(test, feature = "std"))]
extern crate std;

pub mod crossover;
pub mod error;
pub mod lindblad;
pub mod numerics;
pub mod oracle;
pub mod rates;
pub mod spectral;

pub use error::{Error, Result};
