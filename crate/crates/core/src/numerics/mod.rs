//! Shared numerical kernels.

pub mod quadrature;
pub mod special;

pub use quadrature::{
    gauss_legendre, integrate_cosine_tail, integrate_interval, integrate_line, Estimate,
    QuadratureSpec,
};
pub use special::{
    alpha_n, bose_occupation, half_odd_inverse_squares, lambert_w_m1, trigamma, zeta_odd,
};
