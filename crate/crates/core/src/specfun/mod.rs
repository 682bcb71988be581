//! Special functions and quadrature.
//!
//! Everything downstream is built from the four ingredients here: integer
//! order Bessel functions `J_n`, normalized hydrogen bound-state radial
//! functions `R_nl`, real spherical harmonics evaluated on the `phi = 0`
//! meridian, and Gauss-Legendre integration refined by node doubling.

mod bessel;
mod harmonics;
mod hydrogen;
mod quadrature;

pub use bessel::{bessel_j, bessel_translation_partial_sum, translation_order_default};
pub use harmonics::spherical_harmonic_phi0;
pub use hydrogen::{hydrogen_radial, radial_derivative_ground};
pub use quadrature::{
    converge_by_doubling, gauss_legendre_rule, integrate, scaled_rule, Quadrature,
    QuadratureSpec, QuadratureValue, MAX_DOUBLINGS,
};

pub(crate) use bessel::bessel_j_unchecked;
