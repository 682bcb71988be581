//! Twisted-photon (Bessel-beam) electromagnetic fields and their
//! photoexcitation of hydrogen-like atoms.
//!
//! The library works in atomic units throughout: lengths in Bohr radii
//! `a_0`, energies in Hartree, times in 1/Hartree. A photon of energy
//! `omega` then carries wavenumber `k = FINE_STRUCTURE * omega` in units
//! of `1/a_0`.
//!
//! Modules:
//! - [`specfun`]: Bessel functions, hydrogen radial wavefunctions,
//!   spherical harmonics on the `phi = 0` meridian, and Gauss-Legendre
//!   quadrature with convergence-by-doubling.
//! - [`beam`]: the twisted-photon state itself -- kinematics, polarization
//!   basis, coordinate-space vector potential, electromagnetic fields,
//!   Poynting vector, beam translation and angular-momentum projections.
//! - [`matelem`]: reduced atomic factors and the impact-parameter-dependent
//!   transition amplitude for 1s -> (n_f, l_f, m_f) excitation, together
//!   with a brute-force quadrature oracle.
//! - [`xsec`]: position-averaged cross sections, the plane-wave cross
//!   section, and the twisted-fraction / rate-ratio / helicity-asymmetry
//!   observables built from them.
//! - [`cli`]: the command-line driver emitting deterministic CSV scans.

pub mod beam;
pub mod cli;
pub mod matelem;
pub mod specfun;
pub mod xsec;

mod error;

pub use error::{Error, Result};

/// Fine-structure constant `alpha`.
pub const FINE_STRUCTURE: f64 = 1.0 / 137.035999;

/// Bohr radius in nanometres, used only at the CLI boundary.
pub const BOHR_RADIUS_NM: f64 = 0.052917721_0903;
