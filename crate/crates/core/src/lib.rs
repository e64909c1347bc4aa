//! Numerical toolkit for an electron field dressed by transversely polarized
//! photons.
//!
//! The crate covers two loosely coupled subjects:
//!
//! * the variational bound-state construction in momentum space: coupling
//!   functions built from the spin-up Dirac bilinear, interaction-energy
//!   integrals for trial states parameterized by a [`TauTable`], the lower
//!   bound chain used to prove binding, and the explicit construction that
//!   realizes a negative binding energy;
//! * the emergent picture on a Cartesian grid: adding the Coulomb correction
//!   to a transverse electric field so that Gauss' law holds with the charge
//!   density as source, and the induced current that keeps the continuity
//!   equation intact.
//!
//! All wavenumbers are measured in units of the mass scale `kappa` unless a
//! [`ModelParams`] says otherwise.

pub mod audit;
pub mod emergent;
mod error;
pub mod kinematics;
pub mod matrix_elements;
pub mod quadrature;
pub mod sweep;
pub mod variational;
mod vec3;
pub mod verify;

pub use error::{Error, Result};
pub use kinematics::{omega, polarization_basis, rho_el, ModelParams, PolarizationBasis};
pub use matrix_elements::{
    a_long_wavelength, bilinear, coeff_a, coeff_b, u_coupling, CouplingSample, Polarization,
};
pub use quadrature::{
    convergence_slope, integrate_ball, integrate_full_space_gaussian,
    integrate_halfspace_gaussian, QuadratureSpec,
};
pub use variational::{TauTable, TheoremReport};
pub use vec3::Vec3;
