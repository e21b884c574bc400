//! Special functions and spherical quadrature.
//!
//! Spherical Bessel functions `j_n`, their power-law envelope, Legendre
//! polynomials, orthonormal complex spherical harmonics (Condon–Shortley
//! phase) and a Gauss–Legendre × uniform-azimuth product rule on the sphere.
//! Everything here is a pure function of its inputs.

mod bessel;
mod harmonics;
mod legendre;
mod quadrature;

pub use bessel::{
    ln_gamma_n_plus_three_halves, sph_bessel_j, sph_bessel_j_bound, MAX_BESSEL_ORDER,
};
pub use harmonics::{sph_harmonic, sph_harmonics_upto, ModeIndex};
pub(crate) use harmonics::fill_harmonics;
pub use legendre::legendre_p;
pub use quadrature::{
    gauss_legendre, make_quadrature, sphere_integrate, QuadratureRule, SpherePoint,
    MAX_QUADRATURE_DEGREE,
};
