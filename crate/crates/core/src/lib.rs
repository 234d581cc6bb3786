//! Angular-momentum coherent states, rigid-rotor evolution and fractional revivals.
//!
//! States on the sphere are held as [`states::SphericalExpansion`] coefficients
//! `b_{IM}` over spherical harmonics; symmetric-top states as
//! [`states::TopExpansion`] coefficients `C_{IK}` with `M = −I`.

pub mod observables;
pub mod revivals;
pub mod specfun;
pub mod states;
pub mod toprotor;
