//! Closed-form electron-beam photonics.
//!
//! Energies are in eV, lengths in nm, times in fs and angular frequencies in
//! rad/fs throughout. Applied optical fields are given in V/nm.
//!
//! The special-function, quadrature and kinematics kernels are generic over
//! [`Real`] (`f32` or `f64`); the physics layers built on top of them work in
//! `f64` through the aliases exported here.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::too_many_arguments)]

pub mod coherence;
pub mod constants;
pub mod density_matrix;
pub mod dipole_probe;
pub mod error;
pub mod kinematics;
pub mod pinem;
pub mod quadrature;
pub mod scalar;
pub mod specfun;
pub mod wavepackets;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use scalar::Real;

/// Double-precision beam used by every physics module.
pub type Beam = kinematics::ElectronBeam<f64>;
pub type Beam32 = kinematics::ElectronBeam<f32>;
pub type BesselPair64 = specfun::BesselPair<f64>;
pub type BesselPair32 = specfun::BesselPair<f32>;
pub type CoulombKick64 = kinematics::CoulombKick<f64>;
pub type ModeTiming64 = kinematics::ModeTiming<f64>;
