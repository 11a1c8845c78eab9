//! Physical constants in the eV / nm / fs unit system.
//!
//! Charges are Gaussian: the Coulomb constant is folded into `E2`, so
//! `e * E` for a field given in V/nm is an energy per length in eV/nm.

/// Reduced Planck constant, eV·fs.
pub const HBAR: f64 = 0.658_211_956_9;
/// Speed of light, nm/fs.
pub const C: f64 = 299.792_458;
/// Electron rest energy m_e c², eV.
pub const ME_C2: f64 = 510_998.95;
/// Squared elementary charge e², eV·nm.
pub const E2: f64 = 1.439_96;
/// Boltzmann constant, eV/K.
pub const KB: f64 = 8.617_333_262e-5;
/// Planck constant times c, eV·nm.
pub const HC: f64 = 2.0 * std::f64::consts::PI * HBAR * C;
/// V/nm to V/m.
pub const V_PER_NM_TO_V_PER_M: f64 = 1.0e9;
