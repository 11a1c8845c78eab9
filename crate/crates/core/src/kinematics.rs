//! Relativistic kinematics of a monoenergetic beam electron and the
//! characteristic length, field and time scales built from it.

use crate::constants::{C, E2, HBAR, HC, ME_C2, V_PER_NM_TO_V_PER_M};
use crate::error::{require_positive, Result};
use crate::scalar::Real;

/// Kinematic state of a beam electron.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElectronBeam<T> {
    /// Kinetic energy, eV.
    pub kinetic_energy: T,
    /// Lorentz factor.
    pub gamma: T,
    /// v / c.
    pub beta: T,
    /// Speed, nm/fs.
    pub velocity: T,
    /// de Broglie wavelength, pm.
    pub wavelength: T,
}

impl<T: Real> ElectronBeam<T> {
    pub fn from_kinetic_energy(kinetic_energy: T) -> Result<Self> {
        require_positive(kinetic_energy, "kinetic energy")?;
        let rest = T::lit(ME_C2);
        let total = kinetic_energy + rest;
        let gamma = T::one() + kinetic_energy / rest;
        // pc = sqrt(E_k^2 + 2 E_k mc^2); avoids the 1 - 1/gamma^2 cancellation
        let pc = (kinetic_energy * (kinetic_energy + T::lit(2.0) * rest)).sqrt();
        let beta = pc / total;
        Ok(Self {
            kinetic_energy,
            gamma,
            beta,
            velocity: beta * T::lit(C),
            wavelength: T::lit(HC) / pc * T::lit(1.0e3),
        })
    }

    /// Angular frequency in rad/fs for a photon energy in eV.
    #[inline]
    pub fn omega(photon_energy: T) -> T {
        photon_energy / T::lit(HBAR)
    }

    /// Optical wavenumber along the beam, `ω / v` in 1/nm.
    #[inline]
    pub fn longitudinal_wavenumber(&self, photon_energy: T) -> T {
        Self::omega(photon_energy) / self.velocity
    }
}

/// Distance over which the quadratic sideband phases `-2π l² d / z_T` realign, nm.
///
/// `z_T = 4π m_e v³ γ³ / (ħ ω²)`.
pub fn talbot_distance<T: Real>(beam: &ElectronBeam<T>, photon_energy: T) -> Result<T> {
    require_positive(photon_energy, "photon energy")?;
    let v3g3 = (beam.velocity * beam.gamma).powi(3);
    let c2 = T::lit(C * C);
    Ok(T::lit(4.0) * T::PI() * T::lit(ME_C2) * T::lit(HBAR) * v3g3
        / (c2 * photon_energy * photon_energy))
}

/// Field amplitude `2 m_e γ v ω / e` at which ponderomotive combs rival the linear one, V/m.
pub fn threshold_field<T: Real>(beam: &ElectronBeam<T>, photon_energy: T) -> Result<T> {
    require_positive(photon_energy, "photon energy")?;
    let omega = ElectronBeam::omega(photon_energy);
    // e * E_thres in eV/nm
    let e_field = T::lit(2.0 * ME_C2 / (C * C)) * beam.gamma * beam.velocity * omega;
    Ok(e_field * T::lit(V_PER_NM_TO_V_PER_M))
}

/// Which Coulomb kick to estimate between two beam electrons.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Separation {
    Longitudinal,
    Transverse,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CoulombKick<T> {
    /// Energy change, eV.
    EnergyShift(T),
    /// Lateral deflection angle, rad.
    Deflection(T),
}

impl<T: Copy> CoulombKick<T> {
    pub fn value(&self) -> T {
        match *self {
            CoulombKick::EnergyShift(v) | CoulombKick::Deflection(v) => v,
        }
    }
}

/// Impulse estimate of the pairwise Coulomb kick over an interaction path.
///
/// A constant force `e²/d²` acts during the transit time `L/v`. Longitudinally
/// this gives `ΔE = e² L / d²`; transversely `Δθ = ΔE / (γ m_e c² β²)`.
pub fn coulomb_degradation<T: Real>(
    beam: &ElectronBeam<T>,
    path_length: T,
    separation: T,
    kind: Separation,
) -> Result<CoulombKick<T>> {
    require_positive(path_length, "path length")?;
    require_positive(separation, "separation")?;
    let work = T::lit(E2) * path_length / (separation * separation);
    Ok(match kind {
        Separation::Longitudinal => CoulombKick::EnergyShift(work),
        Separation::Transverse => {
            CoulombKick::Deflection(work / (beam.gamma * T::lit(ME_C2) * beam.beta * beam.beta))
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeTiming<T> {
    /// Optical period, fs.
    pub period: T,
    /// Distance travelled by the beam in one period, nm.
    pub spacing: T,
}

pub fn mode_period_spacing<T: Real>(beam: &ElectronBeam<T>, mode_energy: T) -> Result<ModeTiming<T>> {
    require_positive(mode_energy, "mode energy")?;
    let period = T::lit(2.0) * T::PI() * T::lit(HBAR) / mode_energy;
    Ok(ModeTiming { period, spacing: beam.velocity * period })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn beam(ek: f64) -> ElectronBeam<f64> {
        ElectronBeam::from_kinetic_energy(ek).unwrap()
    }

    #[test]
    fn hundred_kev_state() {
        let b = beam(100e3);
        assert!((b.gamma - 1.195_69).abs() < 1e-5);
        assert!((b.velocity - 164.35).abs() < 0.01);
        assert!((b.wavelength - 3.70).abs() < 0.005);
    }

    #[test]
    fn wavelength_range_endpoints() {
        assert!((beam(30e3).wavelength - 6.98).abs() / 6.98 < 1e-3);
        assert!((beam(300e3).wavelength - 1.97).abs() / 1.97 < 2e-3);
    }

    #[test]
    fn invalid_energy() {
        assert!(matches!(ElectronBeam::from_kinetic_energy(0.0), Err(Error::Domain(_))));
        assert!(ElectronBeam::from_kinetic_energy(-5.0).is_err());
        assert!(ElectronBeam::from_kinetic_energy(f64::NAN).is_err());
    }

    #[test]
    fn talbot_values() {
        let zt = talbot_distance(&beam(100e3), 1.5).unwrap();
        assert!((zt - 1.586e8).abs() / 1.586e8 < 1e-3);
        let zt2 = talbot_distance(&beam(200e3), 1.5).unwrap();
        // independent evaluation of the defining formula (gamma = 1.391390, v = 208.4500 nm/fs)
        assert!((zt2 - 5.099_463e8).abs() / 5.099_463e8 < 1e-6);
        let quarter = talbot_distance(&beam(100e3), 3.0).unwrap();
        assert!((quarter * 4.0 / zt - 1.0).abs() < 1e-12);
        assert!(talbot_distance(&beam(100e3), 0.0).is_err());
    }

    #[test]
    fn threshold_values() {
        let e = threshold_field(&beam(100e3), 1.5).unwrap();
        assert!((e - 5.09e12).abs() / 5.09e12 < 2e-3);
        let e30 = threshold_field(&beam(30e3), 1.5).unwrap();
        // gamma = 1.058709, v = 98.44470 nm/fs
        assert!((e30 - 2.700_865e12).abs() / 2.700_865e12 < 1e-6);
        let e3 = threshold_field(&beam(100e3), 3.0).unwrap();
        assert!((e3 / (2.0 * e) - 1.0).abs() < 1e-12);
        assert!(threshold_field(&beam(100e3), -1.0).is_err());
    }

    #[test]
    fn coulomb_kicks() {
        let b = beam(100e3);
        let de = coulomb_degradation(&b, 1e4, 1e3, Separation::Longitudinal).unwrap();
        assert!(matches!(de, CoulombKick::EnergyShift(_)));
        assert!((de.value() - 0.0144).abs() < 1e-5);
        let dt = coulomb_degradation(&b, 1e4, 1e3, Separation::Transverse).unwrap();
        assert!((dt.value() - 7.84e-8).abs() < 0.01e-8);
        let far = coulomb_degradation(&b, 1e4, 1e9, Separation::Longitudinal).unwrap();
        assert!(far.value() < 1e-9 * de.value());
        assert!(coulomb_degradation(&b, 0.0, 1e3, Separation::Transverse).is_err());
        assert!(coulomb_degradation(&b, 1.0, -1e3, Separation::Transverse).is_err());
    }

    #[test]
    fn mode_timing() {
        let t = mode_period_spacing(&beam(100e3), 1.0).unwrap();
        assert!((t.period - 4.1357).abs() < 1e-3);
        assert!((t.spacing - 679.8).abs() < 0.2);
        let t2 = mode_period_spacing(&beam(100e3), 2.0).unwrap();
        assert_eq!(t2.period * 2.0, t.period);
        let t300 = mode_period_spacing(&beam(300e3), 1.0).unwrap();
        // v(300 keV) = 232.7965 nm/fs
        assert!((t300.spacing - 962.769).abs() < 1e-3);
        assert!(mode_period_spacing(&beam(100e3), 0.0).is_err());
    }

    #[test]
    fn single_precision_beam() {
        let b = ElectronBeam::<f32>::from_kinetic_energy(100e3).unwrap();
        assert!((b.gamma - 1.195_69).abs() < 1e-4);
    }
}
