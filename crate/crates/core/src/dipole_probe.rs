//! Electron probing of a small isotropic dipolar scatterer: evanescent field
//! profile, EELS and CL spectra, angle-resolved CL and thermal gain/loss.
//!
//! Probabilities are per unit angular frequency (fs); divide by ħ for per-eV.
//! Geometry: the particle sits at the origin and the beam travels along +z,
//! crossing the transverse plane at `R₀ · direction`.

use num_complex::Complex64;

use crate::constants::{C, E2, HBAR, KB};
use crate::error::{require_positive, Error, Result};
use crate::specfun::modified_bessel_k;
use crate::Beam;

type Vec3 = [Complex64; 3];

/// Transverse profile `F(R, ω)` of the electron's evanescent field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldProfile {
    /// `(i/γ) K₀(ωR/vγ)`
    pub fz: Complex64,
    /// `-K₁(ωR/vγ)`
    pub fr: Complex64,
    /// `ωR/vγ`
    pub argument: f64,
    pub gamma: f64,
}

impl FieldProfile {
    /// `|F|² = K₁² + K₀²/γ²`, the common spatial factor of EELS and CL.
    pub fn weight(&self) -> f64 {
        self.fz.norm_sqr() + self.fr.norm_sqr()
    }

    /// Cartesian `F` with the radial unit vector `radial` (transverse, unit length).
    pub fn vector(&self, radial: [f64; 2]) -> Vec3 {
        [self.fr * radial[0], self.fr * radial[1], self.fz]
    }
}

pub fn field_profile(beam: &Beam, distance: f64, photon_energy: f64) -> Result<FieldProfile> {
    require_positive(distance, "impact parameter")?;
    require_positive(photon_energy, "photon energy")?;
    let omega = photon_energy / HBAR;
    let argument = omega * distance / (beam.velocity * beam.gamma);
    let k = modified_bessel_k(argument)?;
    Ok(FieldProfile {
        fz: Complex64::new(0.0, k.order0 / beam.gamma),
        fr: Complex64::new(-k.order1, 0.0),
        argument,
        gamma: beam.gamma,
    })
}

/// Lorentzian dipole with radiative-reaction correction.
///
/// `α(ω) = α₀ / (1 - i (2ω³/3c³) α₀)`, `α₀ = (3c³γ_r / 2ω₀²) / (ω₀² - ω² - iωγ_nr)`,
/// which saturates `Im{-1/α} ≥ 2ω³/3c³` with equality when `γ_nr = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Polarizability {
    /// ħω₀, eV.
    pub resonance_energy: f64,
    /// ħγ_r, eV.
    pub radiative_rate: f64,
    /// ħγ_nr, eV.
    pub nonradiative_rate: f64,
}

pub fn lorentzian_polarizability(
    resonance_energy: f64,
    radiative_rate: f64,
    nonradiative_rate: f64,
) -> Result<Polarizability> {
    require_positive(resonance_energy, "resonance energy")?;
    require_positive(radiative_rate, "radiative rate")?;
    if !(nonradiative_rate >= 0.0) || !nonradiative_rate.is_finite() {
        return Err(Error::domain("nonradiative rate must be finite and >= 0"));
    }
    Ok(Polarizability { resonance_energy, radiative_rate, nonradiative_rate })
}

impl Polarizability {
    /// `α(ω)` in nm³ at photon energy ħω (eV).
    pub fn at(&self, photon_energy: f64) -> Complex64 {
        let w = photon_energy / HBAR;
        let w0 = self.resonance_energy / HBAR;
        let gr = self.radiative_rate / HBAR;
        let gnr = self.nonradiative_rate / HBAR;
        let c3 = C * C * C;
        // work with 1/α so the lossless resonance stays finite
        let inv_bare = Complex64::new(w0 * w0 - w * w, -w * gnr) * (w0 * w0 / (1.5 * c3 * gr));
        let reaction = Complex64::new(0.0, 2.0 * w * w * w / (3.0 * c3));
        (inv_bare - reaction).inv()
    }
}

/// `2ω³/3c³` in nm⁻³.
pub fn radiative_bound(photon_energy: f64) -> f64 {
    let w = photon_energy / HBAR;
    2.0 * w * w * w / (3.0 * C * C * C)
}

/// EELS and CL probabilities per unit ω (fs).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbePair {
    pub gamma_eels: f64,
    pub gamma_cl: f64,
}

impl ProbePair {
    /// Per-eV values `(EELS, CL)`.
    pub fn per_ev(&self) -> (f64, f64) {
        (self.gamma_eels / HBAR, self.gamma_cl / HBAR)
    }
}

/// `4e²ω² / (π ħ v⁴ γ²)` in fs/nm³.
fn probe_prefactor(beam: &Beam, omega: f64) -> f64 {
    let v2 = beam.velocity * beam.velocity;
    4.0 * E2 * omega * omega / (std::f64::consts::PI * HBAR * v2 * v2 * beam.gamma * beam.gamma)
}

pub fn eels_cl_dipole(
    beam: &Beam,
    distance: f64,
    alpha: &Polarizability,
    photon_energy: f64,
) -> Result<ProbePair> {
    let profile = field_profile(beam, distance, photon_energy)?;
    let omega = photon_energy / HBAR;
    let a = alpha.at(photon_energy);
    let common = probe_prefactor(beam, omega) * profile.weight();
    Ok(ProbePair {
        gamma_eels: common * a.im,
        gamma_cl: common * radiative_bound(photon_energy) * a.norm_sqr(),
    })
}

fn check_unit(v: &[f64], what: &str) -> Result<()> {
    let n2: f64 = v.iter().map(|x| x * x).sum();
    if (n2.sqrt() - 1.0).abs() > 1e-12 || !n2.is_finite() {
        return Err(Error::domain(format!("{what} must be a unit vector")));
    }
    Ok(())
}

/// Dipole induced in the particle by the passing electron, divided by `e` (nm·fs).
///
/// The driving field at the particle is `(2eω/v²γ) F` evaluated with the radial
/// unit vector pointing from the beam to the particle, i.e. `-direction`.
pub fn induced_dipole(
    beam: &Beam,
    direction: [f64; 2],
    distance: f64,
    alpha: &Polarizability,
    photon_energy: f64,
) -> Result<Vec3> {
    check_unit(&direction, "impact direction")?;
    let profile = field_profile(beam, distance, photon_energy)?;
    let omega = photon_energy / HBAR;
    let drive = 2.0 * omega / (beam.velocity * beam.velocity * beam.gamma);
    let a = alpha.at(photon_energy) * drive;
    let f = profile.vector([-direction[0], -direction[1]]);
    Ok([a * f[0], a * f[1], a * f[2]])
}

/// Photon emission probability per unit ω and solid angle radiated by the
/// dipole `e·p` (p in nm·fs) towards `emission`.
///
/// `dΓ/dΩdω = (c / 4π²ħω) |f|²` with `f = (ω²/c²)(r̂×p)×r̂`.
pub fn far_field_probability(dipole: &Vec3, photon_energy: f64, emission: [f64; 3]) -> Result<f64> {
    check_unit(&emission, "emission direction")?;
    let omega = photon_energy / HBAR;
    let along: Complex64 = dipole.iter().zip(emission.iter()).map(|(p, r)| p * *r).sum();
    let total: f64 = dipole.iter().map(|p| p.norm_sqr()).sum();
    // |(r×p)×r|² = |p|² - |r·p|²
    let transverse = (total - along.norm_sqr()).max(0.0);
    let pi2 = std::f64::consts::PI * std::f64::consts::PI;
    Ok(E2 * omega.powi(3) / (4.0 * pi2 * HBAR * C.powi(3)) * transverse)
}

/// Angle- and frequency-resolved CL probability (fs/sr).
pub fn cl_angular_dipole(
    beam: &Beam,
    direction: [f64; 2],
    distance: f64,
    alpha: &Polarizability,
    photon_energy: f64,
    emission: [f64; 3],
) -> Result<f64> {
    let p = induced_dipole(beam, direction, distance, alpha, photon_energy)?;
    far_field_probability(&p, photon_energy, emission)
}

/// Occupation statistics of the sample excitations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Statistics {
    Bosonic,
    Fermionic,
}

/// Thermal occupation at energy `energy` (eV) and temperature (K).
pub fn occupation(statistics: Statistics, energy: f64, temperature: f64) -> f64 {
    if temperature == 0.0 {
        return 0.0;
    }
    let x = energy / (KB * temperature);
    match statistics {
        Statistics::Bosonic => 1.0 / x.exp_m1(),
        Statistics::Fermionic => 1.0 / (x.exp() + 1.0),
    }
}

/// Finite-temperature probability at signed frequency ω (rad/fs) from the
/// zero-temperature loss probability `Γ(|ω|)`. Positive ω is loss, negative is gain.
pub fn thermal_scale(
    zero_temperature: f64,
    signed_omega: f64,
    temperature: f64,
    statistics: Statistics,
) -> Result<f64> {
    if signed_omega == 0.0 || !signed_omega.is_finite() {
        return Err(Error::domain("thermal occupation is singular at ω = 0"));
    }
    if !(temperature >= 0.0) || !temperature.is_finite() {
        return Err(Error::domain("temperature must be finite and >= 0"));
    }
    let n = occupation(statistics, HBAR * signed_omega.abs(), temperature);
    let factor = match (statistics, signed_omega > 0.0) {
        (Statistics::Bosonic, true) => n + 1.0,
        (Statistics::Fermionic, true) => 1.0 - n,
        (_, false) => n,
    };
    Ok(zero_temperature * factor)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn beam() -> Beam {
        Beam::from_kinetic_energy(100e3).unwrap()
    }

    #[test]
    fn profile_at_unit_argument() {
        let b = beam();
        let omega = 1.5 / HBAR;
        let r = b.velocity * b.gamma / omega;
        let f = field_profile(&b, r, 1.5).unwrap();
        assert!((f.argument - 1.0).abs() < 1e-14);
        assert!((f.fz.im * b.gamma - 0.421_024_438_2).abs() < 1e-10);
        assert!((f.fr.re + 0.601_907_230_2).abs() < 1e-10);
        assert_eq!(f.fz.re, 0.0);
    }

    #[test]
    fn profile_limits() {
        let b = beam();
        let scale = b.velocity * b.gamma / (1.5 / HBAR);
        let f10 = field_profile(&b, 10.0 * scale, 1.5).unwrap();
        let f11 = field_profile(&b, 11.0 * scale, 1.5).unwrap();
        let ratio = f10.fr.norm() / f11.fr.norm();
        let asym = 1f64.exp() * (11.0f64 / 10.0).sqrt();
        assert!((ratio / asym - 1.0).abs() < 0.02);
        let near = field_profile(&b, 1e-3 * scale, 1.5).unwrap();
        assert!((near.fr.re + 1e3).abs() / 1e3 < 1e-3);
        assert!(field_profile(&b, 0.0, 1.5).is_err());
        assert!(field_profile(&b, -2.0, 1.5).is_err());
    }

    #[test]
    fn polarizability_limits() {
        let a = lorentzian_polarizability(1.5, 0.05, 0.0).unwrap();
        let at_res = a.at(1.5);
        let lhs = (-1.0 / at_res).im;
        assert!((lhs / radiative_bound(1.5) - 1.0).abs() < 1e-12);
        let stat = a.at(1e-6);
        assert!(stat.re > 0.0 && stat.im.abs() < 1e-12 * stat.re);
        assert!(lorentzian_polarizability(0.0, 0.1, 0.0).is_err());
        assert!(lorentzian_polarizability(1.0, 0.0, 0.0).is_err());
        assert!(lorentzian_polarizability(1.0, 0.1, -0.1).is_err());
    }

    #[test]
    fn passivity_and_optical_theorem_sweep() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let a = lorentzian_polarizability(
                rng.random_range(0.2..5.0),
                rng.random_range(1e-4..0.3),
                rng.random_range(0.0..0.5),
            )
            .unwrap();
            let e = rng.random_range(0.05..8.0);
            let v = a.at(e);
            assert!(v.im > 0.0);
            let bound = radiative_bound(e);
            assert!(((-1.0 / v).im - bound) / bound >= -1e-12);
        }
    }

    #[test]
    fn eels_equals_cl_for_lossless_resonance() {
        let a = lorentzian_polarizability(2.0, 0.02, 0.0).unwrap();
        let p = eels_cl_dipole(&beam(), 20.0, &a, 2.0).unwrap();
        assert!((p.gamma_eels / p.gamma_cl - 1.0).abs() < 1e-10);
        assert!(eels_cl_dipole(&beam(), 0.0, &a, 2.0).is_err());
    }

    #[test]
    fn eels_map_factorises() {
        let b = beam();
        let a = lorentzian_polarizability(2.0, 0.02, 0.05).unwrap();
        let p1 = eels_cl_dipole(&b, 15.0, &a, 1.9).unwrap();
        let p2 = eels_cl_dipole(&b, 30.0, &a, 1.9).unwrap();
        let w1 = field_profile(&b, 15.0, 1.9).unwrap().weight();
        let w2 = field_profile(&b, 30.0, 1.9).unwrap().weight();
        assert!((p1.gamma_eels / p2.gamma_eels / (w1 / w2) - 1.0).abs() < 1e-12);
        // EELS/CL ratio does not depend on position
        assert!((p1.gamma_eels / p1.gamma_cl / (p2.gamma_eels / p2.gamma_cl) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn far_field_node_and_inversion() {
        let p = [Complex64::new(0.3, 0.0), Complex64::new(-0.4, 0.0), Complex64::new(1.2, 0.0)];
        let norm = (0.09f64 + 0.16 + 1.44).sqrt();
        let axis = [0.3 / norm, -0.4 / norm, 1.2 / norm];
        assert!(far_field_probability(&p, 1.5, axis).unwrap() < 1e-20);
        let d = [0.48, 0.6, 0.64];
        let back = [-0.48, -0.6, -0.64];
        assert_eq!(
            far_field_probability(&p, 1.5, d).unwrap(),
            far_field_probability(&p, 1.5, back).unwrap()
        );
        assert!(far_field_probability(&p, 1.5, [1.0, 1.0, 0.0]).is_err());
    }

    #[test]
    fn thermal_ratios() {
        let w = 0.05 / HBAR;
        let loss = thermal_scale(1.0, w, 300.0, Statistics::Bosonic).unwrap();
        let gain = thermal_scale(1.0, -w, 300.0, Statistics::Bosonic).unwrap();
        assert!((loss / gain - 6.92).abs() < 0.01);
        let cold_gain = thermal_scale(2.0, -w, 0.0, Statistics::Bosonic).unwrap();
        let cold_loss = thermal_scale(2.0, w, 0.0, Statistics::Bosonic).unwrap();
        assert_eq!((cold_gain, cold_loss), (0.0, 2.0));
        let n = occupation(Statistics::Bosonic, KB * 300.0, 300.0);
        assert!((n - 1.0 / (std::f64::consts::E - 1.0)).abs() < 1e-14);
        assert!((n - 0.581_98).abs() < 1e-5);
        let fl = thermal_scale(1.0, w, 300.0, Statistics::Fermionic).unwrap();
        let fg = thermal_scale(1.0, -w, 300.0, Statistics::Fermionic).unwrap();
        assert!((fl / fg / (0.05 / (KB * 300.0)).exp() - 1.0).abs() < 1e-12);
        assert!(thermal_scale(1.0, 0.0, 300.0, Statistics::Bosonic).is_err());
        assert!(thermal_scale(1.0, 1.0, -1.0, Statistics::Bosonic).is_err());
    }
}
