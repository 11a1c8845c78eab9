//! Stimulated electron-light interaction: coupling coefficients, sideband
//! combs with free-propagation phases, multicolor spectra and the resulting
//! temporal density.
//!
//! The sideband amplitudes are
//! `c_l = J_l(2|β|) e^{i l arg(-β)} e^{-2πi l² d / z_T}` and the modulation
//! factor is `P_d(z) = Σ_l c_l e^{i l ω z / v}`.

use std::f64::consts::PI;
use std::path::Path;

use num_complex::Complex64;

use crate::constants::{C, HBAR, ME_C2};
use crate::dipole_probe::{field_profile, Polarizability};
use crate::error::{require_positive, Error, Result};
use crate::kinematics::talbot_distance;
use crate::quadrature::{simpson, uniform_spacing};
use crate::specfun::bessel_j_upto;
use crate::Beam;

/// Largest tolerated probability outside the retained sideband window.
pub const TAIL_TOLERANCE: f64 = 1e-10;

/// Optical field sampled along the electron trajectory (V/nm).
#[derive(Debug, Clone, PartialEq)]
pub struct SampledLineField {
    z: Vec<f64>,
    ex: Vec<Complex64>,
    ey: Vec<Complex64>,
    ez: Vec<Complex64>,
    spacing: f64,
}

impl SampledLineField {
    pub fn new(
        z: Vec<f64>,
        ex: Vec<Complex64>,
        ey: Vec<Complex64>,
        ez: Vec<Complex64>,
    ) -> Result<Self> {
        let n = z.len();
        if ex.len() != n || ey.len() != n || ez.len() != n {
            return Err(Error::contract("field components must match the grid length"));
        }
        let spacing = uniform_spacing(&z)?;
        Ok(Self { z, ex, ey, ez, spacing })
    }

    /// Samples `field(z) -> [E_x, E_y, E_z]` on `count` uniform points in `[start, stop]`.
    pub fn from_fn<F>(start: f64, stop: f64, count: usize, field: F) -> Result<Self>
    where
        F: Fn(f64) -> [Complex64; 3],
    {
        if count < 2 {
            return Err(Error::contract("grid needs at least two points"));
        }
        let h = (stop - start) / (count - 1) as f64;
        let z: Vec<f64> = (0..count).map(|i| start + i as f64 * h).collect();
        let mut ex = Vec::with_capacity(count);
        let mut ey = Vec::with_capacity(count);
        let mut ez = Vec::with_capacity(count);
        for &zi in &z {
            let [x, y, zc] = field(zi);
            ex.push(x);
            ey.push(y);
            ez.push(zc);
        }
        Self::new(z, ex, ey, ez)
    }

    /// Reads columns `z_nm, ReEx, ImEx, ReEy, ImEy, ReEz, ImEz`; `#` lines are comments.
    pub fn from_csv_reader<R: std::io::Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .has_headers(true)
            .from_reader(reader);
        let headers = rdr.headers()?.clone();
        let expected = ["z_nm", "ReEx", "ImEx", "ReEy", "ImEy", "ReEz", "ImEz"];
        if headers.len() != expected.len() || headers.iter().zip(expected).any(|(h, e)| h != e) {
            return Err(Error::Format(format!(
                "expected header {}, found {}",
                expected.join(","),
                headers.iter().collect::<Vec<_>>().join(",")
            )));
        }
        let (mut z, mut ex, mut ey, mut ez) = (vec![], vec![], vec![], vec![]);
        for (row, record) in rdr.records().enumerate() {
            let record = record?;
            let mut v = [0.0; 7];
            for (slot, field) in v.iter_mut().zip(record.iter()) {
                *slot = field
                    .parse()
                    .map_err(|_| Error::Format(format!("row {}: bad number {field:?}", row + 1)))?;
            }
            if record.len() != 7 {
                return Err(Error::Format(format!("row {}: expected 7 columns", row + 1)));
            }
            z.push(v[0]);
            ex.push(Complex64::new(v[1], v[2]));
            ey.push(Complex64::new(v[3], v[4]));
            ez.push(Complex64::new(v[5], v[6]));
        }
        Self::new(z, ex, ey, ez)
    }

    pub fn from_csv_path(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_csv_reader(std::fs::File::open(path)?)
    }

    pub fn z(&self) -> &[f64] {
        &self.z
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    fn warn_if_truncated(&self) {
        let mag = |i: usize| {
            (self.ex[i].norm_sqr() + self.ey[i].norm_sqr() + self.ez[i].norm_sqr()).sqrt()
        };
        let peak = (0..self.z.len()).map(mag).fold(0.0, f64::max);
        let edge = mag(0).max(mag(self.z.len() - 1));
        if peak > 0.0 && edge > 1e-6 * peak {
            log::warn!(
                "field does not vanish at the grid ends ({:.3e} of peak); coupling may be truncated",
                edge / peak
            );
        }
    }
}

/// `β = (e/ħω) ∫ dz E_z(z) e^{-iωz/v}`, composite Simpson on the field grid.
pub fn beta_from_field(field: &SampledLineField, photon_energy: f64, beam: &Beam) -> Result<Complex64> {
    require_positive(photon_energy, "photon energy")?;
    field.warn_if_truncated();
    let q = beam.longitudinal_wavenumber(photon_energy);
    let integrand: Vec<Complex64> = field
        .z
        .iter()
        .zip(&field.ez)
        .map(|(&z, &e)| e * Complex64::from_polar(1.0, -q * z))
        .collect();
    Ok(simpson(field.spacing, &integrand) / photon_energy)
}

/// Coupling to a dipolar particle at the origin illuminated by `e_ext` (V/nm),
/// for a beam crossing the transverse plane at `impact` (nm).
///
/// `β = (2ieω/ħv²γ) α(ω) F(R,ω)·E_ext`, with the radial unit vector of `F`
/// pointing from the particle to the beam.
pub fn beta_dipole(
    beam: &Beam,
    impact: [f64; 2],
    alpha: &Polarizability,
    photon_energy: f64,
    e_ext: [Complex64; 3],
) -> Result<Complex64> {
    let distance = impact[0].hypot(impact[1]);
    let profile = field_profile(beam, distance, photon_energy)?;
    let radial = [impact[0] / distance, impact[1] / distance];
    let f = profile.vector(radial);
    let omega = photon_energy / HBAR;
    let dot: Complex64 = f.iter().zip(e_ext.iter()).map(|(a, b)| a * b).sum();
    let pre = Complex64::new(0.0, 2.0 * omega / (HBAR * beam.velocity * beam.velocity * beam.gamma));
    Ok(pre * alpha.at(photon_energy) * dot)
}

/// Ponderomotive contributions of the `A²` coupling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ponderomotive {
    /// Elastic phase φ, rad.
    pub phase: f64,
    /// Coupling of the double-frequency comb.
    pub beta_prime: Complex64,
}

/// `1/(M ω²)` with `1/M = e²/(ħ m_e γ v)`, in nm/eV².
fn inverse_mass_omega2(beam: &Beam, photon_energy: f64) -> f64 {
    let omega = photon_energy / HBAR;
    let m_gamma_v = ME_C2 / (C * C) * beam.gamma * beam.velocity;
    1.0 / (HBAR * m_gamma_v * omega * omega)
}

/// Ponderomotive phase and β′ from the sampled field.
///
/// `φ = -(1/Mω²) ∫ [|E_x|² + |E_y|² + |E_z|²/γ²]` and
/// `β′ = (-i/2Mω²) ∫ [E_x² + E_y² + E_z²/γ²] e^{-2iωz/v}`, with fields carried as `eE` in eV/nm.
pub fn ponderomotive_terms(
    field: &SampledLineField,
    photon_energy: f64,
    beam: &Beam,
) -> Result<Ponderomotive> {
    require_positive(photon_energy, "photon energy")?;
    field.warn_if_truncated();
    let g2 = beam.gamma * beam.gamma;
    let q2 = 2.0 * beam.longitudinal_wavenumber(photon_energy);
    let scale = inverse_mass_omega2(beam, photon_energy);
    let n = field.z.len();
    let mut intensity = Vec::with_capacity(n);
    let mut square = Vec::with_capacity(n);
    for i in 0..n {
        let (x, y, z) = (field.ex[i], field.ey[i], field.ez[i]);
        intensity.push(x.norm_sqr() + y.norm_sqr() + z.norm_sqr() / g2);
        square.push((x * x + y * y + z * z / g2) * Complex64::from_polar(1.0, -q2 * field.z[i]));
    }
    let phase = -scale * simpson(field.spacing, &intensity);
    let beta_prime = Complex64::new(0.0, -0.5 * scale) * simpson(field.spacing, &square);
    Ok(Ponderomotive { phase, beta_prime })
}

/// Default sideband cutoff `ceil(4|β| + 8√(|β|+1) + 20)`.
pub fn auto_l_max(beta_abs: f64) -> usize {
    (4.0 * beta_abs + 8.0 * (beta_abs + 1.0).sqrt() + 20.0).ceil() as usize
}

/// Sideband amplitudes `J_l(2|β|) e^{il arg(-β)}` for `l ∈ [-l_max, l_max]`,
/// plus the probability left outside that window.
pub(crate) fn ladder(beta: Complex64, l_max: usize) -> (Vec<Complex64>, f64) {
    let j = bessel_j_upto(l_max, 2.0 * beta.norm());
    let theta = if beta == Complex64::new(0.0, 0.0) { 0.0 } else { (-beta).arg() };
    let mut out = vec![Complex64::new(0.0, 0.0); 2 * l_max + 1];
    let mut kept = j[0] * j[0];
    out[l_max] = Complex64::new(j[0], 0.0);
    for (l, &jl) in j.iter().enumerate().skip(1) {
        let phase = Complex64::from_polar(1.0, l as f64 * theta);
        out[l_max + l] = phase * jl;
        let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
        out[l_max - l] = phase.conj() * (sign * jl);
        kept += 2.0 * jl * jl;
    }
    (out, (1.0 - kept).max(0.0))
}

/// Phase factor `e^{-2πi l² d / z_T}`, reduced modulo one turn before exponentiating.
pub(crate) fn propagation_phase(l: i64, d_over_zt: f64) -> Complex64 {
    let turns = ((l * l) as f64 * d_over_zt).rem_euclid(1.0);
    Complex64::from_polar(1.0, -2.0 * PI * turns)
}

/// PINEM state of the electron: couplings and sideband amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct PinemInteraction {
    pub beta: Complex64,
    pub beta_prime: Complex64,
    pub ponderomotive_phase: f64,
    /// ħω, eV.
    pub photon_energy: f64,
    /// Free propagation after the interaction, nm.
    pub distance: f64,
    /// Talbot distance for this beam and photon energy, nm.
    pub talbot: f64,
    pub l_max: usize,
    omega_over_v: f64,
    amplitudes: Vec<Complex64>,
}

/// Builds the propagated sideband comb.
///
/// With `l_max = None` the cutoff follows [`auto_l_max`]; an explicit cutoff that
/// leaves more than [`TAIL_TOLERANCE`] of the probability outside is rejected.
pub fn comb_amplitudes(
    beta: Complex64,
    photon_energy: f64,
    beam: &Beam,
    distance: f64,
    l_max: Option<usize>,
) -> Result<PinemInteraction> {
    let talbot = talbot_distance(beam, photon_energy)?;
    if !distance.is_finite() || distance < 0.0 {
        return Err(Error::domain("propagation distance must be finite and >= 0"));
    }
    if !beta.re.is_finite() || !beta.im.is_finite() {
        return Err(Error::domain("coupling must be finite"));
    }
    let l_max = l_max.unwrap_or_else(|| auto_l_max(beta.norm()));
    let (mut amplitudes, tail) = ladder(beta, l_max);
    if tail > TAIL_TOLERANCE {
        return Err(Error::contract(format!(
            "l_max = {l_max} leaves sideband tail {tail:.3e} > {TAIL_TOLERANCE:e}"
        )));
    }
    let ratio = distance / talbot;
    if ratio != 0.0 {
        for (i, a) in amplitudes.iter_mut().enumerate() {
            *a *= propagation_phase(i as i64 - l_max as i64, ratio);
        }
    }
    Ok(PinemInteraction {
        beta,
        beta_prime: Complex64::new(0.0, 0.0),
        ponderomotive_phase: 0.0,
        photon_energy,
        distance,
        talbot,
        l_max,
        omega_over_v: beam.longitudinal_wavenumber(photon_energy),
        amplitudes,
    })
}

impl PinemInteraction {
    /// Attaches the ponderomotive phase and β′ computed for the same field.
    pub fn with_ponderomotive(mut self, p: Ponderomotive) -> Self {
        self.ponderomotive_phase = p.phase;
        self.beta_prime = p.beta_prime;
        self
    }

    /// Amplitude of sideband `l`; zero outside the retained window.
    pub fn amplitude(&self, l: i64) -> Complex64 {
        let idx = l + self.l_max as i64;
        if idx < 0 || idx as usize >= self.amplitudes.len() {
            Complex64::new(0.0, 0.0)
        } else {
            self.amplitudes[idx as usize]
        }
    }

    /// `(l, c_l)` pairs from `-l_max` to `l_max`.
    pub fn sidebands(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let off = self.l_max as i64;
        self.amplitudes.iter().enumerate().map(move |(i, &c)| (i as i64 - off, c))
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn populations(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|c| c.norm_sqr()).collect()
    }

    pub fn total_population(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Optical period 2π/ω, fs.
    pub fn period(&self) -> f64 {
        2.0 * PI * HBAR / self.photon_energy
    }

    /// Modulation factor `P_d(z) = Σ c_l e^{ilωz/v}` in the comoving frame.
    pub fn modulation(&self, z: f64) -> Complex64 {
        let base = Complex64::from_polar(1.0, self.omega_over_v * z);
        self.phase_sum(base)
    }

    fn phase_sum(&self, base: Complex64) -> Complex64 {
        // Horner-like accumulation over l from -l_max upward
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.amplitudes.iter().rev() {
            acc = acc * base + c;
        }
        acc * base.powi(-(self.l_max as i32))
    }

    /// `|Σ c_l e^{-ilωτ}|²` at each τ (fs) of a uniform grid on `[0, 2π/ω)`.
    pub fn density_vs_time(&self, taus: &[f64]) -> Result<Vec<f64>> {
        let period = self.period();
        if !taus.is_empty() {
            if taus.len() >= 2 {
                uniform_spacing(taus)?;
            }
            let last = taus[taus.len() - 1];
            if taus[0] < 0.0 || last >= period * (1.0 + 1e-12) {
                return Err(Error::contract("τ grid must lie within one optical period [0, 2π/ω)"));
            }
        }
        let omega = self.photon_energy / HBAR;
        Ok(taus
            .iter()
            .map(|&t| self.phase_sum(Complex64::from_polar(1.0, -omega * t)).norm_sqr())
            .collect())
    }

    /// Density on `n` equally spaced times covering one period.
    pub fn density_over_period(&self, n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
        let period = self.period();
        let taus: Vec<f64> = (0..n).map(|i| i as f64 * period / n as f64).collect();
        let rho = self.density_vs_time(&taus)?;
        Ok((taus, rho))
    }
}

/// One multiplicative PINEM factor at harmonic `k` of the base frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ColorFactor {
    pub beta: Complex64,
    pub harmonic: u32,
}

/// Sideband populations on the base-frequency ladder starting at `l_min`.
#[derive(Debug, Clone, PartialEq)]
pub struct SidebandPopulations {
    pub l_min: i64,
    pub values: Vec<f64>,
}

impl SidebandPopulations {
    pub fn get(&self, l: i64) -> f64 {
        let i = l - self.l_min;
        if i < 0 || i as usize >= self.values.len() {
            0.0
        } else {
            self.values[i as usize]
        }
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }
}

/// Sideband amplitudes of a product of commuting PINEM factors, on the base ladder.
pub fn multicolor_amplitudes(factors: &[ColorFactor]) -> Result<(i64, Vec<Complex64>)> {
    let mut seen = std::collections::HashSet::new();
    for f in factors {
        if f.harmonic == 0 {
            return Err(Error::contract("harmonic order must be positive"));
        }
        if !seen.insert(f.harmonic) {
            return Err(Error::contract(format!("duplicate harmonic {}", f.harmonic)));
        }
    }
    let mut l_min = 0i64;
    let mut amps = vec![Complex64::new(1.0, 0.0)];
    for f in factors {
        let lm = auto_l_max(f.beta.norm());
        let (ladder, _) = ladder(f.beta, lm);
        let k = f.harmonic as i64;
        let span = 2 * lm as i64 * k;
        let mut next = vec![Complex64::new(0.0, 0.0); amps.len() + span as usize];
        for (i, &a) in amps.iter().enumerate() {
            if a == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (j, &b) in ladder.iter().enumerate() {
                next[i + j * k as usize] += a * b;
            }
        }
        l_min -= lm as i64 * k;
        amps = next;
    }
    Ok((l_min, amps))
}

/// Populations of the combined comb, optionally cropped to `[-l_max, l_max]`.
pub fn multicolor_populations(
    factors: &[ColorFactor],
    l_max: Option<usize>,
) -> Result<SidebandPopulations> {
    let (l_min, amps) = multicolor_amplitudes(factors)?;
    let full = SidebandPopulations { l_min, values: amps.iter().map(|a| a.norm_sqr()).collect() };
    let Some(l_max) = l_max else { return Ok(full) };
    let lm = l_max as i64;
    let values: Vec<f64> = (-lm..=lm).map(|l| full.get(l)).collect();
    let dropped = full.total() - values.iter().sum::<f64>();
    if dropped > TAIL_TOLERANCE {
        return Err(Error::contract(format!(
            "l_max = {l_max} drops {dropped:.3e} of the sideband probability"
        )));
    }
    Ok(SidebandPopulations { l_min: -lm, values })
}

/// Coupling `e E₀ a / ħω · sinc(ωa/2v)` of a top-hat `E_z = E₀` on `|z| < a/2`.
pub fn top_hat_beta(e_field: f64, length: f64, photon_energy: f64, beam: &Beam) -> f64 {
    let x = 0.5 * beam.longitudinal_wavenumber(photon_energy) * length;
    let sinc = if x == 0.0 { 1.0 } else { x.sin() / x };
    e_field * length / photon_energy * sinc
}
