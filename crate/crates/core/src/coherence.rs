//! Multi-electron excitation of a sample mode: coherence factors, bunched and
//! superradiant totals, electron-light interference and the search for the
//! largest PINEM coherence factor.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kinematics::talbot_distance;
use crate::pinem::{auto_l_max, ladder, propagation_phase};
use crate::quadrature::{trapezoid, uniform_spacing};
use crate::specfun::bessel_j;
use crate::Beam;

const CS_SLACK: f64 = 1e-12;

/// Single-electron excitation probability `Γ⁰` and transverse-averaged coupling `Q`.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingSummary {
    pub gamma0: f64,
    pub q: Complex64,
    pub label: String,
}

impl CouplingSummary {
    pub fn new(gamma0: f64, q: Complex64) -> Result<Self> {
        let s = Self { gamma0, q, label: String::new() };
        s.check()?;
        Ok(s)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    fn check(&self) -> Result<()> {
        check_cauchy_schwarz(self.gamma0, self.q)
    }
}

fn check_cauchy_schwarz(gamma0: f64, q: Complex64) -> Result<()> {
    if !(gamma0 >= 0.0) || !gamma0.is_finite() {
        return Err(Error::contract("excitation probability must be finite and >= 0"));
    }
    if q.norm_sqr() > gamma0 * (1.0 + CS_SLACK) + f64::MIN_POSITIVE {
        return Err(Error::contract(format!(
            "|Q|^2 = {:e} exceeds Γ0 = {gamma0:e}",
            q.norm_sqr()
        )));
    }
    Ok(())
}

/// Fourier component `M` of an electron density at frequency ω.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherenceFactor {
    pub m: Complex64,
    /// Mode frequency, rad/fs.
    pub omega: f64,
}

impl CoherenceFactor {
    pub fn norm(&self) -> f64 {
        self.m.norm()
    }
}

/// `M = ∫ dz e^{iωz/v} ρ(z)` on a uniform grid (trapezoid rule).
///
/// A density concentrated in one cell therefore gives `|M| = 1` exactly.
pub fn coherence_m_profile(z: &[f64], density: &[f64], omega: f64, beam: &Beam) -> Result<CoherenceFactor> {
    if z.len() != density.len() {
        return Err(Error::contract("density and grid lengths differ"));
    }
    let h = uniform_spacing(z)?;
    if density.iter().any(|&r| !(r >= 0.0) || !r.is_finite()) {
        return Err(Error::contract("density must be finite and non-negative"));
    }
    let norm = trapezoid(h, density);
    if (norm - 1.0).abs() > 1e-6 {
        return Err(Error::contract(format!("density integrates to {norm}, expected 1")));
    }
    let q = omega / beam.velocity;
    let weighted: Vec<Complex64> =
        z.iter().zip(density).map(|(&zi, &r)| Complex64::from_polar(r, q * zi)).collect();
    Ok(CoherenceFactor { m: trapezoid(h, &weighted) / norm, omega })
}

/// Graf closed form and direct sideband sum for the `m`-th harmonic of a PINEM-modulated electron.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PinemCoherence {
    /// `i^m e^{-im arg(-β)} J_m(4|β| sin(2πmd/z_T))`
    pub closed_form: CoherenceFactor,
    /// `Σ_l c_l c*_{l+m}`
    pub direct_sum: CoherenceFactor,
}

pub fn coherence_m_pinem(
    beta: Complex64,
    distance: f64,
    harmonic: u32,
    photon_energy: f64,
    beam: &Beam,
) -> Result<PinemCoherence> {
    let zt = talbot_distance(beam, photon_energy)?;
    if !distance.is_finite() || distance < 0.0 {
        return Err(Error::domain("propagation distance must be finite and >= 0"));
    }
    let m = harmonic as i64;
    let omega = harmonic as f64 * photon_energy / crate::constants::HBAR;
    let ratio = distance / zt;
    let b = beta.norm();
    let theta = if b == 0.0 { 0.0 } else { (-beta).arg() };

    let turns = (harmonic as f64 * ratio).rem_euclid(1.0);
    let arg = 4.0 * b * (2.0 * PI * turns).sin();
    let phase = Complex64::i().powi(harmonic as i32) * Complex64::from_polar(1.0, -(m as f64) * theta);
    let closed = phase * bessel_j(m, arg);

    let l_max = auto_l_max(b) + harmonic as usize;
    let (c, _) = ladder(beta, l_max);
    let off = l_max as i64;
    let propagated = |l: i64| c[(l + off) as usize] * propagation_phase(l, ratio);
    let mut direct = Complex64::new(0.0, 0.0);
    for l in -off..=(off - m) {
        direct += propagated(l) * propagated(l + m).conj();
    }
    Ok(PinemCoherence {
        closed_form: CoherenceFactor { m: closed, omega },
        direct_sum: CoherenceFactor { m: direct, omega },
    })
}

/// `Γ = Σγ_j + Σ_{j≠j'} Q_j Q*_{j'} + |β_f|² + 2Σ Re{β_f* Q_j}`.
///
/// Evaluated as `Σ(γ_j - |Q_j|²) + |β_f + ΣQ_j|²`, which is manifestly non-negative.
pub fn total_excitation_multi(electrons: &[CouplingSummary], field: Option<Complex64>) -> Result<f64> {
    let mut incoherent = 0.0;
    let mut coherent = field.unwrap_or_default();
    for e in electrons {
        e.check()?;
        incoherent += (e.gamma0 - e.q.norm_sqr()).max(0.0);
        coherent += e.q;
    }
    Ok(incoherent + coherent.norm_sqr())
}

/// `Γ = NΓ⁰ + |Q⁰|² Σ_{j≠j'} e^{iω(z_j' - z_j)/v}` for point-like electrons at `arrivals` (nm).
pub fn bunched_total(arrivals: &[f64], gamma0: f64, q0: Complex64, omega: f64, beam: &Beam) -> Result<f64> {
    check_cauchy_schwarz(gamma0, q0)?;
    let Some(&z0) = arrivals.first() else {
        return Err(Error::contract("need at least one electron"));
    };
    let k = omega / beam.velocity;
    // phases relative to the first arrival keep coincident electrons exact
    let sum: Complex64 = arrivals.iter().map(|&z| Complex64::from_polar(1.0, k * (z - z0))).sum();
    let n = arrivals.len() as f64;
    Ok(n * gamma0 + q0.norm_sqr() * (sum.norm_sqr() - n))
}

/// `Γ = NΓ⁰ + N(N-1)|Q M|²`.
pub fn superradiant_pinem_total(n: usize, gamma0: f64, q: Complex64, m: &CoherenceFactor) -> Result<f64> {
    if n == 0 {
        return Err(Error::contract("need at least one electron"));
    }
    check_cauchy_schwarz(gamma0, q)?;
    if m.norm() > 1.0 + CS_SLACK {
        return Err(Error::contract(format!("|M| = {} exceeds 1", m.norm())));
    }
    let n = n as f64;
    Ok(n * gamma0 + n * (n - 1.0) * (q * m.m).norm_sqr())
}

/// Mean and standard error of a Monte-Carlo estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub std_error: f64,
    pub draws: usize,
}

/// Averages [`bunched_total`] over `draws` beams of `electrons` arrivals drawn
/// uniformly over `periods` optical periods. Each draw has its own stream derived
/// from `seed`, so the result does not depend on the thread count.
pub fn dilute_beam_average(
    electrons: usize,
    periods: f64,
    draws: usize,
    seed: u64,
    gamma0: f64,
    q0: Complex64,
    omega: f64,
    beam: &Beam,
) -> Result<Estimate> {
    if electrons == 0 || draws < 2 {
        return Err(Error::contract("need at least one electron and two draws"));
    }
    if !(periods > 0.0) {
        return Err(Error::contract("arrival window must be positive"));
    }
    let window = periods * 2.0 * PI * beam.velocity / omega;
    let samples: Vec<f64> = (0..draws)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let z: Vec<f64> = (0..electrons).map(|_| rng.random_range(0.0..window)).collect();
            bunched_total(&z, gamma0, q0, omega, beam)
        })
        .collect::<Result<_>>()?;
    let n = draws as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Ok(Estimate { mean, std_error: (var / n).sqrt(), draws })
}

/// Closed interval `[lo, hi]` used by the coherence search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub lo: f64,
    pub hi: f64,
}

impl Range {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    fn check(&self, what: &str) -> Result<()> {
        if !self.lo.is_finite() || !self.hi.is_finite() || self.lo < 0.0 || self.hi < self.lo {
            return Err(Error::contract(format!("{what} range [{}, {}] is empty or invalid", self.lo, self.hi)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MOptimum {
    pub beta_star: f64,
    pub d_star: f64,
    pub max_m2: f64,
    /// `4|β*| sin(2πm d*/z_T)` at the optimum.
    pub x_star: f64,
}

/// Extremes of `|sin u|` over `[u0, u1]` together with where they occur.
fn abs_sin_extremes(u0: f64, u1: f64) -> ((f64, f64), (f64, f64)) {
    let f = |u: f64| u.sin().abs();
    let mut lo = if f(u0) <= f(u1) { (f(u0), u0) } else { (f(u1), u1) };
    let mut hi = if f(u0) >= f(u1) { (f(u0), u0) } else { (f(u1), u1) };
    let k0 = (u0 / PI).ceil();
    if k0 * PI <= u1 {
        lo = (0.0, k0 * PI);
    }
    let k1 = (u0 / PI - 0.5).ceil();
    if (k1 + 0.5) * PI <= u1 {
        hi = (1.0, (k1 + 0.5) * PI);
    }
    (lo, hi)
}

fn golden_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Largest `|M_m|²` reachable with `|β| ∈ beta` and `d ∈ distance` (nm).
///
/// `|M_m|` depends on the two parameters only through `x = 4|β| sin(2πmd/z_T)`, so
/// the search runs over the reachable interval of `|x|` (coarse scan, then golden
/// section) and maps the optimum back with the smallest admissible `|β|`.
pub fn optimize_m(
    harmonic: u32,
    photon_energy: f64,
    beam: &Beam,
    beta: Range,
    distance: Range,
) -> Result<MOptimum> {
    if harmonic == 0 {
        return Err(Error::contract("harmonic order must be >= 1"));
    }
    beta.check("|β|")?;
    distance.check("d")?;
    let zt = talbot_distance(beam, photon_energy)?;
    let m = harmonic as i64;
    let scale = 2.0 * PI * harmonic as f64 / zt;
    let ((s_lo, u_lo), (s_hi, u_hi)) = abs_sin_extremes(scale * distance.lo, scale * distance.hi);
    let x_lo = 4.0 * beta.lo * s_lo;
    let x_hi = 4.0 * beta.hi * s_hi;
    let objective = |x: f64| bessel_j(m, x).powi(2);

    let x_star = if x_hi <= x_lo {
        x_lo
    } else {
        const SCAN: usize = 4000;
        let step = (x_hi - x_lo) / SCAN as f64;
        let (best, _) = (0..=SCAN)
            .map(|i| (i, objective(x_lo + i as f64 * step)))
            .fold((0, f64::NEG_INFINITY), |acc, (i, v)| if v > acc.1 { (i, v) } else { acc });
        let a = x_lo + best.saturating_sub(1) as f64 * step;
        let b = (x_lo + (best + 1) as f64 * step).min(x_hi);
        let x = golden_max(objective, a, b, 1e-12 * (1.0 + x_hi));
        // the maximum may sit on the interval edge
        [x_lo, x, x_hi].into_iter().fold(x, |acc, c| if objective(c) > objective(acc) { c } else { acc })
    };

    let beta_star = if s_hi > 0.0 { beta.lo.max(x_star / (4.0 * s_hi)) } else { beta.lo };
    let target = if beta_star > 0.0 { (x_star / (4.0 * beta_star)).clamp(s_lo, s_hi) } else { s_lo };
    // |sin u| is continuous between its extremes, so bisection finds the matching phase
    let (mut a, mut b) = (u_lo, u_hi);
    let g = |u: f64| u.sin().abs() - target;
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if g(mid) <= 0.0 {
            a = mid;
        } else {
            b = mid;
        }
        if (b - a).abs() <= 1e-15 * (1.0 + a.abs()) {
            break;
        }
    }
    let u_star = 0.5 * (a + b);
    let d_star = (u_star / scale).clamp(distance.lo, distance.hi);
    let x_back = 4.0 * beta_star * (scale * d_star).sin();
    Ok(MOptimum { beta_star, d_star, max_m2: objective(x_back), x_star })
}
