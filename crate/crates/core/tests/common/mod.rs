#![allow(dead_code)]

use std::f64::consts::PI;

use freebeam::constants::{C, HBAR};
use freebeam::dipole_probe::Polarizability;
use freebeam::{Beam, Complex64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-15 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// Composite Simpson on `[a, b]` with at least `min_panels` even panels.
fn simpson<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64, min_panels: usize) -> Complex64 {
    let n = min_panels + min_panels % 2;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let c = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += f(a + i as f64 * h) * c;
    }
    s * (h / 3.0)
}

/// `e E_z` on the trajectory `(R, z)` from the retarded field of a point dipole `p` (eV·nm²) at the origin.
fn dipole_ez(p: [Complex64; 3], r_perp: [f64; 2], z: f64, k: f64) -> Complex64 {
    let r = (r_perp[0].powi(2) + r_perp[1].powi(2) + z * z).sqrt();
    let n = [r_perp[0] / r, r_perp[1] / r, z / r];
    let np: Complex64 = (0..3).map(|i| p[i] * n[i]).sum();
    let e = Complex64::from_polar(1.0, k * r);
    // (n×p)×n = p - n(n·p)
    let far = (p[2] - np * n[2]) * (k * k / r);
    let near = (np * (3.0 * n[2]) - p[2]) * Complex64::new(1.0 / r.powi(3), -k / (r * r));
    (far + near) * e
}

/// `β = (1/ħω) ∫ e E_z e^{-iωz/v} dz` by direct quadrature of the dipole field,
/// with integration-by-parts corrections for the oscillatory tails beyond `±reach`.
pub fn beta_by_quadrature(
    beam: &Beam,
    impact: [f64; 2],
    alpha: &Polarizability,
    photon_energy: f64,
    e_ext: [Complex64; 3],
) -> Complex64 {
    let a = alpha.at(photon_energy);
    let p = [a * e_ext[0], a * e_ext[1], a * e_ext[2]];
    let omega = photon_energy / HBAR;
    let k = omega / C;
    let q = omega / beam.velocity;
    let f = |z: f64| dipole_ez(p, impact, z, k) * Complex64::from_polar(1.0, -q * z);
    let b = impact[0].hypot(impact[1]);
    let reach = 4.0e5;
    let fast = 2.0 * PI / (k + q);
    let mut edges = vec![0.0, b, 4.0 * b, 20.0 * b];
    let mut x = 20.0 * b;
    while x < reach {
        x = (x * 2.0).min(reach);
        edges.push(x);
    }
    let mut total = Complex64::new(0.0, 0.0);
    for w in edges.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let panels = (((hi - lo) / (fast / 40.0)).ceil() as usize).max(((hi - lo) / (b / 50.0)).ceil().min(4000.0) as usize);
        total += simpson(&f, lo, hi, panels.max(20));
        total += simpson(&f, -hi, -lo, panels.max(20));
    }
    // ∫_L^∞ f ≈ -f(L)/(iφ'(L)), φ' = k z/r - q
    let phase_rate = |z: f64| k * z / (z * z + b * b).sqrt() - q;
    let i = Complex64::i();
    total += -f(reach) / (i * phase_rate(reach));
    total += f(-reach) / (i * phase_rate(-reach));
    total / photon_energy
}

/// Reproducible random dipole configuration.
pub struct DipoleCase {
    pub beam: Beam,
    pub impact: [f64; 2],
    pub alpha: Polarizability,
    pub photon_energy: f64,
    pub e_ext: [Complex64; 3],
}

pub fn random_cases(seed: u64, count: usize) -> Vec<DipoleCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let beam = Beam::from_kinetic_energy(rng.random_range(30e3..300e3)).unwrap();
            let distance = rng.random_range(5.0..60.0);
            let angle = rng.random_range(0.0..2.0 * PI);
            let resonance = rng.random_range(1.0..3.0);
            let alpha = freebeam::dipole_probe::lorentzian_polarizability(
                resonance,
                rng.random_range(1e-3..0.1),
                rng.random_range(0.0..0.3),
            )
            .unwrap();
            let photon_energy = resonance * rng.random_range(0.9..1.1);
            let mut comp = || Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            let e_ext = [comp(), comp(), comp()];
            DipoleCase {
                beam,
                impact: [distance * angle.cos(), distance * angle.sin()],
                alpha,
                photon_energy,
                e_ext,
            }
        })
        .collect()
}
