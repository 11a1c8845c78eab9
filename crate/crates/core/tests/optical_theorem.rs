mod common;

use std::f64::consts::PI;

use freebeam::dipole_probe::{cl_angular_dipole, eels_cl_dipole, lorentzian_polarizability};
use freebeam::Beam;

#[test]
fn angular_cl_integrates_to_total() {
    let (x, w) = common::gauss_legendre(100);
    let n_phi = 100;
    for c in common::random_cases(99, 5) {
        let b = c.impact[0].hypot(c.impact[1]);
        let dir = [c.impact[0] / b, c.impact[1] / b];
        let mut sum = 0.0;
        for (cos_t, wt) in x.iter().zip(&w) {
            let sin_t = (1.0 - cos_t * cos_t).sqrt();
            for j in 0..n_phi {
                let ph = 2.0 * PI * j as f64 / n_phi as f64;
                let r = [sin_t * ph.cos(), sin_t * ph.sin(), *cos_t];
                sum += wt * cl_angular_dipole(&c.beam, dir, b, &c.alpha, c.photon_energy, r).unwrap();
            }
        }
        sum *= 2.0 * PI / n_phi as f64;
        let total = eels_cl_dipole(&c.beam, b, &c.alpha, c.photon_energy).unwrap().gamma_cl;
        assert!((sum / total - 1.0).abs() < 1e-6, "{sum} vs {total}");
    }
}

#[test]
fn axial_emission_below_lateral() {
    // the induced dipole leans towards z, which suppresses emission along the axis
    let beam = Beam::from_kinetic_energy(200e3).unwrap();
    let alpha = lorentzian_polarizability(2.0, 0.01, 0.0).unwrap();
    let along = cl_angular_dipole(&beam, [1.0, 0.0], 20.0, &alpha, 2.0, [0.0, 0.0, 1.0]).unwrap();
    let side = cl_angular_dipole(&beam, [1.0, 0.0], 20.0, &alpha, 2.0, [0.0, 1.0, 0.0]).unwrap();
    assert!(along < side);
}

#[test]
fn eels_bounds_cl() {
    for c in common::random_cases(5, 200) {
        let b = c.impact[0].hypot(c.impact[1]);
        let p = eels_cl_dipole(&c.beam, b, &c.alpha, c.photon_energy).unwrap();
        assert!(p.gamma_eels >= p.gamma_cl * (1.0 - 1e-12));
    }
}
