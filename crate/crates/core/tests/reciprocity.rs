mod common;

use freebeam::pinem::beta_dipole;

#[test]
fn dipole_coupling_matches_field_quadrature() {
    for (i, c) in common::random_cases(2024, 10).iter().enumerate() {
        let closed = beta_dipole(&c.beam, c.impact, &c.alpha, c.photon_energy, c.e_ext).unwrap();
        let direct = common::beta_by_quadrature(&c.beam, c.impact, &c.alpha, c.photon_energy, c.e_ext);
        let rel = (closed - direct).norm() / direct.norm();
        assert!(rel < 1e-4, "case {i}: closed {closed} direct {direct} rel {rel:e}");
    }
}
