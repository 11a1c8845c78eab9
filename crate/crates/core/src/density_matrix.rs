//! Longitudinal density matrix of one electron sampled over a single comoving
//! optical period `ℓ = 2πv/ω`, with PINEM and free-propagation transforms.
//!
//! Samples sit at `z_i = i ℓ / n`; `ρ` is stored in 1/nm so that
//! `Σ ρ_ii ℓ/n = 1`.

use std::f64::consts::PI;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::constants::HBAR;
use crate::error::{require_positive, Error, Result};
use crate::kinematics::talbot_distance;
use crate::pinem::{ladder, propagation_phase};
use crate::Beam;

/// Default number of samples per period.
pub const DEFAULT_GRID: usize = 512;
/// Largest sideband weight allowed to alias on the grid.
pub const ALIAS_TOLERANCE: f64 = 1e-8;

const MAGIC: &[u8; 8] = b"FBRHOv1\0";

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrixGrid {
    rho: DMatrix<Complex64>,
    /// ℓ, nm.
    period: f64,
    /// ħω, eV.
    photon_energy: f64,
    beam: Beam,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostics {
    pub trace: f64,
    /// `max |ρ_ij - ρ*_ji| ℓ/n`.
    pub hermiticity_error: f64,
    /// `Tr ρ²`.
    pub purity: f64,
    /// `ρ(z_i, z_i)`, 1/nm.
    pub diagonal: Vec<f64>,
}

fn check_size(n: usize) -> Result<()> {
    if n < 2 || !n.is_power_of_two() {
        return Err(Error::contract(format!("grid size {n} must be a power of two >= 2")));
    }
    Ok(())
}

/// Optical period travelled by the beam, `2πv/ω` in nm.
pub fn comoving_period(beam: &Beam, photon_energy: f64) -> Result<f64> {
    require_positive(photon_energy, "photon energy")?;
    Ok(2.0 * PI * beam.velocity * HBAR / photon_energy)
}

impl DensityMatrixGrid {
    /// Validates a matrix given in 1/nm: square, power-of-two size, Hermitian and unit trace.
    pub fn from_matrix(rho: DMatrix<Complex64>, beam: Beam, photon_energy: f64) -> Result<Self> {
        if rho.nrows() != rho.ncols() {
            return Err(Error::contract("density matrix must be square"));
        }
        check_size(rho.nrows())?;
        let period = comoving_period(&beam, photon_energy)?;
        let grid = Self { rho, period, photon_energy, beam };
        let d = grid.diagnostics();
        if d.hermiticity_error > 1e-12 {
            return Err(Error::contract(format!("matrix is not Hermitian (error {:e})", d.hermiticity_error)));
        }
        if (d.trace - 1.0).abs() > 1e-10 {
            return Err(Error::contract(format!("trace is {}, expected 1", d.trace)));
        }
        Ok(grid)
    }

    /// `ρ = |ψ⟩⟨ψ|` from samples of `ψ(z_i)`; the samples are renormalised.
    pub fn pure(psi: &[Complex64], beam: Beam, photon_energy: f64) -> Result<Self> {
        check_size(psi.len())?;
        let period = comoving_period(&beam, photon_energy)?;
        let h = period / psi.len() as f64;
        let norm2: f64 = psi.iter().map(|c| c.norm_sqr()).sum::<f64>() * h;
        if !(norm2 > 0.0) || !norm2.is_finite() {
            return Err(Error::contract("wavefunction has zero or non-finite norm"));
        }
        let scale = 1.0 / norm2.sqrt();
        let v: Vec<Complex64> = psi.iter().map(|c| c * scale).collect();
        let n = psi.len();
        let rho = DMatrix::from_fn(n, n, |i, j| v[i] * v[j].conj());
        Ok(Self { rho, period, photon_energy, beam })
    }

    /// Plane wave with uniform density `1/ℓ`.
    pub fn uniform_pure(n: usize, beam: Beam, photon_energy: f64) -> Result<Self> {
        Self::pure(&vec![Complex64::new(1.0, 0.0); n], beam, photon_energy)
    }

    /// Fully decohered uniform state `ρ = 1/ℓ · δ_ij`, purity `1/n`.
    pub fn maximally_mixed(n: usize, beam: Beam, photon_energy: f64) -> Result<Self> {
        check_size(n)?;
        let period = comoving_period(&beam, photon_energy)?;
        let rho = DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(1.0 / period, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        Ok(Self { rho, period, photon_energy, beam })
    }

    pub fn size(&self) -> usize {
        self.rho.nrows()
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn photon_energy(&self) -> f64 {
        self.photon_energy
    }

    pub fn beam(&self) -> &Beam {
        &self.beam
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.rho
    }

    fn step(&self) -> f64 {
        self.period / self.size() as f64
    }

    pub fn z(&self) -> Vec<f64> {
        let h = self.step();
        (0..self.size()).map(|i| i as f64 * h).collect()
    }

    /// Interaction with a PINEM field of coupling `β`, followed by free propagation over `distance` nm.
    ///
    /// The interaction multiplies by the unimodular `P₀(z) = e^{-2i Im(β e^{iωz/v})}`
    /// on both indices; propagation then supplies the sideband phases of `P_d`.
    pub fn apply_pinem(&self, beta: Complex64, distance: f64) -> Result<Self> {
        if !distance.is_finite() || distance < 0.0 {
            return Err(Error::domain("propagation distance must be finite and >= 0"));
        }
        let n = self.size();
        let (_, tail) = ladder(beta, n / 2 - 1);
        if tail > ALIAS_TOLERANCE {
            return Err(Error::contract(format!(
                "sidebands beyond the {n}-point grid carry {tail:.3e} > {ALIAS_TOLERANCE:e}; refine the grid"
            )));
        }
        let p0: Vec<Complex64> = (0..n)
            .map(|i| {
                let e = Complex64::from_polar(1.0, 2.0 * PI * i as f64 / n as f64);
                Complex64::from_polar(1.0, -2.0 * (beta * e).im)
            })
            .collect();
        let rho = DMatrix::from_fn(n, n, |i, j| p0[i] * self.rho[(i, j)] * p0[j].conj());
        let out = Self { rho, ..self.clone() };
        if distance > 0.0 {
            out.free_propagate(distance)
        } else {
            Ok(out)
        }
    }

    /// Free propagation: sideband `l` acquires `e^{-2πi l² d / z_T}`, applied spectrally on both indices.
    pub fn free_propagate(&self, distance: f64) -> Result<Self> {
        if !distance.is_finite() || distance < 0.0 {
            return Err(Error::domain("propagation distance must be finite and >= 0"));
        }
        let n = self.size();
        let ratio = distance / talbot_distance(&self.beam, self.photon_energy)?;
        let phase: Vec<Complex64> = (0..n)
            .map(|k| {
                let l = if k < n / 2 { k as i64 } else { k as i64 - n as i64 };
                propagation_phase(l, ratio)
            })
            .collect();

        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(n);
        let inv = planner.plan_fft_inverse(n);
        let mut m = self.rho.clone();
        // ρ → F ρ F†: forward along the first index, inverse along the second
        fft_columns(&mut m, fwd.as_ref());
        m.transpose_mut();
        fft_columns(&mut m, inv.as_ref());
        m.transpose_mut();
        for j in 0..n {
            for i in 0..n {
                m[(i, j)] *= phase[i] * phase[j].conj();
            }
        }
        fft_columns(&mut m, inv.as_ref());
        m.transpose_mut();
        fft_columns(&mut m, fwd.as_ref());
        m.transpose_mut();
        let scale = 1.0 / (n * n) as f64;
        m.iter_mut().for_each(|c| *c *= scale);
        Ok(Self { rho: m, ..self.clone() })
    }

    pub fn diagnostics(&self) -> Diagnostics {
        let n = self.size();
        let h = self.step();
        let diagonal: Vec<f64> = (0..n).map(|i| self.rho[(i, i)].re).collect();
        let trace = diagonal.iter().sum::<f64>() * h;
        let mut herm: f64 = 0.0;
        let mut purity = 0.0;
        for j in 0..n {
            for i in 0..n {
                herm = herm.max((self.rho[(i, j)] - self.rho[(j, i)].conj()).norm());
                purity += self.rho[(i, j)].norm_sqr();
            }
        }
        Diagnostics { trace, hermiticity_error: herm * h, purity: purity * h * h, diagonal }
    }

    /// Smallest eigenvalue of the dimensionless matrix `ρ ℓ/n`.
    pub fn min_eigenvalue(&self) -> f64 {
        let h = self.step();
        let sym = (&self.rho + self.rho.adjoint()) * Complex64::new(0.5 * h, 0.0);
        sym.symmetric_eigenvalues().iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(
            out,
            "# n={},period_nm={},photon_ev={},kinetic_ev={}",
            self.size(),
            self.period,
            self.photon_energy,
            self.beam.kinetic_energy
        )?;
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["i", "j", "re", "im"])?;
        let n = self.size();
        for i in 0..n {
            for j in 0..n {
                let c = self.rho[(i, j)];
                w.write_record([i.to_string(), j.to_string(), c.re.to_string(), c.im.to_string()])?;
            }
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let mut reader = BufReader::new(input);
        let mut first = String::new();
        reader.read_line(&mut first)?;
        let meta = first
            .trim()
            .strip_prefix('#')
            .ok_or_else(|| Error::Format("missing '#' metadata line".into()))?;
        let mut n = None;
        let mut photon = None;
        let mut kinetic = None;
        for kv in meta.split(',') {
            let (k, v) = kv
                .trim()
                .split_once('=')
                .ok_or_else(|| Error::Format(format!("bad metadata entry {kv:?}")))?;
            let parse = |v: &str| v.parse::<f64>().map_err(|_| Error::Format(format!("bad value for {k}")));
            match k {
                "n" => n = Some(v.parse::<usize>().map_err(|_| Error::Format("bad grid size".into()))?),
                "photon_ev" => photon = Some(parse(v)?),
                "kinetic_ev" => kinetic = Some(parse(v)?),
                "period_nm" => {
                    parse(v)?;
                }
                _ => {}
            }
        }
        let (Some(n), Some(photon), Some(kinetic)) = (n, photon, kinetic) else {
            return Err(Error::Format("metadata needs n, photon_ev and kinetic_ev".into()));
        };
        check_size(n)?;
        let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(reader);
        let mut rho = DMatrix::from_element(n, n, Complex64::new(f64::NAN, f64::NAN));
        let mut count = 0usize;
        for record in rdr.records() {
            let r = record?;
            if r.len() != 4 {
                return Err(Error::Format("expected columns i,j,re,im".into()));
            }
            let bad = || Error::Format(format!("bad row {:?}", r));
            let i: usize = r[0].parse().map_err(|_| bad())?;
            let j: usize = r[1].parse().map_err(|_| bad())?;
            if i >= n || j >= n {
                return Err(bad());
            }
            rho[(i, j)] = Complex64::new(r[2].parse().map_err(|_| bad())?, r[3].parse().map_err(|_| bad())?);
            count += 1;
        }
        if count != n * n || rho.iter().any(|c| c.re.is_nan()) {
            return Err(Error::Format(format!("expected {} entries, found {count}", n * n)));
        }
        Self::from_matrix(rho, Beam::from_kinetic_energy(kinetic)?, photon)
    }

    /// Little-endian layout: magic, `u64 n`, `f64 ℓ`, `f64 ħω`, `f64 E_k`, then `n²` row-major `(re, im)` pairs.
    pub fn write_binary<W: Write>(&self, mut out: W) -> Result<()> {
        out.write_all(MAGIC)?;
        out.write_all(&(self.size() as u64).to_le_bytes())?;
        for v in [self.period, self.photon_energy, self.beam.kinetic_energy] {
            out.write_all(&v.to_le_bytes())?;
        }
        let n = self.size();
        for i in 0..n {
            for j in 0..n {
                let c = self.rho[(i, j)];
                out.write_all(&c.re.to_le_bytes())?;
                out.write_all(&c.im.to_le_bytes())?;
            }
        }
        out.flush()?;
        Ok(())
    }

    pub fn read_binary<R: Read>(mut input: R) -> Result<Self> {
        let mut magic = [0u8; 8];
        input.read_exact(&mut magic)?;
        if &magic != MAGIC {
            return Err(Error::Format("not a density-matrix file".into()));
        }
        let mut word = [0u8; 8];
        let mut next = |input: &mut R| -> Result<[u8; 8]> {
            input.read_exact(&mut word)?;
            Ok(word)
        };
        let n = u64::from_le_bytes(next(&mut input)?) as usize;
        check_size(n)?;
        let _period = f64::from_le_bytes(next(&mut input)?);
        let photon = f64::from_le_bytes(next(&mut input)?);
        let kinetic = f64::from_le_bytes(next(&mut input)?);
        let mut rho = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let re = f64::from_le_bytes(next(&mut input)?);
                let im = f64::from_le_bytes(next(&mut input)?);
                rho[(i, j)] = Complex64::new(re, im);
            }
        }
        Self::from_matrix(rho, Beam::from_kinetic_energy(kinetic)?, photon)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = std::io::BufWriter::new(std::fs::File::create(path)?);
        if is_csv(path) {
            self.write_csv(file)
        } else {
            self.write_binary(file)
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = BufReader::new(std::fs::File::open(path)?);
        if is_csv(path) {
            Self::read_csv(file)
        } else {
            Self::read_binary(file)
        }
    }
}

fn is_csv(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

fn fft_columns(m: &mut DMatrix<Complex64>, plan: &dyn Fft<f64>) {
    let n = m.nrows();
    for col in m.as_mut_slice().chunks_mut(n) {
        plan.process(col);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pinem::comb_amplitudes;
    use proptest::prelude::*;

    fn beam() -> Beam {
        Beam::from_kinetic_energy(100e3).unwrap()
    }

    const HW: f64 = 1.5;

    fn max_diff(a: &DensityMatrixGrid, b: &DensityMatrixGrid) -> f64 {
        let h = a.step();
        a.rho.iter().zip(b.rho.iter()).map(|(x, y)| (x - y).norm() * h).fold(0.0, f64::max)
    }

    fn gaussian_pure(n: usize) -> DensityMatrixGrid {
        let ell = comoving_period(&beam(), HW).unwrap();
        let psi: Vec<Complex64> = (0..n)
            .map(|i| {
                let z = i as f64 * ell / n as f64 - 0.4 * ell;
                Complex64::from_polar((-(z / (0.1 * ell)).powi(2)).exp(), 3.0 * z / ell)
            })
            .collect();
        DensityMatrixGrid::pure(&psi, beam(), HW).unwrap()
    }

    #[test]
    fn diagnostics_of_reference_states() {
        let p = DensityMatrixGrid::uniform_pure(64, beam(), HW).unwrap().diagnostics();
        assert!((p.purity - 1.0).abs() < 1e-10 && (p.trace - 1.0).abs() < 1e-12);
        assert!(p.hermiticity_error <= 1e-12);
        let m = DensityMatrixGrid::maximally_mixed(64, beam(), HW).unwrap().diagnostics();
        assert!((m.purity - 1.0 / 64.0).abs() < 1e-14);
        assert!(DensityMatrixGrid::uniform_pure(48, beam(), HW).is_err());
    }

    #[test]
    fn zero_coupling_is_identity() {
        let g = gaussian_pure(64);
        let out = g.apply_pinem(Complex64::new(0.0, 0.0), 0.0).unwrap();
        assert!(max_diff(&g, &out) < 1e-15);
        assert!(max_diff(&g, &g.free_propagate(0.0).unwrap()) < 1e-14);
    }

    #[test]
    fn interaction_keeps_uniform_density() {
        let g = DensityMatrixGrid::uniform_pure(128, beam(), HW).unwrap();
        let out = g.apply_pinem(Complex64::new(2.0, 1.0), 0.0).unwrap();
        let d = out.diagnostics();
        assert!(d.diagonal.iter().all(|r| (r * g.period() - 1.0).abs() < 1e-12));
    }

    #[test]
    fn matches_pinem_density_after_propagation() {
        let b = beam();
        let g = DensityMatrixGrid::uniform_pure(256, b, HW).unwrap();
        let beta = Complex64::from_polar(3.0, 0.7);
        let d = 0.013 * talbot_distance(&b, HW).unwrap();
        let out = g.apply_pinem(beta, d).unwrap();
        let diag = out.diagnostics().diagonal;
        let comb = comb_amplitudes(beta, HW, &b, d, None).unwrap();
        let (_, rho_t) = comb.density_over_period(256).unwrap();
        for (j, r) in rho_t.iter().enumerate() {
            let i = (256 - j) % 256;
            assert!((diag[i] * g.period() - r).abs() < 1e-6, "{j}");
        }
    }

    #[test]
    fn propagated_p0_equals_pd() {
        // P_0-modulated state then propagation equals the pure state built from P_d
        let b = beam();
        let n = 128;
        let beta = Complex64::new(0.8, -1.1);
        let d = 0.21 * talbot_distance(&b, HW).unwrap();
        let comb = comb_amplitudes(beta, HW, &b, d, None).unwrap();
        let ell = comoving_period(&b, HW).unwrap();
        let psi: Vec<Complex64> = (0..n).map(|i| comb.modulation(i as f64 * ell / n as f64)).collect();
        let want = DensityMatrixGrid::pure(&psi, b, HW).unwrap();
        let got = DensityMatrixGrid::uniform_pure(n, b, HW)
            .unwrap()
            .apply_pinem(beta, 0.0)
            .unwrap()
            .free_propagate(d)
            .unwrap();
        assert!(max_diff(&want, &got) < 1e-8);
    }

    #[test]
    fn talbot_revival() {
        let b = beam();
        let zt = talbot_distance(&b, HW).unwrap();
        let g = gaussian_pure(64).apply_pinem(Complex64::new(1.0, 0.3), 0.0).unwrap();
        assert!(max_diff(&g, &g.free_propagate(zt).unwrap()) < 1e-10);
        let half = g.free_propagate(0.5 * zt).unwrap();
        let (d0, d1) = (g.diagnostics().diagonal, half.diagnostics().diagonal);
        for i in 0..64 {
            assert!((d1[(i + 32) % 64] - d0[i]).abs() * g.period() < 1e-10);
        }
    }

    #[test]
    fn additive_couplings() {
        let g = gaussian_pure(64);
        let (b1, b2) = (Complex64::new(0.4, 0.2), Complex64::new(-0.1, 0.9));
        let seq = g.apply_pinem(b1, 0.0).unwrap().apply_pinem(b2, 0.0).unwrap();
        let one = g.apply_pinem(b1 + b2, 0.0).unwrap();
        assert!(max_diff(&seq, &one) < 1e-10);
    }

    #[test]
    fn mixed_state_diagonal_survives_interaction() {
        let g = DensityMatrixGrid::maximally_mixed(32, beam(), HW).unwrap();
        let out = g.apply_pinem(Complex64::new(1.5, 0.0), 0.0).unwrap();
        assert!(max_diff(&g, &out) < 1e-15);
        assert!(g.min_eigenvalue() > 0.0);
    }

    #[test]
    fn aliasing_guard() {
        let g = DensityMatrixGrid::uniform_pure(16, beam(), HW).unwrap();
        assert!(matches!(g.apply_pinem(Complex64::new(6.0, 0.0), 0.0), Err(Error::Contract(_))));
    }

    #[test]
    fn csv_and_binary_round_trip() {
        let g = gaussian_pure(16).apply_pinem(Complex64::new(0.5, 0.5), 1e6).unwrap();
        let mut buf = Vec::new();
        g.write_csv(&mut buf).unwrap();
        let back = DensityMatrixGrid::read_csv(buf.as_slice()).unwrap();
        assert_eq!(back.rho, g.rho);
        let mut bin = Vec::new();
        g.write_binary(&mut bin).unwrap();
        assert_eq!(bin.len(), 8 + 8 + 24 + 16 * 16 * 16);
        let back = DensityMatrixGrid::read_binary(bin.as_slice()).unwrap();
        assert_eq!(back.rho, g.rho);
        bin[0] = b'X';
        assert!(matches!(DensityMatrixGrid::read_binary(bin.as_slice()), Err(Error::Format(_))));
        let dir = tempfile::tempdir().unwrap();
        for name in ["rho.csv", "rho.bin"] {
            let p = dir.path().join(name);
            g.save(&p).unwrap();
            assert_eq!(DensityMatrixGrid::load(&p).unwrap().rho, g.rho);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn transforms_preserve_invariants(
            mag in 0.0..4.0f64,
            arg in -PI..PI,
            frac in 0.0..1.0f64,
        ) {
            let b = beam();
            let g = gaussian_pure(64);
            let d = frac * talbot_distance(&b, HW).unwrap();
            let out = g.apply_pinem(Complex64::from_polar(mag, arg), d).unwrap().diagnostics();
            prop_assert!((out.trace - 1.0).abs() < 1e-10);
            prop_assert!(out.hermiticity_error < 1e-10);
            prop_assert!((out.purity - 1.0).abs() < 1e-10);
        }
    }
}
