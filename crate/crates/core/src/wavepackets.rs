//! Electrons prepared as superpositions of Gaussian wavepackets at lateral
//! sites, and the two-electron and periodic-train interference curves built
//! from them.
//!
//! Packet `s` is `(πΔ²)^{-1/4} e^{-(z-z_s)²/2Δ²}` along the beam and δ-like at
//! its lateral site, so same-site overlaps are `I_ss' = e^{-(z_s-z_s')²/4Δ²}`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::coherence::{total_excitation_multi, CouplingSummary};
use crate::error::{Error, Result};
use crate::Beam;

/// Same-site overlaps below this count as non-overlapping.
pub const OVERLAP_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Packet {
    /// Longitudinal centre, nm.
    pub z: f64,
    /// Lateral site, nm.
    pub site: [f64; 2],
    pub weight: Complex64,
}

impl Packet {
    pub fn new(z: f64, site: [f64; 2], weight: Complex64) -> Self {
        Self { z, site, weight }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WavepacketTrain {
    pub packets: Vec<Packet>,
    /// Δ, nm.
    pub width: f64,
    /// `N_j = sqrt(Σ γ_s γ*_s' I_ss')`.
    pub normalization: f64,
    /// All same-site off-diagonal overlaps are below [`OVERLAP_TOLERANCE`].
    pub nonoverlapping: bool,
}

impl WavepacketTrain {
    pub fn overlap(&self, s: usize, t: usize) -> f64 {
        overlap(&self.packets[s], &self.packets[t], self.width)
    }
}

fn overlap(a: &Packet, b: &Packet, width: f64) -> f64 {
    if a.site != b.site {
        return 0.0;
    }
    let dz = a.z - b.z;
    (-dz * dz / (4.0 * width * width)).exp()
}

pub fn build_train(packets: Vec<Packet>, width: f64) -> Result<WavepacketTrain> {
    if !(width > 0.0) || !width.is_finite() {
        return Err(Error::contract("packet width must be positive"));
    }
    if packets.iter().all(|p| p.weight == Complex64::new(0.0, 0.0)) {
        return Err(Error::contract("train needs at least one nonzero weight"));
    }
    let mut norm2 = Complex64::new(0.0, 0.0);
    let mut nonoverlapping = true;
    for (s, a) in packets.iter().enumerate() {
        for (t, b) in packets.iter().enumerate() {
            let i = overlap(a, b, width);
            if s != t && i >= OVERLAP_TOLERANCE {
                nonoverlapping = false;
            }
            norm2 += a.weight * b.weight.conj() * i;
        }
    }
    Ok(WavepacketTrain { packets, width, normalization: norm2.re.sqrt(), nonoverlapping })
}

/// `S = e^{-ω²Δ²/2v²}`, the squared coherence factor of one packet.
pub fn packet_coherence(width: f64, omega: f64, beam: &Beam) -> f64 {
    let k = omega / beam.velocity;
    (-0.5 * k * k * width * width).exp()
}

/// Non-overlapping-limit `Γ` and `Q` of one electron for a lateral coupling map `β̃(R)`.
pub fn train_gamma_q<F>(train: &WavepacketTrain, coupling: F, omega: f64, beam: &Beam) -> Result<CouplingSummary>
where
    F: Fn([f64; 2]) -> Complex64,
{
    if !train.nonoverlapping {
        return Err(Error::contract(
            "packets overlap; use train_gamma_q_overlapping for the full overlap sums",
        ));
    }
    let k = omega / beam.velocity;
    let root_s = packet_coherence(train.width, omega, beam).sqrt();
    let mut weight = 0.0;
    let mut gamma = 0.0;
    let mut q = Complex64::new(0.0, 0.0);
    for p in &train.packets {
        let w = p.weight.norm_sqr();
        let b = coupling(p.site);
        weight += w;
        gamma += w * b.norm_sqr();
        q += Complex64::from_polar(w, k * p.z) * b;
    }
    CouplingSummary::new(gamma / weight, q * (root_s / weight))
}

/// `Γ` and `Q` with every same-site overlap retained:
/// `Γ = Σ γ_s γ*_s' I_ss' |β̃_s|² / N²`, `Q = √S Σ γ_s γ*_s' I_ss' e^{ik(z_s+z_s')/2} β̃_s / N²`.
pub fn train_gamma_q_overlapping<F>(
    train: &WavepacketTrain,
    coupling: F,
    omega: f64,
    beam: &Beam,
) -> Result<CouplingSummary>
where
    F: Fn([f64; 2]) -> Complex64,
{
    let k = omega / beam.velocity;
    let root_s = packet_coherence(train.width, omega, beam).sqrt();
    let mut gamma = Complex64::new(0.0, 0.0);
    let mut q = Complex64::new(0.0, 0.0);
    for a in &train.packets {
        let b = coupling(a.site);
        for c in &train.packets {
            let i = overlap(a, c, train.width);
            if i == 0.0 {
                continue;
            }
            let w = a.weight * c.weight.conj() * i;
            gamma += w * b.norm_sqr();
            q += w * b * Complex64::from_polar(1.0, 0.5 * k * (a.z + c.z));
        }
    }
    let n2 = train.normalization * train.normalization;
    CouplingSummary::new(gamma.re / n2, q * (root_s / n2))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioKind {
    /// Both packets at one site, uniform coupling.
    Fig5b,
    /// Packets at opposite sites of an antisymmetric coupling.
    Fig5c,
    /// Packets at sites separated laterally by `b` in a plane-wave coupling `e^{ik·R}`.
    Fig6,
}

impl FromStr for ScenarioKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fig5b" => Ok(Self::Fig5b),
            "fig5c" => Ok(Self::Fig5c),
            "fig6" => Ok(Self::Fig6),
            other => Err(Error::contract(format!("unknown scenario {other:?} (fig5b, fig5c, fig6)"))),
        }
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Fig5b => "fig5b",
            Self::Fig5c => "fig5c",
            Self::Fig6 => "fig6",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Occupancy {
    /// One electron in each packet.
    OnePerPacket,
    /// Each of the two electrons equally shared among both packets.
    Shared,
}

impl FromStr for Occupancy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "one-per-packet" | "two-electron" => Ok(Self::OnePerPacket),
            "shared" => Ok(Self::Shared),
            other => Err(Error::contract(format!(
                "unknown occupancy {other:?} (one-per-packet, two-electron, shared)"
            ))),
        }
    }
}

impl fmt::Display for Occupancy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::OnePerPacket => "one-per-packet",
            Self::Shared => "shared",
        })
    }
}

/// `Γ_total / (N Γ⁰)` sampled on a φ grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioCurve {
    pub phi: Vec<f64>,
    pub ratio: Vec<f64>,
    pub scenario: String,
    pub occupancy: String,
    pub s: f64,
}

/// Closed forms the scenario pipeline must reproduce.
pub fn scenario_closed_form(kind: ScenarioKind, occupancy: Occupancy, s: f64, phi: f64) -> f64 {
    let sign = if kind == ScenarioKind::Fig5c { -1.0 } else { 1.0 };
    match occupancy {
        Occupancy::OnePerPacket => 1.0 + sign * s * phi.cos(),
        Occupancy::Shared if sign > 0.0 => 1.0 + s * (0.5 * phi).cos().powi(2),
        Occupancy::Shared => 1.0 + s * (0.5 * phi).sin().powi(2),
    }
}

/// In units where `ω/v = 1`, the packet width that yields coherence `S`.
fn unit_width(s: f64) -> f64 {
    (-2.0 * s.ln()).sqrt().max(1e-12)
}

/// Smallest whole number of periods that keeps two packets `|φ|` apart well separated.
fn separation_periods(width: f64, phi: f64) -> f64 {
    ((10.0 * width + phi.abs()) / (2.0 * PI)).ceil() + 1.0
}

fn check_s(s: f64) -> Result<()> {
    if !(s > 0.0 && s <= 1.0) {
        return Err(Error::contract(format!("S = {s} must lie in (0, 1]")));
    }
    Ok(())
}

/// Builds each curve point from explicit trains through [`train_gamma_q`] and
/// [`total_excitation_multi`].
///
/// Lengths are measured in units of `v/ω`, so `φ` is the packet separation.
/// The separation is extended by whole periods so that the packets never
/// overlap; this leaves every phase unchanged. For [`ScenarioKind::Fig6`]
/// `lateral_phase` is `k·b`.
pub fn scenario_curves(
    kind: ScenarioKind,
    occupancy: Occupancy,
    s: f64,
    phi: &[f64],
    lateral_phase: f64,
) -> Result<ScenarioCurve> {
    check_s(s)?;
    let beam = Beam::from_kinetic_energy(100e3)?;
    let omega = beam.velocity; // ω/v = 1
    let width = unit_width(s);
    let one = Complex64::new(1.0, 0.0);

    let ratio = phi
        .iter()
        .map(|&p| {
            let shift = 2.0 * PI * separation_periods(width, p + lateral_phase);
            let (first, second, coupling): (Packet, Packet, fn([f64; 2]) -> Complex64) = match kind {
                ScenarioKind::Fig5b => (
                    Packet::new(0.0, [1.0, 0.0], one),
                    Packet::new(p + shift, [1.0, 0.0], one),
                    |_| Complex64::new(1.0, 0.0),
                ),
                ScenarioKind::Fig5c => (
                    Packet::new(0.0, [1.0, 0.0], one),
                    Packet::new(p + shift, [-1.0, 0.0], one),
                    |r| Complex64::new(r[0], 0.0),
                ),
                ScenarioKind::Fig6 => (
                    Packet::new(0.0, [lateral_phase, 0.0], one),
                    Packet::new(p + lateral_phase + shift, [0.0, 0.0], one),
                    |r| Complex64::from_polar(1.0, r[0]),
                ),
            };
            let electrons = match occupancy {
                Occupancy::OnePerPacket => vec![
                    train_gamma_q(&build_train(vec![first], width)?, coupling, omega, &beam)?,
                    train_gamma_q(&build_train(vec![second], width)?, coupling, omega, &beam)?,
                ],
                Occupancy::Shared => {
                    let e = train_gamma_q(&build_train(vec![first, second], width)?, coupling, omega, &beam)?;
                    vec![e.clone(), e]
                }
            };
            let gamma0: f64 = electrons.iter().map(|e| e.gamma0).sum::<f64>() / electrons.len() as f64;
            Ok(total_excitation_multi(&electrons, None)? / (electrons.len() as f64 * gamma0))
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(ScenarioCurve {
        phi: phi.to_vec(),
        ratio,
        scenario: kind.to_string(),
        occupancy: occupancy.to_string(),
        s,
    })
}

/// `1 + (N-1) S sin²(Lφ/2) / (L² sin²(φ/2))`, with the limit `1 + (N-1)S` at `φ = 2πk`.
pub fn periodic_train_closed_form(electrons: usize, packets: usize, s: f64, phi: f64) -> f64 {
    let n = electrons as f64;
    let l = packets as f64;
    let den = (0.5 * phi).sin();
    let dirichlet = if den.abs() < 1e-6 {
        // series about the removable singularity
        let k = (phi / (2.0 * PI)).round();
        let e = phi - 2.0 * PI * k;
        let sign = if (k as i64 * (packets as i64 - 1)) % 2 == 0 { 1.0 } else { -1.0 };
        sign * l * (1.0 - (l * l - 1.0) * e * e / 24.0)
    } else {
        (0.5 * l * phi).sin() / den
    };
    1.0 + (n - 1.0) * s * dirichlet * dirichlet / (l * l)
}

/// `N` identical electrons, each equally shared among `L` packets spaced by `φ`,
/// evaluated through the train pipeline.
pub fn periodic_train_total(electrons: usize, packets: usize, s: f64, phi: &[f64]) -> Result<ScenarioCurve> {
    if electrons == 0 || packets == 0 {
        return Err(Error::contract("need N >= 1 electrons and L >= 1 packets"));
    }
    check_s(s)?;
    let beam = Beam::from_kinetic_energy(100e3)?;
    let omega = beam.velocity; // ω/v = 1
    let width = unit_width(s);
    let ratio = phi
        .iter()
        .map(|&p| {
            let a = p + 2.0 * PI * separation_periods(width, p);
            let train: Vec<Packet> = (0..packets)
                .map(|j| Packet::new(j as f64 * a, [0.0, 0.0], Complex64::new(1.0, 0.0)))
                .collect();
            let e = train_gamma_q(&build_train(train, width)?, |_| Complex64::new(1.0, 0.0), omega, &beam)?;
            let all = vec![e.clone(); electrons];
            Ok(total_excitation_multi(&all, None)? / (electrons as f64 * e.gamma0))
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(ScenarioCurve {
        phi: phi.to_vec(),
        ratio,
        scenario: format!("train-N{electrons}-L{packets}"),
        occupancy: Occupancy::Shared.to_string(),
        s,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const S: f64 = 0.882_496_902_584_595; // e^{-1/8}

    fn grid(n: usize) -> Vec<f64> {
        (0..n).map(|i| -2.0 * PI + 4.0 * PI * i as f64 / (n - 1) as f64).collect()
    }

    fn beam() -> Beam {
        Beam::from_kinetic_energy(100e3).unwrap()
    }

    #[test]
    fn normalizations() {
        let one = Complex64::new(1.0, 0.0);
        let t = build_train(vec![Packet::new(3.0, [0.0, 0.0], Complex64::new(0.0, 2.5))], 7.0).unwrap();
        assert!((t.normalization - 2.5).abs() < 1e-15);
        let t = build_train(
            vec![Packet::new(0.0, [0.0, 0.0], one), Packet::new(10.0, [0.0, 0.0], one)],
            1.0,
        )
        .unwrap();
        assert!((t.normalization - (2.0 + 2.0 * (-25.0f64).exp()).sqrt()).abs() < 1e-15);
        assert!(t.nonoverlapping);
        let t = build_train(
            vec![Packet::new(0.0, [0.0, 0.0], one), Packet::new(2.0, [0.0, 0.0], one)],
            2.0,
        )
        .unwrap();
        assert!((t.overlap(0, 1) - 0.778_800_783_071_404_9).abs() < 1e-15);
        assert!(!t.nonoverlapping);
        assert!(build_train(vec![Packet::new(0.0, [0.0, 0.0], Complex64::new(0.0, 0.0))], 1.0).is_err());
        assert!(build_train(vec![Packet::new(0.0, [0.0, 0.0], one)], 0.0).is_err());
    }

    #[test]
    fn single_packet_coupling() {
        let b = beam();
        let omega = 0.5 * b.velocity;
        let beta = Complex64::new(0.3, -0.4);
        let t = build_train(vec![Packet::new(0.0, [2.0, 1.0], Complex64::new(1.0, 0.0))], 1.0).unwrap();
        let e = train_gamma_q(&t, |_| beta, omega, &b).unwrap();
        assert!((e.gamma0 - beta.norm_sqr()).abs() < 1e-15);
        assert!((e.q - beta * packet_coherence(1.0, omega, &b).sqrt()).norm() < 1e-15);
    }

    #[test]
    fn overlapping_train_needs_full_variant() {
        let b = beam();
        let one = Complex64::new(1.0, 0.0);
        let t = build_train(vec![Packet::new(0.0, [0.0, 0.0], one), Packet::new(1.0, [0.0, 0.0], one)], 1.0)
            .unwrap();
        assert!(train_gamma_q(&t, |_| one, b.velocity, &b).is_err());
        let e = train_gamma_q_overlapping(&t, |_| one, b.velocity, &b).unwrap();
        assert!((e.gamma0 - 1.0).abs() < 1e-14);
    }

    #[test]
    fn full_overlap_matches_limit_when_separated() {
        let b = beam();
        let omega = 0.5 * b.velocity;
        let w = Complex64::new(1.0, 0.0);
        let beta = |r: [f64; 2]| Complex64::new(1.0 + r[0], 0.5 * r[1]);
        let packets = vec![
            Packet::new(0.0, [0.0, 0.0], w),
            Packet::new(8.0, [0.0, 0.0], Complex64::new(0.5, 0.5)),
            Packet::new(3.0, [1.0, 0.0], w),
        ];
        let t = build_train(packets, 1.0).unwrap();
        let limit = train_gamma_q_overlapping(&t, beta, omega, &b).unwrap();
        let forced = WavepacketTrain { nonoverlapping: true, ..t };
        let approx = train_gamma_q(&forced, beta, omega, &b).unwrap();
        assert!((limit.gamma0 - approx.gamma0).abs() < 1e-6);
        assert!((limit.q - approx.q).norm() < 1e-6);
    }

    #[test]
    fn opposite_sites_antisymmetric_coupling() {
        let b = beam();
        let omega = b.velocity;
        let phi = 1.3 + 2.0 * PI * 5.0;
        let one = Complex64::new(1.0, 0.0);
        let t = build_train(
            vec![Packet::new(0.0, [1.0, 0.0], one), Packet::new(phi, [-1.0, 0.0], one)],
            0.5,
        )
        .unwrap();
        let e = train_gamma_q(&t, |r| Complex64::new(r[0], 0.0), omega, &b).unwrap();
        let want = (one - Complex64::from_polar(1.0, phi)) * 0.5 * packet_coherence(0.5, omega, &b).sqrt();
        assert!((e.q - want).norm() < 1e-13);
    }

    #[test]
    fn scenario_points() {
        let c = scenario_curves(ScenarioKind::Fig5b, Occupancy::OnePerPacket, S, &[0.0, PI], 0.0).unwrap();
        assert!((c.ratio[0] - 1.882_496_902_584_595).abs() < 1e-10);
        assert!((c.ratio[1] - 0.117_503_097_415_405).abs() < 1e-10);
        let c = scenario_curves(ScenarioKind::Fig5c, Occupancy::OnePerPacket, S, &[0.0], 0.0).unwrap();
        assert!((c.ratio[0] - (1.0 - S)).abs() < 1e-10);
        let c = scenario_curves(ScenarioKind::Fig5b, Occupancy::Shared, S, &[PI], 0.0).unwrap();
        assert!((c.ratio[0] - 1.0).abs() < 1e-10);
        assert!("fig7".parse::<ScenarioKind>().is_err());
        assert!(scenario_curves(ScenarioKind::Fig5b, Occupancy::Shared, 1.5, &[0.0], 0.0).is_err());
    }

    #[test]
    fn pipeline_matches_closed_forms() {
        let phi = grid(257);
        for kind in [ScenarioKind::Fig5b, ScenarioKind::Fig5c, ScenarioKind::Fig6] {
            for occ in [Occupancy::OnePerPacket, Occupancy::Shared] {
                for kb in [0.0, 2.7] {
                    let c = scenario_curves(kind, occ, S, &phi, kb).unwrap();
                    for (p, r) in phi.iter().zip(&c.ratio) {
                        let want = scenario_closed_form(kind, occ, S, *p);
                        assert!((r - want).abs() < 1e-10, "{kind} {occ} {p}");
                    }
                }
            }
        }
    }

    #[test]
    fn periodic_train_reductions() {
        let phi = grid(201);
        let two = periodic_train_total(2, 2, S, &phi).unwrap();
        let shared = scenario_curves(ScenarioKind::Fig5b, Occupancy::Shared, S, &phi, 0.0).unwrap();
        for (i, &p) in phi.iter().enumerate() {
            assert!((two.ratio[i] - shared.ratio[i]).abs() < 1e-12);
            let cf = periodic_train_closed_form(2, 2, S, p);
            assert!((cf - scenario_closed_form(ScenarioKind::Fig5b, Occupancy::Shared, S, p)).abs() < 1e-14);
        }
        for l in 1..6 {
            assert!((periodic_train_closed_form(7, l, S, 0.0) - (1.0 + 6.0 * S)).abs() < 1e-14);
            assert!((periodic_train_closed_form(7, l, S, 4.0 * PI) - (1.0 + 6.0 * S)).abs() < 1e-12);
        }
        let single = periodic_train_total(1, 4, S, &phi).unwrap();
        assert!(single.ratio.iter().all(|r| (r - 1.0).abs() < 1e-14));
        let one_packet = periodic_train_total(5, 1, S, &phi).unwrap();
        assert!(one_packet.ratio.iter().all(|r| (r - (1.0 + 4.0 * S)).abs() < 1e-12));
    }

    #[test]
    fn periodic_pipeline_matches_formula() {
        let phi = grid(301);
        for (n, l) in [(2, 3), (5, 4), (10, 7)] {
            let c = periodic_train_total(n, l, S, &phi).unwrap();
            for (p, r) in phi.iter().zip(&c.ratio) {
                assert!((r - periodic_train_closed_form(n, l, S, *p)).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn coherence_limits() {
        let b = beam();
        assert!((packet_coherence(1e-9, b.velocity, &b) - 1.0).abs() < 1e-15);
        assert!(packet_coherence(100.0, b.velocity, &b) < 1e-300);
    }

    proptest! {
        #[test]
        fn single_electron_gamma_ignores_positions(
            zs in proptest::collection::vec(-1e3..1e3f64, 1..6),
            shift in -1e4..1e4f64,
        ) {
            let b = beam();
            let beta = |r: [f64; 2]| Complex64::new(1.0 + r[0], r[1]);
            let packets: Vec<Packet> = zs
                .iter()
                .enumerate()
                .map(|(i, &z)| Packet::new(z + 100.0 * i as f64 * 1e3, [i as f64, 0.0], Complex64::new(1.0, i as f64)))
                .collect();
            let moved: Vec<Packet> = packets.iter().rev().map(|p| Packet { z: p.z + shift, ..*p }).collect();
            let a = train_gamma_q(&build_train(packets, 1.0).unwrap(), beta, 1.0, &b).unwrap();
            let c = train_gamma_q(&build_train(moved, 1.0).unwrap(), beta, 1.0, &b).unwrap();
            prop_assert!((a.gamma0 - c.gamma0).abs() <= 1e-12 * a.gamma0);
            prop_assert!(a.q.norm_sqr() <= a.gamma0 * packet_coherence(1.0, 1.0, &b) * (1.0 + 1e-12));
        }
    }
}
