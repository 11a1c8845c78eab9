use freebeam::coherence::{
    coherence_m_pinem, coherence_m_profile, dilute_beam_average, optimize_m, superradiant_pinem_total,
    CoherenceFactor, Range,
};
use freebeam::constants::HBAR;
use freebeam::density_matrix::DensityMatrixGrid;
use freebeam::dipole_probe::{
    cl_angular_dipole, eels_cl_dipole, lorentzian_polarizability, occupation, thermal_scale, Polarizability,
    Statistics,
};
use freebeam::kinematics::{coulomb_degradation, mode_period_spacing, talbot_distance, threshold_field, Separation};
use freebeam::pinem::{
    beta_from_field, comb_amplitudes, multicolor_populations, ponderomotive_terms, ColorFactor, PinemInteraction,
    SampledLineField,
};
use freebeam::wavepackets::{packet_coherence, periodic_train_total, scenario_curves, Occupancy, ScenarioCurve, ScenarioKind};
use freebeam::{Beam, Error, Result};

use crate::args::*;
use crate::output::{g12, Cell, Table};

pub fn run(command: &Command) -> Result<Table> {
    match command {
        Command::Kinematics(a) => kinematics(a),
        Command::EelsDipole(a) => eels(a),
        Command::ClAngular(a) => cl_angular(a),
        Command::Thermal(a) => thermal(a),
        Command::PinemComb(a) => pinem_comb(a),
        Command::PinemDensity(a) => pinem_density(a),
        Command::Multicolor(a) => multicolor(a),
        Command::Coherence(a) => coherence(a),
        Command::Superradiance(a) => superradiance(a),
        Command::OptimizeM(a) => optimize(a),
        Command::Scenario(a) => scenario(a),
        Command::Train(a) => train(a),
        Command::Rho(a) => rho(a),
    }
}

fn kinematics(a: &KinematicsArgs) -> Result<Table> {
    let mut t = Table::new(&[
        "kinetic_ev",
        "gamma",
        "beta",
        "v_nm_fs",
        "lambda_pm",
        "talbot_nm",
        "threshold_v_m",
        "period_fs",
        "spacing_nm",
        "delta_e_ev",
        "delta_theta_rad",
    ]);
    for ek in a.kinetic_ev.values() {
        let b = Beam::from_kinetic_energy(ek)?;
        let timing = mode_period_spacing(&b, a.photon_ev)?;
        let de = coulomb_degradation(&b, a.path_nm, a.separation_nm, Separation::Longitudinal)?;
        let dt = coulomb_degradation(&b, a.path_nm, a.separation_nm, Separation::Transverse)?;
        t.push(vec![
            ek.into(),
            b.gamma.into(),
            b.beta.into(),
            b.velocity.into(),
            b.wavelength.into(),
            talbot_distance(&b, a.photon_ev)?.into(),
            threshold_field(&b, a.photon_ev)?.into(),
            timing.period.into(),
            timing.spacing.into(),
            de.value().into(),
            dt.value().into(),
        ]);
    }
    Ok(t)
}

fn polarizability(d: &DipoleArgs) -> Result<Polarizability> {
    lorentzian_polarizability(d.resonance_ev, d.radiative_ev, d.nonradiative_ev)
}

fn eels(a: &EelsArgs) -> Result<Table> {
    let b = Beam::from_kinetic_energy(a.beam.kinetic_ev)?;
    let alpha = polarizability(&a.dipole)?;
    let mut t = Table::new(&["photon_ev", "eels_per_ev", "cl_per_ev", "alpha_re_nm3", "alpha_im_nm3"]);
    for hw in a.photon_ev.values() {
        let p = eels_cl_dipole(&b, a.dipole.distance_nm, &alpha, hw)?;
        let (eels, cl) = p.per_ev();
        let al = alpha.at(hw);
        t.push(vec![hw.into(), eels.into(), cl.into(), al.re.into(), al.im.into()]);
    }
    Ok(t)
}

fn cl_angular(a: &ClAngularArgs) -> Result<Table> {
    let b = Beam::from_kinetic_energy(a.beam.kinetic_ev)?;
    let alpha = polarizability(&a.dipole)?;
    let dir = [a.impact_angle_rad.cos(), a.impact_angle_rad.sin()];
    let total = eels_cl_dipole(&b, a.dipole.distance_nm, &alpha, a.photon_ev)?.per_ev().1;
    let mut t = Table::new(&["theta_rad", "azimuth_rad", "cl_per_ev_sr"]);
    t.note("total_cl_per_ev", total);
    for theta in a.theta_rad.values() {
        for phi in a.azimuth_rad.values() {
            let r = [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()];
            let p = cl_angular_dipole(&b, dir, a.dipole.distance_nm, &alpha, a.photon_ev, r)? / HBAR;
            t.push(vec![theta.into(), phi.into(), p.into()]);
        }
    }
    Ok(t)
}

fn thermal(a: &ThermalArgs) -> Result<Table> {
    let stats = match a.stats {
        Stats::Bosonic => Statistics::Bosonic,
        Stats::Fermionic => Statistics::Fermionic,
    };
    let mut t = Table::new(&["hw_mev", "temperature_k", "occupation", "loss", "gain", "loss_gain_ratio"]);
    for hw in a.hw_mev.values() {
        for temp in a.temperature_k.values() {
            let w = hw * 1e-3 / HBAR;
            let loss = thermal_scale(a.zero_t_probability, w, temp, stats)?;
            let gain = thermal_scale(a.zero_t_probability, -w, temp, stats)?;
            let n = occupation(stats, hw * 1e-3, temp);
            t.push(vec![hw.into(), temp.into(), n.into(), loss.into(), gain.into(), (loss / gain).into()]);
        }
    }
    Ok(t)
}

fn interaction(a: &PinemArgs) -> Result<(PinemInteraction, Vec<String>)> {
    let b = Beam::from_kinetic_energy(a.beam.kinetic_ev)?;
    let mut notes = Vec::new();
    let beta = match (&a.beta, &a.field_csv) {
        (Some(beta), _) => beta.0,
        (None, Some(path)) => {
            let field = SampledLineField::from_csv_path(path)?;
            let beta = beta_from_field(&field, a.photon_ev, &b)?;
            let p = ponderomotive_terms(&field, a.photon_ev, &b)?;
            notes.push(format!("ponderomotive_phase_rad: {}", g12(p.phase)));
            notes.push(format!(
                "beta_prime: {},{}",
                g12(p.beta_prime.re),
                g12(p.beta_prime.im)
            ));
            beta
        }
        (None, None) => return Err(Error::Contract("give --beta or --field-csv".into())),
    };
    notes.push(format!("beta: {},{}", g12(beta.re), g12(beta.im)));
    let c = comb_amplitudes(beta, a.photon_ev, &b, a.distance_nm, a.l_max)?;
    notes.push(format!("talbot_nm: {}", g12(c.talbot)));
    Ok((c, notes))
}

fn pinem_comb(a: &PinemArgs) -> Result<Table> {
    let (c, notes) = interaction(a)?;
    let mut t = Table::new(&["l", "energy_ev", "re", "im", "population"]);
    t.notes = notes;
    for (l, amp) in c.sidebands() {
        t.push(vec![l.into(), (l as f64 * a.photon_ev).into(), amp.re.into(), amp.im.into(), amp.norm_sqr().into()]);
    }
    Ok(t)
}

fn pinem_density(a: &PinemDensityArgs) -> Result<Table> {
    if a.samples == 0 {
        return Err(Error::Contract("need at least one time sample".into()));
    }
    let (c, notes) = interaction(&a.pinem)?;
    let v = Beam::from_kinetic_energy(a.pinem.beam.kinetic_ev)?.velocity;
    let (taus, rho) = c.density_over_period(a.samples)?;
    let mut t = Table::new(&["tau_fs", "z_nm", "density"]);
    t.notes = notes;
    for (tau, r) in taus.iter().zip(rho) {
        t.push(vec![(*tau).into(), (-v * tau).into(), r.into()]);
    }
    Ok(t)
}

fn multicolor(a: &MulticolorArgs) -> Result<Table> {
    let factors: Vec<ColorFactor> =
        a.color.iter().map(|c| ColorFactor { beta: c.beta, harmonic: c.harmonic }).collect();
    let p = multicolor_populations(&factors, a.l_max)?;
    let mut t = Table::new(&["l", "energy_ev", "population"]);
    t.note("total", p.total());
    for (i, v) in p.values.iter().enumerate() {
        let l = p.l_min + i as i64;
        t.push(vec![l.into(), (l as f64 * a.photon_ev).into(), (*v).into()]);
    }
    Ok(t)
}

fn read_profile(path: &std::path::Path) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).trim(csv::Trim::All).from_path(path)?;
    let (mut z, mut rho) = (Vec::new(), Vec::new());
    for rec in rdr.records() {
        let rec = rec?;
        let get = |i: usize| -> Result<f64> {
            rec.get(i)
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::Format(format!("bad profile row {:?}", rec)))
        };
        z.push(get(0)?);
        rho.push(get(1)?);
    }
    Ok((z, rho))
}

fn coherence(a: &CoherenceArgs) -> Result<Table> {
    let b = Beam::from_kinetic_energy(a.beam.kinetic_ev)?;
    if let Some(path) = &a.profile_csv {
        let (z, rho) = read_profile(path)?;
        let omega = a.harmonic as f64 * a.photon_ev / HBAR;
        let m = coherence_m_profile(&z, &rho, omega, &b)?;
        let mut t = Table::new(&["harmonic", "m_re", "m_im", "m_abs"]);
        t.push(vec![(a.harmonic as usize).into(), m.m.re.into(), m.m.im.into(), m.norm().into()]);
        return Ok(t);
    }
    let zt = talbot_distance(&b, a.photon_ev)?;
    let mut t = Table::new(&[
        "distance_nm",
        "d_over_zt",
        "closed_re",
        "closed_im",
        "closed_abs",
        "direct_re",
        "direct_im",
        "direct_abs",
    ]);
    for d in a.distance_nm.values() {
        let c = coherence_m_pinem(a.beta.0, d, a.harmonic, a.photon_ev, &b)?;
        let (x, y) = (c.closed_form.m, c.direct_sum.m);
        t.push(vec![
            d.into(),
            (d / zt).into(),
            x.re.into(),
            x.im.into(),
            x.norm().into(),
            y.re.into(),
            y.im.into(),
            y.norm().into(),
        ]);
    }
    Ok(t)
}

fn superradiance(a: &SuperradianceArgs) -> Result<Table> {
    let b = Beam::from_kinetic_energy(a.beam.kinetic_ev)?;
    let omega = a.photon_ev / HBAR;
    let m = CoherenceFactor { m: a.coherence.0, omega };
    let mut columns = vec!["electrons", "total", "ratio"];
    if a.dilute_periods.is_some() {
        columns.extend(["dilute_mean", "dilute_std_error"]);
    }
    let mut t = Table::new(&columns);
    for &n in &a.electrons {
        let total = superradiant_pinem_total(n, a.gamma0, a.q.0, &m)?;
        let mut row: Vec<Cell> = vec![n.into(), total.into(), (total / (n as f64 * a.gamma0)).into()];
        if let Some(periods) = a.dilute_periods {
            let e = dilute_beam_average(n, periods, a.draws, a.seed, a.gamma0, a.q.0, omega, &b)?;
            row.extend([e.mean.into(), e.std_error.into()]);
        }
        t.push(row);
    }
    Ok(t)
}

fn optimize(a: &OptimizeArgs) -> Result<Table> {
    let b = Beam::from_kinetic_energy(a.beam.kinetic_ev)?;
    let zt = talbot_distance(&b, a.photon_ev)?;
    let d = a.distance_range.map(|r| Range::new(r.lo, r.hi)).unwrap_or(Range::new(0.0, zt));
    let mut t = Table::new(&["harmonic", "beta_star", "d_star_nm", "d_over_zt", "x_star", "max_m2"]);
    for &m in &a.harmonic {
        let o = optimize_m(m, a.photon_ev, &b, Range::new(a.beta_range.lo, a.beta_range.hi), d)?;
        t.push(vec![
            (m as usize).into(),
            o.beta_star.into(),
            o.d_star.into(),
            (o.d_star / zt).into(),
            o.x_star.into(),
            o.max_m2.into(),
        ]);
    }
    Ok(t)
}

fn coherence_s(src: &CoherenceSource) -> Result<f64> {
    match (src.s_param, src.width_nm) {
        (Some(s), _) => Ok(s),
        (None, Some(width)) => {
            let b = Beam::from_kinetic_energy(src.kinetic_ev)?;
            if !(width > 0.0) {
                return Err(Error::Contract("packet width must be positive".into()));
            }
            Ok(packet_coherence(width, src.photon_ev / HBAR, &b))
        }
        (None, None) => Err(Error::Contract("give --s-param or --width-nm".into())),
    }
}

fn curve_table(c: ScenarioCurve, s: f64) -> Table {
    let mut t = Table::new(&["phi", "ratio", "scenario", "occupancy", "S"]);
    for (p, r) in c.phi.iter().zip(&c.ratio) {
        t.push(vec![(*p).into(), (*r).into(), c.scenario.as_str().into(), c.occupancy.as_str().into(), s.into()]);
    }
    t
}

fn scenario(a: &ScenarioArgs) -> Result<Table> {
    let s = coherence_s(&a.source)?;
    let kind = match a.name {
        ScenarioName::Fig5b => ScenarioKind::Fig5b,
        ScenarioName::Fig5c => ScenarioKind::Fig5c,
        ScenarioName::Fig6 => ScenarioKind::Fig6,
    };
    let occ = match a.occupancy {
        OccupancyArg::OnePerPacket => Occupancy::OnePerPacket,
        OccupancyArg::Shared => Occupancy::Shared,
    };
    let curve = scenario_curves(kind, occ, s, &a.source.phi.values(), a.kb)?;
    let mut t = curve_table(curve, s);
    let b = Beam::from_kinetic_energy(a.source.kinetic_ev)?;
    // separation a = φ v/ω for the stated photon energy
    t.note("nm_per_radian", b.velocity * HBAR / a.source.photon_ev);
    Ok(t)
}

fn train(a: &TrainArgs) -> Result<Table> {
    let s = coherence_s(&a.source)?;
    let curve = periodic_train_total(a.electrons, a.packets, s, &a.source.phi.values())?;
    let mut t = curve_table(curve, s);
    t.note("peak_ratio", 1.0 + (a.electrons as f64 - 1.0) * s);
    Ok(t)
}

fn rho(a: &RhoArgs) -> Result<Table> {
    let b = Beam::from_kinetic_energy(a.beam.kinetic_ev)?;
    let start = match &a.input {
        Some(path) => DensityMatrixGrid::load(path)?,
        None => match a.state {
            InitialState::Uniform => DensityMatrixGrid::uniform_pure(a.n, b, a.photon_ev)?,
            InitialState::Mixed => DensityMatrixGrid::maximally_mixed(a.n, b, a.photon_ev)?,
        },
    };
    let out = start.apply_pinem(a.beta.0, a.distance_nm)?;
    let d = out.diagnostics();
    let mut t = Table::new(&["i", "z_nm", "density"]);
    t.note("trace", d.trace);
    t.note("hermiticity_error", d.hermiticity_error);
    t.note("purity", d.purity);
    if a.eigen {
        t.note("min_eigenvalue", out.min_eigenvalue());
    }
    t.note("period_nm", out.period());
    for (i, (z, r)) in out.z().iter().zip(&d.diagonal).enumerate() {
        t.push(vec![i.into(), (*z).into(), (*r).into()]);
    }
    if let Some(path) = &a.save {
        out.save(path)?;
    }
    Ok(t)
}
