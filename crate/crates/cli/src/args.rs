use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::values::{ColorSpec, Cplx, Grid, Interval};

#[derive(Parser, Debug)]
#[command(name = "freebeam", version, about = "Electron-beam photonics sweeps written as CSV", args_override_self = true)]
pub struct Cli {
    /// Flat JSON object of flag values; flags on the command line win.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Write the effective arguments as JSON.
    #[arg(long, global = true, value_name = "FILE")]
    pub emit_config: Option<PathBuf>,
    /// Output file (default: stdout).
    #[arg(long, short, global = true, value_name = "FILE")]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Beam kinematics, Talbot distance, threshold field, mode timing and Coulomb kicks.
    #[command(allow_negative_numbers = true)]
    Kinematics(KinematicsArgs),
    /// EELS and CL spectra of a dipolar particle.
    #[command(allow_negative_numbers = true)]
    EelsDipole(EelsArgs),
    /// Angle-resolved CL from a dipolar particle.
    #[command(allow_negative_numbers = true)]
    ClAngular(ClAngularArgs),
    /// Finite-temperature loss and gain factors.
    #[command(allow_negative_numbers = true)]
    Thermal(ThermalArgs),
    /// PINEM sideband amplitudes.
    #[command(allow_negative_numbers = true)]
    PinemComb(PinemArgs),
    /// Electron density over one optical period after PINEM and propagation.
    #[command(allow_negative_numbers = true)]
    PinemDensity(PinemDensityArgs),
    /// Sideband populations for several commensurate colors.
    #[command(allow_negative_numbers = true)]
    Multicolor(MulticolorArgs),
    /// Coherence factor of a modulated electron or a sampled density.
    #[command(allow_negative_numbers = true)]
    Coherence(CoherenceArgs),
    /// Excitation totals for N modulated electrons.
    #[command(allow_negative_numbers = true)]
    Superradiance(SuperradianceArgs),
    /// Largest reachable PINEM coherence factor.
    #[command(allow_negative_numbers = true)]
    OptimizeM(OptimizeArgs),
    /// Two-packet interference curves.
    #[command(allow_negative_numbers = true)]
    Scenario(ScenarioArgs),
    /// Periodic wavepacket-train interference curve.
    #[command(allow_negative_numbers = true)]
    Train(TrainArgs),
    /// Density-matrix transforms and diagnostics.
    #[command(allow_negative_numbers = true)]
    Rho(RhoArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Kinematics(_) => "kinematics",
            Command::EelsDipole(_) => "eels-dipole",
            Command::ClAngular(_) => "cl-angular",
            Command::Thermal(_) => "thermal",
            Command::PinemComb(_) => "pinem-comb",
            Command::PinemDensity(_) => "pinem-density",
            Command::Multicolor(_) => "multicolor",
            Command::Coherence(_) => "coherence",
            Command::Superradiance(_) => "superradiance",
            Command::OptimizeM(_) => "optimize-m",
            Command::Scenario(_) => "scenario",
            Command::Train(_) => "train",
            Command::Rho(_) => "rho",
        }
    }
}

#[derive(Args, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct BeamArgs {
    /// Electron kinetic energy, eV.
    #[arg(long, visible_alias = "ek", default_value_t = 100e3)]
    pub kinetic_ev: f64,
}

#[derive(Args, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct KinematicsArgs {
    /// Kinetic energy, eV (value or start:stop:count[:log]).
    #[arg(long, visible_alias = "ek", default_value = "100000")]
    pub kinetic_ev: Grid,
    /// Photon or mode energy, eV.
    #[arg(long, default_value_t = 1.5)]
    pub photon_ev: f64,
    /// Interaction path for the Coulomb kick, nm.
    #[arg(long, default_value_t = 1e4)]
    pub path_nm: f64,
    /// Electron separation for the Coulomb kick, nm.
    #[arg(long, default_value_t = 1e3)]
    pub separation_nm: f64,
}

#[derive(Args, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct DipoleArgs {
    /// Impact parameter, nm.
    #[arg(long, visible_alias = "b-nm", default_value_t = 20.0)]
    pub distance_nm: f64,
    /// Resonance energy ħω₀, eV.
    #[arg(long, default_value_t = 1.5)]
    pub resonance_ev: f64,
    /// Radiative width ħγ_r, eV.
    #[arg(long, default_value_t = 0.05)]
    pub radiative_ev: f64,
    /// Nonradiative width ħγ_nr, eV.
    #[arg(long, default_value_t = 0.0)]
    pub nonradiative_ev: f64,
}

#[derive(Args, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct EelsArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub beam: BeamArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub dipole: DipoleArgs,
    /// Photon energies, eV.
    #[arg(long, default_value = "1:2:101")]
    pub photon_ev: Grid,
}

#[derive(Args, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct ClAngularArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub beam: BeamArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub dipole: DipoleArgs,
    #[arg(long, default_value_t = 1.5)]
    pub photon_ev: f64,
    /// Azimuth of the beam position around the particle, rad.
    #[arg(long, default_value_t = 0.0)]
    pub impact_angle_rad: f64,
    /// Polar emission angles, rad.
    #[arg(long, default_value = "0:3.141592653589793:91")]
    pub theta_rad: Grid,
    /// Azimuthal emission angles, rad.
    #[arg(long, default_value = "0")]
    pub azimuth_rad: Grid,
}

#[derive(ValueEnum, Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stats {
    Bosonic,
    Fermionic,
}

#[derive(Args, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct ThermalArgs {
    /// Excitation energy, meV.
    #[arg(long, default_value = "50")]
    pub hw_mev: Grid,
    /// Temperature, K.
    #[arg(long, visible_alias = "T", default_value = "300")]
    pub temperature_k: Grid,
    #[arg(long, value_enum, default_value_t = Stats::Bosonic)]
    pub stats: Stats,
    /// Zero-temperature loss probability the factors multiply.
    #[arg(long, default_value_t = 1.0)]
    pub zero_t_probability: f64,
}

#[derive(Args, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct PinemArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub beam: BeamArgs,
    #[arg(long, default_value_t = 1.5)]
    pub photon_ev: f64,
    /// Coupling β as re or re,im.
    #[arg(long, conflicts_with = "field_csv", required_unless_present = "field_csv")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<Cplx>,
    /// Field along the trajectory: z_nm,ReEx,ImEx,ReEy,ImEy,ReEz,ImEz in V/nm.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field_csv: Option<PathBuf>,
    /// Free propagation after the interaction, nm.
    #[arg(long, default_value_t = 0.0)]
    pub distance_nm: f64,
    /// Largest sideband order kept (default: automatic).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l_max: Option<usize>,
}

#[derive(Args, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct PinemDensityArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub pinem: PinemArgs,
    /// Time samples over one period.
    #[arg(long, default_value_t = 256)]
    pub samples: usize,
}

#[derive(Args, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct MulticolorArgs {
    /// Factors re[,im]@harmonic, separated by ';'.
    #[arg(long, required = true, value_delimiter = ';')]
    pub color: Vec<ColorSpec>,
    /// Base photon energy, eV.
    #[arg(long, default_value_t = 1.5)]
    pub photon_ev: f64,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l_max: Option<usize>,
}

#[derive(Args, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct CoherenceArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub beam: BeamArgs,
    #[arg(long, default_value_t = 1.5)]
    pub photon_ev: f64,
    #[arg(long, default_value = "1")]
    pub beta: Cplx,
    #[arg(long, default_value_t = 1)]
    pub harmonic: u32,
    /// Propagation distances, nm.
    #[arg(long, default_value = "0")]
    pub distance_nm: Grid,
    /// Sampled density with columns z_nm,density; replaces the PINEM model.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub profile_csv: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct SuperradianceArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub beam: BeamArgs,
    #[arg(long, default_value_t = 1.5)]
    pub photon_ev: f64,
    /// Electron counts, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "1,2,10,100")]
    pub electrons: Vec<usize>,
    /// Single-electron excitation probability Γ⁰.
    #[arg(long, default_value_t = 1.0)]
    pub gamma0: f64,
    /// Transverse-averaged coupling Q.
    #[arg(long, default_value = "1")]
    pub q: Cplx,
    /// Coherence factor M of each electron.
    #[arg(long, default_value = "1")]
    pub coherence: Cplx,
    /// Also average randomly timed electrons spread over this many periods.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dilute_periods: Option<f64>,
    #[arg(long, default_value_t = 1000)]
    pub draws: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Args, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct OptimizeArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub beam: BeamArgs,
    #[arg(long, default_value_t = 1.5)]
    pub photon_ev: f64,
    /// Harmonic orders, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub harmonic: Vec<u32>,
    /// |β| search range lo:hi.
    #[arg(long, default_value = "0:5")]
    pub beta_range: Interval,
    /// Distance search range lo:hi in nm (default: one Talbot distance).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distance_range: Option<Interval>,
}

#[derive(ValueEnum, Debug, Clone, Copy, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioName {
    Fig5b,
    Fig5c,
    Fig6,
}

#[derive(ValueEnum, Debug, Clone, Copy, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum OccupancyArg {
    #[value(alias = "two-electron")]
    OnePerPacket,
    Shared,
}

#[derive(Args, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct CoherenceSource {
    /// Single-packet coherence S in (0, 1].
    #[arg(long, visible_alias = "S", conflicts_with = "width_nm", required_unless_present = "width_nm")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_param: Option<f64>,
    /// Packet width Δ in nm; S follows from the beam and photon energy.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub width_nm: Option<f64>,
    #[arg(long, default_value_t = 100e3, visible_alias = "ek")]
    pub kinetic_ev: f64,
    #[arg(long, default_value_t = 1.5)]
    pub photon_ev: f64,
    /// Phase grid φ.
    #[arg(long, default_value = "0:6.283185307179586:256")]
    pub phi: Grid,
}

#[derive(Args, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct ScenarioArgs {
    #[arg(long, value_enum)]
    pub name: ScenarioName,
    #[arg(long, value_enum, default_value_t = OccupancyArg::OnePerPacket)]
    pub occupancy: OccupancyArg,
    /// Lateral phase k·b for fig6.
    #[arg(long, default_value_t = 0.0)]
    pub kb: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub source: CoherenceSource,
}

#[derive(Args, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct TrainArgs {
    #[arg(long, default_value_t = 2)]
    pub electrons: usize,
    /// Wavepackets per electron.
    #[arg(long, default_value_t = 2)]
    pub packets: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub source: CoherenceSource,
}

#[derive(ValueEnum, Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitialState {
    Uniform,
    Mixed,
}

#[derive(Args, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct RhoArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub beam: BeamArgs,
    #[arg(long, default_value_t = 1.5)]
    pub photon_ev: f64,
    /// Samples per period (power of two).
    #[arg(long, default_value_t = 512)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = InitialState::Uniform)]
    pub state: InitialState,
    /// Read the initial matrix from a .csv or binary file instead.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<PathBuf>,
    #[arg(long, default_value = "0")]
    pub beta: Cplx,
    /// Propagation after the interaction, nm.
    #[arg(long, default_value_t = 0.0)]
    pub distance_nm: f64,
    /// Write the final matrix (.csv for text, anything else for binary).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub save: Option<PathBuf>,
    /// Report the smallest eigenvalue.
    #[arg(long)]
    pub eigen: bool,
}
