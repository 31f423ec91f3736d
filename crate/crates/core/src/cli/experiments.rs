//! Parameter schemas and drivers for each experiment.

use serde::de::DeserializeOwned;
use serde::Deserialize;

use super::config::Axis;
use super::output::CurveRecord;
use super::CliError;
use crate::cavity::{self, AtomBath, CavityParams, DimerDensity4, RateConvention};
use crate::collision::{self, DoubleDeltaPotential, ScanGrid};
use crate::dissociation::{self, RamanParams, TrapParams};
use crate::fluorescence::{self, DeltaLambda, MolecularSpin, Parity, TransitionSpec};
use crate::gaussian_epr::{covariance_entropy, GridPolicy, TwoParticleGaussian};
use crate::numerics::grid::EntropyBase;
use crate::superbeats::{self, SuperbeatParams};
use crate::teleportation::{self, ErrorBudget};
use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentId {
    EprMeasures,
    CollisionScan,
    RamanProfile,
    TrapSqueeze,
    Fluorescence,
    Superbeats,
    Teleport,
    Cavity,
}

impl ExperimentId {
    pub const ALL: [ExperimentId; 8] = [
        ExperimentId::EprMeasures,
        ExperimentId::CollisionScan,
        ExperimentId::RamanProfile,
        ExperimentId::TrapSqueeze,
        ExperimentId::Fluorescence,
        ExperimentId::Superbeats,
        ExperimentId::Teleport,
        ExperimentId::Cavity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentId::EprMeasures => "epr-measures",
            ExperimentId::CollisionScan => "collision-scan",
            ExperimentId::RamanProfile => "raman-profile",
            ExperimentId::TrapSqueeze => "trap-squeeze",
            ExperimentId::Fluorescence => "fluorescence",
            ExperimentId::Superbeats => "superbeats",
            ExperimentId::Teleport => "teleport",
            ExperimentId::Cavity => "cavity",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            ExperimentId::EprMeasures => "squeezing, Schmidt number and entropy of two-particle Gaussians",
            ExperimentId::CollisionScan => "single-particle entropy change across double-delta resonances",
            ExperimentId::RamanProfile => "momentum spread of the Raman dissociation wavepacket",
            ExperimentId::TrapSqueeze => "collective-mode breathing in a double-parabolic trap",
            ExperimentId::Fluorescence => "cooperative emission rate of a receding Dicke pair",
            ExperimentId::Superbeats => "fine-structure superbeats on the ringing envelope",
            ExperimentId::Teleport => "teleportation fidelity and fringe contrast against error squeezing",
            ExperimentId::Cavity => "cavity temperature pumped by decaying atom pairs",
        }
    }

    /// Units and conventions recorded in the metadata sidecar.
    pub fn conventions(self) -> &'static str {
        match self {
            ExperimentId::EprMeasures => "hbar = 1; widths are position standard deviations; entropy base as configured",
            ExperimentId::CollisionScan => "hbar = 1; k0 and sigma are single-particle momenta; entropies in bits",
            ExperimentId::RamanProfile => "hbar = 1; spreads are relative-momentum standard deviations",
            ExperimentId::TrapSqueeze => "hbar = 1; widths relative to the oscillator ground widths where noted",
            ExperimentId::Fluorescence => "rates in units of the single-atom decay rate; xi = k R(t)",
            ExperimentId::Superbeats => "rates in units of the single-atom decay rate",
            ExperimentId::Teleport => "hbar = 1; sigma = exp(-2 s_E) in the error-balanced metric",
            ExperimentId::Cavity => "hbar = k_B = 1; gamma_t in units of the atomic lifetime",
        }
    }

    /// Checks the parameter schema without running anything.
    pub fn validate(self, params: &toml::Table) -> Result<(), CliError> {
        match self {
            ExperimentId::EprMeasures => parse::<EprConfig>(params).map(drop),
            ExperimentId::CollisionScan => parse::<CollisionConfig>(params).map(drop),
            ExperimentId::RamanProfile => parse::<RamanConfig>(params).map(drop),
            ExperimentId::TrapSqueeze => parse::<TrapConfig>(params).map(drop),
            ExperimentId::Fluorescence => parse::<FluorescenceConfig>(params).map(drop),
            ExperimentId::Superbeats => parse::<SuperbeatConfig>(params).map(drop),
            ExperimentId::Teleport => parse::<TeleportConfig>(params).map(drop),
            ExperimentId::Cavity => parse::<CavityConfig>(params).map(drop),
        }
    }
}

fn parse<T: DeserializeOwned>(params: &toml::Table) -> Result<T, CliError> {
    toml::Value::Table(params.clone())
        .try_into()
        .map_err(|e: toml::de::Error| CliError::Config(format!("[params] {}", e.message())))
}

pub fn run_experiment(id: ExperimentId, params: &toml::Table) -> Result<Vec<CurveRecord>, CliError> {
    match id {
        ExperimentId::EprMeasures => epr(parse(params)?),
        ExperimentId::CollisionScan => collision_scan(parse(params)?),
        ExperimentId::RamanProfile => raman(parse(params)?),
        ExperimentId::TrapSqueeze => trap(parse(params)?),
        ExperimentId::Fluorescence => fluorescence_curve(parse(params)?),
        ExperimentId::Superbeats => superbeat_curve(parse(params)?),
        ExperimentId::Teleport => teleport(parse(params)?),
        ExperimentId::Cavity => cavity_curve(parse(params)?),
    }
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct EprConfig {
    /// `Δx_cm/Δx_rel`.
    ratios: Axis,
    #[serde(default = "one")]
    dx_rel: f64,
    #[serde(default = "one")]
    mass: f64,
    #[serde(default)]
    base: Base,
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Base {
    #[default]
    Nats,
    Bits,
}

impl From<Base> for EntropyBase {
    fn from(b: Base) -> Self {
        match b {
            Base::Nats => EntropyBase::Nats,
            Base::Bits => EntropyBase::Bits,
        }
    }
}

fn epr(c: EprConfig) -> Result<Vec<CurveRecord>, CliError> {
    let base = EntropyBase::from(c.base);
    let mut rows = Vec::new();
    for ratio in c.ratios.values()? {
        let s = TwoParticleGaussian::new(ratio * c.dx_rel, c.dx_rel, c.mass)?;
        let e = s.entropy(base, GridPolicy::default())?;
        rows.push(vec![
            ratio,
            s.squeezing_parameter(),
            s.schmidt_number(),
            e.exact,
            e.asymptotic,
            covariance_entropy(&s, base),
        ]);
    }
    Ok(vec![CurveRecord::new(
        "",
        &["ratio", "squeezing", "schmidt_number", "entropy", "entropy_log_s", "entropy_covariance"],
        rows,
    )])
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CollisionConfig {
    strength: f64,
    #[serde(default = "one")]
    a: f64,
    sigma: f64,
    k0: Axis,
}

fn collision_scan(c: CollisionConfig) -> Result<Vec<CurveRecord>, CliError> {
    let pot = DoubleDeltaPotential::new(c.strength, c.a)?;
    let ks = c.k0.values()?;
    let entropies: Vec<f64> = if c.strength == 0.0 {
        // free passage: no resonance sets the grid
        ks.iter()
            .map(|&k| collision::wavepacket_entropy(k, c.sigma, &pot, ScanGrid::default(), f64::INFINITY))
            .collect::<crate::Result<_>>()?
    } else {
        collision::wavepacket_entropy_scan(&ks, c.sigma, &pot, ScanGrid::default())?
            .points
            .iter()
            .map(|p| p.delta_s1)
            .collect()
    };
    let rows = ks
        .iter()
        .zip(&entropies)
        .map(|(&k, &s)| {
            let second = match collision::delta_s1_second(k, c.sigma, &pot) {
                Ok(v) => v,
                Err(Error::Validity(_)) => f64::NAN,
                Err(e) => return Err(e),
            };
            Ok(vec![k, pot.transmission_probability(k), s, second])
        })
        .collect::<crate::Result<_>>()?;
    Ok(vec![CurveRecord::new("", &["k0", "transmission", "delta_s1", "delta_s1_second_order"], rows)])
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RamanConfig {
    omega_eff: f64,
    v: f64,
    k: f64,
    #[serde(default)]
    phase_shifts: [f64; 2],
    t: Axis,
}

fn raman(c: RamanConfig) -> Result<Vec<CurveRecord>, CliError> {
    let mut p = RamanParams::new(c.omega_eff, c.v, c.k)?;
    p.phase_shifts = c.phase_shifts;
    let limit = 0.5 * p.omega_eff / p.v;
    let rows = c
        .t
        .values()?
        .into_iter()
        .map(|t| {
            Ok(vec![
                t,
                dissociation::momentum_spread(&p, t)?,
                dissociation::momentum_spread_averaged(&p, t)?,
                limit,
            ])
        })
        .collect::<crate::Result<_>>()?;
    Ok(vec![CurveRecord::new("", &["t", "momentum_spread", "momentum_spread_averaged", "envelope_limit"], rows)])
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TrapConfig {
    omega: f64,
    #[serde(default)]
    x0: f64,
    #[serde(default = "one")]
    mass: f64,
    dx_cm: f64,
    dx_rel: f64,
    t: Axis,
}

fn trap(c: TrapConfig) -> Result<Vec<CurveRecord>, CliError> {
    let trap = TrapParams::new(c.omega, c.x0, c.mass, 0.0)?;
    let s0 = TwoParticleGaussian::new(c.dx_cm, c.dx_rel, c.mass)?;
    let (g_cm, g_rel) = trap.ground_widths();
    let rows = c
        .t
        .values()?
        .into_iter()
        .map(|t| {
            let s = dissociation::harmonic_confinement_evolve(&s0, &trap, t)?;
            Ok(vec![
                t,
                s.dx_cm(),
                s.dx_rel(),
                s.dx_cm() / g_cm,
                s.dx_rel() / g_rel,
                s.squeezing_parameter(),
                s.schmidt_number(),
            ])
        })
        .collect::<crate::Result<_>>()?;
    Ok(vec![CurveRecord::new(
        "",
        &["t", "dx_cm", "dx_rel", "dx_cm_over_ground", "dx_rel_over_ground", "squeezing", "schmidt_number"],
        rows,
    )])
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FluorescenceConfig {
    parity: Parity,
    spin: MolecularSpin,
    delta_lambda: DeltaLambda,
    /// `γ/ξ̇`; zero switches decay off.
    gamma_over_xi_dot: f64,
    xi_max: f64,
    points: usize,
}

fn fluorescence_curve(c: FluorescenceConfig) -> Result<Vec<CurveRecord>, CliError> {
    if c.points < 2 || !(c.xi_max > 0.0) {
        return Err(CliError::Config("[params] need points ≥ 2 and xi_max > 0".into()));
    }
    let xi: Vec<f64> = (0..c.points).map(|i| c.xi_max * i as f64 / (c.points - 1) as f64).collect();
    let curve = if c.gamma_over_xi_dot == 0.0 {
        let branch = fluorescence::dicke_from_symmetry(c.parity, c.spin)
            .branch()
            .expect("singly excited Dicke state");
        fluorescence::ringing_curve(c.delta_lambda, branch, &xi)?
    } else {
        let spec = TransitionSpec::new(c.parity, c.spin, c.delta_lambda, c.gamma_over_xi_dot, 1.0)?;
        fluorescence::emission_curve(&spec, &xi)?
    };
    let rows = (0..c.points).map(|i| vec![curve.xi[i], curve.rate[i], curve.population[i], curve.emitted[i]]).collect();
    Ok(vec![CurveRecord::new("", &["xi", "rate", "population", "emitted"], rows)])
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SuperbeatConfig {
    beat: SuperbeatParams,
    t_end: f64,
    points: usize,
}

fn superbeat_curve(c: SuperbeatConfig) -> Result<Vec<CurveRecord>, CliError> {
    let td = c.beat.t_delay;
    if c.points < 2 || !(c.t_end > td) {
        return Err(CliError::Config("[params] need points ≥ 2 and t_end > beat.t_delay".into()));
    }
    let t: Vec<f64> = (0..c.points)
        .map(|i| if i + 1 == c.points { c.t_end } else { td + (c.t_end - td) * i as f64 / (c.points - 1) as f64 })
        .collect();
    let curve = superbeats::emission_rate_superbeats(&t, &c.beat)?;
    let rows = (0..c.points)
        .map(|i| vec![curve.t[i], curve.rate[i], curve.populations[i], curve.coherence[i]])
        .collect();
    Ok(vec![CurveRecord::new("", &["t", "rate", "population_terms", "coherence_term"], rows)])
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "lowercase")]
enum TeleportState {
    Cat,
    Gaussian,
}

fn default_teleport_n() -> usize {
    512
}

fn default_teleport_dx() -> f64 {
    0.05
}

fn default_width() -> f64 {
    std::f64::consts::FRAC_1_SQRT_2
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TeleportConfig {
    state: TeleportState,
    /// Lobe offset of the cat, or centre of the Gaussian.
    #[serde(default)]
    separation: f64,
    #[serde(default)]
    odd: bool,
    #[serde(default = "default_width")]
    width: f64,
    #[serde(default = "default_teleport_n")]
    grid_points: usize,
    #[serde(default = "default_teleport_dx")]
    dx: f64,
    /// `√(Δx_E/Δp_E)`.
    #[serde(default = "one")]
    lambda: f64,
    s_e: Axis,
    /// Also write the input Wigner function, every `heatmap_stride`-th sample.
    #[serde(default)]
    heatmap_stride: Option<usize>,
}

fn teleport(c: TeleportConfig) -> Result<Vec<CurveRecord>, CliError> {
    let psi = match c.state {
        TeleportState::Cat => teleportation::cat_state(c.grid_points, c.dx, c.separation, c.odd)?,
        TeleportState::Gaussian => teleportation::gaussian_state(c.grid_points, c.dx, c.separation, 0.0, c.width)?,
    };
    let w_in = teleportation::wigner_of_pure_state(&psi)?;
    let mut rows = Vec::new();
    for s_e in c.s_e.values()? {
        if !(s_e > 0.0) {
            return Err(CliError::Config(format!("[params] s_e values must be positive, got {s_e}")));
        }
        let d = (0.5 / s_e).sqrt();
        let err = ErrorBudget::new(d * c.lambda, d / c.lambda)?;
        let w_out = teleportation::teleport_smooth(&w_in, &err)?;
        let contrast = match c.state {
            TeleportState::Cat => teleportation::fringe_contrast(&w_out, c.separation)?,
            TeleportState::Gaussian => f64::NAN,
        };
        rows.push(vec![s_e, err.sigma(), teleportation::fidelity(&w_in, &w_out)?, contrast]);
    }
    let mut out = vec![CurveRecord::new("", &["s_e", "sigma", "fidelity", "fringe_contrast"], rows)];
    if let Some(stride) = c.heatmap_stride {
        let stride = stride.max(1);
        let (nx, np) = w_in.shape();
        let mut cells = Vec::new();
        for i in (0..nx).step_by(stride) {
            for j in (0..np).step_by(stride) {
                cells.push(vec![w_in.x(i), w_in.p(j), w_in.values()[(i, j)]]);
            }
        }
        out.push(CurveRecord::new("_wigner", &["x", "p", "wigner"], cells));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "snake_case")]
enum PairState {
    PsiPlus,
    PsiMinus,
    Mix,
    Both,
}

fn default_bath() -> AtomBath {
    AtomBath::Thermal
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CavityConfig {
    g_eff: f64,
    #[serde(default = "one")]
    eta: f64,
    nbar: f64,
    #[serde(default = "one")]
    nu: f64,
    #[serde(default)]
    convention: RateConvention,
    #[serde(default = "default_bath")]
    bath: AtomBath,
    state: PairState,
    gamma_t: Axis,
}

fn cavity_curve(c: CavityConfig) -> Result<Vec<CurveRecord>, CliError> {
    let p = CavityParams { g_eff: c.g_eff, eta: c.eta, nbar: c.nbar, nu: c.nu, convention: c.convention };
    p.validate()?;
    let grid = c.gamma_t.values()?;
    let ratios = |rho: DimerDensity4| -> Result<Vec<f64>, CliError> {
        Ok(cavity::temperature_curve(&rho, &grid, &p, c.bath)?
            .iter()
            .map(|pt| pt.tc_over_t.unwrap_or(f64::NAN))
            .collect())
    };
    let (columns, curves): (Vec<&str>, Vec<Vec<f64>>) = match c.state {
        PairState::PsiPlus => (vec!["gamma_t", "Tc_over_T"], vec![ratios(DimerDensity4::bell_psi(true))?]),
        PairState::PsiMinus => (vec!["gamma_t", "Tc_over_T"], vec![ratios(DimerDensity4::bell_psi(false))?]),
        PairState::Mix => (vec!["gamma_t", "Tc_over_T"], vec![ratios(DimerDensity4::mixed_single_excitation())?]),
        PairState::Both => (
            vec!["gamma_t", "Tc_over_T_psi_plus", "Tc_over_T_mix"],
            vec![ratios(DimerDensity4::bell_psi(true))?, ratios(DimerDensity4::mixed_single_excitation())?],
        ),
    };
    let rows = grid
        .iter()
        .enumerate()
        .map(|(i, &g)| std::iter::once(g).chain(curves.iter().map(|c| c[i])).collect())
        .collect();
    Ok(vec![CurveRecord::new("", &columns, rows)])
}
