//! Experiment drivers: plan fidelity under noise and injected errors,
//! robustness sweeps, population traces, device curves and the lab-tier
//! consistency check. Each driver returns plain records; [`write_csv`]
//! and [`write_summary`] turn them into files.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use log::warn;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bessel::bessel_j1;
use crate::device::{
    coupler_match_points, coupler_reduction, coupler_zero_crossings, flux_for_frequency, transmon_params,
    CouplerSpec, EffectiveModel, XmonSpec, SW_VALIDITY_GUARD,
};
use crate::dynamics::{lindblad_channel, propagate_columns, propagate_lindblad, propagate_unitary, ChannelImages, NoiseSpec};
use crate::error::{Error, Result};
use crate::hamiltonian::{build_lab_frame, effective_iswap_block, sideband_frame_phases, ModulationTone, PhaseProfile, SidebandModel};
use crate::hilbert::{CMatrix, CVector, DensityMatrix, HilbertSpace, StateVector};
use crate::metrics::{average_fidelity, FidelityKernel, FidelityMethod, FidelityReport};
use crate::ode::{SolverStats, Tolerances};
use crate::synthesis::{GatePlan, Scheme, COMPUTATIONAL_INDICES};

/// Model, noise and injected errors a plan is simulated under.
///
/// `zeta` scales the exchange coupling, `xi` detunes qubit B by `ξ·ω_B`,
/// `delta` scales every decay rate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimulationSetup {
    pub model: EffectiveModel,
    pub noise: NoiseSpec,
    pub zeta: f64,
    pub xi: f64,
    pub delta: f64,
    pub tolerances: Tolerances,
}

impl SimulationSetup {
    pub fn new(model: EffectiveModel, noise: NoiseSpec) -> Self {
        SimulationSetup {
            model,
            noise,
            zeta: 0.0,
            xi: 0.0,
            delta: 1.0,
            tolerances: Tolerances::default(),
        }
    }

    /// `g = 1, α = 4√3, ω = 100, κ₋ = κ_z = 10⁻⁴`.
    pub fn dimensionless_reference() -> Self {
        Self::new(
            EffectiveModel::dimensionless_reference(),
            NoiseSpec::uniform(1e-4).expect("positive rate"),
        )
    }

    pub fn with_axis(&self, axis: SweepAxis, value: f64) -> Self {
        let mut s = *self;
        match axis {
            SweepAxis::Zeta => s.zeta = value,
            SweepAxis::Xi => s.xi = value,
            SweepAxis::Delta => s.delta = value,
        }
        s
    }

    pub fn sideband_model(&self, plan: &GatePlan) -> SidebandModel {
        plan.sideband_model(self.model.alpha, self.xi * self.model.omega[1], self.zeta)
    }

    pub fn effective_noise(&self) -> NoiseSpec {
        self.noise.scaled(self.delta)
    }
}

/// Channel images of the computational coherences after running `plan`.
pub fn simulate_channel(plan: &GatePlan, setup: &SimulationSetup) -> Result<ChannelImages> {
    let h = setup.sideband_model(plan).hamiltonian();
    lindblad_channel(&h, &setup.effective_noise(), plan.duration, &COMPUTATIONAL_INDICES, &setup.tolerances)
}

/// Average fidelity against the plan's own predicted unitary.
pub fn average_gate_fidelity(plan: &GatePlan, setup: &SimulationSetup, method: &FidelityMethod) -> Result<(FidelityReport, SolverStats)> {
    let channel = simulate_channel(plan, setup)?;
    let kernel = FidelityKernel::new(&channel, &plan.predicted_unitary)?;
    let report = average_fidelity(&kernel, method);
    if !report.mean.is_finite() {
        return Err(Error::Numerical("non-finite average fidelity".into()));
    }
    Ok((report, channel.stats))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepAxis {
    Zeta,
    Xi,
    Delta,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::Zeta => "zeta",
            SweepAxis::Xi => "xi",
            SweepAxis::Delta => "delta",
        }
    }
}

impl FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "zeta" => Ok(SweepAxis::Zeta),
            "xi" => Ok(SweepAxis::Xi),
            "delta" => Ok(SweepAxis::Delta),
            other => Err(Error::Config(format!("unknown sweep axis `{other}` (zeta|xi|delta)"))),
        }
    }
}

/// `points` evenly spaced values from `from` to `to` inclusive.
pub fn linspace(from: f64, to: f64, points: usize) -> Result<Vec<f64>> {
    if points < 2 {
        return Err(Error::Config(format!("a sweep needs at least 2 points, got {points}")));
    }
    if !from.is_finite() || !to.is_finite() {
        return Err(Error::Config("sweep bounds must be finite".into()));
    }
    let step = (to - from) / (points - 1) as f64;
    Ok((0..points)
        .map(|k| if k == points - 1 { to } else { from + k as f64 * step })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub axis: SweepAxis,
    pub value: f64,
    pub scheme: Scheme,
    pub fidelity: f64,
    pub std_error: Option<f64>,
    pub method: String,
    pub samples: usize,
}

/// Every `(value, plan)` pair is an independent job; output is ordered by
/// value, then by plan order.
pub fn run_robustness_sweep(
    plans: &[GatePlan],
    setup: &SimulationSetup,
    axis: SweepAxis,
    values: &[f64],
    method: &FidelityMethod,
) -> Result<Vec<SweepRecord>> {
    if axis == SweepAxis::Delta && values.iter().any(|v| *v < 0.0) {
        return Err(Error::Config("delta scales decay rates and must be ≥ 0".into()));
    }
    let jobs: Vec<(f64, &GatePlan)> = values.iter().flat_map(|&v| plans.iter().map(move |p| (v, p))).collect();
    jobs.par_iter()
        .map(|&(value, plan)| {
            let (report, _) = average_gate_fidelity(plan, &setup.with_axis(axis, value), method)?;
            Ok(SweepRecord {
                axis,
                value,
                scheme: plan.scheme,
                fidelity: report.mean,
                std_error: report.std_error,
                method: method.to_string(),
                samples: report.samples.len(),
            })
        })
        .collect()
}

/// One row of a population trace.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PopulationSample {
    pub t: f64,
    #[serde(rename = "P_00")]
    pub p00: f64,
    #[serde(rename = "P_01")]
    pub p01: f64,
    #[serde(rename = "P_10")]
    pub p10: f64,
    #[serde(rename = "P_11")]
    pub p11: f64,
    #[serde(rename = "P_02")]
    pub p02: f64,
    #[serde(rename = "P_20")]
    pub p20: f64,
    #[serde(rename = "P_B")]
    pub p_bright: f64,
    #[serde(rename = "P_D")]
    pub p_dark: f64,
}

impl PopulationSample {
    fn from_density(t: f64, rho: &CMatrix, space: &HilbertSpace) -> Self {
        let idx = |l: &str| space.index_of_label(l).expect("two-qutrit label");
        let p = |l: &str| rho[(idx(l), idx(l))].re;
        let (i02, i20) = (idx("02"), idx("20"));
        let coh = rho[(i02, i20)].re;
        let mid = 0.5 * (rho[(i02, i02)].re + rho[(i20, i20)].re);
        PopulationSample {
            t,
            p00: p("00"),
            p01: p("01"),
            p10: p("10"),
            p11: p("11"),
            p02: p("02"),
            p20: p("20"),
            p_bright: mid + coh,
            p_dark: mid - coh,
        }
    }
}

/// Parse `"10+11"` into the equal superposition of those basis states.
pub fn parse_initial_state(spec: &str) -> Result<StateVector> {
    let space = HilbertSpace::two_qutrits();
    let labels: Vec<&str> = spec.split('+').map(str::trim).collect();
    if labels.iter().any(|l| l.is_empty()) {
        return Err(Error::Config(format!("bad initial state `{spec}`")));
    }
    StateVector::superposition(&space, &labels).map_err(|e| Error::Config(format!("initial state `{spec}`: {e}")))
}

/// Populations at `samples` evenly spaced times over the gate (endpoints
/// included). Uses the master equation when the noise is active.
pub fn run_population_trace(
    plan: &GatePlan,
    setup: &SimulationSetup,
    initial: &StateVector,
    samples: usize,
) -> Result<Vec<PopulationSample>> {
    let times = linspace(0.0, plan.duration, samples.max(2))?;
    let h = setup.sideband_model(plan).hamiltonian();
    let noise = setup.effective_noise();
    let space = h.space().clone();
    let rows = if noise.is_active() {
        let rho0 = initial.to_density();
        let run = propagate_lindblad(&h, &rho0, &noise, plan.duration, &times, &setup.tolerances)?;
        run.trajectory
            .iter()
            .map(|(t, rho)| PopulationSample::from_density(*t, rho.matrix(), &space))
            .collect()
    } else {
        let run = propagate_unitary(&h, initial, plan.duration, &times, &setup.tolerances)?;
        run.trajectory
            .iter()
            .map(|(t, psi)| PopulationSample::from_density(*t, psi.to_density().matrix(), &space))
            .collect()
    };
    Ok(rows)
}

/// Circuit description for the device curves. All energies are `E/h` in GHz.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeviceConfig {
    pub qubit_a: XmonSpec,
    pub qubit_b: XmonSpec,
    pub coupler: XmonSpec,
    /// Qubit–coupler and direct couplings (`ω_c` is ignored).
    pub couplings: CouplerSpec,
    /// Frequency both qubits sit at for the coupler curve.
    pub qubit_frequency: f64,
    /// Frequency Q_B must be tuned to (`ω_A − ν`).
    pub target_frequency_b: f64,
    /// Direct-coupling benchmark the coupler should reproduce.
    pub direct_coupling: f64,
    pub coupler_window: [f64; 2],
    pub coupler_points: usize,
    pub flux_points: usize,
    pub beta_range: [f64; 2],
    pub beta_points: usize,
}

impl DeviceConfig {
    pub fn table_one() -> Self {
        DeviceConfig {
            qubit_a: XmonSpec::fixed(0.3, 8.3627),
            qubit_b: XmonSpec::tunable(0.3, crate::device::JunctionPair::new(10.0, 2.8).expect("positive"), 0.0),
            coupler: XmonSpec::tunable(0.12, crate::device::JunctionPair::new(30.0, 10.0).expect("positive"), 0.0),
            couplings: CouplerSpec {
                g_ac: 0.08,
                g_bc: 0.08,
                g_ab_direct: 0.005,
                omega_c: 5.0,
            },
            qubit_frequency: 4.18,
            target_frequency_b: 4.18 - 0.369,
            direct_coupling: 0.07192,
            coupler_window: [4.25, 7.5],
            coupler_points: 400,
            flux_points: 201,
            beta_range: [0.0, 4.0],
            beta_points: 201,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.coupler_points < 2 || self.flux_points < 2 || self.beta_points < 2 {
            return Err(Error::Config("curve point counts must be ≥ 2".into()));
        }
        if !(self.coupler_window[0] < self.coupler_window[1]) || !(self.beta_range[0] < self.beta_range[1]) {
            return Err(Error::Config("curve windows must be increasing".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BesselPoint {
    pub beta: f64,
    #[serde(rename = "J1")]
    pub j1: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FluxPoint {
    pub phi_ratio: f64,
    #[serde(rename = "omega_Q_B")]
    pub omega_qb: f64,
    pub omega_coupler: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CouplerPoint {
    pub omega_c: f64,
    pub g_tilde: f64,
    pub expansion_ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeviceSummary {
    pub omega_qa: f64,
    pub alpha_qa: f64,
    pub omega_qb_range: [f64; 2],
    pub omega_coupler_range: [f64; 2],
    pub flux_for_target_b: Vec<f64>,
    pub coupler_zero_crossings: Vec<f64>,
    pub coupler_match_points: Vec<f64>,
    /// `g/|Δ|` at each match point.
    pub match_expansion_ratios: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DeviceCurves {
    pub bessel: Vec<BesselPoint>,
    pub flux: Vec<FluxPoint>,
    pub coupler: Vec<CouplerPoint>,
    pub summary: DeviceSummary,
}

pub fn run_device_curves(cfg: &DeviceConfig) -> Result<DeviceCurves> {
    cfg.validate()?;
    let bessel = linspace(cfg.beta_range[0], cfg.beta_range[1], cfg.beta_points)?
        .into_iter()
        .map(|beta| BesselPoint { beta, j1: bessel_j1(beta) })
        .collect();
    let omega = |spec: &XmonSpec, phi: f64| transmon_params(&spec.with_flux(phi)).map(|p| p.omega);
    let flux = linspace(-0.5, 0.5, cfg.flux_points)?
        .into_iter()
        .map(|phi| {
            Ok(FluxPoint {
                phi_ratio: phi,
                omega_qb: omega(&cfg.qubit_b, phi)?,
                omega_coupler: omega(&cfg.coupler, phi)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let w = cfg.qubit_frequency;
    let coupler: Vec<CouplerPoint> = linspace(cfg.coupler_window[0], cfg.coupler_window[1], cfg.coupler_points)?
        .into_iter()
        .filter_map(|wc| {
            coupler_reduction(&cfg.couplings.with_frequency(wc), w, w)
                .ok()
                .map(|r| CouplerPoint {
                    omega_c: wc,
                    g_tilde: r.g_tilde,
                    expansion_ratio: r.expansion_ratio,
                })
        })
        .collect();
    let outside: Vec<&CouplerPoint> = coupler
        .iter()
        .filter(|p: &&CouplerPoint| p.expansion_ratio > SW_VALIDITY_GUARD)
        .collect();
    if let Some(last) = outside.last() {
        warn!(
            "{} coupler points up to ω_c = {:.4} have g/|Δ| > {SW_VALIDITY_GUARD}; the reduction is unreliable there",
            outside.len(),
            last.omega_c
        );
    }
    let qa = transmon_params(&cfg.qubit_a)?;
    let (lo, hi) = (cfg.coupler_window[0], cfg.coupler_window[1]);
    let summary = DeviceSummary {
        omega_qa: qa.omega,
        alpha_qa: qa.alpha,
        omega_qb_range: [omega(&cfg.qubit_b, 0.5)?, omega(&cfg.qubit_b, 0.0)?],
        omega_coupler_range: [omega(&cfg.coupler, 0.5)?, omega(&cfg.coupler, 0.0)?],
        flux_for_target_b: flux_for_frequency(&cfg.qubit_b, cfg.target_frequency_b, -0.5, 0.5)?,
        coupler_zero_crossings: coupler_zero_crossings(&cfg.couplings, w, w, lo, hi),
        coupler_match_points: coupler_match_points(&cfg.couplings, w, w, cfg.direct_coupling, lo, hi),
        match_expansion_ratios: Vec::new(),
    };
    let mut summary = summary;
    summary.match_expansion_ratios = summary
        .coupler_match_points
        .iter()
        .map(|&wc| coupler_reduction(&cfg.couplings.with_frequency(wc), w, w).map(|r| r.expansion_ratio))
        .collect::<Result<_>>()?;
    Ok(DeviceCurves {
        bessel,
        flux,
        coupler,
        summary,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TierComparison {
    pub ratio: f64,
    pub g_eff: f64,
    pub duration: f64,
    /// `1 − |Tr(U_eff† U_lab)|²/4` on `{|01⟩, |10⟩}`.
    pub infidelity: f64,
}

/// Propagate `|01⟩, |10⟩` in the lab frame with counter-rotating terms
/// under `tone`, move to the sideband frame and compare with the
/// effective block over one iSWAP time `π/(2𝒢)`.
pub fn lab_tier_consistency(model: &EffectiveModel, tone: &ModulationTone, tol: &Tolerances) -> Result<TierComparison> {
    let (block, g_eff) = effective_iswap_block(tone, model)?;
    let duration = tone.duration();
    let lab = build_lab_frame(model, Some(tone))?;
    let space = lab.space().clone();
    let cols = [space.index_of_label("01")?, space.index_of_label("10")?];
    let mut y0 = CMatrix::zeros(space.dim(), 2);
    y0[(cols[0], 0)] = Complex64::new(1.0, 0.0);
    y0[(cols[1], 1)] = Complex64::new(1.0, 0.0);
    let (y, _) = propagate_columns(&lab, y0, duration, tol)?;
    let theta = sideband_frame_phases(model, tone, duration);
    let projected = CMatrix::from_fn(2, 2, |r, c| Complex64::from_polar(1.0, theta[cols[r]]) * y[(cols[r], c)]);
    let u_eff = crate::dynamics::exact_propagator(&block, duration)?;
    let overlap = (u_eff.adjoint() * projected).trace().norm_sqr() / 4.0;
    Ok(TierComparison {
        ratio: g_eff / tone.nu,
        g_eff,
        duration,
        infidelity: 1.0 - overlap,
    })
}

/// Lab-frame model and constant-phase tone at `𝒢/ν = ratio`, with
/// `ν/2π = 0.369`, `β = 0.692/0.369`, `ω_A/2π = 4.18`, `α/2π = 0.3` (rad/ns).
pub fn lab_tier_setup(ratio: f64, drive_phase: f64) -> Result<(EffectiveModel, ModulationTone)> {
    use crate::device::units::from_ghz;
    let nu = from_ghz(0.369);
    let beta = 0.692 / 0.369;
    let g_eff = ratio * nu;
    let g = g_eff / bessel_j1(beta);
    let omega_a = from_ghz(4.18);
    let model = EffectiveModel::new(
        [omega_a, omega_a - nu],
        [from_ghz(0.3); 2],
        g,
        crate::device::UnitSystem::PhysicalGhz,
    )?;
    let duration = std::f64::consts::PI / (2.0 * g_eff);
    let tone = ModulationTone::new(beta * nu, nu, PhaseProfile::constant(drive_phase, duration)?)?;
    Ok((model, tone))
}

pub fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// `<dir>/<stem>.summary.json` next to `path`.
pub fn summary_path(path: &Path) -> PathBuf {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("output");
    path.with_file_name(format!("{stem}.summary.json"))
}

pub fn write_summary<T: Serialize>(path: &Path, summary: &T) -> Result<()> {
    let mut f = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut f, summary)?;
    f.write_all(b"\n")?;
    f.flush()?;
    Ok(())
}

/// Populations after an ideal plan starting from the Bell-like input
/// `(|10⟩ + |11⟩)/√2`.
pub fn default_trace_input() -> StateVector {
    let space = HilbertSpace::two_qutrits();
    let mut amps = CVector::zeros(space.dim());
    amps[space.index_of_label("10").expect("label")] = Complex64::new(FRAC_1_SQRT_2, 0.0);
    amps[space.index_of_label("11").expect("label")] = Complex64::new(FRAC_1_SQRT_2, 0.0);
    StateVector::new(space, amps).expect("normalised")
}

/// Density matrix of the channel applied to a computational product state.
pub fn channel_output(channel: &ChannelImages, coeffs: &[f64; 4]) -> Result<DensityMatrix> {
    let c: Vec<Complex64> = coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    DensityMatrix::new(HilbertSpace::two_qutrits(), channel.apply(&c))
}
