//! JSON run configuration.
//!
//! In `physical-GHz` mode every frequency and rate is given as `ω/2π` in
//! GHz and converted to rad/ns on load; in `dimensionless-g1` mode values
//! are used as written and `g` must be 1.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bessel::bessel_j1;
use crate::device::{units::from_ghz, EffectiveModel, UnitSystem};
use crate::dynamics::NoiseSpec;
use crate::error::{Error, Result};
use crate::experiments::{DeviceConfig, SimulationSetup};
use crate::ode::Tolerances;
use crate::synthesis::{commensurate_anharmonicity, default_cycle_counts, schedule_parallel_fsim, Coupling, GatePlan, PathKind};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToneConfig {
    pub epsilon: f64,
    pub nu: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceConfig {
    pub rtol: f64,
    pub atol: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub unit_system: UnitSystem,
    /// `[ω_A, ω_B]`.
    pub omega: [f64; 2],
    /// Omitted: `α = 4√3 𝒢`, the smallest commensurate choice.
    #[serde(default)]
    pub alpha: Option<[f64; 2]>,
    pub g: f64,
    #[serde(default)]
    pub tone: Option<ToneConfig>,
    pub noise: NoiseSpec,
    /// `(n₁, n₂)` per path kind; omitted uses (1, 2) and (1, 4).
    #[serde(default)]
    pub cycle_counts_nngqc: Option<(usize, usize)>,
    #[serde(default)]
    pub cycle_counts_ngqc: Option<(usize, usize)>,
    #[serde(default)]
    pub tolerances: Option<ToleranceConfig>,
    #[serde(default)]
    pub device: Option<DeviceConfig>,
}

impl RunConfig {
    pub fn dimensionless_reference() -> Self {
        RunConfig {
            unit_system: UnitSystem::DimensionlessG1,
            omega: [100.0; 2],
            alpha: None,
            g: 1.0,
            tone: None,
            noise: NoiseSpec::uniform(1e-4).expect("positive"),
            cycle_counts_nngqc: None,
            cycle_counts_ngqc: None,
            tolerances: None,
            device: None,
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("reading {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| Error::Config(format!("config: {e}")))?;
        cfg.noise.validate().map_err(|e| Error::Config(format!("noise: {e}")))?;
        if let Some(t) = cfg.tolerances {
            if !(t.rtol > 0.0 && t.atol > 0.0) {
                return Err(Error::Config(format!("tolerances must be positive, got rtol={} atol={}", t.rtol, t.atol)));
            }
        }
        if let Some(d) = &cfg.device {
            d.validate()?;
        }
        Ok(cfg)
    }

    fn convert(&self, x: f64) -> f64 {
        match self.unit_system {
            UnitSystem::PhysicalGhz => from_ghz(x),
            UnitSystem::DimensionlessG1 => x,
        }
    }

    fn tone_angular(&self) -> Option<(f64, f64)> {
        self.tone.map(|t| (self.convert(t.epsilon), self.convert(t.nu)))
    }

    /// Exchange rate `𝒢` in internal units.
    pub fn g_eff(&self) -> f64 {
        let g = self.convert(self.g);
        match self.tone_angular() {
            Some((eps, nu)) => bessel_j1(eps / nu) * g,
            None => g,
        }
    }

    pub fn model(&self) -> Result<EffectiveModel> {
        let alpha = match self.alpha {
            Some([a, b]) => [self.convert(a), self.convert(b)],
            None => [commensurate_anharmonicity(self.g_eff()); 2],
        };
        EffectiveModel::new(
            [self.convert(self.omega[0]), self.convert(self.omega[1])],
            alpha,
            self.convert(self.g),
            self.unit_system,
        )
    }

    pub fn noise(&self) -> NoiseSpec {
        NoiseSpec {
            kappa_minus: self.noise.kappa_minus.map(|k| self.convert(k)),
            kappa_z: self.noise.kappa_z.map(|k| self.convert(k)),
            enabled: self.noise.enabled,
        }
    }

    pub fn tolerances(&self) -> Tolerances {
        match self.tolerances {
            Some(t) => Tolerances { rtol: t.rtol, atol: t.atol },
            None => Tolerances::default(),
        }
    }

    pub fn coupling(&self) -> Coupling<'static> {
        match self.tone_angular() {
            Some((eps, nu)) => Coupling::tone(eps, nu),
            None => Coupling::Resonant,
        }
    }

    pub fn cycle_counts(&self, kind: PathKind) -> (usize, usize) {
        let custom = match kind {
            PathKind::Nngqc => self.cycle_counts_nngqc,
            PathKind::Ngqc => self.cycle_counts_ngqc,
        };
        custom.unwrap_or_else(|| default_cycle_counts(kind))
    }

    pub fn synthesize(&self, kind: PathKind) -> Result<GatePlan> {
        let (n1, n2) = self.cycle_counts(kind);
        schedule_parallel_fsim(&self.model()?, &self.coupling(), kind, n1, n2)
    }

    pub fn setup(&self) -> Result<SimulationSetup> {
        let mut s = SimulationSetup::new(self.model()?, self.noise());
        s.tolerances = self.tolerances();
        Ok(s)
    }

    pub fn device(&self) -> DeviceConfig {
        self.device.clone().unwrap_or_else(DeviceConfig::table_one)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_config_matches_reference_model() {
        let cfg = RunConfig::dimensionless_reference();
        assert_eq!(cfg.model().unwrap(), EffectiveModel::dimensionless_reference());
        let json = serde_json::to_string(&cfg).unwrap();
        assert_eq!(RunConfig::from_json(&json).unwrap(), cfg);
    }

    #[test]
    fn physical_units_are_converted() {
        let json = r#"{
            "unit_system": "physical-GHz",
            "omega": [4.18, 3.811],
            "g": 0.07192,
            "tone": {"epsilon": 0.692, "nu": 0.369},
            "noise": {"kappa_minus": [4.18e-6, 4.18e-6], "kappa_z": [4.18e-6, 4.18e-6]}
        }"#;
        let cfg = RunConfig::from_json(json).unwrap();
        let g_eff_mhz = crate::device::units::to_mhz(cfg.g_eff());
        assert!((g_eff_mhz - 41.8).abs() / 41.8 < 5e-3, "{g_eff_mhz}");
        let plan = cfg.synthesize(PathKind::Nngqc).unwrap();
        assert!(plan.tone.is_some());
        assert!((cfg.noise().kappa_z[0] - from_ghz(4.18e-6)).abs() < 1e-15);
    }

    #[test]
    fn bad_configs_are_config_errors() {
        let unknown = r#"{"unit_system": "dimensionless-g1", "omega": [100, 100], "g": 1,
            "noise": {"kappa_minus": [0, 0], "kappa_z": [0, 0]}, "colour": 1}"#;
        assert_eq!(RunConfig::from_json(unknown).unwrap_err().exit_code(), 2);
        let negative = r#"{"unit_system": "dimensionless-g1", "omega": [100, 100], "g": 1,
            "noise": {"kappa_minus": [-1, 0], "kappa_z": [0, 0]}}"#;
        assert_eq!(RunConfig::from_json(negative).unwrap_err().exit_code(), 2);
        let zero_tol = r#"{"unit_system": "dimensionless-g1", "omega": [100, 100], "g": 1,
            "noise": {"kappa_minus": [0, 0], "kappa_z": [0, 0]}, "tolerances": {"rtol": 0, "atol": 1e-9}}"#;
        assert_eq!(RunConfig::from_json(zero_tol).unwrap_err().exit_code(), 2);
        let mut cfg = RunConfig::dimensionless_reference();
        cfg.alpha = Some([5.0, 5.0]);
        assert_eq!(cfg.synthesize(PathKind::Nngqc).unwrap_err().exit_code(), 2);
    }
}
