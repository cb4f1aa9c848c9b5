//! Circuit parameters → effective qubit parameters.
//!
//! Energies are angular frequencies (`E/ħ`). In physical mode the unit is
//! rad/ns, so a value quoted as `ω/2π` in GHz is multiplied by 2π on
//! input (see [`units`]).

use std::f64::consts::PI;

use log::{debug, warn};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub mod units {
    use std::f64::consts::TAU;

    /// `ω/2π` in GHz → angular frequency in rad/ns.
    pub fn from_ghz(f: f64) -> f64 {
        TAU * f
    }

    pub fn to_ghz(omega: f64) -> f64 {
        omega / TAU
    }

    pub fn from_mhz(f: f64) -> f64 {
        TAU * f * 1e-3
    }

    pub fn to_mhz(omega: f64) -> f64 {
        omega / TAU * 1e3
    }
}

/// Ratio `E_J/E_C` below which the charge-insensitive regime is doubtful.
pub const TRANSMON_RATIO_GUARD: f64 = 20.0;
/// `g_mc/|ω_m − ω_c|` above which the second-order reduction degrades.
pub const SW_VALIDITY_GUARD: f64 = 0.3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum UnitSystem {
    #[serde(rename = "dimensionless-g1")]
    DimensionlessG1,
    #[serde(rename = "physical-GHz")]
    PhysicalGhz,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct JunctionPair {
    pub e_j_left: f64,
    pub e_j_right: f64,
}

impl JunctionPair {
    pub fn new(e_j_left: f64, e_j_right: f64) -> Result<Self> {
        if !(e_j_left > 0.0 && e_j_right > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "junction energies must be positive, got {e_j_left} and {e_j_right}"
            )));
        }
        Ok(Self {
            e_j_left,
            e_j_right,
        })
    }

    /// `d = (E_JL − E_JR)/(E_JL + E_JR)`.
    pub fn asymmetry(&self) -> f64 {
        (self.e_j_left - self.e_j_right) / self.sigma()
    }

    pub fn sigma(&self) -> f64 {
        self.e_j_left + self.e_j_right
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Junction {
    Fixed(f64),
    Tunable(JunctionPair),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct XmonSpec {
    pub e_c: f64,
    pub junction: Junction,
    /// `Φ/Φ₀`; ignored for fixed junctions.
    #[serde(default)]
    pub flux_bias: f64,
}

impl XmonSpec {
    pub fn fixed(e_c: f64, e_j: f64) -> Self {
        Self {
            e_c,
            junction: Junction::Fixed(e_j),
            flux_bias: 0.0,
        }
    }

    pub fn tunable(e_c: f64, pair: JunctionPair, flux_bias: f64) -> Self {
        Self {
            e_c,
            junction: Junction::Tunable(pair),
            flux_bias,
        }
    }

    pub fn with_flux(self, flux_bias: f64) -> Self {
        Self { flux_bias, ..self }
    }

    /// Josephson energy at the configured flux bias.
    pub fn josephson_energy(&self) -> f64 {
        match self.junction {
            Junction::Fixed(e_j) => e_j,
            Junction::Tunable(pair) => flux_josephson_energy(&pair, self.flux_bias),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TransmonParams {
    pub omega: f64,
    pub alpha: f64,
    pub e_j: f64,
    pub in_transmon_regime: bool,
}

/// `ω = √(8 E_J E_C) − E_C`, `α = E_C`.
pub fn transmon_params(spec: &XmonSpec) -> Result<TransmonParams> {
    if !(spec.e_c > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "charging energy must be positive, got {}",
            spec.e_c
        )));
    }
    if let Junction::Fixed(e_j) = spec.junction {
        if !(e_j > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "Josephson energy must be positive, got {e_j}"
            )));
        }
    }
    let e_j = spec.josephson_energy();
    let ratio = e_j / spec.e_c;
    let in_regime = ratio >= TRANSMON_RATIO_GUARD;
    if !in_regime {
        warn!("E_J/E_C = {ratio:.3} is below {TRANSMON_RATIO_GUARD}; transmon expansion unreliable");
    }
    let omega = (8.0 * e_j * spec.e_c).sqrt() - spec.e_c;
    if !(omega > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "E_J/E_C = {ratio:.3} gives a non-positive transition frequency"
        )));
    }
    Ok(TransmonParams {
        omega,
        alpha: spec.e_c,
        e_j,
        in_transmon_regime: in_regime,
    })
}

/// SQUID Josephson energy `E_JΣ·√(cos²(πΦ/Φ₀) + d² sin²(πΦ/Φ₀))`.
///
/// This is `E_JΣ |cos(πΦ/Φ₀)| √(1 + d² tan²(πΦ/Φ₀))` written without the
/// tangent pole at half flux.
pub fn flux_josephson_energy(pair: &JunctionPair, phi_ratio: f64) -> f64 {
    let x = PI * phi_ratio;
    let d = pair.asymmetry();
    pair.sigma() * (x.cos().powi(2) + d * d * x.sin().powi(2)).sqrt()
}

/// Junction phase origin shift `φ₀` with `tan φ₀ = d·tan(πΦ/Φ₀)`.
/// Does not enter the transition frequency.
pub fn junction_phase_offset(pair: &JunctionPair, phi_ratio: f64) -> f64 {
    let x = PI * phi_ratio;
    (pair.asymmetry() * x.sin()).atan2(x.cos())
}

/// `g = ½ · C_AB/√(C_A C_B) · √(ω_A ω_B)`.
pub fn capacitive_coupling(c_ratio: f64, omega_a: f64, omega_b: f64) -> f64 {
    0.5 * c_ratio * (omega_a * omega_b).sqrt()
}

/// Capacitance ratio that produces coupling `g`.
pub fn c_ratio_for_coupling(g: f64, omega_a: f64, omega_b: f64) -> f64 {
    2.0 * g / (omega_a * omega_b).sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CouplerSpec {
    pub g_ac: f64,
    pub g_bc: f64,
    pub g_ab_direct: f64,
    pub omega_c: f64,
}

impl CouplerSpec {
    pub fn with_frequency(self, omega_c: f64) -> Self {
        Self { omega_c, ..self }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CouplerReduction {
    pub g_tilde: f64,
    pub omega_tilde: [f64; 2],
    /// Largest `g_mc/|ω_m − ω_c|`; the expansion is second order in this.
    pub expansion_ratio: f64,
}

/// Second-order Schrieffer–Wolff elimination of the coupler.
pub fn coupler_reduction(c: &CouplerSpec, omega_a: f64, omega_b: f64) -> Result<CouplerReduction> {
    if c.g_ac < 0.0 || c.g_bc < 0.0 || c.g_ab_direct < 0.0 {
        return Err(Error::InvalidParameter("couplings must be non-negative".into()));
    }
    if !(c.omega_c > 0.0) {
        return Err(Error::InvalidParameter("coupler frequency must be positive".into()));
    }
    let dispersive = |omega: f64| 1.0 / (omega - c.omega_c) - 1.0 / (omega + c.omega_c);
    for (name, omega) in [("A", omega_a), ("B", omega_b)] {
        if omega == c.omega_c || !dispersive(omega).is_finite() {
            return Err(Error::CouplerResonance { qubit: name });
        }
    }
    let (da, db) = (dispersive(omega_a), dispersive(omega_b));
    let g_tilde = 0.5 * c.g_ac * c.g_bc * (da + db) + c.g_ab_direct;
    let omega_tilde = [
        omega_a + c.g_ac * c.g_ac * da,
        omega_b + c.g_bc * c.g_bc * db,
    ];
    let expansion_ratio = (c.g_ac / (omega_a - c.omega_c).abs())
        .max(c.g_bc / (omega_b - c.omega_c).abs());
    if expansion_ratio > SW_VALIDITY_GUARD {
        debug!(
            "coupler at ω_c = {:.4}: g/|Δ| = {expansion_ratio:.3} exceeds {SW_VALIDITY_GUARD}",
            c.omega_c
        );
    }
    Ok(CouplerReduction {
        g_tilde,
        omega_tilde,
        expansion_ratio,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EffectiveModel {
    pub omega: [f64; 2],
    pub alpha: [f64; 2],
    pub g: f64,
    pub unit_system: UnitSystem,
}

impl EffectiveModel {
    pub fn new(omega: [f64; 2], alpha: [f64; 2], g: f64, unit_system: UnitSystem) -> Result<Self> {
        if alpha.iter().any(|a| !(*a > 0.0)) {
            return Err(Error::InvalidParameter("anharmonicities must be positive".into()));
        }
        if !(g > 0.0) {
            return Err(Error::InvalidParameter("coupling must be positive".into()));
        }
        if unit_system == UnitSystem::DimensionlessG1 && g != 1.0 {
            return Err(Error::InvalidParameter(
                "dimensionless-g1 units fix g = 1".into(),
            ));
        }
        Ok(Self {
            omega,
            alpha,
            g,
            unit_system,
        })
    }

    /// Paper's dimensionless simulation point: g = 1, α = 4√3, ω = 100.
    pub fn dimensionless_reference() -> Self {
        let alpha = 4.0 * 3f64.sqrt();
        Self::new([100.0; 2], [alpha; 2], 1.0, UnitSystem::DimensionlessG1)
            .expect("static parameters")
    }

    pub fn from_circuit(a: &XmonSpec, b: &XmonSpec, g: f64, unit_system: UnitSystem) -> Result<Self> {
        let pa = transmon_params(a)?;
        let pb = transmon_params(b)?;
        Self::new([pa.omega, pb.omega], [pa.alpha, pb.alpha], g, unit_system)
    }
}

/// Bisection on a bracketing interval.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64> {
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() || !f_lo.is_finite() || !f_hi.is_finite() {
        return Err(Error::NoBracket { lo, hi });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid);
        if f_mid == 0.0 || (hi - lo).abs() < tol {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// All sign changes of `f` on a uniform scan of `[lo, hi]`, refined by
/// bisection. Poles (jumps through ±∞) are skipped.
pub fn scan_roots<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, points: usize, tol: f64) -> Vec<f64> {
    let xs: Vec<f64> = (0..points)
        .map(|k| lo + (hi - lo) * k as f64 / (points - 1) as f64)
        .collect();
    let mut roots = Vec::new();
    for w in xs.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (fa, fb) = (f(a), f(b));
        if fa.is_finite() && fb.is_finite() && fa.signum() != fb.signum() {
            if let Ok(r) = bisect(&f, a, b, tol) {
                // a genuine root keeps |f| small; a pole does not
                if f(r).abs() <= fa.abs().max(fb.abs()) {
                    roots.push(r);
                }
            }
        }
    }
    roots
}

/// Flux biases in `[lo, hi]` where the tunable element reaches `target`.
pub fn flux_for_frequency(spec: &XmonSpec, target: f64, lo: f64, hi: f64) -> Result<Vec<f64>> {
    if !matches!(spec.junction, Junction::Tunable(_)) {
        return Err(Error::InvalidParameter("flux tuning needs a junction pair".into()));
    }
    let f = |phi: f64| {
        transmon_params(&spec.with_flux(phi))
            .map(|p| p.omega - target)
            .unwrap_or(f64::NAN)
    };
    Ok(scan_roots(f, lo, hi, 2001, 1e-13))
}

/// Coupler frequencies in `[lo, hi]` where the effective coupling vanishes.
pub fn coupler_zero_crossings(c: &CouplerSpec, omega_a: f64, omega_b: f64, lo: f64, hi: f64) -> Vec<f64> {
    let f = |wc: f64| {
        coupler_reduction(&c.with_frequency(wc), omega_a, omega_b)
            .map(|r| r.g_tilde)
            .unwrap_or(f64::NAN)
    };
    scan_roots(f, lo, hi, 4001, 1e-13)
}

/// Coupler frequencies where `|g̃| = target`.
pub fn coupler_match_points(
    c: &CouplerSpec,
    omega_a: f64,
    omega_b: f64,
    target: f64,
    lo: f64,
    hi: f64,
) -> Vec<f64> {
    let f = |wc: f64| {
        coupler_reduction(&c.with_frequency(wc), omega_a, omega_b)
            .map(|r| r.g_tilde.abs() - target)
            .unwrap_or(f64::NAN)
    };
    scan_roots(f, lo, hi, 4001, 1e-13)
}
