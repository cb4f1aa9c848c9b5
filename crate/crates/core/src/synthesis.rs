//! Gate synthesis: fSim targets, the NHQC controlled-phase cycle, the
//! NNGQC noncyclic iSWAP path, the three-segment NGQC iSWAP, and the
//! one-step parallel fSim schedule that runs an iSWAP path and whole NHQC
//! cycles under one drive.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::device::{EffectiveModel, UnitSystem};
use crate::dynamics::exact_propagator;
use crate::error::{Error, Result};
use crate::expm::propagator;
use crate::hamiltonian::{
    cp_block, principal_phase, sideband_coupling, wrap_phase, ModulationTone, PhaseProfile, PhaseSegment,
    SidebandModel,
};
use crate::hilbert::{submatrix, unitarity_error, CMatrix, HilbertSpace, Operator, I, ONE, ZERO};

/// Two-qutrit indices of `|00⟩, |01⟩, |10⟩, |11⟩`.
pub const COMPUTATIONAL_INDICES: [usize; 4] = [0, 1, 3, 4];
pub const COMPUTATIONAL_LABELS: [&str; 4] = ["00", "01", "10", "11"];

/// Relative mismatch allowed between `n₁τ₁` and `n₂τ₂` when scheduling.
pub const COMMENSURABILITY_TOL: f64 = 1e-6;

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FsimTarget {
    pub vartheta: f64,
    pub xi: f64,
}

/// `fSim(ϑ, Ξ)` over `|00⟩, |01⟩, |10⟩, |11⟩`.
pub fn fsim_unitary(t: &FsimTarget) -> Operator {
    let space = HilbertSpace::new(&[2, 2]).expect("two qubits");
    Operator::new(space, fsim_matrix(t.vartheta, t.xi)).expect("4×4")
}

pub fn fsim_matrix(vartheta: f64, xi: f64) -> CMatrix {
    let (s, c) = vartheta.sin_cos();
    let mis = Complex64::new(0.0, -s);
    CMatrix::from_row_slice(
        4,
        4,
        &[
            ONE, ZERO, ZERO, ZERO,
            ZERO, real(c), mis, ZERO,
            ZERO, mis, real(c), ZERO,
            ZERO, ZERO, ZERO, Complex64::from_polar(1.0, xi),
        ],
    )
}

/// One NHQC cycle of the `{|11⟩, |B⟩, |D⟩}` block.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NhqcCycle {
    pub g_eff: f64,
    pub delta: f64,
    /// `Ω = ½√(16𝒢² + Δ²)`.
    pub omega: f64,
    pub gamma: f64,
    /// `φ = π sin γ`.
    pub phi: f64,
    /// `τ₂ = π/Ω`.
    pub tau2: f64,
}

/// From `Δ = 2Ω sin γ`, `𝒢 = ½Ω cos γ`.
pub fn synthesize_nhqc_cp(g_eff: f64, delta: f64) -> Result<NhqcCycle> {
    if !g_eff.is_finite() || !delta.is_finite() {
        return Err(Error::NonFinite);
    }
    let omega = 0.5 * (16.0 * g_eff * g_eff + delta * delta).sqrt();
    if omega == 0.0 {
        return Err(Error::ZeroRabi);
    }
    let sin_gamma = delta / (2.0 * omega);
    let gamma = sin_gamma.asin();
    Ok(NhqcCycle {
        g_eff,
        delta,
        omega,
        gamma,
        phi: PI * sin_gamma,
        tau2: PI / omega,
    })
}

impl NhqcCycle {
    /// Closed-form `U(τ₂) = −e^{−iφ}(|11⟩⟨11| + |B⟩⟨B|) + |D⟩⟨D|` on `{|11⟩, |B⟩, |D⟩}`.
    pub fn cycle_propagator(&self) -> CMatrix {
        let p = -Complex64::from_polar(1.0, -self.phi);
        CMatrix::from_diagonal(&crate::hilbert::CVector::from_vec(vec![p, p, ONE]))
    }

    /// Factor picked up by `|11⟩` per cycle in the sideband frame, where
    /// `|11⟩` sits `Δ` above `|02⟩, |20⟩`: `e^{iΔτ₂}·(−e^{−iφ}) = −e^{iφ}`.
    pub fn sideband_cycle_factor(&self) -> Complex64 {
        -Complex64::from_polar(1.0, self.phi)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HolonomyDiagnostics {
    /// `max |(1 − P)U(τ₂)P|` for `P` onto `{|11⟩, |B⟩}`.
    pub cyclicity_11b: f64,
    /// Same for `{|B⟩, |D⟩}`.
    pub cyclicity_bd: f64,
    /// `max |∫⟨m(t)|H|r(t)⟩dt|` over `m, r ∈ {|B⟩, |D⟩}`.
    pub dynamical_bd: f64,
    /// Same over `{|11⟩, |B⟩}`; equals `τ₂·max(Δ, 2𝒢)`, not zero.
    pub dynamical_11b: f64,
    /// `max_t (1 − |⟨D|U(t)|D⟩|²)`.
    pub dark_leakage: f64,
}

/// Numerical holonomy conditions along one cycle (Simpson rule on `nodes`
/// points, rounded up to odd).
pub fn nhqc_holonomy(cycle: &NhqcCycle, nodes: usize) -> HolonomyDiagnostics {
    let n = (nodes.max(3) / 2) * 2 + 1;
    let h2 = cp_block(cycle.delta, cycle.g_eff).at(0.0);
    let dt = cycle.tau2 / (n - 1) as f64;
    let mut dyn_matrix = CMatrix::zeros(3, 3);
    let mut dark_leakage: f64 = 0.0;
    for k in 0..n {
        let u = propagator(&h2, k as f64 * dt);
        let w = if k == 0 || k == n - 1 {
            1.0
        } else if k % 2 == 1 {
            4.0
        } else {
            2.0
        };
        dyn_matrix += (u.adjoint() * &h2 * &u) * real(w * dt / 3.0);
        dark_leakage = dark_leakage.max(1.0 - u[(2, 2)].norm_sqr());
    }
    let u = propagator(&h2, cycle.tau2);
    let leak = |inside: &[usize]| {
        let mut worst: f64 = 0.0;
        for &col in inside {
            for row in 0..3 {
                if !inside.contains(&row) {
                    worst = worst.max(u[(row, col)].norm());
                }
            }
        }
        worst
    };
    let block_max = |idx: &[usize]| {
        let mut worst: f64 = 0.0;
        for &m in idx {
            for &r in idx {
                worst = worst.max(dyn_matrix[(m, r)].norm());
            }
        }
        worst
    };
    HolonomyDiagnostics {
        cyclicity_11b: leak(&[0, 1]),
        cyclicity_bd: leak(&[1, 2]),
        dynamical_bd: block_max(&[1, 2]),
        dynamical_11b: block_max(&[0, 1]),
        dark_leakage,
    }
}

/// NNGQC path on `{|01⟩, |10⟩}`: `α(t) = α₀ + α̇t`, constant `η`, drive
/// phase `φ(t) = η(t)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeometricPath {
    pub g_eff: f64,
    pub alpha_start: f64,
    pub alpha_end: f64,
    pub eta_start: f64,
    pub eta_end: f64,
    pub duration: f64,
    pub gamma_total: f64,
}

impl GeometricPath {
    pub fn alpha_at(&self, t: f64) -> f64 {
        self.alpha_start + (self.alpha_end - self.alpha_start) * t / self.duration
    }

    pub fn eta_at(&self, t: f64) -> f64 {
        self.eta_start + (self.eta_end - self.eta_start) * t / self.duration
    }

    pub fn drive_phase_at(&self, t: f64) -> f64 {
        self.eta_at(t)
    }

    /// `𝒢 cos α(t) cos[φ(t) − π/2 − η(t)]`.
    pub fn dynamical_integrand(&self, t: f64) -> f64 {
        self.g_eff * self.alpha_at(t).cos() * (self.drive_phase_at(t) - FRAC_PI_2 - self.eta_at(t)).cos()
    }

    /// Auxiliary states over `(|01⟩, |10⟩)`:
    /// `|φ₁⟩ = cos(α/2)e^{−iη/2}|01⟩ + sin(α/2)e^{iη/2}|10⟩`,
    /// `|φ₂⟩ = sin(α/2)e^{−iη/2}|01⟩ − cos(α/2)e^{iη/2}|10⟩`.
    pub fn auxiliary_states(&self, t: f64) -> [[Complex64; 2]; 2] {
        let (s, c) = (0.5 * self.alpha_at(t)).sin_cos();
        let e = Complex64::from_polar(1.0, 0.5 * self.eta_at(t));
        [[e.conj() * c, e * s], [e.conj() * s, -e * c]]
    }

    /// `α_± = α(T) ± α(0)`, `η_± = η(T) ± η(0)`.
    pub fn endpoint_sums(&self) -> (f64, f64, f64, f64) {
        (
            self.alpha_end + self.alpha_start,
            self.alpha_end - self.alpha_start,
            self.eta_end + self.eta_start,
            self.eta_end - self.eta_start,
        )
    }

    /// `½∫(1 − cos α) η̇ dt` by the midpoint rule.
    pub fn geometric_phase(&self, nodes: usize) -> f64 {
        let h = self.duration / nodes as f64;
        let eta_dot = (self.eta_end - self.eta_start) / self.duration;
        (0..nodes)
            .map(|k| 0.5 * (1.0 - self.alpha_at((k as f64 + 0.5) * h).cos()) * eta_dot * h)
            .sum()
    }

    pub fn drive(&self) -> Result<PhaseProfile> {
        PhaseProfile::constant(self.eta_start, self.duration)
    }
}

/// Path with `α: π/2 → −π/2` at `|α̇| = 2𝒢` and `η = φ = −π/2`, so
/// `τ₁ = π/(2𝒢)`.
pub fn synthesize_nngqc_iswap(g_eff: f64) -> Result<(GeometricPath, f64)> {
    if !(g_eff > 0.0 && g_eff.is_finite()) {
        return Err(Error::InvalidParameter(format!("𝒢 must be > 0, got {g_eff}")));
    }
    let tau1 = PI / (2.0 * g_eff);
    let mut path = GeometricPath {
        g_eff,
        alpha_start: FRAC_PI_2,
        alpha_end: -FRAC_PI_2,
        eta_start: -FRAC_PI_2,
        eta_end: -FRAC_PI_2,
        duration: tau1,
        gamma_total: 0.0,
    };
    path.gamma_total = path.geometric_phase(1000);
    Ok((path, tau1))
}

/// NGQC segments: areas π/4, π/2, π/4 with effective drive phases
/// π, 3π/2, π (axis azimuths π/2, π, π/2).
pub fn ngqc_drive(g_eff: f64) -> Result<PhaseProfile> {
    if !(g_eff > 0.0 && g_eff.is_finite()) {
        return Err(Error::InvalidParameter(format!("𝒢 must be > 0, got {g_eff}")));
    }
    PhaseProfile::new(
        [(FRAC_PI_4, PI), (FRAC_PI_2, 1.5 * PI), (FRAC_PI_4, PI)]
            .iter()
            .map(|&(area, phase)| PhaseSegment {
                duration: area / g_eff,
                phase,
            })
            .collect(),
    )
}

/// Closed-form `{|01⟩, |10⟩}` propagator of a piecewise drive:
/// `∏ [cos θ_k − i sin θ_k (cos p_k σx + sin p_k σy)]`, `θ_k = 𝒢T_k`, `p_k = φ_k − π/2`.
pub fn iswap_block_propagator(g_eff: f64, drive: &PhaseProfile) -> CMatrix {
    let mut u = CMatrix::identity(2, 2);
    for s in drive.segments() {
        let theta = g_eff * s.duration;
        let p = s.phase - FRAC_PI_2;
        let (st, ct) = theta.sin_cos();
        // −i sin θ (cos p σx + sin p σy): ⟨01|·|10⟩ = −i sin θ e^{−ip}
        let off_upper = Complex64::new(0.0, -st) * Complex64::from_polar(1.0, -p);
        let off_lower = Complex64::new(0.0, -st) * Complex64::from_polar(1.0, p);
        let step = CMatrix::from_row_slice(2, 2, &[real(ct), off_upper, off_lower, real(ct)]);
        u = step * u;
    }
    u
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scheme {
    #[serde(rename = "NHQC-CP")]
    NhqcCp,
    #[serde(rename = "NNGQC-iSWAP")]
    NngqcIswap,
    #[serde(rename = "NGQC-iSWAP")]
    NgqcIswap,
    #[serde(rename = "parallel-fSim-NNGQC")]
    ParallelFsimNngqc,
    #[serde(rename = "parallel-fSim-NGQC")]
    ParallelFsimNgqc,
}

impl Scheme {
    pub fn is_parallel(self) -> bool {
        matches!(self, Scheme::ParallelFsimNngqc | Scheme::ParallelFsimNgqc)
    }

    pub fn name(self) -> &'static str {
        match self {
            Scheme::NhqcCp => "NHQC-CP",
            Scheme::NngqcIswap => "NNGQC-iSWAP",
            Scheme::NgqcIswap => "NGQC-iSWAP",
            Scheme::ParallelFsimNngqc => "parallel-fSim-NNGQC",
            Scheme::ParallelFsimNgqc => "parallel-fSim-NGQC",
        }
    }
}

/// Which iSWAP construction a parallel schedule uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PathKind {
    Nngqc,
    Ngqc,
}

impl PathKind {
    pub fn parallel_scheme(self) -> Scheme {
        match self {
            PathKind::Nngqc => Scheme::ParallelFsimNngqc,
            PathKind::Ngqc => Scheme::ParallelFsimNgqc,
        }
    }

    pub fn drive(self, g_eff: f64) -> Result<PhaseProfile> {
        match self {
            PathKind::Nngqc => synthesize_nngqc_iswap(g_eff)?.0.drive(),
            PathKind::Ngqc => ngqc_drive(g_eff),
        }
    }
}

impl std::str::FromStr for PathKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "nngqc" => Ok(PathKind::Nngqc),
            "ngqc" => Ok(PathKind::Ngqc),
            other => Err(Error::Config(format!("unknown scheme `{other}` (nngqc|ngqc)"))),
        }
    }
}

/// Single-qubit Z frame relating a computational unitary to `fSim(ϑ, Ξ)`.
///
/// The dressed target is `e^{iG}` times
/// `diag(1, c e^{ib}, c e^{ia}, e^{i(a+b+Ξ)})` with `−is e^{is₁}` at
/// `⟨01|·|10⟩` and `−is e^{is₂}` at `⟨10|·|01⟩`, subject to `a + b = s₁ + s₂`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct LocalPhases {
    pub global: f64,
    pub a: f64,
    pub b: f64,
    pub s1: f64,
    pub s2: f64,
}

impl LocalPhases {
    pub fn dress(&self, vartheta: f64, xi: f64) -> CMatrix {
        let (s, c) = vartheta.sin_cos();
        let e = |x: f64| Complex64::from_polar(1.0, x);
        let mis = Complex64::new(0.0, -s);
        let mut m = CMatrix::zeros(4, 4);
        m[(0, 0)] = ONE;
        m[(1, 1)] = e(self.b) * c;
        m[(2, 2)] = e(self.a) * c;
        m[(1, 2)] = e(self.s1) * mis;
        m[(2, 1)] = e(self.s2) * mis;
        m[(3, 3)] = e(self.a + self.b + xi);
        m * e(self.global)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseStrip {
    pub xi: f64,
    pub frame: LocalPhases,
    /// `1 − |Tr(T†U)|²/16` against the dressed target.
    pub infidelity: f64,
}

/// Match `u` to `fSim(ϑ, Ξ)` up to single-qubit Z phases, closed form.
pub fn strip_local_phases(u: &CMatrix, vartheta: f64) -> Result<PhaseStrip> {
    if u.nrows() != 4 || u.ncols() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: u.nrows(),
        });
    }
    let (s, c) = vartheta.sin_cos();
    let g = u[(0, 0)].arg();
    let sgn = |x: f64| if x < 0.0 { -1.0 } else { 1.0 };
    let off = |z: Complex64| principal_phase((z * I * sgn(s)).arg() - g);
    let diag = |z: Complex64| principal_phase((z * sgn(c)).arg() - g);
    let (mut s1, mut s2) = (off(u[(1, 2)]), off(u[(2, 1)]));
    let (mut a, mut b);
    if c.abs() >= s.abs() {
        a = diag(u[(2, 2)]);
        b = diag(u[(1, 1)]);
        let e = principal_phase(a + b - s1 - s2);
        s1 += 0.5 * e;
        s2 += 0.5 * e;
    } else if c.abs() > 1e-9 {
        a = diag(u[(2, 2)]);
        b = diag(u[(1, 1)]);
        let e = principal_phase(s1 + s2 - a - b);
        a += 0.5 * e;
        b += 0.5 * e;
    } else {
        a = 0.5 * (s1 + s2);
        b = a;
    }
    let xi = wrap_phase(u[(3, 3)].arg() - g - a - b);
    let frame = LocalPhases {
        global: principal_phase(g),
        a: principal_phase(a),
        b: principal_phase(b),
        s1: principal_phase(s1),
        s2: principal_phase(s2),
    };
    let target = frame.dress(vartheta, xi);
    let overlap = (target.adjoint() * u).trace().norm_sqr() / 16.0;
    Ok(PhaseStrip {
        xi,
        frame,
        infidelity: (1.0 - overlap).max(0.0),
    })
}

mod matrix_serde {
    use super::*;
    use serde::{Deserializer, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Repr {
        re: Vec<Vec<f64>>,
        im: Vec<Vec<f64>>,
    }

    pub fn serialize<S: Serializer>(m: &CMatrix, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows = |f: fn(&Complex64) -> f64| {
            (0..m.nrows())
                .map(|i| (0..m.ncols()).map(|j| f(&m[(i, j)])).collect())
                .collect()
        };
        Repr {
            re: rows(|z| z.re),
            im: rows(|z| z.im),
        }
        .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<CMatrix, D::Error> {
        use serde::de::Error as _;
        let r = Repr::deserialize(d)?;
        let n = r.re.len();
        if r.im.len() != n || r.re.iter().chain(&r.im).any(|row| row.len() != n) {
            return Err(D::Error::custom("unitary must be square with matching re/im shapes"));
        }
        Ok(CMatrix::from_fn(n, n, |i, j| Complex64::new(r.re[i][j], r.im[i][j])))
    }
}

/// A synthesized gate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GatePlan {
    pub scheme: Scheme,
    pub unit_system: UnitSystem,
    pub g_eff: f64,
    /// `Δ = α` of the two-excitation block; absent for iSWAP-only plans.
    pub detuning: Option<f64>,
    /// Effective (sideband-frame) drive phases.
    pub drive: PhaseProfile,
    /// Lab-frame tone realising `drive`, when the coupling is parametric.
    pub tone: Option<ModulationTone>,
    pub duration: f64,
    /// iSWAP path time `τ₁`.
    pub iswap_time: f64,
    /// NHQC cycle time `τ₂`.
    pub cycle_time: Option<f64>,
    pub cycle_counts: (usize, usize),
    pub target: FsimTarget,
    pub local_phases: LocalPhases,
    #[serde(with = "matrix_serde")]
    pub predicted_unitary: CMatrix,
}

impl GatePlan {
    pub fn validate(&self) -> Result<()> {
        if !(self.duration > 0.0 && self.duration.is_finite()) {
            return Err(Error::Config(format!("plan duration must be > 0, got {}", self.duration)));
        }
        if !(self.g_eff > 0.0) {
            return Err(Error::Config("plan coupling must be > 0".into()));
        }
        if self.predicted_unitary.nrows() != 4 {
            return Err(Error::Config("predicted unitary must be 4×4".into()));
        }
        let err = unitarity_error(&self.predicted_unitary);
        if err > 1e-10 {
            return Err(Error::Config(format!("predicted unitary off by {err:e} from unitary")));
        }
        if (self.drive.duration() - self.duration).abs() > 1e-9 * self.duration {
            return Err(Error::Config("drive length differs from plan duration".into()));
        }
        if self.scheme.is_parallel() {
            let tau2 = self
                .cycle_time
                .ok_or_else(|| Error::Config("parallel plan without cycle time".into()))?;
            let (n1, n2) = self.cycle_counts;
            let lhs = n1 as f64 * self.iswap_time;
            let rhs = n2 as f64 * tau2;
            if (lhs - rhs).abs() > 1e-9 * lhs {
                return Err(Error::Incommensurate { lhs, rhs });
            }
            if self.detuning.is_none() {
                return Err(Error::Config("parallel plan without detuning".into()));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let plan: GatePlan = serde_json::from_str(s).map_err(|e| Error::Config(format!("gate plan: {e}")))?;
        plan.validate()?;
        Ok(plan)
    }

    /// Sideband-frame model for simulating this plan, with the coupling
    /// scaled by `1 + zeta` and qubit B detuned by `detuning_b`.
    pub fn sideband_model(&self, alpha: [f64; 2], detuning_b: f64, zeta: f64) -> SidebandModel {
        SidebandModel {
            g_eff: self.g_eff * (1.0 + zeta),
            alpha,
            detuning_b,
            phases: self.drive.clone(),
        }
    }

    /// The plan's own idea of the anharmonicity, for standalone simulation.
    pub fn nominal_alpha(&self) -> Option<[f64; 2]> {
        self.detuning.map(|d| [d, d])
    }
}

/// Embed a 2×2 `{|01⟩,|10⟩}` block and a `|11⟩` factor into the
/// computational 4×4.
fn computational(block: &CMatrix, eleven: Complex64) -> CMatrix {
    let mut u = CMatrix::zeros(4, 4);
    u[(0, 0)] = ONE;
    u.view_mut((1, 1), (2, 2)).copy_from(block);
    u[(3, 3)] = eleven;
    u
}

/// Standalone NGQC iSWAP; `|11⟩` is assumed far detuned (left at 1).
pub fn synthesize_ngqc_iswap(g_eff: f64) -> Result<GatePlan> {
    let drive = ngqc_drive(g_eff)?;
    let block = iswap_block_propagator(g_eff, &drive);
    let u = computational(&block, ONE);
    let strip = strip_local_phases(&u, FRAC_PI_2)?;
    Ok(GatePlan {
        scheme: Scheme::NgqcIswap,
        unit_system: UnitSystem::DimensionlessG1,
        g_eff,
        detuning: None,
        duration: drive.duration(),
        iswap_time: drive.duration(),
        drive,
        tone: None,
        cycle_time: None,
        cycle_counts: (1, 0),
        target: FsimTarget {
            vartheta: FRAC_PI_2,
            xi: strip.xi,
        },
        local_phases: strip.frame,
        predicted_unitary: u,
    })
}

/// How the exchange coupling is produced.
#[derive(Clone, Debug, PartialEq)]
pub enum Coupling<'a> {
    /// `ω_A = ω_B`, `𝒢 = g`, drive phase is a free control.
    Resonant,
    /// Parametric tone with `ω_A − ω_B = ν`, `𝒢 = J₁(ε/ν) g`; only ε and ν
    /// are read, phases are solved for.
    Tone { epsilon: f64, nu: f64, _marker: std::marker::PhantomData<&'a ()> },
}

impl Coupling<'_> {
    pub fn tone(epsilon: f64, nu: f64) -> Self {
        Coupling::Tone {
            epsilon,
            nu,
            _marker: std::marker::PhantomData,
        }
    }
}

/// One drive that runs `n₁` iSWAP paths and `n₂` NHQC cycles together.
pub fn schedule_parallel_fsim(
    model: &EffectiveModel,
    coupling: &Coupling,
    kind: PathKind,
    n1: usize,
    n2: usize,
) -> Result<GatePlan> {
    if n1 == 0 || n2 == 0 {
        return Err(Error::InvalidParameter("cycle counts must be positive".into()));
    }
    let g_eff = match coupling {
        Coupling::Resonant => {
            SidebandModel::resonant(model, PhaseProfile::constant(0.0, 1.0)?)?;
            model.g
        }
        Coupling::Tone { epsilon, nu, .. } => {
            let probe = ModulationTone::new(*epsilon, *nu, PhaseProfile::constant(0.0, 1.0)?)?;
            sideband_coupling(&probe, model)?
        }
    };
    let [alpha_a, alpha_b] = model.alpha;
    if (alpha_a - alpha_b).abs() > 1e-12 * alpha_a.abs().max(alpha_b.abs()) {
        return Err(Error::UnequalAnharmonicity { alpha_a, alpha_b });
    }
    let cycle = synthesize_nhqc_cp(g_eff, alpha_a)?;
    let single = kind.drive(g_eff)?;
    let tau1 = single.duration();
    let lhs = n1 as f64 * tau1;
    let rhs = n2 as f64 * cycle.tau2;
    if (lhs - rhs).abs() > COMMENSURABILITY_TOL * tau1 {
        return Err(Error::Incommensurate { lhs, rhs });
    }
    // each constant-phase segment must close whole cycles so |11⟩ returns
    // before the phase jumps
    for s in single.segments() {
        let k = s.duration / cycle.tau2;
        if (k - k.round()).abs() > COMMENSURABILITY_TOL || k.round() < 1.0 {
            return Err(Error::Incommensurate {
                lhs: s.duration,
                rhs: k.round() * cycle.tau2,
            });
        }
    }
    let drive = single.repeated(n1)?;
    let tone = match coupling {
        Coupling::Resonant => None,
        Coupling::Tone { epsilon, nu, .. } => Some(ModulationTone::realizing(*epsilon, *nu, &drive)?),
    };

    let block = iswap_block_propagator(g_eff, &drive);
    let eleven = cycle.sideband_cycle_factor().powi(n2 as i32);
    let predicted = computational(&block, eleven);

    // the reported conditional phase comes from propagating the ideal model
    let ideal = SidebandModel {
        g_eff,
        alpha: model.alpha,
        detuning_b: 0.0,
        phases: drive.clone(),
    };
    let u_full = exact_propagator(&ideal.hamiltonian(), drive.duration())?;
    let u_comp = submatrix(&u_full, &COMPUTATIONAL_INDICES);
    let mismatch = crate::hilbert::max_abs_diff(&u_comp, &predicted);
    if mismatch > 1e-8 {
        return Err(Error::Numerical(format!(
            "closed-form plan unitary differs from propagation by {mismatch:e}"
        )));
    }
    let strip = strip_local_phases(&u_comp, FRAC_PI_2)?;

    Ok(GatePlan {
        scheme: kind.parallel_scheme(),
        unit_system: model.unit_system,
        g_eff,
        detuning: Some(alpha_a),
        duration: drive.duration(),
        drive,
        tone,
        iswap_time: tau1,
        cycle_time: Some(cycle.tau2),
        cycle_counts: (n1, n2),
        target: FsimTarget {
            vartheta: FRAC_PI_2,
            xi: strip.xi,
        },
        local_phases: strip.frame,
        predicted_unitary: predicted,
    })
}

/// Smallest `(n₁, n₂)` for `kind` at anharmonicity `α = 4√3 𝒢`.
pub fn default_cycle_counts(kind: PathKind) -> (usize, usize) {
    match kind {
        PathKind::Nngqc => (1, 2),
        PathKind::Ngqc => (1, 4),
    }
}

/// `α = 4√3 𝒢`, the anharmonicity for which `τ₁ = 2τ₂`.
pub fn commensurate_anharmonicity(g_eff: f64) -> f64 {
    4.0 * 3f64.sqrt() * g_eff
}
