//! System Hamiltonians at four levels of approximation.
//!
//! * [`Tier::LabFull`]: Duffing oscillators with full exchange (counter-rotating
//!   terms kept) and an optional flux modulation of qubit B.
//! * [`Tier::RwaSixState`]: bare-energy matrix over the ≤ 2 excitation states.
//! * [`Tier::EffectiveBlock`]: rotating-frame blocks over `{|11⟩, |B⟩, |D⟩}` or
//!   `{|01⟩, |10⟩}`.
//! * [`Tier::EffectiveSideband`]: the full 9-dim two-qutrit model in the
//!   sideband frame, with piecewise-constant drive phase.
//!
//! Drive phase convention: the effective phase `φ` enters as
//! `⟨10|H|01⟩ = 𝒢 e^{i(φ − π/2)}`.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bessel::bessel_j1;
use crate::device::{bisect, EffectiveModel};
use crate::error::{Error, Result};
use crate::hilbert::{
    embed, hermiticity_error, ladder, number, CMatrix, HilbertSpace, Operator, ZERO,
};

/// Elements oscillating faster than `cutoff × coupling` are dropped by
/// [`rotating_wave`].
pub const DEFAULT_RWA_CUTOFF: f64 = 20.0;
/// Allowed `|ω_A − ω_B − ν|` in units of the sideband coupling.
pub const RESONANCE_TOLERANCE: f64 = 1e-2;

pub const SIX_STATE_LABELS: [&str; 6] = ["00", "01", "02", "10", "11", "20"];
pub const CP_BLOCK_LABELS: [&str; 3] = ["11", "B", "D"];
pub const ISWAP_BLOCK_LABELS: [&str; 2] = ["01", "10"];

/// Wrap an angle to `[0, 2π)`.
pub fn wrap_phase(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Wrap an angle to `(−π, π]`.
pub fn principal_phase(x: f64) -> f64 {
    let r = wrap_phase(x);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseSegment {
    pub duration: f64,
    pub phase: f64,
}

/// Piecewise-constant phase `t ↦ φ(t)` on `[0, T]`; the last value holds
/// beyond `T`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<PhaseSegment>", into = "Vec<PhaseSegment>")]
pub struct PhaseProfile {
    segments: Vec<PhaseSegment>,
}

impl TryFrom<Vec<PhaseSegment>> for PhaseProfile {
    type Error = Error;

    fn try_from(segments: Vec<PhaseSegment>) -> Result<Self> {
        Self::new(segments)
    }
}

impl From<PhaseProfile> for Vec<PhaseSegment> {
    fn from(p: PhaseProfile) -> Self {
        p.segments
    }
}

impl PhaseProfile {
    pub fn new(segments: Vec<PhaseSegment>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::InvalidParameter("phase profile needs a segment".into()));
        }
        for s in &segments {
            if !(s.duration > 0.0 && s.duration.is_finite()) || !s.phase.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "bad phase segment: duration {}, phase {}",
                    s.duration, s.phase
                )));
            }
        }
        Ok(Self { segments })
    }

    pub fn constant(phase: f64, duration: f64) -> Result<Self> {
        Self::new(vec![PhaseSegment { duration, phase }])
    }

    pub fn segments(&self) -> &[PhaseSegment] {
        &self.segments
    }

    pub fn duration(&self) -> f64 {
        self.segments.iter().map(|s| s.duration).sum()
    }

    /// Segment start times followed by the end time.
    pub fn boundaries(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.segments.len() + 1);
        let mut t = 0.0;
        out.push(t);
        for s in &self.segments {
            t += s.duration;
            out.push(t);
        }
        out
    }

    /// Index of the segment containing `t` (right-continuous).
    pub fn segment_index(&self, t: f64) -> usize {
        let mut end = 0.0;
        for (k, s) in self.segments.iter().enumerate() {
            end += s.duration;
            if t < end {
                return k;
            }
        }
        self.segments.len() - 1
    }

    pub fn phase_at(&self, t: f64) -> f64 {
        self.segments[self.segment_index(t)].phase
    }

    /// The profile played `n` times in a row.
    pub fn repeated(&self, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("repeat count must be positive".into()));
        }
        let segments = (0..n).flat_map(|_| self.segments.iter().copied()).collect();
        Self::new(segments)
    }

    pub fn map_phases(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            segments: self
                .segments
                .iter()
                .map(|s| PhaseSegment {
                    duration: s.duration,
                    phase: f(s.phase),
                })
                .collect(),
        }
    }

    pub fn scale_time(&self, factor: f64) -> Result<Self> {
        Self::new(
            self.segments
                .iter()
                .map(|s| PhaseSegment {
                    duration: s.duration * factor,
                    phase: s.phase,
                })
                .collect(),
        )
    }
}

/// Flux modulation `ω_B(t) = ω_B + ε sin(νt + φ(t))`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModulationTone {
    pub epsilon: f64,
    pub nu: f64,
    pub phase: PhaseProfile,
}

impl ModulationTone {
    pub fn new(epsilon: f64, nu: f64, phase: PhaseProfile) -> Result<Self> {
        if !(epsilon >= 0.0 && epsilon.is_finite()) {
            return Err(Error::InvalidParameter(format!("ε must be ≥ 0, got {epsilon}")));
        }
        if !(nu > 0.0 && nu.is_finite()) {
            return Err(Error::InvalidParameter(format!("ν must be > 0, got {nu}")));
        }
        Ok(Self { epsilon, nu, phase })
    }

    pub fn beta(&self) -> f64 {
        self.epsilon / self.nu
    }

    pub fn duration(&self) -> f64 {
        self.phase.duration()
    }

    /// Instantaneous frequency shift `ε sin(νt + φ(t))`.
    pub fn shift_at(&self, t: f64) -> f64 {
        self.epsilon * (self.nu * t + self.phase.phase_at(t)).sin()
    }

    fn shift_in_segment(&self, k: usize, t: f64) -> f64 {
        self.epsilon * (self.nu * t + self.phase.segments()[k].phase).sin()
    }

    /// `Θ(t) = ∫₀ᵗ ε sin(νs + φ(s)) ds`.
    pub fn accumulated_phase(&self, t: f64) -> f64 {
        let beta = self.beta();
        let mut acc = 0.0;
        let mut start = 0.0;
        let n = self.phase.segments().len();
        for (k, s) in self.phase.segments().iter().enumerate() {
            let end = if k + 1 == n {
                f64::INFINITY
            } else {
                start + s.duration
            };
            let upper = t.min(end);
            if upper <= start {
                break;
            }
            acc += beta * ((self.nu * start + s.phase).cos() - (self.nu * upper + s.phase).cos());
            start = end;
        }
        acc
    }

    /// Effective sideband phase of each segment after the Jacobi–Anger
    /// reduction: `π − φ_k − β cos(νT_k + φ_k) − Θ(T_k)`, `T_k` the segment start.
    pub fn effective_phases(&self) -> Vec<f64> {
        let beta = self.beta();
        let starts = self.phase.boundaries();
        self.phase
            .segments()
            .iter()
            .zip(starts)
            .map(|(s, t0)| {
                let c = beta * (self.nu * t0 + s.phase).cos() + self.accumulated_phase(t0);
                wrap_phase(PI - s.phase - c)
            })
            .collect()
    }

    pub fn effective_profile(&self) -> PhaseProfile {
        let phases = self.effective_phases();
        PhaseProfile {
            segments: self
                .phase
                .segments()
                .iter()
                .zip(phases)
                .map(|(s, phase)| PhaseSegment {
                    duration: s.duration,
                    phase,
                })
                .collect(),
        }
    }

    /// Lab phases whose sideband reduction reproduces `effective`.
    pub fn realizing(epsilon: f64, nu: f64, effective: &PhaseProfile) -> Result<Self> {
        let beta = epsilon / nu;
        let mut segments = Vec::with_capacity(effective.segments().len());
        let mut tone = Self::new(epsilon, nu, PhaseProfile::constant(0.0, 1.0)?)?;
        let mut t0 = 0.0;
        for target in effective.segments() {
            // Θ(T_k) only depends on earlier segments
            let theta0 = if segments.is_empty() {
                0.0
            } else {
                tone.accumulated_phase(t0)
            };
            let rhs = PI - target.phase - theta0;
            let f = |phi: f64| phi + beta * (nu * t0 + phi).cos();
            // f(φ + 2π) = f(φ) + 2π, so a root of f = rhs (mod 2π) lies in [0, 2π)
            let f0 = f(0.0);
            let shifted = f0 + wrap_phase(rhs - f0);
            let phi = bisect(|x| f(x) - shifted, 0.0, TAU, 1e-14)?;
            segments.push(PhaseSegment {
                duration: target.duration,
                phase: phi,
            });
            tone = Self::new(epsilon, nu, PhaseProfile::new(segments.clone())?)?;
            t0 += target.duration;
        }
        Ok(tone)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Tier {
    LabFull,
    RwaSixState,
    EffectiveBlock,
    EffectiveSideband,
}

#[derive(Clone, Debug)]
pub enum Generator {
    Static(CMatrix),
    /// `pieces[k]` acts on `[boundaries[k], boundaries[k+1])`.
    Piecewise {
        boundaries: Vec<f64>,
        pieces: Vec<CMatrix>,
    },
    /// `base + ε sin(νt + φ(t)) · modulated`.
    Modulated {
        base: CMatrix,
        modulated: CMatrix,
        tone: ModulationTone,
    },
}

#[derive(Clone, Debug)]
pub struct HamiltonianModel {
    pub tier: Tier,
    space: HilbertSpace,
    labels: Vec<String>,
    generator: Generator,
    pub frame: String,
}

impl HamiltonianModel {
    pub fn new(
        tier: Tier,
        space: HilbertSpace,
        labels: Vec<String>,
        generator: Generator,
        frame: impl Into<String>,
    ) -> Result<Self> {
        let dim = space.dim();
        if labels.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: labels.len(),
            });
        }
        let mats: Vec<&CMatrix> = match &generator {
            Generator::Static(h) => vec![h],
            Generator::Piecewise { boundaries, pieces } => {
                if boundaries.len() != pieces.len() + 1 || pieces.is_empty() {
                    return Err(Error::InvalidParameter(
                        "piecewise generator needs one more boundary than pieces".into(),
                    ));
                }
                pieces.iter().collect()
            }
            Generator::Modulated {
                base, modulated, ..
            } => vec![base, modulated],
        };
        for m in mats {
            if m.nrows() != dim || m.ncols() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: m.nrows(),
                });
            }
            let err = hermiticity_error(m);
            if err > 1e-10 {
                return Err(Error::NotHermitian(err));
            }
        }
        Ok(Self {
            tier,
            space,
            labels,
            generator,
            frame: frame.into(),
        })
    }

    pub fn space(&self) -> &HilbertSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::LabelNotInBasis(label.into()))
    }

    pub fn generator(&self) -> &Generator {
        &self.generator
    }

    pub fn is_time_independent(&self) -> bool {
        match &self.generator {
            Generator::Static(_) => true,
            Generator::Piecewise { pieces, .. } => pieces.len() == 1,
            Generator::Modulated { tone, .. } => tone.epsilon == 0.0,
        }
    }

    fn piece_count(&self) -> usize {
        match &self.generator {
            Generator::Static(_) => 1,
            Generator::Piecewise { pieces, .. } => pieces.len(),
            Generator::Modulated { tone, .. } => tone.phase.segments().len(),
        }
    }

    fn piece_start(&self, k: usize) -> f64 {
        match &self.generator {
            Generator::Static(_) => 0.0,
            Generator::Piecewise { boundaries, .. } => boundaries[k],
            Generator::Modulated { tone, .. } => tone.phase.boundaries()[k],
        }
    }

    pub fn piece_index(&self, t: f64) -> usize {
        (1..self.piece_count())
            .rev()
            .find(|&k| t >= self.piece_start(k))
            .unwrap_or(0)
    }

    /// `H(t)` evaluated with the formula of piece `k`, so integrators can
    /// stay on one side of a discontinuity.
    pub fn at_piece(&self, k: usize, t: f64) -> CMatrix {
        match &self.generator {
            Generator::Static(h) => h.clone(),
            Generator::Piecewise { pieces, .. } => pieces[k].clone(),
            Generator::Modulated {
                base,
                modulated,
                tone,
            } => base + modulated * Complex64::new(tone.shift_in_segment(k, t), 0.0),
        }
    }

    pub fn at(&self, t: f64) -> CMatrix {
        self.at_piece(self.piece_index(t), t)
    }

    pub fn operator_at(&self, t: f64) -> Operator {
        Operator::new(self.space.clone(), self.at(t)).expect("dimension checked at construction")
    }

    /// `[start, end, piece]` intervals covering `[0, t_final]`.
    pub fn intervals(&self, t_final: f64) -> Vec<(f64, f64, usize)> {
        let n = self.piece_count();
        let mut out = Vec::new();
        for k in 0..n {
            let start = self.piece_start(k);
            let end = if k + 1 == n {
                t_final
            } else {
                self.piece_start(k + 1).min(t_final)
            };
            if start >= t_final {
                break;
            }
            if end > start {
                out.push((start, end, k));
            }
        }
        out
    }

    /// Scale the drive-independent part and drive part together (exact for
    /// `Static` and `Piecewise`).
    pub fn scaled(&self, factor: f64) -> Self {
        let s = Complex64::new(factor, 0.0);
        let generator = match &self.generator {
            Generator::Static(h) => Generator::Static(h * s),
            Generator::Piecewise { boundaries, pieces } => Generator::Piecewise {
                boundaries: boundaries.clone(),
                pieces: pieces.iter().map(|p| p * s).collect(),
            },
            Generator::Modulated {
                base,
                modulated,
                tone,
            } => Generator::Modulated {
                base: base * s,
                modulated: modulated * s,
                tone: tone.clone(),
            },
        };
        Self {
            generator,
            ..self.clone()
        }
    }
}

fn two_qutrit_labels(space: &HilbertSpace) -> Vec<String> {
    (0..space.dim()).map(|i| space.label(i)).collect()
}

/// Static part of the lab-frame model: Duffing terms plus
/// `g(a†b + ab† − a†b† − ab)`.
pub fn lab_static(model: &EffectiveModel) -> CMatrix {
    let space = HilbertSpace::two_qutrits();
    let a = ladder(&space, 0).expect("site 0").into_matrix();
    let b = ladder(&space, 1).expect("site 1").into_matrix();
    let ad = a.adjoint();
    let bd = b.adjoint();
    let c = |x: f64| Complex64::new(x, 0.0);
    let duffing = |op: &CMatrix, opd: &CMatrix, omega: f64, alpha: f64| {
        opd * op * c(omega) - opd * opd * op * op * c(alpha / 2.0)
    };
    duffing(&a, &ad, model.omega[0], model.alpha[0])
        + duffing(&b, &bd, model.omega[1], model.alpha[1])
        + (&ad * &b + &a * &bd - &ad * &bd - &a * &b) * c(model.g)
}

/// Lab-frame model with counter-rotating terms and optional modulation.
pub fn build_lab_frame(model: &EffectiveModel, tone: Option<&ModulationTone>) -> Result<HamiltonianModel> {
    let space = HilbertSpace::two_qutrits();
    let labels = two_qutrit_labels(&space);
    let base = lab_static(model);
    let generator = match tone {
        None => Generator::Static(base),
        Some(tone) => Generator::Modulated {
            base,
            modulated: number(&space, 1)?.into_matrix(),
            tone: tone.clone(),
        },
    };
    HamiltonianModel::new(Tier::LabFull, space, labels, generator, "lab")
}

/// Frame phases `θ_n(t)` taking lab-frame amplitudes to the sideband frame:
/// `ψ_rot = diag(e^{iθ}) ψ_lab`, with qubit A rotating at `ω_A`, qubit B at
/// `ω_A − ν` plus the modulation integral.
pub fn sideband_frame_phases(model: &EffectiveModel, tone: &ModulationTone, t: f64) -> Vec<f64> {
    let space = HilbertSpace::two_qutrits();
    let theta = tone.accumulated_phase(t);
    let omega_b_frame = model.omega[0] - tone.nu;
    (0..space.dim())
        .map(|i| {
            let n = space.occupations(i);
            n[0] as f64 * model.omega[0] * t + n[1] as f64 * (omega_b_frame * t + theta)
        })
        .collect()
}

/// Zero off-diagonal elements whose frame frequency `|E_i − E_j|` exceeds
/// `cutoff × scale`.
pub fn rotating_wave(h: &CMatrix, frame_energies: &[f64], scale: f64, cutoff: f64) -> CMatrix {
    let mut out = h.clone();
    for i in 0..h.nrows() {
        for j in 0..h.ncols() {
            if i != j && (frame_energies[i] - frame_energies[j]).abs() > cutoff * scale {
                out[(i, j)] = ZERO;
            }
        }
    }
    out
}

/// Six-state RWA Hamiltonian with bare energies on the diagonal.
pub fn build_rwa_six_state(model: &EffectiveModel) -> Result<HamiltonianModel> {
    build_rwa_six_state_with_cutoff(model, DEFAULT_RWA_CUTOFF)
}

pub fn build_rwa_six_state_with_cutoff(model: &EffectiveModel, cutoff: f64) -> Result<HamiltonianModel> {
    let space = HilbertSpace::two_qutrits();
    let lab = lab_static(model);
    let linear: Vec<f64> = (0..space.dim())
        .map(|i| {
            let n = space.occupations(i);
            n[0] as f64 * model.omega[0] + n[1] as f64 * model.omega[1]
        })
        .collect();
    let rwa = rotating_wave(&lab, &linear, model.g, cutoff);
    let lab_op = Operator::new(space, rwa)?;
    let block = lab_op.project(&SIX_STATE_LABELS)?;
    HamiltonianModel::new(
        Tier::RwaSixState,
        HilbertSpace::new(&[6])?,
        SIX_STATE_LABELS.iter().map(|s| s.to_string()).collect(),
        Generator::Static(block),
        "bare",
    )
}

/// `{|11⟩, |B⟩, |D⟩}` block `Δ|11⟩⟨11| + 2c(|11⟩⟨B| + h.c.)` with `Δ = α`.
pub fn effective_cp_block(model: &EffectiveModel, coupling: f64) -> Result<HamiltonianModel> {
    let [alpha_a, alpha_b] = model.alpha;
    if (alpha_a - alpha_b).abs() > 1e-12 * alpha_a.abs().max(alpha_b.abs()) {
        return Err(Error::UnequalAnharmonicity { alpha_a, alpha_b });
    }
    Ok(cp_block(alpha_a, coupling))
}

pub(crate) fn cp_block(delta: f64, coupling: f64) -> HamiltonianModel {
    let c = |x: f64| Complex64::new(x, 0.0);
    let h = CMatrix::from_row_slice(
        3,
        3,
        &[
            c(delta),
            c(2.0 * coupling),
            ZERO,
            c(2.0 * coupling),
            ZERO,
            ZERO,
            ZERO,
            ZERO,
            ZERO,
        ],
    );
    HamiltonianModel::new(
        Tier::EffectiveBlock,
        HilbertSpace::new(&[3]).expect("static"),
        CP_BLOCK_LABELS.iter().map(|s| s.to_string()).collect(),
        Generator::Static(h),
        "two-excitation, all states at ω₀₂",
    )
    .expect("Hermitian by construction")
}

/// Columns are `|B⟩ = (|02⟩+|20⟩)/√2` and `|D⟩ = (|02⟩−|20⟩)/√2` over `(|02⟩, |20⟩)`.
pub fn bright_dark_basis() -> CMatrix {
    let s = Complex64::new(1.0 / SQRT_2, 0.0);
    CMatrix::from_row_slice(2, 2, &[s, s, s, -s])
}

fn sideband_piece(g_eff: f64, phase: f64) -> CMatrix {
    let p = phase - FRAC_PI_2;
    let g = Complex64::from_polar(g_eff, p);
    CMatrix::from_row_slice(2, 2, &[ZERO, g.conj(), g, ZERO])
}

/// `{|01⟩, |10⟩}` block driven with effective phases `phases`.
pub fn iswap_block(g_eff: f64, phases: &PhaseProfile) -> HamiltonianModel {
    let pieces = phases
        .segments()
        .iter()
        .map(|s| sideband_piece(g_eff, s.phase))
        .collect();
    HamiltonianModel::new(
        Tier::EffectiveBlock,
        HilbertSpace::new(&[2]).expect("static"),
        ISWAP_BLOCK_LABELS.iter().map(|s| s.to_string()).collect(),
        Generator::Piecewise {
            boundaries: phases.boundaries(),
            pieces,
        },
        "sideband",
    )
    .expect("Hermitian by construction")
}

/// Tone-mediated `{|01⟩, |10⟩}` block and its coupling `𝒢 = J₁(ε/ν) g`.
pub fn effective_iswap_block(tone: &ModulationTone, model: &EffectiveModel) -> Result<(HamiltonianModel, f64)> {
    let g_eff = sideband_coupling(tone, model)?;
    Ok((iswap_block(g_eff, &tone.effective_profile()), g_eff))
}

/// `J₁(ε/ν) g` after checking `ω_A − ω_B = ν`.
pub fn sideband_coupling(tone: &ModulationTone, model: &EffectiveModel) -> Result<f64> {
    let g_eff = bessel_j1(tone.beta()) * model.g;
    let mismatch = (model.omega[0] - model.omega[1] - tone.nu).abs();
    let allowed = (RESONANCE_TOLERANCE * g_eff.abs()).max(1e-12 * model.omega[0].abs());
    if mismatch > allowed {
        return Err(Error::OffResonantTone { mismatch, allowed });
    }
    Ok(g_eff)
}

/// Two-qutrit model in the sideband frame:
/// `Σ_j −(α_j/2) n_j(n_j−1) + δ n_B + 𝒢(e^{i(φ−π/2)} a†b + h.c.)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SidebandModel {
    pub g_eff: f64,
    pub alpha: [f64; 2],
    pub detuning_b: f64,
    pub phases: PhaseProfile,
}

impl SidebandModel {
    /// Tone-mediated model; the drive phase comes from the tone.
    pub fn from_tone(model: &EffectiveModel, tone: &ModulationTone) -> Result<Self> {
        let g_eff = sideband_coupling(tone, model)?;
        Ok(Self {
            g_eff,
            alpha: model.alpha,
            detuning_b: model.omega[1] + tone.nu - model.omega[0],
            phases: tone.effective_profile(),
        })
    }

    /// Resonant exchange without a tone (`ω_A = ω_B`, `𝒢 = g`).
    pub fn resonant(model: &EffectiveModel, phases: PhaseProfile) -> Result<Self> {
        let mismatch = (model.omega[0] - model.omega[1]).abs();
        let allowed = RESONANCE_TOLERANCE * model.g;
        if mismatch > allowed {
            return Err(Error::OffResonantTone { mismatch, allowed });
        }
        Ok(Self {
            g_eff: model.g,
            alpha: model.alpha,
            detuning_b: 0.0,
            phases,
        })
    }

    pub fn piece(&self, phase: f64) -> CMatrix {
        let space = HilbertSpace::two_qutrits();
        let a = ladder(&space, 0).expect("site 0").into_matrix();
        let b = ladder(&space, 1).expect("site 1").into_matrix();
        let na = number(&space, 0).expect("site 0").into_matrix();
        let nb = number(&space, 1).expect("site 1").into_matrix();
        let id = CMatrix::identity(9, 9);
        let c = |x: f64| Complex64::new(x, 0.0);
        let hop = Complex64::from_polar(self.g_eff, phase - FRAC_PI_2);
        let exchange = a.adjoint() * &b * hop;
        &na * (&na - &id) * c(-self.alpha[0] / 2.0)
            + &nb * (&nb - &id) * c(-self.alpha[1] / 2.0)
            + &nb * c(self.detuning_b)
            + exchange.adjoint()
            + exchange
    }

    pub fn hamiltonian(&self) -> HamiltonianModel {
        let space = HilbertSpace::two_qutrits();
        let labels = two_qutrit_labels(&space);
        let pieces = self
            .phases
            .segments()
            .iter()
            .map(|s| self.piece(s.phase))
            .collect();
        HamiltonianModel::new(
            Tier::EffectiveSideband,
            space,
            labels,
            Generator::Piecewise {
                boundaries: self.phases.boundaries(),
                pieces,
            },
            "sideband",
        )
        .expect("Hermitian by construction")
    }
}

/// Basis change on `{|02⟩, |20⟩}` whose columns are `|B⟩` and `|D⟩`; zero elsewhere.
pub fn bright_dark_operator(space: &HilbertSpace) -> Result<Operator> {
    embed(space, &bright_dark_basis(), &["02", "20"])
}
