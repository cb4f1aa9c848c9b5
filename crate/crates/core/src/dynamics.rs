//! Unitary and Lindblad time evolution.
//!
//! Master equation:
//! `ρ̇ = −i[H, ρ] + Σ_j Σ_A (κ_A/2) (2AρA† − A†Aρ − ρA†A)`
//! with `A ∈ {|n−1⟩⟨n|}` at rate `κ₋` and `A ∈ {|n⟩⟨n|}` at rate `κ_z`
//! on every qubit. With this normalisation a single excited level decays
//! as `e^{−κ₋ t}` (T₁ = 1/κ₋) and a 0–1 coherence as `e^{−(κ_z + κ₋/2) t}`.

use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expm::{expm_pade, propagator};
use crate::hamiltonian::{Generator, HamiltonianModel};
use crate::hilbert::{local_transition, site_operator, CMatrix, DensityMatrix, StateVector};
use crate::ode::{integrate, SolverStats, Tolerances};

const MINUS_I: Complex64 = Complex64::new(0.0, -1.0);

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub kappa_minus: [f64; 2],
    pub kappa_z: [f64; 2],
    #[serde(default = "enabled_default")]
    pub enabled: bool,
}

fn enabled_default() -> bool {
    true
}

impl NoiseSpec {
    pub fn new(kappa_minus: [f64; 2], kappa_z: [f64; 2]) -> Result<Self> {
        let s = Self {
            kappa_minus,
            kappa_z,
            enabled: true,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn uniform(kappa: f64) -> Result<Self> {
        Self::new([kappa; 2], [kappa; 2])
    }

    pub fn off() -> Self {
        Self {
            kappa_minus: [0.0; 2],
            kappa_z: [0.0; 2],
            enabled: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let all = self.kappa_minus.iter().chain(&self.kappa_z);
        if all.clone().any(|k| !(*k >= 0.0 && k.is_finite())) {
            return Err(Error::InvalidParameter("noise rates must be finite and ≥ 0".into()));
        }
        Ok(())
    }

    /// All rates multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            kappa_minus: self.kappa_minus.map(|k| k * factor),
            kappa_z: self.kappa_z.map(|k| k * factor),
            enabled: self.enabled,
        }
    }

    pub fn is_active(&self) -> bool {
        self.enabled && self.kappa_minus.iter().chain(&self.kappa_z).any(|&k| k > 0.0)
    }
}

#[derive(Clone, Debug)]
pub struct CollapseOperator {
    pub label: String,
    /// Prefactor of `ℒ(A)`, i.e. `κ/2`.
    pub weight: f64,
    pub op: CMatrix,
}

/// Lowering `|n−1⟩⟨n|` and projector `|n⟩⟨n|` terms on each qubit of a
/// product space (first two sites).
pub fn collapse_operators(space: &crate::hilbert::HilbertSpace, noise: &NoiseSpec) -> Result<Vec<CollapseOperator>> {
    noise.validate()?;
    let mut ops = Vec::new();
    if !noise.enabled {
        return Ok(ops);
    }
    for site in 0..space.sites().min(2) {
        let d = space.levels()[site];
        let name = if site == 0 { "A" } else { "B" };
        for n in 1..d {
            if noise.kappa_minus[site] > 0.0 {
                ops.push(CollapseOperator {
                    label: format!("sigma_{name}{n}"),
                    weight: noise.kappa_minus[site] / 2.0,
                    op: site_operator(space, site, &local_transition(d, n - 1, n))?.into_matrix(),
                });
            }
        }
        for n in 0..d {
            if noise.kappa_z[site] > 0.0 {
                ops.push(CollapseOperator {
                    label: format!("chi_{name}{n}"),
                    weight: noise.kappa_z[site] / 2.0,
                    op: site_operator(space, site, &local_transition(d, n, n))?.into_matrix(),
                });
            }
        }
    }
    Ok(ops)
}

/// Precomputed pieces of the Lindblad right-hand side:
/// `ρ̇ = −i(H_eff ρ − ρ H_eff†) + Σ 2w AρA†`, `H_eff = H − i Σ w A†A`.
#[derive(Clone, Debug)]
struct Dissipator {
    anti_hermitian: CMatrix,
    jumps: Vec<(f64, CMatrix, CMatrix)>,
}

impl Dissipator {
    fn new(ops: &[CollapseOperator], dim: usize) -> Self {
        let mut anti = CMatrix::zeros(dim, dim);
        let mut jumps = Vec::with_capacity(ops.len());
        for c in ops {
            let ad = c.op.adjoint();
            anti -= (&ad * &c.op) * Complex64::new(0.0, c.weight);
            jumps.push((2.0 * c.weight, c.op.clone(), ad));
        }
        Self {
            anti_hermitian: anti,
            jumps,
        }
    }

    fn rhs(&self, h: &CMatrix, rho: &CMatrix) -> CMatrix {
        let h_eff = h + &self.anti_hermitian;
        let left = &h_eff * rho;
        // ρ H_eff† = (H_eff ρ)† for Hermitian ρ, but inputs |i⟩⟨j| are not Hermitian
        let right = rho * h_eff.adjoint();
        let mut out = (left - right) * MINUS_I;
        for (rate, a, ad) in &self.jumps {
            out += (a * rho * ad) * Complex64::new(*rate, 0.0);
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct EvolutionResult<S> {
    pub final_state: S,
    pub trajectory: Vec<(f64, S)>,
    pub stats: SolverStats,
    pub wall_seconds: f64,
}

fn check_span(t_final: f64, samples: &[f64]) -> Result<()> {
    if !(t_final > 0.0 && t_final.is_finite()) {
        return Err(Error::InvalidParameter(format!("final time must be > 0, got {t_final}")));
    }
    if samples.iter().any(|&s| !(0.0..=t_final).contains(&s)) || samples.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidParameter("sample times must be sorted in [0, t_final]".into()));
    }
    Ok(())
}

/// Integrate `y' = rhs(H(t), y)` across the generator's pieces.
fn evolve_pieces<R>(
    h: &HamiltonianModel,
    y0: CMatrix,
    t_final: f64,
    samples: &[f64],
    tol: &Tolerances,
    rhs: R,
) -> Result<(CMatrix, Vec<CMatrix>, SolverStats)>
where
    R: Fn(&CMatrix, &CMatrix) -> CMatrix,
{
    check_span(t_final, samples)?;
    let mut stats = SolverStats::default();
    let mut y = y0;
    let mut out = Vec::with_capacity(samples.len());
    let mut next = 0;
    for (start, end, piece) in h.intervals(t_final) {
        let mut local = Vec::new();
        while next < samples.len() && samples[next] <= end {
            local.push(samples[next].max(start));
            next += 1;
        }
        let (y_end, dense) = if has_constant_pieces(h) {
            let hk = h.at_piece(piece, start);
            integrate(|_, y| rhs(&hk, y), start, end, y, &local, tol, &mut stats)?
        } else {
            integrate(|t, y| rhs(&h.at_piece(piece, t), y), start, end, y, &local, tol, &mut stats)?
        };
        out.extend(dense);
        y = y_end;
    }
    Ok((y, out, stats))
}

fn schrodinger(h: &CMatrix, y: &CMatrix) -> CMatrix {
    (h * y) * MINUS_I
}

fn has_constant_pieces(h: &HamiltonianModel) -> bool {
    !matches!(h.generator(), Generator::Modulated { .. }) || h.is_time_independent()
}

/// Exact piecewise exponentials with samples taken inside each piece.
fn exponentiate_pieces(h: &HamiltonianModel, y0: CMatrix, t_final: f64, samples: &[f64]) -> (CMatrix, Vec<CMatrix>) {
    let mut y = y0;
    let mut out = Vec::with_capacity(samples.len());
    let mut next = 0;
    for (start, end, piece) in h.intervals(t_final) {
        let hk = h.at_piece(piece, start);
        while next < samples.len() && samples[next] <= end {
            let dt = (samples[next] - start).max(0.0);
            out.push(propagator(&hk, dt) * &y);
            next += 1;
        }
        y = propagator(&hk, end - start) * y;
    }
    (y, out)
}

/// Time-ordered propagation of a ket.
///
/// Time-independent pieces are exponentiated exactly; a modulated
/// generator goes through the adaptive integrator.
pub fn propagate_unitary(
    h: &HamiltonianModel,
    psi0: &StateVector,
    t_final: f64,
    samples: &[f64],
    tol: &Tolerances,
) -> Result<EvolutionResult<StateVector>> {
    if psi0.space() != h.space() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            found: psi0.space().dim(),
        });
    }
    let clock = Instant::now();
    let y0 = CMatrix::from_column_slice(h.dim(), 1, psi0.amplitudes().as_slice());
    let (y, dense, stats) = if has_constant_pieces(h) {
        check_span(t_final, samples)?;
        let (y, dense) = exponentiate_pieces(h, y0, t_final, samples);
        (y, dense, SolverStats::default())
    } else {
        evolve_pieces(h, y0, t_final, samples, tol, schrodinger)?
    };
    let to_state = |m: &CMatrix| StateVector::from_raw(h.space().clone(), m.column(0).into_owned());
    Ok(EvolutionResult {
        final_state: to_state(&y),
        trajectory: samples.iter().copied().zip(dense.iter().map(to_state)).collect(),
        stats,
        wall_seconds: clock.elapsed().as_secs_f64(),
    })
}

/// Full propagator `U(t_final, 0)` by integrating the Schrödinger equation.
pub fn propagator_ode(h: &HamiltonianModel, t_final: f64, tol: &Tolerances) -> Result<(CMatrix, SolverStats)> {
    propagate_columns(h, CMatrix::identity(h.dim(), h.dim()), t_final, tol)
}

/// Propagate the columns of `y0` (any number of kets at once).
pub fn propagate_columns(h: &HamiltonianModel, y0: CMatrix, t_final: f64, tol: &Tolerances) -> Result<(CMatrix, SolverStats)> {
    let (u, _, stats) = evolve_pieces(h, y0, t_final, &[], tol, schrodinger)?;
    Ok((u, stats))
}

/// Product of exact piece exponentials; only for time-independent pieces.
pub fn exact_propagator(h: &HamiltonianModel, t_final: f64) -> Result<CMatrix> {
    if !has_constant_pieces(h) {
        return Err(Error::InvalidParameter(
            "exact propagator needs piecewise-constant pieces".into(),
        ));
    }
    check_span(t_final, &[])?;
    Ok(exponentiate_pieces(h, CMatrix::identity(h.dim(), h.dim()), t_final, &[]).0)
}

/// Lindblad evolution of a density matrix.
pub fn propagate_lindblad(
    h: &HamiltonianModel,
    rho0: &DensityMatrix,
    noise: &NoiseSpec,
    t_final: f64,
    samples: &[f64],
    tol: &Tolerances,
) -> Result<EvolutionResult<DensityMatrix>> {
    if rho0.space() != h.space() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            found: rho0.space().dim(),
        });
    }
    let clock = Instant::now();
    let (rho, dense, stats) = lindblad_matrix(h, rho0.matrix().clone(), noise, t_final, samples, tol)?;
    let wrap = |m: &CMatrix| DensityMatrix::from_raw(h.space().clone(), m.clone());
    Ok(EvolutionResult {
        final_state: wrap(&rho),
        trajectory: samples.iter().copied().zip(dense.iter().map(wrap)).collect(),
        stats,
        wall_seconds: clock.elapsed().as_secs_f64(),
    })
}

/// Lindblad evolution of an arbitrary (not necessarily physical) operator;
/// the map is linear, so this also propagates `|i⟩⟨j|` inputs.
pub fn lindblad_matrix(
    h: &HamiltonianModel,
    x0: CMatrix,
    noise: &NoiseSpec,
    t_final: f64,
    samples: &[f64],
    tol: &Tolerances,
) -> Result<(CMatrix, Vec<CMatrix>, SolverStats)> {
    let ops = collapse_operators(h.space(), noise)?;
    let diss = Dissipator::new(&ops, h.dim());
    evolve_pieces(h, x0, t_final, samples, tol, |hm, rho| diss.rhs(hm, rho))
}

/// Images of `|i⟩⟨j|` for all pairs of `indices`; `out[a][b]` is the
/// image of `|indices[a]⟩⟨indices[b]|`.
#[derive(Clone, Debug)]
pub struct ChannelImages {
    pub indices: Vec<usize>,
    pub images: Vec<Vec<CMatrix>>,
    pub stats: SolverStats,
}

impl ChannelImages {
    /// Output for the pure input `Σ_a c_a |indices[a]⟩`.
    pub fn apply(&self, coeffs: &[Complex64]) -> CMatrix {
        let dim = self.images[0][0].nrows();
        let mut out = CMatrix::zeros(dim, dim);
        for (a, ca) in coeffs.iter().enumerate() {
            for (b, cb) in coeffs.iter().enumerate() {
                let w = ca * cb.conj();
                if w != Complex64::new(0.0, 0.0) {
                    out += &self.images[a][b] * w;
                }
            }
        }
        out
    }
}

pub fn lindblad_channel(
    h: &HamiltonianModel,
    noise: &NoiseSpec,
    t_final: f64,
    indices: &[usize],
    tol: &Tolerances,
) -> Result<ChannelImages> {
    let dim = h.dim();
    if let Some(&bad) = indices.iter().find(|&&i| i >= dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: bad + 1,
        });
    }
    let n = indices.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect();
    let results: Vec<Result<(CMatrix, SolverStats)>> = pairs
        .par_iter()
        .map(|&(a, b)| {
            let mut x0 = CMatrix::zeros(dim, dim);
            x0[(indices[a], indices[b])] = Complex64::new(1.0, 0.0);
            lindblad_matrix(h, x0, noise, t_final, &[], tol).map(|(x, _, s)| (x, s))
        })
        .collect();
    let mut images = vec![Vec::with_capacity(n); n];
    let mut stats = SolverStats::default();
    for ((a, _), r) in pairs.iter().zip(results) {
        let (x, s) = r?;
        stats.merge(&s);
        images[*a].push(x);
    }
    Ok(ChannelImages {
        indices: indices.to_vec(),
        images,
        stats,
    })
}

/// Column-stacked Liouvillian `vec(ρ̇) = L vec(ρ)` for a static `H`.
pub fn liouvillian(h: &CMatrix, ops: &[CollapseOperator]) -> CMatrix {
    let n = h.nrows();
    let id = CMatrix::identity(n, n);
    // vec(AXB) = (Bᵀ ⊗ A) vec(X)
    let mut l = (id.kronecker(h) - h.transpose().kronecker(&id)) * MINUS_I;
    for c in ops {
        let ad = c.op.adjoint();
        let ada = &ad * &c.op;
        let w = Complex64::new(c.weight, 0.0);
        l += (c.op.conjugate().kronecker(&c.op) * Complex64::new(2.0, 0.0)
            - id.kronecker(&ada)
            - ada.transpose().kronecker(&id))
            * w;
    }
    l
}

/// Reference Lindblad solution through exponentials of the Liouvillian.
pub fn exact_lindblad(h: &HamiltonianModel, rho0: &CMatrix, noise: &NoiseSpec, t_final: f64) -> Result<CMatrix> {
    if !has_constant_pieces(h) {
        return Err(Error::InvalidParameter(
            "exact Lindblad solution needs piecewise-constant pieces".into(),
        ));
    }
    let ops = collapse_operators(h.space(), noise)?;
    let n = h.dim();
    let mut v = crate::hilbert::CVector::from_column_slice(rho0.as_slice());
    for (start, end, piece) in h.intervals(t_final) {
        let l = liouvillian(&h.at_piece(piece, start), &ops);
        v = expm_pade(&(l * Complex64::new(end - start, 0.0)))? * v;
    }
    Ok(CMatrix::from_column_slice(n, n, v.as_slice()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::{cp_block, iswap_block, PhaseProfile, PhaseSegment, Tier};
    use crate::hilbert::{max_abs_diff, unitarity_error, HilbertSpace};
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn qutrit_zero_h() -> HamiltonianModel {
        let space = HilbertSpace::two_qutrits();
        let labels = (0..9).map(|i| space.label(i)).collect();
        HamiltonianModel::new(Tier::EffectiveSideband, space, labels, Generator::Static(CMatrix::zeros(9, 9)), "none").unwrap()
    }

    #[test]
    fn zero_hamiltonian_is_identity() {
        let h = qutrit_zero_h();
        let psi = StateVector::superposition(h.space(), &["01", "12"]).unwrap();
        let r = propagate_unitary(&h, &psi, 3.0, &[1.0], &Tolerances::default()).unwrap();
        assert!((r.final_state.inner(&psi).norm() - 1.0).abs() < 1e-12);
        assert_eq!(r.trajectory.len(), 1);
    }

    #[test]
    fn rabi_transfer_with_minus_i_phase() {
        let h = iswap_block(1.0, &PhaseProfile::constant(PI / 2.0, 1.0).unwrap());
        let psi = StateVector::basis(h.space(), "0").unwrap();
        let r = propagate_unitary(&h, &psi, PI / 2.0, &[], &Tolerances::default()).unwrap();
        let amp = r.final_state.amplitudes()[1];
        assert!((amp - Complex64::new(0.0, -1.0)).norm() < 1e-9);
        assert!((r.final_state.norm() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn ode_propagator_matches_expm_for_static_and_piecewise() {
        let h = cp_block(4.0 * 3f64.sqrt(), 1.0);
        let (u, _) = propagator_ode(&h, 1.3, &Tolerances::default()).unwrap();
        assert!(max_abs_diff(&u, &propagator(&h.at(0.0), 1.3)) < 1e-9);
        let psi = StateVector::basis(h.space(), "0").unwrap();
        let r = propagate_unitary(&h, &psi, 1.3, &[], &Tolerances::default()).unwrap();
        let want = propagator(&h.at(0.0), 1.3).column(0).into_owned();
        assert!((r.final_state.amplitudes() - want).camax() < 1e-10);

        let profile = PhaseProfile::new(vec![
            PhaseSegment { duration: PI / 4.0, phase: PI / 2.0 },
            PhaseSegment { duration: PI / 2.0, phase: PI },
            PhaseSegment { duration: PI / 4.0, phase: PI / 2.0 },
        ])
        .unwrap();
        let blk = iswap_block(1.0, &profile);
        let (u, _) = propagator_ode(&blk, PI, &Tolerances::default()).unwrap();
        let exact = exact_propagator(&blk, PI).unwrap();
        assert!(max_abs_diff(&u, &exact) < 1e-9);
        assert!(unitarity_error(&u) < 1e-9);
    }

    #[test]
    fn single_qubit_relaxation_rate() {
        let h = qutrit_zero_h();
        let kappa = 0.3;
        let noise = NoiseSpec::new([kappa, 0.0], [0.0, 0.0]).unwrap();
        let rho0 = StateVector::basis(h.space(), "10").unwrap().to_density();
        let t = 2.0;
        let r = propagate_lindblad(&h, &rho0, &noise, t, &[], &Tolerances::default()).unwrap();
        let p1 = r.final_state.population("10").unwrap();
        assert!((p1 - (-kappa * t).exp()).abs() < 1e-9);
        assert!((r.final_state.population("00").unwrap() - (1.0 - (-kappa * t).exp())).abs() < 1e-9);
    }

    #[test]
    fn dephasing_keeps_populations_and_kills_coherence() {
        let h = qutrit_zero_h();
        let (km, kz) = (0.1, 0.25);
        let noise = NoiseSpec::new([0.0, km], [0.0, kz]).unwrap();
        let rho0 = StateVector::superposition(h.space(), &["00", "01"]).unwrap().to_density();
        let t = 1.5;
        let rho = propagate_lindblad(&h, &rho0, &noise, t, &[], &Tolerances::default()).unwrap().final_state;
        let c = rho.matrix()[(0, 1)].norm();
        assert!((c - 0.5 * (-(kz + km / 2.0) * t).exp()).abs() < 1e-9);

        let pure_dephasing = NoiseSpec::new([0.0; 2], [kz; 2]).unwrap();
        let rho = propagate_lindblad(&h, &rho0, &pure_dephasing, t, &[], &Tolerances::default()).unwrap().final_state;
        assert!((rho.population("00").unwrap() - 0.5).abs() < 1e-12);
        assert!((rho.population("01").unwrap() - 0.5).abs() < 1e-12);
        assert!(rho.matrix()[(0, 1)].norm() < 0.5);
    }

    #[test]
    fn noise_off_matches_unitary() {
        let h = iswap_block(1.0, &PhaseProfile::constant(0.4, 2.0).unwrap());
        let psi = StateVector::superposition(h.space(), &["0", "1"]).unwrap();
        let tol = Tolerances::default();
        let u = propagate_unitary(&h, &psi, 2.0, &[], &tol).unwrap().final_state;
        let rho = propagate_lindblad(&h, &psi.to_density(), &NoiseSpec::off(), 2.0, &[], &tol).unwrap().final_state;
        assert!(max_abs_diff(rho.matrix(), u.to_density().matrix()) < 1e-8);
    }

    #[test]
    fn collapse_operator_inventory() {
        let ops = collapse_operators(&HilbertSpace::two_qutrits(), &NoiseSpec::uniform(1e-4).unwrap()).unwrap();
        // two lowering and three projector terms per qubit
        assert_eq!(ops.len(), 10);
        assert!(NoiseSpec::new([-1.0, 0.0], [0.0; 2]).is_err());
        assert!(collapse_operators(&HilbertSpace::two_qutrits(), &NoiseSpec::off()).unwrap().is_empty());
    }

    #[test]
    fn ode_lindblad_matches_liouvillian_exponential() {
        let profile = PhaseProfile::new(vec![
            PhaseSegment { duration: 0.6, phase: 0.2 },
            PhaseSegment { duration: 0.9, phase: 2.1 },
        ])
        .unwrap();
        let sb = crate::hamiltonian::SidebandModel {
            g_eff: 1.0,
            alpha: [4.0 * 3f64.sqrt(); 2],
            detuning_b: 0.3,
            phases: profile,
        }
        .hamiltonian();
        let noise = NoiseSpec::new([0.05, 0.02], [0.03, 0.01]).unwrap();
        let rho0 = StateVector::superposition(sb.space(), &["10", "11"]).unwrap().to_density();
        let r = propagate_lindblad(&sb, &rho0, &noise, 1.5, &[], &Tolerances::default()).unwrap();
        let exact = exact_lindblad(&sb, rho0.matrix(), &noise, 1.5).unwrap();
        assert!(max_abs_diff(r.final_state.matrix(), &exact) < 1e-9);
        r.final_state.validate(1e-8).unwrap();
    }

    #[test]
    fn channel_reproduces_direct_propagation() {
        let sb = crate::hamiltonian::SidebandModel {
            g_eff: 1.0,
            alpha: [4.0 * 3f64.sqrt(); 2],
            detuning_b: 0.0,
            phases: PhaseProfile::constant(-PI / 2.0, PI / 2.0).unwrap(),
        }
        .hamiltonian();
        let noise = NoiseSpec::uniform(1e-2).unwrap();
        let tol = Tolerances::default();
        let idx = [0usize, 1, 3, 4];
        let ch = lindblad_channel(&sb, &noise, PI / 2.0, &idx, &tol).unwrap();
        let c = [0.3, -0.5, 0.1, 0.8];
        let norm = c.iter().map(|x: &f64| x * x).sum::<f64>().sqrt();
        let coeffs: Vec<Complex64> = c.iter().map(|x| Complex64::new(x / norm, 0.0)).collect();
        let mut psi = crate::hilbert::CVector::zeros(9);
        for (k, &i) in idx.iter().enumerate() {
            psi[i] = coeffs[k];
        }
        let rho0 = StateVector::new(sb.space().clone(), psi).unwrap().to_density();
        let direct = propagate_lindblad(&sb, &rho0, &noise, PI / 2.0, &[], &tol).unwrap().final_state;
        assert!(max_abs_diff(&ch.apply(&coeffs), direct.matrix()) < 1e-9);
    }

    #[test]
    fn samples_follow_the_trajectory() {
        let h = iswap_block(1.0, &PhaseProfile::constant(PI / 2.0, 1.0).unwrap());
        let psi = StateVector::basis(h.space(), "0").unwrap();
        let ts: Vec<f64> = (0..=10).map(|k| k as f64 * 0.2).collect();
        let r = propagate_unitary(&h, &psi, 2.0, &ts, &Tolerances::default()).unwrap();
        for (t, s) in &r.trajectory {
            assert!((s.populations()[0] - t.cos().powi(2)).abs() < 1e-9, "t = {t}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn lindblad_is_linear_in_the_input(w in 0.0f64..1.0, ph in 0.0f64..6.28) {
            let h = crate::hamiltonian::SidebandModel {
                g_eff: 1.0,
                alpha: [2.0, 2.0],
                detuning_b: 0.1,
                phases: PhaseProfile::constant(ph, 1.1).unwrap(),
            }
            .hamiltonian();
            let space = h.space().clone();
            let a = StateVector::basis(&space, "10").unwrap().to_density();
            let b = StateVector::superposition(&space, &["01", "11", "20"]).unwrap().to_density();
            let mix = a.matrix() * Complex64::new(w, 0.0) + b.matrix() * Complex64::new(1.0 - w, 0.0);
            let tol = Tolerances::default();
            let noise = NoiseSpec::new([0.1, 0.05], [0.02, 0.0]).unwrap();
            let ea = lindblad_matrix(&h, a.matrix().clone(), &noise, 1.1, &[], &tol).unwrap().0;
            let eb = lindblad_matrix(&h, b.matrix().clone(), &noise, 1.1, &[], &tol).unwrap().0;
            let em = lindblad_matrix(&h, mix, &noise, 1.1, &[], &tol).unwrap().0;
            let combo = ea * Complex64::new(w, 0.0) + eb * Complex64::new(1.0 - w, 0.0);
            prop_assert!(max_abs_diff(&em, &combo) < 1e-9);
        }

        #[test]
        // Only unital dissipators contract purity; relaxation can purify.
        fn purity_never_increases_under_dephasing(ka in 0.0f64..0.5, kb in 0.0f64..0.5) {
            let h = qutrit_zero_h();
            let noise = NoiseSpec::new([0.0; 2], [ka, kb]).unwrap();
            let rho0 = StateVector::superposition(h.space(), &["00", "11", "21"]).unwrap().to_density();
            let ts: Vec<f64> = (0..=20).map(|k| k as f64 * 0.1).collect();
            let r = propagate_lindblad(&h, &rho0, &noise, 2.0, &ts, &Tolerances::default()).unwrap();
            let mut last = 1.0 + 1e-12;
            for (_, rho) in &r.trajectory {
                let p = rho.purity();
                prop_assert!(p <= last + 1e-10);
                last = p;
            }
        }
    }
}
