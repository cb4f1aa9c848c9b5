//! State and average gate fidelity over the product-state family
//! `(cos θ₁|0⟩ + sin θ₁|1⟩) ⊗ (cos θ₂|0⟩ + sin θ₂|1⟩)`.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dynamics::ChannelImages;
use crate::error::{Error, Result};
use crate::hilbert::{CMatrix, CVector, DensityMatrix, HilbertSpace, StateVector};
use crate::synthesis::COMPUTATIONAL_INDICES;

/// Quadrature nodes per axis below which the grid rule is refused.
pub const MIN_GRID_NODES: usize = 30;

/// `⟨ψ|ρ|ψ⟩`.
pub fn state_fidelity(rho: &DensityMatrix, target: &StateVector) -> Result<f64> {
    if rho.space() != target.space() {
        return Err(Error::DimensionMismatch {
            expected: rho.space().dim(),
            found: target.space().dim(),
        });
    }
    Ok(rho.expectation_in(target.amplitudes()))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InitialState {
    pub theta1: f64,
    pub theta2: f64,
}

impl InitialState {
    pub fn new(theta1: f64, theta2: f64) -> Self {
        InitialState { theta1, theta2 }
    }

    /// Amplitudes on `|00⟩, |01⟩, |10⟩, |11⟩`.
    pub fn coefficients(&self) -> [f64; 4] {
        let (s1, c1) = self.theta1.sin_cos();
        let (s2, c2) = self.theta2.sin_cos();
        [c1 * c2, c1 * s2, s1 * c2, s1 * s2]
    }

    /// Embedded in the two-qutrit space.
    pub fn state(&self) -> StateVector {
        let space = HilbertSpace::two_qutrits();
        let mut amps = CVector::zeros(space.dim());
        for (k, c) in self.coefficients().iter().enumerate() {
            amps[COMPUTATIONAL_INDICES[k]] = Complex64::new(*c, 0.0);
        }
        StateVector::new(space, amps).expect("product of normalised qubits")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FidelityMethod {
    /// Tensor trapezoid rule with `nodes × nodes` points on `[0, 2π)²`.
    Grid { nodes: usize },
    /// Uniform `(θ₁, θ₂)` draws from a seeded ChaCha8 stream.
    MonteCarlo { samples: usize, seed: u64 },
}

impl FidelityMethod {
    pub fn grid(nodes: usize) -> Result<Self> {
        if nodes < MIN_GRID_NODES {
            return Err(Error::Config(format!("grid needs at least {MIN_GRID_NODES} nodes per axis, got {nodes}")));
        }
        Ok(FidelityMethod::Grid { nodes })
    }

    /// Parse `grid`, `grid:N` or `mc:N`.
    pub fn parse(s: &str, seed: u64) -> Result<Self> {
        let (kind, count) = match s.split_once(':') {
            Some((k, n)) => {
                let n = n
                    .parse::<usize>()
                    .map_err(|_| Error::Config(format!("bad sample count in `{s}`")))?;
                (k, Some(n))
            }
            None => (s, None),
        };
        match kind {
            "grid" => Self::grid(count.unwrap_or(MIN_GRID_NODES)),
            "mc" => {
                let samples = count.ok_or_else(|| Error::Config("mc needs a sample count, e.g. mc:500".into()))?;
                if samples < 2 {
                    return Err(Error::Config("mc needs at least 2 samples".into()));
                }
                Ok(FidelityMethod::MonteCarlo { samples, seed })
            }
            other => Err(Error::Config(format!("unknown fidelity method `{other}` (grid|grid:N|mc:N)"))),
        }
    }

    pub fn points(&self) -> Vec<InitialState> {
        match *self {
            FidelityMethod::Grid { nodes } => {
                let h = TAU / nodes as f64;
                (0..nodes)
                    .flat_map(|i| (0..nodes).map(move |j| InitialState::new(i as f64 * h, j as f64 * h)))
                    .collect()
            }
            FidelityMethod::MonteCarlo { samples, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                (0..samples)
                    .map(|_| InitialState::new(rng.random_range(0.0..TAU), rng.random_range(0.0..TAU)))
                    .collect()
            }
        }
    }
}

impl fmt::Display for FidelityMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FidelityMethod::Grid { nodes } => write!(f, "grid:{nodes}"),
            FidelityMethod::MonteCarlo { samples, .. } => write!(f, "mc:{samples}"),
        }
    }
}

impl FromStr for FidelityMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s, 0)
    }
}

/// `W[i][j][k][l] = ⟨t_k|E(|i⟩⟨j|)|t_l⟩`, with `t_k = T|k⟩` the target image
/// of computational state `k`; then `F(c) = Σ cᵢ c̄ⱼ c̄ₖ cₗ W[i][j][k][l]`.
#[derive(Clone, Debug)]
pub struct FidelityKernel {
    w: Vec<Complex64>,
}

impl FidelityKernel {
    /// `channel` must hold the images of the four computational basis
    /// projectors and coherences; `target` is 4×4 on `|00⟩, |01⟩, |10⟩, |11⟩`.
    pub fn new(channel: &ChannelImages, target: &CMatrix) -> Result<Self> {
        if channel.indices != COMPUTATIONAL_INDICES {
            return Err(Error::InvalidParameter("channel must be sampled on the computational indices".into()));
        }
        if target.nrows() != 4 || target.ncols() != 4 {
            return Err(Error::DimensionMismatch {
                expected: 4,
                found: target.nrows(),
            });
        }
        let dim = channel.images[0][0].nrows();
        let mut t = CMatrix::zeros(dim, 4);
        for k in 0..4 {
            for r in 0..4 {
                t[(COMPUTATIONAL_INDICES[r], k)] = target[(r, k)];
            }
        }
        let td = t.adjoint();
        let mut w = Vec::with_capacity(256);
        for i in 0..4 {
            for j in 0..4 {
                let m = &td * &channel.images[i][j] * &t;
                for k in 0..4 {
                    for l in 0..4 {
                        w.push(m[(k, l)]);
                    }
                }
            }
        }
        Ok(FidelityKernel { w })
    }

    pub fn fidelity(&self, c: &[f64; 4]) -> f64 {
        let mut acc = 0.0;
        let mut idx = 0;
        for &ci in c {
            for &cj in c {
                let cij = ci * cj;
                for &ck in c {
                    for &cl in c {
                        acc += cij * ck * cl * self.w[idx].re;
                        idx += 1;
                    }
                }
            }
        }
        acc
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FidelitySample {
    pub theta1: f64,
    pub theta2: f64,
    pub fidelity: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FidelityReport {
    pub method: FidelityMethod,
    pub mean: f64,
    /// Standard error of the mean; Monte Carlo only.
    pub std_error: Option<f64>,
    pub min: f64,
    pub max: f64,
    #[serde(skip)]
    pub samples: Vec<FidelitySample>,
}

/// Average of the kernel over the method's `(θ₁, θ₂)` points. The grid rule
/// on a periodic integrand is a plain mean.
pub fn average_fidelity(kernel: &FidelityKernel, method: &FidelityMethod) -> FidelityReport {
    let samples: Vec<FidelitySample> = method
        .points()
        .into_iter()
        .map(|p| FidelitySample {
            theta1: p.theta1,
            theta2: p.theta2,
            fidelity: kernel.fidelity(&p.coefficients()),
        })
        .collect();
    let n = samples.len() as f64;
    let mean = samples.iter().map(|s| s.fidelity).sum::<f64>() / n;
    let std_error = match method {
        FidelityMethod::Grid { .. } => None,
        FidelityMethod::MonteCarlo { .. } => {
            let var = samples.iter().map(|s| (s.fidelity - mean).powi(2)).sum::<f64>() / (n - 1.0);
            Some((var / n).sqrt())
        }
    };
    let (min, max) = samples
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| (lo.min(s.fidelity), hi.max(s.fidelity)));
    FidelityReport {
        method: *method,
        mean,
        std_error,
        min,
        max,
        samples,
    }
}
