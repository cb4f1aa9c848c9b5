//! Dormand–Prince 5(4) with step-size control and 4th-order dense output
//! (Hairer, Nørsett & Wanner, *Solving ODEs I*, DOPRI5).
//!
//! The state is a complex matrix so the same stepper propagates kets,
//! propagators and density matrices.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hilbert::CMatrix;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-12,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SolverStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

impl SolverStats {
    pub fn merge(&mut self, other: &SolverStats) {
        self.accepted += other.accepted;
        self.rejected += other.rejected;
        self.evaluations += other.evaluations;
    }
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const SAFETY: f64 = 0.9;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;
const MAX_STEPS: usize = 10_000_000;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `Σ wᵢ kᵢ` without intermediate allocations beyond the result.
fn combo(base: &CMatrix, h: f64, terms: &[(f64, &CMatrix)]) -> CMatrix {
    let mut out = base.clone();
    for &(w, k) in terms {
        if w != 0.0 {
            let s = c(h * w);
            out.zip_apply(k, |a, b| *a += s * b);
        }
    }
    out
}

fn error_norm(err: &CMatrix, y0: &CMatrix, y1: &CMatrix, tol: &Tolerances) -> f64 {
    let n = err.len() as f64;
    let sum: f64 = err
        .iter()
        .zip(y0.iter().zip(y1.iter()))
        .map(|(e, (a, b))| {
            let sc = tol.atol + tol.rtol * a.norm().max(b.norm());
            (e.norm() / sc).powi(2)
        })
        .sum();
    (sum / n).sqrt()
}

fn scaled_norm(x: &CMatrix, y: &CMatrix, tol: &Tolerances) -> f64 {
    let n = x.len() as f64;
    let sum: f64 = x
        .iter()
        .zip(y.iter())
        .map(|(v, w)| (v.norm() / (tol.atol + tol.rtol * w.norm())).powi(2))
        .sum();
    (sum / n).sqrt()
}

fn initial_step<F>(f: &mut F, t0: f64, y0: &CMatrix, f0: &CMatrix, span: f64, tol: &Tolerances, stats: &mut SolverStats) -> f64
where
    F: FnMut(f64, &CMatrix) -> CMatrix,
{
    let d0 = scaled_norm(y0, y0, tol);
    let d1 = scaled_norm(f0, y0, tol);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 {
        1e-6
    } else {
        0.01 * d0 / d1
    };
    let h0 = h0.min(span);
    let y1 = combo(y0, h0, &[(1.0, f0)]);
    let f1 = f(t0 + h0, &y1);
    stats.evaluations += 1;
    let d2 = scaled_norm(&(&f1 - f0), y0, tol) / h0;
    let m = d1.max(d2);
    let h1 = if m <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / m).powf(1.0 / 5.0)
    };
    (100.0 * h0).min(h1).min(span)
}

/// Integrate `y' = f(t, y)` from `t0` to `t1`.
///
/// Returns `y(t1)` and the dense-output states at `samples`, which must be
/// sorted and lie in `[t0, t1]`.
pub fn integrate<F>(
    mut f: F,
    t0: f64,
    t1: f64,
    y0: CMatrix,
    samples: &[f64],
    tol: &Tolerances,
    stats: &mut SolverStats,
) -> Result<(CMatrix, Vec<CMatrix>)>
where
    F: FnMut(f64, &CMatrix) -> CMatrix,
{
    if !(t1 >= t0) || !t0.is_finite() || !t1.is_finite() {
        return Err(Error::InvalidParameter(format!("bad time span [{t0}, {t1}]")));
    }
    if samples.windows(2).any(|w| w[1] < w[0]) || samples.iter().any(|&s| s < t0 || s > t1) {
        return Err(Error::InvalidParameter(format!(
            "sample times must be sorted inside [{t0}, {t1}]"
        )));
    }
    let mut out = Vec::with_capacity(samples.len());
    let mut next_sample = 0;
    while next_sample < samples.len() && samples[next_sample] <= t0 {
        out.push(y0.clone());
        next_sample += 1;
    }
    if t1 == t0 {
        return Ok((y0, out));
    }

    let span = t1 - t0;
    let mut t = t0;
    let mut y = y0;
    let mut k1 = f(t, &y);
    stats.evaluations += 1;
    let mut h = initial_step(&mut f, t, &y, &k1, span, tol, stats);
    let mut last_rejected = false;

    for _ in 0..MAX_STEPS {
        if t + h > t1 || (t1 - (t + h)) < 1e-12 * span {
            h = t1 - t;
        }
        let y2 = combo(&y, h, &[(A21, &k1)]);
        let k2 = f(t + C2 * h, &y2);
        let y3 = combo(&y, h, &[(A31, &k1), (A32, &k2)]);
        let k3 = f(t + C3 * h, &y3);
        let y4 = combo(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]);
        let k4 = f(t + C4 * h, &y4);
        let y5 = combo(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]);
        let k5 = f(t + C5 * h, &y5);
        let y6 = combo(&y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]);
        let k6 = f(t + h, &y6);
        let y_new = combo(&y, h, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
        let k7 = f(t + h, &y_new);
        stats.evaluations += 6;

        let err_vec = combo(
            &CMatrix::zeros(y.nrows(), y.ncols()),
            h,
            &[(E1, &k1), (E3, &k3), (E4, &k4), (E5, &k5), (E6, &k6), (E7, &k7)],
        );
        let err = error_norm(&err_vec, &y, &y_new, tol);
        if !err.is_finite() {
            return Err(Error::NonFinite);
        }

        if err <= 1.0 {
            stats.accepted += 1;
            let t_new = t + h;
            if next_sample < samples.len() && samples[next_sample] <= t_new {
                // dense output coefficients
                let r2 = &y_new - &y;
                let r3 = &k1 * c(h) - &r2;
                let r4 = &r2 - &k7 * c(h) - &r3;
                let r5 = combo(
                    &CMatrix::zeros(y.nrows(), y.ncols()),
                    h,
                    &[(D1, &k1), (D3, &k3), (D4, &k4), (D5, &k5), (D6, &k6), (D7, &k7)],
                );
                while next_sample < samples.len() && samples[next_sample] <= t_new {
                    let theta = (samples[next_sample] - t) / h;
                    let th1 = 1.0 - theta;
                    let inner = &r4 + &r5 * c(th1);
                    let inner = &r3 + inner * c(theta);
                    let inner = &r2 + inner * c(th1);
                    out.push(&y + inner * c(theta));
                    next_sample += 1;
                }
            }
            t = t_new;
            y = y_new;
            k1 = k7;
            if t >= t1 {
                while next_sample < samples.len() {
                    out.push(y.clone());
                    next_sample += 1;
                }
                return Ok((y, out));
            }
            let mut fac = (SAFETY * err.max(1e-300).powf(-0.2)).clamp(FAC_MIN, FAC_MAX);
            if last_rejected {
                fac = fac.min(1.0);
            }
            last_rejected = false;
            h *= fac;
        } else {
            stats.rejected += 1;
            last_rejected = true;
            h *= (SAFETY * err.powf(-0.2)).max(FAC_MIN);
        }
        if h < 1e-14 * t.abs().max(span) {
            return Err(Error::StepSizeUnderflow { t, h });
        }
    }
    Err(Error::StepSizeUnderflow { t, h })
}
