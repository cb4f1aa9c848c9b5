//! Bessel functions of the first kind for the sideband coupling `J₁(ε/ν)`.

use std::f64::consts::{FRAC_PI_4, PI};

const SERIES_LIMIT: f64 = 8.0;
const ASYMPTOTIC_LIMIT: f64 = 1.0e3;

/// `J₁(x)`, accurate to ~1e-13 absolute. Odd in `x`.
pub fn bessel_j1(x: f64) -> f64 {
    if x < 0.0 {
        return -bessel_j1(-x);
    }
    if x <= SERIES_LIMIT {
        series(1, x)
    } else if x <= ASYMPTOTIC_LIMIT {
        miller(1, x)
    } else {
        hankel_j1(x)
    }
}

/// `J₀(x)`.
pub fn bessel_j0(x: f64) -> f64 {
    let x = x.abs();
    if x <= SERIES_LIMIT {
        series(0, x)
    } else {
        miller(0, x)
    }
}

/// Integer-order `J_n(x)` for `n ≥ 0`.
pub fn bessel_jn(n: u32, x: f64) -> f64 {
    let sign = if x < 0.0 && n % 2 == 1 { -1.0 } else { 1.0 };
    let x = x.abs();
    let v = if x <= SERIES_LIMIT {
        series(n, x)
    } else {
        miller(n, x)
    };
    sign * v
}

// Σ_k (−1)^k (x/2)^{2k+n} / (k! (k+n)!)
fn series(n: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut term = (1..=n).fold(1.0, |acc, k| acc * half / k as f64);
    let mut sum = term;
    let q = half * half;
    for k in 1..200 {
        term *= -q / (k as f64 * (k + n as usize) as f64);
        sum += term;
        if term.abs() < 1e-17 * sum.abs().max(1e-300) {
            break;
        }
    }
    sum
}

// Downward recurrence J_{k-1} = (2k/x) J_k − J_{k+1}, normalised with
// J₀ + 2 Σ J_{2k} = 1.
fn miller(n: u32, x: f64) -> f64 {
    let n = n as usize;
    let start = {
        let guess = x + 30.0 + (50.0 * x).sqrt();
        let m = (guess as usize).max(n + 20);
        m + (m % 2)
    };
    let mut j_next = 0.0;
    let mut j_cur = 1e-300;
    let mut wanted = 0.0;
    let mut norm = 0.0;
    for k in (1..=start).rev() {
        let j_prev = 2.0 * k as f64 / x * j_cur - j_next;
        j_next = j_cur;
        j_cur = j_prev;
        // j_cur now holds J_{k-1}
        if k - 1 == n {
            wanted = j_cur;
        }
        if (k - 1) % 2 == 0 && k - 1 > 0 {
            norm += 2.0 * j_cur;
        }
        if j_cur.abs() > 1e250 {
            j_cur *= 1e-250;
            j_next *= 1e-250;
            wanted *= 1e-250;
            norm *= 1e-250;
        }
    }
    norm += j_cur;
    wanted / norm
}

fn hankel_j1(x: f64) -> f64 {
    let mu = 4.0;
    let z = 8.0 * x;
    let p = 1.0 - (mu - 1.0) * (mu - 9.0) / (2.0 * z * z)
        + (mu - 1.0) * (mu - 9.0) * (mu - 25.0) * (mu - 49.0) / (24.0 * z.powi(4));
    let q = (mu - 1.0) / z - (mu - 1.0) * (mu - 9.0) * (mu - 25.0) / (6.0 * z.powi(3));
    let chi = x - 3.0 * FRAC_PI_4;
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}
