//! Matrix exponentials for propagators `U = exp(−iHt)`.
//!
//! Hermitian generators go through an eigendecomposition; anything else
//! uses scaling-and-squaring with a degree-13 Padé approximant
//! (Higham 2005). The two routes are cross-checked in the tests.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::{hermiticity_error, CMatrix, Operator, HERMITIAN_TOL};

/// `exp(scale · op)`.
pub fn expm(op: &Operator, scale: Complex64) -> Result<Operator> {
    let m = expm_matrix(op.matrix(), scale)?;
    Operator::new(op.space().clone(), m)
}

pub fn expm_matrix(m: &CMatrix, scale: Complex64) -> Result<CMatrix> {
    if !is_finite(m) || !scale.re.is_finite() || !scale.im.is_finite() {
        return Err(Error::NonFinite);
    }
    if hermiticity_error(m) < HERMITIAN_TOL {
        Ok(expm_hermitian(m, scale))
    } else {
        expm_pade(&(m * scale))
    }
}

/// `exp(scale · H)` for Hermitian `H` via `H = V diag(λ) V†`.
pub fn expm_hermitian(h: &CMatrix, scale: Complex64) -> CMatrix {
    let eig = h.clone().symmetric_eigen();
    let v = &eig.eigenvectors;
    let mut scaled = v.clone();
    for (j, lambda) in eig.eigenvalues.iter().enumerate() {
        let f = (scale * lambda).exp();
        for i in 0..scaled.nrows() {
            scaled[(i, j)] *= f;
        }
    }
    scaled * v.adjoint()
}

/// Propagator `exp(−i H t)` of a Hermitian generator.
pub fn propagator(h: &CMatrix, t: f64) -> CMatrix {
    expm_hermitian(h, Complex64::new(0.0, -t))
}

const THETA_13: f64 = 5.371_920_351_148_152;

const PADE_13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];

/// Scaling-and-squaring Padé(13) exponential of a general square matrix.
pub fn expm_pade(a: &CMatrix) -> Result<CMatrix> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: a.ncols(),
        });
    }
    if !is_finite(a) {
        return Err(Error::NonFinite);
    }
    if n == 0 {
        return Ok(CMatrix::zeros(0, 0));
    }
    let norm = one_norm(a);
    let squarings = if norm > THETA_13 {
        (norm / THETA_13).log2().ceil() as i32
    } else {
        0
    };
    let a = a * Complex64::new(2f64.powi(-squarings), 0.0);

    let id = CMatrix::identity(n, n);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let b = |k: usize| Complex64::new(PADE_13[k], 0.0);

    let u_inner = &a6 * (&a6 * b(13) + &a4 * b(11) + &a2 * b(9))
        + &a6 * b(7)
        + &a4 * b(5)
        + &a2 * b(3)
        + &id * b(1);
    let u = &a * u_inner;
    let v = &a6 * (&a6 * b(12) + &a4 * b(10) + &a2 * b(8))
        + &a6 * b(6)
        + &a4 * b(4)
        + &a2 * b(2)
        + &id * b(0);

    let p = &v + &u;
    let q = &v - &u;
    let mut r = q.lu().solve(&p).ok_or(Error::NonFinite)?;
    for _ in 0..squarings {
        r = &r * &r;
    }
    if !is_finite(&r) {
        return Err(Error::NonFinite);
    }
    Ok(r)
}

fn one_norm(a: &CMatrix) -> f64 {
    (0..a.ncols())
        .map(|j| a.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn is_finite(m: &CMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{max_abs_diff, unitarity_error, HilbertSpace, ONE, ZERO};
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn random_hermitian(n: usize, seed: &[f64]) -> CMatrix {
        let mut m = CMatrix::zeros(n, n);
        let mut k = 0;
        for i in 0..n {
            for j in i..n {
                let re = seed[k % seed.len()];
                let im = if i == j { 0.0 } else { seed[(k + 7) % seed.len()] };
                m[(i, j)] = Complex64::new(re, im);
                m[(j, i)] = Complex64::new(re, -im);
                k += 1;
            }
        }
        m
    }

    #[test]
    fn zero_generator_gives_identity() {
        let s = HilbertSpace::two_qutrits();
        let z = Operator::zeros(&s);
        let u = expm(&z, Complex64::new(0.0, -1.0)).unwrap();
        assert_eq!(u.matrix(), &CMatrix::identity(9, 9));
    }

    #[test]
    fn rabi_half_period_gives_minus_i_sigma_x() {
        let sx = CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]);
        let u = expm_matrix(&sx, Complex64::new(0.0, -PI / 2.0)).unwrap();
        let expected = &sx * Complex64::new(0.0, -1.0);
        assert!(max_abs_diff(&u, &expected) < 1e-14);
        let u_pade = expm_pade(&(&sx * Complex64::new(0.0, -PI / 2.0))).unwrap();
        assert!(max_abs_diff(&u_pade, &expected) < 1e-14);
    }

    #[test]
    fn non_finite_input_is_rejected() {
        let mut m = CMatrix::identity(2, 2);
        m[(0, 1)] = Complex64::new(f64::NAN, 0.0);
        assert!(matches!(expm_pade(&m), Err(Error::NonFinite)));
        assert!(matches!(
            expm_matrix(&m, Complex64::new(1.0, 0.0)),
            Err(Error::NonFinite)
        ));
    }

    #[test]
    fn pade_handles_non_normal_input() {
        // Nilpotent Jordan block: exp(N) = I + N.
        let mut n = CMatrix::zeros(3, 3);
        n[(0, 1)] = ONE;
        n[(1, 2)] = ONE;
        let e = expm_pade(&n).unwrap();
        let mut expected = CMatrix::identity(3, 3) + &n;
        expected[(0, 2)] = Complex64::new(0.5, 0.0);
        assert!(max_abs_diff(&e, &expected) < 1e-14);
    }

    proptest! {
        #[test]
        fn eig_and_pade_routes_agree_on_hermitian_input(
            seed in proptest::collection::vec(-3.0f64..3.0, 45),
            t in 0.0f64..4.0,
            n in 2usize..10,
        ) {
            let h = random_hermitian(n, &seed);
            let scale = Complex64::new(0.0, -t);
            let via_eig = expm_hermitian(&h, scale);
            let via_pade = expm_pade(&(&h * scale)).unwrap();
            prop_assert!(max_abs_diff(&via_eig, &via_pade) < 1e-9);
            prop_assert!(unitarity_error(&via_eig) < 1e-9);
            prop_assert!(unitarity_error(&via_pade) < 1e-9);
        }
    }
}
