//! Dense states and operators on truncated multi-level product spaces.
//!
//! Basis ordering: site 0 (qubit A) is the slowest index, then site 1
//! (qubit B), then the coupler. A product label `|n_A n_B⟩` maps to the
//! flat index `n_A·d_B + n_B`.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub(crate) const HERMITIAN_TOL: f64 = 1e-10;
pub(crate) const NORM_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HilbertSpace {
    levels: Vec<usize>,
    total_dim: usize,
}

impl HilbertSpace {
    pub fn new(levels: &[usize]) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::InvalidSpace("no sites".into()));
        }
        if let Some(&bad) = levels.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidSpace(format!(
                "every site needs at least 2 levels, got {bad}"
            )));
        }
        Ok(Self {
            levels: levels.to_vec(),
            total_dim: levels.iter().product(),
        })
    }

    /// Two three-level Xmons.
    pub fn two_qutrits() -> Self {
        Self::new(&[3, 3]).expect("static space")
    }

    pub fn levels(&self) -> &[usize] {
        &self.levels
    }

    pub fn sites(&self) -> usize {
        self.levels.len()
    }

    pub fn dim(&self) -> usize {
        self.total_dim
    }

    /// Flat index of a product basis state given per-site occupations.
    pub fn index_of(&self, occupations: &[usize]) -> Result<usize> {
        if occupations.len() != self.sites() {
            return Err(Error::LabelNotInBasis(format!("{occupations:?}")));
        }
        let mut idx = 0;
        for (&n, &d) in occupations.iter().zip(&self.levels) {
            if n >= d {
                return Err(Error::LabelNotInBasis(format!("{occupations:?}")));
            }
            idx = idx * d + n;
        }
        Ok(idx)
    }

    /// Parses a compact label such as `"02"` (one digit per site).
    pub fn index_of_label(&self, label: &str) -> Result<usize> {
        let occ = label
            .chars()
            .map(|c| c.to_digit(10).map(|d| d as usize))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::LabelNotInBasis(label.to_string()))?;
        self.index_of(&occ)
            .map_err(|_| Error::LabelNotInBasis(label.to_string()))
    }

    pub fn occupations(&self, mut index: usize) -> Vec<usize> {
        let mut occ = vec![0; self.sites()];
        for (slot, &d) in occ.iter_mut().zip(&self.levels).rev() {
            *slot = index % d;
            index /= d;
        }
        occ
    }

    pub fn label(&self, index: usize) -> String {
        self.occupations(index)
            .iter()
            .map(|n| char::from_digit(*n as u32, 10).unwrap_or('?'))
            .collect()
    }

    /// Product of two spaces in declared site order.
    pub fn compose(&self, other: &HilbertSpace) -> HilbertSpace {
        let mut levels = self.levels.clone();
        levels.extend_from_slice(&other.levels);
        HilbertSpace::new(&levels).expect("composition of valid spaces")
    }
}

impl fmt::Display for HilbertSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.levels.iter().map(|d| d.to_string()).collect();
        write!(f, "[{}]", parts.join("x"))
    }
}

#[derive(Clone, Debug)]
pub struct Operator {
    space: HilbertSpace,
    elements: CMatrix,
    hermitian_hint: bool,
}

impl Operator {
    pub fn new(space: HilbertSpace, elements: CMatrix) -> Result<Self> {
        if elements.nrows() != space.dim() || elements.ncols() != space.dim() {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                found: elements.nrows().max(elements.ncols()),
            });
        }
        Ok(Self {
            space,
            elements,
            hermitian_hint: false,
        })
    }

    /// Builds an operator flagged Hermitian; fails if it is not.
    pub fn hermitian(space: HilbertSpace, elements: CMatrix) -> Result<Self> {
        let mut op = Self::new(space, elements)?;
        let dev = hermiticity_error(&op.elements);
        if dev >= HERMITIAN_TOL {
            return Err(Error::NotHermitian(dev));
        }
        op.hermitian_hint = true;
        Ok(op)
    }

    pub fn identity(space: &HilbertSpace) -> Self {
        let n = space.dim();
        Self {
            space: space.clone(),
            elements: CMatrix::identity(n, n),
            hermitian_hint: true,
        }
    }

    pub fn zeros(space: &HilbertSpace) -> Self {
        let n = space.dim();
        Self {
            space: space.clone(),
            elements: CMatrix::zeros(n, n),
            hermitian_hint: true,
        }
    }

    pub fn space(&self) -> &HilbertSpace {
        &self.space
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.elements
    }

    pub fn into_matrix(self) -> CMatrix {
        self.elements
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn is_hermitian_hint(&self) -> bool {
        self.hermitian_hint
    }

    pub fn element(&self, row: usize, col: usize) -> Complex64 {
        self.elements[(row, col)]
    }

    /// Matrix element between two labelled basis states, `⟨bra|A|ket⟩`.
    pub fn element_by_label(&self, bra: &str, ket: &str) -> Result<Complex64> {
        let r = self.space.index_of_label(bra)?;
        let c = self.space.index_of_label(ket)?;
        Ok(self.elements[(r, c)])
    }

    pub fn dagger(&self) -> Operator {
        Operator {
            space: self.space.clone(),
            elements: self.elements.adjoint(),
            hermitian_hint: self.hermitian_hint,
        }
    }

    pub fn matmul(&self, rhs: &Operator) -> Result<Operator> {
        self.check_same_space(rhs)?;
        Ok(Operator {
            space: self.space.clone(),
            elements: &self.elements * &rhs.elements,
            hermitian_hint: false,
        })
    }

    pub fn add(&self, rhs: &Operator) -> Result<Operator> {
        self.check_same_space(rhs)?;
        Ok(Operator {
            space: self.space.clone(),
            elements: &self.elements + &rhs.elements,
            hermitian_hint: self.hermitian_hint && rhs.hermitian_hint,
        })
    }

    pub fn scale(&self, factor: Complex64) -> Operator {
        Operator {
            space: self.space.clone(),
            elements: &self.elements * factor,
            hermitian_hint: self.hermitian_hint && factor.im == 0.0,
        }
    }

    pub fn apply(&self, psi: &StateVector) -> Result<StateVector> {
        if psi.space() != &self.space {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: psi.space().dim(),
            });
        }
        Ok(StateVector {
            space: self.space.clone(),
            amplitudes: &self.elements * psi.amplitudes(),
        })
    }

    /// Sub-block over a list of basis labels, in the listed order.
    pub fn project(&self, labels: &[&str]) -> Result<CMatrix> {
        let idx = labels
            .iter()
            .map(|l| self.space.index_of_label(l))
            .collect::<Result<Vec<_>>>()?;
        Ok(submatrix(&self.elements, &idx))
    }

    pub fn hermiticity_error(&self) -> f64 {
        hermiticity_error(&self.elements)
    }

    pub fn unitarity_error(&self) -> f64 {
        unitarity_error(&self.elements)
    }

    fn check_same_space(&self, rhs: &Operator) -> Result<()> {
        if self.space != rhs.space {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: rhs.dim(),
            });
        }
        Ok(())
    }
}

/// Re-embeds a block over `labels` into a zero operator on `space`.
pub fn embed(space: &HilbertSpace, block: &CMatrix, labels: &[&str]) -> Result<Operator> {
    if block.nrows() != labels.len() || block.ncols() != labels.len() {
        return Err(Error::DimensionMismatch {
            expected: labels.len(),
            found: block.nrows(),
        });
    }
    let idx = labels
        .iter()
        .map(|l| space.index_of_label(l))
        .collect::<Result<Vec<_>>>()?;
    let mut m = CMatrix::zeros(space.dim(), space.dim());
    for (bi, &i) in idx.iter().enumerate() {
        for (bj, &j) in idx.iter().enumerate() {
            m[(i, j)] = block[(bi, bj)];
        }
    }
    Operator::new(space.clone(), m)
}

pub fn submatrix(m: &CMatrix, idx: &[usize]) -> CMatrix {
    CMatrix::from_fn(idx.len(), idx.len(), |r, c| m[(idx[r], idx[c])])
}

/// Truncated annihilation operator on `site`, identity on the other sites.
pub fn ladder(space: &HilbertSpace, site: usize) -> Result<Operator> {
    if site >= space.sites() {
        return Err(Error::SiteOutOfRange {
            site,
            sites: space.sites(),
        });
    }
    let factors: Vec<CMatrix> = space
        .levels()
        .iter()
        .enumerate()
        .map(|(s, &d)| {
            if s == site {
                local_annihilation(d)
            } else {
                CMatrix::identity(d, d)
            }
        })
        .collect();
    Operator::new(space.clone(), kron_all(&factors))
}

/// `â†â` on `site`.
pub fn number(space: &HilbertSpace, site: usize) -> Result<Operator> {
    let a = ladder(space, site)?;
    let mut n = a.dagger().matmul(&a)?;
    n.hermitian_hint = true;
    Ok(n)
}

/// Embeds a single-site matrix (e.g. `|0⟩⟨1|`) acting on `site`.
pub fn site_operator(space: &HilbertSpace, site: usize, local: &CMatrix) -> Result<Operator> {
    if site >= space.sites() {
        return Err(Error::SiteOutOfRange {
            site,
            sites: space.sites(),
        });
    }
    let d = space.levels()[site];
    if local.nrows() != d || local.ncols() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: local.nrows(),
        });
    }
    let factors: Vec<CMatrix> = space
        .levels()
        .iter()
        .enumerate()
        .map(|(s, &dim)| {
            if s == site {
                local.clone()
            } else {
                CMatrix::identity(dim, dim)
            }
        })
        .collect();
    Operator::new(space.clone(), kron_all(&factors))
}

fn local_annihilation(d: usize) -> CMatrix {
    let mut a = CMatrix::zeros(d, d);
    for n in 1..d {
        a[(n - 1, n)] = Complex64::new((n as f64).sqrt(), 0.0);
    }
    a
}

/// Local `|row⟩⟨col|` on a `d`-level site.
pub fn local_transition(d: usize, row: usize, col: usize) -> CMatrix {
    let mut m = CMatrix::zeros(d, d);
    m[(row, col)] = ONE;
    m
}

/// Kronecker product in declared site order.
pub fn tensor(ops: &[Operator]) -> Result<Operator> {
    let (first, rest) = ops
        .split_first()
        .ok_or_else(|| Error::InvalidSpace("empty tensor product".into()))?;
    let mut space = first.space.clone();
    let mut m = first.elements.clone();
    let mut herm = first.hermitian_hint;
    for op in rest {
        space = space.compose(&op.space);
        m = m.kronecker(&op.elements);
        herm &= op.hermitian_hint;
    }
    Ok(Operator {
        space,
        elements: m,
        hermitian_hint: herm,
    })
}

fn kron_all(factors: &[CMatrix]) -> CMatrix {
    factors
        .iter()
        .skip(1)
        .fold(factors[0].clone(), |acc, f| acc.kronecker(f))
}

pub fn hermiticity_error(m: &CMatrix) -> f64 {
    let mut worst: f64 = 0.0;
    for r in 0..m.nrows() {
        for c in r..m.ncols() {
            worst = worst.max((m[(r, c)] - m[(c, r)].conj()).norm());
        }
    }
    worst
}

pub fn unitarity_error(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let prod = m.adjoint() * m;
    max_abs_diff(&prod, &CMatrix::identity(n, n))
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

#[derive(Clone, Debug)]
pub struct StateVector {
    space: HilbertSpace,
    amplitudes: CVector,
}

impl StateVector {
    /// Wraps amplitudes that must already be normalised.
    pub fn new(space: HilbertSpace, amplitudes: CVector) -> Result<Self> {
        if amplitudes.len() != space.dim() {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                found: amplitudes.len(),
            });
        }
        if amplitudes.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState(format!("norm {norm} is not 1")));
        }
        Ok(Self { space, amplitudes })
    }

    /// Normalises arbitrary non-zero amplitudes.
    pub fn normalized(space: HilbertSpace, amplitudes: CVector) -> Result<Self> {
        let norm = amplitudes.norm();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::InvalidState("zero or non-finite vector".into()));
        }
        Self::new(space, amplitudes / Complex64::new(norm, 0.0))
    }

    pub fn basis(space: &HilbertSpace, label: &str) -> Result<Self> {
        let idx = space.index_of_label(label)?;
        let mut v = CVector::zeros(space.dim());
        v[idx] = ONE;
        Ok(Self {
            space: space.clone(),
            amplitudes: v,
        })
    }

    /// Equal-weight superposition of labelled basis states.
    pub fn superposition(space: &HilbertSpace, labels: &[&str]) -> Result<Self> {
        let mut v = CVector::zeros(space.dim());
        for l in labels {
            v[space.index_of_label(l)?] += ONE;
        }
        Self::normalized(space.clone(), v)
    }

    /// Product state from per-site amplitude vectors.
    pub fn product(space: &HilbertSpace, sites: &[CVector]) -> Result<Self> {
        if sites.len() != space.sites() {
            return Err(Error::DimensionMismatch {
                expected: space.sites(),
                found: sites.len(),
            });
        }
        let mut v = sites[0].clone();
        for s in &sites[1..] {
            v = v.kronecker(s);
        }
        Self::normalized(space.clone(), v)
    }

    pub fn space(&self) -> &HilbertSpace {
        &self.space
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn amplitude(&self, label: &str) -> Result<Complex64> {
        Ok(self.amplitudes[self.space.index_of_label(label)?])
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    pub fn populations(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix {
            space: self.space.clone(),
            elements: &self.amplitudes * self.amplitudes.adjoint(),
        }
    }

    pub(crate) fn from_raw(space: HilbertSpace, amplitudes: CVector) -> Self {
        Self { space, amplitudes }
    }
}

#[derive(Clone, Debug)]
pub struct DensityMatrix {
    space: HilbertSpace,
    elements: CMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity before wrapping.
    pub fn new(space: HilbertSpace, elements: CMatrix) -> Result<Self> {
        if elements.nrows() != space.dim() || elements.ncols() != space.dim() {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                found: elements.nrows(),
            });
        }
        let rho = Self { space, elements };
        rho.validate(1e-8)?;
        Ok(rho)
    }

    pub fn maximally_mixed_over(space: &HilbertSpace, labels: &[&str]) -> Result<Self> {
        let mut m = CMatrix::zeros(space.dim(), space.dim());
        let w = Complex64::new(1.0 / labels.len() as f64, 0.0);
        for l in labels {
            let i = space.index_of_label(l)?;
            m[(i, i)] = w;
        }
        Self::new(space.clone(), m)
    }

    pub fn space(&self) -> &HilbertSpace {
        &self.space
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.elements
    }

    pub fn trace(&self) -> Complex64 {
        self.elements.trace()
    }

    pub fn purity(&self) -> f64 {
        (&self.elements * &self.elements).trace().re
    }

    pub fn populations(&self) -> Vec<f64> {
        (0..self.space.dim()).map(|i| self.elements[(i, i)].re).collect()
    }

    pub fn population(&self, label: &str) -> Result<f64> {
        let i = self.space.index_of_label(label)?;
        Ok(self.elements[(i, i)].re)
    }

    /// `⟨ψ|ρ|ψ⟩` for an arbitrary (not necessarily normalised) vector.
    pub fn expectation_in(&self, psi: &CVector) -> f64 {
        (psi.adjoint() * &self.elements * psi)[(0, 0)].re
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.elements
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min)
    }

    /// Checks the density-matrix invariants at tolerance `tol`.
    pub fn validate(&self, tol: f64) -> Result<()> {
        if self.elements.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let herm = hermiticity_error(&self.elements);
        if herm > tol.max(HERMITIAN_TOL) {
            return Err(Error::InvalidState(format!("not Hermitian ({herm:e})")));
        }
        let tr = self.trace();
        if (tr.re - 1.0).abs() > tol || tr.im.abs() > tol {
            return Err(Error::InvalidState(format!("trace {tr} is not 1")));
        }
        let min = self.min_eigenvalue();
        if min < -tol {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        Ok(())
    }

    pub(crate) fn from_raw(space: HilbertSpace, elements: CMatrix) -> Self {
        Self { space, elements }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn space_rejects_single_level_sites() {
        assert!(HilbertSpace::new(&[3, 1]).is_err());
        assert!(HilbertSpace::new(&[]).is_err());
        assert_eq!(HilbertSpace::new(&[3, 3, 3]).unwrap().dim(), 27);
    }

    #[test]
    fn labels_follow_site_a_slowest_ordering() {
        let s = HilbertSpace::two_qutrits();
        assert_eq!(s.index_of_label("00").unwrap(), 0);
        assert_eq!(s.index_of_label("02").unwrap(), 2);
        assert_eq!(s.index_of_label("10").unwrap(), 3);
        assert_eq!(s.index_of_label("21").unwrap(), 7);
        assert_eq!(s.label(5), "12");
        assert!(matches!(
            s.index_of_label("30"),
            Err(Error::LabelNotInBasis(_))
        ));
        assert!(s.index_of_label("0").is_err());
    }

    #[test]
    fn single_site_ladder_elements() {
        let s = HilbertSpace::new(&[3]).unwrap();
        let a = ladder(&s, 0).unwrap();
        assert_eq!(a.element(0, 1), c(1.0));
        assert_relative_eq!(a.element(1, 2).re, 2f64.sqrt(), epsilon = 1e-15);
        let ground = StateVector::basis(&s, "0").unwrap();
        let out = a.apply(&ground).unwrap();
        assert!(out.amplitudes().iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn two_site_ladder_matches_hand_built_matrix() {
        let s = HilbertSpace::two_qutrits();
        let a_b = ladder(&s, 1).unwrap();
        // Hand-built: â_B = I₃ ⊗ â, so ⟨n_A, m-1| â_B |n_A, m⟩ = √m.
        let mut hand = CMatrix::zeros(9, 9);
        for na in 0..3 {
            for m in 1..3 {
                hand[(na * 3 + m - 1, na * 3 + m)] = c((m as f64).sqrt());
            }
        }
        assert_eq!(max_abs_diff(a_b.matrix(), &hand), 0.0);
        assert_relative_eq!(
            a_b.element_by_label("01", "02").unwrap().re,
            2f64.sqrt(),
            epsilon = 1e-15
        );
        // The |10⟩ column only maps within the n_A = 1 block.
        let col = s.index_of_label("10").unwrap();
        assert!((0..9).all(|r| a_b.element(r, col).norm() == 0.0));
        assert!(matches!(
            ladder(&s, 2),
            Err(Error::SiteOutOfRange { site: 2, sites: 2 })
        ));
    }

    #[test]
    fn truncated_commutator_has_corner_artifact() {
        for d in 2..6 {
            let s = HilbertSpace::new(&[d]).unwrap();
            let a = ladder(&s, 0).unwrap();
            let ad = a.dagger();
            let comm = a.matmul(&ad).unwrap().matrix() - ad.matmul(&a).unwrap().matrix();
            let mut expected = CMatrix::identity(d, d);
            expected[(d - 1, d - 1)] = c(1.0 - d as f64);
            assert!(max_abs_diff(&comm, &expected) < 1e-14, "d = {d}");
        }
    }

    #[test]
    fn tensor_examples() {
        let q = HilbertSpace::new(&[2]).unwrap();
        let id = Operator::identity(&q);
        let i4 = tensor(&[id.clone(), id.clone()]).unwrap();
        assert_eq!(i4.matrix(), &CMatrix::identity(4, 4));

        let sx = Operator::new(
            q.clone(),
            CMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)]),
        )
        .unwrap();
        let op = tensor(&[sx, id]).unwrap();
        let psi = StateVector::basis(op.space(), "00").unwrap();
        let out = op.apply(&psi).unwrap();
        assert_eq!(out.amplitude("10").unwrap(), ONE);

        let s = HilbertSpace::two_qutrits();
        let total = number(&s, 0).unwrap().add(&number(&s, 1).unwrap()).unwrap();
        let idx = s.index_of_label("11").unwrap();
        assert_eq!(total.element(idx, idx), c(2.0));
    }

    #[test]
    fn projection_and_embedding_round_trip() {
        let s = HilbertSpace::two_qutrits();
        let id = Operator::identity(&s);
        let block = id.project(&["00", "01", "10", "11"]).unwrap();
        assert_eq!(block, CMatrix::identity(4, 4));
        assert!(matches!(
            id.project(&["00", "33"]),
            Err(Error::LabelNotInBasis(_))
        ));

        let labels = ["11", "02", "20"];
        let blk = CMatrix::from_fn(3, 3, |r, cc| Complex64::new((r + 2 * cc) as f64, r as f64));
        let embedded = embed(&s, &blk, &labels).unwrap();
        assert_eq!(embedded.project(&labels).unwrap(), blk);
    }

    #[test]
    fn density_matrix_validation() {
        let s = HilbertSpace::two_qutrits();
        let mixed = DensityMatrix::maximally_mixed_over(&s, &["00", "01", "10", "11"]).unwrap();
        assert_relative_eq!(mixed.purity(), 0.25, epsilon = 1e-15);
        let mut bad = CMatrix::zeros(9, 9);
        bad[(0, 0)] = c(2.0);
        assert!(DensityMatrix::new(s.clone(), bad).is_err());
        let mut neg = CMatrix::zeros(9, 9);
        neg[(0, 0)] = c(1.5);
        neg[(1, 1)] = c(-0.5);
        assert!(DensityMatrix::new(s, neg).is_err());
    }

    #[test]
    fn state_vector_requires_unit_norm() {
        let s = HilbertSpace::new(&[2]).unwrap();
        let v = CVector::from_vec(vec![c(1.0), c(1.0)]);
        assert!(StateVector::new(s.clone(), v.clone()).is_err());
        let psi = StateVector::normalized(s, v).unwrap();
        assert!((psi.norm() - 1.0).abs() < 1e-15);
    }
}
