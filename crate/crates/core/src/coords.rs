//! Real coordinates on the space of Hermitian `n×n` matrices.
//!
//! The basis is frozen as `herm-orthonormal-v1`:
//!
//! 1. `D_i = E_ii` for `i = 0..n`;
//! 2. for every pair `i < j` in lexicographic order, `S_ij = (E_ij + E_ji)/√2`
//!    followed by `A_ij = i(E_ji − E_ij)/√2`.
//!
//! The basis is orthonormal for `⟨A, B⟩ = tr(AB)`, so coordinates are an
//! isometry onto `R^{n²}`. For `n = 2` it relates to the Pauli set by
//! `D_0 = (σ0 + σ3)/2`, `D_1 = (σ0 − σ3)/2`, `S_01 = σ1/√2`, `A_01 = σ2/√2`;
//! [`pauli_coords`] gives `x_k = tr(A σ_k)/2` directly.

use thiserror::Error;

use crate::linalg::{c64, ComplexMatrix, HermitianMatrix, LinalgError, Projection, RngState};

pub const BASIS_FORMAT: &str = "herm-orthonormal-v1";

const SQRT2: f64 = std::f64::consts::SQRT_2;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoordsError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimMismatch { expected: usize, found: usize },
    #[error("operation needs n = 2, got n = {found}")]
    WrongDim { found: usize },
    #[error("expected a rank-{expected} projection, got rank {found}")]
    WrongRank { expected: usize, found: usize },
    #[error("map is not additive (defect {defect:e})")]
    NonLinear { defect: f64 },
    #[error("operator entries must be finite")]
    NonFinite,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Which element of the ordered basis sits at a coordinate index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisElement {
    Diagonal(usize),
    Symmetric(usize, usize),
    Antisymmetric(usize, usize),
}

/// The ordered orthonormal basis of `Herm(C^n)`.
#[derive(Debug, Clone)]
pub struct HermBasis {
    n: usize,
    labels: Vec<BasisElement>,
}

impl HermBasis {
    pub fn new(n: usize) -> Self {
        let mut labels: Vec<BasisElement> = (0..n).map(BasisElement::Diagonal).collect();
        for i in 0..n {
            for j in i + 1..n {
                labels.push(BasisElement::Symmetric(i, j));
                labels.push(BasisElement::Antisymmetric(i, j));
            }
        }
        Self { n, labels }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[BasisElement] {
        &self.labels
    }

    /// The matrix of the `index`-th basis element.
    pub fn element(&self, index: usize) -> HermitianMatrix {
        let mut m = HermitianMatrix::zeros(self.n);
        match self.labels[index] {
            BasisElement::Diagonal(i) => m.set(i, i, c64(1.0, 0.0)),
            BasisElement::Symmetric(i, j) => m.set(i, j, c64(1.0 / SQRT2, 0.0)),
            // i(E_ji − E_ij)/√2 has entry −i/√2 at (i, j).
            BasisElement::Antisymmetric(i, j) => m.set(i, j, c64(0.0, -1.0 / SQRT2)),
        }
        m
    }

    pub fn elements(&self) -> Vec<HermitianMatrix> {
        (0..self.len()).map(|a| self.element(a)).collect()
    }

    /// `tr(B_a)` for every basis element: 1 on diagonals, 0 otherwise.
    pub fn trace_row(&self) -> Vec<f64> {
        self.labels
            .iter()
            .map(|l| {
                if matches!(l, BasisElement::Diagonal(_)) {
                    1.0
                } else {
                    0.0
                }
            })
            .collect()
    }
}

/// Coordinates `c_a = tr(A B_a)` of a Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct HermCoords {
    dim: usize,
    values: Vec<f64>,
}

impl HermCoords {
    pub fn new(dim: usize, values: Vec<f64>) -> Result<Self, CoordsError> {
        if values.len() != dim * dim {
            return Err(CoordsError::DimMismatch {
                expected: dim * dim,
                found: values.len(),
            });
        }
        Ok(Self { dim, values })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn norm(&self) -> f64 {
        self.values.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

pub fn to_coords(a: &HermitianMatrix) -> HermCoords {
    let n = a.dim();
    let mut values = Vec::with_capacity(n * n);
    values.extend((0..n).map(|i| a.get(i, i).re));
    for i in 0..n {
        for j in i + 1..n {
            let z = a.get(i, j);
            values.push(SQRT2 * z.re);
            values.push(-SQRT2 * z.im);
        }
    }
    HermCoords { dim: n, values }
}

pub fn from_coords(c: &HermCoords) -> HermitianMatrix {
    let n = c.dim;
    let mut a = HermitianMatrix::zeros(n);
    for i in 0..n {
        a.set(i, i, c64(c.values[i], 0.0));
    }
    let mut k = n;
    for i in 0..n {
        for j in i + 1..n {
            let s = c.values[k];
            let t = c.values[k + 1];
            a.set(i, j, c64(s / SQRT2, -t / SQRT2));
            k += 2;
        }
    }
    a
}

/// `(x0, x1, x2, x3)` with `A = Σ x_k σ_k`.
pub fn pauli_coords(a: &HermitianMatrix) -> Result<[f64; 4], CoordsError> {
    if a.dim() != 2 {
        return Err(CoordsError::WrongDim { found: a.dim() });
    }
    let a00 = a.get(0, 0).re;
    let a11 = a.get(1, 1).re;
    let a01 = a.get(0, 1);
    Ok([(a00 + a11) / 2.0, a01.re, -a01.im, (a00 - a11) / 2.0])
}

/// Inverse of [`pauli_coords`].
pub fn from_pauli(x: [f64; 4]) -> HermitianMatrix {
    let mut a = HermitianMatrix::zeros(2);
    a.set(0, 0, c64(x[0] + x[3], 0.0));
    a.set(1, 1, c64(x[0] - x[3], 0.0));
    a.set(0, 1, c64(x[1], -x[2]));
    a
}

/// Real-linear operator on `Herm(C^n)` as an `n²×n²` matrix acting on
/// [`HermCoords`]: `c(L(A)) = M c(A)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperOperator {
    dim: usize,
    entries: Vec<f64>,
}

impl SuperOperator {
    /// Row-major `n²×n²` entries.
    pub fn new(dim: usize, entries: Vec<f64>) -> Result<Self, CoordsError> {
        let size = dim * dim;
        if entries.len() != size * size {
            return Err(CoordsError::DimMismatch {
                expected: size * size,
                found: entries.len(),
            });
        }
        if entries.iter().any(|x| !x.is_finite()) {
            return Err(CoordsError::NonFinite);
        }
        Ok(Self { dim, entries })
    }

    pub fn from_rows(dim: usize, rows: &[Vec<f64>]) -> Result<Self, CoordsError> {
        let size = dim * dim;
        if rows.len() != size {
            return Err(CoordsError::DimMismatch {
                expected: size,
                found: rows.len(),
            });
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != size) {
            return Err(CoordsError::DimMismatch {
                expected: size,
                found: bad.len(),
            });
        }
        Self::new(dim, rows.concat())
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![0.0; dim.pow(4)],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let size = dim * dim;
        let mut out = Self::zeros(dim);
        for a in 0..size {
            out.entries[a * size + a] = 1.0;
        }
        out
    }

    /// Dimension `n` of the underlying Hilbert space.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Side length `n²` of the real matrix.
    pub fn size(&self) -> usize {
        self.dim * self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[row * self.size() + col]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.entries
            .chunks(self.size())
            .map(|r| r.to_vec())
            .collect()
    }

    pub fn apply_coords(&self, c: &HermCoords) -> HermCoords {
        assert_eq!(c.dim, self.dim, "apply: dimension mismatch");
        let size = self.size();
        let values = self
            .entries
            .chunks(size)
            .map(|row| row.iter().zip(&c.values).map(|(m, x)| m * x).sum())
            .collect();
        HermCoords {
            dim: self.dim,
            values,
        }
    }

    /// `L(A)`.
    pub fn apply(&self, a: &HermitianMatrix) -> HermitianMatrix {
        from_coords(&self.apply_coords(&to_coords(a)))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "compose: dimension mismatch");
        let size = self.size();
        let mut entries = vec![0.0; size * size];
        for i in 0..size {
            for k in 0..size {
                let a = self.entries[i * size + k];
                if a == 0.0 {
                    continue;
                }
                for j in 0..size {
                    entries[i * size + j] += a * other.entries[k * size + j];
                }
            }
        }
        Self {
            dim: self.dim,
            entries,
        }
    }

    pub fn transpose(&self) -> Self {
        let size = self.size();
        let mut entries = vec![0.0; size * size];
        for i in 0..size {
            for j in 0..size {
                entries[j * size + i] = self.entries[i * size + j];
            }
        }
        Self {
            dim: self.dim,
            entries,
        }
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|x| x * factor).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "add: dimension mismatch");
        Self {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Largest entrywise absolute difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Tabulates a real-linear map on `Herm(C^n)`: column `a` is `c(apply(B_a))`.
///
/// Additivity is spot-checked on five random pairs drawn from a fixed seed.
pub fn superop_from_action(
    apply: impl Fn(&HermitianMatrix) -> HermitianMatrix,
    n: usize,
) -> Result<SuperOperator, CoordsError> {
    let basis = HermBasis::new(n);
    let size = n * n;
    let mut entries = vec![0.0; size * size];
    for a in 0..size {
        let image = apply(&basis.element(a));
        if image.dim() != n {
            return Err(CoordsError::DimMismatch {
                expected: n,
                found: image.dim(),
            });
        }
        if !image.is_finite() {
            return Err(CoordsError::NonFinite);
        }
        for (row, value) in to_coords(&image).values.into_iter().enumerate() {
            entries[row * size + a] = value;
        }
    }

    let mut rng = RngState::new(0x0005_eed0_f11e);
    for _ in 0..5 {
        let x = rng.random_hermitian(n);
        let y = rng.random_hermitian(n);
        let lhs = apply(&x.add(&y));
        let rhs = apply(&x).add(&apply(&y));
        let defect = lhs.sub(&rhs).frobenius_norm();
        if defect > 1e-8 * (x.frobenius_norm() + y.frobenius_norm()) {
            return Err(CoordsError::NonLinear { defect });
        }
    }
    SuperOperator::new(n, entries)
}

/// `A ↦ U A U*`, or `A ↦ U Aᵀ U*` when `antilinear` (the anti-unitary `U K`
/// with `K` the entrywise conjugation in the standard basis).
pub fn embed_isometry(u: &ComplexMatrix, antilinear: bool) -> Result<SuperOperator, CoordsError> {
    u.check_unitary(1e-10)?;
    let n = u.rows();
    superop_from_action(
        |a| {
            if antilinear {
                a.conj().conjugate_by(u)
            } else {
                a.conjugate_by(u)
            }
        },
        n,
    )
}

/// `A ↦ tr(A) P` for a rank-one projection `P`; the real matrix is `c(P) dᵀ`
/// with `d_a = tr(B_a)`.
pub fn embed_trace_constant(p: &Projection) -> Result<SuperOperator, CoordsError> {
    if p.rank() != 1 {
        return Err(CoordsError::WrongRank {
            expected: 1,
            found: p.rank(),
        });
    }
    let n = p.dim();
    let target = to_coords(p.matrix());
    let trace_row = HermBasis::new(n).trace_row();
    let entries = target
        .values
        .iter()
        .flat_map(|ci| trace_row.iter().map(move |d| ci * d))
        .collect();
    SuperOperator::new(n, entries)
}
