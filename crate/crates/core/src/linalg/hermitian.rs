use super::{c64, ComplexMatrix, LinalgError, C64};

/// Hermitian `n×n` matrix.
///
/// Only the upper triangle is stored (row by row, diagonal included) and the
/// diagonal is kept real, so `A = A*` holds exactly; the lower triangle is
/// mirrored on read.
#[derive(Clone, PartialEq)]
pub struct HermitianMatrix {
    n: usize,
    upper: Vec<C64>,
}

#[inline]
fn packed_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i <= j && j < n);
    i * n - i * (i + 1) / 2 + j
}

impl HermitianMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            upper: vec![c64(0.0, 0.0); n * (n + 1) / 2],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_real_diag(&vec![1.0; n])
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        let mut out = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            out.set(i, i, c64(d, 0.0));
        }
        out
    }

    /// `(M + M*)/2`, the Hermitian part of a square matrix.
    pub fn hermitian_part(m: &ComplexMatrix) -> Result<Self, LinalgError> {
        if !m.is_square() {
            return Err(LinalgError::NotSquare {
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        let n = m.rows();
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in i..n {
                out.set(i, j, (m.get(i, j) + m.get(j, i).conj()) * 0.5);
            }
        }
        Ok(out)
    }

    /// Accepts `m` only if `‖M − M*‖_F ≤ tol`.
    pub fn from_matrix(m: &ComplexMatrix, tol: f64) -> Result<Self, LinalgError> {
        if !m.is_square() {
            return Err(LinalgError::NotSquare {
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        let deviation = (m - &m.adjoint()).frobenius_norm();
        if deviation > tol {
            return Err(LinalgError::NotHermitian { deviation });
        }
        Self::hermitian_part(m)
    }

    /// Rank-one `v v*`.
    pub fn outer(v: &[C64]) -> Self {
        let n = v.len();
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in i..n {
                out.set(i, j, v[i] * v[j].conj());
            }
        }
        out
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        if i <= j {
            self.upper[packed_index(self.n, i, j)]
        } else {
            self.upper[packed_index(self.n, j, i)].conj()
        }
    }

    /// Writes entry `(i, j)` and implicitly its mirror `(j, i)`. Diagonal
    /// writes drop the imaginary part.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: C64) {
        if i == j {
            self.upper[packed_index(self.n, i, i)] = c64(value.re, 0.0);
        } else if i < j {
            self.upper[packed_index(self.n, i, j)] = value;
        } else {
            self.upper[packed_index(self.n, j, i)] = value.conj();
        }
    }

    pub fn to_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.n, self.n, |i, j| self.get(i, j))
    }

    pub fn is_finite(&self) -> bool {
        self.upper
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i).re).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.n {
            acc += self.get(i, i).norm_sqr();
            for j in i + 1..self.n {
                acc += 2.0 * self.get(i, j).norm_sqr();
            }
        }
        acc.sqrt()
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            n: self.n,
            upper: self.upper.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "add: dimension mismatch");
        Self {
            n: self.n,
            upper: self
                .upper
                .iter()
                .zip(&other.upper)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "sub: dimension mismatch");
        Self {
            n: self.n,
            upper: self
                .upper
                .iter()
                .zip(&other.upper)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// Entrywise conjugate, which for a Hermitian matrix equals its transpose.
    pub fn conj(&self) -> Self {
        Self {
            n: self.n,
            upper: self.upper.iter().map(|z| z.conj()).collect(),
        }
    }

    /// `U A U*` for a square `U` of matching size.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Self {
        let product = u.matmul(&self.to_matrix()).matmul(&u.adjoint());
        Self::hermitian_part(&product).expect("square by construction")
    }

    /// `tr(A B)`, real for Hermitian arguments.
    pub fn trace_product(&self, other: &Self) -> f64 {
        assert_eq!(self.n, other.n, "trace_product: dimension mismatch");
        let mut acc = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                acc += (self.get(i, j) * other.get(j, i)).re;
            }
        }
        acc
    }

    /// `A B − B A`.
    pub fn commutator(&self, other: &Self) -> ComplexMatrix {
        let a = self.to_matrix();
        let b = other.to_matrix();
        &a.matmul(&b) - &b.matmul(&a)
    }

    /// Quadratic form `x* A y`.
    pub fn sandwich(&self, x: &[C64], y: &[C64]) -> C64 {
        let ay = self.to_matrix().matvec(y);
        super::inner(x, &ay)
    }
}

impl std::fmt::Debug for HermitianMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Hermitian{:?}", self.to_matrix())
    }
}
