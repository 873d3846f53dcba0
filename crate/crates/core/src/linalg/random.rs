use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{c64, inner, vec_norm, ComplexMatrix, HermitianMatrix, Projection, SubspaceBasis, C64};

/// Deterministic random stream keyed by a 64-bit seed.
///
/// `fork` hands out independent child streams keyed by `(seed, counter)`, so
/// a caller can give every trial its own reproducible seed.
#[derive(Debug, Clone)]
pub struct RngState {
    seed: u64,
    counter: u64,
    inner: ChaCha20Rng,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl RngState {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            counter: 0,
            inner: ChaCha20Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn counter(&self) -> u64 {
        self.counter
    }

    /// Seed of the `index`-th child of a stream seeded with `seed`.
    pub fn derive_seed(seed: u64, index: u64) -> u64 {
        splitmix64(seed ^ splitmix64(index.wrapping_add(1)))
    }

    /// Next child stream; does not consume values from `self`.
    pub fn fork(&mut self) -> RngState {
        let child = Self::new(Self::derive_seed(self.seed, self.counter));
        self.counter += 1;
        child
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.inner.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform_range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    pub fn index(&mut self, bound: usize) -> usize {
        (self.uniform() * bound as f64) as usize % bound
    }

    pub fn normal(&mut self) -> f64 {
        StandardNormal.sample(&mut self.inner)
    }

    /// Standard complex Gaussian, `E|z|² = 1`.
    pub fn complex_normal(&mut self) -> C64 {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        c64(self.normal() * h, self.normal() * h)
    }

    pub fn gaussian_matrix(&mut self, rows: usize, cols: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(rows, cols, |_, _| self.complex_normal())
    }

    /// Haar-distributed unitary: QR of a complex Gaussian matrix with the
    /// diagonal of `R` made real positive. Gram-Schmidt produces exactly that
    /// normalization.
    pub fn haar_unitary(&mut self, n: usize) -> ComplexMatrix {
        let g = self.gaussian_matrix(n, n);
        let q = gram_schmidt(&g.columns());
        ComplexMatrix::from_columns(&q).expect("n >= 1")
    }

    /// Uniformly distributed unit vector in `C^n`.
    pub fn unit_vector(&mut self, n: usize) -> Vec<C64> {
        loop {
            let v: Vec<C64> = (0..n).map(|_| self.complex_normal()).collect();
            let norm = vec_norm(&v);
            if norm > 1e-12 {
                return v.into_iter().map(|x| x / norm).collect();
            }
        }
    }

    /// Haar-random rank-one projection in `C^n`.
    pub fn rank_one_projection(&mut self, n: usize) -> Projection {
        Projection::rank_one(&self.unit_vector(n)).expect("unit vector")
    }

    /// Haar-random `k`-dimensional subspace of `C^n`.
    pub fn random_subspace(&mut self, n: usize, k: usize) -> SubspaceBasis {
        if k == 0 {
            return SubspaceBasis::empty(n);
        }
        let u = self.haar_unitary(n);
        SubspaceBasis::new(u.select_columns(&(0..k).collect::<Vec<_>>()))
            .expect("columns of a unitary")
    }

    /// GUE-like Hermitian matrix `(G + G*)/2`.
    pub fn random_hermitian(&mut self, n: usize) -> HermitianMatrix {
        HermitianMatrix::hermitian_part(&self.gaussian_matrix(n, n)).expect("square")
    }
}

/// Two-pass classical Gram-Schmidt. Assumes linearly independent input.
fn gram_schmidt(columns: &[Vec<C64>]) -> Vec<Vec<C64>> {
    let mut out: Vec<Vec<C64>> = Vec::with_capacity(columns.len());
    for col in columns {
        let mut w = col.clone();
        for _ in 0..2 {
            for q in &out {
                let proj = inner(q, &w);
                for (wi, qi) in w.iter_mut().zip(q) {
                    *wi -= proj * qi;
                }
            }
        }
        let norm = vec_norm(&w);
        w.iter_mut().for_each(|x| *x /= norm);
        out.push(w);
    }
    out
}
