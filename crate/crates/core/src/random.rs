//! Seeded generation of random tensors, unitaries and weights.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::matrix::{Matrix, C64};
use crate::shape::EinsteinShape;
use crate::spectral::matrix_svd;
use crate::tensor::{rsh_inv, Tensor};

/// Deterministic generator; the same seed yields the same stream on every run.
#[derive(Clone, Debug)]
pub struct TensorRng {
    rng: ChaCha8Rng,
}

impl TensorRng {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.gen_range(lo..hi)
    }

    pub fn index(&mut self, lo: usize, hi_inclusive: usize) -> usize {
        self.rng.gen_range(lo..=hi_inclusive)
    }

    pub fn complex_normal(&mut self) -> C64 {
        let re: f64 = self.rng.sample(StandardNormal);
        let im: f64 = self.rng.sample(StandardNormal);
        C64::new(re, im)
    }

    pub fn matrix(&mut self, rows: usize, cols: usize) -> Matrix {
        let data = (0..rows * cols).map(|_| self.complex_normal()).collect();
        Matrix::from_vec(rows, cols, data).expect("length matches")
    }

    /// Dense tensor with independent standard complex normal entries.
    pub fn tensor(&mut self, shape: &EinsteinShape) -> Tensor {
        let m = self.matrix(shape.row_count(), shape.col_count());
        rsh_inv(m, shape.clone()).expect("shape matches")
    }

    /// Square unitary matrix: the left factor of a random matrix's SVD.
    pub fn unitary_matrix(&mut self, n: usize) -> Result<Matrix> {
        Ok(matrix_svd(&self.matrix(n, n))?.u)
    }

    pub fn unitary(&mut self, modes: &[usize]) -> Result<Tensor> {
        let shape = EinsteinShape::square(modes)?;
        rsh_inv(self.unitary_matrix(shape.row_count())?, shape)
    }

    /// `Q1 diag(s) Q2^H` with `rank` singular values drawn from `[0.5, 2]`.
    pub fn with_rank(&mut self, shape: &EinsteinShape, rank: usize) -> Result<Tensor> {
        let (m, n) = (shape.row_count(), shape.col_count());
        let rank = rank.min(m).min(n);
        let q1 = self.unitary_matrix(m)?;
        let q2 = self.unitary_matrix(n)?;
        let mut left = Matrix::zeros(m, rank);
        for k in 0..rank {
            let s = self.uniform(0.5, 2.0);
            for (x, &q) in left.col_mut(k).iter_mut().zip(q1.col(k)) {
                *x = q * s;
            }
        }
        let mut right = Matrix::zeros(rank, n);
        for k in 0..rank {
            for j in 0..n {
                right[(k, j)] = q2[(j, k)].conj();
            }
        }
        rsh_inv(left.matmul(&right), shape.clone())
    }

    /// Well-conditioned tensor of full reshaping rank.
    pub fn full_rank(&mut self, shape: &EinsteinShape) -> Result<Tensor> {
        let r = shape.row_count().min(shape.col_count());
        self.with_rank(shape, r)
    }

    /// Hermitian positive definite `Q diag(λ) Q^*`, `λ` uniform in `[0.5, 2]`.
    pub fn hpd(&mut self, modes: &[usize]) -> Result<Tensor> {
        let shape = EinsteinShape::square(modes)?;
        let n = shape.row_count();
        let q = self.unitary_matrix(n)?;
        let mut scaled = q.clone();
        for j in 0..n {
            let l = self.uniform(0.5, 2.0);
            for z in scaled.col_mut(j) {
                *z *= l;
            }
        }
        rsh_inv(scaled.matmul(&q.adjoint()).hermitian_part(), shape)
    }
}
