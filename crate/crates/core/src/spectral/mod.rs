//! SVD and Hermitian eigendecomposition kernels and their lifts to tensors.

mod eig;
mod svd;

pub use eig::{hermitian_eig_matrix, MatrixEig};
pub use svd::{matrix_svd, pinv_from_svd, pinv_matrix, MatrixSvd, RankTol, MAX_SWEEPS};

use crate::error::{Error, Result};
use crate::matrix::{Matrix, C64};
use crate::shape::EinsteinShape;
use crate::tensor::{hermitian_residual, rsh, rsh_inv, Tensor};

/// Tensor SVD `a = u * d * v^*`.
#[derive(Clone, Debug)]
pub struct SvdFactors {
    pub u: Tensor,
    pub d: Tensor,
    pub v: Tensor,
    pub sigma: Vec<f64>,
}

pub fn tensor_svd(a: &Tensor) -> Result<SvdFactors> {
    let svd = matrix_svd(rsh(a))?;
    let rows = EinsteinShape::square(a.row_modes())?;
    let cols = EinsteinShape::square(a.col_modes())?;
    Ok(SvdFactors {
        d: rsh_inv(svd.d(), a.shape().clone())?,
        u: rsh_inv(svd.u, rows)?,
        v: rsh_inv(svd.v, cols)?,
        sigma: svd.sigma,
    })
}

/// `p = q * diag(lambda) * q^*` for a Hermitian tensor.
#[derive(Clone, Debug)]
pub struct EigFactors {
    pub q: Tensor,
    pub lambda: Vec<f64>,
}

fn square_shape(p: &Tensor) -> Result<EinsteinShape> {
    if !p.shape().is_square() {
        return Err(Error::ShapeMismatch(format!("expected a square tensor, got {}", p.shape())));
    }
    Ok(p.shape().clone())
}

pub fn hermitian_eig(p: &Tensor, tol: f64) -> Result<EigFactors> {
    let shape = square_shape(p)?;
    let residual = hermitian_residual(p)?;
    if residual > tol * p.frobenius_norm().max(1.0) {
        return Err(Error::NotHermitian { residual });
    }
    let e = hermitian_eig_matrix(rsh(p))?;
    Ok(EigFactors { q: rsh_inv(e.q, shape)?, lambda: e.lambda })
}

/// Spectral functions of a weight tensor.
#[derive(Clone, Debug)]
pub struct HpdFactors {
    pub sqrt: Tensor,
    pub inv_sqrt: Tensor,
    pub inverse: Tensor,
    pub eigenvalues: Vec<f64>,
}

fn spectral_fn(q: &Matrix, vals: &[C64], hermitian: bool) -> Matrix {
    let n = q.rows();
    let mut scaled = q.clone();
    for (j, &v) in vals.iter().enumerate() {
        for z in scaled.col_mut(j) {
            *z *= v;
        }
    }
    let out = scaled.matmul(&q.adjoint());
    debug_assert_eq!(out.rows(), n);
    if hermitian {
        out.hermitian_part()
    } else {
        out
    }
}

/// Square root, inverse square root and inverse of a Hermitian positive definite tensor.
pub fn hpd_sqrt(p: &Tensor, tol: f64) -> Result<HpdFactors> {
    let shape = square_shape(p)?;
    let e = hermitian_eig(p, tol)?;
    let lmax = e.lambda[0];
    let lmin = *e.lambda.last().expect("nonempty");
    if lmin <= tol * lmax.max(0.0) {
        return Err(Error::NotPositiveDefinite { min_eigenvalue: lmin });
    }
    let q = rsh(&e.q);
    let f = |g: fn(f64) -> f64| -> Vec<C64> { e.lambda.iter().map(|&l| C64::new(g(l), 0.0)).collect() };
    Ok(HpdFactors {
        sqrt: rsh_inv(spectral_fn(q, &f(f64::sqrt), true), shape.clone())?,
        inv_sqrt: rsh_inv(spectral_fn(q, &f(|l| 1.0 / l.sqrt()), true), shape.clone())?,
        inverse: rsh_inv(spectral_fn(q, &f(|l| 1.0 / l), true), shape)?,
        eigenvalues: e.lambda,
    })
}

/// Like [`hpd_sqrt`] but for any invertible Hermitian tensor, using principal complex
/// square roots of negative eigenvalues. The roots are then not Hermitian.
pub fn hermitian_weight_factors(p: &Tensor, tol: f64) -> Result<HpdFactors> {
    let shape = square_shape(p)?;
    let e = hermitian_eig(p, tol)?;
    let amax = e.lambda.iter().map(|l| l.abs()).fold(0.0, f64::max);
    let amin = e.lambda.iter().map(|l| l.abs()).fold(f64::INFINITY, f64::min);
    if amin <= tol * amax {
        return Err(Error::SingularWeight);
    }
    let definite = e.lambda.iter().all(|&l| l > 0.0);
    let roots: Vec<C64> = e.lambda.iter().map(|&l| C64::new(l, 0.0).sqrt()).collect();
    let q = rsh(&e.q);
    Ok(HpdFactors {
        sqrt: rsh_inv(spectral_fn(q, &roots, definite), shape.clone())?,
        inv_sqrt: rsh_inv(spectral_fn(q, &roots.iter().map(|r| r.inv()).collect::<Vec<_>>(), definite), shape.clone())?,
        inverse: rsh_inv(
            spectral_fn(q, &e.lambda.iter().map(|&l| C64::new(1.0 / l, 0.0)).collect::<Vec<_>>(), true),
            shape,
        )?,
        eigenvalues: e.lambda,
    })
}

/// Full-rank decomposition `a = f * g` through a single rank mode `[r]`.
#[derive(Clone, Debug)]
pub struct FrdFactors {
    pub f: Tensor,
    pub g: Tensor,
    pub r: usize,
}

pub fn full_rank_decomposition(a: &Tensor, tol: RankTol) -> Result<FrdFactors> {
    let m = rsh(a);
    let svd = matrix_svd(m)?;
    let r = svd.rank(tol);
    if r == 0 {
        return Err(Error::ZeroTensor);
    }
    let mut f = Matrix::zeros(m.rows(), r);
    let mut g = Matrix::zeros(r, m.cols());
    for k in 0..r {
        let s = svd.sigma[k];
        for (x, &u) in f.col_mut(k).iter_mut().zip(svd.u.col(k)) {
            *x = u * s;
        }
        for (j, &v) in svd.v.col(k).iter().enumerate() {
            g[(k, j)] = v.conj();
        }
    }
    Ok(FrdFactors {
        f: rsh_inv(f, EinsteinShape::new(a.row_modes().to_vec(), vec![r])?)?,
        g: rsh_inv(g, EinsteinShape::new(vec![r], a.col_modes().to_vec())?)?,
        r,
    })
}

/// Another full-rank decomposition `(f * b, b^{-1} * g)` for an invertible `r x r` tensor `b`.
pub fn frd_transform_witness(frd: &FrdFactors, b: &Tensor) -> Result<FrdFactors> {
    let square = EinsteinShape::square(&[frd.r])?;
    if b.shape() != &square {
        return Err(Error::ShapeMismatch(format!("transform must have shape {square}, got {}", b.shape())));
    }
    if crate::tensor::reshape_rank(b, RankTol::Auto)? < frd.r {
        return Err(Error::SingularTransform);
    }
    let b_inv = rsh(b).inverse().ok_or(Error::SingularTransform)?;
    let b_inv = rsh_inv(b_inv, square)?;
    Ok(FrdFactors { f: frd.f.ein(b)?, g: b_inv.ein(&frd.g)?, r: frd.r })
}
