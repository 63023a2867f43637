//! Dense complex tensors with an explicit row/column mode split.
//!
//! The buffer of a tensor is exactly its reshaped matrix: the entry at row
//! multi-index `(i_1..i_M)` and column multi-index `(j_1..j_N)` lives at
//! `I_lin + J_lin * row_count`, with the first mode varying fastest. The
//! reshape map and its inverse are therefore reinterpretations of the buffer.

use std::ops::{Add, Sub};

use crate::error::{Error, Result};
use crate::matrix::{Matrix, C64};
use crate::shape::EinsteinShape;
use crate::spectral::{self, RankTol};

pub const DEFAULT_PREDICATE_TOL: f64 = 1e-10;

/// Dense tensor in `C^{I_1 x .. x I_M x J_1 x .. x J_N}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor {
    shape: EinsteinShape,
    mat: Matrix,
}

impl Tensor {
    pub fn new(shape: EinsteinShape, data: Vec<C64>) -> Result<Self> {
        if data.len() != shape.len() {
            return Err(Error::ShapeMismatch(format!(
                "shape {shape} needs {} entries, got {}",
                shape.len(),
                data.len()
            )));
        }
        if !data.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let mat = Matrix::from_vec(shape.row_count(), shape.col_count(), data)?;
        Ok(Self { shape, mat })
    }

    pub fn from_real(shape: EinsteinShape, data: &[f64]) -> Result<Self> {
        Self::new(shape, data.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn zeros(shape: EinsteinShape) -> Self {
        let mat = Matrix::zeros(shape.row_count(), shape.col_count());
        Self { shape, mat }
    }

    pub fn shape(&self) -> &EinsteinShape {
        &self.shape
    }

    pub fn row_modes(&self) -> &[usize] {
        self.shape.row_modes()
    }

    pub fn col_modes(&self) -> &[usize] {
        self.shape.col_modes()
    }

    pub fn data(&self) -> &[C64] {
        self.mat.data()
    }

    /// Entry at 0-based row and column multi-indices.
    pub fn get(&self, rows: &[usize], cols: &[usize]) -> C64 {
        self.mat.data()[self.shape.flat_index(rows, cols)]
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.mat.frobenius_norm()
    }

    pub fn max_abs(&self) -> f64 {
        self.mat.max_abs()
    }

    pub fn scale(&self, s: C64) -> Tensor {
        Tensor { shape: self.shape.clone(), mat: self.mat.scale(s) }
    }

    pub fn is_real(&self) -> bool {
        self.data().iter().all(|z| z.im == 0.0)
    }

    /// `‖self − other‖_F / max(1, ‖other‖_F)`; shapes must agree.
    pub fn relative_distance(&self, other: &Tensor) -> Result<f64> {
        let diff = self.checked_sub(other)?;
        Ok(diff.frobenius_norm() / other.frobenius_norm().max(1.0))
    }

    pub fn checked_sub(&self, other: &Tensor) -> Result<Tensor> {
        if self.shape != other.shape {
            return Err(Error::ShapeMismatch(format!("{} vs {}", self.shape, other.shape)));
        }
        Ok(Tensor { shape: self.shape.clone(), mat: &self.mat - &other.mat })
    }

    pub fn checked_add(&self, other: &Tensor) -> Result<Tensor> {
        if self.shape != other.shape {
            return Err(Error::ShapeMismatch(format!("{} vs {}", self.shape, other.shape)));
        }
        Ok(Tensor { shape: self.shape.clone(), mat: &self.mat + &other.mat })
    }

    /// Shorthand for [`einstein_product`].
    pub fn ein(&self, rhs: &Tensor) -> Result<Tensor> {
        einstein_product(self, rhs)
    }

    /// Shorthand for [`conj_transpose`].
    pub fn h(&self) -> Tensor {
        conj_transpose(self)
    }
}

impl Add for &Tensor {
    type Output = Tensor;
    fn add(self, rhs: &Tensor) -> Tensor {
        self.checked_add(rhs).expect("tensor shapes differ")
    }
}

impl Sub for &Tensor {
    type Output = Tensor;
    fn sub(self, rhs: &Tensor) -> Tensor {
        self.checked_sub(rhs).expect("tensor shapes differ")
    }
}

/// The reshape map: a view of the tensor as its `I_1⋯I_M x J_1⋯J_N` matrix.
pub fn rsh(t: &Tensor) -> &Matrix {
    &t.mat
}

/// Inverse reshape onto `target`.
pub fn rsh_inv(m: Matrix, target: EinsteinShape) -> Result<Tensor> {
    if m.rows() != target.row_count() || m.cols() != target.col_count() {
        return Err(Error::ShapeMismatch(format!(
            "{}x{} matrix cannot be reshaped to {target}",
            m.rows(),
            m.cols()
        )));
    }
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(Tensor { shape: target, mat: m })
}

/// Einstein product `A *_N B`, contracting the column modes of `a` with the row modes of `b`.
///
/// The contracted mode lists must be equal elementwise; equal products are not enough.
pub fn einstein_product(a: &Tensor, b: &Tensor) -> Result<Tensor> {
    if a.col_modes() != b.row_modes() {
        return Err(Error::ContractionMismatch {
            left: a.col_modes().to_vec(),
            right: b.row_modes().to_vec(),
        });
    }
    let shape = EinsteinShape::new(a.row_modes().to_vec(), b.col_modes().to_vec())?;
    rsh_inv(rsh(a).matmul(rsh(b)), shape)
}

pub fn conj_transpose(a: &Tensor) -> Tensor {
    Tensor { shape: a.shape.transposed(), mat: a.mat.adjoint() }
}

/// Plain transpose (no conjugation).
pub fn transpose(a: &Tensor) -> Tensor {
    Tensor { shape: a.shape.transposed(), mat: a.mat.transpose() }
}

/// Unit tensor over `modes`: entry `prod_k delta(i_k, j_k)`.
pub fn identity_tensor(modes: &[usize]) -> Result<Tensor> {
    if modes.is_empty() {
        return Err(Error::InvalidShape("identity tensor needs at least one mode".into()));
    }
    let shape = EinsteinShape::square(modes)?;
    let n = shape.row_count();
    Ok(Tensor { shape, mat: Matrix::identity(n) })
}

/// Square diagonal tensor over `modes` with the given diagonal (in linear order).
pub fn diagonal_tensor(modes: &[usize], diag: &[C64]) -> Result<Tensor> {
    let shape = EinsteinShape::square(modes)?;
    let n = shape.row_count();
    if diag.len() != n {
        return Err(Error::ShapeMismatch(format!("diagonal of length {} for {n} rows", diag.len())));
    }
    Ok(Tensor { shape, mat: Matrix::from_diagonal(n, n, diag) })
}

/// Outcome of [`structural_predicates`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StructuralFlags {
    pub diagonal: bool,
    pub hermitian: bool,
    pub skew_hermitian: bool,
    pub unitary: bool,
    pub idempotent: bool,
}

fn require_square(a: &Tensor, what: &str) -> Result<()> {
    if a.shape.is_square() {
        Ok(())
    } else {
        Err(Error::ShapeMismatch(format!("{what} needs row modes equal to column modes, got {}", a.shape)))
    }
}

fn bound(a: &Tensor, tol: f64) -> f64 {
    tol * a.frobenius_norm().max(1.0)
}

/// Zero off the (rectangular) main diagonal `I_lin == J_lin`.
pub fn is_diagonal(a: &Tensor, tol: f64) -> bool {
    let limit = bound(a, tol);
    let m = rsh(a);
    (0..m.cols()).all(|j| (0..m.rows()).all(|i| i == j || m[(i, j)].norm() <= limit))
}

pub fn hermitian_residual(a: &Tensor) -> Result<f64> {
    require_square(a, "hermitian check")?;
    Ok((rsh(a) - &rsh(a).adjoint()).frobenius_norm())
}

pub fn is_hermitian(a: &Tensor, tol: f64) -> Result<bool> {
    Ok(hermitian_residual(a)? <= bound(a, tol))
}

pub fn is_skew_hermitian(a: &Tensor, tol: f64) -> Result<bool> {
    require_square(a, "skew-hermitian check")?;
    Ok((rsh(a) + &rsh(a).adjoint()).frobenius_norm() <= bound(a, tol))
}

pub fn is_unitary(a: &Tensor, tol: f64) -> Result<bool> {
    require_square(a, "unitary check")?;
    let m = rsh(a);
    let eye = Matrix::identity(m.rows());
    let left = (&m.matmul(&m.adjoint()) - &eye).frobenius_norm();
    let right = (&m.adjoint().matmul(m) - &eye).frobenius_norm();
    Ok(left.max(right) <= bound(a, tol))
}

pub fn is_idempotent(a: &Tensor, tol: f64) -> Result<bool> {
    require_square(a, "idempotence check")?;
    let m = rsh(a);
    Ok((&m.matmul(m) - m).frobenius_norm() <= bound(a, tol))
}

/// All structural flags of a square tensor.
pub fn structural_predicates(a: &Tensor, tol: f64) -> Result<StructuralFlags> {
    Ok(StructuralFlags {
        diagonal: is_diagonal(a, tol),
        hermitian: is_hermitian(a, tol)?,
        skew_hermitian: is_skew_hermitian(a, tol)?,
        unitary: is_unitary(a, tol)?,
        idempotent: is_idempotent(a, tol)?,
    })
}

/// Reshaping rank: the rank of `rsh(a)` at the given truncation rule.
pub fn reshape_rank(a: &Tensor, tol: RankTol) -> Result<usize> {
    let svd = spectral::matrix_svd(rsh(a))?;
    Ok(tol.count(&svd.sigma, a.mat.rows(), a.mat.cols()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(r: &[usize], c: &[usize]) -> EinsteinShape {
        EinsteinShape::new(r.to_vec(), c.to_vec()).unwrap()
    }

    fn seq_tensor(s: EinsteinShape) -> Tensor {
        let n = s.len();
        Tensor::new(s, (0..n).map(|k| C64::new(k as f64, -(k as f64) / 3.0)).collect()).unwrap()
    }

    #[test]
    fn rsh_of_matrix_is_identity_map() {
        let t = seq_tensor(shape(&[3], &[2]));
        let m = rsh(&t);
        assert_eq!((m.rows(), m.cols()), (3, 2));
        assert_eq!(m[(2, 1)], t.get(&[2], &[1]));
    }

    #[test]
    fn rsh_places_entries_by_linear_index() {
        // 1-based (i1, i2) = (2, 1), j = 1  ->  row 2, column 1.
        let t = seq_tensor(shape(&[2, 3], &[2]));
        assert_eq!(rsh(&t)[(1, 0)], t.get(&[1, 0], &[0]));
        assert_eq!(rsh(&t)[(5, 1)], t.get(&[1, 2], &[1]));
    }

    #[test]
    fn rsh_inv_checks_products() {
        let m = Matrix::zeros(6, 2);
        assert!(rsh_inv(m.clone(), shape(&[2, 3], &[2])).is_ok());
        assert!(matches!(rsh_inv(m, shape(&[2, 2], &[2])), Err(Error::ShapeMismatch(_))));
        let s = rsh_inv(Matrix::identity(1), shape(&[1], &[1])).unwrap();
        assert_eq!(s.data(), &[C64::new(1.0, 0.0)]);
    }

    #[test]
    fn contraction_requires_elementwise_mode_match() {
        let a = seq_tensor(shape(&[2], &[2, 3]));
        let b = seq_tensor(shape(&[3, 2], &[2]));
        assert!(matches!(einstein_product(&a, &b), Err(Error::ContractionMismatch { .. })));
        let b = seq_tensor(shape(&[2, 3], &[2]));
        let c = einstein_product(&a, &b).unwrap();
        assert_eq!(c.shape(), &shape(&[2], &[2]));
    }

    #[test]
    fn identity_is_neutral() {
        let a = seq_tensor(shape(&[2, 3], &[4]));
        let i = identity_tensor(&[2, 3]).unwrap();
        assert_eq!(einstein_product(&i, &a).unwrap(), a);
        assert_eq!(rsh(&i), &Matrix::identity(6));
        let i2 = identity_tensor(&[2, 2]).unwrap();
        assert_eq!(einstein_product(&i2, &i2).unwrap(), i2);
    }

    #[test]
    fn conj_transpose_is_involution() {
        let a = seq_tensor(shape(&[2, 2], &[3]));
        assert_eq!(conj_transpose(&conj_transpose(&a)), a);
        assert_eq!(a.h().shape(), &shape(&[3], &[2, 2]));
        let r = Tensor::from_real(shape(&[2], &[3]), &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
        assert_eq!(conj_transpose(&r), transpose(&r));
    }

    #[test]
    fn predicates_on_identity() {
        let i = identity_tensor(&[2, 2]).unwrap();
        let f = structural_predicates(&i, DEFAULT_PREDICATE_TOL).unwrap();
        assert!(f.diagonal && f.hermitian && f.unitary && f.idempotent && !f.skew_hermitian);
    }

    #[test]
    fn indefinite_weight_is_hermitian_not_unitary() {
        let n = Tensor::from_real(shape(&[2], &[2]), &[2.0, 0.0, 0.0, -1.0]).unwrap();
        let f = structural_predicates(&n, DEFAULT_PREDICATE_TOL).unwrap();
        assert!(f.hermitian);
        assert!(!f.unitary);
    }

    #[test]
    fn square_only_predicates_reject_rectangular() {
        let a = seq_tensor(shape(&[2], &[3]));
        assert!(matches!(structural_predicates(&a, 1e-10), Err(Error::ShapeMismatch(_))));
        assert!(!is_diagonal(&a, 1e-10));
    }

    #[test]
    fn rectangular_diagonal() {
        let mut m = Matrix::zeros(2, 3);
        m[(0, 0)] = C64::new(3.0, 0.0);
        m[(1, 1)] = C64::new(1.0, 0.0);
        let d = rsh_inv(m, shape(&[2], &[3])).unwrap();
        assert!(is_diagonal(&d, 0.0));
    }

    #[test]
    fn rank_of_zero_and_singular() {
        assert_eq!(reshape_rank(&Tensor::zeros(shape(&[2, 2], &[3])), RankTol::Auto).unwrap(), 0);
        let s = Tensor::from_real(shape(&[2], &[2]), &[9.0, 12.0, 12.0, 16.0]).unwrap();
        assert_eq!(reshape_rank(&s, RankTol::Auto).unwrap(), 1);
    }

    #[test]
    fn rejects_non_finite() {
        let s = shape(&[1], &[1]);
        assert!(matches!(Tensor::from_real(s, &[f64::NAN]), Err(Error::NonFinite)));
    }
}
