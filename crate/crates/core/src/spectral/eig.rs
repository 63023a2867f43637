//! Two-sided complex Jacobi eigensolver for Hermitian matrices.

use crate::error::{Error, Result};
use crate::matrix::{Matrix, C64};

use super::svd::MAX_SWEEPS;

/// `a = q · diag(lambda) · q^H`, `lambda` descending.
#[derive(Clone, Debug)]
pub struct MatrixEig {
    pub q: Matrix,
    pub lambda: Vec<f64>,
}

/// Eigendecomposition of the Hermitian part of `a`.
pub fn hermitian_eig_matrix(a: &Matrix) -> Result<MatrixEig> {
    assert!(a.is_square());
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    let n = a.rows();
    let mut a = a.hermitian_part();
    let mut q = Matrix::identity(n);
    let mut converged = n < 2;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let mut rotated = false;
        for p in 0..n {
            for r in p + 1..n {
                rotated |= rotate(&mut a, &mut q, p, r);
            }
        }
        converged = !rotated;
    }
    if !converged {
        return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
    }
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| diag[j].total_cmp(&diag[i]).then(i.cmp(&j)));
    let mut qs = Matrix::zeros(n, n);
    for (k, &j) in order.iter().enumerate() {
        qs.col_mut(k).copy_from_slice(q.col(j));
    }
    Ok(MatrixEig { q: qs, lambda: order.iter().map(|&j| diag[j]).collect() })
}

fn rotate(a: &mut Matrix, q: &mut Matrix, p: usize, r: usize) -> bool {
    let apq = a[(p, r)];
    let g = apq.norm();
    let (app, arr) = (a[(p, p)].re, a[(r, r)].re);
    if g < f64::MIN_POSITIVE || g <= f64::EPSILON * (app * arr).abs().sqrt() {
        return false;
    }
    let ph = (apq / g).conj();
    let zeta = (arr - app) / (2.0 * g);
    let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = c * t;
    // G = [[c, s], [-s e^{-i phi}, c e^{-i phi}]] acting on coordinates (p, r).
    let g_pp = C64::new(c, 0.0);
    let g_pr = C64::new(s, 0.0);
    let g_rp = ph * -s;
    let g_rr = ph * c;
    let n = a.rows();
    for i in 0..n {
        let (x, y) = (a[(i, p)], a[(i, r)]);
        a[(i, p)] = x * g_pp + y * g_rp;
        a[(i, r)] = x * g_pr + y * g_rr;
    }
    for j in 0..n {
        let (x, y) = (a[(p, j)], a[(r, j)]);
        a[(p, j)] = g_pp.conj() * x + g_rp.conj() * y;
        a[(r, j)] = g_pr.conj() * x + g_rr.conj() * y;
    }
    a[(p, r)] = C64::new(0.0, 0.0);
    a[(r, p)] = C64::new(0.0, 0.0);
    a[(p, p)].im = 0.0;
    a[(r, r)].im = 0.0;
    for i in 0..n {
        let (x, y) = (q[(i, p)], q[(i, r)]);
        q[(i, p)] = x * g_pp + y * g_rp;
        q[(i, r)] = x * g_pr + y * g_rr;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_sorted_descending() {
        let e = hermitian_eig_matrix(&Matrix::from_real_rows(&[&[4.0, 0.0], &[0.0, 9.0]])).unwrap();
        assert_eq!(e.lambda, vec![9.0, 4.0]);
    }

    #[test]
    fn complex_hermitian_reconstructs() {
        let mut a = Matrix::from_real_rows(&[&[2.0, 1.0, 0.0], &[1.0, 3.0, 1.0], &[0.0, 1.0, 1.0]]);
        a[(0, 1)] = C64::new(1.0, 0.5);
        a[(1, 0)] = C64::new(1.0, -0.5);
        a[(1, 2)] = C64::new(0.0, -2.0);
        a[(2, 1)] = C64::new(0.0, 2.0);
        let e = hermitian_eig_matrix(&a).unwrap();
        let d: Vec<C64> = e.lambda.iter().map(|&l| C64::new(l, 0.0)).collect();
        let back = &(&e.q * &Matrix::from_diagonal(3, 3, &d)) * &e.q.adjoint();
        assert!((&back - &a).max_abs() < 1e-13);
        let trace: f64 = e.lambda.iter().sum();
        assert!((trace - 6.0).abs() < 1e-13);
    }

    #[test]
    fn fixture_weight_is_positive_definite() {
        let m = Matrix::from_real_rows(&[&[3.0, 0.0, 1.0], &[0.0, 2.0, 0.0], &[1.0, 0.0, 2.0]]);
        let e = hermitian_eig_matrix(&m).unwrap();
        assert!(e.lambda.iter().all(|&l| l > 0.0));
        let det: f64 = e.lambda.iter().product();
        assert!((det - 10.0).abs() < 1e-12);
    }
}
