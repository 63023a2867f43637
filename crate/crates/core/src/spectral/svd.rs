//! One-sided (Hestenes) Jacobi SVD for complex matrices.

use crate::error::{Error, Result};
use crate::matrix::{dot_conj, norm2, Matrix, C64, ZERO};

pub const MAX_SWEEPS: usize = 30;
const OFF_DIAGONAL_TOL: f64 = 1e-15;

/// Truncation rule for numerical rank and pseudoinverses.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub enum RankTol {
    /// `σ_max · max(rows, cols) · ε`.
    #[default]
    Auto,
    /// `τ · σ_max`.
    Relative(f64),
}

impl RankTol {
    pub fn threshold(self, sigma: &[f64], rows: usize, cols: usize) -> f64 {
        let smax = sigma.first().copied().unwrap_or(0.0);
        match self {
            RankTol::Auto => smax * rows.max(cols) as f64 * f64::EPSILON,
            RankTol::Relative(tau) => smax * tau,
        }
    }

    /// Number of singular values above the threshold (0 for a zero matrix).
    pub fn count(self, sigma: &[f64], rows: usize, cols: usize) -> usize {
        if sigma.first().is_none_or(|&s| s == 0.0) {
            return 0;
        }
        let thr = self.threshold(sigma, rows, cols);
        sigma.iter().take_while(|&&s| s > thr).count()
    }
}

/// `m = u · diag(sigma) · v^H` with `u`, `v` square unitary.
#[derive(Clone, Debug)]
pub struct MatrixSvd {
    pub u: Matrix,
    pub sigma: Vec<f64>,
    pub v: Matrix,
}

impl MatrixSvd {
    /// Rectangular diagonal matrix of the singular values.
    pub fn d(&self) -> Matrix {
        let diag: Vec<C64> = self.sigma.iter().map(|&s| C64::new(s, 0.0)).collect();
        Matrix::from_diagonal(self.u.rows(), self.v.rows(), &diag)
    }

    pub fn rank(&self, tol: RankTol) -> usize {
        tol.count(&self.sigma, self.u.rows(), self.v.rows())
    }
}

pub fn matrix_svd(m: &Matrix) -> Result<MatrixSvd> {
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    let mut svd = if m.rows() >= m.cols() {
        tall_svd(m)?
    } else {
        let t = tall_svd(&m.adjoint())?;
        MatrixSvd { u: t.v, sigma: t.sigma, v: t.u }
    };
    normalize_phases(&mut svd);
    Ok(svd)
}

/// Jacobi SVD for `rows >= cols`.
fn tall_svd(m: &Matrix) -> Result<MatrixSvd> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut v = Matrix::identity(cols);
    let mut converged = cols < 2;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                rotated |= rotate_pair(&mut a, &mut v, p, q);
            }
        }
        converged = !rotated;
    }
    if !converged {
        return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
    }

    let norms: Vec<f64> = (0..cols).map(|j| norm2(a.col(j))).collect();
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]).then(i.cmp(&j)));
    let sigma: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let smax = sigma.first().copied().unwrap_or(0.0);
    let keep = smax * f64::EPSILON;

    let mut u_cols: Vec<Vec<C64>> = Vec::with_capacity(rows);
    let mut v_sorted = Matrix::zeros(cols, cols);
    for (k, &j) in order.iter().enumerate() {
        v_sorted.col_mut(k).copy_from_slice(v.col(j));
    }
    let mut slots = Vec::new();
    for (k, &j) in order.iter().enumerate() {
        if sigma[k] > keep && sigma[k] > 0.0 {
            let inv = 1.0 / sigma[k];
            u_cols.push(a.col(j).iter().map(|&z| z * inv).collect());
            slots.push(Some(u_cols.len() - 1));
        } else {
            slots.push(None);
        }
    }
    let basis = complete_basis(u_cols, rows);
    let mut u = Matrix::zeros(rows, rows);
    let mut extra = slots.iter().filter(|s| s.is_some()).count();
    for k in 0..rows {
        let src = match slots.get(k) {
            Some(Some(idx)) => *idx,
            _ => {
                extra += 1;
                extra - 1
            }
        };
        u.col_mut(k).copy_from_slice(&basis[src]);
    }
    Ok(MatrixSvd { u, sigma, v: v_sorted })
}

/// One Jacobi rotation orthogonalizing columns `p < q`; returns whether it rotated.
fn rotate_pair(a: &mut Matrix, v: &mut Matrix, p: usize, q: usize) -> bool {
    let alpha = norm2(a.col(p)).powi(2);
    let beta = norm2(a.col(q)).powi(2);
    if alpha == 0.0 || beta == 0.0 {
        return false;
    }
    let gamma = dot_conj(a.col(p), a.col(q));
    let g = gamma.norm();
    if g <= OFF_DIAGONAL_TOL * (alpha * beta).sqrt() || g < f64::MIN_POSITIVE {
        return false;
    }
    let phase = (gamma / g).conj();
    let zeta = (beta - alpha) / (2.0 * g);
    let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = c * t;
    for mat in [a, v] {
        let (cp, cq) = mat.col_pair_mut(p, q);
        for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
            let yq = *y * phase;
            let xp = *x;
            *x = xp * c - yq * s;
            *y = xp * s + yq * c;
        }
    }
    true
}

/// Extends orthonormal columns to an orthonormal basis of `C^n` using standard basis vectors.
pub(crate) fn complete_basis(mut cols: Vec<Vec<C64>>, n: usize) -> Vec<Vec<C64>> {
    while cols.len() < n {
        let mut best: Option<(f64, Vec<C64>)> = None;
        for i in 0..n {
            let mut e = vec![ZERO; n];
            e[i] = C64::new(1.0, 0.0);
            for _ in 0..2 {
                for c in &cols {
                    let h = dot_conj(c, &e);
                    for (x, &y) in e.iter_mut().zip(c) {
                        *x -= h * y;
                    }
                }
            }
            let nrm = norm2(&e);
            if best.as_ref().is_none_or(|(b, _)| nrm > *b) {
                best = Some((nrm, e));
            }
        }
        let (nrm, mut e) = best.expect("n > 0");
        for x in &mut e {
            *x /= nrm;
        }
        cols.push(e);
    }
    cols
}

/// Makes the first largest-modulus entry of each left singular vector real nonnegative.
fn normalize_phases(svd: &mut MatrixSvd) {
    let paired = svd.sigma.len().min(svd.u.cols());
    for j in 0..svd.u.cols() {
        let col = svd.u.col(j);
        let mut best = 0;
        for (i, z) in col.iter().enumerate() {
            if z.norm() > col[best].norm() {
                best = i;
            }
        }
        let pivot = col[best];
        if pivot.norm() == 0.0 || (pivot.im == 0.0 && pivot.re >= 0.0) {
            continue;
        }
        let ph = pivot.conj() / pivot.norm();
        for z in svd.u.col_mut(j) {
            *z *= ph;
        }
        if j < paired {
            for z in svd.v.col_mut(j) {
                *z *= ph;
            }
        }
    }
}

/// Truncated-SVD pseudoinverse `V_r diag(1/σ) U_r^H`.
pub fn pinv_matrix(m: &Matrix, tol: RankTol) -> Result<Matrix> {
    let svd = matrix_svd(m)?;
    Ok(pinv_from_svd(&svd, tol))
}

pub fn pinv_from_svd(svd: &MatrixSvd, tol: RankTol) -> Matrix {
    let r = svd.rank(tol);
    let (rows, cols) = (svd.u.rows(), svd.v.rows());
    let mut out = Matrix::zeros(cols, rows);
    for k in 0..r {
        let inv = 1.0 / svd.sigma[k];
        let vk = svd.v.col(k);
        let uk = svd.u.col(k);
        for j in 0..rows {
            let w = uk[j].conj() * inv;
            if w == ZERO {
                continue;
            }
            for i in 0..cols {
                out[(i, j)] += vk[i] * w;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reconstruct(s: &MatrixSvd) -> Matrix {
        &(&s.u * &s.d()) * &s.v.adjoint()
    }

    fn unitary_err(u: &Matrix) -> f64 {
        (&(&u.adjoint() * u) - &Matrix::identity(u.cols())).max_abs()
    }

    fn sample(rows: usize, cols: usize, seed: u64) -> Matrix {
        let mut x = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let mut next = || {
            x ^= x << 13;
            x ^= x >> 7;
            x ^= x << 17;
            (x % 2001) as f64 / 1000.0 - 1.0
        };
        let data = (0..rows * cols).map(|_| C64::new(next(), next())).collect();
        Matrix::from_vec(rows, cols, data).unwrap()
    }

    #[test]
    fn diagonal_input() {
        let m = Matrix::from_real_rows(&[&[3.0, 0.0], &[0.0, 1.0]]);
        let s = matrix_svd(&m).unwrap();
        assert_eq!(s.sigma, vec![3.0, 1.0]);
        assert_eq!(s.u, Matrix::identity(2));
        assert_eq!(s.v, Matrix::identity(2));
    }

    #[test]
    fn permutation_has_unit_singular_values() {
        let m = Matrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let s = matrix_svd(&m).unwrap();
        assert!((s.sigma[0] - 1.0).abs() < 1e-15 && (s.sigma[1] - 1.0).abs() < 1e-15);
        assert!((&reconstruct(&s) - &m).max_abs() < 1e-15);
    }

    #[test]
    fn rectangular_both_orientations() {
        for &(r, c) in &[(5, 3), (3, 5), (1, 4), (4, 1), (6, 6)] {
            let m = sample(r, c, (r * 10 + c) as u64);
            let s = matrix_svd(&m).unwrap();
            assert_eq!((s.u.rows(), s.v.rows()), (r, c));
            assert!((&reconstruct(&s) - &m).frobenius_norm() <= 1e-13 * m.frobenius_norm());
            assert!(unitary_err(&s.u) < 1e-13 && unitary_err(&s.v) < 1e-13);
            assert!(s.sigma.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn rank_deficient_gets_full_unitary() {
        let m = Matrix::from_real_rows(&[&[9.0, 12.0], &[12.0, 16.0], &[0.0, 0.0]]);
        let s = matrix_svd(&m).unwrap();
        assert_eq!(s.rank(RankTol::Auto), 1);
        assert!(unitary_err(&s.u) < 1e-14);
        assert!((&reconstruct(&s) - &m).max_abs() < 1e-13);
    }

    #[test]
    fn zero_matrix() {
        let s = matrix_svd(&Matrix::zeros(3, 2)).unwrap();
        assert_eq!(s.sigma, vec![0.0, 0.0]);
        assert_eq!(s.rank(RankTol::Auto), 0);
        assert!(unitary_err(&s.u) < 1e-15);
    }

    #[test]
    fn sign_convention() {
        let s = matrix_svd(&sample(4, 3, 7)).unwrap();
        for j in 0..4 {
            let col = s.u.col(j);
            let big = col.iter().map(|z| z.norm()).fold(0.0, f64::max);
            let first = col.iter().find(|z| z.norm() == big).unwrap();
            assert!(first.im.abs() < 1e-15 && first.re >= 0.0);
        }
    }

    #[test]
    fn pinv_of_invertible_is_inverse() {
        let m = Matrix::from_real_rows(&[&[2.0, 4.0, 1.0], &[3.0, 3.0, 1.0], &[0.0, 1.0, 4.0]]);
        let p = pinv_matrix(&m, RankTol::Auto).unwrap();
        assert!((&p - &m.inverse().unwrap()).max_abs() < 1e-14);
    }
}
