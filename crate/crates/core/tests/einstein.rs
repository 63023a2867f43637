//! Worked examples for the tensor core, checked against brute-force multi-index oracles.

use tensor_ginv::fixtures::{IndefiniteWeightExample, WeightedProductExample};
use tensor_ginv::geninv::{mp_inverse, mp_inverse_frd, penrose_report};
use tensor_ginv::random::TensorRng;
use tensor_ginv::spectral::{full_rank_decomposition, hermitian_eig, matrix_svd, tensor_svd};
use tensor_ginv::tensor::{
    conj_transpose, einstein_product, identity_tensor, reshape_rank, rsh, rsh_inv, structural_predicates, transpose,
};
use tensor_ginv::{EinsteinShape, Matrix, RankTol, Tensor, C64};

/// Every multi-index of `modes`, first index fastest.
fn multi_indices(modes: &[usize]) -> Vec<Vec<usize>> {
    let total: usize = modes.iter().product();
    let mut out = Vec::with_capacity(total);
    let mut idx = vec![0; modes.len()];
    for _ in 0..total {
        out.push(idx.clone());
        for (k, &d) in modes.iter().enumerate() {
            idx[k] += 1;
            if idx[k] < d {
                break;
            }
            idx[k] = 0;
        }
    }
    out
}

/// `i_1 + i_2 I_1 + i_3 I_1 I_2 + ...` on 0-based indices.
fn linear(modes: &[usize], idx: &[usize]) -> usize {
    let mut stride = 1;
    let mut lin = 0;
    for (&i, &d) in idx.iter().zip(modes) {
        lin += i * stride;
        stride *= d;
    }
    lin
}

fn entry(t: &Tensor, rows: &[usize], cols: &[usize]) -> C64 {
    let rc: usize = t.row_modes().iter().product();
    t.data()[linear(t.row_modes(), rows) + linear(t.col_modes(), cols) * rc]
}

/// `C(i, k) = sum_j A(i, j) B(j, k)` over explicit multi-indices.
fn brute_force_product(a: &Tensor, b: &Tensor) -> Vec<C64> {
    let (ri, cj, ck) = (multi_indices(a.row_modes()), multi_indices(a.col_modes()), multi_indices(b.col_modes()));
    let mut out = vec![C64::new(0.0, 0.0); ri.len() * ck.len()];
    for k in &ck {
        for i in &ri {
            let mut s = C64::new(0.0, 0.0);
            for j in &cj {
                s += entry(a, i, j) * entry(b, j, k);
            }
            out[linear(a.row_modes(), i) + linear(b.col_modes(), k) * ri.len()] = s;
        }
    }
    out
}

fn shape(r: &[usize], c: &[usize]) -> EinsteinShape {
    EinsteinShape::new(r.to_vec(), c.to_vec()).unwrap()
}

#[test]
fn reshape_places_multi_index_by_linear_formula() {
    let vals: Vec<f64> = (0..12).map(f64::from).collect();
    let t = Tensor::from_real(shape(&[2, 3], &[2]), &vals).unwrap();
    let m = rsh(&t);
    assert_eq!((m.rows(), m.cols()), (6, 2));
    for i in multi_indices(&[2, 3]) {
        for j in multi_indices(&[2]) {
            assert_eq!(m[(linear(&[2, 3], &i), j[0])], t.get(&i, &j));
        }
    }
    // 1-based (i = (2,1), j = 1) sits at matrix row 2, column 1.
    assert_eq!(t.get(&[1, 0], &[0]), m[(1, 0)]);
}

#[test]
fn reshape_round_trips_bit_exactly() {
    let mut rng = TensorRng::new(1);
    let t = rng.tensor(&shape(&[2, 2], &[3]));
    let back = rsh_inv(rsh(&t).clone(), t.shape().clone()).unwrap();
    assert_eq!(back, t);

    let m = rng.matrix(6, 2);
    let t = rsh_inv(m.clone(), shape(&[2, 3], &[2])).unwrap();
    assert_eq!(rsh(&t), &m);
    assert!(rsh_inv(m, shape(&[2, 2], &[2])).is_err());

    let one = rsh_inv(Matrix::identity(1), shape(&[1], &[1])).unwrap();
    assert_eq!(one.data(), &[C64::new(1.0, 0.0)]);
}

#[test]
fn einstein_product_matches_brute_force() {
    let mut rng = TensorRng::new(2);
    let a = rng.tensor(&shape(&[2], &[3, 2]));
    let b = rng.tensor(&shape(&[3, 2], &[2]));
    let c = einstein_product(&a, &b).unwrap();
    assert_eq!(c.shape(), &shape(&[2], &[2]));
    let oracle = brute_force_product(&a, &b);
    for (x, y) in c.data().iter().zip(&oracle) {
        assert!((x - y).norm() <= 1e-13);
    }

    let a = rng.tensor(&shape(&[2, 3], &[2, 2, 1]));
    let b = rng.tensor(&shape(&[2, 2, 1], &[3, 2]));
    let c = a.ein(&b).unwrap();
    for (x, y) in c.data().iter().zip(brute_force_product(&a, &b)) {
        assert!((x - y).norm() <= 1e-13);
    }
}

#[test]
fn identity_is_neutral_and_idempotent() {
    let mut rng = TensorRng::new(3);
    let a = rng.tensor(&shape(&[2, 3], &[4]));
    let i = identity_tensor(&[2, 3]).unwrap();
    assert_eq!(i.ein(&a).unwrap(), a);
    assert_eq!(rsh(&i), &Matrix::identity(6));
    let i2 = identity_tensor(&[2, 2]).unwrap();
    assert_eq!(i2.ein(&i2).unwrap(), i2);
    let flags = structural_predicates(&i2, 1e-10).unwrap();
    assert!(flags.diagonal && flags.hermitian && flags.unitary && flags.idempotent);
}

#[test]
fn conj_transpose_matches_matrix_adjoint() {
    let mut rng = TensorRng::new(4);
    let a = rng.tensor(&shape(&[2, 2], &[3]));
    let h = conj_transpose(&a);
    assert_eq!(rsh(&h), &rsh(&a).adjoint());
    assert_eq!(conj_transpose(&h), a);
    for i in multi_indices(&[2, 2]) {
        for j in multi_indices(&[3]) {
            assert_eq!(entry(&h, &j, &i), entry(&a, &i, &j).conj());
        }
    }
    let real = Tensor::from_real(shape(&[2], &[3]), &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
    assert_eq!(conj_transpose(&real), transpose(&real));
}

#[test]
fn counterexample_gram_is_exact_and_singular() {
    let ex = IndefiniteWeightExample::load().unwrap();
    let gram = ex.gram().unwrap();
    let exact = Tensor::from_real(EinsteinShape::square(&[2]).unwrap(), &[9.0, 12.0, 12.0, 16.0]).unwrap();
    assert_eq!(gram, exact);
    // Independent determinant: 9 * 16 - 12 * 12.
    assert_eq!(9.0 * 16.0 - 12.0 * 12.0, 0.0);
    assert_eq!(reshape_rank(&gram, RankTol::Auto).unwrap(), 1);

    let flags = structural_predicates(&ex.n, 1e-10).unwrap();
    assert!(flags.hermitian && !flags.unitary);
}

#[test]
fn weighted_product_fixture_has_rank_three() {
    let ex = WeightedProductExample::load().unwrap();
    assert_eq!(ex.a.shape(), &shape(&[3], &[2, 4]));
    let s = tensor_svd(&ex.a).unwrap();
    let cutoff = RankTol::Auto.threshold(&s.sigma, 3, 8);
    assert_eq!(s.sigma.iter().filter(|&&x| x > cutoff).count(), 3);
    assert_eq!(reshape_rank(&ex.a, RankTol::Auto).unwrap(), 3);

    let f = full_rank_decomposition(&ex.a, RankTol::Auto).unwrap();
    assert_eq!(f.r, 3);
    let i3 = identity_tensor(&[3]).unwrap();
    let fd = mp_inverse(&f.f, RankTol::Auto).unwrap();
    let gd = mp_inverse(&f.g, RankTol::Auto).unwrap();
    assert!(fd.ein(&f.f).unwrap().relative_distance(&i3).unwrap() <= 1e-10);
    assert!(f.g.ein(&gd).unwrap().relative_distance(&i3).unwrap() <= 1e-10);

    let x = mp_inverse(&ex.a, RankTol::Auto).unwrap();
    assert!(mp_inverse_frd(&ex.a, RankTol::Auto).unwrap().relative_distance(&x).unwrap() <= 1e-8);
    assert!(penrose_report(&ex.a, &x, None, 1e-10).unwrap().passed);
}

#[test]
fn fixture_weight_m_is_positive_definite() {
    let ex = WeightedProductExample::load().unwrap();
    let lambda = hermitian_eig(&ex.m, 1e-12).unwrap().lambda;
    assert!(lambda.iter().all(|&l| l > 0.0));
    // Leading principal minors of [[3,0,1],[0,2,0],[1,0,2]]: 3, 6, 10.
    let m = |i: usize, j: usize| ex.m.get(&[i], &[j]).re;
    let d2 = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    let d3 = m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
        + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
    assert_eq!((m(0, 0), d2, d3), (3.0, 6.0, 10.0));
}

/// Eigenvalues of a Hermitian 3x3 by the characteristic cubic.
fn gram_eigenvalues(g: &Matrix) -> Vec<f64> {
    let e = |i, j| g[(i, j)];
    let tr = (e(0, 0) + e(1, 1) + e(2, 2)).re;
    let minors = (e(0, 0) * e(1, 1) - e(0, 1) * e(1, 0) + e(0, 0) * e(2, 2) - e(0, 2) * e(2, 0) + e(1, 1) * e(2, 2)
        - e(1, 2) * e(2, 1))
    .re;
    let det = (e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1)) - e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0))
        + e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0)))
    .re;
    // Trigonometric solution of x^3 - tr x^2 + minors x - det = 0.
    let p = minors - tr * tr / 3.0;
    let q = -2.0 * tr.powi(3) / 27.0 + tr * minors / 3.0 - det;
    let r = (-p / 3.0).sqrt();
    let phi = ((-q / 2.0) / r.powi(3)).clamp(-1.0, 1.0).acos();
    let mut ev: Vec<f64> =
        (0..3).map(|k| tr / 3.0 + 2.0 * r * ((phi - 2.0 * std::f64::consts::PI * k as f64) / 3.0).cos()).collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    ev
}

#[test]
fn svd_of_random_5x3_matches_gram_eigenvalues() {
    let mut rng = TensorRng::new(5);
    let m = rng.matrix(5, 3);
    let s = matrix_svd(&m).unwrap();
    let recon = s.u.matmul(&s.d()).matmul(&s.v.adjoint());
    assert!((&recon - &m).frobenius_norm() <= 1e-12 * m.frobenius_norm());
    let ev = gram_eigenvalues(&m.adjoint().matmul(&m));
    for (sig, l) in s.sigma.iter().zip(ev) {
        assert!((sig - l.sqrt()).abs() <= 1e-8, "{sig} vs {}", l.sqrt());
    }
}

#[test]
fn pinv_matches_normal_equations_on_full_rank() {
    let mut rng = TensorRng::new(6);
    let a = rng.full_rank(&shape(&[2, 2], &[3])).unwrap();
    let m = rsh(&a);
    let h = m.adjoint();
    let oracle = h.matmul(m).inverse().unwrap().matmul(&h);
    let x = mp_inverse(&a, RankTol::Auto).unwrap();
    assert!((rsh(&x) - &oracle).frobenius_norm() <= 1e-12 * oracle.frobenius_norm().max(1.0));
}
