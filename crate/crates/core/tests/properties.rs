//! Property tests for the tensor algebra, decompositions and (weighted) inverses.

use proptest::prelude::*;
use tensor_ginv::geninv::{
    mp_inverse, penrose_report, weighted_conj_transpose, wmp_inverse, wmp_inverse_frd, wmp_inverse_left_invertible,
    Weight, WeightPair,
};
use tensor_ginv::random::TensorRng;
use tensor_ginv::rol::catalog::{evaluate_identity, generate_inputs, shape_families, CATALOG};
use tensor_ginv::rol::Tolerances;
use tensor_ginv::spectral::{full_rank_decomposition, hpd_sqrt, matrix_svd, tensor_svd};
use tensor_ginv::tensor::{conj_transpose, identity_tensor, reshape_rank, rsh, rsh_inv};
use tensor_ginv::{EinsteinShape, RankTol, Tensor};

const AUTO: RankTol = RankTol::Auto;

fn modes() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(1usize..=3, 1..=2)
}

/// A random tensor shape of order 2 to 4.
fn shape() -> impl Strategy<Value = EinsteinShape> {
    (modes(), modes()).prop_map(|(r, c)| EinsteinShape::new(r, c).unwrap())
}

fn low_rank(rng: &mut TensorRng, s: &EinsteinShape) -> Tensor {
    let max = s.row_count().min(s.col_count());
    let r = rng.index(1, max);
    rng.with_rank(s, r).unwrap()
}

fn weight(rng: &mut TensorRng, modes: &[usize]) -> Weight {
    Weight::new(rng.hpd(modes).unwrap(), 1e-12).unwrap()
}

fn dist(x: &Tensor, y: &Tensor) -> f64 {
    x.relative_distance(y).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn reshape_is_a_homomorphism(seed: u64, i in modes(), j in modes(), k in modes()) {
        let mut rng = TensorRng::new(seed);
        let a = rng.tensor(&EinsteinShape::new(i.clone(), j.clone()).unwrap());
        let b = rng.tensor(&EinsteinShape::new(j, k).unwrap());
        let c = a.ein(&b).unwrap();
        prop_assert_eq!(rsh(&c), &rsh(&a).matmul(rsh(&b)));
    }

    #[test]
    fn reshape_round_trips(seed: u64, s in shape()) {
        let a = TensorRng::new(seed).tensor(&s);
        prop_assert_eq!(rsh_inv(rsh(&a).clone(), s).unwrap(), a);
    }

    #[test]
    fn product_is_associative(seed: u64, i in modes(), j in modes(), k in modes(), l in modes()) {
        let mut rng = TensorRng::new(seed);
        let a = rng.tensor(&EinsteinShape::new(i, j.clone()).unwrap());
        let b = rng.tensor(&EinsteinShape::new(j, k.clone()).unwrap());
        let c = rng.tensor(&EinsteinShape::new(k, l).unwrap());
        let lhs = a.ein(&b).unwrap().ein(&c).unwrap();
        let rhs = a.ein(&b.ein(&c).unwrap()).unwrap();
        let scale = a.frobenius_norm() * b.frobenius_norm() * c.frobenius_norm();
        prop_assert!(lhs.checked_sub(&rhs).unwrap().frobenius_norm() <= 1e-12 * scale);
    }

    #[test]
    fn conj_transpose_reverses_products(seed: u64, i in modes(), j in modes(), k in modes()) {
        let mut rng = TensorRng::new(seed);
        let a = rng.tensor(&EinsteinShape::new(i, j.clone()).unwrap());
        let b = rng.tensor(&EinsteinShape::new(j, k).unwrap());
        let lhs = conj_transpose(&a.ein(&b).unwrap());
        let rhs = b.h().ein(&a.h()).unwrap();
        prop_assert!(dist(&lhs, &rhs) <= 1e-13);
    }

    #[test]
    fn rank_is_invariant_under_conj_transpose(seed: u64, s in shape()) {
        let a = low_rank(&mut TensorRng::new(seed), &s);
        prop_assert_eq!(reshape_rank(&a, AUTO).unwrap(), reshape_rank(&a.h(), AUTO).unwrap());
    }

    #[test]
    fn svd_invariants(seed: u64, s in shape()) {
        let a = low_rank(&mut TensorRng::new(seed), &s);
        let f = tensor_svd(&a).unwrap();
        prop_assert_eq!(&f.sigma, &matrix_svd(rsh(&a)).unwrap().sigma);
        prop_assert!(f.sigma.windows(2).all(|w| w[0] >= w[1]));
        let recon = f.u.ein(&f.d).unwrap().ein(&f.v.h()).unwrap();
        prop_assert!(dist(&recon, &a) <= 1e-10);
        let tau = RankTol::Relative(1e-10);
        let above = f.sigma.iter().filter(|&&x| x > tau.threshold(&f.sigma, s.row_count(), s.col_count())).count();
        prop_assert_eq!(above, reshape_rank(&a, tau).unwrap());
    }

    #[test]
    fn frd_invariants(seed: u64, s in shape()) {
        let a = low_rank(&mut TensorRng::new(seed), &s);
        let f = full_rank_decomposition(&a, AUTO).unwrap();
        let r = reshape_rank(&a, AUTO).unwrap();
        prop_assert_eq!(f.r, r);
        prop_assert_eq!(reshape_rank(&f.f, AUTO).unwrap(), r);
        prop_assert_eq!(reshape_rank(&f.g, AUTO).unwrap(), r);
        prop_assert!(dist(&f.f.ein(&f.g).unwrap(), &a) <= 1e-10);
    }

    #[test]
    fn hpd_sqrt_and_inverse_sqrt_commute(seed: u64, m in modes()) {
        let p = TensorRng::new(seed).hpd(&m).unwrap();
        let f = hpd_sqrt(&p, 1e-12).unwrap();
        let lhs = f.sqrt.ein(&f.inv_sqrt).unwrap();
        let rhs = f.inv_sqrt.ein(&f.sqrt).unwrap();
        prop_assert!(dist(&lhs, &rhs) <= 1e-12);
        prop_assert!(dist(&f.sqrt.ein(&f.sqrt).unwrap(), &p) <= 1e-12);
        prop_assert!(dist(&lhs, &identity_tensor(&m).unwrap()) <= 1e-12);
    }

    #[test]
    fn weighted_penrose_and_routes(seed: u64, s in shape()) {
        let mut rng = TensorRng::new(seed);
        let a = low_rank(&mut rng, &s);
        let w = WeightPair::new(weight(&mut rng, s.row_modes()), weight(&mut rng, s.col_modes()));
        let x = wmp_inverse(&a, &w, AUTO).unwrap();
        prop_assert!(penrose_report(&a, &x, Some(&w), 1e-10).unwrap().passed);
        prop_assert!(dist(&wmp_inverse_frd(&a, &w, AUTO).unwrap(), &x) <= 1e-8);
        let plain = mp_inverse(&a, AUTO).unwrap();
        prop_assert!(penrose_report(&a, &plain, None, 1e-10).unwrap().passed);
    }

    #[test]
    fn left_invertible_closed_form(seed: u64, s in shape()) {
        prop_assume!(s.row_count() >= s.col_count());
        let mut rng = TensorRng::new(seed);
        let a = rng.full_rank(&s).unwrap();
        let w = WeightPair::new(weight(&mut rng, s.row_modes()), weight(&mut rng, s.col_modes()));
        let closed = wmp_inverse_left_invertible(&a, &w).unwrap();
        prop_assert!(dist(&closed, &wmp_inverse(&a, &w, AUTO).unwrap()) <= 1e-8);
    }

    #[test]
    fn weighted_inverse_involution_and_conjugate_rule(seed: u64, s in shape()) {
        let mut rng = TensorRng::new(seed);
        let a = low_rank(&mut rng, &s);
        let (m, n) = (weight(&mut rng, s.row_modes()), weight(&mut rng, s.col_modes()));
        let x = wmp_inverse(&a, &WeightPair::new(m.clone(), n.clone()), AUTO).unwrap();
        let back = wmp_inverse(&x, &WeightPair::new(n.clone(), m.clone()), AUTO).unwrap();
        prop_assert!(dist(&back, &a) <= 1e-8);
        let conj = wmp_inverse(&a.h(), &WeightPair::new(n.inverted(), m.inverted()), AUTO).unwrap();
        prop_assert!(dist(&x.h(), &conj) <= 1e-8);
    }

    #[test]
    fn weighted_hash_involution_and_reversal(seed: u64, i in modes(), j in modes(), k in modes()) {
        let mut rng = TensorRng::new(seed);
        let a = rng.tensor(&EinsteinShape::new(i.clone(), j.clone()).unwrap());
        let b = rng.tensor(&EinsteinShape::new(j.clone(), k.clone()).unwrap());
        let (m, n, p) = (weight(&mut rng, &i), weight(&mut rng, &j), weight(&mut rng, &k));
        let h = weighted_conj_transpose(&a, &n, &m).unwrap();
        prop_assert!(dist(&weighted_conj_transpose(&h, &m, &n).unwrap(), &a) <= 1e-10);
        let lhs = weighted_conj_transpose(&a.ein(&b).unwrap(), &p, &m).unwrap();
        let rhs = weighted_conj_transpose(&b, &p, &n).unwrap().ein(&h).unwrap();
        prop_assert!(dist(&lhs, &rhs) <= 1e-10);
    }

    #[test]
    fn conj_transpose_lemma_identities(seed: u64, s in shape()) {
        let a = low_rank(&mut TensorRng::new(seed), &s);
        let ah = a.h();
        let x = mp_inverse(&a, AUTO).unwrap();
        let xh = mp_inverse(&ah, AUTO).unwrap();
        prop_assert!(dist(&x.ein(&a).unwrap().ein(&ah).unwrap(), &ah) <= 1e-8);
        prop_assert!(dist(&ah.ein(&a).unwrap().ein(&x).unwrap(), &ah) <= 1e-8);
        prop_assert!(dist(&a.ein(&ah).unwrap().ein(&xh).unwrap(), &a) <= 1e-8);
        prop_assert!(dist(&xh.ein(&ah).unwrap().ein(&a).unwrap(), &a) <= 1e-8);
        let via_left = mp_inverse(&ah.ein(&a).unwrap(), AUTO).unwrap().ein(&ah).unwrap();
        let via_right = ah.ein(&mp_inverse(&a.ein(&ah).unwrap(), AUTO).unwrap()).unwrap();
        prop_assert!(dist(&via_left, &x) <= 1e-8);
        prop_assert!(dist(&via_right, &x) <= 1e-8);
    }

    #[test]
    fn one_sided_weight_forms(seed: u64, s in shape()) {
        let mut rng = TensorRng::new(seed);
        let a = low_rank(&mut rng, &s);
        let (m, n) = (weight(&mut rng, s.row_modes()), weight(&mut rng, s.col_modes()));
        let ir = Weight::identity(s.row_modes()).unwrap();
        let ic = Weight::identity(s.col_modes()).unwrap();
        let xm = wmp_inverse(&a, &WeightPair::new(m.clone(), ic.clone()), AUTO).unwrap();
        let form_m = mp_inverse(&m.sqrt().ein(&a).unwrap(), AUTO).unwrap().ein(m.sqrt()).unwrap();
        prop_assert!(dist(&xm, &form_m) <= 1e-8);
        let xn = wmp_inverse(&a, &WeightPair::new(ir, n.clone()), AUTO).unwrap();
        let form_n = n.inv_sqrt().ein(&mp_inverse(&a.ein(n.inv_sqrt()).unwrap(), AUTO).unwrap()).unwrap();
        prop_assert!(dist(&xn, &form_n) <= 1e-8);

        let x = mp_inverse(&a, AUTO).unwrap();
        prop_assert!(dist(&xm.ein(&a).unwrap(), &x.ein(&a).unwrap()) <= 1e-8);
        prop_assert!(dist(&a.ein(&xn).unwrap(), &a.ein(&x).unwrap()) <= 1e-8);
    }

    #[test]
    fn invertible_factors_cancel(seed: u64, s in shape()) {
        let mut rng = TensorRng::new(seed);
        let a = low_rank(&mut rng, &s);
        let b = rng.full_rank(&EinsteinShape::square(s.row_modes()).unwrap()).unwrap();
        let c = rng.full_rank(&EinsteinShape::square(s.col_modes()).unwrap()).unwrap();
        let x = mp_inverse(&a, AUTO).unwrap();
        let ba = b.ein(&a).unwrap();
        prop_assert!(dist(&mp_inverse(&ba, AUTO).unwrap().ein(&ba).unwrap(), &x.ein(&a).unwrap()) <= 1e-8);
        let ac = a.ein(&c).unwrap();
        prop_assert!(dist(&ac.ein(&mp_inverse(&ac, AUTO).unwrap()).unwrap(), &a.ein(&x).unwrap()) <= 1e-8);
    }

    #[test]
    fn identity_weights_reduce_to_unweighted(seed: u64, family in 0usize..3) {
        let f = &shape_families()[family];
        let tol = Tolerances::new(1e-8);
        for case in CATALOG.iter().filter(|c| c.roles.iter().any(|r| ["M", "N", "P", "Q"].contains(r))) {
            let inputs = match generate_inputs(case, f, &mut TensorRng::new(seed)) {
                Ok(i) => i,
                Err(tensor_ginv::Error::HypothesisUnsatisfiable(_)) => continue,
                Err(e) => panic!("{}: {e}", case.id),
            };
            let weighted = evaluate_identity(case, &inputs.with_identity_weights().unwrap(), tol).unwrap();
            let plain = evaluate_identity(case, &inputs.unweighted(), tol).unwrap();
            for (key, r) in &weighted.residuals {
                let q = plain.residuals[key];
                prop_assert!((r - q).abs() <= 1e-12, "{} {}: {} vs {}", case.id, key, r, q);
            }
        }
    }
}
