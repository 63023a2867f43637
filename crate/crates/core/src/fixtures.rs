//! Built-in numerical examples shipped as data files.
//!
//! Fixture tensors are stored the way they are printed: 2-D slices over the first
//! two indices, listed over the remaining indices with the last one varying fastest.
//! A SHA-256 digest of each file is pinned here so that edits to the data are caught.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::geninv::{penrose_report, wmp_inverse, wmp_inverse_frd, Weight, WeightPair};
use crate::matrix::C64;
use crate::report::CheckReport;
use crate::rol::{wmp_product_via_b1_first, wmp_product_via_intermediates, Tolerances};
use crate::shape::{delinearize, EinsteinShape};
use crate::spectral::{hermitian_eig, pinv_matrix, RankTol};
use crate::tensor::{reshape_rank, rsh, rsh_inv, transpose, Tensor};

pub const WEIGHTED_PRODUCT_JSON: &str = include_str!("../fixtures/weighted_product_example.json");
pub const WEIGHTED_PRODUCT_SHA256: &str = "297dd64cf029d681f04a0b42ef4d49ae2ee6b3ead6a734cf401a1e0199c18574";
pub const INDEFINITE_WEIGHT_JSON: &str = include_str!("../fixtures/indefinite_weight_example.json");
pub const INDEFINITE_WEIGHT_SHA256: &str = "ce1e325e3f39d222a7bbeb1551f56aad9debf5a4dbd2741230907c297748486d";

#[derive(Debug, Deserialize)]
struct SlicedTensor {
    dims: Vec<usize>,
    row_order: usize,
    slices: Vec<Vec<Vec<f64>>>,
}

#[derive(Debug, Deserialize)]
struct FixtureFile {
    tensors: BTreeMap<String, SlicedTensor>,
}

impl SlicedTensor {
    fn to_tensor(&self) -> Result<Tensor> {
        let d = &self.dims;
        if d.len() < 2 || self.row_order == 0 || self.row_order >= d.len() {
            return Err(Error::Parse(format!("bad fixture layout {d:?} / {}", self.row_order)));
        }
        let shape = EinsteinShape::new(d[..self.row_order].to_vec(), d[self.row_order..].to_vec())?;
        let rest = &d[2..];
        let n_slices: usize = rest.iter().product();
        if self.slices.len() != n_slices
            || self.slices.iter().any(|s| s.len() != d[0] || s.iter().any(|row| row.len() != d[1]))
        {
            return Err(Error::Parse(format!("fixture slices do not match dims {d:?}")));
        }
        let mut data = vec![C64::new(0.0, 0.0); shape.len()];
        // Slices are listed with the last index fastest; reverse to use first-fastest delinearization.
        let rev: Vec<usize> = rest.iter().rev().copied().collect();
        for (s, slice) in self.slices.iter().enumerate() {
            let mut tail = delinearize(&rev, s);
            tail.reverse();
            for (i, row) in slice.iter().enumerate() {
                for (j, &v) in row.iter().enumerate() {
                    let mut idx = vec![i, j];
                    idx.extend_from_slice(&tail);
                    let (r, c) = idx.split_at(self.row_order);
                    data[shape.flat_index(r, c)] = C64::new(v, 0.0);
                }
            }
        }
        Tensor::new(shape, data)
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn load(text: &str, digest: &str) -> Result<BTreeMap<String, Tensor>> {
    let actual = sha256_hex(text.as_bytes());
    if actual != digest {
        return Err(Error::Parse(format!("fixture checksum mismatch: {actual}")));
    }
    let file: FixtureFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    file.tensors.iter().map(|(k, v)| Ok((k.clone(), v.to_tensor()?))).collect()
}

fn take(map: &mut BTreeMap<String, Tensor>, key: &str) -> Result<Tensor> {
    map.remove(key).ok_or_else(|| Error::Parse(format!("fixture lacks tensor {key}")))
}

fn max_abs_diff(x: &Tensor, y: &Tensor) -> Result<f64> {
    Ok(x.checked_sub(y)?.max_abs())
}

/// The weighted product example: `A` (3x2x4), `B` (2x4x3), weights `M`, `N` (3x3),
/// `P` (2x4x2x4), the printed intermediates and the printed `(AB)†_{M,N}`.
#[derive(Clone, Debug)]
pub struct WeightedProductExample {
    pub a: Tensor,
    pub b: Tensor,
    pub m: Tensor,
    pub n: Tensor,
    pub p: Tensor,
    pub a1: Tensor,
    pub b1: Tensor,
    pub a1_dagger: Tensor,
    pub b1_dagger: Tensor,
    pub expected: Tensor,
}

/// Consistent operands recovered from the printed data.
///
/// The printed `A` and `B` do not multiply to the operator whose inverse is printed;
/// the printed `A_1` and `B_1` do. Since `A_1` has full row rank, `A_1 = A` holds for
/// the intended data, so `A_1` is taken as `A`. The product `T = A_1 B_1` is an integer
/// matrix up to print rounding; `B` is then the minimal-norm correction of the printed `B`
/// with `A B = T`.
#[derive(Clone, Debug)]
pub struct ReconciledOperands {
    pub a: Tensor,
    pub b: Tensor,
    pub product: Tensor,
    /// `max |A_printed B_printed - T|`.
    pub printed_product_gap: f64,
    /// `max |A_1 B_1 - round(A_1 B_1)|`, the print rounding left in the intermediates.
    pub rounding_gap: f64,
}

impl WeightedProductExample {
    pub fn load() -> Result<Self> {
        let mut t = load(WEIGHTED_PRODUCT_JSON, WEIGHTED_PRODUCT_SHA256)?;
        Ok(Self {
            a: take(&mut t, "A")?,
            b: take(&mut t, "B")?,
            m: take(&mut t, "M")?,
            n: take(&mut t, "N")?,
            p: take(&mut t, "P")?,
            a1: take(&mut t, "A1")?,
            b1: take(&mut t, "B1")?,
            a1_dagger: take(&mut t, "A1_dagger_MP")?,
            b1_dagger: take(&mut t, "B1_dagger_PN")?,
            expected: take(&mut t, "expected")?,
        })
    }

    pub fn reconcile(&self) -> Result<ReconciledOperands> {
        let raw = self.a1.ein(&self.b1)?;
        let data: Vec<C64> = raw.data().iter().map(|z| C64::new(z.re.round(), 0.0)).collect();
        let product = Tensor::new(raw.shape().clone(), data)?;
        let rounding_gap = max_abs_diff(&raw, &product)?;
        let a = self.a1.clone();
        let residual = product.checked_sub(&a.ein(&self.b)?)?;
        let a_pinv = pinv_matrix(rsh(&a), RankTol::Auto)?;
        let correction = rsh_inv(a_pinv.matmul(rsh(&residual)), self.b.shape().clone())?;
        let b = self.b.checked_add(&correction)?;
        let printed_product_gap = max_abs_diff(&self.a.ein(&self.b)?, &product)?;
        Ok(ReconciledOperands { a, b, product, printed_product_gap, rounding_gap })
    }
}

/// Everything measured when reproducing the weighted product example.
#[derive(Clone, Debug)]
pub struct WeightedProductOutcome {
    pub result: Tensor,
    pub result_deviation: f64,
    pub frd_deviation: f64,
    pub penrose: CheckReport,
    pub b1_deviation: f64,
    pub a1_deviation: f64,
    pub a1_dagger_deviation: f64,
    pub b1_dagger_deviation: f64,
    pub intermediates_result_deviation: f64,
    pub intermediates_vs_direct: f64,
    pub b1_first_vs_direct: f64,
    pub p_min_eigenvalue: f64,
    pub printed_product_gap: f64,
    pub rounding_gap: f64,
    pub elapsed: Duration,
}

pub fn run_weighted_product_example(tol: f64) -> Result<WeightedProductOutcome> {
    let start = Instant::now();
    let ex = WeightedProductExample::load()?;
    let ops = ex.reconcile()?;
    let m = Weight::new(ex.m.clone(), tol)?;
    let n = Weight::new(ex.n.clone(), tol)?;
    let p_min_eigenvalue = *hermitian_eig(&ex.p, tol)?.lambda.last().expect("nonempty");
    let p = Weight::new(ex.p.clone(), tol)?;
    let pair = WeightPair::new(m.clone(), n.clone());
    let ab = ops.a.ein(&ops.b)?;
    let result = wmp_inverse(&ab, &pair, RankTol::Auto)?;
    let frd = wmp_inverse_frd(&ab, &pair, RankTol::Auto)?;
    let penrose = penrose_report(&ab, &result, Some(&pair), 1e-10)?;
    let tols = Tolerances { check: tol, rank: RankTol::Auto };
    let mid = wmp_product_via_intermediates(&ops.a, &ops.b, &m, &n, &p, tols)?;
    let alt = wmp_product_via_b1_first(&ops.a, &ops.b, &m, &n, &p, tols)?;
    Ok(WeightedProductOutcome {
        result_deviation: max_abs_diff(&result, &ex.expected)?,
        frd_deviation: frd.relative_distance(&result)?,
        penrose,
        b1_deviation: max_abs_diff(&mid.b1, &ex.b1)?,
        a1_deviation: max_abs_diff(&mid.a1, &ex.a1)?,
        a1_dagger_deviation: max_abs_diff(&mid.a1_dag, &ex.a1_dagger)?,
        b1_dagger_deviation: max_abs_diff(&mid.b1_dag, &ex.b1_dagger)?,
        intermediates_result_deviation: max_abs_diff(&mid.product, &ex.expected)?,
        intermediates_vs_direct: mid.product.relative_distance(&result)?,
        b1_first_vs_direct: alt.product.relative_distance(&result)?,
        p_min_eigenvalue,
        printed_product_gap: ops.printed_product_gap,
        rounding_gap: ops.rounding_gap,
        result,
        elapsed: start.elapsed(),
    })
}

/// The indefinite-weight counterexample: `A` (2x3x2), `M` (2x3x2x3), `N = diag(2, -1)`.
#[derive(Clone, Debug)]
pub struct IndefiniteWeightExample {
    pub a: Tensor,
    pub m: Tensor,
    pub n: Tensor,
    pub expected_gram: Tensor,
}

#[derive(Clone, Debug)]
pub struct IndefiniteWeightOutcome {
    pub gram: Tensor,
    pub gram_exact: bool,
    pub gram_rank: usize,
    /// The error raised when `N` is offered as a weight.
    pub n_weight_error: Option<Error>,
    pub m_weight_error: Option<Error>,
}

impl IndefiniteWeightExample {
    pub fn load() -> Result<Self> {
        let mut t = load(INDEFINITE_WEIGHT_JSON, INDEFINITE_WEIGHT_SHA256)?;
        Ok(Self {
            a: take(&mut t, "A")?,
            m: take(&mut t, "M")?,
            n: take(&mut t, "N")?,
            expected_gram: take(&mut t, "expected_gram")?,
        })
    }

    /// `A^T M A`.
    pub fn gram(&self) -> Result<Tensor> {
        transpose(&self.a).ein(&self.m)?.ein(&self.a)
    }
}

pub fn run_indefinite_weight_example(tol: f64) -> Result<IndefiniteWeightOutcome> {
    let ex = IndefiniteWeightExample::load()?;
    let gram = ex.gram()?;
    Ok(IndefiniteWeightOutcome {
        gram_exact: gram == ex.expected_gram,
        gram_rank: reshape_rank(&gram, RankTol::Auto)?,
        n_weight_error: Weight::new(ex.n.clone(), tol).err(),
        m_weight_error: Weight::new(ex.m.clone(), tol).err(),
        gram,
    })
}
