//! Reverse-order laws for (weighted) Moore-Penrose inverses of Einstein products.

pub mod catalog;

use crate::error::{Error, Result};
use crate::geninv::{weighted_conj_transpose, wmp_inverse_opt, Weight};
use crate::matrix::Matrix;
use crate::report::CheckReport;
use crate::spectral::{pinv_matrix, RankTol};
use crate::tensor::{rsh, Tensor};

/// Residual tolerance plus the truncation rule used by every inverse inside a check.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    pub check: f64,
    pub rank: RankTol,
}

impl Tolerances {
    pub fn new(check: f64) -> Self {
        Self { check, rank: RankTol::Relative(1e-10) }
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::new(1e-8)
    }
}

/// Both sides of a reverse-order law together with its range conditions.
#[derive(Clone, Debug)]
pub struct RolReport {
    pub direct: Tensor,
    pub reversed: Tensor,
    pub condition_checks: Vec<CheckReport>,
    pub law_residual: f64,
    pub law_holds: bool,
    pub conditions_hold: bool,
}

impl RolReport {
    fn new(direct: Tensor, reversed: Tensor, condition_checks: Vec<CheckReport>, tol: f64) -> Result<Self> {
        let law_residual = reversed.relative_distance(&direct)?;
        let conditions_hold = condition_checks.iter().all(|c| c.passed);
        Ok(Self { direct, reversed, condition_checks, law_residual, law_holds: law_residual <= tol, conditions_hold })
    }

    pub fn agrees(&self) -> bool {
        self.law_holds == self.conditions_hold
    }
}

pub(crate) fn dag(x: &Tensor, m: Option<&Weight>, n: Option<&Weight>, tol: Tolerances) -> Result<Tensor> {
    wmp_inverse_opt(x, m, n, tol.rank)
}

fn pinv(x: &Tensor, tol: Tolerances) -> Result<Matrix> {
    pinv_matrix(rsh(x), tol.rank)
}

/// `R(b) ⊆ R(a)` via `A A^† B = B`, with the harness truncation rule.
pub fn range_check(name: &str, b: &Tensor, a: &Tensor, tol: Tolerances) -> Result<CheckReport> {
    if a.row_modes() != b.row_modes() {
        return Err(Error::ShapeMismatch(format!("{name}: row modes differ ({} vs {})", a.shape(), b.shape())));
    }
    let proj = rsh(a).matmul(&pinv(a, tol)?).matmul(rsh(b));
    let res = (&proj - rsh(b)).frobenius_norm() / b.frobenius_norm().max(1.0);
    Ok(CheckReport::from_residuals(name, tol.check, &[("projection", res)]))
}

/// Unweighted reverse-order law `(AB)^† = B^† A^†` against its range conditions.
pub fn check_rol(a: &Tensor, b: &Tensor, tol: Tolerances) -> Result<RolReport> {
    let ab = a.ein(b)?;
    let direct = dag(&ab, None, None, tol)?;
    let reversed = dag(b, None, None, tol)?.ein(&dag(a, None, None, tol)?)?;
    let ah = a.h();
    let c1 = range_check("range(A*AB) in range(B)", &ah.ein(&ab)?, b, tol)?;
    let c2 = range_check("range(BB*A*) in range(A*)", &b.ein(&b.h())?.ein(&ah)?, &ah, tol)?;
    RolReport::new(direct, reversed, vec![c1, c2], tol.check)
}

fn check_weight(w: &Weight, modes: &[usize], role: &str) -> Result<()> {
    if w.modes() != modes {
        return Err(Error::ShapeMismatch(format!("weight {role} is over {:?}, expected {:?}", w.modes(), modes)));
    }
    Ok(())
}

/// Weighted law `(AB)^†_{M,N} = B^†_{P,N} A^†_{M,P}` against its weighted range conditions.
pub fn check_weighted_rol(a: &Tensor, b: &Tensor, m: &Weight, n: &Weight, p: &Weight, tol: Tolerances) -> Result<RolReport> {
    let ab = a.ein(b)?;
    check_weight(m, a.row_modes(), "M")?;
    check_weight(p, a.col_modes(), "P")?;
    check_weight(n, b.col_modes(), "N")?;
    let direct = dag(&ab, Some(m), Some(n), tol)?;
    let reversed = dag(b, Some(p), Some(n), tol)?.ein(&dag(a, Some(m), Some(p), tol)?)?;
    let a_hash = weighted_conj_transpose(a, p, m)?;
    let b_hash = weighted_conj_transpose(b, n, p)?;
    let c1 = range_check("range(A#AB) in range(B)", &a_hash.ein(&ab)?, b, tol)?;
    let c2 = range_check("range(BB#A#) in range(A#)", &b.ein(&b_hash)?.ein(&a_hash)?, &a_hash, tol)?;
    RolReport::new(direct, reversed, vec![c1, c2], tol.check)
}

/// Intermediate tensors of the two-step product formulas.
#[derive(Clone, Debug)]
pub struct ProductIntermediates {
    pub a1: Tensor,
    pub b1: Tensor,
    /// `(A_1)^†_{M,P}`.
    pub a1_dag: Tensor,
    /// `(B_1)^†_{P,N}`.
    pub b1_dag: Tensor,
    /// `(B_1)^†_{P,N} (A_1)^†_{M,P}`, equal to `(AB)^†_{M,N}`.
    pub product: Tensor,
}

/// `B_1 = A^†_{M,P} A B`, `A_1 = A B_1 (B_1)^†_{P,N}`.
pub fn wmp_product_via_intermediates(
    a: &Tensor,
    b: &Tensor,
    m: &Weight,
    n: &Weight,
    p: &Weight,
    tol: Tolerances,
) -> Result<ProductIntermediates> {
    check_weight(m, a.row_modes(), "M")?;
    check_weight(p, a.col_modes(), "P")?;
    check_weight(n, b.col_modes(), "N")?;
    let b1 = dag(a, Some(m), Some(p), tol)?.ein(a)?.ein(b)?;
    let b1_dag = dag(&b1, Some(p), Some(n), tol)?;
    let a1 = a.ein(&b1)?.ein(&b1_dag)?;
    finish(a1, b1, b1_dag, m, p, tol)
}

/// `A_1 = A B B^†_{P,I}`, `B_1 = (A_1)^†_{M,P} A_1 B`.
pub fn wmp_product_via_b1_first(
    a: &Tensor,
    b: &Tensor,
    m: &Weight,
    n: &Weight,
    p: &Weight,
    tol: Tolerances,
) -> Result<ProductIntermediates> {
    check_weight(m, a.row_modes(), "M")?;
    check_weight(p, a.col_modes(), "P")?;
    check_weight(n, b.col_modes(), "N")?;
    let a1 = a.ein(b)?.ein(&dag(b, Some(p), None, tol)?)?;
    let b1 = dag(&a1, Some(m), Some(p), tol)?.ein(&a1)?.ein(b)?;
    let b1_dag = dag(&b1, Some(p), Some(n), tol)?;
    finish(a1, b1, b1_dag, m, p, tol)
}

fn finish(a1: Tensor, b1: Tensor, b1_dag: Tensor, m: &Weight, p: &Weight, tol: Tolerances) -> Result<ProductIntermediates> {
    let a1_dag = dag(&a1, Some(m), Some(p), tol)?;
    let product = b1_dag.ein(&a1_dag)?;
    Ok(ProductIntermediates { a1, b1, a1_dag, b1_dag, product })
}

/// Triple-product law `(UVW)^†_{M,N} = W^†_{I,N} V^† U^†_{M,I}` under
/// `R(W) ⊆ R((UV)^*)` and `R(U^*) ⊆ R(VW)`.
pub fn check_triple_rol(u: &Tensor, v: &Tensor, w: &Tensor, m: &Weight, n: &Weight, tol: Tolerances) -> Result<RolReport> {
    let uv = u.ein(v)?;
    let vw = v.ein(w)?;
    let uvw = uv.ein(w)?;
    check_weight(m, u.row_modes(), "M")?;
    check_weight(n, w.col_modes(), "N")?;
    let direct = dag(&uvw, Some(m), Some(n), tol)?;
    let reversed = dag(w, None, Some(n), tol)?.ein(&dag(v, None, None, tol)?)?.ein(&dag(u, Some(m), None, tol)?)?;
    let c1 = range_check("range(W) in range((UV)*)", w, &uv.h(), tol)?;
    let c2 = range_check("range(U*) in range(VW)", &u.h(), &vw, tol)?;
    RolReport::new(direct, reversed, vec![c1, c2], tol.check)
}
