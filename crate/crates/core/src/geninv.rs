//! Moore-Penrose and weighted Moore-Penrose inverses.

use crate::error::{Error, Result};
use crate::report::CheckReport;
use crate::spectral::{
    full_rank_decomposition, hermitian_weight_factors, hpd_sqrt, pinv_matrix, HpdFactors, RankTol,
};
use crate::tensor::{identity_tensor, rsh, rsh_inv, Tensor};

/// A weight tensor together with its cached square roots and inverse.
#[derive(Clone, Debug)]
pub struct Weight {
    tensor: Tensor,
    factors: HpdFactors,
    definite: bool,
}

impl Weight {
    /// Hermitian positive definite weight; rejects anything else.
    pub fn new(tensor: Tensor, tol: f64) -> Result<Self> {
        let factors = hpd_sqrt(&tensor, tol)?;
        Ok(Self { tensor, factors, definite: true })
    }

    /// Invertible Hermitian weight, possibly indefinite (principal complex square roots).
    pub fn generalized(tensor: Tensor, tol: f64) -> Result<Self> {
        let factors = hermitian_weight_factors(&tensor, tol)?;
        let definite = factors.eigenvalues.iter().all(|&l| l > 0.0);
        Ok(Self { tensor, factors, definite })
    }

    pub fn identity(modes: &[usize]) -> Result<Self> {
        let i = identity_tensor(modes)?;
        let n = rsh(&i).rows();
        let factors = HpdFactors { sqrt: i.clone(), inv_sqrt: i.clone(), inverse: i.clone(), eigenvalues: vec![1.0; n] };
        Ok(Self { tensor: i, factors, definite: true })
    }

    pub fn tensor(&self) -> &Tensor {
        &self.tensor
    }

    pub fn sqrt(&self) -> &Tensor {
        &self.factors.sqrt
    }

    pub fn inv_sqrt(&self) -> &Tensor {
        &self.factors.inv_sqrt
    }

    pub fn inverse(&self) -> &Tensor {
        &self.factors.inverse
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.factors.eigenvalues
    }

    pub fn is_positive_definite(&self) -> bool {
        self.definite
    }

    pub fn modes(&self) -> &[usize] {
        self.tensor.row_modes()
    }

    /// The weight `W^{-1}`, reusing the cached factors.
    pub fn inverted(&self) -> Weight {
        let mut eigenvalues: Vec<f64> = self.factors.eigenvalues.iter().map(|l| 1.0 / l).collect();
        eigenvalues.sort_by(|a, b| b.total_cmp(a));
        Weight {
            tensor: self.factors.inverse.clone(),
            factors: HpdFactors {
                sqrt: self.factors.inv_sqrt.clone(),
                inv_sqrt: self.factors.sqrt.clone(),
                inverse: self.tensor.clone(),
                eigenvalues,
            },
            definite: self.definite,
        }
    }
}

/// Row weight `m` and column weight `n` for a target tensor.
#[derive(Clone, Debug)]
pub struct WeightPair {
    pub m: Weight,
    pub n: Weight,
}

impl WeightPair {
    pub fn new(m: Weight, n: Weight) -> Self {
        Self { m, n }
    }

    pub fn identity_for(a: &Tensor) -> Result<Self> {
        Ok(Self { m: Weight::identity(a.row_modes())?, n: Weight::identity(a.col_modes())? })
    }

    pub fn check_conforms(&self, a: &Tensor) -> Result<()> {
        if self.m.modes() != a.row_modes() || self.n.modes() != a.col_modes() {
            return Err(Error::ShapeMismatch(format!(
                "weights over {:?} and {:?} do not fit a tensor of shape {}",
                self.m.modes(),
                self.n.modes(),
                a.shape()
            )));
        }
        Ok(())
    }
}

/// Moore-Penrose inverse via the truncated SVD of `rsh(a)`.
pub fn mp_inverse(a: &Tensor, tol: RankTol) -> Result<Tensor> {
    rsh_inv(pinv_matrix(rsh(a), tol)?, a.shape().transposed())
}

/// Moore-Penrose inverse from a full-rank decomposition: `G^* (F^* A G^*)^{-1} F^*`.
pub fn mp_inverse_frd(a: &Tensor, tol: RankTol) -> Result<Tensor> {
    let frd = full_rank_decomposition(a, tol)?;
    let (fh, gh) = (frd.f.h(), frd.g.h());
    let core = fh.ein(a)?.ein(&gh)?;
    let core_inv = invert(&core)?;
    gh.ein(&core_inv)?.ein(&fh)
}

fn invert(core: &Tensor) -> Result<Tensor> {
    let inv = rsh(core).inverse().ok_or(Error::SingularCore)?;
    rsh_inv(inv, core.shape().transposed())
}

/// Weighted Moore-Penrose inverse `N^{-1/2} (M^{1/2} A N^{-1/2})^† M^{1/2}`.
pub fn wmp_inverse(a: &Tensor, w: &WeightPair, tol: RankTol) -> Result<Tensor> {
    w.check_conforms(a)?;
    let inner = w.m.sqrt().ein(a)?.ein(w.n.inv_sqrt())?;
    let p = mp_inverse(&inner, tol)?;
    w.n.inv_sqrt().ein(&p)?.ein(w.m.sqrt())
}

/// Weighted inverse with optional weights, identity standing in for `None`.
pub fn wmp_inverse_opt(a: &Tensor, m: Option<&Weight>, n: Option<&Weight>, tol: RankTol) -> Result<Tensor> {
    let mut x = a.clone();
    if let Some(m) = m {
        x = m.sqrt().ein(&x)?;
    }
    if let Some(n) = n {
        x = x.ein(n.inv_sqrt())?;
    }
    let mut p = mp_inverse(&x, tol)?;
    if let Some(n) = n {
        p = n.inv_sqrt().ein(&p)?;
    }
    if let Some(m) = m {
        p = p.ein(m.sqrt())?;
    }
    Ok(p)
}

/// Weighted inverse from a full-rank decomposition: `N^{-1} G^* (F^* M A N^{-1} G^*)^{-1} F^* M`.
pub fn wmp_inverse_frd(a: &Tensor, w: &WeightPair, tol: RankTol) -> Result<Tensor> {
    w.check_conforms(a)?;
    let frd = full_rank_decomposition(a, tol)?;
    let (fh, gh) = (frd.f.h(), frd.g.h());
    let left = fh.ein(w.m.tensor())?;
    let right = w.n.inverse().ein(&gh)?;
    let core = left.ein(a)?.ein(&right)?;
    right.ein(&invert(&core)?)?.ein(&left)
}

/// Closed form for tensors whose reshape has full column rank: `N^{-1} (A^* M A N^{-1})^{-1} A^* M`.
pub fn wmp_inverse_left_invertible(a: &Tensor, w: &WeightPair) -> Result<Tensor> {
    w.check_conforms(a)?;
    let ahm = a.h().ein(w.m.tensor())?;
    let core = ahm.ein(a)?.ein(w.n.inverse())?;
    w.n.inverse().ein(&invert(&core)?)?.ein(&ahm)
}

/// Weighted conjugate transpose `A#_{N,M} = N^{-1} A^* M`.
pub fn weighted_conj_transpose(a: &Tensor, n: &Weight, m: &Weight) -> Result<Tensor> {
    n.inverse().ein(&a.h())?.ein(m.tensor())
}

fn rel(diff: &Tensor, scale: &Tensor) -> f64 {
    diff.frobenius_norm() / scale.frobenius_norm().max(1.0)
}

/// Checks `A A^† B = B`, i.e. the range of `b` lies in the range of `a`.
pub fn range_inclusion(b: &Tensor, a: &Tensor, tol: f64) -> Result<CheckReport> {
    if a.row_modes() != b.row_modes() {
        return Err(Error::ShapeMismatch(format!("range check needs equal row modes: {} vs {}", a.shape(), b.shape())));
    }
    let proj = a.ein(&mp_inverse(a, RankTol::Auto)?)?.ein(b)?;
    Ok(CheckReport::from_residuals("range_inclusion", tol, &[("projection", rel(&(&proj - b), b))]))
}

/// Checks `B A^† A = B`, i.e. the row space of `b` lies in that of `a`.
pub fn corange_inclusion(b: &Tensor, a: &Tensor, tol: f64) -> Result<CheckReport> {
    if a.col_modes() != b.col_modes() {
        return Err(Error::ShapeMismatch(format!("corange check needs equal column modes: {} vs {}", a.shape(), b.shape())));
    }
    let proj = b.ein(&mp_inverse(a, RankTol::Auto)?)?.ein(a)?;
    Ok(CheckReport::from_residuals("corange_inclusion", tol, &[("projection", rel(&(&proj - b), b))]))
}

fn hermitian_defect(t: &Tensor) -> f64 {
    rel(&(&t.h() - t), t)
}

/// Residuals of the four (weighted) Penrose equations for candidate `x`.
pub fn penrose_report(a: &Tensor, x: &Tensor, w: Option<&WeightPair>, tol: f64) -> Result<CheckReport> {
    if x.shape() != &a.shape().transposed() {
        return Err(Error::ShapeMismatch(format!("candidate has shape {}, expected {}", x.shape(), a.shape().transposed())));
    }
    let ax = a.ein(x)?;
    let xa = x.ein(a)?;
    let r1 = rel(&(&ax.ein(a)? - a), a);
    let r2 = rel(&(&xa.ein(x)? - x), x);
    let (max, nxa) = match w {
        Some(w) => {
            w.check_conforms(a)?;
            (w.m.tensor().ein(&ax)?, w.n.tensor().ein(&xa)?)
        }
        None => (ax, xa),
    };
    let name = if w.is_some() { "weighted_penrose" } else { "penrose" };
    Ok(CheckReport::from_residuals(
        name,
        tol,
        &[("axa_eq_a", r1), ("xax_eq_x", r2), ("ax_hermitian", hermitian_defect(&max)), ("xa_hermitian", hermitian_defect(&nxa))],
    ))
}
