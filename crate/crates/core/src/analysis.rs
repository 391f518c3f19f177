//! Frame operator, optimal bounds, canonical dual and Parseval normalization.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, inverse_hpd, inverse_sqrt_hpd};
use crate::model::{analysis_matrix, CMatrix, GFrameFamily, TolerancePolicy, C64};

/// Frame operator and its spectral bounds.
#[derive(Clone, Debug, Serialize)]
pub struct FrameReport {
    #[serde(skip)]
    pub frame_operator: CMatrix,
    pub lower_bound: f64,
    pub upper_bound: f64,
    /// The cutoff `λ_min` had to clear.
    pub frame_threshold: f64,
    pub is_frame: bool,
    pub is_tight: bool,
    pub is_parseval: bool,
}

/// `S_Λ = Σ μ_i Λ_i* Λ_i`, accumulated atom by atom.
pub fn frame_operator(fam: &GFrameFamily) -> CMatrix {
    let d = fam.domain_dim();
    let mut s = CMatrix::zeros(d, d);
    for (b, &w) in fam.blocks().iter().zip(fam.weights()) {
        s += b.ad_mul(b) * C64::from(w);
    }
    s
}

/// Optimal bounds are the extreme eigenvalues of `S_Λ`.
///
/// They are read off as squared singular values of the analysis matrix
/// (whose Gram matrix is `S_Λ`), which keeps a rank-deficient `S_Λ` at a true
/// zero instead of at eigensolver noise. When `N < d` the smallest eigenvalue
/// is exactly zero.
pub fn frame_bounds(fam: &GFrameFamily, tol: &TolerancePolicy) -> Result<FrameReport> {
    let s = linalg::singular_values(&analysis_matrix(fam))?;
    let d = fam.domain_dim();
    let upper = s.first().map_or(0.0, |x| x * x);
    let lower = if s.len() < d { 0.0 } else { s.last().map_or(0.0, |x| x * x) };
    let threshold = tol.frame_threshold(d, upper);
    let is_frame = upper > 0.0 && lower > threshold;
    let is_tight = is_frame && tol.close(lower, upper);
    let is_parseval = is_tight && tol.close(lower, 1.0) && tol.close(upper, 1.0);
    Ok(FrameReport {
        frame_operator: frame_operator(fam),
        lower_bound: lower,
        upper_bound: upper,
        frame_threshold: threshold,
        is_frame,
        is_tight,
        is_parseval,
    })
}

pub fn is_frame(fam: &GFrameFamily, tol: &TolerancePolicy) -> Result<bool> {
    Ok(frame_bounds(fam, tol)?.is_frame)
}

/// The canonical dual `{Λ_i S_Λ⁻¹}`.
pub fn canonical_dual(fam: &GFrameFamily, tol: &TolerancePolicy) -> Result<GFrameFamily> {
    let inv = inverse_hpd(&frame_operator(fam), tol, "frame operator")?;
    fam.compose(&inv)
}

/// `{Λ_i S_Λ^{-1/2}}`, a Parseval family.
pub fn parseval_normalize(fam: &GFrameFamily, tol: &TolerancePolicy) -> Result<GFrameFamily> {
    let root = inverse_sqrt_hpd(&frame_operator(fam), tol, "frame operator")?;
    fam.compose(&root)
}

/// `S_ΘΛ = T_Θ T*_Λ = Σ μ_i Θ_i* Λ_i`, shape `d_Θ × d_Λ`.
pub fn cross_operator(theta: &GFrameFamily, lambda: &GFrameFamily) -> Result<CMatrix> {
    theta.check_same_codomain(lambda)?;
    let mut s = CMatrix::zeros(theta.domain_dim(), lambda.domain_dim());
    for ((t, l), &w) in theta.blocks().iter().zip(lambda.blocks()).zip(theta.weights()) {
        s += t.ad_mul(l) * C64::from(w);
    }
    Ok(s)
}

/// Largest entry modulus of `S_ΘΛ − I`.
pub fn duality_defect(theta: &GFrameFamily, lambda: &GFrameFamily) -> Result<f64> {
    theta.check_same_domain(lambda)?;
    let s = cross_operator(theta, lambda)?;
    let d = s.nrows();
    Ok(crate::model::max_modulus(&(s - CMatrix::identity(d, d))))
}

/// `Θ` is a dual of `Λ`: both are frames and `Σ μ_i Θ_i* Λ_i = I`. The
/// adjoint identity `S_ΛΘ = I` is checked too.
pub fn is_dual_pair(theta: &GFrameFamily, lambda: &GFrameFamily, tol: &TolerancePolicy) -> Result<bool> {
    theta.check_same_domain(lambda)?;
    let forward = cross_operator(theta, lambda)?;
    let backward = cross_operator(lambda, theta)?;
    Ok(tol.is_identity(&forward) && tol.is_identity(&backward) && is_frame(theta, tol)? && is_frame(lambda, tol)?)
}

pub(crate) fn require_frame(fam: &GFrameFamily, tol: &TolerancePolicy, name: &str) -> Result<FrameReport> {
    let report = frame_bounds(fam, tol)?;
    if !report.is_frame {
        return Err(Error::precondition(format!(
            "{name} is not a continuous g-frame (lower bound {:.3e})",
            report.lower_bound
        )));
    }
    Ok(report)
}
