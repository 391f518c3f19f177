//! Disjointness relations between two g-frames and the `Γ` / `Δ` families on
//! the direct sum of their domains.
//!
//! Everything is decided in embedded coordinates. With `A`, `B` the embedded
//! analysis matrices of `Λ` and `Θ`:
//!
//! * strongly disjoint: `‖S_ΘΛ‖ = ‖B* A‖` is negligible (ranges orthogonal);
//! * range intersection: `dim(R(A) ∩ R(B)) = rank A + rank B − rank [A | B]`;
//! * weakly disjoint: the analysis matrix `[A | B]` of `Γ` has a trivial
//!   kernel, decided by a pivoted-QR rank so it does not share a code path
//!   with the intersection count.
//!
//! In finite dimension every subspace sum is closed, so *disjoint* and
//! *weakly disjoint* coincide. They are still computed separately and the
//! agreement serves as a cross-check.

use serde::Serialize;

use crate::analysis::{cross_operator, frame_bounds, require_frame};
use crate::error::Result;
use crate::linalg::{self, check_invertible, hstack, inverse_sqrt_hpd, qr_rank};
use crate::model::{analysis_matrix, GFrameFamily, TolerancePolicy};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DisjointnessReport {
    pub strongly_disjoint: bool,
    pub disjoint: bool,
    pub weakly_disjoint: bool,
    pub complementary_pair: bool,
    pub strongly_complementary_pair: bool,
    /// `‖S_ΘΛ‖`, the certificate for orthogonal ranges.
    pub cross_operator_norm: f64,
    /// The cutoff `‖S_ΘΛ‖` was compared against.
    pub orthogonality_threshold: f64,
    pub lambda_rank: usize,
    pub theta_rank: usize,
    pub range_intersection_dim: usize,
    pub range_sum_dim: usize,
    pub khat_dim: usize,
}

/// Classifies `Λ` (on `H`) and `Θ` (on `K`) by the five disjointness
/// relations. Both must be frames over the same measure space and blocks.
pub fn classify(lambda: &GFrameFamily, theta: &GFrameFamily, tol: &TolerancePolicy) -> Result<DisjointnessReport> {
    lambda.check_same_codomain(theta)?;
    let lam = require_frame(lambda, tol, "Λ")?;
    let th = require_frame(theta, tol, "Θ")?;

    let a = analysis_matrix(lambda);
    let b = analysis_matrix(theta);
    let n = lambda.khat_dim();
    let rank_a = linalg::rank(&a, tol)?;
    let rank_b = linalg::rank(&b, tol)?;
    let rank_ab = linalg::rank(&hstack(&a, &b), tol)?;
    let intersection = (rank_a + rank_b).saturating_sub(rank_ab);

    let cross_norm = linalg::operator_norm(&cross_operator(theta, lambda)?)?;
    let ortho_cut = tol.rel_eps * (lam.upper_bound * th.upper_bound).sqrt();
    let strongly = cross_norm <= ortho_cut;

    let disjoint = intersection == 0;
    let weakly = kernel_triviality(&gamma_family(lambda, theta)?, tol)?;

    Ok(DisjointnessReport {
        strongly_disjoint: strongly,
        disjoint,
        weakly_disjoint: weakly,
        complementary_pair: disjoint && rank_ab == n,
        strongly_complementary_pair: strongly && rank_a + rank_b == n,
        cross_operator_norm: cross_norm,
        orthogonality_threshold: ortho_cut,
        lambda_rank: rank_a,
        theta_rank: rank_b,
        range_intersection_dim: intersection,
        range_sum_dim: rank_ab,
        khat_dim: n,
    })
}

/// `Γ_i = [Λ_i | Θ_i]`, so that `Γ_i(h ⊕ k) = Λ_i h + Θ_i k`. The `H`
/// coordinates come first.
pub fn gamma_family(lambda: &GFrameFamily, theta: &GFrameFamily) -> Result<GFrameFamily> {
    lambda.check_same_codomain(theta)?;
    let blocks = lambda.blocks().iter().zip(theta.blocks()).map(|(l, t)| hstack(l, t)).collect();
    Ok(lambda.with_blocks(lambda.domain_dim() + theta.domain_dim(), blocks))
}

/// `Δ_i = [Λ_i S_Λ^{-1/2} | Θ_i S_Θ^{-1/2}]`. Parseval whenever the pair is
/// strongly disjoint.
pub fn delta_family(lambda: &GFrameFamily, theta: &GFrameFamily, tol: &TolerancePolicy) -> Result<GFrameFamily> {
    lambda.check_same_codomain(theta)?;
    let l1 = inverse_sqrt_hpd(&crate::analysis::frame_operator(lambda), tol, "S_Λ")?;
    let l2 = inverse_sqrt_hpd(&crate::analysis::frame_operator(theta), tol, "S_Θ")?;
    gamma_family(&lambda.compose(&l1)?, &theta.compose(&l2)?)
}

/// Given invertible `L1` on `H` and `L2` on `K`, true iff `{Λ_i L1}`,
/// `{Θ_i L2}` and `{[Λ_i L1 | Θ_i L2]}` are all Parseval. When this holds the
/// pair is strongly disjoint.
pub fn strong_disjointness_converse_check(
    lambda: &GFrameFamily,
    theta: &GFrameFamily,
    l1: &crate::model::CMatrix,
    l2: &crate::model::CMatrix,
    tol: &TolerancePolicy,
) -> Result<bool> {
    lambda.check_same_codomain(theta)?;
    check_invertible(l1, tol, "L1")?;
    check_invertible(l2, tol, "L2")?;
    let lam = lambda.compose(l1)?;
    let th = theta.compose(l2)?;
    let delta = gamma_family(&lam, &th)?;
    Ok(frame_bounds(&lam, tol)?.is_parseval
        && frame_bounds(&th, tol)?.is_parseval
        && frame_bounds(&delta, tol)?.is_parseval)
}

/// True iff no nonzero `f ⊕ g` is annihilated by every `Γ_i`.
pub fn kernel_triviality(gamma: &GFrameFamily, tol: &TolerancePolicy) -> Result<bool> {
    Ok(qr_rank(&analysis_matrix(gamma), tol) == gamma.domain_dim())
}
