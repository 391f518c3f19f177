//! Building new frames and duals out of disjoint pairs.
//!
//! Every construction checks its hypotheses first and names the one that
//! failed. Results carry the numeric certificate the construction promises
//! (a bound sandwich or a duality identity) alongside the family itself.

use serde::Serialize;

use crate::analysis::{frame_bounds, frame_operator, is_dual_pair, FrameReport};
use crate::disjoint::{classify, gamma_family};
use crate::error::{Error, Result};
use crate::linalg::{self, inverse_hpd, is_surjective};
use crate::model::{CMatrix, CVector, GFrameFamily, MeasureSpace, TolerancePolicy, C64};

pub use crate::linalg::pseudo_inverse;

/// Operators `L1`, `L2` that both act on the same family domain.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorPair {
    pub l1: CMatrix,
    pub l2: CMatrix,
}

impl OperatorPair {
    pub fn new(l1: CMatrix, l2: CMatrix) -> Result<Self> {
        if l1.shape() != l2.shape() {
            return Err(Error::shape(format!(
                "L1 is {}×{} but L2 is {}×{}",
                l1.nrows(),
                l1.ncols(),
                l2.nrows(),
                l2.ncols()
            )));
        }
        Ok(Self { l1, l2 })
    }

    /// `αI` and `βI` on `C^d`.
    pub fn scalars(alpha: C64, beta: C64, d: usize) -> Self {
        let id = CMatrix::identity(d, d);
        Self { l1: &id * alpha, l2: id * beta }
    }

    pub fn identity(d: usize) -> Self {
        Self::scalars(C64::from(1.0), C64::from(1.0), d)
    }
}

/// A continuous frame `ω ↦ F(ω)` on `C^dim`, one vector per atom.
#[derive(Clone, Debug, PartialEq)]
pub struct ContinuousFrameSpec {
    pub space: MeasureSpace,
    pub dim: usize,
    pub vectors: Vec<CVector>,
}

impl ContinuousFrameSpec {
    pub fn new(space: MeasureSpace, dim: usize, vectors: Vec<CVector>) -> Result<Self> {
        if vectors.len() != space.atom_count() {
            return Err(Error::shape(format!("{} vectors for {} atoms", vectors.len(), space.atom_count())));
        }
        if dim == 0 || vectors.iter().any(|v| v.len() != dim) {
            return Err(Error::shape(format!("every vector must have length {dim}")));
        }
        Ok(Self { space, dim, vectors })
    }

    /// Reads a family with 1-row blocks as the continuous frame it analyzes:
    /// `Λ_i f = ⟨f, F(ω_i)⟩` means row `i` is `F(ω_i)*`.
    pub fn from_family(fam: &GFrameFamily) -> Result<Self> {
        if fam.block_dims().iter().any(|&d| d != 1) {
            return Err(Error::shape("a continuous frame needs every block to have one row"));
        }
        let vectors = fam.blocks().iter().map(|b| b.row(0).adjoint()).collect();
        Self::new(fam.space().clone(), fam.domain_dim(), vectors)
    }

    /// `S_F = Σ μ_i F_i F_i*`.
    pub fn frame_operator(&self) -> CMatrix {
        let mut s = CMatrix::zeros(self.dim, self.dim);
        for (v, &w) in self.vectors.iter().zip(self.space.weights()) {
            s += v * v.adjoint() * C64::from(w);
        }
        s
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DisjointSum {
    #[serde(skip)]
    pub family: GFrameFamily,
    pub report: FrameReport,
    pub gamma_lower_bound: f64,
    pub gamma_upper_bound: f64,
    /// Which operator supplied the right inverse: `"L1"` or `"L2"`.
    pub surjective_operator: &'static str,
    pub pseudo_inverse_norm: f64,
    /// `A_Γ / ‖L†‖²`.
    pub lower_guarantee: f64,
    /// `2 B_Γ · max{‖L1‖², ‖L2‖²}`.
    pub upper_guarantee: f64,
    pub certificate_holds: bool,
}

/// `{Λ_i L1* + Θ_i L2*}` for a disjoint pair on a common `H`, with `L1` or
/// `L2` surjective. The operators map `H` onto some `C^m` and the result is a
/// frame on `C^m`.
pub fn disjoint_sum_family(
    lambda: &GFrameFamily,
    theta: &GFrameFamily,
    pair: &OperatorPair,
    tol: &TolerancePolicy,
) -> Result<DisjointSum> {
    same_space(lambda, theta)?;
    if pair.l1.ncols() != lambda.domain_dim() {
        return Err(Error::shape("L1 and L2 must act on the domain of Λ and Θ"));
    }
    if !classify(lambda, theta, tol)?.disjoint {
        return Err(Error::precondition("Λ and Θ are not disjoint"));
    }
    let (name, surjective) = if is_surjective(&pair.l1, tol)? {
        ("L1", &pair.l1)
    } else if is_surjective(&pair.l2, tol)? {
        ("L2", &pair.l2)
    } else {
        return Err(Error::precondition("neither L1 nor L2 is surjective"));
    };

    let family = lambda.compose(&pair.l1.adjoint())?.sum(&theta.compose(&pair.l2.adjoint())?)?;
    let report = frame_bounds(&family, tol)?;
    let gamma = frame_bounds(&gamma_family(lambda, theta)?, tol)?;
    let pinv_norm = linalg::operator_norm(&pseudo_inverse(surjective, tol)?)?;
    let n1 = linalg::operator_norm(&pair.l1)?;
    let n2 = linalg::operator_norm(&pair.l2)?;
    let lower_guarantee = gamma.lower_bound / (pinv_norm * pinv_norm);
    let upper_guarantee = 2.0 * gamma.upper_bound * (n1 * n1).max(n2 * n2);
    let slack = tol.rel_eps * upper_guarantee.max(1.0);
    let certificate_holds = report.is_frame
        && report.lower_bound >= lower_guarantee - slack
        && report.upper_bound <= upper_guarantee + slack;

    Ok(DisjointSum {
        family,
        report,
        gamma_lower_bound: gamma.lower_bound,
        gamma_upper_bound: gamma.upper_bound,
        surjective_operator: name,
        pseudo_inverse_norm: pinv_norm,
        lower_guarantee,
        upper_guarantee,
        certificate_holds,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct StrongSum {
    #[serde(skip)]
    pub family: GFrameFamily,
    pub report: FrameReport,
    /// The scalar `A` with `L1* L1 + L2* L2 = A·I`.
    pub scalar: f64,
    /// `A · min{A_Λ, A_Θ}`.
    pub lower_guarantee: f64,
    /// `B_Λ‖L1‖² + B_Θ‖L2‖²`.
    pub upper_guarantee: f64,
    pub bounds_hold: bool,
    pub inputs_parseval: bool,
    /// For Parseval inputs: the result is tight with bound exactly `A`.
    pub tight_with_scalar: Option<bool>,
}

/// `{Λ_i L1 + Θ_i L2}` for a strongly disjoint pair with
/// `L1* L1 + L2* L2 = A·I`, `A > 0`.
pub fn strongly_disjoint_sum(
    lambda: &GFrameFamily,
    theta: &GFrameFamily,
    pair: &OperatorPair,
    tol: &TolerancePolicy,
) -> Result<StrongSum> {
    same_space(lambda, theta)?;
    if pair.l1.nrows() != lambda.domain_dim() {
        return Err(Error::shape("L1 and L2 must map into the domain of Λ and Θ"));
    }
    let gram = pair.l1.ad_mul(&pair.l1) + pair.l2.ad_mul(&pair.l2);
    let scalar = gram[(0, 0)].re;
    let m = gram.nrows();
    if scalar.is_nan() || scalar <= 0.0 || !tol.matrices_close(&gram, &(CMatrix::identity(m, m) * C64::from(scalar))) {
        return Err(Error::precondition("L1* L1 + L2* L2 = A·I with A > 0 does not hold"));
    }
    if !classify(lambda, theta, tol)?.strongly_disjoint {
        return Err(Error::precondition("Λ and Θ are not strongly disjoint"));
    }

    let lam = frame_bounds(lambda, tol)?;
    let th = frame_bounds(theta, tol)?;
    let family = lambda.compose(&pair.l1)?.sum(&theta.compose(&pair.l2)?)?;
    let report = frame_bounds(&family, tol)?;
    let n1 = linalg::operator_norm(&pair.l1)?;
    let n2 = linalg::operator_norm(&pair.l2)?;
    let lower_guarantee = scalar * lam.lower_bound.min(th.lower_bound);
    let upper_guarantee = lam.upper_bound * n1 * n1 + th.upper_bound * n2 * n2;
    let slack = tol.rel_eps * upper_guarantee.max(1.0);
    let bounds_hold = report.lower_bound >= lower_guarantee - slack && report.upper_bound <= upper_guarantee + slack;
    let inputs_parseval = lam.is_parseval && th.is_parseval;
    let tight_with_scalar = inputs_parseval
        .then(|| report.is_tight && tol.close(report.lower_bound, scalar) && tol.close(report.upper_bound, scalar));

    Ok(StrongSum {
        family,
        report,
        scalar,
        lower_guarantee,
        upper_guarantee,
        bounds_hold,
        inputs_parseval,
        tight_with_scalar,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DirectSumDuals {
    #[serde(skip)]
    pub gamma: GFrameFamily,
    #[serde(skip)]
    pub delta: GFrameFamily,
    pub dual_verified: bool,
    /// Largest entry of `S_ΔΓ − I`.
    pub duality_defect: f64,
}

/// `Λ` dual to `Θ` on `H`, `Ψ` dual to `Φ` on `K`, with `(Λ, Φ)` and
/// `(Θ, Ψ)` strongly disjoint. Then `Γ = [Λ | Ψ]` and `Δ = [Θ | Φ]` are dual
/// on `H ⊕ K`.
pub fn direct_sum_duals(
    lambda: &GFrameFamily,
    theta: &GFrameFamily,
    psi: &GFrameFamily,
    phi: &GFrameFamily,
    tol: &TolerancePolicy,
) -> Result<DirectSumDuals> {
    same_space(lambda, theta)?;
    same_space(psi, phi)?;
    lambda.check_same_codomain(psi)?;
    if !is_dual_pair(theta, lambda, tol)? {
        return Err(Error::precondition("Λ and Θ are not a dual pair"));
    }
    if !is_dual_pair(phi, psi, tol)? {
        return Err(Error::precondition("Ψ and Φ are not a dual pair"));
    }
    if !classify(lambda, phi, tol)?.strongly_disjoint {
        return Err(Error::precondition("Λ and Φ are not strongly disjoint"));
    }
    if !classify(theta, psi, tol)?.strongly_disjoint {
        return Err(Error::precondition("Θ and Ψ are not strongly disjoint"));
    }
    let gamma = gamma_family(lambda, psi)?;
    let delta = gamma_family(theta, phi)?;
    let dual_verified = is_dual_pair(&delta, &gamma, tol)?;
    let duality_defect = crate::analysis::duality_defect(&delta, &gamma)?;
    Ok(DirectSumDuals { gamma, delta, dual_verified, duality_defect })
}

#[derive(Clone, Debug, Serialize)]
pub struct PseudoDual {
    #[serde(skip)]
    pub dual: GFrameFamily,
    /// `{Λ_i L1*}`.
    #[serde(skip)]
    pub single: GFrameFamily,
    /// `{Λ_i L1* + Θ_i L2*}`.
    #[serde(skip)]
    pub sum: GFrameFamily,
    pub dual_of_single: bool,
    pub dual_of_sum: bool,
    pub single_defect: f64,
    pub sum_defect: f64,
}

/// For a strongly disjoint pair and surjective `L1`, `{Λ_i S_Λ⁻¹ L1†}` is a
/// dual of both `{Λ_i L1*}` and `{Λ_i L1* + Θ_i L2*}`.
pub fn pseudo_dual(
    lambda: &GFrameFamily,
    theta: &GFrameFamily,
    pair: &OperatorPair,
    tol: &TolerancePolicy,
) -> Result<PseudoDual> {
    same_space(lambda, theta)?;
    if pair.l1.ncols() != lambda.domain_dim() {
        return Err(Error::shape("L1 and L2 must act on the domain of Λ and Θ"));
    }
    if !classify(lambda, theta, tol)?.strongly_disjoint {
        return Err(Error::precondition("Λ and Θ are not strongly disjoint"));
    }
    if !is_surjective(&pair.l1, tol)? {
        return Err(Error::precondition("L1 is not surjective"));
    }
    let s_inv = inverse_hpd(&frame_operator(lambda), tol, "S_Λ")?;
    let dual = lambda.compose(&(s_inv * pseudo_inverse(&pair.l1, tol)?))?;
    let single = lambda.compose(&pair.l1.adjoint())?;
    let sum = single.sum(&theta.compose(&pair.l2.adjoint())?)?;
    Ok(PseudoDual {
        dual_of_single: is_dual_pair(&dual, &single, tol)?,
        dual_of_sum: is_dual_pair(&dual, &sum, tol)?,
        single_defect: crate::analysis::duality_defect(&dual, &single)?,
        sum_defect: crate::analysis::duality_defect(&dual, &sum)?,
        dual,
        single,
        sum,
    })
}

/// The four families obtained by lifting two continuous frames into `C²`.
#[derive(Clone, Debug, PartialEq)]
pub struct LiftedFrames {
    /// `Λ_ω f = (⟨f, F(ω)⟩, 0)`.
    pub lambda: GFrameFamily,
    /// `Θ_ω f = (⟨S_F⁻¹ f, F(ω)⟩, 0)`.
    pub theta: GFrameFamily,
    /// `Φ_ω g = (0, ⟨S_G⁻¹ g, G(ω)⟩)`.
    pub phi: GFrameFamily,
    /// `Ψ_ω g = (0, ⟨g, G(ω)⟩)`.
    pub psi: GFrameFamily,
}

pub fn lift_continuous_frame(
    f_spec: &ContinuousFrameSpec,
    g_spec: &ContinuousFrameSpec,
    tol: &TolerancePolicy,
) -> Result<LiftedFrames> {
    if f_spec.space != g_spec.space {
        return Err(Error::shape("F and G must live over the same measure space"));
    }
    let invert = |spec: &ContinuousFrameSpec, name: &str| {
        inverse_hpd(&spec.frame_operator(), tol, name).map_err(|e| match e {
            Error::Singular(msg) => Error::Precondition(format!("{name} is not invertible ({msg})")),
            other => other,
        })
    };
    let sf_inv = invert(f_spec, "S_F")?;
    let sg_inv = invert(g_spec, "S_G")?;

    // row r of a 2-row block holds the functional, the other row is zero
    let lifted = |spec: &ContinuousFrameSpec, op: Option<&CMatrix>, row: usize| -> Result<GFrameFamily> {
        let blocks = spec
            .vectors
            .iter()
            .map(|v| {
                let functional = match op {
                    Some(s) => v.adjoint() * s,
                    None => v.adjoint(),
                };
                let mut b = CMatrix::zeros(2, spec.dim);
                b.row_mut(row).copy_from(&functional);
                b
            })
            .collect();
        GFrameFamily::new(spec.space.clone(), spec.dim, blocks)
    };
    Ok(LiftedFrames {
        lambda: lifted(f_spec, None, 0)?,
        theta: lifted(f_spec, Some(&sf_inv), 0)?,
        phi: lifted(g_spec, Some(&sg_inv), 1)?,
        psi: lifted(g_spec, None, 1)?,
    })
}

fn same_space(a: &GFrameFamily, b: &GFrameFamily) -> Result<()> {
    a.check_same_codomain(b)?;
    a.check_same_domain(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::canonical_dual;
    use crate::model::{real_matrix, real_vector};

    fn tol() -> TolerancePolicy {
        TolerancePolicy::default()
    }

    fn fam(blocks: &[&[f64]]) -> GFrameFamily {
        GFrameFamily::from_real(&[1.0, 1.0], 1, blocks).unwrap()
    }

    fn close(a: &CMatrix, b: &CMatrix) -> bool {
        tol().matrices_close(a, b)
    }

    #[test]
    fn pseudo_inverse_examples() {
        let t = real_matrix(1, 2, &[1.0, 0.0]);
        let p = pseudo_inverse(&t, &tol()).unwrap();
        assert!(close(&p, &real_matrix(2, 1, &[1.0, 0.0])));
        assert!(close(&(&t * &p), &CMatrix::identity(1, 1)));
        assert!(close(&pseudo_inverse(&CMatrix::identity(3, 3), &tol()).unwrap(), &CMatrix::identity(3, 3)));
        assert!(close(&pseudo_inverse(&real_matrix(1, 1, &[2.0]), &tol()).unwrap(), &real_matrix(1, 1, &[0.5])));
    }

    #[test]
    fn corollary_sum_of_skew_pair() {
        let lam = fam(&[&[1.0], &[0.0]]);
        let th = fam(&[&[1.0], &[1.0]]);
        let r = disjoint_sum_family(&lam, &th, &OperatorPair::identity(1), &tol()).unwrap();
        assert!(close(r.family.block(0), &real_matrix(1, 1, &[2.0])));
        assert!(close(r.family.block(1), &real_matrix(1, 1, &[1.0])));
        assert!((r.report.lower_bound - 5.0).abs() < 1e-12);
        assert!(r.report.is_frame && r.certificate_holds);
    }

    #[test]
    fn disjoint_sum_with_zero_second_operator() {
        let lam = fam(&[&[1.0], &[0.0]]);
        let th = fam(&[&[0.0], &[1.0]]);
        let pair = OperatorPair::new(CMatrix::identity(1, 1), CMatrix::zeros(1, 1)).unwrap();
        let r = disjoint_sum_family(&lam, &th, &pair, &tol()).unwrap();
        assert_eq!(r.family, lam);
        assert!(r.certificate_holds && r.surjective_operator == "L1");
    }

    #[test]
    fn disjoint_sum_with_rectangular_surjection() {
        let (lam, th) = crate::random::random_overlapping_pair(3, &[1.0, 2.0, 0.5], &[2, 2, 1], 2, 2, 0).unwrap();
        let l1 = real_matrix(1, 2, &[1.0, 0.0]);
        let l2 = real_matrix(1, 2, &[0.3, -2.0]);
        let r = disjoint_sum_family(&lam, &th, &OperatorPair::new(l1, l2).unwrap(), &tol()).unwrap();
        assert_eq!(r.family.domain_dim(), 1);
        assert!(r.certificate_holds);
        assert!((r.pseudo_inverse_norm - 1.0).abs() < 1e-14);
    }

    #[test]
    fn disjoint_sum_preconditions() {
        let ones = fam(&[&[1.0], &[1.0]]);
        let e1 = fam(&[&[1.0], &[0.0]]);
        let err = disjoint_sum_family(&ones, &ones, &OperatorPair::identity(1), &tol()).unwrap_err();
        assert!(err.to_string().contains("not disjoint"));
        let zero = OperatorPair::new(CMatrix::zeros(1, 1), CMatrix::zeros(1, 1)).unwrap();
        let err = disjoint_sum_family(&e1, &ones, &zero, &tol()).unwrap_err();
        assert!(err.to_string().contains("neither L1 nor L2"));
    }

    #[test]
    fn strong_sum_scalar_examples() {
        let lam = fam(&[&[1.0], &[0.0]]);
        let th = fam(&[&[0.0], &[1.0]]);
        let r = strongly_disjoint_sum(&lam, &th, &OperatorPair::scalars(3.0.into(), 4.0.into(), 1), &tol()).unwrap();
        assert_eq!(r.scalar, 25.0);
        assert!(close(r.family.block(0), &real_matrix(1, 1, &[3.0])));
        assert!(close(r.family.block(1), &real_matrix(1, 1, &[4.0])));
        assert!((r.report.upper_bound - 25.0).abs() < 1e-12);
        assert_eq!(r.tight_with_scalar, Some(true));

        let h = 1.0 / 2f64.sqrt();
        let r = strongly_disjoint_sum(&lam, &th, &OperatorPair::scalars(h.into(), h.into(), 1), &tol()).unwrap();
        assert!(r.report.is_parseval);

        let pair = OperatorPair::new(CMatrix::identity(1, 1), CMatrix::zeros(1, 1)).unwrap();
        let r = strongly_disjoint_sum(&lam, &th, &pair, &tol()).unwrap();
        assert_eq!(r.scalar, 1.0);
        assert_eq!(r.family, lam);
    }

    #[test]
    fn strong_sum_preconditions() {
        let lam = fam(&[&[1.0], &[0.0]]);
        let th = fam(&[&[0.0], &[1.0]]);
        let bad = OperatorPair::new(real_matrix(2, 2, &[1.0, 0.0, 0.0, 2.0]), CMatrix::zeros(2, 2)).unwrap();
        let id2 = GFrameFamily::from_real(&[1.0, 1.0], 2, &[&[1.0, 0.0], &[0.0, 1.0]]).unwrap();
        let err = strongly_disjoint_sum(&id2, &id2, &bad, &tol()).unwrap_err();
        assert!(err.to_string().contains("A·I"));
        let skew = fam(&[&[1.0], &[1.0]]);
        let err = strongly_disjoint_sum(&lam, &skew, &OperatorPair::identity(1), &tol()).unwrap_err();
        assert!(err.to_string().contains("not strongly disjoint"));
        let err =
            strongly_disjoint_sum(&lam, &th, &OperatorPair::scalars(0.0.into(), 0.0.into(), 1), &tol()).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }

    fn lift_standard() -> LiftedFrames {
        let space = MeasureSpace::uniform(2);
        let f = ContinuousFrameSpec::new(space.clone(), 2, vec![real_vector(&[1.0, 0.0]), real_vector(&[0.0, 1.0])])
            .unwrap();
        lift_continuous_frame(&f, &f, &tol()).unwrap()
    }

    #[test]
    fn lift_standard_basis() {
        let l = lift_standard();
        assert_eq!(l.lambda.block(0), &real_matrix(2, 2, &[1.0, 0.0, 0.0, 0.0]));
        assert_eq!(l.psi.block(1), &real_matrix(2, 2, &[0.0, 0.0, 0.0, 1.0]));
        assert!(is_dual_pair(&l.theta, &l.lambda, &tol()).unwrap());
        assert!(is_dual_pair(&l.psi, &l.phi, &tol()).unwrap());
        let r = direct_sum_duals(&l.lambda, &l.theta, &l.psi, &l.phi, &tol()).unwrap();
        assert!(r.dual_verified);
    }

    #[test]
    fn lift_scalar_frame() {
        let space = MeasureSpace::uniform(2);
        let f = ContinuousFrameSpec::new(space.clone(), 1, vec![real_vector(&[1.0]), real_vector(&[1.0])]).unwrap();
        let l = lift_continuous_frame(&f, &f, &tol()).unwrap();
        assert!(close(l.theta.block(0), &real_matrix(2, 1, &[0.5, 0.0])));
        let r = direct_sum_duals(&l.lambda, &l.theta, &l.psi, &l.phi, &tol()).unwrap();
        assert!(r.dual_verified);
    }

    #[test]
    fn lift_degenerate_frame_fails() {
        let space = MeasureSpace::uniform(1);
        let f = ContinuousFrameSpec::new(space, 1, vec![real_vector(&[0.0])]).unwrap();
        let err = lift_continuous_frame(&f, &f, &tol()).unwrap_err();
        assert!(matches!(err, Error::Precondition(ref m) if m.contains("S_F")));
    }

    #[test]
    fn direct_sum_duals_guards_hypotheses() {
        let l = lift_standard();
        let err = direct_sum_duals(&l.lambda, &l.theta, &l.lambda, &l.theta, &tol()).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }

    #[test]
    fn corollary_canonical_dual_serves_both() {
        let (lam, th) =
            crate::random::random_strongly_disjoint_parseval_pair(2, &[1.0, 0.5, 2.0], &[2, 1, 2], 2, 2).unwrap();
        let lam = lam.compose(&real_matrix(2, 2, &[2.0, 1.0, 0.0, 1.0])).unwrap();
        let r = pseudo_dual(&lam, &th, &OperatorPair::identity(2), &tol()).unwrap();
        let canon = canonical_dual(&lam, &tol()).unwrap();
        assert!(r.dual.blocks().iter().zip(canon.blocks()).all(|(a, b)| close(a, b)));
        assert!(r.dual_of_single && r.dual_of_sum);
    }

    #[test]
    fn pseudo_dual_requires_surjective_l1() {
        let (lam, th) = crate::random::random_strongly_disjoint_parseval_pair(5, &[1.0, 1.0], &[2, 2], 2, 2).unwrap();
        let pair = OperatorPair::new(real_matrix(2, 2, &[1.0, 1.0, 1.0, 1.0]), CMatrix::identity(2, 2)).unwrap();
        let err = pseudo_dual(&lam, &th, &pair, &tol()).unwrap_err();
        assert!(err.to_string().contains("L1 is not surjective"));
    }
}
