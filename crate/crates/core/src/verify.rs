//! The randomized property suite behind `gframe verify`.
//!
//! Each case draws fresh instances from a per-case seed and records, for
//! every invariant it touches, whether it held and a normalized residual.
//! Aggregated per invariant this gives one [`Check`] whose metrics are the
//! number of applicable cases, the number of failures and the worst residual
//! seen. The whole run is a pure function of `(seed, cases, tolerance)`.

use rand::{Rng, RngCore};
use rand_chacha::ChaCha8Rng;

use crate::analysis::{canonical_dual, cross_operator, frame_bounds, frame_operator, parseval_normalize};
use crate::construct::{
    direct_sum_duals, disjoint_sum_family, lift_continuous_frame, pseudo_dual, strongly_disjoint_sum,
    ContinuousFrameSpec, OperatorPair,
};
use crate::disjoint::{classify, delta_family, gamma_family, kernel_triviality, strong_disjointness_converse_check};
use crate::error::Result;
use crate::linalg::{self, inverse_sqrt_hpd, null_space};
use crate::model::{
    analysis_matrix, embed, inner, khat_inner, max_modulus, unembed, CMatrix, CVector, GFrameFamily, KHatVector,
    MeasureSpace, TolerancePolicy, C64,
};
use crate::random::{
    gaussian_matrix, gaussian_vector, orthonormal_columns, random_gframe, random_overlapping_pair,
    random_strongly_disjoint_parseval_pair, seeded, FamilyShape,
};
use crate::report::Check;
use crate::riesz::{cross_surjectivity, mixed_construction, perturbation_riesz_transfer, riesz_check};

const MAX_ATOMS: usize = 8;
const MAX_DOMAIN: usize = 6;

/// Runs `cases` randomized cases and returns one check per invariant.
pub fn run_suite(seed: u64, cases: usize, tol: &TolerancePolicy) -> Vec<Check> {
    let mut master = seeded(seed);
    let mut suite = Suite::default();
    for _ in 0..cases {
        let mut rng = seeded(master.next_u64());
        type Group = fn(&mut Suite, &mut ChaCha8Rng, &TolerancePolicy) -> Result<()>;
        let groups: [(&str, Group); 4] = [
            ("frames", frame_case),
            ("disjointness", pair_case),
            ("constructions", construction_case),
            ("riesz", riesz_case),
        ];
        for (name, group) in groups {
            let outcome = group(&mut suite, &mut rng, tol);
            suite.pass(&format!("{name}.no_errors"), outcome.is_ok(), 0.0);
        }
    }
    suite.into_checks()
}

#[derive(Default)]
struct Suite {
    tallies: Vec<Tally>,
}

struct Tally {
    name: String,
    cases: usize,
    failures: usize,
    worst: f64,
}

impl Suite {
    fn pass(&mut self, name: &str, ok: bool, residual: f64) {
        let idx = match self.tallies.iter().position(|t| t.name == name) {
            Some(i) => i,
            None => {
                self.tallies.push(Tally { name: name.to_owned(), cases: 0, failures: 0, worst: 0.0 });
                self.tallies.len() - 1
            }
        };
        let t = &mut self.tallies[idx];
        t.cases += 1;
        t.failures += usize::from(!ok);
        if residual.is_nan() {
            t.worst = f64::NAN;
        } else {
            t.worst = t.worst.max(residual);
        }
    }

    /// Records a residual that must stay within `rel_eps`.
    fn within(&mut self, name: &str, residual: f64, tol: &TolerancePolicy) {
        self.pass(name, residual <= tol.rel_eps, residual);
    }

    fn into_checks(self) -> Vec<Check> {
        self.tallies
            .into_iter()
            .map(|t| {
                Check::new(t.name, t.failures == 0)
                    .metric("cases", t.cases as f64)
                    .metric("failures", t.failures as f64)
                    .metric("worst_residual", t.worst)
            })
            .collect()
    }
}

fn layout(rng: &mut impl Rng, min_n: usize) -> (Vec<f64>, Vec<usize>) {
    let atoms = rng.gen_range(1..=MAX_ATOMS);
    let mut dims: Vec<usize> = (0..atoms).map(|_| rng.gen_range(1..=3)).collect();
    // sometimes land exactly on min_n so complementary pairs show up
    let exact = rng.gen_bool(0.5);
    let mut n: usize = dims.iter().sum();
    while n < min_n {
        let i = rng.gen_range(0..dims.len());
        dims[i] += 1;
        n += 1;
    }
    if exact {
        while n > min_n {
            if let Some(i) = dims.iter().position(|&r| r > 1) {
                dims[i] -= 1;
            } else {
                dims.pop();
            }
            n = dims.iter().sum();
        }
    }
    let weights = dims.iter().map(|_| rng.gen_range(0.1..3.0)).collect();
    (weights, dims)
}

fn well_conditioned(rng: &mut impl Rng, d: usize) -> CMatrix {
    let u = orthonormal_columns(rng, d, d);
    let v = orthonormal_columns(rng, d, d);
    let s = CMatrix::from_diagonal(&CVector::from_fn(d, |_, _| C64::from(rng.gen_range(0.5..2.0))));
    u * s * v.adjoint()
}

/// An `m × d` surjection with singular values in `[0.5, 2]`.
fn surjection(rng: &mut impl Rng, m: usize, d: usize) -> CMatrix {
    let q = orthonormal_columns(rng, d, m);
    well_conditioned(rng, m) * q.adjoint()
}

fn random_khat(rng: &mut impl Rng, dims: &[usize]) -> KHatVector {
    KHatVector::new(dims.iter().map(|&r| gaussian_vector(rng, r)).collect())
}

fn random_frame(rng: &mut ChaCha8Rng, d: Option<usize>, tol: &TolerancePolicy) -> Result<GFrameFamily> {
    let mut shape = FamilyShape::random(rng, MAX_ATOMS, 3, MAX_DOMAIN, (0.1, 3.0));
    if let Some(d) = d {
        shape.domain_dim = d;
        while shape.khat_dim() < d {
            shape.weights.push(rng.gen_range(0.1..3.0));
            shape.block_dims.push(rng.gen_range(1..=3));
        }
    }
    shape.domain_dim = shape.domain_dim.min(shape.khat_dim());
    Ok(random_gframe(rng.next_u64(), &shape, tol)?.family)
}

fn blocks_residual(a: &GFrameFamily, b: &GFrameFamily) -> f64 {
    a.blocks().iter().zip(b.blocks()).map(|(x, y)| max_modulus(&(x - y)) / max_modulus(y).max(1.0)).fold(0.0, f64::max)
}

fn frame_case(suite: &mut Suite, rng: &mut ChaCha8Rng, tol: &TolerancePolicy) -> Result<()> {
    let fam = random_frame(rng, None, tol)?;
    let space = fam.space();
    let dims = fam.block_dims();
    let d = fam.domain_dim();

    let f = random_khat(rng, dims);
    let g = random_khat(rng, dims);
    let scale = (f.norm_squared(space)? * g.norm_squared(space)?).sqrt().max(1.0);
    let fg = khat_inner(&f, &g, space)?;
    suite.within("khat.isometry", (fg - inner(&embed(&f, space)?, &embed(&g, space)?)).norm() / scale, tol);
    suite.within("khat.conjugate_symmetry", (fg - khat_inner(&g, &f, space)?.conj()).norm() / scale, tol);

    let a = analysis_matrix(&fam);
    let h = gaussian_vector(rng, d);
    let blockwise = unembed(&(&a * &h), space, dims)?;
    let residual = blockwise
        .blocks()
        .iter()
        .zip(fam.blocks())
        .map(|(got, block)| (got - block * &h).norm() / ((block.norm() * h.norm()).max(1.0)))
        .fold(0.0, f64::max);
    suite.within("khat.blockwise_analysis", residual, tol);

    let report = frame_bounds(&fam, tol)?;
    suite.pass("frame.generated_is_frame", report.is_frame, 0.0);
    let (lower, upper) = (report.lower_bound, report.upper_bound);
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let h = gaussian_vector(rng, d);
        let energy: f64 = fam.blocks().iter().zip(fam.weights()).map(|(b, &w)| w * (b * &h).norm_squared()).sum();
        let hh = h.norm_squared();
        let slack = upper * hh;
        worst = worst.max((lower * hh - energy).max(energy - upper * hh).max(0.0) / slack);
    }
    suite.within("frame.defining_inequality", worst, tol);

    let s = frame_operator(&fam);
    let (f, g) = (gaussian_vector(rng, d), gaussian_vector(rng, d));
    let s_inv_f = s.clone().lu().solve(&f).expect("frame operator of a frame is invertible");
    let recon: C64 =
        fam.blocks().iter().zip(fam.weights()).map(|(b, &w)| inner(&s_inv_f, &(b.ad_mul(b) * &g)) * w).sum();
    suite.within("frame.reconstruction", (recon - inner(&f, &g)).norm() / (f.norm() * g.norm()).max(1.0), tol);

    let sigma = linalg::operator_norm(&a.adjoint())?;
    suite.within("frame.synthesis_norm", (sigma - upper.sqrt()).abs() / upper.sqrt().max(1.0), tol);
    suite.within("frame.operator_is_gram", max_modulus(&(&s - a.ad_mul(&a))) / max_modulus(&s).max(1.0), tol);

    let twice = canonical_dual(&canonical_dual(&fam, tol)?, tol)?;
    suite.within("frame.double_canonical_dual", blocks_residual(&twice, &fam), tol);
    let p = parseval_normalize(&fam, tol)?;
    let s_p = frame_operator(&p);
    suite.within("frame.parseval_normalize", max_modulus(&(s_p - CMatrix::identity(d, d))), tol);

    let riesz = riesz_check(&fam, tol)?;
    suite.pass("riesz.criteria_agree", riesz.criteria_agree(), 0.0);
    suite.pass(
        "riesz.dimension_count",
        !riesz.is_riesz_type || (riesz.analysis_rank == fam.khat_dim() && fam.khat_dim() == d),
        0.0,
    );
    suite.pass("riesz.frame_bound_dominated", riesz.frame_bound_dominated(tol), 0.0);
    Ok(())
}

fn pair_case(suite: &mut Suite, rng: &mut ChaCha8Rng, tol: &TolerancePolicy) -> Result<()> {
    let d_h = rng.gen_range(1..=3);
    let d_k = rng.gen_range(1..=3);
    let kind = rng.gen_range(0..3);
    let overlap = if kind == 2 { rng.gen_range(1..=d_h.min(d_k)) } else { 0 };
    let (weights, dims) = layout(rng, d_h + d_k - overlap);
    let seed = rng.next_u64();
    let (lambda, theta) = match kind {
        0 => random_strongly_disjoint_parseval_pair(seed, &weights, &dims, d_h, d_k)?,
        _ => random_overlapping_pair(seed, &weights, &dims, d_h, d_k, overlap)?,
    };
    let r = classify(&lambda, &theta, tol)?;
    let gamma = gamma_family(&lambda, &theta)?;
    let g = frame_bounds(&gamma, tol)?;
    let gamma_riesz = g.is_frame && riesz_check(&gamma, tol)?.is_riesz_type;

    suite.pass("disjoint.iff_gamma_frame", r.disjoint == g.is_frame, 0.0);
    suite.pass("disjoint.complementary_iff_gamma_riesz", r.complementary_pair == gamma_riesz, 0.0);
    suite.pass(
        "disjoint.strongly_complementary_iff",
        r.strongly_complementary_pair == (r.strongly_disjoint && gamma_riesz),
        0.0,
    );
    let kernel_by_svd = null_space(&analysis_matrix(&gamma), tol)?.ncols() == 0;
    suite.pass("disjoint.weakly_iff_trivial_kernel", r.weakly_disjoint == kernel_by_svd, 0.0);
    suite.pass("disjoint.weakly_matches_kernel_test", r.weakly_disjoint == kernel_triviality(&gamma, tol)?, 0.0);
    suite.pass("disjoint.hierarchy", (!r.strongly_disjoint || r.disjoint) && (!r.disjoint || r.weakly_disjoint), 0.0);
    suite.pass("disjoint.kind_detected", (kind == 0) == r.strongly_disjoint && (kind == 2) != r.disjoint, 0.0);

    if r.disjoint {
        let qa = lambda_range_basis(&lambda);
        let qb = lambda_range_basis(&theta);
        let l = linalg::hstack(&qa, &qb);
        let sv = linalg::singular_values(&l)?;
        let (l_max, l_min) = (sv[0], *sv.last().unwrap_or(&0.0));
        let lam = frame_bounds(&lambda, tol)?;
        let th = frame_bounds(&theta, tol)?;
        let lower = l_min * l_min * lam.lower_bound.min(th.lower_bound);
        let upper = l_max * l_max * lam.upper_bound.max(th.upper_bound);
        let scale = upper.max(1.0);
        let violation = (lower - g.lower_bound).max(g.upper_bound - upper).max(l_max * l_max - 2.0).max(0.0);
        suite.within("disjoint.gamma_bound_inequality", violation / scale, tol);
    }

    if r.strongly_disjoint {
        let delta = delta_family(&lambda, &theta, tol)?;
        let s = frame_operator(&delta);
        let n = s.nrows();
        suite.within("disjoint.delta_is_parseval", max_modulus(&(s - CMatrix::identity(n, n))), tol);
    }
    let l1 = inverse_sqrt_hpd(&frame_operator(&lambda), tol, "S_Λ")?;
    let l2 = inverse_sqrt_hpd(&frame_operator(&theta), tol, "S_Θ")?;
    let converse = strong_disjointness_converse_check(&lambda, &theta, &l1, &l2, tol)?;
    suite.pass("disjoint.converse_check", converse == r.strongly_disjoint, 0.0);
    Ok(())
}

fn lambda_range_basis(fam: &GFrameFamily) -> CMatrix {
    analysis_matrix(fam).qr().q()
}

fn construction_case(suite: &mut Suite, rng: &mut ChaCha8Rng, tol: &TolerancePolicy) -> Result<()> {
    let d = rng.gen_range(1..=3);

    // sum of a disjoint pair with a surjective first operator
    let (weights, dims) = layout(rng, 2 * d);
    let (lambda, theta) = random_overlapping_pair(rng.next_u64(), &weights, &dims, d, d, 0)?;
    let m = rng.gen_range(1..=d);
    let pair = OperatorPair::new(surjection(rng, m, d), gaussian_matrix(rng, m, d))?;
    let sum = disjoint_sum_family(&lambda, &theta, &pair, tol)?;
    let sandwich =
        (sum.lower_guarantee - sum.report.lower_bound).max(sum.report.upper_bound - sum.upper_guarantee).max(0.0)
            / sum.upper_guarantee.max(1.0);
    suite.pass("construct.disjoint_sum_certificate", sum.certificate_holds && sum.report.is_frame, sandwich);

    // strongly disjoint Parseval pair with stacked isometry scaled by √A
    let (weights, dims) = layout(rng, 2 * d);
    let (lambda, theta) = random_strongly_disjoint_parseval_pair(rng.next_u64(), &weights, &dims, d, d)?;
    let scalar = rng.gen_range(0.2..5.0);
    let m = rng.gen_range(1..=2 * d);
    let stacked = orthonormal_columns(rng, 2 * d, m) * C64::from(f64::sqrt(scalar));
    let pair = OperatorPair::new(stacked.rows(0, d).into_owned(), stacked.rows(d, d).into_owned())?;
    let strong = strongly_disjoint_sum(&lambda, &theta, &pair, tol)?;
    let residual = (strong.report.lower_bound - scalar).abs().max((strong.report.upper_bound - scalar).abs()) / scalar;
    suite.pass("construct.strong_sum_tight_with_scalar", strong.tight_with_scalar == Some(true), residual);
    suite.pass("construct.strong_sum_bounds", strong.bounds_hold, 0.0);

    // the converse direction: tightness of the sum detects a scalar Gram
    let arbitrary = OperatorPair::new(gaussian_matrix(rng, d, m), gaussian_matrix(rng, d, m))?;
    for (p, expect_scalar) in [(&pair, true), (&arbitrary, false)] {
        let fam = lambda.compose(&p.l1)?.sum(&theta.compose(&p.l2)?)?;
        let report = frame_bounds(&fam, tol)?;
        let gram = p.l1.ad_mul(&p.l1) + p.l2.ad_mul(&p.l2);
        let is_scalar = tol.matrices_close(&gram, &(CMatrix::identity(m, m) * gram[(0, 0)]));
        let agree = report.is_tight == is_scalar && (is_scalar == expect_scalar || m == 1);
        let mut residual = 0.0f64;
        if report.is_tight {
            let h = gaussian_vector(rng, m);
            let energy = (&p.l1 * &h).norm_squared() + (&p.l2 * &h).norm_squared();
            residual = (energy - report.lower_bound * h.norm_squared()).abs() / energy.max(1.0);
        }
        suite.pass("construct.tight_iff_scalar_gram", agree && residual <= tol.rel_eps, residual);
    }

    // scalar combinations: Parseval exactly on the unit sphere
    let (alpha, beta) = (C64::new(rng.gen(), rng.gen()), C64::new(rng.gen(), rng.gen()));
    let unit = (alpha.norm_sqr() + beta.norm_sqr()).sqrt();
    let stretch = rng.gen_range(1.5..3.0);
    for factor in [1.0 / unit, stretch / unit] {
        let fam = lambda.scale(alpha * factor).sum(&theta.scale(beta * factor))?;
        let parseval = frame_bounds(&fam, tol)?.is_parseval;
        let on_sphere = tol.close((alpha.norm_sqr() + beta.norm_sqr()) * factor * factor, 1.0);
        suite.pass("construct.parseval_iff_unit_scalars", parseval == on_sphere, 0.0);
    }

    // direct sums of dual pairs
    let d_k = rng.gen_range(1..=3);
    let (weights, dims) = layout(rng, d + d_k);
    let (lam0, phi0) = random_strongly_disjoint_parseval_pair(rng.next_u64(), &weights, &dims, d, d_k)?;
    let lambda = lam0.compose(&well_conditioned(rng, d))?;
    let phi = phi0.compose(&well_conditioned(rng, d_k))?;
    let theta = canonical_dual(&lambda, tol)?;
    let psi = canonical_dual(&phi, tol)?;
    let sums = direct_sum_duals(&lambda, &theta, &psi, &phi, tol)?;
    suite.pass("construct.direct_sum_duals", sums.dual_verified, sums.duality_defect);

    // pseudo-duals
    let (weights, dims) = layout(rng, 2 * d);
    let (lam0, theta) = random_strongly_disjoint_parseval_pair(rng.next_u64(), &weights, &dims, d, d)?;
    let lambda = lam0.compose(&well_conditioned(rng, d))?;
    let m = rng.gen_range(1..=d);
    let pair = OperatorPair::new(surjection(rng, m, d), gaussian_matrix(rng, m, d))?;
    let pd = pseudo_dual(&lambda, &theta, &pair, tol)?;
    suite.pass("construct.pseudo_dual", pd.dual_of_single && pd.dual_of_sum, pd.single_defect.max(pd.sum_defect));

    // lifting two continuous frames
    let (d_f, d_g) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
    let n = rng.gen_range(d_f.max(d_g)..=MAX_ATOMS);
    let space = MeasureSpace::new((0..n).map(|_| rng.gen_range(0.1..3.0)).collect())?;
    let f_spec = ContinuousFrameSpec::new(space.clone(), d_f, (0..n).map(|_| gaussian_vector(rng, d_f)).collect())?;
    let g_spec = ContinuousFrameSpec::new(space, d_g, (0..n).map(|_| gaussian_vector(rng, d_g)).collect())?;
    let lifted = lift_continuous_frame(&f_spec, &g_spec, tol)?;
    let gamma = gamma_family(&lifted.lambda, &lifted.psi)?;
    let delta = gamma_family(&lifted.theta, &lifted.phi)?;
    let (h1, k1, h2, k2) =
        (gaussian_vector(rng, d_f), gaussian_vector(rng, d_g), gaussian_vector(rng, d_f), gaussian_vector(rng, d_g));
    let x = stack(&h1, &k1);
    let y = stack(&h2, &k2);
    let pairing: C64 = gamma
        .blocks()
        .iter()
        .zip(delta.blocks())
        .zip(gamma.weights())
        .map(|((gb, db), &w)| inner(&(gb * &x), &(db * &y)) * w)
        .sum();
    let expected = inner(&h1, &h2) + inner(&k1, &k2);
    let residual = (pairing - expected).norm() / (x.norm() * y.norm()).max(1.0);
    let verified = direct_sum_duals(&lifted.lambda, &lifted.theta, &lifted.psi, &lifted.phi, tol)?.dual_verified;
    suite.pass("construct.lift_pairing", verified && residual <= tol.rel_eps, residual);
    Ok(())
}

fn stack(a: &CVector, b: &CVector) -> CVector {
    CVector::from_iterator(a.len() + b.len(), a.iter().chain(b.iter()).copied())
}

fn riesz_case(suite: &mut Suite, rng: &mut ChaCha8Rng, tol: &TolerancePolicy) -> Result<()> {
    let d = rng.gen_range(1..=4);
    let lambda = random_frame(rng, Some(d), tol)?;

    let theta = canonical_dual(&lambda, tol)?;
    let l1 = well_conditioned(rng, d);
    let l2 = l1.adjoint().try_inverse().expect("well-conditioned operators invert");
    let mixed = mixed_construction(&lambda, &theta, &l1, &l2, tol)?;
    suite.pass("riesz.mixed_sandwich", mixed.sandwich_holds, 0.0);
    suite.pass("riesz.mixed_expansion_identity", mixed.expansion_identity_holds, 0.0);
    suite.pass("riesz.mixed_equivalences", mixed.equivalences_agree() && mixed.riesz.criteria_agree(), 0.0);

    let other = random_frame(rng, None, tol)?;
    let shape = FamilyShape {
        weights: lambda.weights().to_vec(),
        block_dims: lambda.block_dims().to_vec(),
        domain_dim: other.domain_dim(),
    };
    let bessel = random_gframe(rng.next_u64(), &shape, tol)?.family;
    suite.pass("riesz.cross_surjectivity", cross_surjectivity(&lambda, &bessel, tol)?.consistent(), 0.0);

    let lower = frame_bounds(&lambda, tol)?.lower_bound;
    let noise = lambda.with_blocks(d, lambda.block_dims().iter().map(|&r| gaussian_matrix(rng, r, d)).collect());
    let noise_norm = linalg::operator_norm(&cross_operator(&noise, &lambda)?)?;
    let t = rng.gen_range(0.0..2.0) * lower / noise_norm.max(f64::MIN_POSITIVE);
    let perturbed = lambda.sum(&noise.scale(C64::from(t)))?;
    let p = perturbation_riesz_transfer(&lambda, &perturbed, tol)?;
    suite.pass("riesz.perturbation_chain", p.lower_chain_holds, 0.0);
    suite.pass("riesz.perturbation_transfer", p.equivalence_verified != Some(false), 0.0);
    Ok(())
}
