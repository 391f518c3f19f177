mod common;

use common::*;
use gframe::analysis::{canonical_dual, frame_bounds, frame_operator, is_dual_pair, parseval_normalize};
use gframe::disjoint::{classify, gamma_family};
use gframe::model::{analysis_matrix, embed, khat_inner, CMatrix, GFrameFamily, KHatVector, TolerancePolicy, C64};
use gframe::random::{
    gaussian_vector, random_gframe, random_overlapping_pair, random_strongly_disjoint_parseval_pair, seeded,
    FamilyShape,
};
use gframe::riesz::riesz_check;
use proptest::prelude::*;
use rand::{Rng, RngCore};

fn tol() -> TolerancePolicy {
    TolerancePolicy::default()
}

fn frame_from_seed(seed: u64, d: usize) -> GFrameFamily {
    let mut rng = seeded(seed);
    let (weights, block_dims) = layout(&mut rng, 8, 3, d);
    let shape = FamilyShape { weights, block_dims, domain_dim: d };
    random_gframe(rng.next_u64(), &shape, &tol()).unwrap().family
}

fn random_khat(rng: &mut impl Rng, dims: &[usize]) -> KHatVector {
    KHatVector::new(dims.iter().map(|&r| gaussian_vector(rng, r)).collect())
}

fn close(a: C64, b: C64, scale: f64) -> bool {
    (a - b).norm() <= 1e-10 * scale.max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn embedding_is_an_isometry(seed in any::<u64>(), d in 1usize..=6) {
        let fam = frame_from_seed(seed, d);
        let mut rng = seeded(seed ^ 1);
        let (f, g) = (random_khat(&mut rng, fam.block_dims()), random_khat(&mut rng, fam.block_dims()));
        let space = fam.space();
        let weighted = khat_inner(&f, &g, space).unwrap();
        let flat = gframe::model::inner(&embed(&f, space).unwrap(), &embed(&g, space).unwrap());
        prop_assert!(close(weighted, flat, weighted.norm()));
        let swapped = khat_inner(&g, &f, space).unwrap();
        prop_assert!(close(weighted, swapped.conj(), weighted.norm()));
    }

    #[test]
    fn synthesis_is_the_adjoint_of_analysis(seed in any::<u64>(), d in 1usize..=6) {
        let fam = frame_from_seed(seed, d);
        let mut rng = seeded(seed ^ 2);
        let h = gaussian_vector(&mut rng, d);
        let phi = random_khat(&mut rng, fam.block_dims());
        let lhs = khat_inner(&fam.analyze(&h).unwrap(), &phi, fam.space()).unwrap();
        let rhs = gframe::model::inner(&h, &fam.synthesize(&phi).unwrap());
        prop_assert!(close(lhs, rhs, lhs.norm()));
    }

    #[test]
    fn frame_operator_matches_atom_sum_and_gram(seed in any::<u64>(), d in 1usize..=6) {
        let fam = frame_from_seed(seed, d);
        let s = frame_operator(&fam);
        let a = analysis_matrix(&fam);
        let scale = max_entry(&s);
        prop_assert!(max_entry(&(&s - frame_sum(&fam))) <= 1e-12 * scale);
        prop_assert!(max_entry(&(&s - a.adjoint() * &a)) <= 1e-12 * scale);
        let rep = frame_bounds(&fam, &tol()).unwrap();
        prop_assert!(brackets_bottom(&s, rep.lower_bound, 1e-9 * rep.upper_bound));
        prop_assert!(brackets_top(&s, rep.upper_bound, 1e-9 * rep.upper_bound));
    }

    #[test]
    fn canonical_dual_is_an_involution(seed in any::<u64>(), d in 1usize..=6) {
        let t = tol();
        let fam = frame_from_seed(seed, d);
        let dual = canonical_dual(&fam, &t).unwrap();
        prop_assert!(is_dual_pair(&dual, &fam, &t).unwrap());
        prop_assert!(identity_defect(&cross_sum(&dual, &fam)) <= 1e-9);
        let back = canonical_dual(&dual, &t).unwrap();
        for (x, y) in back.blocks().iter().zip(fam.blocks()) {
            prop_assert!(max_entry(&(x - y)) <= 1e-9 * max_entry(y).max(1.0));
        }
    }

    #[test]
    fn parseval_normalization_gives_identity_operator(seed in any::<u64>(), d in 1usize..=6) {
        let p = parseval_normalize(&frame_from_seed(seed, d), &tol()).unwrap();
        prop_assert!(identity_defect(&frame_sum(&p)) <= 1e-9);
        prop_assert!(frame_bounds(&p, &tol()).unwrap().is_parseval);
    }

    #[test]
    fn riesz_routes_agree(seed in any::<u64>(), d in 1usize..=6) {
        let rep = riesz_check(&frame_from_seed(seed, d), &tol()).unwrap();
        prop_assert!(rep.criteria_agree());
        prop_assert!(rep.frame_bound_dominated(&tol()));
    }

    #[test]
    fn disjointness_hierarchy_and_symmetry(
        seed in any::<u64>(),
        d_h in 1usize..=3,
        d_k in 1usize..=3,
        overlap in 0usize..=3,
        strong in any::<bool>(),
    ) {
        let t = tol();
        let mut rng = seeded(seed);
        let overlap = if strong { 0 } else { overlap.min(d_h).min(d_k) };
        let (weights, dims) = layout(&mut rng, 8, 2, d_h + d_k - overlap);
        let (lambda, theta) = if strong {
            random_strongly_disjoint_parseval_pair(rng.next_u64(), &weights, &dims, d_h, d_k).unwrap()
        } else {
            random_overlapping_pair(rng.next_u64(), &weights, &dims, d_h, d_k, overlap).unwrap()
        };
        let r = classify(&lambda, &theta, &t).unwrap();
        prop_assert!(!r.strongly_disjoint || r.disjoint);
        prop_assert!(!r.disjoint || r.weakly_disjoint);
        prop_assert!(!r.strongly_complementary_pair || r.complementary_pair);
        prop_assert!(!r.complementary_pair || r.disjoint);
        prop_assert_eq!(r.strongly_disjoint, strong);
        prop_assert_eq!(r.disjoint, overlap == 0);

        let swapped = classify(&theta, &lambda, &t).unwrap();
        prop_assert_eq!(
            (swapped.strongly_disjoint, swapped.disjoint, swapped.weakly_disjoint, swapped.complementary_pair),
            (r.strongly_disjoint, r.disjoint, r.weakly_disjoint, r.complementary_pair)
        );

        // Composing with invertible operators leaves the analysis ranges, and
        // so every relation, unchanged.
        let m = invertible(&mut rng, d_h);
        let n = invertible(&mut rng, d_k);
        let moved = classify(&lambda.compose(&m).unwrap(), &theta.compose(&n).unwrap(), &t).unwrap();
        prop_assert_eq!(
            (moved.strongly_disjoint, moved.disjoint, moved.weakly_disjoint, moved.complementary_pair),
            (r.strongly_disjoint, r.disjoint, r.weakly_disjoint, r.complementary_pair)
        );
        let gamma = gamma_family(&lambda, &theta).unwrap();
        prop_assert_eq!(frame_bounds(&gamma, &t).unwrap().is_frame, r.disjoint);
    }

    #[test]
    fn tolerance_closeness_is_symmetric(a in -1e6f64..1e6, b in -1e6f64..1e6) {
        let t = tol();
        prop_assert_eq!(t.close(a, b), t.close(b, a));
        prop_assert!(t.close(a, a));
    }
}

#[test]
fn cholesky_oracle_rejects_indefinite_input() {
    let mut s = CMatrix::identity(2, 2);
    s[(1, 1)] = C64::from(-1e-12);
    assert!(!dominates(&s, 0.0, 0.0));
    assert!(brackets_bottom(&CMatrix::identity(3, 3), 1.0, 1e-9));
    assert!(!brackets_bottom(&CMatrix::identity(3, 3), 1.0 + 1e-6, 1e-9));
}
