//! Seeded instance generators for tests and the `verify` suite.
//!
//! All generators draw from ChaCha8 seeded with a `u64`, so a seed pins the
//! output bit for bit across runs and platforms.

use nalgebra::QR;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::analysis::frame_bounds;
use crate::error::{Error, Result};
use crate::model::{family_from_analysis, CMatrix, GFrameFamily, MeasureSpace, TolerancePolicy, C64};

const MAX_ATTEMPTS: usize = 16;

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard complex Gaussian entries (`E|z|² = 1`).
pub fn gaussian_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> CMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    CMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re * s, im * s)
    })
}

pub fn gaussian_vector(rng: &mut impl Rng, len: usize) -> crate::model::CVector {
    gaussian_matrix(rng, len, 1).column(0).into_owned()
}

/// `k` orthonormal columns in `C^n` from a Gaussian draw. The QR factor is
/// normalized so `R` has a positive real diagonal, which makes the result a
/// deterministic function of the draw.
pub fn orthonormal_columns(rng: &mut impl Rng, n: usize, k: usize) -> CMatrix {
    assert!(k <= n, "cannot fit {k} orthonormal columns in C^{n}");
    let qr = QR::new(gaussian_matrix(rng, n, k));
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..k {
        let d = r[(j, j)];
        if d.norm() > 0.0 {
            let phase = d / d.norm();
            for i in 0..n {
                q[(i, j)] *= phase;
            }
        }
    }
    q
}

/// Shape of a family to draw.
#[derive(Clone, Debug, PartialEq)]
pub struct FamilyShape {
    pub weights: Vec<f64>,
    pub block_dims: Vec<usize>,
    pub domain_dim: usize,
}

impl FamilyShape {
    pub fn khat_dim(&self) -> usize {
        self.block_dims.iter().sum()
    }

    /// Up to `max_atoms` atoms with weights uniform in `weight_range`, block
    /// dims in `1..=max_block`, domain dim in `1..=max_domain`.
    pub fn random(
        rng: &mut impl Rng,
        max_atoms: usize,
        max_block: usize,
        max_domain: usize,
        weight_range: (f64, f64),
    ) -> Self {
        let n = rng.gen_range(1..=max_atoms);
        Self {
            weights: (0..n).map(|_| rng.gen_range(weight_range.0..weight_range.1)).collect(),
            block_dims: (0..n).map(|_| rng.gen_range(1..=max_block)).collect(),
            domain_dim: rng.gen_range(1..=max_domain),
        }
    }
}

#[derive(Clone, Debug)]
pub struct GeneratedFamily {
    pub family: GFrameFamily,
    pub seed: u64,
    pub attempts: usize,
    /// False exactly when `N < d`, where no draw can be a frame.
    pub is_frame: bool,
}

/// Complex-Gaussian blocks of the requested shape. When `N ≥ d` draws repeat
/// (bounded) until the family is a frame.
pub fn random_gframe(seed: u64, shape: &FamilyShape, tol: &TolerancePolicy) -> Result<GeneratedFamily> {
    let space = MeasureSpace::new(shape.weights.clone())?;
    let mut rng = seeded(seed);
    let can_be_frame = shape.khat_dim() >= shape.domain_dim;
    for attempt in 1..=MAX_ATTEMPTS {
        let blocks = shape.block_dims.iter().map(|&r| gaussian_matrix(&mut rng, r, shape.domain_dim)).collect();
        let family = GFrameFamily::new(space.clone(), shape.domain_dim, blocks)?;
        let is_frame = frame_bounds(&family, tol)?.is_frame;
        if is_frame || !can_be_frame {
            return Ok(GeneratedFamily { family, seed, attempts: attempt, is_frame });
        }
    }
    Err(Error::Generation(format!("no frame after {MAX_ATTEMPTS} draws (seed {seed})")))
}

/// Two Parseval families with orthogonal analysis ranges, built by splitting
/// `d_H + d_K` orthonormal columns of `C^N` and un-embedding the halves.
pub fn random_strongly_disjoint_parseval_pair(
    seed: u64,
    weights: &[f64],
    block_dims: &[usize],
    d_h: usize,
    d_k: usize,
) -> Result<(GFrameFamily, GFrameFamily)> {
    let space = MeasureSpace::new(weights.to_vec())?;
    let n: usize = block_dims.iter().sum();
    if d_h == 0 || d_k == 0 || d_h + d_k > n || block_dims.len() != weights.len() {
        return Err(Error::Generation(format!("infeasible shape: d_H = {d_h}, d_K = {d_k}, N = {n}")));
    }
    let q = orthonormal_columns(&mut seeded(seed), n, d_h + d_k);
    let a = q.columns(0, d_h).into_owned();
    let b = q.columns(d_h, d_k).into_owned();
    Ok((family_from_analysis(&space, block_dims, &a)?, family_from_analysis(&space, block_dims, &b)?))
}

/// Two frames whose analysis ranges share exactly `overlap` dimensions (with
/// probability one). Ranges are not orthogonal.
pub fn random_overlapping_pair(
    seed: u64,
    weights: &[f64],
    block_dims: &[usize],
    d_h: usize,
    d_k: usize,
    overlap: usize,
) -> Result<(GFrameFamily, GFrameFamily)> {
    let space = MeasureSpace::new(weights.to_vec())?;
    let n: usize = block_dims.iter().sum();
    if d_h == 0 || d_k == 0 || overlap > d_h.min(d_k) || d_h + d_k - overlap > n {
        return Err(Error::Generation(format!(
            "infeasible shape: d_H = {d_h}, d_K = {d_k}, overlap = {overlap}, N = {n}"
        )));
    }
    let mut rng = seeded(seed);
    let basis = gaussian_matrix(&mut rng, n, d_h + d_k - overlap);
    let mix_h = gaussian_matrix(&mut rng, d_h, d_h);
    let mix_k = gaussian_matrix(&mut rng, d_k, d_k);
    let a = basis.columns(0, d_h) * mix_h;
    let b = basis.columns(d_h - overlap, d_k) * mix_k;
    Ok((family_from_analysis(&space, block_dims, &a)?, family_from_analysis(&space, block_dims, &b)?))
}
