//! Oracles shared by the integration targets. None of them goes through the
//! library's SVD or eigensolver: sums are accumulated atom by atom, solves use
//! LU, and spectral claims are bracketed with Cholesky factorizations.

#![allow(dead_code)]

use gframe::model::{inner, CMatrix, CVector, GFrameFamily, C64};
use gframe::random::gaussian_matrix;
use rand::Rng;

/// `Σ μ_i Θ_i* Λ_i`, one atom at a time.
pub fn cross_sum(theta: &GFrameFamily, lambda: &GFrameFamily) -> CMatrix {
    let mut s = CMatrix::zeros(theta.domain_dim(), lambda.domain_dim());
    for ((t, l), &w) in theta.blocks().iter().zip(lambda.blocks()).zip(lambda.weights()) {
        s += t.adjoint() * l * C64::from(w);
    }
    s
}

pub fn frame_sum(fam: &GFrameFamily) -> CMatrix {
    cross_sum(fam, fam)
}

/// `Σ μ_i ‖Λ_i h‖²`.
pub fn energy(fam: &GFrameFamily, h: &CVector) -> f64 {
    fam.blocks().iter().zip(fam.weights()).map(|(b, &w)| w * (b * h).norm_squared()).sum()
}

pub fn max_entry(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn identity_defect(m: &CMatrix) -> f64 {
    max_entry(&(m - CMatrix::identity(m.nrows(), m.ncols())))
}

/// Cholesky with real pivots, failing on the first pivot that is not
/// positive. (nalgebra's complex factorization takes complex square roots
/// and so never rejects an indefinite input.)
fn positive_definite(m: &CMatrix) -> bool {
    let n = m.nrows();
    let mut l = CMatrix::zeros(n, n);
    for j in 0..n {
        let pivot = m[(j, j)].re - (0..j).map(|k| l[(j, k)].norm_sqr()).sum::<f64>();
        if pivot.is_nan() || pivot <= 0.0 {
            return false;
        }
        let root = pivot.sqrt();
        l[(j, j)] = C64::from(root);
        for i in j + 1..n {
            let dot: C64 = (0..j).map(|k| l[(i, k)] * l[(j, k)].conj()).sum();
            l[(i, j)] = (m[(i, j)] - dot) / root;
        }
    }
    true
}

/// True iff `lower` is the smallest eigenvalue of the Hermitian `s` to
/// within `slack`: `s − (lower − slack)I` factors and `s − (lower + slack)I`
/// does not.
pub fn brackets_bottom(s: &CMatrix, lower: f64, slack: f64) -> bool {
    let id = CMatrix::identity(s.nrows(), s.ncols());
    positive_definite(&(s - &id * C64::from(lower - slack)))
        && !positive_definite(&(s - &id * C64::from(lower + slack)))
}

/// Same for the largest eigenvalue.
pub fn brackets_top(s: &CMatrix, upper: f64, slack: f64) -> bool {
    let id = CMatrix::identity(s.nrows(), s.ncols());
    positive_definite(&(&id * C64::from(upper + slack) - s))
        && !positive_definite(&(&id * C64::from(upper - slack) - s))
}

/// `s ⪰ value·I` up to `slack`.
pub fn dominates(s: &CMatrix, value: f64, slack: f64) -> bool {
    positive_definite(&(s - CMatrix::identity(s.nrows(), s.ncols()) * C64::from(value - slack)))
}

/// `s ⪯ value·I` up to `slack`.
pub fn dominated_by(s: &CMatrix, value: f64, slack: f64) -> bool {
    positive_definite(&(CMatrix::identity(s.nrows(), s.ncols()) * C64::from(value + slack) - s))
}

/// `Σ μ_i ⟨Θ_i f, Λ_i g⟩`.
pub fn pairing(theta: &GFrameFamily, lambda: &GFrameFamily, f: &CVector, g: &CVector) -> C64 {
    theta
        .blocks()
        .iter()
        .zip(lambda.blocks())
        .zip(lambda.weights())
        .map(|((t, l), &w)| inner(&(t * f), &(l * g)) * w)
        .sum()
}

/// A random atom layout: weights in `[0.2, 3)` and block dims in `1..=max_block`,
/// with at least `min_khat` total rows.
pub fn layout(rng: &mut impl Rng, max_atoms: usize, max_block: usize, min_khat: usize) -> (Vec<f64>, Vec<usize>) {
    loop {
        let n = rng.gen_range(1..=max_atoms);
        let dims: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=max_block)).collect();
        if dims.iter().sum::<usize>() >= min_khat {
            return ((0..n).map(|_| rng.gen_range(0.2..3.0)).collect(), dims);
        }
    }
}

/// Gaussian square matrix, redrawn until comfortably invertible.
pub fn invertible(rng: &mut impl Rng, d: usize) -> CMatrix {
    loop {
        let m = gaussian_matrix(rng, d, d);
        let det = m.clone().lu().determinant().norm();
        if det > 1e-2 * max_entry(&m).powi(d as i32) {
            return m;
        }
    }
}

pub fn sandwich_slack(scale: f64) -> f64 {
    1e-9 * scale.max(1.0)
}

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs the built `gframe` binary from the crate root.
pub fn gframe(args: &[&str]) -> Run {
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_gframe"))
        .args(args)
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .output()
        .expect("the gframe binary runs");
    Run {
        code: out.status.code().expect("exited normally"),
        stdout: String::from_utf8(out.stdout).expect("utf-8 stdout"),
        stderr: String::from_utf8(out.stderr).expect("utf-8 stderr"),
    }
}
