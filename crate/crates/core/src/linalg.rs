//! Dense complex decompositions used throughout: SVD ranks and norms,
//! Hermitian spectral calculus, pivoted-QR rank, pseudo-inverse.
//!
//! Matrices are stored as nalgebra `CMatrix`; the SVD and the Hermitian
//! eigensolver run on faer. nalgebra 0.33's complex SVD returns wrong
//! factors for some rank-deficient inputs and its `SymmetricEigen` leaves
//! reconstruction errors near `1e-8`, both too coarse for the identities
//! checked downstream.

use faer::Mat;
use nalgebra::ColPivQR;

use crate::error::{Error, Result};
use crate::model::{CMatrix, TolerancePolicy, C64};

fn to_faer(m: &CMatrix) -> Mat<C64> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

fn from_faer(m: faer::MatRef<'_, C64>) -> CMatrix {
    CMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// A singular value decomposition `M = U diag(σ) V*` with `σ` descending.
pub(crate) struct Svd {
    pub u: CMatrix,
    pub sigma: Vec<f64>,
    pub v: CMatrix,
}

/// Thin SVD, or the full one (square `U`, `V`) when `full` is set.
pub(crate) fn svd(m: &CMatrix, full: bool) -> Result<Svd> {
    let fm = to_faer(m);
    let dec = if full { fm.svd() } else { fm.thin_svd() }
        .map_err(|e| Error::Numeric(format!("SVD of a {}×{} matrix failed: {e:?}", m.nrows(), m.ncols())))?;
    let s = dec.S();
    Ok(Svd { u: from_faer(dec.U()), sigma: (0..s.dim()).map(|i| s[i].re).collect(), v: from_faer(dec.V()) })
}

/// Singular values in descending order. Empty for an empty matrix.
pub fn singular_values(m: &CMatrix) -> Result<Vec<f64>> {
    if m.is_empty() {
        return Ok(Vec::new());
    }
    let mut s = to_faer(m)
        .singular_values()
        .map_err(|e| Error::Numeric(format!("singular values of a {}×{} matrix: {e:?}", m.nrows(), m.ncols())))?;
    s.sort_by(|a, b| b.total_cmp(a));
    Ok(s)
}

/// Largest singular value.
pub fn operator_norm(m: &CMatrix) -> Result<f64> {
    Ok(singular_values(m)?.first().copied().unwrap_or(0.0))
}

/// Numerical rank by the policy's singular-value cutoff.
pub fn rank(m: &CMatrix, tol: &TolerancePolicy) -> Result<usize> {
    let s = singular_values(m)?;
    let Some(&smax) = s.first() else { return Ok(0) };
    let cut = tol.rank_threshold(m.nrows(), m.ncols(), smax);
    Ok(s.iter().filter(|&&x| x > cut).count())
}

/// Rank from the diagonal of a column-pivoted QR factor, with the same
/// cutoff shape as [`rank`] (`|R_11|` stands in for `σ_max`).
pub fn qr_rank(m: &CMatrix, tol: &TolerancePolicy) -> usize {
    if m.is_empty() {
        return 0;
    }
    let r = ColPivQR::new(m.clone()).r();
    let diag: Vec<f64> = (0..r.nrows().min(r.ncols())).map(|i| r[(i, i)].norm()).collect();
    let lead = diag.iter().copied().fold(0.0, f64::max);
    if lead == 0.0 {
        return 0;
    }
    let cut = tol.rank_threshold(m.nrows(), m.ncols(), lead);
    diag.iter().filter(|&&x| x > cut).count()
}

/// Spectral decomposition of a Hermitian matrix, eigenvalues ascending.
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

/// Decomposes the Hermitian part of `m`, which absorbs rounding noise in
/// matrices that are Hermitian up to a few ulps.
pub fn hermitian_eigen(m: &CMatrix) -> Result<HermitianEigen> {
    if !m.is_square() {
        return Err(Error::shape("eigen-decomposition needs a square matrix"));
    }
    if m.is_empty() {
        return Ok(HermitianEigen { values: Vec::new(), vectors: m.clone() });
    }
    let h = (m + m.adjoint()) * C64::from(0.5);
    let dec = to_faer(&h)
        .self_adjoint_eigen(faer::Side::Lower)
        .map_err(|e| Error::Numeric(format!("eigen-decomposition of a {0}×{0} matrix: {e:?}", m.nrows())))?;
    let s = dec.S();
    let values: Vec<f64> = (0..s.dim()).map(|i| s[i].re).collect();
    debug_assert!(values.windows(2).all(|w| w[0] <= w[1]));
    Ok(HermitianEigen { values, vectors: from_faer(dec.U()) })
}

impl HermitianEigen {
    /// `V f(D) V*`.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let scaled = CMatrix::from_fn(self.vectors.nrows(), self.vectors.ncols(), |i, j| {
            self.vectors[(i, j)] * f(self.values[j])
        });
        scaled * self.vectors.adjoint()
    }

    pub fn min(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }
}

/// Decomposes a positive semidefinite `S` and errors unless its smallest
/// eigenvalue clears the frame threshold.
fn positive_definite_eigen(s: &CMatrix, tol: &TolerancePolicy, what: &str) -> Result<HermitianEigen> {
    let eig = hermitian_eigen(s)?;
    let cut = tol.frame_threshold(s.nrows(), eig.max());
    if eig.min() <= cut || eig.max() <= 0.0 {
        return Err(Error::Singular(format!("{what}: smallest eigenvalue {:.3e} is not above {:.3e}", eig.min(), cut)));
    }
    Ok(eig)
}

pub fn inverse_hpd(s: &CMatrix, tol: &TolerancePolicy, what: &str) -> Result<CMatrix> {
    Ok(positive_definite_eigen(s, tol, what)?.apply(|x| 1.0 / x))
}

/// The Hermitian positive-definite `S^{-1/2}`.
pub fn inverse_sqrt_hpd(s: &CMatrix, tol: &TolerancePolicy, what: &str) -> Result<CMatrix> {
    Ok(positive_definite_eigen(s, tol, what)?.apply(|x| 1.0 / x.sqrt()))
}

/// Moore–Penrose pseudo-inverse; singular values under the rank cutoff are
/// treated as zero.
pub fn pseudo_inverse(t: &CMatrix, tol: &TolerancePolicy) -> Result<CMatrix> {
    if t.is_empty() {
        return Ok(CMatrix::zeros(t.ncols(), t.nrows()));
    }
    let dec = svd(t, false)?;
    let smax = dec.sigma.first().copied().unwrap_or(0.0);
    let cut = tol.rank_threshold(t.nrows(), t.ncols(), smax);
    let kept = dec.sigma.iter().take_while(|&&s| s > cut).count();
    let v = dec.v.columns(0, kept);
    let u = dec.u.columns(0, kept);
    let inv_sigma = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        kept,
        dec.sigma[..kept].iter().map(|&s| C64::from(1.0 / s)),
    ));
    Ok(v * inv_sigma * u.adjoint())
}

/// Orthonormal basis of the null space of `m` (columns): the right
/// singular vectors past the numerical rank.
pub fn null_space(m: &CMatrix, tol: &TolerancePolicy) -> Result<CMatrix> {
    let (rows, cols) = m.shape();
    if cols == 0 {
        return Ok(CMatrix::zeros(0, 0));
    }
    if rows == 0 {
        return Ok(CMatrix::identity(cols, cols));
    }
    let dec = svd(m, true)?;
    let smax = dec.sigma.first().copied().unwrap_or(0.0);
    let cut = tol.rank_threshold(rows, cols, smax);
    let r = dec.sigma.iter().filter(|&&s| s > cut).count();
    Ok(dec.v.columns(r, cols - r).into_owned())
}

/// `[A | B]`.
pub fn hstack(a: &CMatrix, b: &CMatrix) -> CMatrix {
    assert_eq!(a.nrows(), b.nrows(), "hstack needs equal row counts");
    let mut out = CMatrix::zeros(a.nrows(), a.ncols() + b.ncols());
    out.columns_mut(0, a.ncols()).copy_from(a);
    out.columns_mut(a.ncols(), b.ncols()).copy_from(b);
    out
}

/// Errors unless `m` is square with full numerical rank.
pub fn check_invertible(m: &CMatrix, tol: &TolerancePolicy, what: &str) -> Result<()> {
    if !m.is_square() {
        return Err(Error::precondition(format!("{what} must be square, got {}×{}", m.nrows(), m.ncols())));
    }
    if rank(m, tol)? < m.nrows() {
        return Err(Error::precondition(format!("{what} is not invertible")));
    }
    Ok(())
}

pub fn is_surjective(m: &CMatrix, tol: &TolerancePolicy) -> Result<bool> {
    Ok(m.nrows() > 0 && rank(m, tol)? == m.nrows())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{max_modulus, real_matrix};

    #[test]
    fn rank_of_duplicated_columns() {
        let tol = TolerancePolicy::default();
        let m = real_matrix(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        assert_eq!(rank(&m, &tol).unwrap(), 1);
        assert_eq!(qr_rank(&m, &tol), 1);
        assert_eq!(rank(&CMatrix::zeros(3, 2), &tol).unwrap(), 0);
        assert_eq!(qr_rank(&CMatrix::zeros(3, 2), &tol), 0);
    }

    #[test]
    fn inverse_sqrt_of_diagonal() {
        let tol = TolerancePolicy::default();
        let s = real_matrix(2, 2, &[1.0, 0.0, 0.0, 4.0]);
        let r = inverse_sqrt_hpd(&s, &tol, "S").unwrap();
        assert!(tol.matrices_close(&r, &real_matrix(2, 2, &[1.0, 0.0, 0.0, 0.5])));
    }

    #[test]
    fn inverse_of_singular_fails() {
        let tol = TolerancePolicy::default();
        let s = real_matrix(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        assert!(matches!(inverse_hpd(&s, &tol, "S"), Err(Error::Singular(_))));
    }

    #[test]
    fn null_space_of_wide_matrix() {
        let tol = TolerancePolicy::default();
        let m = real_matrix(1, 2, &[1.0, 1.0]);
        let n = null_space(&m, &tol).unwrap();
        assert_eq!(n.ncols(), 1);
        assert!((&m * &n).norm() < 1e-14);
        assert!((n.norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn hermitian_eigen_reconstructs() {
        let tol = TolerancePolicy::default();
        let mut s = real_matrix(2, 2, &[2.0, 0.0, 0.0, 3.0]);
        s[(0, 1)] = C64::new(0.0, 1.0);
        s[(1, 0)] = C64::new(0.0, -1.0);
        let eig = hermitian_eigen(&s).unwrap();
        assert!(eig.values[0] <= eig.values[1]);
        assert!(tol.matrices_close(&eig.apply(|x| x), &s));
        // eigenvalues of [[2, i], [-i, 3]] are (5 ± √5)/2
        assert!((eig.values[0] - (5.0 - 5f64.sqrt()) / 2.0).abs() < 1e-14);
    }

    #[test]
    fn hermitian_eigen_stays_accurate_on_random_grams() {
        let mut rng = crate::random::seeded(11);
        for k in 0..2000 {
            let a = crate::random::gaussian_matrix(&mut rng, 1 + k % 7, 1 + k % 5);
            let s = a.ad_mul(&a);
            let err = max_modulus(&(hermitian_eigen(&s).unwrap().apply(|x| x) - &s)) / max_modulus(&s);
            assert!(err < 1e-12, "case {k}: relative error {err:e}");
        }
    }

    #[test]
    fn pseudo_inverse_satisfies_penrose_on_rank_deficient_input() {
        let tol = TolerancePolicy::default();
        let mut rng = crate::random::seeded(12);
        for k in 0..500 {
            let (rows, cols, inner) = (1 + k % 6, 1 + k % 5, 1 + k % 3);
            let m = crate::random::gaussian_matrix(&mut rng, rows, inner)
                * crate::random::gaussian_matrix(&mut rng, inner, cols);
            let p = pseudo_inverse(&m, &tol).unwrap();
            let scale = max_modulus(&m).max(1.0);
            assert!(max_modulus(&(&m * &p * &m - &m)) < 1e-12 * scale, "case {k}: MPM != M");
            let mp = &m * &p;
            assert!(max_modulus(&(&mp - mp.adjoint())) < 1e-11, "case {k}: MP not Hermitian");
        }
    }

    #[test]
    fn null_space_dimension_matches_rank() {
        let tol = TolerancePolicy::default();
        let mut rng = crate::random::seeded(13);
        for k in 0..500 {
            let (rows, cols, inner) = (1 + k % 6, 1 + k % 5, 1 + k % 3);
            let m = crate::random::gaussian_matrix(&mut rng, rows, inner)
                * crate::random::gaussian_matrix(&mut rng, inner, cols);
            let n = null_space(&m, &tol).unwrap();
            assert_eq!(n.ncols() + rank(&m, &tol).unwrap(), cols, "case {k}");
            assert!(max_modulus(&(&m * &n)) < 1e-12 * max_modulus(&m).max(1.0), "case {k}");
            let gram = n.adjoint() * &n;
            assert!(max_modulus(&(gram - CMatrix::identity(n.ncols(), n.ncols()))) < 1e-12, "case {k}");
            assert_eq!(qr_rank(&m, &tol), cols - n.ncols(), "case {k}: pivoted-QR rank disagrees");
        }
    }
}
