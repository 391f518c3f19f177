//! Finite realization of the Hilbert-space objects.
//!
//! A measure space is a finite list of atoms with positive weights. A g-frame
//! family assigns one complex block `Λ_i : C^d → C^{d_i}` to each atom, and
//! `K̂` is the space of block vectors `(F_1, …, F_n)` with the weighted inner
//! product `Σ μ_i ⟨F_i, G_i⟩`.
//!
//! All geometry (ranks, ranges, orthogonality) is computed in *embedded*
//! coordinates: block `i` scaled by `√μ_i` and stacked. That map is an isometry
//! from `K̂` onto `C^N`, `N = Σ d_i`, so weighted geometry becomes Euclidean.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Inner product on `C^k`, linear in the first argument.
pub fn inner(x: &CVector, y: &CVector) -> C64 {
    // dotc conjugates its receiver
    y.dotc(x)
}

/// Builds a complex matrix from real row-major entries.
pub fn real_matrix(rows: usize, cols: usize, entries: &[f64]) -> CMatrix {
    assert_eq!(entries.len(), rows * cols, "entry count must be rows * cols");
    CMatrix::from_row_iterator(rows, cols, entries.iter().map(|&x| C64::new(x, 0.0)))
}

pub fn real_vector(entries: &[f64]) -> CVector {
    CVector::from_iterator(entries.len(), entries.iter().map(|&x| C64::new(x, 0.0)))
}

/// Positive weights on a finite set of atoms.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasureSpace {
    weights: Vec<f64>,
}

impl MeasureSpace {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        let violations = weight_violations(&weights);
        if violations.is_empty() {
            Ok(Self { weights })
        } else {
            Err(Error::Invalid(violations))
        }
    }

    /// `n` atoms of unit mass.
    pub fn uniform(n: usize) -> Self {
        assert!(n > 0, "a measure space needs at least one atom");
        Self { weights: vec![1.0; n] }
    }

    pub fn atom_count(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, atom: usize) -> f64 {
        self.weights[atom]
    }
}

fn weight_violations(weights: &[f64]) -> Vec<Violation> {
    let mut out = Vec::new();
    if weights.is_empty() {
        out.push(Violation::NoAtoms);
    }
    for (atom, &weight) in weights.iter().enumerate() {
        if !(weight.is_finite() && weight > 0.0) {
            out.push(Violation::NonPositiveWeight { atom, weight });
        }
    }
    out
}

/// A violated structural invariant of a family. Atom indices are zero-based;
/// the display uses one-based `μ_i` labels.
#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    NoAtoms,
    NonPositiveWeight { atom: usize, weight: f64 },
    ZeroDomainDim,
    BlockCount { blocks: usize, atoms: usize },
    BlockDimsCount { block_dims: usize, atoms: usize },
    ZeroBlockDim { atom: usize },
    BlockShape { atom: usize, expected: (usize, usize), found: (usize, usize) },
    NonFinite { atom: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoAtoms => write!(f, "atom_count must be at least 1"),
            Violation::NonPositiveWeight { atom, weight } => {
                write!(f, "μ_{} not > 0 (got {weight})", atom + 1)
            }
            Violation::ZeroDomainDim => write!(f, "domain_dim must be positive"),
            Violation::BlockCount { blocks, atoms } => {
                write!(f, "blocks.length ≠ atom_count ({blocks} vs {atoms})")
            }
            Violation::BlockDimsCount { block_dims, atoms } => {
                write!(f, "block_dims.length ≠ atom_count ({block_dims} vs {atoms})")
            }
            Violation::ZeroBlockDim { atom } => write!(f, "block_dims[{atom}] must be positive"),
            Violation::BlockShape { atom, expected, found } => {
                write!(f, "block {atom} has shape {}×{}, expected {}×{}", found.0, found.1, expected.0, expected.1)
            }
            Violation::NonFinite { atom } => write!(f, "block {atom} has a non-finite entry"),
        }
    }
}

/// Unvalidated parts of a family, as read from a file or assembled by hand.
#[derive(Clone, Debug)]
pub struct RawFamily {
    pub weights: Vec<f64>,
    pub domain_dim: usize,
    pub block_dims: Vec<usize>,
    pub blocks: Vec<CMatrix>,
}

/// Checks every structural invariant of a family and reports all violations.
/// An empty list means the parts form a valid [`GFrameFamily`].
pub fn validate_family(raw: &RawFamily) -> Vec<Violation> {
    let mut out = weight_violations(&raw.weights);
    let atoms = raw.weights.len();
    if raw.domain_dim == 0 {
        out.push(Violation::ZeroDomainDim);
    }
    if raw.blocks.len() != atoms {
        out.push(Violation::BlockCount { blocks: raw.blocks.len(), atoms });
    }
    if raw.block_dims.len() != atoms {
        out.push(Violation::BlockDimsCount { block_dims: raw.block_dims.len(), atoms });
    }
    for (atom, &dim) in raw.block_dims.iter().enumerate() {
        if dim == 0 {
            out.push(Violation::ZeroBlockDim { atom });
        }
    }
    for (atom, (block, &dim)) in raw.blocks.iter().zip(&raw.block_dims).enumerate() {
        let found = block.shape();
        if found != (dim, raw.domain_dim) {
            out.push(Violation::BlockShape { atom, expected: (dim, raw.domain_dim), found });
        }
        if block.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            out.push(Violation::NonFinite { atom });
        }
    }
    out
}

/// A continuous g-frame candidate `Λ = {Λ_i}` over a finite measure space.
///
/// Validity is structural only; whether the family is actually a frame is
/// decided by [`crate::analysis::frame_bounds`].
#[derive(Clone, Debug, PartialEq)]
pub struct GFrameFamily {
    space: MeasureSpace,
    domain_dim: usize,
    block_dims: Vec<usize>,
    blocks: Vec<CMatrix>,
}

impl GFrameFamily {
    pub fn from_raw(raw: RawFamily) -> Result<Self> {
        let violations = validate_family(&raw);
        if !violations.is_empty() {
            return Err(Error::Invalid(violations));
        }
        Ok(Self {
            space: MeasureSpace { weights: raw.weights },
            domain_dim: raw.domain_dim,
            block_dims: raw.block_dims,
            blocks: raw.blocks,
        })
    }

    /// Block dimensions are read off the block row counts.
    pub fn new(space: MeasureSpace, domain_dim: usize, blocks: Vec<CMatrix>) -> Result<Self> {
        let block_dims = blocks.iter().map(|b| b.nrows()).collect();
        Self::from_raw(RawFamily { weights: space.weights, domain_dim, block_dims, blocks })
    }

    /// Real blocks given row-major; each block's row count is inferred from
    /// its length and `domain_dim`.
    ///
    /// ```
    /// use gframe::GFrameFamily;
    /// let fam = GFrameFamily::from_real(&[1.0, 1.0], 2, &[&[1.0, 0.0], &[0.0, 1.0]]).unwrap();
    /// assert_eq!(fam.khat_dim(), 2);
    /// ```
    pub fn from_real(weights: &[f64], domain_dim: usize, blocks: &[&[f64]]) -> Result<Self> {
        if domain_dim == 0 {
            return Err(Error::Invalid(vec![Violation::ZeroDomainDim]));
        }
        let mut mats = Vec::with_capacity(blocks.len());
        for (atom, entries) in blocks.iter().enumerate() {
            if entries.len() % domain_dim != 0 {
                return Err(Error::Invalid(vec![Violation::BlockShape {
                    atom,
                    expected: (entries.len().div_ceil(domain_dim), domain_dim),
                    found: (1, entries.len()),
                }]));
            }
            mats.push(real_matrix(entries.len() / domain_dim, domain_dim, entries));
        }
        let space = MeasureSpace { weights: weights.to_vec() };
        Self::new(space, domain_dim, mats)
    }

    pub fn space(&self) -> &MeasureSpace {
        &self.space
    }

    pub fn weights(&self) -> &[f64] {
        &self.space.weights
    }

    pub fn atom_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn domain_dim(&self) -> usize {
        self.domain_dim
    }

    pub fn block_dims(&self) -> &[usize] {
        &self.block_dims
    }

    pub fn blocks(&self) -> &[CMatrix] {
        &self.blocks
    }

    pub fn block(&self, atom: usize) -> &CMatrix {
        &self.blocks[atom]
    }

    /// `N = Σ d_i`, the dimension of `K̂`.
    pub fn khat_dim(&self) -> usize {
        self.block_dims.iter().sum()
    }

    pub fn into_raw(self) -> RawFamily {
        RawFamily {
            weights: self.space.weights,
            domain_dim: self.domain_dim,
            block_dims: self.block_dims,
            blocks: self.blocks,
        }
    }

    /// Errors unless `other` lives over the same weights with the same block
    /// dimensions. Domains may differ.
    pub fn check_same_codomain(&self, other: &GFrameFamily) -> Result<()> {
        if self.space != other.space {
            return Err(Error::shape("families live over different measure spaces"));
        }
        if self.block_dims != other.block_dims {
            return Err(Error::shape(format!(
                "block dimensions differ: {:?} vs {:?}",
                self.block_dims, other.block_dims
            )));
        }
        Ok(())
    }

    pub(crate) fn check_same_domain(&self, other: &GFrameFamily) -> Result<()> {
        if self.domain_dim != other.domain_dim {
            return Err(Error::shape(format!("domain dimensions differ: {} vs {}", self.domain_dim, other.domain_dim)));
        }
        Ok(())
    }

    /// The family `{Λ_i L}`; `L` maps some `C^m` into the domain.
    pub fn compose(&self, op: &CMatrix) -> Result<GFrameFamily> {
        if op.nrows() != self.domain_dim {
            return Err(Error::shape(format!(
                "operator has {} rows, family domain is {}",
                op.nrows(),
                self.domain_dim
            )));
        }
        Ok(self.with_blocks(op.ncols(), self.blocks.iter().map(|b| b * op).collect()))
    }

    /// Sum of two families over the same codomain and domain.
    pub fn sum(&self, other: &GFrameFamily) -> Result<GFrameFamily> {
        self.check_same_codomain(other)?;
        self.check_same_domain(other)?;
        let blocks = self.blocks.iter().zip(&other.blocks).map(|(a, b)| a + b).collect();
        Ok(self.with_blocks(self.domain_dim, blocks))
    }

    pub fn scale(&self, factor: C64) -> GFrameFamily {
        self.with_blocks(self.domain_dim, self.blocks.iter().map(|b| b * factor).collect())
    }

    /// Same space and block dims, new blocks. Callers guarantee shapes.
    pub(crate) fn with_blocks(&self, domain_dim: usize, blocks: Vec<CMatrix>) -> GFrameFamily {
        debug_assert!(blocks.iter().zip(&self.block_dims).all(|(b, &d)| b.shape() == (d, domain_dim)));
        GFrameFamily { space: self.space.clone(), domain_dim, block_dims: self.block_dims.clone(), blocks }
    }

    /// `T*_Λ h = (Λ_i h)_i`, in raw (unweighted) blocks.
    pub fn analyze(&self, h: &CVector) -> Result<KHatVector> {
        if h.len() != self.domain_dim {
            return Err(Error::shape(format!("vector length {} ≠ domain {}", h.len(), self.domain_dim)));
        }
        Ok(KHatVector { blocks: self.blocks.iter().map(|b| b * h).collect() })
    }

    /// `T_Λ φ = Σ μ_i Λ_i* φ_i`.
    pub fn synthesize(&self, phi: &KHatVector) -> Result<CVector> {
        if phi.block_dims() != self.block_dims {
            return Err(Error::shape("K̂ vector block dims do not match the family"));
        }
        let mut out = CVector::zeros(self.domain_dim);
        for ((block, f), &w) in self.blocks.iter().zip(&phi.blocks).zip(self.weights()) {
            out += block.ad_mul(f) * C64::from(w);
        }
        Ok(out)
    }
}

/// An element of `K̂`: one vector per atom.
#[derive(Clone, Debug, PartialEq)]
pub struct KHatVector {
    blocks: Vec<CVector>,
}

impl KHatVector {
    pub fn new(blocks: Vec<CVector>) -> Self {
        Self { blocks }
    }

    pub fn zeros(block_dims: &[usize]) -> Self {
        Self { blocks: block_dims.iter().map(|&d| CVector::zeros(d)).collect() }
    }

    pub fn from_real(blocks: &[&[f64]]) -> Self {
        Self { blocks: blocks.iter().map(|b| real_vector(b)).collect() }
    }

    pub fn blocks(&self) -> &[CVector] {
        &self.blocks
    }

    pub fn block_dims(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.len()).collect()
    }

    /// Squared `K̂` norm.
    pub fn norm_squared(&self, space: &MeasureSpace) -> Result<f64> {
        Ok(khat_inner(self, self, space)?.re)
    }
}

fn check_khat(f: &KHatVector, space: &MeasureSpace) -> Result<()> {
    if f.blocks.len() != space.atom_count() {
        return Err(Error::shape(format!(
            "K̂ vector has {} blocks, space has {} atoms",
            f.blocks.len(),
            space.atom_count()
        )));
    }
    Ok(())
}

/// `⟨F, G⟩ = Σ μ_i ⟨F_i, G_i⟩`, linear in `F`.
pub fn khat_inner(f: &KHatVector, g: &KHatVector, space: &MeasureSpace) -> Result<C64> {
    check_khat(f, space)?;
    check_khat(g, space)?;
    if f.block_dims() != g.block_dims() {
        return Err(Error::shape("K̂ vectors have different block dims"));
    }
    Ok(f.blocks.iter().zip(&g.blocks).zip(&space.weights).map(|((a, b), &w)| inner(a, b) * w).sum())
}

/// Isometry `K̂ → C^N`: block `i` scaled by `√μ_i`, stacked in atom order.
pub fn embed(f: &KHatVector, space: &MeasureSpace) -> Result<CVector> {
    check_khat(f, space)?;
    let n: usize = f.blocks.iter().map(|b| b.len()).sum();
    let mut out = CVector::zeros(n);
    let mut offset = 0;
    for (b, &w) in f.blocks.iter().zip(&space.weights) {
        out.rows_mut(offset, b.len()).copy_from(&(b * C64::from(w.sqrt())));
        offset += b.len();
    }
    Ok(out)
}

/// Inverse of [`embed`].
pub fn unembed(v: &CVector, space: &MeasureSpace, block_dims: &[usize]) -> Result<KHatVector> {
    if block_dims.len() != space.atom_count() || block_dims.iter().sum::<usize>() != v.len() {
        return Err(Error::shape("embedded vector does not match block dims"));
    }
    let mut offset = 0;
    let blocks = block_dims
        .iter()
        .zip(&space.weights)
        .map(|(&d, &w)| {
            let b = v.rows(offset, d) / C64::from(w.sqrt());
            offset += d;
            b
        })
        .collect();
    Ok(KHatVector { blocks })
}

/// Matrix of `J ∘ T*_Λ`: the blocks `√μ_i Λ_i` stacked, shape `N × d`.
/// Its adjoint is the matrix of `T_Λ ∘ J⁻¹`.
pub fn analysis_matrix(fam: &GFrameFamily) -> CMatrix {
    let mut out = CMatrix::zeros(fam.khat_dim(), fam.domain_dim());
    let mut offset = 0;
    for (b, &w) in fam.blocks().iter().zip(fam.weights()) {
        out.rows_mut(offset, b.nrows()).copy_from(&(b * C64::from(w.sqrt())));
        offset += b.nrows();
    }
    out
}

/// Splits embedded analysis rows back into raw blocks (divides by `√μ_i`).
pub fn family_from_analysis(space: &MeasureSpace, block_dims: &[usize], analysis: &CMatrix) -> Result<GFrameFamily> {
    if block_dims.len() != space.atom_count() || block_dims.iter().sum::<usize>() != analysis.nrows() {
        return Err(Error::shape("analysis matrix rows do not match block dims"));
    }
    let mut offset = 0;
    let mut blocks = Vec::with_capacity(block_dims.len());
    for (&d, &w) in block_dims.iter().zip(space.weights()) {
        blocks.push(analysis.rows(offset, d) / C64::from(w.sqrt()));
        offset += d;
    }
    GFrameFamily::new(space.clone(), analysis.ncols(), blocks)
}

/// Tolerances shared by every equality, rank and frame decision.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TolerancePolicy {
    /// Relative tolerance for scalar and matrix equality.
    pub rel_eps: f64,
    /// `c` in the singular-value cutoff `c · max(rows, cols) · σ_max · ε`.
    pub rank_eps_factor: f64,
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        Self { rel_eps: 1e-9, rank_eps_factor: 10.0 }
    }
}

impl TolerancePolicy {
    pub fn new(rel_eps: f64, rank_eps_factor: f64) -> Result<Self> {
        if !(rel_eps > 0.0 && rel_eps.is_finite()) {
            return Err(Error::Tolerance(format!("rel_eps must be positive, got {rel_eps}")));
        }
        if !(rank_eps_factor >= 1.0 && rank_eps_factor.is_finite()) {
            return Err(Error::Tolerance(format!("rank_eps_factor must be ≥ 1, got {rank_eps_factor}")));
        }
        Ok(Self { rel_eps, rank_eps_factor })
    }

    /// Singular values at or below this are zero.
    pub fn rank_threshold(&self, rows: usize, cols: usize, sigma_max: f64) -> f64 {
        self.rank_eps_factor * rows.max(cols) as f64 * sigma_max * f64::EPSILON
    }

    /// A frame needs `λ_min` strictly above this.
    pub fn frame_threshold(&self, domain_dim: usize, lambda_max: f64) -> f64 {
        self.rank_eps_factor * domain_dim as f64 * lambda_max * f64::EPSILON
    }

    /// `|a − b| ≤ rel_eps · max(1, |a|, |b|)`.
    pub fn close(&self, a: f64, b: f64) -> bool {
        (a - b).abs() <= self.rel_eps * 1f64.max(a.abs()).max(b.abs())
    }

    /// Entrywise version of [`close`](Self::close), scaled by the larger
    /// max-modulus entry.
    pub fn matrices_close(&self, a: &CMatrix, b: &CMatrix) -> bool {
        a.shape() == b.shape() && {
            let scale = 1f64.max(max_modulus(a)).max(max_modulus(b));
            max_modulus(&(a - b)) <= self.rel_eps * scale
        }
    }

    pub fn is_identity(&self, a: &CMatrix) -> bool {
        a.is_square() && self.matrices_close(a, &CMatrix::identity(a.nrows(), a.ncols()))
    }
}

pub fn max_modulus(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}
