//! Random logarithms on a branch, obtained by conjugating the canonical
//! logarithm with random elements of the commutant of the Jordan form.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::branches::{canonical_log, canonical_skew_log, MultiIndexSet, SkewMultiIndexSet};
use crate::error::{LogError, Result};
use crate::numkernel::{decomplexify, mat_exp, ComplexMatrix, Matrix, DEFAULT_EXP_TOL};
use crate::spectra::{OrthoSpectralData, SpectralData, MAX_TRANSITION_CONDITION};

/// Smallest accepted ratio `|det X| / Π‖x_j‖` for a random general block.
pub const HADAMARD_FLOOR: f64 = 1e-3;
/// Largest accepted 2-norm condition number of a random general block.
pub const BLOCK_CONDITION_CAP: f64 = 50.0;
pub const MAX_ATTEMPTS: usize = 100;
/// Determinants below this magnitude carry no reliable sign.
pub const SIGNATURE_DET_FLOOR: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockKind {
    RealGeneral,
    ComplexGeneral,
    RealOrthogonal,
    ComplexUnitary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BlockEntries {
    Real(Matrix),
    Complex(ComplexMatrix),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommutantBlock {
    pub kind: BlockKind,
    pub order: usize,
    pub entries: BlockEntries,
}

impl CommutantBlock {
    fn real_block(&self) -> Option<&Matrix> {
        match &self.entries {
            BlockEntries::Real(m) => Some(m),
            BlockEntries::Complex(_) => None,
        }
    }
}

/// An invertible matrix commuting with the real Jordan form, kept together
/// with its diagonal blocks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommutantElement {
    pub blocks: Vec<CommutantBlock>,
    pub assembled: Matrix,
}

impl CommutantElement {
    fn from_blocks(blocks: Vec<CommutantBlock>) -> Self {
        let parts: Vec<Matrix> = blocks
            .iter()
            .map(|b| match &b.entries {
                BlockEntries::Real(m) => m.clone(),
                BlockEntries::Complex(z) => decomplexify(z),
            })
            .collect();
        CommutantElement { assembled: Matrix::direct_sum(&parts), blocks }
    }
}

fn gaussian_dmatrix<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal))
}

fn complex_gaussian_dmatrix<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(n, n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im)
    })
}

fn condition(sv: &nalgebra::DVector<f64>) -> f64 {
    let max = sv.iter().copied().fold(0.0, f64::max);
    let min = sv.iter().copied().fold(f64::INFINITY, f64::min);
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

fn acceptable_real(x: &DMatrix<f64>) -> bool {
    let cols: f64 = x.column_iter().map(|c| c.norm()).product();
    let ratio = x.determinant().abs() / cols;
    ratio >= HADAMARD_FLOOR && condition(&x.singular_values()) <= BLOCK_CONDITION_CAP
}

fn acceptable_complex(x: &DMatrix<Complex64>) -> bool {
    let cols: f64 = x.column_iter().map(|c| c.norm()).product();
    let ratio = x.determinant().norm() / cols;
    ratio >= HADAMARD_FLOOR && condition(&x.singular_values()) <= BLOCK_CONDITION_CAP
}

fn real_general_block<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Result<CommutantBlock> {
    for _ in 0..MAX_ATTEMPTS {
        let x = gaussian_dmatrix(rng, n);
        if acceptable_real(&x) {
            return Ok(CommutantBlock {
                kind: BlockKind::RealGeneral,
                order: n,
                entries: BlockEntries::Real(Matrix::from_dmatrix(x)),
            });
        }
    }
    Err(LogError::DegenerateSample(format!("no acceptable {n}×{n} real block in {MAX_ATTEMPTS} draws")))
}

fn complex_general_block<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Result<CommutantBlock> {
    for _ in 0..MAX_ATTEMPTS {
        let x = complex_gaussian_dmatrix(rng, n);
        if acceptable_complex(&x) {
            return Ok(CommutantBlock {
                kind: BlockKind::ComplexGeneral,
                order: n,
                entries: BlockEntries::Complex(ComplexMatrix::new(x)?),
            });
        }
    }
    Err(LogError::DegenerateSample(format!("no acceptable {n}×{n} complex block in {MAX_ATTEMPTS} draws")))
}

/// Haar-distributed orthogonal block: QR of a Gaussian matrix with the
/// signs of `R`'s diagonal moved into `Q`.
fn real_orthogonal_block<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Result<CommutantBlock> {
    for _ in 0..MAX_ATTEMPTS {
        let qr = gaussian_dmatrix(rng, n).qr();
        let r = qr.r();
        if r.diagonal().iter().any(|d| d.abs() < 1e-12) {
            continue;
        }
        let mut q = qr.q();
        for (j, mut col) in q.column_iter_mut().enumerate() {
            col *= r[(j, j)].signum();
        }
        return Ok(CommutantBlock {
            kind: BlockKind::RealOrthogonal,
            order: n,
            entries: BlockEntries::Real(Matrix::from_dmatrix(q)),
        });
    }
    Err(LogError::DegenerateSample(format!("QR of {n}×{n} Gaussian kept failing")))
}

fn complex_unitary_block<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Result<CommutantBlock> {
    for _ in 0..MAX_ATTEMPTS {
        let qr = complex_gaussian_dmatrix(rng, n).qr();
        let r = qr.r();
        if r.diagonal().iter().any(|d| d.norm() < 1e-12) {
            continue;
        }
        let mut q = qr.q();
        for (j, mut col) in q.column_iter_mut().enumerate() {
            let d = r[(j, j)];
            col *= d / d.norm();
        }
        return Ok(CommutantBlock {
            kind: BlockKind::ComplexUnitary,
            order: n,
            entries: BlockEntries::Complex(ComplexMatrix::new(q)?),
        });
    }
    Err(LogError::DegenerateSample(format!("QR of {n}×{n} complex Gaussian kept failing")))
}

/// Random invertible element of the commutant of the real Jordan form,
/// block by block in the order of the Jordan blocks.
pub fn sample_commutant<R: Rng + ?Sized>(spec: &SpectralData, rng: &mut R) -> Result<CommutantElement> {
    let mut blocks = Vec::new();
    for e in &spec.positive {
        blocks.push(real_general_block(rng, e.h)?);
    }
    for t in spec.nonreal_eigenvalues() {
        blocks.push(complex_general_block(rng, t.m)?);
    }
    for e in &spec.negative {
        blocks.push(real_general_block(rng, 2 * e.k)?);
    }
    Ok(CommutantElement::from_blocks(blocks))
}

/// Random orthogonal element of the commutant of the orthogonal canonical form.
pub fn sample_orthogonal_commutant<R: Rng + ?Sized>(spec: &OrthoSpectralData, rng: &mut R) -> Result<CommutantElement> {
    let mut blocks = Vec::new();
    if spec.h > 0 {
        blocks.push(real_orthogonal_block(rng, spec.h)?);
    }
    for r in &spec.rotations {
        blocks.push(complex_unitary_block(rng, r.m)?);
    }
    if spec.k > 0 {
        blocks.push(real_orthogonal_block(rng, 2 * spec.k)?);
    }
    Ok(CommutantElement::from_blocks(blocks))
}

/// A sampled logarithm together with the commutant element that produced it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LogSample {
    pub log: Matrix,
    pub commutant: CommutantElement,
}

fn check_orders(m: &Matrix, n: usize, basis: &Matrix) -> Result<()> {
    if m.order() != n || basis.order() != n {
        return Err(LogError::InvalidInput(format!(
            "matrix order {}, spectrum order {n} and basis order {} disagree",
            m.order(),
            basis.order()
        )));
    }
    Ok(())
}

/// `Y = C X J̃ X⁻¹ C⁻¹` for a random commutant element `X`.
pub fn sample_log<R: Rng + ?Sized>(
    m: &Matrix,
    spec: &SpectralData,
    c: &Matrix,
    b: &MultiIndexSet,
    rng: &mut R,
) -> Result<LogSample> {
    check_orders(m, spec.n, c)?;
    let cond = c.condition_number();
    if cond.is_nan() || cond > MAX_TRANSITION_CONDITION {
        return Err(LogError::IllConditioned(format!("transition matrix condition number {cond:e}")));
    }
    let j_tilde = canonical_log(spec, b)?;
    let x = sample_commutant(spec, rng)?;
    let cx = c * &x.assembled;
    let log = &(&cx * &j_tilde) * &cx.inverse()?;
    Ok(LogSample { log, commutant: x })
}

/// `W = Q X Ĵ Xᵀ Qᵀ` for a random orthogonal commutant element `X`,
/// returned as its exactly antisymmetric part.
pub fn sample_skew_log<R: Rng + ?Sized>(
    m: &Matrix,
    spec: &OrthoSpectralData,
    q: &Matrix,
    b: &SkewMultiIndexSet,
    rng: &mut R,
) -> Result<LogSample> {
    check_orders(m, spec.n, q)?;
    let j_hat = canonical_skew_log(spec, b)?;
    let x = sample_orthogonal_commutant(spec, rng)?;
    let qx = q * &x.assembled;
    let w = &(&qx * &j_hat) * &qx.transpose();
    let log = (&w - &w.transpose()).scale(0.5);
    Ok(LogSample { log, commutant: x })
}

fn det_sign(block: &CommutantBlock) -> Result<i8> {
    let m = block
        .real_block()
        .ok_or_else(|| LogError::InvalidInput("signature requested for a complex block".into()))?;
    let det = m.determinant();
    if det.abs() < SIGNATURE_DET_FLOOR {
        return Err(LogError::DegenerateSample(format!("block determinant {det:e} too small to sign")));
    }
    Ok(if det > 0.0 { 1 } else { -1 })
}

/// Determinant signs of the real blocks whose sign survives the quotient:
/// positive eigenvalues with `g = 0`, then every negative eigenvalue.
/// Distinct values label distinct connected components of the branch.
pub fn component_signature(x: &CommutantElement, b: &MultiIndexSet) -> Result<Vec<i8>> {
    let p = b.eta.len();
    let a: usize = b.tau.iter().map(Vec::len).sum();
    let q = b.sigma.len();
    if x.blocks.len() != p + a + q {
        return Err(LogError::InvalidInput("commutant element does not match the branch".into()));
    }
    let mut signs = Vec::with_capacity(p + q);
    for i in b.set_j() {
        signs.push(det_sign(&x.blocks[i])?);
    }
    for j in 0..q {
        signs.push(det_sign(&x.blocks[p + a + j])?);
    }
    Ok(signs)
}

/// Skew counterpart of [`component_signature`]: the sign of the `O(h)` block
/// when the logarithm has no kernel, and the sign of the `O(2k)` block.
pub fn skew_component_signature(
    x: &CommutantElement,
    spec: &OrthoSpectralData,
    b: &SkewMultiIndexSet,
) -> Result<Vec<i8>> {
    let expected = usize::from(spec.h > 0) + spec.r() + usize::from(spec.k > 0);
    if x.blocks.len() != expected {
        return Err(LogError::InvalidInput("commutant element does not match the spectrum".into()));
    }
    let mut signs = Vec::new();
    if spec.h > 0 && b.g() == 0 {
        signs.push(det_sign(&x.blocks[0])?);
    }
    if spec.k > 0 {
        signs.push(det_sign(&x.blocks[expected - 1])?);
    }
    Ok(signs)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub residual: f64,
    pub skewness: f64,
    pub pass: bool,
}

/// Relative residual `‖exp(Y) − M‖_F / ‖M‖_F` and skewness `‖Y + Yᵀ‖_F`.
pub fn verify_log(m: &Matrix, y: &Matrix, tol: f64) -> Result<VerifyReport> {
    if m.order() != y.order() {
        return Err(LogError::InvalidInput(format!("orders {} and {} differ", m.order(), y.order())));
    }
    let residual = match mat_exp(y, DEFAULT_EXP_TOL) {
        Ok(e) => (&e - m).frobenius_norm() / m.frobenius_norm(),
        Err(_) => f64::INFINITY,
    };
    Ok(VerifyReport { residual, skewness: y.skewness(), pass: residual <= tol })
}
