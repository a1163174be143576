//! Dense matrix kernel: the [`Matrix`] carrier, rotation blocks, the
//! matrix exponential, decomplexification and a numeric centralizer oracle.
//!
//! Everything here works on small dense matrices (order ≤ 16). Block
//! direct sums silently drop zero-order blocks, so `O_0 ⊕ B = B`.

use std::fmt;
use std::ops::{Add, Deref, Mul, Sub};

use nalgebra::{DMatrix, Schur, SVD};
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{LogError, Result};

/// Default relative accuracy of [`mat_exp`].
pub const DEFAULT_EXP_TOL: f64 = 1e-16;
/// Default relative singular-value threshold of [`commutant_kernel_dim`].
pub const DEFAULT_KERNEL_TOL: f64 = 1e-8;
/// Minimal ratio between the singular values on either side of a rank cut.
pub const RANK_GAP_RATIO: f64 = 10.0;

const MAX_COMMUTANT_ORDER: usize = 12;
const MAX_SQUARINGS: i32 = 60;
const SERIES_MAX_TERMS: usize = 200_000;

/// Square real matrix with finite entries.
#[derive(Clone, PartialEq)]
pub struct Matrix(DMatrix<f64>);

impl Matrix {
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        if !m.is_square() {
            return Err(LogError::InvalidInput(format!(
                "matrix must be square, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        if m.iter().any(|x| !x.is_finite()) {
            return Err(LogError::InvalidInput("matrix has non-finite entries".into()));
        }
        Ok(Matrix(m))
    }

    /// Builds a matrix from row-major nested rows.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(LogError::InvalidInput("rows must all have length n".into()));
        }
        Matrix::new(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn identity(n: usize) -> Self {
        Matrix(DMatrix::identity(n, n))
    }

    pub fn zeros(n: usize) -> Self {
        Matrix(DMatrix::zeros(n, n))
    }

    pub fn diagonal(entries: &[f64]) -> Result<Self> {
        let n = entries.len();
        Matrix::new(DMatrix::from_fn(n, n, |i, j| if i == j { entries[i] } else { 0.0 }))
    }

    /// Wraps an internally produced matrix without re-validating it.
    pub(crate) fn from_dmatrix(m: DMatrix<f64>) -> Self {
        debug_assert!(m.is_square());
        Matrix(m)
    }

    pub fn order(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_dmatrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<f64> {
        self.0
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix(self.0.transpose())
    }

    pub fn scale(&self, s: f64) -> Matrix {
        Matrix(&self.0 * s)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }

    /// `‖self + selfᵀ‖_F`.
    pub fn skewness(&self) -> f64 {
        (&self.0 + self.0.transpose()).norm()
    }

    /// Block-diagonal direct sum; zero-order blocks are skipped.
    pub fn direct_sum<'a, I>(blocks: I) -> Matrix
    where
        I: IntoIterator<Item = &'a Matrix>,
    {
        let blocks: Vec<&Matrix> = blocks.into_iter().filter(|b| b.order() > 0).collect();
        let n = blocks.iter().map(|b| b.order()).sum();
        let mut out = DMatrix::zeros(n, n);
        let mut at = 0;
        for b in blocks {
            let k = b.order();
            out.view_mut((at, at), (k, k)).copy_from(&b.0);
            at += k;
        }
        Matrix(out)
    }

    /// `B^{⊕m}`.
    pub fn repeat_block(block: &Matrix, m: usize) -> Matrix {
        Matrix::direct_sum(std::iter::repeat_n(block, m))
    }

    pub fn inverse(&self) -> Result<Matrix> {
        self.0
            .clone()
            .try_inverse()
            .filter(|inv| inv.iter().all(|x| x.is_finite()))
            .map(Matrix)
            .ok_or_else(|| LogError::IllConditioned("matrix is numerically singular".into()))
    }

    /// 2-norm condition number, `∞` for singular matrices.
    pub fn condition_number(&self) -> f64 {
        if self.order() == 0 {
            return 1.0;
        }
        let sv = singular_values(&self.0);
        let smin = sv[sv.len() - 1];
        if smin == 0.0 {
            f64::INFINITY
        } else {
            sv[0] / smin
        }
    }

    /// Rows as nested vectors, row-major.
    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.0.row_iter().map(|r| r.iter().copied().collect()).collect()
    }
}

impl Deref for Matrix {
    type Target = DMatrix<f64>;

    fn deref(&self) -> &DMatrix<f64> {
        &self.0
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix{:?}", self.to_rows())
    }
}

impl<'a> Mul<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &'a Matrix) -> Matrix {
        Matrix(&self.0 * &rhs.0)
    }
}

impl<'a> Add<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn add(self, rhs: &'a Matrix) -> Matrix {
        Matrix(&self.0 + &rhs.0)
    }
}

impl<'a> Sub<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &'a Matrix) -> Matrix {
        Matrix(&self.0 - &rhs.0)
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    n: usize,
    data: Vec<Vec<f64>>,
}

impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson { n: self.order(), data: self.to_rows() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = MatrixJson::deserialize(d)?;
        if raw.n == 0 || raw.data.len() != raw.n {
            return Err(serde::de::Error::custom(format!(
                "expected {} rows, got {}",
                raw.n,
                raw.data.len()
            )));
        }
        Matrix::from_rows(&raw.data).map_err(serde::de::Error::custom)
    }
}

/// Square complex matrix with finite entries.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<Complex64>);

impl ComplexMatrix {
    pub fn new(m: DMatrix<Complex64>) -> Result<Self> {
        if !m.is_square() || m.nrows() == 0 {
            return Err(LogError::InvalidInput("complex matrix must be square of order ≥ 1".into()));
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(LogError::InvalidInput("complex matrix has non-finite entries".into()));
        }
        Ok(ComplexMatrix(m))
    }

    pub fn identity(h: usize) -> Self {
        ComplexMatrix(DMatrix::identity(h, h))
    }

    pub fn order(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_dmatrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn adjoint(&self) -> ComplexMatrix {
        ComplexMatrix(self.0.adjoint())
    }
}

impl Deref for ComplexMatrix {
    type Target = DMatrix<Complex64>;

    fn deref(&self) -> &DMatrix<Complex64> {
        &self.0
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ComplexMatrix{}", self.0)
    }
}

impl<'a> Mul<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

#[derive(Serialize, Deserialize)]
struct ComplexMatrixJson {
    h: usize,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows = |f: fn(&Complex64) -> f64| {
            self.0.row_iter().map(|r| r.iter().map(f).collect()).collect()
        };
        ComplexMatrixJson { h: self.order(), re: rows(|z| z.re), im: rows(|z| z.im) }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = ComplexMatrixJson::deserialize(d)?;
        let h = raw.h;
        let well_formed = raw.re.len() == h
            && raw.im.len() == h
            && raw.re.iter().chain(raw.im.iter()).all(|r| r.len() == h);
        if !well_formed {
            return Err(serde::de::Error::custom("complex matrix rows do not match h"));
        }
        let m = DMatrix::from_fn(h, h, |i, j| Complex64::new(raw.re[i][j], raw.im[i][j]));
        ComplexMatrix::new(m).map_err(serde::de::Error::custom)
    }
}

/// The plane rotation `E_θ = [[cos θ, −sin θ], [sin θ, cos θ]]`.
pub fn rotation_block(theta: f64) -> Result<Matrix> {
    if !theta.is_finite() {
        return Err(LogError::InvalidInput(format!("rotation angle must be finite, got {theta}")));
    }
    let (s, c) = theta.sin_cos();
    Ok(Matrix(DMatrix::from_row_slice(2, 2, &[c, -s, s, c])))
}

/// The generator `E = [[0, −1], [1, 0]]` of plane rotations.
pub fn rotation_generator() -> Matrix {
    Matrix(DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]))
}

/// `αI₂ + δE`, the real form of the complex scalar `α + iδ`.
pub fn scaled_rotation_generator(alpha: f64, delta: f64) -> Matrix {
    Matrix(DMatrix::from_row_slice(2, 2, &[alpha, -delta, delta, alpha]))
}

fn norm_1(m: &DMatrix<f64>) -> f64 {
    m.column_iter().map(|c| c.iter().map(|x| x.abs()).sum::<f64>()).fold(0.0, f64::max)
}

/// Matrix exponential by scaling and squaring of a truncated Taylor series.
///
/// The argument is scaled by `2^-s` until its 1-norm is at most 1/2, and the
/// Taylor degree is the smallest one whose remainder bound meets `tol·2^-s`
/// (floored at a quarter ulp).
pub fn mat_exp(a: &Matrix, tol: f64) -> Result<Matrix> {
    if !(tol > 0.0 && tol <= 1e-6) {
        return Err(LogError::InvalidInput(format!("exp tolerance must lie in (0, 1e-6], got {tol}")));
    }
    let n = a.order();
    let norm = norm_1(&a.0);
    let mut squarings = 0i32;
    if norm > 0.5 {
        squarings = (norm / 0.5).log2().ceil() as i32;
    }
    if squarings > MAX_SQUARINGS {
        return Err(LogError::NumericRange(format!("1-norm {norm:e} exceeds scaling capacity")));
    }
    let b = &a.0 * 2f64.powi(-squarings);
    let x = norm * 2f64.powi(-squarings);
    let target = (tol * 2f64.powi(-squarings)).max(f64::EPSILON / 4.0);

    // Remainder of the degree-k Taylor polynomial is bounded by
    // x^{k+1}/(k+1)! · 1/(1 − x/(k+2)).
    let mut degree = 0usize;
    let mut next_term = x;
    while next_term / (1.0 - x / (degree as f64 + 2.0)) > target && degree < 40 {
        degree += 1;
        next_term *= x / (degree as f64 + 1.0);
    }

    let mut sum = DMatrix::identity(n, n);
    let mut term = DMatrix::identity(n, n);
    for k in 1..=degree {
        term = (&term * &b) / (k as f64);
        sum += &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    if sum.iter().any(|v| !v.is_finite()) {
        return Err(LogError::NumericRange("matrix exponential overflowed".into()));
    }
    Ok(Matrix(sum))
}

/// [`mat_exp`] at the default tolerance.
pub fn exp(a: &Matrix) -> Result<Matrix> {
    mat_exp(a, DEFAULT_EXP_TOL)
}

/// Decomplexification `ρ_h`: each entry `z` becomes `Re(z)I₂ + Im(z)E`.
pub fn decomplexify(z: &ComplexMatrix) -> Matrix {
    let h = z.order();
    let mut out = DMatrix::zeros(2 * h, 2 * h);
    for i in 0..h {
        for j in 0..h {
            let w = z.0[(i, j)];
            out[(2 * i, 2 * j)] = w.re;
            out[(2 * i, 2 * j + 1)] = -w.im;
            out[(2 * i + 1, 2 * j)] = w.im;
            out[(2 * i + 1, 2 * j + 1)] = w.re;
        }
    }
    Matrix(out)
}

/// Matrix of the map `X ↦ AX − XA` on column-stacked `vec(X)`:
/// `I ⊗ A − Aᵀ ⊗ I`.
pub fn commutation_operator(a: &Matrix) -> DMatrix<f64> {
    let n = a.order();
    let mut op = DMatrix::zeros(n * n, n * n);
    // vec index of X[(i, j)] is j*n + i.
    for j in 0..n {
        for i in 0..n {
            let col = j * n + i;
            // (AX)[(r, j)] += A[(r, i)] X[(i, j)]
            for r in 0..n {
                op[(j * n + r, col)] += a.0[(r, i)];
            }
            // (XA)[(i, c)] += X[(i, j)] A[(j, c)]
            for c in 0..n {
                op[(c * n + i, col)] -= a.0[(j, c)];
            }
        }
    }
    op
}

pub(crate) fn singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    let mut sv: Vec<f64> = SVD::new(m.clone(), false, false).singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Number of singular values (sorted descending) at or below `rel_tol·σ_max`.
///
/// Fails when the two singular values straddling the cut are closer than
/// [`RANK_GAP_RATIO`], since the numerical rank is then not well defined.
pub(crate) fn numerical_nullity(sorted_desc: &[f64], rel_tol: f64, scale: f64) -> Result<usize> {
    let n = sorted_desc.len();
    let top = sorted_desc.first().copied().unwrap_or(0.0).max(scale);
    if top == 0.0 {
        return Ok(n);
    }
    let cut = rel_tol * top;
    if let Some(&s) = sorted_desc.iter().find(|&&s| s > cut / RANK_GAP_RATIO && s <= cut * RANK_GAP_RATIO) {
        return Err(LogError::IllConditioned(format!(
            "numerical rank ambiguous: singular value {s:e} lies within a factor {RANK_GAP_RATIO} of the cut {cut:e}"
        )));
    }
    let nullity = sorted_desc.iter().filter(|&&s| s <= cut).count();
    Ok(nullity)
}

/// Dimension of the centralizer `{X : AX = XA}` in `M(n,ℝ)`, counted as the
/// number of singular values of the commutation operator below
/// `tol·σ_max`.
pub fn commutant_kernel_dim(a: &Matrix, tol: f64) -> Result<usize> {
    let n = a.order();
    if n > MAX_COMMUTANT_ORDER {
        return Err(LogError::InvalidInput(format!(
            "commutant oracle limited to order ≤ {MAX_COMMUTANT_ORDER}, got {n}"
        )));
    }
    if !(tol > 0.0 && tol < 1.0) {
        return Err(LogError::InvalidInput(format!("singular-value threshold must lie in (0, 1), got {tol}")));
    }
    if n == 0 {
        return Ok(0);
    }
    let sv = singular_values(&commutation_operator(a));
    numerical_nullity(&sv, tol, a.frobenius_norm())
}

/// Eigenvalues from the real Schur form. The deflation threshold is
/// relaxed from `ε` up to `64ε` when the QR iteration stalls, which happens
/// for spectra containing `±λ` pairs of equal modulus.
pub fn schur_eigenvalues(a: &Matrix) -> Result<Vec<Complex64>> {
    [1.0, 4.0, 16.0, 64.0]
        .iter()
        .find_map(|f| Schur::try_new(a.0.clone(), f * f64::EPSILON, 10_000))
        .map(|schur| schur.complex_eigenvalues().iter().copied().collect())
        .ok_or_else(|| LogError::IllConditioned("Schur iteration did not converge".into()))
}

/// Spectral radius via the real Schur form.
pub fn spectral_radius(a: &Matrix) -> Result<f64> {
    if a.order() == 0 {
        return Ok(0.0);
    }
    Ok(schur_eigenvalues(a)?.iter().map(|z| z.norm()).fold(0.0, f64::max))
}

/// Mercator series `Σ (−1)^{i+1}(M−I)^i / i`, valid when the spectral
/// radius of `M − I` is below one. Serves as an independent oracle for the
/// principal logarithm near the identity.
pub fn series_log(m: &Matrix, tol: f64) -> Result<Matrix> {
    if !(tol > 0.0 && tol < 1.0) {
        return Err(LogError::InvalidInput(format!("series tolerance must lie in (0, 1), got {tol}")));
    }
    let n = m.order();
    let x = &m.0 - DMatrix::<f64>::identity(n, n);
    let radius = spectral_radius(&Matrix(x.clone()))?;
    if radius >= 1.0 {
        return Err(LogError::Domain(format!("spectral radius of M − I is {radius}, series diverges")));
    }
    let stop = tol * 0.01 * (1.0 - radius);
    let mut sum = DMatrix::zeros(n, n);
    let mut power = DMatrix::identity(n, n);
    let mut quiet = 0;
    for i in 1..=SERIES_MAX_TERMS {
        power = &power * &x;
        let term = &power / (i as f64);
        let size = term.norm();
        if i % 2 == 1 {
            sum += &term;
        } else {
            sum -= &term;
        }
        quiet = if size <= stop { quiet + 1 } else { 0 };
        if quiet >= 4 {
            return Ok(Matrix(sum));
        }
    }
    Err(LogError::IllConditioned(format!(
        "log series did not converge in {SERIES_MAX_TERMS} terms (spectral radius {radius})"
    )))
}
