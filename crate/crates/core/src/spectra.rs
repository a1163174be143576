//! Eigenvalue clustering and the real canonical forms of semi-simple and
//! special orthogonal matrices.
//!
//! Blocks of the real Jordan form follow the listing order of
//! [`SpectralData`]: positive eigenvalues ascending, then non-real pairs by
//! angle and modulus, then negative eigenvalues by ascending modulus.

use std::f64::consts::{PI, SQRT_2};

use nalgebra::{DMatrix, SVD};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{LogError, Result};
use crate::numkernel::{numerical_nullity, rotation_block, schur_eigenvalues, Matrix};

/// Default clustering tolerance for eigenvalues.
pub const DEFAULT_EPS: f64 = 1e-8;
/// Largest admissible eigenvector-matrix condition number.
pub const MAX_TRANSITION_CONDITION: f64 = 1e8;

const AMBIGUITY_FACTOR: f64 = 10.0;
const RANK_TOL_FACTOR: f64 = 100.0;
const ORTHOGONALITY_TOL: f64 = 1e-10;
const PIVOT_TIE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PositiveEigenvalue {
    pub lambda: f64,
    pub h: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NonrealMember {
    pub rho: f64,
    pub m: usize,
}

/// Non-real eigenvalue pairs `ρ e^{±iθ}` sharing one angle `θ ∈ (0, π)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NonrealGroup {
    pub theta: f64,
    pub members: Vec<NonrealMember>,
}

/// Negative eigenvalue `−w` of multiplicity `2k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NegativeEigenvalue {
    pub w: f64,
    pub k: usize,
}

/// Clustered spectrum of a non-singular semi-simple real matrix that has a
/// real logarithm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralData {
    pub n: usize,
    pub positive: Vec<PositiveEigenvalue>,
    pub nonreal: Vec<NonrealGroup>,
    pub negative: Vec<NegativeEigenvalue>,
    #[serde(rename = "A")]
    pub a: usize,
}

/// A non-real eigenvalue pair flattened out of its angle group.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonrealEigenvalue {
    pub theta: f64,
    pub rho: f64,
    pub m: usize,
}

impl SpectralData {
    /// Validates orderings and multiplicities and derives `n` and `A`.
    pub fn new(
        positive: Vec<PositiveEigenvalue>,
        nonreal: Vec<NonrealGroup>,
        negative: Vec<NegativeEigenvalue>,
    ) -> Result<Self> {
        let bad = |msg: String| Err(LogError::InvalidInput(msg));
        for w in positive.windows(2) {
            if w[0].lambda >= w[1].lambda {
                return bad("positive eigenvalues must be strictly increasing".into());
            }
        }
        if positive.iter().any(|e| !(e.lambda > 0.0 && e.lambda.is_finite()) || e.h == 0) {
            return bad("positive eigenvalues need λ > 0 and h ≥ 1".into());
        }
        for w in nonreal.windows(2) {
            if w[0].theta >= w[1].theta {
                return bad("angle groups must be strictly increasing in θ".into());
            }
        }
        for g in &nonreal {
            if !(g.theta > 0.0 && g.theta < PI) || g.members.is_empty() {
                return bad(format!("angle group θ={} must lie in (0, π) and be non-empty", g.theta));
            }
            for w in g.members.windows(2) {
                if w[0].rho >= w[1].rho {
                    return bad("moduli inside an angle group must be strictly increasing".into());
                }
            }
            if g.members.iter().any(|t| !(t.rho > 0.0 && t.rho.is_finite()) || t.m == 0) {
                return bad("non-real members need ρ > 0 and m ≥ 1".into());
            }
        }
        for w in negative.windows(2) {
            if w[0].w >= w[1].w {
                return bad("negative eigenvalue moduli must be strictly increasing".into());
            }
        }
        if negative.iter().any(|e| !(e.w > 0.0 && e.w.is_finite()) || e.k == 0) {
            return bad("negative eigenvalues need w > 0 and k ≥ 1".into());
        }
        let n = positive.iter().map(|e| e.h).sum::<usize>()
            + 2 * nonreal.iter().flat_map(|g| &g.members).map(|t| t.m).sum::<usize>()
            + 2 * negative.iter().map(|e| e.k).sum::<usize>();
        if n == 0 {
            return bad("spectrum must describe a matrix of order ≥ 1".into());
        }
        let a = nonreal.iter().map(|g| g.members.len()).sum();
        Ok(SpectralData { n, positive, nonreal, negative, a })
    }

    /// Convenience constructor from plain tuples.
    pub fn from_parts(
        positive: &[(f64, usize)],
        nonreal: &[(f64, &[(f64, usize)])],
        negative: &[(f64, usize)],
    ) -> Result<Self> {
        SpectralData::new(
            positive.iter().map(|&(lambda, h)| PositiveEigenvalue { lambda, h }).collect(),
            nonreal
                .iter()
                .map(|&(theta, members)| NonrealGroup {
                    theta,
                    members: members.iter().map(|&(rho, m)| NonrealMember { rho, m }).collect(),
                })
                .collect(),
            negative.iter().map(|&(w, k)| NegativeEigenvalue { w, k }).collect(),
        )
    }

    pub fn p(&self) -> usize {
        self.positive.len()
    }

    pub fn r(&self) -> usize {
        self.nonreal.len()
    }

    pub fn q(&self) -> usize {
        self.negative.len()
    }

    /// Non-real pairs in `(l, t)` order.
    pub fn nonreal_eigenvalues(&self) -> Vec<NonrealEigenvalue> {
        self.nonreal
            .iter()
            .flat_map(|g| g.members.iter().map(move |t| NonrealEigenvalue { theta: g.theta, rho: t.rho, m: t.m }))
            .collect()
    }

    /// The block-diagonal real Jordan form described by this spectrum.
    pub fn jordan_form(&self) -> Matrix {
        let mut blocks = Vec::new();
        for e in &self.positive {
            blocks.push(Matrix::identity(e.h).scale(e.lambda));
        }
        for t in self.nonreal_eigenvalues() {
            let rot = rotation_block(t.theta).expect("θ is finite").scale(t.rho);
            blocks.push(Matrix::repeat_block(&rot, t.m));
        }
        for e in &self.negative {
            blocks.push(Matrix::identity(2 * e.k).scale(-e.w));
        }
        Matrix::direct_sum(&blocks)
    }

    /// True when every eigenvalue is real, positive and simple.
    pub fn all_positive_simple(&self) -> bool {
        self.nonreal.is_empty() && self.negative.is_empty() && self.positive.iter().all(|e| e.h == 1)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RotationEigenvalue {
    pub theta: f64,
    pub m: usize,
}

/// Spectrum of a special orthogonal matrix: `1` with multiplicity `h`,
/// pairs `e^{±iθ_l}` with multiplicity `m_l`, and `−1` with multiplicity `2k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrthoSpectralData {
    pub n: usize,
    pub h: usize,
    pub rotations: Vec<RotationEigenvalue>,
    pub k: usize,
}

impl OrthoSpectralData {
    pub fn new(h: usize, rotations: Vec<RotationEigenvalue>, k: usize) -> Result<Self> {
        for w in rotations.windows(2) {
            if w[0].theta >= w[1].theta {
                return Err(LogError::InvalidInput("rotation angles must be strictly increasing".into()));
            }
        }
        if rotations.iter().any(|r| !(r.theta > 0.0 && r.theta < PI) || r.m == 0) {
            return Err(LogError::InvalidInput("rotation angles must lie in (0, π) with m ≥ 1".into()));
        }
        let n = h + 2 * rotations.iter().map(|r| r.m).sum::<usize>() + 2 * k;
        if n == 0 {
            return Err(LogError::InvalidInput("spectrum must describe a matrix of order ≥ 1".into()));
        }
        Ok(OrthoSpectralData { n, h, rotations, k })
    }

    pub fn from_parts(h: usize, rotations: &[(f64, usize)], k: usize) -> Result<Self> {
        OrthoSpectralData::new(h, rotations.iter().map(|&(theta, m)| RotationEigenvalue { theta, m }).collect(), k)
    }

    pub fn r(&self) -> usize {
        self.rotations.len()
    }

    /// `I_h ⊕ E_{θ₁}^{⊕m₁} ⊕ … ⊕ (−I_{2k})`.
    pub fn canonical_form(&self) -> Matrix {
        let mut blocks = vec![Matrix::identity(self.h)];
        for r in &self.rotations {
            blocks.push(Matrix::repeat_block(&rotation_block(r.theta).expect("θ is finite"), r.m));
        }
        blocks.push(Matrix::identity(2 * self.k).scale(-1.0));
        Matrix::direct_sum(&blocks)
    }

    /// The same spectrum seen as a general semi-simple spectrum (all moduli 1).
    pub fn as_spectral(&self) -> SpectralData {
        let positive = if self.h > 0 { vec![PositiveEigenvalue { lambda: 1.0, h: self.h }] } else { vec![] };
        let nonreal = self
            .rotations
            .iter()
            .map(|r| NonrealGroup { theta: r.theta, members: vec![NonrealMember { rho: 1.0, m: r.m }] })
            .collect::<Vec<_>>();
        let negative = if self.k > 0 { vec![NegativeEigenvalue { w: 1.0, k: self.k }] } else { vec![] };
        let a = nonreal.len();
        SpectralData { n: self.n, positive, nonreal, negative, a }
    }
}

/// A cluster of numerically equal eigenvalues.
#[derive(Debug, Clone, Copy)]
struct Cluster {
    value: Complex64,
    mult: usize,
}

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps <= 1e-3 {
        Ok(())
    } else {
        Err(LogError::InvalidInput(format!("clustering tolerance must lie in (0, 1e-3], got {eps}")))
    }
}

fn find(parent: &mut [usize], i: usize) -> usize {
    let mut root = i;
    while parent[root] != root {
        root = parent[root];
    }
    let mut cur = i;
    while parent[cur] != root {
        let next = parent[cur];
        parent[cur] = root;
        cur = next;
    }
    root
}

/// Union-find clustering of scalars under a distance, refusing distances
/// that fall between `eps` and `10·eps`.
fn union_find_groups<T>(items: &[T], eps: f64, dist: impl Fn(&T, &T) -> f64, what: &str) -> Result<Vec<Vec<usize>>> {
    let n = items.len();
    let mut parent: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in i + 1..n {
            if dist(&items[i], &items[j]) < eps {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if find(&mut parent, i) != find(&mut parent, j) {
                let d = dist(&items[i], &items[j]);
                if d < AMBIGUITY_FACTOR * eps {
                    return Err(LogError::IllConditioned(format!(
                        "{what} separated by {d:e}, within the ambiguity band [{eps:e}, {:e})",
                        AMBIGUITY_FACTOR * eps
                    )));
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_index: Vec<Option<usize>> = vec![None; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        match root_index[r] {
            Some(g) => groups[g].push(i),
            None => {
                root_index[r] = Some(groups.len());
                groups.push(vec![i]);
            }
        }
    }
    Ok(groups)
}

fn relative_distance(a: &Complex64, b: &Complex64) -> f64 {
    let scale = a.norm().max(b.norm());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).norm() / scale
    }
}

fn cluster_eigenvalues(eigs: &[Complex64], eps: f64) -> Result<Vec<Cluster>> {
    let groups = union_find_groups(eigs, eps, relative_distance, "eigenvalues")?;
    let mut clusters = Vec::with_capacity(groups.len());
    for g in groups {
        let sum: Complex64 = g.iter().map(|&i| eigs[i]).sum();
        let mut value = sum / g.len() as f64;
        let rel_im = if value.norm() == 0.0 { 0.0 } else { value.im.abs() / value.norm() };
        if rel_im <= eps {
            value.im = 0.0;
        } else if rel_im <= AMBIGUITY_FACTOR * eps {
            return Err(LogError::IllConditioned(format!(
                "eigenvalue {value} is neither clearly real nor clearly non-real"
            )));
        }
        clusters.push(Cluster { value, mult: g.len() });
    }
    Ok(clusters)
}

fn shifted(m: &DMatrix<f64>, z: Complex64) -> DMatrix<Complex64> {
    let n = m.nrows();
    DMatrix::from_fn(n, n, |i, j| {
        let base = Complex64::new(m[(i, j)], 0.0);
        if i == j {
            base - z
        } else {
            base
        }
    })
}

fn shifted_real(m: &DMatrix<f64>, x: f64) -> DMatrix<f64> {
    let n = m.nrows();
    m - DMatrix::<f64>::identity(n, n) * x
}

/// Nullity of `M − zI` with the ambiguity guard.
fn eigenspace_dimension(m: &DMatrix<f64>, z: Complex64, eps: f64) -> Result<usize> {
    let scale = z.norm();
    let mut sv: Vec<f64> = if z.im == 0.0 {
        SVD::new(shifted_real(m, z.re), false, false).singular_values.iter().copied().collect()
    } else {
        SVD::new(shifted(m, z), false, false).singular_values.iter().copied().collect()
    };
    sv.sort_by(|a, b| b.total_cmp(a));
    numerical_nullity(&sv, RANK_TOL_FACTOR * eps, scale)
}

fn semisimple_clusters(m: &Matrix, clusters: &[Cluster], eps: f64) -> Result<bool> {
    for c in clusters {
        let nullity = eigenspace_dimension(m.as_dmatrix(), c.value, eps)?;
        if nullity > c.mult {
            return Err(LogError::IllConditioned(format!(
                "eigenspace of {} has dimension {nullity} above its multiplicity {}",
                c.value, c.mult
            )));
        }
        if nullity < c.mult {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Geometric-equals-algebraic multiplicity test on numerically clustered
/// eigenvalues.
pub fn check_semisimple(m: &Matrix, eps: f64) -> Result<bool> {
    check_eps(eps)?;
    if m.order() == 0 {
        return Ok(true);
    }
    let clusters = cluster_eigenvalues(&schur_eigenvalues(m)?, eps)?;
    semisimple_clusters(m, &clusters, eps)
}

fn check_nonsingular(m: &Matrix, clusters: &[Cluster], eps: f64) -> Result<()> {
    let n = m.order();
    let radius = clusters.iter().map(|c| c.value.norm()).fold(0.0, f64::max);
    let det = m.determinant();
    if radius == 0.0 || det.abs() <= eps.powi(n as i32) || clusters.iter().any(|c| c.value.norm() <= eps * radius)
    {
        return Err(LogError::SingularMatrix);
    }
    Ok(())
}

struct Conjugate {
    value: Complex64,
    mult: usize,
}

/// Non-real clusters in the upper half plane, after checking that each has a
/// conjugate partner of equal multiplicity.
fn upper_half_clusters(clusters: &[Cluster], eps: f64) -> Result<Vec<Conjugate>> {
    let mut out = Vec::new();
    for c in clusters.iter().filter(|c| c.value.im > 0.0) {
        let partner = clusters
            .iter()
            .find(|d| d.value.im < 0.0 && relative_distance(&d.value, &c.value.conj()) < AMBIGUITY_FACTOR * eps);
        match partner {
            Some(d) if d.mult == c.mult => out.push(Conjugate { value: c.value, mult: c.mult }),
            _ => {
                return Err(LogError::IllConditioned(format!(
                    "eigenvalue {} has no conjugate partner of equal multiplicity",
                    c.value
                )))
            }
        }
    }
    Ok(out)
}

/// Clusters the spectrum of `m` and arranges it in canonical listing order.
pub fn classify_spectrum(m: &Matrix, eps: f64) -> Result<SpectralData> {
    check_eps(eps)?;
    if m.order() == 0 {
        return Err(LogError::InvalidInput("matrix of order 0".into()));
    }
    let clusters = cluster_eigenvalues(&schur_eigenvalues(m)?, eps)?;
    check_nonsingular(m, &clusters, eps)?;
    if !semisimple_clusters(m, &clusters, eps)? {
        return Err(LogError::NotSemisimple);
    }

    let mut positive: Vec<PositiveEigenvalue> = clusters
        .iter()
        .filter(|c| c.value.im == 0.0 && c.value.re > 0.0)
        .map(|c| PositiveEigenvalue { lambda: c.value.re, h: c.mult })
        .collect();
    positive.sort_by(|a, b| a.lambda.total_cmp(&b.lambda));

    let mut negative = Vec::new();
    for c in clusters.iter().filter(|c| c.value.im == 0.0 && c.value.re < 0.0) {
        if c.mult % 2 == 1 {
            return Err(LogError::NoRealLogarithm { eigenvalue: c.value.re, multiplicity: c.mult });
        }
        negative.push(NegativeEigenvalue { w: -c.value.re, k: c.mult / 2 });
    }
    negative.sort_by(|a, b| a.w.total_cmp(&b.w));

    let upper = upper_half_clusters(&clusters, eps)?;
    let angles: Vec<f64> = upper.iter().map(|c| c.value.arg()).collect();
    let angle_groups = union_find_groups(&angles, eps, |a, b| (a - b).abs(), "eigenvalue angles")?;
    let mut nonreal: Vec<NonrealGroup> = angle_groups
        .into_iter()
        .map(|g| {
            let theta = g.iter().map(|&i| angles[i]).sum::<f64>() / g.len() as f64;
            let mut members: Vec<NonrealMember> =
                g.iter().map(|&i| NonrealMember { rho: upper[i].value.norm(), m: upper[i].mult }).collect();
            members.sort_by(|a, b| a.rho.total_cmp(&b.rho));
            NonrealGroup { theta, members }
        })
        .collect();
    nonreal.sort_by(|a, b| a.theta.total_cmp(&b.theta));

    SpectralData::new(positive, nonreal, negative)
}

/// Basis of the kernel of `M − zI` (`mult` columns), normalized so that a
/// set of pivot rows reads as the identity. The pivoted form makes the basis
/// independent of the arbitrary rotation returned by the SVD.
fn eigenspace_basis(m: &DMatrix<f64>, z: Complex64, mult: usize) -> DMatrix<Complex64> {
    let n = m.nrows();
    let svd = SVD::new(shifted(m, z), false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let kernel_rows = &order[n - mult..];
    let mut basis = DMatrix::from_fn(n, mult, |i, c| v_t[(kernel_rows[c], i)].conj());

    let mut pivots: Vec<usize> = Vec::with_capacity(mult);
    for c in 0..mult {
        let free = || (0..n).filter(|r| !pivots.contains(r));
        let best_abs = free().map(|r| basis[(r, c)].norm()).fold(0.0, f64::max);
        // Near-ties resolve to the earliest row.
        let best = free().find(|&r| basis[(r, c)].norm() >= (1.0 - PIVOT_TIE) * best_abs);
        let r = best.expect("kernel dimension does not exceed n");
        let pivot = basis[(r, c)];
        for i in 0..n {
            basis[(i, c)] /= pivot;
        }
        for c2 in 0..mult {
            if c2 != c {
                let f = basis[(r, c2)];
                for i in 0..n {
                    let d = basis[(i, c)] * f;
                    basis[(i, c2)] -= d;
                }
            }
        }
        pivots.push(r);
    }
    let mut cols: Vec<usize> = (0..mult).collect();
    cols.sort_by_key(|&c| pivots[c]);
    DMatrix::from_fn(n, mult, |i, c| basis[(i, cols[c])])
}

fn orthonormalize(basis: &mut DMatrix<Complex64>) {
    for c in 0..basis.ncols() {
        for prev in 0..c {
            let proj: Complex64 = (0..basis.nrows()).map(|i| basis[(i, prev)].conj() * basis[(i, c)]).sum();
            for i in 0..basis.nrows() {
                let d = basis[(i, prev)] * proj;
                basis[(i, c)] -= d;
            }
        }
        let norm = basis.column(c).norm();
        for i in 0..basis.nrows() {
            basis[(i, c)] /= norm;
        }
    }
}

/// Pivot-normalized eigenspace basis, then made orthonormal by Gram–Schmidt.
fn orthonormal_eigenbasis(m: &DMatrix<f64>, z: Complex64, mult: usize) -> DMatrix<Complex64> {
    let mut basis = eigenspace_basis(m, z, mult);
    orthonormalize(&mut basis);
    basis
}

fn push_real_columns(cols: &mut Vec<Vec<f64>>, basis: &DMatrix<Complex64>) {
    for c in 0..basis.ncols() {
        cols.push(basis.column(c).iter().map(|z| z.re).collect());
    }
}

/// Columns `(Re v, Im v)` for each eigenvector `v` of `ρe^{−iθ}`; these span
/// an invariant subspace on which `M` acts as `ρE_θ`.
fn push_pair_columns(cols: &mut Vec<Vec<f64>>, basis: &DMatrix<Complex64>, scale: f64) {
    for c in 0..basis.ncols() {
        cols.push(basis.column(c).iter().map(|z| scale * z.re).collect());
        cols.push(basis.column(c).iter().map(|z| scale * z.im).collect());
    }
}

fn from_columns(n: usize, cols: &[Vec<f64>]) -> Matrix {
    Matrix::from_dmatrix(DMatrix::from_fn(n, n, |i, j| cols[j][i]))
}

/// Real Jordan form `J` of a semi-simple matrix with its transition matrix
/// `C`, so that `M = C J C⁻¹`.
#[derive(Debug, Clone, Serialize)]
pub struct RealJordan {
    #[serde(rename = "J")]
    pub j: Matrix,
    #[serde(rename = "C")]
    pub c: Matrix,
    pub spectral: SpectralData,
}

pub fn real_jordan(m: &Matrix, eps: f64) -> Result<RealJordan> {
    let spectral = classify_spectrum(m, eps)?;
    let n = m.order();
    let dm = m.as_dmatrix();
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(n);
    for e in &spectral.positive {
        push_real_columns(&mut cols, &orthonormal_eigenbasis(dm, Complex64::new(e.lambda, 0.0), e.h));
    }
    for t in spectral.nonreal_eigenvalues() {
        let z = Complex64::from_polar(t.rho, -t.theta);
        push_pair_columns(&mut cols, &orthonormal_eigenbasis(dm, z, t.m), SQRT_2);
    }
    for e in &spectral.negative {
        push_real_columns(&mut cols, &orthonormal_eigenbasis(dm, Complex64::new(-e.w, 0.0), 2 * e.k));
    }
    let c = from_columns(n, &cols);
    let cond = c.condition_number();
    if cond.is_nan() || cond > MAX_TRANSITION_CONDITION {
        return Err(LogError::IllConditioned(format!("eigenvector matrix condition number {cond:e}")));
    }
    let j = spectral.jordan_form();
    let residual = (m - &(&(&c * &j) * &c.inverse()?)).frobenius_norm();
    if residual > 1e-9 * m.frobenius_norm() {
        return Err(LogError::IllConditioned(format!("reconstruction residual {residual:e}")));
    }
    Ok(RealJordan { j, c, spectral })
}

/// Orthogonal canonical form: `M = Q J Qᵀ` with `Q` orthogonal.
#[derive(Debug, Clone, Serialize)]
pub struct OrthoCanonical {
    #[serde(rename = "J")]
    pub j: Matrix,
    #[serde(rename = "Q")]
    pub q: Matrix,
    pub spectral: OrthoSpectralData,
}

/// Rejects matrices that are not special orthogonal.
pub fn check_special_orthogonal(m: &Matrix) -> Result<()> {
    let n = m.order();
    let residual = (&(&m.transpose() * m) - &Matrix::identity(n)).frobenius_norm();
    if residual > ORTHOGONALITY_TOL {
        return Err(LogError::NotSpecialOrthogonal(format!("‖MᵀM − I‖_F = {residual:e}")));
    }
    if m.determinant() <= 0.0 {
        return Err(LogError::NotSpecialOrthogonal("determinant is −1".into()));
    }
    Ok(())
}

/// Spectrum of a special orthogonal matrix.
pub fn classify_ortho_spectrum(m: &Matrix, eps: f64) -> Result<OrthoSpectralData> {
    check_eps(eps)?;
    if m.order() == 0 {
        return Err(LogError::InvalidInput("matrix of order 0".into()));
    }
    check_special_orthogonal(m)?;
    let clusters = cluster_eigenvalues(&schur_eigenvalues(m)?, eps)?;
    let mut h = 0;
    let mut k = 0;
    for c in clusters.iter().filter(|c| c.value.im == 0.0) {
        if c.value.re > 0.0 {
            h += c.mult;
        } else if c.mult % 2 == 1 {
            return Err(LogError::NotSpecialOrthogonal("eigenvalue −1 has odd multiplicity".into()));
        } else {
            k += c.mult / 2;
        }
    }
    let mut rotations: Vec<RotationEigenvalue> = upper_half_clusters(&clusters, eps)?
        .iter()
        .map(|c| RotationEigenvalue { theta: c.value.arg(), m: c.mult })
        .collect();
    rotations.sort_by(|a, b| a.theta.total_cmp(&b.theta));
    OrthoSpectralData::new(h, rotations, k)
}

pub fn ortho_canonical(m: &Matrix, eps: f64) -> Result<OrthoCanonical> {
    let spectral = classify_ortho_spectrum(m, eps)?;
    let n = m.order();
    let dm = m.as_dmatrix();
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(n);
    if spectral.h > 0 {
        push_real_columns(&mut cols, &orthonormal_eigenbasis(dm, Complex64::new(1.0, 0.0), spectral.h));
    }
    for r in &spectral.rotations {
        push_pair_columns(&mut cols, &orthonormal_eigenbasis(dm, Complex64::from_polar(1.0, -r.theta), r.m), SQRT_2);
    }
    if spectral.k > 0 {
        push_real_columns(&mut cols, &orthonormal_eigenbasis(dm, Complex64::new(-1.0, 0.0), 2 * spectral.k));
    }
    let mut q = from_columns(n, &cols).into_inner();
    // Newton–Schulz polish toward the nearest orthogonal matrix.
    let eye = DMatrix::<f64>::identity(n, n);
    for _ in 0..2 {
        let gram = q.transpose() * &q;
        if (&gram - &eye).norm() < 1e-15 {
            break;
        }
        q = &q * (&eye * 3.0 - gram) * 0.5;
    }
    let q = Matrix::from_dmatrix(q);
    let j = spectral.canonical_form();
    let orth = (&(&q.transpose() * &q) - &Matrix::identity(n)).frobenius_norm();
    let residual = (m - &(&(&q * &j) * &q.transpose())).frobenius_norm();
    if orth > 1e-12 || residual > ORTHOGONALITY_TOL {
        return Err(LogError::IllConditioned(format!(
            "orthogonal canonical form residuals: orthogonality {orth:e}, reconstruction {residual:e}"
        )));
    }
    Ok(OrthoCanonical { j, q, spectral })
}
