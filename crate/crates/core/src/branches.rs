//! Admissible multi-index sets ("branches") and their canonical logarithms.
//!
//! A branch fixes the winding indices and multiplicity splits of every
//! eigenvalue, which determines the eigenvalue multiset of a logarithm.
//! Integer indices are unbounded, so enumeration is capped by `max_index`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{LogError, Result};
use crate::numkernel::{scaled_rotation_generator, Matrix};
use crate::spectra::{OrthoSpectralData, SpectralData};

const TWO_PI: f64 = 2.0 * PI;

/// An admissible multi-index set for a general semi-simple spectrum.
///
/// `eta[i]` is `[0, η₁, …, η_b]` and `u[i]` is `[g, u₁, …, u_b]` for the
/// `i`-th positive eigenvalue. `tau` and `mu` are grouped by angle then by
/// modulus, mirroring [`SpectralData::nonreal`]. `sigma[j]` and `v[j]` belong
/// to the `j`-th negative eigenvalue.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MultiIndexSet {
    pub eta: Vec<Vec<i64>>,
    pub u: Vec<Vec<usize>>,
    pub tau: Vec<Vec<Vec<i64>>>,
    pub mu: Vec<Vec<Vec<usize>>>,
    pub sigma: Vec<Vec<i64>>,
    pub v: Vec<Vec<usize>>,
}

impl MultiIndexSet {
    pub fn b(&self, i: usize) -> usize {
        self.eta[i].len() - 1
    }

    pub fn g(&self, i: usize) -> usize {
        self.u[i][0]
    }

    pub fn c(&self, j: usize) -> usize {
        self.sigma[j].len()
    }

    /// Flattened `(l, t)` view of the non-real indices as `(τ, μ)` pairs.
    pub fn nonreal_blocks(&self) -> impl Iterator<Item = (&[i64], &[usize])> {
        self.tau.iter().zip(&self.mu).flat_map(|(ts, ms)| ts.iter().zip(ms).map(|(t, m)| (t.as_slice(), m.as_slice())))
    }

    /// `I`: positive eigenvalues carrying at least one rotation block.
    pub fn set_i(&self) -> Vec<usize> {
        (0..self.eta.len()).filter(|&i| self.b(i) >= 1).collect()
    }

    /// `J`: positive eigenvalues without a scalar part.
    pub fn set_j(&self) -> Vec<usize> {
        (0..self.u.len()).filter(|&i| self.g(i) == 0).collect()
    }

    /// `Ĵ`: members of `I` whose scalar part has dimension 2.
    pub fn set_j_hat(&self) -> Vec<usize> {
        (0..self.u.len()).filter(|&i| self.b(i) >= 1 && self.g(i) == 2).collect()
    }

    /// `K`: members of `I` with `g = 0` and a single rotation block of multiplicity 1.
    pub fn set_k(&self) -> Vec<usize> {
        (0..self.u.len())
            .filter(|&i| self.g(i) == 0 && self.b(i) == 1 && self.u[i][1] == 1)
            .collect()
    }

    /// `L`: negative eigenvalues with a single block of multiplicity 1.
    pub fn set_l(&self) -> Vec<usize> {
        (0..self.sigma.len())
            .filter(|&j| self.c(j) == 1 && self.v[j][0] == 1)
            .collect()
    }

    /// Largest absolute value among the integer indices.
    pub fn max_index(&self) -> u64 {
        let eta = self.eta.iter().flatten().copied();
        let tau = self.tau.iter().flatten().flatten().copied();
        let sigma = self.sigma.iter().flatten().copied();
        eta.chain(tau).chain(sigma).map(i64::unsigned_abs).max().unwrap_or(0)
    }

    /// Every integer index is zero.
    pub fn is_zero_index(&self) -> bool {
        self.max_index() == 0
    }

    fn sort_key(&self) -> SortKey {
        let ds = self.tau.iter().flatten().map(Vec::len).collect();
        (
            self.max_index(),
            self.eta.iter().map(|e| e.len() - 1).collect(),
            self.eta.clone(),
            self.u.clone(),
            ds,
            self.tau.clone(),
            self.mu.clone(),
            self.sigma.iter().map(Vec::len).collect(),
            self.sigma.clone(),
            self.v.clone(),
        )
    }
}

type SortKey = (
    u64,
    Vec<usize>,
    Vec<Vec<i64>>,
    Vec<Vec<usize>>,
    Vec<usize>,
    Vec<Vec<Vec<i64>>>,
    Vec<Vec<Vec<usize>>>,
    Vec<usize>,
    Vec<Vec<i64>>,
    Vec<Vec<usize>>,
);

/// Multi-index set for a skew-symmetric logarithm of a special orthogonal
/// matrix. `eta = [0, η₁, …]`, `u = [g, u₁, …]`; `tau[l]`/`mu[l]` belong to
/// the `l`-th rotation angle; `sigma`/`v` are empty when `−1` is not an
/// eigenvalue.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SkewMultiIndexSet {
    pub eta: Vec<i64>,
    pub u: Vec<usize>,
    pub tau: Vec<Vec<i64>>,
    pub mu: Vec<Vec<usize>>,
    pub sigma: Vec<i64>,
    pub v: Vec<usize>,
}

impl SkewMultiIndexSet {
    pub fn b(&self) -> usize {
        self.eta.len() - 1
    }

    pub fn g(&self) -> usize {
        self.u[0]
    }

    pub fn c(&self) -> usize {
        self.sigma.len()
    }

    pub fn max_index(&self) -> u64 {
        self.eta
            .iter()
            .chain(self.tau.iter().flatten())
            .chain(&self.sigma)
            .map(|x| x.unsigned_abs())
            .max()
            .unwrap_or(0)
    }

    /// Re-expresses the branch against [`OrthoSpectralData::as_spectral`].
    pub fn to_general(&self, spec: &OrthoSpectralData) -> MultiIndexSet {
        let (eta, u) = if spec.h > 0 { (vec![self.eta.clone()], vec![self.u.clone()]) } else { (vec![], vec![]) };
        let (sigma, v) = if spec.k > 0 { (vec![self.sigma.clone()], vec![self.v.clone()]) } else { (vec![], vec![]) };
        MultiIndexSet {
            eta,
            u,
            tau: self.tau.iter().map(|t| vec![t.clone()]).collect(),
            mu: self.mu.iter().map(|m| vec![m.clone()]).collect(),
            sigma,
            v,
        }
    }

    fn from_general(b: &MultiIndexSet) -> SkewMultiIndexSet {
        SkewMultiIndexSet {
            eta: b.eta.first().cloned().unwrap_or_else(|| vec![0]),
            u: b.u.first().cloned().unwrap_or_else(|| vec![0]),
            tau: b.tau.iter().map(|t| t[0].clone()).collect(),
            mu: b.mu.iter().map(|m| m[0].clone()).collect(),
            sigma: b.sigma.first().cloned().unwrap_or_default(),
            v: b.v.first().cloned().unwrap_or_default(),
        }
    }
}

/// Result of a capped enumeration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Enumeration<T> {
    pub branches: Vec<T>,
    /// More admissible branches exist under the index cap than were returned.
    pub truncated: bool,
}

fn strictly_increasing(xs: &[i64]) -> bool {
    xs.windows(2).all(|w| w[0] < w[1])
}

fn composition_ok(parts: &[usize], total: usize) -> bool {
    !parts.is_empty() && parts.iter().all(|&p| p >= 1) && parts.iter().sum::<usize>() == total
}

pub fn check_admissible(spec: &SpectralData, b: &MultiIndexSet) -> bool {
    admissibility_error(spec, b).is_none()
}

fn admissibility_error(spec: &SpectralData, b: &MultiIndexSet) -> Option<String> {
    if b.eta.len() != spec.p() || b.u.len() != spec.p() {
        return Some(format!("expected {} positive-eigenvalue entries", spec.p()));
    }
    for (i, e) in spec.positive.iter().enumerate() {
        let (eta, u) = (&b.eta[i], &b.u[i]);
        if eta.first() != Some(&0) || eta.len() != u.len() || !strictly_increasing(eta) {
            return Some(format!("eta[{i}] must be 0 followed by increasing positive integers, one per block"));
        }
        if u[1..].contains(&0) {
            return Some(format!("u[{i}] block multiplicities must be ≥ 1"));
        }
        let rotation = 2 * u[1..].iter().sum::<usize>();
        if rotation > e.h || u[0] != e.h - rotation {
            return Some(format!("u[{i}] does not split the multiplicity {}", e.h));
        }
    }
    if b.tau.len() != spec.r() || b.mu.len() != spec.r() {
        return Some(format!("expected {} angle groups", spec.r()));
    }
    for (l, group) in spec.nonreal.iter().enumerate() {
        if b.tau[l].len() != group.members.len() || b.mu[l].len() != group.members.len() {
            return Some(format!("angle group {l} expects {} members", group.members.len()));
        }
        for (t, member) in group.members.iter().enumerate() {
            let (tau, mu) = (&b.tau[l][t], &b.mu[l][t]);
            if tau.is_empty() || tau.len() != mu.len() || !strictly_increasing(tau) {
                return Some(format!("tau[{l}][{t}] must be a non-empty increasing list matching mu"));
            }
            if !composition_ok(mu, member.m) {
                return Some(format!("mu[{l}][{t}] must split the multiplicity {}", member.m));
            }
        }
    }
    if b.sigma.len() != spec.q() || b.v.len() != spec.q() {
        return Some(format!("expected {} negative-eigenvalue entries", spec.q()));
    }
    for (j, e) in spec.negative.iter().enumerate() {
        let (sigma, v) = (&b.sigma[j], &b.v[j]);
        if sigma.is_empty() || sigma.len() != v.len() || !strictly_increasing(sigma) || sigma[0] < 0 {
            return Some(format!("sigma[{j}] must be a non-empty increasing list of non-negative integers"));
        }
        if !composition_ok(v, e.k) {
            return Some(format!("v[{j}] must split k = {}", e.k));
        }
    }
    None
}

pub fn check_skew_admissible(spec: &OrthoSpectralData, b: &SkewMultiIndexSet) -> bool {
    skew_admissibility_error(spec, b).is_none()
}

fn skew_admissibility_error(spec: &OrthoSpectralData, b: &SkewMultiIndexSet) -> Option<String> {
    if spec.h == 0 && (b.eta != [0] || b.u != [0]) {
        return Some("eta and u must be [0] when 1 is not an eigenvalue".into());
    }
    if spec.k == 0 && (!b.sigma.is_empty() || !b.v.is_empty()) {
        return Some("sigma and v must be empty when −1 is not an eigenvalue".into());
    }
    if b.tau.len() != spec.r() || b.mu.len() != spec.r() {
        return Some(format!("expected {} rotation angles", spec.r()));
    }
    admissibility_error(&spec.as_spectral(), &b.to_general(spec))
}

/// Strictly increasing `size`-subsets of `pool` in lexicographic order.
fn increasing_subsets(pool: &[i64], size: usize) -> Vec<Vec<i64>> {
    fn rec(pool: &[i64], size: usize, start: usize, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for idx in start..pool.len() {
            if pool.len() - idx < size - cur.len() {
                break;
            }
            cur.push(pool[idx]);
            rec(pool, size, idx + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(pool, size, 0, &mut Vec::new(), &mut out);
    out
}

/// Compositions of `total` into `parts` positive parts, lexicographic.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    fn rec(left: usize, parts: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 0 {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for first in 1..=left.saturating_sub(parts - 1) {
            cur.push(first);
            rec(left - first, parts - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if parts > 0 && parts <= total {
        rec(total, parts, &mut Vec::new(), &mut out);
    }
    out
}

/// Local choices for one positive eigenvalue: `(eta, u)` pairs.
fn positive_choices(h: usize, cap: i64) -> Vec<(Vec<i64>, Vec<usize>)> {
    let pool: Vec<i64> = (1..=cap).collect();
    let mut out = Vec::new();
    for b in 0..=(h / 2) {
        for etas in increasing_subsets(&pool, b) {
            for total in b..=(h / 2) {
                for parts in compositions_or_empty(total, b) {
                    let mut eta = vec![0];
                    eta.extend(&etas);
                    let mut u = vec![h - 2 * total];
                    u.extend(parts);
                    out.push((eta, u));
                }
            }
        }
    }
    out
}

fn compositions_or_empty(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        if total == 0 {
            vec![vec![]]
        } else {
            vec![]
        }
    } else {
        compositions(total, parts)
    }
}

/// Local choices `(indices, multiplicities)` for a block split of `m`
/// with indices drawn from `pool`.
fn split_choices(m: usize, pool: &[i64]) -> Vec<(Vec<i64>, Vec<usize>)> {
    let mut out = Vec::new();
    for d in 1..=m {
        for idx in increasing_subsets(pool, d) {
            for parts in compositions(m, d) {
                out.push((idx.clone(), parts));
            }
        }
    }
    out
}

fn local_max(xs: &[i64]) -> u64 {
    xs.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0)
}

/// Every admissible branch with integer indices bounded by `max_index` in
/// absolute value, ordered by largest index and then field by field,
/// truncated to `max_count`.
pub fn enumerate_branches(spec: &SpectralData, max_index: u32, max_count: usize) -> Result<Enumeration<MultiIndexSet>> {
    if max_count == 0 {
        return Err(LogError::InvalidInput("max_count must be ≥ 1".into()));
    }
    let cap = i64::from(max_index);
    let symmetric: Vec<i64> = (-cap..=cap).collect();
    let nonneg: Vec<i64> = (0..=cap).collect();

    let positive: Vec<Vec<(Vec<i64>, Vec<usize>)>> =
        spec.positive.iter().map(|e| positive_choices(e.h, cap)).collect();
    let nonreal: Vec<Vec<(Vec<i64>, Vec<usize>)>> =
        spec.nonreal_eigenvalues().iter().map(|t| split_choices(t.m, &symmetric)).collect();
    let negative: Vec<Vec<(Vec<i64>, Vec<usize>)>> =
        spec.negative.iter().map(|e| split_choices(e.k, &nonneg)).collect();

    let total = positive
        .iter()
        .chain(&nonreal)
        .chain(&negative)
        .fold(1usize, |acc, choices| acc.saturating_mul(choices.len()));
    let truncated = total > max_count;

    let slots: Vec<Vec<&(Vec<i64>, Vec<usize>)>> =
        positive.iter().chain(&nonreal).chain(&negative).map(|c| c.iter().collect()).collect();
    let group_sizes: Vec<usize> = spec.nonreal.iter().map(|g| g.members.len()).collect();

    let mut branches = Vec::new();
    for level in 0..=max_index as u64 {
        let mut at_level: Vec<MultiIndexSet> = Vec::new();
        let mut assignment: Vec<usize> = Vec::with_capacity(slots.len());
        product_at_level(&slots, level, false, &mut assignment, &mut |choice| {
            at_level.push(assemble(spec, &group_sizes, &slots, choice));
        });
        at_level.sort_by_cached_key(MultiIndexSet::sort_key);
        for b in at_level {
            if branches.len() == max_count {
                break;
            }
            branches.push(b);
        }
        if branches.len() == max_count {
            break;
        }
    }
    Ok(Enumeration { branches, truncated })
}

/// Visits every assignment of local choices whose largest index is
/// exactly `level`.
fn product_at_level(
    slots: &[Vec<&(Vec<i64>, Vec<usize>)>],
    level: u64,
    reached: bool,
    assignment: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize]),
) {
    let depth = assignment.len();
    if depth == slots.len() {
        if reached || level == 0 {
            visit(assignment);
        }
        return;
    }
    for (idx, choice) in slots[depth].iter().enumerate() {
        let m = local_max(&choice.0);
        if m > level {
            continue;
        }
        assignment.push(idx);
        product_at_level(slots, level, reached || m == level, assignment, visit);
        assignment.pop();
    }
}

fn assemble(
    spec: &SpectralData,
    group_sizes: &[usize],
    slots: &[Vec<&(Vec<i64>, Vec<usize>)>],
    choice: &[usize],
) -> MultiIndexSet {
    let pick = |slot: usize| slots[slot][choice[slot]];
    let p = spec.p();
    let a = spec.a;
    let mut eta = Vec::with_capacity(p);
    let mut u = Vec::with_capacity(p);
    for s in 0..p {
        let (e, m) = pick(s);
        eta.push(e.clone());
        u.push(m.clone());
    }
    let mut tau = Vec::with_capacity(group_sizes.len());
    let mut mu = Vec::with_capacity(group_sizes.len());
    let mut s = p;
    for &size in group_sizes {
        let (mut ts, mut ms) = (Vec::with_capacity(size), Vec::with_capacity(size));
        for _ in 0..size {
            let (t, m) = pick(s);
            ts.push(t.clone());
            ms.push(m.clone());
            s += 1;
        }
        tau.push(ts);
        mu.push(ms);
    }
    let mut sigma = Vec::with_capacity(spec.q());
    let mut v = Vec::with_capacity(spec.q());
    for s in p + a..slots.len() {
        let (sg, m) = pick(s);
        sigma.push(sg.clone());
        v.push(m.clone());
    }
    MultiIndexSet { eta, u, tau, mu, sigma, v }
}

/// `αI_{2u} + δE^{⊕u}`.
fn rotation_blocks(alpha: f64, delta: f64, count: usize) -> Matrix {
    Matrix::repeat_block(&scaled_rotation_generator(alpha, delta), count)
}

/// Block-diagonal canonical logarithm of the branch, with blocks in the
/// same order as [`SpectralData::jordan_form`].
pub fn canonical_log(spec: &SpectralData, b: &MultiIndexSet) -> Result<Matrix> {
    if let Some(msg) = admissibility_error(spec, b) {
        return Err(LogError::InvalidBranch(msg));
    }
    let mut blocks = Vec::new();
    for (i, e) in spec.positive.iter().enumerate() {
        let ln = e.lambda.ln();
        blocks.push(Matrix::identity(b.g(i)).scale(ln));
        for (&eta, &u) in b.eta[i][1..].iter().zip(&b.u[i][1..]) {
            blocks.push(rotation_blocks(ln, TWO_PI * eta as f64, u));
        }
    }
    for (t, (taus, mus)) in spec.nonreal_eigenvalues().iter().zip(b.nonreal_blocks()) {
        let ln = t.rho.ln();
        for (&tau, &mu) in taus.iter().zip(mus) {
            blocks.push(rotation_blocks(ln, t.theta + TWO_PI * tau as f64, mu));
        }
    }
    for (j, e) in spec.negative.iter().enumerate() {
        let ln = e.w.ln();
        for (&sigma, &v) in b.sigma[j].iter().zip(&b.v[j]) {
            blocks.push(rotation_blocks(ln, PI + TWO_PI * sigma as f64, v));
        }
    }
    Ok(Matrix::direct_sum(&blocks))
}

pub fn enumerate_skew_branches(
    spec: &OrthoSpectralData,
    max_index: u32,
    max_count: usize,
) -> Result<Enumeration<SkewMultiIndexSet>> {
    let general = enumerate_branches(&spec.as_spectral(), max_index, max_count)?;
    Ok(Enumeration {
        branches: general.branches.iter().map(SkewMultiIndexSet::from_general).collect(),
        truncated: general.truncated,
    })
}

/// Exactly antisymmetric canonical skew logarithm of the branch.
pub fn canonical_skew_log(spec: &OrthoSpectralData, b: &SkewMultiIndexSet) -> Result<Matrix> {
    if let Some(msg) = skew_admissibility_error(spec, b) {
        return Err(LogError::InvalidBranch(msg));
    }
    let mut blocks = vec![Matrix::zeros(b.g())];
    for (&eta, &u) in b.eta[1..].iter().zip(&b.u[1..]) {
        blocks.push(rotation_blocks(0.0, TWO_PI * eta as f64, u));
    }
    for ((rot, taus), mus) in spec.rotations.iter().zip(&b.tau).zip(&b.mu) {
        for (&tau, &mu) in taus.iter().zip(mus) {
            blocks.push(rotation_blocks(0.0, rot.theta + TWO_PI * tau as f64, mu));
        }
    }
    for (&sigma, &v) in b.sigma.iter().zip(&b.v) {
        blocks.push(rotation_blocks(0.0, PI + TWO_PI * sigma as f64, v));
    }
    Ok(Matrix::direct_sum(&blocks))
}

/// The branch of the generalized principal logarithm: all indices zero,
/// one block per eigenvalue.
pub fn principal_branch(spec: &SpectralData) -> MultiIndexSet {
    MultiIndexSet {
        eta: vec![vec![0]; spec.p()],
        u: spec.positive.iter().map(|e| vec![e.h]).collect(),
        tau: spec.nonreal.iter().map(|g| vec![vec![0]; g.members.len()]).collect(),
        mu: spec.nonreal.iter().map(|g| g.members.iter().map(|t| vec![t.m]).collect()).collect(),
        sigma: vec![vec![0]; spec.q()],
        v: spec.negative.iter().map(|e| vec![e.k]).collect(),
    }
}

pub fn principal_skew_branch(spec: &OrthoSpectralData) -> SkewMultiIndexSet {
    SkewMultiIndexSet::from_general(&principal_branch(&spec.as_spectral()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::{exp, rotation_block, rotation_generator};

    fn diag23() -> SpectralData {
        SpectralData::from_parts(&[(2.0, 1), (3.0, 1)], &[], &[]).unwrap()
    }

    fn id2() -> SpectralData {
        SpectralData::from_parts(&[(1.0, 2)], &[], &[]).unwrap()
    }

    fn minus_id2() -> SpectralData {
        SpectralData::from_parts(&[], &[], &[(1.0, 1)]).unwrap()
    }

    fn positive_branch(eta: Vec<i64>, u: Vec<usize>) -> MultiIndexSet {
        MultiIndexSet { eta: vec![eta], u: vec![u], tau: vec![], mu: vec![], sigma: vec![], v: vec![] }
    }

    #[test]
    fn admissibility_examples() {
        let zero = principal_branch(&diag23());
        assert_eq!(zero.u, vec![vec![1], vec![1]]);
        assert!(check_admissible(&diag23(), &zero));
        assert!(check_admissible(&id2(), &positive_branch(vec![0, 1], vec![0, 1])));
        // g would be 2 − 2·2 < 0, expressed by any choice of g
        assert!(!check_admissible(&id2(), &positive_branch(vec![0, 1], vec![0, 2])));
        assert!(!check_admissible(&id2(), &positive_branch(vec![0, 1], vec![2, 1])));
    }

    #[test]
    fn negative_sigma_is_not_canonical() {
        let b = MultiIndexSet { eta: vec![], u: vec![], tau: vec![], mu: vec![], sigma: vec![vec![-1]], v: vec![vec![1]] };
        assert!(!check_admissible(&minus_id2(), &b));
    }

    #[test]
    fn enumeration_examples() {
        let e = enumerate_branches(&diag23(), 2, 200).unwrap();
        assert_eq!(e.branches.len(), 1);
        assert!(!e.truncated);

        let e = enumerate_branches(&id2(), 1, 200).unwrap();
        assert_eq!(
            e.branches,
            vec![positive_branch(vec![0], vec![2]), positive_branch(vec![0, 1], vec![0, 1])]
        );

        let e = enumerate_branches(&minus_id2(), 1, 200).unwrap();
        let sigmas: Vec<_> = e.branches.iter().map(|b| (b.sigma.clone(), b.v.clone())).collect();
        assert_eq!(sigmas, vec![(vec![vec![0]], vec![vec![1]]), (vec![vec![1]], vec![vec![1]])]);
    }

    #[test]
    fn enumeration_truncates() {
        let spec = SpectralData::from_parts(&[], &[(1.0, &[(1.0, 1)]), (2.0, &[(1.0, 1)])], &[]).unwrap();
        let full = enumerate_branches(&spec, 2, 1000).unwrap();
        assert_eq!(full.branches.len(), 25);
        assert!(!full.truncated);
        let cut = enumerate_branches(&spec, 2, 10).unwrap();
        assert!(cut.truncated);
        assert_eq!(cut.branches[..], full.branches[..10]);
        let levels: Vec<u64> = full.branches.iter().map(MultiIndexSet::max_index).collect();
        assert!(levels.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn canonical_log_examples() {
        let y = canonical_log(&diag23(), &principal_branch(&diag23())).unwrap();
        assert_eq!(y, Matrix::diagonal(&[2f64.ln(), 3f64.ln()]).unwrap());

        let y = canonical_log(&id2(), &positive_branch(vec![0, 1], vec![0, 1])).unwrap();
        assert_eq!(y, rotation_generator().scale(TWO_PI));

        let y = canonical_log(&minus_id2(), &principal_branch(&minus_id2())).unwrap();
        assert_eq!(y, rotation_generator().scale(PI));

        let bad = positive_branch(vec![0, 1], vec![0, 2]);
        assert!(matches!(canonical_log(&id2(), &bad), Err(LogError::InvalidBranch(_))));
    }

    #[test]
    fn canonical_logs_exponentiate_to_jordan_form() {
        let spec = SpectralData::from_parts(&[(0.5, 3)], &[(1.2, &[(2.0, 2)])], &[(3.0, 2)]).unwrap();
        let j = spec.jordan_form();
        let e = enumerate_branches(&spec, 2, 500).unwrap();
        assert!(!e.branches.is_empty());
        for b in &e.branches {
            let y = canonical_log(&spec, b).unwrap();
            let err = (&exp(&y).unwrap() - &j).frobenius_norm();
            assert!(err <= 1e-11 * j.frobenius_norm(), "branch {b:?} error {err:e}");
        }
    }

    #[test]
    fn skew_examples() {
        let rot = OrthoSpectralData::from_parts(0, &[(PI / 3.0, 1)], 0).unwrap();
        let e = enumerate_skew_branches(&rot, 1, 200).unwrap();
        let taus: Vec<_> = e.branches.iter().map(|b| b.tau[0].clone()).collect();
        assert_eq!(taus, vec![vec![0], vec![-1], vec![1]]);
        assert!(e.branches.iter().all(|b| b.mu == vec![vec![1]] && b.eta == [0] && b.u == [0]));

        let id = OrthoSpectralData::from_parts(2, &[], 0).unwrap();
        let e = enumerate_skew_branches(&id, 1, 200).unwrap();
        assert_eq!(e.branches.len(), 2);
        assert_eq!((e.branches[1].eta.clone(), e.branches[1].u.clone()), (vec![0, 1], vec![0, 1]));

        let neg = OrthoSpectralData::from_parts(0, &[], 1).unwrap();
        let e = enumerate_skew_branches(&neg, 0, 200).unwrap();
        assert_eq!(e.branches.len(), 1);
        assert_eq!((e.branches[0].sigma.clone(), e.branches[0].v.clone()), (vec![0], vec![1]));
    }

    #[test]
    fn canonical_skew_log_examples() {
        let id3 = OrthoSpectralData::from_parts(3, &[], 0).unwrap();
        assert_eq!(canonical_skew_log(&id3, &principal_skew_branch(&id3)).unwrap(), Matrix::zeros(3));

        let rot = OrthoSpectralData::from_parts(0, &[(PI / 3.0, 1)], 0).unwrap();
        let y = canonical_skew_log(&rot, &principal_skew_branch(&rot)).unwrap();
        assert_eq!(y, rotation_generator().scale(PI / 3.0));

        let neg4 = OrthoSpectralData::from_parts(0, &[], 2).unwrap();
        let b = SkewMultiIndexSet { eta: vec![0], u: vec![0], tau: vec![], mu: vec![], sigma: vec![0], v: vec![2] };
        let y = canonical_skew_log(&neg4, &b).unwrap();
        assert_eq!(y, Matrix::repeat_block(&rotation_generator().scale(PI), 2));
        assert_eq!(y.skewness(), 0.0);
    }

    #[test]
    fn principal_branch_examples() {
        let b = principal_branch(&minus_id2());
        assert_eq!((b.sigma, b.v), (vec![vec![0]], vec![vec![1]]));
        let rot = SpectralData::from_parts(&[], &[(PI / 3.0, &[(2.0, 1)])], &[]).unwrap();
        let b = principal_branch(&rot);
        assert_eq!((b.tau, b.mu), (vec![vec![vec![0]]], vec![vec![vec![1]]]));

        let so3 = OrthoSpectralData::from_parts(1, &[(PI / 3.0, 1)], 0).unwrap();
        let b = principal_skew_branch(&so3);
        assert_eq!((b.g(), b.tau.clone(), b.mu.clone()), (1, vec![vec![0]], vec![vec![1]]));
        let y = canonical_skew_log(&so3, &b).unwrap();
        let expected = Matrix::direct_sum([&Matrix::zeros(1), &rotation_generator().scale(PI / 3.0)]);
        assert_eq!(y, expected);
        assert!((&exp(&y).unwrap() - &so3.canonical_form()).frobenius_norm() < 1e-14);
        assert!((&so3.canonical_form() - &Matrix::direct_sum([&Matrix::identity(1), &rotation_block(PI / 3.0).unwrap()]))
            .frobenius_norm()
            == 0.0);
    }
}
