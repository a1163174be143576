//! Closed-form topology of logarithm branches.
//!
//! All quantities here are integers computed exactly from multiplicities.

use serde::{Deserialize, Serialize};

use crate::branches::{check_admissible, check_skew_admissible, MultiIndexSet, SkewMultiIndexSet};
use crate::error::{LogError, Result};
use crate::spectra::{OrthoSpectralData, SpectralData};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum HomSpaceKind {
    GammaHat,
    ThetaHat,
    Gamma,
    Theta,
}

impl HomSpaceKind {
    pub fn is_gamma(self) -> bool {
        matches!(self, HomSpaceKind::GammaHat | HomSpaceKind::Gamma)
    }
}

/// One of the homogeneous spaces `Γ̂_{(ζ;ν)}`, `Θ̂_{(ν)}`, `Γ_{(ζ;ν)}`, `Θ_{(ν)}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomSpace {
    pub kind: HomSpaceKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zeta: Option<usize>,
    pub nu: Vec<usize>,
    pub nu_total: usize,
}

impl HomSpace {
    pub fn new(kind: HomSpaceKind, zeta: usize, nu: Vec<usize>) -> Result<Self> {
        if nu.contains(&0) {
            return Err(LogError::InvalidInput("ν entries must be ≥ 1".into()));
        }
        if !kind.is_gamma() && nu.is_empty() {
            return Err(LogError::InvalidInput("Θ spaces need at least one block".into()));
        }
        if !kind.is_gamma() && zeta != 0 {
            return Err(LogError::InvalidInput("Θ spaces carry no ζ parameter".into()));
        }
        let nu_total = nu.iter().sum();
        Ok(HomSpace { kind, zeta: kind.is_gamma().then_some(zeta), nu, nu_total })
    }

    pub fn gamma_hat(zeta: usize, nu: &[usize]) -> Result<Self> {
        HomSpace::new(HomSpaceKind::GammaHat, zeta, nu.to_vec())
    }

    pub fn theta_hat(nu: &[usize]) -> Result<Self> {
        HomSpace::new(HomSpaceKind::ThetaHat, 0, nu.to_vec())
    }

    pub fn gamma(zeta: usize, nu: &[usize]) -> Result<Self> {
        HomSpace::new(HomSpaceKind::Gamma, zeta, nu.to_vec())
    }

    pub fn theta(nu: &[usize]) -> Result<Self> {
        HomSpace::new(HomSpaceKind::Theta, 0, nu.to_vec())
    }

    pub fn s(&self) -> usize {
        self.nu.len()
    }

    fn zeta_value(&self) -> usize {
        self.zeta.unwrap_or(0)
    }

    /// Number of connected components: `Γ` kinds with `ζ = 0` have two.
    pub fn components(&self) -> u64 {
        if self.kind.is_gamma() && self.zeta_value() == 0 && self.s() > 0 {
            2
        } else {
            1
        }
    }
}

fn delta(a: usize, b: usize) -> i64 {
    i64::from(a == b)
}

pub fn homspace_dim(hs: &HomSpace) -> u64 {
    if hs.kind.is_gamma() && hs.s() == 0 {
        return 0;
    }
    let nu = hs.nu_total as u64;
    let zeta = hs.zeta_value() as u64;
    let sq: u64 = hs.nu.iter().map(|&x| (x * x) as u64).sum();
    match hs.kind {
        HomSpaceKind::GammaHat => 4 * nu * (nu + zeta) - 2 * sq,
        HomSpaceKind::ThetaHat => 2 * nu * nu - 2 * sq,
        HomSpaceKind::Gamma => nu * (2 * nu + 2 * zeta - 1) - sq,
        HomSpaceKind::Theta => nu * nu - sq,
    }
}

/// Rank of the free abelian group `π₂` of a component.
pub fn homspace_pi2_rank(hs: &HomSpace) -> Result<u64> {
    let s = hs.s();
    let rank = if hs.kind.is_gamma() {
        let zeta = hs.zeta_value();
        if zeta + s == 0 {
            return Err(LogError::InvalidInput("Γ spaces need ζ + s ≥ 1".into()));
        }
        let first = hs.nu.first().copied().unwrap_or(0);
        s as i64 - delta(zeta, 0) * delta(s, 1) * delta(first, 1) + delta(zeta, 2) * (1 - delta(s, 0))
    } else {
        if s == 0 {
            return Err(LogError::InvalidInput("Θ spaces need s ≥ 1".into()));
        }
        s as i64 - 1
    };
    Ok(rank as u64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CardinalityClass {
    Singleton,
    CountablyInfinite,
    Uncountable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopologyReport {
    pub factors: Vec<HomSpace>,
    pub dimension: u64,
    pub components: u64,
    pub simply_connected: bool,
    pub pi2_rank: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pi_alpha: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cardinality_class: Option<CardinalityClass>,
}

impl TopologyReport {
    fn from_factors(factors: Vec<HomSpace>, components: u64, pi2_rank: u64) -> Self {
        let dimension = factors.iter().map(homspace_dim).sum();
        TopologyReport {
            factors,
            dimension,
            components,
            simply_connected: true,
            pi2_rank,
            pi_alpha: None,
            cardinality_class: None,
        }
    }

    fn singleton() -> Self {
        TopologyReport::from_factors(Vec::new(), 1, 0)
    }
}

fn invalid(spec_kind: &str) -> LogError {
    LogError::InvalidBranch(format!("branch is not admissible for this {spec_kind} spectrum"))
}

pub fn branch_topology(spec: &SpectralData, b: &MultiIndexSet) -> Result<TopologyReport> {
    if !check_admissible(spec, b) {
        return Err(invalid("semi-simple"));
    }
    let mut factors = Vec::new();
    for i in b.set_i() {
        factors.push(HomSpace::gamma_hat(b.g(i), &b.u[i][1..])?);
    }
    for (_, mu) in b.nonreal_blocks() {
        factors.push(HomSpace::theta_hat(mu)?);
    }
    for v in &b.v {
        factors.push(HomSpace::gamma_hat(0, v)?);
    }

    let sum_b: usize = (0..b.eta.len()).map(|i| b.b(i)).sum();
    let sum_d: usize = b.nonreal_blocks().map(|(tau, _)| tau.len()).sum();
    let sum_c: usize = (0..b.sigma.len()).map(|j| b.c(j)).sum();
    let rank = sum_b as i64 - b.set_k().len() as i64 + b.set_j_hat().len() as i64 + sum_d as i64 - spec.a as i64
        + sum_c as i64
        - b.set_l().len() as i64;

    let components = 1u64 << (b.set_j().len() + spec.q());
    let mut report = TopologyReport::from_factors(factors, components, rank as u64);

    let simple = b.u.iter().all(|u| u[1..].iter().all(|&x| x == 1))
        && b.nonreal_blocks().all(|(_, mu)| mu.iter().all(|&x| x == 1))
        && b.v.iter().flatten().all(|&x| x == 1);
    if simple && (0..b.u.len()).all(|i| b.g(i) <= 2) {
        let mut labels: Vec<String> = spec.positive.iter().map(|e| format!("SO({})", e.h)).collect();
        labels.extend(spec.nonreal_eigenvalues().iter().map(|t| format!("U({})", t.m)));
        labels.extend(spec.negative.iter().map(|e| format!("SO({})", 2 * e.k)));
        report.pi_alpha = Some(labels);
    }
    report.cardinality_class = Some(log_set_cardinality_class(spec));
    Ok(report)
}

/// The π₂ rank in the closed form valid when every non-real eigenvalue of
/// the logarithms on the branch is simple: `½(n − Σg) − |K| + |Ĵ| − A − |L|`.
/// Returns `None` outside that case.
pub fn simple_nonreal_pi2_rank(spec: &SpectralData, b: &MultiIndexSet) -> Option<u64> {
    let rotation_mults = b.u.iter().flat_map(|u| &u[1..]).chain(b.mu.iter().flatten().flatten()).chain(b.v.iter().flatten());
    if rotation_mults.into_iter().any(|&m| m != 1) {
        return None;
    }
    let sum_g: usize = (0..b.u.len()).map(|i| b.g(i)).sum();
    let rank = ((spec.n - sum_g) / 2) as i64 - b.set_k().len() as i64 + b.set_j_hat().len() as i64
        - spec.a as i64
        - b.set_l().len() as i64;
    Some(rank as u64)
}

/// Component count of a skew branch from the case analysis on whether `1`
/// and `−1` are eigenvalues of `M` and whether `0` is an eigenvalue of the
/// logarithm.
pub fn skew_components_by_cases(spec: &OrthoSpectralData, b: &SkewMultiIndexSet) -> u64 {
    let plus_one = spec.h >= 1;
    let minus_one = spec.k >= 1;
    let zero = b.g() >= 1;
    if (!plus_one && !minus_one) || (!minus_one && zero) {
        1
    } else if plus_one && minus_one && !zero {
        4
    } else {
        2
    }
}

pub fn skew_branch_topology(spec: &OrthoSpectralData, b: &SkewMultiIndexSet) -> Result<TopologyReport> {
    if !check_skew_admissible(spec, b) {
        return Err(invalid("special orthogonal"));
    }
    let mut factors = Vec::new();
    if spec.h >= 1 {
        factors.push(HomSpace::gamma(b.g(), &b.u[1..])?);
    }
    for mu in &b.mu {
        factors.push(HomSpace::theta(mu)?);
    }
    if spec.k >= 1 {
        factors.push(HomSpace::gamma(0, &b.v)?);
    }

    let (g, nb, c) = (b.g(), b.b(), b.c());
    let u1 = b.u.get(1).copied().unwrap_or(0);
    let v1 = b.v.first().copied().unwrap_or(0);
    let sum_d: usize = b.tau.iter().map(Vec::len).sum();
    let rank = nb as i64 - delta(g, 0) * delta(nb, 1) * delta(u1, 1) + delta(g, 2) * (1 - delta(nb, 0)) + sum_d as i64
        - spec.r() as i64
        + c as i64
        - delta(c, 1) * delta(v1, 1);

    let components = skew_components_by_cases(spec, b);
    let mut report = TopologyReport::from_factors(factors, components, rank as u64);

    let simple = b.u[1..].iter().all(|&x| x == 1) && b.mu.iter().flatten().all(|&x| x == 1) && b.v.iter().all(|&x| x == 1);
    if simple && g <= 2 {
        let mut labels = Vec::new();
        if spec.h >= 1 {
            labels.push(format!("SO({})", spec.h));
        }
        labels.extend(spec.rotations.iter().map(|r| format!("U({})", r.m)));
        if spec.k >= 1 {
            labels.push(format!("SO({})", 2 * spec.k));
        }
        report.pi_alpha = Some(labels);
    }
    report.cardinality_class = skew_log_set_cardinality_class(spec).ok();
    Ok(report)
}

/// Topology of the set of generalized principal logarithms.
pub fn principal_topology(spec: &SpectralData) -> TopologyReport {
    let mut report = if spec.q() == 0 {
        TopologyReport::singleton()
    } else {
        let factors: Vec<HomSpace> = spec
            .negative
            .iter()
            .map(|e| HomSpace::gamma_hat(0, &[e.k]).expect("k ≥ 1"))
            .collect();
        let rank = spec.negative.iter().filter(|e| e.k >= 2).count() as u64;
        TopologyReport::from_factors(factors, 1 << spec.q(), rank)
    };
    report.cardinality_class = Some(log_set_cardinality_class(spec));
    report
}

/// Topology of the set of principal skew-symmetric logarithms.
pub fn principal_skew_topology(spec: &OrthoSpectralData) -> TopologyReport {
    let mut report = if spec.k == 0 {
        TopologyReport::singleton()
    } else {
        let factor = HomSpace::gamma(0, &[spec.k]).expect("k ≥ 1");
        TopologyReport::from_factors(vec![factor], 2, u64::from(spec.k >= 2))
    };
    report.cardinality_class = skew_log_set_cardinality_class(spec).ok();
    report
}

pub fn log_set_cardinality_class(spec: &SpectralData) -> CardinalityClass {
    let all_simple = spec.positive.iter().all(|e| e.h == 1) && spec.nonreal_eigenvalues().iter().all(|t| t.m == 1);
    if spec.all_positive_simple() {
        CardinalityClass::Singleton
    } else if all_simple && spec.negative.is_empty() {
        CardinalityClass::CountablyInfinite
    } else {
        CardinalityClass::Uncountable
    }
}

/// Skew-symmetric logarithms of a special orthogonal matrix are never
/// finite in number.
pub fn skew_log_set_cardinality_class(spec: &OrthoSpectralData) -> Result<CardinalityClass> {
    if spec.n < 2 {
        return Err(LogError::InvalidInput("skew cardinality needs n ≥ 2".into()));
    }
    if spec.rotations.iter().all(|r| r.m == 1) && spec.h <= 2 && 2 * spec.k <= 2 {
        Ok(CardinalityClass::CountablyInfinite)
    } else {
        Ok(CardinalityClass::Uncountable)
    }
}

/// Dimensions of the centralizers of the Jordan form and of the canonical
/// logarithm, as `(big, small)`.
pub fn centralizer_dims(spec: &SpectralData, b: &MultiIndexSet) -> Result<(u64, u64)> {
    if !check_admissible(spec, b) {
        return Err(invalid("semi-simple"));
    }
    let sq = |x: usize| (x * x) as u64;
    let big = spec.positive.iter().map(|e| sq(e.h)).sum::<u64>()
        + 2 * spec.nonreal_eigenvalues().iter().map(|t| sq(t.m)).sum::<u64>()
        + spec.negative.iter().map(|e| sq(2 * e.k)).sum::<u64>();
    let small = b.u.iter().map(|u| sq(u[0]) + 2 * u[1..].iter().map(|&x| sq(x)).sum::<u64>()).sum::<u64>()
        + 2 * b.nonreal_blocks().flat_map(|(_, mu)| mu).map(|&x| sq(x)).sum::<u64>()
        + 2 * b.v.iter().flatten().map(|&x| sq(x)).sum::<u64>();
    Ok((big, small))
}
