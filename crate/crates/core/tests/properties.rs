mod common;

use std::collections::{BTreeMap, HashSet};
use std::f64::consts::PI;

use logatlas::branches::{
    canonical_log, canonical_skew_log, check_admissible, enumerate_branches, enumerate_skew_branches,
    principal_branch, principal_skew_branch, MultiIndexSet,
};
use logatlas::numkernel::{commutant_kernel_dim, exp, DEFAULT_KERNEL_TOL};
use logatlas::sampler::{sample_log, verify_log};
use logatlas::spectra::{classify_spectrum, ortho_canonical, real_jordan, SpectralData, DEFAULT_EPS};
use logatlas::topology::{
    branch_topology, centralizer_dims, homspace_dim, simple_nonreal_pi2_rank, skew_branch_topology,
    skew_components_by_cases,
};
use logatlas::Matrix;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Every way to give each candidate index a multiplicity (zero allowed)
/// with the weighted total equal to `total`.
fn weighted_assignments(candidates: &[i64], total: usize, weight: usize) -> Vec<BTreeMap<i64, usize>> {
    let mut out = vec![(BTreeMap::new(), 0usize)];
    for &c in candidates {
        let mut next = Vec::new();
        for (map, used) in &out {
            let mut extra = 0;
            while used + weight * extra <= total {
                let mut m = map.clone();
                if extra > 0 {
                    m.insert(c, extra);
                }
                next.push((m, used + weight * extra));
                extra += 1;
            }
        }
        out = next;
    }
    out.into_iter().filter(|(_, used)| *used == total).map(|(m, _)| m).collect()
}

/// Brute-force branch set: assigns multiplicities to every candidate
/// index independently, then folds negative σ onto `−1 − σ`.
fn brute_force_branches(spec: &SpectralData, cap: i64) -> HashSet<MultiIndexSet> {
    let positive_cands: Vec<i64> = (1..=cap).collect();
    let symmetric: Vec<i64> = (-cap..=cap).collect();

    let mut per_slot: Vec<Vec<(Vec<i64>, Vec<usize>)>> = Vec::new();
    for e in &spec.positive {
        let mut choices = Vec::new();
        for rot in 0..=e.h / 2 {
            for map in weighted_assignments(&positive_cands, rot, 1) {
                let mut eta = vec![0];
                let mut u = vec![e.h - 2 * rot];
                for (k, v) in map {
                    eta.push(k);
                    u.push(v);
                }
                choices.push((eta, u));
            }
        }
        per_slot.push(choices);
    }
    for t in spec.nonreal_eigenvalues() {
        per_slot.push(
            weighted_assignments(&symmetric, t.m, 1)
                .into_iter()
                .map(|m| (m.keys().copied().collect(), m.values().copied().collect()))
                .collect(),
        );
    }
    for e in &spec.negative {
        let mut seen = HashSet::new();
        for map in weighted_assignments(&symmetric, e.k, 1) {
            let mut folded: BTreeMap<i64, usize> = BTreeMap::new();
            for (s, v) in map {
                let key = if s < 0 { -1 - s } else { s };
                *folded.entry(key).or_default() += v;
            }
            seen.insert((folded.keys().copied().collect::<Vec<_>>(), folded.values().copied().collect::<Vec<_>>()));
        }
        per_slot.push(seen.into_iter().collect());
    }

    let mut out = HashSet::new();
    let mut idx = vec![0usize; per_slot.len()];
    loop {
        let pick = |s: usize| &per_slot[s][idx[s]];
        let p = spec.p();
        let mut b = MultiIndexSet { eta: vec![], u: vec![], tau: vec![], mu: vec![], sigma: vec![], v: vec![] };
        for s in 0..p {
            b.eta.push(pick(s).0.clone());
            b.u.push(pick(s).1.clone());
        }
        let mut s = p;
        for g in &spec.nonreal {
            let (mut ts, mut ms) = (vec![], vec![]);
            for _ in &g.members {
                ts.push(pick(s).0.clone());
                ms.push(pick(s).1.clone());
                s += 1;
            }
            b.tau.push(ts);
            b.mu.push(ms);
        }
        for _ in &spec.negative {
            b.sigma.push(pick(s).0.clone());
            b.v.push(pick(s).1.clone());
            s += 1;
        }
        if b.sigma.iter().flatten().all(|&x| x <= cap) {
            out.insert(b);
        }
        let mut d = 0;
        loop {
            if d == per_slot.len() {
                return out;
            }
            idx[d] += 1;
            if idx[d] < per_slot[d].len() {
                break;
            }
            idx[d] = 0;
            d += 1;
        }
    }
}

#[test]
fn enumeration_matches_brute_force() {
    for case in common::corpus().into_iter().filter(|c| c.spec.n <= 6) {
        for cap in 0..=2u32 {
            let listed = enumerate_branches(&case.spec, cap, usize::MAX).unwrap();
            assert!(!listed.truncated);
            let set: HashSet<_> = listed.branches.iter().cloned().collect();
            assert_eq!(set.len(), listed.branches.len(), "{}: duplicates", case.name);
            assert_eq!(set, brute_force_branches(&case.spec, i64::from(cap)), "{} cap {cap}", case.name);
        }
    }
}

/// Eigenvalues of the canonical log read off the branch indices.
fn branch_eigenvalues(spec: &SpectralData, b: &MultiIndexSet) -> Vec<(i64, i64)> {
    let key = |z: Complex64| ((z.re * 1e9).round() as i64, (z.im * 1e9).round() as i64);
    let mut out = Vec::new();
    for (i, e) in spec.positive.iter().enumerate() {
        let ln = e.lambda.ln();
        for _ in 0..b.g(i) {
            out.push(key(Complex64::new(ln, 0.0)));
        }
        for (&eta, &u) in b.eta[i][1..].iter().zip(&b.u[i][1..]) {
            for _ in 0..u {
                out.push(key(Complex64::new(ln, 2.0 * PI * eta as f64)));
                out.push(key(Complex64::new(ln, -2.0 * PI * eta as f64)));
            }
        }
    }
    for (t, (taus, mus)) in spec.nonreal_eigenvalues().iter().zip(b.nonreal_blocks()) {
        for (&tau, &mu) in taus.iter().zip(mus) {
            let angle = t.theta + 2.0 * PI * tau as f64;
            for _ in 0..mu {
                out.push(key(Complex64::new(t.rho.ln(), angle)));
                out.push(key(Complex64::new(t.rho.ln(), -angle)));
            }
        }
    }
    for (j, e) in spec.negative.iter().enumerate() {
        for (&sigma, &v) in b.sigma[j].iter().zip(&b.v[j]) {
            let angle = PI + 2.0 * PI * sigma as f64;
            for _ in 0..v {
                out.push(key(Complex64::new(e.w.ln(), angle)));
                out.push(key(Complex64::new(e.w.ln(), -angle)));
            }
        }
    }
    out.sort_unstable();
    out
}

#[test]
fn enumerated_branches_have_distinct_eigenvalue_multisets() {
    for case in common::corpus() {
        let branches = enumerate_branches(&case.spec, 2, usize::MAX).unwrap().branches;
        let mut seen = HashSet::new();
        for b in &branches {
            assert!(seen.insert(branch_eigenvalues(&case.spec, b)), "{}: repeated multiset", case.name);
        }
    }
}

#[test]
fn canonical_log_eigenvalues_follow_the_branch() {
    for case in common::corpus().into_iter().filter(|c| c.spec.n <= 6) {
        for b in enumerate_branches(&case.spec, 1, usize::MAX).unwrap().branches {
            let y = canonical_log(&case.spec, &b).unwrap();
            let mut numeric: Vec<(i64, i64)> = y
                .as_dmatrix()
                .complex_eigenvalues()
                .iter()
                .map(|z| ((z.re * 1e9).round() as i64, (z.im * 1e9).round() as i64))
                .collect();
            numeric.sort_unstable();
            let expected = branch_eigenvalues(&case.spec, &b);
            assert_eq!(numeric.len(), expected.len());
            for (a, e) in numeric.iter().zip(&expected) {
                assert!((a.0 - e.0).abs() <= 2 && (a.1 - e.1).abs() <= 2, "{}: {a:?} vs {e:?}", case.name);
            }
        }
    }
}

#[test]
fn principal_branch_is_the_only_one_in_the_strip() {
    for case in common::corpus() {
        let principal = principal_branch(&case.spec);
        for b in enumerate_branches(&case.spec, 2, usize::MAX).unwrap().branches {
            let y = canonical_log(&case.spec, &b).unwrap();
            let in_strip = y
                .as_dmatrix()
                .complex_eigenvalues()
                .iter()
                .all(|z| z.im.abs() <= PI + 1e-9);
            assert_eq!(in_strip, b == principal, "{}: {b:?}", case.name);
        }
    }
}

#[test]
fn dimensions_agree_three_ways() {
    for case in common::corpus().into_iter().filter(|c| c.spec.n <= 6) {
        let big_numeric = commutant_kernel_dim(&case.spec.jordan_form(), DEFAULT_KERNEL_TOL).unwrap() as u64;
        for b in enumerate_branches(&case.spec, 2, usize::MAX).unwrap().branches {
            let report = branch_topology(&case.spec, &b).unwrap();
            let (big, small) = centralizer_dims(&case.spec, &b).unwrap();
            let y = canonical_log(&case.spec, &b).unwrap();
            let small_numeric = commutant_kernel_dim(&y, DEFAULT_KERNEL_TOL).unwrap() as u64;
            let formula: u64 = report.factors.iter().map(homspace_dim).sum();
            assert_eq!(formula, report.dimension);
            assert_eq!(big, big_numeric, "{}", case.name);
            assert_eq!(small, small_numeric, "{}: {b:?}", case.name);
            assert_eq!(formula, big - small, "{}: {b:?}", case.name);
        }
    }
}

#[test]
fn conjugation_equivariance_of_samples() {
    let mut rng = common::rng(5);
    for case in common::corpus().into_iter().step_by(3) {
        let m = common::realize(&case.spec, 1);
        let rj = real_jordan(&m, DEFAULT_EPS).unwrap();
        let p = common::random_basis(&mut rng, m.order());
        let p_inv = p.inverse().unwrap();
        let m2 = &(&p * &m) * &p_inv;
        let c2 = &p * &rj.c;
        for b in enumerate_branches(&rj.spectral, 1, 20).unwrap().branches {
            let mut r1 = ChaCha8Rng::seed_from_u64(9);
            let mut r2 = ChaCha8Rng::seed_from_u64(9);
            let y1 = sample_log(&m, &rj.spectral, &rj.c, &b, &mut r1).unwrap().log;
            let y2 = sample_log(&m2, &rj.spectral, &c2, &b, &mut r2).unwrap().log;
            let moved = &(&p * &y1) * &p_inv;
            assert!((&moved - &y2).frobenius_norm() <= 1e-8 * y2.frobenius_norm().max(1.0), "{}", case.name);
        }
    }
}

#[test]
fn skew_components_case_analysis_matches_block_product() {
    for spec in common::ortho_corpus() {
        for b in enumerate_skew_branches(&spec, 2, usize::MAX).unwrap().branches {
            let by_cases = skew_components_by_cases(&spec, &b);
            let exponent = u32::from(spec.h >= 1 && b.b() >= 1 && b.g() == 0) + u32::from(spec.k >= 1);
            assert_eq!(by_cases, 1 << exponent);
            assert_eq!(skew_branch_topology(&spec, &b).unwrap().components, by_cases);
        }
    }
}

#[test]
fn skew_canonical_logs_are_exact() {
    for spec in common::ortho_corpus() {
        let j = spec.canonical_form();
        for b in enumerate_skew_branches(&spec, 3, usize::MAX).unwrap().branches {
            let y = canonical_skew_log(&spec, &b).unwrap();
            assert_eq!(y.skewness(), 0.0);
            assert!((&exp(&y).unwrap() - &j).frobenius_norm() <= 1e-11 * j.frobenius_norm());
        }
        let y = canonical_skew_log(&spec, &principal_skew_branch(&spec)).unwrap();
        let imag_max = y.as_dmatrix().complex_eigenvalues().iter().map(|z| z.im.abs()).fold(0.0, f64::max);
        assert!(imag_max <= PI + 1e-12);
    }
}

#[test]
fn skew_log_reconstructs_orthogonal_input() {
    for (i, spec) in common::ortho_corpus().iter().enumerate() {
        let m = common::realize_ortho(spec, 40 + i as u64);
        let oc = ortho_canonical(&m, DEFAULT_EPS).unwrap();
        assert_eq!((oc.spectral.h, oc.spectral.k), (spec.h, spec.k));
        assert_eq!(oc.spectral.rotations.len(), spec.rotations.len());
        for (a, b) in oc.spectral.rotations.iter().zip(&spec.rotations) {
            assert_eq!(a.m, b.m);
            assert!((a.theta - b.theta).abs() <= 1e-12);
        }
        let y = canonical_skew_log(spec, &principal_skew_branch(spec)).unwrap();
        let w = &(&oc.q * &y) * &oc.q.transpose();
        assert!(verify_log(&m, &w, 1e-10).unwrap().pass);
    }
}

#[test]
fn equal_modulus_pairs_do_not_stall_the_schur_iteration() {
    let spec = SpectralData::from_parts(&[(0.4, 1), (1.1, 1)], &[(0.3, &[(1.0, 1)])], &[(0.4, 2)]).unwrap();
    let m = common::realize(&spec, 3552124094861580937);
    let got = classify_spectrum(&m, DEFAULT_EPS).unwrap();
    assert_eq!((got.p(), got.r(), got.q()), (2, 1, 1));
}

fn arb_spectrum() -> impl Strategy<Value = SpectralData> {
    any::<u64>().prop_map(|seed| common::random_spectrum(&mut common::rng(seed), 8))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn realized_spectra_are_recovered(spec in arb_spectrum(), seed in any::<u64>()) {
        let m = common::realize(&spec, seed);
        let got = classify_spectrum(&m, DEFAULT_EPS).unwrap();
        prop_assert_eq!(got.n, spec.n);
        prop_assert_eq!(got.a, spec.a);
        let mults = |s: &SpectralData| {
            (
                s.positive.iter().map(|e| e.h).collect::<Vec<_>>(),
                s.nonreal_eigenvalues().iter().map(|t| t.m).collect::<Vec<_>>(),
                s.negative.iter().map(|e| e.k).collect::<Vec<_>>(),
            )
        };
        prop_assert_eq!(mults(&got), mults(&spec));
        for (a, b) in got.positive.iter().zip(&spec.positive) {
            prop_assert!((a.lambda - b.lambda).abs() <= 1e-9 * b.lambda);
        }
        let rj = real_jordan(&m, DEFAULT_EPS).unwrap();
        let back = &(&rj.c * &rj.j) * &rj.c.inverse().unwrap();
        prop_assert!((&back - &m).frobenius_norm() <= 1e-9 * m.frobenius_norm());
    }

    #[test]
    fn canonical_logs_exponentiate_exactly(spec in arb_spectrum()) {
        let j = spec.jordan_form();
        for b in enumerate_branches(&spec, 2, 300).unwrap().branches {
            prop_assert!(check_admissible(&spec, &b));
            let y = canonical_log(&spec, &b).unwrap();
            prop_assert!((&exp(&y).unwrap() - &j).frobenius_norm() <= 1e-11 * j.frobenius_norm());
        }
    }

    #[test]
    fn simple_case_rank_matches_general_rank(spec in arb_spectrum()) {
        for b in enumerate_branches(&spec, 2, 300).unwrap().branches {
            let general = branch_topology(&spec, &b).unwrap().pi2_rank;
            if let Some(special) = simple_nonreal_pi2_rank(&spec, &b) {
                prop_assert_eq!(special, general);
            }
        }
    }

    #[test]
    fn report_dimension_is_centralizer_difference(spec in arb_spectrum()) {
        for b in enumerate_branches(&spec, 1, 300).unwrap().branches {
            let report = branch_topology(&spec, &b).unwrap();
            let (big, small) = centralizer_dims(&spec, &b).unwrap();
            prop_assert_eq!(report.dimension, big - small);
            prop_assert!(report.components.is_power_of_two());
            prop_assert_eq!(report.components, 1u64 << (b.set_j().len() + spec.q()));
        }
    }

    #[test]
    fn jordan_form_json_roundtrip(spec in arb_spectrum()) {
        let j = spec.jordan_form();
        let text = serde_json::to_string(&j).unwrap();
        let back: Matrix = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, j);
        let text = serde_json::to_string(&spec).unwrap();
        let back: SpectralData = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, spec);
    }
}
