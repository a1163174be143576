#![allow(dead_code)]

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4};

use logatlas::spectra::{OrthoSpectralData, SpectralData};
use logatlas::Matrix;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub struct Case {
    pub name: &'static str,
    pub spec: SpectralData,
}

type Nonreal<'a> = &'a [(f64, &'a [(f64, usize)])];

fn case(name: &'static str, pos: &[(f64, usize)], nonreal: Nonreal, neg: &[(f64, usize)]) -> Case {
    Case { name, spec: SpectralData::from_parts(pos, nonreal, neg).expect(name) }
}

/// Thirty spectra of order at most 8: diagonal positive, rotation-scaled,
/// negative pairs and mixed.
pub fn corpus() -> Vec<Case> {
    vec![
        case("diag(2,3)", &[(2.0, 1), (3.0, 1)], &[], &[]),
        case("I2", &[(1.0, 2)], &[], &[]),
        case("diag(0.5,2,2)", &[(0.5, 1), (2.0, 2)], &[], &[]),
        case("I3", &[(1.0, 3)], &[], &[]),
        case("2*I4", &[(2.0, 4)], &[], &[]),
        case("four simple positive", &[(0.3, 1), (1.0, 1), (4.0, 1), (7.0, 1)], &[], &[]),
        case("diag(1.5,1.5,3,3,5)", &[(1.5, 2), (3.0, 2), (5.0, 1)], &[], &[]),
        case("2*I8", &[(2.0, 8)], &[], &[]),
        case("2E(pi/3)", &[], &[(FRAC_PI_3, &[(2.0, 1)])], &[]),
        case("E(1)+E(1)", &[], &[(1.0, &[(1.0, 2)])], &[]),
        case("2E(pi/3)+5", &[(5.0, 1)], &[(FRAC_PI_3, &[(2.0, 1)])], &[]),
        case("same angle two moduli", &[], &[(0.7, &[(0.5, 1), (2.0, 1)])], &[]),
        case("two angles", &[], &[(0.4, &[(1.0, 1)]), (2.5, &[(3.0, 1)])], &[]),
        case("2E(1.2) x3", &[], &[(1.2, &[(2.0, 3)])], &[]),
        case("E(pi/2)+1.5E(2) x2", &[], &[(FRAC_PI_2, &[(1.0, 1)]), (2.0, &[(1.5, 2)])], &[]),
        case("E(0.9) x4", &[], &[(0.9, &[(1.0, 4)])], &[]),
        case("-I2", &[], &[], &[(1.0, 1)]),
        case("-I4", &[], &[], &[(1.0, 2)]),
        case("-0.5I2-2I2", &[], &[], &[(0.5, 1), (2.0, 1)]),
        case("-3I6", &[], &[], &[(3.0, 3)]),
        case("-I8", &[], &[], &[(1.0, 4)]),
        case("2 and -I2", &[(2.0, 1)], &[], &[(1.0, 1)]),
        case("I2, E(1), -2I2", &[(1.0, 2)], &[(1.0, &[(1.0, 1)])], &[(2.0, 1)]),
        case("0.5, 3, 1.5E(2), -4I2", &[(0.5, 1), (3.0, 1)], &[(2.0, &[(1.5, 1)])], &[(4.0, 1)]),
        case("1, E(pi/4) x2", &[(1.0, 1)], &[(FRAC_PI_4, &[(1.0, 2)])], &[]),
        case("2I2, 0.8E(1.3), -I2", &[(2.0, 2)], &[(1.3, &[(0.8, 1)])], &[(1.0, 1)]),
        case("I3, E(2.2), -2I2", &[(1.0, 3)], &[(2.2, &[(1.0, 1)])], &[(2.0, 1)]),
        case("0.7I2, E(0.5)+2E(0.5), -I2", &[(0.7, 2)], &[(0.5, &[(1.0, 1), (2.0, 1)])], &[(1.0, 1)]),
        case("I4, -I4", &[(1.0, 4)], &[], &[(1.0, 2)]),
        case("1.2, 2E(1), 0.5E(2), -0.8I2", &[(1.2, 1)], &[(1.0, &[(2.0, 1)]), (2.0, &[(0.5, 1)])], &[(0.8, 1)]),
    ]
}

pub fn gaussian(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal))
}

pub fn random_orthogonal(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    let qr = gaussian(rng, n).qr();
    let r = qr.r();
    let mut q = qr.q();
    for (j, mut col) in q.column_iter_mut().enumerate() {
        col *= r[(j, j)].signum();
    }
    q
}

/// A mildly non-normal change of basis: orthogonal times unit upper
/// triangular with small off-diagonal entries.
pub fn random_basis(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    let q = random_orthogonal(rng, n);
    let mut t = DMatrix::<f64>::identity(n, n);
    for i in 0..n {
        for j in i + 1..n {
            t[(i, j)] = 0.25 * rng.sample::<f64, _>(StandardNormal);
        }
    }
    Matrix::new(q * t).unwrap()
}

/// `P J P⁻¹` for a seeded random basis `P`.
pub fn realize(spec: &SpectralData, seed: u64) -> Matrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = random_basis(&mut rng, spec.n);
    &(&p * &spec.jordan_form()) * &p.inverse().unwrap()
}

/// `Q J Qᵀ` for a seeded random orthogonal `Q` with determinant 1.
pub fn realize_ortho(spec: &OrthoSpectralData, seed: u64) -> Matrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut q = random_orthogonal(&mut rng, spec.n);
    if q.determinant() < 0.0 {
        q.column_mut(0).neg_mut();
    }
    let q = Matrix::new(q).unwrap();
    &(&q * &spec.canonical_form()) * &q.transpose()
}

pub fn ortho_corpus() -> Vec<OrthoSpectralData> {
    let o = |h, rot: &[(f64, usize)], k| OrthoSpectralData::from_parts(h, rot, k).unwrap();
    vec![
        o(2, &[], 0),
        o(3, &[], 0),
        o(0, &[(FRAC_PI_3, 1)], 0),
        o(1, &[(FRAC_PI_3, 1)], 0),
        o(0, &[], 1),
        o(0, &[], 2),
        o(2, &[], 1),
        o(1, &[(1.0, 1)], 1),
        o(0, &[(0.5, 1), (2.0, 1)], 0),
        o(1, &[(1.0, 2)], 0),
        o(4, &[], 0),
        o(2, &[(2.5, 1)], 1),
        o(0, &[(1.0, 1)], 2),
        o(3, &[], 2),
    ]
}

/// Random spectrum of order at most `n_max` with well separated eigenvalues.
pub fn random_spectrum(rng: &mut ChaCha8Rng, n_max: usize) -> SpectralData {
    loop {
        let mut budget = rng.random_range(1..=n_max);
        let mut pos: Vec<(f64, usize)> = Vec::new();
        let mut nonreal: Vec<(f64, Vec<(f64, usize)>)> = Vec::new();
        let mut neg: Vec<(f64, usize)> = Vec::new();
        let mut lambda = 0.4;
        let mut w = 0.4;
        let mut theta = 0.3;
        while budget > 0 {
            match rng.random_range(0..3) {
                0 => {
                    let h = rng.random_range(1..=budget.min(3));
                    pos.push((lambda, h));
                    lambda += 0.7;
                    budget -= h;
                }
                1 if budget >= 2 => {
                    let m = rng.random_range(1..=(budget / 2).min(2));
                    let mut members = vec![(1.0, m)];
                    budget -= 2 * m;
                    if budget >= 2 && rng.random_bool(0.3) {
                        members.push((2.0, 1));
                        budget -= 2;
                    }
                    nonreal.push((theta, members));
                    theta += 0.6;
                }
                2 if budget >= 2 => {
                    let k = rng.random_range(1..=(budget / 2).min(2));
                    neg.push((w, k));
                    w += 0.7;
                    budget -= 2 * k;
                }
                _ => {}
            }
        }
        let nonreal_refs: Vec<(f64, &[(f64, usize)])> = nonreal.iter().map(|(t, m)| (*t, m.as_slice())).collect();
        if let Ok(s) = SpectralData::from_parts(&pos, &nonreal_refs, &neg) {
            return s;
        }
    }
}

pub fn random_ortho_spectrum(rng: &mut ChaCha8Rng, n_min: usize, n_max: usize) -> OrthoSpectralData {
    loop {
        let h = rng.random_range(0..=3);
        let k = rng.random_range(0..=2);
        let r = rng.random_range(0..=2);
        let mut rotations = Vec::new();
        let mut theta = 0.4;
        for _ in 0..r {
            rotations.push((theta, rng.random_range(1..=2)));
            theta += 0.9;
        }
        if let Ok(s) = OrthoSpectralData::from_parts(h, &rotations, k) {
            if s.n >= n_min && s.n <= n_max {
                return s;
            }
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
