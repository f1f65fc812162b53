//! Seeded point sets on spheres.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Generator for stream `stream` of `seed`. Every consumer that needs
/// order-independent randomness derives one generator per work item.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniformly distributed unit vector of `ℝⁿ`.
pub fn random_unit<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DVector<f64> {
    loop {
        let v = DVector::from_iterator(n, (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)));
        let norm = v.norm();
        if norm > 1e-12 {
            return v / norm;
        }
    }
}

/// `count` independent uniform unit vectors; point `k` only depends on
/// `(seed, k)`.
pub fn seeded_unit_points(n: usize, count: usize, seed: u64) -> Vec<DVector<f64>> {
    (0..count)
        .map(|k| random_unit(&mut rng_for(seed, k as u64), n))
        .collect()
}

const PRIMES: [u32; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];

fn radical_inverse(mut k: u64, base: u32) -> f64 {
    let b = base as f64;
    let mut inv = 1.0 / b;
    let mut out = 0.0;
    while k > 0 {
        out += (k % base as u64) as f64 * inv;
        k /= base as u64;
        inv /= b;
    }
    out
}

/// Quasi-uniform points on the unit sphere of `ℝⁿ`.
///
/// `n = 1` alternates the two points, `n = 2` is an equally spaced circle
/// with a seeded phase. Otherwise a Halton sequence with a seeded
/// Cranley–Patterson shift is pushed through Box–Muller and normalized,
/// which falls back to pseudo-random normals past the tabulated primes.
pub fn quasi_uniform_sphere(n: usize, count: usize, seed: u64) -> Vec<DVector<f64>> {
    let mut rng = rng_for(seed, u64::MAX);
    match n {
        0 => Vec::new(),
        1 => (0..count)
            .map(|k| DVector::from_element(1, if k % 2 == 0 { 1.0 } else { -1.0 }))
            .collect(),
        2 => {
            let phase: f64 = rng.random::<f64>() * std::f64::consts::TAU / count.max(1) as f64;
            (0..count)
                .map(|k| {
                    let a = phase + std::f64::consts::TAU * k as f64 / count as f64;
                    DVector::from_vec(vec![a.cos(), a.sin()])
                })
                .collect()
        }
        _ => {
            let pairs = n.div_ceil(2);
            let dims = 2 * pairs;
            if dims > PRIMES.len() {
                return seeded_unit_points(n, count, seed);
            }
            let shift: Vec<f64> = (0..dims).map(|_| rng.random::<f64>()).collect();
            (0..count)
                .map(|k| {
                    let mut normals = Vec::with_capacity(dims);
                    for p in 0..pairs {
                        let u1 =
                            (radical_inverse(k as u64 + 1, PRIMES[2 * p]) + shift[2 * p]).fract();
                        let u2 = (radical_inverse(k as u64 + 1, PRIMES[2 * p + 1])
                            + shift[2 * p + 1])
                            .fract();
                        let r = (-2.0 * (1.0 - u1).max(f64::MIN_POSITIVE).ln()).sqrt();
                        let a = std::f64::consts::TAU * u2;
                        normals.push(r * a.cos());
                        normals.push(r * a.sin());
                    }
                    let v = DVector::from_iterator(n, normals.into_iter().take(n));
                    let norm = v.norm();
                    if norm > 1e-12 {
                        v / norm
                    } else {
                        let mut e = DVector::zeros(n);
                        e[0] = 1.0;
                        e
                    }
                })
                .collect()
        }
    }
}
