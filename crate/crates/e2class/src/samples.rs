//! Seeded random inputs for tests, the selftest suites and the benchmarks.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::geom::{expm2, Sym2, Vec3};
use crate::lorentz::{sl2_factor, IwasawaKind};
use crate::mat::Mat2;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rng_stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

pub fn vec3(rng: &mut ChaCha8Rng, range: f64) -> Vec3 {
    Vec3::new(
        rng.gen_range(-range..range),
        rng.gen_range(-range..range),
        rng.gen_range(-range..range),
    )
}

pub fn sym2(rng: &mut ChaCha8Rng, range: f64) -> Sym2 {
    Sym2::new(
        rng.gen_range(-range..range),
        rng.gen_range(-range..range),
        rng.gen_range(-range..range),
    )
}

pub fn mat2(rng: &mut ChaCha8Rng, range: f64) -> Mat2 {
    Mat2::new(
        rng.gen_range(-range..range),
        rng.gen_range(-range..range),
        rng.gen_range(-range..range),
        rng.gen_range(-range..range),
    )
}

/// Invertible matrix with condition number below `max_cond` and determinant
/// magnitude above 0.01, by rejection.
pub fn gl2(rng: &mut ChaCha8Rng, max_cond: f64) -> Mat2 {
    loop {
        let g = mat2(rng, 2.0);
        if g.det().abs() > 0.01 && g.cond() < max_cond {
            return g;
        }
    }
}

/// Element of the identity component (positive determinant).
pub fn gl2_positive(rng: &mut ChaCha8Rng, max_cond: f64) -> Mat2 {
    loop {
        let g = gl2(rng, max_cond);
        if g.det() > 0.0 {
            return g;
        }
    }
}

/// Invertible matrix rescaled to determinant magnitude near one (times a
/// mild scalar), so products of samples keep entries of moderate size. Used
/// where absolute floating-point bounds are asserted on the Lorentz image.
pub fn gl2_normalized(rng: &mut ChaCha8Rng, max_cond: f64) -> Mat2 {
    loop {
        let g = mat2(rng, 2.0);
        let d = g.det().abs();
        if d < 0.01 {
            continue;
        }
        let g = g.scale(1.0 / d.sqrt());
        if g.cond() < max_cond {
            let u: f64 = rng.gen_range(-0.5..0.5);
            return g.scale(u.exp());
        }
    }
}

/// Well-conditioned conjugator from the exponential chart, optionally times
/// the reflection (so both components of GL(2,R) are reached).
pub fn conjugator(rng: &mut ChaCha8Rng, max_cond: f64) -> Mat2 {
    loop {
        let g = expm2(&mat2(rng, 0.9), 1.0);
        let g = if rng.gen_bool(0.5) {
            g * Mat2::lambda_reflect()
        } else {
            g
        };
        if g.cond() < max_cond {
            return g;
        }
    }
}

/// Random unimodular matrix via the Iwasawa chart (theta sweeps two turns,
/// covering both sheets over the projective rotation).
pub fn sl2(rng: &mut ChaCha8Rng) -> Mat2 {
    let t = rng.gen_range(-2.0..2.0);
    let s = rng.gen_range(-2.0..2.0);
    let theta = rng.gen_range(0.0..4.0 * std::f64::consts::PI);
    sl2_factor(IwasawaKind::N, t)
        * sl2_factor(IwasawaKind::A, s)
        * sl2_factor(IwasawaKind::K, theta)
}
