//! Brute-force conjugacy machinery: a span pseudometric on group specs and a
//! randomized conjugator search, used as independent ground truth and as
//! negative evidence for non-conjugacy.
//!
//! Restarts are independent, each with its own counter-mode random stream, and
//! are merged by (distance, restart index), so the outcome is deterministic
//! for a fixed config whether or not the restarts run in parallel.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::classify::GroupSpec;
use crate::geom::expm2;
use crate::mat::Mat2;
use crate::par;
use crate::tol::Tolerances;

/// Budget and acceptance threshold of the randomized search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchConfig {
    pub restarts: usize,
    pub steps_per_restart: usize,
    pub step_scale: f64,
    pub seed: u64,
    pub accept_tol: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            restarts: 200,
            steps_per_restart: 500,
            step_scale: 0.3,
            seed: 0,
            accept_tol: 1e-6,
        }
    }
}

/// Search result: the conjugator if one reached `accept_tol`, and the best
/// distance seen. Failure is evidence, not proof.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome {
    pub conjugator: Option<Mat2>,
    pub best_distance: f64,
}

/// Sum of the projector Frobenius distances between the sigma spans and
/// between the h spans. Zero iff both spans coincide; symmetric; obeys the
/// triangle inequality because each projector distance does.
pub fn group_distance(a: &GroupSpec, b: &GroupSpec) -> f64 {
    a.sigma.distance(&b.sigma) + a.h.distance(&b.h)
}

fn objective(a: &GroupSpec, b: &GroupSpec, g: &Mat2, tol: &Tolerances) -> f64 {
    match a.conjugate(g, tol) {
        Ok(moved) => group_distance(&moved, b),
        Err(_) => f64::INFINITY,
    }
}

/// One restart: coordinate descent over the exponential chart, with the
/// reflection factor chosen by restart parity and a geometrically cooled step.
fn run_restart(
    a: &GroupSpec,
    b: &GroupSpec,
    cfg: &SearchConfig,
    tol: &Tolerances,
    restart: usize,
) -> (f64, Mat2) {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(restart as u64 + 1);
    let reflect = if restart % 2 == 1 {
        Mat2::lambda_reflect()
    } else {
        Mat2::identity()
    };

    // Trust region: orbit closures of distinct classes are adjacent at
    // infinity (unbounded diagonal conjugation degenerates rotation families
    // into shear families and positive lines into null lines), so a drifting
    // walk could push the distance between non-conjugate specs under any
    // margin. The whole search lives in a bounded exponential chart that
    // still contains every conjugator of moderate condition number.
    let bound = 0.6f64;

    // The first restart of each component starts at the identity, so equal
    // specs are recognized at step zero; later restarts start at random.
    let mut coords = [0.0f64; 4];
    if restart >= 2 {
        for c in coords.iter_mut() {
            *c = rng.gen_range(-bound..bound);
        }
    }
    let build = |c: &[f64; 4]| expm2(&Mat2::new(c[0], c[1], c[2], c[3]), 1.0) * reflect;
    let mut best = objective(a, b, &build(&coords), tol);

    let floor = 1e-8f64;
    let cool = (floor / cfg.step_scale)
        .powf(1.0 / cfg.steps_per_restart.max(1) as f64)
        .min(0.9999);
    let mut scale = cfg.step_scale;
    for _ in 0..cfg.steps_per_restart {
        let k = rng.gen_range(0..4usize);
        let delta = scale * rng.gen_range(-1.0f64..1.0);
        let mut trial = coords;
        trial[k] = (trial[k] + delta).clamp(-bound, bound);
        let d = objective(a, b, &build(&trial), tol);
        if d < best {
            best = d;
            coords = trial;
        }
        scale *= cool;
    }
    (best, build(&coords))
}

fn search_impl(
    a: &GroupSpec,
    b: &GroupSpec,
    cfg: &SearchConfig,
    tol: &Tolerances,
    sequential: bool,
) -> SearchOutcome {
    let chunk = 16usize;
    let mut best_distance = f64::INFINITY;
    let mut best_g = Mat2::identity();
    let mut done = 0;
    while done < cfg.restarts {
        let count = chunk.min(cfg.restarts - done);
        let offset = done;
        let run = |i: usize| run_restart(a, b, cfg, tol, offset + i);
        let results = if sequential {
            par::map_indices_seq(count, run)
        } else {
            par::map_indices(count, run)
        };
        for (d, g) in results {
            if d < best_distance {
                best_distance = d;
                best_g = g;
            }
        }
        done += count;
        if best_distance < cfg.accept_tol {
            // Re-check the winner from scratch before reporting it.
            let verified = objective(a, b, &best_g, tol);
            if verified < cfg.accept_tol {
                return SearchOutcome {
                    conjugator: Some(best_g),
                    best_distance: verified,
                };
            }
            best_distance = verified;
        }
    }
    SearchOutcome {
        conjugator: None,
        best_distance,
    }
}

/// Random-restart search for g with conjugate(a, g) = b, parallel over
/// restarts when the `parallel` feature is enabled.
pub fn search_conjugator(
    a: &GroupSpec,
    b: &GroupSpec,
    cfg: &SearchConfig,
    tol: &Tolerances,
) -> SearchOutcome {
    search_impl(a, b, cfg, tol, false)
}

/// Sequential baseline with identical semantics (and identical output).
pub fn search_conjugator_seq(
    a: &GroupSpec,
    b: &GroupSpec,
    cfg: &SearchConfig,
    tol: &Tolerances,
) -> SearchOutcome {
    search_impl(a, b, cfg, tol, true)
}
