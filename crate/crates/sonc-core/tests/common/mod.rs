//! Shared helpers for the integration suites: bundled-instance loading and
//! seeded random instance generation.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sonc_core::{parse_instance, Exponent, ExponentialSum, Kind};
use std::path::PathBuf;

#[allow(dead_code)]
pub fn instance_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../instances")
        .join(format!("{name}.json"))
}

#[allow(dead_code)]
pub fn load_instance(name: &str) -> ExponentialSum {
    let text = std::fs::read_to_string(instance_path(name))
        .unwrap_or_else(|e| panic!("reading bundled instance {name}: {e}"));
    parse_instance(&text).unwrap_or_else(|e| panic!("parsing bundled instance {name}: {e}"))
}

#[allow(dead_code)]
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn exponent(coords: Vec<f64>) -> Exponent {
    Exponent::new(coords).unwrap()
}

/// Log-uniform magnitude in [1e-2, 1e2].
pub fn log_uniform(rng: &mut ChaCha8Rng) -> f64 {
    10f64.powf(rng.random_range(-2.0..2.0))
}

/// Random exponential sum with 1..=6 positive terms on points drawn from
/// [-2, 2]^n (n in 1..=4) and `negatives` negative terms placed at convex
/// combinations of the positive support, so negative points are interior
/// by construction and the vertex precondition holds almost surely.
/// `negative_scale` multiplies the negative magnitudes: small values bias
/// toward dual-cone members, 1.0 toward rejections.
#[allow(dead_code)]
pub fn random_instance(
    rng: &mut ChaCha8Rng,
    negatives: usize,
    negative_scale: f64,
) -> ExponentialSum {
    loop {
        let n = rng.random_range(1..=4usize);
        let k_plus = rng.random_range(1..=6usize);
        let mut terms: Vec<(Exponent, f64)> = Vec::new();
        let mut plus_points: Vec<Exponent> = Vec::new();
        for _ in 0..k_plus {
            let p = exponent((0..n).map(|_| rng.random_range(-2.0..2.0)).collect());
            if plus_points.contains(&p) {
                continue;
            }
            plus_points.push(p.clone());
            terms.push((p, log_uniform(rng)));
        }
        for _ in 0..negatives {
            // Convex combination with weights from normalized exponentials.
            let raw: Vec<f64> = (0..plus_points.len())
                .map(|_| -rng.random_range(0.0f64..1.0).ln().max(1e-9))
                .collect();
            let total: f64 = raw.iter().sum();
            let mut coords = vec![0.0; n];
            for (p, w) in plus_points.iter().zip(&raw) {
                for (c, x) in coords.iter_mut().zip(p.coords()) {
                    *c += (w / total) * x;
                }
            }
            let beta = exponent(coords);
            if terms.iter().any(|(e, _)| *e == beta) {
                continue;
            }
            terms.push((beta, -log_uniform(rng) * negative_scale));
        }
        match ExponentialSum::new(n, Kind::Exponential, terms) {
            Ok(f) => return f,
            Err(_) => continue,
        }
    }
}
