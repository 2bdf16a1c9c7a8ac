//! Deterministic seeded sampling of test points for the class checkers.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::space::Point;

pub const DEFAULT_SEED: u64 = 0x5eed_f1c5;
pub const DEFAULT_SAMPLES: usize = 256;
/// Half-width of the sampling box `[-R, R]^d`.
pub const DEFAULT_RADIUS: f64 = 10.0;

fn draw(rng: &mut ChaCha8Rng, dim: usize, radius: f64) -> Point {
    Point::from_raw((0..dim).map(|_| rng.gen_range(-radius..=radius)).collect())
}

/// `count` points drawn uniformly from `[-radius, radius]^dim`.
pub fn sample_points(dim: usize, count: usize, seed: u64, radius: f64) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| draw(&mut rng, dim, radius)).collect()
}

pub fn sample_pairs(dim: usize, count: usize, seed: u64, radius: f64) -> Vec<(Point, Point)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| (draw(&mut rng, dim, radius), draw(&mut rng, dim, radius)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_points() {
        assert_eq!(sample_points(3, 10, 7, 1.0), sample_points(3, 10, 7, 1.0));
        assert_ne!(sample_points(3, 10, 7, 1.0), sample_points(3, 10, 8, 1.0));
        for p in sample_points(4, 100, 1, 2.5) {
            assert!(p.coords().iter().all(|c| c.abs() <= 2.5));
        }
    }
}
