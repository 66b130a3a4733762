//! Seeded sampling of group elements and probe vectors.

use graphwh::word::{GraphProductContext, ReducedWord};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `count` elements drawn uniformly, with replacement, from the ball of the
/// given radius.
pub fn sample_ball(ctx: &GraphProductContext, radius: usize, count: usize, rng: &mut ChaCha8Rng) -> Vec<ReducedWord> {
    let ball = ctx.ball(radius);
    (0..count).map(|_| ball[rng.random_range(0..ball.len())].clone()).collect()
}

/// A point drawn uniformly from the closed unit ball of `ℝ^dim`.
pub fn unit_ball_point(dim: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..=1.0)).collect();
        if v.iter().map(|x| x * x).sum::<f64>() <= 1.0 {
            return v;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use graphwh::fixtures;

    #[test]
    fn samples_are_reproducible() {
        let ctx = fixtures::f2(fixtures::d0());
        let a = sample_ball(&ctx, 3, 20, &mut rng(7));
        let b = sample_ball(&ctx, 3, 20, &mut rng(7));
        assert_eq!(a, b);
        assert!(a.iter().all(|w| w.len() <= 3));
        let p = unit_ball_point(3, &mut rng(1));
        assert!(p.iter().map(|x| x * x).sum::<f64>() <= 1.0);
    }
}
