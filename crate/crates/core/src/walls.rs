//! Walls of the graph product.
//!
//! `W_v` is the set of elements having a reduced form that starts with a
//! `G_v` letter, and `gW_v` its left translate. A [`Wall`] names the partition
//! `{gW_v, gW_vᶜ}`. Walls are compared extensionally on a finite ball.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::error::Error;
use crate::word::{GraphProductContext, ReducedWord, Vertex};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Wall {
    pub base: ReducedWord,
    pub vertex: Vertex,
}

impl Wall {
    pub fn new(base: ReducedWord, vertex: Vertex) -> Self {
        Wall { base, vertex }
    }
}

/// Whether `x ∈ gW_v`, i.e. whether `g⁻¹x` can start with a `G_v` letter.
pub fn in_half_space(ctx: &GraphProductContext, x: &ReducedWord, wall: &Wall) -> Result<bool, Error> {
    let rel = ctx.multiply(&ctx.inverse(&wall.base)?, x)?;
    Ok(ctx.can_start_with(&rel, wall.vertex))
}

fn signature(ctx: &GraphProductContext, wall: &Wall, points: &[ReducedWord]) -> Result<Vec<bool>, Error> {
    let inv = ctx.inverse(&wall.base)?;
    points
        .iter()
        .map(|p| Ok(ctx.can_start_with(&ctx.multiply(&inv, p)?, wall.vertex)))
        .collect()
}

/// Whether two walls induce the same unordered partition of the ball.
pub fn walls_equal(ctx: &GraphProductContext, w1: &Wall, w2: &Wall, radius: usize) -> Result<bool, Error> {
    let ball = ctx.ball(radius);
    let a = signature(ctx, w1, &ball)?;
    let b = signature(ctx, w2, &ball)?;
    Ok(a == b || a.iter().zip(&b).all(|(p, q)| p != q))
}

/// Whether the four sets `h₁ ∩ h₂`, `h₁ ∩ h₂ᶜ`, `h₁ᶜ ∩ h₂`, `h₁ᶜ ∩ h₂ᶜ` all
/// meet the ball.
pub fn crosses(ctx: &GraphProductContext, w1: &Wall, w2: &Wall, radius: usize) -> Result<bool, Error> {
    let ball = ctx.ball(radius);
    let a = signature(ctx, w1, &ball)?;
    let b = signature(ctx, w2, &ball)?;
    let mut seen = [false; 4];
    for (p, q) in a.iter().zip(&b) {
        seen[usize::from(*p) * 2 + usize::from(*q)] = true;
    }
    Ok(seen.iter().all(|&s| s))
}

/// Every distinct half-space `gW_v` with `g` in the ball of a given radius,
/// recorded by its membership pattern on that same ball.
#[derive(Clone, Debug)]
pub struct HalfSpaceCensus {
    radius: usize,
    points: Vec<ReducedWord>,
    index: BTreeMap<ReducedWord, usize>,
    half_spaces: Vec<Vec<bool>>,
}

impl HalfSpaceCensus {
    pub fn new(ctx: &GraphProductContext, radius: usize) -> Result<Self, Error> {
        let points = ctx.ball(radius);
        let index = points.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let mut distinct = BTreeSet::new();
        for g in &points {
            for v in 0..ctx.vertex_count() {
                distinct.insert(signature(ctx, &Wall::new(g.clone(), v), &points)?);
            }
        }
        Ok(HalfSpaceCensus { radius, points, index, half_spaces: distinct.into_iter().collect() })
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn points(&self) -> &[ReducedWord] {
        &self.points
    }

    /// Number of distinct half-spaces seen.
    pub fn half_space_count(&self) -> usize {
        self.half_spaces.len()
    }

    fn locate(&self, x: &ReducedWord) -> Result<usize, Error> {
        self.index
            .get(x)
            .copied()
            .ok_or(Error::InvalidParams("point lies outside the census ball"))
    }

    /// Number of distinct half-spaces containing exactly one of `x`, `y`.
    pub fn separating(&self, x: &ReducedWord, y: &ReducedWord) -> Result<usize, Error> {
        let (i, j) = (self.locate(x)?, self.locate(y)?);
        Ok(self.half_spaces.iter().filter(|h| h[i] != h[j]).count())
    }

    /// Number of distinct unordered partitions `{h, hᶜ}` separating `x`, `y`.
    pub fn separating_partitions(&self, x: &ReducedWord, y: &ReducedWord) -> Result<usize, Error> {
        let (i, j) = (self.locate(x)?, self.locate(y)?);
        let partitions: BTreeSet<Vec<bool>> = self
            .half_spaces
            .iter()
            .filter(|h| h[i] != h[j])
            .map(|h| if h[0] { h.iter().map(|b| !b).collect() } else { h.clone() })
            .collect();
        Ok(partitions.len())
    }
}

/// Smallest census radius used for separating `x` from `y`:
/// `|y⁻¹x|_r + max(|x|, |y|) + 1`.
pub fn candidate_radius(ctx: &GraphProductContext, x: &ReducedWord, y: &ReducedWord) -> Result<usize, Error> {
    Ok(ctx.distance(x, y)? + x.len().max(y.len()) + 1)
}

/// Number of distinct half-spaces `gW_v`, `g` ranging over the ball of the
/// given radius, that contain exactly one of `x` and `y`.
///
/// Each wall `{h, hᶜ}` with both sides in the family contributes two, so for
/// a sufficiently large radius the count is `2|y⁻¹x|_r`.
pub fn count_separating_walls(
    ctx: &GraphProductContext,
    x: &ReducedWord,
    y: &ReducedWord,
    radius: usize,
) -> Result<usize, Error> {
    HalfSpaceCensus::new(ctx, radius)?.separating(x, y)
}

/// Number of distinct unordered partitions separating `x` and `y`.
pub fn count_separating_partitions(
    ctx: &GraphProductContext,
    x: &ReducedWord,
    y: &ReducedWord,
    radius: usize,
) -> Result<usize, Error> {
    HalfSpaceCensus::new(ctx, radius)?.separating_partitions(x, y)
}
