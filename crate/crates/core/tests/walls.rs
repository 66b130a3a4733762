mod common;

use graphwh::analysis::{is_cnd, KernelMatrix};
use graphwh::fixtures;
use graphwh::walls::{candidate_radius, crosses, in_half_space, walls_equal, HalfSpaceCensus, Wall};
use graphwh::word::ReducedWord;

use common::contexts;

#[test]
fn separation_count_is_twice_the_distance() {
    for (name, ctx) in contexts() {
        let ball = ctx.ball(2);
        let mut censuses = std::collections::BTreeMap::new();
        for x in &ball {
            for y in &ball {
                let r = candidate_radius(&ctx, x, y).unwrap();
                let census = censuses.entry(r).or_insert_with(|| HalfSpaceCensus::new(&ctx, r).unwrap());
                assert_eq!(census.separating(x, y).unwrap(), 2 * ctx.distance(x, y).unwrap(), "{name} {x} {y}");
            }
        }
    }
}

#[test]
fn involutive_vertices_pair_half_spaces_into_walls() {
    // For order-two vertex groups every wall has both sides in the family,
    // so unordered partitions number exactly |y⁻¹x|.
    for ctx in [fixtures::f1(fixtures::d0()), fixtures::f2(fixtures::d1()), fixtures::f3(fixtures::d0())] {
        let census = HalfSpaceCensus::new(&ctx, 5).unwrap();
        for x in ctx.ball(2) {
            for y in ctx.ball(2) {
                assert_eq!(census.separating_partitions(&x, &y).unwrap(), ctx.distance(&x, &y).unwrap());
            }
        }
    }
}

#[test]
fn half_spaces_are_equivariant() {
    for (name, ctx) in contexts() {
        let ball = ctx.ball(2);
        for g in &ball {
            for v in 0..ctx.vertex_count() {
                let wall = Wall::new(g.clone(), v);
                for k in &ball {
                    let moved = Wall::new(ctx.multiply(k, g).unwrap(), v);
                    for x in &ball {
                        let kx = ctx.multiply(k, x).unwrap();
                        assert_eq!(
                            in_half_space(&ctx, &kx, &moved).unwrap(),
                            in_half_space(&ctx, x, &wall).unwrap(),
                            "{name}"
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn walls_partition_and_compare_reflexively() {
    for (_, ctx) in contexts() {
        let e = ReducedWord::identity();
        for v in 0..ctx.vertex_count() {
            let w = Wall::new(e.clone(), v);
            assert!(walls_equal(&ctx, &w, &w, 3).unwrap());
            assert!(!crosses(&ctx, &w, &w, 3).unwrap());
            let inside = ctx.ball(3).iter().filter(|x| in_half_space(&ctx, x, &w).unwrap()).count();
            assert!(inside > 0 && inside < ctx.ball(3).len());
        }
    }
}

#[test]
fn reduced_length_is_conditionally_negative_definite() {
    for (name, ctx) in contexts() {
        let ball = ctx.ball(3);
        let m = KernelMatrix::from_kernel(ball, |a, b| Ok(ctx.distance(a, b)? as f64)).unwrap();
        let report = is_cnd(&m, 1e-9);
        assert!(report.is_cnd(), "{name}: {report:?}");
    }
}
