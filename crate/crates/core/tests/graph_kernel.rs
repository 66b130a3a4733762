mod common;

use std::collections::BTreeMap;

use graphwh::analysis::{is_cnd, is_psd, KernelMatrix};
use graphwh::fixtures::{self, S_U, T_V};
use graphwh::hilbert::{measure_constants, SlotKind};
use graphwh::kernel::{
    phi_gamma_closed, proper_generator, r_gamma, r_gamma_dist_sq, r_gamma_of, slot_keys, tail_envelope, GraphKernel,
    KernelParams, SlotPayload,
};
use graphwh::word::DEFAULT_ENUMERATION_CAP;

use common::contexts;

fn params(n: u32, eps: f64) -> KernelParams {
    KernelParams::new(n, eps, 0.5, 10).unwrap()
}

#[test]
fn psi_matches_closed_form_on_balls() {
    for (name, ctx) in contexts() {
        let k = GraphKernel::new(&ctx, params(10, 0.01)).unwrap();
        let ball = ctx.ball(3);
        for g in &ball {
            for h in &ball {
                let rel = ctx.multiply(&ctx.inverse(h).unwrap(), g).unwrap();
                let lhs = k.psi_gamma(g, h).unwrap();
                let rhs = phi_gamma_closed(&ctx, 10, &rel);
                assert!((lhs - rhs).abs() <= 1e-9, "{name} {g} {h}: {lhs} vs {rhs}");
            }
        }
    }
}

#[test]
fn psi_is_left_invariant() {
    for (name, ctx) in contexts() {
        let k = GraphKernel::new(&ctx, params(7, 0.2)).unwrap();
        let ball = ctx.ball(2);
        for g in &ball {
            for h in &ball {
                let base = k.psi_gamma(g, h).unwrap();
                for t in &ball {
                    let (tg, th) = (ctx.multiply(t, g).unwrap(), ctx.multiply(t, h).unwrap());
                    assert!((k.psi_gamma(&tg, &th).unwrap() - base).abs() <= 1e-9, "{name}");
                }
            }
        }
    }
}

#[test]
fn slot_maps_do_not_depend_on_the_representative() {
    for (name, ctx) in contexts() {
        let k = GraphKernel::new(&ctx, params(10, 0.01)).unwrap();
        for w in ctx.ball(4) {
            let r = r_gamma(&ctx, &w);
            for d in 0..=4 {
                let tail = ctx.d_tail_occurrences(&w, d, DEFAULT_ENUMERATION_CAP).unwrap();
                let alpha = k.alpha_gamma_d(&w, d).unwrap();
                for order in ctx.representative_orders(&w, DEFAULT_ENUMERATION_CAP).unwrap() {
                    let letters: Vec<_> = order.iter().map(|&i| w.letters()[i]).collect();
                    assert_eq!(r_gamma_of(&ctx, &letters), r, "{name} {w}");
                    let keys = slot_keys(&ctx, &letters);
                    let rebuilt: BTreeMap<_, _> = keys
                        .into_iter()
                        .zip(&order)
                        .map(|(key, &i)| {
                            let kind = if tail.contains(&i) { SlotKind::AlphaTail } else { SlotKind::Theta };
                            (key, SlotPayload { kind, element: w.letters()[i].element })
                        })
                        .collect();
                    assert_eq!(rebuilt, alpha, "{name} {w} d={d}");
                }
            }
        }
    }
}

#[test]
fn distance_to_sigma_and_tail_envelope() {
    let eps = 0.01;
    for (name, ctx) in contexts() {
        let m = ctx.graph().max_clique_size();
        let c = measure_constants(ctx.all_vertex_data(), eps).unwrap();
        let k = GraphKernel::new(&ctx, params(c.n, eps)).unwrap();
        let ball = ctx.ball(3);
        for d in 1..=4 {
            let t = k.tail_factorization_bound(&ball, d).unwrap();
            assert!(t.max_identity_residual < 1e-12, "{name}");
            let envelope = tail_envelope(c.b, d, m, eps);
            assert!(t.bound <= envelope, "{name} d={d}: {} > {envelope}", t.bound);
        }
    }
}

#[test]
fn sigma_is_positive_with_unit_diagonal() {
    for (name, ctx) in contexts() {
        let k = GraphKernel::new(&ctx, params(10, 0.01)).unwrap();
        let m = KernelMatrix::from_kernel(ctx.ball(3), |a, b| k.sigma_gamma(a, b)).unwrap();
        for i in 0..m.dim() {
            assert!((m.values()[(i, i)] - 1.0).abs() < 1e-12);
        }
        let r = is_psd(&m, 1e-9);
        assert!(r.psd, "{name}: {}", r.min_eigenvalue);
    }
}

#[test]
fn r_gamma_distance_is_conditionally_negative_definite() {
    for (name, ctx) in contexts() {
        let m = KernelMatrix::from_kernel(ctx.ball(3), |a, b| Ok(r_gamma_dist_sq(&ctx, a, b))).unwrap();
        assert!(is_cnd(&m, 1e-9).is_cnd(), "{name}");
    }
}

#[test]
fn closed_form_converges_pointwise() {
    for (_, ctx) in contexts() {
        for g in ctx.ball(3) {
            let p = proper_generator(&ctx, &g);
            for n in [1, 10, 100, 1000] {
                assert!((phi_gamma_closed(&ctx, n, &g) - 1.0).abs() <= p / f64::from(n) + 1e-15);
            }
        }
    }
}

#[test]
fn psi_examples_from_single_letters() {
    let ctx = fixtures::f2(fixtures::d1());
    let k = GraphKernel::new(&ctx, KernelParams::new(1, 1.0, 0.5, 8).unwrap()).unwrap();
    let su = ctx.reduce(&[S_U]).unwrap();
    let tv = ctx.reduce(&[T_V]).unwrap();
    let rel = ctx.multiply(&ctx.inverse(&tv).unwrap(), &su).unwrap();
    assert_eq!(rel.letters(), &[T_V, S_U]);
    assert!((k.psi_gamma(&su, &tv).unwrap() - phi_gamma_closed(&ctx, 1, &rel)).abs() < 1e-14);
}
