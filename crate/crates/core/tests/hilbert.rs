mod common;

use graphwh::fixtures;
use graphwh::group::WeakHaagerupVertexData;
use graphwh::hilbert::{
    alpha_beta_s_inner, expo_inner, measure_constants, slot_inner, truncated_expo_inner, ExpoVector, SlotKind,
    VertexSlots,
};
use proptest::prelude::*;

/// Degree-`order` part of `Exp_o(ξ)` as explicit coordinates: the tensor
/// powers `(√2ξ)^{⊗k}/√k!` laid out one after another and scaled by `e^{−‖ξ‖²}`.
fn materialize(xi: &[f64], order: u32) -> Vec<f64> {
    let scaled: Vec<f64> = xi.iter().map(|v| v * std::f64::consts::SQRT_2).collect();
    let mut out = vec![1.0];
    let mut power = vec![1.0];
    let mut fact = 1.0f64;
    for k in 1..=order {
        power = power.iter().flat_map(|p| scaled.iter().map(move |s| p * s)).collect();
        fact *= f64::from(k);
        out.extend(power.iter().map(|p| p / fact.sqrt()));
    }
    let norm: f64 = xi.iter().map(|v| v * v).sum();
    out.iter().map(|v| v * (-norm).exp()).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[test]
fn materialized_tensors_match_truncation() {
    let mut rng = common::rng(7);
    use rand::Rng;
    for _ in 0..20 {
        let a: Vec<f64> = (0..2).map(|_| rng.random_range(-0.7..0.7)).collect();
        let b: Vec<f64> = (0..2).map(|_| rng.random_range(-0.7..0.7)).collect();
        for order in [0, 1, 3, 6, 9] {
            let explicit = dot(&materialize(&a, order), &materialize(&b, order));
            let formula = truncated_expo_inner(&ExpoVector::new(a.clone()), &ExpoVector::new(b.clone()), order).unwrap();
            assert!((explicit - formula).abs() < 1e-12, "order {order}");
        }
    }
}

#[test]
fn worst_case_truncation_exceeds_one_in_ten_to_the_eighth() {
    let e1 = ExpoVector::new(vec![1.0, 0.0]);
    let err = (truncated_expo_inner(&e1, &e1, 12).unwrap() - 1.0).abs();
    assert!(err > 1e-7 && err < 3e-7, "{err}");
}

#[test]
fn truncation_error_shrinks_with_order() {
    let a = ExpoVector::new(vec![0.6, -0.5, 0.2]);
    let b = ExpoVector::new(vec![0.4, 0.7, -0.3]);
    let exact = expo_inner(&a, &b).unwrap();
    let mut last = f64::INFINITY;
    for order in 0..14 {
        let err = (truncated_expo_inner(&a, &b, order).unwrap() - exact).abs();
        assert!(err <= last + 1e-16);
        last = err;
    }
    assert!(last < 1e-10);
}

/// `‖avg(x)‖²` evaluated from scalar inputs only.
fn avg_norm_sq_oracle(phi1: f64, n: f64, eps: f64) -> f64 {
    let c = 2.0 + (2.0 * eps).sqrt();
    2.0 * ((phi1 / n).exp() + 1.0) / (c * c)
}

fn check_vertex_identities(data: &WeakHaagerupVertexData, n: u32, eps: f64) {
    let slots = VertexSlots::new(data, 0, n, eps).unwrap();
    for x in 0..data.order() {
        assert!((alpha_beta_s_inner(data, n, x, x) - 1.0).abs() < 1e-12);
        let th = slots.theta(x);
        assert!((slot_inner(&th, &th).unwrap() - 1.0).abs() < 1e-12);
        let lhs = slots.alpha_avg(x, x) + slots.c_alpha(x, x) * slots.d_value(x);
        assert!((lhs - 1.0).abs() < 1e-12);
        let beta_avg = slot_inner(&slots.theta(x), &slots.beta_tail(x)).unwrap() - slots.d_value(x) * slots.c_beta(x, x);
        assert!((beta_avg + slots.c_beta(x, x) * slots.d_value(x) - 1.0).abs() < 1e-12);
        let oracle = avg_norm_sq_oracle(data.phi_identity(), f64::from(n), eps);
        assert!((slots.avg_norm_sq(x) - oracle).abs() < 1e-13);
        let a = slots.alpha_tail(x);
        let sup = slots.sup_c();
        assert!(slot_inner(&a, &a).unwrap() <= (data.phi_identity() / f64::from(n)).exp() + 2.0 * sup * sup + 1e-12);
    }
}

#[test]
fn vertex_identities_on_fixtures() {
    for data in [fixtures::d0(), fixtures::d1(), fixtures::d2()] {
        for (n, eps) in [(10, 0.01), (50, 0.1), (400, 0.001)] {
            check_vertex_identities(&data, n, eps);
        }
    }
}

#[test]
fn slot_pairings_swap_alpha_and_beta() {
    let data = fixtures::d2();
    let s = VertexSlots::new(&data, 0, 20, 0.05).unwrap();
    let swap = |k| match k {
        SlotKind::AlphaTail => SlotKind::BetaTail,
        SlotKind::BetaTail => SlotKind::AlphaTail,
        SlotKind::Theta => SlotKind::Theta,
    };
    let kinds = [SlotKind::Theta, SlotKind::AlphaTail, SlotKind::BetaTail];
    for &k1 in &kinds {
        for &k2 in &kinds {
            for x in 0..3 {
                for y in 0..3 {
                    let a = slot_inner(&s.vector(k1, x), &s.vector(k2, y)).unwrap();
                    let b = slot_inner(&s.vector(swap(k2), y), &s.vector(swap(k1), x)).unwrap();
                    assert!((a - b).abs() < 1e-12, "{k1:?} {k2:?} {x} {y}");
                }
            }
        }
    }
}

#[test]
fn mixed_pairings_reproduce_alpha_beta() {
    let data = fixtures::d2();
    let s = VertexSlots::new(&data, 0, 20, 0.05).unwrap();
    for x in 0..3 {
        for y in 0..3 {
            let ab = alpha_beta_s_inner(&data, 20, x, y);
            assert!((slot_inner(&s.alpha_tail(x), &s.beta_tail(y)).unwrap() - ab).abs() < 1e-12);
        }
        assert!((slot_inner(&s.alpha_tail(x), &s.theta(0)).unwrap() - alpha_beta_s_inner(&data, 20, x, 0)).abs() < 1e-12);
        assert!((slot_inner(&s.theta(0), &s.beta_tail(x)).unwrap() - alpha_beta_s_inner(&data, 20, 0, x)).abs() < 1e-12);
    }
}

#[test]
fn measured_a_bounds_every_c() {
    for data in [fixtures::d0(), fixtures::d1(), fixtures::d2()] {
        let c = measure_constants(std::slice::from_ref(&data), 0.01).unwrap();
        let s = VertexSlots::new(&data, 0, c.n, 0.01).unwrap();
        assert!(s.sup_c() <= c.a * 0.01f64.powf(0.25) + 1e-15);
        assert!((c.b - (0.1 + 2.0 * c.a * c.a)).abs() < 1e-12);
    }
}

proptest! {
    #[test]
    fn truncation_at_twelve_is_accurate(
        a in prop::collection::vec(-1.0f64..1.0, 3),
        b in prop::collection::vec(-1.0f64..1.0, 3),
    ) {
        let scale = |v: Vec<f64>| {
            let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if n > 1.0 { v.iter().map(|x| x / n).collect() } else { v }
        };
        let (a, b) = (ExpoVector::new(scale(a)), ExpoVector::new(scale(b)));
        let exact = expo_inner(&a, &b).unwrap();
        let err = (truncated_expo_inner(&a, &b, 12).unwrap() - exact).abs();
        // Lagrange remainder of the exponential series in z = 2⟨ξ,η⟩.
        let z: f64 = 2.0 * a.base.iter().zip(&b.base).map(|(x, y)| x * y).sum::<f64>();
        let sq = |v: &ExpoVector| v.base.iter().map(|x| x * x).sum::<f64>();
        let fact13: f64 = (1..=13).map(f64::from).product();
        let remainder = (-sq(&a) - sq(&b) + z.abs()).exp() * z.abs().powi(13) / fact13;
        prop_assert!(err <= remainder + 1e-15);
        if z.abs() <= 1.5 {
            prop_assert!(err <= 1e-8);
        }
        prop_assert!((expo_inner(&a, &a).unwrap() - 1.0).abs() == 0.0);
    }

    #[test]
    fn identities_hold_for_admissible_parameters(n in 5u32..500, eps in 0.001f64..1.0) {
        for data in [fixtures::d1(), fixtures::d2()] {
            if let Ok(slots) = VertexSlots::new(&data, 0, n, eps) {
                for x in 0..data.order() {
                    let th = slots.theta(x);
                    prop_assert!((slot_inner(&th, &th).unwrap() - 1.0).abs() < 1e-12);
                    prop_assert!((slot_inner(&slots.alpha_tail(x), &th).unwrap() - 1.0).abs() < 1e-12);
                    prop_assert!((slot_inner(&th, &slots.beta_tail(x)).unwrap() - 1.0).abs() < 1e-12);
                }
            }
        }
    }
}
