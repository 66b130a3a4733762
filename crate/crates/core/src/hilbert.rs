//! Exponential-vector calculus and the per-vertex slot vectors.
//!
//! `Exp_o(ξ) = e^{−‖ξ‖²} Exp(√2 ξ)` is kept symbolic: only its base vector is
//! stored and `⟨Exp_o(ξ), Exp_o(η)⟩ = e^{−‖ξ−η‖²}` is used for every pairing.
//!
//! For a vertex datum and scalars `(n, ε)` the building blocks are
//!
//! ```text
//! α_S(x) = e^{φ(1)/2n} Exp_o( S(x)/√n)
//! β_S(x) = e^{φ(1)/2n} Exp_o(−S(x)/√n)
//! avg(x) = (α_S(x) + β_S(x)) / (2 + √(2ε))
//! D(x)   = √((1 − ‖avg(x)‖²)/2)
//! ```
//!
//! and a slot vector is a finite combination of exponential vectors plus four
//! real coordinates (two `ℝ²` blocks).

use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::group::{admissible_n, Element, VertexKernelScalars, WeakHaagerupVertexData};
use crate::linalg::{add_sq, dist_sq, dot, norm_sq};
use crate::word::Vertex;

/// Guard below which `D(x)` is treated as degenerate.
pub const D_GUARD: f64 = 1e-14;

/// The exponential vector `Exp_o(ξ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpoVector {
    pub base: Vec<f64>,
}

impl ExpoVector {
    pub fn new(base: Vec<f64>) -> Self {
        ExpoVector { base }
    }
}

/// `⟨Exp_o(ξ), Exp_o(η)⟩ = e^{−‖ξ−η‖²}`.
pub fn expo_inner(a: &ExpoVector, b: &ExpoVector) -> Result<f64, Error> {
    check_dims(a, b)?;
    Ok(libm::exp(-dist_sq(&a.base, &b.base)))
}

/// The same pairing computed from the tensor-power expansion of `Exp`,
/// keeping degrees `0..=order`:
/// `e^{−‖ξ‖²} e^{−‖η‖²} Σ_k ⟨√2ξ, √2η⟩ᵏ / k!`.
pub fn truncated_expo_inner(a: &ExpoVector, b: &ExpoVector, order: u32) -> Result<f64, Error> {
    check_dims(a, b)?;
    let cross = 2.0 * dot(&a.base, &b.base);
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..=order {
        term *= cross / f64::from(k);
        sum += term;
    }
    Ok(libm::exp(-norm_sq(&a.base)) * libm::exp(-norm_sq(&b.base)) * sum)
}

fn check_dims(a: &ExpoVector, b: &ExpoVector) -> Result<(), Error> {
    if a.base.len() != b.base.len() {
        return Err(Error::DimensionMismatch { what: "exponential vector", expected: a.base.len(), found: b.base.len() });
    }
    Ok(())
}

/// `⟨α_S(x), β_S(y)⟩ = e^{φ(1)/n} e^{−‖S(x)+S(y)‖²/n}`.
pub fn alpha_beta_s_inner(data: &WeakHaagerupVertexData, n: u32, x: Element, y: Element) -> f64 {
    let n = f64::from(n);
    libm::exp((data.phi_identity() - add_sq(data.s(x), data.s(y))) / n)
}

/// `⟨α_S(x), α_S(y)⟩ = ⟨β_S(x), β_S(y)⟩ = e^{φ(1)/n} e^{−‖S(x)−S(y)‖²/n}`.
pub fn alpha_alpha_s_inner(data: &WeakHaagerupVertexData, n: u32, x: Element, y: Element) -> f64 {
    let n = f64::from(n);
    libm::exp((data.phi_identity() - dist_sq(data.s(x), data.s(y))) / n)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SlotKind {
    Theta,
    AlphaTail,
    BetaTail,
}

/// A per-vertex slot vector: `Σ cᵢ Exp_o(ξᵢ) ⊕ (b₀, b₁) ⊕ (b₂, b₃)`.
#[derive(Clone, Debug, PartialEq)]
pub struct VertexSlotVector {
    pub kind: SlotKind,
    pub vertex: Vertex,
    pub element: Element,
    pub terms: Vec<(f64, ExpoVector)>,
    pub blocks: [f64; 4],
}

impl VertexSlotVector {
    /// Whether the `D` entries of a Theta vector sit in the second block.
    pub fn identity_flag(&self) -> bool {
        self.element == 0
    }
}

/// Inner product of two slot vectors of the same vertex.
pub fn slot_inner(u: &VertexSlotVector, w: &VertexSlotVector) -> Result<f64, Error> {
    if u.vertex != w.vertex {
        return Err(Error::VertexMismatch { left: u.vertex, right: w.vertex });
    }
    let mut sum = 0.0;
    for (a, xa) in &u.terms {
        for (b, xb) in &w.terms {
            sum += a * b * expo_inner(xa, xb)?;
        }
    }
    Ok(sum + dot(&u.blocks, &w.blocks))
}

/// All slot vectors of one vertex at fixed `(n, ε)`, with the scalars `D`,
/// `C^α` and `C^β` precomputed for every element.
#[derive(Clone, Debug)]
pub struct VertexSlots<'a> {
    data: &'a WeakHaagerupVertexData,
    vertex: Vertex,
    scalars: VertexKernelScalars,
    /// `e^{φ(1)/2n}`.
    scale: f64,
    /// `2 + √(2ε)`.
    denom: f64,
    avg_sq: Vec<f64>,
    d: Vec<f64>,
}

impl<'a> VertexSlots<'a> {
    pub fn new(data: &'a WeakHaagerupVertexData, vertex: Vertex, n: u32, eps: f64) -> Result<Self, Error> {
        let scalars = VertexKernelScalars::new(n, eps, data.phi_identity())?;
        let scale = libm::exp(data.phi_identity() / (2.0 * f64::from(n)));
        let denom = 2.0 + libm::sqrt(2.0 * eps);
        let mut slots = VertexSlots { data, vertex, scalars, scale, denom, avg_sq: vec![], d: vec![] };
        for x in 0..data.order() {
            let a2 = slots.avg_inner(x, x);
            if a2 > 1.0 {
                return Err(Error::AverageOutsideUnitBall { vertex, element: x, norm_sq: a2 });
            }
            let d = libm::sqrt((1.0 - a2) / 2.0);
            if d < D_GUARD {
                return Err(Error::SingularAverage { vertex, element: x, value: d });
            }
            slots.avg_sq.push(a2);
            slots.d.push(d);
        }
        Ok(slots)
    }

    pub fn data(&self) -> &'a WeakHaagerupVertexData {
        self.data
    }

    pub fn scalars(&self) -> VertexKernelScalars {
        self.scalars
    }

    fn ab(&self, x: Element, y: Element) -> f64 {
        alpha_beta_s_inner(self.data, self.scalars.n, x, y)
    }

    fn aa(&self, x: Element, y: Element) -> f64 {
        alpha_alpha_s_inner(self.data, self.scalars.n, x, y)
    }

    /// `⟨α_S(x), avg(y)⟩`, which also equals `⟨avg(y), β_S(x)⟩`.
    pub fn alpha_avg(&self, x: Element, y: Element) -> f64 {
        (self.aa(x, y) + self.ab(x, y)) / self.denom
    }

    /// `⟨avg(x), avg(y)⟩`.
    pub fn avg_inner(&self, x: Element, y: Element) -> f64 {
        (2.0 * self.aa(x, y) + self.ab(x, y) + self.ab(y, x)) / (self.denom * self.denom)
    }

    pub fn avg_norm_sq(&self, x: Element) -> f64 {
        self.avg_sq[x]
    }

    pub fn d_value(&self, x: Element) -> f64 {
        self.d[x]
    }

    /// `C^α(x, y) = ⟨α_S(x), β_S(y) − avg(y)⟩ / D(y)`.
    pub fn c_alpha(&self, x: Element, y: Element) -> f64 {
        (self.ab(x, y) - self.alpha_avg(x, y)) / self.d[y]
    }

    /// `C^β(x, y) = ⟨α_S(y) − avg(y), β_S(x)⟩ / D(y)`.
    pub fn c_beta(&self, x: Element, y: Element) -> f64 {
        (self.ab(y, x) - self.alpha_avg(x, y)) / self.d[y]
    }

    fn s_over_root_n(&self, x: Element, sign: f64) -> ExpoVector {
        let r = libm::sqrt(f64::from(self.scalars.n));
        ExpoVector::new(self.data.s(x).iter().map(|s| sign * s / r).collect())
    }

    /// `θ(x) = avg(x) ⊕ (D, D) ⊕ (0, 0)` for `x ≠ 1` and
    /// `avg(1) ⊕ (0, 0) ⊕ (D, D)` at the identity.
    pub fn theta(&self, x: Element) -> VertexSlotVector {
        let c = self.scale / self.denom;
        let d = self.d[x];
        VertexSlotVector {
            kind: SlotKind::Theta,
            vertex: self.vertex,
            element: x,
            terms: vec![(c, self.s_over_root_n(x, 1.0)), (c, self.s_over_root_n(x, -1.0))],
            blocks: if x == 0 { [0.0, 0.0, d, d] } else { [d, d, 0.0, 0.0] },
        }
    }

    /// `α_S(x) ⊕ (C^α(x,x), 0) ⊕ (C^α(x,1), 0)`.
    pub fn alpha_tail(&self, x: Element) -> VertexSlotVector {
        VertexSlotVector {
            kind: SlotKind::AlphaTail,
            vertex: self.vertex,
            element: x,
            terms: vec![(self.scale, self.s_over_root_n(x, 1.0))],
            blocks: [self.c_alpha(x, x), 0.0, self.c_alpha(x, 0), 0.0],
        }
    }

    /// `β_S(x) ⊕ (0, C^β(x,x)) ⊕ (0, C^β(x,1))`.
    pub fn beta_tail(&self, x: Element) -> VertexSlotVector {
        VertexSlotVector {
            kind: SlotKind::BetaTail,
            vertex: self.vertex,
            element: x,
            terms: vec![(self.scale, self.s_over_root_n(x, -1.0))],
            blocks: [0.0, self.c_beta(x, x), 0.0, self.c_beta(x, 0)],
        }
    }

    pub fn vector(&self, kind: SlotKind, x: Element) -> VertexSlotVector {
        match kind {
            SlotKind::Theta => self.theta(x),
            SlotKind::AlphaTail => self.alpha_tail(x),
            SlotKind::BetaTail => self.beta_tail(x),
        }
    }

    /// Largest `|C^α(x,y)|`, `|C^β(x,y)|` over all pairs of elements.
    pub fn sup_c(&self) -> f64 {
        let n = self.data.order();
        let mut sup = 0.0f64;
        for x in 0..n {
            for y in 0..n {
                sup = sup.max(libm::fabs(self.c_alpha(x, y))).max(libm::fabs(self.c_beta(x, y)));
            }
        }
        sup
    }
}

/// Builds `θ(x)` for a single vertex datum.
pub fn make_theta(data: &WeakHaagerupVertexData, n: u32, eps: f64, x: Element) -> Result<VertexSlotVector, Error> {
    Ok(VertexSlots::new(data, 0, n, eps)?.theta(x))
}

pub fn c_alpha(data: &WeakHaagerupVertexData, n: u32, eps: f64, x: Element, y: Element) -> Result<f64, Error> {
    Ok(VertexSlots::new(data, 0, n, eps)?.c_alpha(x, y))
}

pub fn c_beta(data: &WeakHaagerupVertexData, n: u32, eps: f64, x: Element, y: Element) -> Result<f64, Error> {
    Ok(VertexSlots::new(data, 0, n, eps)?.c_beta(x, y))
}

/// Measured stand-ins for the constants `A` and `B` of the norm estimates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeasuredConstants {
    /// Index at which the constants were measured.
    pub n: u32,
    pub eps: f64,
    /// `sup |C^α|, |C^β|` over all vertices and pairs.
    pub sup_c: f64,
    /// `sup_c / ε^{1/4}`.
    pub a: f64,
    /// `(ε + 2A²√ε)/√ε`.
    pub b: f64,
}

/// Smallest index at which every vertex satisfies `e^{φ(1)/n} ≤ 1 + ε`.
pub fn n_min(data: &[WeakHaagerupVertexData], eps: f64) -> u32 {
    data.iter().map(|d| admissible_n(d.phi_identity(), eps)).max().unwrap_or(1)
}

/// Measures `A` and `B` over all vertex data at `n_min(ε)`.
pub fn measure_constants(data: &[WeakHaagerupVertexData], eps: f64) -> Result<MeasuredConstants, Error> {
    let n = n_min(data, eps);
    let mut sup_c = 0.0f64;
    for (v, d) in data.iter().enumerate() {
        sup_c = sup_c.max(VertexSlots::new(d, v, n, eps)?.sup_c());
    }
    let a = sup_c / libm::pow(eps, 0.25);
    let root = libm::sqrt(eps);
    let b = (eps + 2.0 * a * a * root) / root;
    Ok(MeasuredConstants { n, eps, sup_c, a, b })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn expo_examples() {
        let z = ExpoVector::new(vec![0.0, 0.0]);
        let e1 = ExpoVector::new(vec![1.0, 0.0]);
        let e2 = ExpoVector::new(vec![0.0, 1.0]);
        assert_eq!(expo_inner(&z, &z).unwrap(), 1.0);
        assert!(close(expo_inner(&e1, &z).unwrap(), 0.36787944117144233, 1e-16));
        assert!(close(expo_inner(&e1, &e2).unwrap(), 0.1353352832366127, 1e-16));
        assert!(expo_inner(&e1, &ExpoVector::new(vec![1.0])).is_err());
        assert_eq!(truncated_expo_inner(&z, &z, 0).unwrap(), 1.0);
        assert!(close(truncated_expo_inner(&e1, &z, 12).unwrap(), 0.36787944117144233, 1e-8));
        assert!(close(truncated_expo_inner(&e1, &e2, 0).unwrap(), 0.1353352832366127, 1e-16));
    }

    #[test]
    fn alpha_beta_examples() {
        let d1 = fixtures::d1();
        for x in 0..2 {
            assert!(close(alpha_beta_s_inner(&d1, 3, x, x), 1.0, 1e-15));
        }
        assert!(close(alpha_beta_s_inner(&d1, 1, 0, 1), 1.6487212707001282, 1e-15));
        let d0 = fixtures::d0();
        assert_eq!(alpha_beta_s_inner(&d0, 4, 0, 1), 1.0);
    }

    #[test]
    fn theta_d0_values() {
        let d0 = fixtures::d0();
        let slots = VertexSlots::new(&d0, 0, 1, 0.01).unwrap();
        assert!(close(slots.avg_norm_sq(1), 0.8722796331028916, 1e-14));
        assert!(close(slots.d_value(1), 0.2527057250015405, 1e-14));
        assert!(close(slots.alpha_avg(1, 1), 0.9339591174686886, 1e-14));
        assert!(close(slots.c_alpha(1, 1), 0.26133512618643195, 1e-13));
        let th = make_theta(&d0, 1, 0.01, 1).unwrap();
        assert!(close(slot_inner(&th, &th).unwrap(), 1.0, 1e-14));
        assert!(!th.identity_flag());
        assert!(make_theta(&d0, 1, 0.01, 0).unwrap().identity_flag());
    }

    #[test]
    fn small_eps_drives_d_to_zero() {
        let d0 = fixtures::d0();
        let s = VertexSlots::new(&d0, 0, 1, 1e-12).unwrap();
        assert!(s.avg_norm_sq(1) > 0.999998);
        assert!(s.d_value(1) < 1e-3);
    }

    #[test]
    fn inadmissible_n_is_rejected() {
        let d1 = fixtures::d1();
        assert!(matches!(VertexSlots::new(&d1, 0, 1, 0.01), Err(Error::AverageOutsideUnitBall { .. })));
        assert!(VertexSlots::new(&d1, 0, 10, 0.01).is_ok());
        assert!(VertexSlots::new(&d1, 0, 0, 0.01).is_err());
    }

    #[test]
    fn slot_case_table() {
        let d1 = fixtures::d1();
        let s = VertexSlots::new(&d1, 0, 1, 1.0).unwrap();
        for x in 0..2 {
            assert!(close(slot_inner(&s.alpha_tail(x), &s.beta_tail(x)).unwrap(), 1.0, 1e-14));
            assert!(close(slot_inner(&s.theta(x), &s.theta(x)).unwrap(), 1.0, 1e-14));
            assert!(close(slot_inner(&s.alpha_tail(x), &s.theta(x)).unwrap(), 1.0, 1e-14));
            assert!(close(slot_inner(&s.theta(x), &s.beta_tail(x)).unwrap(), 1.0, 1e-14));
        }
        let v = slot_inner(&s.alpha_tail(1), &s.theta(0)).unwrap();
        assert!(close(v, 1.6487212707001282, 1e-14));
        assert!(close(v, alpha_beta_s_inner(&d1, 1, 1, 0), 1e-14));
        let other = VertexSlots::new(&d1, 1, 1, 1.0).unwrap();
        assert!(slot_inner(&s.theta(0), &other.theta(0)).is_err());
    }

    #[test]
    fn measured_constants_d0() {
        let m = measure_constants(&[fixtures::d0()], 0.01).unwrap();
        assert_eq!(m.n, 1);
        assert!(close(m.a, 0.8264142313566382, 1e-12));
        assert!(close(m.b, 1.4659209635775663, 1e-12));
        assert_eq!(n_min(&[fixtures::d0(), fixtures::d1()], 0.01), 101);
    }
}
