//! Slot-tensor kernels on the graph product.
//!
//! Every letter `γᵢ` of a reduced word `γ = γ₁⋯γ_m` owns the slot keyed by
//! the coset `γ₁⋯γ_{i−1}·G(st(vᵢ))` and the vertex `vᵢ`. Slots untouched by
//! a word hold the vacuum `θ(1_v)`, so a pairing of two slot maps is the
//! product of per-slot pairings over the union of their keys.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::error::Error;
use crate::group::Element;
use crate::hilbert::{slot_inner, SlotKind, VertexSlots};
use crate::linalg::{dist_sq, norm_sq};
use crate::word::{GraphProductContext, Letter, ReducedWord, Vertex, DEFAULT_ENUMERATION_CAP};

/// Default bound on `|η⁻¹γ|_r` handled by [`GraphKernel::psi_gamma`].
pub const DEFAULT_D_CAP: usize = 8;
/// Value returned by [`schedule_n`] when the schedule overflows.
pub const DEFAULT_N_MAX: u32 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelParams {
    pub n: u32,
    pub eps: f64,
    pub delta: f64,
    pub d_cap: usize,
}

impl KernelParams {
    pub fn new(n: u32, eps: f64, delta: f64, d_cap: usize) -> Result<Self, Error> {
        if n == 0 {
            return Err(Error::InvalidParams("n must be at least 1"));
        }
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(Error::InvalidParams("eps must be positive and finite"));
        }
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(Error::InvalidParams("delta must be positive and finite"));
        }
        Ok(KernelParams { n, eps, delta, d_cap })
    }
}

/// A slot index: canonical coset representative and vertex.
pub type SlotKey = (ReducedWord, Vertex);

/// Finitely supported slot assignment.
pub type SlotMap<T> = BTreeMap<SlotKey, T>;

/// Slot keys of the letters of `letters`, which must be a reduced sequence.
pub fn slot_keys(ctx: &GraphProductContext, letters: &[Letter]) -> Vec<SlotKey> {
    (0..letters.len())
        .map(|i| (ctx.coset_representative_of(&letters[..i], letters[i].vertex), letters[i].vertex))
        .collect()
}

/// `R_Γ(γ) = ⊕ᵢ R_{vᵢ}(γᵢ)`, accumulated per slot.
pub fn r_gamma(ctx: &GraphProductContext, gamma: &ReducedWord) -> SlotMap<Vec<f64>> {
    r_gamma_of(ctx, gamma.letters())
}

/// [`r_gamma`] evaluated on any reduced representative.
pub fn r_gamma_of(ctx: &GraphProductContext, letters: &[Letter]) -> SlotMap<Vec<f64>> {
    let mut map: SlotMap<Vec<f64>> = BTreeMap::new();
    for (key, l) in slot_keys(ctx, letters).into_iter().zip(letters) {
        let r = ctx.vertex_data(l.vertex).r(l.element);
        let entry = map.entry(key).or_insert_with(|| alloc::vec![0.0; r.len()]);
        entry.iter_mut().zip(r).for_each(|(e, x)| *e += x);
    }
    map
}

/// `‖R_Γ(γ) − R_Γ(η)‖²`, absent slots counting as zero.
pub fn r_gamma_dist_sq(ctx: &GraphProductContext, gamma: &ReducedWord, eta: &ReducedWord) -> f64 {
    let a = r_gamma(ctx, gamma);
    let b = r_gamma(ctx, eta);
    let keys: BTreeSet<&SlotKey> = a.keys().chain(b.keys()).collect();
    keys.into_iter()
        .map(|k| match (a.get(k), b.get(k)) {
            (Some(x), Some(y)) => dist_sq(x, y),
            (Some(x), None) | (None, Some(x)) => norm_sq(x),
            (None, None) => 0.0,
        })
        .sum()
}

/// `e^{−‖R_Γ(γ) − R_Γ(η)‖²/n}`.
pub fn expo_r_gamma_inner(ctx: &GraphProductContext, n: u32, gamma: &ReducedWord, eta: &ReducedWord) -> f64 {
    libm::exp(-r_gamma_dist_sq(ctx, gamma, eta) / f64::from(n))
}

/// `|γ|_r + Σᵢ (φ(γᵢ) − φ(1))`.
pub fn proper_generator(ctx: &GraphProductContext, gamma: &ReducedWord) -> f64 {
    gamma.len() as f64
        + gamma
            .letters()
            .iter()
            .map(|l| {
                let d = ctx.vertex_data(l.vertex);
                d.phi(l.element) - d.phi_identity()
            })
            .sum::<f64>()
}

/// `φ_{n,Γ}(γ) = e^{−(|γ|_r + Σᵢ(φ(γᵢ) − φ(1)))/n}`.
pub fn phi_gamma_closed(ctx: &GraphProductContext, n: u32, gamma: &ReducedWord) -> f64 {
    libm::exp(-proper_generator(ctx, gamma) / f64::from(n))
}

/// `⌊1/(M ln(1 + B√ε))⌋`, at least 1, with overflow mapped to `n_max`.
pub fn schedule_n_capped(m: usize, b: f64, eps: f64, n_max: u32) -> u32 {
    let x = 1.0 / (m as f64 * libm::log1p(b * libm::sqrt(eps)));
    if !x.is_finite() || x >= f64::from(n_max) {
        return n_max;
    }
    (libm::floor(x) as u32).max(1)
}

pub fn schedule_n(m: usize, b: f64, eps: f64) -> u32 {
    schedule_n_capped(m, b, eps, DEFAULT_N_MAX)
}

/// Upper envelope `2√(BdM)(1 + B√ε)^{dM} ε^{1/4}` for `‖ψ_{n,Γ,d} − σ_{n,Γ}‖_{B₂}`.
pub fn tail_envelope(b: f64, d: usize, m: usize, eps: f64) -> f64 {
    let dm = (d * m) as f64;
    2.0 * libm::sqrt(b * dm) * libm::pow(1.0 + b * libm::sqrt(eps), dm) * libm::pow(eps, 0.25)
}

/// Payload of one slot: which vector of which element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SlotPayload {
    pub kind: SlotKind,
    pub element: Element,
}

/// Pairing table of one vertex: `table[k₁][k₂][x·|G|+y] = ⟨k₁(x), k₂(y)⟩`.
#[derive(Clone, Debug)]
struct PairingTable {
    order: usize,
    values: [[Vec<f64>; 3]; 3],
}

const KINDS: [SlotKind; 3] = [SlotKind::Theta, SlotKind::AlphaTail, SlotKind::BetaTail];

fn kind_index(k: SlotKind) -> usize {
    match k {
        SlotKind::Theta => 0,
        SlotKind::AlphaTail => 1,
        SlotKind::BetaTail => 2,
    }
}

impl PairingTable {
    fn new(slots: &VertexSlots<'_>) -> Result<Self, Error> {
        let order = slots.data().order();
        let mut values: [[Vec<f64>; 3]; 3] = Default::default();
        for (i, &k1) in KINDS.iter().enumerate() {
            for (j, &k2) in KINDS.iter().enumerate() {
                let mut t = Vec::with_capacity(order * order);
                for x in 0..order {
                    let u = slots.vector(k1, x);
                    for y in 0..order {
                        t.push(slot_inner(&u, &slots.vector(k2, y))?);
                    }
                }
                values[i][j] = t;
            }
        }
        Ok(PairingTable { order, values })
    }

    fn get(&self, a: SlotPayload, b: SlotPayload) -> f64 {
        self.values[kind_index(a.kind)][kind_index(b.kind)][a.element * self.order + b.element]
    }
}

const VACUUM: SlotPayload = SlotPayload { kind: SlotKind::Theta, element: 0 };

/// The kernels `ψ_{n,Γ,d}`, `ψ_{n,Γ}` and `σ_{n,Γ}` for fixed parameters.
#[derive(Clone, Debug)]
pub struct GraphKernel<'a> {
    ctx: &'a GraphProductContext,
    params: KernelParams,
    slots: Vec<VertexSlots<'a>>,
    tables: Vec<PairingTable>,
    cap: usize,
}

impl<'a> GraphKernel<'a> {
    /// Fails if `(n, ε)` is not admissible for some vertex datum.
    pub fn new(ctx: &'a GraphProductContext, params: KernelParams) -> Result<Self, Error> {
        let slots = ctx
            .all_vertex_data()
            .iter()
            .enumerate()
            .map(|(v, d)| VertexSlots::new(d, v, params.n, params.eps))
            .collect::<Result<Vec<_>, _>>()?;
        let tables = slots.iter().map(PairingTable::new).collect::<Result<Vec<_>, _>>()?;
        Ok(GraphKernel { ctx, params, slots, tables, cap: DEFAULT_ENUMERATION_CAP })
    }

    pub fn params(&self) -> KernelParams {
        self.params
    }

    pub fn context(&self) -> &'a GraphProductContext {
        self.ctx
    }

    pub fn vertex_slots(&self, v: Vertex) -> &VertexSlots<'a> {
        &self.slots[v]
    }

    fn tailed_map(&self, gamma: &ReducedWord, d: usize, tail_kind: SlotKind) -> Result<SlotMap<SlotPayload>, Error> {
        if d > self.params.d_cap {
            return Err(Error::DCapExceeded { distance: d, cap: self.params.d_cap });
        }
        let tail = self.ctx.d_tail_occurrences(gamma, d, self.cap)?;
        let mut map = BTreeMap::new();
        for (i, (key, l)) in slot_keys(self.ctx, gamma.letters()).into_iter().zip(gamma.letters()).enumerate() {
            let kind = if tail.contains(&i) { tail_kind } else { SlotKind::Theta };
            let vertex = key.1;
            if map.insert(key, SlotPayload { kind, element: l.element }).is_some() {
                return Err(Error::SlotCollision { vertex });
            }
        }
        Ok(map)
    }

    /// `α_{n,Γ,d}(γ)`: tail letters carry `α`-tail vectors, the rest `θ`.
    pub fn alpha_gamma_d(&self, gamma: &ReducedWord, d: usize) -> Result<SlotMap<SlotPayload>, Error> {
        self.tailed_map(gamma, d, SlotKind::AlphaTail)
    }

    /// `β_{n,Γ,d}(γ)`: tail letters carry `β`-tail vectors, the rest `θ`.
    pub fn beta_gamma_d(&self, gamma: &ReducedWord, d: usize) -> Result<SlotMap<SlotPayload>, Error> {
        self.tailed_map(gamma, d, SlotKind::BetaTail)
    }

    /// `ζ_{n,Γ}(γ)`: every letter carries `θ`.
    pub fn zeta(&self, gamma: &ReducedWord) -> Result<SlotMap<SlotPayload>, Error> {
        self.tailed_map(gamma, 0, SlotKind::Theta)
    }

    /// Pairing of two slot maps, with the vacuum in every absent slot.
    pub fn pair(&self, a: &SlotMap<SlotPayload>, b: &SlotMap<SlotPayload>) -> f64 {
        let keys: BTreeSet<&SlotKey> = a.keys().chain(b.keys()).collect();
        keys.into_iter()
            .map(|k| {
                let table = &self.tables[k.1];
                table.get(*a.get(k).unwrap_or(&VACUUM), *b.get(k).unwrap_or(&VACUUM))
            })
            .product()
    }

    /// `ψ_{n,Γ,d}(γ, η) = ⟨α_{n,Γ,d}(γ), β_{n,Γ,d}(η)⟩`.
    pub fn psi_gamma_d(&self, gamma: &ReducedWord, eta: &ReducedWord, d: usize) -> Result<f64, Error> {
        Ok(self.pair(&self.alpha_gamma_d(gamma, d)?, &self.beta_gamma_d(eta, d)?))
    }

    /// `ψ_{n,Γ}(γ, η) = e^{−‖R_Γ(γ)−R_Γ(η)‖²/n} e^{−d/n} ψ_{n,Γ,d}(γ, η)` with
    /// `d = |η⁻¹γ|_r`, the only term of the sum over `d` that survives.
    pub fn psi_gamma(&self, gamma: &ReducedWord, eta: &ReducedWord) -> Result<f64, Error> {
        let d = self.ctx.distance(gamma, eta)?;
        if d > self.params.d_cap {
            return Err(Error::DCapExceeded { distance: d, cap: self.params.d_cap });
        }
        let n = f64::from(self.params.n);
        Ok(expo_r_gamma_inner(self.ctx, self.params.n, gamma, eta) * libm::exp(-(d as f64) / n) * self.psi_gamma_d(gamma, eta, d)?)
    }

    /// `σ_{n,Γ}(γ, η) = ⟨ζ(γ), ζ(η)⟩`.
    pub fn sigma_gamma(&self, gamma: &ReducedWord, eta: &ReducedWord) -> Result<f64, Error> {
        Ok(self.pair(&self.zeta(gamma)?, &self.zeta(eta)?))
    }

    /// Factorization bound on `‖ψ_{n,Γ,d} − σ_{n,Γ}‖_{B₂}` over `points`,
    /// from `ψ_d − σ = ⟨α − ζ, β⟩ + ⟨ζ, β − ζ⟩`.
    pub fn tail_factorization_bound(&self, points: &[ReducedWord], d: usize) -> Result<TailBound, Error> {
        let mut bound = TailBound::default();
        for p in points {
            let a = self.alpha_gamma_d(p, d)?;
            let b = self.beta_gamma_d(p, d)?;
            let z = self.zeta(p)?;
            let (aa, bb) = (self.pair(&a, &a), self.pair(&b, &b));
            let a_minus_z = aa - 2.0 * self.pair(&a, &z) + 1.0;
            let b_minus_z = bb - 2.0 * self.pair(&z, &b) + 1.0;
            bound.max_alpha_norm_sq = bound.max_alpha_norm_sq.max(aa);
            bound.max_beta_norm_sq = bound.max_beta_norm_sq.max(bb);
            bound.max_alpha_gap_sq = bound.max_alpha_gap_sq.max(a_minus_z);
            bound.max_beta_gap_sq = bound.max_beta_gap_sq.max(b_minus_z);
            bound.max_identity_residual = bound
                .max_identity_residual
                .max(libm::fabs(a_minus_z - (aa - 1.0)))
                .max(libm::fabs(b_minus_z - (bb - 1.0)));
        }
        let root = |x: f64| libm::sqrt(x.max(0.0));
        bound.bound = root(bound.max_alpha_gap_sq) * root(bound.max_beta_norm_sq) + root(bound.max_beta_gap_sq);
        Ok(bound)
    }
}

/// Output of [`GraphKernel::tail_factorization_bound`].
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct TailBound {
    pub max_alpha_norm_sq: f64,
    pub max_beta_norm_sq: f64,
    /// `max ‖α_{n,Γ,d}(γ) − ζ(γ)‖²`.
    pub max_alpha_gap_sq: f64,
    pub max_beta_gap_sq: f64,
    /// Largest deviation from `‖α − ζ‖² = ‖α‖² − 1` (and the `β` analogue).
    pub max_identity_residual: f64,
    pub bound: f64,
}
