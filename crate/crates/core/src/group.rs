//! Finite vertex groups and their weak-Haagerup data `(φ, R, S)`.
//!
//! A vertex datum is a finite group given by its Cayley table together with
//! two real embeddings `R` and `S` such that
//!
//! ```text
//! φ(y⁻¹x) = ‖R(x) − R(y)‖² + ‖S(x) + S(y)‖²
//! ```
//!
//! holds for all `x, y`. `φ` is never an input: it is derived from `(R, S)`
//! at `y = 1` and then cross-checked over all pairs by [`validate_vertex_data`].

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, StructuralError};
use crate::linalg::{add_sq, dist_sq, norm_sq};

/// Index of a group element. The identity is always `0`.
pub type Element = usize;

/// A finite group stored as a row-major Cayley table, `cayley[a][b] = a·b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<Element>,
    inverse: Vec<Element>,
}

impl FiniteGroup {
    /// Builds a group from explicit tables, checking every group axiom.
    pub fn new(cayley: Vec<Vec<Element>>, inverse: Vec<Element>) -> Result<Self, StructuralError> {
        let order = cayley.len();
        if order == 0 {
            return Err(StructuralError::Empty);
        }
        let mut table = Vec::with_capacity(order * order);
        for (row, entries) in cayley.iter().enumerate() {
            if entries.len() != order {
                return Err(StructuralError::NotSquare { row, len: entries.len(), order });
            }
            for &e in entries {
                if e >= order {
                    return Err(StructuralError::EntryOutOfRange { entry: e, order });
                }
            }
            table.extend_from_slice(entries);
        }
        if inverse.len() != order {
            return Err(StructuralError::InverseLength { len: inverse.len(), order });
        }
        if let Some(&e) = inverse.iter().find(|&&e| e >= order) {
            return Err(StructuralError::EntryOutOfRange { entry: e, order });
        }
        let group = FiniteGroup { order, table, inverse };
        group.check_axioms()?;
        Ok(group)
    }

    /// The cyclic group ℤ/n with element `k` standing for `k mod n`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n > 0, "cyclic group of order 0");
        let table = (0..n * n).map(|i| (i / n + i % n) % n).collect();
        let inverse = (0..n).map(|k| (n - k) % n).collect();
        FiniteGroup { order: n, table, inverse }
    }

    fn check_axioms(&self) -> Result<(), StructuralError> {
        let n = self.order;
        for x in 0..n {
            if self.mul(0, x) != x || self.mul(x, 0) != x {
                return Err(StructuralError::Identity { element: x });
            }
        }
        let mut seen = vec![false; n];
        for r in 0..n {
            seen.iter_mut().for_each(|s| *s = false);
            for c in 0..n {
                let e = self.mul(r, c);
                if seen[e] {
                    return Err(StructuralError::NotLatinRow { row: r });
                }
                seen[e] = true;
            }
        }
        for c in 0..n {
            seen.iter_mut().for_each(|s| *s = false);
            for r in 0..n {
                let e = self.mul(r, c);
                if seen[e] {
                    return Err(StructuralError::NotLatinColumn { column: c });
                }
                seen[e] = true;
            }
        }
        for x in 0..n {
            for y in 0..n {
                let xy = self.mul(x, y);
                for z in 0..n {
                    if self.mul(xy, z) != self.mul(x, self.mul(y, z)) {
                        return Err(StructuralError::Associativity { x, y, z });
                    }
                }
            }
        }
        for x in 0..n {
            if self.mul(x, self.inverse[x]) != 0 {
                return Err(StructuralError::Inverse { element: x });
            }
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub const fn identity(&self) -> Element {
        0
    }

    #[inline]
    pub fn mul(&self, a: Element, b: Element) -> Element {
        self.table[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: Element) -> Element {
        self.inverse[a]
    }

    pub fn cayley_rows(&self) -> impl Iterator<Item = &[Element]> {
        self.table.chunks(self.order)
    }

    pub fn inverse_table(&self) -> &[Element] {
        &self.inverse
    }
}

/// A finite group with weak-Haagerup data `(φ, R, S)`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeakHaagerupVertexData {
    group: FiniteGroup,
    dim_r: usize,
    dim_s: usize,
    r: Vec<Vec<f64>>,
    s: Vec<Vec<f64>>,
    phi: Vec<f64>,
}

impl WeakHaagerupVertexData {
    /// Wraps `(R, S)` for `group`, deriving `φ(g) = ‖R(g) − R(1)‖² + ‖S(g) + S(1)‖²`.
    ///
    /// Only shapes are checked here; the Knudby identity is checked by
    /// [`validate_vertex_data`].
    pub fn new(group: FiniteGroup, r: Vec<Vec<f64>>, s: Vec<Vec<f64>>) -> Result<Self, Error> {
        let order = group.order();
        if r.len() != order {
            return Err(Error::DimensionMismatch { what: "R rows", expected: order, found: r.len() });
        }
        if s.len() != order {
            return Err(Error::DimensionMismatch { what: "S rows", expected: order, found: s.len() });
        }
        let dim_r = r[0].len();
        let dim_s = s[0].len();
        if let Some(row) = r.iter().find(|row| row.len() != dim_r) {
            return Err(Error::DimensionMismatch { what: "R vector", expected: dim_r, found: row.len() });
        }
        if let Some(row) = s.iter().find(|row| row.len() != dim_s) {
            return Err(Error::DimensionMismatch { what: "S vector", expected: dim_s, found: row.len() });
        }
        if r.iter().chain(s.iter()).flatten().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { what: "vertex data" });
        }
        let phi = (0..order)
            .map(|g| dist_sq(&r[g], &r[0]) + add_sq(&s[g], &s[0]))
            .collect();
        Ok(WeakHaagerupVertexData { group, dim_r, dim_s, r, s, phi })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn dim_r(&self) -> usize {
        self.dim_r
    }

    pub fn dim_s(&self) -> usize {
        self.dim_s
    }

    pub fn r(&self, g: Element) -> &[f64] {
        &self.r[g]
    }

    pub fn s(&self, g: Element) -> &[f64] {
        &self.s[g]
    }

    pub fn phi(&self, g: Element) -> f64 {
        self.phi[g]
    }

    /// `φ(1)`, which equals `4‖S(x)‖²` for every `x` on valid data.
    pub fn phi_identity(&self) -> f64 {
        self.phi[0]
    }

    /// Right-hand side of the Knudby identity at `(x, y)`.
    pub fn knudby_rhs(&self, x: Element, y: Element) -> f64 {
        dist_sq(&self.r[x], &self.r[y]) + add_sq(&self.s[x], &self.s[y])
    }
}

/// One failed invariant of a vertex datum.
#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    /// `R(1) ≠ 0`.
    IdentityNotAtOrigin { norm_sq: f64 },
    /// `‖S(x)‖² ≠ φ(1)/4`.
    Sphere { element: Element, norm_sq: f64, expected: f64 },
    /// `φ(y⁻¹x)` disagrees with `‖R(x)−R(y)‖² + ‖S(x)+S(y)‖²`.
    Knudby { x: Element, y: Element, residual: f64 },
    /// `φ(x⁻¹) ≠ φ(x)`.
    Symmetry { element: Element, residual: f64 },
}

impl Violation {
    pub fn magnitude(&self) -> f64 {
        match *self {
            Violation::IdentityNotAtOrigin { norm_sq } => norm_sq,
            Violation::Sphere { norm_sq, expected, .. } => (norm_sq - expected).abs(),
            Violation::Knudby { residual, .. } | Violation::Symmetry { residual, .. } => residual,
        }
    }
}

/// Outcome of [`validate_vertex_data`]. Empty iff every invariant holds.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    /// Largest residual seen across all checks, violated or not.
    pub max_residual: f64,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `R(1) = 0`, the sphere constraint, symmetry of `φ` and the Knudby
/// identity over all pairs, each within `tol`.
pub fn validate_vertex_data(data: &WeakHaagerupVertexData, tol: f64) -> ValidationReport {
    let mut report = ValidationReport::default();
    let note = |report: &mut ValidationReport, residual: f64, v: Violation| {
        report.max_residual = report.max_residual.max(residual);
        if residual > tol {
            report.violations.push(v);
        }
    };

    let r0 = norm_sq(data.r(0));
    note(&mut report, r0, Violation::IdentityNotAtOrigin { norm_sq: r0 });

    let g = data.group();
    let expected = data.phi_identity() / 4.0;
    for x in 0..data.order() {
        let ns = norm_sq(data.s(x));
        note(&mut report, (ns - expected).abs(), Violation::Sphere { element: x, norm_sq: ns, expected });
        let residual = (data.phi(g.inv(x)) - data.phi(x)).abs();
        note(&mut report, residual, Violation::Symmetry { element: x, residual });
    }
    for x in 0..data.order() {
        for y in 0..data.order() {
            let residual = (data.knudby_rhs(x, y) - data.phi(g.mul(g.inv(y), x))).abs();
            note(&mut report, residual, Violation::Knudby { x, y, residual });
        }
    }
    report
}

/// `ψ_{n,v}(g) = e^{(φ(1) − φ(g))/n}`.
pub fn psi_vertex(data: &WeakHaagerupVertexData, n: u32, g: Element) -> f64 {
    libm::exp((data.phi_identity() - data.phi(g)) / f64::from(n))
}

/// The factorization bound `e^{φ(1)/n}` on the B₂-norm of `ψ_{n,v}`.
pub fn psi_vertex_b2_bound(data: &WeakHaagerupVertexData, n: u32) -> f64 {
    libm::exp(data.phi_identity() / f64::from(n))
}

/// Scalars shared by every per-vertex slot vector: approximation index `n`,
/// perturbation `eps` and `φ(1)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VertexKernelScalars {
    pub n: u32,
    pub eps: f64,
    pub phi1: f64,
}

impl VertexKernelScalars {
    pub fn new(n: u32, eps: f64, phi1: f64) -> Result<Self, Error> {
        if n == 0 {
            return Err(Error::InvalidParams("n must be at least 1"));
        }
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(Error::InvalidParams("eps must be positive and finite"));
        }
        Ok(VertexKernelScalars { n, eps, phi1 })
    }
}

/// Smallest `n ≥ 1` with `e^{φ(1)/n} ≤ 1 + eps`, i.e. the index from which
/// `‖ψ_{n,v}‖_{B₂} ≤ 1 + eps` is guaranteed by the factorization bound.
pub fn admissible_n(phi1: f64, eps: f64) -> u32 {
    if phi1 <= 0.0 {
        return 1;
    }
    let bound = 1.0 + eps;
    let mut n = libm::ceil(phi1 / libm::log1p(eps)).max(1.0) as u32;
    while n > 1 && libm::exp(phi1 / f64::from(n - 1)) <= bound {
        n -= 1;
    }
    while libm::exp(phi1 / f64::from(n)) > bound {
        n += 1;
    }
    n
}
