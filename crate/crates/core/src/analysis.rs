//! Positivity tests and Schur-multiplier norms of finite kernel matrices.
//!
//! The Schur-multiplier norm `‖m_K‖` equals the factorization norm
//! `min max_i ‖aᵢ‖ max_j ‖b_j‖` over `K_ij = ⟨aᵢ, b_j⟩` and, by duality,
//! `max ‖D_x K D_y‖_*` over unit vectors `x, y ≥ 0`. [`schur_norm_exact`]
//! squeezes the value between these two certified bounds.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;

use crate::error::Error;
use crate::kernel::phi_gamma_closed;
use crate::word::{GraphProductContext, ReducedWord};

/// Symmetry tolerance of [`KernelMatrix`].
pub const SYMMETRY_TOL: f64 = 1e-12;
/// Schoenberg exponents used by [`is_cnd`].
pub const SCHOENBERG_TIMES: [f64; 3] = [0.1, 1.0, 10.0];
const WALSH_PROBES: usize = 64;

/// A symmetric matrix of kernel values, optionally labelled by group elements.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelMatrix {
    points: Option<Vec<ReducedWord>>,
    values: DMatrix<f64>,
}

impl KernelMatrix {
    pub fn new(points: Vec<ReducedWord>, values: DMatrix<f64>) -> Result<Self, Error> {
        if points.len() != values.nrows() {
            return Err(Error::DimensionMismatch { what: "kernel matrix", expected: points.len(), found: values.nrows() });
        }
        Self::check(&values)?;
        Ok(KernelMatrix { points: Some(points), values })
    }

    /// Unlabelled matrix.
    pub fn from_values(values: DMatrix<f64>) -> Result<Self, Error> {
        Self::check(&values)?;
        Ok(KernelMatrix { points: None, values })
    }

    /// `[k(pᵢ, p_j)]` over `points`.
    pub fn from_kernel<F>(points: Vec<ReducedWord>, mut k: F) -> Result<Self, Error>
    where
        F: FnMut(&ReducedWord, &ReducedWord) -> Result<f64, Error>,
    {
        let n = points.len();
        let mut values = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                values[(i, j)] = k(&points[i], &points[j])?;
            }
        }
        Self::new(points, values)
    }

    fn check(values: &DMatrix<f64>) -> Result<(), Error> {
        if values.nrows() != values.ncols() {
            return Err(Error::DimensionMismatch { what: "square matrix", expected: values.nrows(), found: values.ncols() });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { what: "kernel matrix" });
        }
        let asym = (&values.transpose() - values).amax();
        if asym > SYMMETRY_TOL {
            return Err(Error::NonSymmetric { asymmetry: asym });
        }
        Ok(())
    }

    pub fn points(&self) -> Option<&[ReducedWord]> {
        self.points.as_deref()
    }

    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    pub fn dim(&self) -> usize {
        self.values.nrows()
    }

    /// Entrywise `e^{−t·m}`.
    pub fn schoenberg(&self, t: f64) -> KernelMatrix {
        KernelMatrix { points: self.points.clone(), values: self.values.map(|v| libm::exp(-t * v)) }
    }
}

fn min_eigenvalue(m: &DMatrix<f64>) -> f64 {
    if m.nrows() == 0 {
        return 0.0;
    }
    let sym = (m + m.transpose()) * 0.5;
    sym.symmetric_eigenvalues().min()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PsdReport {
    pub psd: bool,
    pub min_eigenvalue: f64,
}

/// Whether the smallest eigenvalue is at least `−tol`.
pub fn is_psd(m: &KernelMatrix, tol: f64) -> PsdReport {
    let min_eigenvalue = min_eigenvalue(&m.values);
    PsdReport { psd: min_eigenvalue >= -tol, min_eigenvalue }
}

/// Both verdicts of [`is_cnd`].
#[derive(Clone, Debug, PartialEq)]
pub struct CndReport {
    /// Largest eigenvalue of the form restricted to zero-sum vectors.
    pub zero_sum_max: f64,
    pub zero_sum_cnd: bool,
    /// `(t, λ_min(e^{−t·m}))` for each Schoenberg exponent.
    pub schoenberg: Vec<(f64, f64)>,
    pub schoenberg_psd: bool,
}

impl CndReport {
    pub fn is_cnd(&self) -> bool {
        self.zero_sum_cnd && self.schoenberg_psd
    }
}

/// Orthonormal basis of the zero-sum hyperplane of `ℝⁿ` (Helmert columns).
fn zero_sum_basis(n: usize) -> DMatrix<f64> {
    let mut q = DMatrix::zeros(n, n.saturating_sub(1));
    for k in 1..n {
        let norm = libm::sqrt((k * (k + 1)) as f64);
        for i in 0..k {
            q[(i, k - 1)] = 1.0 / norm;
        }
        q[(k, k - 1)] = -(k as f64) / norm;
    }
    q
}

/// Tests conditional negative definiteness two ways: the quadratic form on
/// zero-sum vectors is at most `tol`, and `e^{−t·m}` is PSD within `tol` for
/// every `t` in [`SCHOENBERG_TIMES`].
pub fn is_cnd(m: &KernelMatrix, tol: f64) -> CndReport {
    let n = m.dim();
    let zero_sum_max = if n < 2 {
        0.0
    } else {
        let q = zero_sum_basis(n);
        let form = q.transpose() * &m.values * &q;
        -min_eigenvalue(&(-form))
    };
    let schoenberg: Vec<(f64, f64)> = SCHOENBERG_TIMES
        .iter()
        .map(|&t| (t, min_eigenvalue(&m.schoenberg(t).values)))
        .collect();
    let schoenberg_psd = schoenberg.iter().all(|&(_, e)| e >= -tol);
    CndReport { zero_sum_max, zero_sum_cnd: zero_sum_max <= tol, schoenberg, schoenberg_psd }
}

/// `(max ‖αᵢ‖)·(max ‖β_j‖)`, the norm bound of a factorization
/// `K_ij = ⟨αᵢ, β_j⟩`.
pub fn schur_norm_upper_from_factorization(alpha_norms: &[f64], beta_norms: &[f64]) -> Result<f64, Error> {
    if alpha_norms.is_empty() || beta_norms.is_empty() {
        return Err(Error::EmptyFactorization);
    }
    let max = |v: &[f64]| v.iter().copied().fold(0.0f64, f64::max);
    Ok(max(alpha_norms) * max(beta_norms))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SchurNormResult {
    /// Certified lower bound.
    pub lower: f64,
    /// Certified upper bound (norm of an explicit factorization).
    pub upper: f64,
    /// Best certified value; equals `upper`, and is within `tol` of the true
    /// norm when `converged`.
    pub exact: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn spectral_norm(m: &DMatrix<f64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.singular_values().max()
}

fn walsh(k: usize, x: usize) -> f64 {
    if (k & x).count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// `max ‖K∘A‖/‖A‖` over structured probe matrices `A`.
fn probe_lower_bound(k: &DMatrix<f64>) -> f64 {
    let (r, c) = k.shape();
    let mut best = k.amax();
    let ones = spectral_norm(k) / libm::sqrt((r * c) as f64);
    best = best.max(ones);
    let bits = usize::BITS - (r.max(c).max(1) - 1).leading_zeros();
    let span = 1usize << bits;
    for p in 1..WALSH_PROBES.min(span) {
        let a = DMatrix::from_fn(r, c, |i, j| walsh(p, i ^ j));
        let na = spectral_norm(&a);
        if na > 0.0 {
            best = best.max(spectral_norm(&k.component_mul(&a)) / na);
        }
    }
    best
}

/// Bounds obtained from the scaled matrix `D_x K D_y = UΣVᵀ`: the nuclear
/// norm is a lower bound, and `K = (D_x⁻¹UΣ^{½})(Σ^{½}VᵀD_y⁻¹)` is a
/// factorization whose row norms give the upper bound. Also returns the
/// rescaled weights `P_ii/tr P`, `Q_jj/tr Q`.
fn scaled_bounds(k: &DMatrix<f64>, x: &[f64], y: &[f64]) -> (f64, f64, Vec<f64>, Vec<f64>) {
    let (r, c) = k.shape();
    let m = DMatrix::from_fn(r, c, |i, j| x[i] * k[(i, j)] * y[j]);
    let svd = m.svd(true, true);
    let u = svd.u.expect("requested U");
    let vt = svd.v_t.expect("requested Vᵀ");
    let s = &svd.singular_values;
    let trace: f64 = s.iter().sum();
    let p: Vec<f64> = (0..r).map(|i| (0..s.len()).map(|q| u[(i, q)] * u[(i, q)] * s[q]).sum()).collect();
    let qd: Vec<f64> = (0..c).map(|j| (0..s.len()).map(|q| vt[(q, j)] * vt[(q, j)] * s[q]).sum()).collect();
    let row = p.iter().zip(x).map(|(pi, xi)| pi / (xi * xi)).fold(0.0f64, f64::max);
    let col = qd.iter().zip(y).map(|(qj, yj)| qj / (yj * yj)).fold(0.0f64, f64::max);
    let upper = libm::sqrt(row) * libm::sqrt(col);
    let (pn, qn) = if trace > 0.0 {
        (p.iter().map(|v| v / trace).collect(), qd.iter().map(|v| v / trace).collect())
    } else {
        (vec![1.0 / r as f64; r], vec![1.0 / c as f64; c])
    };
    (trace, upper, pn, qn)
}

fn max_row_norm(m: &DMatrix<f64>) -> f64 {
    m.row_iter().map(|r| r.norm()).fold(0.0, f64::max)
}

fn max_col_norm(m: &DMatrix<f64>) -> f64 {
    m.column_iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// Trivial factorizations `K = K·I` and `K = I·K`, and `K = abᵀ` when `K`
/// has rank one.
fn elementary_upper_bound(k: &DMatrix<f64>) -> f64 {
    let mut best = max_row_norm(k).min(max_col_norm(k));
    let (pi, pj) = k.iamax_full();
    let pivot = k[(pi, pj)];
    let a = k.column(pj) / pivot;
    let b = k.row(pi).transpose();
    if (&a * b.transpose() - k).amax() <= 1e-13 * pivot.abs() {
        best = best.min(a.amax() * b.amax());
    }
    best
}

fn project_psd(z: &DMatrix<f64>) -> DMatrix<f64> {
    let eig = ((z + z.transpose()) * 0.5).symmetric_eigen();
    let clipped = eig.eigenvalues.map(|v| v.max(0.0));
    &eig.eigenvectors * DMatrix::from_diagonal(&clipped) * eig.eigenvectors.transpose()
}

/// Certified bound from an approximate completion `Z ⪰ 0`: the off-diagonal
/// block `B` of `Z` satisfies `‖m_B‖ ≤ max diag Z`, and the defect `K − B`
/// factors trivially.
fn completion_certificate(k: &DMatrix<f64>, z: &DMatrix<f64>) -> f64 {
    let (r, c) = k.shape();
    let block = z.view((0, r), (r, c));
    let defect = k - block;
    z.diagonal().max() + max_row_norm(&defect).min(max_col_norm(&defect))
}

/// Alternating projections between the PSD cone and the set of block
/// matrices with off-diagonal block `K` and diagonal at most `t`. Returns the
/// best completion certificate found.
fn completion_search(k: &DMatrix<f64>, t: f64, steps: usize) -> f64 {
    let (r, c) = k.shape();
    let n = r + c;
    let mut z = DMatrix::zeros(n, n);
    for i in 0..n {
        z[(i, i)] = t;
    }
    z.view_mut((0, r), (r, c)).copy_from(k);
    z.view_mut((r, 0), (c, r)).copy_from(&k.transpose());
    let mut best = f64::INFINITY;
    for _ in 0..steps {
        let p = project_psd(&z);
        best = best.min(completion_certificate(k, &p));
        z = p;
        z.view_mut((0, r), (r, c)).copy_from(k);
        z.view_mut((r, 0), (c, r)).copy_from(&k.transpose());
        for i in 0..n {
            z[(i, i)] = z[(i, i)].min(t);
        }
    }
    best
}

/// Schur-multiplier norm of `m`, bracketed by certified bounds.
///
/// Alternates multiplicative updates of the scaling weights (each step yields
/// a dual lower bound and a factorization upper bound) and, while the gap
/// exceeds `tol`, a bisection over completions of `[[X, K], [Kᵀ, Y]] ⪰ 0`.
pub fn schur_norm_exact(m: &KernelMatrix, tol: f64, iter_cap: usize) -> SchurNormResult {
    schur_norm_of(m.values(), tol, iter_cap)
}

/// [`schur_norm_exact`] for an arbitrary real matrix.
pub fn schur_norm_of(k: &DMatrix<f64>, tol: f64, iter_cap: usize) -> SchurNormResult {
    let rows: Vec<usize> = (0..k.nrows()).filter(|&i| k.row(i).amax() > 0.0).collect();
    let cols: Vec<usize> = (0..k.ncols()).filter(|&j| k.column(j).amax() > 0.0).collect();
    if rows.is_empty() || cols.is_empty() {
        return SchurNormResult { lower: 0.0, upper: 0.0, exact: 0.0, iterations: 0, converged: true };
    }
    let k = k.select_rows(&rows).select_columns(&cols);
    let (r, c) = k.shape();
    let gap_ok = |lo: f64, hi: f64| hi - lo <= tol * hi.max(1.0);

    let mut lower = probe_lower_bound(&k);
    let mut upper = elementary_upper_bound(&k);
    let mut x = vec![1.0 / libm::sqrt(r as f64); r];
    let mut y = vec![1.0 / libm::sqrt(c as f64); c];
    let mut iterations = 0;
    let floor = 1e-12;
    while iterations < iter_cap && !gap_ok(lower, upper) {
        iterations += 1;
        let (trace, up, p, q) = scaled_bounds(&k, &x, &y);
        lower = lower.max(trace);
        upper = upper.min(up);
        for (xi, pi) in x.iter_mut().zip(&p) {
            *xi = libm::sqrt(0.5 * *xi * *xi + 0.5 * pi.max(floor));
        }
        for (yj, qj) in y.iter_mut().zip(&q) {
            *yj = libm::sqrt(0.5 * *yj * *yj + 0.5 * qj.max(floor));
        }
        let nx = libm::sqrt(x.iter().map(|v| v * v).sum());
        let ny = libm::sqrt(y.iter().map(|v| v * v).sum());
        x.iter_mut().for_each(|v| *v /= nx);
        y.iter_mut().for_each(|v| *v /= ny);
        if iterations % 50 == 0 && !gap_ok(lower, upper) {
            // Bisection over completions tightens the upper side.
            let (mut lo, mut hi) = (lower, upper);
            for _ in 0..8 {
                let mid = 0.5 * (lo + hi);
                let cert = completion_search(&k, mid, 20);
                if cert < upper {
                    upper = cert;
                }
                if cert <= mid + tol {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
        }
    }
    let upper = upper.max(lower);
    SchurNormResult { lower, upper, exact: upper, iterations, converged: gap_ok(lower, upper) }
}

/// Result of [`b2_audit_phi`] at one index `n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AuditEntry {
    pub n: u32,
    pub norm: SchurNormResult,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AuditReport {
    pub radius: usize,
    pub ball_size: usize,
    pub delta: f64,
    /// Audit at the requested `n`.
    pub primary: AuditEntry,
    /// Whether `primary.norm.exact ≤ 1 + delta`.
    pub within_delta: bool,
    pub grid: Vec<AuditEntry>,
}

/// Gram matrix `[φ_{n,Γ}(η⁻¹γ)]` over `points`.
pub fn phi_gram(ctx: &GraphProductContext, n: u32, points: Vec<ReducedWord>) -> Result<KernelMatrix, Error> {
    let mut m = KernelMatrix::from_kernel(points, |g, h| {
        Ok(phi_gamma_closed(ctx, n, &ctx.multiply(&ctx.inverse(h)?, g)?))
    })?;
    // φ is symmetric, but η⁻¹γ and γ⁻¹η can round differently.
    m.values = (&m.values + m.values.transpose()) * 0.5;
    Ok(m)
}

/// Exact Schur norm of the `φ_{n,Γ}` Gram matrix on the ball, at `n` and at
/// every index of `grid`.
pub fn b2_audit_phi(
    ctx: &GraphProductContext,
    n: u32,
    delta: f64,
    radius: usize,
    grid: &[u32],
    tol: f64,
    iter_cap: usize,
) -> Result<AuditReport, Error> {
    let ball = ctx.ball(radius);
    let entry = |n: u32| -> Result<AuditEntry, Error> {
        let m = phi_gram(ctx, n, ball.clone())?;
        Ok(AuditEntry { n, norm: schur_norm_exact(&m, tol, iter_cap) })
    };
    let primary = entry(n)?;
    let grid = grid.iter().map(|&g| entry(g)).collect::<Result<Vec<_>, _>>()?;
    Ok(AuditReport {
        radius,
        ball_size: ball.len(),
        delta,
        within_delta: primary.norm.exact <= 1.0 + delta,
        primary,
        grid,
    })
}

/// The 0/1 matrix of `{(γ, η) : |η⁻¹γ|_r = d}` on the ball.
pub fn chi_d_matrix(ctx: &GraphProductContext, d: usize, radius: usize) -> Result<KernelMatrix, Error> {
    KernelMatrix::from_kernel(ctx.ball(radius), |g, h| Ok(if ctx.distance(g, h)? == d { 1.0 } else { 0.0 }))
}

/// Schur norm of the `χ_d` pattern on the ball.
pub fn chi_d_norm_probe(ctx: &GraphProductContext, d: usize, radius: usize, tol: f64, iter_cap: usize) -> Result<SchurNormResult, Error> {
    Ok(schur_norm_exact(&chi_d_matrix(ctx, d, radius)?, tol, iter_cap))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChiProfile {
    /// `‖χ_d‖` for `d = 0..=d_max`.
    pub norms: Vec<f64>,
    /// Smallest `D` with `‖χ_d‖ ≤ D(d + 1)` for every observed `d`.
    pub envelope_d: f64,
    /// Least-squares slope of `‖χ_d‖ ≈ D(d + 1)`.
    pub least_squares_d: f64,
}

pub fn chi_d_profile(ctx: &GraphProductContext, d_max: usize, radius: usize, tol: f64, iter_cap: usize) -> Result<ChiProfile, Error> {
    let norms = (0..=d_max)
        .map(|d| Ok(chi_d_norm_probe(ctx, d, radius, tol, iter_cap)?.exact))
        .collect::<Result<Vec<f64>, Error>>()?;
    let (num, den, envelope_d) = norms.iter().enumerate().fold((0.0, 0.0, 0.0f64), |(a, b, e), (d, v)| {
        let w = (d + 1) as f64;
        (a + w * v, b + w * w, e.max(v / w))
    });
    Ok(ChiProfile { norms, envelope_d, least_squares_d: num / den })
}
