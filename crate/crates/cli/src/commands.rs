//! The audit pipelines behind each subcommand.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use graphwh::analysis::{b2_audit_phi, chi_d_profile, is_cnd, is_psd, phi_gram, CndReport, KernelMatrix};
use graphwh::group::validate_vertex_data;
use graphwh::hilbert::{alpha_beta_s_inner, expo_inner, measure_constants, slot_inner, truncated_expo_inner, ExpoVector, VertexSlots};
use graphwh::kernel::{phi_gamma_closed, proper_generator, r_gamma_dist_sq, schedule_n, tail_envelope, GraphKernel};
use graphwh::walls::{candidate_radius, HalfSpaceCensus};
use graphwh::word::{GraphProductContext, ReducedWord, DEFAULT_ENUMERATION_CAP};
use serde::Serialize;

use crate::config::{parse_word, ExperimentConfig};
use crate::error::CliError;
use crate::oracle::{all_sequences, rewrite_normal_form};
use crate::report::{word_label, word_pairs, Check, Constants, Outcome, Report};
use crate::sampling::{rng, sample_ball, unit_ball_point};

pub const CND_TOL: f64 = 1e-9;
pub const PSD_TOL: f64 = 1e-9;
pub const DIAGONAL_TOL: f64 = 1e-12;
/// Slack for comparisons that hold exactly in real arithmetic.
pub const ROUNDING_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum CommandName {
    Validate,
    Reduce,
    WallsAudit,
    KernelReport,
    InvarianceTest,
    B2Audit,
    Convergence,
}

impl CommandName {
    pub const ALL: [CommandName; 7] = [
        CommandName::Validate,
        CommandName::Reduce,
        CommandName::WallsAudit,
        CommandName::KernelReport,
        CommandName::InvarianceTest,
        CommandName::B2Audit,
        CommandName::Convergence,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CommandName::Validate => "validate",
            CommandName::Reduce => "reduce",
            CommandName::WallsAudit => "walls-audit",
            CommandName::KernelReport => "kernel-report",
            CommandName::InvarianceTest => "invariance-test",
            CommandName::B2Audit => "b2-audit",
            CommandName::Convergence => "convergence",
        }
    }

    pub fn parse(s: &str) -> Result<Self, CliError> {
        Self::ALL.into_iter().find(|c| c.as_str() == s).ok_or_else(|| CliError::UnknownCommand(s.to_string()))
    }
}

/// Runs one pipeline. CSV sidecars are written only when `out_dir` is set.
pub fn run(cfg: &ExperimentConfig, cmd: CommandName, out_dir: Option<&Path>) -> Report {
    match run_pipeline(cfg, cmd, out_dir) {
        Ok(outcome) => Report::from_outcome(cmd.as_str(), cfg.params.clone(), outcome),
        Err(e) => Report::from_error(cmd.as_str(), cfg.params.clone(), &e),
    }
}

fn run_pipeline(cfg: &ExperimentConfig, cmd: CommandName, out_dir: Option<&Path>) -> Result<Outcome, CliError> {
    let ctx = cfg.context()?;
    let mut out = Outcome::default();
    let sink = Sink { dir: out_dir, prefix: cmd.as_str() };
    match cmd {
        CommandName::Validate => validate(cfg, &ctx, &mut out)?,
        CommandName::Reduce => reduce(cfg, &ctx, &mut out)?,
        CommandName::WallsAudit => walls_audit(cfg, &ctx, &sink, &mut out)?,
        CommandName::KernelReport => kernel_report(cfg, &ctx, &sink, &mut out)?,
        CommandName::InvarianceTest => invariance_test(cfg, &ctx, &mut out)?,
        CommandName::B2Audit => b2_audit(cfg, &ctx, &sink, &mut out)?,
        CommandName::Convergence => convergence(cfg, &ctx, &sink, &mut out)?,
    }
    Ok(out)
}

struct Sink<'a> {
    dir: Option<&'a Path>,
    prefix: &'static str,
}

impl Sink<'_> {
    fn csv(&self, out: &mut Outcome, name: &str, header: &[String], rows: &[Vec<String>]) -> Result<(), CliError> {
        let Some(dir) = self.dir else { return Ok(()) };
        let path: PathBuf = dir.join(format!("{}_{name}.csv", self.prefix));
        let io = |e: csv::Error| CliError::Io(format!("{}: {e}", path.display()));
        let mut w = csv::Writer::from_path(&path).map_err(io)?;
        w.write_record(header).map_err(io)?;
        for r in rows {
            w.write_record(r).map_err(io)?;
        }
        w.flush().map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        out.artifacts.push(path.display().to_string());
        Ok(())
    }

    fn gram(&self, out: &mut Outcome, name: &str, m: &KernelMatrix, points: &[ReducedWord]) -> Result<(), CliError> {
        let header: Vec<String> = std::iter::once("word".to_string()).chain(points.iter().map(word_label)).collect();
        let rows: Vec<Vec<String>> = (0..m.dim())
            .map(|i| {
                std::iter::once(word_label(&points[i]))
                    .chain((0..m.dim()).map(|j| m.values()[(i, j)].to_string()))
                    .collect()
            })
            .collect();
        self.csv(out, name, &header, &rows)
    }
}

fn constants(ctx: &GraphProductContext, eps: f64) -> Result<Constants, CliError> {
    let mc = measure_constants(ctx.all_vertex_data(), eps)?;
    let m = ctx.graph().max_clique_size();
    Ok(Constants { a_measured: mc.a, b_measured: mc.b, m, measured_at_n: mc.n, schedule_n: schedule_n(m, mc.b, eps) })
}

fn validate(cfg: &ExperimentConfig, ctx: &GraphProductContext, out: &mut Outcome) -> Result<(), CliError> {
    let vc = &cfg.commands.validate;
    let (n, eps) = (cfg.params.n, cfg.params.eps);
    let mut violations = 0;
    let mut residual = BTreeMap::from([("axioms", 0.0f64), ("alpha_beta", 0.0), ("theta_norm", 0.0), ("alpha_avg", 0.0)]);
    let mut bump = |k: &'static str, v: f64| {
        let r = residual.get_mut(k).expect("known family");
        *r = r.max(v);
    };
    for (v, d) in ctx.all_vertex_data().iter().enumerate() {
        let rep = validate_vertex_data(d, vc.identity_tol);
        violations += rep.violations.len();
        bump("axioms", rep.max_residual);
        let slots = VertexSlots::new(d, v, n, eps)?;
        for x in 0..d.order() {
            bump("alpha_beta", (alpha_beta_s_inner(d, n, x, x) - 1.0).abs());
            let theta = slots.theta(x);
            bump("theta_norm", (slot_inner(&theta, &theta)?.sqrt() - 1.0).abs());
            bump("alpha_avg", (slots.alpha_avg(x, x) + slots.c_alpha(x, x) * slots.d_value(x) - 1.0).abs());
        }
    }
    for (family, value) in &residual {
        out.residual(family, *value);
    }
    let mut axioms = Check::at_most("vertex_data_axioms", residual["axioms"], vc.identity_tol);
    axioms.passed = violations == 0;
    out.check(axioms);
    out.check(Check::at_most("alpha_beta_pairing", residual["alpha_beta"], vc.identity_tol));
    out.check(Check::at_most("theta_unit_norm", residual["theta_norm"], vc.identity_tol));
    out.check(Check::at_most("alpha_avg_identity", residual["alpha_avg"], vc.identity_tol));
    out.detail("violations", violations);

    let mut r = rng(cfg.params.seed);
    let mut worst = 0.0f64;
    let mut worst_cross = 0.0f64;
    for _ in 0..vc.expo_pairs {
        let a = ExpoVector::new(unit_ball_point(vc.expo_dim, &mut r));
        let b = ExpoVector::new(unit_ball_point(vc.expo_dim, &mut r));
        let err = (truncated_expo_inner(&a, &b, vc.expo_order)? - expo_inner(&a, &b)?).abs();
        if err > worst {
            worst = err;
            worst_cross = 2.0 * a.base.iter().zip(&b.base).map(|(p, q)| p * q).sum::<f64>();
        }
    }
    out.residual("expo_truncation", worst);
    out.check(Check::at_most("expo_truncation", worst, vc.expo_tol));
    out.detail(
        "expo",
        serde_json::json!({
            "pairs": vc.expo_pairs, "dim": vc.expo_dim, "order": vc.expo_order,
            "max_error": worst, "cross_term_at_max": worst_cross,
        }),
    );
    Ok(())
}

#[derive(Serialize)]
struct ReducedEntry {
    input: Vec<[usize; 2]>,
    canonical: Vec<[usize; 2]>,
    length: usize,
    tail_d: usize,
    tail_positions: Vec<usize>,
}

fn reduce(cfg: &ExperimentConfig, ctx: &GraphProductContext, out: &mut Outcome) -> Result<(), CliError> {
    let rc = &cfg.commands.reduce;
    let mut entries = Vec::new();
    let mut not_idempotent = 0usize;
    for input in &rc.words {
        let w = ctx.reduce(&parse_word(input))?;
        if ctx.reduce(w.letters())? != w {
            not_idempotent += 1;
        }
        let tail = ctx.d_tail_occurrences(&w, rc.tail_d, DEFAULT_ENUMERATION_CAP)?;
        entries.push(ReducedEntry {
            input: input.clone(),
            canonical: word_pairs(&w),
            length: w.len(),
            tail_d: rc.tail_d,
            tail_positions: tail.into_iter().collect(),
        });
    }
    out.detail("words", entries);
    out.check(Check::at_most("idempotent", not_idempotent as f64, 0.0));

    let gens = ctx.generators();
    let mut checked = 0usize;
    let mut mismatches = 0usize;
    for len in 0..=rc.oracle_max_length {
        for seq in all_sequences(&gens, len) {
            checked += 1;
            if ctx.reduce(&seq)?.letters() != rewrite_normal_form(ctx, &seq).as_slice() {
                mismatches += 1;
            }
        }
    }
    out.detail("oracle_words_checked", checked);
    out.check(Check::at_most("oracle_mismatches", mismatches as f64, 0.0));

    let ball = ctx.ball(rc.metric_radius);
    let dist = distance_table(ctx, &ball)?;
    let k = ball.len();
    let mut metric_violations = 0usize;
    for i in 0..k {
        for j in 0..k {
            if dist[i][j] != dist[j][i] || (dist[i][j] == 0) != (i == j) {
                metric_violations += 1;
            }
            for l in 0..k {
                if dist[i][l] > dist[i][j] + dist[j][l] {
                    metric_violations += 1;
                }
            }
        }
    }
    out.detail("metric_ball_size", k);
    out.check(Check::at_most("metric_axiom_violations", metric_violations as f64, 0.0));

    if ctx.graph().edges().is_empty() {
        let mut bad = 0usize;
        let ball = ctx.ball(cfg.params.ball_radius);
        for w in ball.iter().filter(|w| !w.is_empty()) {
            let tail = ctx.d_tail_occurrences(w, 1, DEFAULT_ENUMERATION_CAP)?;
            if tail.into_iter().collect::<Vec<_>>() != [w.len() - 1] {
                bad += 1;
            }
        }
        out.check(Check::at_most("free_product_one_tail_is_last_letter", bad as f64, 0.0));
    }
    Ok(())
}

fn distance_table(ctx: &GraphProductContext, points: &[ReducedWord]) -> Result<Vec<Vec<usize>>, CliError> {
    points
        .iter()
        .map(|x| points.iter().map(|y| Ok(ctx.distance(x, y)?)).collect())
        .collect()
}

fn walls_audit(cfg: &ExperimentConfig, ctx: &GraphProductContext, sink: &Sink, out: &mut Outcome) -> Result<(), CliError> {
    let radius = cfg.commands.walls_audit.radius.unwrap_or(cfg.params.ball_radius);
    let ball = ctx.ball(radius);
    let mut censuses: BTreeMap<usize, HalfSpaceCensus> = BTreeMap::new();
    let mut rows = Vec::new();
    let (mut wrong, mut unstable) = (0usize, 0usize);
    for (i, x) in ball.iter().enumerate() {
        for y in &ball[i..] {
            let r = candidate_radius(ctx, x, y)?;
            for rr in [r, r + 1] {
                if let std::collections::btree_map::Entry::Vacant(e) = censuses.entry(rr) {
                    e.insert(HalfSpaceCensus::new(ctx, rr)?);
                }
            }
            let count = censuses[&r].separating(x, y)?;
            let stable = censuses[&(r + 1)].separating(x, y)? == count;
            let len = ctx.distance(x, y)?;
            wrong += usize::from(count != 2 * len);
            unstable += usize::from(!stable);
            rows.push(vec![word_label(x), word_label(y), len.to_string(), count.to_string(), r.to_string(), stable.to_string()]);
        }
    }
    out.detail("ball_radius", radius);
    out.detail("ball_size", ball.len());
    out.detail("pairs", rows.len());
    out.check(Check::at_most("wall_count_mismatches", wrong as f64, 0.0));
    out.check(Check::at_most("unstable_counts", unstable as f64, 0.0));
    let header: Vec<String> = ["x", "y", "reduced_length", "wall_count", "radius", "stable"].map(String::from).to_vec();
    sink.csv(out, "walls", &header, &rows)
}

fn cnd_checks(out: &mut Outcome, name: &str, rep: &CndReport) {
    out.residual(&format!("{name}_zero_sum"), rep.zero_sum_max.max(0.0));
    out.check(Check::at_most(&format!("{name}_zero_sum_form"), rep.zero_sum_max, CND_TOL));
    let min_eig = rep.schoenberg.iter().map(|&(_, e)| e).fold(f64::INFINITY, f64::min);
    out.check(Check::at_least(&format!("{name}_schoenberg_min_eigenvalue"), min_eig, -PSD_TOL));
    out.detail(&format!("{name}_schoenberg"), &rep.schoenberg);
}

fn kernel_report(cfg: &ExperimentConfig, ctx: &GraphProductContext, sink: &Sink, out: &mut Outcome) -> Result<(), CliError> {
    let kc = &cfg.commands.kernel_report;
    let p = &cfg.params;
    let kernel = GraphKernel::new(ctx, cfg.kernel_params()?)?;
    let c = constants(ctx, p.eps)?;
    let radius = kc.radius.unwrap_or(p.ball_radius);
    let ball = ctx.ball(radius);
    out.detail("ball_radius", radius);
    out.detail("ball_size", ball.len());

    let phi = phi_gram(ctx, p.n, ball.clone())?;
    sink.gram(out, "phi_gram", &phi, &ball)?;

    let mut invariance = 0.0f64;
    for g in &ball {
        for h in &ball {
            let closed = phi_gamma_closed(ctx, p.n, &ctx.multiply(&ctx.inverse(h)?, g)?);
            invariance = invariance.max((kernel.psi_gamma(g, h)? - closed).abs());
        }
    }
    out.residual("invariance", invariance);
    out.check(Check::at_most("psi_matches_closed_form", invariance, p.tol));

    let lengths = KernelMatrix::from_kernel(ball.clone(), |g, h| Ok(ctx.distance(g, h)? as f64))?;
    cnd_checks(out, "reduced_length", &is_cnd(&lengths, CND_TOL));
    let rdist = KernelMatrix::from_kernel(ball.clone(), |g, h| Ok(r_gamma_dist_sq(ctx, g, h)))?;
    cnd_checks(out, "r_gamma_distance", &is_cnd(&rdist, CND_TOL));

    let sample = sample_ball(ctx, kc.sample_radius, kc.sample_size, &mut rng(p.seed));
    let mut zetas = BTreeMap::new();
    for g in &sample {
        if !zetas.contains_key(g) {
            zetas.insert(g.clone(), kernel.zeta(g)?);
        }
    }
    let sigma = KernelMatrix::from_kernel(sample.clone(), |g, h| Ok(kernel.pair(&zetas[g], &zetas[h])))?;
    let diag = (0..sigma.dim()).map(|i| (sigma.values()[(i, i)] - 1.0).abs()).fold(0.0, f64::max);
    let psd = is_psd(&sigma, PSD_TOL);
    out.residual("sigma_diagonal", diag);
    out.check(Check::at_least("sigma_min_eigenvalue", psd.min_eigenvalue, -PSD_TOL));
    out.check(Check::at_most("sigma_unit_diagonal", diag, DIAGONAL_TOL));
    out.detail("sigma_sample", serde_json::json!({"size": kc.sample_size, "radius": kc.sample_radius}));

    out.detail("n_admissible_for_eps", p.n >= c.measured_at_n);
    for d in 1..=kc.tail_d_max {
        let tb = kernel.tail_factorization_bound(&ball, d)?;
        out.residual("tail_identity", tb.max_identity_residual);
        let env = tail_envelope(c.b_measured, d, c.m, p.eps);
        out.check(Check::at_most(&format!("tail_bound_d{d}_under_envelope"), tb.bound, env).observed());
    }

    let mut growth = vec![0.0f64; radius + 1];
    for g in &ball {
        growth[g.len()] = growth[g.len()].max(proper_generator(ctx, g));
    }
    out.detail("proper_generator_growth", growth);
    out.constants = Some(c);
    Ok(())
}

fn invariance_test(cfg: &ExperimentConfig, ctx: &GraphProductContext, out: &mut Outcome) -> Result<(), CliError> {
    let ic = &cfg.commands.invariance_test;
    let p = &cfg.params;
    let kernel = GraphKernel::new(ctx, cfg.kernel_params()?)?;
    let pts = sample_ball(ctx, ic.max_length, 3 * ic.pairs, &mut rng(p.seed));
    let (mut closed_res, mut left_res) = (0.0f64, 0.0f64);
    for t in pts.chunks(3) {
        let (g, h, s) = (&t[0], &t[1], &t[2]);
        let psi = kernel.psi_gamma(g, h)?;
        let closed = phi_gamma_closed(ctx, p.n, &ctx.multiply(&ctx.inverse(h)?, g)?);
        closed_res = closed_res.max((psi - closed).abs());
        let shifted = kernel.psi_gamma(&ctx.multiply(s, g)?, &ctx.multiply(s, h)?)?;
        left_res = left_res.max((shifted - psi).abs());
    }
    out.residual("invariance", closed_res);
    out.residual("left_translation", left_res);
    out.detail("pairs", ic.pairs);
    out.detail("max_length", ic.max_length);
    out.check(Check::at_most("psi_matches_closed_form", closed_res, p.tol));
    out.check(Check::at_most("left_translation_invariance", left_res, p.tol));
    Ok(())
}

fn b2_audit(cfg: &ExperimentConfig, ctx: &GraphProductContext, sink: &Sink, out: &mut Outcome) -> Result<(), CliError> {
    let bc = &cfg.commands.b2_audit;
    let p = &cfg.params;
    let c = constants(ctx, p.eps)?;
    let n = bc.n.unwrap_or(c.schedule_n);
    let grid = bc.grid.clone().unwrap_or_else(|| vec![n, 2 * n, 4 * n, 8 * n]);
    if grid.is_empty() || grid.contains(&0) || n == 0 {
        return Err(CliError::Usage("b2-audit needs n ≥ 1 and a non-empty grid of positive indices".into()));
    }
    let audit = b2_audit_phi(ctx, n, p.delta, bc.radius, &grid, bc.schur_tol, bc.iter_cap)?;
    out.check(Check::at_most("norm_at_n_within_delta", audit.primary.norm.exact, 1.0 + p.delta));
    let norms: Vec<f64> = audit.grid.iter().map(|e| e.norm.exact).collect();
    let rise = norms.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
    out.check(Check::at_most("grid_max_increase", rise, bc.schur_tol.max(ROUNDING_TOL)));
    out.check(Check::at_most("grid_final_norm", *norms.last().expect("grid is non-empty"), bc.final_bound));
    let gap = std::iter::once(&audit.primary).chain(&audit.grid).map(|e| e.norm.upper - e.norm.lower).fold(0.0, f64::max);
    out.residual("schur_gap", gap);
    out.detail(
        "audit",
        serde_json::json!({
            "n": n,
            "radius": audit.radius,
            "ball_size": audit.ball_size,
            "primary": entry_json(&audit.primary),
            "grid": audit.grid.iter().map(entry_json).collect::<Vec<_>>(),
        }),
    );
    let ball = ctx.ball(bc.radius);
    for &g in &grid {
        sink.gram(out, &format!("phi_n{g}"), &phi_gram(ctx, g, ball.clone())?, &ball)?;
    }

    if bc.chi_d_max > 0 {
        let chi = chi_d_profile(ctx, bc.chi_d_max, bc.radius, bc.schur_tol, bc.iter_cap)?;
        for (d, &norm) in chi.norms.iter().enumerate() {
            out.check(Check::at_most(&format!("chi_d{d}_under_envelope"), norm, chi.envelope_d * (d + 1) as f64).observed());
        }
        out.detail(
            "chi",
            serde_json::json!({"norms": chi.norms, "envelope_d": chi.envelope_d, "least_squares_d": chi.least_squares_d}),
        );
    }
    out.constants = Some(c);
    Ok(())
}

fn entry_json(e: &graphwh::analysis::AuditEntry) -> serde_json::Value {
    serde_json::json!({
        "n": e.n, "norm": e.norm.exact, "lower": e.norm.lower, "upper": e.norm.upper,
        "iterations": e.norm.iterations, "converged": e.norm.converged,
    })
}

fn convergence(cfg: &ExperimentConfig, ctx: &GraphProductContext, sink: &Sink, out: &mut Outcome) -> Result<(), CliError> {
    let cc = &cfg.commands.convergence;
    if cc.ns.contains(&0) {
        return Err(CliError::Usage("convergence indices must be positive".into()));
    }
    let ball = ctx.ball(cc.radius);
    let mut table: Vec<(f64, Vec<f64>, &ReducedWord)> = ball
        .iter()
        .map(|g| (proper_generator(ctx, g), cc.ns.iter().map(|&n| phi_gamma_closed(ctx, n, g)).collect(), g))
        .collect();
    let mut excess = f64::NEG_INFINITY;
    for (pg, phis, _) in &table {
        for (&n, phi) in cc.ns.iter().zip(phis) {
            excess = excess.max((phi - 1.0).abs() - pg / f64::from(n));
        }
    }
    out.check(Check::at_most("pointwise_bound_excess", excess, ROUNDING_TOL));

    table.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut rise = 0.0f64;
    for w in table.windows(2) {
        if w[1].0 > w[0].0 {
            for (a, b) in w[0].1.iter().zip(&w[1].1) {
                rise = rise.max(b - a);
            }
        }
    }
    out.check(Check::at_most("monotone_in_proper_generator", rise, ROUNDING_TOL));
    out.detail("ball_size", ball.len());
    out.detail("ns", &cc.ns);

    let header: Vec<String> = ["word", "reduced_length", "proper_generator"]
        .map(String::from)
        .into_iter()
        .chain(cc.ns.iter().map(|n| format!("phi_n{n}")))
        .collect();
    let rows: Vec<Vec<String>> = table
        .iter()
        .map(|(pg, phis, g)| {
            [word_label(g), g.len().to_string(), pg.to_string()].into_iter().chain(phis.iter().map(f64::to_string)).collect()
        })
        .collect();
    sink.csv(out, "phi", &header, &rows)
}
