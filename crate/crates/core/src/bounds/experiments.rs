//! Scaling experiments around the tightness constructions.

use serde::Serialize;

use super::collision::{collision_stats, CollisionConfig};
use crate::csp::{
    generate_one_bad_edge_with, generate_regular_gap_instance, local_search, satisfied_fraction, BadEdgeShape,
    EdgeMode, GapMode,
};
use crate::state::{distribution, swap_reject_prob, ColoringState};
use crate::verifier::{
    cond_unif_reject_exact, cons_reject_exact, cons_reject_two, sample_test, unif_reject_exact, ExactCaps,
    TestKind,
};
use crate::{Error, Result};

/// Ordinary least squares of `log y` on `log x`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Fit {
    pub slope: f64,
    pub intercept: f64,
    pub residuals: Vec<f64>,
    pub r_squared: f64,
}

/// Least-squares line through `(x, y)`.
pub fn fit_line(xs: &[f64], ys: &[f64]) -> Result<Fit> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::contract("a fit needs at least two paired points"));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::contract("fit abscissae are all equal"));
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residuals: Vec<f64> = xs.iter().zip(ys).map(|(x, y)| y - (intercept + slope * x)).collect();
    let ss_res: f64 = residuals.iter().map(|r| r * r).sum();
    let ss_tot: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let r_squared = if ss_tot > 0.0 { 1.0 - ss_res / ss_tot } else { 1.0 };
    Ok(Fit {
        slope,
        intercept,
        residuals,
        r_squared,
    })
}

pub fn fit_loglog(xs: &[f64], ys: &[f64]) -> Result<Fit> {
    if xs.iter().chain(ys).any(|&v| !(v > 0.0)) {
        return Err(Error::contract("log-log fit needs positive values"));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    fit_line(&lx, &ly)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

pub fn all_passed(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.passed)
}

/// `c` in REJ(Cons) = c/N² for honest proofs of the one-bad-edge coloring.
pub fn expected_cons_constant(mode: EdgeMode, shape: BadEdgeShape) -> f64 {
    match (shape, mode) {
        (BadEdgeShape::SelfLoop, _) => 1.0,
        (BadEdgeShape::Distinct, EdgeMode::ProverOrdered) => 1.0,
        (BadEdgeShape::Distinct, _) => 2.0,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NSquaredRow {
    pub n: usize,
    pub m: usize,
    pub swap: f64,
    /// The composite two-state uniformity test.
    pub unif: f64,
    pub cons: f64,
    /// The same quantity by full outcome enumeration.
    pub cons_enumerated: f64,
    pub cons_times_n2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NSquaredReport {
    pub k: usize,
    pub mode: EdgeMode,
    pub shape: BadEdgeShape,
    pub seed: u64,
    pub expected_constant: f64,
    pub rows: Vec<NSquaredRow>,
    pub fit: Fit,
    pub checks: Vec<Check>,
}

/// Exact BT09 test rejections on one-bad-edge instances for each `N`, with the
/// fitted exponent of REJ(Cons) in `N`.
pub fn n_squared_scaling(
    ns: &[usize],
    k: usize,
    mode: EdgeMode,
    shape: BadEdgeShape,
    seed: u64,
    caps: ExactCaps,
) -> Result<NSquaredReport> {
    let c = expected_cons_constant(mode, shape);
    let mut rows = Vec::with_capacity(ns.len());
    let mut checks = Vec::new();
    for &n in ns {
        let (inst, col) = generate_one_bad_edge_with(n, k, seed, shape)?;
        let s = ColoringState::from_coloring(&inst, &col)?;
        let swap = swap_reject_prob(&s, &s)?;
        let u = unif_reject_exact(&s);
        let unif = 1.0 - (1.0 - u) * (1.0 - u);
        let cons = cons_reject_two(&inst, &s, &s, mode)?.total;
        let cons_enumerated = cons_reject_exact(&inst, &[s.clone(), s], mode, caps)?;
        let n2 = (n * n) as f64;
        checks.push(Check::new(format!("N={n}: Swap = 0"), swap.abs() <= 1e-12, format!("{swap:e}")));
        checks.push(Check::new(format!("N={n}: Unif = 0"), unif.abs() <= 1e-12, format!("{unif:e}")));
        checks.push(Check::new(
            format!("N={n}: Cons = {c}/N^2"),
            (cons - c / n2).abs() <= 1e-12,
            format!("{cons:e} vs {:e}", c / n2),
        ));
        checks.push(Check::new(
            format!("N={n}: closed form = enumeration"),
            (cons - cons_enumerated).abs() <= 1e-12,
            format!("{cons:e} vs {cons_enumerated:e}"),
        ));
        rows.push(NSquaredRow {
            n,
            m: inst.n_edges(),
            swap,
            unif,
            cons,
            cons_enumerated,
            cons_times_n2: cons * n2,
        });
    }
    let xs: Vec<f64> = rows.iter().map(|r| r.n as f64).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.cons).collect();
    let fit = fit_loglog(&xs, &ys)?;
    checks.push(Check::new(
        "exponent = -2 ± 0.05",
        (fit.slope + 2.0).abs() <= 0.05,
        format!("slope {:.6}", fit.slope),
    ));
    Ok(NSquaredReport {
        k,
        mode,
        shape,
        seed,
        expected_constant: c,
        rows,
        fit,
        checks,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BirthdayConfig {
    pub n: usize,
    pub k: usize,
    pub degree: usize,
    /// Number of edges that forbid the hidden coloring.
    pub frustrated: usize,
    pub kappas: Vec<usize>,
    pub n_mc: u64,
    pub seed: u64,
    pub mode: EdgeMode,
}

impl BirthdayConfig {
    pub fn new(n: usize, k: usize, kappas: Vec<usize>, n_mc: u64, seed: u64) -> Self {
        BirthdayConfig {
            n,
            k,
            degree: 3,
            frustrated: (n / 16).max(1),
            kappas,
            n_mc,
            seed,
            mode: EdgeMode::AsListed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BirthdayRow {
    pub kappa: usize,
    pub reject: f64,
    pub std_error: f64,
    pub exact: Option<f64>,
    /// `E[V]`, the expected number of firing prover pairs.
    pub pair_mean: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BirthdayReport {
    pub config: BirthdayConfig,
    pub m: usize,
    /// Edges violated by the coloring the proofs encode.
    pub violated_edges: usize,
    pub eta_upper: f64,
    pub rows: Vec<BirthdayRow>,
    /// Fit over the κ ≥ 4 points with a positive estimate.
    pub fit: Option<Fit>,
    pub checks: Vec<Check>,
}

/// Monte Carlo REJ(Cons) of κ equal honest proofs of the best coloring found
/// on a frustrated regular instance, with the fitted exponent in κ.
pub fn birthday_scaling(cfg: &BirthdayConfig, caps: ExactCaps) -> Result<BirthdayReport> {
    if cfg.kappas.iter().any(|&k| k < 2) {
        return Err(Error::contract("every κ must be at least 2"));
    }
    let g = generate_regular_gap_instance(
        cfg.n,
        cfg.k,
        cfg.degree,
        cfg.seed,
        GapMode::FrustratedCount { count: cfg.frustrated },
    )?;
    let inst = g.instance;
    let col = local_search(&inst, &g.hidden)?;
    let violated = inst.violated_edges(&col)?.len();
    let s = ColoringState::from_coloring(&inst, &col)?;
    let dist = distribution(&s);
    let mut rows = Vec::with_capacity(cfg.kappas.len());
    let mut checks = Vec::new();
    for (i, &kappa) in cfg.kappas.iter().enumerate() {
        let states = vec![s.clone(); kappa];
        let seed = cfg.seed.wrapping_add(1 + i as u64);
        let rep = sample_test(TestKind::Cons, &inst, &states, cfg.mode, 0.0, cfg.n_mc, seed, caps)?;
        let stats = collision_stats(
            &inst,
            &vec![dist.clone(); kappa],
            &CollisionConfig {
                exact_variance_cap: 0,
                ..CollisionConfig::new(cfg.mode, 1000, seed)
            },
        )?;
        if let (Some(e), Some(p), Some(se)) = (rep.exact_reject, rep.sampled_reject, rep.std_error) {
            let sigma = se.max((e * (1.0 - e) / cfg.n_mc as f64).sqrt());
            checks.push(Check::new(
                format!("kappa={kappa}: sampled within 5 sigma of exact"),
                (p - e).abs() <= 5.0 * sigma,
                format!("sampled {p:.6e}, exact {e:.6e}, sigma {sigma:.2e}"),
            ));
        }
        rows.push(BirthdayRow {
            kappa,
            reject: rep.sampled_reject.unwrap_or(0.0),
            std_error: rep.std_error.unwrap_or(0.0),
            exact: rep.exact_reject,
            pair_mean: stats.mean,
        });
    }
    let fit_rows: Vec<&BirthdayRow> = rows.iter().filter(|r| r.kappa >= 4 && r.reject > 0.0).collect();
    let fit = if fit_rows.len() >= 2 {
        let xs: Vec<f64> = fit_rows.iter().map(|r| r.kappa as f64).collect();
        let ys: Vec<f64> = fit_rows.iter().map(|r| r.reject).collect();
        Some(fit_loglog(&xs, &ys)?)
    } else {
        None
    };
    if let Some(f) = &fit {
        checks.push(Check::new(
            "kappa exponent = 2 ± 0.1",
            (f.slope - 2.0).abs() <= 0.1,
            format!("slope {:.4} over kappa >= 4", f.slope),
        ));
    }
    Ok(BirthdayReport {
        config: cfg.clone(),
        m: inst.n_edges(),
        violated_edges: violated,
        eta_upper: violated as f64 / inst.n_edges() as f64,
        rows,
        fit,
        checks,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DoublingReport {
    pub kappa: usize,
    pub small: BirthdayReport,
    pub large: BirthdayReport,
    /// REJ(N) / REJ(2N) from sampling.
    pub ratio: f64,
    pub ratio_std_error: f64,
    /// `E[V](N) / E[V](2N)`.
    pub predicted_ratio: f64,
    pub checks: Vec<Check>,
}

/// REJ(Cons) at `N` and `2N` with the frustrated edge count doubled, at a
/// fixed κ. The ratio should be 2 up to sampling error and the change in the
/// violated-edge fraction.
pub fn doubling_experiment(cfg: &BirthdayConfig, kappa: usize, caps: ExactCaps) -> Result<DoublingReport> {
    let mut small_cfg = cfg.clone();
    small_cfg.kappas = vec![kappa];
    let mut large_cfg = small_cfg.clone();
    large_cfg.n = 2 * cfg.n;
    large_cfg.frustrated = 2 * cfg.frustrated;
    let small = birthday_scaling(&small_cfg, caps)?;
    let large = birthday_scaling(&large_cfg, caps)?;
    let (a, b) = (&small.rows[0], &large.rows[0]);
    let ratio = a.reject / b.reject;
    let ratio_std_error = ratio * ((a.std_error / a.reject).powi(2) + (b.std_error / b.reject).powi(2)).sqrt();
    let predicted_ratio = a.pair_mean / b.pair_mean;
    let checks = vec![
        Check::new(
            "REJ(N)/REJ(2N) = 2 within 5 sigma",
            (ratio - 2.0).abs() <= 5.0 * ratio_std_error,
            format!("ratio {ratio:.4} ± {ratio_std_error:.4}; violated edges {} -> {}", small.violated_edges, large.violated_edges),
        ),
    ];
    Ok(DoublingReport {
        kappa,
        small,
        large,
        ratio,
        ratio_std_error,
        predicted_ratio,
        checks,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "rule", content = "c", rename_all = "kebab-case")]
pub enum ZRule {
    /// `z = 0.99 κ`.
    Literal,
    /// `z = 0.99 κ / K`.
    Scaled,
    /// `z = c κ / K`.
    Fraction(f64),
}

impl ZRule {
    pub fn z(self, kappa: usize, k: usize) -> f64 {
        let (kappa, k) = (kappa as f64, k as f64);
        match self {
            ZRule::Literal => 0.99 * kappa,
            ZRule::Scaled => 0.99 * kappa / k,
            ZRule::Fraction(c) => c * kappa / k,
        }
    }
}

impl std::str::FromStr for ZRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "literal" => Ok(ZRule::Literal),
            "scaled" => Ok(ZRule::Scaled),
            _ => s
                .strip_prefix("fraction:")
                .and_then(|c| c.parse::<f64>().ok())
                .filter(|c| (0.0..=1.0).contains(c))
                .map(ZRule::Fraction)
                .ok_or_else(|| Error::contract(format!("unknown z rule {s:?} (literal, scaled, fraction:<c in [0,1]>)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompletenessRow {
    pub kappa: usize,
    pub z: f64,
    pub cond_unif_reject: f64,
    /// Overall CD10 acceptance; Cons never fires on honest proofs of a
    /// satisfying coloring.
    pub acceptance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompletenessReport {
    pub n: usize,
    pub k: usize,
    pub rule: ZRule,
    pub seed: u64,
    pub rows: Vec<CompletenessRow>,
    /// Slope of `ln REJ(CondUnif)` against κ, when every rejection is positive.
    pub log_slope: Option<f64>,
    /// Whether the exponential-decay checks are asserted for this rule.
    pub asserted: bool,
    pub checks: Vec<Check>,
}

/// Honest-proof CD10 completeness per κ under a threshold rule, exact by the
/// CondUnif dynamic program.
pub fn completeness_curve_cd10(n: usize, k: usize, kappas: &[usize], rule: ZRule, seed: u64) -> Result<CompletenessReport> {
    if let Some(&bad) = kappas.iter().find(|&&x| x < 2) {
        return Err(Error::contract(format!("κ = {bad} below 2")));
    }
    let degree = if n > 2 { 2 } else { 1 };
    let g = generate_regular_gap_instance(n, k, degree, seed, GapMode::Planted)?;
    let sat = satisfied_fraction(&g.instance, &g.hidden)?;
    let s = ColoringState::from_coloring(&g.instance, &g.hidden)?;
    let mut rows = Vec::with_capacity(kappas.len());
    for &kappa in kappas {
        let z = rule.z(kappa, k).min(kappa as f64);
        let rej = cond_unif_reject_exact(&vec![s.clone(); kappa], z)?;
        rows.push(CompletenessRow {
            kappa,
            z,
            cond_unif_reject: rej,
            acceptance: 1.0 - rej / 2.0,
        });
    }
    let mut checks = vec![Check::new(
        "planted coloring satisfies every edge",
        sat == num_rational::Ratio::from_integer(1),
        format!("satisfied fraction {sat}"),
    )];
    let log_slope = if rows.len() >= 2 && rows.iter().all(|r| r.cond_unif_reject > 0.0) {
        let xs: Vec<f64> = rows.iter().map(|r| r.kappa as f64).collect();
        let ys: Vec<f64> = rows.iter().map(|r| r.cond_unif_reject.ln()).collect();
        Some(fit_line(&xs, &ys)?.slope)
    } else {
        None
    };
    let asserted = !matches!(rule, ZRule::Literal);
    if asserted {
        let decreasing = rows.windows(2).all(|w| w[1].cond_unif_reject < w[0].cond_unif_reject);
        checks.push(Check::new(
            "1 - acceptance decreasing in kappa",
            decreasing,
            rows.iter()
                .map(|r| format!("{}:{:.6e}", r.kappa, r.cond_unif_reject))
                .collect::<Vec<_>>()
                .join(" "),
        ));
        checks.push(Check::new(
            "log(1 - acceptance) has negative slope in kappa",
            log_slope.is_some_and(|s| s < 0.0),
            format!("{log_slope:?}"),
        ));
    }
    Ok(CompletenessReport {
        n,
        k,
        rule,
        seed,
        rows,
        log_slope,
        asserted,
        checks,
    })
}
