//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line with
//! its measured quantities and runtime; the process fails if any criterion
//! does.

use std::time::Instant;

use num_complex::Complex64 as C64;
use qmak_core::adversary::{attack, AttackConfig};
use qmak_core::bounds::{
    birthday_scaling, bt09_constants, check_bt09_lemma_chain, check_gen_uniformity, check_swap_contraction,
    check_vertex_and_fourier, collision_stats, n_squared_scaling, Basis, BirthdayConfig, CollisionConfig, Verdict,
};
use qmak_core::csp::{
    generate_one_bad_edge, generate_one_bad_edge_with, generate_regular_gap_instance, BadEdgeShape, GapMode,
};
use qmak_core::rng;
use qmak_core::state::{distribution, random_state, swap_reject_prob, StateProfile};
use qmak_core::verifier::{
    cond_unif_reject_exact, cond_unif_threshold, cons_reject_exact, run_verifier_exact, sample_test,
    unif_reject_exact, ExactCaps,
};
use qmak_core::{ColoringState, CspInstance, EdgeMode, TestKind, VerifierConfig};
use rand::Rng as _;

struct Outcome {
    passed: bool,
    detail: String,
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

const MODES: [EdgeMode; 3] = [EdgeMode::AsListed, EdgeMode::Symmetrized, EdgeMode::ProverOrdered];

// 1. Honest proofs of a satisfying coloring are accepted with certainty.
fn completeness() -> Outcome {
    let mut worst = 0.0f64;
    let mut rng = rng::stream(1, 0);
    for seed in 0..100u64 {
        let n = rng.random_range(2..=64);
        let k = rng.random_range(2..=4);
        let d = rng.random_range(1..=3.min(n - 1));
        let g = generate_regular_gap_instance(n, k, d, seed, GapMode::Planted).unwrap();
        let s = ColoringState::from_coloring(&g.instance, &g.hidden).unwrap();
        let cfg = VerifierConfig::bt09(MODES[seed as usize % 3]);
        let r = run_verifier_exact(&cfg, &g.instance, &[s.clone(), s], ExactCaps::default()).unwrap();
        worst = worst.max((r.acceptance - 1.0).abs());
    }
    Outcome {
        passed: worst <= 1e-9,
        detail: format!("100 instances, max |acceptance - 1| = {worst:.2e} (tol 1e-9)"),
    }
}

fn honest_cons_by_counting(inst: &CspInstance, col: &[usize], mode: EdgeMode) -> f64 {
    let sym = inst.symmetrized();
    let n = inst.n_vertices();
    let mut fires = 0usize;
    for v in 0..n {
        for w in 0..n {
            let f = match mode {
                EdgeMode::ProverOrdered => inst.violates(v, col[v], w, col[w]),
                EdgeMode::AsListed => inst.violates(v, col[v], w, col[w]) || inst.violates(w, col[w], v, col[v]),
                EdgeMode::Symmetrized => sym.violates(v, col[v], w, col[w]) || sym.violates(w, col[w], v, col[v]),
            };
            fires += f as usize;
        }
    }
    fires as f64 / (n * n) as f64
}

// 2. One-bad-edge instances: rejection c/N² from Cons only.
fn bt09_tightness() -> Outcome {
    let ns = [8usize, 16, 32, 64];
    let mut ok = true;
    let mut parts = Vec::new();
    for mode in MODES {
        for shape in [BadEdgeShape::Distinct, BadEdgeShape::SelfLoop] {
            let rep = n_squared_scaling(&ns, 3, mode, shape, 0, ExactCaps::default()).unwrap();
            let mut cs = Vec::new();
            for row in &rep.rows {
                let (inst, col) = generate_one_bad_edge_with(row.n, 3, 0, shape).unwrap();
                let counted = honest_cons_by_counting(&inst, col.colors(), mode);
                let c = counted * (row.n * row.n) as f64;
                ok &= row.swap.abs() <= 1e-12 && row.unif.abs() <= 1e-12;
                ok &= (row.cons - counted).abs() <= 1e-12 && (row.cons_enumerated - counted).abs() <= 1e-12;
                ok &= (c - c.round()).abs() < 1e-9 && (c.round() == 1.0 || c.round() == 2.0);
                cs.push(c.round());
            }
            ok &= cs.windows(2).all(|w| w[0] == w[1]);
            let xs: Vec<f64> = rep.rows.iter().map(|r| (r.n as f64).ln()).collect();
            let ys: Vec<f64> = rep.rows.iter().map(|r| r.cons.ln()).collect();
            let e = slope(&xs, &ys);
            ok &= (e + 2.0).abs() <= 0.05;
            parts.push(format!("{}/{}: c={} exp={e:.4}", mode.as_str(), shape_name(shape), cs[0]));
        }
    }
    Outcome {
        passed: ok,
        detail: parts.join(", "),
    }
}

fn shape_name(s: BadEdgeShape) -> &'static str {
    match s {
        BadEdgeShape::Distinct => "distinct",
        BadEdgeShape::SelfLoop => "self-loop",
    }
}

// 3. κ-prover Cons rejection grows like κ².
fn cd10_birthday() -> Outcome {
    let cfg = BirthdayConfig::new(256, 3, vec![2, 4, 8, 16, 32], 100_000, 0);
    let rep = birthday_scaling(&cfg, ExactCaps::default()).unwrap();
    let big: Vec<_> = rep.rows.iter().filter(|r| r.kappa >= 4).collect();
    let xs: Vec<f64> = big.iter().map(|r| (r.kappa as f64).ln()).collect();
    let ys: Vec<f64> = big.iter().map(|r| r.reject.ln()).collect();
    let e = slope(&xs, &ys);
    let two = &rep.rows[0];
    let exact = two.exact.unwrap_or(f64::NAN);
    let sigma = (exact * (1.0 - exact) / cfg.n_mc as f64).sqrt();
    let dev = (two.reject - exact).abs() / sigma;
    Outcome {
        passed: (e - 2.0).abs() <= 0.1 && dev <= 5.0,
        detail: format!(
            "N=256 K=3 frustrated={} slope={e:.4} (2 ± 0.1), κ=2 sampled {:.3e} vs exact {exact:.3e} ({dev:.2}σ, tol 5σ)",
            cfg.frustrated, two.reject
        ),
    }
}

// 4. Search never beats the soundness ceiling on unsatisfiable instances.
fn soundness_floor() -> Outcome {
    let mut worst_margin = f64::INFINITY;
    let mut violations = 0;
    let mut best_seen = 0.0f64;
    for i in 0..10u64 {
        let n = 4 + (i as usize % 5);
        let inst = if i % 2 == 0 {
            generate_one_bad_edge(n, 3, i).unwrap().0
        } else {
            generate_regular_gap_instance(n, 3, 2, i, GapMode::FrustratedCount { count: 1 + i as usize % 3 })
                .unwrap()
                .instance
        };
        let mut cfg = AttackConfig::new(VerifierConfig::bt09(EdgeMode::AsListed), 100 + i);
        cfg.restarts = 20;
        cfg.probes = 1000;
        cfg.max_iters = 200;
        let r = attack(&inst, &cfg, ExactCaps::default()).unwrap();
        let ceiling = bt09_constants(n as u64, 3).unwrap().acceptance_ceiling();
        assert_eq!(r.unsatisfiable, Some(true));
        if r.best_acceptance > ceiling {
            violations += 1;
        }
        worst_margin = worst_margin.min(ceiling - r.best_acceptance);
        best_seen = best_seen.max(r.best_acceptance);
    }
    Outcome {
        passed: violations == 0,
        detail: format!(
            "10 instances x (1000 probes + 20 restarts): {violations} above 1 - s; best acceptance {best_seen:.6}, min margin {worst_margin:.3e}"
        ),
    }
}

// 5. Lemma suites on random and near-honest inputs.
fn lemma_suites() -> Outcome {
    let trials = 10_000u64;
    let mut swap_bad = 0;
    let mut gen = [0usize; 3];
    let mut vf_bad = 0;
    let mut chain = [0usize; 3];
    for t in 0..trials {
        let n = 2 + t as usize % 7;
        let k = 2 + t as usize % 3;
        let mut rng = rng::stream(5, t);
        let a = random_state(n, k, 2 * t, &StateProfile::SparseSupport { m: 1 + t as usize % n }).unwrap();
        let col = qmak_core::Coloring((0..n).map(|_| rng.random_range(0..k)).collect());
        let eps = 10f64.powf(rng.random_range(-6.0..0.0));
        let b = random_state(n, k, 2 * t + 1, &StateProfile::PerturbedHonest { eps, coloring: col }).unwrap();
        let basis = Basis::ALL[t as usize % 4];
        swap_bad += !check_swap_contraction(&a, &b, basis).unwrap().holds as usize;
        let c1 = rng.random_range(1.0..4.0) * k as f64;
        let c2 = rng.random_range(1.0..4.0);
        for s in [&a, &b] {
            let g = check_gen_uniformity(s, t as usize % n, t as usize % k, c1, c2);
            gen[verdict_index(g.verdict)] += 1;
        }
        vf_bad += !check_vertex_and_fourier(a.alphas()).unwrap().holds as usize;
        vf_bad += !check_vertex_and_fourier(b.alphas()).unwrap().holds as usize;
    }
    for t in 0..trials {
        let n = 3 + t as usize % 6;
        let mut rng = rng::stream(6, t);
        let (inst, col) = if t % 2 == 0 {
            generate_one_bad_edge(n, 3, t).unwrap()
        } else {
            let g = generate_regular_gap_instance(n, 3, 2, t, GapMode::Planted).unwrap();
            (g.instance, g.hidden)
        };
        let eps = 10f64.powf(rng.random_range(-9.0..-1.0));
        let p = StateProfile::PerturbedHonest { eps, coloring: col };
        let s1 = random_state(n, 3, 3 * t, &p).unwrap();
        let s2 = random_state(n, 3, 3 * t + 1, &p).unwrap();
        let r = check_bt09_lemma_chain(&inst, &s1, &s2).unwrap();
        for imp in r.implications() {
            chain[verdict_index(imp.verdict)] += 1;
        }
    }
    let passed = swap_bad == 0 && gen[2] == 0 && vf_bad == 0 && chain[2] == 0 && gen[1] > 0 && chain[1] > 0;
    Outcome {
        passed,
        detail: format!(
            "{trials} trials each: swap-contraction violations {swap_bad}; gen-uniformity vacuous/confirmed/violated {}/{}/{}; vertex-and-Fourier violations {vf_bad}; chain vacuous/confirmed/violated {}/{}/{}",
            gen[0], gen[1], gen[2], chain[0], chain[1], chain[2]
        ),
    }
}

fn verdict_index(v: Verdict) -> usize {
    match v {
        Verdict::Vacuous => 0,
        Verdict::Confirmed => 1,
        Verdict::Violation => 2,
    }
}

fn pair_collision(inst: &CspInstance, p: &qmak_core::OutcomeDistribution, q: &qmak_core::OutcomeDistribution) -> f64 {
    let (n, k) = (inst.n_vertices(), inst.alphabet_size());
    let mut e = 0.0;
    for v in 0..n {
        for j in 0..k {
            for w in 0..n {
                for l in 0..k {
                    let fires = (v == w && j != l) || inst.violates(v, j, w, l) || inst.violates(w, l, v, j);
                    if fires {
                        e += p.get(v, j) * q.get(w, l);
                    }
                }
            }
        }
    }
    e
}

// 6. Second-moment bound on the number of colliding prover pairs.
fn cantelli() -> Outcome {
    let mut failures = 0;
    let mut identity_err = 0.0f64;
    let mut n_two = 0;
    for c in 0..20u64 {
        let n = [16usize, 32, 64, 128][c as usize % 4];
        let kappa = [2usize, 3, 4, 6, 8][c as usize % 5];
        let g = generate_regular_gap_instance(n, 3, 3, c, GapMode::FrustratedCount { count: (n / 16).max(1) }).unwrap();
        let eps = [0.0, 0.05, 0.2, 0.5][(c / 5) as usize % 4];
        let dists: Vec<_> = (0..kappa)
            .map(|i| {
                let p = StateProfile::PerturbedHonest {
                    eps,
                    coloring: g.hidden.clone(),
                };
                distribution(&random_state(n, 3, 1000 * c + i as u64, &p).unwrap())
            })
            .collect();
        let cfg = CollisionConfig::new(EdgeMode::AsListed, 100_000, c);
        let st = collision_stats(&g.instance, &dists, &cfg).unwrap();
        failures += !st.cantelli_holds(3.0) as usize;
        if kappa == 2 {
            n_two += 1;
            let e12 = pair_collision(&g.instance, &dists[0], &dists[1]);
            let p0 = st.p_zero_exact.unwrap_or(f64::NAN);
            identity_err = identity_err.max((p0 - (1.0 - e12)).abs());
        }
    }
    Outcome {
        passed: failures == 0 && identity_err <= 1e-12,
        detail: format!(
            "20 configs: {failures} with P[V=0] above Cantelli + 3σ; κ=2 identity max error {identity_err:.2e} over {n_two} configs (tol 1e-12)"
        ),
    }
}

fn fourier_zero_stats(s: &ColoringState) -> (f64, f64) {
    let (n, k) = (s.n(), s.k());
    let w: Vec<C64> = (0..n)
        .map(|v| s.alpha(v) * s.beta_row(v).iter().sum::<C64>() / (k as f64).sqrt())
        .collect();
    let q: f64 = w.iter().map(|x| x.norm_sqr()).sum();
    let r = w.iter().sum::<C64>().norm_sqr() / n as f64;
    (q, r)
}

fn cond_unif_brute(states: &[ColoringState], z: f64) -> f64 {
    let t = (z - 1e-9).ceil().max(0.0) as usize;
    let stats: Vec<(f64, f64)> = states.iter().map(fourier_zero_stats).collect();
    let kappa = states.len();
    let mut accept = 0.0;
    for code in 0..3usize.pow(kappa as u32) {
        let (mut c, mut p, mut good, mut bad) = (code, 1.0, 0, false);
        for &(q, r) in &stats {
            match c % 3 {
                0 => {
                    p *= r;
                    good += 1;
                }
                1 => {
                    p *= q - r;
                    bad = true;
                }
                _ => p *= 1.0 - q,
            }
            c /= 3;
        }
        if !bad && good >= t {
            accept += p;
        }
    }
    1.0 - accept
}

// 7. Samplers agree with exact evaluators; the CondUnif DP with brute force.
fn exact_vs_sampled() -> Outcome {
    let samples = 100_000u64;
    let caps = ExactCaps::default();
    let mut worst = 0.0f64;
    let mut fails = 0;
    for f in 0..100u64 {
        let mut rng = rng::stream(7, f);
        let n = rng.random_range(3..=6);
        let k = rng.random_range(2..=4);
        let kappa = rng.random_range(2..=4);
        let g = generate_regular_gap_instance(n, k, 2, f, GapMode::Frustrated { rate: 0.3 }).unwrap();
        let states: Vec<_> = (0..kappa)
            .map(|i| {
                let p = match (f + i as u64) % 3 {
                    0 => StateProfile::Haar,
                    1 => StateProfile::SparseSupport { m: 1 + i % n },
                    _ => StateProfile::PerturbedHonest {
                        eps: 0.3,
                        coloring: g.hidden.clone(),
                    },
                };
                random_state(n, k, 100 * f + i as u64, &p).unwrap()
            })
            .collect();
        let mode = MODES[f as usize % 3];
        let z = rng.random_range(0.0..=kappa as f64);
        let u: Vec<f64> = states[..2].iter().map(unif_reject_exact).collect();
        let exact = [
            (TestKind::Swap, swap_reject_prob(&states[0], &states[1]).unwrap()),
            (TestKind::Unif, 1.0 - (1.0 - u[0]) * (1.0 - u[1])),
            (TestKind::CondUnif, cond_unif_reject_exact(&states, z).unwrap()),
            (TestKind::Cons, cons_reject_exact(&g.instance, &states, mode, caps).unwrap()),
        ];
        for (i, (test, p)) in exact.into_iter().enumerate() {
            let used: &[ColoringState] = if matches!(test, TestKind::Swap | TestKind::Unif) { &states[..2] } else { &states };
            let r = sample_test(test, &g.instance, used, mode, z, samples, 10 * f + i as u64, caps).unwrap();
            let s = r.sampled_reject.unwrap();
            let sigma = (p.clamp(0.0, 1.0) * (1.0 - p.clamp(0.0, 1.0)) / samples as f64).sqrt();
            let dev = if sigma > 0.0 { (s - p).abs() / sigma } else if s == p { 0.0 } else { f64::INFINITY };
            worst = worst.max(dev);
            fails += (dev > 5.0) as usize;
        }
    }
    let mut dp_err = 0.0f64;
    for kappa in 1..=10usize {
        for rep in 0..5u64 {
            let n = 2 + rep as usize;
            let states: Vec<_> = (0..kappa)
                .map(|i| {
                    let p = if i % 2 == 0 { StateProfile::Haar } else { StateProfile::SparseSupport { m: 1 } };
                    random_state(n, 3, 37 * kappa as u64 + 7 * rep + i as u64, &p).unwrap()
                })
                .collect();
            for z in [0.0, 1.0, kappa as f64 / 3.0, 0.99 * kappa as f64, kappa as f64] {
                let dp = cond_unif_reject_exact(&states, z).unwrap();
                dp_err = dp_err.max((dp - cond_unif_brute(&states, z)).abs());
                assert!(cond_unif_threshold(z) <= kappa);
            }
        }
    }
    Outcome {
        passed: fails == 0 && dp_err <= 1e-12,
        detail: format!(
            "400 comparisons at 1e5 samples: max deviation {worst:.2}σ, {fails} beyond 5σ; CondUnif DP vs 3^κ brute force (κ ≤ 10) max error {dp_err:.2e}"
        ),
    }
}

type Criterion = (&'static str, f64, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 7] = [
        ("two-prover completeness", 10.0, completeness),
        ("two-prover tightness c/N^2", 30.0, bt09_tightness),
        ("kappa-prover birthday scaling", 300.0, cd10_birthday),
        ("soundness floor under search", 600.0, soundness_floor),
        ("lemma property suites", 120.0, lemma_suites),
        ("Cantelli second-moment bound", 120.0, cantelli),
        ("exact vs sampled agreement", 180.0, exact_vs_sampled),
    ];
    let mut all = true;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let out = run();
        let secs = t.elapsed().as_secs_f64();
        let passed = out.passed && secs < *budget;
        all &= passed;
        println!(
            "criterion {}: {} {name}: {} [{secs:.1}s, budget {budget:.0}s]",
            i + 1,
            if passed { "PASS" } else { "FAIL" },
            out.detail
        );
    }
    if !all {
        std::process::exit(1);
    }
}
