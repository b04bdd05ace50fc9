use std::fmt;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Result};
use serde_json::{json, Value};

use qmak_core::adversary::{attack, exhaustive_classical_attack, AttackConfig};
use qmak_core::bounds::{
    birthday_scaling, bt09_constants, completeness_curve_cd10, doubling_experiment, n_squared_scaling, BirthdayConfig,
    Check,
};
use qmak_core::csp::{satisfied_fraction, BadEdgeShape, Oracle};
use qmak_core::io;
use qmak_core::verifier::{run_verifier_exact, run_verifier_sampled, ExactCaps};
use qmak_core::{ColoringState, EdgeMode, Error, Protocol, TestKind, VerifierConfig};

use crate::output::{fmt_num, hash_input, CsvTable, InputHash, Manifest, OutDir};
use crate::{Cli, Command, VerifierArgs};

/// An experiment ran but one of its checks failed.
#[derive(Debug)]
pub struct CheckFailed(pub Vec<String>);

impl fmt::Display for CheckFailed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "check failed: {}", self.0.join("; "))
    }
}

impl std::error::Error for CheckFailed {}

#[derive(Debug)]
pub struct SampleBudget {
    pub requested: u64,
    pub cap: u64,
}

impl fmt::Display for SampleBudget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} samples requested, over the sample cap {} (raise with --sample-cap or QMAK_SAMPLE_CAP)",
            self.requested, self.cap
        )
    }
}

impl std::error::Error for SampleBudget {}

pub fn exit_code(e: &anyhow::Error) -> u8 {
    for cause in e.chain() {
        if cause.is::<CheckFailed>() {
            return 1;
        }
        if cause.is::<SampleBudget>() {
            return 3;
        }
        if let Some(Error::TooLarge { .. }) = cause.downcast_ref::<Error>() {
            return 3;
        }
    }
    2
}

fn check_samples(n: u64, cap: u64) -> Result<()> {
    if n > cap {
        return Err(SampleBudget { requested: n, cap }.into());
    }
    Ok(())
}

fn failed_checks(checks: &[Check]) -> Vec<String> {
    checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| format!("{} ({})", c.name, c.detail))
        .collect()
}

fn verdict(failed: Vec<String>) -> Result<()> {
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CheckFailed(failed).into())
    }
}

fn verifier_config(a: &VerifierArgs, k: usize, n_proofs: Option<usize>) -> Result<VerifierConfig> {
    let kappa = match a.protocol {
        Protocol::Bt09 => a.kappa.unwrap_or(2),
        Protocol::Cd10 => a
            .kappa
            .or(n_proofs)
            .ok_or_else(|| anyhow!("--kappa is required for cd10"))?,
    };
    let cfg = match a.protocol {
        Protocol::Bt09 => VerifierConfig {
            kappa,
            ..VerifierConfig::bt09(a.edge_mode)
        },
        Protocol::Cd10 => {
            let z = a.z.unwrap_or_else(|| a.z_rule.z(kappa, k).min(kappa as f64));
            VerifierConfig::cd10(kappa, z, a.edge_mode)
        }
    };
    cfg.validate()?;
    Ok(cfg)
}

struct Ctx<'a> {
    cli: &'a Cli,
    config: Value,
}

impl Ctx<'_> {
    fn caps(&self) -> ExactCaps {
        ExactCaps {
            enumeration: self.cli.enum_cap,
            ..ExactCaps::default()
        }
    }

    fn open(&self, seed: Option<u64>, inputs: &[&Path], outputs: &[String]) -> Result<OutDir> {
        let manifest = Manifest {
            command: command_name(&self.cli.command).into(),
            config: self.config.clone(),
            seed,
            inputs: inputs.iter().map(|p| hash_input(p)).collect::<Result<Vec<InputHash>>>()?,
            version: env!("CARGO_PKG_VERSION").into(),
            outputs: outputs
                .iter()
                .map(|o| self.cli.out.join(o).display().to_string())
                .collect(),
        };
        OutDir::create(&self.cli.out, &manifest)
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Simulate { .. } => "simulate",
        Command::Honest { .. } => "honest",
        Command::Attack { .. } => "attack",
        Command::Bounds { .. } => "bounds",
        Command::RemarkBt09 { .. } => "remark-bt09",
        Command::RemarkCd10 { .. } => "remark-cd10",
        Command::Completeness { .. } => "completeness",
    }
}

pub fn run(cli: &Cli) -> Result<()> {
    let mut config = serde_json::to_value(&cli.command)?;
    if let Value::Object(m) = &mut config {
        if let Some(inner) = m.remove(command_name(&cli.command)) {
            config = inner;
        }
    }
    if let Value::Object(m) = &mut config {
        m.insert("enum_cap".into(), json!(cli.enum_cap));
        m.insert("sample_cap".into(), json!(cli.sample_cap));
    }
    let ctx = Ctx { cli, config };
    match &cli.command {
        Command::Simulate {
            instance,
            proofs,
            verifier,
            samples,
            seed,
        } => simulate(&ctx, instance, proofs, verifier, *samples, *seed),
        Command::Honest {
            instance,
            coloring,
            best_oracle: _,
            kappa,
        } => honest(&ctx, instance, coloring.as_deref(), *kappa),
        Command::Attack {
            instance,
            verifier,
            class,
            exhaustive,
            restarts,
            max_iters,
            step,
            decay,
            fd_step,
            probes,
            fallback_samples,
            seed,
        } => {
            check_samples(*fallback_samples, cli.sample_cap)?;
            let inst = io::load_instance(instance)?;
            let mut cfg = AttackConfig::new(verifier_config(verifier, inst.alphabet_size(), None)?, *seed);
            cfg.class = *class;
            cfg.restarts = *restarts;
            cfg.max_iters = *max_iters;
            cfg.step = *step;
            cfg.decay = *decay;
            cfg.fd_step = *fd_step;
            cfg.probes = *probes;
            cfg.fallback_samples = *fallback_samples;
            cfg.validate()?;
            attack_cmd(&ctx, instance, &inst, &cfg, *exhaustive)
        }
        Command::Bounds { n, k } => bounds(&ctx, *n, *k),
        Command::RemarkBt09 {
            ns,
            k,
            edge_mode,
            shape,
            seed,
        } => remark_bt09(&ctx, ns, *k, *edge_mode, *shape, *seed),
        Command::RemarkCd10 {
            n,
            k,
            kappas,
            samples,
            degree,
            frustrated,
            edge_mode,
            doubling,
            seed,
        } => {
            check_samples(*samples, cli.sample_cap)?;
            let mut cfg = BirthdayConfig::new(*n, *k, kappas.clone(), *samples, *seed);
            cfg.degree = *degree;
            if let Some(f) = frustrated {
                cfg.frustrated = *f;
            }
            cfg.mode = *edge_mode;
            remark_cd10(&ctx, &cfg, *doubling)
        }
        Command::Completeness {
            n,
            k,
            kappas,
            z_rule,
            seed,
        } => {
            let report = completeness_curve_cd10(*n, *k, kappas, *z_rule, *seed)?;
            let out = ctx.open(Some(*seed), &[], &["completeness.json".into(), "completeness.csv".into()])?;
            let mut table = CsvTable::scaling();
            for r in &report.rows {
                table.push_scaling(*n, *k, r.kappa, "CondUnif", Some(r.cond_unif_reject), None, None, *seed);
            }
            out.write_json("completeness.json", &report)?;
            out.write_csv("completeness.csv", &ctx.config, &table)?;
            for r in &report.rows {
                println!(
                    "kappa {:>4}  z {:>10}  1 - acceptance {}",
                    r.kappa,
                    fmt_num(r.z),
                    fmt_num(r.cond_unif_reject / 2.0)
                );
            }
            verdict(failed_checks(&report.checks))
        }
    }
}

fn simulate(ctx: &Ctx, instance: &Path, proofs: &[PathBuf], verifier: &VerifierArgs, samples: u64, seed: u64) -> Result<()> {
    check_samples(samples, ctx.cli.sample_cap)?;
    let inst = io::load_instance(instance)?;
    let states = proofs.iter().map(|p| io::load_state(p)).collect::<qmak_core::Result<Vec<_>>>()?;
    let cfg = verifier_config(verifier, inst.alphabet_size(), Some(states.len()))?;
    let caps = ctx.caps();
    let (exact, skipped) = match run_verifier_exact(&cfg, &inst, &states, caps) {
        Ok(r) => (Some(r), None),
        Err(e @ Error::TooLarge { .. }) if samples > 0 => (None, Some(e.to_string())),
        Err(e) => return Err(e.into()),
    };
    let sampled = if samples > 0 {
        Some(run_verifier_sampled(&cfg, &inst, &states, samples, seed, caps)?)
    } else {
        None
    };
    let acceptance = match (&exact, &sampled) {
        (Some(e), _) => e.acceptance,
        (None, Some(s)) => 1.0 - s.overall.sampled_reject.unwrap_or(0.0),
        (None, None) => unreachable!("exact failures without samples return early"),
    };

    let mut inputs: Vec<&Path> = vec![instance];
    inputs.extend(proofs.iter().map(|p| p.as_path()));
    let out = ctx.open(Some(seed), &inputs, &["report.json".into(), "report.csv".into()])?;
    let (n, k) = (inst.n_vertices(), inst.alphabet_size());
    let mut table = CsvTable::scaling();
    let mut kinds: Vec<TestKind> = cfg.protocol.tests().to_vec();
    kinds.push(TestKind::Overall);
    for t in kinds {
        let e = match (&exact, t) {
            (Some(r), TestKind::Overall) => Some(1.0 - r.acceptance),
            (Some(r), t) => r.reject_of(t),
            (None, _) => None,
        };
        let s = sampled.as_ref().and_then(|s| {
            if t == TestKind::Overall {
                Some(&s.overall)
            } else {
                s.per_test.iter().find(|r| r.test == t)
            }
        });
        table.push_scaling(
            n,
            k,
            cfg.kappa,
            t.as_str(),
            e,
            s.and_then(|r| r.sampled_reject),
            s.and_then(|r| r.std_error),
            seed,
        );
    }
    let report = json!({
        "instance": {"name": inst.name(), "n_vertices": n, "alphabet_size": k, "n_edges": inst.n_edges()},
        "verifier": cfg,
        "acceptance": acceptance,
        "exact": exact,
        "exact_skipped": skipped,
        "sampled": sampled,
    });
    out.write_json("report.json", &report)?;
    out.write_csv("report.csv", &ctx.config, &table)?;
    println!("acceptance {}", fmt_num(acceptance));
    Ok(())
}

fn honest(ctx: &Ctx, instance: &Path, coloring: Option<&Path>, kappa: usize) -> Result<()> {
    if kappa == 0 {
        return Err(anyhow!("--kappa must be at least 1"));
    }
    let inst = io::load_instance(instance)?;
    let col = match coloring {
        Some(p) => io::load_coloring(p, &inst)?,
        None => Oracle::new(ctx.cli.enum_cap).best(&inst)?.coloring,
    };
    let state = ColoringState::from_coloring(&inst, &col)?;
    let sat = satisfied_fraction(&inst, &col)?;

    let mut inputs: Vec<&Path> = vec![instance];
    inputs.extend(coloring);
    let names: Vec<String> = (0..kappa).map(|i| format!("proof_{i}.json")).collect();
    let mut outputs = vec!["coloring.json".to_string()];
    outputs.extend(names.iter().cloned());
    let out = ctx.open(None, &inputs, &outputs)?;
    let mut c = io::coloring_to_value(&col);
    if let Value::Object(m) = &mut c {
        m.insert("satisfied_fraction".into(), json!(sat.to_string()));
    }
    out.write_json_raw("coloring.json", &c)?;
    let sv = io::state_to_value(&state);
    for name in &names {
        out.write_json_raw(name, &sv)?;
    }
    println!("satisfied fraction {sat}; wrote {kappa} proofs");
    Ok(())
}

fn attack_cmd(ctx: &Ctx, path: &Path, inst: &qmak_core::CspInstance, cfg: &AttackConfig, exhaustive: bool) -> Result<()> {
    let caps = ctx.caps();
    let result = if exhaustive {
        exhaustive_classical_attack(inst, cfg, caps)?
    } else {
        attack(inst, cfg, caps)?
    };
    let names: Vec<String> = (0..result.best_states.len())
        .map(|i| format!("best_proof_{i}.json"))
        .collect();
    let mut outputs = vec!["attack.json".to_string()];
    outputs.extend(names.iter().cloned());
    let out = ctx.open(Some(cfg.seed), &[path], &outputs)?;
    let mut v = serde_json::to_value(&result)?;
    if let Value::Object(m) = &mut v {
        m.remove("best_states");
        m.remove("wall_time_secs");
        m.insert("floor_violated".into(), json!(result.floor_violated()));
    }
    out.write_json("attack.json", &v)?;
    for (name, s) in names.iter().zip(&result.best_states) {
        out.write_json_raw(name, &io::state_to_value(s))?;
    }
    println!(
        "best acceptance {} (ceiling {}) in {:.1}s",
        fmt_num(result.best_acceptance),
        result.acceptance_ceiling.map(fmt_num).unwrap_or_else(|| "n/a".into()),
        result.wall_time_secs
    );
    if result.floor_violated() {
        return verdict(vec![format!(
            "acceptance {} above the soundness ceiling on an unsatisfiable instance",
            fmt_num(result.best_acceptance)
        )]);
    }
    Ok(())
}

fn bounds(ctx: &Ctx, n: u64, k: u64) -> Result<()> {
    let c = bt09_constants(n, k)?;
    let out = ctx.open(None, &[], &["constants.json".into(), "constants.csv".into()])?;
    let rows = [
        ("delta", c.delta, c.delta_f64()),
        ("mu", c.mu, c.mu_f64()),
        ("nu", c.nu, c.nu_f64()),
        ("xi", c.xi, c.xi_f64()),
        ("s", c.s, c.s_f64()),
    ];
    let mut table = CsvTable::new(&["N", "K", "constant", "exact", "float"]);
    let mut obj = serde_json::Map::new();
    for (name, exact, float) in rows {
        table.rows.push(vec![
            n.to_string(),
            k.to_string(),
            name.into(),
            exact.to_string(),
            fmt_num(float),
        ]);
        obj.insert(name.into(), json!({"exact": exact.to_string(), "float": float}));
        println!("{name:<6} {exact:<40} {}", fmt_num(float));
    }
    let v = json!({
        "n": n,
        "k": k,
        "constants": obj,
        "acceptance_ceiling": c.acceptance_ceiling(),
        "edge_cons_floor": c.edge_cons_floor().to_string(),
    });
    out.write_json("constants.json", &v)?;
    out.write_csv("constants.csv", &ctx.config, &table)?;
    Ok(())
}

fn remark_bt09(ctx: &Ctx, ns: &[usize], k: usize, mode: Option<EdgeMode>, shape: Option<BadEdgeShape>, seed: u64) -> Result<()> {
    let modes = mode.map_or_else(|| vec![EdgeMode::AsListed, EdgeMode::Symmetrized, EdgeMode::ProverOrdered], |m| vec![m]);
    let shapes = shape.map_or_else(|| vec![BadEdgeShape::Distinct, BadEdgeShape::SelfLoop], |s| vec![s]);
    let mut reports = Vec::new();
    for &m in &modes {
        for &s in &shapes {
            reports.push(n_squared_scaling(ns, k, m, s, seed, ctx.caps())?);
        }
    }
    let out = ctx.open(Some(seed), &[], &["remark_bt09.json".into(), "remark_bt09.csv".into()])?;
    let mut header = crate::output::SCALING_COLUMNS.to_vec();
    header.extend(["edge_mode", "shape"]);
    let mut table = CsvTable::new(&header);
    let mut failed = Vec::new();
    for r in &reports {
        let tag = format!("{}/{}", r.mode.as_str(), serde_json::to_value(r.shape)?.as_str().unwrap_or_default());
        for row in &r.rows {
            for (test, v) in [
                ("Swap", row.swap),
                ("Unif", row.unif),
                ("Cons", row.cons),
                ("Cons-enumerated", row.cons_enumerated),
            ] {
                let mut scratch = CsvTable::scaling();
                scratch.push_scaling(row.n, k, 2, test, Some(v), None, None, seed);
                let mut line = scratch.rows.remove(0);
                line.extend(tag.split('/').map(String::from));
                table.rows.push(line);
            }
        }
        println!(
            "{tag:<28} c = {}  exponent {}",
            fmt_num(r.expected_constant),
            fmt_num(r.fit.slope)
        );
        failed.extend(failed_checks(&r.checks).into_iter().map(|c| format!("{tag}: {c}")));
    }
    out.write_json("remark_bt09.json", &reports)?;
    out.write_csv("remark_bt09.csv", &ctx.config, &table)?;
    verdict(failed)
}

fn remark_cd10(ctx: &Ctx, cfg: &BirthdayConfig, doubling: Option<usize>) -> Result<()> {
    let caps = ctx.caps();
    let report = birthday_scaling(cfg, caps)?;
    let doubled = doubling.map(|kappa| doubling_experiment(cfg, kappa, caps)).transpose()?;
    let out = ctx.open(Some(cfg.seed), &[], &["remark_cd10.json".into(), "remark_cd10.csv".into()])?;
    let mut table = CsvTable::scaling();
    for r in &report.rows {
        table.push_scaling(cfg.n, cfg.k, r.kappa, "Cons", r.exact, Some(r.reject), Some(r.std_error), cfg.seed);
    }
    let mut failed = failed_checks(&report.checks);
    if let Some(d) = &doubled {
        let r = &d.large.rows[0];
        table.push_scaling(d.large.config.n, cfg.k, r.kappa, "Cons", r.exact, Some(r.reject), Some(r.std_error), cfg.seed);
        failed.extend(failed_checks(&d.checks));
    }
    out.write_json("remark_cd10.json", &json!({"scaling": report, "doubling": doubled}))?;
    out.write_csv("remark_cd10.csv", &ctx.config, &table)?;
    for r in &report.rows {
        println!("kappa {:>4}  REJ(Cons) {} ± {}", r.kappa, fmt_num(r.reject), fmt_num(r.std_error));
    }
    if let Some(f) = &report.fit {
        println!("kappa exponent {}", fmt_num(f.slope));
    }
    verdict(failed)
}
