use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use qmak_core::csp::{generate_one_bad_edge, generate_regular_gap_instance, GapMode};
use qmak_core::{io, CspInstance};
use serde_json::Value;

fn qmak(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qmak"))
        .args(args)
        .current_dir(dir)
        .env_remove("QMAK_ENUM_CAP")
        .env_remove("QMAK_SAMPLE_CAP")
        .output()
        .expect("spawn qmak")
}

fn write_instance(dir: &Path, inst: &CspInstance) -> PathBuf {
    let p = dir.join("instance.json");
    std::fs::write(&p, serde_json::to_string(&io::instance_to_value(inst)).unwrap()).unwrap();
    p
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn planted(dir: &Path) -> PathBuf {
    let g = generate_regular_gap_instance(6, 3, 2, 4, GapMode::Planted).unwrap();
    let p = write_instance(dir, &g.instance);
    std::fs::write(dir.join("col.json"), io::coloring_to_value(&g.hidden).to_string()).unwrap();
    p
}

#[test]
fn honest_proofs_are_accepted() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    planted(d);
    let o = qmak(&["honest", "instance.json", "--coloring", "col.json", "--out", "h"], d);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let o = qmak(
        &["simulate", "instance.json", "h/proof_0.json", "h/proof_1.json", "--samples", "20000", "--out", "s"],
        d,
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r = read_json(&d.join("s/report.json"));
    assert_eq!(r["acceptance"], Value::from(1.0));
    assert_eq!(r["exact"]["acceptance"], Value::from(1.0));
    assert_eq!(r["sampled"]["overall"]["sampled_reject"], Value::from(0.0));
    let csv = std::fs::read_to_string(d.join("s/report.csv")).unwrap();
    assert_eq!(csv.lines().nth(1), Some("N,K,kappa,test,exact,sampled,stderr,seed"));
    assert!(csv.contains(",Overall,0,0,0,0"));
    let m = read_json(&d.join("s/manifest.json"));
    assert_eq!(m["command"], "simulate");
    assert_eq!(m["inputs"].as_array().unwrap().len(), 3);
    assert_eq!(m["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn missing_proof_file_is_an_input_error() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    planted(d);
    let o = qmak(&["simulate", "instance.json", "nope_0.json", "nope_1.json"], d);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("nope_0.json"));
    assert!(!d.join("qmak-out").exists());
}

#[test]
fn sampled_runs_are_reproducible() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    let (inst, col) = generate_one_bad_edge(5, 3, 1).unwrap();
    write_instance(d, &inst);
    std::fs::write(d.join("col.json"), io::coloring_to_value(&col).to_string()).unwrap();
    assert!(qmak(&["honest", "instance.json", "--coloring", "col.json", "--out", "h"], d).status.success());
    let run = |out: &str| {
        let o = qmak(
            &["simulate", "instance.json", "h/proof_0.json", "h/proof_1.json", "--samples", "100000", "--seed", "7", "--out", out],
            d,
        );
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    };
    run("a");
    let first: Vec<Vec<u8>> = ["manifest.json", "report.json", "report.csv"]
        .iter()
        .map(|f| std::fs::read(d.join("a").join(f)).unwrap())
        .collect();
    run("a");
    for (f, bytes) in ["manifest.json", "report.json", "report.csv"].iter().zip(&first) {
        assert_eq!(&std::fs::read(d.join("a").join(f)).unwrap(), bytes, "{f} changed");
    }
    let r = read_json(&d.join("a/report.json"));
    assert!(r["sampled"]["overall"]["consistent"].as_bool().unwrap());
}

#[test]
fn bounds_n10_k3() {
    let tmp = tempfile::tempdir().unwrap();
    let o = qmak(&["bounds", "--n", "10", "--k", "3", "--out", "b"], tmp.path());
    assert!(o.status.success());
    let v = read_json(&tmp.path().join("b/constants.json"));
    let (n, k) = (10u128, 3u128);
    let delta = 2 * 1600 * 1600 * k.pow(4) * n * n;
    let nu = 64 * k * n * n;
    assert_eq!(v["constants"]["delta"]["exact"], format!("1/{delta}"));
    assert_eq!(v["constants"]["mu"]["exact"], format!("1/{}", delta / 2));
    assert_eq!(v["constants"]["nu"]["exact"], format!("1/{nu}"));
    assert_eq!(v["constants"]["s"]["exact"], format!("1/{}", 3 * delta));
    let xi = v["constants"]["xi"]["float"].as_f64().unwrap();
    let want = (100.0 * 3.0 - 1.0f64).powi(2) / (2.0 * 800.0f64.powi(2) * 81.0 * 100.0);
    assert!((xi - want).abs() / want < 1e-11);
}

#[test]
fn best_oracle_coloring_is_optimal() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    let g = generate_regular_gap_instance(5, 2, 2, 3, GapMode::Frustrated { rate: 0.5 }).unwrap();
    write_instance(d, &g.instance);
    let o = qmak(&["honest", "instance.json", "--best-oracle", "--kappa", "3", "--out", "h"], d);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(d.join("h/proof_2.json").exists());
    let col = io::load_coloring(&d.join("h/coloring.json"), &g.instance).unwrap();
    let sat = |c: &[usize]| {
        g.instance
            .edges()
            .iter()
            .filter(|e| e.allows(c[e.u], c[e.v]))
            .count()
    };
    let best = (0..32usize)
        .map(|code| sat(&(0..5).map(|v| (code >> v) & 1).collect::<Vec<_>>()))
        .max()
        .unwrap();
    assert_eq!(sat(col.colors()), best);
}

#[test]
fn invalid_coloring_length_is_rejected() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    planted(d);
    std::fs::write(d.join("short.json"), r#"{"colors": [0, 1]}"#).unwrap();
    let o = qmak(&["honest", "instance.json", "--coloring", "short.json"], d);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn exhaustive_attack_respects_the_ceiling() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    let (inst, _) = generate_one_bad_edge(4, 2, 0).unwrap();
    write_instance(d, &inst);
    let o = qmak(
        &["attack", "instance.json", "--class", "classical-superposition", "--exhaustive", "--out", "a"],
        d,
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r = read_json(&d.join("a/attack.json"));
    assert_eq!(r["unsatisfiable"], Value::Bool(true));
    assert_eq!(r["floor_violated"], Value::Bool(false));
    let acc = r["best_acceptance"].as_f64().unwrap();
    assert!(acc < r["acceptance_ceiling"].as_f64().unwrap());
    assert!(acc > 0.9);
    assert!(d.join("a/best_proof_1.json").exists());
}

#[test]
fn budget_caps_refuse_with_exit_3() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    planted(d);
    assert!(qmak(&["honest", "instance.json", "--coloring", "col.json", "--out", "h"], d).status.success());
    let o = Command::new(env!("CARGO_BIN_EXE_qmak"))
        .args(["simulate", "instance.json", "h/proof_0.json", "h/proof_1.json", "--samples", "1000"])
        .current_dir(d)
        .env("QMAK_SAMPLE_CAP", "10")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    let o = Command::new(env!("CARGO_BIN_EXE_qmak"))
        .args(["honest", "instance.json", "--best-oracle"])
        .current_dir(d)
        .env("QMAK_ENUM_CAP", "100")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn arity_mismatch_is_an_input_error() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    planted(d);
    assert!(qmak(&["honest", "instance.json", "--coloring", "col.json", "--out", "h"], d).status.success());
    let o = qmak(
        &["simulate", "instance.json", "h/proof_0.json", "h/proof_1.json", "--protocol", "cd10", "--kappa", "3"],
        d,
    );
    assert_eq!(o.status.code(), Some(2));
    let o = qmak(
        &["simulate", "instance.json", "h/proof_0.json", "h/proof_1.json", "--protocol", "cd10", "--out", "c"],
        d,
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    // threshold ceil(0.66) = 1: reject iff neither prover sees Fourier color 0
    let acc = read_json(&d.join("c/report.json"))["acceptance"].as_f64().unwrap();
    assert!((acc - (1.0 - (2.0f64 / 3.0).powi(2) / 2.0)).abs() < 1e-11);
}

#[test]
fn remark_commands_emit_tables() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    let o = qmak(&["remark-bt09", "--ns", "8,16", "--edge-mode", "as-listed", "--shape", "distinct", "--out", "r"], d);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(d.join("r/remark_bt09.csv")).unwrap();
    assert!(csv.contains("16,3,2,Cons,0.0078125,,,0,as-listed,distinct"));
    let o = qmak(&["completeness", "--n", "16", "--kappas", "16,32,64", "--z-rule", "fraction:0.5", "--out", "c"], d);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let o = qmak(&["completeness", "--n", "16", "--kappas", "16,32,64", "--z-rule", "scaled", "--out", "c2"], d);
    assert_eq!(o.status.code(), Some(1));
    assert!(d.join("c2/completeness.csv").exists());
}

#[test]
fn help_documents_file_schemas() {
    let tmp = tempfile::tempdir().unwrap();
    let o = qmak(&["--help"], tmp.path());
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.contains("vertex_amp") && text.contains("alphabet_size") && text.contains("colors"));
}
