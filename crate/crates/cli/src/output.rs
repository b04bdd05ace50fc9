//! Output directory handling: manifest, atomic writes, number formatting.

use std::io::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Rounds to 12 significant digits.
pub fn sig12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

pub fn fmt_num(x: f64) -> String {
    let r = sig12(x);
    if r != 0.0 && (r.abs() < 1e-4 || r.abs() >= 1e15) {
        format!("{r:e}")
    } else {
        format!("{r}")
    }
}

/// Applies [`sig12`] to every non-integer number in `v`.
pub fn round_json(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(r) = n.as_f64().and_then(|x| serde_json::Number::from_f64(sig12(x))) {
                *n = r;
            }
        }
        Value::Array(xs) => xs.iter_mut().for_each(round_json),
        Value::Object(m) => m.values_mut().for_each(round_json),
        _ => {}
    }
}

#[derive(Debug, Serialize)]
pub struct InputHash {
    pub path: String,
    pub sha256: String,
}

pub fn hash_input(path: &Path) -> Result<InputHash> {
    let bytes = std::fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
    Ok(InputHash {
        path: path.display().to_string(),
        sha256: hex::encode(Sha256::digest(&bytes)),
    })
}

#[derive(Debug, Serialize)]
pub struct Manifest {
    pub command: String,
    pub config: Value,
    pub seed: Option<u64>,
    pub inputs: Vec<InputHash>,
    pub version: String,
    pub outputs: Vec<String>,
}

/// An output directory whose manifest has been written.
pub struct OutDir {
    dir: PathBuf,
}

impl OutDir {
    pub fn create(dir: &Path, manifest: &Manifest) -> Result<Self> {
        std::fs::create_dir_all(dir).with_context(|| format!("cannot create output directory {}", dir.display()))?;
        let out = OutDir { dir: dir.to_path_buf() };
        out.write_json_raw("manifest.json", &serde_json::to_value(manifest)?)?;
        Ok(out)
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    fn write_bytes(&self, name: &str, bytes: &[u8]) -> Result<()> {
        let target = self.path(name);
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)
            .with_context(|| format!("cannot create temporary file in {}", self.dir.display()))?;
        tmp.write_all(bytes)?;
        tmp.flush()?;
        tmp.persist(&target)
            .with_context(|| format!("cannot write {}", target.display()))?;
        Ok(())
    }

    /// Full-precision JSON, for data files such as proof states.
    pub fn write_json_raw(&self, name: &str, v: &Value) -> Result<()> {
        let mut text = serde_json::to_string_pretty(v)?;
        text.push('\n');
        self.write_bytes(name, text.as_bytes())
    }

    /// JSON with probabilities rounded to 12 significant digits.
    pub fn write_json<T: Serialize>(&self, name: &str, v: &T) -> Result<()> {
        let mut v = serde_json::to_value(v)?;
        round_json(&mut v);
        self.write_json_raw(name, &v)
    }

    pub fn write_csv(&self, name: &str, config: &Value, table: &CsvTable) -> Result<()> {
        let mut text = format!("# {}\n", serde_json::to_string(config)?);
        text.push_str(&table.header.join(","));
        text.push('\n');
        for row in &table.rows {
            text.push_str(&row.join(","));
            text.push('\n');
        }
        self.write_bytes(name, text.as_bytes())
    }
}

pub const SCALING_COLUMNS: [&str; 8] = ["N", "K", "kappa", "test", "exact", "sampled", "stderr", "seed"];

pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new(header: &[&str]) -> Self {
        CsvTable {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn scaling() -> Self {
        Self::new(&SCALING_COLUMNS)
    }

    #[allow(clippy::too_many_arguments)]
    pub fn push_scaling(
        &mut self,
        n: usize,
        k: usize,
        kappa: usize,
        test: &str,
        exact: Option<f64>,
        sampled: Option<f64>,
        stderr: Option<f64>,
        seed: u64,
    ) {
        let opt = |x: Option<f64>| x.map(fmt_num).unwrap_or_default();
        self.rows.push(vec![
            n.to_string(),
            k.to_string(),
            kappa.to_string(),
            test.to_string(),
            opt(exact),
            opt(sampled),
            opt(stderr),
            seed.to_string(),
        ]);
    }
}
