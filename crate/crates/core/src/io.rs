//! JSON file formats for instances, colorings and proof states.
//!
//! Instance: `{"n_vertices": N, "alphabet_size": K, "name": str,
//! "edges": [{"u": int, "v": int, "allowed": [[0|1, ...], ...]}, ...]}`.
//! Coloring: `{"colors": [int, ...]}`.
//! State: `{"n_vertices": N, "alphabet_size": K, "vertex_amp": [[re, im], ...],
//! "color_amp": [[[re, im], ...], ...]}` with `color_amp` row `v` holding
//! `β_{v,·}`.
//!
//! Loaders report the JSON-pointer location of the first offending value.

use std::path::Path;

use serde_json::{json, Map, Value};

use crate::csp::{Coloring, CspInstance, DirectedEdge};
use crate::state::{ColoringState, C64};
use crate::{Error, Result};

fn read(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| Error::parse(format!("{}:{}:{}", path.display(), e.line(), e.column()), e.to_string()))
}

fn obj<'a>(v: &'a Value, at: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| Error::parse(at, "expected an object"))
}

fn field<'a>(m: &'a Map<String, Value>, key: &str, at: &str) -> Result<&'a Value> {
    m.get(key).ok_or_else(|| Error::parse(at, format!("missing field {key:?}")))
}

fn arr<'a>(v: &'a Value, at: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| Error::parse(at, "expected an array"))
}

fn index(v: &Value, at: &str) -> Result<usize> {
    v.as_u64()
        .and_then(|x| usize::try_from(x).ok())
        .ok_or_else(|| Error::parse(at, format!("expected a non-negative integer, found {v}")))
}

fn real(v: &Value, at: &str) -> Result<f64> {
    v.as_f64()
        .filter(|x| x.is_finite())
        .ok_or_else(|| Error::parse(at, format!("expected a finite number, found {v}")))
}

fn complex(v: &Value, at: &str) -> Result<C64> {
    if v.is_number() {
        return Ok(C64::new(real(v, at)?, 0.0));
    }
    let a = arr(v, at)?;
    if a.len() != 2 {
        return Err(Error::parse(at, "expected [re, im]"));
    }
    Ok(C64::new(real(&a[0], &format!("{at}/0"))?, real(&a[1], &format!("{at}/1"))?))
}

pub fn instance_from_value(v: &Value) -> Result<CspInstance> {
    let m = obj(v, "")?;
    let n = index(field(m, "n_vertices", "")?, "/n_vertices")?;
    let k = index(field(m, "alphabet_size", "")?, "/alphabet_size")?;
    if n == 0 {
        return Err(Error::parse("/n_vertices", "must be positive"));
    }
    if k == 0 {
        return Err(Error::parse("/alphabet_size", "must be positive"));
    }
    let name = match m.get("name") {
        None => String::new(),
        Some(x) => x
            .as_str()
            .ok_or_else(|| Error::parse("/name", "expected a string"))?
            .to_string(),
    };
    let mut edges = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (i, e) in arr(field(m, "edges", "")?, "/edges")?.iter().enumerate() {
        let at = format!("/edges/{i}");
        let em = obj(e, &at)?;
        let u = index(field(em, "u", &at)?, &format!("{at}/u"))?;
        let w = index(field(em, "v", &at)?, &format!("{at}/v"))?;
        if u >= n {
            return Err(Error::parse(format!("{at}/u"), format!("vertex {u} out of range [0, {n})")));
        }
        if w >= n {
            return Err(Error::parse(format!("{at}/v"), format!("vertex {w} out of range [0, {n})")));
        }
        if !seen.insert((u, w)) {
            return Err(Error::parse(&at, format!("duplicate edge ({u}, {w})")));
        }
        let rows = arr(field(em, "allowed", &at)?, &format!("{at}/allowed"))?;
        if rows.len() != k {
            return Err(Error::parse(format!("{at}/allowed"), format!("expected {k} rows, found {}", rows.len())));
        }
        let mut table = Vec::with_capacity(k);
        for (a, row) in rows.iter().enumerate() {
            let rat = format!("{at}/allowed/{a}");
            let cells = arr(row, &rat)?;
            if cells.len() != k {
                return Err(Error::parse(&rat, format!("expected {k} entries, found {}", cells.len())));
            }
            let mut r = Vec::with_capacity(k);
            for (b, c) in cells.iter().enumerate() {
                let bit = match c {
                    Value::Bool(x) => *x,
                    _ => match c.as_u64() {
                        Some(0) => false,
                        Some(1) => true,
                        _ => return Err(Error::parse(format!("{rat}/{b}"), format!("expected 0 or 1, found {c}"))),
                    },
                };
                r.push(bit);
            }
            table.push(r);
        }
        edges.push(DirectedEdge::new(u, w, table)?);
    }
    CspInstance::new(name, n, k, edges)
}

pub fn instance_to_value(inst: &CspInstance) -> Value {
    let edges: Vec<Value> = inst
        .edges()
        .iter()
        .map(|e| {
            let t: Vec<Vec<u8>> = e.table().into_iter().map(|r| r.into_iter().map(u8::from).collect()).collect();
            json!({"u": e.u, "v": e.v, "allowed": t})
        })
        .collect();
    json!({
        "name": inst.name(),
        "n_vertices": inst.n_vertices(),
        "alphabet_size": inst.alphabet_size(),
        "edges": edges,
    })
}

pub fn coloring_from_value(v: &Value) -> Result<Coloring> {
    let m = obj(v, "")?;
    let colors = arr(field(m, "colors", "")?, "/colors")?
        .iter()
        .enumerate()
        .map(|(i, c)| index(c, &format!("/colors/{i}")))
        .collect::<Result<Vec<_>>>()?;
    Ok(Coloring(colors))
}

/// Parses a coloring and checks it against `inst`.
pub fn coloring_for(v: &Value, inst: &CspInstance) -> Result<Coloring> {
    let col = coloring_from_value(v)?;
    if col.len() != inst.n_vertices() {
        return Err(Error::parse(
            "/colors",
            format!("expected {} colors, found {}", inst.n_vertices(), col.len()),
        ));
    }
    if let Some(i) = col.colors().iter().position(|&c| c >= inst.alphabet_size()) {
        return Err(Error::parse(
            format!("/colors/{i}"),
            format!("color {} out of range [0, {})", col.color(i), inst.alphabet_size()),
        ));
    }
    Ok(col)
}

pub fn coloring_to_value(col: &Coloring) -> Value {
    json!({ "colors": col.colors() })
}

pub fn state_from_value(v: &Value) -> Result<ColoringState> {
    let m = obj(v, "")?;
    let n = index(field(m, "n_vertices", "")?, "/n_vertices")?;
    let k = index(field(m, "alphabet_size", "")?, "/alphabet_size")?;
    let va = arr(field(m, "vertex_amp", "")?, "/vertex_amp")?;
    if va.len() != n {
        return Err(Error::parse("/vertex_amp", format!("expected {n} amplitudes, found {}", va.len())));
    }
    let alpha = va
        .iter()
        .enumerate()
        .map(|(i, x)| complex(x, &format!("/vertex_amp/{i}")))
        .collect::<Result<Vec<_>>>()?;
    let ca = arr(field(m, "color_amp", "")?, "/color_amp")?;
    if ca.len() != n {
        return Err(Error::parse("/color_amp", format!("expected {n} rows, found {}", ca.len())));
    }
    let mut rows = Vec::with_capacity(n);
    for (v, row) in ca.iter().enumerate() {
        let at = format!("/color_amp/{v}");
        let r = arr(row, &at)?;
        if r.len() != k {
            return Err(Error::parse(&at, format!("expected {k} amplitudes, found {}", r.len())));
        }
        rows.push(
            r.iter()
                .enumerate()
                .map(|(j, x)| complex(x, &format!("{at}/{j}")))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    ColoringState::new(alpha, rows)
}

pub fn state_to_value(s: &ColoringState) -> Value {
    let pair = |z: C64| json!([z.re, z.im]);
    let rows: Vec<Value> = (0..s.n())
        .map(|v| Value::Array(s.beta_row(v).iter().map(|&z| pair(z)).collect()))
        .collect();
    json!({
        "n_vertices": s.n(),
        "alphabet_size": s.k(),
        "vertex_amp": s.alphas().iter().map(|&z| pair(z)).collect::<Vec<_>>(),
        "color_amp": rows,
    })
}

fn located<T>(path: &Path, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Parse { path: p, msg } => Error::Parse {
            path: format!("{}#{}", path.display(), p),
            msg,
        },
        other => other,
    })
}

pub fn load_instance(path: &Path) -> Result<CspInstance> {
    let v = read(path)?;
    located(path, instance_from_value(&v))
}

pub fn load_coloring(path: &Path, inst: &CspInstance) -> Result<Coloring> {
    let v = read(path)?;
    located(path, coloring_for(&v, inst))
}

pub fn load_state(path: &Path) -> Result<ColoringState> {
    let v = read(path)?;
    located(path, state_from_value(&v))
}
